"""
Error-analysis networks: the binary chain and the AND gate
"""
import numpy as np

from ..model.network import NetworkStructure, ProbabilityTable, ProbNetwork, Variable
from .omp import check_epsilon

TRUE, FALSE = "true", "false"
BINARY = (TRUE, FALSE)


def _check_size(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"network size must be a positive integer, got {n!r}")
    return int(n)


def generate_chain(n: int, eps: float) -> ProbNetwork:
    """
    x1 -> x2 -> ... -> xn with P(x1) = 1 - eps, P(xi | xi-1) = 1 - eps
    and P(xi | not xi-1) = eps

    Args:
        n: Chain length
        eps: Noise level in (0, 1)

    Returns:
        Binary ProbNetwork named chain-<n>
    """
    n = _check_size(n)
    eps = check_epsilon(eps)

    names = [f"x{i}" for i in range(1, n + 1)]
    structure = NetworkStructure([Variable(name, BINARY) for name in names], list(zip(names, names[1:])))

    tables = [ProbabilityTable(names[0], (), [1.0 - eps, eps])]
    for parent, child in zip(names, names[1:]):
        tables.append(ProbabilityTable(child, (parent,), [[1.0 - eps, eps], [eps, 1.0 - eps]]))
    return ProbNetwork(structure, tables, name=f"chain-{n}")


def generate_and(n: int, eps: float) -> ProbNetwork:
    """
    Roots x1..xn with P(xi) = 1 - eps and a child y that is true exactly
    when every root is true

    Args:
        n: Fan-in
        eps: Noise level in (0, 1)

    Returns:
        Binary ProbNetwork named and-<n>
    """
    n = _check_size(n)
    eps = check_epsilon(eps)

    roots = [f"x{i}" for i in range(1, n + 1)]
    variables = [Variable(name, BINARY) for name in roots] + [Variable("y", BINARY)]
    structure = NetworkStructure(variables, [(root, "y") for root in roots])

    tables = [ProbabilityTable(root, (), [1.0 - eps, eps]) for root in roots]
    gate = np.zeros((2,) * n + (2,))
    gate[..., 1] = 1.0
    all_true = (0,) * n
    gate[all_true] = [1.0, 0.0]
    tables.append(ProbabilityTable("y", roots, gate))
    return ProbNetwork(structure, tables, name=f"and-{n}")
