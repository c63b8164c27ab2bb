"""
Seeded random networks for test suites and experiments
All randomness comes from the numpy Generator passed in.
"""
from typing import List, Optional

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from ..model.network import (KappaNetwork, KappaTable, NetworkStructure, ProbabilityTable, ProbNetwork,
                             Variable)

DAG, POLYTREE, CYCLIC = "dag", "polytree", "cyclic"
SHAPES = (DAG, POLYTREE, CYCLIC)


def _variables(rng: np.random.Generator, n_vars: int, max_values: int) -> List[Variable]:
    sizes = rng.integers(2, max_values + 1, size=n_vars)
    return [Variable(f"v{i}", [f"s{j}" for j in range(size)]) for i, size in enumerate(sizes)]


def _dag_edges(rng: np.random.Generator, n_vars: int, max_parents: int) -> List[tuple]:
    edges = []
    for child in range(1, n_vars):
        k = int(rng.integers(0, min(child, max_parents) + 1))
        for parent in sorted(rng.choice(child, size=k, replace=False)):
            edges.append((f"v{parent}", f"v{child}"))
    return edges


def _polytree_edges(rng: np.random.Generator, n_vars: int, max_parents: int) -> List[tuple]:
    components = UnionFind(range(n_vars))
    edges = []
    for child in range(1, n_vars):
        budget = int(rng.integers(0, min(child, max_parents) + 1))
        for parent in rng.permutation(child):
            if budget == 0:
                break
            if components[int(parent)] != components[child]:
                components.union(int(parent), child)
                edges.append((f"v{int(parent)}", f"v{child}"))
                budget -= 1
    return sorted(edges, key=lambda edge: (int(edge[1][1:]), int(edge[0][1:])))


def random_structure(rng: np.random.Generator, n_vars: int, max_values: int = 3, max_parents: int = 3,
                     shape: str = DAG, attempts: int = 200) -> NetworkStructure:
    """
    Random DAG over v0..v{n-1}; edges always point from lower to higher index

    Args:
        rng: Source of randomness
        n_vars: Number of variables
        max_values: Largest domain size (smallest is 2)
        max_parents: Largest number of parents per variable
        shape: 'dag' (anything), 'polytree' (no undirected cycle) or
            'cyclic' (at least one undirected cycle)

    Returns:
        NetworkStructure
    """
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}, expected one of {list(SHAPES)}")
    if n_vars < 1 or max_values < 2 or max_parents < 0:
        raise ValueError("need n_vars >= 1, max_values >= 2 and max_parents >= 0")
    if shape == CYCLIC and (n_vars < 3 or max_parents < 2):
        raise ValueError("a cyclic structure needs at least 3 variables and 2 parents per variable")

    variables = _variables(rng, n_vars, max_values)
    if shape == POLYTREE:
        return NetworkStructure(variables, _polytree_edges(rng, n_vars, max_parents))

    for _ in range(attempts):
        structure = NetworkStructure(variables, _dag_edges(rng, n_vars, max_parents))
        if shape == DAG or not structure.is_polytree():
            return structure
    raise ValueError(f"no cyclic structure found in {attempts} attempts")


def random_kappa_tables(rng: np.random.Generator, structure: NetworkStructure, max_rank: int = 3,
                        infinity_rate: float = 0.1, definite: bool = False) -> List[KappaTable]:
    """One random kappa table per variable; each row gets a 0 at a random position"""
    tables = []
    for variable in structure.variables:
        parents = structure.parents(variable.name)
        shape = tuple(structure.variable(p).size for p in parents) + (variable.size,)
        low = 1 if definite else 0
        ranks = rng.integers(low, max_rank + 1, size=shape).astype(float)
        ranks[rng.random(shape) < infinity_rate] = np.inf

        flat = ranks.reshape(-1, variable.size)
        zeros = rng.integers(0, variable.size, size=flat.shape[0])
        flat[np.arange(flat.shape[0]), zeros] = 0.0
        tables.append(KappaTable(variable.name, parents, flat.reshape(shape)))
    return tables


def random_probability_tables(rng: np.random.Generator, structure: NetworkStructure,
                              concentration: float = 1.0) -> List[ProbabilityTable]:
    """One table per variable with Dirichlet-distributed rows"""
    tables = []
    for variable in structure.variables:
        parents = structure.parents(variable.name)
        shape = tuple(structure.variable(p).size for p in parents) + (variable.size,)
        rows = int(np.prod(shape[:-1], dtype=int))
        array = rng.dirichlet(np.full(variable.size, concentration), size=rows)
        # renormalize so rows sum to 1 within the table tolerance
        array = array / array.sum(axis=-1, keepdims=True)
        tables.append(ProbabilityTable(variable.name, parents, array.reshape(shape)))
    return tables


def random_kappa_network(rng: np.random.Generator, n_vars: int, max_values: int = 3, max_parents: int = 3,
                         shape: str = DAG, definite: bool = False, max_rank: int = 3,
                         name: Optional[str] = None) -> KappaNetwork:
    structure = random_structure(rng, n_vars, max_values, max_parents, shape)
    return KappaNetwork(structure, random_kappa_tables(rng, structure, max_rank, definite=definite), name=name)


def random_prob_network(rng: np.random.Generator, n_vars: int, max_values: int = 3, max_parents: int = 3,
                        shape: str = DAG, concentration: float = 1.0, name: Optional[str] = None) -> ProbNetwork:
    structure = random_structure(rng, n_vars, max_values, max_parents, shape)
    return ProbNetwork(structure, random_probability_tables(rng, structure, concentration), name=name)


def network_suite(seed: int, count: int, kind: str = "kappa", min_vars: int = 2, max_vars: int = 8,
                  **kwargs) -> List:
    """
    A reproducible list of random networks

    Args:
        seed: Seed of the suite's Generator
        count: Number of networks
        kind: 'kappa' or 'prob'
        min_vars, max_vars: Range of network sizes
        **kwargs: Passed to random_kappa_network / random_prob_network

    Returns:
        Networks named <kind>-<shape>-s<seed>-<index>
    """
    if kind not in ("kappa", "prob"):
        raise ValueError(f"unknown network kind {kind!r}")
    builder = random_kappa_network if kind == "kappa" else random_prob_network
    shape = kwargs.get("shape", DAG)
    if shape == CYCLIC:
        min_vars = max(min_vars, 3)

    rng = np.random.default_rng(seed)
    suite = []
    for index in range(count):
        n_vars = int(rng.integers(min_vars, max_vars + 1))
        suite.append(builder(rng, n_vars, name=f"{kind}-{shape}-s{seed}-{index:03d}", **kwargs))
    return suite


def undirected_cycle_count(structure: NetworkStructure) -> int:
    """Number of independent undirected cycles (cyclomatic number)"""
    undirected = structure.graph.to_undirected()
    return undirected.number_of_edges() - undirected.number_of_nodes() + nx.number_connected_components(undirected)
