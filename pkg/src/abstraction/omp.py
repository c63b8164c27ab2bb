"""
Epsilon Order-of-Magnitude Abstraction
Maps each probability P to the integer K with eps^(K+1) < P <= eps^K and
builds the kappa network of a probability network.
"""
import logging
from typing import Dict, List, Tuple

import numpy as np

from ..config import Config
from ..errors import EpsilonError, NetworkValidationError
from ..model.kappa import Kappa, normalize
from ..model.network import KappaNetwork, KappaTable, ProbNetwork

logger = logging.getLogger(__name__)


def check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise EpsilonError(f"epsilon must lie strictly between 0 and 1, got {eps!r}")
    return eps


def _within_upper(p: np.ndarray, eps: float, k: np.ndarray) -> np.ndarray:
    # p <= eps^k, with a relative slack so exact powers are not misread
    return p <= np.power(eps, k) * (1.0 + Config.EPSILON_POWER_TOLERANCE)


def kappa_array(p, eps: float) -> np.ndarray:
    """
    Vectorized stratification

    Args:
        p: Array of probabilities in [0, 1]
        eps: Stratum base in (0, 1)

    Returns:
        Float array of ranks, numpy.inf where p == 0
    """
    eps = check_epsilon(eps)
    p = np.asarray(p, dtype=float)
    if np.any(np.isnan(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("probabilities must lie in [0, 1]")

    positive = p > 0.0
    safe = np.where(positive, p, 1.0)
    k = np.maximum(np.floor(np.log(safe) / np.log(eps)), 0.0)

    # the log guess can be one off either way near a power of eps
    for _ in range(3):
        up = _within_upper(safe, eps, k + 1)
        k = np.where(up, k + 1, k)
    for _ in range(3):
        down = (~_within_upper(safe, eps, k)) & (k > 0)
        k = np.where(down, k - 1, k)

    return np.where(positive, k, np.inf)


def kappa_of(p: float, eps: float) -> Kappa:
    """Rank of a single probability; P = 0 gives INFINITY"""
    return normalize(float(kappa_array(np.array([p]), eps)[0]))


class RowShift:
    """A row whose ranks were lowered so that its minimum is 0"""

    def __init__(self, child: str, given: Tuple[str, ...], amount: int):
        self.child = child
        self.given = tuple(given)
        self.amount = amount

    def to_dict(self) -> Dict:
        return {'child': self.child, 'given': list(self.given), 'amount': self.amount}

    def __eq__(self, other) -> bool:
        return isinstance(other, RowShift) and (self.child, self.given, self.amount) == (
            other.child, other.given, other.amount)

    __hash__ = None

    def __repr__(self) -> str:
        return f"RowShift({self.child!r}, given={list(self.given)}, amount={self.amount})"


def abstract_network(pnet: ProbNetwork, eps: float) -> Tuple[KappaNetwork, List[RowShift]]:
    """
    Build the epsilon-OMP kappa network of a probability network

    Rows whose smallest rank is above 0 (possible when no entry exceeds eps)
    are shifted down and reported.

    Args:
        pnet: Probability network
        eps: Stratum base in (0, 1)

    Returns:
        (kappa network with the same structure, list of shifted rows)
    """
    eps = check_epsilon(eps)
    if not isinstance(pnet, ProbNetwork):
        raise NetworkValidationError(
            f"expected a probability network, got kind {getattr(pnet, 'kind', None)!r}", location="kind")

    tables = []
    shifts: List[RowShift] = []
    for name, table in pnet.tables.items():
        ranks = kappa_array(table.array, eps)
        minimum = ranks.min(axis=-1, keepdims=True)
        shifted = (minimum > 0)[..., 0]
        if shifted.any():
            parents = [pnet.variable(p) for p in table.parents]
            for index in np.argwhere(shifted):
                index = tuple(int(i) for i in index)
                given = tuple(parent.values[i] for parent, i in zip(parents, index))
                shifts.append(RowShift(name, given, normalize(float(minimum[index][0]))))
            logger.warning("epsilon-OMP rows shifted to minimum 0",
                           extra={"child": name, "rows": int(shifted.sum()), "eps": eps})
            ranks = ranks - np.where(shifted[..., None], minimum, 0.0)
        tables.append(KappaTable(name, table.parents, ranks))

    return KappaNetwork(pnet.structure, tables, name=pnet.name), shifts


def epsilon_omp(pnet: ProbNetwork, eps: float) -> KappaNetwork:
    return abstract_network(pnet, eps)[0]
