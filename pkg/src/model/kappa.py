"""
Kappa arithmetic
Ranks are nonnegative integers plus INFINITY for impossible events.
"""
import math
from typing import Iterable, Union

from ..errors import ImpossibleConditionError

Kappa = Union[int, float]

INFINITY = math.inf
INFINITY_TOKEN = "inf"


def is_finite(k: Kappa) -> bool:
    return not math.isinf(k)


def normalize(k: Kappa) -> Kappa:
    """Return finite ranks as int and INFINITY as the sentinel"""
    if math.isinf(k):
        return INFINITY
    return int(k)


def kappa_sum(values: Iterable[Kappa]) -> Kappa:
    total = 0
    for k in values:
        if math.isinf(k):
            return INFINITY
        total += k
    return normalize(total)


def kappa_min(values: Iterable[Kappa]) -> Kappa:
    return normalize(min(values, default=INFINITY))


def kappa_diff(joint: Kappa, given: Kappa) -> Kappa:
    """
    Conditional rank kappa(x|y) = kappa(x, y) - kappa(y)

    Args:
        joint: kappa(x, y)
        given: kappa(y)

    Returns:
        The conditional rank
    """
    if math.isinf(given):
        raise ImpossibleConditionError("cannot condition on an event of rank INFINITY")
    if math.isinf(joint):
        return INFINITY
    return normalize(joint - given)


def parse_kappa(raw) -> Kappa:
    """Read a rank from a document value (int, integral float or 'inf')"""
    if isinstance(raw, str):
        if raw.strip().lower() in (INFINITY_TOKEN, "infinity"):
            return INFINITY
        raise ValueError(f"not a kappa value: {raw!r}")
    if isinstance(raw, bool):
        raise ValueError(f"not a kappa value: {raw!r}")
    if isinstance(raw, float) and math.isinf(raw) and raw > 0:
        return INFINITY
    if isinstance(raw, float) and not raw.is_integer():
        raise ValueError(f"kappa values must be integers, got {raw!r}")
    value = int(raw)
    if value < 0:
        raise ValueError(f"kappa values must be nonnegative, got {raw!r}")
    return value


def format_kappa(k: Kappa):
    """Document/report form of a rank"""
    return INFINITY_TOKEN if math.isinf(k) else int(k)
