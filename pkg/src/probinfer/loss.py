"""
Loss of mass
"""
from typing import Dict, Mapping

from ..config import Config
from ..errors import LossOfMassError


class LossOfMass:
    """Per-variable probability mass an approximation failed to account for"""

    def __init__(self, per_variable: Mapping[str, float]):
        self.per_variable = dict(per_variable)

    @property
    def average(self) -> float:
        if not self.per_variable:
            return 0.0
        return sum(self.per_variable.values()) / len(self.per_variable)

    def to_dict(self) -> Dict:
        return {'per_variable': dict(self.per_variable), 'average': self.average}

    def __repr__(self) -> str:
        return f"LossOfMass(average={self.average:.6g})"


def loss_of_mass(approx: Mapping[str, Mapping[str, float]]) -> LossOfMass:
    """
    1 - sum of the approximate probabilities, per variable

    Args:
        approx: variable -> (value -> approximate probability); missing values count as 0

    Returns:
        LossOfMass with per-variable losses and their average
    """
    tolerance = Config.PROB_ROW_TOLERANCE
    lost = {}
    for name, distribution in approx.items():
        for value, p in distribution.items():
            if not 0.0 <= p <= 1.0 + tolerance:
                raise LossOfMassError(f"P'({name}={value}) = {p!r} is not a probability")
        total = sum(distribution.values())
        if total > 1.0 + tolerance:
            raise LossOfMassError(f"approximate distribution of {name!r} carries mass {total:.12g} > 1")
        lost[name] = max(1.0 - total, 0.0)
    return LossOfMass(lost)
