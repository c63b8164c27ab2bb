"""
Exact Enumeration
Probability queries answered from the materialized joint distribution.
Serves as the baseline for the anytime algorithms.
"""
from typing import Dict, Mapping, Optional

import numpy as np

from ..errors import AssignmentError, ImpossibleConditionError, NetworkValidationError
from ..model.joint import probability_joint, selection_mask
from ..model.network import ProbNetwork, QuantifiedNetwork, check_assignment


class Query:
    """Target conjunction g and evidence e, validated against a network"""

    def __init__(self, net: QuantifiedNetwork, target: Mapping[str, str], evidence: Optional[Mapping[str, str]] = None):
        self.target = check_assignment(net, target, "target")
        self.evidence = check_assignment(net, evidence, "evidence")
        if not self.target:
            raise AssignmentError("target: query needs at least one variable")
        overlap = sorted(set(self.target) & set(self.evidence))
        if overlap:
            raise AssignmentError(f"target and evidence both assign {overlap}")

    def to_dict(self) -> Dict:
        return {'target': dict(self.target), 'evidence': dict(self.evidence)}

    def __repr__(self) -> str:
        return f"Query(target={self.target}, evidence={self.evidence})"


def require_prob(net) -> ProbNetwork:
    if not isinstance(net, ProbNetwork):
        raise NetworkValidationError(
            f"expected a probability network, got kind {getattr(net, 'kind', None)!r}", location="kind")
    return net


class ProbabilityOracle:
    """Materialized joint distribution of a probability network"""

    def __init__(self, pnet: ProbNetwork, cap: Optional[int] = None):
        self.net = require_prob(pnet)
        self.joint = probability_joint(pnet, cap)

    def probability(self, assignment: Mapping[str, str]) -> float:
        mask = selection_mask(self.net, assignment)
        return float(np.sum(np.where(mask, self.joint, 0.0)))

    def conditional(self, target: Mapping[str, str], evidence: Mapping[str, str]) -> float:
        given = self.probability(evidence)
        if given <= 0.0:
            raise ImpossibleConditionError(f"evidence {dict(evidence)} has probability 0")
        return self.probability({**evidence, **target}) / given

    def marginal_masses(self, assignment: Mapping[str, str]) -> Dict[str, np.ndarray]:
        """Unnormalized P(x = v, assignment) for every variable x and value v"""
        masked = np.where(selection_mask(self.net, assignment), self.joint, 0.0)
        masses = {}
        for axis, variable in enumerate(self.net.variables):
            others = tuple(a for a in range(masked.ndim) if a != axis)
            masses[variable.name] = masked.sum(axis=others) if others else masked
        return masses


def exact_query(pnet: ProbNetwork, target: Mapping[str, str], evidence: Optional[Mapping[str, str]] = None,
                cap: Optional[int] = None) -> float:
    """
    P(target | evidence) by enumeration of the factored joint

    Args:
        pnet: Probability network
        target: Conjunction g
        evidence: Conjunction e (may be empty)
        cap: World cap override

    Returns:
        Sum of P(w) over worlds satisfying g and e, divided by the sum over worlds satisfying e
    """
    query = Query(pnet, target, evidence)
    return ProbabilityOracle(pnet, cap).conditional(query.target, query.evidence)


def exact_marginals(pnet: ProbNetwork, evidence: Optional[Mapping[str, str]] = None,
                    cap: Optional[int] = None) -> Dict[str, Dict[str, float]]:
    """Posterior distribution of every variable given the evidence"""
    evidence = check_assignment(pnet, evidence, "evidence")
    oracle = ProbabilityOracle(pnet, cap)
    given = oracle.probability(evidence)
    if given <= 0.0:
        raise ImpossibleConditionError(f"evidence {evidence} has probability 0")
    return {
        name: {value: float(mass) / given for value, mass in zip(pnet.variable(name).values, masses)}
        for name, masses in oracle.marginal_masses(evidence).items()
    }
