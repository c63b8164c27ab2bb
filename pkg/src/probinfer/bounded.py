"""
Bounded Conditioning
Cutset conditioning that evaluates instances in order of estimated weight,
skips instances ruled implausible by Predict on the epsilon-OMP, and keeps
anytime bounds on the query.
"""
import itertools
import logging
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from ..abstraction.omp import check_epsilon, epsilon_omp
from ..config import Config
from ..errors import AssignmentError, ImpossibleConditionError
from ..model.network import KappaNetwork, ProbNetwork
from ..plausibility.predict import predict
from .bounds import AnytimeBounds, TraceRecorder
from .cutset import find_cutset
from .exact import ProbabilityOracle, Query, require_prob
from .loss import LossOfMass, loss_of_mass

logger = logging.getLogger(__name__)


def stratum_estimates(knet: KappaNetwork) -> Dict[str, np.ndarray]:
    """
    Min-sum sweep estimating every marginal rank (exact on polytrees)

    Returns:
        name -> estimated kappa per value, in declaration order of the values
    """
    estimates: Dict[str, np.ndarray] = {}
    for name in knet.topological_order():
        table = knet.tables[name]
        total = table.array
        for axis, parent in enumerate(table.parents):
            shape = [1] * table.array.ndim
            shape[axis] = estimates[parent].size
            total = total + estimates[parent].reshape(shape)
        estimates[name] = total.reshape(-1, total.shape[-1]).min(axis=0)
    return estimates


class BoundedResult:
    """Outcome of a bounded-conditioning run"""

    def __init__(self, query: Query, cutset: List[str], bounds: AnytimeBounds, loss: LossOfMass,
                 trace: pd.DataFrame, pruned: Dict[str, List[str]], pruned_probability: Dict[str, Dict[str, float]],
                 instances: int, degenerate: bool):
        self.query = query
        self.cutset = cutset
        self.bounds = bounds
        self.loss = loss
        self.trace = trace
        self.pruned = pruned
        self.pruned_probability = pruned_probability
        self.instances = instances
        self.degenerate = degenerate

    @property
    def evaluated(self) -> int:
        return self.bounds.steps

    def to_dict(self) -> Dict:
        return {
            'query': self.query.to_dict(),
            'cutset': list(self.cutset),
            'bounds': self.bounds.to_dict(),
            'loss_of_mass': self.loss.to_dict(),
            'pruned': {name: list(values) for name, values in self.pruned.items()},
            'pruned_probability': self.pruned_probability,
            'instances': self.instances,
            'evaluated': self.evaluated,
            'degenerate': self.degenerate,
        }


def _check_cutset(pnet: ProbNetwork, cutset: Sequence[str]) -> List[str]:
    names = list(cutset)
    for name in names:
        pnet.variable(name)
    if len(set(names)) != len(names):
        raise AssignmentError(f"cutset names a variable twice: {names}")
    return [name for name in pnet.topological_order() if name in names]


def bounded_conditioning(pnet: ProbNetwork, target: Mapping[str, str], evidence: Optional[Mapping[str, str]] = None,
                         eps: Optional[float] = None, budget: Optional[int] = None,
                         time_limit: Optional[float] = None, cutset: Optional[Sequence[str]] = None,
                         cap: Optional[int] = None, record_timing: bool = True) -> BoundedResult:
    """
    Anytime estimate of P(target | evidence) by conditioning on cutset instances

    Args:
        pnet: Probability network
        target: Conjunction g
        evidence: Conjunction e
        eps: Stratum base of the epsilon-OMP used for pruning
        budget: Maximum number of instances to evaluate (None: all)
        time_limit: Wall-clock limit in seconds (None: none)
        cutset: Conditioning variables (default: find_cutset)
        cap: World cap for the per-instance enumeration
        record_timing: Fill the trace's elapsed column

    Returns:
        BoundedResult with the final bounds, loss of mass and the per-step trace
    """
    require_prob(pnet)
    eps = check_epsilon(Config.DEFAULT_EPSILON if eps is None else eps)
    query = Query(pnet, target, evidence)
    if budget is not None and budget < 0:
        raise ValueError(f"budget must be nonnegative, got {budget}")

    oracle = ProbabilityOracle(pnet, cap)
    total = oracle.probability(query.evidence)
    if total <= 0.0:
        raise ImpossibleConditionError(f"evidence {query.evidence} has probability 0")

    cutset = find_cutset(pnet.structure) if cutset is None else _check_cutset(pnet, cutset)
    knet = epsilon_omp(pnet, eps)
    root_evidence = {name: value for name, value in query.evidence.items() if pnet.structure.is_root(name)}
    plsets, _ = predict(knet, root_evidence)

    allowed: Dict[str, List[str]] = {}
    pruned: Dict[str, List[str]] = {}
    for name in cutset:
        if name in query.evidence:
            allowed[name] = [query.evidence[name]]
            pruned[name] = []
        else:
            allowed[name] = plsets.ordered(name)
            pruned[name] = [v for v in pnet.variable(name).values if v not in plsets[name]]

    prior = oracle.marginal_masses(query.evidence)
    pruned_probability = {
        name: {v: float(prior[name][pnet.variable(name).index(v)]) / total for v in values}
        for name, values in pruned.items() if values
    }

    estimates = stratum_estimates(knet)

    def estimated_rank(instance: Dict[str, str]) -> float:
        return float(sum(estimates[name][pnet.variable(name).index(value)] for name, value in instance.items()))

    instances = [dict(zip(cutset, values)) for values in itertools.product(*(allowed[name] for name in cutset))]
    instances.sort(key=estimated_rank)

    recorder = TraceRecorder(record_timing)
    masses = {variable.name: np.zeros(variable.size) for variable in pnet.variables}
    found = processed = 0.0
    bounds = AnytimeBounds(found, processed, total, 0)
    recorder.record(bounds)

    for instance in instances:
        if budget is not None and bounds.steps >= budget:
            break
        if recorder.out_of_time(time_limit):
            break
        given = {**query.evidence, **instance}
        processed += oracle.probability(given)
        if all(instance.get(name, value) == value for name, value in query.target.items()):
            found += oracle.probability({**given, **query.target})
        for name, mass in oracle.marginal_masses(given).items():
            masses[name] += mass
        bounds = AnytimeBounds(found, processed, total - processed, bounds.steps + 1)
        recorder.record(bounds)

    # every surviving instance is inconsistent with the evidence: bounds stay [0, 1]
    degenerate = bounds.steps == len(instances) and processed <= 0.0
    if degenerate:
        logger.warning("no surviving cutset instance carries evidence mass",
                       extra={"cutset": cutset, "eps": eps, "instances": len(instances)})

    approx = {
        name: {value: float(m) / total for value, m in zip(pnet.variable(name).values, mass)}
        for name, mass in masses.items()
    }
    return BoundedResult(query, cutset, bounds, loss_of_mass(approx), recorder.frame(), pruned, pruned_probability,
                         len(instances), degenerate)
