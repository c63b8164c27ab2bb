"""
Best-first search over partial instantiations
Expands prefixes in topological order, most probable first, keeping the
mass of finished worlds and of the frontier as anytime bounds. Optional
pruning uses Predict on the epsilon-OMP.
"""
import heapq
import logging
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from ..abstraction.omp import check_epsilon, epsilon_omp
from ..config import Config
from ..errors import ImpossibleConditionError
from ..plausibility.predict import clamped_sweep, predict, prepare
from .bounds import AnytimeBounds, TraceRecorder
from .exact import Query, require_prob
from .loss import LossOfMass, loss_of_mass

logger = logging.getLogger(__name__)

NONE, PREPRUNE, LOOKAHEAD = "none", "preprune", "lookahead"
STRATEGIES = (NONE, PREPRUNE, LOOKAHEAD)


class SearchResult:
    """Outcome of a best-first search run"""

    def __init__(self, query: Query, strategy: str, bounds: AnytimeBounds, loss: LossOfMass, trace: pd.DataFrame,
                 expansions: int, leaves: int, pruned_mass: float):
        self.query = query
        self.strategy = strategy
        self.bounds = bounds
        self.loss = loss
        self.trace = trace
        self.expansions = expansions
        self.leaves = leaves
        self.pruned_mass = pruned_mass

    def to_dict(self) -> Dict:
        return {
            'query': self.query.to_dict(),
            'strategy': self.strategy,
            'bounds': self.bounds.to_dict(),
            'loss_of_mass': self.loss.to_dict(),
            'expansions': self.expansions,
            'leaves': self.leaves,
            'pruned_mass': self.pruned_mass,
        }


class _Pruner:
    """Value filters and prefix tests derived from the epsilon-OMP"""

    def __init__(self, pnet, query: Query, eps: float, strategy: str):
        self.strategy = strategy
        self.eps = eps
        self.query = query
        root_evidence = {name: value for name, value in query.evidence.items() if pnet.structure.is_root(name)}
        knet, self.root_evidence = prepare(epsilon_omp(pnet, eps), root_evidence)
        self.knet = knet
        self.plsets, _ = predict(knet, self.root_evidence)

        implausible = [name for name, value in query.target.items() if value not in self.plsets[name]]
        if implausible:
            logger.warning("target is implausible in the epsilon-OMP; pruning may discard its mass",
                           extra={"variables": implausible, "eps": eps, "strategy": strategy})

    def allowed(self, name: str) -> List[str]:
        return self.plsets.ordered(name)

    def drop_prefix(self, assignment: Dict[str, str], probability: float) -> bool:
        if probability < self.eps:
            return True
        plsets, _ = clamped_sweep(self.knet, self.root_evidence, assignment)
        return any(value not in plsets[name] for name, value in self.query.target.items())


def poole_search(pnet, target: Mapping[str, str], evidence: Optional[Mapping[str, str]] = None,
                 eps: Optional[float] = None, budget: Optional[int] = None, strategy: str = NONE,
                 time_limit: Optional[float] = None, record_timing: bool = True) -> SearchResult:
    """
    Anytime bounds on P(target | evidence) by best-first search

    Args:
        pnet: Probability network
        target: Conjunction g
        evidence: Conjunction e; evidence variables only take their observed value
        eps: Stratum base for the pruning strategies
        budget: Maximum number of node expansions (None: until the queue empties)
        strategy: 'none', 'preprune' (values outside the epsilon-OMP plausible
            sets) or 'lookahead' (also prefixes below eps or making g implausible)
        time_limit: Wall-clock limit in seconds
        record_timing: Fill the trace's elapsed column

    Returns:
        SearchResult; the bounds stay valid when the budget stops the search early

    Raises:
        ImpossibleConditionError: the search ran to completion without pruning anything
            and without finding a world consistent with the evidence
    """
    require_prob(pnet)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {list(STRATEGIES)}")
    eps = check_epsilon(Config.DEFAULT_EPSILON if eps is None else eps)
    query = Query(pnet, target, evidence)
    if budget is not None and budget < 0:
        raise ValueError(f"budget must be nonnegative, got {budget}")

    order = pnet.topological_order()
    depth_of = {name: i for i, name in enumerate(order)}
    pruner = _Pruner(pnet, query, eps, strategy) if strategy != NONE else None

    candidates: Dict[str, List[int]] = {}
    allowed: Dict[str, set] = {}
    for name in order:
        variable = pnet.variable(name)
        if name in query.evidence:
            candidates[name] = [variable.index(query.evidence[name])]
            allowed[name] = set(candidates[name])
        else:
            candidates[name] = list(range(variable.size))
            kept = pruner.allowed(name) if pruner else variable.values
            allowed[name] = {variable.index(value) for value in kept}

    target_index = {depth_of[name]: pnet.variable(name).index(value) for name, value in query.target.items()}

    def assignment(prefix: Tuple[int, ...]) -> Dict[str, str]:
        return {order[i]: pnet.variable(order[i]).values[v] for i, v in enumerate(prefix)}

    recorder = TraceRecorder(record_timing)
    masses = {variable.name: np.zeros(variable.size) for variable in pnet.variables}
    heap: List[Tuple[float, int, Tuple[int, ...]]] = [(-1.0, 0, ())]
    sequence = 1
    queue_mass, pruned_mass = 1.0, 0.0
    found = complete = 0.0
    expansions = leaves = 0
    bounds = AnytimeBounds(found, complete, queue_mass, 0)
    recorder.record(bounds)

    while heap:
        if budget is not None and expansions >= budget:
            break
        if recorder.out_of_time(time_limit):
            break

        negative, _, prefix = heapq.heappop(heap)
        probability = -negative
        queue_mass -= probability
        expansions += 1

        if len(prefix) == len(order):
            leaves += 1
            complete += probability
            if all(prefix[i] == v for i, v in target_index.items()):
                found += probability
            for i, v in enumerate(prefix):
                masses[order[i]][v] += probability
        else:
            name = order[len(prefix)]
            table = pnet.tables[name]
            row = table.array[tuple(prefix[depth_of[parent]] for parent in table.parents)]
            for value in candidates[name]:
                mass = probability * float(row[value])
                if mass <= 0.0:
                    continue
                child = prefix + (value,)
                if value not in allowed[name] or (
                        strategy == LOOKAHEAD and pruner.drop_prefix(assignment(child), mass)):
                    pruned_mass += mass
                    continue
                heapq.heappush(heap, (-mass, sequence, child))
                sequence += 1
                queue_mass += mass

        if not heap:
            queue_mass = 0.0
        bounds = AnytimeBounds(found, complete, queue_mass + pruned_mass, expansions)
        recorder.record(bounds)

    if not heap and complete + pruned_mass <= 0.0:
        raise ImpossibleConditionError(f"evidence {query.evidence} has probability 0")

    denominator = bounds.mass
    approx = {
        name: {value: (float(m) / denominator if denominator > 0 else 0.0)
               for value, m in zip(pnet.variable(name).values, mass)}
        for name, mass in masses.items()
    }
    return SearchResult(query, strategy, bounds, loss_of_mass(approx), recorder.frame(), expansions, leaves,
                        pruned_mass)
