"""
Predict
One topological sweep computing the plausible values (kappa 0) of every
variable, with root evidence, action surgery and optional clamping of
blocking nodes.
"""
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Set, Tuple

import numpy as np

from ..errors import EvidenceError, InconsistentEvidenceError, NetworkValidationError
from ..model.network import ActionSet, Evidence, KappaNetwork, apply_actions, check_assignment

APPROXIMATE = "approximate"
COMPLETE_CERTIFIED = "complete-certified"


class OpCounter:
    """Work done by a sweep: family rows looked up plus parent edges visited"""

    def __init__(self):
        self.lookups = 0
        self.edge_visits = 0

    @property
    def total(self) -> int:
        return self.lookups + self.edge_visits

    def add(self, other: "OpCounter") -> "OpCounter":
        self.lookups += other.lookups
        self.edge_visits += other.edge_visits
        return self

    def to_dict(self) -> Dict:
        return {'lookups': self.lookups, 'edge_visits': self.edge_visits, 'total': self.total}

    def __repr__(self) -> str:
        return f"OpCounter(lookups={self.lookups}, edge_visits={self.edge_visits})"


class PlausibleSetMap(Mapping[str, FrozenSet[str]]):
    """
    Per-variable plausible sets plus how they were obtained.

    Iteration follows the network's declaration order; sets are nonempty
    subsets of each variable's domain.
    """

    def __init__(self, net: KappaNetwork, sets: Mapping[str, Set[str]], provenance: str = APPROXIMATE):
        if provenance not in (APPROXIMATE, COMPLETE_CERTIFIED):
            raise ValueError(f"unknown provenance {provenance!r}")
        self.net = net
        self.provenance = provenance
        self._sets: Dict[str, FrozenSet[str]] = {}
        for name in net.names:
            values = frozenset(sets[name])
            domain = set(net.variable(name).values)
            if not values or not values <= domain:
                raise ValueError(f"plausible set of {name!r} must be a nonempty subset of its domain")
            self._sets[name] = values

    def __getitem__(self, name: str) -> FrozenSet[str]:
        return self._sets[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._sets)

    def __len__(self) -> int:
        return len(self._sets)

    def ordered(self, name: str) -> List[str]:
        """Plausible values of one variable in declaration order"""
        return [value for value in self.net.variable(name).values if value in self._sets[name]]

    def with_provenance(self, provenance: str) -> "PlausibleSetMap":
        return PlausibleSetMap(self.net, self._sets, provenance)

    def as_sets(self) -> Dict[str, Set[str]]:
        return {name: set(values) for name, values in self._sets.items()}

    def to_dict(self) -> Dict:
        return {
            'provenance': self.provenance,
            'plausible': {name: self.ordered(name) for name in self._sets},
        }

    def __eq__(self, other) -> bool:
        if isinstance(other, PlausibleSetMap):
            return self._sets == other._sets
        return super().__eq__(other)

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"{name}={self.ordered(name)}" for name in self._sets)
        return f"PlausibleSetMap({self.provenance}: {body})"


def _root_values(net: KappaNetwork, name: str, evidence: Mapping[str, str]) -> np.ndarray:
    """Boolean mask of plausible root values; evidence replaces it by the observation"""
    row = net.tables[name].array
    variable = net.variable(name)
    if name in evidence:
        index = variable.index(evidence[name])
        if np.isinf(row[index]):
            raise InconsistentEvidenceError(
                f"evidence {name}={evidence[name]} has kappa INFINITY")
        mask = np.zeros(variable.size, dtype=bool)
        mask[index] = True
        return mask
    return row == 0


def _sweep(net: KappaNetwork, evidence: Mapping[str, str], clamp: Mapping[str, str],
           counter: OpCounter) -> Tuple[Dict[str, np.ndarray], List[str]]:
    """
    The Predict sweep on an already post-surgery network

    Returns:
        (name -> boolean mask over the domain, clamped names whose value is
        outside the plausible set their parents produce)
    """
    masks: Dict[str, np.ndarray] = {}
    conflicts: List[str] = []

    for name in net.topological_order():
        table = net.tables[name]
        if not table.parents:
            counter.lookups += 1
            mask = _root_values(net, name, evidence)
        else:
            counter.edge_visits += len(table.parents)
            rows = [np.flatnonzero(masks[parent]) for parent in table.parents]
            counter.lookups += int(np.prod([len(r) for r in rows]))
            # a value is plausible when some plausible parent combination gives it rank 0
            block = table.array[np.ix_(*rows, np.arange(table.array.shape[-1]))]
            mask = (block == 0).reshape(-1, block.shape[-1]).any(axis=0)

        if name in clamp:
            index = net.variable(name).index(clamp[name])
            if not mask[index]:
                conflicts.append(name)
            mask = np.zeros_like(mask)
            mask[index] = True
        masks[name] = mask

    return masks, conflicts


def _check_evidence(net: KappaNetwork, evidence: Mapping[str, str]) -> Dict[str, str]:
    evidence = check_assignment(net, evidence, "evidence")
    for name in evidence:
        if not net.structure.is_root(name):
            raise EvidenceError(f"evidence on non-root variable {name!r} is not supported")
    return evidence


def prepare(net: KappaNetwork, evidence: Optional[Evidence] = None,
            actions: Optional[ActionSet] = None) -> Tuple[KappaNetwork, Dict[str, str]]:
    """Apply action surgery, then validate evidence against the post-surgery graph"""
    if not isinstance(net, KappaNetwork):
        raise NetworkValidationError(
            f"expected a kappa network, got kind {getattr(net, 'kind', None)!r}", location="kind")
    surgered = apply_actions(net, actions)
    return surgered, _check_evidence(surgered, evidence)


def clamped_sweep(net: KappaNetwork, evidence: Mapping[str, str], clamp: Mapping[str, str],
                  counter: Optional[OpCounter] = None) -> Tuple[PlausibleSetMap, List[str]]:
    """
    Predict on a prepared network with some nodes forced to one value

    Args:
        net: Post-surgery kappa network
        evidence: Validated root evidence
        clamp: variable -> forced value
        counter: Counter to accumulate into

    Returns:
        (plausible sets, clamped variables whose forced value is implausible
        given the plausible sets of their parents)
    """
    clamp = check_assignment(net, clamp, "clamp")
    masks, conflicts = _sweep(net, evidence, clamp, counter if counter is not None else OpCounter())
    sets = {name: {net.variable(name).values[i] for i in np.flatnonzero(mask)} for name, mask in masks.items()}
    return PlausibleSetMap(net, sets), conflicts


def predict(net: KappaNetwork, evidence: Optional[Evidence] = None, actions: Optional[ActionSet] = None,
            clamp: Optional[Mapping[str, str]] = None,
            counter: Optional[OpCounter] = None) -> Tuple[PlausibleSetMap, OpCounter]:
    """
    Compute the plausible set of every variable

    A non-root value is plausible iff some instantiation of its parents drawn
    from their plausible sets gives it conditional rank 0.

    Args:
        net: Kappa network
        evidence: Observed values; only roots of the post-surgery graph
        actions: Forced values; incoming edges of acted-on variables are cut
        clamp: Values forced during the sweep without surgery
        counter: Existing counter to accumulate into

    Returns:
        (PlausibleSetMap with provenance 'approximate', OpCounter)
    """
    counter = counter if counter is not None else OpCounter()
    surgered, evidence = prepare(net, evidence, actions)
    plsets, _ = clamped_sweep(surgered, evidence, clamp or {}, counter)
    return PlausibleSetMap(net, plsets, APPROXIMATE), counter


def believed_nodes(plsets: Mapping[str, FrozenSet[str]]) -> Set[Tuple[str, str]]:
    """(variable, value) for every variable with a singleton plausible set"""
    believed = set()
    for name, values in plsets.items():
        if len(values) == 1:
            believed.add((name, next(iter(values))))
    return believed


def believed_names(plsets: Mapping[str, FrozenSet[str]]) -> Set[str]:
    return {name for name, _ in believed_nodes(plsets)}

