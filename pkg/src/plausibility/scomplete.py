"""
Stratified Completion
Repeatedly isolates the loops left after removing believed and blocking
nodes, clamps the roots of those loops to each of their plausible
instantiations, and unions the clamped Predict results until no loop
remains. The final plausible sets are exact.
"""
import itertools
import logging
import math
from typing import Dict, Iterable, List, Optional, Set

import networkx as nx

from ..config import Config
from ..errors import CapExceededError
from ..model.network import ActionSet, Evidence, KappaNetwork, NetworkStructure, QuantifiedNetwork
from .predict import (COMPLETE_CERTIFIED, OpCounter, PlausibleSetMap, believed_names, clamped_sweep,
                      prepare)

logger = logging.getLogger(__name__)


def isolate_loops(structure, bset: Iterable[str]) -> nx.DiGraph:
    """
    Reduced graph containing only the loops not blocked by BSet

    BSet nodes are removed with their arcs, then nodes with at most one
    undirected neighbour are stripped until none is left.

    Args:
        structure: NetworkStructure or a network
        bset: Names of blocking or believed variables

    Returns:
        The reduced DiGraph; empty iff no undirected cycle survives
    """
    if isinstance(structure, QuantifiedNetwork):
        structure = structure.structure
    bset = set(bset)
    for name in bset:
        structure.variable(name)

    reduced = structure.graph.copy()
    reduced.remove_nodes_from(bset)
    return strip_to_loops(reduced)


def strip_to_loops(graph: nx.DiGraph) -> nx.DiGraph:
    """Strip nodes with at most one undirected neighbour, in place, until none is left"""
    undirected = graph.to_undirected(as_view=True)
    leaves = [node for node in graph if undirected.degree(node) <= 1]
    while leaves:
        graph.remove_nodes_from(leaves)
        leaves = [node for node in graph if undirected.degree(node) <= 1]
    return graph


def _roots_in_order(structure: NetworkStructure, reduced: nx.DiGraph) -> List[str]:
    return [name for name in structure.names if name in reduced and reduced.in_degree(name) == 0]


class BlockingState:
    """CS, BSet and the stage index of a Scomplete run"""

    def __init__(self, bset: Iterable[str]):
        self.cs: List[str] = []
        self.bset: Set[str] = set(bset)
        self.stage = 0

    def to_dict(self) -> Dict:
        return {'stage': self.stage, 'cs': list(self.cs), 'bset': sorted(self.bset)}


class StageRecord:
    """Snapshot of one completed stage"""

    def __init__(self, stage: int, cs: List[str], bset: Set[str], instantiations: int, consistent: int,
                 plsets: PlausibleSetMap):
        self.stage = stage
        self.cs = list(cs)
        self.bset = set(bset)
        self.instantiations = instantiations
        self.consistent = consistent
        self.plsets = plsets

    def to_dict(self) -> Dict:
        return {
            'stage': self.stage,
            'cs': self.cs,
            'bset': sorted(self.bset),
            'instantiations': self.instantiations,
            'consistent': self.consistent,
            'plausible': self.plsets.to_dict()['plausible'],
        }


class ScompleteResult:
    """Final plausible sets together with the per-stage history"""

    def __init__(self, plsets: PlausibleSetMap, stages: List[StageRecord], counter: OpCounter):
        self.plsets = plsets
        self.stages = stages
        self.counter = counter

    def to_dict(self) -> Dict:
        return {
            **self.plsets.to_dict(),
            'stages': [stage.to_dict() for stage in self.stages],
            'counter': self.counter.to_dict(),
        }


def _instantiations(current: PlausibleSetMap, cs: List[str]) -> Iterable[Dict[str, str]]:
    for values in itertools.product(*(current.ordered(name) for name in cs)):
        yield dict(zip(cs, values))


def scomplete(net: KappaNetwork, evidence: Optional[Evidence] = None, actions: Optional[ActionSet] = None,
              cs_cap: Optional[int] = None) -> ScompleteResult:
    """
    Exact plausible sets by stratified completion

    Args:
        net: Kappa network
        evidence: Root evidence (checked after action surgery)
        actions: Forced values
        cs_cap: Maximum number of CS instantiations per stage

    Returns:
        ScompleteResult whose plausible sets carry provenance 'complete-certified'

    Raises:
        CapExceededError: a stage needs more instantiations than the cap;
            `partial` holds the previous stage's sound plausible sets
    """
    cs_cap = Config.CS_CAP if cs_cap is None else cs_cap
    surgered, evidence = prepare(net, evidence, actions)
    counter = OpCounter()

    current, _ = clamped_sweep(surgered, evidence, {}, counter)
    state = BlockingState(believed_names(current))
    stages: List[StageRecord] = []

    reduced = isolate_loops(surgered.structure, state.bset)
    while reduced.number_of_nodes():
        state.stage += 1
        for root in _roots_in_order(surgered.structure, reduced):
            if root not in state.cs:
                state.cs.append(root)

        size = math.prod(len(current[name]) for name in state.cs)
        if size > cs_cap:
            logger.warning("scomplete refused stage", extra={"stage": state.stage, "instantiations": size,
                                                             "cap": cs_cap})
            raise CapExceededError(f"scomplete stage {state.stage} refused", cap=cs_cap, size=size,
                                   partial=PlausibleSetMap(net, current))

        union: Dict[str, Set[str]] = {name: set() for name in surgered.names}
        consistent = 0
        for clamp in _instantiations(current, state.cs):
            clamped, conflicts = clamped_sweep(surgered, evidence, clamp, counter)
            if conflicts:
                continue
            consistent += 1
            for name, values in clamped.items():
                union[name] |= values

        # a rank-0 world always supplies one consistent instantiation
        current = PlausibleSetMap(net, {name: union[name] & current[name] for name in surgered.names})
        state.bset |= believed_names(current) | set(state.cs)
        stages.append(StageRecord(state.stage, state.cs, state.bset, size, consistent, current))
        logger.info("scomplete stage done", extra={**state.to_dict(), "instantiations": size,
                                                        "consistent": consistent})
        reduced = isolate_loops(surgered.structure, state.bset)

    return ScompleteResult(current.with_provenance(COMPLETE_CERTIFIED), stages, counter)
