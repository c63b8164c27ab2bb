"""
Completeness Analysis
Structural certification that Predict's plausible sets are exact: believed
nodes must block every backpath. Also detects definite quantifications.
"""
from collections import deque
from typing import Dict, Iterable, List, Optional, Union

import networkx as nx
import numpy as np

from ..errors import AssignmentError
from ..model.network import KappaNetwork, NetworkStructure, QuantifiedNetwork

COMPLETE = "complete"
POSSIBLY_INCOMPLETE = "possibly-incomplete"


class CompletenessCertificate:
    """Verdict of the spanning-forest check, with a cycle witness when it fails"""

    def __init__(self, verdict: str, witness: Optional[List[str]] = None, edge_visits: int = 0):
        if (verdict == POSSIBLY_INCOMPLETE) != (witness is not None):
            raise ValueError("a witness is present exactly when the verdict is possibly-incomplete")
        self.verdict = verdict
        self.witness = witness
        self.edge_visits = edge_visits

    @property
    def complete(self) -> bool:
        return self.verdict == COMPLETE

    def to_dict(self) -> Dict:
        return {'verdict': self.verdict, 'witness': self.witness, 'edge_visits': self.edge_visits}

    def __repr__(self) -> str:
        return f"CompletenessCertificate({self.verdict}, witness={self.witness})"


def _structure(net: Union[QuantifiedNetwork, NetworkStructure]) -> NetworkStructure:
    return net.structure if isinstance(net, QuantifiedNetwork) else net


def _tree_path(parent: Dict[str, Optional[str]], node: str) -> List[str]:
    path = [node]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def _cycle_through(parent: Dict[str, Optional[str]], u: str, v: str) -> List[str]:
    """Cycle closed by the non-tree edge (u, v): tree path v..lca..u"""
    up_u = _tree_path(parent, u)
    up_v = _tree_path(parent, v)
    on_u = set(up_u)
    lca = next(node for node in up_v if node in on_u)
    down_to_v = list(reversed(up_v[:up_v.index(lca) + 1]))
    up_from_u = up_u[:up_u.index(lca)]
    return down_to_v + list(reversed(up_from_u))


def check_complete(net: Union[QuantifiedNetwork, NetworkStructure], believed: Iterable[str]) -> CompletenessCertificate:
    """
    Remove the outgoing edges of believed nodes and look for a cross-edge
    while building a breadth-first spanning forest of what remains

    Args:
        net: Network or bare structure
        believed: Names of believed variables

    Returns:
        COMPLETE when the remainder is a forest, otherwise POSSIBLY_INCOMPLETE
        with one undirected cycle as witness
    """
    structure = _structure(net)
    believed = set(believed)
    for name in believed:
        structure.variable(name)

    adjacency: Dict[str, List[str]] = {name: [] for name in structure.names}
    for parent, child in structure.edges:
        if parent in believed:
            continue
        adjacency[parent].append(child)
        adjacency[child].append(parent)

    visits = 0
    parent_of: Dict[str, Optional[str]] = {}
    for start in structure.names:
        if start in parent_of:
            continue
        parent_of[start] = None
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                visits += 1
                if v not in parent_of:
                    parent_of[v] = u
                    queue.append(v)
                elif v != parent_of[u]:
                    return CompletenessCertificate(POSSIBLY_INCOMPLETE, _cycle_through(parent_of, u, v), visits)

    return CompletenessCertificate(COMPLETE, None, visits)


def is_definite(net: KappaNetwork) -> bool:
    """True iff every row of every table has exactly one value of rank 0"""
    return all(bool(np.all(np.count_nonzero(table.array == 0, axis=-1) == 1)) for table in net.tables.values())


def backpaths(net: Union[QuantifiedNetwork, NetworkStructure], x: str, y: str) -> List[List[str]]:
    """
    Undirected simple paths between x and y on which every node is an
    ancestor of x or of y (each node counts as its own ancestor)
    """
    structure = _structure(net)
    for name in (x, y):
        structure.variable(name)
    if x == y:
        raise AssignmentError("backpaths need two distinct variables")

    graph = structure.graph
    allowed = nx.ancestors(graph, x) | nx.ancestors(graph, y) | {x, y}
    undirected = graph.subgraph(allowed).to_undirected(as_view=True)
    return [list(path) for path in nx.all_simple_paths(undirected, x, y)]


def blocked(path: List[str], believed: Iterable[str]) -> bool:
    """A backpath is blocked when one of its interior nodes is believed"""
    believed = set(believed)
    return any(node in believed for node in path[1:-1])
