"""
Loop cutset selection
"""
from typing import List, Union

from ..model.network import NetworkStructure, QuantifiedNetwork
from ..plausibility.scomplete import strip_to_loops


def find_cutset(structure: Union[NetworkStructure, QuantifiedNetwork]) -> List[str]:
    """
    Greedy loop cutset

    While undirected cycles remain, take the loop node with the most
    outgoing arcs inside the loops (ties: more loop neighbours, then
    declaration order) and cut its outgoing arcs.

    Args:
        structure: Network structure or network

    Returns:
        Cutset in topological order; cutting its outgoing arcs leaves a forest
    """
    if isinstance(structure, QuantifiedNetwork):
        structure = structure.structure
    position = structure.position

    graph = structure.graph.copy()
    chosen = set()
    loops = strip_to_loops(graph.copy())
    while loops.number_of_nodes():
        best = min(loops.nodes, key=lambda node: (-loops.out_degree(node), -loops.degree(node), position[node]))
        chosen.add(best)
        graph.remove_edges_from(list(graph.out_edges(best)))
        loops = strip_to_loops(graph.copy())

    return [name for name in structure.topological_order() if name in chosen]
