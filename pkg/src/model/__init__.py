"""Network model: kappa arithmetic, structures, tables, documents"""
from .kappa import INFINITY, Kappa, is_finite
from .network import (ActionSet, Evidence, KappaNetwork, KappaTable, NetworkStructure, ProbabilityTable,
                      ProbNetwork, QuantifiedNetwork, Variable, World, apply_actions, check_assignment,
                      topological_order)
from .io import (dump_network, load_network, parse_assignment, parse_name_list, parse_network, parse_query,
                 serialize_network)

__all__ = [
    'INFINITY',
    'Kappa',
    'is_finite',
    'ActionSet',
    'Evidence',
    'KappaNetwork',
    'KappaTable',
    'NetworkStructure',
    'ProbabilityTable',
    'ProbNetwork',
    'QuantifiedNetwork',
    'Variable',
    'World',
    'apply_actions',
    'check_assignment',
    'topological_order',
    'dump_network',
    'load_network',
    'parse_assignment',
    'parse_name_list',
    'parse_network',
    'parse_query',
    'serialize_network',
]
