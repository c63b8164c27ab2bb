"""Probabilistic inference: exact enumeration, bounded conditioning, best-first search, loss of mass"""
from .bounds import AnytimeBounds, write_trace
from .exact import ProbabilityOracle, Query, exact_marginals, exact_query
from .cutset import find_cutset
from .loss import LossOfMass, loss_of_mass
from .bounded import BoundedResult, bounded_conditioning, stratum_estimates
from .search import STRATEGIES, SearchResult, poole_search

__all__ = [
    'AnytimeBounds',
    'write_trace',
    'ProbabilityOracle',
    'Query',
    'exact_marginals',
    'exact_query',
    'find_cutset',
    'LossOfMass',
    'loss_of_mass',
    'BoundedResult',
    'bounded_conditioning',
    'stratum_estimates',
    'STRATEGIES',
    'SearchResult',
    'poole_search',
]
