"""Plausibility reasoning over kappa networks: Predict, completeness, Scomplete and the exact oracle"""
from .oracle import (KappaOracle, exact_plausible_set, exact_plausible_sets, is_irrelevant, joint_kappa,
                     marginal_kappa)
from .predict import (APPROXIMATE, COMPLETE_CERTIFIED, OpCounter, PlausibleSetMap, believed_nodes,
                      predict)
from .completeness import (COMPLETE, POSSIBLY_INCOMPLETE, CompletenessCertificate, backpaths, blocked,
                           check_complete, is_definite)
from .scomplete import BlockingState, ScompleteResult, StageRecord, isolate_loops, scomplete

__all__ = [
    'KappaOracle',
    'exact_plausible_set',
    'exact_plausible_sets',
    'is_irrelevant',
    'joint_kappa',
    'marginal_kappa',
    'APPROXIMATE',
    'COMPLETE_CERTIFIED',
    'OpCounter',
    'PlausibleSetMap',
    'believed_nodes',
    'predict',
    'COMPLETE',
    'POSSIBLY_INCOMPLETE',
    'CompletenessCertificate',
    'backpaths',
    'blocked',
    'check_complete',
    'is_definite',
    'BlockingState',
    'ScompleteResult',
    'StageRecord',
    'isolate_loops',
    'scomplete',
]
