"""Random network suites and the epsilon / loss-of-mass experiment runner"""
from .random_networks import (CYCLIC, DAG, POLYTREE, network_suite, random_kappa_network, random_prob_network,
                              random_structure)
from .runner import COLUMNS, ExperimentConfig, ExperimentRunner, load_config, write_table

__all__ = [
    'CYCLIC',
    'DAG',
    'POLYTREE',
    'network_suite',
    'random_kappa_network',
    'random_prob_network',
    'random_structure',
    'COLUMNS',
    'ExperimentConfig',
    'ExperimentRunner',
    'load_config',
    'write_table',
]
