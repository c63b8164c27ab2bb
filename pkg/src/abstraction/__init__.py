"""Epsilon order-of-magnitude abstraction of probability networks"""
from .omp import RowShift, abstract_network, check_epsilon, epsilon_omp, kappa_array, kappa_of
from .generators import generate_and, generate_chain

__all__ = [
    'RowShift',
    'abstract_network',
    'check_epsilon',
    'epsilon_omp',
    'kappa_array',
    'kappa_of',
    'generate_and',
    'generate_chain',
]
