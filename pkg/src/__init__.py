"""
Kappa Network Engine

Plausibility inference over kappa-ranked belief networks:
- Predict: linear-time plausible sets with completeness certificates
- Scomplete: exact plausible sets by staged conditioning
- Epsilon-OMP abstraction of probability networks
- Bounded conditioning and best-first search with anytime bounds
"""

__version__ = "0.1.0"
__author__ = "Kappa Network Engine Team"
