#!/usr/bin/env python3
"""
Kappa Network Engine - Main Entry Point

Plausibility inference in kappa-quantified belief networks, epsilon
abstraction of probability networks and anytime probability bounds.

    python main.py predict --net docs/examples/n1.json
    python main.py serve
"""
import sys

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())
