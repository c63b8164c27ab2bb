"""Shared fixtures: small hand-built networks with known answers"""
import math
from pathlib import Path

import pytest

from src.model.network import (KappaNetwork, KappaTable, NetworkStructure, ProbabilityTable, ProbNetwork,
                               Variable)

INF = math.inf
EXAMPLES_DIR = Path(__file__).resolve().parent.parent / "docs" / "examples"

T, F = "true", "false"


def binary(*names):
    return [Variable(name, (T, F)) for name in names]


def build_n1(wet_ff=(2, 0)):
    """rain, sprinkler -> wet; kappa(rain) = kappa(sprinkler) = 1"""
    structure = NetworkStructure(binary("rain", "sprinkler", "wet"), [("rain", "wet"), ("sprinkler", "wet")])
    wet = [[[0, 1], [0, 1]], [[0, 1], list(wet_ff)]]
    return KappaNetwork(structure, [
        KappaTable("rain", (), [1, 0]),
        KappaTable("sprinkler", (), [1, 0]),
        KappaTable("wet", ("rain", "sprinkler"), wet),
    ], name="n1")


def build_diamond(a_row=(0, 0)):
    """a -> b, a -> c, {b, c} -> d; b and c copy a, d indicates b == c"""
    structure = NetworkStructure(binary("a", "b", "c", "d"), [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    copy = [[0, 1], [1, 0]]
    equal = [[[0, 1], [1, 0]], [[1, 0], [0, 1]]]
    return KappaNetwork(structure, [
        KappaTable("a", (), list(a_row)),
        KappaTable("b", ("a",), copy),
        KappaTable("c", ("a",), copy),
        KappaTable("d", ("b", "c"), equal),
    ], name="diamond")


def build_prob_diamond():
    structure = NetworkStructure(binary("a", "b", "c", "d"), [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    return ProbNetwork(structure, [
        ProbabilityTable("a", (), [0.6, 0.4]),
        ProbabilityTable("b", ("a",), [[0.8, 0.2], [0.3, 0.7]]),
        ProbabilityTable("c", ("a",), [[0.9, 0.1], [0.25, 0.75]]),
        ProbabilityTable("d", ("b", "c"), [[[0.95, 0.05], [0.4, 0.6]], [[0.5, 0.5], [0.05, 0.95]]]),
    ], name="diamond-prob")


@pytest.fixture
def n1():
    return build_n1()


@pytest.fixture
def diamond():
    return build_diamond()


@pytest.fixture
def believed_diamond():
    """Diamond retuned so that a is believed: kappa(not a) = 1"""
    return build_diamond(a_row=(0, 1))


@pytest.fixture
def prob_diamond():
    return build_prob_diamond()


@pytest.fixture
def chain_net():
    from src.abstraction import generate_chain
    return generate_chain(5, 0.1)


@pytest.fixture
def and_net():
    from src.abstraction import generate_and
    return generate_and(4, 0.1)


@pytest.fixture
def examples_dir():
    return EXAMPLES_DIR
