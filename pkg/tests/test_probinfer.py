"""Exact enumeration, cutsets, loss of mass and the anytime algorithms"""
import logging
import math

import networkx as nx
import numpy as np
import pandas as pd
import pytest

from src.errors import AssignmentError, ImpossibleConditionError, LossOfMassError, NetworkValidationError
from src.experiment.random_networks import random_prob_network
from src.model import NetworkStructure, ProbabilityTable, ProbNetwork
from src.probinfer import (STRATEGIES, AnytimeBounds, ProbabilityOracle, bounded_conditioning, exact_marginals,
                           exact_query, find_cutset, loss_of_mass, poole_search, stratum_estimates, write_trace)
from src.abstraction import epsilon_omp

from .conftest import binary

TOLERANCE = 1e-9


def skewed_diamond():
    """Diamond whose root is false with probability 0.05, below eps = 0.1"""
    structure = NetworkStructure(binary("a", "b", "c", "d"), [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    return ProbNetwork(structure, [
        ProbabilityTable("a", (), [0.95, 0.05]),
        ProbabilityTable("b", ("a",), [[0.8, 0.2], [0.3, 0.7]]),
        ProbabilityTable("c", ("a",), [[0.9, 0.1], [0.25, 0.75]]),
        ProbabilityTable("d", ("b", "c"), [[[0.95, 0.05], [0.4, 0.6]], [[0.5, 0.5], [0.05, 0.95]]]),
    ], name="skewed-diamond")


def assert_anytime(trace: pd.DataFrame, exact: float):
    assert (trace["lower"] <= exact + TOLERANCE).all()
    assert (trace["upper"] >= exact - TOLERANCE).all()
    assert (trace["lower"].diff().dropna() >= -TOLERANCE).all()
    assert (trace["upper"].diff().dropna() <= TOLERANCE).all()


class TestExact:

    def test_chain_marginal(self, chain_net):
        # each link keeps its parent's value with probability 0.9
        p2 = 0.82
        p3 = p2 * 0.9 + (1 - p2) * 0.1
        p4 = p3 * 0.9 + (1 - p3) * 0.1
        assert math.isclose(exact_query(chain_net, {"x4": "true"}), p4)

    def test_and_gate(self, and_net):
        assert math.isclose(exact_query(and_net, {"y": "true"}), 0.9 ** 4)

    def test_evidence(self, and_net):
        assert math.isclose(exact_query(and_net, {"x1": "true"}, {"y": "true"}), 1.0)

    def test_marginals_sum_to_one(self, prob_diamond):
        for distribution in exact_marginals(prob_diamond, {"d": "false"}).values():
            assert math.isclose(sum(distribution.values()), 1.0)

    def test_impossible_evidence(self, and_net):
        with pytest.raises(ImpossibleConditionError):
            exact_query(and_net, {"x1": "false"}, {"y": "true", "x2": "false"})

    def test_query_validation(self, and_net):
        with pytest.raises(AssignmentError):
            exact_query(and_net, {})
        with pytest.raises(AssignmentError):
            exact_query(and_net, {"y": "true"}, {"y": "true"})
        with pytest.raises(NetworkValidationError):
            exact_query(epsilon_omp(and_net, 0.1), {"y": "true"})

    def test_oracle_masses(self, prob_diamond):
        oracle = ProbabilityOracle(prob_diamond)
        masses = oracle.marginal_masses({})
        assert math.isclose(float(masses["a"][0]), 0.6)


class TestCutset:

    def test_diamond(self, prob_diamond):
        assert find_cutset(prob_diamond) == ["a"]

    def test_polytree_needs_none(self, and_net):
        assert find_cutset(and_net) == []

    def test_stacked_diamonds(self):
        names = ["a", "b", "c", "d", "e", "f"]
        edges = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e"), ("d", "f"), ("e", "f")]
        structure = NetworkStructure(binary(*names), edges)
        cutset = find_cutset(structure)
        assert len(cutset) == 2
        remaining = structure.graph.copy()
        for name in cutset:
            remaining.remove_edges_from(list(structure.graph.out_edges(name)))
        assert nx.is_forest(remaining.to_undirected())


class TestLossOfMass:

    def test_per_variable(self):
        loss = loss_of_mass({"x": {"a": 0.5, "b": 0.3}, "y": {"a": 1.0}})
        assert math.isclose(loss.per_variable["x"], 0.2)
        assert loss.per_variable["y"] == 0.0
        assert math.isclose(loss.average, 0.1)

    def test_excess_mass(self):
        with pytest.raises(LossOfMassError):
            loss_of_mass({"x": {"a": 0.7, "b": 0.7}})

    def test_negative_entry(self):
        with pytest.raises(LossOfMassError):
            loss_of_mass({"x": {"a": -0.1}})

    def test_empty(self):
        assert loss_of_mass({}).average == 0.0


class TestAnytimeBounds:

    def test_bracket(self):
        bounds = AnytimeBounds(found=0.2, processed=0.5, residual=0.5, steps=3)
        assert bounds.lower == pytest.approx(0.2)
        assert bounds.upper == pytest.approx(0.7)
        assert bounds.width == pytest.approx(0.5)
        assert bounds.to_dict() == {"lower": 0.2, "upper": 0.7, "processed": 3, "residual": 0.5}

    def test_trace_csv(self, tmp_path, prob_diamond):
        result = bounded_conditioning(prob_diamond, {"d": "true"}, eps=0.01, record_timing=False)
        path = tmp_path / "trace.csv"
        write_trace(result.trace, path)
        content = path.read_bytes()
        assert content.startswith(b"step,lower,upper,elapsed\n")
        assert b"\r\n" not in content


class TestBoundedConditioning:

    def test_full_run_is_exact(self, prob_diamond):
        exact = exact_query(prob_diamond, {"d": "true"})
        result = bounded_conditioning(prob_diamond, {"d": "true"}, eps=0.01)
        assert result.cutset == ["a"]
        assert result.bounds.lower == pytest.approx(exact, abs=TOLERANCE)
        assert result.bounds.upper == pytest.approx(exact, abs=TOLERANCE)
        assert result.loss.average == pytest.approx(0.0, abs=TOLERANCE)
        assert_anytime(result.trace, exact)

    def test_budget_keeps_bracket(self, prob_diamond):
        exact = exact_query(prob_diamond, {"d": "true"})
        result = bounded_conditioning(prob_diamond, {"d": "true"}, eps=0.01, budget=1)
        assert result.evaluated == 1
        assert result.bounds.lower <= exact <= result.bounds.upper
        assert result.bounds.width > 0

    def test_zero_budget(self, prob_diamond):
        result = bounded_conditioning(prob_diamond, {"d": "true"}, budget=0)
        assert (result.bounds.lower, result.bounds.upper) == (0.0, 1.0)

    def test_pruned_root_value(self):
        pnet = skewed_diamond()
        exact = exact_query(pnet, {"d": "true"})
        result = bounded_conditioning(pnet, {"d": "true"}, eps=0.1)
        assert result.pruned == {"a": ["false"]}
        assert result.pruned_probability == {"a": {"false": pytest.approx(0.05)}}
        assert result.instances == 1
        assert result.loss.average == pytest.approx(0.05)
        assert result.bounds.lower <= exact <= result.bounds.upper
        assert result.bounds.width == pytest.approx(0.05)

    def test_loss_brackets_every_marginal(self):
        pnet = skewed_diamond()
        result = bounded_conditioning(pnet, {"d": "true"}, eps=0.1)
        exact = exact_marginals(pnet)
        oracle = ProbabilityOracle(pnet)
        lost = result.loss.per_variable
        for name in pnet.names:
            # only the a = true instance was processed
            share = oracle.probability({name: "true", "a": "true"})
            assert share <= exact[name]["true"] + TOLERANCE
            assert exact[name]["true"] <= share + lost[name] + TOLERANCE

    def test_target_on_cutset(self, prob_diamond):
        exact = exact_query(prob_diamond, {"a": "false"})
        result = bounded_conditioning(prob_diamond, {"a": "false"}, eps=0.01)
        assert result.bounds.lower == pytest.approx(exact, abs=TOLERANCE)

    def test_evidence(self, prob_diamond):
        exact = exact_query(prob_diamond, {"a": "true"}, {"d": "false"})
        result = bounded_conditioning(prob_diamond, {"a": "true"}, {"d": "false"}, eps=0.01)
        assert result.bounds.lower == pytest.approx(exact, abs=TOLERANCE)
        assert_anytime(result.trace, exact)

    def test_user_cutset(self, prob_diamond):
        result = bounded_conditioning(prob_diamond, {"d": "true"}, eps=0.01, cutset=["c", "b"])
        assert result.cutset == ["b", "c"]
        assert result.instances == 4
        with pytest.raises(AssignmentError):
            bounded_conditioning(prob_diamond, {"d": "true"}, cutset=["b", "b"])

    def test_report(self, prob_diamond):
        body = bounded_conditioning(prob_diamond, {"d": "true"}, eps=0.01).to_dict()
        assert body["query"] == {"target": {"d": "true"}, "evidence": {}}
        assert body["evaluated"] == 2
        assert not body["degenerate"]

    def test_degenerate_when_no_instance_meets_the_evidence(self, and_net, caplog):
        cutset = ["x1", "x2", "x3", "x4"]
        with caplog.at_level(logging.WARNING, logger="src.probinfer.bounded"):
            result = bounded_conditioning(and_net, {"x1": "true"}, {"y": "false"}, eps=0.2, cutset=cutset)
        assert result.instances == 1
        assert result.degenerate
        assert (result.bounds.lower, result.bounds.upper) == (0.0, pytest.approx(1.0))
        assert any("evidence mass" in record.getMessage() for record in caplog.records)

    def test_estimates_exact_on_polytree(self, and_net):
        estimates = stratum_estimates(epsilon_omp(and_net, 0.1))
        assert estimates["y"].tolist() == [0.0, 1.0]


class TestSearch:

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_bracket_under_every_strategy(self, prob_diamond, strategy):
        exact = exact_query(prob_diamond, {"d": "true"})
        result = poole_search(prob_diamond, {"d": "true"}, eps=0.1, strategy=strategy)
        assert result.bounds.lower <= exact + TOLERANCE
        assert result.bounds.upper >= exact - TOLERANCE
        assert_anytime(result.trace, exact)

    def test_unpruned_search_is_exact(self, chain_net):
        exact = exact_query(chain_net, {"x5": "false"})
        result = poole_search(chain_net, {"x5": "false"})
        assert result.bounds.lower == pytest.approx(exact, abs=TOLERANCE)
        assert result.bounds.upper == pytest.approx(exact, abs=TOLERANCE)
        assert result.leaves == 2 ** 5

    def test_evidence_restricts_expansion(self, and_net):
        exact = exact_query(and_net, {"x1": "true"}, {"y": "false"})
        result = poole_search(and_net, {"x1": "true"}, {"y": "false"})
        assert result.bounds.lower == pytest.approx(exact, abs=TOLERANCE)

    def test_lookahead_loss_equals_pruned_mass(self, chain_net):
        result = poole_search(chain_net, {"x5": "true"}, eps=0.05, strategy="lookahead")
        assert result.pruned_mass > 0
        for lost in result.loss.per_variable.values():
            assert lost == pytest.approx(result.pruned_mass, abs=TOLERANCE)

    def test_budget(self, chain_net):
        result = poole_search(chain_net, {"x5": "true"}, budget=3)
        assert result.expansions == 3
        assert len(result.trace) == 4

    def test_unknown_strategy(self, chain_net):
        with pytest.raises(ValueError):
            poole_search(chain_net, {"x5": "true"}, strategy="guess")

    def test_impossible_evidence(self, and_net):
        with pytest.raises(ImpossibleConditionError):
            poole_search(and_net, {"x1": "false"}, {"y": "true", "x2": "false"})
        with pytest.raises(ImpossibleConditionError):
            bounded_conditioning(and_net, {"x1": "false"}, {"y": "true", "x2": "false"})

    def test_preprune_warns_on_implausible_target(self, and_net, caplog):
        with caplog.at_level(logging.WARNING, logger="src.probinfer.search"):
            result = poole_search(and_net, {"x1": "false"}, eps=0.2, strategy="preprune")
        assert any("implausible" in record.getMessage() for record in caplog.records)
        assert result.bounds.lower == 0.0

    def test_plausible_target_does_not_warn(self, and_net, caplog):
        with caplog.at_level(logging.WARNING, logger="src.probinfer.search"):
            result = poole_search(and_net, {"x1": "true"}, eps=0.2, strategy="preprune")
        assert not caplog.records
        assert result.bounds.lower > 0.0


class TestRandomSuites:

    @pytest.mark.parametrize("seed", range(25))
    def test_bounds_hold_on_random_networks(self, seed):
        rng = np.random.default_rng(6000 + seed)
        pnet = random_prob_network(rng, int(rng.integers(3, 7)), shape="cyclic")
        last = pnet.topological_order()[-1]
        target = {last: pnet.variable(last).values[0]}
        exact = exact_query(pnet, target)
        for result in (bounded_conditioning(pnet, target, eps=0.1),
                       poole_search(pnet, target, eps=0.1, strategy="preprune")):
            assert_anytime(result.trace, exact)
        full = bounded_conditioning(pnet, target, eps=1e-6)
        assert full.bounds.lower == pytest.approx(exact, abs=TOLERANCE)

    @pytest.mark.parametrize("seed", range(20))
    def test_preprune_keeps_likely_targets(self, seed, caplog):
        rng = np.random.default_rng(6500 + seed)
        pnet = random_prob_network(rng, int(rng.integers(3, 7)), max_values=3, shape="cyclic")
        eps = 0.2
        for name in pnet.names:
            for value in pnet.variable(name).values:
                caplog.clear()
                with caplog.at_level(logging.WARNING, logger="src.probinfer.search"):
                    result = poole_search(pnet, {name: value}, eps=eps, strategy="preprune", record_timing=False)
                if exact_query(pnet, {name: value}) > eps:
                    warned = any("implausible" in record.getMessage() for record in caplog.records)
                    assert result.bounds.lower > 0.0 or warned
