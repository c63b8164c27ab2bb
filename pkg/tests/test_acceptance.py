"""
Randomized acceptance suites against the brute-force oracles

Run with `pytest -m acceptance`; each block of seeds is one test case.
"""
import itertools
import math

import numpy as np
import pytest

from src.abstraction import epsilon_omp, generate_chain, kappa_array
from src.config import Config
from src.errors import CapExceededError
from src.experiment import ExperimentRunner, load_config
from src.experiment.random_networks import random_kappa_network, random_prob_network
from src.model import apply_actions
from src.plausibility import check_complete, exact_plausible_sets, predict, scomplete
from src.plausibility.predict import believed_names
from src.probinfer import ProbabilityOracle, bounded_conditioning, exact_query, poole_search

from .conftest import build_diamond
from .test_probinfer import TOLERANCE, assert_anytime

pytestmark = pytest.mark.acceptance

BLOCKS = 10


def random_interventions(rng, net):
    """Root evidence on a finitely ranked value and, half the time, one action on a non-root"""
    roots = [name for name in net.names if net.structure.is_root(name)]
    root = roots[int(rng.integers(len(roots)))]
    ranks = net.tables[root].array
    finite = [i for i, k in enumerate(ranks) if not math.isinf(k)]
    evidence = {root: net.variable(root).values[int(rng.choice(finite))]}

    actions = {}
    others = [name for name in net.names if name not in evidence]
    if others and rng.random() < 0.5:
        name = others[int(rng.integers(len(others)))]
        actions[name] = net.variable(name).values[int(rng.integers(net.variable(name).size))]
    return evidence, actions


def soundness_networks(block):
    rng = np.random.default_rng(10_000 + block)
    for _ in range(100):
        net = random_kappa_network(rng, int(rng.integers(3, 11)), max_values=3, max_parents=3, shape="cyclic")
        yield rng, net


class TestPlausibility:

    @pytest.mark.parametrize("block", range(BLOCKS))
    def test_predict_is_sound(self, block):
        for rng, net in soundness_networks(block):
            plsets, _ = predict(net)
            exact = exact_plausible_sets(net)
            assert all(exact[name] <= plsets[name] for name in net.names)

            evidence, actions = random_interventions(rng, net)
            plsets, _ = predict(net, evidence, actions)
            exact = exact_plausible_sets(apply_actions(net, actions), evidence)
            assert all(exact[name] <= plsets[name] for name in net.names)

    @pytest.mark.parametrize("block", range(BLOCKS))
    def test_certified_runs_are_exact(self, block):
        for _, net in soundness_networks(block):
            plsets, _ = predict(net)
            if check_complete(net, believed_names(plsets)).complete:
                assert plsets.as_sets() == exact_plausible_sets(net)

    @pytest.mark.parametrize("block", range(5))
    def test_polytrees_are_complete(self, block):
        rng = np.random.default_rng(20_000 + block)
        for _ in range(100):
            net = random_kappa_network(rng, int(rng.integers(2, 10)), shape="polytree")
            plsets, _ = predict(net)
            assert plsets.as_sets() == exact_plausible_sets(net)

    @pytest.mark.parametrize("block", range(5))
    def test_definite_networks_are_complete(self, block):
        rng = np.random.default_rng(30_000 + block)
        for index in range(100):
            shape = "cyclic" if index % 2 else "dag"
            net = random_kappa_network(rng, int(rng.integers(3, 9)), shape=shape, definite=True)
            plsets, _ = predict(net)
            assert plsets.as_sets() == exact_plausible_sets(net)

    @pytest.mark.parametrize("block", range(3))
    def test_scomplete_is_exact(self, block):
        rng = np.random.default_rng(40_000 + block)
        for _ in range(100):
            net = random_kappa_network(rng, int(rng.integers(4, 9)), shape="cyclic")
            try:
                result = scomplete(net, cs_cap=Config.CS_CAP)
            except CapExceededError:
                continue
            exact = exact_plausible_sets(net)
            assert result.plsets.as_sets() == exact
            previous, _ = predict(net)
            for stage in result.stages:
                for name in net.names:
                    assert exact[name] <= stage.plsets[name] <= previous[name]
                previous = stage.plsets

    def test_diamond_incompleteness_witness(self):
        diamond = build_diamond()
        plsets, _ = predict(diamond)
        assert plsets["d"] == {"true", "false"}
        assert exact_plausible_sets(diamond)["d"] == {"true"}
        assert scomplete(diamond).plsets["d"] == {"true"}


class TestAbstraction:

    def test_bracketing_over_many_pairs(self):
        rng = np.random.default_rng(50_000)
        for eps in rng.uniform(0.01, 0.95, size=100):
            p = np.exp(rng.uniform(np.log(1e-15), 0.0, size=1000))
            k = kappa_array(p, eps)
            assert (p <= eps ** k * (1 + 1e-12)).all()
            assert (p > eps ** (k + 1)).all()

    @pytest.mark.parametrize("eps", [0.5, 0.3, 0.1, 0.05])
    def test_exact_powers(self, eps):
        k = np.arange(0, 20)
        assert kappa_array(eps ** k, eps).tolist() == k.astype(float).tolist()


def prob_networks(block, count=100):
    rng = np.random.default_rng(60_000 + block)
    for index in range(count):
        shape = "cyclic" if index % 3 else "dag"
        pnet = random_prob_network(rng, int(rng.integers(3, 8)), max_values=3, shape=shape)
        last = pnet.topological_order()[-1]
        yield pnet, {last: pnet.variable(last).values[0]}


class TestAnytimeInference:

    @pytest.mark.parametrize("block", range(3))
    def test_bounds_bracket_the_exact_answer(self, block):
        for pnet, target in prob_networks(block):
            exact = exact_query(pnet, target)
            for eps in (0.2, 0.05):
                assert_anytime(bounded_conditioning(pnet, target, eps=eps, record_timing=False).trace, exact)
                for strategy in ("preprune", "lookahead"):
                    result = poole_search(pnet, target, eps=eps, strategy=strategy, record_timing=False)
                    assert_anytime(result.trace, exact)

            full = bounded_conditioning(pnet, target, eps=1e-9, record_timing=False)
            assert full.bounds.lower == pytest.approx(exact, abs=TOLERANCE)
            assert full.bounds.upper == pytest.approx(exact, abs=TOLERANCE)
            unpruned = poole_search(pnet, target, record_timing=False)
            assert unpruned.bounds.lower == pytest.approx(exact, abs=TOLERANCE)
            assert unpruned.bounds.upper == pytest.approx(exact, abs=TOLERANCE)

    @pytest.mark.parametrize("block", range(3))
    def test_loss_equals_pruned_mass(self, block):
        for pnet, target in prob_networks(block):
            result = bounded_conditioning(pnet, target, eps=0.2, record_timing=False)
            if not any(result.pruned.values()):
                continue
            oracle = ProbabilityOracle(pnet)
            kept = sum(oracle.probability(dict(zip(result.cutset, values)))
                       for values in itertools.product(*(
                           [v for v in pnet.variable(name).values if v not in result.pruned[name]]
                           for name in result.cutset)))
            pruned_mass = 1.0 - kept
            for name in pnet.names:
                assert result.loss.per_variable[name] == pytest.approx(pruned_mass, abs=TOLERANCE)
                for value in pnet.variable(name).values:
                    share = sum(oracle.probability({name: value, **dict(zip(result.cutset, values))})
                                for values in itertools.product(*(
                                    [v for v in pnet.variable(n).values if v not in result.pruned[n]]
                                    for n in result.cutset))
                                if dict(zip(result.cutset, values)).get(name, value) == value)
                    exact = oracle.probability({name: value})
                    assert share <= exact + TOLERANCE
                    assert exact <= share + result.loss.per_variable[name] + TOLERANCE


class TestExperimentTrend:

    def test_loss_shrinks_with_epsilon(self):
        config = load_config(Config.BASE_DIR / "experiments" / "lm_trend.json")
        frame = ExperimentRunner().run(config)
        assert len(frame) == 60
        for _, rows in frame.groupby("network", sort=False):
            losses = rows.sort_values("eps", ascending=False)["LM"].tolist()
            assert all(later <= earlier + 1e-12 for earlier, later in zip(losses, losses[1:]))
        means = frame.groupby("eps")["LM"].mean().sort_index(ascending=False).tolist()
        assert all(later <= earlier + 1e-12 for earlier, later in zip(means, means[1:]))


class TestComplexity:

    def test_doubling_chain_doubles_the_counter(self):
        totals = {}
        for n in (40, 80, 160, 320):
            _, counter = predict(epsilon_omp(generate_chain(n, 0.1), 0.1))
            totals[n] = counter.total
        for n in (40, 80, 160):
            assert 1.8 <= totals[2 * n] / totals[n] <= 2.2

    def test_counter_linear_in_edges(self):
        rng = np.random.default_rng(70_000)
        sizes, totals = [], []
        for n_vars in range(5, 41, 5):
            net = random_kappa_network(rng, n_vars, max_values=2, max_parents=2, shape="polytree")
            _, counter = predict(net)
            sizes.append(len(net.structure.edges) + n_vars)
            totals.append(counter.total)
        slope, intercept = np.polyfit(sizes, totals, 1)
        residuals = np.asarray(totals) - (slope * np.asarray(sizes) + intercept)
        assert slope > 0
        assert np.abs(residuals).max() <= 0.25 * max(totals)
