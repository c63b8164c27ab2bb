"""Predict sweep"""
import numpy as np
import pytest

from src.abstraction import epsilon_omp, generate_chain
from src.errors import AssignmentError, EvidenceError, InconsistentEvidenceError, NetworkValidationError
from src.experiment.random_networks import random_kappa_network
from src.model import parse_network
from src.plausibility import (APPROXIMATE, OpCounter, PlausibleSetMap, believed_nodes, exact_plausible_sets,
                              predict)
from src.plausibility.predict import believed_names, clamped_sweep, prepare


class TestFixtures:

    def test_n1_believes_everything_false(self, n1):
        plsets, _ = predict(n1)
        assert plsets.as_sets() == {"rain": {"false"}, "sprinkler": {"false"}, "wet": {"false"}}
        assert plsets.provenance == APPROXIMATE

    def test_n1_believed_nodes(self, n1):
        plsets, _ = predict(n1)
        assert believed_nodes(plsets) == {("rain", "false"), ("sprinkler", "false"), ("wet", "false")}

    def test_diamond_leaves_d_open(self, diamond):
        plsets, _ = predict(diamond)
        assert plsets["d"] == {"true", "false"}
        assert exact_plausible_sets(diamond)["d"] == {"true"}
        assert believed_nodes(plsets) == set()

    def test_root_evidence(self, n1):
        plsets, _ = predict(n1, evidence={"rain": "true"})
        assert plsets["rain"] == {"true"}
        assert plsets["wet"] == {"true"}

    def test_action_forces_value(self, n1):
        plsets, _ = predict(n1, actions={"wet": "true"})
        assert plsets["wet"] == {"true"}
        assert plsets["rain"] == {"false"}

    def test_evidence_on_acted_variable_is_a_root(self, diamond):
        plsets, _ = predict(diamond, evidence={"b": "true"}, actions={"b": "true"})
        assert plsets["b"] == {"true"}


class TestErrors:

    def test_evidence_on_non_root(self, n1):
        with pytest.raises(EvidenceError):
            predict(n1, evidence={"wet": "true"})

    def test_unknown_value(self, n1):
        with pytest.raises(AssignmentError):
            predict(n1, evidence={"rain": "sometimes"})

    def test_impossible_evidence(self):
        net = parse_network({
            "kind": "kappa",
            "variables": [{"name": "a", "values": ["x", "y"]}],
            "tables": [{"child": "a", "rows": [{"given": [], "values": {"x": 0, "y": "inf"}}]}],
        })
        with pytest.raises(InconsistentEvidenceError):
            predict(net, evidence={"a": "y"})

    def test_probability_network_rejected(self, chain_net):
        with pytest.raises(NetworkValidationError) as err:
            predict(chain_net)
        assert err.value.location == "kind"


class TestClamping:

    def test_clamp_consistent(self, diamond):
        surgered, evidence = prepare(diamond)
        plsets, conflicts = clamped_sweep(surgered, evidence, {"a": "true"})
        assert conflicts == []
        assert plsets["d"] == {"true"}

    def test_clamp_conflict_reported(self, n1):
        surgered, evidence = prepare(n1)
        plsets, conflicts = clamped_sweep(surgered, evidence, {"wet": "true"})
        assert conflicts == ["wet"]
        assert plsets["wet"] == {"true"}


class TestPlausibleSetMap:

    def test_ordered_follows_declaration(self, diamond):
        plsets, _ = predict(diamond)
        assert plsets.ordered("a") == ["true", "false"]
        assert list(plsets) == ["a", "b", "c", "d"]
        assert plsets.to_dict()["plausible"]["d"] == ["true", "false"]

    def test_rejects_empty_set(self, n1):
        with pytest.raises(ValueError):
            PlausibleSetMap(n1, {"rain": set(), "sprinkler": {"false"}, "wet": {"false"}})

    def test_equality_ignores_provenance(self, n1):
        plsets, _ = predict(n1)
        assert plsets == plsets.with_provenance("complete-certified")


class TestSoundness:

    @pytest.mark.parametrize("seed", range(40))
    def test_exact_sets_are_contained(self, seed):
        rng = np.random.default_rng(seed)
        net = random_kappa_network(rng, int(rng.integers(2, 7)), shape="dag")
        plsets, _ = predict(net)
        for name, values in exact_plausible_sets(net).items():
            assert values <= plsets[name]

    @pytest.mark.parametrize("seed", range(20))
    def test_believed_value_is_exact(self, seed):
        rng = np.random.default_rng(seed)
        net = random_kappa_network(rng, 6, shape="cyclic")
        plsets, _ = predict(net)
        exact = exact_plausible_sets(net)
        for name in believed_names(plsets):
            assert exact[name] == plsets[name]


class TestOpCounter:

    def test_counts_lookups_and_edges(self, n1):
        _, counter = predict(n1)
        # two roots, one family row reached through two parent edges
        assert counter.lookups == 3
        assert counter.edge_visits == 2
        assert counter.to_dict() == {"lookups": 3, "edge_visits": 2, "total": 5}

    def test_accumulates(self, n1):
        counter = OpCounter()
        predict(n1, counter=counter)
        predict(n1, counter=counter)
        assert counter.total == 10

    def test_linear_in_chain_length(self):
        totals = []
        for n in (50, 100, 200):
            _, counter = predict(epsilon_omp(generate_chain(n, 0.1), 0.1))
            totals.append(counter.total)
        assert abs(totals[1] / totals[0] - 2.0) <= 0.2
        assert abs(totals[2] / totals[1] - 2.0) <= 0.2
