import random

import pytest

from lpndetect import (
    Budget,
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    OMEGA,
    PathPattern,
    build_km_tree,
    build_reachability_graph,
    build_twin,
    coverable,
    estimate,
    search_pattern,
)
from lpndetect.explore import (
    km_nodes,
    replay_witness,
    strong_detectability_pattern,
    unobservable_cycle_pattern,
)
from lpndetect.net import InputError, leq

from netgen import random_net


class TestReachabilityGraph:
    def test_e1(self, e1):
        g = build_reachability_graph(e1, Budget(100, 100))
        assert len(g.markings) == 1
        assert len(g.edges) == 1
        assert g.complete

    def test_e2(self, e2):
        g = build_reachability_graph(e2, Budget(100, 100))
        assert sorted(g.markings) == [(0, 1), (1, 0)]
        assert sorted(g.edges) == [(0, "t1", 0), (0, "t2", 1), (1, "t3", 1)]
        assert g.complete

    def test_e3_truncates(self, e3):
        g = build_reachability_graph(e3, Budget(50, 50))
        assert len(g.markings) == 50
        assert not g.complete

    def test_bad_budget(self):
        with pytest.raises(InputError):
            Budget(0, 10)


class TestKarpMiller:
    def test_e1(self, e1):
        root = build_km_tree(e1)
        assert root.marking == (1,)
        assert [c.marking for c in root.children] == [(1,)]

    def test_e3_accelerates(self, e3):
        root = build_km_tree(e3)
        assert root.marking == (1, 0)
        assert root.children[0].marking == (1, OMEGA)

    def test_e4_coverability_semantics(self, e4):
        # both branches can pump their own place arbitrarily high
        assert coverable(e4, (1, 5, 0))
        assert coverable(e4, (1, 0, 5))
        assert coverable(e4, (1, 3, 3))
        assert not coverable(e4, (2, 0, 0))

    def test_coverable(self, e1, e3):
        assert coverable(e1, (1,))
        assert not coverable(e1, (2,))
        assert coverable(e3, (1, 5))

    def test_km_agrees_with_graph_on_bounded(self):
        rng = random.Random(31)
        checked = 0
        while checked < 20:
            net = random_net(rng)
            graph = build_reachability_graph(net, Budget(2000, 2000))
            if not graph.complete:
                continue
            checked += 1
            for _ in range(5):
                target = tuple(rng.randint(0, 2) for _ in net.places)
                brute = any(leq(target, m) for m in graph.markings)
                assert coverable(net, target) == brute


class TestSearchPattern:
    def test_e4_twin_fails_with_minimal_witness(self, e4):
        tw = build_twin(e4)
        pattern = strong_detectability_pattern(len(tw.net.places))
        v = search_pattern(tw.net, tw.net.initial_marking, pattern, Budget(200, 20))
        assert v.outcome == FAILS
        assert v.witness.segments == ((), ("(t,u)",), ())
        assert replay_witness(tw.net, tw.net.initial_marking, pattern, v.witness)

    def test_e1_twin_holds(self, e1):
        tw = build_twin(e1)
        pattern = strong_detectability_pattern(len(tw.net.places))
        v = search_pattern(tw.net, tw.net.initial_marking, pattern, Budget(1000, 50))
        assert v.outcome == HOLDS

    def test_e3_twin_inconclusive(self, e3):
        tw = build_twin(e3)
        pattern = strong_detectability_pattern(len(tw.net.places))
        v = search_pattern(tw.net, tw.net.initial_marking, pattern, Budget(200, 20))
        assert v.outcome == INCONCLUSIVE

    def test_unobservable_cycle_pattern_rejects_observable(self, e1):
        v = search_pattern(
            e1, e1.initial_marking, unobservable_cycle_pattern(), Budget(100, 100)
        )
        assert v.outcome == HOLDS

    def test_malformed_pattern(self):
        with pytest.raises(InputError):
            PathPattern(segment_count=5, lengths=("any",) * 5)
        with pytest.raises(InputError):
            PathPattern(segment_count=3, covering=((1, 3),), lengths=("any",) * 3)
        with pytest.raises(InputError):
            PathPattern(segment_count=2, lengths=("any", "weird"))

    def test_fails_witness_always_replays(self):
        rng = random.Random(41)
        found = 0
        while found < 15:
            net = random_net(rng)
            tw = build_twin(net)
            pattern = strong_detectability_pattern(len(tw.net.places))
            v = search_pattern(
                tw.net, tw.net.initial_marking, pattern, Budget(400, 30)
            )
            if v.outcome != FAILS:
                continue
            found += 1
            assert replay_witness(tw.net, tw.net.initial_marking, pattern, v.witness)
            # covering-constraint soundness, checked independently here
            boundary = [tuple(tw.net.initial_marking)] + list(v.witness.markings)
            for i, j in pattern.covering:
                assert leq(boundary[i], boundary[j])

    def test_holds_only_when_complete(self):
        # on truncated state spaces the search may fail or stay inconclusive,
        # never claim absence
        rng = random.Random(43)
        for _ in range(20):
            net = random_net(rng)
            graph = build_reachability_graph(net, Budget(30, 10))
            if graph.complete:
                continue
            v = search_pattern(
                net, net.initial_marking, unobservable_cycle_pattern(), Budget(30, 10)
            )
            if not any(not net.is_observable(t) for t in net.transitions):
                continue  # trivially decided without exploration
            assert v.outcome in (FAILS, INCONCLUSIVE)


class TestEstimate:
    def test_e2_word_aa(self, e2, budget):
        est, complete = estimate(e2, ("a", "a"), budget)
        assert complete
        assert est == frozenset({(1, 0), (0, 1)})

    def test_empty_word_closure(self, budget):
        from lpndetect import make_net
        from lpndetect.net import EPSILON

        net = make_net(
            ["p", "q"],
            {"u": (EPSILON, {"p": 1}, {"q": 1}), "t": ("a", {"q": 1}, {"q": 1})},
            {"p": 1},
        )
        est, complete = estimate(net, (), budget)
        assert complete
        assert est == frozenset({(1, 0), (0, 1)})

    def test_unknown_symbol(self, e1, budget):
        with pytest.raises(InputError):
            estimate(e1, ("z",), budget)
