import random

import pytest

from evcgame import engine
from evcgame.engine import (Budget, BudgetExceededError, ExactAttacker,
                            ExactDefender, GreedyDefender, RandomAttacker,
                            UnsafeConfigError, attacker_policy_step,
                            defender_policy_step, evc_exact,
                            is_legal_transition, legal_transition_brute,
                            render_safe_set, render_trace, safe_set, simulate,
                            validate_plan, vertex_covers_of_size)
from evcgame.graphs import Graph, is_vertex_cover, mask_of, set_of
from support import clique_graph, cycle_graph, path_graph, random_graph


@pytest.fixture
def p3():
    return Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.fixture
def c4():
    return Graph(["v1", "v2", "v3", "v4"],
                 [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v1", "v4")])


class TestLegalTransition:
    def test_single_guard_crosses(self, p3):
        i = p3.index
        plan = is_legal_transition(p3, {i("b")}, {i("a")}, (i("a"), i("b")))
        assert plan is not None and plan.crossing == (i("b"), i("a"))

    def test_no_crossing(self, p3):
        i = p3.index
        assert is_legal_transition(p3, {i("b")}, {i("c")},
                                   (i("a"), i("b"))) is None

    def test_c4_double_shift(self, c4):
        j = c4.index
        plan = is_legal_transition(c4, {j("v1"), j("v3")}, {j("v2"), j("v4")},
                                   (j("v1"), j("v2")))
        assert plan is not None
        validate_plan(c4, {j("v1"), j("v3")}, {j("v2"), j("v4")},
                      (j("v1"), j("v2")), plan)

    def test_size_mismatch(self, p3):
        with pytest.raises(ValueError):
            is_legal_transition(p3, {0}, {0, 1}, (0, 1))

    def test_not_an_edge(self, p3):
        i = p3.index
        with pytest.raises(Exception):
            is_legal_transition(p3, {i("b")}, {i("b")}, (i("a"), i("c")))

    def test_oracle_agreement_random(self):
        rng = random.Random(42)
        for _ in range(400):
            n = rng.randint(2, 7)
            g = random_graph(rng, n, 0.5)
            if not g.edges:
                continue
            size = rng.randint(1, min(5, n))
            c = frozenset(rng.sample(range(n), size))
            c2 = frozenset(rng.sample(range(n), size))
            e = rng.choice(g.edges)
            fast = is_legal_transition(g, c, c2, e)
            slow = legal_transition_brute(g, c, c2, e)
            assert (fast is None) == (slow is None)
            if fast is not None:
                validate_plan(g, c, c2, e, fast)


class TestCoverStream:
    def test_p3(self, p3):
        assert [sorted(c) for c in vertex_covers_of_size(p3, 1)] == [[1]]

    def test_k3_pairs(self):
        assert len(list(vertex_covers_of_size(clique_graph(3), 2))) == 3

    def test_p4_exactly_three(self):
        p4 = path_graph(4)
        covers = [frozenset(c) for c in vertex_covers_of_size(p4, 2)]
        assert len(covers) == 3
        assert frozenset({0, 1}) not in covers
        assert frozenset({1, 2}) in covers

    def test_ascending_bit_patterns(self):
        masks = [mask_of(c) for c in vertex_covers_of_size(cycle_graph(5), 3)]
        assert masks == sorted(masks)

    def test_budget(self):
        g = Graph.from_indices(40, [(0, 1)])
        with pytest.raises(BudgetExceededError):
            list(vertex_covers_of_size(g, 20, Budget(configs=1000)))


class TestSafeSet:
    def test_p3_one_guard_dies(self, p3):
        assert len(safe_set(p3, 1)) == 0

    def test_p3_two_guards_live(self, p3):
        assert len(safe_set(p3, 2)) > 0

    def test_k2_both_singletons(self):
        k2 = Graph(["a", "b"], [("a", "b")])
        assert sorted(safe_set(k2, 1).members) == [1, 2]

    def test_fixed_point_and_policy_closure(self, c4):
        s = safe_set(c4, 2)
        members = set(s.members)
        for c in s.members:
            cs = set_of(c)
            for e in c4.edges:
                plan, nxt = s.policy[(c, e)]
                assert nxt in members
                validate_plan(c4, cs, set_of(nxt), e, plan)

    def test_policy_successor_is_lex_smallest(self, c4):
        s = safe_set(c4, 2)
        members = sorted(s.members)
        for c in s.members:
            for e in c4.edges:
                _plan, nxt = s.policy[(c, e)]
                for cand in members:
                    if cand >= nxt:
                        break
                    assert is_legal_transition(c4, set_of(c), set_of(cand),
                                               e) is None

    def test_killers_recorded(self, p3):
        s = safe_set(p3, 1)
        assert set(s.killers) == {2}  # the only cover {b}
        assert s.killers[2] in p3.edges


class TestEvc:
    def test_k2(self):
        assert evc_exact(Graph(["a", "b"], [("a", "b")])).evc == 1

    @pytest.mark.parametrize("q", [3, 4, 5])
    def test_cliques(self, q):
        assert evc_exact(clique_graph(q)).evc == q - 1

    def test_p3(self, p3):
        res = evc_exact(p3)
        assert res.evc == 2 and res.mvc == 1
        assert res.win_profile == {1: False, 2: True}
        assert not res.warnings

    def test_k_max_truncates(self, p3):
        res = evc_exact(p3, k_max=1)
        assert res.evc is None and res.win_profile == {1: False}

    def test_edgeless(self):
        res = evc_exact(Graph(["a", "b"], []))
        assert res.evc == 0 and res.mvc == 0


class TestPolicies:
    def test_defender_step(self, c4):
        s = safe_set(c4, 2)
        j = c4.index
        plan, nxt = defender_policy_step(s, {j("v1"), j("v3")},
                                         (j("v1"), j("v2")))
        assert is_vertex_cover(c4, nxt)
        assert mask_of(nxt) in set(s.members)

    def test_defender_step_unsafe_rejected(self, c4):
        s = safe_set(c4, 2)
        j = c4.index
        with pytest.raises(UnsafeConfigError):
            # {v1,v2} leaves (v3,v4) uncovered, so it is not in the safe set
            defender_policy_step(s, {j("v1"), j("v2")}, (j("v1"), j("v2")))

    def test_attacker_uncovered_edge(self, c4):
        j = c4.index
        e = attacker_policy_step(c4, 2, {j("v1"), j("v2")})
        assert e == (j("v3"), j("v4"))

    def test_attacker_killer(self, p3):
        e = attacker_policy_step(p3, 1, {p3.index("b")})
        assert e in p3.edges

    def test_attacker_rejects_safe(self, c4):
        j = c4.index
        s = safe_set(c4, 2)
        with pytest.raises(UnsafeConfigError):
            attacker_policy_step(c4, 2, {j("v1"), j("v3")}, s)


class TestSimulation:
    def test_k2_survives(self):
        k2 = Graph(["a", "b"], [("a", "b")])
        r = simulate(k2, 1, ExactDefender(safe_set(k2, 1)), RandomAttacker(),
                     100, seed=1, validate=True)
        assert r.verdict == "defender-survived"

    def test_p3_doomed_with_one_guard(self, p3):
        r = simulate(p3, 1, GreedyDefender(1), ExactAttacker(p3, 1), 10,
                     seed=0, validate=True)
        assert r.verdict == "defender-lost" and r.lost_round <= 2

    def test_p3_two_guards_survive_seeded(self, p3):
        r = simulate(p3, 2, ExactDefender(safe_set(p3, 2)), RandomAttacker(),
                     1000, seed=7, validate=True)
        assert r.verdict == "defender-survived"

    def test_exact_policies_endure(self):
        for g, k in [(cycle_graph(4), 2), (path_graph(3), 2),
                     (cycle_graph(5), 3)]:
            s = safe_set(g, k)
            r = simulate(g, k, ExactDefender(s), RandomAttacker(), 10_000,
                         seed=13, record_trace=False)
            assert r.verdict == "defender-survived"

    def test_deterministic_given_seed(self, c4):
        s = safe_set(c4, 2)
        runs = [simulate(c4, 2, ExactDefender(s), RandomAttacker(), 50, seed=3)
                for _ in range(2)]
        assert [st.config_after for st in runs[0].trace] == \
               [st.config_after for st in runs[1].trace]


class TestRendering:
    def test_trace_format(self, c4):
        s = safe_set(c4, 2)
        r = simulate(c4, 2, ExactDefender(s), RandomAttacker(), 3, seed=0)
        text = render_trace(c4, r.trace)
        lines = text.strip().splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("1, ")
        assert lines[0].count(",") == 3

    def test_safe_set_dump(self, c4):
        s = safe_set(c4, 2)
        text = render_safe_set(s)
        head = text.splitlines()[0]
        assert head == f"safe k=2 count={len(s.members)}"
        assert len(text.strip().splitlines()) == len(s.members) + 1
