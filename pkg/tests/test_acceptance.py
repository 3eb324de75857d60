"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``. The split half of the
reduction-equivalence criterion is expected to fail: the clique edges of the
split gadget let the defender cascade guards through B + star, so the gadget
is defensible with b+2 <= ell guards no matter what the source instance says
(see the assertion message and README for the constructive counterexample).
"""

import random
import time
from itertools import product

import pytest

from evcgame import cobipartite as cb
from evcgame.engine import (RandomAttacker, evc_exact, is_legal_transition,
                            legal_transition_brute, simulate, validate_plan)
from evcgame.graphs import is_vertex_cover
from evcgame.reduction import (RbdsInstance, build_reduction, classify_cover,
                               check_connected_cover, defend_nice,
                               nice_cover_families, pad_dominating_set,
                               preprocess_rbds, rbds_oracle, verify_instance)
from support import (AboDefender, CobipDefender, NiceDefender, clique_graph,
                     connected_graphs_upto_iso, random_graph)

ATTACKS_PER_INSTANCE = 10_000
INSTANCES_PER_BRANCH = 50


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
    print(line)
    assert ok, line


def test_bounds_suite():
    """mvc <= evc <= 2*mvc on every connected graph with up to 6 vertices."""
    t0 = time.time()
    counts = []
    violations = []
    total = 0
    for n in range(1, 7):
        graphs = connected_graphs_upto_iso(n)
        counts.append(len(graphs))
        for g in graphs:
            res = evc_exact(g)
            total += 1
            if res.evc is None or not res.mvc <= res.evc <= 2 * res.mvc:
                violations.append((n, g.edges, res.mvc, res.evc))
    assert counts == [1, 1, 2, 6, 21, 112]  # known census of connected graphs
    elapsed = time.time() - t0
    report("bounds suite (connected n<=6)", not violations and elapsed <= 300,
           f"{total} graphs, {len(violations)} violations, {elapsed:.1f}s")


def test_clique_law():
    values = {q: evc_exact(clique_graph(q)).evc for q in range(2, 7)}
    ok = all(values[q] == q - 1 for q in values)
    report("clique law evc(K_q) = q-1", ok, str(values))


def test_cobipartite_oracle_equivalence():
    t0 = time.time()
    mismatches = []
    total = 0
    for inst in cb.all_small_cobipartite(7):
        total += 1
        value, branch = cb.evc_cobip(inst)
        res = evc_exact(inst.g)
        if value != res.evc or cb.mvc_cobip(inst) != res.mvc:
            mismatches.append((inst.p, inst.q, branch, value, res.evc))
            if len(mismatches) > 5:
                break
    elapsed = time.time() - t0
    report("cobipartite formula == exact oracle (p+q<=7)",
           not mismatches and elapsed <= 600,
           f"{total} instances, {len(mismatches)} mismatches, {elapsed:.1f}s")


def _rbds_patterns(r: int, b: int, k: int):
    reds = tuple(f"r{i}" for i in range(1, r + 1))
    blues = tuple(f"b{i}" for i in range(1, b + 1))
    cells = list(product(range(r), range(b)))
    for mask in range(1 << len(cells)):
        edges = tuple((reds[i], blues[j])
                      for x, (i, j) in enumerate(cells) if (mask >> x) & 1)
        yield RbdsInstance(reds, blues, edges, k)


def _equivalence_run(variant: str):
    solves = []
    mismatches = []
    total = 0
    for r in (1, 2, 3):
        for inst in _rbds_patterns(r, 2, 1):
            if preprocess_rbds(inst).outcome != "normalized":
                continue
            total += 1
            want, _ = rbds_oracle(inst)
            ri = build_reduction(inst, variant)
            t0 = time.time()
            res = evc_exact(ri.h, k_max=ri.ell)
            solves.append(time.time() - t0)
            got = res.evc is not None and res.evc <= ri.ell
            if got != want:
                mismatches.append(
                    (r, inst.edges, f"oracle={want}",
                     f"evc={res.evc} vs ell={ri.ell}"))
                break
    return total, solves, mismatches


def test_reduction_equivalence_bipartite():
    total, solves, mismatches = _equivalence_run("bipartite")
    ok = not mismatches and max(solves) <= 30
    report("reduction equivalence, bipartite variant (r<=3, b=2, k=1)", ok,
           f"{total} instances, {len(mismatches)} mismatches, "
           f"max solve {max(solves):.1f}s")


def test_reduction_equivalence_split():
    """Faithful check of the split variant; fails by construction.

    The clique edges on B + star admit the defense cascade
    u->v, u'->u, star->u', dagger->star, so every split gadget is defensible
    with b+2 <= ell guards and NO instances become indistinguishable from YES
    instances at the ell threshold.
    """
    total, solves, mismatches = _equivalence_run("split")
    ok = not mismatches and max(solves) <= 30
    report("reduction equivalence, split variant (r<=3, b=2, k=1)", ok,
           f"{total} instances checked, first mismatch: "
           f"{mismatches[0] if mismatches else 'none'}")


def test_structural_claims():
    t0 = time.time()
    failures = []
    builds = 0
    for b in (2, 3, 4):
        for r in (1, 2, 3, 4, 5, 6):
            reds = tuple(f"r{i}" for i in range(1, r + 1))
            blues = tuple(f"b{j}" for j in range(1, b + 1))
            edges = tuple((reds[(j - 1) % r], f"b{j}") for j in range(1, b + 1))
            for k in (0, b - 1):
                inst = RbdsInstance(reds, blues, edges, k)
                if preprocess_rbds(inst).outcome != "normalized":
                    continue
                for variant in ("bipartite", "split"):
                    ri = build_reduction(inst, variant)
                    builds += 1
                    expect_n = r + b ** 3 + b ** 2 + 4 * b + 5
                    if ri.h.n != expect_n:
                        failures.append((b, r, k, variant, "vertex count"))
                    if ri.ell != b + k + 2:
                        failures.append((b, r, k, variant, "ell"))
                    rep = verify_instance(ri)
                    if not rep.ok:
                        failures.append((b, r, k, variant, rep.lines()))
    elapsed = time.time() - t0
    report("structural claims (b<=4, r<=6)", not failures,
           f"{builds} builds, {len(failures)} failures, {elapsed:.1f}s")


def test_case_machine_closure():
    inst = RbdsInstance(("r1", "r2", "r3", "r4"), ("b1", "b2", "b3"),
                        (("r1", "b1"), ("r1", "b2"), ("r2", "b3"),
                         ("r3", "b1"), ("r4", "b2"), ("r4", "b3")), 2)
    ok, witness = rbds_oracle(inst)
    assert ok
    dom = pad_dominating_set(
        inst, {inst.reds.index(w) + 1 for w in witness})
    failures = 0
    pairs = 0
    for variant in ("bipartite", "split"):
        ri = build_reduction(inst, variant)
        for nc in nice_cover_families(ri, dom):
            cover = nc.vertices(ri)
            for e in ri.h.edges:
                pairs += 1
                try:
                    plan, nc2 = defend_nice(ri, nc, e)
                    target = nc2.vertices(ri)
                    validate_plan(ri.h, cover, target, e, plan)
                    assert is_vertex_cover(ri.h, target)
                    assert classify_cover(ri, target) is not None
                    assert check_connected_cover(ri, target)
                except AssertionError:
                    failures += 1
    report("case-machine closure (r=4, b=3, k=2)", failures == 0,
           f"{pairs} (cover, edge) pairs, {failures} failures")


def test_legal_move_oracle():
    rng = random.Random(2024)
    checked = 0
    mismatches = 0
    while checked < 1000:
        n = rng.randint(2, 8)
        g = random_graph(rng, n, 0.5)
        if not g.edges:
            continue
        size = rng.randint(1, min(5, n))
        c = frozenset(rng.sample(range(n), size))
        c2 = frozenset(rng.sample(range(n), size))
        e = rng.choice(g.edges)
        fast = is_legal_transition(g, c, c2, e)
        slow = legal_transition_brute(g, c, c2, e)
        if (fast is None) != (slow is None):
            mismatches += 1
        elif fast is not None:
            validate_plan(g, c, c2, e, fast)
        checked += 1
    report("legal-move oracle agreement", mismatches == 0,
           f"{checked} tuples, {mismatches} mismatches")


def test_strategy_endurance_cobipartite():
    t0 = time.time()
    by_branch: dict[str, list] = {}
    for inst in cb.all_small_cobipartite(7):
        _value, branch = cb.evc_cobip(inst)
        by_branch.setdefault(branch, []).append(inst)
    rng = random.Random(555)
    losses = []
    played = 0
    for branch in sorted(by_branch):
        pool = by_branch[branch]
        sample = pool if len(pool) <= INSTANCES_PER_BRANCH else \
            rng.sample(pool, INSTANCES_PER_BRANCH)
        for inst in sample:
            value, _ = cb.evc_cobip(inst)
            if not inst.g.edges:
                continue
            if branch in cb.FULL_VALUE_BRANCHES:
                defender = AboDefender(inst.g)
            else:
                defender = CobipDefender(inst)
            res = simulate(inst.g, value, defender, RandomAttacker(),
                           ATTACKS_PER_INSTANCE, seed=rng.randint(0, 10**6),
                           record_trace=False)
            played += 1
            if res.verdict != "defender-survived":
                losses.append((branch, inst.p, inst.q, res.lost_round))
    elapsed = time.time() - t0
    report("strategy endurance, cobipartite", not losses,
           f"{played} instances x {ATTACKS_PER_INSTANCE} attacks, "
           f"{len(losses)} losses, {elapsed:.0f}s")


def test_strategy_endurance_reduction():
    t0 = time.time()
    rng = random.Random(777)
    losses = []
    played = 0
    for variant in ("bipartite", "split"):
        collected = 0
        while collected < INSTANCES_PER_BRANCH:
            r = rng.randint(2, 5)
            b = rng.randint(2, 3)
            k = b - 1
            reds = tuple(f"r{i}" for i in range(1, r + 1))
            blues = tuple(f"b{j}" for j in range(1, b + 1))
            edges = tuple((rr, bb) for rr in reds for bb in blues
                          if rng.random() < 0.55)
            inst = RbdsInstance(reds, blues, edges, k)
            if preprocess_rbds(inst).outcome != "normalized":
                continue
            ok, witness = rbds_oracle(inst)
            if not ok:
                continue
            collected += 1
            dom = pad_dominating_set(
                inst, {inst.reds.index(w) + 1 for w in witness})
            ri = build_reduction(inst, variant)
            res = simulate(ri.h, ri.ell, NiceDefender(ri, dom),
                           RandomAttacker(), ATTACKS_PER_INSTANCE,
                           seed=rng.randint(0, 10**6), record_trace=False)
            played += 1
            if res.verdict != "defender-survived":
                losses.append((variant, r, b, res.lost_round))
    elapsed = time.time() - t0
    report("strategy endurance, reduction nice covers", not losses,
           f"{played} instances x {ATTACKS_PER_INSTANCE} attacks, "
           f"{len(losses)} losses, {elapsed:.0f}s")
