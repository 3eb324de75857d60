"""Exact desk-scale solver for the eternal vertex cover game.

A configuration is a set of guarded vertices (one guard per vertex). A round
attacks an edge (u, v); every guard may stay or move to a neighbor, at least
one guard must traverse the attacked edge, and the guards must again occupy
pairwise distinct vertices. The defender's winning region with k guards is the
greatest fixed point of an elimination sweep over all size-k vertex covers:
delete any configuration for which some attack admits no legal transition into
a surviving configuration, until stable.

Configurations are integer bitmasks internally; the public surface accepts and
returns frozensets of vertex indices.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional

from .graphs import Graph, bits, is_vertex_cover, mask_of, mvc_exact, set_of

Config = frozenset[int]
Edge = tuple[int, int]

DEFAULT_CONFIG_BUDGET = 10**6
DEFAULT_TRANSITION_BUDGET = 10**8
DEFAULT_MVC_LIMIT = 24


class BudgetExceededError(RuntimeError):
    """An enumeration or transition-test budget would be exceeded."""


class UnsafeConfigError(ValueError):
    """A safe-set policy was queried outside its domain."""


@dataclass
class Budget:
    """Explicit work limits; exceeding them raises, never truncates."""

    configs: int = DEFAULT_CONFIG_BUDGET
    transitions: int = DEFAULT_TRANSITION_BUDGET
    used_transitions: int = 0

    def check_configs(self, count: int) -> None:
        if count > self.configs:
            raise BudgetExceededError(
                f"{count} configurations exceed budget {self.configs}")

    def charge(self, amount: int = 1) -> None:
        self.used_transitions += amount
        if self.used_transitions > self.transitions:
            raise BudgetExceededError(
                f"transition tests exceed budget {self.transitions}")


@dataclass(frozen=True)
class MovePlan:
    """A bijection old-config -> new-config plus the realized crossing.

    ``assignment`` lists (origin, destination) for every guard, origin
    ascending; every destination lies in the closed neighborhood of its
    origin and ``assignment[crossing[0]] == crossing[1]``.
    """

    assignment: tuple[tuple[int, int], ...]
    crossing: tuple[int, int]

    def mapping(self) -> dict[int, int]:
        return dict(self.assignment)

    def movers(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.assignment if a != b]


def validate_plan(g: Graph, c: Config, c2: Config, attacked: Edge,
                  plan: MovePlan) -> None:
    """Assert every MovePlan invariant; raises AssertionError on violation."""
    mapping = plan.mapping()
    assert set(mapping) == set(c), "assignment domain must be the old config"
    assert set(mapping.values()) == set(c2), "assignment image must be the new config"
    assert len(set(mapping.values())) == len(mapping), "assignment must be a bijection"
    for a, b in mapping.items():
        assert a == b or g.has_edge(a, b), f"illegal hop {a}->{b}"
    u, v = attacked
    assert plan.crossing in ((u, v), (v, u)), "crossing must orient the attacked edge"
    a, b = plan.crossing
    assert mapping.get(a) == b, "crossing must be realized by a guard"


def _augment(closed: tuple[int, ...], x: int, rights: int,
             match_right: dict[int, int], visited: set[int]) -> bool:
    m = closed[x] & rights
    while m:
        low = m & -m
        y = low.bit_length() - 1
        m ^= low
        if y in visited:
            continue
        visited.add(y)
        owner = match_right.get(y)
        if owner is None or _augment(closed, owner, rights, match_right, visited):
            match_right[y] = x
            return True
    return False


def _crossing_match(closed: tuple[int, ...], c_mask: int, c2_mask: int,
                    a: int, b: int) -> Optional[dict[int, int]]:
    """Perfect matching of c\\{a} onto c2\\{b} within closed neighborhoods.

    Models the defense where one guard crosses a->b. Returns the
    destination->origin matching, or None when no bijection exists.
    """
    if not (c_mask >> a) & 1 or not (c2_mask >> b) & 1:
        return None
    lefts = c_mask & ~(1 << a)
    rights = c2_mask & ~(1 << b)
    reach = 0
    m = lefts
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        cx = closed[x]
        if not cx & rights:
            return None
        reach |= cx
    if rights & ~reach:
        return None
    match_right: dict[int, int] = {}
    m = lefts
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        if not _augment(closed, x, rights, match_right, set()):
            return None
    return match_right


def _plan_from_match(a: int, b: int, match_right: dict[int, int]) -> MovePlan:
    pairs = [(a, b)] + [(x, y) for y, x in match_right.items()]
    pairs.sort()
    return MovePlan(tuple(pairs), (a, b))


def is_legal_transition(g: Graph, c: Iterable[int], c2: Iterable[int],
                        attacked: Edge) -> Optional[MovePlan]:
    """Decide whether configs c -> c2 legally defend the attacked edge.

    Tries the crossing in both orientations (canonical endpoint first); the
    remaining guards are matched by augmenting-path search, so the returned
    plan is deterministic.
    """
    c_mask, c2_mask = mask_of(c), mask_of(c2)
    if c_mask.bit_count() != c2_mask.bit_count():
        raise ValueError("configurations must have equal guard counts")
    u, v = g.edge_key(*attacked)
    for a, b in ((u, v), (v, u)):
        mr = _crossing_match(g.closed_mask, c_mask, c2_mask, a, b)
        if mr is not None:
            return _plan_from_match(a, b, mr)
    return None


def legal_transition_brute(g: Graph, c: Iterable[int], c2: Iterable[int],
                           attacked: Edge) -> Optional[MovePlan]:
    """Oracle twin of is_legal_transition enumerating all bijections."""
    cl = sorted(c)
    u, v = g.edge_key(*attacked)
    if len(cl) != len(set(c2)):
        raise ValueError("configurations must have equal guard counts")
    for targets in permutations(sorted(c2)):
        if any(a != t and not g.has_edge(a, t) for a, t in zip(cl, targets)):
            continue
        mapping = dict(zip(cl, targets))
        for a, b in ((u, v), (v, u)):
            if mapping.get(a) == b:
                return MovePlan(tuple(sorted(mapping.items())), (a, b))
    return None


def _cover_masks(g: Graph, k: int, budget: Budget) -> list[int]:
    """All size-k vertex covers as bitmasks, ascending (lexicographic bit order)."""
    if k < 0 or k > g.n:
        return []
    budget.check_configs(math.comb(g.n, k))
    if not g.edges:
        return sorted(mask_of(cb) for cb in combinations(range(g.n), k))
    incident = [0] * g.n
    for e, (i, j) in enumerate(g.edges):
        incident[i] |= 1 << e
        incident[j] |= 1 << e
    full = (1 << len(g.edges)) - 1
    out = []
    for combo in combinations(range(g.n), k):
        cov = 0
        for vtx in combo:
            cov |= incident[vtx]
        if cov == full:
            out.append(mask_of(combo))
    out.sort()
    return out


def vertex_covers_of_size(g: Graph, k: int,
                          budget: Optional[Budget] = None) -> Iterator[Config]:
    """Stream the size-k vertex covers in ascending bit-pattern order."""
    for m in _cover_masks(g, k, budget or Budget()):
        yield set_of(m)


@dataclass
class SafeSet:
    """Winning region for k guards with positional policies for both players.

    ``members`` are config bitmasks in ascending order. ``policy`` maps
    (member mask, canonical edge) to the lexicographically smallest safe
    successor and its plan. ``killers`` maps each eliminated cover to the
    first edge (canonical order) that had no defense when it was removed.
    """

    graph: Graph
    k: int
    members: tuple[int, ...]
    policy: dict[tuple[int, Edge], tuple[MovePlan, int]]
    killers: dict[int, Edge]
    sweeps: int = 0

    def member_sets(self) -> list[Config]:
        return [set_of(m) for m in self.members]

    def contains(self, c: Iterable[int]) -> bool:
        return mask_of(c) in set(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _search_witness(closed, covers_alive, reach, c_mask, u, v,
                    budget: Budget) -> Optional[int]:
    """Smallest alive cover admitting a legal crossing transition from c."""
    rc = reach[c_mask]
    u_in = (c_mask >> u) & 1
    v_in = (c_mask >> v) & 1
    for c2 in covers_alive:
        if c2 & ~rc:
            continue
        if reach[c2] & c_mask != c_mask:
            continue
        budget.charge()
        if u_in and (c2 >> v) & 1 and _crossing_match(closed, c_mask, c2, u, v) is not None:
            return c2
        if v_in and (c2 >> u) & 1 and _crossing_match(closed, c_mask, c2, v, u) is not None:
            return c2
    return None


def safe_set(g: Graph, k: int, budget: Optional[Budget] = None) -> SafeSet:
    """Greatest fixed point of the per-attack elimination sweep.

    Sweeps run over members and edges in canonical order; deletions are
    applied between sweeps, so the result is the order-independent greatest
    fixed point while killer edges stay reproducible.
    """
    budget = budget or Budget()
    covers = _cover_masks(g, k, budget)
    closed = g.closed_mask
    edges = g.edges
    reach = {}
    for c in covers:
        r = 0
        for x in bits(c):
            r |= closed[x]
        reach[c] = r
    alive: dict[int, bool] = dict.fromkeys(covers, True)
    witness: dict[tuple[int, int], int] = {}
    killers: dict[int, Edge] = {}
    sweeps = 0
    while True:
        sweeps += 1
        snapshot = [c for c in covers if alive[c]]
        snapshot_set = set(snapshot)
        deaths = []
        for c in snapshot:
            dead_edge: Optional[Edge] = None
            for ei, (u, v) in enumerate(edges):
                w = witness.get((c, ei))
                if w is not None and w in snapshot_set:
                    continue
                found = _search_witness(closed, snapshot, reach, c, u, v, budget)
                if found is None:
                    dead_edge = (u, v)
                    break
                witness[(c, ei)] = found
            if dead_edge is not None:
                deaths.append(c)
                killers[c] = dead_edge
        if not deaths:
            break
        for c in deaths:
            alive[c] = False
    survivors = tuple(c for c in covers if alive[c])
    policy: dict[tuple[int, Edge], tuple[MovePlan, int]] = {}
    for c in survivors:
        for ei, (u, v) in enumerate(edges):
            w = witness[(c, ei)]
            mr = _crossing_match(closed, c, w, u, v)
            if mr is not None:
                plan = _plan_from_match(u, v, mr)
            else:
                mr = _crossing_match(closed, c, w, v, u)
                plan = _plan_from_match(v, u, mr)
            policy[(c, (u, v))] = (plan, w)
    return SafeSet(graph=g, k=k, members=survivors, policy=policy,
                   killers=killers, sweeps=sweeps)


@dataclass(frozen=True)
class EvcResult:
    """Outcome of the staircase search over guard counts."""

    mvc: int
    evc: Optional[int]
    win_profile: dict[int, bool]
    safe: Optional[SafeSet]
    warnings: tuple[str, ...] = ()


def evc_exact(g: Graph, k_max: Optional[int] = None,
              budget: Optional[Budget] = None) -> EvcResult:
    """Smallest guard count whose safe set is nonempty.

    The search starts at the minimum vertex cover size and the profile covers
    every k up to min(2*mvc, n, k_max); twice the cover number always suffices
    (guards on both endpoints of a maximum matching), and in the one-guard-
    per-vertex model k never usefully exceeds n.
    """
    budget = budget or Budget()
    mvc_size, _ = mvc_exact(g, limit=max(g.n, DEFAULT_MVC_LIMIT))
    hi = min(2 * mvc_size, g.n)
    if k_max is not None:
        hi = min(hi, k_max)
    profile: dict[int, bool] = {}
    evc_val: Optional[int] = None
    safe_at: Optional[SafeSet] = None
    for k in range(mvc_size, hi + 1):
        s = safe_set(g, k, budget)
        win = len(s.members) > 0
        profile[k] = win
        if win and evc_val is None:
            evc_val = k
            safe_at = s
    warnings = tuple(
        f"non-monotone win profile: win at k={k} but loss at k={k + 1}"
        for k in sorted(profile)
        if profile.get(k) and profile.get(k + 1) is False)
    return EvcResult(mvc=mvc_size, evc=evc_val, win_profile=profile,
                     safe=safe_at, warnings=warnings)


def defender_policy_step(s: SafeSet, c: Iterable[int],
                         attacked: Edge) -> tuple[MovePlan, Config]:
    """Stored greatest-fixed-point defense for a safe configuration."""
    c_mask = mask_of(c)
    key = (c_mask, s.graph.edge_key(*attacked))
    if key not in s.policy:
        raise UnsafeConfigError("configuration is not in the safe set")
    plan, nxt = s.policy[key]
    return plan, set_of(nxt)


def attacker_policy_step(g: Graph, k: int, c: Iterable[int],
                         s: Optional[SafeSet] = None) -> Edge:
    """Edge whose attack makes progress against an unsafe configuration.

    Returns the first uncovered edge when c is not a cover; otherwise the
    recorded killer edge from the elimination trace. Raises for safe configs.
    """
    c_mask = mask_of(c)
    for u, v in g.edges:
        if not c_mask & ((1 << u) | (1 << v)):
            return (u, v)
    if s is None:
        s = safe_set(g, k)
    if c_mask in s.killers:
        return s.killers[c_mask]
    if c_mask in set(s.members):
        raise UnsafeConfigError("configuration is safe; no winning attack")
    raise UnsafeConfigError(
        f"configuration is not a size-{k} cover known to the solver")


class ExactDefender:
    """Positional defender following a precomputed safe set."""

    def __init__(self, s: SafeSet):
        if not s.members:
            raise UnsafeConfigError("safe set is empty; defender cannot start")
        self.safe = s

    def initial(self, g: Graph, k: int) -> Config:
        return set_of(self.safe.members[0])

    def defend(self, g: Graph, config: Config,
               attacked: Edge) -> Optional[tuple[MovePlan, Config]]:
        return defender_policy_step(self.safe, config, attacked)


class GreedyDefender:
    """Best-effort defender: crossing move that keeps a cover if possible."""

    def __init__(self, k: int):
        self.k = k

    def initial(self, g: Graph, k: int) -> Config:
        masks = _cover_masks(g, k, Budget())
        if masks:
            return set_of(masks[0])
        return frozenset(range(k))

    def defend(self, g: Graph, config: Config,
               attacked: Edge) -> Optional[tuple[MovePlan, Config]]:
        u, v = g.edge_key(*attacked)
        candidates = []
        cset = set(config)
        for a, b in ((u, v), (v, u)):
            if a not in cset:
                continue
            if b in cset:
                # swap along the attacked edge
                nxt = config
            else:
                nxt = frozenset(cset - {a} | {b})
            plan = is_legal_transition(g, config, nxt, attacked)
            if plan is not None:
                candidates.append((plan, nxt))
        for plan, nxt in candidates:
            if is_vertex_cover(g, nxt):
                return plan, nxt
        return candidates[0] if candidates else None


class ExactAttacker:
    """Attacker replaying killer edges from the elimination trace."""

    def __init__(self, g: Graph, k: int, s: Optional[SafeSet] = None):
        self.safe = s if s is not None else safe_set(g, k)
        self.k = k

    def attack(self, g: Graph, config: Config,
               rng: random.Random) -> Optional[Edge]:
        if not g.edges:
            return None
        return attacker_policy_step(g, self.k, config, self.safe)


class RandomAttacker:
    def attack(self, g: Graph, config: Config,
               rng: random.Random) -> Optional[Edge]:
        if not g.edges:
            return None
        return rng.choice(g.edges)


@dataclass(frozen=True)
class TraceStep:
    round: int
    attacked: Edge
    plan: MovePlan
    config_after: Config


@dataclass(frozen=True)
class SimResult:
    verdict: str  # "defender-survived" | "defender-lost"
    lost_round: Optional[int]
    initial: Config
    trace: tuple[TraceStep, ...]


def simulate(g: Graph, k: int, defender, attacker, rounds: int,
             seed: int = 0, validate: bool = False,
             record_trace: bool = True) -> SimResult:
    """Play up to ``rounds`` rounds; deterministic for a given seed.

    The defender loses exactly when it has no move (returns None). Policy
    errors propagate, annotated with the round number. With ``validate`` every
    returned plan is re-checked against the full legality rules; long
    endurance runs can switch off trace recording.
    """
    rng = random.Random(seed)
    config = defender.initial(g, k)
    steps: list[TraceStep] = []
    for r in range(1, rounds + 1):
        try:
            attacked = attacker.attack(g, config, rng)
        except Exception as exc:
            raise RuntimeError(f"attacker failed at round {r}: {exc}") from exc
        if attacked is None:
            break
        try:
            outcome = defender.defend(g, config, attacked)
        except Exception as exc:
            raise RuntimeError(f"defender failed at round {r}: {exc}") from exc
        if outcome is None:
            return SimResult("defender-lost", r, defender.initial(g, k),
                             tuple(steps))
        plan, nxt = outcome
        if validate:
            validate_plan(g, config, nxt, attacked, plan)
        else:
            a, b = plan.crossing
            u, v = attacked
            if {a, b} != {u, v}:
                raise RuntimeError(f"round {r}: plan does not cross the attack")
        if record_trace:
            steps.append(TraceStep(r, attacked, plan, nxt))
        config = nxt
    return SimResult("defender-survived", None, defender.initial(g, k),
                     tuple(steps))


def render_trace(g: Graph, steps: Iterable[TraceStep]) -> str:
    """Line format: ``round, u-v, from->to;..., sorted config ids``.

    Only guards that actually move are listed. Vertex ids containing ','
    or '-' are not supported by this format.
    """
    lines = []
    for st in steps:
        u, v = st.attacked
        moves = ";".join(f"{g.ids[a]}->{g.ids[b]}" for a, b in st.plan.movers())
        cfg = " ".join(sorted(g.ids[x] for x in st.config_after))
        lines.append(f"{st.round}, {g.ids[u]}-{g.ids[v]}, {moves}, {cfg}")
    return "\n".join(lines) + ("\n" if lines else "")


def render_safe_set(s: SafeSet) -> str:
    g = s.graph
    lines = [f"safe k={s.k} count={len(s.members)}"]
    for m in s.members:
        lines.append(" ".join(sorted(g.ids[x] for x in bits(m))))
    return "\n".join(lines) + "\n"
