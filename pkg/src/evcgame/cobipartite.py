"""Polynomial-time eternal vertex cover on cobipartite graphs.

A cobipartite graph splits into two cliques A and B. After normalization
(no global vertex on the A side, |A| <= |B|) the cover number is p+q-2
whenever p >= 1, and the guard number is either p+q-2 or p+q-1; which one is
decided by a case tree over the cross-edge structure (friend = non-neighbor
on the other side; a vertex is global iff it has no friend).

The p+q-2 branches come with explicit guard strategies over S_ij covers
(everything except one friend pair); the p+q-1 branches use the
all-but-one-vertex shuttle, which works on any graph.

Case 3c-II of the main lemma is stated in the source material with the sides
of b1's neighbors flipped; it is implemented here as the exact mirror of
Case 3c-I.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .engine import Edge, MovePlan
from .graphs import Graph, mask_of

FULL_VALUE_BRANCHES = frozenset({
    "clique", "p1-attached", "p2q2-common", "p2q2-single",
    "p2-oneactive", "p2-B3full", "big-onenonglobal"})


class SideError(ValueError):
    """Raised when the provided sides do not induce cliques or don't partition."""


@dataclass(frozen=True)
class CobipInstance:
    g: Graph
    side_a: frozenset[int]
    side_b: frozenset[int]
    normalized: bool

    @property
    def p(self) -> int:
        return len(self.side_a)

    @property
    def q(self) -> int:
        return len(self.side_b)

    def a_list(self) -> list[int]:
        return sorted(self.side_a)

    def b_list(self) -> list[int]:
        return sorted(self.side_b)


def _check_clique(g: Graph, side: frozenset[int], name: str) -> None:
    for v in side:
        missing = side - {v} - set(g.adj[v])
        if missing:
            w = min(missing)
            raise SideError(
                f"side {name} is not a clique: {g.ids[v]} and {g.ids[w]} "
                "are not adjacent")


def normalize(g: Graph, side_a: Iterable[int],
              side_b: Iterable[int]) -> CobipInstance:
    """Move globals out of A (ascending id order), then enforce p <= q.

    Runs to a fixpoint; moving a vertex between cliques never invalidates
    either side because a global vertex is adjacent to everything.
    """
    a, b = set(side_a), set(side_b)
    if a & b or (a | b) != set(range(g.n)):
        raise SideError("sides must partition the vertex set")
    _check_clique(g, frozenset(a), "A")
    _check_clique(g, frozenset(b), "B")
    full = g.full_mask()
    for _ in range(4):
        moved = [v for v in sorted(a) if g.closed_mask[v] == full]
        for v in moved:
            a.discard(v)
            b.add(v)
        if len(a) > len(b):
            a, b = b, a
            continue
        if not any(g.closed_mask[v] == full for v in a):
            break
    else:
        raise AssertionError("normalization did not reach a fixpoint")
    return CobipInstance(g=g, side_a=frozenset(a), side_b=frozenset(b),
                         normalized=True)


@dataclass(frozen=True)
class PartitionAnalysis:
    friends: dict[int, frozenset[int]]
    globals_b: frozenset[int]
    nonglobal_b: tuple[int, ...]
    active_a: tuple[int, ...]  # A vertices with at least one cross neighbor
    active_b: tuple[int, ...]
    cross_edges: tuple[Edge, ...]
    b_parts: Optional[dict[str, tuple[int, ...]]]  # p == 2 only

    @property
    def nonglobal_b_count(self) -> int:
        return len(self.nonglobal_b)


def analyze(inst: CobipInstance) -> PartitionAnalysis:
    if not inst.normalized:
        raise SideError("analyze requires a normalized instance")
    g = inst.g
    amask = mask_of(inst.side_a)
    bmask = mask_of(inst.side_b)
    friends: dict[int, frozenset[int]] = {}
    for v in inst.a_list():
        friends[v] = frozenset(w for w in inst.b_list()
                               if not (g.nbr_mask[v] >> w) & 1)
    for v in inst.b_list():
        friends[v] = frozenset(w for w in inst.a_list()
                               if not (g.nbr_mask[v] >> w) & 1)
    globals_b = frozenset(v for v in inst.side_b if not friends[v])
    nonglobal_b = tuple(v for v in inst.b_list() if friends[v])
    cross = tuple(e for e in g.edges
                  if ((amask >> e[0]) & 1) != ((amask >> e[1]) & 1))
    active_a = tuple(v for v in inst.a_list() if g.nbr_mask[v] & bmask)
    active_b = tuple(v for v in inst.b_list() if g.nbr_mask[v] & amask)
    b_parts = None
    if inst.p == 2:
        a1, a2 = inst.a_list()
        n1, n2 = g.nbr_mask[a1], g.nbr_mask[a2]
        b_parts = {
            "B1": tuple(v for v in inst.b_list() if (n1 >> v) & 1 and not (n2 >> v) & 1),
            "B2": tuple(v for v in inst.b_list() if (n2 >> v) & 1 and not (n1 >> v) & 1),
            "B3": tuple(v for v in inst.b_list() if (n1 >> v) & 1 and (n2 >> v) & 1),
            "B4": tuple(v for v in inst.b_list() if not (n1 >> v) & 1 and not (n2 >> v) & 1),
        }
    return PartitionAnalysis(friends=friends, globals_b=globals_b,
                             nonglobal_b=nonglobal_b, active_a=active_a,
                             active_b=active_b, cross_edges=cross,
                             b_parts=b_parts)


def mvc_cobip(inst: CobipInstance) -> int:
    if not inst.normalized:
        raise SideError("mvc_cobip requires a normalized instance")
    p, q = inst.p, inst.q
    if p == 0:
        return max(q - 1, 0)
    return p + q - 2


def evc_cobip(inst: CobipInstance,
              analysis: Optional[PartitionAnalysis] = None) -> tuple[int, str]:
    """Guard number and the decision-tree branch that produced it."""
    if analysis is None:
        analysis = analyze(inst)
    p, q = inst.p, inst.q
    if p == 0:
        return max(q - 1, 0), "clique"
    if p == 1:
        if not analysis.active_a:
            return p + q - 2, "p1-isolated"
        return p + q - 1, "p1-attached"
    if p == 2 and q == 2:
        a1, a2 = inst.a_list()
        n1 = analysis.friends[a1]
        n2 = analysis.friends[a2]
        deg1, deg2 = q - len(n1), q - len(n2)
        if deg1 == 0 and deg2 == 0:
            return 2, "p2q2-nocross"
        if deg1 == 1 and deg2 == 1:
            nb1 = next(iter(inst.side_b - n1))
            nb2 = next(iter(inst.side_b - n2))
            if nb1 != nb2:
                return 2, "p2q2-unique"
            return 3, "p2q2-common"
        return 3, "p2q2-single"
    if p == 2:
        if not analysis.cross_edges:
            return p + q - 2, "p2-nocross"
        if len(analysis.active_a) == 1:
            return p + q - 1, "p2-oneactive"
        b3 = len(analysis.b_parts["B3"])
        if b3 == q - 1:
            return p + q - 1, "p2-B3full"
        if b3 == 0:
            return p + q - 2, "p2-B3empty"
        return p + q - 2, "p2-B3mid"
    # p >= 3
    ncross = len(analysis.cross_edges)
    if ncross == 0:
        return p + q - 2, "big-nocross"
    if ncross == 1:
        return p + q - 2, "big-onecross"
    if analysis.nonglobal_b_count == 1:
        return p + q - 1, "big-onenonglobal"
    if analysis.globals_b:
        return p + q - 2, "big-someglobals"
    if len(analysis.active_a) == 1:
        return p + q - 2, "big-oneactiveA"
    if len(analysis.active_b) == 1:
        return p + q - 2, "big-oneactiveB"
    return p + q - 2, "big-bothactive"


# ---------------------------------------------------------------------------
# cover templates and defense

@dataclass(frozen=True)
class CoverTemplate:
    kind: tuple  # ("sij", a_vertex, b_vertex) | ("abo", vertex)

    def materialize(self, inst: CobipInstance) -> frozenset[int]:
        if self.kind[0] == "sij":
            _, i, j = self.kind
            return frozenset(range(inst.g.n)) - {i, j}
        return frozenset(range(inst.g.n)) - {self.kind[1]}


def initial_template(inst: CobipInstance,
                     analysis: Optional[PartitionAnalysis] = None
                     ) -> CoverTemplate:
    """Canonical starting template: smallest valid hole pair, or hole 0."""
    if analysis is None:
        analysis = analyze(inst)
    _value, branch = evc_cobip(inst, analysis)
    if branch in FULL_VALUE_BRANCHES:
        return CoverTemplate(("abo", 0))
    alist, blist = inst.a_list(), inst.b_list()
    if branch in ("p1-isolated", "p2q2-nocross", "p2-nocross", "big-nocross"):
        return CoverTemplate(("sij", alist[0], blist[0]))
    if branch == "big-onecross":
        ax, by = analysis.cross_edges[0]
        if ax not in inst.side_a:
            ax, by = by, ax
        i = next(a for a in alist if a != ax)
        j = next(b for b in blist if b != by)
        return CoverTemplate(("sij", i, j))
    if branch == "p2q2-unique":
        a1, a2 = alist
        partner2 = next(b for b in blist if b not in analysis.friends[a2])
        return CoverTemplate(("sij", a1, partner2))
    if branch in ("p2-B3empty", "p2-B3mid"):
        a1 = alist[0]
        return CoverTemplate(("sij", a1, min(analysis.friends[a1])))
    if branch == "big-oneactiveA":
        act = analysis.active_a[0]
        i = next(a for a in alist if a != act)
        return CoverTemplate(("sij", i, min(analysis.friends[i])))
    if branch == "big-oneactiveB":
        act = analysis.active_b[0]
        i = alist[0]
        j = min(b for b in analysis.friends[i] if b != act) \
            if analysis.friends[i] - {act} else min(analysis.friends[i])
        return CoverTemplate(("sij", i, j))
    # big-someglobals, big-bothactive: smallest friend pair
    i = alist[0]
    return CoverTemplate(("sij", i, min(analysis.friends[i])))


class StrategyError(ValueError):
    """Template/branch mismatch or an attack outside the strategy's domain."""


def valid_templates(inst: CobipInstance,
                    analysis: Optional[PartitionAnalysis] = None
                    ) -> list[CoverTemplate]:
    """Every template the branch strategy is allowed to occupy.

    For p+q-1 branches these are the n all-but-one templates; for S_ij
    branches, the friend pairs satisfying the branch invariant.
    """
    if analysis is None:
        analysis = analyze(inst)
    _value, branch = evc_cobip(inst, analysis)
    if branch in FULL_VALUE_BRANCHES:
        return [CoverTemplate(("abo", x)) for x in range(inst.g.n)]
    out = []
    for i in inst.a_list():
        for j in sorted(analysis.friends[i]):
            if branch == "big-onecross":
                ax, by = analysis.cross_edges[0]
                if ax not in inst.side_a:
                    ax, by = by, ax
                if i == ax or j == by:
                    continue
            elif branch == "big-oneactiveA":
                if i == analysis.active_a[0]:
                    continue
            elif branch == "big-oneactiveB":
                if j == analysis.active_b[0]:
                    continue
            elif branch == "p2q2-unique":
                pass  # both friend pairs are reachable covers
            out.append(CoverTemplate(("sij", i, j)))
    return out


def _finish(inst: CobipInstance, cover: frozenset[int],
            moves: list[tuple[int, int]], attacked: Edge,
            new_ct: CoverTemplate) -> tuple[MovePlan, CoverTemplate]:
    mapping = {x: x for x in cover}
    for a, b in moves:
        if a not in cover:
            raise StrategyError(f"move from unguarded vertex {inst.g.ids[a]}")
        mapping[a] = b
    u, v = attacked
    if mapping.get(u) == v:
        crossing = (u, v)
    elif mapping.get(v) == u:
        crossing = (v, u)
    else:
        raise StrategyError("no guard crosses the attacked edge")
    return MovePlan(tuple(sorted(mapping.items())), crossing), new_ct


def _exchange(inst: CobipInstance, cover: frozenset[int], attacked: Edge,
              ct: CoverTemplate) -> tuple[MovePlan, CoverTemplate]:
    u, v = attacked
    return _finish(inst, cover, [(u, v), (v, u)], attacked, ct)


def defend_cobip(inst: CobipInstance, analysis: PartitionAnalysis,
                 ct: CoverTemplate, attacked: Edge
                 ) -> tuple[MovePlan, CoverTemplate]:
    """One defense step preserving the branch's template family."""
    g = inst.g
    attacked = g.edge_key(*attacked)
    cover = ct.materialize(inst)
    u, v = attacked

    if ct.kind[0] == "abo":
        hole = ct.kind[1]
        if hole in (u, v):
            other = v if hole == u else u
            return _finish(inst, cover, [(other, hole)], attacked,
                           CoverTemplate(("abo", other)))
        return _exchange(inst, cover, attacked, ct)

    _value, branch = evc_cobip(inst, analysis)
    if branch in FULL_VALUE_BRANCHES:
        raise StrategyError(
            f"branch {branch} needs p+q-1 guards; use an all-but-one template")
    _, hi, hj = ct.kind
    if hi not in inst.side_a or hj not in inst.side_b:
        raise StrategyError("template holes must lie on opposite sides")
    if u not in (hi, hj) and v not in (hi, hj):
        return _exchange(inst, cover, attacked, ct)

    fr = analysis.friends
    in_a = inst.side_a.__contains__

    def sij(i: int, j: int) -> CoverTemplate:
        return CoverTemplate(("sij", i, j))

    def smallest(it: Iterable[int], skip: frozenset[int] = frozenset()) -> int:
        try:
            return min(x for x in it if x not in skip)
        except ValueError:
            raise StrategyError("existential choice has no candidate") from None

    alist, blist = inst.a_list(), inst.b_list()

    if branch in ("p1-isolated", "p2q2-nocross", "p2-nocross", "big-nocross"):
        if in_a(u) and in_a(v):
            ar = v if u == hi else u
            return _finish(inst, cover, [(ar, hi)], attacked, sij(ar, hj))
        bs = v if u == hj else u
        return _finish(inst, cover, [(bs, hj)], attacked, sij(hi, bs))

    if branch == "big-onecross":
        ax, by = analysis.cross_edges[0]
        if not in_a(ax):
            ax, by = by, ax
        if in_a(u) and in_a(v):
            ar = v if u == hi else u
            if ar != ax:
                return _finish(inst, cover, [(ar, hi)], attacked, sij(ar, hj))
            at = smallest(alist, frozenset({ax, hi}))
            return _finish(inst, cover, [(ax, hi), (at, ax)], attacked,
                           sij(at, hj))
        bs = v if u == hj else u
        if bs != by:
            return _finish(inst, cover, [(bs, hj)], attacked, sij(hi, bs))
        bt = smallest(blist, frozenset({by, hj}))
        return _finish(inst, cover, [(by, hj), (bt, by)], attacked,
                       sij(hi, bt))

    if branch == "big-someglobals":
        return _defend_someglobals(inst, analysis, ct, attacked, cover)
    if branch in ("big-oneactiveA", "big-oneactiveB"):
        return _defend_oneactive(inst, analysis, ct, attacked, cover,
                                 branch == "big-oneactiveA")
    if branch == "big-bothactive":
        return _defend_bothactive(inst, analysis, ct, attacked, cover)
    if branch in ("p2-B3empty", "p2-B3mid"):
        return _defend_p2(inst, analysis, ct, attacked, cover)
    if branch == "p2q2-unique":
        return _defend_p2q2_unique(inst, analysis, ct, attacked, cover)
    raise StrategyError(f"no S_ij strategy for branch {branch}")


def _defend_someglobals(inst, analysis, ct, attacked, cover):
    g = inst.g
    _, hi, hj = ct.kind
    u, v = attacked
    fr = analysis.friends
    in_a = inst.side_a.__contains__
    nonglobal = analysis.nonglobal_b
    glob = sorted(analysis.globals_b)

    def sij(i, j):
        return CoverTemplate(("sij", i, j))

    if in_a(u) and in_a(v):  # a_r a_i with hole a_i
        ar = v if u == hi else u
        moves = [(ar, hi)]
        if hj in fr[ar]:
            return _finish(inst, cover, moves, attacked, sij(ar, hj))
        bs = min(fr[ar])
        moves.append((bs, hj))
        return _finish(inst, cover, moves, attacked, sij(ar, bs))
    if not in_a(u) and not in_a(v):  # b_s b_j with hole b_j
        bs = v if u == hj else u
        moves = [(bs, hj)]
        if bs not in analysis.globals_b:
            if bs in fr[hi]:
                return _finish(inst, cover, moves, attacked, sij(hi, bs))
            ar = min(fr[bs])
            moves.append((ar, hi))
            return _finish(inst, cover, moves, attacked, sij(ar, bs))
        cands = [t for t in nonglobal if t != hj and t in fr[hi]]
        if cands:
            bt = cands[0]
            moves.append((bt, bs))
            return _finish(inst, cover, moves, attacked, sij(hi, bt))
        bt = next(t for t in nonglobal if t != hj)
        ar = min(fr[bt])
        moves.append((bt, bs))
        moves.append((ar, hi))
        return _finish(inst, cover, moves, attacked, sij(ar, bt))
    # cross edge touching a hole
    a_end, b_end = (u, v) if in_a(u) else (v, u)
    if a_end == hi:  # (a_i, b_s): guard on b_s crosses
        bs = b_end
        moves = [(bs, hi)]
        if bs not in analysis.globals_b:
            ar = min(fr[bs])
            g1 = glob[0]
            moves.append((g1, hj))
            moves.append((ar, g1))
            return _finish(inst, cover, moves, attacked, sij(ar, bs))
        cands = [a for a in inst.a_list() if a != hi and hj in fr[a]]
        if cands:
            ar = cands[0]
            moves.append((ar, bs))
            return _finish(inst, cover, moves, attacked, sij(ar, hj))
        ar = next(a for a in inst.a_list() if a != hi)
        bt = next(t for t in sorted(fr[ar]) if t != hj)
        moves.append((bt, hj))
        moves.append((ar, bs))
        return _finish(inst, cover, moves, attacked, sij(ar, bt))
    # (a_r, b_j): guard on a_r crosses into the hole b_j
    ar = a_end
    moves = [(ar, hj)]
    bt = next(t for t in nonglobal if t != hj)
    if bt in fr[ar]:
        g1 = glob[0]
        moves.append((g1, hi))
        moves.append((bt, g1))
        return _finish(inst, cover, moves, attacked,
                       CoverTemplate(("sij", ar, bt)))
    if bt in fr[hi]:
        moves.append((bt, ar))
        return _finish(inst, cover, moves, attacked,
                       CoverTemplate(("sij", hi, bt)))
    as_ = min(fr[bt])
    moves.append((bt, ar))
    moves.append((as_, hi))
    return _finish(inst, cover, moves, attacked,
                   CoverTemplate(("sij", as_, bt)))


def _defend_oneactive(inst, analysis, ct, attacked, cover, a_side: bool):
    """Single active vertex on one side; the mirror case is transposed."""
    g = inst.g
    _, hi, hj = ct.kind
    u, v = attacked
    in_a = inst.side_a.__contains__

    if a_side:
        act = analysis.active_a[0]
        same_side, hole_same, hole_other = in_a, hi, hj
        side_list = inst.a_list()
        other_list = inst.b_list()
    else:
        act = analysis.active_b[0]
        same_side, hole_same, hole_other = (lambda x: not in_a(x)), hj, hi
        side_list = inst.b_list()
        other_list = inst.a_list()

    def sij(i, j):
        if a_side:
            return CoverTemplate(("sij", i, j))
        return CoverTemplate(("sij", j, i))

    # here "same side" is the side containing the single active vertex
    if same_side(u) and same_side(v):
        xr = v if u == hole_same else u
        if xr != act:
            return _finish(inst, cover, [(xr, hole_same)], attacked,
                           sij(xr, hole_other))
        xt = min(x for x in side_list if x not in (act, hole_same))
        return _finish(inst, cover, [(act, hole_same), (xt, act)], attacked,
                       sij(xt, hole_other))
    if not same_side(u) and not same_side(v):
        ys = v if u == hole_other else u
        return _finish(inst, cover, [(ys, hole_other)], attacked,
                       sij(hole_same, ys))
    # cross attack: only edges at the active vertex exist; the hole on the
    # other side must be one of its neighbors
    ys = min(y for y in other_list
             if g.has_edge(act, y) and y != hole_other)
    return _finish(inst, cover, [(act, hole_other), (ys, act)], attacked,
                   sij(hole_same, ys))


def _defend_bothactive(inst, analysis, ct, attacked, cover):
    g = inst.g
    _, hi, hj = ct.kind
    u, v = attacked
    fr = analysis.friends
    in_a = inst.side_a.__contains__

    def sij(i, j):
        return CoverTemplate(("sij", i, j))

    if in_a(u) and in_a(v):
        ar = v if u == hi else u
        moves = [(ar, hi)]
        if hj in fr[ar]:
            return _finish(inst, cover, moves, attacked, sij(ar, hj))
        bs = min(fr[ar])
        moves.append((bs, hj))
        return _finish(inst, cover, moves, attacked, sij(ar, bs))
    if not in_a(u) and not in_a(v):
        bs = v if u == hj else u
        moves = [(bs, hj)]
        if bs in fr[hi]:
            return _finish(inst, cover, moves, attacked, sij(hi, bs))
        ar = min(fr[bs])
        moves.append((ar, hi))
        return _finish(inst, cover, moves, attacked, sij(ar, bs))
    a_end, b_end = (u, v) if in_a(u) else (v, u)
    if a_end == hi:  # (a_i, b_s) attacked
        bs = b_end
        moves = [(bs, hi)]
        ar = next(a for a in analysis.active_a if a != hi)
        if g.has_edge(ar, bs):
            moves.append((ar, bs))
            if hj in fr[ar]:
                return _finish(inst, cover, moves, attacked, sij(ar, hj))
            bt = next(t for t in sorted(fr[ar]) if t not in (bs, hj))
            moves.append((bt, hj))
            return _finish(inst, cover, moves, attacked, sij(ar, bt))
        if g.has_edge(ar, hj):
            moves.append((ar, hj))
            return _finish(inst, cover, moves, attacked, sij(ar, bs))
        bt = min(t for t in inst.side_b if g.has_edge(ar, t))
        moves.append((bt, hj))
        moves.append((ar, bt))
        return _finish(inst, cover, moves, attacked, sij(ar, bs))
    # (a_r, b_j) attacked: mirror
    ar = a_end
    moves = [(ar, hj)]
    bs = next(b for b in analysis.active_b if b != hj)
    if g.has_edge(bs, ar):
        moves.append((bs, ar))
        if bs in fr[hi]:
            return _finish(inst, cover, moves, attacked, sij(hi, bs))
        at = next(t for t in sorted(fr[bs]) if t not in (ar, hi))
        moves.append((at, hi))
        return _finish(inst, cover, moves, attacked, sij(at, bs))
    if g.has_edge(bs, hi):
        moves.append((bs, hi))
        return _finish(inst, cover, moves, attacked, sij(ar, bs))
    at = min(t for t in inst.side_a if g.has_edge(bs, t))
    moves.append((at, hi))
    moves.append((bs, at))
    return _finish(inst, cover, moves, attacked, sij(ar, bs))


def _defend_p2(inst, analysis, ct, attacked, cover):
    """p = 2 branches with B3 empty or middling (template hole on either a)."""
    g = inst.g
    _, hi, hj = ct.kind
    u, v = attacked
    in_a = inst.side_a.__contains__
    a1, a2 = inst.a_list()
    self_a = hi
    other_a = a2 if hi == a1 else a1
    ns, no = g.nbr_mask[self_a], g.nbr_mask[other_a]
    self_only = [b for b in inst.b_list() if (ns >> b) & 1 and not (no >> b) & 1]
    other_only = [b for b in inst.b_list() if (no >> b) & 1 and not (ns >> b) & 1]
    both = [b for b in inst.b_list() if (ns >> b) & 1 and (no >> b) & 1]
    none = [b for b in inst.b_list() if not (ns >> b) & 1 and not (no >> b) & 1]

    def sij(i, j):
        return CoverTemplate(("sij", i, j))

    if in_a(u) and in_a(v):  # the edge a1 a2, hole on self_a
        moves = [(other_a, self_a)]
        if hj in none:
            return _finish(inst, cover, moves, attacked, sij(other_a, hj))
        bk = min(self_only + none)
        moves.append((bk, hj))
        return _finish(inst, cover, moves, attacked, sij(other_a, bk))
    if not in_a(u) and not in_a(v):  # B-side edge touching the hole b_j
        bk = v if u == hj else u
        moves = [(bk, hj)]
        if bk in other_only or bk in none:
            return _finish(inst, cover, moves, attacked, sij(self_a, bk))
        if bk in self_only:
            moves.append((other_a, self_a))
            return _finish(inst, cover, moves, attacked, sij(other_a, bk))
        # bk in both (B3); only in the middling branch
        rest = [b for b in other_only + none if b != hj]
        if rest:
            br = min(rest)
            moves.append((br, bk))
            return _finish(inst, cover, moves, attacked, sij(self_a, br))
        br = min(self_only)
        moves.append((br, bk))
        moves.append((other_a, self_a))
        return _finish(inst, cover, moves, attacked, sij(other_a, br))
    a_end, b_end = (u, v) if in_a(u) else (v, u)
    if a_end == self_a:  # (a_self, b_k) attacked, guard crosses into the hole
        bk = b_end
        moves = [(bk, self_a)]
        if bk in self_only:
            if hj in other_only:
                moves.append((other_a, hj))
                return _finish(inst, cover, moves, attacked, sij(other_a, bk))
            br = min(other_only + both)
            moves.append((br, bk))
            moves.append((other_a, br))
            return _finish(inst, cover, moves, attacked, sij(other_a, hj))
        # bk in both (B3)
        if hj in none:
            moves.append((other_a, bk))
            return _finish(inst, cover, moves, attacked, sij(other_a, hj))
        br = min(self_only + none)
        moves.append((br, bk))
        moves.append((other_a, hj))
        return _finish(inst, cover, moves, attacked, sij(other_a, br))
    # (a_other, b_j) attacked: guard on a_other crosses into the hole b_j
    moves = [(other_a, hj)]
    if self_only:
        bk = min(self_only)
        moves.append((bk, self_a))
        return _finish(inst, cover, moves, attacked, sij(other_a, bk))
    bk = min(none)
    br = min(both)
    moves.append((br, other_a))
    moves.append((bk, br))
    return _finish(inst, cover, moves, attacked, sij(self_a, bk))


def _defend_p2q2_unique(inst, analysis, ct, attacked, cover):
    g = inst.g
    _, hi, hj = ct.kind
    u, v = attacked
    a1, a2 = inst.a_list()
    other_a = a2 if hi == a1 else a1
    guard_b = next(b for b in inst.b_list() if b != hj)
    in_a = inst.side_a.__contains__
    if in_a(u) and in_a(v):
        moves = [(other_a, hi), (guard_b, hj)]
    elif not in_a(u) and not in_a(v):
        moves = [(guard_b, hj), (other_a, hi)]
    elif hi in (u, v):  # cross edge at the A hole: partner guard crosses
        moves = [(guard_b, hi), (other_a, hj)]
    else:  # cross edge at the B hole
        moves = [(other_a, hj), (guard_b, hi)]
    return _finish(inst, cover, moves, attacked,
                   CoverTemplate(("sij", other_a, guard_b)))


# ---------------------------------------------------------------------------
# corpus generation and sidecar format

def build_cobip(p: int, q: int, cross_pattern: int) -> tuple[Graph, list[str], list[str]]:
    """Two cliques a1..ap, b1..bq with cross edges from a p*q bitmask."""
    aids = [f"a{i}" for i in range(1, p + 1)]
    bids = [f"b{j}" for j in range(1, q + 1)]
    edges = [(aids[i], aids[j]) for i in range(p) for j in range(i + 1, p)]
    edges += [(bids[i], bids[j]) for i in range(q) for j in range(i + 1, q)]
    for i in range(p):
        for j in range(q):
            if (cross_pattern >> (i * q + j)) & 1:
                edges.append((aids[i], bids[j]))
    return Graph(aids + bids, edges), aids, bids


def all_small_cobipartite(max_n: int) -> Iterator[CobipInstance]:
    """Every cross pattern for every p <= q with 0 < p+q <= max_n, normalized."""
    if max_n > 8:
        raise ValueError("corpus generation is capped at p+q <= 8")
    for p in range(0, max_n + 1):
        for q in range(p, max_n - p + 1):
            if p + q == 0:
                continue
            for pattern in range(1 << (p * q)):
                g, aids, bids = build_cobip(p, q, pattern)
                yield normalize(g, [g.index(x) for x in aids],
                                [g.index(x) for x in bids])


def parse_sides(g: Graph, text: str) -> tuple[set[int], set[int]]:
    """Sidecar format: one ``side <id> A|B`` line per vertex."""
    a: set[int] = set()
    b: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "side" or parts[2] not in ("A", "B"):
            raise SideError(f"line {lineno}: expected 'side <id> A|B'")
        try:
            idx = g.index(parts[1])
        except KeyError:
            raise SideError(f"line {lineno}: unknown vertex {parts[1]!r}") from None
        (a if parts[2] == "A" else b).add(idx)
    return a, b


def render_sides(inst: CobipInstance) -> str:
    g = inst.g
    lines = [f"side {g.ids[v]} {'A' if v in inst.side_a else 'B'}"
             for v in range(g.n)]
    return "\n".join(lines) + "\n"
