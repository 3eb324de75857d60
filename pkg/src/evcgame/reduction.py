"""Red-Blue Dominating Set to eternal-vertex-cover transformation.

Builds the gadget graph H for an RBDS instance (reds v1..vr, blues u1..ub,
budget k): every blue vertex gets b^2+3 private dependent leaves, a universal
vertex (star) gets its own b^2+3 dependents plus a supplier edge to every red
and a bridge to a backup vertex (dagger); the guard budget is ell = b+k+2.
The split variant additionally turns B plus star into a clique.

The defender machinery walks "nice" covers: B plus star plus a dominating set
of reds plus one floating guard (on dagger, a dependent, or a spare red). Each
(cover kind, attacked edge kind) pair has an explicit guard cascade keeping
the configuration nice, which is what makes the forward direction of the
transformation constructive.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .engine import Budget, Edge, MovePlan, SafeSet, UnsafeConfigError, \
    defender_policy_step
from .graphs import Graph, classify, diameter, is_vertex_cover, mask_of, \
    mvc_exact, set_of


class ReductionError(ValueError):
    """Raised for malformed or non-normalized RBDS input."""


@dataclass(frozen=True)
class RbdsInstance:
    """Bipartite domination instance: pick <= k reds covering every blue."""

    reds: tuple[str, ...]
    blues: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # (red id, blue id)
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ReductionError("budget k must be nonnegative")
        names = list(self.reds) + list(self.blues)
        if len(set(names)) != len(names):
            raise ReductionError("red and blue ids must be distinct")
        rset, bset = set(self.reds), set(self.blues)
        seen = set()
        for r, b in self.edges:
            if r not in rset:
                raise ReductionError(f"edge endpoint {r!r} is not a red vertex")
            if b not in bset:
                raise ReductionError(f"edge endpoint {b!r} is not a blue vertex")
            if (r, b) in seen:
                raise ReductionError(f"duplicate edge ({r!r}, {b!r})")
            seen.add((r, b))

    @property
    def r(self) -> int:
        return len(self.reds)

    @property
    def b(self) -> int:
        return len(self.blues)

    def red_neighbors(self, blue: str) -> list[str]:
        return sorted(r for r, b in self.edges if b == blue)

    def to_json(self) -> str:
        return json.dumps({"reds": list(self.reds), "blues": list(self.blues),
                           "edges": [list(e) for e in self.edges], "k": self.k},
                          indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RbdsInstance":
        try:
            data = json.loads(text)
            return cls(reds=tuple(data["reds"]), blues=tuple(data["blues"]),
                       edges=tuple((r, b) for r, b in data["edges"]),
                       k=int(data["k"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ReductionError):
                raise
            raise ReductionError(f"malformed RBDS file: {exc}") from exc

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class PreprocessResult:
    outcome: str  # "normalized" | "trivial-yes" | "trivial-no"
    reason: str
    instance: Optional[RbdsInstance] = None


def preprocess_rbds(inst: RbdsInstance) -> PreprocessResult:
    """Shortcut resolution before building the gadget.

    Order: undominatable blue, then k >= b, then b <= 1; survivors have
    b > 1, k < b and every blue dominated by some red.
    """
    for blue in inst.blues:
        if not inst.red_neighbors(blue):
            return PreprocessResult(
                "trivial-no", f"blue vertex {blue!r} has no red neighbor")
    if inst.k >= inst.b:
        return PreprocessResult(
            "trivial-yes", f"k={inst.k} >= b={inst.b}: one red per blue suffices")
    if inst.b == 1:
        # k < b means k = 0 here; a single blue needs one red
        return PreprocessResult(
            "trivial-no", "single blue vertex but k = 0")
    return PreprocessResult("normalized", "instance survives preprocessing",
                            inst)


Role = tuple
EdgeKind = tuple


@dataclass(frozen=True)
class ReducedInstance:
    """The gadget graph H with role and edge-kind annotations."""

    h: Graph
    ell: int
    variant: str  # "bipartite" | "split"
    source: RbdsInstance
    roles: dict[int, Role] = field(compare=False)
    edge_kinds: dict[Edge, EdgeKind] = field(compare=False)
    red_at: dict[int, int] = field(compare=False)      # red position -> index
    blue_at: dict[int, int] = field(compare=False)     # blue position -> index
    dep_at: dict[tuple[int, int], int] = field(compare=False)
    depstar_at: dict[int, int] = field(compare=False)
    star: int
    dagger: int
    dominators: dict[int, tuple[int, ...]] = field(compare=False)

    @property
    def b(self) -> int:
        return self.source.b

    @property
    def r(self) -> int:
        return self.source.r

    def blue_mask(self) -> int:
        return mask_of(self.blue_at.values())

    def core_mask(self) -> int:
        return self.blue_mask() | (1 << self.star)


def build_reduction(inst: RbdsInstance, variant: str = "bipartite") -> ReducedInstance:
    """Construct H and ell = b+k+2 for a preprocessed instance."""
    if variant not in ("bipartite", "split"):
        raise ReductionError(f"unknown variant {variant!r}")
    pre = preprocess_rbds(inst)
    if pre.outcome != "normalized":
        raise ReductionError(f"instance not normalized: {pre.reason}")
    r, b, k = inst.r, inst.b, inst.k
    t = b * b + 3
    ids = [f"v{i}" for i in range(1, r + 1)]
    ids += [f"u{i}" for i in range(1, b + 1)]
    ids += [f"w{i}_{j}" for i in range(1, b + 1) for j in range(1, t + 1)]
    ids += [f"wstar_{j}" for j in range(1, t + 1)]
    ids += ["star", "dagger"]

    red_pos = {inst.reds[i]: i + 1 for i in range(r)}
    blue_pos = {inst.blues[i]: i + 1 for i in range(b)}
    kinds: list[tuple[str, str, EdgeKind]] = []
    for rid, bid in sorted(inst.edges, key=lambda e: (red_pos[e[0]], blue_pos[e[1]])):
        kinds.append((f"v{red_pos[rid]}", f"u{blue_pos[bid]}", ("structural",)))
    for i in range(1, b + 1):
        for j in range(1, t + 1):
            kinds.append((f"u{i}", f"w{i}_{j}", ("sliding", i)))
    for j in range(1, t + 1):
        kinds.append(("star", f"wstar_{j}", ("sliding", "star")))
    for i in range(1, r + 1):
        kinds.append((f"v{i}", "star", ("supplier",)))
    kinds.append(("star", "dagger", ("bridge",)))
    if variant == "split":
        clique = [f"u{i}" for i in range(1, b + 1)] + ["star"]
        for x_i, x in enumerate(clique):
            for y in clique[x_i + 1:]:
                kinds.append((x, y, ("clique",)))

    h = Graph(ids, [(a, c) for a, c, _ in kinds])
    roles: dict[int, Role] = {}
    for i in range(1, r + 1):
        roles[h.index(f"v{i}")] = ("red", i)
    for i in range(1, b + 1):
        roles[h.index(f"u{i}")] = ("blue", i)
        for j in range(1, t + 1):
            roles[h.index(f"w{i}_{j}")] = ("dep", i, j)
    for j in range(1, t + 1):
        roles[h.index(f"wstar_{j}")] = ("depstar", j)
    roles[h.index("star")] = ("universal",)
    roles[h.index("dagger")] = ("backup",)
    edge_kinds = {h.edge_key(h.index(a), h.index(c)): kind for a, c, kind in kinds}
    dominators = {
        blue_pos[bid]: tuple(sorted(red_pos[rid] for rid in inst.red_neighbors(bid)))
        for bid in inst.blues}
    return ReducedInstance(
        h=h, ell=b + k + 2, variant=variant, source=inst, roles=roles,
        edge_kinds=edge_kinds,
        red_at={i: h.index(f"v{i}") for i in range(1, r + 1)},
        blue_at={i: h.index(f"u{i}") for i in range(1, b + 1)},
        dep_at={(i, j): h.index(f"w{i}_{j}")
                for i in range(1, b + 1) for j in range(1, t + 1)},
        depstar_at={j: h.index(f"wstar_{j}") for j in range(1, t + 1)},
        star=h.index("star"), dagger=h.index("dagger"),
        dominators=dominators)


# ---------------------------------------------------------------------------
# nice covers

@dataclass(frozen=True)
class NiceCover:
    """A classified cover: B + star + dominating reds + one floating guard."""

    kind: tuple  # ("backup",) | ("dep", i, j) | ("depstar", j) | ("red", j)
    dom: frozenset[int]  # red positions (1-based)

    def extra_vertex(self, ri: ReducedInstance) -> int:
        tag = self.kind[0]
        if tag == "backup":
            return ri.dagger
        if tag == "dep":
            return ri.dep_at[(self.kind[1], self.kind[2])]
        if tag == "depstar":
            return ri.depstar_at[self.kind[1]]
        if tag == "red":
            return ri.red_at[self.kind[1]]
        raise ValueError(f"unknown nice-cover kind {self.kind!r}")

    def vertices(self, ri: ReducedInstance) -> frozenset[int]:
        base = set(ri.blue_at.values())
        base.add(ri.star)
        base.update(ri.red_at[p] for p in self.dom)
        base.add(self.extra_vertex(ri))
        return frozenset(base)


def pad_dominating_set(inst: RbdsInstance, dom: Iterable[int]) -> frozenset[int]:
    """Extend a dominating index set to exactly k reds (smallest spare first)."""
    dom = set(dom)
    if len(dom) > inst.k:
        raise ReductionError("dominating set exceeds budget k")
    for p in range(1, inst.r + 1):
        if len(dom) >= inst.k:
            break
        dom.add(p)
    if len(dom) < inst.k:
        raise ReductionError(
            f"cannot pad dominating set to size k={inst.k} with r={inst.r} reds")
    return frozenset(dom)


def _check_dominating(ri: ReducedInstance, dom: frozenset[int]) -> bool:
    return all(any(p in dom for p in ri.dominators[q])
               for q in range(1, ri.b + 1))


def nice_cover_families(ri: ReducedInstance,
                        dom: Iterable[int]) -> list[NiceCover]:
    """All nice covers for one dominating set: backup, dependents, spare reds."""
    dom = frozenset(dom)
    if len(dom) != ri.source.k:
        raise ReductionError("dominating set must have size exactly k (pad it)")
    if not _check_dominating(ri, dom):
        raise ReductionError("index set does not dominate the blue vertices")
    t = ri.b * ri.b + 3
    out = [NiceCover(("backup",), dom)]
    for i in range(1, ri.b + 1):
        out.extend(NiceCover(("dep", i, j), dom) for j in range(1, t + 1))
    out.extend(NiceCover(("depstar", j), dom) for j in range(1, t + 1))
    out.extend(NiceCover(("red", j), dom)
               for j in range(1, ri.r + 1) if j not in dom)
    return out


def classify_cover(ri: ReducedInstance, c: Iterable[int]) -> Optional[NiceCover]:
    """Recognize a vertex set as a nice cover, or return None.

    Red covers can match several (dom, spare) splits; the smallest spare index
    whose removal still leaves a dominating set is chosen.
    """
    cset = set(c)
    if len(cset) != ri.ell:
        return None
    core = set(ri.blue_at.values()) | {ri.star}
    if not core <= cset:
        return None
    rest = cset - core
    if len(rest) != ri.source.k + 1:
        return None
    red_positions = []
    extras = []
    for v in sorted(rest):
        role = ri.roles[v]
        if role[0] == "red":
            red_positions.append(role[1])
        else:
            extras.append(role)
    if len(extras) > 1:
        return None
    if len(extras) == 1:
        dom = frozenset(red_positions)
        if len(dom) != ri.source.k or not _check_dominating(ri, dom):
            return None
        role = extras[0]
        if role[0] == "backup":
            return NiceCover(("backup",), dom)
        if role[0] == "dep":
            return NiceCover(("dep", role[1], role[2]), dom)
        if role[0] == "depstar":
            return NiceCover(("depstar", role[1]), dom)
        return None
    # k+1 reds: find the smallest spare whose removal keeps domination
    allred = frozenset(red_positions)
    for j in sorted(allred):
        dom = allred - {j}
        if _check_dominating(ri, dom):
            return NiceCover(("red", j), dom)
    return None


def _smallest_dominator(ri: ReducedInstance, dom: frozenset[int], q: int) -> int:
    for p in ri.dominators[q]:
        if p in dom:
            return p
    raise ReductionError(f"blue u{q} is not dominated; nice cover is invalid")


def defend_nice(ri: ReducedInstance, nc: NiceCover,
                attacked: Edge) -> tuple[MovePlan, NiceCover]:
    """One defense step keeping the configuration nice.

    Dispatches on (cover kind, edge kind); every existential choice resolves
    to the smallest qualifying index, so the machine is deterministic.
    """
    h = ri.h
    edge = h.edge_key(*attacked)
    kind = ri.edge_kinds[edge]
    cover = nc.vertices(ri)
    dom = nc.dom
    star, dag = ri.star, ri.dagger

    def role(v: int) -> Role:
        return ri.roles[v]

    def exchange() -> list[tuple[int, int]]:
        u, v = edge
        if u not in cover or v not in cover:
            raise ReductionError("exchange requires both endpoints guarded")
        return [(u, v), (v, u)]

    def finish(moves: list[tuple[int, int]],
               new_kind: tuple) -> tuple[MovePlan, NiceCover]:
        mapping = {x: x for x in cover}
        for a, b2 in moves:
            if a not in cover:
                raise ReductionError(f"move from unguarded vertex {h.ids[a]}")
            mapping[a] = b2
        u, v = edge
        if mapping.get(u) == v:
            crossing = (u, v)
        elif mapping.get(v) == u:
            crossing = (v, u)
        else:
            raise ReductionError("no guard crosses the attacked edge")
        plan = MovePlan(tuple(sorted(mapping.items())), crossing)
        return plan, NiceCover(new_kind, dom)

    tag = nc.kind[0]
    ek = kind[0]

    if ek == "clique":
        # split variant only; both endpoints sit in B + star, always guarded
        return finish(exchange(), nc.kind)
    if ek == "bridge":
        if tag == "backup":
            return finish(exchange(), ("backup",))
        if tag == "red":
            j = nc.kind[1]
            return finish([(star, dag), (ri.red_at[j], star)], ("backup",))
        if tag == "dep":
            i = nc.kind[1]
            q = _smallest_dominator(ri, dom, i)
            return finish([(star, dag), (ri.red_at[q], star),
                           (ri.blue_at[i], ri.red_at[q]),
                           (nc.extra_vertex(ri), ri.blue_at[i])], ("backup",))
        # depstar
        return finish([(star, dag), (nc.extra_vertex(ri), star)], ("backup",))

    if ek == "supplier":
        vi = edge[0] if role(edge[0])[0] == "red" else edge[1]
        i = role(vi)[1]
        if i in dom or (tag == "red" and nc.kind[1] == i):
            return finish(exchange(), nc.kind)
        if tag == "backup":
            return finish([(star, vi), (dag, star)], ("red", i))
        if tag == "red":
            j = nc.kind[1]
            return finish([(star, vi), (ri.red_at[j], star)], ("red", i))
        if tag == "dep":
            jd = nc.kind[1]
            q = _smallest_dominator(ri, dom, jd)
            return finish([(star, vi), (ri.red_at[q], star),
                           (ri.blue_at[jd], ri.red_at[q]),
                           (nc.extra_vertex(ri), ri.blue_at[jd])], ("red", i))
        return finish([(star, vi), (nc.extra_vertex(ri), star)], ("red", i))

    if ek == "structural":
        x, y = edge
        if role(x)[0] == "red":
            vq, up = x, y
        else:
            vq, up = y, x
        q, p = role(vq)[1], role(up)[1]
        if q in dom or (tag == "red" and nc.kind[1] == q):
            return finish(exchange(), nc.kind)
        if tag == "dep" and nc.kind[1] == p:
            # attacked blue holds the floating dependent guard
            return finish([(up, vq), (nc.extra_vertex(ri), up)], ("red", q))
        r = _smallest_dominator(ri, dom, p)
        vr = ri.red_at[r]
        if tag == "backup":
            return finish([(up, vq), (vr, up), (star, vr), (dag, star)],
                          ("red", q))
        if tag == "red":
            j = nc.kind[1]
            return finish([(up, vq), (vr, up), (star, vr),
                           (ri.red_at[j], star)], ("red", q))
        if tag == "depstar":
            return finish([(up, vq), (vr, up), (star, vr),
                           (nc.extra_vertex(ri), star)], ("red", q))
        # dep on another blue's dependent
        jd = nc.kind[1]
        ujd = ri.blue_at[jd]
        w = nc.extra_vertex(ri)
        if r in ri.dominators[jd]:
            return finish([(up, vq), (vr, up), (ujd, vr), (w, ujd)], ("red", q))
        s = _smallest_dominator(ri, dom, jd)
        vs = ri.red_at[s]
        return finish([(up, vq), (vr, up), (star, vr), (vs, star),
                       (ujd, vs), (w, ujd)], ("red", q))

    if ek == "sliding":
        if kind[1] == "star":
            z = edge[0] if edge[0] != star else edge[1]
            zj = role(z)[1]
            if tag == "backup":
                return finish([(star, z), (dag, star)], ("depstar", zj))
            if tag == "red":
                j = nc.kind[1]
                return finish([(star, z), (ri.red_at[j], star)], ("depstar", zj))
            if tag == "depstar":
                if nc.kind[1] == zj:
                    return finish(exchange(), nc.kind)
                return finish([(star, z), (nc.extra_vertex(ri), star)],
                              ("depstar", zj))
            # dep guard on a blue's dependent; mirror of the depstar cascade
            jd = nc.kind[1]
            r = _smallest_dominator(ri, dom, jd)
            return finish([(star, z), (ri.red_at[r], star),
                           (ri.blue_at[jd], ri.red_at[r]),
                           (nc.extra_vertex(ri), ri.blue_at[jd])],
                          ("depstar", zj))
        i = kind[1]
        ui = ri.blue_at[i]
        z = edge[0] if edge[0] != ui else edge[1]
        zj = role(z)[2]
        q = _smallest_dominator(ri, dom, i)
        vq_ = ri.red_at[q]
        if tag == "backup":
            return finish([(ui, z), (vq_, ui), (star, vq_), (dag, star)],
                          ("dep", i, zj))
        if tag == "red":
            j = nc.kind[1]
            return finish([(ui, z), (vq_, ui), (star, vq_),
                           (ri.red_at[j], star)], ("dep", i, zj))
        if tag == "depstar":
            return finish([(ui, z), (vq_, ui), (star, vq_),
                           (nc.extra_vertex(ri), star)], ("dep", i, zj))
        jd = nc.kind[1]
        w = nc.extra_vertex(ri)
        if jd == i:
            if z == w:
                return finish(exchange(), nc.kind)
            return finish([(ui, z), (w, ui)], ("dep", i, zj))
        r = _smallest_dominator(ri, dom, jd)
        ujd = ri.blue_at[jd]
        if r == q:
            # a common dominator chains the two blues directly
            return finish([(ui, z), (vq_, ui), (ujd, vq_), (w, ujd)],
                          ("dep", i, zj))
        vr = ri.red_at[r]
        return finish([(ui, z), (vq_, ui), (star, vq_), (vr, star),
                       (ujd, vr), (w, ujd)], ("dep", i, zj))

    raise ReductionError(f"unhandled edge kind {kind!r}")


# ---------------------------------------------------------------------------
# verification, extraction, oracle

@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class ReductionReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        return [f"[{'ok' if c.ok else 'FAIL'}] {c.name}: {c.detail}"
                for c in self.checks]


def verify_instance(ri: ReducedInstance,
                    budget: Optional[Budget] = None) -> ReductionReport:
    """Structural assertions about H; failures are reported, not raised."""
    budget = budget or Budget()
    checks: list[Check] = []
    h, b, r, k = ri.h, ri.b, ri.r, ri.source.k
    expected_n = r + b ** 3 + b ** 2 + 4 * b + 5
    checks.append(Check("vertex-count", h.n == expected_n,
                        f"|V(H)| = {h.n}, formula gives {expected_n}"))
    checks.append(Check("ell", ri.ell == b + k + 2,
                        f"ell = {ri.ell} = b+k+2"))
    t = b * b + 3
    m = len(ri.source.edges)
    expected_m = m + b * t + t + r + 1
    if ri.variant == "split":
        expected_m += (b + 1) * b // 2
    checks.append(Check("edge-count", len(h.edges) == expected_m,
                        f"|E(H)| = {len(h.edges)}, families give {expected_m}"))
    kinds_ok = set(ri.edge_kinds) == set(h.edges)
    checks.append(Check("edge-kind-partition", kinds_ok,
                        "every edge carries exactly one kind"))

    core = sorted(ri.blue_at.values()) + [ri.star]
    cover_ok = is_vertex_cover(h, core)
    # disjoint witness matching: each blue to its first dependent, star to its own
    matching_ok = all(h.has_edge(ri.blue_at[i], ri.dep_at[(i, 1)])
                      for i in range(1, b + 1))
    matching_ok = matching_ok and h.has_edge(ri.star, ri.depstar_at[1])
    checks.append(Check(
        "mvc-structural", cover_ok and matching_ok,
        f"B+star covers H and a disjoint matching of size {b + 1} exists, so mvc = {b + 1}"))
    if h.n <= 32:
        size, _ = mvc_exact(h, limit=32)
        checks.append(Check("mvc-exact", size == b + 1,
                            f"mvc_exact(H) = {size}, expected {b + 1}"))

    # every cover of size <= ell contains B + star: dependent blobs force it
    blob_ok = t > ri.ell
    checks.append(Check(
        "core-containment-structural", blob_ok,
        f"dependent families have size {t} > ell = {ri.ell}, pinning B and star"))
    if math.comb(h.n, ri.ell) <= budget.configs:
        core_mask = ri.core_mask()
        bad = 0
        total = 0
        incident = [0] * h.n
        for e, (i, j) in enumerate(h.edges):
            incident[i] |= 1 << e
            incident[j] |= 1 << e
        full = (1 << len(h.edges)) - 1
        for size in range(b + 1, ri.ell + 1):
            for combo in combinations(range(h.n), size):
                covm = 0
                for vtx in combo:
                    covm |= incident[vtx]
                if covm == full:
                    total += 1
                    if mask_of(combo) & core_mask != core_mask:
                        bad += 1
        checks.append(Check(
            "core-containment-enumerated", bad == 0,
            f"{total} covers of size <= ell enumerated, {bad} miss B+star"))

    flags = classify(h)
    if ri.variant == "bipartite":
        d = diameter(h)
        checks.append(Check("class-bipartite", flags.bipartite, "H is bipartite"))
        checks.append(Check("diameter", d <= 6, f"diam(H) = {d} <= 6"))
    else:
        checks.append(Check("class-split", flags.split, "H is a split graph"))
    return ReductionReport(tuple(checks))


def check_connected_cover(ri: ReducedInstance, c: Iterable[int]) -> bool:
    """True iff H restricted to the guarded vertices is connected."""
    cset = sorted(set(c))
    if len(cset) <= 1:
        return True
    pos = {v: i for i, v in enumerate(cset)}
    seen = {cset[0]}
    stack = [cset[0]]
    while stack:
        u = stack.pop()
        for w in ri.h.adj[u]:
            if w in pos and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(cset)


def extract_dominating_set(ri: ReducedInstance, s: SafeSet) -> frozenset[str]:
    """Recover a dominating set of size <= k from a winning guard placement.

    Takes the first safe member; if the backup vertex is unguarded, the bridge
    is attacked first so the defense pulls a guard onto it. Guarded reds plus
    one red neighbor for every blue with a guarded dependent dominate.
    """
    if not s.members:
        raise UnsafeConfigError("safe set is empty; nothing to extract")
    member = set_of(s.members[0])
    if ri.dagger not in member:
        bridge = ri.h.edge_key(ri.star, ri.dagger)
        _plan, member = defender_policy_step(s, member, bridge)
    guarded_reds = {ri.roles[v][1] for v in member if ri.roles[v][0] == "red"}
    dep_blues = {ri.roles[v][1] for v in member if ri.roles[v][0] == "dep"}
    chosen = set(guarded_reds)
    for q in sorted(dep_blues):
        chosen.add(ri.dominators[q][0])
    if len(chosen) > ri.source.k:
        raise ReductionError(
            f"extracted {len(chosen)} reds, exceeding k={ri.source.k}; "
            "solver or construction bug")
    if not _check_dominating(ri, frozenset(chosen)):
        raise ReductionError("extracted set does not dominate; solver or "
                             "construction bug")
    return frozenset(ri.source.reds[p - 1] for p in chosen)


def rbds_oracle(inst: RbdsInstance,
                budget: Optional[Budget] = None
                ) -> tuple[bool, Optional[tuple[str, ...]]]:
    """Brute force over red subsets of size <= k, smallest and lexicographic first."""
    budget = budget or Budget()
    total = sum(math.comb(inst.r, i) for i in range(min(inst.k, inst.r) + 1))
    budget.check_configs(total)
    blue_masks = []
    pos = {rid: i for i, rid in enumerate(inst.reds)}
    for bid in inst.blues:
        blue_masks.append(mask_of(pos[rid] for rid in inst.red_neighbors(bid)))
    for size in range(min(inst.k, inst.r) + 1):
        for combo in combinations(range(inst.r), size):
            m = mask_of(combo)
            if all(m & bm for bm in blue_masks):
                return True, tuple(inst.reds[i] for i in combo)
    return False, None


# ---------------------------------------------------------------------------
# artifact files

def write_reduction_sidecar(ri: ReducedInstance) -> str:
    h = ri.h
    data = {
        "ell": ri.ell,
        "variant": ri.variant,
        "source_digest": ri.source.digest(),
        "source": json.loads(ri.source.to_json()),
        "roles": {h.ids[v]: list(role) for v, role in sorted(ri.roles.items())},
        "edge_kinds": [[h.ids[i], h.ids[j], list(kind)]
                       for (i, j), kind in sorted(ri.edge_kinds.items())],
    }
    return json.dumps(data, indent=2) + "\n"


def load_reduction(sidecar_text: str) -> ReducedInstance:
    """Rebuild a ReducedInstance from its sidecar (source instance + variant)."""
    try:
        data = json.loads(sidecar_text)
        inst = RbdsInstance(
            reds=tuple(data["source"]["reds"]),
            blues=tuple(data["source"]["blues"]),
            edges=tuple((r, b) for r, b in data["source"]["edges"]),
            k=int(data["source"]["k"]))
        variant = data["variant"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ReductionError(f"malformed sidecar: {exc}") from exc
    ri = build_reduction(inst, variant)
    if data.get("source_digest") not in (None, inst.digest()):
        raise ReductionError("sidecar digest does not match its source instance")
    if int(data.get("ell", ri.ell)) != ri.ell:
        raise ReductionError("sidecar ell disagrees with the construction")
    return ri
