"""Shared builders, independent oracles, and policy adapters for the tests."""

from __future__ import annotations

import random
from itertools import combinations, permutations

from evcgame import cobipartite as cb
from evcgame import engine, reduction
from evcgame.graphs import Graph


def path_graph(n: int) -> Graph:
    ids = [f"v{i}" for i in range(1, n + 1)]
    return Graph(ids, [(ids[i], ids[i + 1]) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    ids = [f"v{i}" for i in range(1, n + 1)]
    return Graph(ids, [(ids[i], ids[(i + 1) % n]) for i in range(n)])


def clique_graph(n: int) -> Graph:
    ids = [f"v{i}" for i in range(1, n + 1)]
    return Graph(ids, [(ids[i], ids[j]) for i in range(n)
                       for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    ids = ["c"] + [f"l{i}" for i in range(1, leaves + 1)]
    return Graph(ids, [("c", x) for x in ids[1:]])


def random_graph(rng: random.Random, n: int, density: float = 0.4) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < density]
    return Graph.from_indices(n, edges)


# --- independent oracles -----------------------------------------------------

def all_matchings_max(g: Graph) -> int:
    """Maximum matching size by exhaustive search over edge subsets."""
    best = 0
    edges = list(g.edges)
    for r in range(len(edges), 0, -1):
        if r <= best:
            break
        for combo in combinations(edges, r):
            used = set()
            ok = True
            for u, v in combo:
                if u in used or v in used:
                    ok = False
                    break
                used.add(u)
                used.add(v)
            if ok:
                best = max(best, r)
                break
    return best


def mvc_by_subsets(g: Graph) -> int:
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            s = set(combo)
            if all(i in s or j in s for i, j in g.edges):
                return k
    raise AssertionError("unreachable")


def connected_graphs_upto_iso(n: int) -> list[Graph]:
    """All connected graphs on n vertices, one per isomorphism class."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = len(pairs)
    eidx = {e: x for x, e in enumerate(pairs)}
    tables = []
    for pm in permutations(range(n)):
        tables.append([eidx[tuple(sorted((pm[i], pm[j])))] for i, j in pairs])
    seen: set[int] = set()
    out = []
    for mask in range(1 << m):
        if mask in seen:
            continue
        nm = [0] * n
        for x, (i, j) in enumerate(pairs):
            if (mask >> x) & 1:
                nm[i] |= 1 << j
                nm[j] |= 1 << i
        comp = 1
        frontier = 1
        while frontier:
            new = 0
            mm = frontier
            while mm:
                low = mm & -mm
                i = low.bit_length() - 1
                mm ^= low
                new |= nm[i]
            frontier = new & ~comp
            comp |= new
        if comp != (1 << n) - 1:
            continue
        orbit = set()
        for tbl in tables:
            im = 0
            for x in range(m):
                if (mask >> x) & 1:
                    im |= 1 << tbl[x]
            orbit.add(im)
        seen |= orbit
        out.append(Graph.from_indices(
            n, [pairs[x] for x in range(m) if (mask >> x) & 1]))
    return out


def rbds_oracle_recheck(inst: reduction.RbdsInstance) -> bool:
    """Separate brute force over red subsets, written against sets not masks."""
    blues = {b: set(inst.red_neighbors(b)) for b in inst.blues}
    for size in range(min(inst.k, inst.r) + 1):
        for combo in combinations(inst.reds, size):
            chosen = set(combo)
            if all(ns & chosen for ns in blues.values()):
                return True
    return False


# --- policy adapters ---------------------------------------------------------

class CobipDefender:
    """Plays the branch strategy of a cobipartite instance."""

    def __init__(self, inst: cb.CobipInstance):
        self.inst = inst
        self.analysis = cb.analyze(inst)
        self.ct = cb.initial_template(inst, self.analysis)

    def initial(self, g, k):
        return self.ct.materialize(self.inst)

    def defend(self, g, config, attacked):
        plan, self.ct = cb.defend_cobip(self.inst, self.analysis, self.ct,
                                        attacked)
        return plan, self.ct.materialize(self.inst)


class NiceDefender:
    """Plays the nice-cover machine of a reduced instance from the backup cover."""

    def __init__(self, ri: reduction.ReducedInstance, dom):
        self.ri = ri
        self.nc = reduction.NiceCover(("backup",), frozenset(dom))

    def initial(self, g, k):
        return self.nc.vertices(self.ri)

    def defend(self, g, config, attacked):
        plan, self.nc = reduction.defend_nice(self.ri, self.nc, attacked)
        return plan, self.nc.vertices(self.ri)


class AboDefender:
    """All-guards-but-one shuttle on an arbitrary graph."""

    def __init__(self, g: Graph):
        self.hole = 0
        self.g = g

    def initial(self, g, k):
        return frozenset(x for x in range(g.n) if x != self.hole)

    def defend(self, g, config, attacked):
        u, v = attacked
        mapping = {x: x for x in config}
        if self.hole in (u, v):
            other = v if self.hole == u else u
            mapping[other] = self.hole
            crossing = (other, self.hole)
            self.hole = other
        else:
            mapping[u], mapping[v] = v, u
            crossing = (u, v)
        plan = engine.MovePlan(tuple(sorted(mapping.items())), crossing)
        return plan, frozenset(mapping.values())
