"""Simple undirected graphs with stable external ids and dense internal indices.

Vertices carry external string ids; internal indices 0..n-1 are assigned in
sorted-id order so that every derived artifact is deterministic across runs.
Vertex sets are plain frozensets of indices at the API boundary; integer
bitmasks are used internally where speed matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

import networkx as nx

INFINITE = math.inf


class GraphFormatError(ValueError):
    """Raised for malformed graph files or inconsistent construction input."""


class SizeLimitError(ValueError):
    """Raised when an exact search is asked to exceed its configured limit."""


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph.

    Construction validates: unique ids, no self-loops, no duplicate edges.
    ``edges`` holds index pairs (i, j) with i < j, sorted; ``adj`` holds
    sorted neighbor tuples; ``closed_mask[v]`` is the bitmask of N[v].
    """

    __slots__ = ("n", "ids", "edges", "adj", "nbr_mask", "closed_mask",
                 "_edge_set", "_index")

    def __init__(self, ids: Sequence[str], edge_ids: Iterable[tuple[str, str]]):
        if len(set(ids)) != len(ids):
            raise GraphFormatError("duplicate vertex id")
        self.ids: tuple[str, ...] = tuple(sorted(ids))
        self.n: int = len(self.ids)
        self._index = {vid: i for i, vid in enumerate(self.ids)}
        seen: set[tuple[int, int]] = set()
        for a, b in edge_ids:
            if a not in self._index:
                raise GraphFormatError(f"unknown vertex id {a!r} in edge")
            if b not in self._index:
                raise GraphFormatError(f"unknown vertex id {b!r} in edge")
            if a == b:
                raise GraphFormatError(f"self-loop at {a!r}")
            i, j = self._index[a], self._index[b]
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise GraphFormatError(f"duplicate edge {a!r} {b!r}")
            seen.add((i, j))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        self._edge_set = frozenset(self.edges)
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)
        self.nbr_mask: tuple[int, ...] = tuple(mask_of(a) for a in self.adj)
        self.closed_mask: tuple[int, ...] = tuple(
            self.nbr_mask[v] | (1 << v) for v in range(self.n))

    @classmethod
    def from_indices(cls, n: int, edges: Iterable[tuple[int, int]],
                     ids: Optional[Sequence[str]] = None) -> "Graph":
        """Build from index pairs; default ids v0..v{n-1} (zero padded to sort)."""
        if ids is None:
            width = len(str(max(n - 1, 0)))
            ids = [f"v{i:0{width}d}" for i in range(n)]
        ids = list(ids)
        if len(ids) != n:
            raise GraphFormatError("id list length does not match n")
        order = sorted(range(n), key=lambda i: ids[i])
        if order != list(range(n)):
            raise GraphFormatError("ids must be given in sorted order for from_indices")
        return cls(ids, [(ids[i], ids[j]) for i, j in edges])

    def index(self, vid: str) -> int:
        return self._index[vid]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set

    def edge_key(self, u: int, v: int) -> tuple[int, int]:
        if not self.has_edge(u, v):
            raise GraphFormatError(f"({self.ids[u]}, {self.ids[v]}) is not an edge")
        return (min(u, v), max(u, v))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def complement(self) -> "Graph":
        edges = [(self.ids[i], self.ids[j])
                 for i in range(self.n) for j in range(i + 1, self.n)
                 if (i, j) not in self._edge_set]
        return Graph(self.ids, edges)

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Graph) and self.ids == other.ids
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.ids, self.edges))


def parse_graph(text: str) -> Graph:
    """Parse the graph file format.

    First non-comment line is ``graph <n>``; optional ``v <id>`` lines (either
    none, defaulting to v0..v{n-1}, or exactly n of them); then ``e <id> <id>``
    lines. ``#`` starts a comment anywhere on a line.
    """
    header: Optional[int] = None
    vids: list[str] = []
    eids: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or parts[0] != "graph":
                raise GraphFormatError(f"line {lineno}: expected 'graph <n>' header")
            try:
                header = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: vertex count is not an integer")
            if header < 0:
                raise GraphFormatError(f"line {lineno}: negative vertex count")
            continue
        if parts[0] == "v":
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'v <id>'")
            vids.append(parts[1])
        elif parts[0] == "e":
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'e <id> <id>'")
            eids.append((parts[1], parts[2]))
        else:
            raise GraphFormatError(f"line {lineno}: unknown directive {parts[0]!r}")
    if header is None:
        raise GraphFormatError("missing 'graph <n>' header")
    if vids:
        if len(vids) != header:
            raise GraphFormatError(
                f"declared {header} vertices but found {len(vids)} 'v' lines")
    else:
        # no explicit declarations: ids come from edge lines, padded with defaults
        seen: list[str] = []
        known: set[str] = set()
        for a, b in eids:
            for x in (a, b):
                if x not in known:
                    known.add(x)
                    seen.append(x)
        if len(seen) > header:
            raise GraphFormatError(
                f"edges mention {len(seen)} vertices but header declares {header}")
        vids = seen
        width = len(str(max(header - 1, 0)))
        i = 0
        while len(vids) < header:
            cand = f"v{i:0{width}d}"
            if cand not in known:
                vids.append(cand)
            i += 1
    return Graph(vids, eids)


def serialize_graph(g: Graph) -> str:
    lines = [f"graph {g.n}"]
    lines.extend(f"v {vid}" for vid in g.ids)
    lines.extend(f"e {g.ids[i]} {g.ids[j]}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def is_vertex_cover(g: Graph, s: Iterable[int]) -> bool:
    m = mask_of(s)
    return all(m & (1 << i) or m & (1 << j) for i, j in g.edges)


def _greedy_matching_lb(edges: list[tuple[int, int]]) -> int:
    """Size of a greedily built disjoint edge set; lower-bounds mvc."""
    used = 0
    size = 0
    for i, j in edges:
        b = (1 << i) | (1 << j)
        if not used & b:
            used |= b
            size += 1
    return size


def mvc_exact(g: Graph, limit: int = 24) -> tuple[int, frozenset[int]]:
    """Minimum vertex cover by branch and bound on a max-degree vertex."""
    if g.n > limit:
        raise SizeLimitError(f"n={g.n} exceeds exact-search limit {limit}")
    if not g.edges:
        return 0, frozenset()
    best_size = g.n
    best_mask = g.full_mask()

    edges = list(g.edges)

    def solve(remaining: list[tuple[int, int]], chosen: int, size: int) -> None:
        nonlocal best_size, best_mask
        if not remaining:
            if size < best_size:
                best_size, best_mask = size, chosen
            return
        if size + _greedy_matching_lb(remaining) >= best_size:
            return
        deg: dict[int, int] = {}
        for i, j in remaining:
            deg[i] = deg.get(i, 0) + 1
            deg[j] = deg.get(j, 0) + 1
        v = max(deg, key=lambda x: (deg[x], -x))
        # branch 1: take v
        rest = [e for e in remaining if v not in e]
        solve(rest, chosen | (1 << v), size + 1)
        # branch 2: exclude v, forcing all its remaining neighbors
        forced = 0
        cnt = 0
        for i, j in remaining:
            if i == v and not forced & (1 << j):
                forced |= 1 << j
                cnt += 1
            elif j == v and not forced & (1 << i):
                forced |= 1 << i
                cnt += 1
        rest2 = [e for e in remaining
                 if not forced & ((1 << e[0]) | (1 << e[1]))]
        solve(rest2, chosen | forced, size + cnt)

    solve(edges, 0, 0)
    return best_size, set_of(best_mask)


def mvc_brute(g: Graph, limit: int = 16) -> tuple[int, frozenset[int]]:
    """Independent brute-force mvc over all subsets, smallest first."""
    if g.n > limit:
        raise SizeLimitError(f"n={g.n} exceeds brute-force limit {limit}")
    if not g.edges:
        return 0, frozenset()
    edge_bits = list(g.edges)
    for k in range(1, g.n + 1):
        for combo in combinations(range(g.n), k):
            m = mask_of(combo)
            if all(m & (1 << i) or m & (1 << j) for i, j in edge_bits):
                return k, frozenset(combo)
    raise AssertionError("unreachable: V covers everything")


def max_matching(g: Graph) -> frozenset[tuple[int, int]]:
    """Maximum matching on an arbitrary graph (delegated to networkx)."""
    if not g.edges:
        return frozenset()
    ng = nx.Graph()
    ng.add_nodes_from(range(g.n))
    ng.add_edges_from(g.edges)
    raw = nx.max_weight_matching(ng, maxcardinality=True, weight=None)
    return frozenset((min(u, v), max(u, v)) for u, v in raw)


def bipartition(g: Graph) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """Two-color g; None when an odd cycle exists. Isolated vertices go left."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for w in g.adj[u]:
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    left = frozenset(v for v in range(g.n) if color[v] == 0)
    right = frozenset(v for v in range(g.n) if color[v] == 1)
    return left, right


def max_bipartite_matching(g: Graph, left: Iterable[int]) -> dict[int, int]:
    """Hopcroft-Karp style maximum matching; returns pairing for both sides."""
    left_list = sorted(left)
    pair: dict[int, int] = {}

    # repeated BFS phases (Hopcroft-Karp); DFS augment along level graph
    while True:
        dist = {u: 0 for u in left_list if u not in pair}
        queue = list(dist)
        found = False
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for w in g.adj[u]:
                nxt = pair.get(w)
                if nxt is None:
                    found = True
                elif nxt not in dist:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        if not found:
            break

        def dfs(u: int) -> bool:
            du = dist.get(u)
            if du is None:
                return False
            for w in g.adj[u]:
                nxt = pair.get(w)
                if nxt is None or (dist.get(nxt) == du + 1 and dfs(nxt)):
                    pair[w] = u
                    pair[u] = w
                    return True
            dist.pop(u, None)
            return False

        for u in left_list:
            if u not in pair:
                dfs(u)
    return pair


def mvc_bipartite(g: Graph) -> tuple[int, frozenset[int]]:
    """mvc on bipartite graphs via matching duality (Koenig construction)."""
    parts = bipartition(g)
    if parts is None:
        raise GraphFormatError("graph is not bipartite")
    left, _right = parts
    pair = max_bipartite_matching(g, left)
    matched_left = {u for u in left if u in pair}
    # alternating reachability from unmatched left vertices
    reach: set[int] = set(u for u in left if u not in pair)
    stack = list(reach)
    while stack:
        u = stack.pop()
        for w in g.adj[u]:  # unmatched edges out of the left side
            if w in reach or pair.get(u) == w:
                continue
            reach.add(w)
            nxt = pair.get(w)
            if nxt is not None and nxt not in reach:
                reach.add(nxt)
                stack.append(nxt)
    cover = frozenset((left - reach) | (set(pair) - left) & reach)
    size = len(matched_left)
    assert len(cover) == size, "Koenig cover size must equal matching size"
    assert is_vertex_cover(g, cover)
    return size, cover


def two_matching_cover(g: Graph) -> frozenset[int]:
    """Both endpoints of a maximum matching; at most twice the optimum cover."""
    m = max_matching(g)
    return frozenset(v for e in m for v in e)


def diameter(g: Graph) -> float:
    """BFS-exact diameter; INFINITE when disconnected (or n == 0)."""
    if g.n == 0:
        return INFINITE
    worst = 0
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        queue = [s]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for w in g.adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if -1 in dist:
            return INFINITE
        worst = max(worst, max(dist))
    return worst


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or diameter(g) != INFINITE


@dataclass(frozen=True)
class ClassFlags:
    bipartite: bool
    split: bool
    cobipartite: bool


def _is_split(g: Graph) -> bool:
    # Hammer-Simeone degree-sequence characterization
    if g.n == 0:
        return True
    d = sorted((g.degree(v) for v in range(g.n)), reverse=True)
    m = max((i + 1 for i in range(g.n) if d[i] >= i), default=0)
    return sum(d[:m]) == m * (m - 1) + sum(d[m:])


def classify(g: Graph) -> ClassFlags:
    return ClassFlags(
        bipartite=bipartition(g) is not None,
        split=_is_split(g),
        cobipartite=bipartition(g.complement()) is not None,
    )
