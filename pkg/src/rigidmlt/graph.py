"""Graphs on vertices 0..n-1, their text formats, surgeries and counting predicates."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import networkx as nx

Edge = tuple[int, int]
VertexSet = tuple[int, ...]

# Exhaustive subset predicates refuse larger inputs.
SUBSET_CAP = 16
CLIQUE_CAP = 32
GRAPH6_MAX_N = 62
GRAPH6_HEADER = ">>graph6<<"


class GraphFormatError(ValueError):
    """Malformed graph6 or edge-list input."""


class CapExceeded(ValueError):
    """An exhaustive routine was asked to run above its documented size cap."""


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``edges`` is strictly sorted with u < v."""

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        prev = None
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {e} for n={self.n}")
            if prev is not None and e <= prev:
                raise ValueError("edge sequence must be strictly sorted")
            prev = e

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Normalize orientation and order; loops and repeated edges are errors."""
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            e = _norm(int(u), int(v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        return cls(n, tuple(sorted(seen)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in a) for a in self.adjacency)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def is_complete(self) -> bool:
        return self.m == comb(self.n, 2)

    def add_edge(self, u: int, v: int) -> "Graph":
        e = _norm(u, v)
        if e in self.edge_set:
            raise ValueError(f"{e} already an edge")
        return Graph.from_edges(self.n, self.edges + (e,))

    def remove_edge(self, u: int, v: int) -> "Graph":
        e = _norm(u, v)
        if e not in self.edge_set:
            raise ValueError(f"{e} is not an edge")
        return Graph(self.n, tuple(f for f in self.edges if f != e))

    def remove_vertex(self, v: int) -> "Graph":
        keep = tuple(w for w in range(self.n) if w != v)
        return induced_subgraph(self, keep)

    def non_edges(self) -> list[Edge]:
        return [e for e in combinations(range(self.n), 2) if e not in self.edge_set]

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges)
        return h

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- named graphs -----------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


# -- graph6 -----------------------------------------------------------------

def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line (header ``>>graph6<<`` tolerated)."""
    s = text.strip()
    offset = 0
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
        offset = len(GRAPH6_HEADER)
    if not s:
        raise GraphFormatError("empty graph6 string")
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"invalid graph6 character {ch!r} at byte {offset + i}")
    n = ord(s[0]) - 63
    if n > GRAPH6_MAX_N:
        raise GraphFormatError(f"graph6 size byte at byte {offset}: only n <= {GRAPH6_MAX_N} supported")
    nbits = n * (n - 1) // 2
    nbytes = -(-nbits // 6)
    body = s[1:]
    if len(body) < nbytes:
        raise GraphFormatError(
            f"truncated graph6 bit field: expected {nbytes} data bytes, got {len(body)} "
            f"(ends at byte {offset + len(s)})"
        )
    if len(body) > nbytes:
        raise GraphFormatError(f"trailing data at byte {offset + 1 + nbytes}")
    bits = []
    for ch in body:
        x = ord(ch) - 63
        bits.extend((x >> (5 - k)) & 1 for k in range(6))
    if any(bits[nbits:]):
        raise GraphFormatError(f"nonzero padding bits in byte {offset + len(s) - 1}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 encoder supports n <= {GRAPH6_MAX_N}, got {g.n}")
    bits = [1 if (i, j) in g.edge_set else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        x = 0
        for b in bits[k:k + 6]:
            x = (x << 1) | b
        out.append(chr(x + 63))
    return "".join(out)


# -- edge lists -------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by m lines ``"u v"``."""
    lines = [(k + 1, ln.split()) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise GraphFormatError("empty edge list")
    lineno, head = lines[0]
    try:
        n, m = (int(x) for x in head)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: expected 'n m'") from None
    if n < 0 or m < 0:
        raise GraphFormatError(f"line {lineno}: negative count")
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(body)}")
    seen = set()
    for lineno, parts in body:
        try:
            u, v = (int(x) for x in parts)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected 'u v'") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex index out of range for n={n}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at vertex {u}")
        e = _norm(u, v)
        if e in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(e)
    return Graph(n, tuple(sorted(seen)))


def format_edge_list(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


# -- queries ----------------------------------------------------------------

def _check_vertices(g: Graph, xs: Iterable[int]) -> VertexSet:
    out = tuple(sorted(set(xs)))
    for v in out:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    return out


def complement(g: Graph) -> Graph:
    return Graph(g.n, tuple(g.non_edges()))


def induced_subgraph(g: Graph, xs: Iterable[int]) -> Graph:
    """G[X], relabelled so that the i-th smallest vertex of X becomes i."""
    xs = _check_vertices(g, xs)
    pos = {v: i for i, v in enumerate(xs)}
    return Graph(len(xs), tuple(sorted((pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos)))


def edge_subgraph(g: Graph, edges: Iterable[Edge]) -> tuple[Graph, VertexSet]:
    """Subgraph spanned by ``edges`` on its support vertices, plus the support."""
    es = [_norm(*e) for e in edges]
    for e in es:
        if e not in g.edge_set:
            raise ValueError(f"{e} is not an edge")
    support = tuple(sorted({v for e in es for v in e}))
    pos = {v: i for i, v in enumerate(support)}
    return Graph.from_edges(len(support), [(pos[u], pos[v]) for u, v in es]), support


def induced_edge_count(g: Graph, xs: Iterable[int]) -> int:
    mask = 0
    for v in xs:
        mask |= 1 << v
    return _mask_edge_count(g, mask)


def _mask_edge_count(g: Graph, mask: int) -> int:
    total = 0
    am = g.adj_masks
    x = mask
    while x:
        low = x & -x
        v = low.bit_length() - 1
        total += (am[v] & mask).bit_count()
        x ^= low
    return total // 2


def connected_components(g: Graph) -> list[VertexSet]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def vertex_connectivity(g: Graph) -> int:
    """Minimum vertex cut size; n-1 for complete graphs, 0 when disconnected."""
    if g.n <= 1:
        return 0
    if g.is_complete():
        return g.n - 1
    if not is_connected(g):
        return 0
    return nx.node_connectivity(g.to_networkx())


def degree_stats(g: Graph) -> tuple[int, int, tuple[int, ...]]:
    degs = tuple(g.degree(v) for v in range(g.n))
    if not degs:
        return 0, 0, ()
    return min(degs), max(degs), degs


def max_clique(g: Graph) -> VertexSet:
    if g.n > CLIQUE_CAP:
        raise CapExceeded(f"max_clique supports n <= {CLIQUE_CAP}, got {g.n}")
    if g.n == 0:
        return ()
    best: VertexSet = ()
    for c in nx.find_cliques(g.to_networkx()):
        c = tuple(sorted(c))
        if len(c) > len(best) or (len(c) == len(best) and c < best):
            best = c
    return best


# -- surgeries ----------------------------------------------------------------

def cone(g: Graph) -> Graph:
    """Add vertex n joined to every existing vertex."""
    return Graph.from_edges(g.n + 1, g.edges + tuple((v, g.n) for v in range(g.n)))


def zero_extension(g: Graph, d: int, nbrs: Iterable[int]) -> Graph:
    nbrs = _check_vertices(g, nbrs)
    if len(nbrs) != d:
        raise ValueError(f"0-extension in dimension {d} needs {d} neighbours, got {len(nbrs)}")
    return Graph.from_edges(g.n + 1, g.edges + tuple((v, g.n) for v in nbrs))


def one_extension(g: Graph, d: int, xy: Edge, extra: Iterable[int]) -> Graph:
    """Delete edge xy and add vertex n joined to x, y and the d-1 vertices of ``extra``."""
    x, y = _norm(*xy)
    if (x, y) not in g.edge_set:
        raise ValueError(f"{(x, y)} is not an edge")
    extra = _check_vertices(g, extra)
    if x in extra or y in extra:
        raise ValueError("extra neighbours must avoid the split edge")
    if len(extra) != d - 1:
        raise ValueError(f"1-extension in dimension {d} needs {d - 1} extra neighbours")
    z = g.n
    edges = [e for e in g.edges if e != (x, y)]
    edges += [(v, z) for v in sorted({x, y, *extra})]
    return Graph.from_edges(g.n + 1, edges)


def edge_counts(g: Graph, xs: Iterable[int], ys: Iterable[int]) -> tuple[int, int, int, int, int]:
    """(i(X), i(Y), i(X|Y), i(X&Y), d(X,Y)); d counts edges between X-Y and Y-X."""
    xs = set(_check_vertices(g, xs))
    ys = set(_check_vertices(g, ys))
    only_x, only_y = xs - ys, ys - xs
    cross = sum(1 for u, v in g.edges if (u in only_x and v in only_y) or (u in only_y and v in only_x))
    return (
        induced_edge_count(g, xs),
        induced_edge_count(g, ys),
        induced_edge_count(g, xs | ys),
        induced_edge_count(g, xs & ys),
        cross,
    )


def _subsets_by_size(n: int, min_size: int):
    for k in range(max(min_size, 0), n + 1):
        for xs in combinations(range(n), k):
            mask = 0
            for v in xs:
                mask |= 1 << v
            yield xs, mask


def _require_subset_cap(g: Graph, what: str) -> None:
    if g.n > SUBSET_CAP:
        raise CapExceeded(f"{what} enumerates subsets and supports n <= {SUBSET_CAP}, got {g.n}")


def sparsity_violation(g: Graph, d: int) -> VertexSet | None:
    """Smallest X (then lexicographically first) with |X| >= d and i(X) > d|X| - C(d+1, 2)."""
    _require_subset_cap(g, "is_sparse")
    c = comb(d + 1, 2)
    for xs, mask in _subsets_by_size(g.n, d):
        if _mask_edge_count(g, mask) > d * len(xs) - c:
            return xs
    return None


def is_sparse(g: Graph, d: int) -> bool:
    """True iff g is (d, C(d+1, 2))-sparse."""
    return sparsity_violation(g, d) is None


def jj_condition(g: Graph) -> bool:
    """i(X) <= (5|X| - 7)/2 for every X with |X| >= 2; sufficient for 3-independence."""
    _require_subset_cap(g, "jj_condition")
    for xs, mask in _subsets_by_size(g.n, 2):
        if 2 * _mask_edge_count(g, mask) > 5 * len(xs) - 7:
            return False
    return True


def glue(parts: Sequence[Graph], shared: Sequence[Sequence[int]]) -> tuple[Graph, list[list[int]]]:
    """Union of ``parts`` identified along ``shared`` vertices.

    ``shared[j][i]`` is the label of the j-th shared vertex in part i.  Part 0
    keeps its labels; the remaining vertices of part 1, 2, ... follow in order.
    Returns the glued graph and, for each part, the map from its labels to glued labels.
    """
    if not parts:
        raise ValueError("nothing to glue")
    for row in shared:
        if len(row) != len(parts):
            raise ValueError("each shared vertex needs one label per part")
    maps: list[list[int]] = [list(range(parts[0].n))]
    nxt = parts[0].n
    for i, p in enumerate(parts[1:], start=1):
        lab = {row[i]: row[0] for row in shared}
        if len(lab) != len(shared):
            raise ValueError(f"shared labels repeat in part {i}")
        mp = []
        for v in range(p.n):
            if v in lab:
                mp.append(lab[v])
            else:
                mp.append(nxt)
                nxt += 1
        maps.append(mp)
    edges = set()
    for p, mp in zip(parts, maps):
        for u, v in p.edges:
            edges.add(_norm(mp[u], mp[v]))
    return Graph(nxt, tuple(sorted(edges))), maps


def _check_shared_clique(parts: Sequence[Graph], shared: Sequence[Sequence[int]]) -> None:
    for i, p in enumerate(parts):
        labels = [row[i] for row in shared]
        _check_vertices(p, labels)
        for a, b in combinations(labels, 2):
            if not p.has_edge(a, b):
                raise ValueError(f"shared vertices do not induce a clique in part {i}")


def deleted_ksum(g1: Graph, g2: Graph, shared: Sequence[tuple[int, int]], drop: Edge) -> Graph:
    """Glue g1 and g2 along the clique given by ``shared`` pairs (v1, v2), then delete ``drop``.

    ``drop`` is named with g1's labels and must lie inside the shared clique.
    """
    _check_shared_clique([g1, g2], shared)
    left = {a for a, _ in shared}
    a, b = _norm(*drop)
    if a not in left or b not in left:
        raise ValueError("dropped edge must lie inside the shared clique")
    glued, _ = glue([g1, g2], shared)
    return glued.remove_edge(a, b)


def build_Hd(d: int) -> Graph:
    """Two copies of K_{d+2} sharing a K_d, with one shared edge removed.

    Shared vertices are 0..d-1, one side is {d, d+1}, the other {d+2, d+3};
    the removed edge is (0, 1).  Needs d >= 2 so the shared clique has an edge.
    """
    if d < 2:
        raise ValueError("H_d needs d >= 2: a shared K_1 has no edge to remove")
    k = complete_graph(d + 2)
    shared = [(i, i) for i in range(d)]
    return deleted_ksum(k, k, shared, (0, 1))


def double_banana() -> Graph:
    """Deleted 2-sum of two K_5's (8 vertices, 18 edges)."""
    k5 = complete_graph(5)
    return deleted_ksum(k5, k5, [(0, 0), (1, 1)], (0, 1))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if (g.n, g.m) != (h.n, h.m):
        return False
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())
