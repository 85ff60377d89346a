"""Bar-joint frameworks, rigidity matrices and randomized generic rank.

Generic rank is estimated by evaluating the rigidity matrix at random integer
configurations and taking its rank modulo large primes.  Both steps can only
lose rank, so every computed value is a lower bound on the true generic rank;
a shortfall needs the configuration to hit a nonzero polynomial's zero set
(Schwartz-Zippel: probability <= degree / 2**21 per trial) or the prime to
divide a nonzero minor.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from .graph import Edge, Graph, edge_subgraph
from .linalg import PRIMES, RationalMatrix, rank_mod_p

COORD_BOUND = 2 ** 20
DEFAULT_TRIALS = 3


def make_rng(seed, *tags) -> random.Random:
    """Deterministic stream for ``seed`` and a tag path (str seeds hash stably)."""
    return random.Random(":".join(str(t) for t in (seed, *tags)))


@dataclass(frozen=True)
class Framework:
    graph: Graph
    dim: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("negative dimension")
        if len(self.points) != self.graph.n:
            raise ValueError(f"{len(self.points)} points for {self.graph.n} vertices")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError("point dimension mismatch")

    @classmethod
    def from_points(cls, graph: Graph, points: Sequence[Sequence]) -> "Framework":
        pts = tuple(tuple(Fraction(x) for x in p) for p in points)
        dim = len(pts[0]) if pts else 0
        return cls(graph, dim, pts)

    def with_graph(self, graph: Graph) -> "Framework":
        return Framework(graph, self.dim, self.points)

    def to_json(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "dim": self.dim,
            "points": [[str(x) for x in p] for p in self.points],
        }


def random_points(n: int, d: int, rng: random.Random) -> list[tuple[int, ...]]:
    """n pairwise distinct integer points with coordinates in [-2**20, 2**20]."""
    while True:
        pts = [tuple(rng.randint(-COORD_BOUND, COORD_BOUND) for _ in range(d)) for _ in range(n)]
        if d == 0 or len(set(pts)) == n:
            return pts


def random_framework(g: Graph, d: int, seed=0) -> Framework:
    """Random integer configuration, deterministic per seed; points are distinct."""
    if d < 1:
        raise ValueError("random frameworks need d >= 1")
    return Framework.from_points(g, random_points(g.n, d, make_rng(seed, "framework", d)))


def _rows_int(g: Graph, d: int, pts: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = []
    for u, v in g.edges:
        r = [0] * (d * g.n)
        pu, pv = pts[u], pts[v]
        for i in range(d):
            diff = pu[i] - pv[i]
            r[d * u + i] = diff
            r[d * v + i] = -diff
        rows.append(r)
    return rows


def _integer_points(f: Framework) -> list[tuple[int, ...]]:
    """Coordinates scaled by a common denominator (rank-preserving)."""
    den = lcm(1, *(x.denominator for p in f.points for x in p))
    return [tuple(int(x * den) for x in p) for p in f.points]


def rigidity_matrix(f: Framework) -> RationalMatrix:
    """m x dn matrix; row uv holds p(u)-p(v) in u's block and p(v)-p(u) in v's."""
    g, d = f.graph, f.dim
    rows = []
    for u, v in g.edges:
        r = [Fraction(0)] * (d * g.n)
        for i in range(d):
            diff = f.points[u][i] - f.points[v][i]
            r[d * u + i] = diff
            r[d * v + i] = -diff
        rows.append(r)
    return RationalMatrix(rows, cols=d * g.n)


def framework_rank(f: Framework) -> int:
    """Rank of R(G,p) over Q, computed as the max over the fixed primes (a lower bound that is exact w.h.p.)."""
    rows = _rows_int(f.graph, f.dim, _integer_points(f))
    return max(rank_mod_p(rows, p) for p in PRIMES)


def target_rigid(n: int, d: int) -> int:
    """Generic rank of a d-rigid graph on n vertices."""
    if n >= d + 2:
        return d * n - comb(d + 1, 2)
    return comb(n, 2)


@dataclass(frozen=True)
class RankProfile:
    dim: int
    rank: int
    n: int
    m: int
    target_rigid: int
    trials: int
    seed: object
    primes: tuple[int, ...] = field(default=PRIMES)

    @property
    def independent(self) -> bool:
        return self.rank == self.m

    @property
    def rigid(self) -> bool:
        return self.rank == self.target_rigid

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rank": self.rank,
            "n": self.n,
            "m": self.m,
            "target_rigid": self.target_rigid,
            "trials": self.trials,
            "seed": self.seed,
            "primes": list(self.primes),
        }


def generic_rank(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> RankProfile:
    """Max over ``trials`` random integer frameworks of the rigidity-matrix rank mod p."""
    if d < 0:
        raise ValueError("negative dimension")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    target = target_rigid(g.n, d)
    ceiling = min(g.m, target, d * g.n)
    best = 0
    if d > 0 and g.m > 0:
        for t in range(trials):
            pts = random_points(g.n, d, make_rng(seed, "rank", d, t))
            best = max(best, rank_mod_p(_rows_int(g, d, pts), PRIMES[t % len(PRIMES)]))
            if best == ceiling:
                break
    return RankProfile(d, best, g.n, g.m, target, trials, seed)


def is_d_independent(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> bool:
    return generic_rank(g, d, seed, trials).independent


def is_d_rigid(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> bool:
    """Generic rank reaches dn - C(d+1,2); for n <= d+1 this means g is complete."""
    return generic_rank(g, d, seed, trials).rigid


def is_redundantly_rigid(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> bool:
    if not is_d_rigid(g, d, seed, trials):
        return False
    return all(is_d_rigid(g.remove_edge(*e), d, seed, trials) for e in g.edges)


def is_circuit(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> bool:
    """Dependent, with every single-edge deletion independent."""
    if g.m == 0 or is_d_independent(g, d, seed, trials):
        return False
    return all(is_d_independent(g.remove_edge(*e), d, seed, trials) for e in g.edges)


class _RowOracle:
    """Independence of edge subsets, judged at a few fixed random frameworks."""

    def __init__(self, g: Graph, d: int, seed, trials: int, tag: str):
        self.samples = []
        for t in range(trials):
            pts = random_points(g.n, d, make_rng(seed, tag, d, t))
            self.samples.append((_rows_int(g, d, pts), PRIMES[t % len(PRIMES)]))

    def independent(self, idx: Sequence[int]) -> bool:
        for rows, p in self.samples:
            if rank_mod_p([rows[i] for i in idx], p) == len(idx):
                return True
        return False


def find_circuit_edges(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> tuple[Edge, ...] | None:
    """Edges of a d-circuit inside g, or None when g is d-independent.

    Greedy: walk the edges in a seeded random order and drop each one whose
    removal leaves the remainder dependent.  The result is re-checked to be a
    circuit with fresh random frameworks.
    """
    if d < 1:
        raise ValueError("circuits are defined here for d >= 1")
    if is_d_independent(g, d, seed, trials):
        return None
    for attempt in range(4):
        oracle = _RowOracle(g, d, seed, trials, f"circuit{attempt}")
        keep = list(range(g.m))
        order = keep[:]
        make_rng(seed, "circuit-order", d, attempt).shuffle(order)
        if oracle.independent(keep):
            continue
        for e in order:
            trial = [i for i in keep if i != e]
            if trial and not oracle.independent(trial):
                keep = trial
        edges = tuple(g.edges[i] for i in sorted(keep))
        sub, _ = edge_subgraph(g, edges)
        if is_circuit(sub, d, (seed, "verify", attempt), trials):
            return edges
    raise RuntimeError("could not extract a verified circuit; rank sampling kept failing")


def find_circuit(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> Graph | None:
    """A d-circuit of g on its support vertices (relabelled 0..k-1), or None."""
    edges = find_circuit_edges(g, d, seed, trials)
    if edges is None:
        return None
    return edge_subgraph(g, edges)[0]


def gcr(g: Graph, seed=0, trials: int = DEFAULT_TRIALS) -> int:
    """1 + the smallest d >= 0 at which g is d-independent."""
    d = 0
    while not is_d_independent(g, d, seed, trials):
        d += 1
        if d > max(g.n, 1):
            raise RuntimeError("independence scan ran past n; rank sampling is inconsistent")
    if g.m and not is_d_independent(g, d + 1, seed, trials):
        raise AssertionError(f"independence not monotone in d at d={d}")
    return d + 1
