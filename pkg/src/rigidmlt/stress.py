"""Equilibrium stresses, stress matrices and PSD witnesses.

Every stress returned from this module has been checked to be in equilibrium
in exact arithmetic.  PSD and rank claims are likewise exact; only the choice
of frameworks is random.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .graph import Edge, Graph, _check_shared_clique, glue, one_extension
from .linalg import (
    PRIMES,
    RationalMatrix,
    SymmetricDecomposition,
    integer_kernel,
    integer_rank,
    inverse,
    kernel_rational,
    rank_mod_p,
    symmetric_inertia,
)
from .rigidity import (
    DEFAULT_TRIALS,
    Framework,
    _integer_points,
    _rows_int,
    framework_rank,
    generic_rank,
    is_circuit,
    make_rng,
    random_framework,
    random_points,
    target_rigid,
)

WITNESS_TRIALS = 64
LIFT_T_MAX = 2 ** 16


class EquilibriumError(ValueError):
    """A weight vector is not an equilibrium stress of the framework."""


@dataclass(frozen=True)
class StressVector:
    """One weight per edge of ``graph``, aligned with ``graph.edges``."""

    graph: Graph
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.graph.m:
            raise ValueError(f"{len(self.weights)} weights for {self.graph.m} edges")

    @classmethod
    def from_weights(cls, graph: Graph, weights: Sequence) -> "StressVector":
        return cls(graph, tuple(Fraction(w) for w in weights))

    def weight(self, u: int, v: int) -> Fraction:
        e = (u, v) if u < v else (v, u)
        i = self.graph.edge_index.get(e)
        return Fraction(0) if i is None else self.weights[i]

    def is_zero(self) -> bool:
        return not any(self.weights)

    def scale(self, c) -> "StressVector":
        c = Fraction(c)
        return StressVector(self.graph, tuple(c * w for w in self.weights))

    def __neg__(self) -> "StressVector":
        return self.scale(-1)

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.graph.edges], "weights": [str(w) for w in self.weights]}


def equilibrium_residual(f: Framework, w: StressVector) -> list[tuple[Fraction, ...]]:
    """Per-vertex sum of w_ij (p(j) - p(i)); all zero iff w is an equilibrium stress."""
    if w.graph.n != f.graph.n:
        raise ValueError("stress and framework live on different vertex sets")
    res = [[Fraction(0)] * f.dim for _ in range(f.graph.n)]
    fe = f.graph.edge_set
    for (u, v), wt in zip(w.graph.edges, w.weights):
        if not wt:
            continue
        if (u, v) not in fe:
            raise ValueError(f"stress support includes non-edge {(u, v)}")
        pu, pv = f.points[u], f.points[v]
        for i in range(f.dim):
            diff = wt * (pv[i] - pu[i])
            res[u][i] += diff
            res[v][i] -= diff
    return [tuple(r) for r in res]


def is_equilibrium(f: Framework, w: StressVector) -> bool:
    return not any(x for r in equilibrium_residual(f, w) for x in r)


def _require_equilibrium(f: Framework, w: StressVector) -> None:
    if not is_equilibrium(f, w):
        raise EquilibriumError("weights are not an equilibrium stress of the framework")


def stress_basis(f: Framework) -> list[StressVector]:
    """Basis of the equilibrium stresses of f: the kernel of R(f)^T."""
    g, d = f.graph, f.dim
    if g.m == 0:
        return []
    rows = _rows_int(g, d, _integer_points(f))
    rt = [[rows[e][c] for e in range(g.m)] for c in range(d * g.n)]
    out = []
    for v in integer_kernel(rt, g.m):
        w = StressVector(g, tuple(Fraction(x) for x in v))
        _require_equilibrium(f, w)
        out.append(w)
    return out


def stress_matrix(g: Graph, w: StressVector) -> RationalMatrix:
    """Omega_ij = -w_ij off the diagonal, Omega_ii = sum_j w_ij."""
    if w.graph.n != g.n:
        raise ValueError("stress lives on a different vertex set")
    om = [[Fraction(0)] * g.n for _ in range(g.n)]
    for (u, v), wt in zip(w.graph.edges, w.weights):
        if not wt:
            continue
        if not g.has_edge(u, v):
            raise ValueError(f"stress support includes non-edge {(u, v)}")
        om[u][v] -= wt
        om[v][u] -= wt
        om[u][u] += wt
        om[v][v] += wt
    return RationalMatrix(om, cols=g.n)


def _integer_stress_rank(g: Graph, w: StressVector) -> int:
    return stress_matrix(g, w).rank()


@dataclass(frozen=True)
class StressMatrixReport:
    stress: StressVector
    rank: int
    inertia: SymmetricDecomposition
    framework_rank: int
    generic_rank: int

    @property
    def psd(self) -> bool:
        return self.inertia.psd

    @property
    def regular(self) -> bool:
        return self.framework_rank == self.generic_rank

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "inertia": {"plus": self.inertia.n_plus, "minus": self.inertia.n_minus, "zero": self.inertia.n_zero},
            "psd": self.psd,
            "regular": self.regular,
            "framework_rank": self.framework_rank,
            "generic_rank": self.generic_rank,
        }


def analyze_stress(f: Framework, w: StressVector, generic: int | None = None, seed=0) -> StressMatrixReport:
    """Exact rank and inertia of the stress matrix, plus the regularity flag.

    ``generic`` is the generic rank of f.graph in f.dim when already known.
    """
    _require_equilibrium(f, w)
    inertia = symmetric_inertia(stress_matrix(f.graph, w))
    if generic is None:
        generic = generic_rank(f.graph, f.dim, seed).rank
    return StressMatrixReport(w, inertia.rank, inertia, framework_rank(f), generic)


def sign_normalize(w: StressVector, report_inertia: SymmetricDecomposition) -> tuple[StressVector, SymmetricDecomposition]:
    """Negate w when its stress matrix has more negative than positive eigenvalues."""
    if report_inertia.n_minus > report_inertia.n_plus:
        flipped = SymmetricDecomposition(report_inertia.n_minus, report_inertia.n_plus, report_inertia.n_zero)
        return -w, flipped
    return w, report_inertia


class Verdict(str, enum.Enum):
    CERTIFIED = "globally_rigid_certified"
    NOT_CERTIFIED = "not_certified"
    NOT_RIGID = "not_rigid"


def global_rigidity_test(g: Graph, d: int, seed=0, trials: int = DEFAULT_TRIALS) -> Verdict:
    """Certify global d-rigidity with an infinitesimally rigid framework and a stress of rank n-d-1.

    A certificate is sound (exact arithmetic at an explicit framework); failure
    to certify is not a proof of non-global-rigidity.  ``NOT_RIGID`` means no
    trial framework reached the rigid rank.
    """
    if g.is_complete():
        return Verdict.CERTIFIED
    if g.n <= d + 1:
        return Verdict.NOT_RIGID
    target = target_rigid(g.n, d)
    if g.m < target + 1:
        # Rigid graphs that are not complete need a stress to be globally rigid.
        return Verdict.NOT_RIGID if not generic_rank(g, d, seed, trials).rigid else Verdict.NOT_CERTIFIED
    want = g.n - d - 1
    saw_rigid = False
    for t in range(trials):
        rng = make_rng(seed, "grt", d, t)
        pts = random_points(g.n, d, rng)
        rows = _rows_int(g, d, pts)
        if rank_mod_p(rows, PRIMES[t % len(PRIMES)]) != target:
            continue
        saw_rigid = True
        rt = [[rows[e][c] for e in range(g.m)] for c in range(d * g.n)]
        basis = integer_kernel(rt, g.m)
        coeffs = [rng.randint(1, 2 ** 20) * rng.choice((-1, 1)) for _ in basis]
        combo = [sum(c * v[e] for c, v in zip(coeffs, basis)) for e in range(g.m)]
        w = StressVector(g, tuple(Fraction(x) for x in combo))
        f = Framework.from_points(g, pts)
        _require_equilibrium(f, w)
        if _integer_stress_rank(g, w) == want:
            return Verdict.CERTIFIED
    return Verdict.NOT_CERTIFIED if saw_rigid else Verdict.NOT_RIGID


@dataclass(frozen=True)
class PsdWitness:
    """A framework with a nonzero PSD equilibrium stress.

    ``certified`` holds when the stress matrix has rank n-d-1 at a regular
    framework, so the PSD stress persists at nearby generic frameworks.
    """

    framework: Framework
    stress: StressVector
    report: StressMatrixReport
    certified: bool

    @property
    def heuristic(self) -> bool:
        return not self.certified

    @property
    def dim(self) -> int:
        return self.framework.dim

    def to_json(self) -> dict:
        return {
            "framework": self.framework.to_json(),
            "stress": [str(x) for x in self.stress.weights],
            "report": self.report.to_json(),
            "certified": self.certified,
        }


def _make_witness(f: Framework, w: StressVector, report: StressMatrixReport) -> PsdWitness:
    if not report.psd or w.is_zero():
        raise ValueError("a witness needs a nonzero PSD stress")
    n, d = f.graph.n, f.dim
    certified = report.regular and report.rank == n - d - 1
    return PsdWitness(f, w, report, certified)


def circuit_psd_witness(g: Graph, d: int, seed=0, trials: int = WITNESS_TRIALS) -> PsdWitness | None:
    """Search random frameworks of a d-circuit for a PSD stress.

    The stress space of a circuit at a regular framework is one-dimensional, so
    the stress is unique up to scale; it is negated if that makes it PSD.
    Returns None after ``trials`` misses, which refutes nothing.
    """
    if not is_circuit(g, d, seed):
        raise ValueError(f"graph is not a {d}-circuit")
    generic = g.m - 1
    for t in range(trials):
        f = random_framework(g, d, (seed, "witness", t))
        basis = stress_basis(f)
        if len(basis) != 1:
            continue
        w = basis[0]
        inertia = symmetric_inertia(stress_matrix(g, w))
        w, inertia = sign_normalize(w, inertia)
        if not inertia.psd:
            continue
        report = StressMatrixReport(w, inertia.rank, inertia, g.m - len(basis), generic)
        return _make_witness(f, w, report)
    return None


# -- 1-extension lifting ------------------------------------------------------

def one_extension_block(t) -> RationalMatrix:
    """The 3x3 block (order z, x, y) that a 1-extension adds to the stress matrix when w_xy = -1."""
    t = Fraction(t)
    if t in (0, 1):
        raise ValueError("t must avoid 0 and 1")
    return RationalMatrix(
        [
            [-1 / (t * (1 - t)), 1 / (1 - t), 1 / t],
            [1 / (1 - t), -t / (1 - t), Fraction(-1)],
            [1 / t, Fraction(-1), (t - 1) / t],
        ],
        cols=3,
    )


def normalize_at_edge(w: StressVector, xy: Edge) -> StressVector:
    """Positive rescaling making w_xy = -1; refuses when w_xy >= 0 (a sign flip would break PSD)."""
    wx = w.weight(*xy)
    if wx >= 0:
        raise ValueError(f"w_xy = {wx}; only a negative weight can be scaled to -1 without flipping sign")
    return w.scale(-1 / wx)


def lift_one_extension(f: Framework, w: StressVector, xy: Edge, extra: Sequence[int], t) -> tuple[Framework, StressVector]:
    """Carry an equilibrium stress across the 1-extension that splits xy.

    The new vertex z sits at t*p(x) + (1-t)*p(y); w_xz = w_xy/(1-t),
    w_yz = w_xy/t, z's other edges get 0 and every surviving old edge keeps its
    weight.  Equilibrium and rank(Omega') = rank(Omega) + 1 are both verified.
    """
    t = Fraction(t)
    x, y = xy
    g = f.graph
    if not g.has_edge(x, y):
        raise ValueError(f"{xy} is not an edge")
    if t in (0, 1):
        raise ValueError("t must avoid 0 and 1")
    wxy = w.weight(x, y)
    if wxy == 0:
        raise ValueError("w_xy = 0; nothing to carry across the split")
    if wxy != -1:
        raise ValueError("normalize the stress so that w_xy = -1 first (see normalize_at_edge)")
    _require_equilibrium(f, w)
    g2 = one_extension(g, f.dim, (x, y), extra)
    z = g.n
    pz = tuple(t * a + (1 - t) * b for a, b in zip(f.points[x], f.points[y]))
    f2 = Framework(g2, f.dim, f.points + (pz,))
    weights = []
    for u, v in g2.edges:
        if v == z:
            if u == x:
                weights.append(wxy / (1 - t))
            elif u == y:
                weights.append(wxy / t)
            else:
                weights.append(Fraction(0))
        else:
            weights.append(w.weight(u, v))
    w2 = StressVector(g2, tuple(weights))
    _require_equilibrium(f2, w2)
    r_old = stress_matrix(g, w).rank()
    r_new = stress_matrix(g2, w2).rank()
    if r_new != r_old + 1:
        raise ArithmeticError(f"rank identity failed: {r_new} != {r_old} + 1")
    return f2, w2


def lift_until_psd(f: Framework, w: StressVector, xy: Edge, extra: Sequence[int], t_max: int = LIFT_T_MAX):
    """Try t = 2, 4, 8, ... up to t_max; return (t, framework, stress, inertia) for the first PSD lift, else None."""
    t = 2
    while t <= t_max:
        f2, w2 = lift_one_extension(f, w, xy, extra, t)
        inertia = symmetric_inertia(stress_matrix(f2.graph, w2))
        if inertia.psd:
            return t, f2, w2, inertia
        t *= 2
    return None


# -- deleted k-sum gluing -------------------------------------------------------

def _affinely_independent(pts: Sequence[Sequence[Fraction]]) -> bool:
    if len(pts) <= 1:
        return True
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    return RationalMatrix(diffs).rank() == len(diffs)


def _affine_map(src: Sequence[Sequence[Fraction]], dst: Sequence[Sequence[Fraction]]):
    """The affine map sending d+1 affinely independent points src onto dst."""
    d = len(src) - 1
    q = RationalMatrix([[src[j + 1][i] - src[0][i] for j in range(d)] for i in range(d)], cols=d)
    p = RationalMatrix([[dst[j + 1][i] - dst[0][i] for j in range(d)] for i in range(d)], cols=d)
    a = p @ inverse(q)
    aq0 = a @ src[0]
    b = tuple(x - y for x, y in zip(dst[0], aq0))

    def apply(pt):
        return tuple(x + y for x, y in zip(a @ pt, b))

    return apply


def _align(part: Framework, shared_src: Sequence[int], target_pts: Sequence[Sequence[Fraction]], rng) -> Framework:
    d = part.dim
    src = [part.points[v] for v in shared_src]
    if not _affinely_independent(src):
        raise ValueError("shared points are affinely dependent; cannot align")
    k = len(src)
    for _ in range(64):
        extra_src = [tuple(Fraction(x) for x in p) for p in random_points(d + 1 - k, d, rng)]
        extra_dst = [tuple(Fraction(x) for x in p) for p in random_points(d + 1 - k, d, rng)]
        s_all = list(src) + extra_src
        t_all = [tuple(Fraction(x) for x in p) for p in target_pts] + extra_dst
        if _affinely_independent(s_all) and _affinely_independent(t_all):
            apply = _affine_map(s_all, t_all)
            return Framework(part.graph, d, tuple(apply(p) for p in part.points))
    raise RuntimeError("could not complete an affine basis")


def _positive_kernel_vector(a: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    """A strictly positive c with a @ c = 0, or None."""
    basis = kernel_rational(RationalMatrix(a, cols=ncols)) if a else [
        tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)
    ]
    if not basis:
        return None
    if len(basis) == 1:
        v = list(basis[0])
        if all(x > 0 for x in v):
            return v
        if all(x < 0 for x in v):
            return [-x for x in v]
        return None
    from scipy.optimize import linprog

    k = len(basis)
    # maximize s subject to  B y >= s,  -1 <= y <= 1
    c = [0.0] * k + [-1.0]
    a_ub = [[-float(basis[j][i]) for j in range(k)] + [1.0] for i in range(ncols)]
    res = linprog(c, A_ub=a_ub, b_ub=[0.0] * ncols, bounds=[(-1, 1)] * k + [(None, 1)])
    if not res.success or res.x[-1] <= 0:
        return None
    y = [Fraction(v).limit_denominator(10 ** 6) for v in res.x[:k]]
    cvec = [sum(y[j] * basis[j][i] for j in range(k)) for i in range(ncols)]
    return cvec if all(x > 0 for x in cvec) else None


def _fresh_psd_part(g: Graph, d: int, rng_seed, attempts: int = 8) -> tuple[Framework, StressVector] | None:
    for a in range(attempts):
        f = random_framework(g, d, (rng_seed, a))
        basis = stress_basis(f)
        if len(basis) != 1:
            return None
        w, inertia = sign_normalize(basis[0], symmetric_inertia(stress_matrix(g, basis[0])))
        if inertia.psd:
            return f, w
    return None


def glue_deleted_ksum_stress(
    parts: Sequence[tuple[Framework, StressVector]],
    shared: Sequence[Sequence[int]],
    drop_edges: Sequence[Edge],
    seed=0,
    trials: int = 32,
) -> PsdWitness | None:
    """PSD stress on the glue of ``parts`` along a shared clique minus ``drop_edges``.

    ``shared[j][i]`` names the j-th shared vertex in part i; drop edges use
    part 0's labels.  Part frameworks are affinely moved onto part 0's shared
    points (stresses are affine invariants), then positive multiples of the
    part stresses are chosen so their sum vanishes on every dropped edge.  When
    the signs on the dropped edges admit no positive combination, fresh part
    frameworks are drawn, up to ``trials`` attempts.
    """
    if not parts:
        raise ValueError("no parts")
    d = parts[0][0].dim
    graphs = [f.graph for f, _ in parts]
    if any(f.dim != d for f, _ in parts):
        raise ValueError("parts live in different dimensions")
    _check_shared_clique(graphs, shared)
    if len(shared) > d:
        raise ValueError(f"shared clique of size {len(shared)} exceeds d={d}")
    to_part = [{row[0]: row[i] for row in shared} for i in range(len(parts))]
    drops = []
    for e in drop_edges:
        a, b = sorted(e)
        if a not in to_part[0] or b not in to_part[0]:
            raise ValueError(f"drop edge {e} is not inside the shared clique")
        drops.append((a, b))
    glued, maps = glue(graphs, shared)

    for attempt in range(trials):
        if attempt == 0:
            cur = list(parts)
            for i, (f, w) in enumerate(cur):
                if not _affinely_independent([f.points[row[i]] for row in shared]):
                    raise ValueError(f"shared points of part {i} are affinely dependent; cannot align")
                _require_equilibrium(f, w)
                if not symmetric_inertia(stress_matrix(f.graph, w)).psd:
                    raise ValueError("every part stress must be PSD")
        else:
            cur = []
            for i, (f, w) in enumerate(parts):
                fresh = _fresh_psd_part(f.graph, d, (seed, "glue", attempt, i))
                cur.append(fresh if fresh is not None else (f, w))
        a = []
        for u, v in drops:
            row = [w.weight(to_part[i][u], to_part[i][v]) for i, (_, w) in enumerate(cur)]
            if attempt == 0 and any(x == 0 for x in row):
                raise ValueError(f"a part stress vanishes on drop edge {(u, v)}")
            a.append(row)
        coeffs = _positive_kernel_vector(a, len(cur))
        if coeffs is None:
            continue
        rng = make_rng(seed, "align", attempt)
        base = cur[0][0]
        target = [base.points[row[0]] for row in shared]
        points: list = [None] * glued.n
        weights: dict[Edge, Fraction] = {}
        for i, ((f, w), mp) in enumerate(zip(cur, maps)):
            fa = f if i == 0 else _align(f, [row[i] for row in shared], target, rng)
            for v, gv in enumerate(mp):
                if points[gv] is None:
                    points[gv] = fa.points[v]
            for (u, v), wt in zip(f.graph.edges, w.weights):
                e = tuple(sorted((mp[u], mp[v])))
                weights[e] = weights.get(e, Fraction(0)) + coeffs[i] * wt
        if any(weights[e] != 0 for e in drops):
            raise ArithmeticError("scalings failed to cancel on the dropped edges")
        final = glued
        for e in drops:
            final = final.remove_edge(*e)
        w_final = StressVector(final, tuple(weights[e] for e in final.edges))
        f_final = Framework(final, d, tuple(points))
        report = analyze_stress(f_final, w_final, seed=(seed, "glued"))
        if not report.psd or w_final.is_zero():
            raise ArithmeticError("glued stress is not PSD")
        return _make_witness(f_final, w_final, report)
    return None
