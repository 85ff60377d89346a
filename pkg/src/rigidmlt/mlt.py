"""Generic completion rank and certified bounds on the maximum likelihood threshold.

``mlt_bounds`` peels cone vertices, takes gcr of the core as the upper bound,
closes the interval when the core falls into one of the known equality
classes, and otherwise collects lower bounds from cliques, globally rigid
induced subgraphs and PSD stresses on circuits.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .graph import (
    CapExceeded,
    Edge,
    Graph,
    complement,
    connected_components,
    degree_stats,
    edge_subgraph,
    induced_subgraph,
    is_connected,
    max_clique,
)
from .rigidity import DEFAULT_TRIALS, find_circuit_edges, gcr
from .stress import WITNESS_TRIALS, Verdict, circuit_psd_witness, global_rigidity_test

GRN_STAR_CAP = 12


class Kind(str, enum.Enum):
    GCR_UPPER = "GcrUpper"
    THEOREM_EQUALITY = "TheoremEquality"
    THEOREM_SMALL = "TheoremSmall"
    THEOREM_FEW_EDGES = "TheoremFewEdges"
    THEOREM_NEAR_COMPLETE = "TheoremNearComplete"
    THEOREM_DEGREE_BOUNDED = "TheoremDegreeBounded"
    CONE_PEEL = "ConePeel"
    CLIQUE_LOWER = "CliqueLower"
    GRN_STAR_LOWER = "GrnStarLower"
    CIRCUIT_PSD_WITNESS = "CircuitPsdWitness"
    COMPONENT_SPLIT = "ComponentSplit"


EXACT_RULES = (
    Kind.THEOREM_EQUALITY,
    Kind.THEOREM_SMALL,
    Kind.THEOREM_FEW_EDGES,
    Kind.THEOREM_NEAR_COMPLETE,
    Kind.THEOREM_DEGREE_BOUNDED,
)


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    detail: str
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "detail": self.detail, "payload": self.payload}


@dataclass(frozen=True)
class MltReport:
    n: int
    m: int
    gcr: int
    mlt_lower: int
    mlt_upper: int
    cone_depth: int
    trace: tuple[Certificate, ...]
    seed: object

    def __post_init__(self):
        if not self.mlt_lower <= self.mlt_upper <= self.gcr:
            raise AssertionError(f"inconsistent bounds {self.mlt_lower} <= {self.mlt_upper} <= {self.gcr}")

    @property
    def exact(self) -> bool:
        return self.mlt_lower == self.mlt_upper

    @property
    def mlt(self) -> int | None:
        return self.mlt_lower if self.exact else None

    @property
    def rule(self) -> str | None:
        """Name of the equality rule that closed the interval, if any."""
        for c in self.trace:
            if c.kind in EXACT_RULES or (c.kind == Kind.COMPONENT_SPLIT and self.exact):
                return c.kind.value
        return None

    def certificates(self, kind: Kind) -> list[Certificate]:
        return [c for c in self.trace if c.kind == kind]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "gcr": self.gcr,
            "mlt_lower": self.mlt_lower,
            "mlt_upper": self.mlt_upper,
            "exact": self.exact,
            "cone_depth": self.cone_depth,
            "trace": [c.to_json() for c in self.trace],
            "seed": self.seed,
        }


# -- grn* -----------------------------------------------------------------------

def _mask_min_degree_and_edges(g: Graph, mask: int) -> tuple[int, int]:
    am = g.adj_masks
    lo, total, x = g.n, 0, mask
    while x:
        low = x & -x
        v = low.bit_length() - 1
        k = (am[v] & mask).bit_count()
        lo = min(lo, k)
        total += k
        x ^= low
    return lo, total // 2


def grn_star_witness(g: Graph, seed=0, trials: int = DEFAULT_TRIALS) -> tuple[int, tuple[int, ...]]:
    """(grn*, vertex set of a certified globally rigid induced subgraph); (0, ()) if none with d >= 1.

    A globally d-rigid graph on at least d+2 vertices is (d+1)-connected and
    redundantly rigid, so subsets with induced min degree <= d or fewer than
    d|X| - C(d+1,2) + 1 edges are skipped before the randomized test.
    """
    if g.n > GRN_STAR_CAP:
        raise CapExceeded(f"grn* enumerates induced subgraphs and supports n <= {GRN_STAR_CAP}, got {g.n}")
    if g.m == 0:
        return 0, ()
    for d in range(g.n - 2, 0, -1):
        need = comb(d + 1, 2)
        for k in range(g.n, d + 1, -1):
            min_edges = d * k - need + 1 if k > d + 2 else comb(k, 2)
            if g.m < min_edges:
                continue
            for xs in combinations(range(g.n), k):
                mask = sum(1 << v for v in xs)
                lo, edges = _mask_min_degree_and_edges(g, mask)
                if lo < d + 1 or edges < min_edges:
                    continue
                h = induced_subgraph(g, xs)
                if global_rigidity_test(h, d, (seed, "grn", d, xs), trials) is Verdict.CERTIFIED:
                    return d, xs
    return 0, ()


def grn_star(g: Graph, seed=0, trials: int = DEFAULT_TRIALS) -> int:
    """Largest certified d >= 1 with a globally d-rigid subgraph on >= d+2 vertices; 0 when none."""
    return grn_star_witness(g, seed, trials)[0]


# -- pipeline -----------------------------------------------------------------

def _exact_rule(core: Graph, g_cr: int, scope: str) -> Certificate | None:
    cert = _match_rule(core, g_cr)
    if cert is None:
        return None
    return Certificate(cert.kind, cert.detail, dict(cert.payload, applied_to=scope))


def _match_rule(core: Graph, g_cr: int) -> Certificate | None:
    if g_cr <= 4:
        return Certificate(Kind.THEOREM_EQUALITY, "gcr <= 4 forces mlt = gcr", {"gcr": g_cr})
    if core.n <= 9:
        return Certificate(Kind.THEOREM_SMALL, "at most 9 vertices forces mlt = gcr", {"n": core.n})
    if core.m <= 24:
        return Certificate(Kind.THEOREM_FEW_EDGES, "at most 24 edges forces mlt = gcr", {"m": core.m})
    missing = comb(core.n, 2) - core.m
    if missing <= 5:
        return Certificate(
            Kind.THEOREM_NEAR_COMPLETE,
            "complement has at most 5 edges; mlt = gcr >= n-2",
            {"complement_edges": missing, "non_edges": [list(e) for e in complement(core).edges]},
        )
    lo, hi, _ = degree_stats(core)
    if is_connected(core) and lo <= 4 and hi <= 5:
        return Certificate(
            Kind.THEOREM_DEGREE_BOUNDED,
            "connected with min degree <= 4 and max degree <= 5 forces mlt = gcr",
            {"min_degree": lo, "max_degree": hi},
        )
    return None


def _relabel(vs: Sequence[int], labels: Sequence[int]) -> list[int]:
    return [labels[v] for v in vs]


def _relabel_edges(es: Sequence[Edge], labels: Sequence[int]) -> list[list[int]]:
    return [sorted((labels[u], labels[v])) for u, v in es]


def _lower_bounds(core, labels, g_cr, seed, trials, witness_trials, trace) -> int:
    clique = max_clique(core)
    lower = max(len(clique), 1)
    best = Certificate(Kind.CLIQUE_LOWER, f"contains K_{len(clique)}", {"clique": _relabel(clique, labels), "bound": lower})
    cands = [best]

    if core.n <= GRN_STAR_CAP:
        d, xs = grn_star_witness(core, seed, trials)
        if d >= 1:
            c = Certificate(
                Kind.GRN_STAR_LOWER,
                f"induced subgraph on {len(xs)} vertices is globally {d}-rigid",
                {"grn_star": d, "subgraph": _relabel(xs, labels), "bound": d + 2},
            )
            cands.append(c)
            if d + 2 > lower:
                lower, best = d + 2, c
    else:
        trace.append(Certificate(Kind.GRN_STAR_LOWER, f"skipped: n > {GRN_STAR_CAP}", {"skipped": True}))

    for d in range(g_cr - 2, 0, -1):
        if d + 2 <= lower:
            break
        edges = find_circuit_edges(core, d, (seed, "circuit", d), trials)
        if edges is None:
            continue
        circ, support = edge_subgraph(core, edges)
        w = circuit_psd_witness(circ, d, (seed, "witness", d), witness_trials)
        if w is None or not w.certified:
            continue
        c = Certificate(
            Kind.CIRCUIT_PSD_WITNESS,
            f"{d}-circuit with a PSD stress of rank n-d-1 at a regular framework",
            {
                "dim": d,
                "bound": d + 2,
                "circuit_edges": _relabel_edges(edges, labels),
                "support": _relabel(support, labels),
                "witness": w.to_json(),
            },
        )
        cands.append(c)
        lower, best = d + 2, c
        break

    for c in cands:
        payload = dict(c.payload, binding=c is best)
        trace.append(Certificate(c.kind, c.detail, payload))
    return lower


def _bounds(g: Graph, labels: list[int], seed, trials, witness_trials) -> tuple[int, int, int, int, list[Certificate]]:
    """(gcr, lower, upper, cone_depth, trace) for g whose vertex i is labels[i] in the caller's graph."""
    trace: list[Certificate] = []
    comps = connected_components(g)
    if len(comps) > 1:
        parts = []
        for comp in comps:
            sub = induced_subgraph(g, comp)
            sub_labels = _relabel(comp, labels)
            parts.append((sub_labels, _bounds(sub, sub_labels, seed, trials, witness_trials)))
        g_cr = max(p[1][0] for p in parts)
        lower = max(p[1][1] for p in parts)
        upper = max(p[1][2] for p in parts)
        trace.append(
            Certificate(
                Kind.COMPONENT_SPLIT,
                "disconnected: per-component maximum (convention)",
                {
                    "components": [
                        {
                            "vertices": vs,
                            "gcr": b[0],
                            "mlt_lower": b[1],
                            "mlt_upper": b[2],
                            "cone_depth": b[3],
                            "trace": [c.to_json() for c in b[4]],
                        }
                        for vs, b in parts
                    ]
                },
            )
        )
        return g_cr, lower, upper, 0, trace

    core, core_labels, peeled = g, list(labels), []
    while core.n >= 2:
        v = next((u for u in range(core.n) if core.degree(u) == core.n - 1), None)
        if v is None:
            break
        peeled.append(core_labels.pop(v))
        core = core.remove_vertex(v)
    depth = len(peeled)
    if depth:
        trace.append(
            Certificate(Kind.CONE_PEEL, f"peeled {depth} cone vertices; bounds shift by {depth}", {"vertices": peeled, "depth": depth})
        )
        if not is_connected(core):
            c_gcr, lo, hi, _, sub_trace = _bounds(core, core_labels, seed, trials, witness_trials)
            rule = _exact_rule(g, c_gcr + depth, "graph")
            if rule is not None:
                trace.append(rule)
                lo = hi
            trace.extend(sub_trace)
            return c_gcr + depth, lo + depth, hi + depth, depth, trace

    g_cr = gcr(core, seed, trials)
    trace.append(
        Certificate(
            Kind.GCR_UPPER,
            f"core is {g_cr - 1}-independent" + (f" and {g_cr - 2}-dependent" if g_cr >= 2 else ""),
            {"gcr": g_cr + depth, "core_gcr": g_cr, "core_n": core.n, "core_m": core.m, "zero_dim_convention": g_cr == 1},
        )
    )
    # The equality theorems are checked on the graph itself first, then on the core.
    rule = _exact_rule(g, g_cr + depth, "graph") if depth else None
    if rule is None:
        rule = _exact_rule(core, g_cr, "core")
    if rule is not None:
        trace.append(rule)
        lower = g_cr
    else:
        lower = _lower_bounds(core, core_labels, g_cr, seed, trials, witness_trials, trace)
    return g_cr + depth, lower + depth, g_cr + depth, depth, trace


def mlt_bounds(g: Graph, seed=0, trials: int = DEFAULT_TRIALS, witness_trials: int = WITNESS_TRIALS) -> MltReport:
    """Certified interval [mlt_lower, mlt_upper] for the maximum likelihood threshold of g."""
    if g.n == 0:
        raise ValueError("empty vertex set")
    g_cr, lower, upper, depth, trace = _bounds(g, list(range(g.n)), seed, trials, witness_trials)
    return MltReport(g.n, g.m, g_cr, lower, upper, depth, tuple(trace), seed)


def check_edge_monotonicity(g: Graph, e: Edge, seed=0, trials: int = DEFAULT_TRIALS) -> bool | None:
    """mlt(g) <= mlt(g+e) <= mlt(g)+1, or None when either interval is open."""
    if g.has_edge(*e):
        raise ValueError(f"{e} is already an edge")
    a = mlt_bounds(g, seed, trials)
    b = mlt_bounds(g.add_edge(*e), seed, trials)
    if not (a.exact and b.exact):
        return None
    return a.mlt <= b.mlt <= a.mlt + 1
