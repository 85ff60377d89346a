"""Explicit exact frameworks with known rank and stress profiles.

``G1``..``G4`` are K_9 minus a 2-factor, realized in R^4; ``psd_3d`` is a
9-vertex, 22-edge graph realized in R^3 with a PSD stress.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, complete_graph
from .linalg import symmetric_inertia
from .rigidity import Framework, rigidity_matrix, target_rigid
from .stress import stress_basis, stress_matrix

_R4_POINTS = (
    (0, 0, 0, 0),
    (0, 0, 0, 1),
    (0, 0, 4, -1),
    (0, 2, 3, 5),
    (1, -1, 0, -2),
    (1, 3, 7, 0),
    (2, -4, -1, 1),
    (-9, 0, 2, 11),
    (-3, 3, 1, 6),
)

# cycles on 1-based labels v1..v9
_TWO_FACTORS = {
    "G1": [(1, 2, 3, 4, 5, 6, 7, 8, 9)],
    "G2": [(1, 2, 3, 4, 5, 6), (7, 8, 9)],
    "G3": [(1, 2, 3, 4, 5), (6, 7, 8, 9)],
    "G4": [(1, 2, 3), (4, 5, 6), (7, 8, 9)],
}

_PSD3D_LABELS = ("a1", "a2", "b1", "b2", "b3", "b4", "c1", "c2", "c3")
_PSD3D_EDGES = (
    "a1a2 a1c1 a1c2 a1c3 a2c1 a2c2 a2c3 b1b2 b1b3 b1b4 b2b3 b2b4 b3b4 "
    "b1c1 b1c2 b2c1 b2c2 b2c3 b3c1 b3c3 b4c2 b4c3"
).split()
_PSD3D_POINTS = (
    (-42, -45, -40),
    (44, 48, 44),
    (9, -1, -7),
    (-8, -8, 3),
    (-1, -4, -5),
    (3, -7, 3),
    (1, -1, 9),
    (-3, -3, -4),
    (-5, -10, -6),
)

FIXTURE_NAMES = ("G1", "G2", "G3", "G4", "psd_3d")


def complement_of_cycles(n: int, cycles: Sequence[Sequence[int]]) -> Graph:
    """K_n minus the given cycles (1-based labels)."""
    g = complete_graph(n)
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            g = g.remove_edge(a - 1, b - 1)
    return g


def psd_3d_graph() -> Graph:
    idx = {name: i for i, name in enumerate(_PSD3D_LABELS)}
    return Graph.from_edges(len(_PSD3D_LABELS), [(idx[e[:2]], idx[e[2:]]) for e in _PSD3D_EDGES])


def fixture_framework(name: str, points: Sequence[Sequence] | None = None) -> Framework:
    if name in _TWO_FACTORS:
        g = complement_of_cycles(9, _TWO_FACTORS[name])
        default = _R4_POINTS
    elif name == "psd_3d":
        g = psd_3d_graph()
        default = _PSD3D_POINTS
    else:
        raise KeyError(f"unknown fixture {name!r}; expected one of {', '.join(FIXTURE_NAMES)}")
    return Framework.from_points(g, default if points is None else points)


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class FixtureReport:
    name: str
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [f"{self.name}: {c.name} expected {c.expected}, got {c.actual}" for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [{"check": c.name, "expected": c.expected, "actual": c.actual, "ok": c.ok} for c in self.checks],
        }


def verify_fixture(name: str, points: Sequence[Sequence] | None = None) -> FixtureReport:
    """Exact rank, stress-space and stress-matrix checks for a named fixture.

    ``points`` replaces the built-in coordinates (useful as a negative control).
    """
    f = fixture_framework(name, points)
    n, d = f.graph.n, f.dim
    checks = [Check("rigidity_rank", target_rigid(n, d), rigidity_matrix(f).rank())]
    basis = stress_basis(f)
    checks.append(Check("stress_dim", 1, len(basis)))
    if len(basis) == 1:
        inertia = symmetric_inertia(stress_matrix(f.graph, basis[0]))
        checks.append(Check("stress_rank", 4, inertia.rank))
        if name == "psd_3d":
            semidefinite = inertia.n_minus == 0 or inertia.n_plus == 0
            checks.append(Check("stress_semidefinite", True, semidefinite))
    return FixtureReport(name, tuple(checks))

