"""Three-way quasi-Fuchsianity test for one-holed torus trace triples.

A representation is summarized by the triple (x, y, z) of traces of a
generating pair and their product, satisfying x^2 + y^2 + z^2 = xyz.
Simple closed curves correspond to the nodes of a trivalent tree whose
edges replace one coordinate by the product of the other two minus it.
The test walks that tree: a trace that is real in [-2, 2] or of norm
below 2 is forbidden (the curve would be elliptic or accidentally
parabolic) and yields NotQF; if the connected region of triples with a
coordinate norm under 4 is exhausted without finding one, the verdict
is QF; if the node budget runs out first, Undecided.  QF verdicts are
therefore stable under budget increase, and NotQF verdicts report trace
evidence only (non-discrete and non-quasi-Fuchsian are not separated).

The same search runs both compiled (``_kernel.bq_search``) and in pure
Python (``bq_search_python``) with identical traversal order; the slow
form exists to cross-check the compiled one.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from ._kernel import NOT_QF_CODE, QF_CODE, REGION_BOUND, UNDECIDED_CODE, bq_search
from .explicit_groups import markov_triple

DEFAULT_BUDGET = 200_000
DEFAULT_TRACE_FLOOR = 2.001
REAL_EPS = 1e-9

_OUTCOME_BY_CODE = {QF_CODE: "QF", NOT_QF_CODE: "NotQF", UNDECIDED_CODE: "Undecided"}


@dataclass(frozen=True)
class TraceTriple:
    """Traces (x, y, z) of a generating pair and their product."""

    x: complex
    y: complex
    z: complex

    def __post_init__(self) -> None:
        for w in (self.x, self.y, self.z):
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                raise ValueError(f"trace coordinates must be finite, got {w!r}")
        residual = abs(
            self.x * self.x + self.y * self.y + self.z * self.z - self.x * self.y * self.z
        )
        # 1e-6 absolute, widened only by the rounding a single Vieta move
        # in double precision can produce on very large traces
        scale = (1.0 + abs(self.x) + abs(self.y) + abs(self.z)) ** 4
        if residual > max(1e-6, 32.0 * sys.float_info.epsilon * scale):
            raise ValueError(
                f"({self.x!r}, {self.y!r}, {self.z!r}) is not a trace triple: "
                f"identity residual {residual:.3e}"
            )

    def coordinates(self) -> tuple[complex, complex, complex]:
        return (self.x, self.y, self.z)

    def min_norm(self) -> float:
        return min(abs(self.x), abs(self.y), abs(self.z))

    def conjugate(self) -> TraceTriple:
        return TraceTriple(
            complex(self.x).conjugate(),
            complex(self.y).conjugate(),
            complex(self.z).conjugate(),
        )


def vieta_neighbors(t: TraceTriple) -> tuple[TraceTriple, TraceTriple, TraceTriple]:
    """The three adjacent triples, one per replaced coordinate."""
    x, y, z = t.coordinates()
    return (
        TraceTriple(y * z - x, y, z),
        TraceTriple(x, x * z - y, z),
        TraceTriple(x, y, x * y - z),
    )


@dataclass(frozen=True)
class BQVerdict:
    outcome: str
    nodes_visited: int
    min_trace_norm_seen: float
    depth_limit_hit: bool

    def format_line(self) -> str:
        return (
            f"{self.outcome}: visited {self.nodes_visited} nodes, "
            f"min trace norm {self.min_trace_norm_seen:.6g}"
            + (", budget exhausted" if self.depth_limit_hit else "")
        )


def bq_test(
    t: TraceTriple,
    max_nodes: int = DEFAULT_BUDGET,
    trace_floor: float = DEFAULT_TRACE_FLOOR,
) -> BQVerdict:
    """Run the tree search and report QF / NotQF / Undecided."""
    if max_nodes < 1:
        raise ValueError(f"node budget must be at least 1, got {max_nodes}")
    if not trace_floor >= 2.0:
        raise ValueError(f"trace floor must be at least 2, got {trace_floor}")
    code, visited, min_norm, budget_hit = bq_search(
        complex(t.x), complex(t.y), complex(t.z), int(max_nodes), float(trace_floor)
    )
    return BQVerdict(
        outcome=_OUTCOME_BY_CODE[int(code)],
        nodes_visited=int(visited),
        min_trace_norm_seen=float(min_norm),
        depth_limit_hit=bool(budget_hit),
    )


def classify_point(
    c: float, tau: complex, budget: int = DEFAULT_BUDGET
) -> BQVerdict:
    """Classify the twist tau at half-length c via its trace triple."""
    tau = complex(tau)
    if not -math.pi < tau.imag <= math.pi:
        raise ValueError(f"need Im(tau) in (-pi, pi], got {tau!r}")
    x, y, z = markov_triple(c, tau)
    return bq_test(TraceTriple(x, y, z), max_nodes=budget)


def bq_search_python(
    x: complex, y: complex, z: complex, max_nodes: int, trace_floor: float
) -> tuple[int, int, float, bool]:
    """Pure-Python mirror of the compiled search, same traversal order."""

    def forbidden(w: complex, nw: float) -> bool:
        if nw < 2.0 - REAL_EPS:
            return True
        return abs(w.imag) <= REAL_EPS and -2.0 - REAL_EPS <= w.real <= 2.0 + REAL_EPS

    stack: list[tuple[complex, complex, complex, int]] = [(x, y, z, -1)]
    visited = 0
    min_norm = 1.0e300
    while stack:
        if visited >= max_nodes:
            return UNDECIDED_CODE, visited, min_norm, True
        cx, cy, cz, banned = stack.pop()
        visited += 1
        nx, ny, nz = abs(cx), abs(cy), abs(cz)
        min_norm = min(min_norm, nx, ny, nz)
        if forbidden(cx, nx) or forbidden(cy, ny) or forbidden(cz, nz):
            return NOT_QF_CODE, visited, min_norm, False
        children = []
        for move in range(3):
            if move == banned:
                continue
            if move == 0:
                new, old_norm, k1, k2 = cy * cz - cx, nx, ny, nz
                child = (new, cy, cz, move)
            elif move == 1:
                new, old_norm, k1, k2 = cx * cz - cy, ny, nx, nz
                child = (cx, new, cz, move)
            else:
                new, old_norm, k1, k2 = cx * cy - cz, nz, nx, ny
                child = (cx, cy, new, move)
            new_norm = abs(new)
            if min(new_norm, k1, k2) >= REGION_BOUND:
                continue
            if k1 >= trace_floor and k2 >= trace_floor and new_norm >= old_norm:
                continue
            children.append(((new_norm, new.real, new.imag), child))
        children.sort(key=lambda item: item[0], reverse=True)
        stack.extend(child for _, child in children)
    return QF_CODE, visited, min_norm, False
