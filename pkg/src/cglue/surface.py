"""Surfaces assembled from pants charts glued along curves.

A surface is a list of pants (indexed 0..n-1, each with boundary slots
``inf``, ``0``, ``1``) plus a list of curves.  Each curve carries an id, two
distinct ends ``(pants, slot)``, a half-length ``c > 0`` and a gluing
parameter ``bold_mu`` with imaginary part in [0, pi).  Boundary slots not
used by any curve are punctures (length 0).

Internally every pants gets a *chart*: a cyclic rotation of its slot labels
chosen so the slot lengths, read in the order (inf, 0, 1), have their zeros
trailing.  All matrices live in chart coordinates; the rotation is pure
bookkeeping between the user's labels and the chart.

Crossing a glued curve contributes a gate matrix.  With ends (a, b) the
``+`` direction departs from end a and arrives at end b and contributes
``Omega_b^-1 J^-1 T^-1 Omega_a`` where J and T are the half-turn and the
translation along the curve built from its half-length, and ``Omega_x`` is
the chart map of the end's slot.  The ``-`` direction contributes the
inverse.  Holonomy of a closed chain of local words and gates is the
left-to-right matrix product of its steps.

Each curve also stores the real part of its zero-twist marking, by
convention ``-c``.  This is bookkeeping for twist counting only and never
enters any matrix; ``apply_twist`` changes ``bold_mu`` by even multiples of
the half-length and leaves the marking alone.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, replace

from .moebius import Mat2C
from .pants import PantsGroup, build_pants, omega_for_slot

SLOTS = ("inf", "0", "1")

_ROTATIONS = (
    {"inf": "inf", "0": "0", "1": "1"},
    {"inf": "0", "0": "1", "1": "inf"},
    {"inf": "1", "0": "inf", "1": "0"},
)


def j_map(c: float) -> Mat2C:
    """Half-turn about the apex of the slot-inf axis for half-length c."""
    if c <= 0.0:
        raise ValueError("j_map needs a positive half-length")
    return Mat2C(0.0, -1.0 / math.tanh(c / 2.0), math.tanh(c / 2.0), 0.0)


def t_map(c: float, bold_mu: complex) -> Mat2C:
    """Translation by bold_mu along the slot-inf axis for half-length c."""
    if c <= 0.0:
        raise ValueError("t_map needs a positive half-length")
    bold_mu = complex(bold_mu)
    return Mat2C(
        cmath.cosh(bold_mu / 2.0),
        -cmath.sinh(bold_mu / 2.0) / math.tanh(c / 2.0),
        -cmath.sinh(bold_mu / 2.0) * math.tanh(c / 2.0),
        cmath.cosh(bold_mu / 2.0),
    )


def u_map(c: float, bold_mu: complex) -> Mat2C:
    """The composite (T J)^-1 in closed form; satisfies T J U = Id."""
    if c <= 0.0:
        raise ValueError("u_map needs a positive half-length")
    bold_mu = complex(bold_mu)
    return Mat2C(
        cmath.sinh(bold_mu / 2.0),
        cmath.cosh(bold_mu / 2.0) / math.tanh(c / 2.0),
        -cmath.cosh(bold_mu / 2.0) * math.tanh(c / 2.0),
        -cmath.sinh(bold_mu / 2.0),
    )


# -- graph data ----------------------------------------------------------------


@dataclass(frozen=True)
class Curve:
    """A glued curve between two boundary ends (possibly of the same pants)."""

    cid: int
    end_a: tuple[int, str]
    end_b: tuple[int, str]
    length: float
    gluing: complex
    marking_re: float | None = None

    def marking(self) -> float:
        return -self.length if self.marking_re is None else self.marking_re


class ChainError(ValueError):
    """A holonomy chain failed validation; carries the failing step index."""

    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class SurfaceGraph:
    num_pants: int
    curves: tuple[Curve, ...]
    charts: tuple[tuple[float, float, float], ...]
    rotations: tuple[dict[str, str], ...]

    def curve(self, cid: int) -> Curve:
        for cu in self.curves:
            if cu.cid == cid:
                return cu
        raise ValueError(f"no curve with id {cid}")

    def punctures(self) -> list[tuple[int, str]]:
        used = {end for cu in self.curves for end in (cu.end_a, cu.end_b)}
        return [
            (k, s) for k in range(self.num_pants) for s in SLOTS if (k, s) not in used
        ]

    def chart_slot(self, pants: int, slot: str) -> str:
        return self.rotations[pants][slot]

    def pants_group(self, pants: int) -> PantsGroup:
        return build_pants(*self.charts[pants])


def build_surface(num_pants: int, curves: list[Curve] | tuple[Curve, ...]) -> SurfaceGraph:
    """Validate a gluing graph and fix a chart for every pants.

    Boundary slots not covered by curves become punctures.  Rejected input:
    non-positive curve lengths, gluing parameters with Im outside [0, pi),
    curves whose two ends are the same boundary, reused boundary ends,
    duplicate curve ids, and ends naming unknown pants or slots.
    """
    if num_pants < 1:
        raise ValueError("a surface needs at least one pants")
    seen_ends: set[tuple[int, str]] = set()
    seen_ids: set[int] = set()
    for cu in curves:
        if cu.cid in seen_ids:
            raise ValueError(f"duplicate curve id {cu.cid}")
        seen_ids.add(cu.cid)
        if not (cu.length > 0.0 and math.isfinite(cu.length)):
            raise ValueError(f"curve {cu.cid}: length must be positive, got {cu.length}")
        im = complex(cu.gluing).imag
        if not 0.0 <= im < math.pi:
            raise ValueError(
                f"curve {cu.cid}: Im(bold_mu) must lie in [0, pi), got {im}"
            )
        for end in (cu.end_a, cu.end_b):
            k, s = end
            if not 0 <= k < num_pants or s not in SLOTS:
                raise ValueError(f"curve {cu.cid}: bad end {end!r}")
            if end in seen_ends:
                raise ValueError(f"curve {cu.cid}: boundary end {end!r} used twice")
            seen_ends.add(end)
        if cu.end_a == cu.end_b:
            raise ValueError(
                f"curve {cu.cid}: the two ends must be distinct boundary components"
            )

    lengths_by_end: dict[tuple[int, str], float] = {}
    for cu in curves:
        lengths_by_end[cu.end_a] = cu.length
        lengths_by_end[cu.end_b] = cu.length

    charts = []
    rotations = []
    for k in range(num_pants):
        slot_lengths = {s: lengths_by_end.get((k, s), 0.0) for s in SLOTS}
        for rot in _ROTATIONS:
            inv = {v: k2 for k2, v in rot.items()}
            chart = tuple(slot_lengths[inv[t]] for t in SLOTS)
            zeros_trail = all(
                not (chart[i] == 0.0 and chart[j] > 0.0)
                for i in range(3)
                for j in range(i + 1, 3)
            )
            if zeros_trail:
                charts.append(chart)
                rotations.append(rot)
                break
        else:
            raise ValueError(f"pants {k}: no chart rotation orders the lengths")
    return SurfaceGraph(num_pants, tuple(curves), tuple(charts), tuple(rotations))


def one_holed_torus(c: float, bold_mu: complex) -> SurfaceGraph:
    """The standard one-pants surface: slots 0 and 1 glued, slot inf a puncture."""
    return build_surface(1, [Curve(0, (0, "0"), (0, "1"), c, bold_mu)])


# -- gates and holonomy ----------------------------------------------------------


def _end_omega(graph: SurfaceGraph, end: tuple[int, str]) -> Mat2C:
    pants, slot = end
    return omega_for_slot(graph.charts[pants], graph.chart_slot(pants, slot))


def gate_map(graph: SurfaceGraph, cid: int, direction: str) -> Mat2C:
    """Matrix contributed by crossing curve ``cid``.

    Direction '+' departs from end a and arrives at end b, contributing
    Omega_b^-1 J^-1 T^-1 Omega_a; direction '-' is the inverse crossing.
    """
    cu = graph.curve(cid)
    om_a = _end_omega(graph, cu.end_a)
    om_b = _end_omega(graph, cu.end_b)
    j = j_map(cu.length)
    t = t_map(cu.length, cu.gluing)
    gate = om_b.inverse() @ j.inverse() @ t.inverse() @ om_a
    if direction == "+":
        return gate
    if direction == "-":
        return gate.inverse()
    raise ValueError(f"direction must be '+' or '-', got {direction!r}")


@dataclass(frozen=True)
class LocalWord:
    pants: int
    letters: tuple[tuple[str, int], ...]  # (slot, power), power != 0


@dataclass(frozen=True)
class GateStep:
    cid: int
    direction: str


Step = LocalWord | GateStep


@dataclass(frozen=True)
class HolonomyChain:
    steps: tuple[Step, ...]

    def to_text(self) -> str:
        parts = []
        for s in self.steps:
            if isinstance(s, GateStep):
                parts.append(f"gate({s.cid},{s.direction})")
            else:
                toks = []
                for slot, power in s.letters:
                    tok = f"A{slot}"
                    if power != 1:
                        tok += f"^{power}"
                    toks.append(tok)
                parts.append(f"P{s.pants}:[{' '.join(toks)}]")
        return " ; ".join(parts)


_WORD_RE = re.compile(r"^P(\d+):\[(.*)\]$")
_LETTER_RE = re.compile(r"^A(inf|0|1)(?:\^(-?\d+))?$")
_GATE_RE = re.compile(r"^gate\((\d+),\s*([+-])\)$")


def parse_chain(text: str) -> HolonomyChain:
    """Parse a chain literal like ``P0:[Ainf A0^-1] ; gate(1,+) ; P1:[A1]``."""
    steps: list[Step] = []
    pieces = [p.strip() for p in text.split(";")]
    for idx, piece in enumerate(pieces):
        if not piece:
            raise ChainError(idx, "empty step")
        m = _WORD_RE.match(piece)
        if m:
            pants = int(m.group(1))
            letters = []
            for tok in m.group(2).split():
                lm = _LETTER_RE.match(tok)
                if not lm:
                    raise ChainError(idx, f"bad letter {tok!r}")
                power = int(lm.group(2)) if lm.group(2) else 1
                if power == 0:
                    raise ChainError(idx, f"zero power in {tok!r}")
                letters.append((lm.group(1), power))
            steps.append(LocalWord(pants, tuple(letters)))
            continue
        g = _GATE_RE.match(piece)
        if g:
            steps.append(GateStep(int(g.group(1)), g.group(2)))
            continue
        raise ChainError(idx, f"cannot parse {piece!r}")
    if not steps:
        raise ChainError(0, "empty chain")
    return HolonomyChain(tuple(steps))


def _gate_ends(graph: SurfaceGraph, step: GateStep) -> tuple[tuple[int, str], tuple[int, str]]:
    cu = graph.curve(step.cid)
    if step.direction == "+":
        return cu.end_a, cu.end_b
    return cu.end_b, cu.end_a


def holonomy(graph: SurfaceGraph, chain: HolonomyChain | str) -> Mat2C:
    """Holonomy of a closed chain: the left-to-right product of its steps.

    The chain must stay consistent: each local word names the pants the
    chain currently sits in, each gate departs from that pants, and the
    chain returns to its starting pants.  Violations raise ``ChainError``
    with the failing step index.
    """
    if isinstance(chain, str):
        chain = parse_chain(chain)
    if not chain.steps:
        raise ChainError(0, "empty chain")

    first = chain.steps[0]
    base = first.pants if isinstance(first, LocalWord) else _gate_ends(graph, first)[0][0]

    current = base
    total = Mat2C.identity()
    for idx, step in enumerate(chain.steps):
        if isinstance(step, LocalWord):
            if step.pants != current:
                raise ChainError(
                    idx, f"local word names pants {step.pants} but the chain is in {current}"
                )
            if not 0 <= step.pants < graph.num_pants:
                raise ChainError(idx, f"unknown pants {step.pants}")
            group = graph.pants_group(step.pants)
            for slot, power in step.letters:
                chart_slot = graph.chart_slot(step.pants, slot)
                gen = group.generator(chart_slot)
                if power < 0:
                    gen = gen.inverse()
                for _ in range(abs(power)):
                    total = total @ gen
        else:
            try:
                depart, arrive = _gate_ends(graph, step)
            except ValueError as exc:
                raise ChainError(idx, str(exc)) from None
            if depart[0] != current:
                raise ChainError(
                    idx,
                    f"gate({step.cid},{step.direction}) departs from pants {depart[0]} "
                    f"but the chain is in {current}",
                )
            total = total @ gate_map(graph, step.cid, step.direction)
            current = arrive[0]
    if current != base:
        raise ChainError(
            len(chain.steps) - 1,
            f"chain is not closed: started in pants {base}, ended in {current}",
        )
    return total


def pants_curve_chain(graph: SurfaceGraph, cid: int) -> HolonomyChain:
    """A chain representing the curve itself: the boundary word at its a-end."""
    cu = graph.curve(cid)
    pants, slot = cu.end_a
    return HolonomyChain((LocalWord(pants, ((slot, 1),)),))


# -- plumbing parameters ---------------------------------------------------------


def convert_mu_to_t(c: float, bold_mu: complex) -> complex:
    """Annulus modulus parameter t = (i pi - bold_mu) / c."""
    if c <= 0.0:
        raise ValueError("convert_mu_to_t needs a positive half-length")
    return (1j * math.pi - complex(bold_mu)) / c


def convert_t_to_mu(c: float, t: complex) -> complex:
    """Inverse of :func:`convert_mu_to_t`."""
    if c <= 0.0:
        raise ValueError("convert_t_to_mu needs a positive half-length")
    return 1j * math.pi - c * complex(t)


def plumbing_coordinate(c: float, z: complex) -> tuple[complex, bool]:
    """Annulus coordinate exp((i pi / c) Log M(z)) around the slot-inf axis.

    M sends the axis feet -+coth(c/2) to 0 and infinity.  The principal
    logarithm (argument in (-pi, pi]) is used; when M(z) lands on the
    negative real axis the value sits on the branch boundary, and the second
    return value flags it so callers can treat the wrap consciously.
    """
    if c <= 0.0:
        raise ValueError("plumbing_coordinate needs a positive half-length")
    z = complex(z)
    sh, ch = math.sinh(c / 2.0), math.cosh(c / 2.0)
    den = -sh * z + ch
    if den == 0:
        raise ValueError("z maps to infinity; no finite annulus coordinate")
    w = (sh * z + ch) / den
    if w == 0:
        raise ValueError("z maps to zero; no finite annulus coordinate")
    on_cut = w.real < 0.0 and w.imag == 0.0
    value = cmath.exp((1j * math.pi / c) * cmath.log(w))
    return value, on_cut


def apply_twist(graph: SurfaceGraph, cid: int, k: int) -> SurfaceGraph:
    """Shift the gluing parameter of curve ``cid`` by 2k times its half-length."""
    new_curves = []
    found = False
    for cu in graph.curves:
        if cu.cid == cid:
            found = True
            cu = replace(cu, gluing=complex(cu.gluing) + 2.0 * k * cu.length)
        new_curves.append(cu)
    if not found:
        raise ValueError(f"no curve with id {cid}")
    return SurfaceGraph(graph.num_pants, tuple(new_curves), graph.charts, graph.rotations)


# -- surface description files -----------------------------------------------------


_CURVE_LINE = re.compile(
    r"^curve\s+(\d+):\s*\((\d+),\s*(inf|0|1)\)\s*--\s*\((\d+),\s*(inf|0|1)\)"
    r"\s+c\s+(\S+)\s+mu\s+(\S+)\s+(\S+)(?:\s+marking\s+(\S+))?$"
)
_PUNCTURE_LINE = re.compile(r"^puncture\s+\((\d+),\s*(inf|0|1)\)$")


def parse_surface(text: str) -> SurfaceGraph:
    """Parse a surface description.

    Format, one record per line (``#`` comments and blank lines ignored)::

        pants N
        curve CID: (P, SLOT) -- (P, SLOT) c LENGTH mu RE IM [marking RE]
        puncture (P, SLOT)

    Punctures may be listed for documentation; listed punctures must match
    the slots left over by the curves.
    """
    num_pants = None
    curves: list[Curve] = []
    listed_punctures: list[tuple[int, str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("pants"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ValueError(f"bad pants line: {raw!r}")
            num_pants = int(parts[1])
            continue
        m = _CURVE_LINE.match(line)
        if m:
            marking = float(m.group(9)) if m.group(9) else None
            curves.append(
                Curve(
                    cid=int(m.group(1)),
                    end_a=(int(m.group(2)), m.group(3)),
                    end_b=(int(m.group(4)), m.group(5)),
                    length=float(m.group(6)),
                    gluing=complex(float(m.group(7)), float(m.group(8))),
                    marking_re=marking,
                )
            )
            continue
        p = _PUNCTURE_LINE.match(line)
        if p:
            listed_punctures.append((int(p.group(1)), p.group(2)))
            continue
        raise ValueError(f"cannot parse surface line: {raw!r}")
    if num_pants is None:
        raise ValueError("missing 'pants N' line")
    graph = build_surface(num_pants, curves)
    if listed_punctures and sorted(listed_punctures) != sorted(graph.punctures()):
        raise ValueError(
            f"listed punctures {sorted(listed_punctures)} disagree with the "
            f"slots left by the curves {sorted(graph.punctures())}"
        )
    return graph


def surface_to_text(graph: SurfaceGraph) -> str:
    lines = [f"pants {graph.num_pants}"]
    for cu in graph.curves:
        g = complex(cu.gluing)
        line = (
            f"curve {cu.cid}: ({cu.end_a[0]}, {cu.end_a[1]}) -- "
            f"({cu.end_b[0]}, {cu.end_b[1]}) c {cu.length:.17g} "
            f"mu {g.real:.17g} {g.imag:.17g}"
        )
        if cu.marking_re is not None:
            line += f" marking {cu.marking_re:.17g}"
        lines.append(line)
    for pk, slot in graph.punctures():
        lines.append(f"puncture ({pk}, {slot})")
    return "\n".join(lines) + "\n"


def load_surface(path: str) -> SurfaceGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_surface(fh.read())
