"""Hyperbolic pairs of pants as two-generator matrix groups.

A pair of pants is described by three boundary half-lengths
``(c1, c2, c3)``, listed in the slot order (inf, 0, 1).  The three boundary
generators ``A_inf``, ``A_0``, ``A_1`` satisfy ``A_inf A_0 A_1 = -Id`` in
SL(2, C) and have traces ``2 cosh(c_eps)``.  Zero lengths mean cusps and must
occupy the trailing slots; callers holding ``(0, c2, c3)`` with ``c2 > 0``
should relabel the boundaries first.

Geometry conventions (upper half-plane model):

* ``A_inf`` translates along the half-circle with feet -+coth(c1/2), the
  attracting fixed point at ``+coth(c1/2)``.
* ``A_0`` translates along the half-circle with feet -+R0 where
  ``R0 = coth(c1/2) tanh(nu1/2)``; the attracting foot is ``-R0``.
* The seam parameters ``nu1, nu2 > 0`` come from
  ``coth(nu1) = (cosh c1 cosh c2 + cosh c3) / (sinh c1 sinh c2)`` and the
  analogous formula with the roles of ``c2`` and ``c3`` exchanged.
* The fundamental domain ``Delta`` is the part of the upper half-plane
  outside the four isometric circles of ``A_inf^{+-1}`` and ``A_0^{+-1}``;
  its white half ``Delta_0`` is the ``Re z >= 0`` part, cut out by the
  imaginary axis and two seam half-circles.

The chart maps ``omega(eps, ...)`` move the slot-``eps`` boundary of a pants
into the slot-``inf`` position of a rotated chart; they are rebuilt from
three-point matching every time and self-verify by conjugation residuals.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .moebius import Mat2C, mobius_through_points

OMEGA_RESIDUAL_TOL = 1e-7
_WHITE_SAMPLES = 32


def _arccoth(x: float) -> float:
    """Inverse hyperbolic cotangent for x > 1, in log form.

    Values at or below 1 cannot arise from genuine pants lengths; they signal
    either invalid input or catastrophic underflow for extremely long
    boundaries, so they raise instead of being clamped silently.
    """
    if x <= 1.0:
        raise ValueError(
            f"arccoth argument {x!r} is not in (1, inf); the boundary lengths are "
            "either invalid or too large for double precision seam parameters"
        )
    return 0.5 * math.log((x + 1.0) / (x - 1.0))


def seam_parameters(c1: float, c2: float, c3: float) -> tuple[float, float]:
    """Seam half-distances (nu1, nu2) along the slot-inf axis.

    nu1 measures between the feet of the seams cutting off the slot-0
    boundary, nu2 the slot-1 analogue.  Degenerate inputs give 0: a cusp at
    slot 0 forces nu1 = 0, a cusp at slot 1 forces nu2 = 0.
    """
    if c1 == 0.0 or c2 == 0.0:
        nu1 = 0.0
    else:
        nu1 = _arccoth(
            (math.cosh(c1) * math.cosh(c2) + math.cosh(c3))
            / (math.sinh(c1) * math.sinh(c2))
        )
    if c1 == 0.0 or c3 == 0.0:
        nu2 = 0.0
    else:
        nu2 = _arccoth(
            (math.cosh(c1) * math.cosh(c3) + math.cosh(c2))
            / (math.sinh(c1) * math.sinh(c3))
        )
    return nu1, nu2


def generator_inf(c1: float) -> Mat2C:
    """Boundary generator for slot inf; also valid in the cusp limit c1 = 0."""
    return Mat2C(math.cosh(c1), math.cosh(c1) + 1.0, math.cosh(c1) - 1.0, math.cosh(c1))


def generator_zero(c1: float, c2: float, c3: float) -> Mat2C:
    """Boundary generator for slot 0.

    For ``c2 > 0`` this is the trace-2cosh(c2) matrix whose axis has feet
    -+coth(c1/2) tanh(nu1/2).  For ``c2 = 0`` (which forces ``c3 = 0``) the
    limit is the parabolic [[1, 0], [-2, 1]] fixing the origin.
    """
    if c2 == 0.0:
        if c3 > 0.0:
            raise ValueError(
                "a cusp at slot 0 with a positive slot-1 length is not a valid "
                "chart ordering; relabel the boundary slots"
            )
        return Mat2C(1.0, 0.0, -2.0, 1.0)
    nu1, _ = seam_parameters(c1, c2, c3)
    return Mat2C(
        math.cosh(c2),
        -(1.0 / math.tanh(c1 / 2.0)) * math.tanh(nu1 / 2.0) * math.sinh(c2),
        -math.tanh(c1 / 2.0) * (1.0 / math.tanh(nu1 / 2.0)) * math.sinh(c2),
        math.cosh(c2),
    )


def _validate_lengths(lengths: tuple[float, float, float]) -> None:
    if len(lengths) != 3:
        raise ValueError("expected three boundary half-lengths")
    for c in lengths:
        if not math.isfinite(c) or c < 0.0:
            raise ValueError(f"boundary half-lengths must be finite and >= 0, got {lengths}")
    seen_zero = False
    for c in lengths:
        if c == 0.0:
            seen_zero = True
        elif seen_zero:
            raise ValueError(
                f"zero-length boundaries must occupy the trailing slots, got {lengths}; "
                "relabel the boundary slots so the positive lengths come first"
            )


@dataclass(frozen=True)
class PantsGroup:
    """A pants group: boundary half-lengths, generators, seam parameters."""

    lengths: tuple[float, float, float]
    a_inf: Mat2C
    a_zero: Mat2C
    a_one: Mat2C
    nu1: float
    nu2: float

    def generator(self, slot: str) -> Mat2C:
        try:
            return {"inf": self.a_inf, "0": self.a_zero, "1": self.a_one}[slot]
        except KeyError:
            raise ValueError(f"slot must be 'inf', '0' or '1', got {slot!r}") from None

    def boundary_traces(self) -> tuple[complex, complex, complex]:
        return (self.a_inf.tr, self.a_zero.tr, self.a_one.tr)

    def to_text(self) -> str:
        lines = [
            "pants-group",
            "lengths: " + " ".join(f"{c:.17g}" for c in self.lengths),
            f"nu: {self.nu1:.17g} {self.nu2:.17g}",
            "A_inf: " + self.a_inf.to_text(),
            "A_0: " + self.a_zero.to_text(),
            "A_1: " + self.a_one.to_text(),
        ]
        if all(c > 0.0 for c in self.lengths):
            fs = fundamental_set(self)
            lines.append(
                "circles: "
                + " ".join(f"{v:.17g}" for v in (fs.c1, fs.r1, fs.c2, fs.r2))
            )
        return "\n".join(lines) + "\n"


def build_pants(c1: float, c2: float, c3: float) -> PantsGroup:
    """Construct the pants group for half-lengths (c1, c2, c3).

    The third generator is defined through the relation
    ``A_inf A_0 A_1 = -Id``, which also covers the degenerate (cusped)
    charts without special cases.
    """
    lengths = (float(c1), float(c2), float(c3))
    _validate_lengths(lengths)
    nu1, nu2 = seam_parameters(*lengths)
    a_inf = generator_inf(lengths[0])
    a_zero = generator_zero(*lengths)
    a_one = -((a_inf @ a_zero).inverse())
    group = PantsGroup(lengths, a_inf, a_zero, a_one, nu1, nu2)
    relation = a_inf @ a_zero @ a_one
    if relation.scaled_residual(-Mat2C.identity()) > 1e-10:
        raise RuntimeError(
            f"pants relation failed for lengths {lengths}: residual "
            f"{relation.scaled_residual(-Mat2C.identity()):.3e}"
        )
    return group


# -- axis geometry -----------------------------------------------------------


def axis_inf_feet(c1: float) -> tuple[float, float]:
    """(repelling, attracting) feet of the slot-inf axis."""
    r = 1.0 / math.tanh(c1 / 2.0)
    return (-r, r)


def axis_zero_feet(c1: float, c2: float, c3: float) -> tuple[float, float]:
    """(repelling, attracting) feet of the slot-0 axis: (+R0, -R0)."""
    nu1, _ = seam_parameters(c1, c2, c3)
    r0 = (1.0 / math.tanh(c1 / 2.0)) * math.tanh(nu1 / 2.0)
    return (r0, -r0)


def axis_one_feet(c1: float, c2: float, c3: float) -> tuple[float, float]:
    """The two feet of the slot-1 axis (unordered, both positive)."""
    _, nu2 = seam_parameters(c1, c2, c3)
    r = 1.0 / math.tanh(c1 / 2.0)
    return (r * math.tanh((c1 - nu2) / 2.0), r * math.tanh((c1 + nu2) / 2.0))


def _geodesic_distance(feet_a: tuple[float, float], feet_b: tuple[float, float]) -> float:
    """Hyperbolic distance between two disjoint geodesics with real feet."""
    a0, a1 = feet_a
    if a0 == a1 or feet_b[0] == feet_b[1]:
        raise ValueError("degenerate geodesic (coinciding feet)")
    # send feet_a to (0, inf); the image of feet_b stays real
    imgs = []
    for p in feet_b:
        den = p - a1
        if den == 0.0:
            raise ValueError("geodesics share a foot; they are not disjoint")
        imgs.append((p - a0) / den)
    m = 0.5 * (imgs[0] + imgs[1])
    s = 0.5 * abs(imgs[0] - imgs[1])
    if abs(m) <= s:
        raise ValueError("geodesics cross or touch; no positive distance")
    return math.acosh(abs(m) / s)


# -- fundamental set ----------------------------------------------------------


@dataclass(frozen=True)
class FundamentalSet:
    """Circle data and membership tests for the standard fundamental set.

    ``c1, r1`` describe the isometric circles of the slot-inf generator pair
    (centers -+c1).  ``c2, r2`` are the recorded seam-circle constants
    ``-tanh(c1/2) coth(nu1/2) tanh(c2)`` and
    ``tanh(c1/2) coth(nu1/2) sinh(c2)``; the isometric circles of the slot-0
    generator pair that actually bound the region are kept separately as
    ``zero_center``/``zero_radius`` (centers -+zero_center), since the two
    descriptions are reciprocal to each other.  The region between the
    seams is split by the imaginary axis into the white half (Re z >= 0) and
    the black half.
    """

    lengths: tuple[float, float, float]
    c1: float
    r1: float
    c2: float
    r2: float
    zero_center: float
    zero_radius: float

    def iso_circles(self) -> list[tuple[float, float]]:
        """(center, radius) of the four bounding isometric circles."""
        return [
            (self.c1, self.r1),
            (-self.c1, self.r1),
            (self.zero_center, self.zero_radius),
            (-self.zero_center, self.zero_radius),
        ]

    def contains(self, z: complex, slack: float = 1e-9) -> bool:
        """Is z in the closed fundamental set (up to slack)?"""
        if z.imag <= 0.0:
            return False
        return all(abs(z - k) >= r * (1.0 - slack) for k, r in self.iso_circles())

    def in_white(self, z: complex, slack: float = 1e-9) -> bool:
        return z.real >= -slack * max(1.0, abs(z)) and self.contains(z, slack)

    def in_black(self, z: complex, slack: float = 1e-9) -> bool:
        return z.real <= slack * max(1.0, abs(z)) and self.contains(z, slack)


def fundamental_set(pants: PantsGroup) -> FundamentalSet:
    """Fundamental set data for a pants group with three positive lengths.

    Cusped charts have no compact seam circles on one side; their limit
    regions are handled by the cusp-limit module, so zero lengths are
    rejected here.
    """
    c1, c2, c3 = pants.lengths
    if min(pants.lengths) <= 0.0:
        raise ValueError(
            "fundamental_set needs three positive lengths; cusped charts are "
            "covered by the cusp-limit module (cusped_data)"
        )
    big_c1 = math.cosh(c1) / (math.cosh(c1) - 1.0)
    r1 = 1.0 / (math.cosh(c1) - 1.0)
    rec_c2 = -math.tanh(c1 / 2.0) * (1.0 / math.tanh(pants.nu1 / 2.0)) * math.tanh(c2)
    rec_r2 = math.tanh(c1 / 2.0) * (1.0 / math.tanh(pants.nu1 / 2.0)) * math.sinh(c2)
    r0 = (1.0 / math.tanh(c1 / 2.0)) * math.tanh(pants.nu1 / 2.0)
    zero_center = r0 * (1.0 / math.tanh(c2))
    zero_radius = r0 / math.sinh(c2)
    return FundamentalSet(
        lengths=pants.lengths,
        c1=big_c1,
        r1=r1,
        c2=rec_c2,
        r2=rec_r2,
        zero_center=zero_center,
        zero_radius=zero_radius,
    )


def _chart_iso_circles(chart: tuple[float, float, float]) -> list[tuple[float, float]]:
    """Bounding isometric circles of the chart region, degenerate-safe.

    Reads the circles straight off the generator matrices (center -d/c,
    radius 1/|c| for the bottom row (c, d)), which stays valid when the
    slot-0 boundary is a cusp.  Needs chart[0] > 0.  Rotated chart labels of
    the form (c1, 0, c3) carry no slot-0 generator; only the slot-inf pair
    bounds the region there.
    """
    if chart[0] <= 0.0:
        raise ValueError("chart membership needs a positive slot-inf length")
    mats = [generator_inf(chart[0])]
    if not (chart[1] == 0.0 and chart[2] > 0.0):
        mats.append(generator_zero(*chart))
    circles = []
    for m in mats:
        for mat in (m, m.inverse()):
            c, d = mat.c, mat.d
            circles.append(((-d / c).real, 1.0 / abs(c)))
    return circles


def _in_white_chart(z: complex, chart: tuple[float, float, float], slack: float = 1e-9) -> bool:
    if z.imag <= 0.0 or z.real < -slack * max(1.0, abs(z)):
        return False
    return all(abs(z - k) >= r * (1.0 - slack) for k, r in _chart_iso_circles(chart))


def _sample_white(chart: tuple[float, float, float], rng: random.Random, n: int) -> list[complex]:
    circles = _chart_iso_circles(chart)
    span = max(abs(k) + r for k, r in circles)
    out: list[complex] = []
    for _ in range(4000):
        if len(out) >= n:
            break
        z = complex(rng.uniform(0.0, 1.5 * span), rng.uniform(1e-3, 2.0 * span))
        if all(abs(z - k) >= r * (1.0 + 1e-6) for k, r in circles):
            out.append(z)
    return out


# -- chart maps ---------------------------------------------------------------


def omega(eps: int, lengths: tuple[float, float, float]) -> Mat2C:
    """Chart map carrying the slot-``eps`` boundary into slot-inf position.

    ``lengths`` is the chart (c1, c2, c3) *after* the rotation: the glued
    curve's length sits first.  ``omega(0, (c1, c2, c3))`` maps the chart
    (c3, c1, c2) onto (c1, c2, c3), carrying the slot-0 axis of the source
    onto the slot-inf axis of the target; ``omega(1, ...)`` does the same for
    the slot-1 axis, with source chart (c2, c3, c1).

    Both maps are produced by matching three anchor points (repelling foot,
    attracting foot, seam foot) and are verified on the spot: the source
    generator must be conjugated onto the target slot-inf generator to
    within ``OMEGA_RESIDUAL_TOL``, and a random sample of the source white
    region must land in the target white region.  Verification failure
    raises ``RuntimeError``.
    """
    c1, c2, c3 = (float(v) for v in lengths)
    if eps == 0:
        if c1 <= 0.0 or c3 <= 0.0:
            raise ValueError(
                f"omega(0, {lengths}) needs positive lengths in slots inf and 1 of the "
                "target chart; rotate the chart so cusps sit in unused slots"
            )
        om = _omega_zero(c1, c2, c3)
        source_chart = (c3, c1, c2)
        source_gen = generator_zero(*source_chart)
    elif eps == 1:
        if min(c1, c2, c3) <= 0.0:
            raise ValueError(f"omega(1, {lengths}) needs three positive lengths")
        om = _omega_zero(c1, c2, c3) @ _omega_zero(c3, c1, c2)
        source_chart = (c2, c3, c1)
        pants = build_pants(*source_chart)
        source_gen = pants.a_one
    else:
        raise ValueError(f"eps must be 0 or 1, got {eps!r}")

    target_gen = generator_inf(c1)
    residual = (om @ source_gen @ om.inverse()).psl_distance(target_gen)
    if residual > OMEGA_RESIDUAL_TOL:
        raise RuntimeError(
            f"omega({eps}, {lengths}) failed conjugation check: residual {residual:.3e}"
        )
    rng = random.Random(20260822)
    sample = _sample_white(source_chart, rng, _WHITE_SAMPLES)
    bad = []
    for z in sample:
        w = om.apply(z)
        if isinstance(w, complex) and _in_white_chart(w, lengths):
            continue
        bad.append(z)
    if bad:
        raise RuntimeError(
            f"omega({eps}, {lengths}) failed region check: {len(bad)} of {len(sample)} "
            f"white-region samples left the target white region, first {bad[0]!r}"
        )
    return om


def _omega_zero(c1: float, c2: float, c3: float) -> Mat2C:
    """Three-point construction of omega(0, (c1, c2, c3))."""
    rep_s, att_s = axis_zero_feet(c3, c1, c2)
    foot_s = 1j * rep_s  # foot of the imaginary-axis seam on the source slot-0 axis
    r = 1.0 / math.tanh(c1 / 2.0)
    rep_t, att_t = -r, r
    # foot of the outer seam circle on the target slot-inf axis (|foot| = r)
    foot_t = (2.0 * r * r + 1j * r * (r * r - 1.0)) / (1.0 + r * r)
    return mobius_through_points((rep_s, att_s, foot_s), (rep_t, att_t, foot_t))


def omega_for_slot(chart: tuple[float, float, float], slot: str) -> Mat2C:
    """Chart map for a boundary slot in the (inf, 0, 1) labelling.

    Returns the identity for slot inf, and the rotated-chart ``omega`` for
    slots 0 and 1.  ``chart`` is the pants chart (c_inf, c_0, c_1).
    """
    x, y, z = chart
    if slot == "inf":
        return Mat2C.identity()
    if slot == "0":
        return omega(0, (y, z, x))
    if slot == "1":
        return omega(1, (z, x, y))
    raise ValueError(f"slot must be 'inf', '0' or '1', got {slot!r}")


# -- hypercycles and strips ----------------------------------------------------


@dataclass(frozen=True)
class Hypercycle:
    """A hypercycle around the slot-inf axis at signed angle theta.

    The curve is the circle |z - center| = radius with purely imaginary
    center; for theta = 0 it degenerates to the axis itself.  The point
    where it crosses the positive imaginary axis is recorded since the cusp
    limit sends it to the horocycle height.
    """

    theta: float
    axis_radius: float
    center: complex
    radius: float
    iaxis_point: complex
    is_axis: bool


def hypercycle_inf(c1: float, bold_mu: complex) -> Hypercycle:
    """Hypercycle of the slot-inf axis at angle Im(bold_mu)/2.

    Requires Im(bold_mu) in [0, pi).  At angle 0 the hypercycle is the axis.
    """
    if c1 <= 0.0:
        raise ValueError("hypercycle_inf needs a positive slot-inf length")
    im = complex(bold_mu).imag
    if not 0.0 <= im < math.pi:
        raise ValueError(f"Im(bold_mu) must lie in [0, pi), got {im!r}")
    theta = im / 2.0
    r = 1.0 / math.tanh(c1 / 2.0)
    if theta == 0.0:
        return Hypercycle(0.0, r, 0.0j, r, 1j * r, True)
    sec = 1.0 / math.cos(theta)
    tan = math.tan(theta)
    return Hypercycle(
        theta=theta,
        axis_radius=r,
        center=-1j * r * tan,
        radius=r * sec,
        iaxis_point=1j * r * (sec - tan),
        is_axis=False,
    )


_SLOT_FEET = {
    "inf": lambda chart: axis_inf_feet(chart[0]),
    "0": lambda chart: axis_zero_feet(*chart),
    "1": lambda chart: axis_one_feet(*chart),
}


def strip_half_width(
    chart: tuple[float, float, float],
    thetas: dict[str, float],
    fraction: float = 0.4,
) -> float:
    """Common half-width for the gluing strips around the boundary axes.

    ``thetas`` maps slot labels of the positive-length boundaries to their
    hypercycle angles Im(bold_mu)/2.  Each strip reaches arcsinh(tan theta)
    beyond its axis; the largest value keeping all strips pairwise disjoint
    is the slack left over from the pairwise axis distances, and the default
    returned width is 40 percent of it.  Raises when the hypercycles already
    overlap.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    slots = [s for s in ("inf", "0", "1") if thetas.get(s) is not None]
    pairs = []
    for i in range(len(slots)):
        for j in range(i + 1, len(slots)):
            a, b = slots[i], slots[j]
            dist = _geodesic_distance(_SLOT_FEET[a](chart), _SLOT_FEET[b](chart))
            slack = dist - math.asinh(math.tan(thetas[a])) - math.asinh(math.tan(thetas[b]))
            pairs.append((a, b, slack))
    if not pairs:
        raise ValueError("strip width needs at least two boundaries with angles")
    worst = min(p[2] for p in pairs)
    if worst <= 0.0:
        bad = min(pairs, key=lambda p: p[2])
        raise ValueError(
            f"hypercycle neighbourhoods of slots {bad[0]} and {bad[1]} overlap "
            f"(slack {bad[2]:.3e}); reduce the gluing angles"
        )
    return fraction * worst
