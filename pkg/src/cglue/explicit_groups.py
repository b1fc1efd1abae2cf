"""Explicit one-holed torus groups built from a single length and twist.

Two constructions share the boundary generators

    s1 = [[cosh c, cosh c + 1], [cosh c - 1, cosh c]]
    s2 = [[cosh c, cosh c - 1], [cosh c + 1, cosh c]]

whose axes both have translation length 2c and whose commutator-style
combinations k1 = s2^-1 s1 and k2 = s1 s2^-1 are parabolic fixing -1 and +1.

``build_hnn`` adjoins the loxodromic pairing map r (conjugating s2 to s1)
parameterised by a complex twist mu, giving a one-holed torus group as an
HNN extension.  ``build_afp`` instead glues two parabolic generators v1, v2
to their conjugates under the orientation-swapped pairing map u, giving the
same surface as an amalgamated free product; the four generators satisfy
v1 v2 v3 v4 = 1.

``trace_triple`` returns (tr s1, tr r, tr(s1 r)), which satisfies the Markov
identity x^2 + y^2 + z^2 = xyz; ``markov_triple`` produces the same triple
from closed forms without building matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .moebius import Mat2C
from .surface import u_map

POST_TOL = 1e-9

_L_QUARTER_TURN = Mat2C(0.0, -1.0, 1.0, 0.0)


def _validate_length(c: float) -> float:
    c = float(c)
    if not (math.isfinite(c) and c > 0.0):
        raise ValueError(f"half-length must be finite and positive, got {c}")
    return c


def s1_matrix(c: float) -> Mat2C:
    ch = math.cosh(c)
    return Mat2C(ch, ch + 1.0, ch - 1.0, ch)


def s2_matrix(c: float) -> Mat2C:
    ch = math.cosh(c)
    return Mat2C(ch, ch - 1.0, ch + 1.0, ch)


def r_map(c: float, mu: complex) -> Mat2C:
    """Loxodromic pairing map with r s2 r^-1 = s1."""
    ch, sh = cmath.cosh(mu / 2.0), cmath.sinh(mu / 2.0)
    return Mat2C(ch / math.tanh(c / 2.0), -sh, -sh, ch * math.tanh(c / 2.0))


@dataclass(frozen=True)
class HNNGroup:
    """One-holed torus group <s1, r> with r s2 r^-1 = s1."""

    c: float
    mu: complex
    s1: Mat2C
    s2: Mat2C
    r: Mat2C
    u: Mat2C
    k1: Mat2C
    k2: Mat2C

    def iso_circles(self) -> tuple[tuple[float, float], ...]:
        """Isometric circle data (center, radius) bounding a fundamental set.

        The pair at +-cosh(c)/(cosh(c) - 1) belongs to s1, the pair at
        +-cosh(c)/(cosh(c) + 1) to s2; the set lies outside all four.
        """
        ch = math.cosh(self.c)
        c1, r1 = ch / (ch - 1.0), 1.0 / (ch - 1.0)
        c2, r2 = ch / (ch + 1.0), 1.0 / (ch + 1.0)
        return ((c1, r1), (-c1, r1), (c2, r2), (-c2, r2))

    def marked_points(self) -> tuple[complex, complex, complex]:
        """Axis tops on the imaginary axis and the r-image of the second."""
        q1 = 1j / math.tanh(self.c / 2.0)
        q2 = 1j * math.tanh(self.c / 2.0)
        q3 = self.r.apply(q2)
        assert isinstance(q3, complex)
        return (q1, q2, q3)

    def commutator_trace(self) -> complex:
        return (self.s1 @ self.r @ self.s1.inverse() @ self.r.inverse()).tr

    def hypercycle_pair(self) -> tuple[tuple[complex, float], tuple[complex, float]]:
        """Matched hypercycle circles around the two paired axes.

        Returns ((center, radius), (center, radius)); r maps the first
        circle onto the second.  Needs |Im mu| < pi.
        """
        theta = self.mu.imag / 2.0
        if not abs(theta) < math.pi / 2.0:
            raise ValueError(f"need |Im mu| < pi for the hypercycle pair, got {self.mu!r}")
        tan_half = math.tanh(self.c / 2.0)
        src = (1j * tan_half * math.tan(theta), tan_half / math.cos(theta))
        tgt = (-1j / tan_half * math.tan(theta), 1.0 / (tan_half * math.cos(theta)))
        return (src, tgt)


def build_hnn(c: float, mu: complex) -> HNNGroup:
    c = _validate_length(c)
    mu = complex(mu)
    if not (math.isfinite(mu.real) and math.isfinite(mu.imag)):
        raise ValueError(f"twist must be finite, got {mu!r}")
    s1, s2 = s1_matrix(c), s2_matrix(c)
    r, u = r_map(c, mu), u_map(c, mu)
    group = HNNGroup(
        c=c,
        mu=mu,
        s1=s1,
        s2=s2,
        r=r,
        u=u,
        k1=s2.inverse() @ s1,
        k2=s1 @ s2.inverse(),
    )
    checks = (
        ("r s2 r^-1 = s1", (r @ s2 @ r.inverse()).psl_distance(s1)),
        ("u s1 u^-1 = s1^-1", (u @ s1 @ u.inverse()).psl_distance(s1.inverse())),
        ("r = u L", r.psl_distance(u @ _L_QUARTER_TURN)),
        ("tr k1 = -2", abs(group.k1.tr + 2.0)),
        ("tr k2 = -2", abs(group.k2.tr + 2.0)),
        ("tr [s1, r] = -2", abs(group.commutator_trace() + 2.0)),
    )
    scale = max(1.0, abs(cmath.cosh(mu / 2.0)) ** 2) * max(1.0, math.cosh(c)) ** 2
    for label, residual in checks:
        if not residual <= POST_TOL * scale:
            raise RuntimeError(f"pairing identity {label} fails: residual {residual:.3e}")
    return group


def twist_sign(c: float, mu: complex) -> int:
    """Sign s in r(mu + 2c) = s * s1^-1 r(mu)."""
    c = _validate_length(c)
    target = r_map(c, complex(mu) + 2.0 * c)
    cand = s1_matrix(c).inverse() @ r_map(c, mu)
    scale = max(abs(e) for e in target.entries())
    if target.scaled_residual(cand) <= 1e-8 * scale:
        return 1
    if target.scaled_residual(-cand) <= 1e-8 * scale:
        return -1
    raise RuntimeError(f"twist continuation mismatch at c={c}, mu={mu!r}")


@dataclass(frozen=True)
class AFPGroup:
    """One-holed torus group <v1, v2, v3, v4 | v1 v2 v3 v4 = 1>."""

    c: float
    mu: complex
    v1: Mat2C
    v2: Mat2C
    v3: Mat2C
    v4: Mat2C
    u: Mat2C

    def fundamental_circles(self) -> tuple[tuple[float, float], ...]:
        """Circle data (center, radius) bounding a fundamental set.

        The first pair passes through the parabolic fixed points -+1 and is
        carried to the unit circle by v1 (resp. v2); the second pair are the
        isometric circles of the squared hyperbolic element v1 v2.
        """
        ch = math.cosh(self.c)
        c1, r1 = 2.0 * ch / (2.0 * ch - 1.0), 1.0 / (2.0 * ch - 1.0)
        c2 = (2.0 * ch * ch - 1.0) / (2.0 * ch * (ch - 1.0))
        r2 = 1.0 / (2.0 * ch * (ch - 1.0))
        return ((c1, r1), (-c1, r1), (c2, r2), (-c2, r2))


def build_afp(c: float, mu: complex) -> AFPGroup:
    c = _validate_length(c)
    mu = complex(mu)
    if not (math.isfinite(mu.real) and math.isfinite(mu.imag)):
        raise ValueError(f"twist must be finite, got {mu!r}")
    ch = math.cosh(c)
    v1 = Mat2C(ch + 1.0, ch, -ch, -ch + 1.0)
    v2 = Mat2C(ch - 1.0, -ch, ch, -ch - 1.0)
    u = u_map(c, mu)
    v3 = u @ v1 @ u.inverse()
    v4 = u @ v2 @ u.inverse()
    group = AFPGroup(c=c, mu=mu, v1=v1, v2=v2, v3=v3, v4=v4, u=u)
    s1 = s1_matrix(c)
    scale = max(1.0, abs(cmath.cosh(mu / 2.0)) ** 2) * max(1.0, ch) ** 2
    checks = (
        ("v1 v2 v3 v4 = 1", (v1 @ v2 @ v3 @ v4).psl_distance(Mat2C.identity())),
        ("v1 v2 = s1^-2", (v1 @ v2).psl_distance((s1 @ s1).inverse())),
    )
    for label, residual in checks:
        if not residual <= POST_TOL * scale:
            raise RuntimeError(f"gluing identity {label} fails: residual {residual:.3e}")
    return group


def markov_triple(c: float, tau: complex) -> tuple[complex, complex, complex]:
    """Closed-form trace triple (tr s1, tr r, tr(s1 r)) at twist tau.

    Satisfies x^2 + y^2 + z^2 = x y z; no matrices are built.
    """
    c = _validate_length(c)
    tau = complex(tau)
    ch = math.cosh(c)
    th = math.tanh(c / 2.0)
    x = complex(2.0 * ch)
    y = cmath.cosh(tau / 2.0) * (1.0 / th + th)
    # z = ch * (y - 2 sinh(tau/2)) rewritten to avoid the cancellation of
    # two exponentially large terms at large c
    defect = (1.0 - th) ** 2 / th
    z = ch * (2.0 * cmath.exp(-tau / 2.0) + defect * cmath.cosh(tau / 2.0))
    scale = max(1.0, abs(x), abs(y), abs(z))
    residual = abs(x * x + y * y + z * z - x * y * z)
    if not residual <= 1e-8 * scale**3:
        raise RuntimeError(
            f"trace identity residual {residual:.3e} at c={c}, tau={tau!r}"
        )
    return (x, y, z)


def trace_triple(group: HNNGroup) -> tuple[complex, complex, complex]:
    """Trace triple (tr s1, tr r, tr(s1 r)) read off the group's matrices.

    Rejects triples with a near-zero coordinate (elliptic-degenerate words)
    and verifies the Markov identity.
    """
    x = group.s1.tr
    y = group.r.tr
    z = (group.s1 @ group.r).tr
    if min(abs(x), abs(y), abs(z)) <= 1e-9:
        raise ValueError(
            f"degenerate trace triple ({x:.3g}, {y:.3g}, {z:.3g}); "
            "a generator word is elliptic of order two"
        )
    scale = max(1.0, abs(x), abs(y), abs(z))
    residual = abs(x * x + y * y + z * z - x * y * z)
    if not residual <= 1e-8 * scale**3:
        raise RuntimeError(f"trace identity residual {residual:.3e}")
    return (x, y, z)
