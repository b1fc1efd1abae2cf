"""Moebius transformations of the Riemann sphere as normalized 2x2 complex matrices.

Conventions used throughout the package:

* A ``Mat2C`` always has determinant 1: the constructor divides the given
  entries by a principal square root of the determinant and rejects
  (numerically) singular input.  Matrices that differ by a global sign act
  identically on the sphere, so equality questions are asked at the PSL(2,C)
  level via :func:`psl_distance` / :meth:`Mat2C.psl_equal`.
* The point at infinity is first class: :data:`INF` is a singleton and
  ``SpherePoint = complex | InfinityType``.
* Fixed points of a loxodromic map are ordered (repelling, attracting),
  decided by the modulus of the derivative.  A parabolic map returns its
  single fixed point twice.  The identity has no isolated fixed points and is
  rejected.
* ``translation_length`` returns the complex length lam with
  ``trace = 2 cosh(lam / 2)``, canonicalized so that ``Re lam > 0`` and
  ``Im(lam / 2)`` lies in (-pi/2, pi/2].  The imaginary part is a rotation
  angle and is only defined modulo this choice of strip; callers that need
  the other representative can conjugate.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

TOL = 1e-9
_SINGULAR_FLOOR = 1e-30


class InfinityType:
    """The point at infinity on the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"


INF = InfinityType()

SpherePoint = complex | InfinityType


def is_inf(p: SpherePoint) -> bool:
    return isinstance(p, InfinityType)


def chordal(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal distance between two sphere points (range [0, 2])."""
    if is_inf(p) and is_inf(q):
        return 0.0
    if is_inf(p):
        return 2.0 / math.sqrt(1.0 + abs(q) ** 2)
    if is_inf(q):
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    p = complex(p)
    q = complex(q)
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


class IsometryClass(enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class Mat2C:
    """A 2x2 complex matrix normalized to determinant 1.

    Entries are stored row major as a, b, c, d.  The constructor rescales by
    a principal square root of the determinant, so the stored matrix always
    satisfies ``|det - 1| <= 1e-9``; input with determinant smaller than
    1e-30 in modulus raises ``ValueError``.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        a = complex(self.a)
        b = complex(self.b)
        c = complex(self.c)
        d = complex(self.d)
        det = a * d - b * c
        if abs(det) < _SINGULAR_FLOOR:
            raise ValueError(f"matrix is numerically singular (det = {det!r})")
        if abs(det - 1.0) > 1e-14:
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    # -- basic algebra ----------------------------------------------------

    @staticmethod
    def identity() -> "Mat2C":
        return Mat2C(1.0, 0.0, 0.0, 1.0)

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def tr(self) -> complex:
        return self.a + self.d

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2C") -> "Mat2C":
        return Mat2C(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2C":
        return Mat2C(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "Mat2C":
        # det(-M) = det(M), so the constructor leaves the sign alone.
        return Mat2C(-self.a, -self.b, -self.c, -self.d)

    def scaled_residual(self, other: "Mat2C") -> float:
        """Max entrywise distance to ``other`` without sign adjustment."""
        return max(
            abs(x - y) for x, y in zip(self.entries(), other.entries())
        )

    def psl_distance(self, other: "Mat2C") -> float:
        """Max entrywise distance to ``other``, minimized over the global sign."""
        plus = self.scaled_residual(other)
        minus = max(abs(x + y) for x, y in zip(self.entries(), other.entries()))
        return min(plus, minus)

    def psl_equal(self, other: "Mat2C", tol: float = TOL) -> bool:
        return self.psl_distance(other) <= tol

    def canonical(self) -> "Mat2C":
        """Sign-canonical representative of the PSL class.

        The first entry of (a, b, c, d) with modulus above 1e-12 gets an
        argument in (-pi/2, pi/2]: the real part positive, or zero real part
        with positive imaginary part.  Entries with real part within
        1e-12 of zero relatively are treated as purely imaginary.
        """
        for e in self.entries():
            if abs(e) > 1e-12:
                re = e.real
                if abs(re) <= 1e-12 * abs(e):
                    keep = e.imag > 0
                else:
                    keep = re > 0
                return self if keep else -self
        return self

    # -- action on the sphere ---------------------------------------------

    def apply(self, z: SpherePoint) -> SpherePoint:
        """Evaluate (az + b) / (cz + d); total on the sphere."""
        if is_inf(z):
            if self.c == 0:
                return INF
            return self.a / self.c
        z = complex(z)
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def derivative_modulus(self, z: SpherePoint) -> float:
        """|f'(z)| in the chart appropriate for z (1/|cz+d|^2; 1/|a|^2 at INF)."""
        if is_inf(z):
            return 1.0 / abs(self.a) ** 2
        return 1.0 / abs(self.c * complex(z) + self.d) ** 2

    # -- classification ----------------------------------------------------

    def classify(self, tol: float = TOL) -> IsometryClass:
        t2 = self.tr * self.tr
        if abs(t2 - 4.0) <= tol:
            ident = Mat2C.identity()
            if self.psl_distance(ident) <= tol:
                return IsometryClass.IDENTITY
            return IsometryClass.PARABOLIC
        if abs(t2.imag) <= tol and -tol <= t2.real < 4.0:
            return IsometryClass.ELLIPTIC
        return IsometryClass.LOXODROMIC

    def fixed_points(self, tol: float = TOL) -> tuple[SpherePoint, SpherePoint]:
        """Fixed points on the sphere, ordered (repelling, attracting).

        Parabolic maps return the fixed point twice.  For elliptic maps
        neither point attracts; the pair is ordered lexicographically by
        (real, imaginary) part for determinism.  The identity is rejected.
        """
        kind = self.classify(tol)
        if kind is IsometryClass.IDENTITY:
            raise ValueError("the identity fixes every point; no isolated fixed points")
        a, b, c, d = self.entries()
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if abs(c) <= 1e-13 * scale:
            # infinity is fixed
            if kind is IsometryClass.PARABOLIC:
                return (INF, INF)
            p = b / (d - a)
            pts = [p, INF]
        elif kind is IsometryClass.PARABOLIC:
            p = (a - d) / (2.0 * c)
            return (p, p)
        else:
            disc = cmath.sqrt(self.tr * self.tr - 4.0)
            pts = [(a - d + disc) / (2.0 * c), (a - d - disc) / (2.0 * c)]
        if kind is IsometryClass.ELLIPTIC:
            pts.sort(key=_point_sort_key)
            return (pts[0], pts[1])
        pts.sort(key=self.derivative_modulus, reverse=True)
        return (pts[0], pts[1])

    def translation_length(self, tol: float = TOL) -> complex:
        """Complex translation length lam of a loxodromic map.

        Defined by trace = +-2 cosh(lam/2) and canonicalized so that
        Re(lam) > 0 and Im(lam/2) lies in (-pi/2, pi/2].  Raises for
        non-loxodromic input.
        """
        kind = self.classify(tol)
        if kind is not IsometryClass.LOXODROMIC:
            raise ValueError(f"translation length needs a loxodromic map, got {kind.value}")
        w = self.tr / 2.0
        for half in (cmath.acosh(w), cmath.acosh(-w)):
            if -math.pi / 2 < half.imag <= math.pi / 2:
                return 2.0 * half
        # acosh can land exactly on Im = -pi; its sign-flipped partner then
        # sits on +pi and neither strip test fires.  Fold into the strip.
        half = cmath.acosh(w)
        folded = complex(half.real, math.remainder(half.imag, math.pi))
        if folded.imag <= -math.pi / 2:
            folded = complex(folded.real, folded.imag + math.pi)
        return 2.0 * folded

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        """Row-major (re, im) pairs of the sign-canonical form, 17 significant digits."""
        m = self.canonical()
        parts: list[str] = []
        for e in m.entries():
            parts.append(f"{e.real:.17g}")
            parts.append(f"{e.imag:.17g}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "Mat2C":
        vals = [float(tok) for tok in text.split()]
        if len(vals) != 8:
            raise ValueError(f"expected 8 floats (four re/im pairs), got {len(vals)}")
        return cls(
            complex(vals[0], vals[1]),
            complex(vals[2], vals[3]),
            complex(vals[4], vals[5]),
            complex(vals[6], vals[7]),
        )

    def __repr__(self) -> str:
        return (
            f"Mat2C([{self.a:.6g}, {self.b:.6g}; {self.c:.6g}, {self.d:.6g}])"
        )


def _point_sort_key(p: SpherePoint) -> tuple[float, float, float]:
    if is_inf(p):
        return (1.0, 0.0, 0.0)
    return (0.0, complex(p).real, complex(p).imag)


def psl_distance(m: Mat2C, n: Mat2C) -> float:
    return m.psl_distance(n)


def mobius_through_points(
    sources: tuple[complex, complex, complex],
    targets: tuple[complex, complex, complex],
) -> Mat2C:
    """The Moebius map sending three finite points to three finite points.

    Built by composing the two maps that send each triple to (0, 1, INF).
    All six points must be finite and each triple pairwise distinct.
    """

    def to_zero_one_inf(a: complex, b: complex, c: complex) -> Mat2C:
        if a == b or b == c or a == c:
            raise ValueError("the three points must be pairwise distinct")
        return Mat2C(b - c, -a * (b - c), b - a, -c * (b - a))

    s = to_zero_one_inf(*[complex(p) for p in sources])
    t = to_zero_one_inf(*[complex(p) for p in targets])
    return t.inverse() @ s
