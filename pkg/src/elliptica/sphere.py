"""Riemann-sphere values and Moebius transformations.

A sphere value is an ordinary complex number or the point at infinity,
represented by the constant INF (a complex with non-finite parts).  All
comparisons between sphere values go through the chordal metric, which is
bounded and treats infinity like any other point.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

INF = complex(math.inf, math.inf)


def is_infinite(v: complex) -> bool:
    return not (math.isfinite(v.real) and math.isfinite(v.imag))


def chordal(a: complex, b: complex) -> float:
    """Chordal distance on the Riemann sphere, in [0, 2]."""
    ainf, binf = is_infinite(a), is_infinite(b)
    if ainf and binf:
        return 0.0
    if ainf:
        return 2.0 / math.sqrt(1.0 + abs(b) ** 2)
    if binf:
        return 2.0 / math.sqrt(1.0 + abs(a) ** 2)
    return 2.0 * abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


@dataclass(frozen=True)
class MobiusTransform:
    """z -> (a z + b)/(c z + d), coefficients up to common scale, ad - bc != 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("singular Moebius coefficients")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z: complex) -> complex:
        if is_infinite(z):
            return INF if self.c == 0 else self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den == 0:
            return INF
        return num / den

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """self after other: (self.compose(other))(z) = self(other(z))."""
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def normalized(self) -> "MobiusTransform":
        """Scale so the largest-modulus coefficient is 1."""
        coeffs = (self.a, self.b, self.c, self.d)
        pivot = max(coeffs, key=abs)
        return MobiusTransform(*(x / pivot for x in coeffs))

    @staticmethod
    def identity() -> "MobiusTransform":
        return MobiusTransform(1, 0, 0, 1)

    def proportional_to(self, other: "MobiusTransform", tol: float = 1e-8) -> bool:
        s = self.normalized()
        o = other.normalized()
        return max(
            abs(s.a - o.a), abs(s.b - o.b), abs(s.c - o.c), abs(s.d - o.d)
        ) <= tol


def _to_zero_one_inf(p: complex, q: complex, r: complex) -> MobiusTransform:
    # unique Moebius sending (p, q, r) -> (0, 1, inf); any one of p,q,r may be INF
    if is_infinite(p):
        return MobiusTransform(0, q - r, 1, -r)
    if is_infinite(q):
        return MobiusTransform(1, -p, 1, -r)
    if is_infinite(r):
        return MobiusTransform(1, -p, 0, q - p)
    return MobiusTransform(q - r, -p * (q - r), q - p, -r * (q - p))


def mobius_through(src: tuple[complex, complex, complex],
                   dst: tuple[complex, complex, complex]) -> MobiusTransform:
    """The Moebius transformation taking the three distinct source points to
    the three distinct target points (either triple may contain INF)."""
    m1 = _to_zero_one_inf(*src)
    m2 = _to_zero_one_inf(*dst)
    return m2.inverse().compose(m1)


def sphere_from_pair(num: complex, den: complex) -> complex:
    """Value of the homogeneous pair [num : den] as a sphere value."""
    if den == 0:
        return INF
    v = num / den
    if cmath.isnan(v.real) or cmath.isnan(v.imag):
        return INF
    return v
