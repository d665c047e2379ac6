"""The Hesse pencil x^3 + y^3 + z^3 + t x y z: inflection and dual-tangent
tables, the 84-case concurrency scan, the pencil's j-map and the
equianharmonic predicate.

The scan has an exact mode over Q(eps), eps = exp(2 pi i / 3), in which a
parameter t = a + b*eps with rational a, b makes every concurrency
determinant an exact algebraic number: the classification of special t
values then carries no floating-point tolerance at all.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cubic import Cubic, hesse_cubic, _hesse_inflection_table
from .errors import SingularInputError
from .lattice import Lattice, LatticeKind, classify_lattice
from .projective import ProjPoint, point_from_vec
from .sphere import INF, chordal, is_infinite, sphere_from_pair

EPS = cmath.exp(2j * math.pi / 3.0)
CONCURRENCY_TOL = 1e-9

# the four smooth and three singular parameters with concurrent tangents
SPECIAL_SMOOTH = (0.0 + 0j, 6.0 + 0j, 6.0 * EPS, 6.0 * EPS * EPS)
SPECIAL_SINGULAR = (-3.0 + 0j, -3.0 * EPS, -3.0 * EPS * EPS)


def hesse_inflections() -> list[ProjPoint]:
    return _hesse_inflection_table()


def _dual_rows(t: complex) -> np.ndarray:
    e = EPS
    e2 = e * e
    # ordered so row k is the tangent at inflection k of the fixed table
    # (the classical tables list the two grids transposed to one another;
    # the gradient check pins this pairing down)
    return np.array(
        [
            [-t, 3, 3],
            [-t * e, 3, 3 * e2],
            [-t * e2, 3, 3 * e],
            [3, -t, 3],
            [3, -t * e2, 3 * e],
            [3, -t * e, 3 * e2],
            [3, 3, -t],
            [3, 3 * e2, -t * e],
            [3, 3 * e, -t * e2],
        ],
        dtype=complex,
    )


def hesse_tangent_duals(t: complex) -> list[ProjPoint]:
    return [point_from_vec(r) for r in _dual_rows(t)]


def hesse_data(t: complex) -> tuple[Cubic, list[ProjPoint], list[ProjPoint]]:
    """(cubic, inflection points, dual tangent coordinates); the k-th dual is
    the tangent at the k-th inflection point for every t."""
    return hesse_cubic(t), hesse_inflections(), hesse_tangent_duals(t)


def concurrency_scan(t: complex, tol: float = CONCURRENCY_TOL) -> list[tuple[int, int, int]]:
    """Unordered triples of distinct inflectional tangents whose dual points
    are collinear: normalized 3x3 determinant below tol.

    All 84 triples are scanned; a nonempty result at a smooth parameter
    happens exactly on the equianharmonic orbit t in {0, 6, 6 eps, 6 eps^2}.
    """
    rows = _dual_rows(complex(t))
    rows = rows / np.abs(rows).max(axis=1, keepdims=True)
    triples = list(combinations(range(9), 3))
    mats = rows[np.array(triples)]
    dets = np.abs(np.linalg.det(mats))
    return [triples[i] for i in np.nonzero(dets <= tol)[0]]


def concurrency_dets(t: complex) -> dict[tuple[int, int, int], float]:
    rows = _dual_rows(complex(t))
    rows = rows / np.abs(rows).max(axis=1, keepdims=True)
    triples = list(combinations(range(9), 3))
    mats = rows[np.array(triples)]
    dets = np.abs(np.linalg.det(mats))
    return dict(zip(triples, dets.tolist()))


@dataclass(frozen=True)
class QEps:
    """Element a + b*eps of Q(eps), eps^2 = -1 - eps, with exact rational
    parts."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a, b=0) -> "QEps":
        return QEps(Fraction(a), Fraction(b))

    def __add__(self, o: "QEps") -> "QEps":
        return QEps(self.a + o.a, self.b + o.b)

    def __sub__(self, o: "QEps") -> "QEps":
        return QEps(self.a - o.a, self.b - o.b)

    def __neg__(self) -> "QEps":
        return QEps(-self.a, -self.b)

    def __mul__(self, o: "QEps") -> "QEps":
        # (a1 + b1 e)(a2 + b2 e), e^2 = -1 - e
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        return QEps(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2 - b1 * b2)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_complex(self) -> complex:
        return complex(self.a) + complex(self.b) * EPS


_Q0 = QEps.of(0)
_Q3 = QEps.of(3)
_QE = QEps.of(0, 1)  # eps
_QE2 = _Q0 - QEps.of(1) - _QE  # eps^2 = -1 - eps

EXACT_SPECIAL_SMOOTH = (
    QEps.of(0),
    QEps.of(6),
    QEps.of(6) * _QE,
    QEps.of(6) * _QE2,
)
EXACT_SPECIAL_SINGULAR = (
    QEps.of(-3),
    QEps.of(-3) * _QE,
    QEps.of(-3) * _QE2,
)


def _dual_rows_exact(t: QEps) -> list[list[QEps]]:
    nt = -t
    return [
        [nt, _Q3, _Q3],
        [nt * _QE, _Q3, _Q3 * _QE2],
        [nt * _QE2, _Q3, _Q3 * _QE],
        [_Q3, nt, _Q3],
        [_Q3, nt * _QE2, _Q3 * _QE],
        [_Q3, nt * _QE, _Q3 * _QE2],
        [_Q3, _Q3, nt],
        [_Q3, _Q3 * _QE2, nt * _QE],
        [_Q3, _Q3 * _QE, nt * _QE2],
    ]


def _det3_exact(rows: list[list[QEps]]) -> QEps:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def concurrency_scan_exact(t: QEps) -> list[tuple[int, int, int]]:
    """Exact-arithmetic version of the scan for t = a + b*eps with rational
    a, b; returned triples have determinant exactly zero."""
    rows = _dual_rows_exact(t)
    out = []
    for trip in combinations(range(9), 3):
        if _det3_exact([rows[k] for k in trip]).is_zero():
            out.append(trip)
    return out


def hesse_j(t: complex) -> complex:
    """The pencil's classification map
    t -> [8 t^3 (1 - t^3/216)^3 : 27 (1 + t^3/27)^3] as a sphere value."""
    t = complex(t)
    t3 = t ** 3
    num = 8.0 * t3 * (1.0 - t3 / 216.0) ** 3
    den = 27.0 * (1.0 + t3 / 27.0) ** 3
    if abs(den) <= 1e-12 * (abs(num) + abs(den)):
        return INF
    return sphere_from_pair(num, den)


def is_equianharmonic(obj, tol: float = 1e-9) -> bool:
    """Whether a lattice or cubic is the equianharmonic one (hexagonal
    lattice, j = 0, the unique smooth cubic with three concurrent
    inflectional tangents)."""
    if isinstance(obj, Lattice):
        return classify_lattice(obj).kind is LatticeKind.HEXAGONAL
    if isinstance(obj, Cubic):
        if obj.family == "weierstrass":
            g2, g3 = obj.g2, obj.g3
            return abs(g2) ** 3 <= tol * (abs(g2) ** 3 + 27.0 * abs(g3) ** 2)
        t = obj.t
        if abs(t ** 3 + 27.0) <= tol * (abs(t) ** 3 + 27.0):
            raise SingularInputError(f"hesse cubic t={t} is singular")
        jv = hesse_j(t)
        if is_infinite(jv):
            return False
        return chordal(jv, 0j) <= tol
    raise TypeError(f"expected Lattice or Cubic, got {type(obj)!r}")
