"""Plane cubic curves: the Weierstrass embedding of a torus, tangent lines,
line intersections, the chord-tangent group law, and inflection points.

Two families are supported: the standard Weierstrass form
y^2 z - 4 x^3 + g2 x z^2 + g3 z^3 and the Hesse pencil
x^3 + y^3 + z^3 + t x y z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import POLE_THRESHOLD, wp_inverse, wp_values
from .errors import (
    FewerThanNineError,
    NoPreimageError,
    PointOffCurveError,
    SingularCubicError,
    SingularPointError,
)
from .lattice import Lattice, TorusPoint, reduce_mod_lattice, torsion_points, weierstrass_invariants
from .projective import (
    IntersectionList,
    ProjLine,
    ProjPoint,
    line_through,
    point_from_vec,
    proj_point,
)

ON_CURVE_TOL = 1e-8
LINE_CLUSTER_TOL = 1e-6
MULT_CONFIRM_TOL = 1e-8


@dataclass(frozen=True)
class Cubic:
    """Homogeneous degree-3 form with its gradient and Hessian evaluators."""

    family: str  # "weierstrass" | "hesse"
    g2: complex = 0j
    g3: complex = 0j
    t: complex = 0j

    def F(self, v) -> complex:
        x, y, z = np.asarray(v, dtype=complex)
        if self.family == "weierstrass":
            return y * y * z - 4.0 * x ** 3 + self.g2 * x * z * z + self.g3 * z ** 3
        return x ** 3 + y ** 3 + z ** 3 + self.t * x * y * z

    def term_scale(self, v) -> float:
        """Sum of the monomial magnitudes; the natural residual scale.

        Floored at a small multiple of the coefficient scale: near [0,1,0]
        every monomial vanishes together with F and the bare ratio would
        misjudge points that sit numerically on the curve.
        """
        x, y, z = np.abs(np.asarray(v, dtype=complex))
        m = max(x, y, z)
        if self.family == "weierstrass":
            floor = 1e-12 * (1.0 + abs(self.g2) + abs(self.g3)) * m ** 3
            return float(
                y * y * z + 4.0 * x ** 3 + abs(self.g2) * x * z * z
                + abs(self.g3) * z ** 3 + floor + 1e-300
            )
        floor = 1e-12 * (1.0 + abs(self.t)) * m ** 3
        return float(
            x ** 3 + y ** 3 + z ** 3 + abs(self.t) * x * y * z + floor + 1e-300
        )

    def residual(self, p: ProjPoint) -> float:
        return abs(self.F(p.vec)) / self.term_scale(p.vec)

    def grad(self, v) -> np.ndarray:
        x, y, z = np.asarray(v, dtype=complex)
        if self.family == "weierstrass":
            return np.array(
                [
                    -12.0 * x * x + self.g2 * z * z,
                    2.0 * y * z,
                    y * y + 2.0 * self.g2 * x * z + 3.0 * self.g3 * z * z,
                ]
            )
        t = self.t
        return np.array(
            [3.0 * x * x + t * y * z, 3.0 * y * y + t * x * z, 3.0 * z * z + t * x * y]
        )

    def hessian_matrix(self, v) -> np.ndarray:
        x, y, z = np.asarray(v, dtype=complex)
        if self.family == "weierstrass":
            g2, g3 = self.g2, self.g3
            return np.array(
                [
                    [-24.0 * x, 0.0, 2.0 * g2 * z],
                    [0.0, 2.0 * z, 2.0 * y],
                    [2.0 * g2 * z, 2.0 * y, 2.0 * g2 * x + 6.0 * g3 * z],
                ]
            )
        t = self.t
        return np.array(
            [[6.0 * x, t * z, t * y], [t * z, 6.0 * y, t * x], [t * y, t * x, 6.0 * z]]
        )

    def hessian_det(self, v) -> complex:
        return complex(np.linalg.det(self.hessian_matrix(v)))

    def on_curve(self, p: ProjPoint, tol: float = ON_CURVE_TOL) -> bool:
        return self.residual(p) <= tol

    def is_smooth(self) -> bool:
        if self.family == "weierstrass":
            disc = self.g2 ** 3 - 27.0 * self.g3 ** 2
            return abs(disc) > 1e-12 * (abs(self.g2) ** 3 + 27.0 * abs(self.g3) ** 2 + 1e-300)
        return abs(self.t ** 3 + 27.0) > 1e-12 * (abs(self.t) ** 3 + 27.0)

    def to_json(self) -> dict:
        if self.family == "weierstrass":
            return {
                "family": "weierstrass",
                "g2": [self.g2.real, self.g2.imag],
                "g3": [self.g3.real, self.g3.imag],
            }
        return {"family": "hesse", "t": [self.t.real, self.t.imag]}


def weierstrass_cubic(lat: Lattice) -> Cubic:
    """The cubic y^2 z = 4 x^3 - g2 x z^2 - g3 z^3 carrying the image of the
    wp-embedding of C/Gamma."""
    g2, g3 = weierstrass_invariants(lat)
    c = Cubic("weierstrass", g2=g2, g3=g3)
    if not c.is_smooth():
        raise SingularCubicError(
            f"discriminant too small: g2={g2}, g3={g3}"
        )
    return c


def hesse_cubic(t: complex) -> Cubic:
    return Cubic("hesse", t=complex(t))


IDENTITY = proj_point(0, 1, 0)


def embed_point(z, lat: Lattice) -> ProjPoint:
    """[wp(z), wp'(z), 1], with lattice points mapping to [0, 1, 0]."""
    rep = getattr(z, "rep", z)
    tp = reduce_mod_lattice(complex(rep), lat)
    from .lattice import torus_distance

    if torus_distance(tp.rep, 0.0, lat) < POLE_THRESHOLD * abs(lat.omega1):
        return IDENTITY
    p, pp = wp_values(tp.rep, lat)
    return proj_point(p, pp, 1.0)


def unembed(p: ProjPoint, cubic: Cubic, lat: Lattice, tol: float = 1e-10) -> TorusPoint:
    """Inverse of embed_point on the Weierstrass cubic; the +-z ambiguity of
    wp is resolved by matching wp' to the y-coordinate."""
    if cubic.family != "weierstrass":
        raise PointOffCurveError("unembed requires a weierstrass-family cubic")
    if not cubic.on_curve(p, 1e-6):
        raise PointOffCurveError(f"point {p.coords} not on the cubic")
    if p.close_to(IDENTITY, 1e-12):
        return TorusPoint(0.0, lat)
    x0, y0, z0 = p.coords
    if abs(z0) < 1e-13:
        return TorusPoint(0.0, lat)
    x, y = x0 / z0, y0 / z0
    try:
        z = wp_inverse(x, lat, tol=1e-13)
    except Exception as exc:
        raise NoPreimageError(f"wp inversion failed from all grid seeds: {exc}")
    _, ppv = wp_values(z.rep, lat)
    if abs(ppv - y) > abs(-ppv - y):
        z = -z
        ppv = -ppv
    if abs(ppv - y) > 1e-5 * (1.0 + abs(y)):
        raise NoPreimageError(
            f"wp' mismatch {abs(ppv - y):.2e} at recovered preimage"
        )
    return z


def tangent_line(cubic: Cubic, p: ProjPoint, tol: float = ON_CURVE_TOL) -> ProjLine:
    """Tangent at a smooth curve point: dual coordinates are the gradient."""
    if not cubic.on_curve(p, tol):
        raise PointOffCurveError(f"point {p.coords} not on the cubic")
    g = cubic.grad(p.vec)
    if np.linalg.norm(g) < 1e-12 * max(1.0, np.linalg.norm(p.vec) ** 2):
        raise SingularPointError(f"vanishing gradient at {p.coords}")
    return ProjLine(point_from_vec(g))


def _poly_derivative_small(coeffs: np.ndarray, s: complex, order: int, scale: float) -> bool:
    # coeffs: [c3, c2, c1, c0]; check |p^(j)(s)| small for j = 1..order-1
    c3, c2, c1, c0 = coeffs
    derivs = [
        3.0 * c3 * s * s + 2.0 * c2 * s + c1,
        6.0 * c3 * s + 2.0 * c2,
    ]
    for j in range(1, order):
        if abs(derivs[j - 1]) > MULT_CONFIRM_TOL * scale:
            return False
    return True


def line_intersect_cubic(line: ProjLine, cubic: Cubic,
                         seed: int = 0) -> IntersectionList:
    """The three intersection points of a line with the cubic, counted with
    multiplicity.

    The line is parametrized by a seeded generic recombination of two
    spanning points (retried when the leading coefficient collapses), the
    resulting univariate cubic is rooted by companion matrix, and roots are
    clustered into multiplicities; candidate multiple roots are confirmed
    against the polynomial derivative magnitudes, since a tangency supplied
    with noisy dual coordinates genuinely splits at the cube-root scale.
    """
    v1p, v2p = line.spanning_points()
    rng = np.random.default_rng(seed)
    for _ in range(12):
        g1, g2c = rng.standard_normal(4).view(np.complex128)
        w1 = v1p.vec + g1 * v2p.vec
        w2 = v1p.vec + g2c * v2p.vec
        w1 /= np.abs(w1).max()
        w2 /= np.abs(w2).max()
        c0 = cubic.F(w1)
        c3 = cubic.F(w2)
        fscale = cubic.term_scale(w1) + cubic.term_scale(w2)
        if abs(c3) < 1e-10 * fscale or abs(c0) < 1e-10 * fscale:
            continue
        fp = cubic.F(w1 + w2)
        fm = cubic.F(w1 - w2)
        c2 = (fp + fm) / 2.0 - c0
        c1 = (fp - fm) / 2.0 - c3
        coeffs = np.array([c3, c2, c1, c0])
        roots = np.roots(coeffs)
        # fine clustering, then multiplicity upgrade confirmed by derivatives
        groups: list[list[complex]] = []
        for s in sorted(roots, key=lambda v: (v.real, v.imag)):
            for grp in groups:
                ref = grp[0]
                if abs(s - ref) <= 2e-3 * (1.0 + abs(ref)):
                    grp.append(s)
                    break
            else:
                groups.append([complex(s)])
        dscale = float(np.abs(coeffs).max()) * 3.0
        entries: list[tuple[ProjPoint, int]] = []
        ok = True
        for grp in groups:
            centroid = sum(grp) / len(grp)
            m = len(grp)
            if m > 1 and not _poly_derivative_small(coeffs, centroid, m, dscale):
                # genuinely distinct roots inside the coarse radius
                spread = max(abs(s - centroid) for s in grp)
                if spread > LINE_CLUSTER_TOL * (1.0 + abs(centroid)):
                    for s in grp:
                        entries.append((point_from_vec(w1 + s * w2), 1))
                    continue
                ok = False
                break
            # polish simple roots by one Newton step on the exact cubic
            if m == 1:
                c3v, c2v, c1v, c0v = coeffs
                p = ((c3v * centroid + c2v) * centroid + c1v) * centroid + c0v
                dp = (3.0 * c3v * centroid + 2.0 * c2v) * centroid + c1v
                if dp != 0:
                    centroid = centroid - p / dp
            entries.append((point_from_vec(w1 + centroid * w2), m))
        if not ok:
            continue
        entries.sort(key=lambda e: (e[0].coords[0].real, e[0].coords[0].imag,
                                    e[0].coords[1].real))
        return IntersectionList(tuple(entries))
    raise SingularCubicError("line intersection parametrization failed")


def _remove_nearest(entries: list[list], p: ProjPoint):
    best, bi = math.inf, -1
    for i, (q, m) in enumerate(entries):
        if m <= 0:
            continue
        d = p.distance(q)
        if d < best:
            best, bi = d, i
    entries[bi][1] -= 1


def group_add(cubic: Cubic, p: ProjPoint, q: ProjPoint,
              tol: float = ON_CURVE_TOL) -> ProjPoint:
    """Chord-tangent addition on a weierstrass-family cubic with identity
    [0, 1, 0]."""
    if cubic.family != "weierstrass":
        raise PointOffCurveError(
            "group law uses the weierstrass identity [0,1,0]"
        )
    for pt in (p, q):
        if not cubic.on_curve(pt, 1e-6):
            raise PointOffCurveError(f"point {pt.coords} not on the cubic")
    if p.distance(q) < 1e-10:
        line = tangent_line(cubic, p, tol=1e-6)
    else:
        line = line_through(p, q)
    inter = line_intersect_cubic(line, cubic)
    entries = [[pt, m] for pt, m in inter.entries]
    _remove_nearest(entries, p)
    _remove_nearest(entries, q)
    residual = next(pt for pt, m in entries if m > 0)
    x, y, z = residual.coords
    return proj_point(x, -y, z)


def group_negate(p: ProjPoint) -> ProjPoint:
    x, y, z = p.coords
    return proj_point(x, -y, z)


def _polish_inflection(cubic: Cubic, p: ProjPoint) -> ProjPoint:
    """Two-variable Newton on (F, det Hessian) in the chart of the largest
    coordinate, with finite-difference Jacobian."""
    v = p.vec.copy()
    pivot = int(np.argmax(np.abs(v)))
    idx = [i for i in range(3) if i != pivot]

    def fun(u):
        w = v.copy()
        w[idx[0]], w[idx[1]] = u[0], u[1]
        w[pivot] = 1.0
        return np.array([cubic.F(w), cubic.hessian_det(w)])

    u = np.array([v[idx[0]] / v[pivot], v[idx[1]] / v[pivot]])
    h = 1e-7
    for _ in range(8):
        r = fun(u)
        if max(abs(r[0]), abs(r[1])) == 0.0:
            break
        j = np.empty((2, 2), dtype=complex)
        for k in range(2):
            du = np.zeros(2, dtype=complex)
            du[k] = h
            j[:, k] = (fun(u + du) - fun(u - du)) / (2.0 * h)
        try:
            step = np.linalg.solve(j, r)
        except np.linalg.LinAlgError:
            break
        u = u - step
        if np.abs(step).max() < 1e-14:
            break
    w = v.copy()
    w[idx[0]], w[idx[1]] = u[0], u[1]
    w[pivot] = 1.0
    return point_from_vec(w)


_HESSE_EPS = complex(math.cos(2.0 * math.pi / 3.0), math.sin(2.0 * math.pi / 3.0))


def _hesse_inflection_table() -> list[ProjPoint]:
    e = _HESSE_EPS
    rows = [
        (0, 1, -1), (0, 1, -e), (0, 1, -e * e),
        (1, 0, -1), (1, 0, -e * e), (1, 0, -e),
        (1, -1, 0), (1, -e, 0), (1, -e * e, 0),
    ]
    return [proj_point(*r) for r in rows]


def inflection_points(cubic: Cubic, lat: Lattice | None = None) -> list[ProjPoint]:
    """The nine distinct inflection points (curve meets its Hessian).

    Weierstrass family: seeded from the embedded 3-torsion points (which is
    what they are) and polished on (F, det Hess); requires the lattice.
    Hesse family: the classical fixed table, independent of t.
    """
    if cubic.family == "hesse":
        pts = _hesse_inflection_table()
    else:
        if lat is None:
            raise FewerThanNineError("weierstrass inflections need the lattice")
        pts = [
            _polish_inflection(cubic, embed_point(tp, lat))
            for tp in torsion_points(lat, 3)
        ]
    for i, p in enumerate(pts):
        if not cubic.on_curve(p, 1e-7) or abs(cubic.hessian_det(p.vec)) > 1e-6 * (
            1.0 + float(np.abs(cubic.hessian_matrix(p.vec)).max()) ** 3
        ):
            raise FewerThanNineError(f"inflection candidate {i} failed residuals")
        for j in range(i):
            if p.close_to(pts[j], 1e-6):
                raise FewerThanNineError("inflection points collided")
    return pts
