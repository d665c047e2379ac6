import numpy as np
import pytest

from elliptica import (
    half_period_values,
    half_periods,
    is_infinite,
    make_lattice,
    weierstrass_invariants,
    wp_pair,
    wp_values,
)

LATTICES = [
    make_lattice(1.0, 1j),
    make_lattice(1.0, np.exp(1j * np.pi / 3.0)),
    make_lattice(1.0, 0.3 + 1.4j),
]


def grid_points(rng, lat, n):
    a = rng.uniform(0.07, 0.93, n)
    b = rng.uniform(0.07, 0.93, n)
    return a * lat.omega1 + b * lat.omega2


@pytest.mark.parametrize("lat", LATTICES)
def test_weierstrass_equation(lat):
    g2, g3 = weierstrass_invariants(lat)
    rng = np.random.default_rng(0)
    zs = grid_points(rng, lat, 100)
    p, pp = wp_values(zs, lat)
    resid = np.abs(pp ** 2 - 4.0 * p ** 3 + g2 * p + g3) / (1.0 + np.abs(p) ** 3)
    assert resid.max() <= 1e-8


@pytest.mark.parametrize("lat", LATTICES)
def test_parity(lat):
    rng = np.random.default_rng(1)
    zs = grid_points(rng, lat, 40)
    p, pp = wp_values(zs, lat)
    pm, ppm = wp_values(-zs, lat)
    scale = 1.0 + np.abs(p)
    assert (np.abs(pm - p) / scale).max() < 1e-10
    assert (np.abs(ppm + pp) / (1.0 + np.abs(pp))).max() < 1e-10


def test_derivative_zero_at_half_periods(generic):
    for b in half_periods(generic):
        _, pp = wp_pair(b.rep, generic)
        assert abs(pp) < 1e-8


def test_pole_leading_term(generic):
    for k in range(3, 9):
        z = 10.0 ** (-k) * (0.6 + 0.8j)
        p, _ = wp_pair(z, generic)
        assert abs(z * z * p - 1.0) < 10.0 ** (-2 * (k - 3) - 1) + 1e-8


def test_pole_returns_infinity(generic):
    p, pp = wp_pair(0.0, generic)
    assert is_infinite(p) and is_infinite(pp)
    p, pp = wp_pair(generic.omega1 + generic.omega2, generic)
    assert is_infinite(p)


def test_half_period_values_are_cubic_roots(generic):
    g2, g3 = weierstrass_invariants(generic)
    for e in half_period_values(generic):
        assert abs(4.0 * e ** 3 - g2 * e - g3) <= 1e-8 * (1.0 + abs(e) ** 3)


def test_methods_agree(generic):
    # laurent series inside its disc and the defining lattice sum are
    # independent of the theta route
    z = 0.31 + 0.43j
    pt, ppt = wp_pair(z, generic)
    pl, ppl = wp_pair(z, generic, method="laurent")
    assert abs(pt - pl) < 1e-9 * (1.0 + abs(pt))
    assert abs(ppt - ppl) < 1e-8 * (1.0 + abs(ppt))
    ps, pps = wp_pair(z, generic, method="sum", radius=150)
    assert abs(pt - ps) < 1e-4 * (1.0 + abs(pt))
    assert abs(ppt - pps) < 1e-4 * (1.0 + abs(ppt))


def test_periodicity(generic):
    rng = np.random.default_rng(2)
    zs = grid_points(rng, generic, 20)
    p0, pp0 = wp_values(zs, generic)
    for w in (generic.omega1, generic.omega2, 3 * generic.omega1 - 2 * generic.omega2):
        p1, pp1 = wp_values(zs + w, generic)
        assert (np.abs(p1 - p0) / (1.0 + np.abs(p0))).max() < 1e-10
        assert (np.abs(pp1 - pp0) / (1.0 + np.abs(pp0))).max() < 1e-10
