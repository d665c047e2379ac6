import cmath

import numpy as np

from elliptica import make_lattice, reduce_mod_lattice, theta, theta_shifted


def band_samples(rng, tau, n, imag_factor=1.0):
    re = rng.uniform(-1.0, 1.0, n)
    im = rng.uniform(-imag_factor, imag_factor, n) * tau.imag
    return re + 1j * im


def test_period_one(generic):
    rng = np.random.default_rng(0)
    zs = band_samples(rng, generic.tau, 40)
    t0 = theta(zs, generic)
    t1 = theta(zs + 1.0, generic)
    assert np.abs(t1 - t0).max() < 1e-12 * np.abs(t0).max()


def test_quasi_period_tau(generic):
    tau = generic.tau
    rng = np.random.default_rng(1)
    zs = band_samples(rng, tau, 100, imag_factor=2.0)
    lhs = theta(zs + tau, generic)
    rhs = np.exp(-1j * np.pi * (tau + 2.0 * zs)) * theta(zs, generic)
    assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(rhs).max()


def test_zero_at_half_sum(generic, square, hexagonal):
    for lat in (generic, square, hexagonal):
        h = (1.0 + lat.tau) / 2.0
        assert abs(theta(h, lat)) < 1e-10


def test_even_exact_at_summation_level(generic):
    rng = np.random.default_rng(2)
    zs = band_samples(rng, generic.tau, 25)
    a = theta(zs, generic)
    b = theta(-zs, generic)
    assert (a == b).all()


def test_shifted_zero(generic):
    rng = np.random.default_rng(3)
    for _ in range(8):
        x = reduce_mod_lattice(
            complex(rng.uniform(0, 1) + rng.uniform(0, 1) * generic.tau), generic
        )
        assert abs(theta_shifted(x, x.rep, generic)) < 1e-10


def test_shifted_zero_translate(generic):
    # the base zero of the x = 0 shift sits at 0; its period-1 translate is 1
    assert abs(theta_shifted(0.0, 1.0, generic)) < 1e-10
    assert abs(theta_shifted(0.0, generic.tau, generic)) < 1e-9


def test_shifted_quasi_period_modulus(generic):
    tau = generic.tau
    rng = np.random.default_rng(4)
    for _ in range(20):
        x = reduce_mod_lattice(
            complex(rng.uniform(0, 1) + rng.uniform(0, 1) * tau), generic
        )
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1) * tau.imag)
        lhs = abs(theta_shifted(x, z + tau, generic))
        h = (1.0 + tau) / 2.0
        factor = abs(cmath.exp(-1j * cmath.pi * (tau + 2.0 * (z - h - x.rep))))
        rhs = factor * abs(theta_shifted(x, z, generic))
        assert abs(lhs - rhs) <= 1e-10 * (1.0 + rhs)


def test_truncation_is_converged(generic):
    rng = np.random.default_rng(5)
    zs = band_samples(rng, generic.tau, 30, imag_factor=2.0)
    a = theta(zs, generic, trunc=24)
    b = theta(zs, generic, trunc=40)
    assert np.abs(a - b).max() < 1e-13 * np.abs(b).max()


def test_laws_hold_on_other_lattices():
    for tau in (1j, 0.5 + 0.9j, -0.31 + 1.05j):
        lat = make_lattice(1.0, tau)
        rng = np.random.default_rng(6)
        zs = band_samples(rng, lat.tau, 50, imag_factor=2.0)
        lhs = theta(zs + lat.tau, lat)
        rhs = np.exp(-1j * np.pi * (lat.tau + 2.0 * zs)) * theta(zs, lat)
        assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(rhs).max()
