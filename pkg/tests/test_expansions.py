import cmath
import math

import numpy as np
import pytest

from szego.curves import DecomposableBundle, Sphere, Torus
from szego.errors import AliasingDetected, InvalidInput, OnThetaDivisor, ZeroNotSimple
from szego.expansions import (
    diagonal_expansion,
    dlog_theta_tau,
    dlog_theta_z,
    dlog_theta_z_fd,
    extended_offset,
    find_theta_zero,
    laurent_coefficients,
    log_pole_scan,
)
from szego.identities import extended_connection_spread
from szego.theta import theta

T = Torus(1j)
Z = 0.37 + 0.21j


def eisenstein_e2(tau, terms=60):
    """E2 = 1 - 24 sum sigma_1(n) q^n, q = exp(2 pi i tau)."""
    q = cmath.exp(2j * math.pi * tau)
    total = 0
    for n in range(1, terms):
        sigma = sum(d for d in range(1, n + 1) if n % d == 0)
        total += sigma * q ** n
    return 1 - 24 * total


def test_laurent_coefficients_exact_on_polynomial():
    c = laurent_coefficients(lambda u: 2 / u + 3 + 5 * u + 7 * u ** 2, 0.1, 16)
    assert np.allclose(c, [2, 3, 5], atol=1e-13)


def test_expansion_example(frozen):
    e = diagonal_expansion(0.1, Z, T, ring_radius=1e-2, samples=64)
    assert abs(e.c_minus1 - 1) < 1e-10
    assert abs(e.c0 - frozen["theta_first_over_theta"]) < 1e-8
    expected_c1 = 0.5 * frozen["theta_second_over_theta"] + frozen["0.0,1.0/c1_offset"]
    assert abs(e.c1 - expected_c1) < 1e-7


def test_sphere_expansion():
    e = diagonal_expansion(1.0, None, Sphere())
    assert abs(e.c_minus1 - 1) < 1e-12 and abs(e.c0) < 1e-12 and abs(e.c1) < 1e-10


def test_matrix_expansion():
    E = DecomposableBundle.of(Z, -0.2 + 0.1j)
    e = diagonal_expansion(0.3, E, T)
    assert np.max(np.abs(e.c_minus1 - np.eye(2))) < 1e-8
    expected = np.diag([dlog_theta_z(z, 1j) for z in E.zs])
    assert np.max(np.abs(e.c0 - expected)) < 1e-7
    assert e.c0[0, 1] == 0


def test_coefficients_independent_of_base_point():
    a = diagonal_expansion(0.1, Z, T)
    b = diagonal_expansion(-0.3 + 0.2j, Z, T)
    assert abs(a.c0 - b.c0) < 1e-9 and abs(a.c1 - b.c1) < 1e-8


def test_dlog_at_origin_vanishes():
    assert abs(dlog_theta_z(0, 1j)) < 1e-15


def test_dlog_matches_finite_difference():
    for z in (Z, -0.1 + 0.3j, 0.2 - 0.25j):
        assert abs(dlog_theta_z(z, 1j) - dlog_theta_z_fd(z, 1j)) < 1e-6


def test_dlog_rejects_divisor():
    with pytest.raises(OnThetaDivisor):
        dlog_theta_z(0.5 + 0.5j, 1j)


def test_heat_equation_ratio():
    rng = np.random.default_rng(2)
    for z in rng.uniform(-0.4, 0.4, 5) + 1j * rng.uniform(-0.3, 0.3, 5):
        ratio = theta(z, 1j, deriv_z=2) / (4j * math.pi * theta(z, 1j, deriv_tau=True))
        assert abs(ratio - 1) < 1e-9


def test_extended_offset_matches_eisenstein_closed_form():
    # theta1'''(0)/theta1'(0) = -pi^2 E2(tau)
    for tau in (1j, 0.5 + 1j, 0.2 + 1.3j, -0.3 + 0.8j):
        assert abs(extended_offset(tau) - math.pi ** 2 * eisenstein_e2(tau) / 6) < 1e-12
    assert abs(extended_offset(1j) - math.pi / 2) < 1e-13


def test_extended_offset_fixture(frozen):
    for key in [k for k in frozen if k.endswith("/c1_offset")]:
        re, im = (float(v) for v in key.split("/")[0].split(","))
        assert abs(extended_offset(complex(re, im)) - frozen[key]) < 1e-12


def test_extended_spread_and_symmetry():
    rng = np.random.default_rng(4)
    zs = list(rng.uniform(-0.4, 0.4, 10) + 1j * rng.uniform(-0.3, 0.3, 10))
    vals, spread = extended_connection_spread(1j, zs)
    assert spread < 1e-7
    flipped, _ = extended_connection_spread(1j, [-z for z in zs])
    assert np.max(np.abs(flipped - vals)) < 1e-9


def test_dlog_tau_even_in_z():
    assert abs(dlog_theta_tau(Z, 1j) - dlog_theta_tau(-Z, 1j)) < 1e-12


def test_ring_radius_guard():
    with pytest.raises(InvalidInput):
        diagonal_expansion(0.1, Z, T, ring_radius=0.2)


def test_aliasing_detected():
    with pytest.raises(AliasingDetected):
        diagonal_expansion(0.1, Z, T, ring_radius=0.09, samples=8)


def test_doubling_samples_is_stable():
    a = diagonal_expansion(0.1, Z, T, samples=64)
    b = diagonal_expansion(0.1, Z, T, samples=128)
    assert max(abs(u - v) for u, v in zip(a.as_tuple(), b.as_tuple())) < 1e-10


def test_find_theta_zero():
    z = find_theta_zero(0.45 + 0.55j, 1j)
    assert abs(z - (0.5 + 0.5j)) < 1e-12


def test_zero_not_simple_when_derivative_vanishes():
    # theta' vanishes at the origin for the zero characteristic
    with pytest.raises(ZeroNotSimple):
        find_theta_zero(0.0, 1j)


def test_log_pole_scan():
    scan = log_pole_scan(0.5 + 0.5j, 1j)
    assert abs(scan.residue - 1) < 1e-6
    assert np.all(np.abs(scan.values - 1) < 0.1)
    scan2 = log_pole_scan(0.5 + 0.5j, 1j, direction=1j)
    assert abs(scan2.residue - 1) < 1e-6


def test_normalized_diagonal_residue_on_divisor():
    zstar = find_theta_zero(0.5 + 0.5j, 1j)
    e = diagonal_expansion(0.1, zstar, T, normalized=True)
    assert abs(e.c_minus1) < 1e-7
    assert abs(e.c0 - theta(zstar, 1j, deriv_z=1)) < 1e-10
