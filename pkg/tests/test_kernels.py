import numpy as np
import pytest

from szego.curves import DecomposableBundle, Sphere, Torus
from szego.errors import DiagonalPole, OnThetaDivisor
from szego.expansions import find_theta_zero
from szego.kernels import (
    det_szego_vs_theta_pullback,
    normalized_szego,
    prime_form,
    szego_line,
    szego_matrix,
)
from szego.theta import theta

T = Torus(1j)
rng = np.random.default_rng(7)


def _pt():
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))


def test_prime_form_diagonal():
    assert prime_form(0.2, 0.2, T) == 0
    assert prime_form(0.2, 0.2, Sphere()) == 0


def test_prime_form_antisymmetric():
    for _ in range(10):
        x, y = _pt(), _pt()
        assert abs(prime_form(x, y, T) + prime_form(y, x, T)) < 1e-11


def test_prime_form_first_order():
    x, h = 0.13 - 0.07j, 1e-4
    assert abs(prime_form(x, x + h, T) / h - 1) < 1e-7


def test_sphere_kernel_example():
    assert szego_line(0, 1, curve=Sphere()) == 1


def test_torus_kernel_fixture(frozen):
    assert szego_line(0.1, 0.45, 0.37 + 0.21j, T) == pytest.approx(frozen["szego_line"], rel=1e-13)


def test_residue_normalization_limit():
    z, x = 0.37 + 0.21j, 0.05 + 0.1j
    for h in (1e-4, 1e-4j, -1e-4):
        assert abs(h * szego_line(x, x + h, z, T) - 1) < 1e-3
    # symmetric difference cancels the connection term
    h = 1e-4
    avg = 0.5 * (h * szego_line(x, x + h, z, T) + (-h) * szego_line(x, x - h, z, T))
    assert abs(avg - 1) < 1e-7


def test_on_divisor_rejected():
    with pytest.raises(OnThetaDivisor):
        szego_line(0.1, 0.3, 0.5 + 0.5j, T)


def test_diagonal_rejected():
    with pytest.raises(DiagonalPole):
        szego_line(0.1, 0.1, 0.2, T)
    with pytest.raises(DiagonalPole):
        szego_line(0.1, 1.1, 0.2, T)


def test_matrix_rank_one_reduces():
    m = szego_matrix(0.1, 0.4, DecomposableBundle.of(0.2 + 0.1j), T)
    assert m.shape == (1, 1)
    assert m[0, 0] == szego_line(0.1, 0.4, 0.2 + 0.1j, T)


def test_matrix_equal_blocks_scalar():
    m = szego_matrix(0.1, 0.4, DecomposableBundle.of(0.2 + 0.1j, 0.2 + 0.1j), T)
    assert m[0, 1] == 0 and m[1, 0] == 0
    assert m[0, 0] == m[1, 1]


def test_matrix_residue_identity():
    E = DecomposableBundle.of(0.2 + 0.1j, -0.3 + 0.2j)
    x, h = 0.1, 1e-4
    avg = 0.5 * (h * szego_matrix(x, x + h, E, T) + (-h) * szego_matrix(x, x - h, E, T))
    assert np.max(np.abs(avg - np.eye(2))) < 1e-7


def test_matrix_reports_component():
    with pytest.raises(OnThetaDivisor) as info:
        szego_matrix(0.1, 0.4, DecomposableBundle.of(0.1, 0.5 + 0.5j), T)
    assert info.value.component == 1


def test_normalized_consistency():
    for _ in range(10):
        x, y, z = _pt(), _pt(), _pt()
        lhs = normalized_szego(x, y, z, T)
        rhs = szego_line(x, y, z, T) * theta(z, 1j)
        assert abs(lhs - rhs) < 1e-11 * (1 + abs(rhs))


def test_normalized_on_divisor():
    zstar = find_theta_zero(0.5 + 0.5j, 1j)
    x, y = 0.1, 0.35 + 0.1j
    val = normalized_szego(x, y, zstar, T)
    assert np.isfinite(val)
    assert val == pytest.approx(theta(zstar + y - x, 1j) / prime_form(x, y, T), rel=1e-14)
    slope = abs(theta(zstar, 1j, deriv_z=1))
    for h in (1e-3, 1e-5, 1e-7):
        assert abs(h * normalized_szego(x, x + h, zstar, T)) < 2 * slope * h


def test_duality_transpose():
    for _ in range(10):
        x, y, z = _pt(), _pt(), _pt()
        lhs = szego_line(x, y, z, T)
        rhs = -szego_line(y, x, -z, T)
        assert abs(lhs - rhs) < 1e-10 * (1 + abs(lhs))


def test_translation_invariance():
    for _ in range(10):
        x, y, z, c = _pt(), _pt(), _pt(), _pt()
        a = szego_line(x, y, z, T)
        b = szego_line(x + c, y + c, z, T)
        assert abs(a - b) < 1e-9 * (1 + abs(a))


def test_determinant_rank_one_exact():
    lhs, rhs = det_szego_vs_theta_pullback(0.1, 0.4, DecomposableBundle.of(0.2 + 0.1j), T)
    assert abs(lhs - rhs) < 1e-13 * abs(rhs)


def test_determinant_rank_two():
    for _ in range(10):
        E = DecomposableBundle.of(_pt(), _pt())
        lhs, rhs = det_szego_vs_theta_pullback(_pt(), _pt(), E, T)
        assert abs(lhs - rhs) < 1e-10 * (1 + abs(rhs))


def test_determinant_near_divisor_ratio():
    zstar = find_theta_zero(0.5 + 0.5j, 1j)
    for eps in (1e-3, 1e-5, 1e-7):
        E = DecomposableBundle.of(zstar + eps, 0.1 + 0.2j, -0.2 - 0.1j)
        lhs, rhs = det_szego_vs_theta_pullback(0.1, 0.35, E, T)
        assert abs(lhs) > 1 / eps * 1e-3
        assert abs(lhs / rhs - 1) < 1e-6


def test_kernel_quasi_periodic_under_lattice_shift():
    # s(x + 1, y) = -s(x, y): theta1 is antiperiodic under u -> u + 1
    x, y, z = 0.1, 0.4 + 0.1j, 0.2 - 0.15j
    assert abs(szego_line(x + 1, y, z, T) + szego_line(x, y, z, T)) < 1e-10
