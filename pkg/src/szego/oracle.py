"""High-precision reference summation used to freeze regression fixtures.

Deliberately naive: a fixed symmetric box of lattice points summed with
mpmath at elevated working precision. It shares no code with the numpy
engine in :mod:`szego.theta`.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath

DEFAULT_RADIUS = 50
DEFAULT_DPS = 40


def theta_mp(z, tau, a=None, b=None, z_order=0, tau_order=0,
             radius=DEFAULT_RADIUS, dps=DEFAULT_DPS):
    """Reference theta value as an ``mpmath.mpc``.

    ``z``/``a``/``b`` are sequences of length g (or scalars for genus 1),
    ``tau`` a nested list. ``z_order`` differentiates along the first
    coordinate, ``tau_order`` (0 or 1) along ``tau[0][0]``.
    """
    with mpmath.workdps(dps):
        if not isinstance(tau, (list, tuple)):
            tau = [[tau]]
            z = [z]
        g = len(tau)
        z = [mpmath.mpc(complex(v)) if not isinstance(v, mpmath.mpc) else v for v in z]
        T = [[mpmath.mpc(complex(tau[i][j])) for j in range(g)] for i in range(g)]
        a = [mpmath.mpf(0)] * g if a is None else [_mpf(x) for x in _vec(a, g)]
        b = [mpmath.mpf(0)] * g if b is None else [_mpf(x) for x in _vec(b, g)]
        two_pi_i = 2 * mpmath.pi * 1j
        total = mpmath.mpc(0)
        for n in itertools.product(range(-radius, radius + 1), repeat=g):
            v = [n[i] + a[i] for i in range(g)]
            quad = sum(v[i] * T[i][j] * v[j] for i in range(g) for j in range(g))
            lin = sum(v[i] * (z[i] + b[i]) for i in range(g))
            term = mpmath.exp(mpmath.pi * 1j * quad + two_pi_i * lin)
            if z_order:
                term *= (two_pi_i * v[0]) ** z_order
            if tau_order:
                term *= mpmath.pi * 1j * v[0] * v[0]
            total += term
        return +total


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _vec(x, g):
    if isinstance(x, (list, tuple)):
        return list(x)
    return [x] * g


def theta1_mp(u, tau, order=0, radius=DEFAULT_RADIUS, dps=DEFAULT_DPS):
    half = mpmath.mpf(1) / 2
    return -theta_mp(u, tau, [half], [half], z_order=order, radius=radius, dps=dps)


def p_rel_mp(u, tau, radius=DEFAULT_RADIUS, dps=DEFAULT_DPS):
    """``-(log theta1)''`` at ``u``."""
    t0, t1, t2 = (theta1_mp(u, tau, k, radius, dps) for k in range(3))
    with mpmath.workdps(dps):
        return -(t2 / t0 - (t1 / t0) ** 2)


def p_prime_rel_mp(u, tau, radius=DEFAULT_RADIUS, dps=DEFAULT_DPS):
    """``-(log theta1)'''`` at ``u``."""
    t0, t1, t2, t3 = (theta1_mp(u, tau, k, radius, dps) for k in range(4))
    with mpmath.workdps(dps):
        l1 = t1 / t0
        return -(t3 / t0 - 3 * t2 * t1 / t0 ** 2 + 2 * l1 ** 3)


def c1_offset_mp(tau, radius=DEFAULT_RADIUS, dps=DEFAULT_DPS):
    """``-(1/6) theta1'''(0) / theta1'(0)``."""
    d1 = theta1_mp(0, tau, 1, radius, dps)
    d3 = theta1_mp(0, tau, 3, radius, dps)
    with mpmath.workdps(dps):
        return -d3 / (6 * d1)


def szego_line_mp(x, y, z, tau, radius=DEFAULT_RADIUS, dps=DEFAULT_DPS):
    """Torus Szego kernel ``theta(z+y-x) theta1'(0) / (theta(z) theta1(y-x))``."""
    with mpmath.workdps(dps):
        u = mpmath.mpc(complex(y)) - mpmath.mpc(complex(x))
        num = theta_mp(mpmath.mpc(complex(z)) + u, tau, radius=radius, dps=dps)
        den = theta_mp(z, tau, radius=radius, dps=dps)
        e_num = theta1_mp(u, tau, 0, radius, dps)
        e_den = theta1_mp(0, tau, 1, radius, dps)
        return num * e_den / (den * e_num)


def to_complex(value) -> complex:
    return complex(value)
