"""Laurent data of the Szego kernel along the diagonal.

Writing ``s(x, x + u) = c_{-1}/u + c_0 + c_1 u + O(u^2)``, the coefficients
are extracted by the trapezoidal rule on a small circle around ``u = 0``.
For the torus kernel::

    c_{-1} = 1
    c_0    = theta'(z) / theta(z)
    c_1    = theta''(z) / (2 theta(z)) - theta1'''(0) / (6 theta1'(0))

and by the heat equation ``theta'' = 4 pi i d(theta)/d(tau)`` the quantity
``c_1 - 2 pi i dlog(theta)/d(tau)`` does not depend on ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_POLICY, TruncationPolicy, validate_riemann_matrix
from .curves import BundlePoint, DecomposableBundle, Sphere, Torus, as_bundle, check_point
from .errors import AliasingDetected, InvalidInput, OnThetaDivisor, ZeroNotSimple
from .kernels import normalized_szego, szego_line
from .theta import theta, theta1

DEFAULT_RING_RADIUS = 1e-2
DEFAULT_SAMPLES = 64
ALIAS_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DiagonalExpansion:
    """Coefficients ``(c_{-1}, c_0, c_1)``; matrices for bundles of rank > 1."""

    c_minus1: complex | np.ndarray
    c0: complex | np.ndarray
    c1: complex | np.ndarray
    x: complex
    z: complex | tuple[complex, ...] | None
    tau: complex | None
    ring_radius: float = DEFAULT_RING_RADIUS
    samples: int = DEFAULT_SAMPLES

    def as_tuple(self):
        return self.c_minus1, self.c0, self.c1


def laurent_coefficients(func, ring_radius: float, samples: int, orders=(-1, 0, 1)) -> np.ndarray:
    """Coefficients of ``u**k`` in the Laurent series of ``func`` about 0.

    ``func`` receives an array of points on the circle ``|u| = ring_radius``.
    """
    k = np.arange(samples)
    u = ring_radius * np.exp(2j * np.pi * k / samples)
    vals = np.asarray(func(u), dtype=complex)
    return np.array([np.mean(vals * u ** (-order)) for order in orders])


def _guarded_coefficients(func, ring_radius, samples, alias_tolerance):
    coarse = laurent_coefficients(func, ring_radius, samples)
    fine = laurent_coefficients(func, ring_radius, 2 * samples)
    drift = np.abs(fine - coarse)
    scale = np.maximum(1.0, np.abs(fine))
    if np.any(drift > alias_tolerance * scale):
        raise AliasingDetected(
            f"doubling contour samples moved coefficients by {drift.max():.3e}"
        )
    return fine


def diagonal_expansion(x, L, curve=None, policy: TruncationPolicy | None = None,
                       ring_radius: float = DEFAULT_RING_RADIUS,
                       samples: int = DEFAULT_SAMPLES, normalized: bool = False,
                       alias_tolerance: float = ALIAS_TOLERANCE) -> DiagonalExpansion:
    """Expand the Szego kernel ``s(x, x + u)`` in ``u``.

    With ``normalized=True`` the normalised kernel ``s * theta(z)`` is
    expanded instead, which is allowed on the theta divisor.
    """
    policy = policy or DEFAULT_POLICY
    curve = curve if curve is not None else Sphere()
    x = check_point(x)
    if samples < 8:
        raise InvalidInput("need at least 8 contour samples")
    if isinstance(curve, Sphere):
        scale = abs(x) if x else 1.0
        if not 0 < ring_radius < 0.1 * max(scale, 1.0):
            raise InvalidInput("ring radius too large")
        c = _guarded_coefficients(lambda u: szego_line(x, x + u, None, curve, policy),
                                  ring_radius, samples, alias_tolerance)
        return DiagonalExpansion(*(complex(v) for v in c), x=x, z=None, tau=None,
                                 ring_radius=ring_radius, samples=samples)
    if not isinstance(curve, Torus):
        raise InvalidInput(f"unsupported curve model {curve!r}")
    if not 0 < ring_radius < 0.1 * curve.min_period():
        raise InvalidInput(
            f"ring radius {ring_radius} not below 0.1 x shortest period {curve.min_period():.4g}"
        )
    bundle = as_bundle(L)
    kernel = normalized_szego if normalized else szego_line
    per_component = []
    for p in bundle.points:
        c = _guarded_coefficients(lambda u, p=p: kernel(x, x + u, p, curve, policy),
                                  ring_radius, samples, alias_tolerance)
        per_component.append(c)
    if bundle.rank == 1:
        cm1, c0, c1 = (complex(c) for c in per_component[0])
        z = bundle.points[0].z
    else:
        arr = np.array(per_component)
        cm1, c0, c1 = (np.diag(arr[:, j]) for j in range(3))
        z = tuple(bundle.zs)
    return DiagonalExpansion(cm1, c0, c1, x=x, z=z, tau=curve.modulus,
                             ring_radius=ring_radius, samples=samples)


def _z_of(L) -> complex:
    if isinstance(L, BundlePoint):
        return L.z
    if isinstance(L, DecomposableBundle):
        if L.rank != 1:
            raise InvalidInput("expected a line bundle")
        return L.points[0].z
    return check_point(L)


def _theta_off_divisor(z, tau, policy):
    th = theta(z, tau, policy=policy)
    if abs(th) <= policy.divisor_epsilon:
        raise OnThetaDivisor(f"bundle point {z} lies on the theta divisor")
    return th


def dlog_theta_z(L, tau, policy: TruncationPolicy | None = None) -> complex:
    """``theta'(z) / theta(z)`` from the differentiated series."""
    policy = policy or DEFAULT_POLICY
    z = _z_of(L)
    th = _theta_off_divisor(z, tau, policy)
    return theta(z, tau, deriv_z=1, policy=policy) / th


def dlog_theta_z_fd(L, tau, policy: TruncationPolicy | None = None, step: float = 1e-5) -> complex:
    """Central finite difference of ``log theta`` in ``z``."""
    policy = policy or DEFAULT_POLICY
    z = _z_of(L)
    th = _theta_off_divisor(z, tau, policy)
    plus = theta(z + step, tau, policy=policy)
    minus = theta(z - step, tau, policy=policy)
    return (plus - minus) / (2 * step * th)


def dlog_theta_tau(L, tau, policy: TruncationPolicy | None = None) -> complex:
    """``d(theta)/d(tau) / theta`` at genus 1, differentiated term by term."""
    policy = policy or DEFAULT_POLICY
    tau = validate_riemann_matrix(tau)
    if tau.genus != 1:
        raise InvalidInput("dlog_theta_tau is implemented for genus 1")
    z = _z_of(L)
    th = _theta_off_divisor(z, tau, policy)
    return theta(z, tau, deriv_tau=True, policy=policy) / th


def extended_offset(tau, policy: TruncationPolicy | None = None) -> complex:
    """``-(1/6) theta1'''(0) / theta1'(0)``: the ``z``-free part of ``c_1``."""
    policy = policy or DEFAULT_POLICY
    d1 = theta1(0, tau, policy, deriv=1)
    d3 = theta1(0, tau, policy, deriv=3)
    return -d3 / (6 * d1)


def find_theta_zero(z_guess, tau, policy: TruncationPolicy | None = None,
                    tol: float = 1e-12, max_iter: int = 60) -> complex:
    """Newton iteration for a zero of the zero-characteristic theta function."""
    policy = policy or DEFAULT_POLICY
    z = complex(z_guess)
    for _ in range(max_iter):
        th = theta(z, tau, policy=policy)
        d = theta(z, tau, deriv_z=1, policy=policy)
        if abs(d) <= policy.divisor_epsilon:
            raise ZeroNotSimple(f"theta' vanishes near {z}")
        step = th / d
        z -= step
        if abs(step) < tol:
            break
    else:
        raise ZeroNotSimple(f"Newton iteration from {z_guess} did not converge")
    if abs(theta(z, tau, deriv_z=1, policy=policy)) <= policy.divisor_epsilon:
        raise ZeroNotSimple(f"zero at {z} is not simple")
    return z


@dataclass
class PoleScan:
    zero: complex
    residue: complex
    offsets: np.ndarray
    values: np.ndarray = field(repr=False)
    symmetric: np.ndarray = field(repr=False)


def log_pole_scan(z_guess, tau, policy: TruncationPolicy | None = None, steps: int = 6,
                  direction: complex = 1.0, x: complex = 0.1, first_offset: float = 1e-2,
                  ring_radius: float = DEFAULT_RING_RADIUS,
                  samples: int = DEFAULT_SAMPLES) -> PoleScan:
    """Residue of the connection coefficient ``c_0`` across a theta zero.

    The zero ``z*`` near ``z_guess`` is located by Newton iteration and the
    line ``z* + t * direction`` is sampled at ``t = +-first_offset / 2**k``.
    ``(z - z*) c_0(z)`` is averaged over each symmetric pair (cancelling the
    linear term) and the last two averages are Richardson-extrapolated.
    """
    policy = policy or DEFAULT_POLICY
    curve = Torus(tau)
    zstar = find_theta_zero(z_guess, curve.tau, policy)
    direction = complex(direction) / abs(direction)
    offsets = first_offset / 2.0 ** np.arange(steps)
    values = np.empty((steps, 2), dtype=complex)
    for k, h in enumerate(offsets):
        for j, sgn in enumerate((1, -1)):
            dz = sgn * h * direction
            c0 = diagonal_expansion(x, zstar + dz, curve, policy, ring_radius, samples).c0
            values[k, j] = dz * c0
    symmetric = values.mean(axis=1)
    if steps >= 2:
        residue = (4 * symmetric[-1] - symmetric[-2]) / 3
    else:
        residue = symmetric[-1]
    return PoleScan(zstar, complex(residue), offsets, values, symmetric)
