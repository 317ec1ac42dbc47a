"""Prime forms and Szego kernels on the sphere and on complex tori.

All values are numbers in the coordinate trivialization: ``dz`` for the
canonical bundle, one global branch of ``sqrt(dz)`` for half-forms, and
the diagonal twist normalised so that ``s(x, y) ~ 1 / (y - x)`` near the
diagonal.
"""
from __future__ import annotations

import numpy as np

from .algebra import DEFAULT_POLICY, TruncationPolicy
from .curves import BundlePoint, DecomposableBundle, Sphere, Torus, as_bundle, check_point
from .errors import DiagonalPole, InvalidInput, OnThetaDivisor
from .theta import theta, theta1


def _policy(policy):
    return policy or DEFAULT_POLICY


def _bundle_z(L) -> complex:
    if isinstance(L, BundlePoint):
        return L.z
    if isinstance(L, DecomposableBundle):
        if L.rank != 1:
            raise InvalidInput("expected a line bundle")
        return L.points[0].z
    return check_point(L)


def prime_form(x, y, curve, policy: TruncationPolicy | None = None):
    """``E(x, y)``: ``y - x`` on the sphere, ``theta1(y-x)/theta1'(0)`` on a torus."""
    policy = _policy(policy)
    u = _difference(x, y)
    if isinstance(curve, Sphere):
        return u
    _require_torus(curve)
    if np.ndim(u) == 0 and u == 0:
        return 0j  # odd in y - x
    return theta1(u, curve.tau, policy) / theta1(0, curve.tau, policy, deriv=1)


def _difference(x, y):
    u = np.asarray(y, dtype=complex) - np.asarray(x, dtype=complex)
    return complex(u) if u.ndim == 0 else u


def _require_torus(curve):
    if not isinstance(curve, Torus):
        raise InvalidInput(f"unsupported curve model {curve!r}")


def _check_off_divisor(z, curve, policy, component=None) -> complex:
    th = theta(z, curve.tau, policy=policy)
    if abs(th) <= policy.divisor_epsilon:
        where = "" if component is None else f" (component {component})"
        raise OnThetaDivisor(f"bundle point {z} lies on the theta divisor{where}", component)
    return th


def _check_off_diagonal(x, y, curve, policy):
    e = prime_form(x, y, curve, policy)
    if np.any(np.abs(e) <= policy.divisor_epsilon):
        raise DiagonalPole("kernel requested on the diagonal")
    return e


def szego_line(x, y, L=None, curve=None, policy: TruncationPolicy | None = None):
    """Abelian Szego kernel.

    On the sphere the bundle is the square root of the canonical bundle and
    the kernel is ``1/(y - x)``. On a torus::

        s(x, y) = theta(z + y - x) / (theta(z) E(x, y))

    with ``z`` the bundle point and ``theta`` of zero characteristic.
    ``x`` and ``y`` may be arrays (broadcast together).
    """
    policy = _policy(policy)
    curve = curve if curve is not None else Sphere()
    if isinstance(curve, Sphere):
        e = _check_off_diagonal(x, y, curve, policy)
        return 1 / e
    _require_torus(curve)
    z = _bundle_z(L)
    th_z = _check_off_divisor(z, curve, policy)
    e = _check_off_diagonal(x, y, curve, policy)
    num = theta(z + _difference(x, y), curve.tau, policy=policy)
    return num / (th_z * e)


def szego_matrix(x, y, E, curve=None, policy: TruncationPolicy | None = None) -> np.ndarray:
    """Szego kernel of a decomposable bundle as an ``n x n`` diagonal matrix.

    On the sphere ``E`` may be an integer rank (copies of the half-canonical
    bundle) or a bundle whose points are ignored.
    """
    policy = _policy(policy)
    curve = curve if curve is not None else Sphere()
    if isinstance(curve, Sphere):
        n = E if isinstance(E, int) else as_bundle(E).rank
        return np.eye(n, dtype=complex) * complex(szego_line(x, y, None, curve, policy))
    E = as_bundle(E)
    for i, p in enumerate(E.points):
        _check_off_divisor(p.z, curve, policy, component=i)
    return np.diag([complex(szego_line(x, y, p, curve, policy)) for p in E.points])


def normalized_szego(x, y, L, curve, policy: TruncationPolicy | None = None):
    """``theta(z + y - x) / E(x, y)``; defined for every bundle point."""
    policy = _policy(policy)
    _require_torus(curve)
    z = _bundle_z(L)
    e = _check_off_diagonal(x, y, curve, policy)
    return theta(z + _difference(x, y), curve.tau, policy=policy) / e


def det_szego_vs_theta_pullback(x, y, E, curve, policy: TruncationPolicy | None = None
                                ) -> tuple[complex, complex]:
    """Both sides of the determinant formula on a decomposable bundle.

    ``lhs`` is the determinant of the matrix kernel; ``rhs`` is the theta
    pullback ``prod theta(z_i + y - x)`` over ``prod theta(z_i) E(x,y)**n``.
    """
    policy = _policy(policy)
    _require_torus(curve)
    E = as_bundle(E)
    lhs = complex(np.linalg.det(szego_matrix(x, y, E, curve, policy)))
    u = complex(y) - complex(x)
    zs = np.array(E.zs)
    num = np.prod(theta(zs + u, curve.tau, policy=policy))
    den = np.prod(theta(zs, curve.tau, policy=policy))
    rhs = complex(num / (den * complex(prime_form(x, y, curve, policy)) ** E.rank))
    return lhs, rhs
