"""Curve and bundle models: the Riemann sphere and complex tori."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_POLICY, RiemannMatrix, TruncationPolicy, validate_riemann_matrix
from .errors import DegenerateFiber, InvalidInput, NonFinite, PoleAtLatticePoint
from .theta import theta, theta1

DIVISOR_EPSILON = DEFAULT_POLICY.divisor_epsilon
RESIDUAL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Sphere:
    """The Riemann sphere in its affine chart; infinity is never evaluated."""

    kind = "sphere"


@dataclass(frozen=True)
class Torus:
    """The elliptic curve ``C / (Z + tau Z)``."""

    tau: RiemannMatrix
    kind = "torus"

    def __post_init__(self):
        tau = validate_riemann_matrix(self.tau)
        if tau.genus != 1:
            raise InvalidInput("a torus needs a genus-1 modulus")
        object.__setattr__(self, "tau", tau)

    @property
    def modulus(self) -> complex:
        return self.tau.scalar

    def min_period(self) -> float:
        """Length of the shortest nonzero lattice vector."""
        t = self.modulus
        best = np.inf
        for n in range(-3, 4):
            for m in range(-3, 4):
                if m or n:
                    best = min(best, abs(m + n * t))
        return float(best)


CurveModel = Sphere | Torus


def check_point(x) -> complex:
    x = complex(x)
    if not cmath.isfinite(x):
        raise NonFinite(f"point {x} is not finite")
    return x


@dataclass(frozen=True)
class BundlePoint:
    """Degree-zero line bundle on the torus, as the argument of theta."""

    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", check_point(self.z))

    def off_theta_divisor(self, tau, policy: TruncationPolicy | None = None) -> bool:
        policy = policy or DEFAULT_POLICY
        return abs(theta(self.z, tau, policy=policy)) > policy.divisor_epsilon


@dataclass(frozen=True)
class DecomposableBundle:
    """Direct sum of degree-zero line bundles."""

    points: tuple[BundlePoint, ...]

    def __post_init__(self):
        pts = tuple(p if isinstance(p, BundlePoint) else BundlePoint(p) for p in self.points)
        if not pts:
            raise InvalidInput("a bundle needs at least one component")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, *zs) -> DecomposableBundle:
        return cls(tuple(zs))

    @property
    def rank(self) -> int:
        return len(self.points)

    @property
    def zs(self) -> list[complex]:
        return [p.z for p in self.points]


def as_bundle(L) -> DecomposableBundle:
    if isinstance(L, DecomposableBundle):
        return L
    if isinstance(L, BundlePoint):
        return DecomposableBundle((L,))
    if isinstance(L, (list, tuple)):
        return DecomposableBundle(tuple(L))
    return DecomposableBundle((BundlePoint(L),))


def _check_off_lattice(u, tau, policy):
    t0 = theta1(u, tau, policy)
    if np.any(np.abs(t0) <= policy.divisor_epsilon):
        raise PoleAtLatticePoint(f"point {u} lies on the period lattice")
    return t0


def weierstrass_p_rel(u, tau, policy: TruncationPolicy | None = None):
    """``-(d/du)^2 log theta1(u)``: Weierstrass p up to an additive constant."""
    policy = policy or DEFAULT_POLICY
    t0 = _check_off_lattice(u, tau, policy)
    t1 = theta1(u, tau, policy, deriv=1)
    t2 = theta1(u, tau, policy, deriv=2)
    l1 = t1 / t0
    return -(t2 / t0 - l1 * l1)


def weierstrass_p_prime_rel(u, tau, policy: TruncationPolicy | None = None):
    """``-(d/du)^3 log theta1(u)``, the derivative of :func:`weierstrass_p_rel`."""
    policy = policy or DEFAULT_POLICY
    t0 = _check_off_lattice(u, tau, policy)
    l1 = theta1(u, tau, policy, deriv=1) / t0
    l2 = theta1(u, tau, policy, deriv=2) / t0
    l3 = theta1(u, tau, policy, deriv=3) / t0
    return -(l3 - 3 * l2 * l1 + 2 * l1 ** 3)


@dataclass(frozen=True)
class SphereCoordinate:
    """``f(zeta) = zeta`` on the sphere."""

    def __call__(self, u):
        return u

    def derivative(self, u):
        return 1.0 + 0 * u

    def zeros(self) -> list[complex]:
        return [0j]


@dataclass(frozen=True)
class WeierstrassShifted:
    """``f(u) = p_rel(u) - p_rel(a)`` on a torus, with simple zeros at ``+-a``."""

    a: complex
    tau: RiemannMatrix
    policy: TruncationPolicy = DEFAULT_POLICY

    def __post_init__(self):
        object.__setattr__(self, "a", check_point(self.a))
        object.__setattr__(self, "tau", validate_riemann_matrix(self.tau))
        if abs(theta1(2 * self.a, self.tau, self.policy)) <= self.policy.divisor_epsilon:
            raise DegenerateFiber(f"a={self.a} is a 2-torsion point; zeros +-a collide")

    def __call__(self, u):
        return weierstrass_p_rel(u, self.tau, self.policy) - self._p_at_a

    def derivative(self, u):
        return weierstrass_p_prime_rel(u, self.tau, self.policy)

    @property
    def _p_at_a(self) -> complex:
        return complex(weierstrass_p_rel(self.a, self.tau, self.policy))

    def zeros(self) -> list[complex]:
        return [self.a, -self.a]


TestFunction = SphereCoordinate | WeierstrassShifted


def zeros_and_df(f, curve=None, policy: TruncationPolicy | None = None
                 ) -> list[tuple[complex, complex]]:
    """Zeros of ``f`` with the derivative of ``f`` there.

    Every returned zero is checked: ``|f(alpha)|`` below the residual
    tolerance and ``|df(alpha)|`` above the divisor threshold.
    """
    policy = policy or DEFAULT_POLICY
    if isinstance(f, SphereCoordinate):
        if curve is not None and not isinstance(curve, Sphere):
            raise InvalidInput("SphereCoordinate lives on the sphere")
        return [(0j, 1 + 0j)]
    if not isinstance(f, WeierstrassShifted):
        raise InvalidInput(f"unsupported test function {f!r}")
    if curve is not None and (not isinstance(curve, Torus) or curve.tau != f.tau):
        raise InvalidInput("test function modulus does not match the curve")
    dfa = complex(f.derivative(f.a))
    out = [(f.a, dfa), (-f.a, -dfa)]
    for alpha, d in out:
        if abs(d) <= policy.divisor_epsilon:
            raise DegenerateFiber(f"df vanishes at zero {alpha}")
        if abs(f(alpha)) >= RESIDUAL_TOLERANCE * (1 + abs(f._p_at_a)):
            raise DegenerateFiber(f"f does not vanish at {alpha}")
    return out
