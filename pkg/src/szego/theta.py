"""Riemann theta functions with characteristics.

Series convention::

    theta[a, b](z, tau) = sum_n exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T (z+b))

Derivatives in ``z`` and ``tau`` are taken term by term. The lattice sum is
centred on the Gaussian peak of the summand and truncated at a radius chosen
from a closed-form tail bound, so the returned value is within
``policy.target_tolerance`` (absolute) of the full series.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from functools import lru_cache

import numpy as np

from .algebra import (
    DEFAULT_POLICY,
    ODD_GENUS_ONE,
    RiemannMatrix,
    ThetaCharacteristic,
    TruncationPolicy,
    validate_riemann_matrix,
)
from .errors import InvalidInput, NonFinite, TruncationBudgetExceeded

MAX_Z_ORDER = 3

_TAIL_SHELLS = 400


def tail_bound(radius: int, genus: int, min_eig: float, center_norm: float,
               peak_log: float, z_order: int = 0, tau_deriv: bool = False) -> float:
    """Upper bound on the summand mass outside a box of half-width ``radius``.

    Every excluded lattice vector is at distance at least ``radius + 1/2``
    from the Gaussian centre. Shells of unit width are counted with the
    crude cube bound ``(2r + 3)**genus``.
    """
    rho = radius + 0.5
    total = 0.0
    for j in range(_TAIL_SHELLS):
        r = rho + j
        log_term = (
            genus * math.log(2 * r + 3)
            - math.pi * min_eig * r * r
            + peak_log
        )
        vnorm = r + 1 + center_norm
        if z_order:
            log_term += z_order * math.log(2 * math.pi * vnorm)
        if tau_deriv:
            log_term += math.log(2 * math.pi * vnorm * vnorm)
        term = math.exp(log_term) if log_term > -745 else 0.0
        total += term
        if j > 4 and term < 1e-30 * total:
            break
        if j > 4 and term == 0.0:
            break
    return total


def required_radius(genus: int, min_eig: float, center_norm: float, peak_log: float,
                    policy: TruncationPolicy, z_order: int = 0,
                    tau_deriv: bool = False) -> int:
    for radius in range(1, policy.max_radius + 1):
        bound = tail_bound(radius, genus, min_eig, center_norm, peak_log, z_order, tau_deriv)
        if bound <= policy.target_tolerance:
            return radius
    raise TruncationBudgetExceeded(
        f"tail bound above {policy.target_tolerance:g} at max_radius={policy.max_radius}"
    )


@lru_cache(maxsize=256)
def _box(genus: int, radius: int) -> np.ndarray:
    axis = np.arange(-radius, radius + 1)
    grids = np.meshgrid(*([axis] * genus), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1).astype(float)


def _as_batch(z, genus: int):
    arr = np.asarray(z, dtype=complex)
    if genus == 1:
        out_shape = arr.shape
        if arr.ndim >= 1 and arr.shape[-1] == 1 and arr.ndim > 1:
            out_shape = arr.shape[:-1]
        return arr.reshape(-1, 1), out_shape
    if arr.shape == () or arr.shape[-1] != genus:
        raise InvalidInput(f"z must have trailing dimension {genus}, got shape {arr.shape}")
    return arr.reshape(-1, genus), arr.shape[:-1]


def _normalize_deriv_z(deriv_z, genus: int) -> tuple[int, ...]:
    if deriv_z is None:
        return ()
    if isinstance(deriv_z, (int, np.integer)):
        if genus != 1:
            raise InvalidInput("integer derivative order is only meaningful for genus 1")
        deriv_z = (0,) * int(deriv_z)
    idx = tuple(int(i) for i in deriv_z)
    if len(idx) > MAX_Z_ORDER:
        raise InvalidInput(f"z-derivative order {len(idx)} exceeds {MAX_Z_ORDER}")
    for i in idx:
        if not 0 <= i < genus:
            raise InvalidInput(f"derivative index {i} out of range for genus {genus}")
    return idx


def _normalize_deriv_tau(deriv_tau, genus: int):
    if deriv_tau is None or deriv_tau is False:
        return None
    if deriv_tau is True:
        if genus != 1:
            raise InvalidInput("deriv_tau=True is only meaningful for genus 1")
        return (0, 0)
    p, q = (int(i) for i in deriv_tau)
    if not (0 <= p < genus and 0 <= q < genus):
        raise InvalidInput(f"tau-derivative index {(p, q)} out of range")
    return (p, q)


def theta(z, tau, char: ThetaCharacteristic | None = None,
          deriv_z: Sequence[int] | int | None = None,
          deriv_tau=None, policy: TruncationPolicy | None = None):
    """Evaluate the Riemann theta function with characteristic.

    Parameters
    ----------
    z : complex, array_like
        Point(s) in ``C^g``. For genus 1 any array of scalars is accepted and
        evaluated elementwise; otherwise the trailing axis has length ``g``.
    tau : RiemannMatrix or array_like
        Period matrix, validated on entry.
    char : ThetaCharacteristic, optional
        Defaults to the zero characteristic.
    deriv_z : sequence of int or int, optional
        Coordinate indices to differentiate along (at most three). For genus 1
        an integer order is accepted.
    deriv_tau : pair of int or bool, optional
        Differentiate once in the entry ``tau[p, q]``; off-diagonal entries
        move symmetrically with their transpose.
    policy : TruncationPolicy, optional

    Returns
    -------
    complex or ndarray
    """
    tau = validate_riemann_matrix(tau)
    policy = policy or DEFAULT_POLICY
    g = tau.genus
    char = char or ThetaCharacteristic.zero(g)
    if char.genus != g:
        raise InvalidInput(f"characteristic genus {char.genus} != matrix genus {g}")
    dz = _normalize_deriv_z(deriv_z, g)
    dt = _normalize_deriv_tau(deriv_tau, g)

    zb, out_shape = _as_batch(z, g)
    if not np.all(np.isfinite(zb)):
        raise NonFinite("z has non-finite entries")
    a = char.a_array()
    w = zb + char.b_array()
    values = _theta_sum(w, a, tau, dz, dt, policy)
    if not np.all(np.isfinite(values)):
        raise NonFinite("theta sum overflowed")
    if out_shape == ():
        return complex(values[0])
    return values.reshape(out_shape)


def _theta_sum(w: np.ndarray, a: np.ndarray, tau: RiemannMatrix, dz, dt,
               policy: TruncationPolicy) -> np.ndarray:
    g = tau.genus
    Y = tau.imag
    Yinv = np.linalg.inv(Y)
    min_eig = tau.min_imag_eigenvalue()
    centers = -(w.imag @ Yinv.T)  # Gaussian peak of the summand in v = n + a
    anchors = np.rint(centers - a)
    out = np.empty(len(w), dtype=complex)
    keys, inverse = np.unique(anchors, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    for k, anchor in enumerate(keys):
        sel = np.nonzero(inverse == k)[0]
        ws = w[sel]
        cs = centers[sel]
        peak_log = float(np.max(np.pi * np.einsum("ij,jk,ik->i", cs, Y, cs)))
        center_norm = float(np.max(np.linalg.norm(cs, axis=1)))
        radius = required_radius(g, min_eig, center_norm, peak_log, policy,
                                 len(dz), dt is not None)
        v = _box(g, radius) + anchor + a
        quad = np.einsum("kj,jl,kl->k", v, tau.entries, v)
        phase = np.pi * 1j * quad[None, :] + 2j * np.pi * (ws @ v.T)
        weights = np.ones(len(v), dtype=complex)
        for i in dz:
            weights = weights * (2j * np.pi * v[:, i])
        if dt is not None:
            p, q = dt
            factor = np.pi * 1j if p == q else 2 * np.pi * 1j
            weights = weights * (factor * v[:, p] * v[:, q])
        out[sel] = np.exp(phase) @ weights
    return out


def theta1(u, tau, policy: TruncationPolicy | None = None, deriv: int = 0,
           deriv_tau: bool = False):
    """Genus-1 odd theta ``-theta[1/2, 1/2](u, tau)``.

    With this sign ``theta1(u) = 2 q**(1/4) sin(pi u) + ...`` where
    ``q = exp(2 pi i tau)``, so ``theta1'(0)`` has positive real part at
    purely imaginary ``tau``.
    """
    tau = validate_riemann_matrix(tau)
    if tau.genus != 1:
        raise InvalidInput("theta1 requires genus 1")
    val = theta(u, tau, ODD_GENUS_ONE, deriv_z=deriv, deriv_tau=deriv_tau or None,
                policy=policy)
    return -val


def theta_quasi_period_factor(z, m, n, tau) -> complex:
    """Automorphy factor of the zero-characteristic theta function.

    ``theta(z + tau m + n) = factor * theta(z)``; the integer shift ``n``
    does not contribute.
    """
    tau = validate_riemann_matrix(tau)
    g = tau.genus
    m = np.asarray(m, dtype=float).reshape(g)
    np.asarray(n, dtype=float).reshape(g)
    zv = np.asarray(z, dtype=complex).reshape(g)
    return complex(np.exp(-np.pi * 1j * (m @ tau.entries @ m) - 2j * np.pi * (m @ zv)))


def shift_by_periods(z, m, n, tau) -> np.ndarray | complex:
    """``z + tau m + n``, returned as a scalar for genus 1."""
    tau = validate_riemann_matrix(tau)
    g = tau.genus
    zv = np.asarray(z, dtype=complex).reshape(g)
    out = zv + tau.entries @ np.asarray(m, dtype=float).reshape(g) + np.asarray(n, dtype=float).reshape(g)
    return complex(out[0]) if g == 1 else out
