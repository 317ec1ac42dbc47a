"""Numerical verification of the kernel identities.

Every ``verify_*`` function returns an :class:`IdentityReport`. Errors are
measured relative to ``1 + max(|lhs|, |rhs|)`` so values that blow up near
a divisor cannot hide a genuine mismatch. Random instances come from a
``numpy`` generator seeded by the caller, which makes reports reproducible
bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import DEFAULT_POLICY, TruncationPolicy, enumerate_characteristics, validate_riemann_matrix
from .curves import (
    DecomposableBundle,
    Sphere,
    SphereCoordinate,
    Torus,
    WeierstrassShifted,
    as_bundle,
    zeros_and_df,
)
from .errors import InvalidInput, SampleTooCloseToSingularity, SzegoError
from .expansions import (
    DEFAULT_RING_RADIUS,
    DEFAULT_SAMPLES,
    diagonal_expansion,
    dlog_theta_tau,
    dlog_theta_z,
    extended_offset,
    find_theta_zero,
    log_pole_scan,
)
from .kernels import det_szego_vs_theta_pullback, normalized_szego, szego_matrix
from .theta import shift_by_periods, theta, theta_quasi_period_factor

SAMPLE_MARGIN = 1e-3


@dataclass
class InstanceRecord:
    inputs: dict
    lhs: object = None
    rhs: object = None
    abs_error: float | None = None
    rel_error: float | None = None
    error: str | None = None


@dataclass
class IdentityReport:
    identity_name: str
    instances: int
    max_abs_error: float
    max_rel_error: float
    tolerance: float
    passed: bool
    seed: int | None = None
    records: list[InstanceRecord] = field(default_factory=list)

    def to_dict(self, include_records: bool = True) -> dict:
        out = {
            "identity_name": self.identity_name,
            "instances": self.instances,
            "max_abs_error": _finite_or_none(self.max_abs_error),
            "max_rel_error": _finite_or_none(self.max_rel_error),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seed": self.seed,
        }
        if include_records:
            out["records"] = [_encode(asdict(r)) for r in self.records]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> IdentityReport:
        records = [InstanceRecord(**_decode(r)) for r in data.get("records", [])]
        return cls(
            identity_name=data["identity_name"],
            instances=data["instances"],
            max_abs_error=_none_to_inf(data["max_abs_error"]),
            max_rel_error=_none_to_inf(data["max_rel_error"]),
            tolerance=data["tolerance"],
            passed=data["passed"],
            seed=data.get("seed"),
            records=records,
        )


def _finite_or_none(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _none_to_inf(x):
    return math.inf if x is None else x


def _encode(obj):
    """JSON-ready copy: complex numbers become ``{"re", "im"}`` pairs."""
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_encode(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        if set(obj) == {"re", "im"}:
            return complex(obj["re"], obj["im"])
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def relative_error(lhs, rhs) -> tuple[float, float]:
    lhs = np.asarray(lhs, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    abs_err = float(np.max(np.abs(lhs - rhs)))
    scale = 1 + max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return abs_err, abs_err / scale


class _Collector:
    def __init__(self):
        self.records: list[InstanceRecord] = []

    def add(self, inputs, lhs, rhs):
        abs_err, rel_err = relative_error(lhs, rhs)
        self.records.append(InstanceRecord(_plain(inputs), _plain(lhs), _plain(rhs),
                                           abs_err, rel_err))

    def fail(self, inputs, exc: Exception):
        self.records.append(InstanceRecord(_plain(inputs), error=f"{type(exc).__name__}: {exc}"))

    def report(self, name, tolerance, seed=None) -> IdentityReport:
        return build_report(name, self.records, tolerance, seed)


def _plain(v):
    """Plain Python values: arrays and tuples become lists, numpy scalars unwrap."""
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (list, tuple)):
        return [_plain(u) for u in v]
    if isinstance(v, dict):
        return {k: _plain(u) for k, u in v.items()}
    if isinstance(v, (complex, np.complexfloating)):
        return complex(v)
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    return v


def build_report(name, records, tolerance, seed=None) -> IdentityReport:
    records = [InstanceRecord(**_plain(asdict(r))) for r in records]
    errs = [r.rel_error for r in records if r.error is None]
    abss = [r.abs_error for r in records if r.error is None]
    failed = any(r.error is not None for r in records)
    max_rel = math.inf if failed or not errs else max(errs)
    max_abs = math.inf if failed or not abss else max(abss)
    passed = bool(records) and max_rel <= tolerance
    return IdentityReport(name, len(records), max_abs, max_rel, tolerance, passed, seed, records)


# --- composition sign ------------------------------------------------------

def sphere_residue_oracle(x: complex, y: complex) -> dict:
    """Closed-form residues of ``s(x,a) s(a,y) / f(a) da`` on the sphere, ``f(a) = a``.

    With ``s(x, y) = 1/(y - x)`` the form is ``da / ((a - x)(y - a) a)``.
    Its residues at ``a = x``, ``a = y`` and infinity are explicit; the
    residue theorem then fixes the residue at the zero of ``f``, which is
    the composition sum.
    """
    res_x = 1 / ((y - x) * x)
    res_y = -1 / ((y - x) * y)
    res_inf = 0.0  # the form decays like a**-3
    zero_sum = -(res_x + res_y + res_inf)
    rhs = (y - x) / (x * y) * (1 / (y - x))
    return {"res_x": res_x, "res_y": res_y, "res_inf": res_inf, "zero_sum": zero_sum, "rhs": rhs}


@lru_cache(maxsize=None)
def composition_sign() -> int:
    """Sign relating the raw kernel composition sum to the displayed identity.

    Calibrated once on the sphere instance ``x = 1, y = 2`` and then used
    for every curve, bundle and test function.
    """
    data = sphere_residue_oracle(1.0 + 0j, 2.0 + 0j)
    ratio = data["rhs"] / data["zero_sum"]
    sign = round(ratio.real)
    if sign not in (-1, 1) or abs(ratio - sign) > 1e-14:
        raise RuntimeError(f"sphere calibration gave non-sign ratio {ratio}")
    return sign


# --- composition identity --------------------------------------------------

def _kernel(x, y, bundle, curve, policy):
    if isinstance(curve, Sphere):
        return szego_matrix(x, y, bundle.rank if bundle is not None else 1, curve, policy)
    return szego_matrix(x, y, bundle, curve, policy)


def composition_sides(x, y, bundle, f, curve, policy=None):
    """``(lhs, rhs)`` matrices of the composition identity at ``(x, y)``."""
    policy = policy or DEFAULT_POLICY
    sigma = composition_sign()
    fibre = zeros_and_df(f, curve, policy)
    lhs = sum(_kernel(x, a, bundle, curve, policy) @ _kernel(a, y, bundle, curve, policy) / da
              for a, da in fibre)
    fx, fy = complex(f(x)), complex(f(y))
    rhs = (fy - fx) / (fy * fx) * _kernel(x, y, bundle, curve, policy)
    return sigma * lhs, rhs


def degenerate_sides(y, bundle, f, curve, policy=None):
    """``(lhs, rhs)`` of the coincident-point form of the composition identity."""
    policy = policy or DEFAULT_POLICY
    sigma = composition_sign()
    fibre = zeros_and_df(f, curve, policy)
    lhs = sum(_kernel(y, a, bundle, curve, policy) @ _kernel(a, y, bundle, curve, policy) / da
              for a, da in fibre)
    fy = complex(f(y))
    n = lhs.shape[0]
    rhs = complex(f.derivative(y)) / fy ** 2 * np.eye(n)
    return sigma * lhs, rhs


def _lattice_distance(u: complex, curve) -> float:
    if isinstance(curve, Sphere):
        return abs(u)
    t = curve.modulus
    # reduce along the tau direction, then the real direction
    k = round(u.imag / t.imag)
    u = u - k * t
    best = math.inf
    for m in (-1, 0, 1):
        for n in (-1, 0, 1):
            best = min(best, abs(u - n - m * t))
    return best


def _check_margin(points, singular, curve, margin):
    for p in points:
        for s in singular:
            if _lattice_distance(p - s, curve) < margin:
                raise SampleTooCloseToSingularity(f"sample {p} within {margin} of {s}")


def _random_torus_point(rng, curve) -> complex:
    s, t = rng.uniform(-0.5, 0.5, size=2)
    return complex(s + t * curve.modulus)


def _random_pair(rng, curve, singular, margin, avoid_diagonal=True):
    for _ in range(1000):
        if isinstance(curve, Sphere):
            x = complex(*rng.uniform(-2, 2, size=2))
            y = complex(*rng.uniform(-2, 2, size=2))
        else:
            x = _random_torus_point(rng, curve)
            y = _random_torus_point(rng, curve)
        try:
            _check_margin((x, y), singular, curve, margin)
            if avoid_diagonal:
                _check_margin((y,), (x,), curve, margin)
        except SampleTooCloseToSingularity:
            continue
        return x, y
    raise SampleTooCloseToSingularity("could not draw a sample pair")


def _singular_points(f, curve):
    if isinstance(f, SphereCoordinate):
        return [0j]
    return [0j, f.a, -f.a]


def random_bundle(rng, curve, rank, policy=None, min_theta=1e-2) -> DecomposableBundle:
    policy = policy or DEFAULT_POLICY
    zs = []
    while len(zs) < rank:
        z = _random_torus_point(rng, curve)
        if abs(theta(z, curve.tau, policy=policy)) > min_theta:
            zs.append(z)
    return DecomposableBundle(tuple(zs))


def verify_composition_identity(curve, L, f, sample_pairs=100, tolerance=1e-8, seed=0,
                                policy: TruncationPolicy | None = None,
                                margin: float = 0.05, extra_pairs=()) -> IdentityReport:
    """Check the composition identity on random ``(x, y)`` pairs.

    ``sample_pairs`` may be an integer (number of random pairs) or an
    explicit sequence of pairs. ``margin`` is the minimum distance kept from
    the diagonal, the zeros of ``f`` and its poles.
    """
    policy = policy or DEFAULT_POLICY
    bundle = None if L is None else (as_bundle(L) if not isinstance(L, int) else L)
    if isinstance(bundle, int):
        bundle = DecomposableBundle(tuple([0j] * bundle))
    rng = np.random.default_rng(seed)
    singular = _singular_points(f, curve)
    if isinstance(sample_pairs, int):
        pairs = [_random_pair(rng, curve, singular, margin) for _ in range(sample_pairs)]
    else:
        pairs = list(sample_pairs)
    pairs = list(extra_pairs) + pairs
    col = _Collector()
    for x, y in pairs:
        inputs = {"x": complex(x), "y": complex(y)}
        try:
            _check_margin((x, y), singular, curve, SAMPLE_MARGIN)
            lhs, rhs = composition_sides(x, y, bundle, f, curve, policy)
            col.add(inputs, lhs, rhs)
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("composition", tolerance, seed)


def verify_degenerate_identity(curve, L, f, sample_points=100, tolerance=1e-7, seed=0,
                               policy: TruncationPolicy | None = None, margin: float = 0.05,
                               limit_step: float = 1e-4, limit_tolerance: float = 1e-5
                               ) -> tuple[IdentityReport, IdentityReport]:
    """Coincident-point identity, plus its agreement with the ``x -> y`` limit.

    Returns two reports: the identity itself and the continuity check, which
    compares the degenerate left side with the two-sided average of the
    non-degenerate left side at ``x = y +- limit_step``.
    """
    policy = policy or DEFAULT_POLICY
    bundle = None if L is None else as_bundle(L)
    rng = np.random.default_rng(seed)
    singular = _singular_points(f, curve)
    if isinstance(sample_points, int):
        points = [_random_pair(rng, curve, singular, margin, avoid_diagonal=False)[1]
                  for _ in range(sample_points)]
    else:
        points = list(sample_points)
    ident, limit = _Collector(), _Collector()
    for y in points:
        inputs = {"y": complex(y)}
        try:
            _check_margin((y,), singular, curve, SAMPLE_MARGIN)
            lhs, rhs = degenerate_sides(y, bundle, f, curve, policy)
            ident.add(inputs, lhs, rhs)
            two_sided = 0.5 * sum(composition_sides(y + s * limit_step, y, bundle, f, curve, policy)[0]
                                  for s in (1, -1))
            limit.add(inputs, two_sided, lhs)
        except SzegoError as exc:
            ident.fail(inputs, exc)
            limit.fail(inputs, exc)
    return (ident.report("degenerate", tolerance, seed),
            limit.report("degenerate-limit", limit_tolerance, seed))


# --- determinant theorem ---------------------------------------------------

def verify_determinant_theorem(curve, ranks=(1, 2, 3), instances=100, tolerance=1e-9, seed=0,
                               policy: TruncationPolicy | None = None,
                               bundle=None) -> IdentityReport:
    """Determinant of the matrix kernel against the theta pullback.

    With ``bundle`` given, every instance uses it (only random ``x, y``).
    """
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    rank_list = [as_bundle(bundle).rank] if bundle is not None else list(ranks)
    for rank in rank_list:
        for _ in range(instances):
            E = as_bundle(bundle) if bundle is not None else random_bundle(rng, curve, rank, policy)
            x, y = _random_pair(rng, curve, [], 0.05)
            inputs = {"rank": rank, "z": E.zs, "x": x, "y": y}
            try:
                lhs, rhs = det_szego_vs_theta_pullback(x, y, E, curve, policy)
                col.add(inputs, lhs, rhs)
            except SzegoError as exc:
                col.fail(inputs, exc)
    return col.report("determinant", tolerance, seed)


def determinant_near_divisor(curve, policy=None, seed=0, offsets=None, tolerance=1e-6,
                             x=0.1 + 0.05j, y=0.35 - 0.1j) -> IdentityReport:
    """Rank-3 determinant ratio as one component approaches the theta divisor.

    Each record compares ``lhs / rhs`` with 1; both sides individually grow
    like the inverse distance to the divisor.
    """
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    zstar = find_theta_zero(0.5 + 0.5 * curve.modulus, curve.tau, policy)
    others = random_bundle(rng, curve, 2, policy).zs
    offsets = offsets if offsets is not None else [10.0 ** -k for k in range(1, 8)]
    col = _Collector()
    direction = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    for eps in offsets:
        E = DecomposableBundle.of(zstar + eps * direction, *others)
        inputs = {"offset": eps, "z": E.zs}
        try:
            lhs, rhs = det_szego_vs_theta_pullback(x, y, E, curve, policy)
            col.add(inputs, lhs / rhs, 1.0)
            col.records[-1].inputs["lhs"] = lhs
            col.records[-1].inputs["rhs"] = rhs
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("determinant-near-divisor", tolerance, seed)


# --- diagonal expansions ---------------------------------------------------

def verify_residue_normalization(curve, ranks=(1, 2, 3), instances=100, tolerance=1e-8, seed=0,
                                 policy=None, ring_radius=DEFAULT_RING_RADIUS,
                                 samples=DEFAULT_SAMPLES, bundle=None) -> IdentityReport:
    """``c_{-1}`` equals the identity on random decomposable bundles."""
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    if bundle is not None:
        plan = [as_bundle(bundle)] * instances
    else:
        plan = [random_bundle(rng, curve, ranks[i % len(ranks)], policy) for i in range(instances)]
    for E in plan:
        x = _random_torus_point(rng, curve)
        inputs = {"z": E.zs, "x": x}
        try:
            exp = diagonal_expansion(x, E, curve, policy, ring_radius, samples)
            col.add(inputs, exp.c_minus1, np.eye(E.rank) if E.rank > 1 else 1.0)
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("residue-normalization", tolerance, seed)


def verify_connection_identification(curve, instances=100, tolerance=1e-7, seed=0, policy=None,
                                     ring_radius=DEFAULT_RING_RADIUS, samples=DEFAULT_SAMPLES,
                                     bundle=None) -> IdentityReport:
    """``c_0`` of the expansion against ``dlog theta`` in ``z``."""
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    zs = list(as_bundle(bundle).zs) if bundle is not None else \
        random_bundle(rng, curve, instances, policy).zs
    col = _Collector()
    for z in zs:
        x = _random_torus_point(rng, curve)
        inputs = {"z": z, "x": x}
        try:
            c0 = diagonal_expansion(x, z, curve, policy, ring_radius, samples).c0
            col.add(inputs, c0, dlog_theta_z(z, curve.tau, policy))
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("connection-2delta", tolerance, seed)


def verify_torsor_difference(curve, instances=100, tolerance=1e-8, seed=0, policy=None,
                             ring_radius=DEFAULT_RING_RADIUS, samples=DEFAULT_SAMPLES
                             ) -> IdentityReport:
    """Differences of ``c_0`` between two bundles match differences of ``dlog theta``."""
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    for _ in range(instances):
        z, zp = random_bundle(rng, curve, 2, policy).zs
        x = _random_torus_point(rng, curve)
        inputs = {"z": z, "z_prime": zp, "x": x}
        try:
            d_exp = (diagonal_expansion(x, z, curve, policy, ring_radius, samples).c0
                     - diagonal_expansion(x, zp, curve, policy, ring_radius, samples).c0)
            d_log = dlog_theta_z(z, curve.tau, policy) - dlog_theta_z(zp, curve.tau, policy)
            col.add(inputs, d_exp, d_log)
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("connection-torsor", tolerance, seed)


def extended_connection_spread(tau, zs, policy=None, x=0.1, ring_radius=DEFAULT_RING_RADIUS,
                               samples=DEFAULT_SAMPLES) -> tuple[np.ndarray, float]:
    """Values of ``c_1 - 2 pi i dlog(theta)/d(tau)`` at each ``z`` and their spread."""
    policy = policy or DEFAULT_POLICY
    curve = Torus(tau)
    vals = np.array([
        diagonal_expansion(x, z, curve, policy, ring_radius, samples).c1
        - 2j * np.pi * dlog_theta_tau(z, curve.tau, policy)
        for z in zs
    ])
    spread = float(np.max(np.abs(vals[:, None] - vals[None, :])))
    return vals, spread


def verify_extended_connection(taus, points_per_tau=10, tolerance=1e-7, seed=0, policy=None,
                               ring_radius=DEFAULT_RING_RADIUS, samples=DEFAULT_SAMPLES,
                               reference=None) -> IdentityReport:
    """z-independence of ``c_1 - 2 pi i dlog(theta)/d(tau)`` at each ``tau``.

    Each record compares the measured constants (their mean over ``z``) with
    ``reference[tau]`` when supplied, else with :func:`extended_offset`; the
    spread over ``z`` is folded into the error.
    """
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    for tau in taus:
        curve = Torus(tau)
        zs = random_bundle(rng, curve, points_per_tau, policy).zs
        inputs = {"tau": complex(tau), "z": zs}
        try:
            vals, spread = extended_connection_spread(curve.tau, zs, policy,
                                                      ring_radius=ring_radius, samples=samples)
            ref = reference[complex(tau)] if reference is not None else \
                extended_offset(curve.tau, policy)
            worst = vals[np.argmax(np.abs(vals - ref))]
            col.add(inputs | {"spread": spread}, worst, ref)
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("extended-connection-3delta", tolerance, seed)


# --- theta divisor ---------------------------------------------------------

def verify_divisor_behavior(curve, policy=None, z_guess=None, x=0.1 + 0.05j, y=0.4 - 0.1j,
                            path_samples=200, path_halfwidth=0.1, tolerance=1e-6,
                            ring_radius=DEFAULT_RING_RADIUS, samples=DEFAULT_SAMPLES,
                            seed=0) -> IdentityReport:
    """Log-pole residue, boundedness of the normalised kernel, and its diagonal vanishing.

    Three records: the residue estimate against 1; the maximum of ``|s_bar|``
    over ``path_samples`` path points against the maximum over twice as many
    (stability under refinement, compared relatively); and the diagonal
    residue of ``s_bar`` at the zero against 0.
    """
    policy = policy or DEFAULT_POLICY
    z_guess = z_guess if z_guess is not None else 0.5 + 0.5 * curve.modulus
    col = _Collector()
    try:
        scan = log_pole_scan(z_guess, curve.tau, policy, ring_radius=ring_radius,
                             samples=samples)
    except SzegoError as exc:
        col.fail({"check": "log-pole-residue"}, exc)
        return col.report("divisor-behavior", tolerance, seed)
    zstar = scan.zero
    col.add({"check": "log-pole-residue", "zero": zstar}, scan.residue, 1.0)

    def path_max(n):
        t = np.linspace(-path_halfwidth, path_halfwidth, n)
        return max(abs(normalized_szego(x, y, zstar + s, curve, policy)) for s in t)

    coarse, fine = path_max(path_samples), path_max(2 * path_samples + 1)
    col.records.append(InstanceRecord(
        {"check": "normalized-bounded", "zero": zstar, "samples": path_samples},
        coarse, fine, abs(fine - coarse),
        abs(fine - coarse) / fine if math.isfinite(fine) and fine > 0 else math.inf,
    ))
    res = diagonal_expansion(x, zstar, curve, policy, ring_radius, samples, normalized=True)
    col.add({"check": "normalized-diagonal-residue", "zero": zstar}, res.c_minus1, 0.0)
    return col.report("divisor-behavior", tolerance, seed)


# --- theta engine invariants -----------------------------------------------

def random_riemann_matrix(rng, genus):
    """Diagonally dominant imaginary part plus a real symmetric part."""
    if genus == 1:
        return validate_riemann_matrix(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.6)))
    off = rng.uniform(-0.2, 0.2, size=(genus, genus))
    Y = np.diag(rng.uniform(1.0, 1.6, size=genus)) + (off + off.T) / 2 * (1 - np.eye(genus))
    X = rng.uniform(-0.5, 0.5, size=(genus, genus))
    return validate_riemann_matrix((X + X.T) / 2 + 1j * Y)


def _random_z(rng, genus):
    return rng.uniform(-0.5, 0.5, size=genus) + 1j * rng.uniform(-0.3, 0.3, size=genus)


def verify_quasi_periodicity(genus, instances=100, tolerance=1e-10, seed=0, policy=None,
                             max_shift=2) -> IdentityReport:
    """``theta(z + tau m + n) / factor`` against ``theta(z)``."""
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    for _ in range(instances):
        tau = random_riemann_matrix(rng, genus)
        z = _random_z(rng, genus)
        m = rng.integers(-max_shift, max_shift + 1, size=genus)
        n = rng.integers(-max_shift, max_shift + 1, size=genus)
        inputs = {"tau": tau.entries, "z": z, "m": m, "n": n}
        try:
            shifted = theta(shift_by_periods(z, m, n, tau), tau, policy=policy)
            factor = theta_quasi_period_factor(z, m, n, tau)
            col.add(inputs, shifted / factor, theta(z, tau, policy=policy))
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report(f"theta-quasi-periodicity-g{genus}", tolerance, seed)


def verify_parity(genus, instances=100, tolerance=1e-11, seed=0, policy=None) -> IdentityReport:
    """``theta[a,b](-z) = (-1)**(4 a.b) theta[a,b](z)`` for every characteristic."""
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    chars = enumerate_characteristics(genus)
    col = _Collector()
    for i in range(instances):
        char = chars[i % len(chars)]
        tau = random_riemann_matrix(rng, genus)
        z = _random_z(rng, genus)
        zz = z[0] if genus == 1 else z
        sign = -1 if char.is_odd else 1
        inputs = {"tau": tau.entries, "z": z, "a": [float(v) for v in char.a],
                  "b": [float(v) for v in char.b]}
        try:
            col.add(inputs, theta(-zz, tau, char, policy=policy),
                    sign * theta(zz, tau, char, policy=policy))
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report(f"theta-parity-g{genus}", tolerance, seed)


def verify_heat_equation(genus, instances=100, tolerance=1e-9, seed=0, policy=None
                         ) -> IdentityReport:
    """Second ``z``-derivatives against ``tau``-derivatives, term by term.

    ``d^2/dz_j dz_k theta = 2 pi i (1 + delta_jk) d(theta)/d(tau_jk)``, which at
    genus 1 is ``theta'' = 4 pi i d(theta)/d(tau)``.
    """
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    for _ in range(instances):
        tau = random_riemann_matrix(rng, genus)
        z = _random_z(rng, genus)
        zz = z[0] if genus == 1 else z
        j, k = sorted(rng.integers(0, genus, size=2))
        inputs = {"tau": tau.entries, "z": z, "index": (int(j), int(k))}
        try:
            lhs = theta(zz, tau, deriv_z=(j, k), policy=policy)
            factor = 4j * np.pi if j == k else 2j * np.pi
            rhs = factor * theta(zz, tau, deriv_tau=(j, k), policy=policy)
            col.add(inputs, lhs, rhs)
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report(f"theta-heat-g{genus}", tolerance, seed)


def verify_tau_derivative_fd(instances=100, tolerance=1e-6, seed=0, policy=None, step=1e-5
                             ) -> IdentityReport:
    """Term-wise ``d(theta)/d(tau)`` against a central difference in ``tau`` (genus 1)."""
    policy = policy or DEFAULT_POLICY
    rng = np.random.default_rng(seed)
    col = _Collector()
    for _ in range(instances):
        t = random_riemann_matrix(rng, 1).scalar
        z = complex(_random_z(rng, 1)[0])
        inputs = {"tau": t, "z": z}
        try:
            fd = (theta(z, t + step, policy=policy) - theta(z, t - step, policy=policy)) / (2 * step)
            col.add(inputs, fd, theta(z, t, deriv_tau=True, policy=policy))
        except SzegoError as exc:
            col.fail(inputs, exc)
    return col.report("theta-tau-derivative-fd", tolerance, seed)


def characteristic_census(genera=(1, 2, 3)) -> IdentityReport:
    """Even/odd counts against ``2**(g-1) (2**g +- 1)``; exact."""
    records = []
    for g in genera:
        chars = enumerate_characteristics(g)
        even = sum(1 for c in chars if not c.is_odd)
        odd = len(chars) - even
        expected = (2 ** (g - 1) * (2 ** g + 1), 2 ** (g - 1) * (2 ** g - 1))
        err = float(abs(even - expected[0]) + abs(odd - expected[1]))
        records.append(InstanceRecord({"genus": g, "total": len(chars)}, [even, odd],
                                      list(expected), err, err))
    return build_report("characteristic-census", records, 0.0)


def default_test_function(curve, a=0.3, policy=None):
    if isinstance(curve, Sphere):
        return SphereCoordinate()
    return WeierstrassShifted(a, curve.tau, policy or DEFAULT_POLICY)


def check_curve(curve):
    if not isinstance(curve, (Sphere, Torus)):
        raise InvalidInput(f"unsupported curve model {curve!r}")
    return curve
