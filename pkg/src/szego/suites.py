"""Run specifications and the registry of named verification suites."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import identities as ident
from .algebra import TruncationPolicy
from .curves import DecomposableBundle, Sphere, SphereCoordinate, Torus
from .errors import InvalidInput
from .expansions import DEFAULT_RING_RADIUS, DEFAULT_SAMPLES

POLICY_ENV = "SZEGO_POLICY"


@dataclass
class PolicySpec:
    theta_tolerance: float = 1e-16
    max_radius: int = 60
    ring_radius: float = DEFAULT_RING_RADIUS
    contour_samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def truncation(self) -> TruncationPolicy:
        return TruncationPolicy(self.theta_tolerance, self.max_radius)

    def echo(self) -> dict:
        return {"theta_tolerance": self.theta_tolerance, "max_radius": self.max_radius,
                "ring_radius": self.ring_radius, "contour_samples": self.contour_samples,
                "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict, base: PolicySpec | None = None) -> PolicySpec:
        base = base or cls()
        known = set(base.echo())
        unknown = set(data) - known
        if unknown:
            raise InvalidInput(f"unknown policy keys: {sorted(unknown)}")
        merged = base.echo() | data
        spec = cls(float(merged["theta_tolerance"]), int(merged["max_radius"]),
                   float(merged["ring_radius"]), int(merged["contour_samples"]),
                   int(merged["seed"]))
        spec.truncation()  # validates
        if not spec.ring_radius > 0 or spec.contour_samples < 8:
            raise InvalidInput("ring_radius must be positive and contour_samples >= 8")
        return spec


@dataclass
class SuiteSpec:
    name: str
    tolerance: float | None = None
    instances: int | None = None
    options: dict = field(default_factory=dict)


@dataclass
class RunSpec:
    curve: Sphere | Torus
    bundle: list[complex] | None
    suites: list[SuiteSpec]
    policy: PolicySpec
    output: str | None = None


def parse_complex(obj) -> complex:
    if isinstance(obj, dict) and set(obj) <= {"re", "im"} and obj:
        re, im = obj.get("re", 0.0), obj.get("im", 0.0)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            raise InvalidInput(f"complex components must be numbers: {obj!r}")
        return complex(re, im)
    raise InvalidInput(f"expected {{'re': ..., 'im': ...}}, got {obj!r}")


def load_default_policy() -> PolicySpec:
    """Policy from the file named by ``$SZEGO_POLICY``, else built-in defaults."""
    path = os.environ.get(POLICY_ENV)
    if not path:
        return PolicySpec()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read policy file {path}: {exc}") from None
    return PolicySpec.from_dict(data)


def parse_run_spec(data: dict, base_policy: PolicySpec | None = None) -> RunSpec:
    if not isinstance(data, dict):
        raise InvalidInput("run spec must be a JSON object")
    curve_data = data.get("curve", {"kind": "torus", "tau": {"re": 0.0, "im": 1.0}})
    kind = curve_data.get("kind")
    if kind == "sphere":
        curve = Sphere()
    elif kind == "torus":
        curve = Torus(parse_complex(curve_data.get("tau")))
    else:
        raise InvalidInput(f"unknown curve kind {kind!r}")
    bundle = None
    if data.get("bundle") is not None:
        zs = data["bundle"].get("z")
        if not isinstance(zs, list) or not zs:
            raise InvalidInput("bundle.z must be a non-empty list")
        bundle = [parse_complex(z) for z in zs]
    policy = PolicySpec.from_dict(data.get("policy", {}), base_policy)
    suites = []
    for entry in data.get("suites") or [{"name": n} for n in default_suites(curve)]:
        if not isinstance(entry, dict) or "name" not in entry:
            raise InvalidInput(f"suite entry needs a name: {entry!r}")
        name = entry["name"]
        if name not in SUITES:
            raise InvalidInput(f"unknown suite {name!r}; known: {sorted(SUITES)}")
        if isinstance(curve, Sphere) and name not in SPHERE_SUITES:
            raise InvalidInput(f"suite {name!r} needs a torus curve")
        options = {k: v for k, v in entry.items() if k not in ("name", "tolerance", "instances")}
        suites.append(SuiteSpec(name, entry.get("tolerance"), entry.get("instances"), options))
    output = data.get("output")
    return RunSpec(curve, bundle, suites, policy, output)


def _bundle(run: RunSpec):
    return None if run.bundle is None else DecomposableBundle(tuple(run.bundle))


def _pick(suite: SuiteSpec, tol, n):
    return (suite.tolerance if suite.tolerance is not None else tol,
            suite.instances if suite.instances is not None else n)


def _characteristics(run, suite):
    return [ident.characteristic_census()]


def _theta_invariants(run, suite):
    p, seed = run.policy.truncation(), run.policy.seed
    _, n = _pick(suite, None, 100)
    reports = []
    for g in (1, 2):
        reports.append(ident.verify_quasi_periodicity(g, n, _pick(suite, 1e-10, n)[0], seed, p))
        reports.append(ident.verify_parity(g, n, _pick(suite, 1e-11, n)[0], seed, p))
        reports.append(ident.verify_heat_equation(g, n, _pick(suite, 1e-9, n)[0], seed, p))
    reports.append(ident.verify_tau_derivative_fd(n, 1e-6, seed, p))
    return reports


def _residue(run, suite):
    tol, n = _pick(suite, 1e-8, 100)
    return [ident.verify_residue_normalization(
        run.curve, instances=n, tolerance=tol, seed=run.policy.seed,
        policy=run.policy.truncation(), ring_radius=run.policy.ring_radius,
        samples=run.policy.contour_samples, bundle=_bundle(run))]


def _test_function(run, suite):
    if isinstance(run.curve, Sphere):
        return SphereCoordinate()
    a = suite.options.get("a", {"re": 0.3, "im": 0.0})
    return ident.default_test_function(run.curve, parse_complex(a), run.policy.truncation())


def _composition(run, suite):
    tol, n = _pick(suite, 1e-13 if isinstance(run.curve, Sphere) else 1e-8, 100)
    bundle = _bundle(run) if isinstance(run.curve, Torus) else None
    if isinstance(run.curve, Torus) and bundle is None:
        bundle = DecomposableBundle.of(0.37 + 0.21j)
    extra = [(1.0, 2.0)] if isinstance(run.curve, Sphere) else []
    return [ident.verify_composition_identity(
        run.curve, bundle, _test_function(run, suite), n, tol, run.policy.seed,
        run.policy.truncation(), extra_pairs=extra)]


def _degenerate(run, suite):
    tol, n = _pick(suite, 1e-7, 100)
    bundle = _bundle(run) if isinstance(run.curve, Torus) else None
    if isinstance(run.curve, Torus) and bundle is None:
        bundle = DecomposableBundle.of(0.37 + 0.21j)
    return list(ident.verify_degenerate_identity(
        run.curve, bundle, _test_function(run, suite), n, tol, run.policy.seed,
        run.policy.truncation()))


def _determinant(run, suite):
    tol, n = _pick(suite, 1e-9, 100)
    p = run.policy.truncation()
    reports = [ident.verify_determinant_theorem(run.curve, (1, 2, 3), n, tol, run.policy.seed, p,
                                                bundle=_bundle(run))]
    if run.bundle is None:
        reports.append(ident.determinant_near_divisor(run.curve, p, run.policy.seed))
    return reports


def _connection(run, suite):
    tol, n = _pick(suite, 1e-7, 100)
    kw = dict(policy=run.policy.truncation(), ring_radius=run.policy.ring_radius,
              samples=run.policy.contour_samples, seed=run.policy.seed)
    return [ident.verify_connection_identification(run.curve, n, tol, bundle=_bundle(run), **kw),
            ident.verify_torsor_difference(run.curve, n, 1e-8, **kw)]


def _divisor(run, suite):
    tol, _ = _pick(suite, 1e-6, 1)
    return [ident.verify_divisor_behavior(run.curve, run.policy.truncation(), tolerance=tol,
                                          ring_radius=run.policy.ring_radius,
                                          samples=run.policy.contour_samples,
                                          seed=run.policy.seed)]


def _extended(run, suite):
    tol, n = _pick(suite, 1e-7, 10)
    taus = [parse_complex(t) for t in suite.options.get("taus", [])] or [run.curve.modulus]
    return [ident.verify_extended_connection(taus, n, tol, run.policy.seed,
                                             run.policy.truncation(),
                                             run.policy.ring_radius, run.policy.contour_samples)]


SUITES = {
    "characteristics": _characteristics,
    "theta-invariants": _theta_invariants,
    "residue-normalization": _residue,
    "composition": _composition,
    "degenerate": _degenerate,
    "determinant": _determinant,
    "connection-2delta": _connection,
    "divisor": _divisor,
    "extended-connection": _extended,
}
SPHERE_SUITES = {"characteristics", "theta-invariants", "composition", "degenerate"}


def default_suites(curve) -> list[str]:
    if isinstance(curve, Sphere):
        return [n for n in SUITES if n in SPHERE_SUITES]
    return list(SUITES)


def run_suites(run: RunSpec) -> list[ident.IdentityReport]:
    reports = []
    for suite in run.suites:
        reports.extend(SUITES[suite.name](run, suite))
    return reports


def reports_to_json(reports, policy: PolicySpec) -> list[dict]:
    out = []
    for r in reports:
        d = r.to_dict()
        d["policy"] = policy.echo()
        out.append(d)
    return out
