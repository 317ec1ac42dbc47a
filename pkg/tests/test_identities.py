import json
import math

import numpy as np
import pytest

from szego.curves import DecomposableBundle, Sphere, SphereCoordinate, Torus, WeierstrassShifted
from szego.identities import (
    IdentityReport,
    composition_sides,
    composition_sign,
    degenerate_sides,
    determinant_near_divisor,
    sphere_residue_oracle,
    verify_composition_identity,
    verify_degenerate_identity,
    verify_determinant_theorem,
    verify_divisor_behavior,
)
from szego.kernels import szego_line

S, T = Sphere(), Torus(1j)
F = WeierstrassShifted(0.3, 1j)


def test_residue_theorem_oracle_balances():
    data = sphere_residue_oracle(1 + 0j, 2 + 0j)
    assert abs(data["res_x"] + data["res_y"] + data["res_inf"] + data["zero_sum"]) == 0
    # the zero-fibre residue computed from the library's kernel
    raw = szego_line(1, 0, curve=S) * szego_line(0, 2, curve=S) / 1
    assert abs(raw - data["zero_sum"]) < 1e-15


def test_composition_sign_is_frozen_minus_one():
    assert composition_sign() == -1


def test_sphere_composition_example():
    lhs, rhs = composition_sides(1, 2, None, SphereCoordinate(), S)
    assert abs(abs(lhs[0, 0]) - 0.5) < 1e-15 and abs(abs(rhs[0, 0]) - 0.5) < 1e-15
    assert abs(lhs[0, 0] - rhs[0, 0]) < 1e-14


def test_sphere_degenerate_example():
    lhs, rhs = degenerate_sides(2, None, SphereCoordinate(), S)
    assert rhs[0, 0] == 0.25
    assert abs(lhs[0, 0] - rhs[0, 0]) < 1e-13


def test_torus_composition_rank_one():
    r = verify_composition_identity(T, 0.37 + 0.21j, F, 30, seed=1)
    assert r.passed and r.max_rel_error < 1e-8


def test_torus_composition_rank_two():
    E = DecomposableBundle.of(0.37 + 0.21j, -0.2 + 0.1j)
    r = verify_composition_identity(T, E, F, 20, seed=2)
    assert r.passed
    assert all(len(rec.lhs) == 2 for rec in r.records)


def test_same_sign_across_moduli_and_functions():
    for tau, a in [(0.5 + 1j, 0.2 + 0.1j), (-0.3 + 0.8j, 0.15 - 0.2j), (0.1 + 2j, 0.35j)]:
        curve = Torus(tau)
        f = WeierstrassShifted(a, tau)
        r = verify_composition_identity(curve, 0.1 - 0.2j, f, 10, seed=3)
        assert r.passed, (tau, r.max_rel_error)


def test_opposite_sign_fails_loudly(monkeypatch):
    import szego.identities as ident
    monkeypatch.setattr(ident, "composition_sign", lambda: 1)
    r = verify_composition_identity(T, 0.37 + 0.21j, F, 5)
    assert not r.passed


def test_degenerate_torus_and_limit():
    ident_report, limit = verify_degenerate_identity(T, 0.37 + 0.21j, F, 20, seed=4)
    assert ident_report.passed and ident_report.max_rel_error < 1e-7
    assert limit.passed and limit.max_rel_error < 1e-5


def test_determinant_report():
    r = verify_determinant_theorem(T, (1, 2, 3), 10, seed=5)
    assert r.instances == 30 and r.passed


def test_determinant_near_divisor_report():
    r = determinant_near_divisor(T)
    assert r.passed and r.max_rel_error < 1e-6


def test_divisor_report():
    r = verify_divisor_behavior(T, path_samples=50)
    assert r.passed
    checks = {rec.inputs["check"]: rec for rec in r.records}
    assert abs(checks["log-pole-residue"].lhs - 1) < 1e-6
    assert abs(checks["normalized-diagonal-residue"].lhs) < 1e-7
    assert math.isfinite(checks["normalized-bounded"].lhs)


def test_on_divisor_bundle_is_recorded():
    r = verify_composition_identity(T, 0.5 + 0.5j, F, 3)
    assert not r.passed
    assert all("OnThetaDivisor" in rec.error for rec in r.records)
    assert r.max_rel_error == math.inf


def test_report_invariant_passed_iff_within_tolerance():
    r = verify_composition_identity(T, 0.37 + 0.21j, F, 5, tolerance=1e-30)
    assert r.passed == (r.max_rel_error <= r.tolerance)
    assert not r.passed


def test_report_round_trip():
    for r in (verify_composition_identity(T, [0.37 + 0.21j, 0.1j], F, 4),
              verify_composition_identity(T, 0.5 + 0.5j, F, 2),
              verify_determinant_theorem(T, (2,), 3)):
        text = json.dumps(r.to_dict(), allow_nan=False)
        assert IdentityReport.from_dict(json.loads(text)) == r


def test_reports_are_deterministic():
    a = verify_composition_identity(T, 0.37 + 0.21j, F, 10, seed=9)
    b = verify_composition_identity(T, 0.37 + 0.21j, F, 10, seed=9)
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())


def test_explicit_pairs_and_margin():
    r = verify_composition_identity(T, 0.2, F, [(0.3 + 1e-5, 0.1)])
    assert not r.passed and "SampleTooCloseToSingularity" in r.records[0].error
    r = verify_composition_identity(T, 0.2, F, [(0.1 + 0.2j, -0.1 - 0.3j)])
    assert r.passed
