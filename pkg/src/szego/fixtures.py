"""Freeze reference values with the high-precision oracle."""
from __future__ import annotations

import datetime as _dt

import mpmath

from . import oracle

DEFAULT_TAUS = (1j, 0.5 + 1j, 0.2 + 1.3j, -0.3 + 0.8j, 0.1 + 2j)
SZEGO_POINT = {"tau": 1j, "z": 0.37 + 0.21j, "x": 0.1, "y": 0.45}
P_POINT = 0.3


def _c(value) -> dict:
    v = complex(value)
    return {"re": v.real, "im": v.imag}


def _tau_key(tau: complex) -> str:
    return f"{tau.real!r},{tau.imag!r}"


def freeze_fixtures(taus=DEFAULT_TAUS, radius: int = oracle.DEFAULT_RADIUS,
                    dps: int = oracle.DEFAULT_DPS, seed: int | None = None,
                    stamp: bool = True) -> dict:
    """Compute every reference value with :mod:`szego.oracle`.

    Values are keyed by name and modulus. The provenance block records the
    oracle parameters; ``stamp=False`` omits the wall-clock date.
    """
    taus = [complex(t) for t in taus]
    entries = {}
    for t in taus:
        key = _tau_key(t)
        d1 = oracle.theta1_mp(0, t, 1, radius, dps)
        d3 = oracle.theta1_mp(0, t, 3, radius, dps)
        with mpmath.workdps(dps):
            offset = -d3 / (6 * d1)
        entries[key] = {
            "tau": _c(t),
            "theta_00_at_0": _c(oracle.theta_mp(0, t, radius=radius, dps=dps)),
            "theta1_prime_at_0": _c(d1),
            "theta1_third_at_0": _c(d3),
            "c1_offset": _c(offset),
        }
    p = SZEGO_POINT
    base = {
        "p_rel": {"u": P_POINT, "tau": _c(1j),
                  "value": _c(oracle.p_rel_mp(P_POINT, 1j, radius, dps))},
        "p_prime_rel": {"u": P_POINT, "tau": _c(1j),
                        "value": _c(oracle.p_prime_rel_mp(P_POINT, 1j, radius, dps))},
        "szego_line": {"tau": _c(p["tau"]), "z": _c(p["z"]), "x": p["x"], "y": p["y"],
                       "value": _c(oracle.szego_line_mp(p["x"], p["y"], p["z"], p["tau"],
                                                         radius, dps))},
        "theta_second_over_theta": {
            "tau": _c(p["tau"]), "z": _c(p["z"]),
            "value": _c(_ratio(oracle.theta_mp(p["z"], p["tau"], z_order=2, radius=radius, dps=dps),
                               oracle.theta_mp(p["z"], p["tau"], radius=radius, dps=dps), dps)),
        },
        "theta_first_over_theta": {
            "tau": _c(p["tau"]), "z": _c(p["z"]),
            "value": _c(_ratio(oracle.theta_mp(p["z"], p["tau"], z_order=1, radius=radius, dps=dps),
                               oracle.theta_mp(p["z"], p["tau"], radius=radius, dps=dps), dps)),
        },
    }
    provenance = {"oracle": "szego.oracle mpmath box summation", "radius": radius,
                  "dps": dps, "seed": seed}
    if stamp:
        provenance["date"] = _dt.date.today().isoformat()
    return {"provenance": provenance, "per_tau": entries, "values": base}


def _ratio(a, b, dps):
    with mpmath.workdps(dps):
        return a / b


def fixture_values(fixtures: dict) -> dict[str, complex]:
    """Flatten a fixture document into ``name -> complex`` for comparisons."""
    out = {}
    for key, entry in fixtures["per_tau"].items():
        for name, v in entry.items():
            if name != "tau":
                out[f"{key}/{name}"] = complex(v["re"], v["im"])
    for name, entry in fixtures["values"].items():
        v = entry["value"]
        out[name] = complex(v["re"], v["im"])
    return out


def c1_offsets(fixtures: dict) -> dict[complex, complex]:
    out = {}
    for entry in fixtures["per_tau"].values():
        t = complex(entry["tau"]["re"], entry["tau"]["im"])
        out[t] = complex(entry["c1_offset"]["re"], entry["c1_offset"]["im"])
    return out
