"""Command-line interface.

Usage::

    szego eval theta --tau 0,1 --z 0,0
    szego eval szego --curve sphere --x 0,0 --y 1,0
    szego eval prime-form --curve torus --tau 0,1 --x 0.2,0 --y 0.2,0
    szego eval expansion --tau 0,1 --z 0.37,0.21 --x 0.1,0
    szego verify run.json --output report.json
    szego freeze-fixtures run.json --output fixtures.json

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 evaluation
error. Errors are written to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures as fx
from .algebra import ThetaCharacteristic
from .curves import DecomposableBundle, Sphere, Torus
from .errors import EvaluationError, InvalidInput
from .expansions import diagonal_expansion
from .kernels import prime_form, szego_line, szego_matrix
from .suites import PolicySpec, load_default_policy, parse_run_spec, reports_to_json, run_suites
from .theta import theta

EXIT_OK, EXIT_FAILED, EXIT_SPEC, EXIT_EVAL = 0, 1, 2, 3


class SpecError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecError(message)


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


def _half_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B, got {text!r}") from None
    return a, b


def _c(value) -> dict:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def _emit(obj):
    print(json.dumps(obj))


def _error(kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="szego", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate a single quantity")
    ev.add_argument("quantity", choices=["theta", "prime-form", "szego", "expansion"])
    ev.add_argument("--curve", choices=["torus", "sphere"], default="torus")
    ev.add_argument("--tau", type=_complex_arg, default=complex(0, 1))
    ev.add_argument("--z", type=_complex_arg, action="append",
                    help="bundle point (repeat for a decomposable bundle)")
    ev.add_argument("--x", type=_complex_arg)
    ev.add_argument("--y", type=_complex_arg)
    ev.add_argument("--char", type=_half_pair, default=(0.0, 0.0),
                    help="genus-1 characteristic A,B with entries 0 or 0.5")
    ev.add_argument("--deriv", type=int, default=0, help="z-derivative order for theta")
    ev.add_argument("--normalized", action="store_true",
                    help="szego/expansion: use the normalised kernel")
    _policy_flags(ev)

    ver = sub.add_parser("verify", help="run verification suites from a run spec")
    ver.add_argument("spec", type=Path)
    ver.add_argument("--output", type=Path)
    _policy_flags(ver)

    fr = sub.add_parser("freeze-fixtures", help="write oracle reference values")
    fr.add_argument("spec", type=Path, nargs="?")
    fr.add_argument("--output", type=Path)
    fr.add_argument("--radius", type=int, default=fx.oracle.DEFAULT_RADIUS)
    fr.add_argument("--dps", type=int, default=fx.oracle.DEFAULT_DPS)
    fr.add_argument("--no-date", action="store_true")
    return parser


def _policy_flags(p):
    p.add_argument("--theta-tolerance", type=float)
    p.add_argument("--max-radius", type=int)
    p.add_argument("--ring-radius", type=float)
    p.add_argument("--contour-samples", type=int)
    p.add_argument("--seed", type=int)


def _policy_overrides(args) -> dict:
    keys = ("theta_tolerance", "max_radius", "ring_radius", "contour_samples", "seed")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def cmd_eval(args, policy: PolicySpec) -> int:
    tp = policy.truncation()
    curve = Sphere() if args.curve == "sphere" else Torus(args.tau)
    q = args.quantity
    if q == "theta":
        if args.z is None or len(args.z) != 1:
            raise SpecError("theta needs exactly one --z")
        char = ThetaCharacteristic((args.char[0],), (args.char[1],))
        _emit(_c(theta(args.z[0], args.tau, char, deriv_z=args.deriv, policy=tp)))
        return EXIT_OK
    if args.x is None:
        raise SpecError(f"{q} needs --x")
    if q == "prime-form":
        if args.y is None:
            raise SpecError("prime-form needs --y")
        _emit(_c(prime_form(args.x, args.y, curve, tp)))
        return EXIT_OK
    if q == "szego":
        if args.y is None:
            raise SpecError("szego needs --y")
        if isinstance(curve, Sphere) or len(args.z or []) <= 1:
            z = None if isinstance(curve, Sphere) else _single_z(args)
            if args.normalized:
                from .kernels import normalized_szego
                _emit(_c(normalized_szego(args.x, args.y, z, curve, tp)))
            else:
                _emit(_c(szego_line(args.x, args.y, z, curve, tp)))
        else:
            mat = szego_matrix(args.x, args.y, DecomposableBundle(tuple(args.z)), curve, tp)
            _emit([[_c(v) for v in row] for row in np.asarray(mat)])
        return EXIT_OK
    z = None if isinstance(curve, Sphere) else _single_z(args)
    exp = diagonal_expansion(args.x, z, curve, tp, policy.ring_radius, policy.contour_samples,
                             normalized=args.normalized)
    _emit({"c_minus1": _c(exp.c_minus1), "c0": _c(exp.c0), "c1": _c(exp.c1)})
    return EXIT_OK


def _single_z(args) -> complex:
    if not args.z or len(args.z) != 1:
        raise SpecError("torus kernel needs exactly one --z")
    return args.z[0]


def _read_spec(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON in {path}: {exc}") from None


def cmd_verify(args, policy: PolicySpec) -> int:
    data = _read_spec(args.spec)
    run = parse_run_spec(data, policy)
    if overrides := _policy_overrides(args):
        run.policy = PolicySpec.from_dict(overrides, run.policy)
    reports = run_suites(run)
    payload = reports_to_json(reports, run.policy)
    out = args.output or (Path(run.output) if run.output else None)
    text = json.dumps(payload, indent=1, allow_nan=False)
    if out:
        out.write_text(text + "\n")
    else:
        print(text)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        sys.stderr.write(f"{status} {r.identity_name}: max_rel_error={r.max_rel_error:.3e} "
                         f"tolerance={r.tolerance:g} instances={r.instances}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_freeze_fixtures(args, policy: PolicySpec) -> int:
    data = _read_spec(args.spec)
    taus = fx.DEFAULT_TAUS
    if "taus" in data:
        from .suites import parse_complex
        taus = [parse_complex(t) for t in data["taus"]]
    elif "curve" in data and data["curve"].get("kind") == "torus":
        from .suites import parse_complex
        taus = [parse_complex(data["curve"]["tau"])]
    doc = fx.freeze_fixtures(taus, args.radius, args.dps, policy.seed, stamp=not args.no_date)
    text = json.dumps(doc, indent=1)
    if args.output:
        args.output.write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "freeze-fixtures": cmd_freeze_fixtures}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        policy = load_default_policy()
        if args.command != "verify":
            policy = PolicySpec.from_dict(_policy_overrides(args), policy)
        return COMMANDS[args.command](args, policy)
    except (SpecError, InvalidInput) as exc:
        _error("invalid_spec", str(exc))
        return EXIT_SPEC
    except EvaluationError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
