"""Command-line interface: ``drazin <command> ...``.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage/IO/parse error.
Set DRAZIN_TOL to override residual_atol for exploratory runs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import drazincore, harness, multop, resolvent
from .errors import DrazinError, MatrixFormatError, UnknownSuiteError
from .numkernel import DEFAULT_TOL, ToleranceConfig, matrix_from_dict, matrix_to_dict

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def tolerances_from_env(env=None) -> ToleranceConfig:
    env = os.environ if env is None else env
    raw = env.get("DRAZIN_TOL")
    if raw is None or raw == "":
        return DEFAULT_TOL
    try:
        return replace(DEFAULT_TOL, residual_atol=float(raw))
    except ValueError as exc:
        raise UsageError(f"DRAZIN_TOL={raw!r} is not a valid tolerance: {exc}") from exc


def _read_matrix(path) -> np.ndarray:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return matrix_from_dict(obj)
    except (MatrixFormatError, ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: bad matrix file: {exc}") from exc


def _parse_complex(text) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as a complex number") from exc


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2, default=harness._json_default) + "\n")


def _pair(z):
    return [complex(z).real, complex(z).imag]


# -- commands ----------------------------------------------------------------------


def cmd_inv(args, tol, out):
    a = _read_matrix(args.input)
    res = drazincore.drazin_inverse(a, tol)
    ok = max(res.residuals, default=0.0) <= tol.residual_atol
    _emit({"index": res.index, "inverse": matrix_to_dict(res.inverse), "residuals": list(res.residuals),
           "passed": ok}, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_chain(args, tol, out):
    a = _read_matrix(args.input)
    shift = _parse_complex(args.shift) if args.shift else 0.0
    prof = drazincore.chain_profile(a, tol, shift)
    _emit(prof.to_dict(), out)
    return EXIT_FAIL if prof.flagged else EXIT_OK


def cmd_poles(args, tol, out):
    a = _read_matrix(args.input)
    _emit({"poles": [{"at": _pair(z), "order": k} for z, k in resolvent.poles(a, tol)],
           "ies": [_pair(z) for z in resolvent.ies(a, tol).points]}, out)
    return EXIT_OK


def cmd_laurent(args, tol, out):
    a = _read_matrix(args.input)
    try:
        cfg = resolvent.ContourConfig(args.radius_frac, args.nodes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    exp = resolvent.laurent_crosscheck(a, _parse_complex(args.at), cfg, tol)
    ok = exp.cross_residual <= harness.CROSSCHECK_TOL
    _emit({"center": _pair(exp.center), "pole_order": exp.pole_order,
           "coefficients": [matrix_to_dict(b) for b in exp.principal],
           "cross_residual": exp.cross_residual, "passed": ok}, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_multop(args, tol, out):
    a = _read_matrix(args.input)
    rep = multop.transfer_index_check(a, tol, args.lift_cap, inverse_rtol=tol.residual_atol)
    _emit(rep.to_dict(), out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _entry_summary(e):
    return {"name": e.name, "description": e.description, "passed": e.report.passed, "failed": e.report.failed}


def cmd_catalog(args, tol, out):
    import warnings

    from .specset.models import ProfileWarning, catalog, load_entries

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProfileWarning)
        if args.action == "list":
            _emit([{"name": e.name, "description": e.description, "profile": e.profile.describe()}
                   for e in catalog()], out)
            return EXIT_OK
        if args.action == "verify":
            entries = catalog()
            if args.name:
                entries = [e for e in entries if e.name == args.name]
                if not entries:
                    raise UsageError(f"no catalog entry named {args.name!r}")
            reports = [e.report for e in entries]
            body = [_entry_summary(e) for e in entries]
            if args.detail:
                body = [{**s, "report": r.to_dict()} for s, r in zip(body, reports)]
        else:
            if not args.path:
                raise UsageError("catalog verify-file needs a path")
            try:
                entries = [e.verified() for e in load_entries(args.path)]
            except OSError as exc:
                raise UsageError(f"cannot read {args.path}: {exc.strerror or exc}") from exc
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                raise UsageError(f"{args.path}: bad catalog file: {exc}") from exc
            reports = [e.report for e in entries]
            body = [{**_entry_summary(e), "report": e.report.to_dict()} for e in entries]
    _emit(body, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_suite(args, tol, out):
    if args.action != "run":
        raise UsageError(f"unknown suite action {args.action!r}")
    kwargs = {"tolerances": tol}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.sizes:
        kwargs["sizes"] = tuple(args.sizes)
    if args.cases is not None:
        kwargs["cases_per_size"] = args.cases
    if args.workers is not None:
        kwargs["workers"] = args.workers
    try:
        config = harness.SuiteConfig(**kwargs)
        report = harness.run_suite(args.name, config)
    except (ValueError, UnknownSuiteError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from exc
    if args.json:
        try:
            with open(args.json, "w") as fh:
                fh.write(report.to_json() + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {args.json}: {exc.strerror or exc}") from exc
    summary = report.summary()
    failures = [{"ordinal": c["ordinal"], **c["params"], "matrix_hash": c.get("matrix_hash"),
                 "failed_checks": [k for k, v in c["checks"].items() if not v["passed"]]}
                for c in report.cases if not c["passed"]]
    _emit({"suite": report.suite, "summary": summary, "failures": failures[:20]}, out)
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="drazin", description="Drazin inverses, chain spectra and their identity suites.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def matrix_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--in", dest="input", required=True, help="matrix JSON file")
        return sp

    matrix_cmd("inv", "Drazin inverse and index")
    sp = matrix_cmd("chain", "ascent/descent chain profile")
    sp.add_argument("--shift", help="profile a - shift*I instead of a")
    matrix_cmd("poles", "eigenvalues with pole orders")
    sp = matrix_cmd("laurent", "principal part of the resolvent at an eigenvalue")
    sp.add_argument("--at", required=True, help="eigenvalue, e.g. 0 or 1+2j")
    sp.add_argument("--nodes", type=int, default=64)
    sp.add_argument("--radius-frac", type=float, default=0.5)
    sp = matrix_cmd("multop", "left/right multiplication lifts and index transfer")
    sp.add_argument("--lift-cap", type=int, default=multop.DEFAULT_LIFT_CAP)

    sp = sub.add_parser("catalog", help="model-operator catalog")
    sp.add_argument("action", choices=["list", "verify", "verify-file"])
    sp.add_argument("path", nargs="?", help="entry file for verify-file")
    sp.add_argument("--name", help="restrict verify to one entry")
    sp.add_argument("--detail", action="store_true", help="include per-identity reports")

    sp = sub.add_parser("suite", help="run a check suite over the random corpus")
    sp.add_argument("action", choices=["run"])
    sp.add_argument("--name", required=True, help=f"one of: {', '.join(harness.SUITES)}")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--sizes", type=int, nargs="+")
    sp.add_argument("--cases", type=int, help="cases per size")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--json", help="write the full report here")
    return p


COMMANDS = {
    "inv": cmd_inv, "chain": cmd_chain, "poles": cmd_poles, "laurent": cmd_laurent,
    "multop": cmd_multop, "catalog": cmd_catalog, "suite": cmd_suite,
}


def cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        tol = tolerances_from_env()
        return COMMANDS[args.command](args, tol, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except DrazinError as exc:
        err.write(f"check failed: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
