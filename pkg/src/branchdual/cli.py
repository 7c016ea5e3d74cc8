"""Command-line surface: job parsing, dispatch, and JSON/text reports.

Exit codes: 0 success, 2 infinite codimension, 3 expression/job parse
error, 4 not algebra-forming, 5 precision ceiling reached, 1 for any
other error.  All rationals in JSON output are exact "p" or "p/q"
strings; no floating point appears anywhere.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .errors import (
    BranchDualError,
    ExpressionError,
    InfiniteCodimension,
    NonCoprime,
    NotAlgebraForming,
    PrecisionExhausted,
)
from .expressions import (
    format_diffop,
    format_rational,
    format_series,
    parse_diffop,
    parse_series,
)
from .inverse_system import (
    annihilator,
    inverse_system,
    is_algebra_forming,
    is_derivation,
    rosenlicht,
    standard_filtration,
    transport_dual,
    verify_duality,
)
from .semigroup import (
    Characteristic,
    from_generators,
    from_staircase,
    gorenstein_check,
    is_symmetric,
    saturation_from_characteristic,
)
from .series import order
from .subalgebra import (
    DEFAULT_TRUNC_CEILING,
    AlgebraInput,
    blowup_chain,
    closure,
    hilbert,
)

SCHEMA_VERSION = "1"

COMMANDS = (
    "analyze",
    "inverse-system",
    "check-af",
    "annihilate",
    "filtration",
    "derivations",
    "gorenstein",
    "semigroup",
    "saturation",
    "transport",
    "blowup-chain",
    "canonical",
    "verify",
)


@dataclass
class JobSpec:
    """One unit of work: a command plus its inputs."""

    command: str
    generators: list = field(default_factory=list)
    options: dict = field(default_factory=dict)


def _parse_gens(job: JobSpec):
    if not job.generators:
        raise ExpressionError("this command requires generators (--gens)")
    return [parse_series(g) for g in job.generators]


def _parse_ops(job: JobSpec):
    text = job.options.get("v")
    if not text:
        raise ExpressionError("this command requires operators (--v)")
    return [parse_diffop(p) for p in text.split(";")]


def _ceiling(job: JobSpec) -> int:
    return int(job.options.get("trunc", DEFAULT_TRUNC_CEILING))


def _algebra(job: JobSpec) -> AlgebraInput:
    return AlgebraInput.make(_parse_gens(job))


def _op_entry(g):
    return {
        "expr": format_diffop(g),
        "coefficients": {
            str(i): format_rational(c) for i, c in enumerate(g.coeffs) if c != 0
        },
    }


def _staircase_summary(S):
    return {
        "delta": S.delta,
        "conductor": S.conductor,
        "e0": S.e0,
        "values_below_conductor": list(S.values),
        "gaps": list(S.gaps),
        "staircase_basis": [format_series(b) for b in S.basis],
    }


def _run_analyze(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    h = hilbert(A, S)
    out = _staircase_summary(S)
    out["e1"] = h.e1
    out["mu"] = 2 * S.delta
    out["hilbert_function"] = list(h.hf)
    out["gorenstein"] = S.conductor == 2 * S.delta
    return out, S.work_trunc


def _run_inverse_system(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    V = inverse_system(A, S)
    return {
        "delta": S.delta,
        "conductor": S.conductor,
        "basis": [_op_entry(g) for g in V.basis],
    }, S.work_trunc


def _run_check_af(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    cert = is_algebra_forming(_parse_ops(job), S, A)
    return {
        "verdict": cert.verdict,
        "witness": None if cert.witness is None else format_series(cert.witness),
    }, S.work_trunc


def _run_annihilate(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    C = annihilator(_parse_ops(job), S)
    return _staircase_summary(C), S.work_trunc


def _run_filtration(job):
    A = _algebra(job)
    filt = standard_filtration(A)
    return {
        "steps": [
            {
                "gap_exponent": st.gap_exponent,
                "algebra": _staircase_summary(st.new_algebra),
                "cutting_element": format_series(st.cutting_element),
            }
            for st in filt.steps
        ]
    }, None


def _run_derivations(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    ops = _parse_ops(job)
    return {
        "results": [
            {"operator": format_diffop(g), "is_derivation": is_derivation(g, A, S)}
            for g in ops
        ]
    }, S.work_trunc


def _run_gorenstein(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    D = from_staircase(S.values, S.conductor)
    chk = gorenstein_check(D)
    return {
        "symmetric": chk.symmetric,
        "c_equals_2delta": chk.c_equals_2delta,
        "palindromic_inverse": chk.palindromic_inverse,
        "conductor": D.conductor,
        "genus": D.genus,
    }, S.work_trunc


def _semigroup_summary(D):
    return {
        "generators": list(D.generators),
        "conductor": D.conductor,
        "gaps": list(D.gaps),
        "genus": D.genus,
        "symmetric": is_symmetric(D),
    }


def _run_semigroup(job):
    if not job.generators:
        raise ExpressionError("this command requires integer generators (--gens)")
    try:
        gens = [int(g) for g in job.generators]
    except ValueError as ex:
        raise ExpressionError(f"semigroup generators must be integers: {ex}")
    return _semigroup_summary(from_generators(gens)), None


def _parse_char(job) -> Characteristic:
    text = job.options.get("char")
    if not text:
        raise ExpressionError("this command requires a characteristic (--char)")
    try:
        head, _, tail = text.partition(";")
        e0 = int(head.strip())
        betas = [int(b) for b in tail.split(",") if b.strip()] if tail.strip() else []
    except ValueError as ex:
        raise ExpressionError(f"malformed characteristic: {ex}")
    return Characteristic.make(e0, betas)


def _run_saturation(job):
    ch = _parse_char(job)
    D = saturation_from_characteristic(ch)
    out = _semigroup_summary(D)
    out["characteristic"] = {
        "e0": ch.e0,
        "betas": list(ch.betas),
        "m": list(ch.m),
        "n": list(ch.n),
    }
    return out, None


def _run_transport(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    text = job.options.get("h")
    if not text:
        raise ExpressionError("this command requires a reparametrization (--h)")
    h = parse_series(text)
    if order(h) != 1:
        raise ValueError("reparametrization series is not a uniformizer")
    V2 = inverse_system(A, S)
    M, V1 = transport_dual(h, S.conductor, V2)
    return {
        "conductor": S.conductor,
        "matrix": [
            [format_rational(M.at(i, j)) for j in range(M.cols)]
            for i in range(M.rows)
        ],
        "basis": [_op_entry(g) for g in V1.basis],
    }, S.work_trunc


def _run_blowup_chain(job):
    A = _algebra(job)
    chain = blowup_chain(A, _ceiling(job))
    return {
        "multiplicities": list(chain.multiplicities()),
        "e1_sequence": list(chain.e1_sequence()),
        "delta": chain.delta_check,
    }, None


def _run_canonical(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    V = inverse_system(A, S)
    return {
        "conductor": S.conductor,
        "basis": [
            {
                "operator": format_diffop(g),
                "laurent": {
                    str(e): format_rational(c)
                    for e, c in sorted(rosenlicht(g, S.conductor).items())
                },
            }
            for g in V.basis
        ],
    }, S.work_trunc


def _run_verify(job):
    A = _algebra(job)
    S = closure(A, _ceiling(job))
    return {
        "verified": verify_duality(A),
        "delta": S.delta,
        "conductor": S.conductor,
    }, S.work_trunc


_DISPATCH = {
    "analyze": _run_analyze,
    "inverse-system": _run_inverse_system,
    "check-af": _run_check_af,
    "annihilate": _run_annihilate,
    "filtration": _run_filtration,
    "derivations": _run_derivations,
    "gorenstein": _run_gorenstein,
    "semigroup": _run_semigroup,
    "saturation": _run_saturation,
    "transport": _run_transport,
    "blowup-chain": _run_blowup_chain,
    "canonical": _run_canonical,
    "verify": _run_verify,
}


def run(job: JobSpec):
    """Execute a job; returns (report dict, exit code)."""
    started = time.monotonic()
    report = {"schema_version": SCHEMA_VERSION, "command": job.command}
    diagnostics = {}

    def _finish(code):
        diagnostics["elapsed_ms"] = int((time.monotonic() - started) * 1000)
        report["diagnostics"] = diagnostics
        return report, code

    if job.command not in _DISPATCH:
        report["status"] = "error"
        report["error"] = {
            "type": "UnknownCommand",
            "message": f"unknown command {job.command!r}",
        }
        return _finish(3)
    try:
        result, work_trunc = _DISPATCH[job.command](job)
    except ExpressionError as ex:
        report["status"] = "error"
        report["error"] = {"type": "ExpressionError", "message": str(ex)}
        return _finish(3)
    except InfiniteCodimension as ex:
        report["status"] = "error"
        report["error"] = {
            "type": "InfiniteCodimension",
            "message": str(ex),
            "gcd": ex.gcd,
            "values": list(ex.values),
        }
        return _finish(2)
    except NotAlgebraForming as ex:
        report["status"] = "error"
        report["error"] = {
            "type": "NotAlgebraForming",
            "message": str(ex),
            "witness": None
            if ex.certificate.witness is None
            else format_series(ex.certificate.witness),
        }
        return _finish(4)
    except PrecisionExhausted as ex:
        report["status"] = "error"
        report["error"] = {
            "type": "PrecisionExhausted",
            "message": str(ex),
            "required": ex.required,
        }
        return _finish(5)
    except (NonCoprime, BranchDualError, ValueError) as ex:
        report["status"] = "error"
        report["error"] = {"type": type(ex).__name__, "message": str(ex)}
        return _finish(1)
    report["status"] = "ok"
    report["result"] = result
    if work_trunc is not None:
        diagnostics["work_trunc"] = work_trunc
    return _finish(0)


def _print_human(report, stream):
    status = report.get("status")
    if status == "error":
        err = report["error"]
        print(f"error ({err['type']}): {err['message']}", file=stream)
        return
    print(f"command: {report['command']}", file=stream)
    for key, value in report.get("result", {}).items():
        print(f"{key}: {_human_value(value)}", file=stream)


def _human_value(value, indent=2):
    if isinstance(value, dict):
        inner = ", ".join(f"{k}={_human_value(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, list):
        if value and isinstance(value[0], (dict, list)):
            pad = "\n" + " " * indent
            return pad + pad.join(_human_value(v, indent + 2) for v in value)
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def _load_job_file(path: str) -> JobSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        raise ExpressionError(f"cannot read job file {path!r}: {ex}")
    if not isinstance(data, dict) or "command" not in data:
        raise ExpressionError("job file must be a JSON object with a 'command' field")
    gens = data.get("generators", [])
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise ExpressionError("job file 'generators' must be a list of strings")
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ExpressionError("job file 'options' must be an object")
    return JobSpec(str(data["command"]), list(gens), dict(options))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchdual",
        description="Exact invariants and dualities of curve-singularity branches in k[[t]].",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="operation to run")
    parser.add_argument("--job", help="JSON job file ({command, generators, options})")
    parser.add_argument("--gens", help="comma-separated generator expressions (or integers for 'semigroup')")
    parser.add_argument("--v", help="semicolon-separated operator expressions in u")
    parser.add_argument("--h", dest="h_expr", help="reparametrization series in t")
    parser.add_argument("--char", help="characteristic exponents, e.g. '6;8,11'")
    parser.add_argument("--trunc", type=int, help="truncation ceiling (default 512)")
    parser.add_argument("--json", action="store_true", help="emit the JSON report")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.job:
        try:
            job = _load_job_file(args.job)
        except ExpressionError as ex:
            report = {
                "schema_version": SCHEMA_VERSION,
                "command": "unknown",
                "status": "error",
                "error": {"type": "ExpressionError", "message": str(ex)},
                "diagnostics": {"elapsed_ms": 0},
            }
            _emit(report, args.json)
            return 3
    elif args.command:
        job = JobSpec(args.command)
    else:
        build_parser().error("a command or --job file is required")
        return 3  # unreachable; argparse exits
    if args.gens:
        job.generators = [p.strip() for p in args.gens.split(",")]
    if args.v:
        job.options["v"] = args.v
    if args.h_expr:
        job.options["h"] = args.h_expr
    if args.char:
        job.options["char"] = args.char
    if args.trunc is not None:
        job.options["trunc"] = args.trunc
    report, code = run(job)
    _emit(report, args.json)
    return code


def _emit(report, as_json: bool):
    if as_json:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _print_human(report, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
