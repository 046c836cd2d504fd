"""Command-line entry points.

    verdap verify <file> [--solver CMD] [--bruteforce BOUND]
                         [--timeout-ms N] [--fuel N] [--format human|json]
    verdap dap [--log PATH]

`verify` explores every branch to completion and reports one verdict per
procedure; exit code 0 means everything verified, 1 a refuted obligation,
2 a parse failure, 3 an inconclusive run (unknown verdicts or fuel
exhaustion). `dap` serves the Debug Adapter Protocol on stdio until the
client disconnects. The environment variable VERDAP_SOLVER supplies the
solver command when no flag is given.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .lang.parser import parse_program, ParseError
from .sem.engine import explore, ObligationRecord
from .solve import BruteForce, DEFAULT_SOLVER_COMMAND, External, Solver, SolverConfig

EXIT_VERIFIED = 0
EXIT_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class ProcedureReport:
    name: str
    verdict: str  # "verified" | "failed" | "unknown"
    obligations: list[ObligationRecord]


@dataclass
class VerifyReport:
    procedures: list[ProcedureReport]
    steps: int
    solver_calls: int
    elapsed_ms: int
    fuel_exhausted: bool

    @property
    def exit_code(self) -> int:
        if self.fuel_exhausted:
            return EXIT_INCONCLUSIVE
        if any(p.verdict == "failed" for p in self.procedures):
            return EXIT_FAILED
        if any(p.verdict == "unknown" for p in self.procedures):
            return EXIT_INCONCLUSIVE
        return EXIT_VERIFIED


def solver_config_from_args(args, env: Optional[dict] = None) -> SolverConfig:
    env = os.environ if env is None else env
    timeout = args.timeout_ms
    if args.solver:
        return SolverConfig(External(tuple(shlex.split(args.solver))), timeout)
    if args.bruteforce is not None:
        return SolverConfig(BruteForce(args.bruteforce), timeout)
    from_env = env.get("VERDAP_SOLVER")
    if from_env:
        return SolverConfig(External(tuple(shlex.split(from_env))), timeout)
    return SolverConfig(External(DEFAULT_SOLVER_COMMAND), timeout)


def run_verify(path: str, config: SolverConfig, fuel: int) -> VerifyReport:
    with open(path, "r", encoding="utf-8") as handle:
        source = handle.read()
    unit = parse_program(source, path)
    solver = Solver(config)
    started = time.monotonic()
    result = explore(unit, solver, fuel=fuel)
    elapsed = int((time.monotonic() - started) * 1000)
    procedures = []
    for proc in unit.procedures:
        records = [r for r in result.records if r.proc == proc.name]
        # a refuted obligation outranks an undecided one
        if any(r.status == "failed" for r in records):
            verdict = "failed"
        elif result.fuel_exhausted or any(r.status == "unknown" for r in records):
            verdict = "unknown"
        else:
            verdict = "verified"
        procedures.append(ProcedureReport(proc.name, verdict, records))
    return VerifyReport(
        procedures, result.steps, solver.calls, elapsed, result.fuel_exhausted
    )


def _model_text(record: ObligationRecord) -> str:
    if not record.model:
        return "any values"
    parts = []
    for var in sorted(record.model, key=lambda v: (v.name, v.index)):
        value = record.model[var]
        text = ("true" if value else "false") if isinstance(value, bool) else str(value)
        parts.append(f"{var.render()} = {text}")
    return ", ".join(parts)


def render_human(report: VerifyReport) -> str:
    lines = []
    for proc in report.procedures:
        if proc.verdict == "verified":
            lines.append(f"{proc.name}: verified")
        else:
            undischarged = [o for o in proc.obligations if o.status != "discharged"]
            first = undischarged[0] if undischarged else None
            where = f" ({first.kind}, line {first.at.line})" if first else ""
            lines.append(f"{proc.name}: {proc.verdict}{where}")
        for record in proc.obligations:
            detail = f"    {record.kind} at line {record.at.line}: {record.status}"
            if record.status == "failed":
                detail += f" (countermodel: {_model_text(record)})"
            lines.append(detail)
    if report.fuel_exhausted:
        lines.append("note: fuel exhausted before exploration finished")
    lines.append(
        f"steps: {report.steps}, solver calls: {report.solver_calls}, "
        f"elapsed: {report.elapsed_ms} ms"
    )
    return "\n".join(lines) + "\n"


def render_json(report: VerifyReport) -> str:
    def record_json(record: ObligationRecord) -> dict:
        out = {
            "kind": str(record.kind),
            "file": record.at.file,
            "line": record.at.line,
            "column": record.at.column,
            "status": record.status,
        }
        if record.status == "failed":
            out["countermodel"] = {
                var.render(): value for var, value in (record.model or {}).items()
            }
        return out

    data = {
        "procedures": [
            {
                "name": proc.name,
                "verdict": proc.verdict,
                "obligations": [record_json(r) for r in proc.obligations],
            }
            for proc in report.procedures
        ],
        "stats": {
            "steps": report.steps,
            "solverCalls": report.solver_calls,
            "elapsedMs": report.elapsed_ms,
            "fuelExhausted": report.fuel_exhausted,
        },
    }
    return json.dumps(data, indent=2) + "\n"


def cmd_verify(args) -> int:
    try:
        report = run_verify(args.file, solver_config_from_args(args), args.fuel)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except ParseError as exc:
        for diagnostic in exc.diagnostics:
            print(str(diagnostic), file=sys.stderr)
        return EXIT_PARSE_ERROR
    output = render_json(report) if args.format == "json" else render_human(report)
    sys.stdout.write(output)
    return report.exit_code


def cmd_dap(args) -> int:
    from .dap.server import serve

    log = open(args.log, "a", encoding="utf-8") if args.log else None
    try:
        return serve(sys.stdin.buffer, sys.stdout.buffer, log=log)
    finally:
        if log:
            log.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verdap",
        description="MiniVer deductive verifier and symbolic debug server",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="verify every procedure in a file")
    verify.add_argument("file")
    verify.add_argument("--solver", help="external SMT solver command (SMT-LIB v2 on stdio)")
    verify.add_argument(
        "--bruteforce",
        type=int,
        metavar="BOUND",
        help="use exhaustive enumeration over {-BOUND..BOUND} instead",
    )
    verify.add_argument("--timeout-ms", type=int, default=2000)
    verify.add_argument("--fuel", type=int, default=100_000)
    verify.add_argument("--format", choices=["human", "json"], default="human")
    verify.set_defaults(run=cmd_verify)

    dap = sub.add_parser("dap", help="serve the Debug Adapter Protocol on stdio")
    dap.add_argument("--log", help="append protocol traffic to this file")
    dap.set_defaults(run=cmd_dap)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
