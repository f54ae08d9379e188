"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 unreadable input or bad
arguments, 3 input that parses but fails a physical check, 4 pointer that does
not commute with the final apparatus Hamiltonian.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import io as files
from .energetics import energy_reports
from .errors import CommutatorViolation, CondWorkError, ModelFileError
from .scenarios import OUTCOMES, QubitScenarioConfig, build_qubit_model, default_grid, figure2_sweep, initial_state
from .thermo import ThermoReport, thermo_report
from .verify import SUITES, VerifyOptions, run_all
from .workstats import total_energy_change, work_reports

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_INVALID, EXIT_COMMUTATOR = 0, 1, 2, 3, 4

REPORT_COLUMNS = ["outcome", "p", "E_before", "E_after", "dE", "dE_ref", "W", "total_dE"]
THERMO_FIELDS = ["avg_work", "W_irr", "W_inc_irr", "shannon_H", "holevo_X", "I_SA", "I_SA_prime",
                 "dF_S", "dF_A", "dF_SA", "E_cost"]
FIGURE2_COLUMNS = ["delta_theta", "dE_plus_e", "dE_ref_plus_e", "W_plus_e", "W_plus_g", "W_minus_e",
                   "W_minus_g", "p_plus_e", "p_plus_g", "p_minus_e", "p_minus_g"]
SWEEP_COLUMNS = ["kT"] + THERMO_FIELDS


def fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v + 0.0, ".12g")  # + 0.0 turns -0.0 into 0.0


def label_text(x) -> str:
    return "/".join(x) if isinstance(x, tuple) else str(x)


def _json_float(v):
    return None if v is None or (isinstance(v, float) and math.isnan(v)) else float(v)


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# -- report ---------------------------------------------------------------------


def _report_rows(model, rho, commuting: bool) -> list[dict]:
    energies = {r.outcome: r for r in energy_reports(model, rho)}
    works = {r.outcome: r for r in work_reports(model, rho)} if commuting else {}
    rows = []
    for x in model.outcomes:
        e = energies.get(x)
        p = float(np.real(np.trace(model.effect(x) @ rho.data)))
        rows.append({
            "outcome": label_text(x),
            "p": max(p, 0.0),
            "E_before": e.E_before if e else None,
            "E_after": e.E_after if e else None,
            "dE": e.delta_E if e else None,
            "dE_ref": e.delta_E_reference if e else None,
            "W": works[x].work if x in works else None,
            "total_dE": total_energy_change(model, rho, x) if e else None,
        })
    return rows


def _write_report(out, rows, thermo: ThermoReport | None, kT: float, commuting: bool, form: str) -> None:
    if form == "json":
        doc = {
            "kT": kT,
            "work_interpretable": commuting,
            "outcomes": [{k: (r[k] if k == "outcome" else _json_float(r[k])) for k in REPORT_COLUMNS} for r in rows],
            "thermo": None if thermo is None else {f: float(getattr(thermo, f)) for f in THERMO_FIELDS},
        }
        out.write(json.dumps(doc, indent=1) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow([r["outcome"]] + [fmt(r[k]) for k in REPORT_COLUMNS[1:]])
    if thermo is not None:
        out.write("\n")
        w.writerow(["quantity", "value"])
        w.writerow(["kT", fmt(kT)])
        for f in THERMO_FIELDS:
            w.writerow([f, fmt(getattr(thermo, f))])


def cmd_report(args) -> int:
    if not args.kT > 0:
        return _fail(EXIT_PARSE, f"--kT must be positive, got {args.kT}")
    try:
        model = files.load_model(args.model)
        rho = files.load_state(args.state)
    except ModelFileError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except CondWorkError as exc:
        return _fail(EXIT_INVALID, f"{type(exc).__name__}: {exc}")
    if rho.dim != model.dim_S:
        return _fail(EXIT_INVALID, f"DimensionMismatch: state has dimension {rho.dim}, model system {model.dim_S}")
    commuting = True
    try:
        model.require_commuting_pointer()
    except CommutatorViolation:
        commuting = False
    rows = _report_rows(model, rho, commuting)
    thermo = thermo_report(model, rho, args.kT) if commuting else None
    with _output(args.out) as out:
        _write_report(out, rows, thermo, args.kT, commuting, args.format)
    if not commuting:
        return _fail(
            EXIT_COMMUTATOR,
            f"pointer does not commute with H_A(tau) (norm {model.pointer_commutator_norm():.3g}); "
            "total_dE is not interpretable as work",
        )
    return EXIT_OK


# -- figure2 ----------------------------------------------------------------------


def cmd_figure2(args) -> int:
    if args.grid < 2:
        return _fail(EXIT_PARSE, "--grid must be at least 2")
    try:
        base = QubitScenarioConfig(theta1=args.theta1, q=args.q)
    except ValueError as exc:
        return _fail(EXIT_PARSE, str(exc))
    rows = figure2_sweep(base, default_grid(args.grid))
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(FIGURE2_COLUMNS)
        for r in rows:
            w.writerow(
                [fmt(r.delta_theta), fmt(r.dE_plus_e), fmt(r.dE_ref_plus_e)]
                + [fmt(r.work[x]) for x in OUTCOMES]
                + [fmt(r.probs[x]) for x in OUTCOMES]
            )
    return EXIT_OK


# -- verify --------------------------------------------------------------------------


def _parse_overrides(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, _, value = item.partition("=")
        if name not in SUITES or not value:
            raise ValueError(f"bad tolerance override {item!r}")
        out[name] = float(value)
    return out


def cmd_verify(args) -> int:
    if args.trials < 1 or args.seed < 0:
        return _fail(EXIT_PARSE, "--trials must be >= 1 and --seed >= 0")
    try:
        dS, dA = (int(t) for t in args.dims.split(","))
        overrides = _parse_overrides(args.tolerance_override)
    except ValueError as exc:
        return _fail(EXIT_PARSE, f"bad arguments: {exc}")
    if dS < 2 or dA < 2:
        return _fail(EXIT_PARSE, "--dims entries must be at least 2")
    results = run_all(VerifyOptions(args.seed, args.trials, dS, dA), overrides)
    ok = all(r.passed for r in results)
    doc = {
        "seed": args.seed,
        "trials": args.trials,
        "dims": [dS, dA],
        "passed": ok,
        "suites": [r.as_dict() for r in results],
    }
    with _output(args.out) as out:
        out.write(json.dumps(doc, indent=1) + "\n")
    for r in results:
        if not r.passed:
            print(f"FAILED suite {r.name}: max residual {r.max_residual:.3g}, tolerance {r.tolerance:g}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


# -- sweep ------------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    if args.points < 1 or not 0 < args.kT_min <= args.kT_max:
        return _fail(EXIT_PARSE, "need 0 < --kT-min <= --kT-max and --points >= 1")
    try:
        model = files.load_model(args.model)
        rho = files.load_state(args.state)
    except ModelFileError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except CondWorkError as exc:
        return _fail(EXIT_INVALID, f"{type(exc).__name__}: {exc}")
    try:
        reports = [thermo_report(model, rho, float(kT)) for kT in np.linspace(args.kT_min, args.kT_max, args.points)]
    except CommutatorViolation as exc:
        return _fail(EXIT_COMMUTATOR, str(exc))
    except CondWorkError as exc:
        return _fail(EXIT_INVALID, f"{type(exc).__name__}: {exc}")
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for t in reports:
            w.writerow([fmt(getattr(t, c)) for c in SWEEP_COLUMNS])
    return EXIT_OK


# -- qubit-model -------------------------------------------------------------------------


def cmd_qubit_model(args) -> int:
    try:
        cfg = QubitScenarioConfig(args.theta1, args.theta2, args.q)
    except ValueError as exc:
        return _fail(EXIT_PARSE, str(exc))
    files.save_json(files.model_to_dict(build_qubit_model(cfg)), args.model_out)
    files.save_json(files.state_to_dict(initial_state(cfg)), args.state_out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="condwork", description="Conditional energy and work statistics of quantum measurements.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("report", help="per-outcome energetics and thermodynamic summary of a model file")
    r.add_argument("--model", required=True)
    r.add_argument("--state", required=True)
    r.add_argument("--kT", type=float, required=True)
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)

    f = sub.add_parser("figure2", help="qubit sequential-measurement sweep as CSV")
    f.add_argument("--theta1", type=float, default=math.pi / 2)
    f.add_argument("--q", type=float, default=0.5)
    f.add_argument("--grid", type=int, default=181)
    f.add_argument("--out")
    f.set_defaults(func=cmd_figure2)

    v = sub.add_parser("verify", help="run the seeded property suites, JSON summary")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--dims", default="4,4", help="largest system and apparatus dimensions, e.g. 4,4")
    v.add_argument("--out")
    v.add_argument("--tolerance-override", action="append", metavar="SUITE=TOL", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="thermodynamic summary of a model file over a range of kT")
    s.add_argument("--model", required=True)
    s.add_argument("--state", required=True)
    s.add_argument("--kT-min", type=float, default=0.1)
    s.add_argument("--kT-max", type=float, default=2.0)
    s.add_argument("--points", type=int, default=20)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    q = sub.add_parser("qubit-model", help="write the qubit scenario model and initial state as JSON files")
    q.add_argument("--theta1", type=float, default=math.pi / 2)
    q.add_argument("--theta2", type=float, default=math.pi / 2)
    q.add_argument("--q", type=float, default=0.5)
    q.add_argument("--model-out", required=True)
    q.add_argument("--state-out", required=True)
    q.set_defaults(func=cmd_qubit_model)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
