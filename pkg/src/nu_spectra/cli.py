"""Command line: spectra, wavefunction samples, verification, table data,
molecule parameters and the potential list.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 no bound
states or level not bound.
"""
from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from . import __version__, verification
from .catalog import REGISTRY, get
from .errors import LevelNotBound, NoBoundStates, NuSpectraError
from .figures import figure1_dataset, figure2_dataset
from .molecules import molecule_table
from .output import SCHEMA_VERSION, dumps_csv, dumps_json, records_to_csv

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_UNBOUND = 3

DEFAULT_LEVEL_SPAN = 5
DEFAULT_POINTS = 601


class UsageError(Exception):
    """Bad command-line input detected before any computation."""


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_params(items: list | None) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        if key in out:
            raise UsageError(f"parameter {key} given twice")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"parameter {key} needs a real value, got {value!r}") from None
    return out


_RANGE = re.compile(r"^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?$")


def parse_levels(text: str | None) -> tuple | None:
    """``"2"`` or ``"0..4"`` (inclusive) to (first, last)."""
    if text is None:
        return None
    m = _RANGE.match(text)
    if not m:
        raise UsageError(f"--levels expects N or N..M, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise UsageError(f"--levels range {text!r} is empty")
    return lo, hi


def selected_levels(spec, p: dict, levels: tuple | None) -> list:
    if levels is None:
        first = spec.first_level(p)
        return spec.levels(p, first + DEFAULT_LEVEL_SPAN - 1)
    lo, hi = levels
    chosen = [lv for lv in spec.levels(p, hi) if lv >= lo]
    if not chosen:
        raise LevelNotBound(f"no bound level of {spec.id} in {spec.level_name}={lo}..{hi} ({spec.count_rule(p)})")
    return chosen


def emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def envelope(potential: str, params: dict, results: list, **extra) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "potential": potential, "params": params}
    doc.update(extra)
    doc["results"] = results
    return doc


# ---------------------------------------------------------------------------
# spectrum


def spectrum_records(spec, p: dict, levels: tuple | None) -> list:
    rule = spec.count_rule(p)
    records = []
    for lv in selected_levels(spec, p, levels):
        rec = {
            "quantum_numbers": spec.quantum_numbers(p, lv),
            "energy": spec.energy(p, lv),
            "units": spec.energy_units,
            "level_count_rule_applied": rule,
        }
        extras = spec.energy_extras(p, lv)
        if extras:
            rec["extras"] = extras
        physical = spec.physical_energy(p, rec["energy"])
        if physical is not None:
            rec["physical_energy"] = {"value": physical[0], "unit": physical[1]}
        records.append(rec)
    return records


def cmd_spectrum(args) -> int:
    spec = get(args.potential)
    p = spec.validate(parse_params(args.param))
    records = spectrum_records(spec, p, parse_levels(args.levels))
    if args.format == "json":
        emit(dumps_json(envelope(spec.id, p, records)), args.output)
    else:
        meta = {"schema_version": SCHEMA_VERSION, "potential": spec.id, "params": p}
        emit(records_to_csv(records, meta), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# wavefunction


def _grid(args, domain) -> np.ndarray:
    lower = args.lower if args.lower is not None else domain.lower
    upper = args.upper if args.upper is not None else domain.upper
    if not (math.isfinite(lower) and math.isfinite(upper)):
        raise UsageError("the physical domain is unbounded; give --lower and --upper")
    if not upper > lower:
        raise UsageError("--upper must exceed --lower")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    return np.linspace(lower, upper, args.points)


def wavefunction_dataset(args) -> dict:
    spec = get(args.potential)
    p = spec.validate(parse_params(args.param))
    lvls = selected_levels(spec, p, parse_levels(args.levels))
    states = [spec.state(p, lv) for lv in lvls]
    x = _grid(args, states[0].domain)
    single = len(states) == 1
    columns = []
    for lv, st in zip(lvls, states):
        suffix = "" if single else str(lv)
        meta = {"quantum_numbers": st.quantum_numbers, "energy": st.energy, "normalization": st.normalization,
                "measure": st.measure}
        if st.measure == "sphere":
            values = np.asarray(st.psi(x, args.phi))
            meta["phi"] = args.phi
            columns.append((f"psi{suffix}", values.real, meta))
            if np.any(values.imag != 0):
                columns.append((f"psi{suffix}_imag", values.imag, {}))
            continue
        columns.append((f"psi{suffix}", np.asarray(st.psi(x), dtype=float), meta))
        if st.measure == "dirac":
            columns.append((f"G{suffix}", np.asarray(st.extras["G"](x), dtype=float), {}))
    axis = {"sphere": "theta", "radial": "r", "dirac": "r"}.get(states[0].measure, "x")
    return {"potential": spec.id, "params": p, "axis": axis, "x": x, "columns": columns, "meta": {}}


def figure_dataset(number: int, points: int | None) -> dict:
    if number == 1:
        data = figure1_dataset(points=points or DEFAULT_POINTS)
        meta = data["meta"]
        columns = [(name, values, {"quantum_numbers": {"n": i}, "energy": meta["energy"][name],
                                   "normalization": meta["normalization"][name], "measure": "line"})
                   for i, (name, values) in enumerate(data["columns"].items())]
        return {"potential": meta["potential"], "params": meta["params"], "axis": "x", "x": data["x"],
                "columns": columns, "meta": {"figure": 1}}
    data = figure2_dataset(points=points or 581)
    meta = data["meta"]
    columns = [("morse", data["columns"]["morse"], {"params": meta["morse"]}),
               ("modified_hulthen", data["columns"]["modified_hulthen"], {"params": meta["params"]})]
    return {"potential": "morse_vs_modified_hulthen", "params": meta["params"], "axis": "r", "x": data["x"],
            "columns": columns,
            "meta": {"figure": 2, "r_min": meta["r_min"], "r_min_numeric": meta["r_min_numeric"],
                     "U_min": meta["U_min"]}}


def render_dataset(data: dict, fmt: str) -> str:
    x = data["x"]
    grid = {"axis": data["axis"], "lower": float(x[0]), "upper": float(x[-1]), "points": len(x)}
    if fmt == "json":
        results = [dict(meta, column=name, values=values) for name, values, meta in data["columns"]]
        return dumps_json(envelope(data["potential"], data["params"], results, meta=data["meta"], grid=grid,
                                   x=x))
    meta = {"schema_version": SCHEMA_VERSION, "potential": data["potential"], "params": data["params"]}
    meta.update({f"meta.{k}": v for k, v in data["meta"].items()})
    meta.update({f"grid.{k}": v for k, v in grid.items()})
    for name, _, col_meta in data["columns"]:
        for key, value in col_meta.items():
            meta[f"{name}.{key}"] = value
    header = [data["axis"]] + [name for name, _, _ in data["columns"]]
    cols = [x] + [values for _, values, _ in data["columns"]]
    rows = [[float(c[i]) for c in cols] for i in range(len(x))]
    return dumps_csv(header, rows, meta)


def cmd_wavefunction(args) -> int:
    if args.figure is not None:
        if args.potential is not None:
            raise UsageError("--figure and --potential are exclusive")
        data = figure_dataset(args.figure, args.points_given)
    else:
        if args.potential is None:
            raise UsageError("wavefunction needs --potential or --figure")
        data = wavefunction_dataset(args)
    emit(render_dataset(data, args.format), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    report = verification.run(args.scope)
    if args.format == "json":
        emit(dumps_json(report), args.output)
    else:
        rows = [{k: c[k] for k in ("suite", "name", "passed", "measured", "tolerance")} for c in report["checks"]]
        emit(records_to_csv(rows, {"schema_version": report["schema_version"], "scope": report["scope"],
                                   "summary": report["summary"]}), args.output)
    summary = report["summary"]
    print(f"{summary['passed']}/{summary['total']} checks passed", file=sys.stderr)
    if report["failed"]:
        print("failing checks:", file=sys.stderr)
        for name in report["failed"]:
            print(f"  {name}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# tables, molecules, list


def table_records(ids: list) -> list:
    records = []
    for pid in ids:
        spec = get(pid)
        for params, energy in spec.table_cases():
            p = spec.validate(params)
            report = spec.table_check(p, energy)
            if spec.id == "bessel":
                br = spec.complex_reduction(p)
                computed = {key: br[key] for key in ("k", "pi", "tau", "lambda", "phi", "rho")}
            else:
                br = spec.reduce(p, energy)
                computed = {"k": br.k, "pi": br.pi, "tau": br.tau, "lambda": br.lambda_, "phi": br.phi, "rho": br.rho}
            deviations = {k: v for k, v in report.items() if isinstance(v, float)}
            records.append({"potential": spec.id, "params": p, "trial_energy": energy, "computed": computed,
                            "max_rel_deviation": max(deviations.values()), "passed": report["passed"]})
    return records


def cmd_tables(args) -> int:
    ids = [args.potential] if args.potential else list(REGISTRY)
    records = table_records(ids)
    potential = args.potential or "all"
    if args.format == "json":
        emit(dumps_json(envelope(potential, {}, records)), args.output)
    else:
        emit(records_to_csv(records, {"schema_version": SCHEMA_VERSION, "potential": potential}), args.output)
    return EXIT_OK


def cmd_molecules(args) -> int:
    rows = molecule_table()
    if args.format == "json":
        emit(dumps_json(envelope("molecules", {}, rows)), args.output)
    else:
        emit(records_to_csv(rows, {"schema_version": SCHEMA_VERSION, "potential": "molecules",
                                   "units": "cm^-1 unless marked eV"}), args.output)
    return EXIT_OK


def list_records() -> list:
    records = [dict(spec.describe(), kind="potential" if spec.has_spectrum else "fixture")
               for spec in REGISTRY.values()]
    records.append({"id": "molecules", "title": "Morse versus modified Hulthen parameters for H2, HCl and I2",
                    "level": None, "energy_units": "cm^-1", "params": [], "kind": "comparison"})
    return records


def cmd_list(args) -> int:
    records = list_records()
    if args.format == "json":
        emit(dumps_json(envelope("all", {}, records)), args.output)
    else:
        rows = []
        for rec in records:
            base = {"id": rec["id"], "kind": rec["kind"], "level": rec["level"], "energy_units": rec["energy_units"]}
            if not rec["params"]:
                rows.append(base)
            for ps in rec["params"]:
                rows.append(dict(base, **{f"param.{k}": v for k, v in ps.items()}))
        emit(records_to_csv(rows, {"schema_version": SCHEMA_VERSION}), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nu-spectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--list", action="store_true", help="same as the list subcommand with JSON output")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o", help="output file (default: standard output)")

    def potential_args(p, required=True):
        p.add_argument("--potential", required=required, help="catalog id, see `nu-spectra list`")
        p.add_argument("--param", action="append", metavar="KEY=VALUE", help="parameter override, repeatable")
        p.add_argument("--levels", help="level N or inclusive range N..M")

    p = sub.add_parser("spectrum", help="energy levels of a potential")
    potential_args(p)
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", help="sampled normalized eigenfunctions or figure data")
    potential_args(p, required=False)
    p.add_argument("--figure", type=int, choices=(1, 2), help="emit a figure dataset instead")
    p.add_argument("--lower", type=float)
    p.add_argument("--upper", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--phi", type=float, default=0.0, help="azimuth for spherical harmonics")
    common(p)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--scope", choices=verification.SCOPES, default="all")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="reduction rows for the table instances")
    p.add_argument("--potential")
    common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("molecules", help="Morse / modified Hulthen molecule comparison")
    common(p)
    p.set_defaults(func=cmd_molecules)

    p = sub.add_parser("list", help="catalog ids with parameter schemas")
    common(p)
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        if not args.list:
            parser.error("a subcommand is required")
        args.format, args.output, args.func = "json", None, cmd_list
    if hasattr(args, "points"):
        args.points_given = args.points
        if args.points is None:
            args.points = DEFAULT_POINTS
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoBoundStates, LevelNotBound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUND
    except NuSpectraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
