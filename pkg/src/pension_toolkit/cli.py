"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 data or domain error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import os
import sys
import warnings
from pathlib import Path

from . import __version__
from .aaf import aaf_proposal1, aaf_proposal2, reform_gap
from .cluster import COLUMN_SETS, FEATURE_SETS, cluster_report, cut_dendrogram, distance_matrix, kmeans, \
    life_features, single_linkage
from .core_types import Basis, MoneyConfig, load_reference_tables, validate_records
from .edb import edb_aggregate
from .errors import PensionToolkitError
from .io import read_beneficiaries, read_economics, sha256_file, write_csv, write_json
from .reports import (AAF_COLUMNS, COEF_COLUMNS, EDB_COLUMNS, INFLUENCE_COLUMNS, LABEL_COLUMNS, MERGE_COLUMNS,
                      MODEL_COLUMNS, REFORM_COLUMNS, TURNING_COLUMNS, VIF_COLUMNS, aaf_doc, aaf_rows,
                      cluster_doc, edb_doc, edb_rows, label_rows, merge_rows, plot_tables, reform_rows,
                      regress_doc, regress_tables, validation_doc)
from .statlab.ols import DEFAULT_RATIO_SCALE, REGRESSORS, RESPONSES
from .statlab.selection import select_model, standard_candidates

SEED_ENV = "PENSION_TOOLKIT_SEED"
DEFAULT_SEED = 0
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
BASES = {"at65": Basis.AFTER65, "birth": Basis.BIRTH}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _csv_list(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rate", type=float, default=0.06, help="annual discount rate")
    common.add_argument("--benefit", type=float, default=None, help="monthly benefit in EUR")
    common.add_argument("--fx", type=float, default=4.35, help="BRL per EUR")
    common.add_argument("--reference-date", type=_date, default=dt.date(2018, 4, 6))
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--format", choices=("csv", "json", "both"), default="both")

    p = _Parser(prog="pension-toolkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("validate", parents=[common], help="check a beneficiaries file")
    v.add_argument("--input", type=Path, required=True)

    e = sub.add_parser("edb", parents=[common], help="expected discounted benefit report")
    e.add_argument("--input", type=Path, required=True)
    e.add_argument("--le-basis", choices=("at65", "birth", "both"), default="at65")

    a = sub.add_parser("aaf", parents=[common], help="age adjusting factors")
    a.add_argument("--input", type=Path, required=True)
    a.add_argument("--proposal", choices=("1", "2", "both"), default="both")
    a.add_argument("--target", choices=("sex", "national"), default="sex")
    a.add_argument("--method", choices=("equalize", "annuity"), default="equalize")
    a.add_argument("--le-basis", choices=("at65", "birth"), default="birth")

    r = sub.add_parser("reform", parents=[common], help="male life expectancy at birth minus a new age")
    r.add_argument("--new-age", type=float, default=70.0)

    g = sub.add_parser("regress", parents=[common], help="fit and diagnose the regression candidates")
    g.add_argument("--input", type=Path, required=True)
    g.add_argument("--response", choices=(*RESPONSES, "all"), default="all")
    g.add_argument("--regressors", type=_csv_list, default=("income_pc", "le_birth"))
    g.add_argument("--quadratic", type=_csv_list, default=("income_pc", "le_birth"))
    g.add_argument("--transform", choices=("none", "boxcox", "yeojohnson", "all"), default="all")
    g.add_argument("--alpha", type=float, default=0.10)
    g.add_argument("--ratio-scale", type=float, default=DEFAULT_RATIO_SCALE)
    g.add_argument("--emit-plot-data", action="store_true")

    c = sub.add_parser("cluster", parents=[common], help="cluster UFs on life expectancies")
    c.add_argument("--features", choices=FEATURE_SETS, default="birth")
    c.add_argument("--columns", choices=tuple(COLUMN_SETS), default="total")
    c.add_argument("--method", choices=("single", "kmeans"), default="single")
    c.add_argument("--k", type=int, default=4)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--standardize", action="store_true")
    return p


def _money_config(args) -> MoneyConfig:
    kw = dict(annual_rate=args.rate, exchange_rate=args.fx, reference_date=args.reference_date)
    if args.benefit is not None:
        kw["benefit_b"] = args.benefit
    try:
        return MoneyConfig(**kw)
    except PensionToolkitError as exc:
        raise ConfigError(str(exc)) from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _emit(args, stem: str, header, rows, doc) -> list[Path]:
    written = []
    if args.format in ("csv", "both") and header is not None:
        written.append(write_csv(args.out / f"{stem}.csv", header, rows))
    if args.format in ("json", "both") and doc is not None:
        written.append(write_json(args.out / f"{stem}.json", doc))
    return written


def _manifest(args, inputs: dict[str, Path], counts: dict | None = None, extra: dict | None = None) -> Path:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    doc = {
        "schema_version": "1",
        "tool_version": __version__,
        "command": args.command,
        "config": config,
        "inputs": {name: {"path": str(p), "sha256": sha256_file(p)} for name, p in inputs.items()},
        "row_counts": counts or {},
        "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    }
    if extra:
        doc.update(extra)
    return write_json(args.out / "manifest.json", doc)


def _load(args):
    if not args.input.is_file():
        raise FileNotFoundError(f"input file not found: {args.input}")
    report = validate_records(read_beneficiaries(args.input))
    return report


def run_validate(args) -> None:
    report = _load(args)
    _emit(args, "validation", ("row", "id", "reason"),
          [(r.index, r.id, r.reason) for r in report.rejected], validation_doc(report))
    _manifest(args, {"beneficiaries": args.input}, report.counts())


def run_edb(args) -> None:
    cfg = _money_config(args)
    report = _load(args)
    table, _ = load_reference_tables()
    bases = [Basis.AFTER65, Basis.BIRTH] if args.le_basis == "both" else [BASES[args.le_basis]]
    edbs = [edb_aggregate(report.elderly(), table, cfg, b) for b in bases]
    rows = [row for r in edbs for row in edb_rows(r)]
    _emit(args, "edb_report", EDB_COLUMNS, rows, edb_doc(edbs))
    _manifest(args, {"beneficiaries": args.input}, report.counts(),
              {"benefit_eur": cfg.benefit_b})


def run_aaf(args) -> None:
    cfg = _money_config(args)
    report = _load(args)
    table, _ = load_reference_tables()
    basis = BASES[args.le_basis]
    results = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.proposal in ("1", "both"):
            results += aaf_proposal1(report.elderly(), table, cfg, target=args.target, method=args.method,
                                     basis=basis)
        if args.proposal in ("2", "both"):
            results += aaf_proposal2(report.elderly(), table, cfg, method=args.method, basis=basis)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(args, "aaf_report", AAF_COLUMNS, aaf_rows(results), aaf_doc(results, args.method, args.target))
    _manifest(args, {"beneficiaries": args.input}, report.counts(),
              {"warnings": [str(w.message) for w in caught], "benefit_eur": cfg.benefit_b})


def run_reform(args) -> None:
    table, _ = load_reference_tables()
    gaps = reform_gap(table, args.new_age)
    _emit(args, "reform", REFORM_COLUMNS, reform_rows(gaps),
          {"schema_version": "1", "new_age": args.new_age,
           "gaps": [{"uf_num": g.uf, "gap_years": g.gap_years} for g in gaps]})
    _manifest(args, {}, {"ufs": len(gaps)})


def run_regress(args) -> None:
    if not args.input.is_file():
        raise FileNotFoundError(f"input file not found: {args.input}")
    for name in (*args.regressors, *args.quadratic):
        if name not in REGRESSORS:
            raise ConfigError(f"unknown regressor {name!r}; choose from {REGRESSORS}")
    rows = read_economics(args.input)
    responses = list(RESPONSES) if args.response == "all" else [args.response]
    selections = {}
    for resp in responses:
        cands = standard_candidates(resp, args.regressors, args.quadratic)
        if args.transform != "all":
            cands = [c for c in cands if c.transform.family == args.transform]
        selections[resp] = select_model(cands, rows, alpha=args.alpha, ratio_scale=args.ratio_scale)
    tables = regress_tables(selections)
    settings = {"alpha": args.alpha, "ratio_scale": args.ratio_scale, "reset_powers": [2, 3],
                "rainbow_central_fraction": 0.5, "regressors": args.regressors, "quadratic": args.quadratic}
    _emit(args, "regress_models", MODEL_COLUMNS, tables["models"], regress_doc(selections, settings))
    if args.format in ("csv", "both"):
        write_csv(args.out / "regress_coefficients.csv", COEF_COLUMNS, tables["coefficients"])
        write_csv(args.out / "regress_influence.csv", INFLUENCE_COLUMNS, tables["influence"])
        write_csv(args.out / "regress_turning_points.csv", TURNING_COLUMNS, tables["turning_points"])
        write_csv(args.out / "regress_vif.csv", VIF_COLUMNS, tables["vif"])
    if args.emit_plot_data:
        for panel, prow in plot_tables(selections).items():
            write_csv(args.out / f"plot_{panel}.csv", prow[0], prow[1:])
    _manifest(args, {"economics": args.input}, {"ufs": len(rows)})


def run_cluster(args) -> None:
    seed = _seed(args)
    table, _ = load_reference_tables()
    if not 1 <= args.k <= len(table):
        raise ConfigError(f"--k must lie in [1, {len(table)}]")
    feats = life_features(table, args.features, args.columns, args.standardize)
    dend = single_linkage(distance_matrix(feats))
    hier = cut_dendrogram(dend, args.k)
    flat = kmeans(feats, args.k, seed=seed)
    primary, other = (hier, flat) if args.method == "single" else (flat, hier)
    report = cluster_report(primary, feats.ufs, other)
    if args.format in ("csv", "both"):
        write_csv(args.out / "merges.csv", MERGE_COLUMNS, merge_rows(dend))
    settings = {"features": args.features, "columns": list(feats.columns), "method": args.method, "k": args.k,
                "seed": seed, "standardize": args.standardize, "kmeans_objective": flat.objective}
    _emit(args, "labels", LABEL_COLUMNS, label_rows(report),
          cluster_doc(report, settings, "kmeans" if args.method == "single" else "single"))
    _manifest(args, {}, {"ufs": len(feats.ufs)}, {"seed": seed})


COMMANDS = {
    "validate": run_validate,
    "edb": run_edb,
    "aaf": run_aaf,
    "reform": run_reform,
    "regress": run_regress,
    "cluster": run_cluster,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PensionToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in getattr(exc, "diagnostics", []):
            print(f"  {line}", file=sys.stderr)
        return EXIT_DATA
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
