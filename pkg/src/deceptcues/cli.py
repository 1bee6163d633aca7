"""Command-line pipeline: extract -> stats -> select -> evaluate -> report."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import stats as st
from .corpus import CorpusError, atomic_write_text, class_balance, convert_upstream, load_corpus, save_corpus
from .evaluation import DEFAULT_CLASSIFIERS, DEFAULT_GRIDS, run_experiment
from .features import FEATURE_NAMES, SPARSE_FEATURES, extract_corpus, load_features, save_features
from .learners import CLASSIFIERS, LearnerError
from .lingpipe.lexicon import LexiconError, load_lexicons
from .selection import RfeTrace, SelectionReport, build_selection_report, matrix_dataset, rfe

log = logging.getLogger("deceptcues")

DEFAULT_SEED = 42
DATASET_ENV = "DECEPTCUES_DATASET"
BUNDLED_DATASET = "restaurant_reviews.csv"
SAMPLE_DATASET = "sample_reviews.csv"

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_MISSING = 0, 1, 2, 3

FEATURES_FILE = "features.csv"
STATS_JSON, STATS_CSV, HIST_DIR, CORR_CSV = "stats.json", "stats.csv", "histograms", "feature_correlations.csv"
SELECTION_JSON, SELECTION_CSV, RFE_JSON = "selection_report.json", "selection_report.csv", "rfe_trace.json"
GRID_CSV, MAX_CSV, EVAL_JSON = "eval_grid.csv", "eval_max.csv", "eval_detail.json"
REPORT_MD, REPORT_JSON = "report.md", "report.json"


class UsageError(Exception):
    """Bad invocation (exit 2)."""


class MissingPrerequisite(Exception):
    """A required input or earlier artifact is absent (exit 3)."""


def data_file(name: str) -> Path:
    return Path(str(resources.files("deceptcues") / "data" / name))


def bundled_dataset() -> Path:
    """Location of the canonical restaurant review corpus, if installed."""
    override = os.environ.get(DATASET_ENV)
    path = Path(override) if override else data_file(BUNDLED_DATASET)
    if not path.is_file():
        raise MissingPrerequisite(
            f"dataset not found at {path}; convert the upstream release with "
            f"'deceptcues import-dataset --input <checkout> --output {data_file(BUNDLED_DATASET)}' "
            f"or pass --input"
        )
    return path


def _dumps_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_text(rows) -> str:
    buf = io.StringIO(newline="")
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(path: Path, what: str) -> Path:
    if not path.is_file():
        raise MissingPrerequisite(f"missing {what}: {path}")
    return path


def _features_input(args) -> Path:
    if getattr(args, "input", None):
        return _require(Path(args.input), "features file")
    return _require(Path(args.outdir) / FEATURES_FILE, "features file (run 'extract' first)")


def _load_matrix(args):
    matrix = load_features(_features_input(args))
    if len(matrix) < 3:
        raise MissingPrerequisite("features file has fewer than 3 rows")
    return matrix


# -- extract ------------------------------------------------------------------

def cmd_extract(args) -> int:
    for flag in ("dictionary", "allowlist"):
        value = getattr(args, flag)
        if value is not None and not Path(value).is_file():
            raise UsageError(f"--{flag}: file not found: {value}")
    source = Path(args.input) if args.input else bundled_dataset()
    corpus = load_corpus(_require(source, "corpus"))
    lexicons = load_lexicons(args.dictionary, args.allowlist)
    matrix = extract_corpus(corpus, lexicons, typo_ratio=args.typo_ratio)
    out = _outdir(args)
    save_features(matrix, out / FEATURES_FILE)
    if len(corpus) == 0:
        log.warning("corpus %s is empty; wrote header-only %s", source, FEATURES_FILE)
        return EXIT_OK
    balance = class_balance(corpus)
    print(f"{len(corpus)} reviews ({', '.join(f'{k.value}={v}' for k, v in balance.items())}) -> {out / FEATURES_FILE}")
    print(f"{'feature':<22}{'mean':>10}{'sd':>10}{'min':>10}{'max':>10}")
    for j, name in enumerate(matrix.feature_names):
        col = matrix.X[:, j]
        print(f"{name:<22}{col.mean():>10.3f}{col.std():>10.3f}{col.min():>10.3f}{col.max():>10.3f}")
    return EXIT_OK


# -- stats --------------------------------------------------------------------

def compute_stats(matrix) -> list[dict]:
    """Per-feature OVL, Kruskal-Wallis and class summaries, ascending by OVL."""
    y = matrix.y
    rows = []
    for name in matrix.feature_names:
        col = matrix.column(name)
        fake, real = col[y == 1], col[y == 0]
        o = st.ovl(st.kde_fit(fake), st.kde_fit(real), feature_name=name)
        kw = st.kruskal_wallis(fake, real)
        rows.append({
            "feature": name,
            "ovl": o.value,
            "scale": o.scale,
            "kw_h": kw.statistic,
            "kw_p": kw.p_value,
            "mean_fake": float(fake.mean()),
            "mean_real": float(real.mean()),
            "sd_fake": float(fake.std(ddof=1)),
            "sd_real": float(real.std(ddof=1)),
            "bandwidth_fake": st.silverman_bandwidth(fake),
            "bandwidth_real": st.silverman_bandwidth(real),
        })
    rows.sort(key=lambda r: (r["ovl"], r["feature"]))
    return rows


def cmd_stats(args) -> int:
    matrix = _load_matrix(args)
    out = _outdir(args)
    rows = compute_stats(matrix)
    atomic_write_text(out / STATS_JSON, _dumps_json({"features": rows, "n_fake": int(matrix.y.sum()),
                                                      "n_real": int((1 - matrix.y).sum())}))
    table = [["feature", "ovl", "scale", "kw_h", "kw_p", "mean_fake", "mean_real"]]
    table += [[r["feature"], _fmt(r["ovl"]), r["scale"], _fmt(r["kw_h"]), f"{r['kw_p']:.6g}", _fmt(r["mean_fake"]),
               _fmt(r["mean_real"])] for r in rows]
    atomic_write_text(out / STATS_CSV, _csv_text(table))
    hist_dir = out / HIST_DIR
    hist_dir.mkdir(exist_ok=True)
    y = matrix.y
    for name in matrix.feature_names:
        col = matrix.column(name)
        h = st.histogram_export(col[y == 1], col[y == 0], bins=20)
        keys = ["bin_left", "bin_right", "density_fake", "density_real", "kde_fake", "kde_real"]
        body = [keys] + [[f"{h[k][i]:.9g}" for k in keys] for i in range(len(h["bin_left"]))]
        atomic_write_text(hist_dir / f"{name}.csv", _csv_text(body))
    corr = st.spearman_matrix(matrix.X, matrix.feature_names)
    body = [["feature", *matrix.feature_names]]
    body += [[n, *(_fmt(v) for v in corr[i])] for i, n in enumerate(matrix.feature_names)]
    atomic_write_text(out / CORR_CSV, _csv_text(body))
    print(f"{'feature':<22}{'OVL':>8}  {'scale':<9}{'KW p':>10}")
    for r in rows:
        print(f"{r['feature']:<22}{r['ovl']:>8.3f}  {r['scale']:<9}{r['kw_p']:>10.4f}")
    return EXIT_OK


# -- select -------------------------------------------------------------------

def cmd_select(args) -> int:
    matrix = _load_matrix(args)
    out = _outdir(args)
    data = matrix_dataset(matrix)
    trace = rfe(data, 1, seed=args.seed)
    atomic_write_text(out / RFE_JSON, _dumps_json(trace.to_json()))
    report = build_selection_report(data, seed=args.seed, boruta_iterations=args.boruta_iterations, trace=trace)
    atomic_write_text(out / SELECTION_JSON, report.dumps())
    atomic_write_text(out / SELECTION_CSV, report.to_csv())
    print(f"{'feature':<22}{'RF imp':>8}{'RFE it':>8}{'hits':>6}  {'Boruta':<12}{'OVL':>7}")
    for r in report.rows:
        print(f"{r.feature:<22}{r.rf_importance:>8.4f}{r.rfe_first_iteration:>8}{r.boruta_hits:>6}  "
              f"{r.boruta_zone:<12}{r.ovl:>7.3f}")
    print(f"Spearman rho(importance, OVL) = {report.rho_all:.3f}; without {', '.join(report.excluded_sparse)}: "
          f"{report.rho_without_sparse:.3f}")
    return EXIT_OK


# -- evaluate -------------------------------------------------------------------

def parse_classifiers(text: str | None) -> tuple[str, ...]:
    if not text:
        return DEFAULT_CLASSIFIERS
    names = tuple(s.strip().lower() for s in text.split(",") if s.strip())
    bad = [n for n in names if n not in CLASSIFIERS]
    if bad or not names:
        raise UsageError(f"--classifiers: unknown classifier(s) {', '.join(bad) or '(none)'}; "
                         f"choose from {', '.join(CLASSIFIERS)}")
    return tuple(dict.fromkeys(names))


def load_grid_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"--grid-config: file not found: {path}")
    try:
        cfg = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"--grid-config: invalid JSON: {exc}") from None
    if not isinstance(cfg, dict) or any(k not in CLASSIFIERS or not isinstance(v, dict) for k, v in cfg.items()):
        raise UsageError(f"--grid-config: expected an object keyed by {', '.join(CLASSIFIERS)}")
    return cfg


def cmd_evaluate(args) -> int:
    classifiers = parse_classifiers(args.classifiers)
    grids = load_grid_config(args.grid_config)
    matrix = _load_matrix(args)
    out = _outdir(args)
    trace_path = out / RFE_JSON
    trace = None
    if trace_path.is_file():
        trace = RfeTrace.from_json(json.loads(trace_path.read_text(encoding="utf-8")))
        if set(trace.feature_names) != set(matrix.feature_names):
            log.warning("%s does not match the feature columns; recomputing RFE", trace_path)
            trace = None
    if trace is None:
        trace = rfe(matrix_dataset(matrix), 1, seed=args.seed)
        atomic_write_text(trace_path, _dumps_json(trace.to_json()))
    subsets = [trace.subset(i) for i in range(1, len(trace.feature_names) + 1)]

    def progress(clf, n):
        log.info("evaluating %s on %d feature(s)", clf, n)

    grid = run_experiment(matrix, subsets, classifiers, k=args.kfolds, seed=args.seed, grids=grids,
                          progress=progress)
    atomic_write_text(out / GRID_CSV, grid.grid_csv())
    atomic_write_text(out / MAX_CSV, grid.max_csv())
    detail = grid.to_json()
    detail["grids"] = {c: {**DEFAULT_GRIDS.get(c, {}), **grids.get(c, {})} for c in classifiers}
    atomic_write_text(out / EVAL_JSON, _dumps_json(detail))
    print(grid.max_csv(), end="")
    return EXIT_OK


# -- report -----------------------------------------------------------------------

def build_report(outdir: Path) -> tuple[str, dict]:
    """Join the stats, selection and evaluation artifacts of ``outdir``."""
    stats = json.loads(_require(outdir / STATS_JSON, STATS_JSON).read_text(encoding="utf-8"))
    sel = SelectionReport.from_json(
        json.loads(_require(outdir / SELECTION_JSON, SELECTION_JSON).read_text(encoding="utf-8")))
    detail = json.loads(_require(outdir / EVAL_JSON, EVAL_JSON).read_text(encoding="utf-8"))
    if sel.rfe is None:
        raise MissingPrerequisite(f"{SELECTION_JSON} has no RFE trace")

    top3 = [r.feature for r in sel.rows[:3]]
    rfe3 = sel.rfe.subset(3) if len(sel.rfe.feature_names) >= 3 else sel.rfe.subset(len(sel.rfe.feature_names))
    kw_sig = [r.feature for r in sel.rows if r.kw_p < 0.05]
    key = [f for f in top3 if f in set(rfe3) and f in set(kw_sig)]
    maxima = detail["maxima"]
    best = max(detail["cells"], key=lambda c: (c["accuracy"], -c["n_features"])) if detail["cells"] else None

    summary = {
        "ovl_order": [{"feature": r["feature"], "ovl": r["ovl"], "scale": r["scale"]} for r in stats["features"]],
        "selection": [
            {"feature": r.feature, "rf_importance": r.rf_importance, "rfe_first_iteration": r.rfe_first_iteration,
             "boruta_hits": r.boruta_hits, "boruta_zone": r.boruta_zone, "kw_p": r.kw_p}
            for r in sel.rows
        ],
        "spearman_importance_vs_ovl": {"all_features": sel.rho_all, "sparse_excluded": sel.rho_without_sparse,
                                       "excluded": list(sel.excluded_sparse)},
        "top3_rf": top3,
        "rfe_f3": rfe3,
        "kw_significant": kw_sig,
        "key_features": key,
        "classifier_maxima": maxima,
        "best_cell": best and {k: best[k] for k in ("classifier", "n_features", "accuracy", "f1", "params")},
    }

    md = ["# Deception cue analysis", ""]
    md += ["## Overlapping coefficients (ascending)", "", "| feature | OVL | scale |", "|---|---|---|"]
    md += [f"| {r['feature']} | {r['ovl']:.3f} | {r['scale']} |" for r in stats["features"]]
    md += ["", "## Feature selection", "",
           "| feature | RF importance | RFE iteration | Boruta hits | Boruta zone | KW p |", "|---|---|---|---|---|---|"]
    md += [f"| {r.feature} | {r.rf_importance:.4f} | {r.rfe_first_iteration} | {r.boruta_hits} | {r.boruta_zone} "
           f"| {r.kw_p:.4g} |" for r in sel.rows]
    md += ["", f"Spearman correlation between RF importance and OVL: {sel.rho_all:.3f} over all features, "
               f"{sel.rho_without_sparse:.3f} without {', '.join(sel.excluded_sparse)}.", ""]
    md += ["## Key features", "",
           f"- top 3 by RF importance: {', '.join(top3)}",
           f"- RFE set F3: {', '.join(rfe3)}",
           f"- Kruskal-Wallis p < 0.05: {', '.join(kw_sig) or 'none'}",
           f"- common to all three: {', '.join(key) or 'none'}", ""]
    md += ["## Best classifier results", "", "| classifier | max accuracy | # features | max F1 | # features |",
           "|---|---|---|---|---|"]
    md += [f"| {c} | {m['max_accuracy']:.4f} | {m['n_features_accuracy']} | {m['max_f1']:.4f} | {m['n_features_f1']} |"
           for c, m in maxima.items()]
    if best:
        md += ["", f"Best cell: {best['classifier']} with {best['n_features']} feature(s), "
                   f"accuracy {best['accuracy']:.4f}, F1 {best['f1']:.4f}."]
    return "\n".join(md) + "\n", summary


def cmd_report(args) -> int:
    out = Path(args.outdir)
    md, summary = build_report(out)
    atomic_write_text(out / REPORT_MD, md)
    atomic_write_text(out / REPORT_JSON, _dumps_json(summary))
    print(md, end="")
    return EXIT_OK


# -- run-all / import ------------------------------------------------------------------

def cmd_run_all(args) -> int:
    corpus_input = args.input
    cmd_extract(args)
    args.input = None  # later stages read outdir/features.csv
    for step in (cmd_stats, cmd_select, cmd_evaluate, cmd_report):
        step(args)
    args.input = corpus_input
    return EXIT_OK


def cmd_import_dataset(args) -> int:
    if not Path(args.input).exists():
        raise MissingPrerequisite(f"upstream dataset not found: {args.input}")
    corpus = convert_upstream(args.input, text_column=args.text_column, label_column=args.label_column)
    save_corpus(corpus, args.output)
    balance = class_balance(corpus)
    print(f"wrote {len(corpus)} reviews ({', '.join(f'{k.value}={v}' for k, v in balance.items())}) to {args.output}")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deceptcues", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_help):
        p.add_argument("--input", help=input_help)
        p.add_argument("--outdir", default="artifacts", help="artifact directory (default: %(default)s)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default: %(default)s)")

    def extract_flags(p):
        p.add_argument("--dictionary", help="word list replacing the bundled spelling dictionary")
        p.add_argument("--allowlist", help="extra words never counted as typos")
        p.add_argument("--typo-ratio", action="store_true", help="report typos per word instead of counts")

    def select_flags(p):
        p.add_argument("--boruta-iterations", type=int, default=100, help="default: %(default)s")

    def eval_flags(p):
        p.add_argument("--classifiers", help=f"comma list from {','.join(CLASSIFIERS)} (default: all)")
        p.add_argument("--kfolds", type=int, default=10, help="default: %(default)s")
        p.add_argument("--grid-config", help="JSON file overriding hyperparameter grids")

    p = sub.add_parser("extract", help="compute the 15 cues for every review")
    common(p, "canonical corpus CSV (default: bundled dataset)")
    extract_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="OVL, Kruskal-Wallis, histograms and correlations")
    common(p, "features CSV (default: OUTDIR/features.csv)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("select", help="RF ranking, RFE, Boruta and the selection report")
    common(p, "features CSV (default: OUTDIR/features.csv)")
    select_flags(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("evaluate", help="grid-searched CV of each classifier on nested RFE sets")
    common(p, "features CSV (default: OUTDIR/features.csv)")
    eval_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="summarise existing artifacts")
    p.add_argument("--outdir", default="artifacts", help="artifact directory (default: %(default)s)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run-all", help="extract, stats, select, evaluate and report")
    common(p, "canonical corpus CSV (default: bundled dataset)")
    extract_flags(p)
    select_flags(p)
    eval_flags(p)
    p.set_defaults(func=cmd_run_all)

    p = sub.add_parser("import-dataset", help="convert an upstream dataset export to the canonical CSV")
    p.add_argument("--input", required=True, help="upstream file or directory")
    p.add_argument("--output", required=True, help="canonical CSV to write")
    p.add_argument("--text-column")
    p.add_argument("--label-column")
    p.set_defaults(func=cmd_import_dataset)
    return parser


def validate(args) -> None:
    if getattr(args, "kfolds", 10) < 2:
        raise UsageError("--kfolds must be at least 2")
    if getattr(args, "boruta_iterations", 100) < 10:
        raise UsageError("--boruta-iterations must be at least 10")
    if hasattr(args, "classifiers"):
        parse_classifiers(args.classifiers)
        load_grid_config(args.grid_config)
    for flag in ("dictionary", "allowlist"):
        value = getattr(args, flag, None)
        if value is not None and not Path(value).is_file():
            raise UsageError(f"--{flag}: file not found: {value}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        validate(args)
        return args.func(args)
    except UsageError as exc:
        print(f"deceptcues: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingPrerequisite as exc:
        print(f"deceptcues: missing prerequisite: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (CorpusError, LexiconError, LearnerError, st.StatsError, ValueError, OSError) as exc:
        print(f"deceptcues: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
