"""Command-line front end: ``nidf {views,score,fuse,eval,pipeline,bench}``.

Exit status: 0 success, 2 input error, 3 numerical failure (including a
fusion run that stopped before lambda converged; artifacts are still
written in that case).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import load_csv
from .errors import InputError, NumericError
from .evaluation import evaluate_selection
from .interval import IntervalViews, build_views
from .pipeline import (
    RunConfig, fuse_views, fusion_summary, make_config, method_name, prepare, read_config_file,
    read_scores, read_views, run_bench, run_pipeline, score_paths, write_bench_table,
    write_json, write_scores, write_views,
)
from .scorers import FeatureScore, score_views

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("global options")
    g.add_argument("--config", help="key = value config file; flags override it")
    g.add_argument("--seed", type=int)
    g.add_argument("--normalize", choices=["zscore", "minmax", "none"])
    g.add_argument("--jobs", type=int)
    g.add_argument("--out-dir", default=".")
    g.add_argument("--label-col", help="label column name or 0-based index")
    g.add_argument("--selector", choices=["lapscore", "mcfs", "variance"])
    g.add_argument("--m-grid", help="e.g. 10:10:100 or 5,10,20")
    g.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="any config key, repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nidf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("views", help="write the four interval views as CSV")
    p.add_argument("dataset")

    p = sub.add_parser("score", help="score every view with the selector")
    p.add_argument("dataset")
    p.add_argument("--inputs", help="prefix of previously written view CSVs")

    p = sub.add_parser("fuse", help="fuse per-view scores into the final score z")
    p.add_argument("dataset")
    p.add_argument("--inputs", help="prefix of previously written view and score CSVs")
    p.add_argument("--dump-redundancy", action="store_true")

    p = sub.add_parser("eval", help="k-means ACC/NMI of a score vector over the m-grid")
    p.add_argument("dataset")
    p.add_argument("--scores", required=True, help="CSV of feature_id,score")
    p.add_argument("--method", default="custom")
    p.add_argument("--csv-row", help="also append a dataset,method,ACC,NMI row to this CSV")

    p = sub.add_parser("pipeline", help="views, scores, fusion, ranking and evaluation")
    p.add_argument("dataset")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--eval", dest="evaluate", action="store_true", default=None)
    grp.add_argument("--no-eval", dest="evaluate", action="store_false")
    p.add_argument("--timing", action="store_true", help="record runtime_ms in the report")
    p.add_argument("--dump-redundancy", action="store_true")

    p = sub.add_parser("bench", help="raw vs fused comparison table over datasets")
    p.add_argument("datasets", nargs="+")
    p.add_argument("--selectors", default="lapscore", help="comma-separated selector list")
    p.add_argument("--table", default=None, help="output CSV (default OUT_DIR/bench.csv)")

    for name in sub.choices:
        _common(sub.choices[name])
    return parser


def config_from_args(args) -> RunConfig:
    entries = read_config_file(args.config) if args.config else {}
    for item in args.set:
        if "=" not in item:
            raise InputError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        entries[key.strip()] = value.strip()
    flag_map = {
        "seed": args.seed, "normalize": args.normalize, "jobs": args.jobs,
        "label_col": args.label_col, "selector": args.selector, "m_grid": args.m_grid,
    }
    for key, value in flag_map.items():
        if value is not None:
            entries[key] = str(value)
    if getattr(args, "timing", False):
        entries["timing"] = "true"
    if getattr(args, "dump_redundancy", False):
        entries["dump_redundancy"] = "true"
    return make_config(entries)


def _load_views(args, cfg, Xn) -> IntervalViews:
    if getattr(args, "inputs", None):
        return read_views(args.inputs, Xn.labels is not None)
    return build_views(Xn, cfg.interval)


def cmd_views(args, cfg) -> int:
    X = prepare(load_csv(args.dataset, cfg.label_col), cfg)
    prefix = Path(args.out_dir) / Path(args.dataset).stem
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    for p in write_views(build_views(X, cfg.interval), prefix):
        print(p)
    return EXIT_OK


def cmd_score(args, cfg) -> int:
    X = prepare(load_csv(args.dataset, cfg.label_col), cfg)
    views = _load_views(args, cfg, X)
    scores = score_views(views, cfg.selector, cfg.selector_params, jobs=cfg.jobs)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    for score, path in zip(scores, score_paths(Path(args.out_dir) / Path(args.dataset).stem)):
        write_scores(path, X.feature_ids, score)
        print(path)
    return EXIT_OK


def cmd_fuse(args, cfg) -> int:
    X = prepare(load_csv(args.dataset, cfg.label_col), cfg)
    views = _load_views(args, cfg, X)
    scores = None
    if args.inputs:
        scores = []
        for tag, path in zip(views.tags, score_paths(args.inputs)):
            _, vals = read_scores(path)
            if vals.size != X.n_features:
                raise InputError(f"{path}: {vals.size} scores for {X.n_features} features")
            scores.append(FeatureScore(vals, cfg.selector, tag))
    run = fuse_views(views, cfg, scores)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.dataset).stem
    write_scores(out / f"{stem}.z.csv", X.feature_ids, run.z)
    write_json(out / f"{stem}.fusion.json", fusion_summary(run.state))
    print(out / f"{stem}.z.csv")
    return EXIT_OK if run.state.converged else EXIT_NUMERIC


def cmd_eval(args, cfg) -> int:
    X = prepare(load_csv(args.dataset, cfg.label_col), cfg)
    if X.labels is None:
        raise InputError("labels required for eval")
    ids, vals = read_scores(args.scores)
    if vals.size != X.n_features:
        raise InputError(f"{args.scores}: {vals.size} scores for {X.n_features} features")
    stem = Path(args.dataset).stem
    report = evaluate_selection(X, vals, cfg.m_grid, cfg.kmeans, args.method, stem, cfg.jobs)
    payload = report.to_dict()
    if not cfg.timing:
        payload["runtime_ms"] = None
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / f"{stem}.{args.method}.eval.json", payload)
    if args.csv_row:
        new = not Path(args.csv_row).exists()
        with open(args.csv_row, "a", encoding="utf-8") as fh:
            if new:
                fh.write("dataset,method,ACC,NMI\n")
            fh.write(f"{stem},{args.method},{report.acc_avg!r},{report.nmi_avg!r}\n")
    print(json.dumps({"acc_avg": report.acc_avg, "nmi_avg": report.nmi_avg}))
    return EXIT_OK


def cmd_pipeline(args, cfg) -> int:
    result = run_pipeline(args.dataset, cfg, args.out_dir, args.evaluate)
    for p in result.paths.values():
        print(p)
    return EXIT_OK if result.fusion.state.converged else EXIT_NUMERIC


def cmd_bench(args, cfg) -> int:
    selectors = [s.strip() for s in args.selectors.split(",") if s.strip()]
    for s in selectors:
        method_name(s, False)
    header, rows, n_ok, errors = run_bench(args.datasets, selectors, cfg, cfg.jobs)
    for (dataset, sel, fused), msg in errors.items():
        print(f"ERR {dataset} {method_name(sel, fused)}: {msg}", file=sys.stderr)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    table = args.table or str(Path(args.out_dir) / "bench.csv")
    write_bench_table(table, header, rows)
    print(table)
    return EXIT_OK if n_ok >= 1 else EXIT_NUMERIC


COMMANDS = {
    "views": cmd_views, "score": cmd_score, "fuse": cmd_fuse,
    "eval": cmd_eval, "pipeline": cmd_pipeline, "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](args, cfg)
    except InputError as exc:
        print(f"nidf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"nidf: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
