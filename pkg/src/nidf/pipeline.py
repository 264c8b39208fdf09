"""End-to-end runs: interval views -> per-view scores -> fusion -> ranking -> evaluation.

Also holds the run configuration (a flat ``key = value`` text format), the
artifact writers/readers and the raw-vs-fused benchmark table.
"""
from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .data import DataMatrix, load_csv, normalize, write_csv
from .errors import InputError, NIDFError
from .evaluation import EvalReport, KMeansConfig, evaluate_selection
from .fusion import FusionConfig, FusionState, run_nidf
from .interval import IntervalConfig, IntervalViews, build_views
from .redundancy import RedundancyMatrix, redundancy_matrix
from .scorers import FeatureScore, SelectorConfig, score_matrix, score_views

VIEW_SUFFIXES = ("slow", "sup", "flow", "fup")
METHOD_NAMES = {"lapscore": "LapScore", "mcfs": "MCFS", "variance": "Variance"}


@dataclass(frozen=True)
class RunConfig:
    normalize: str = "zscore"
    interval: IntervalConfig = IntervalConfig()
    selector: str = "lapscore"
    selector_params: SelectorConfig = SelectorConfig()
    fusion: FusionConfig = FusionConfig()
    kmeans: KMeansConfig = KMeansConfig()
    m_grid: Optional[Tuple[int, ...]] = None
    redundancy_eps: float = 1e-8
    label_col: Optional[str] = None
    seed: int = 0
    jobs: int = 1
    timing: bool = False
    dump_redundancy: bool = False

    def __post_init__(self):
        if self.selector not in METHOD_NAMES:
            raise InputError(f"unknown selector {self.selector!r}; choose from {sorted(METHOD_NAMES)}")
        if self.jobs < 1:
            raise InputError(f"jobs must be >= 1, got {self.jobs}")


# flat config key -> (section attribute or None, field name, parser)
def _parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise InputError(f"not a boolean: {text!r}")


def _parse_optional_int(text):
    return None if str(text).strip().lower() in ("", "none", "auto") else int(text)


def _parse_bandwidth(text):
    text = str(text).strip()
    return "auto" if text == "auto" else float(text)


def parse_m_grid(text) -> Optional[Tuple[int, ...]]:
    """``"10:10:100"`` (start:step:stop, inclusive), ``"5,10,20"`` or ``auto``."""
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return tuple(int(m) for m in text)
    text = str(text).strip()
    if text in ("", "auto", "none"):
        return None
    if ":" in text:
        start, step, stop = (int(p) for p in text.split(":"))
        if step < 1:
            raise InputError(f"m-grid step must be positive: {text!r}")
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(","))


CONFIG_KEYS = {
    "normalize": (None, "normalize", str),
    "selector": (None, "selector", str),
    "seed": (None, "seed", int),
    "jobs": (None, "jobs", int),
    "label_col": (None, "label_col", lambda t: None if t in ("", "none") else str(t)),
    "m_grid": (None, "m_grid", parse_m_grid),
    "redundancy_eps": (None, "redundancy_eps", float),
    "timing": (None, "timing", _parse_bool),
    "dump_redundancy": (None, "dump_redundancy", _parse_bool),
    "interval_k": ("interval", "k", int),
    "alpha": ("interval", "alpha", float),
    "scale_rule": ("interval", "scale_rule", str),
    "include_self": ("interval", "include_self", _parse_bool),
    "graph_k": ("selector_params", "graph_k", int),
    "bandwidth": ("selector_params", "bandwidth", _parse_bandwidth),
    "n_embed": ("selector_params", "n_embed", _parse_optional_int),
    "gamma": ("selector_params", "gamma", float),
    "outer_tol": ("fusion", "outer_tol", float),
    "outer_max_iter": ("fusion", "outer_max_iter", int),
    "qp_tol": ("fusion", "qp_tol", float),
    "qp_max_iter": ("fusion", "qp_max_iter", int),
    "lambda_floor": ("fusion", "lambda_floor", float),
    "n_clusters": ("kmeans", "n_clusters", _parse_optional_int),
    "restarts": ("kmeans", "restarts", int),
    "kmeans_max_iter": ("kmeans", "max_iter", int),
}


def read_config_file(path) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key = value")
            key, value = (p.strip() for p in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
            entries[key] = value
    return entries


def make_config(entries: Dict[str, object], base: RunConfig = RunConfig()) -> RunConfig:
    """Apply flat overrides to ``base``. The seed also seeds k-means."""
    top, sections = {}, {}
    for key, raw in entries.items():
        if raw is None:
            continue
        if key not in CONFIG_KEYS:
            raise InputError(f"unknown config key {key!r}")
        section, name, parse = CONFIG_KEYS[key]
        try:
            value = parse(raw) if isinstance(raw, str) or parse is parse_m_grid else raw
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad value for {key}: {raw!r} ({exc})") from None
        if section is None:
            top[name] = value
        else:
            sections.setdefault(section, {})[name] = value
    for section, updates in sections.items():
        top[section] = replace(getattr(base, section), **updates)
    cfg = replace(base, **top)
    if cfg.kmeans.seed != cfg.seed:
        cfg = replace(cfg, kmeans=replace(cfg.kmeans, seed=cfg.seed))
    return cfg


# ---------------------------------------------------------------------------
# core computation


@dataclass
class FusionRun:
    z: FeatureScore
    state: FusionState
    views: IntervalViews
    scores: List[FeatureScore]
    redundancies: List[RedundancyMatrix]


def prepare(X: DataMatrix, cfg: RunConfig) -> DataMatrix:
    return normalize(X, cfg.normalize)


def fuse_views(views: IntervalViews, cfg: RunConfig, scores: Optional[List[FeatureScore]] = None) -> FusionRun:
    if scores is None:
        scores = score_views(views, cfg.selector, cfg.selector_params, jobs=cfg.jobs)
    reds = [redundancy_matrix(v, tag, cfg.redundancy_eps) for v, tag in zip(views, views.tags)]
    z, state = run_nidf(reds, scores, cfg.fusion)
    return FusionRun(z, state, views, scores, reds)


def nidf_select(X: DataMatrix, cfg: RunConfig = RunConfig()) -> FusionRun:
    """Views, per-view scores and fusion on an already-normalized dataset."""
    return fuse_views(build_views(X, cfg.interval), cfg)


def raw_select(X: DataMatrix, cfg: RunConfig = RunConfig()) -> FeatureScore:
    """The selector alone on the (normalized) original data."""
    return score_matrix(X, cfg.selector, cfg.selector_params)


# ---------------------------------------------------------------------------
# artifact I/O


def write_scores(path, feature_ids: Sequence[str], values) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature_id", "score"])
        for fid, v in zip(feature_ids, np.asarray(getattr(values, "values", values))):
            writer.writerow([fid, repr(float(v))])


def read_scores(path) -> Tuple[Tuple[str, ...], np.ndarray]:
    if not os.path.isfile(path):
        raise InputError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or [h.strip() for h in rows[0]] != ["feature_id", "score"]:
        raise InputError(f"{path}: expected header 'feature_id,score'")
    ids, vals = [], []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != 2:
            raise InputError(f"{path}: row {lineno} has {len(row)} fields, expected 2")
        try:
            vals.append(float(row[1]))
        except ValueError:
            raise InputError(f"{path}: non-numeric score {row[1]!r} at row {lineno}") from None
        ids.append(row[0])
    return tuple(ids), np.array(vals)


def write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, allow_nan=False)
        fh.write("\n")


def view_paths(prefix) -> List[Path]:
    return [Path(f"{prefix}.{s}.csv") for s in VIEW_SUFFIXES]


def score_paths(prefix) -> List[Path]:
    return [Path(f"{prefix}.{s}.score.csv") for s in VIEW_SUFFIXES]


def write_views(views: IntervalViews, prefix) -> List[Path]:
    paths = view_paths(prefix)
    for view, path in zip(views, paths):
        write_csv(view, path)
    return paths


def read_views(prefix, has_labels: bool) -> IntervalViews:
    mats = [load_csv(p, "label" if has_labels else None) for p in view_paths(prefix)]
    return IntervalViews(*mats)


def fusion_summary(state: FusionState) -> dict:
    return {
        "lambda": float(state.lam),
        "w": [float(x) for x in state.w],
        "iterations": int(state.iteration),
        "converged": bool(state.converged),
        "objective_history": [float(x) for x in state.objective_history],
    }


def report_payload(dataset: str, method: str, state: Optional[FusionState],
                   report: Optional[EvalReport], timing_ms: Optional[int]) -> dict:
    return {
        "dataset": dataset,
        "method": method,
        "lambda": None if state is None else float(state.lam),
        "w": None if state is None else [float(x) for x in state.w],
        "converged": None if state is None else bool(state.converged),
        "per_m": [] if report is None else report.per_m,
        "acc_avg": None if report is None else report.acc_avg,
        "nmi_avg": None if report is None else report.nmi_avg,
        "runtime_ms": timing_ms,
    }


def method_name(selector: str, fused: bool) -> str:
    base = METHOD_NAMES[selector]
    return f"{base}_NIDF" if fused else base


# ---------------------------------------------------------------------------
# pipeline and bench


@dataclass
class PipelineResult:
    report: dict
    fusion: FusionRun
    paths: Dict[str, Path] = field(default_factory=dict)


def run_pipeline(dataset, cfg: RunConfig = RunConfig(), out_dir=".", evaluate: Optional[bool] = None) -> PipelineResult:
    """Run every step on a CSV dataset and write z, fusion sidecar and report.

    ``evaluate=None`` evaluates when labels are present; ``True`` demands labels.
    """
    start = time.perf_counter()
    dataset = Path(dataset)
    X = load_csv(dataset, cfg.label_col)
    if evaluate and X.labels is None:
        raise InputError("labels required for eval")
    Xn = prepare(X, cfg)
    run = nidf_select(Xn, cfg)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = dataset.stem
    paths = {
        "z": out_dir / f"{stem}.z.csv",
        "fusion": out_dir / f"{stem}.fusion.json",
        "report": out_dir / f"{stem}.report.json",
    }
    write_scores(paths["z"], Xn.feature_ids, run.z)
    write_json(paths["fusion"], fusion_summary(run.state))
    if cfg.dump_redundancy:
        for red, suffix in zip(run.redundancies, VIEW_SUFFIXES):
            p = out_dir / f"{stem}.{suffix}.redundancy.csv"
            np.savetxt(p, red.values, delimiter=",", fmt="%.17g")
            paths[f"redundancy_{suffix}"] = p

    report = None
    if X.labels is not None and evaluate is not False:
        report = evaluate_selection(Xn, run.z, cfg.m_grid, cfg.kmeans,
                                    method_name(cfg.selector, True), stem, cfg.jobs)
    timing = int(round((time.perf_counter() - start) * 1000)) if cfg.timing else None
    payload = report_payload(stem, method_name(cfg.selector, True), run.state, report, timing)
    write_json(paths["report"], payload)
    return PipelineResult(payload, run, paths)


def run_cell(dataset: str, selector: str, fused: bool, cfg: RunConfig) -> Tuple[float, float]:
    """(acc_avg, nmi_avg) for one bench cell."""
    cfg = replace(cfg, selector=selector, jobs=1)
    X = load_csv(dataset, cfg.label_col)
    if X.labels is None:
        raise InputError(f"{dataset}: labels required for eval")
    Xn = prepare(X, cfg)
    score = nidf_select(Xn, cfg).z if fused else raw_select(Xn, cfg)
    rep = evaluate_selection(Xn, score, cfg.m_grid, cfg.kmeans)
    return rep.acc_avg, rep.nmi_avg


def _safe_cell(args):
    try:
        return run_cell(*args)
    except (NIDFError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return exc


def bench_columns(selectors: Sequence[str]) -> List[str]:
    cols = []
    for metric in ("ACC", "NMI"):
        for sel in selectors:
            cols += [f"{metric}:{method_name(sel, False)}", f"{metric}:{method_name(sel, True)}"]
    return cols


def run_bench(datasets: Sequence, selectors: Sequence[str], cfg: RunConfig = RunConfig(), jobs: int = 1):
    """Raw-vs-fused comparison table.

    Returns ``(header, rows, n_ok)``; each row starts with the dataset name and
    holds floats or the string ``"ERR"``. The last row is the column average.
    """
    datasets = [str(d) for d in datasets]
    cells = [(d, sel, fused) for d in datasets for sel in selectors for fused in (False, True)]
    args = [(d, sel, fused, cfg) for d, sel, fused in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_safe_cell, args))
    else:
        outcomes = [_safe_cell(a) for a in args]
    result = dict(zip(cells, outcomes))

    header = ["dataset"] + bench_columns(selectors)
    rows = []
    for d in datasets:
        row = [Path(d).stem]
        for metric_idx in (0, 1):
            for sel in selectors:
                for fused in (False, True):
                    out = result[(d, sel, fused)]
                    row.append("ERR" if isinstance(out, Exception) else float(out[metric_idx]))
        rows.append(row)
    avg = ["AVERAGE"]
    for j in range(1, len(header)):
        col = [r[j] for r in rows if r[j] != "ERR"]
        avg.append(float(np.mean(col)) if col else "ERR")
    rows.append(avg)
    n_ok = sum(not isinstance(o, Exception) for o in outcomes)
    errors = {c: str(o) for c, o in result.items() if isinstance(o, Exception)}
    return header, rows, n_ok, errors


def write_bench_table(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else repr(c) for c in row])


def read_bench_table(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    header, body = rows[0], rows[1:]
    parsed = [[r[0]] + [c if c == "ERR" else float(c) for c in r[1:]] for r in body]
    return header, parsed
