"""Run configuration and report assembly behind the command line.

A :class:`RunConfig` names the candidate files, the bounds and the cost
range.  :func:`load_run` ingests and validates everything, and
:func:`run_report` writes ``report.json`` plus the plot data next to it.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import ConfigError, DataError, DegenerateRegionError, NoFeasiblePointWarning
from .feasible_region import (
    Constraints,
    FeasibleRegion,
    RegionCase,
    check_practical,
    classify_region,
    region_polygon,
)
from .io import ROCPOINTS, SCORES, ScoreTable, atomic_write_text, csv_text, dumps_json, ingest
from .roc_core import DatasetProfile
from .selection import (
    ALL_STRATEGIES,
    Candidate,
    CandidateSet,
    HeatmapGrid,
    Strategy,
    feasible_pauroc,
    feasible_recall,
    select_model,
    win_heatmap,
)
from .svg import heatmap_svg, region_svg
from .voros import CostSpec, best_normalized_areas, feasible_hull, partial_voros, voros_unconstrained

SCHEMA_ID = "pvoros/1"
NO_FEASIBLE_POINT = "no feasible operating point"


def report_schema() -> dict:
    """The JSON schema that every ``report.json`` validates against."""
    return json.loads(files("pvoros").joinpath("schema/report.schema.json").read_text(encoding="utf-8"))


def parse_grid(text: str, *, log=False) -> tuple:
    """Grid from ``start:stop:num`` or a comma-separated list of values."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            num = int(num)
            if num < 1:
                raise ValueError
            space = np.geomspace if log else np.linspace
            return tuple(float(v) for v in space(float(start), float(stop), num))
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"cannot parse grid {text!r}; use start:stop:num or a comma list") from None


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI run needs.

    Capacity is given either as an absolute count (``kappa``) or as a
    fraction of the dataset size (``kappa_frac``), and the cost range either
    as a ``t`` interval or as an interval of cost ratios C0/C1.
    """

    candidates: tuple
    alpha: float
    fmt: str = SCORES
    test: tuple = ()
    n_pos: Optional[int] = None
    n_neg: Optional[int] = None
    kappa: Optional[float] = None
    kappa_frac: Optional[float] = None
    t_range: Optional[tuple] = None
    ratio_range: Optional[tuple] = None
    samples: int = 100_000
    seed: int = 0
    resolution: int = 1025
    method: str = "mc"
    strategies: tuple = tuple(s.value for s in ALL_STRATEGIES)
    alpha_grid: Optional[tuple] = None
    kappa_grid: Optional[tuple] = None
    kappa_grid_fraction: bool = True
    epsilon: float = 0.01
    area_points: int = 201
    out_dir: str = "."
    n_jobs: Optional[int] = None

    def __post_init__(self):
        if not self.candidates:
            raise ConfigError("give at least one candidate file")
        if self.fmt not in (SCORES, ROCPOINTS):
            raise ConfigError(f"format must be {SCORES!r} or {ROCPOINTS!r}, got {self.fmt!r}")
        if (self.kappa is None) == (self.kappa_frac is None):
            raise ConfigError("give exactly one of kappa (count) or kappa_frac (fraction of |D|)")
        if (self.t_range is None) == (self.ratio_range is None):
            raise ConfigError("give exactly one of a t range or a cost-ratio range")
        if (self.n_pos is None) != (self.n_neg is None):
            raise ConfigError("n_pos and n_neg must be given together")
        try:
            for s in self.strategies:
                Strategy(s)
        except ValueError:
            raise ConfigError(
                f"unknown strategy {s!r}; choose from {', '.join(x.value for x in ALL_STRATEGIES)}"
            ) from None
        if self.area_points < 2:
            raise ConfigError("area_points must be at least 2")

    def wants_heatmap(self) -> bool:
        return self.alpha_grid is not None and self.kappa_grid is not None


@dataclass(frozen=True, eq=False)
class LoadedRun:
    config: RunConfig
    candidates: CandidateSet
    profile: DatasetProfile
    constraints: Constraints
    spec: CostSpec
    region: FeasibleRegion
    sources: dict = field(default_factory=dict)


def _infer_profile(tables, config: RunConfig) -> DatasetProfile:
    inferred = None
    for tab in tables:
        if tab.labels.all() or not tab.labels.any():
            # a one-class file fails later with a precise message
            continue
        prof = DatasetProfile.from_labels(tab.labels)
        if inferred is None:
            inferred = prof
        elif prof != inferred:
            raise DataError(
                f"validation class counts differ between candidates ({inferred.n_pos}/{inferred.n_neg} "
                f"vs {prof.n_pos}/{prof.n_neg}); candidates must share one validation set",
                path=tab.path,
            )
    if inferred is None and tables:
        tables[0].curve()  # raises the one-class data error
    if config.n_pos is not None:
        given = _profile(config.n_pos, config.n_neg)
        if inferred is not None and given != inferred:
            raise ConfigError(
                f"given class counts {given.n_pos}/{given.n_neg} disagree with the labels "
                f"({inferred.n_pos}/{inferred.n_neg})"
            )
        return given
    if inferred is None:
        raise ConfigError("rocpoints input carries no labels; pass the class counts n_pos and n_neg")
    return inferred


def _profile(n_pos, n_neg):
    try:
        return DatasetProfile(n_pos, n_neg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def make_spec(config: RunConfig, profile: DatasetProfile) -> CostSpec:
    try:
        if config.t_range is not None:
            return CostSpec.uniform_t(*config.t_range, resolution=config.resolution)
        return CostSpec.cost_ratio(
            *config.ratio_range,
            profile,
            samples=config.samples,
            seed=config.seed,
            method=config.method,
            resolution=config.resolution,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid cost range: {exc}") from None


def make_constraints(config: RunConfig, profile: DatasetProfile) -> Constraints:
    try:
        if config.kappa is not None:
            return Constraints(config.alpha, config.kappa)
        return Constraints.from_fraction(config.alpha, config.kappa_frac, profile)
    except ValueError as exc:
        raise ConfigError(f"invalid constraints: {exc}") from None


def load_run(config: RunConfig) -> LoadedRun:
    """Ingest candidate files and validate the bounds against the practical assumptions."""
    loaded = [ingest(p, config.fmt) for p in config.candidates]
    tables = [x for x in loaded if isinstance(x, ScoreTable)]
    names = [x.name for x in loaded]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ConfigError(f"candidate names (file stems) must be unique; repeated: {dupes}")
    tests = {}
    for p in config.test:
        tab = ingest(p, SCORES)
        if tab.name not in names:
            raise ConfigError(f"test file {p} has no validation candidate named {tab.name!r}")
        tests[tab.name] = tab
    profile = _infer_profile(tables, config)
    cands = CandidateSet()
    for item in loaded:
        curve = item.curve() if isinstance(item, ScoreTable) else item
        ts = tl = None
        if item.name in tests:
            tab = tests[item.name]
            tab.curve()  # label checks with file context
            ts, tl = tab.scores, tab.labels
        cands.add(Candidate(item.name, curve, ts, tl))
    constraints = make_constraints(config, profile)
    spec = make_spec(config, profile)
    check_practical(profile, constraints, t_max=spec.t_support[1])
    region = region_polygon(profile, constraints)
    sources = {n: str(p) for n, p in zip(names, config.candidates)}
    return LoadedRun(config, cands, profile, constraints, spec, region, sources)


def region_summary(region: FeasibleRegion) -> dict:
    return {
        "case": str(region.case),
        "vertices": [list(v) for v in region.vertices],
        "area": region.area,
        "t_bound": region.t_bound,
    }


def describe_region(profile: DatasetProfile, constraints: Constraints) -> dict:
    """Case, vertices and area for any bounds, zero-area cases included."""
    case = classify_region(profile, constraints)
    try:
        region = region_polygon(profile, constraints)
    except DegenerateRegionError:
        if case is RegionCase.SEGMENT:
            top = min(1.0, constraints.kappa / profile.n_pos)
            verts = [[0.0, 0.0], [0.0, top]] if top > 0 else [[0.0, 0.0]]
        else:
            verts = [[0.0, 0.0]]
        return {"case": str(case), "vertices": verts, "area": 0.0}
    return {"case": str(case), "vertices": [list(v) for v in region.vertices], "area": region.area}


def _quiet_pv(curve, region, spec):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NoFeasiblePointWarning)
        pv = partial_voros(curve, region, spec)
    return pv, any(issubclass(w.category, NoFeasiblePointWarning) for w in caught)


def candidate_metrics(run: LoadedRun) -> dict:
    out = {}
    for cand in run.candidates:
        pv, empty = _quiet_pv(cand.curve, run.region, run.spec)
        hull = feasible_hull(cand.curve, run.region)
        thr = hull.thresholds if hull.thresholds is not None else [None] * len(hull)
        out[cand.name] = {
            "name": cand.name,
            "source": run.sources.get(cand.name),
            "n_points": len(cand.curve),
            "has_test": cand.has_test,
            "pv": pv,
            "voros": voros_unconstrained(cand.curve, run.spec),
            "feasible_recall": feasible_recall(cand.curve, run.region),
            "feasible_pauroc": feasible_pauroc(cand.curve, run.region),
            "feasible_hull": [
                {"fpr": float(x), "tpr": float(y), "threshold": None if t is None else float(t)}
                for x, y, t in zip(hull.fpr, hull.tpr, thr)
            ],
            "flags": [NO_FEASIBLE_POINT] if empty else [],
        }
    return out


_METRIC_KEY = {
    Strategy.MAX_PV: "pv",
    Strategy.MAX_VOROS: "voros",
    Strategy.MAX_FEASIBLE_RECALL: "feasible_recall",
    Strategy.MAX_FEASIBLE_PAUROC: "feasible_pauroc",
}


def selection_reports(run: LoadedRun, metrics: Optional[dict] = None) -> list:
    metrics = metrics if metrics is not None else candidate_metrics(run)
    out = []
    for s in run.config.strategies:
        s = Strategy(s)
        scores = {name: m[_METRIC_KEY[s]] for name, m in metrics.items()}
        out.append(select_model(run.candidates, s, run.region, run.spec, scores=scores))
    return out


def compute_heatmap(run: LoadedRun) -> HeatmapGrid:
    cfg = run.config
    if len(run.candidates) < 2:
        raise ConfigError("a heatmap needs at least two candidates")
    if not cfg.wants_heatmap():
        raise ConfigError("a heatmap needs both an alpha grid and a kappa grid")
    return win_heatmap(
        run.candidates,
        cfg.alpha_grid,
        cfg.kappa_grid,
        run.spec,
        run.profile,
        epsilon=cfg.epsilon,
        kappa_is_fraction=cfg.kappa_grid_fraction,
        n_jobs=cfg.n_jobs,
    )


def heatmap_csv_text(grid: HeatmapGrid) -> str:
    header = ["alpha", "kappa", "winner", *grid.names]
    rows = ([a, k, w, *map(float, vals)] for a, k, w, vals in grid.rows())
    return csv_text(header, rows)


def area_vs_t_text(run: LoadedRun) -> str:
    lo, hi = run.spec.t_support
    t = np.linspace(lo, hi, run.config.area_points)
    cols = [best_normalized_areas(c.curve, run.region, t) for c in run.candidates]
    rows = ([float(ti), *(float(col[i]) for col in cols)] for i, ti in enumerate(t))
    return csv_text(["t", *run.candidates.names], rows)


def write_heatmap(run: LoadedRun, out_dir) -> tuple:
    grid = compute_heatmap(run)
    out_dir = Path(out_dir)
    atomic_write_text(out_dir / "heatmap.csv", heatmap_csv_text(grid))
    atomic_write_text(out_dir / "heatmap.svg", heatmap_svg(grid))
    return grid, ["heatmap.csv", "heatmap.svg"]


def _heatmap_summary(grid: HeatmapGrid) -> dict:
    return {
        "alphas": [float(a) for a in grid.alphas],
        "kappas": [float(k) for k in grid.kappas],
        "kappa_is_fraction": grid.kappa_is_fraction,
        "epsilon": grid.epsilon,
        "winners": [list(row) for row in grid.winners],
    }


def build_report(run: LoadedRun, heatmap: Optional[HeatmapGrid] = None, outputs=()) -> dict:
    cfg = run.config
    metrics = candidate_metrics(run)
    sel = selection_reports(run, metrics)
    return {
        "schema": SCHEMA_ID,
        "profile": {
            "n_pos": run.profile.n_pos,
            "n_neg": run.profile.n_neg,
            "prevalence": run.profile.prevalence,
        },
        "constraints": {
            "alpha": run.constraints.alpha,
            "kappa": run.constraints.kappa,
            "kappa_frac": cfg.kappa_frac,
        },
        "cost_spec": run.spec.describe(),
        "region": region_summary(run.region),
        "candidates": list(metrics.values()),
        "selection": [r.to_dict() for r in sel],
        "heatmap": None if heatmap is None else _heatmap_summary(heatmap),
        "outputs": list(outputs),
    }


def run_report(config: RunConfig) -> list:
    """Write ``report.json`` and the plot data; returns the written paths."""
    run = load_run(config)
    out_dir = Path(config.out_dir)
    written = []
    lo, hi = run.spec.t_support
    curves = [c.curve for c in run.candidates]
    atomic_write_text(out_dir / "region.svg", region_svg(run.region, curves, iso_ts=(lo, hi)))
    written.append("region.svg")
    atomic_write_text(out_dir / "area_vs_t.csv", area_vs_t_text(run))
    written.append("area_vs_t.csv")
    grid = None
    if config.wants_heatmap() and len(run.candidates) >= 2:
        grid, files = write_heatmap(run, out_dir)
        written.extend(files)
    report = build_report(run, grid, outputs=[*written, "report.json"])
    atomic_write_text(out_dir / "report.json", dumps_json(report))
    written.append("report.json")
    return [out_dir / name for name in written]


__all__ = [
    "SCHEMA_ID",
    "report_schema",
    "RunConfig",
    "LoadedRun",
    "load_run",
    "run_report",
    "build_report",
    "candidate_metrics",
    "selection_reports",
    "compute_heatmap",
    "write_heatmap",
    "heatmap_csv_text",
    "area_vs_t_text",
    "describe_region",
    "region_summary",
    "parse_grid",
    "make_spec",
    "make_constraints",
]
