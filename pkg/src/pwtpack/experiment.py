"""Experiment harness: instances x tours x algorithms x alpha, raw rows plus aggregates.

Config files are INI-style with a single ``[experiment]`` section::

    [experiment]
    instances = data/unc51.ttp, data/bsc51.ttp
    tours = generate            # or: files
    tour_count = 30
    tour_seed = 0               # tour k uses nn_tour(seed=tour_seed + k)
    tour_files = tours/{stem}/*.tour
    mode = deterministic        # or: chance
    algorithms = r1, r3, r5, HH2
    alphas = 0.9, 0.999
    delta = 20
    bound = auto
    repetitions = 1
    seed = 0
    iterations = 1000
    mutation = 0.1
    output = results/raw.csv
    format = csv                # or: json
    workers = 1

Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

import configparser
import csv
import glob
import json
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError, PWTError
from .hyper import CHANCE_VARIANTS, VARIANTS, HHConfig, run_hh
from .model import build_context, load_instance, load_tour, nn_tour
from .objective import StochasticSpec
from .pack import solve
from .rewards import ITERATIVE_REWARDS, STATIC_REWARDS

RAW_COLUMNS = ["instance", "tour_id", "algorithm", "reward", "alpha", "delta", "bound", "seed",
               "objective", "total_weight", "surrogate_weight", "items_packed", "evaluations",
               "runtime_ms", "error"]
AGG_COLUMNS = ["instance", "algorithm", "alpha", "runs", "mean_objective", "std_objective"]

DETERMINISTIC_LABELS = STATIC_REWARDS + ITERATIVE_REWARDS + ("HH1", "HH2", "HH3", "HH4")
CHANCE_LABELS = ("r1", "r6", "r7") + CHANCE_VARIANTS


def summarize(scores) -> tuple[float, float]:
    """Mean and sample standard deviation (0 for a single value)."""
    scores = [float(s) for s in scores]
    if not scores:
        raise ValueError("summarize needs at least one value")
    if len(scores) == 1:
        return scores[0], 0.0
    return statistics.fmean(scores), statistics.stdev(scores)


@dataclass
class ExperimentConfig:
    instances: list[str]
    algorithms: list[str]
    mode: str = "deterministic"
    tours: str = "generate"
    tour_count: int = 30
    tour_seed: int = 0
    tour_files: Optional[str] = None
    alphas: list[float] = field(default_factory=list)
    delta: float = 20.0
    bound: str = "auto"
    repetitions: int = 1
    seed: int = 0
    iterations: int = 1000
    mutation: float = 0.1
    output: str = "results.csv"
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("deterministic", "chance"):
            raise ConfigurationError(f"mode must be deterministic or chance, not {self.mode!r}")
        legal = DETERMINISTIC_LABELS if self.mode == "deterministic" else CHANCE_LABELS
        bad = [a for a in self.algorithms if a not in legal]
        if bad:
            raise ConfigurationError(f"not legal in {self.mode} mode: {', '.join(bad)}")
        if self.mode == "chance" and not self.alphas:
            raise ConfigurationError("chance mode needs at least one alpha")
        if self.mode == "deterministic" and self.alphas:
            raise ConfigurationError("alphas only apply in chance mode")
        if self.tours not in ("generate", "files"):
            raise ConfigurationError("tours must be 'generate' or 'files'")
        if self.tours == "files" and not self.tour_files:
            raise ConfigurationError("tours = files needs a tour_files pattern")
        if self.format not in ("csv", "json"):
            raise ConfigurationError("format must be csv or json")
        if self.tour_count < 1 or self.repetitions < 1:
            raise ConfigurationError("tour_count and repetitions must be positive")


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.replace("\n", ",").split(",") if v.strip()]


def load_config(path) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    if "experiment" not in parser:
        raise ConfigurationError("config needs an [experiment] section")
    sec = parser["experiment"]
    base = Path(path).resolve().parent

    def resolve(p):
        return str(p if os.path.isabs(p) else base / p)

    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(sec) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        return ExperimentConfig(
            instances=[resolve(p) for p in _split(sec.get("instances", ""))],
            algorithms=_split(sec.get("algorithms", "")),
            mode=sec.get("mode", "deterministic").strip(),
            tours=sec.get("tours", "generate").strip(),
            tour_count=sec.getint("tour_count", 30),
            tour_seed=sec.getint("tour_seed", 0),
            tour_files=resolve(sec["tour_files"]) if "tour_files" in sec else None,
            alphas=[float(a) for a in _split(sec.get("alphas", ""))],
            delta=sec.getfloat("delta", 20.0),
            bound=sec.get("bound", "auto").strip(),
            repetitions=sec.getint("repetitions", 1),
            seed=sec.getint("seed", 0),
            iterations=sec.getint("iterations", 1000),
            mutation=sec.getfloat("mutation", 0.1),
            output=resolve(sec.get("output", "results.csv")),
            format=sec.get("format", "csv").strip(),
            workers=sec.getint("workers", 1),
        )
    except ValueError as exc:
        if isinstance(exc, PWTError):
            raise
        raise ConfigurationError(str(exc)) from None


def _tours_for(cfg: ExperimentConfig, path: str, instance) -> list[list[int]]:
    if cfg.tours == "generate":
        return [nn_tour(instance, cfg.tour_seed + k) for k in range(cfg.tour_count)]
    pattern = cfg.tour_files.format(stem=Path(path).stem, name=instance.name)
    files = sorted(glob.glob(pattern))
    if not files:
        raise ConfigurationError(f"no tour files match {pattern}")
    return [load_tour(f, instance.n_cities) for f in files]


def _cell(args) -> dict:
    (inst, tour_id, tour, label, alpha, cfg, rep) = args
    row = {c: "" for c in RAW_COLUMNS}
    spec = None if alpha is None else StochasticSpec(cfg.delta, alpha, cfg.bound)
    row.update(instance=inst.name, tour_id=tour_id, reward=label,
               alpha="" if alpha is None else alpha,
               delta="" if spec is None else cfg.delta,
               bound="" if spec is None else spec.resolved_bound)
    try:
        ctx = build_context(inst, tour)
        if label in VARIANTS:
            seed = cfg.seed + rep
            _, _, report = run_hh(HHConfig(label, cfg.iterations, cfg.mutation, seed, spec), ctx)
            row["seed"] = seed
        else:
            _, report = solve(ctx, label, spec)
        row.update(
            algorithm=report.algorithm,
            objective=report.objective,
            total_weight=report.total_weight,
            surrogate_weight="" if report.surrogate_weight is None else report.surrogate_weight,
            items_packed=len(report.items),
            evaluations=report.evaluations,
            runtime_ms=round(report.runtime_ms, 3),
        )
    except Exception as exc:  # recorded per row, reported through the exit code
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _sort_key(row):
    alpha = row["alpha"]
    return (row["instance"], row["reward"], -1.0 if alpha == "" else float(alpha),
            int(row["tour_id"]), str(row["seed"]))


def run_experiment(cfg: ExperimentConfig):
    """Run every cell and return ``(raw_rows, aggregate_rows)``."""
    tasks = []
    for path in cfg.instances:
        inst = load_instance(path)
        tours = _tours_for(cfg, path, inst)
        alphas = cfg.alphas if cfg.mode == "chance" else [None]
        for label in cfg.algorithms:
            reps = cfg.repetitions if label in VARIANTS else 1
            for alpha in alphas:
                for tour_id, tour in enumerate(tours):
                    for rep in range(reps):
                        tasks.append((inst, tour_id, tour, label, alpha, cfg, rep))
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(_cell, tasks, chunksize=4))
    else:
        rows = [_cell(t) for t in tasks]
    rows.sort(key=_sort_key)
    return rows, aggregate(rows)


def aggregate(rows) -> list[dict]:
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        if r["error"]:
            continue
        groups.setdefault((r["instance"], r["reward"], r["alpha"]), []).append(r["objective"])
    out = []
    for (inst, label, alpha), scores in groups.items():
        mean, std = summarize(scores)
        out.append({"instance": inst, "algorithm": label, "alpha": alpha, "runs": len(scores),
                    "mean_objective": mean, "std_objective": std})
    out.sort(key=lambda r: (r["instance"], r["algorithm"], -1.0 if r["alpha"] == "" else r["alpha"]))
    return out


def summary_path(output: str, fmt: str) -> str:
    root, _ = os.path.splitext(output)
    return f"{root}_summary.{fmt}"


def write_results(cfg: ExperimentConfig, rows, agg) -> tuple[str, str]:
    out = cfg.output
    summ = summary_path(out, cfg.format)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    if cfg.format == "json":
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=1)
        with open(summ, "w", encoding="utf-8") as fh:
            json.dump(agg, fh, indent=1)
    else:
        for path, cols, data in ((out, RAW_COLUMNS, rows), (summ, AGG_COLUMNS, agg)):
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=cols)
                writer.writeheader()
                writer.writerows(data)
    return out, summ
