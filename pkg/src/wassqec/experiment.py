"""Batches of restarts, threshold filtering, two-stage runs and their file outputs."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .ansatz import DEFAULT_LAYERS, build_ansatz, exact_code_params
from .cost import (
    COST_KINDS,
    CostHamiltonian,
    PipelineSpec,
    baseline_f0,
    baseline_f0_closed_form,
    baseline_f0_strong,
    baseline_f0_strong_closed_form,
    footnote_residual,
)
from .engine import Evaluator
from .noise import NoiseSpec
from .optimize import OptimizerConfig, RunRecord, descend
from .qsim import QubitLayout

THRESHOLD_MODES = ("f0", "f0_strong", "custom")
INIT_MODES = ("random", "exact")
RUN_COLUMNS = ("seed", "cost_kind", "iterations", "converged", "final_fidelity", "final_cost")


class ConfigError(ValueError):
    """The experiment configuration is malformed or inconsistent."""


@dataclass(frozen=True)
class ExperimentConfig:
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    layout: QubitLayout = field(default_factory=QubitLayout)
    layers: tuple[int, int] = DEFAULT_LAYERS
    ring_axis: str = "x"
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    cost_kinds: tuple[str, ...] = ("wass", "fid")
    weights: tuple[float, ...] | None = None
    num_restarts: int = 10
    threshold_mode: str = "f0_strong"
    threshold: float | None = None
    master_seed: int = 0
    init: str = "random"
    bins: int = 20
    workers: int | None = None
    output: str | None = None

    def __post_init__(self):
        if self.num_restarts < 1:
            raise ConfigError(f"num_restarts must be at least 1, got {self.num_restarts}")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ConfigError(f"threshold_mode must be one of {THRESHOLD_MODES}, got {self.threshold_mode!r}")
        if self.threshold_mode == "custom":
            if self.threshold is None or not 0.0 <= self.threshold <= 1.0:
                raise ConfigError(f"custom threshold must lie in [0, 1], got {self.threshold}")
        if not self.cost_kinds or any(k not in COST_KINDS for k in self.cost_kinds):
            raise ConfigError(f"cost kinds must be drawn from {COST_KINDS}, got {self.cost_kinds}")
        if self.init not in INIT_MODES:
            raise ConfigError(f"init must be one of {INIT_MODES}, got {self.init!r}")
        if self.noise.n != self.layout.n:
            raise ConfigError(f"noise acts on {self.noise.n} qubits but QA has {self.layout.n}")
        if len(self.layers) != 2 or min(self.layers) < 1:
            raise ConfigError(f"layers must be two positive counts (V, W), got {self.layers}")
        if self.bins < 1:
            raise ConfigError("bins must be positive")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be positive")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")

    @property
    def threshold_value(self) -> float:
        if self.threshold_mode == "custom":
            return float(self.threshold)
        if self.threshold_mode == "f0":
            return baseline_f0(self.noise)
        return baseline_f0_strong(self.noise)

    def spec(self) -> PipelineSpec:
        return _spec(self.noise, self.layout, self.layers, self.ring_axis)

    def to_dict(self) -> dict:
        return {
            "noise": {"kind": self.noise.kind, "p": self.noise.p},
            "layout": asdict(self.layout),
            "ansatz": {"layers": list(self.layers), "ring_axis": self.ring_axis},
            "opt": {k: v for k, v in asdict(self.optimizer).items() if k != "seed"},
            "cost": {"kinds": list(self.cost_kinds), "weights": None if self.weights is None else list(self.weights)},
            "experiment": {
                "num_restarts": self.num_restarts,
                "threshold_mode": self.threshold_mode,
                "threshold": self.threshold,
                "master_seed": self.master_seed,
                "init": self.init,
                "bins": self.bins,
            },
        }

    @classmethod
    def from_mapping(cls, doc: Mapping[str, Any]) -> "ExperimentConfig":
        """Build from the nested config document; see README for the schema."""
        sections = {
            "noise": ("kind", "p"),
            "layout": ("k", "n_minus_k", "r"),
            "ansatz": ("layers", "ring_axis"),
            "opt": tuple(f.name for f in fields(OptimizerConfig) if f.name != "seed"),
            "cost": ("kinds", "weights"),
            "experiment": ("num_restarts", "threshold_mode", "threshold", "master_seed", "init", "bins", "workers", "output"),
        }
        doc = dict(doc or {})
        unknown = set(doc) - set(sections)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        for name, allowed in sections.items():
            part = doc.get(name) or {}
            if not isinstance(part, Mapping):
                raise ConfigError(f"section {name!r} must be a mapping")
            extra = set(part) - set(allowed)
            if extra:
                raise ConfigError(f"unknown keys in {name!r}: {sorted(extra)}")
            doc[name] = part
        try:
            layout = QubitLayout(**doc["layout"])
            noise_args = dict(doc["noise"])
            noise = NoiseSpec(n=layout.n, **noise_args)
            layers = doc["ansatz"].get("layers", DEFAULT_LAYERS)
            layers = (int(layers), int(layers)) if isinstance(layers, (int, float)) else tuple(int(x) for x in layers)
            optimizer = OptimizerConfig(**doc["opt"])
            kinds = doc["cost"].get("kinds", cls.cost_kinds)
            kinds = (kinds,) if isinstance(kinds, str) else tuple(kinds)
            weights = doc["cost"].get("weights")
            exp = doc["experiment"]
            return cls(
                noise=noise,
                layout=layout,
                layers=layers,
                ring_axis=doc["ansatz"].get("ring_axis", "x"),
                optimizer=optimizer,
                cost_kinds=kinds,
                weights=None if weights is None else tuple(float(w) for w in weights),
                **exp,
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ExperimentConfig":
        """Read a YAML (or JSON) config file."""
        text = Path(path).read_text()
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        if doc is not None and not isinstance(doc, Mapping):
            raise ConfigError("config file must hold a mapping at the top level")
        return cls.from_mapping(doc or {})


@lru_cache(maxsize=8)
def _spec(noise, layout, layers, ring_axis) -> PipelineSpec:
    v, w = build_ansatz(layout, layers, ring_axis)
    return PipelineSpec(layout, v, w, noise)


@lru_cache(maxsize=16)
def _evaluator(noise, layout, layers, ring_axis, kind, weights) -> Evaluator:
    return Evaluator(_spec(noise, layout, layers, ring_axis), CostHamiltonian(kind, layout.n, weights))


def run_seeds(master_seed: int, count: int) -> list[int]:
    """Per-run 64-bit seeds, the i-th taken from the i-th child of ``SeedSequence(master_seed)``."""
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


@dataclass(frozen=True)
class _Job:
    config: ExperimentConfig
    cost_kind: str
    seed: int
    init: tuple[tuple[float, ...], tuple[float, ...]] | None = None


def _run_job(job: _Job) -> RunRecord:
    c = job.config
    ev = _evaluator(c.noise, c.layout, tuple(c.layers), c.ring_axis, job.cost_kind, c.weights)
    init = None
    if job.init is not None:
        init = (np.array(job.init[0]), np.array(job.init[1]))
    elif c.init == "exact":
        init = exact_code_params(c.noise.kind, c.layout)
    return descend(ev.spec, ev.hamiltonian, replace(c.optimizer, seed=job.seed), init, ev)


def _map(jobs: list[_Job], workers: int | None) -> list[RunRecord]:
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        return [_run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _histogram(values, lo: float, hi: float, bins: int) -> tuple[list[int], list[float]]:
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(np.clip(values, lo, hi), bins=edges)
    return counts.tolist(), edges.tolist()


@dataclass
class BatchSummary:
    cost_kind: str
    threshold: float
    records: list[RunRecord]
    success_rate: float
    fidelity_hist: tuple[list[int], list[float]]
    iteration_hist: tuple[list[int], list[float]]

    @classmethod
    def from_records(cls, cost_kind: str, records: list[RunRecord], threshold: float, bins: int, max_iters: int):
        passing = [r for r in records if r.final_fidelity >= threshold]
        fid = [r.final_fidelity for r in passing]
        its = [r.iterations for r in passing]
        return cls(
            cost_kind=cost_kind,
            threshold=threshold,
            records=records,
            success_rate=len(passing) / len(records),
            fidelity_hist=_histogram(fid, min(threshold, 1.0), 1.0, bins),
            iteration_hist=_histogram(its, 0, max_iters, bins),
        )

    @property
    def passing(self) -> int:
        return sum(self.fidelity_hist[0])

    def to_dict(self) -> dict:
        fid = np.array([r.final_fidelity for r in self.records])
        its = np.array([r.iterations for r in self.records])
        return {
            "cost_kind": self.cost_kind,
            "threshold": self.threshold,
            "runs": len(self.records),
            "passing": self.passing,
            "success_rate": self.success_rate,
            "converged": int(sum(r.converged for r in self.records)),
            "fidelity_mean": float(fid.mean()),
            "fidelity_max": float(fid.max()),
            "iterations_median": float(np.median(its)),
        }


def run_batch(config: ExperimentConfig) -> list[BatchSummary]:
    """``num_restarts`` descents per cost kind; restart ``i`` uses the same seed for every kind."""
    seeds = run_seeds(config.master_seed, config.num_restarts)
    jobs = [_Job(config, kind, s) for kind in config.cost_kinds for s in seeds]
    records = _map(jobs, config.workers)
    threshold = config.threshold_value
    out = []
    for i, kind in enumerate(config.cost_kinds):
        chunk = records[i * len(seeds) : (i + 1) * len(seeds)]
        out.append(BatchSummary.from_records(kind, chunk, threshold, config.bins, config.optimizer.max_iters))
    return out


@dataclass
class TwoStageResult:
    first: str
    second: str
    pairs: list[tuple[RunRecord, RunRecord]]

    @property
    def improvements(self) -> np.ndarray:
        return np.array([b.final_fidelity - a.final_fidelity for a, b in self.pairs])

    def to_dict(self) -> dict:
        imp = self.improvements
        return {
            "first": self.first,
            "second": self.second,
            "runs": len(self.pairs),
            "improvement_min": float(imp.min()),
            "improvement_median": float(np.median(imp)),
            "improvement_max": float(imp.max()),
            "negative": int((imp < 0).sum()),
        }


def run_two_stage(config: ExperimentConfig, first: str, second: str) -> TwoStageResult:
    """Descend with ``first``, then restart ``second`` from where the first run stopped."""
    if first == second:
        raise ConfigError("two-stage runs need two different cost kinds")
    for kind in (first, second):
        if kind not in COST_KINDS:
            raise ConfigError(f"unknown cost kind {kind!r}")
    seeds = run_seeds(config.master_seed, config.num_restarts)
    stage1 = _map([_Job(config, first, s) for s in seeds], config.workers)
    follow = [
        _Job(config, second, r.seed, (tuple(r.final_alpha.tolist()), tuple(r.final_beta.tolist()))) for r in stage1
    ]
    stage2 = _map(follow, config.workers)
    return TwoStageResult(first, second, list(zip(stage1, stage2)))


def report_baselines(noise: NoiseSpec) -> dict:
    return {
        "noise": asdict(noise),
        "f0": baseline_f0(noise),
        "f0_strong": baseline_f0_strong(noise),
        "f0_closed_form": baseline_f0_closed_form(noise),
        "f0_strong_closed_form": baseline_f0_strong_closed_form(noise),
        "footnote_residual": footnote_residual(noise),
    }


# -- output files ----------------------------------------------------------

def prepare_output(path: str | os.PathLike) -> Path:
    """Create the output directory and make sure it is writable before any work starts."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write-test"
    probe.write_text("")
    probe.unlink()
    return out


def _write_runs(path: Path, records: list[RunRecord]) -> None:
    with open(path / "runs.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_COLUMNS)
        for r in records:
            writer.writerow([r.seed, r.cost_kind, r.iterations, int(r.converged), repr(r.final_fidelity), repr(r.final_cost)])
    with open(path / "runs.jsonl", "w") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")


def _write_hist(path: Path, name: str, summaries: list[BatchSummary], attr: str) -> None:
    with open(path / name, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("cost_kind", "bin_lo", "bin_hi", "count"))
        for s in summaries:
            counts, edges = getattr(s, attr)
            for c, lo, hi in zip(counts, edges[:-1], edges[1:]):
                writer.writerow((s.cost_kind, repr(lo), repr(hi), c))


def _write_json(path: Path, doc: dict) -> None:
    (path / "summary.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_batch(path: str | os.PathLike, config: ExperimentConfig, summaries: list[BatchSummary]) -> Path:
    out = prepare_output(path)
    _write_json(out, {
        "config": config.to_dict(),
        "baselines": report_baselines(config.noise),
        "threshold": config.threshold_value,
        "batches": [s.to_dict() for s in summaries],
    })
    _write_runs(out, [r for s in summaries for r in s.records])
    _write_hist(out, "hist_fidelity.csv", summaries, "fidelity_hist")
    _write_hist(out, "hist_iterations.csv", summaries, "iteration_hist")
    return out


def write_two_stage(path: str | os.PathLike, config: ExperimentConfig, result: TwoStageResult) -> Path:
    out = prepare_output(path)
    _write_json(out, {"config": config.to_dict(), "two_stage": result.to_dict()})
    _write_runs(out, [r for pair in result.pairs for r in pair])
    with open(out / "two_stage.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("seed", "first", "second", "fidelity_first", "fidelity_second", "improvement"))
        for (a, b), imp in zip(result.pairs, result.improvements):
            writer.writerow((a.seed, a.cost_kind, b.cost_kind, repr(a.final_fidelity), repr(b.final_fidelity), repr(float(imp))))
    return out
