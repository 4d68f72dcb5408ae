"""Run experiments: one replicate, batches of replicates, and their artifacts.

Layout of a batch directory::

    config.txt  aggregate.csv  summary.json
    rep-00/ stats.csv final.pop dominant.genome neutrality/u000500.txt ... *.svg
    rep-01/ ...
"""

from __future__ import annotations

import json
import os
import traceback
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from ..analysis import (NonViableError, analyze_genome, equilibrium_gap, mean_test_fitness,
                        test_fitness)
from ..environment import TaskTable, resolve_environment
from ..isa import Genome, MutationConfig, read_genome, reference_ancestor, write_genome
from ..population import (Population, PopulationConfig, advance_update, dominant_genotype,
                          seed_population, write_snapshot)
from .config import REFERENCE, ExperimentConfig, format_config
from .plot import render_timeseries
from .stats import STATS_COLUMNS, StatsWriter, format_value, read_stats, write_aggregate

PLOT_COLUMNS = ("mean_length", "mean_fitness", "nu")


class AncestorError(ValueError):
    """The configured ancestor cannot be loaded."""


@dataclass(frozen=True)
class RunArtifacts:
    replicate: int
    seed: int
    directory: str
    stats: str
    snapshot: str
    dominant: str | None
    neutrality_reports: tuple[str, ...] = ()
    plots: tuple[str, ...] = ()
    extinct: bool = False
    final_update: int = 0
    w_nu_decreases: int = 0

    def paths(self) -> list[str]:
        out = [self.stats, self.snapshot, *self.neutrality_reports, *self.plots]
        if self.dominant:
            out.append(self.dominant)
        return out


@dataclass
class BatchResult:
    directory: str
    runs: list[RunArtifacts | None]
    aggregate: str | None
    summary: str
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def extinct(self) -> bool:
        return any(r is not None and r.extinct for r in self.runs)


def replicate_seed(master_seed: int, replicate: int) -> int:
    return master_seed ^ replicate


def resolve_ancestor(cfg: ExperimentConfig) -> Genome:
    if cfg.ancestor is None:
        raise AncestorError(f"{cfg.preset} needs an ancestor genome file (ancestor = PATH)")
    if cfg.ancestor == REFERENCE:
        return reference_ancestor(cfg.length)
    path = cfg.ancestor
    if os.path.isdir(path):
        path = os.path.join(path, "dominant.genome")
    try:
        g = read_genome(path)
    except (OSError, ValueError) as exc:
        raise AncestorError(f"cannot load ancestor {cfg.ancestor!r}: {exc}") from None
    if cfg.fixed_length and len(g) != cfg.length:
        raise AncestorError(f"ancestor length {len(g)} differs from fixed length {cfg.length}")
    return g


def population_config(cfg: ExperimentConfig, env: TaskTable | None = None) -> PopulationConfig:
    if env is None:
        env = resolve_environment(cfg.environment)
    mutation = MutationConfig(cfg.rate, cfg.ins_rate, cfg.del_rate, cfg.fixed_length)
    return PopulationConfig(capacity=cfg.capacity, scheduler_mode=cfg.scheduler,
                            mutation=mutation, environment=env)


def _genome_counts(pop: Population) -> Counter:
    return Counter({Genome(k): v for k, v in pop.genotype_counts().items()})


def run_experiment(cfg: ExperimentConfig, replicate: int = 0,
                   out_dir: str | None = None) -> RunArtifacts:
    """Run one replicate and write its files under ``out_dir/rep-NN``."""
    ancestor = resolve_ancestor(cfg)
    env = resolve_environment(cfg.environment)
    pcfg = population_config(cfg, env)
    seed = replicate_seed(cfg.seed, replicate)
    base = out_dir if out_dir is not None else cfg.output_dir()
    rep_dir = os.path.join(base, f"rep-{replicate:02d}")
    nu_dir = os.path.join(rep_dir, "neutrality")
    os.makedirs(nu_dir, exist_ok=True)

    fixed = cfg.fixed_length
    # per-site probability that a copy actually changes the instruction
    r_eff = pcfg.mutation.effective_substitution_rate
    pop = seed_population(pcfg, ancestor, seed)
    stats_path = os.path.join(rep_dir, "stats.csv")
    reports: list[str] = []
    w_nu_series: list[float] = []
    births_since = 0
    extinct = False

    def row_for(update: int, measure: bool) -> dict:
        row = {"update": update, "occupied": pop.occupied_count, "births": births_since}
        if row["occupied"] == 0:
            return row
        row["mean_length"] = pop.mean_length()
        row["mean_fitness"] = pop.mean_fitness()
        row["mean_gestation"] = pop.mean_gestation()
        dom, abundance = dominant_genotype(pop)
        wild = test_fitness(dom, env, fixed_length=fixed)
        row.update(dominant_abundance=abundance, dominant_length=len(dom), dominant_w0=wild.w)
        if measure and wild.viable:
            try:
                report = analyze_genome(dom, env, cfg.capacity, r_eff, f"dominant@{update}", fixed)
            except NonViableError:
                return row
            path = os.path.join(nu_dir, f"u{update:06d}.txt")
            with open(path, "w") as fh:
                fh.write(report.format())
            reports.append(path)
            w_bar = mean_test_fitness(_genome_counts(pop), env, fixed)
            row.update(nu=report.spectrum.nu, F_nu=report.stats.F_nu, w_nu=report.stats.w_nu,
                       equilibrium_gap=equilibrium_gap(w_bar, wild.w, report.stats.F_nu))
            w_nu_series.append(report.stats.w_nu)
        return row

    with StatsWriter(stats_path) as writer:
        writer.write(row_for(0, False))
        ni = cfg.neutrality_interval
        for u in range(1, cfg.updates + 1):
            births, _ = advance_update(pop)
            births_since += births
            measure = ni > 0 and u % ni == 0
            last = u == cfg.updates
            if pop.occupied_count == 0:
                writer.write(row_for(u, False))
                extinct = True
                break
            if measure or last or u % cfg.stats_interval == 0:
                writer.write(row_for(u, measure))
                births_since = 0

    snapshot = os.path.join(rep_dir, "final.pop")
    write_snapshot(pop, snapshot)
    dominant_path = None
    if not extinct:
        dom, abundance = dominant_genotype(pop)
        wild = test_fitness(dom, env, fixed_length=fixed)
        dominant_path = os.path.join(rep_dir, "dominant.genome")
        write_genome(dominant_path, dom, {"update": pop.update_counter, "abundance": abundance,
                                          "w0": format_value(wild.w),
                                          "gestation": wild.gestation})
    plots = []
    _, rows = read_stats(stats_path)
    for col in PLOT_COLUMNS:
        if any(r[col] is not None for r in rows):
            path = os.path.join(rep_dir, f"{col}.svg")
            plots.append(render_timeseries(stats_path, [col], path,
                                           title=f"{cfg.preset} replicate {replicate}"))
    decreases = sum(1 for a, b in zip(w_nu_series, w_nu_series[1:]) if b < a)
    return RunArtifacts(replicate, seed, rep_dir, stats_path, snapshot, dominant_path,
                        tuple(reports), tuple(plots), extinct, pop.update_counter, decreases)


def _replicate_job(args):
    cfg, k, out_dir = args
    return run_experiment(cfg, k, out_dir)


def run_batch(cfg: ExperimentConfig, out_dir: str | None = None, workers: int = 1) -> BatchResult:
    """All replicates of ``cfg``, optionally in worker processes.

    A failing replicate is recorded in the summary and does not stop the
    others. Outputs do not depend on ``workers``.
    """
    base = out_dir if out_dir is not None else cfg.output_dir()
    os.makedirs(base, exist_ok=True)
    resolve_ancestor(cfg)  # fail fast before spawning anything
    with open(os.path.join(base, "config.txt"), "w") as fh:
        fh.write(format_config(cfg, include_out_dir=False))
    jobs = [(cfg, k, base) for k in range(cfg.replicates)]
    runs: list[RunArtifacts | None] = [None] * cfg.replicates
    failures: dict[int, str] = {}
    if workers > 1 and cfg.replicates > 1:
        with ProcessPoolExecutor(max_workers=min(workers, cfg.replicates)) as pool:
            futures = [pool.submit(_replicate_job, job) for job in jobs]
            for k, fut in enumerate(futures):
                exc = fut.exception()
                if exc is None:
                    runs[k] = fut.result()
                else:
                    failures[k] = f"{type(exc).__name__}: {exc}"
    else:
        for k, job in enumerate(jobs):
            try:
                runs[k] = _replicate_job(job)
            except Exception as exc:  # recorded, siblings continue
                failures[k] = f"{type(exc).__name__}: {exc}"
                traceback.print_exc()
    ok = [r for r in runs if r is not None]
    aggregate = None
    if ok:
        aggregate = write_aggregate([r.stats for r in ok], os.path.join(base, "aggregate.csv"))
    summary = os.path.join(base, "summary.json")
    _write_summary(summary, cfg, base, runs, failures, aggregate)
    return BatchResult(base, runs, aggregate, summary, failures)


def _final_row(path: str) -> dict:
    _, rows = read_stats(path)
    last = rows[-1] if rows else {}
    return {k: (format_value(v) if v is not None else None) for k, v in last.items()}


def _write_summary(path, cfg, base, runs, failures, aggregate) -> None:
    reps = []
    for k, r in enumerate(runs):
        entry = {"replicate": k, "seed": replicate_seed(cfg.seed, k)}
        if r is None:
            entry.update(status="failed", error=failures.get(k, "unknown"))
        else:
            entry.update(status="extinct" if r.extinct else "ok", final_update=r.final_update,
                         w_nu_decreases=r.w_nu_decreases, final=_final_row(r.stats),
                         files=sorted(os.path.relpath(p, base) for p in r.paths()))
        reps.append(entry)
    cfg_dict = asdict(cfg)
    cfg_dict.pop("out_dir")
    doc = {
        "preset": cfg.preset,
        "config": cfg_dict,
        "columns": list(STATS_COLUMNS),
        "replicates": reps,
        "failed": sorted(failures),
        "aggregate": os.path.relpath(aggregate, base) if aggregate else None,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
