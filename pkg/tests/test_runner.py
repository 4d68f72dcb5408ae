import filecmp
import json
import os

import pytest

from pressura.experiments.config import ExperimentConfig, load_config
from pressura.experiments.runner import (AncestorError, replicate_seed, resolve_ancestor,
                                         run_batch, run_experiment)
from pressura.experiments.stats import STATS_COLUMNS, aggregate_rows, read_stats
from pressura.isa import Genome, read_genome, reference_ancestor, write_genome


def small(**kw):
    base = dict(environment="medium", capacity=40, updates=120, replicates=2, seed=3,
                stats_interval=10, neutrality_interval=60)
    base.update(kw)
    return ExperimentConfig(**base)


def tree(root):
    out = {}
    for d, _, files in os.walk(root):
        for f in files:
            p = os.path.join(d, f)
            with open(p, "rb") as fh:
                out[os.path.relpath(p, root)] = fh.read()
    return out


def test_replicate_seed_is_xor():
    assert replicate_seed(7, 0) == 7 and replicate_seed(7, 3) == 4
    assert len({replicate_seed(123, k) for k in range(64)}) == 64


def test_run_writes_declared_artifacts(tmp_path):
    art = run_experiment(small(), 0, str(tmp_path))
    for p in art.paths():
        assert os.path.isfile(p), p
    header, rows = read_stats(art.stats)
    assert tuple(header) == STATS_COLUMNS
    updates = [r["update"] for r in rows]
    assert updates == sorted(set(updates)) and updates[0] == 0 and updates[-1] == 120
    nu_rows = [r for r in rows if r["nu"] is not None]
    assert [r["update"] for r in nu_rows] == [60, 120] and len(art.neutrality_reports) == 2
    assert read_genome(art.dominant) is not None
    assert {os.path.basename(p) for p in art.plots} >= {"mean_length.svg", "mean_fitness.svg"}


def test_neutrality_entry_count():
    # 10000 updates measured every 500 -> 20 entries; checked on a shorter grid
    cfg = small(updates=200, neutrality_interval=20, replicates=1)
    assert sum(1 for u in range(1, cfg.updates + 1) if u % cfg.neutrality_interval == 0) == 10


def test_batch_is_deterministic_and_worker_independent(tmp_path):
    cfg = small()
    a = run_batch(cfg, str(tmp_path / "a"))
    b = run_batch(cfg, str(tmp_path / "b"))
    c = run_batch(cfg, str(tmp_path / "c"), workers=2)
    ta, tb, tc = tree(a.directory), tree(b.directory), tree(c.directory)
    assert ta == tb == tc
    assert len([k for k in ta if k.endswith("stats.csv")]) == 2
    assert "aggregate.csv" in ta and "summary.json" in ta


def test_aggregate_recomputes_from_replicates(tmp_path):
    res = run_batch(small(), str(tmp_path))
    tables = [read_stats(r.stats)[1] for r in res.runs]
    _, agg = read_stats(res.aggregate)
    again = aggregate_rows(tables)
    assert len(agg) == len(again)
    for row, want in zip(agg, again):
        for col in STATS_COLUMNS:
            if want[col] is None:
                assert row[col] is None
            else:
                assert row[col] == pytest.approx(want[col], rel=1e-5)


def test_single_replicate_aggregate_equals_its_stats(tmp_path):
    res = run_batch(small(replicates=1), str(tmp_path))
    assert filecmp.cmp(res.aggregate, res.runs[0].stats, shallow=False)


def test_summary_marks_failed_replicates(tmp_path, monkeypatch):
    import pressura.experiments.runner as runner

    real = runner.run_experiment

    def flaky(cfg, k, out):
        if k == 1:
            raise RuntimeError("boom")
        return real(cfg, k, out)

    monkeypatch.setattr(runner, "run_experiment", flaky)
    res = run_batch(small(replicates=3, updates=30), str(tmp_path))
    doc = json.loads(open(res.summary).read())
    assert doc["failed"] == [1]
    assert [r["status"] for r in doc["replicates"]] == ["ok", "failed", "ok"]
    assert "boom" in doc["replicates"][1]["error"]
    assert res.aggregate is not None


def test_extinction_is_reported(tmp_path):
    sterile = tmp_path / "sterile.genome"
    write_genome(sterile, Genome.from_mnemonics(["inc"] * 20))
    res = run_batch(small(ancestor=str(sterile), replicates=1, updates=150), str(tmp_path / "x"))
    run = res.runs[0]
    assert run.extinct and run.dominant is None and res.extinct
    _, rows = read_stats(run.stats)
    assert rows[-1]["occupied"] == 0


def test_ancestor_resolution(tmp_path):
    assert resolve_ancestor(small()) == reference_ancestor()
    assert resolve_ancestor(small(fixed_length=True, length=100)) == reference_ancestor(100)
    with pytest.raises(AncestorError):
        resolve_ancestor(load_config("set-i"))
    with pytest.raises(AncestorError):
        resolve_ancestor(small(ancestor=str(tmp_path / "missing.genome")))
    rep = tmp_path / "prior" / "rep-00"
    rep.mkdir(parents=True)
    write_genome(rep / "dominant.genome", reference_ancestor(25))
    assert resolve_ancestor(small(ancestor=str(rep))) == reference_ancestor(25)
    with pytest.raises(AncestorError):
        resolve_ancestor(small(ancestor=str(rep), fixed_length=True, length=30))
