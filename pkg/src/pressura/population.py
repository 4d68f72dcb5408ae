"""Fixed-capacity, well-mixed population with stride-scheduled CPU cycles."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _vm
from .environment import TaskTable
from .isa import (CODE, MAX_GENOME_LENGTH, MIN_CHILD_LENGTH, Genome,
                  MutationConfig)
from .rng import RandomStream

EQUAL_SHARE = "equal_share"
MERIT_SCALED = "merit_scaled"
SCHEDULER_MODES = (EQUAL_SHARE, MERIT_SCALED)
STRIDE_CONSTANT = _vm.STRIDE_CONSTANT

SNAPSHOT_HEADER = "#pressura-pop v1"


class ExtinctionError(RuntimeError):
    """Every cell is empty; the run cannot continue."""


@dataclass(frozen=True)
class PopulationConfig:
    capacity: int = 400
    cycles_per_individual_per_update: int = 30
    scheduler_mode: str = MERIT_SCALED
    min_child_length: int = MIN_CHILD_LENGTH
    mutation: MutationConfig = field(default_factory=MutationConfig)
    environment: TaskTable = field(default_factory=TaskTable)
    steps_limit_factor: int = 100

    def __post_init__(self):
        if self.capacity < 2:
            raise ValueError("capacity must be at least 2")
        if self.cycles_per_individual_per_update < 1:
            raise ValueError("cycles_per_individual_per_update must be at least 1")
        if self.scheduler_mode not in SCHEDULER_MODES:
            raise ValueError(f"scheduler_mode must be one of {SCHEDULER_MODES}")
        if self.steps_limit_factor < 1:
            raise ValueError("steps_limit_factor must be at least 1")


@dataclass(frozen=True)
class BirthEvent:
    parent_cell: int
    child_cell: int
    child_genome: Genome | None
    child_merit: float
    parent_gestation: int
    update: int


@dataclass(frozen=True)
class UpdateStats:
    update: int
    occupied: int
    mean_length: float
    mean_fitness: float | None
    mean_gestation: float | None
    births: int
    culled: int
    dominant_abundance: int
    extinct: bool = False


def merit_of(length: int, credited: Iterable[str], table: TaskTable, mode: str) -> float:
    """Merit for a genome of ``length`` that performed ``credited`` tasks."""
    if length < 1:
        raise ValueError("length must be positive")
    if mode == EQUAL_SHARE:
        return 1.0
    if mode != MERIT_SCALED:
        raise ValueError(f"unknown scheduler mode {mode!r}")
    bonus = {t.name: t.bonus for t in table.tasks}
    merit = float(length)
    for name in set(credited):
        merit *= bonus[name]
    return merit


class Population:
    """N cells, their CPUs and the stride scheduler.

    Scheduler passes are stored relative to ``pass_offset`` (rebased at the
    start of every update); the absolute pass of a cell is
    ``pass_offset + passes[cell]``.
    """

    def __init__(self, cfg: PopulationConfig, seed: int | None = 0, record_births: bool = False):
        self.cfg = cfg
        n = cfg.capacity
        env = cfg.environment
        self.bank = _vm.new_bank(n, len(env))
        self.cells = _vm.new_cells(n)
        (self.occupied, self.merit, self.last_gestation, self.births, self.passes,
         self.heap, _, self.hpos, self.hsize) = self.cells
        self.pass_offset = 0.0
        self.update_counter = 0
        self.birth_counter = 0
        self.cull_counter = 0
        self.rng = RandomStream(seed)
        self.record_births = record_births
        self.last_events: list[BirthEvent] = []

    # -- cell access -------------------------------------------------------

    def __len__(self) -> int:
        return self.cfg.capacity

    @property
    def occupied_count(self) -> int:
        return int(self.occupied.sum())

    def occupied_cells(self) -> np.ndarray:
        return np.flatnonzero(self.occupied)

    def genome_at(self, cell: int) -> Genome | None:
        if not self.occupied[cell]:
            return None
        return Genome(self.bank.genome[cell, : self.bank.glen[cell]].tobytes())

    def genomes(self) -> dict[int, Genome]:
        return {int(i): self.genome_at(i) for i in self.occupied_cells()}

    def insert(self, cell: int, genome: Genome, merit: float, births: int = 0,
               pass_value: float | None = None) -> None:
        """Place ``genome`` in ``cell`` with a fresh CPU, replacing any occupant.

        The new pass defaults to the current minimum (the scheduler's "now").
        """
        if not merit > 0:
            raise ValueError("merit must be positive")
        if self.occupied[cell]:
            _vm.heap_remove(self.cells, cell)
        _vm.load_genome(self.bank, cell, genome.as_array(), len(genome))
        self.occupied[cell] = 1
        self.merit[cell] = merit
        self.births[cell] = births
        self.last_gestation[cell] = -1
        if pass_value is None:
            pass_value = self.passes[self.heap[0]] if self.hsize[0] else 0.0
        _vm.heap_insert(self.cells, cell, float(pass_value))

    def remove(self, cell: int) -> None:
        if self.occupied[cell]:
            _vm.heap_remove(self.cells, cell)
            self.occupied[cell] = 0

    def absolute_pass(self, cell: int) -> float:
        return self.pass_offset + float(self.passes[cell])

    # -- dynamics ----------------------------------------------------------

    def _mutation_args(self):
        m = self.cfg.mutation
        return (float(m.copy_rate), float(m.ins_rate), float(m.del_rate), bool(m.fixed_length))

    def advance(self, steps: int):
        """Run ``steps`` scheduled instructions; returns (births, culls, executed)."""
        cfg = self.cfg
        env = cfg.environment
        copy_rate, ins_rate, del_rate, fixed = self._mutation_args()
        log = _vm.new_birth_log(steps + 1 if self.record_births else 0, self.record_births)
        counters = np.zeros(2, np.int64)
        child = np.empty(MAX_GENOME_LENGTH + 1, np.int8)
        out = np.zeros(5, np.int64)
        done = 0
        while done < steps and self.hsize[0] > 0:
            self.rng.ensure(_vm.DRAWS_PER_STEP)
            done += _vm.run_steps(
                self.bank, self.cells, False, 0, steps - done,
                copy_rate, ins_rate, del_rate, fixed, int(cfg.min_child_length),
                MAX_GENOME_LENGTH, cfg.scheduler_mode == MERIT_SCALED, int(cfg.steps_limit_factor),
                env.task_of_table, env.dependency_mask, env.bonuses,
                self.rng.buf, self.rng.pos, child, out, log, self.record_births, counters)
        births, culls = int(counters[0]), int(counters[1])
        self.birth_counter += births
        self.cull_counter += culls
        if self.record_births:
            self.last_events = [
                BirthEvent(int(log.parent[k]), int(log.child[k]),
                           Genome(log.genomes[k, : log.length[k]].tobytes()),
                           float(log.merit[k]), int(log.gest[k]), self.update_counter)
                for k in range(int(log.n[0]))]
        return births, culls, done

    def rebase(self) -> None:
        self.pass_offset += _vm.rebase_passes(self.cells)

    # -- summaries ---------------------------------------------------------

    def genotype_counts(self) -> Counter:
        g, n = self.bank.genome, self.bank.glen
        return Counter(g[i, : n[i]].tobytes() for i in self.occupied_cells())

    def mean_length(self) -> float:
        cells = self.occupied_cells()
        return float(self.bank.glen[cells].mean()) if len(cells) else 0.0

    def mean_fitness(self) -> float | None:
        """Mean merit / last gestation over organisms that have reproduced."""
        mask = (self.occupied == 1) & (self.last_gestation > 0)
        if not mask.any():
            return None
        return float((self.merit[mask] / self.last_gestation[mask]).mean())

    def mean_gestation(self) -> float | None:
        mask = (self.occupied == 1) & (self.last_gestation > 0)
        if not mask.any():
            return None
        return float(self.last_gestation[mask].mean())


def seed_population(cfg: PopulationConfig, ancestor: Genome, seed: int | None = 0,
                    record_births: bool = False) -> Population:
    if not cfg.min_child_length <= len(ancestor) <= MAX_GENOME_LENGTH:
        raise ValueError(f"ancestor length {len(ancestor)} outside "
                         f"[{cfg.min_child_length}, {MAX_GENOME_LENGTH}]")
    pop = Population(cfg, seed, record_births)
    pop.insert(0, ancestor, merit_of(len(ancestor), (), cfg.environment, cfg.scheduler_mode))
    return pop


def scheduler_select(pop: Population) -> int:
    """Charge and return the occupied cell with the smallest pass (ties: lowest index)."""
    if pop.hsize[0] == 0:
        raise ExtinctionError("no occupied cell to schedule")
    return int(_vm.scheduler_pick(pop.cells))


def dominant_genotype(pop: Population) -> tuple[Genome, int]:
    counts = pop.genotype_counts()
    if not counts:
        raise ExtinctionError("population is empty")
    codes, n = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Genome(codes), n


def advance_update(pop: Population) -> tuple[int, int]:
    """One update without the summary statistics; returns (births, culls)."""
    occupied = pop.occupied_count
    if occupied == 0:
        raise ExtinctionError(f"population extinct before update {pop.update_counter + 1}")
    pop.rebase()
    births, culls, _ = pop.advance(occupied * pop.cfg.cycles_per_individual_per_update)
    pop.update_counter += 1
    return births, culls


def summarize(pop: Population, births: int = 0, culls: int = 0) -> UpdateStats:
    left = pop.occupied_count
    dominant = max(pop.genotype_counts().values()) if left else 0
    return UpdateStats(pop.update_counter, left, pop.mean_length(), pop.mean_fitness(),
                       pop.mean_gestation(), births, culls, dominant, extinct=left == 0)


def run_update(pop: Population) -> UpdateStats:
    """Advance one update: occupied x cycles_per_individual scheduled steps.

    Raises ``ExtinctionError`` if the population was already empty; an update
    that ends in extinction returns stats with ``extinct=True``.
    """
    births, culls = advance_update(pop)
    return summarize(pop, births, culls)


def place_offspring(pop: Population, parent_cell: int, child: Genome, child_merit: float,
                    parent_gestation: int = 0) -> BirthEvent:
    """Put ``child`` in a uniformly random cell other than the parent's."""
    if not pop.occupied[parent_cell]:
        raise ValueError(f"parent cell {parent_cell} is empty")
    n = pop.cfg.capacity
    j = int(pop.rng.random() * (n - 1))
    if j >= parent_cell:
        j += 1
    now = float(pop.passes[pop.heap[0]])
    pop.insert(j, child, child_merit, pass_value=now + STRIDE_CONSTANT / child_merit)
    pop.birth_counter += 1
    return BirthEvent(parent_cell, j, child, child_merit, parent_gestation, pop.update_counter)


# -- snapshots ---------------------------------------------------------------

def format_snapshot(pop: Population) -> str:
    lines = [SNAPSHOT_HEADER]
    for cell in pop.occupied_cells():
        g = pop.genome_at(cell)
        lines.append(f"{cell} {float(pop.merit[cell])!r} {int(pop.births[cell])} {','.join(g.mnemonics())}")
    return "\n".join(lines) + "\n"


def write_snapshot(pop: Population, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_snapshot(pop))


def parse_snapshot(text: str) -> list[tuple[int, float, int, Genome]]:
    lines = text.splitlines()
    if not lines or lines[0] != SNAPSHOT_HEADER:
        raise ValueError(f"missing header {SNAPSHOT_HEADER!r}")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 4 fields")
        names = parts[3].split(",")
        unknown = [s for s in names if s not in CODE]
        if unknown:
            raise ValueError(f"line {lineno}: unknown mnemonic {unknown[0]!r}")
        records.append((int(parts[0]), float(parts[1]), int(parts[2]), Genome.from_mnemonics(names)))
    return records


def read_snapshot(path) -> list[tuple[int, float, int, Genome]]:
    with open(path) as fh:
        return parse_snapshot(fh.read())


def restore_population(cfg: PopulationConfig, records, seed: int | None = 0) -> Population:
    pop = Population(cfg, seed)
    for cell, merit, births, genome in records:
        pop.insert(cell, genome, merit, births)
    return pop
