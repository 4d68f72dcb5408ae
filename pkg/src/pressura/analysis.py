"""Test-CPU fitness, one-point-mutant neutrality and the fidelity formulas."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _vm
from .environment import TaskTable
from .isa import ALPHABET_SIZE, MAX_GENOME_LENGTH, MIN_CHILD_LENGTH, Genome

TEST_CAP_FACTOR = 100

DELETERIOUS = "deleterious"
NEUTRAL = "neutral"
BENEFICIAL = "beneficial"


class NonViableError(ValueError):
    """Neutrality is undefined for a wild type that cannot replicate."""


@dataclass(frozen=True)
class FitnessResult:
    viable: bool
    w: float
    gestation: int
    merit: float
    child_identical: bool
    tasks: frozenset[str] = frozenset()


@dataclass(frozen=True)
class NeutralitySpectrum:
    total: int
    n_deleterious: int
    n_neutral: int
    n_beneficial: int
    nu: float
    classes: tuple[str, ...] = ()


@dataclass(frozen=True)
class GenotypeStats:
    length: int
    w0: float
    nu: float
    F: float
    F_nu: float
    w_F: float
    w_nu: float
    L_exact: float
    L_approx: float


# ---------------------------------------------------------------- test CPU

def _pack(genomes: Sequence[Genome]):
    codes = np.zeros((len(genomes), MAX_GENOME_LENGTH), np.int8)
    lens = np.zeros(len(genomes), np.int64)
    for k, g in enumerate(genomes):
        n = len(g)
        codes[k, :n] = np.frombuffer(g.codes, np.int8)
        lens[k] = n
    return codes, lens


def evaluate_many(genomes: Sequence[Genome], env: TaskTable, cap_factor: int = TEST_CAP_FACTOR,
                  fixed_length: bool = False,
                  min_child_length: int = MIN_CHILD_LENGTH) -> list[FitnessResult]:
    """``test_fitness`` for a batch of genomes in one compiled call."""
    m = len(genomes)
    if m == 0:
        return []
    codes, lens = _pack(genomes)
    gest = np.zeros(m, np.int64)
    merit = np.zeros(m, np.float64)
    clen = np.zeros(m, np.int64)
    same = np.zeros(m, np.uint8)
    tasks = np.zeros((m, max(1, len(env))), np.uint8)
    _vm.evaluate_genomes(codes, lens, env.task_of_table, env.dependency_mask, env.bonuses,
                         int(cap_factor), int(min_child_length), bool(fixed_length),
                         gest, merit, clen, same, tasks)
    names = env.names
    out = []
    for k in range(m):
        if gest[k] > 0:
            done = frozenset(names[t] for t in np.flatnonzero(tasks[k, : len(names)]))
            out.append(FitnessResult(True, float(merit[k] / gest[k]), int(gest[k]),
                                     float(merit[k]), bool(same[k]), done))
        else:
            out.append(FitnessResult(False, 0.0, 0, 0.0, False))
    return out


def test_fitness(g: Genome, env: TaskTable, cap_factor: int = TEST_CAP_FACTOR,
                 fixed_length: bool = False) -> FitnessResult:
    """Run ``g`` alone without mutations until its first divide.

    Merit is always length-scaled here (child length times task bonuses),
    so test fitness ranks genotypes the same way in every scheduler mode.
    """
    return evaluate_many([g], env, cap_factor, fixed_length)[0]


test_fitness.__test__ = False  # not a pytest test despite the name


def one_point_mutants(g: Genome) -> list[Genome]:
    """All ``len(g) * 25`` single substitutions, position-major."""
    base = bytearray(g.codes)
    out = []
    for pos, orig in enumerate(g.codes):
        for sym in range(ALPHABET_SIZE):
            if sym == orig:
                continue
            base[pos] = sym
            out.append(Genome(bytes(base)))
        base[pos] = orig
    return out


def classify(w_mut: float, w0: float, N: float) -> str:
    if w_mut == w0 or abs(w_mut - w0) < w0 / N:
        return NEUTRAL
    if w_mut >= w0 * (1.0 + 1.0 / N):
        return BENEFICIAL
    return DELETERIOUS


def classify_mutations(g: Genome, env: TaskTable, N: float, fixed_length: bool = False,
                       cap_factor: int = TEST_CAP_FACTOR) -> NeutralitySpectrum:
    """Neutrality spectrum of every one-point mutant of ``g``.

    A mutant is neutral when its test fitness is within ``w0 / N`` of the
    wild type's and beneficial when it is at least ``w0 * (1 + 1/N)``.
    ``N`` may be ``math.inf``.
    """
    if not N > 0:
        raise ValueError("N must be positive")
    wild = test_fitness(g, env, cap_factor, fixed_length)
    if not wild.viable:
        raise NonViableError("wild type is not viable; neutrality is undefined")
    results = evaluate_many(one_point_mutants(g), env, cap_factor, fixed_length)
    classes = tuple(classify(r.w, wild.w, N) for r in results)
    counts = Counter(classes)
    total = len(classes)
    return NeutralitySpectrum(total, counts[DELETERIOUS], counts[NEUTRAL], counts[BENEFICIAL],
                              (counts[NEUTRAL] + counts[BENEFICIAL]) / total, classes)


# ---------------------------------------------------------------- formulas

def _check_args(R: float, nu: float, length: float) -> None:
    if not 0.0 <= R <= 1.0:
        raise ValueError(f"rate {R} outside [0, 1]")
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"neutrality {nu} outside [0, 1]")
    if not length >= 1:
        raise ValueError(f"length {length} must be at least 1")


def _log_fnu(R: float, nu: float, length: float) -> float:
    # log1p keeps 1 - F accurate when R(1 - nu) is tiny
    return length * math.log1p(-R * (1.0 - nu)) if R * (1.0 - nu) < 1.0 else -math.inf


def neutral_fidelity(R: float, nu: float, length: float) -> float:
    """Probability of a copy that is exact or differs only neutrally."""
    _check_args(R, nu, length)
    return math.exp(_log_fnu(R, nu, length))


def fidelity(R: float, length: float) -> float:
    return neutral_fidelity(R, 0.0, length)


def effective_fitness(w: float, F_nu: float) -> float:
    if w < 0:
        raise ValueError("fitness must be non-negative")
    return F_nu * w


def mutational_load(R: float, length: float, nu: float) -> tuple[float, float]:
    """(exact, first-order exponential) load."""
    _check_args(R, nu, length)
    exact = -math.expm1(_log_fnu(R, nu, length))
    approx = -math.expm1(-R * length * (1.0 - nu))
    return exact, approx


def equilibrium_gap(w_bar: float, w0: float, F_nu: float) -> float:
    """Signed distance ``w_bar / w0 - F_nu`` from mutation-selection balance."""
    if not w0 > 0:
        raise ValueError("wild-type fitness must be positive")
    return w_bar / w0 - F_nu


def genotype_stats(length: int, w0: float, nu: float, R: float) -> GenotypeStats:
    F = fidelity(R, length)
    F_nu = neutral_fidelity(R, nu, length)
    L_exact, L_approx = mutational_load(R, length, nu)
    return GenotypeStats(length, w0, nu, F, F_nu, effective_fitness(w0, F),
                         effective_fitness(w0, F_nu), L_exact, L_approx)


def mean_test_fitness(counts: Mapping[Genome, int], env: TaskTable,
                      fixed_length: bool = False) -> float:
    """Abundance-weighted mean test fitness; non-viable genotypes count as 0."""
    genomes = list(counts)
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no organisms")
    results = evaluate_many(genomes, env, fixed_length=fixed_length)
    return sum(r.w * counts[g] for g, r in zip(genomes, results)) / total


# ---------------------------------------------------------------- report

REPORT_KEYS = ("wild_type", "length", "w0", "n_deleterious", "n_neutral", "n_beneficial",
               "total", "nu", "F", "F_nu", "w_F", "w_nu", "L_exact", "L_approx", "R", "N")


@dataclass(frozen=True)
class NeutralityReport:
    wild_type: str
    spectrum: NeutralitySpectrum
    stats: GenotypeStats
    R: float
    N: float

    def items(self) -> Iterable[tuple[str, object]]:
        s, st = self.spectrum, self.stats
        return zip(REPORT_KEYS, (
            self.wild_type, st.length, st.w0, s.n_deleterious, s.n_neutral, s.n_beneficial,
            s.total, s.nu, st.F, st.F_nu, st.w_F, st.w_nu, st.L_exact, st.L_approx,
            self.R, self.N))

    def format(self) -> str:
        def fmt(v):
            return repr(v) if isinstance(v, float) else str(v)
        return "".join(f"{k} = {fmt(v)}\n" for k, v in self.items())


def analyze_genome(g: Genome, env: TaskTable, N: float, R: float, name: str = "-",
                   fixed_length: bool = False) -> NeutralityReport:
    spectrum = classify_mutations(g, env, N, fixed_length)
    w0 = test_fitness(g, env, fixed_length=fixed_length).w
    return NeutralityReport(name, spectrum, genotype_stats(len(g), w0, spectrum.nu, R), R, N)


def parse_report(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition(" = ")
            out[key] = value
    return out
