"""Logic tasks, environment complexity levels and task crediting.

A 3-input Boolean function is stored as an 8-bit truth table: bit ``m`` is
the output for inputs ``A = m & 1``, ``B = (m >> 1) & 1``, ``C = (m >> 2) & 1``.
Tasks are identified with their class under permutation of the inputs,
represented by the numerically smallest table in the class.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

MASK32 = 0xFFFFFFFF

# Bit j of A, B, C is bit 0, 1, 2 of (j mod 8), so every byte of an output
# computed bitwise from (A, B, C) is the function's truth table.
INPUT_A = 0xAAAAAAAA
INPUT_B = 0xCCCCCCCC
INPUT_C = 0xF0F0F0F0

COMPLEXITIES = ("simple", "medium", "complex")
DEFAULT_BONUS = 2.0


def canonical_inputs() -> tuple[int, int, int]:
    """The fixed input triple served cyclically A, B, C, A, ... (unsigned)."""
    return INPUT_A, INPUT_B, INPUT_C


def permute_table(table: int, perm: Sequence[int]) -> int:
    """Truth table of ``x -> f(x[perm[0]], x[perm[1]], x[perm[2]])``."""
    out = 0
    for m in range(8):
        bits = [(m >> k) & 1 for k in range(3)]
        src = bits[perm[0]] | (bits[perm[1]] << 1) | (bits[perm[2]] << 2)
        if (table >> src) & 1:
            out |= 1 << m
    return out


def canonical_table(table: int) -> int:
    return min(permute_table(table, p) for p in permutations(range(3)))


def essential_inputs(table: int) -> int:
    """Bitmask (A=1, B=2, C=4) of inputs the function actually depends on."""
    mask = 0
    for k in range(3):
        for m in range(8):
            if not (m >> k) & 1 and ((table >> m) & 1) != ((table >> (m | (1 << k))) & 1):
                mask |= 1 << k
                break
    return mask


def arity_of(table: int) -> int:
    return bin(essential_inputs(table)).count("1")


def apply_table(table: int, a: int, b: int = 0, c: int = 0) -> int:
    """Evaluate a truth table bitwise on three 32-bit words."""
    a &= MASK32
    b &= MASK32
    c &= MASK32
    out = 0
    for m in range(8):
        if (table >> m) & 1:
            out |= ((a if m & 1 else ~a) & (b if m & 2 else ~b) & (c if m & 4 else ~c))
    return out & MASK32


def _table(fn) -> int:
    return sum(1 << m for m in range(8) if fn(m & 1, (m >> 1) & 1, (m >> 2) & 1))


# The ten 1- and 2-input classics rewarded in the medium world.
MEDIUM_TASKS = {
    "echo": _table(lambda a, b, c: a),
    "not": _table(lambda a, b, c: 1 - a),
    "nand": _table(lambda a, b, c: 1 - (a & b)),
    "and": _table(lambda a, b, c: a & b),
    "or-not": _table(lambda a, b, c: a | (1 - b)),
    "or": _table(lambda a, b, c: a | b),
    "and-not": _table(lambda a, b, c: a & (1 - b)),
    "nor": _table(lambda a, b, c: 1 - (a | b)),
    "xor": _table(lambda a, b, c: a ^ b),
    "equ": _table(lambda a, b, c: 1 - (a ^ b)),
}
_NAME_OF_CANONICAL = {canonical_table(t): name for name, t in MEDIUM_TASKS.items()}


class EnvironmentFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TaskDef:
    name: str
    arity: int
    table: int
    bonus: float = DEFAULT_BONUS

    def __post_init__(self):
        if not 0 < self.table < 0xFF:
            raise EnvironmentFormatError(f"task {self.name!r}: constant or out-of-range table {self.table:#04x}")
        if canonical_table(self.table) != self.table:
            raise EnvironmentFormatError(f"task {self.name!r}: table {self.table:#04x} is not canonical")
        if arity_of(self.table) != self.arity:
            raise EnvironmentFormatError(
                f"task {self.name!r}: arity {self.arity} but table depends on {arity_of(self.table)} inputs")
        if not self.bonus > 0:
            raise EnvironmentFormatError(f"task {self.name!r}: bonus must be positive")

    def evaluate(self, args: Sequence[int]) -> int:
        """Apply the task bitwise to ``arity`` ordered 32-bit arguments."""
        if len(args) != self.arity:
            raise ValueError("argument count does not match arity")
        slots = [0, 0, 0]
        deps = essential_inputs(self.table)
        positions = [k for k in range(3) if (deps >> k) & 1]
        for k, value in zip(positions, args):
            slots[k] = value
        return apply_table(self.table, *slots)


def task_name(table: int) -> str:
    return _NAME_OF_CANONICAL.get(table, f"logic-{arity_of(table)}-{table:02x}")


def enumerate_logic_tasks(bonus: float = DEFAULT_BONUS) -> list[TaskDef]:
    canon = sorted({canonical_table(t) for t in range(256)} - {0x00, 0xFF})
    return [TaskDef(task_name(t), arity_of(t), t, bonus) for t in canon]


@dataclass(frozen=True)
class TaskTable:
    tasks: tuple[TaskDef, ...] = ()
    complexity: str = "simple"

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        seen = set()
        for t in self.tasks:
            if t.table in seen:
                raise EnvironmentFormatError(f"duplicate task table {t.table:#04x} ({t.name})")
            seen.add(t.table)
        if len({t.name for t in self.tasks}) != len(self.tasks):
            raise EnvironmentFormatError("duplicate task names")

    def __len__(self) -> int:
        return len(self.tasks)

    @property
    def names(self) -> list[str]:
        return [t.name for t in self.tasks]

    @cached_property
    def task_of_table(self) -> np.ndarray:
        """For each of the 256 raw tables, the index of its task or -1."""
        index = {t.table: i for i, t in enumerate(self.tasks)}
        return np.array([index.get(canonical_table(t), -1) for t in range(256)], dtype=np.int32)

    @cached_property
    def dependency_mask(self) -> np.ndarray:
        return np.array([essential_inputs(t) for t in range(256)], dtype=np.int32)

    @cached_property
    def bonuses(self) -> np.ndarray:
        return np.array([t.bonus for t in self.tasks], dtype=np.float64)


def build_environment(complexity: str) -> TaskTable:
    if complexity == "simple":
        return TaskTable((), "simple")
    if complexity == "medium":
        tasks = [TaskDef(name, arity_of(t), canonical_table(t)) for name, t in MEDIUM_TASKS.items()]
        return TaskTable(tuple(tasks), "medium")
    if complexity == "complex":
        return TaskTable(tuple(enumerate_logic_tasks()), "complex")
    raise EnvironmentFormatError(f"unknown complexity {complexity!r}; expected one of {COMPLEXITIES}")


def parse_environment(text: str, label: str = "custom") -> TaskTable:
    """Parse ``<name> <arity> <hex table> <bonus>`` lines; tables are canonicalized."""
    tasks = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise EnvironmentFormatError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        name, arity, table, bonus = parts
        if len(table) != 2:
            raise EnvironmentFormatError(f"line {lineno}: table must be two hex digits")
        try:
            raw = int(table, 16)
            arity_n = int(arity)
            bonus_f = float(bonus)
        except ValueError as exc:
            raise EnvironmentFormatError(f"line {lineno}: {exc}") from None
        if raw in (0x00, 0xFF):
            raise EnvironmentFormatError(f"line {lineno}: constant table {table}")
        try:
            tasks.append(TaskDef(name, arity_n, canonical_table(raw), bonus_f))
        except EnvironmentFormatError as exc:
            raise EnvironmentFormatError(f"line {lineno}: {exc}") from None
    return TaskTable(tuple(tasks), label)


def load_environment(path) -> TaskTable:
    with open(path) as fh:
        return parse_environment(fh.read())


def format_environment(table: TaskTable) -> str:
    return "".join(f"{t.name} {t.arity} {t.table:02x} {t.bonus:g}\n" for t in table.tasks)


def resolve_environment(source: str) -> TaskTable:
    """A complexity name or the path of an environment override file."""
    if source in COMPLEXITIES:
        return build_environment(source)
    return load_environment(source)


def check_output(value: int, history: Sequence[int], table: TaskTable,
                 already: Iterable[str] = ()) -> set[str]:
    """Names of tasks newly credited by emitting ``value``.

    A task of arity k is credited when ``value`` equals the task applied to
    some ordered k-tuple of distinct history entries.
    """
    value &= MASK32
    done = set(already)
    hist = [h & MASK32 for h in history][-3:]
    credited = set()
    for task in table.tasks:
        if task.name in done or task.arity > len(hist):
            continue
        for idx in permutations(range(len(hist)), task.arity):
            if task.evaluate([hist[i] for i in idx]) == value:
                credited.add(task.name)
                break
    return credited
