"""Single-organism execution: CPU state, one-instruction steps, divide."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _vm
from .environment import TaskTable
from .isa import INSTRUCTIONS, MAX_GENOME_LENGTH, MIN_CHILD_LENGTH, Genome, MutationConfig
from .rng import as_stream

HEAD_NAMES = ("IP", "READ", "WRITE", "FLOW")
REGISTER_NAMES = ("AX", "BX", "CX")


class DivideFailure(enum.Enum):
    NOT_ALLOCATED = _vm.FAIL_NOT_ALLOCATED
    UNDER_COPIED = _vm.FAIL_UNDER_COPIED
    TOO_SHORT = _vm.FAIL_TOO_SHORT
    LENGTH_CONSTRAINT = _vm.FAIL_LENGTH


class DivideError(RuntimeError):
    def __init__(self, reason: DivideFailure):
        self.reason = reason
        super().__init__(reason.name.lower().replace("_", "-"))


@dataclass(frozen=True)
class DivideOutcome:
    child: Genome
    parent_gestation: int
    parent_tasks: frozenset[str]


@dataclass(frozen=True)
class StepEffect:
    executed: int
    io_output: int | None = None
    divide: DivideOutcome | None = None
    tasks_credited: frozenset[str] = frozenset()
    divide_failure: DivideFailure | None = None

    @property
    def mnemonic(self) -> str:
        return INSTRUCTIONS[self.executed]


class CpuState:
    """Execution context of one organism.

    Backed by a one-slot ``CpuBank`` so the compiled interpreter is the only
    implementation of the instruction semantics. ``regs`` and ``heads`` are
    writable views.
    """

    def __init__(self, genome: Genome, env: TaskTable | None = None):
        self.env = env if env is not None else TaskTable()
        self.bank = _vm.new_bank(1, len(self.env))
        self._cells = _vm.new_cells(1)
        self._log = _vm.new_birth_log(0, False)
        self.genome = genome
        _vm.load_genome(self.bank, 0, genome.as_array(), len(genome))

    @property
    def regs(self) -> np.ndarray:
        return self.bank.regs[0]

    @property
    def heads(self) -> np.ndarray:
        return self.bank.heads[0]

    def register(self, name: str) -> int:
        return int(self.regs[REGISTER_NAMES.index(name)])

    def set_register(self, name: str, value: int) -> None:
        self.regs[REGISTER_NAMES.index(name)] = _vm.wrap32(int(value))

    @property
    def memory(self) -> list[int]:
        return self.bank.mem[0, : self.bank.memlen[0]].tolist()

    @property
    def copied_flags(self) -> list[bool]:
        return [bool(x) for x in self.bank.copied[0, : self.bank.memlen[0]]]

    @property
    def copy_label_buffer(self) -> list[int]:
        return self.bank.labelbuf[0, : self.bank.labellen[0]].tolist()

    @property
    def stacks(self) -> tuple[list[int], list[int]]:
        b = self.bank
        return tuple(b.stacks[0, s, : b.sdepth[0, s]].tolist() for s in range(2))

    @property
    def active_stack(self) -> int:
        return int(self.bank.active[0])

    @property
    def input_cursor(self) -> int:
        return int(self.bank.cursor[0])

    @property
    def input_history(self) -> list[int]:
        cur = self.input_cursor
        return [int(_vm.INPUTS[k % 3]) for k in range(max(0, cur - 3), cur)]

    @property
    def gestation_steps(self) -> int:
        return int(self.bank.gest[0])

    @property
    def allocated(self) -> bool:
        return bool(self.bank.allocated[0])

    @property
    def failed_divides(self) -> int:
        return int(self.bank.failed[0])

    @property
    def credited_tasks(self) -> frozenset[str]:
        flags = self.bank.credited[0]
        return frozenset(t.name for k, t in enumerate(self.env.tasks) if flags[k])

    def reset(self) -> None:
        _vm.reset_cpu(self.bank, 0)


def _mutation_args(mut_cfg: MutationConfig):
    return (float(mut_cfg.copy_rate), float(mut_cfg.ins_rate), float(mut_cfg.del_rate),
            bool(mut_cfg.fixed_length))


def step(cpu: CpuState, env: TaskTable, mut_cfg: MutationConfig, rng,
         min_len: int = MIN_CHILD_LENGTH) -> StepEffect:
    """Execute one instruction; on a successful divide the parent is reset."""
    if len(env) != len(cpu.env):
        raise ValueError("CPU was built for a different task table")
    stream = as_stream(rng)
    stream.ensure()
    before = cpu.credited_tasks
    child = np.empty(MAX_GENOME_LENGTH + 1, np.int8)
    out = np.zeros(5, np.int64)
    copy_rate, ins_rate, del_rate, fixed = _mutation_args(mut_cfg)
    _vm.run_steps(cpu.bank, cpu._cells, True, 0, 1, copy_rate, ins_rate, del_rate, fixed,
                  int(min_len), MAX_GENOME_LENGTH, True, 1, env.task_of_table,
                  env.dependency_mask, env.bonuses, stream.buf, stream.pos, child, out,
                  cpu._log, False, np.zeros(2, np.int64))
    op, st = int(out[0]), int(out[4])
    io_value = int(out[1]) if st == _vm.ST_IO else None
    after = cpu.credited_tasks
    if st == _vm.ST_DIVIDE:
        outcome = DivideOutcome(Genome.from_array(child[: out[2]]), int(out[3]), after)
        cpu.reset()
        return StepEffect(op, None, outcome, after - before)
    failure = DivideFailure(st) if st < 0 else None
    return StepEffect(op, io_value, None, after - before, failure)


def attempt_divide(cpu: CpuState, mut_cfg: MutationConfig, min_len: int = MIN_CHILD_LENGTH,
                   rng=None) -> DivideOutcome:
    """Try to split off the child without touching the parent's state.

    Raises ``DivideError`` with the failure reason.
    """
    stream = as_stream(rng)
    stream.ensure()
    child = np.empty(MAX_GENOME_LENGTH + 1, np.int8)
    _, ins_rate, del_rate, fixed = _mutation_args(mut_cfg)
    res = _vm.attempt_divide(cpu.bank, 0, ins_rate, del_rate, fixed, int(min_len),
                             MAX_GENOME_LENGTH, stream.buf, stream.pos, child)
    if res < 0:
        raise DivideError(DivideFailure(res))
    return DivideOutcome(Genome.from_array(child[:res]), cpu.gestation_steps, cpu.credited_tasks)
