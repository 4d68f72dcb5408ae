"""Instruction set, genome representation and the genome text format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INSTRUCTIONS: tuple[str, ...] = (
    "nop-a", "nop-b", "nop-c",
    "if-n-equ", "if-less",
    "pop", "push", "swap-stk", "swap",
    "shift-r", "shift-l", "inc", "dec",
    "add", "sub", "nand", "io",
    "h-alloc", "h-copy", "h-search",
    "mov-head", "jmp-head", "get-head",
    "if-label", "set-flow", "h-divide",
)
ALPHABET_SIZE = len(INSTRUCTIONS)
CODE = {name: code for code, name in enumerate(INSTRUCTIONS)}

NOP_A, NOP_B, NOP_C = 0, 1, 2
IF_N_EQU, IF_LESS, POP, PUSH, SWAP_STK, SWAP = 3, 4, 5, 6, 7, 8
SHIFT_R, SHIFT_L, INC, DEC, ADD, SUB, NAND, IO = 9, 10, 11, 12, 13, 14, 15, 16
H_ALLOC, H_COPY, H_SEARCH, MOV_HEAD, JMP_HEAD, GET_HEAD = 17, 18, 19, 20, 21, 22
IF_LABEL, SET_FLOW, H_DIVIDE = 23, 24, 25

MAX_GENOME_LENGTH = 1024
MIN_CHILD_LENGTH = 10

GENOME_HEADER = "#pressura-genome v1"


class GenomeFormatError(ValueError):
    """Raised for malformed genome files; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, order=True)
class Genome:
    """An immutable instruction sequence; equality and ordering are by content.

    Ordering compares the instruction codes lexicographically, which is the
    tie-break rule used when picking a dominant genotype.
    """

    codes: bytes

    def __post_init__(self):
        if not isinstance(self.codes, bytes):
            object.__setattr__(self, "codes", bytes(self.codes))
        n = len(self.codes)
        if n < 1 or n > MAX_GENOME_LENGTH:
            raise ValueError(f"genome length {n} outside [1, {MAX_GENOME_LENGTH}]")
        if max(self.codes) >= ALPHABET_SIZE:
            raise ValueError("instruction code out of range")

    @classmethod
    def from_mnemonics(cls, names: Iterable[str]) -> "Genome":
        return cls(bytes(CODE[n] for n in names))

    @classmethod
    def from_array(cls, arr) -> "Genome":
        return cls(np.asarray(arr, dtype=np.int8).tobytes())

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def __getitem__(self, i):
        return self.codes[i]

    def mnemonics(self) -> list[str]:
        return [INSTRUCTIONS[c] for c in self.codes]

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.codes, dtype=np.int8).copy()

    def __repr__(self) -> str:
        body = ",".join(self.mnemonics())
        if len(body) > 60:
            body = body[:57] + "..."
        return f"Genome(len={len(self)}, {body})"


@dataclass(frozen=True)
class MutationConfig:
    """Mutation channels: per-copy substitution and per-divide indels.

    ``copy_rate`` is an attempt rate: the replacement symbol is drawn from all
    26 instructions, so the chance of an actual change per copied instruction
    is ``copy_rate * 25 / 26``. Fixed-length mode forces both indel rates to 0.
    """

    copy_rate: float = 0.0075
    ins_rate: float = 0.05
    del_rate: float = 0.05
    fixed_length: bool = False

    def __post_init__(self):
        for name in ("copy_rate", "ins_rate", "del_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.fixed_length:
            object.__setattr__(self, "ins_rate", 0.0)
            object.__setattr__(self, "del_rate", 0.0)

    @property
    def effective_substitution_rate(self) -> float:
        return self.copy_rate * (ALPHABET_SIZE - 1) / ALPHABET_SIZE


def complement_label(label: Sequence[int]) -> list[int]:
    """Map nop-a -> nop-b -> nop-c -> nop-a, symbol by symbol."""
    out = []
    for c in label:
        if c not in (NOP_A, NOP_B, NOP_C):
            raise ValueError(f"not a nop: {c!r}")
        out.append((c + 1) % 3)
    return out


def parse_genome(text: str) -> Genome:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip("\r") != GENOME_HEADER:
        raise GenomeFormatError(f"missing header {GENOME_HEADER!r}", 1)
    codes = []
    in_body = False
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        if not in_body and line.startswith("#"):
            if not line.startswith("# ") or ":" not in line:
                raise GenomeFormatError(f"malformed comment {line!r}", lineno)
            continue
        in_body = True
        code = CODE.get(line)
        if code is None:
            raise GenomeFormatError(f"unknown mnemonic {line!r}", lineno)
        codes.append(code)
        if len(codes) > MAX_GENOME_LENGTH:
            raise GenomeFormatError(f"genome longer than {MAX_GENOME_LENGTH}", lineno)
    if not codes:
        raise GenomeFormatError("empty genome body")
    return Genome(bytes(codes))


def serialize_genome(g: Genome, meta: dict[str, object] | None = None) -> str:
    parts = [GENOME_HEADER]
    for key, value in (meta or {}).items():
        parts.append(f"# {key}: {value}")
    parts.extend(g.mnemonics())
    return "\n".join(parts) + "\n"


def read_genome(path) -> Genome:
    with open(path) as fh:
        return parse_genome(fh.read())


def write_genome(path, g: Genome, meta: dict[str, object] | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_genome(g, meta))


# Setup: allocate, find the end label, park the write head on the child.
_SETUP = ("h-alloc", "h-search", "nop-c", "nop-a", "mov-head", "nop-c")
# Copy loop: one instruction per pass until the end label has been copied.
_LOOP = ("h-search", "h-copy", "if-label", "nop-c", "nop-a", "h-divide",
         "mov-head", "nop-a", "nop-b")
ANCESTOR_CORE = len(_SETUP) + len(_LOOP)


def reference_ancestor(length: int = 20) -> Genome:
    """Hand-written self-replicator; ``length - 15`` nop-c pad the setup block.

    The pad sits between setup and copy loop because the end label
    (nop-a nop-b) must be the last two instructions for the write head to land
    exactly at the start of the allocated child space.
    """
    if length < ANCESTOR_CORE or length > MAX_GENOME_LENGTH:
        raise ValueError(f"ancestor length must be in [{ANCESTOR_CORE}, {MAX_GENOME_LENGTH}]")
    names = list(_SETUP) + ["nop-c"] * (length - ANCESTOR_CORE) + list(_LOOP)
    return Genome.from_mnemonics(names)
