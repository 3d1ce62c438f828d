"""Tabulated deterministic processes on finite alphabets.

A process table maps every joint output assignment o = (o_0,...,o_{n-1})
to a joint input assignment i = (i_0,...,i_{n-1}).  The table is a valid
process when, for every choice of local functions mu_k: I_k -> O_k, the
composed map has exactly one fixed point.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Iterator

from .errors import BudgetExceededError, TableFormatError

DEFAULT_BUDGET = 10**9  # elementary scan steps (experiments times inputs)


class SignalingTableWarning(UserWarning):
    """Raised when an antinomy check runs on a signaling table, where the
    equivalence is outside its documented hypothesis class."""


@dataclass(frozen=True)
class Alphabet:
    """Per-party input and output alphabet sizes; symbols are 0..size-1."""

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.inputs) != len(self.outputs):
            raise ValueError("inputs and outputs must list the same parties")
        if not self.inputs:
            raise ValueError("at least one party required")
        if any(s < 1 for s in self.inputs) or any(s < 1 for s in self.outputs):
            raise ValueError("alphabet sizes must be >= 1")

    @property
    def n(self) -> int:
        return len(self.inputs)

    def joint_inputs(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(s) for s in self.inputs))

    def joint_outputs(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(s) for s in self.outputs))

    def output_index(self, o: tuple[int, ...]) -> int:
        idx = 0
        for size, sym in zip(self.outputs, o):
            if not (0 <= sym < size):
                raise ValueError(f"output symbol {sym} out of range")
            idx = idx * size + sym
        return idx

    def experiment_count(self) -> int:
        return prod(o ** i for i, o in zip(self.inputs, self.outputs))

    def scan_steps(self) -> int:
        return self.experiment_count() * prod(self.inputs)


@dataclass(frozen=True)
class Experiment:
    """Per-party function tables mu_k: I_k -> O_k (tables[k][i] = o)."""

    tables: tuple[tuple[int, ...], ...]

    def apply(self, i: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(t[x] for t, x in zip(self.tables, i))


@dataclass(frozen=True)
class ProcessTable:
    """Total map from joint outputs to joint inputs, stored row-major."""

    alphabet: Alphabet
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        a = self.alphabet
        if len(self.table) != prod(a.outputs):
            raise ValueError("table must cover every joint output")
        for row in self.table:
            if len(row) != a.n:
                raise ValueError("table entry has wrong party count")
            for size, sym in zip(a.inputs, row):
                if not (0 <= sym < size):
                    raise ValueError(f"input symbol {sym} out of range")

    @property
    def n(self) -> int:
        return self.alphabet.n

    def apply(self, o: tuple[int, ...]) -> tuple[int, ...]:
        return self.table[self.alphabet.output_index(o)]

    def component(self, k: int, o: tuple[int, ...]) -> int:
        return self.apply(o)[k]


@dataclass(frozen=True)
class ProcessVerdict:
    """Outcome of a validity scan.  For an invalid table, ``experiment`` is
    the lexicographically first failing mu and ``fixed_point_count`` the
    number of fixed points it produces."""

    valid: bool
    experiment: Experiment | None = None
    fixed_point_count: int | None = None


def check_budget(alphabet: Alphabet, budget: int | None) -> None:
    if budget is not None and alphabet.scan_steps() > budget:
        raise BudgetExceededError(
            f"scan of {alphabet.scan_steps()} steps exceeds budget {budget}"
        )


def iter_experiments(alphabet: Alphabet) -> Iterator[Experiment]:
    """All experiments in row-major lexicographic order over the per-party
    function tables, party 0 most significant."""
    per_party = [
        list(product(range(o), repeat=i))
        for i, o in zip(alphabet.inputs, alphabet.outputs)
    ]
    for combo in product(*per_party):
        yield Experiment(tuple(combo))


def experiment_from_index(alphabet: Alphabet, index: int) -> Experiment:
    """Inverse of the lexicographic experiment order."""
    radixes = [o ** i for i, o in zip(alphabet.inputs, alphabet.outputs)]
    digits = []
    for radix in reversed(radixes):
        digits.append(index % radix)
        index //= radix
    digits.reverse()
    tables = []
    for digit, (i_size, o_size) in zip(digits, zip(alphabet.inputs, alphabet.outputs)):
        row = []
        for _ in range(i_size):
            row.append(digit % o_size)
            digit //= o_size
        row.reverse()
        tables.append(tuple(row))
    return Experiment(tuple(tables))


def count_fixed_points(w: ProcessTable, mu: Experiment) -> int:
    """Number of joint inputs i with i = w(mu(i)), by scanning the joint
    input space."""
    if len(mu.tables) != w.n:
        raise ValueError("experiment party count does not match table")
    for k, (t, i_size, o_size) in enumerate(
        zip(mu.tables, w.alphabet.inputs, w.alphabet.outputs)
    ):
        if len(t) != i_size or any(not (0 <= sym < o_size) for sym in t):
            raise ValueError(f"experiment table for party {k} has wrong shape")
    count = 0
    for i in w.alphabet.joint_inputs():
        if w.apply(mu.apply(i)) == i:
            count += 1
    return count


def is_process(w: ProcessTable, budget: int | None = DEFAULT_BUDGET) -> ProcessVerdict:
    """Exhaustive validity scan: every experiment must yield exactly one
    fixed point.  Returns the lexicographically first failing experiment
    otherwise."""
    check_budget(w.alphabet, budget)
    for mu in iter_experiments(w.alphabet):
        count = count_fixed_points(w, mu)
        if count != 1:
            return ProcessVerdict(False, mu, count)
    return ProcessVerdict(True)


def is_nonsignaling(w: ProcessTable) -> bool:
    """True iff each party's input component never depends on that party's
    own output symbol."""
    a = w.alphabet
    for k in range(a.n):
        rest = [range(s) for s in a.outputs]
        rest[k] = range(1)
        for o in product(*rest):
            base = w.component(k, o)
            for sym in range(1, a.outputs[k]):
                varied = o[:k] + (sym,) + o[k + 1:]
                if w.component(k, varied) != base:
                    return False
    return True


def antinomy_equivalence_holds(w: ProcessTable, budget: int | None = DEFAULT_BUDGET) -> bool:
    """Checks that some experiment admits zero fixed points exactly when
    some experiment admits two or more.

    Meaningful for non-signaling tables; a signaling input emits
    SignalingTableWarning and is evaluated anyway.
    """
    check_budget(w.alphabet, budget)
    if not is_nonsignaling(w):
        warnings.warn(
            "antinomy equivalence evaluated on a signaling table",
            SignalingTableWarning,
            stacklevel=2,
        )
    some_zero = False
    some_multi = False
    for mu in iter_experiments(w.alphabet):
        count = count_fixed_points(w, mu)
        if count == 0:
            some_zero = True
        elif count >= 2:
            some_multi = True
        if some_zero and some_multi:
            break
    return some_zero == some_multi


def reduce_party(w: ProcessTable, k: int, mu_k: tuple[int, ...]) -> ProcessTable:
    """Fixes party k's local function and returns the induced process on the
    remaining parties: the fixed party's output is the one it produces from
    the input it receives, which is well defined because that input cannot
    depend on its own output."""
    a = w.alphabet
    if a.n < 2:
        raise ValueError("cannot reduce a single-party table")
    if not (0 <= k < a.n):
        raise ValueError(f"party {k} out of range")
    if len(mu_k) != a.inputs[k] or any(not (0 <= s < a.outputs[k]) for s in mu_k):
        raise ValueError("mu_k has the wrong shape for party k")
    if not is_nonsignaling(w):
        raise ValueError("reduction requires a non-signaling table")
    keep = [j for j in range(a.n) if j != k]
    reduced_alphabet = Alphabet(
        tuple(a.inputs[j] for j in keep), tuple(a.outputs[j] for j in keep)
    )
    rows = []
    for o_rest in reduced_alphabet.joint_outputs():
        probe = list(o_rest)
        probe.insert(k, 0)
        i_k = w.component(k, tuple(probe))
        probe[k] = mu_k[i_k]
        full = w.apply(tuple(probe))
        rows.append(tuple(full[j] for j in keep))
    return ProcessTable(reduced_alphabet, tuple(rows))


def quantum_lift(w: ProcessTable) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Sparse description of the diagonal operator with one unit entry per
    joint output o, at basis label (o, w(o)).  No matrix is materialized."""
    return tuple((o, w.apply(o)) for o in w.alphabet.joint_outputs())


# ---- text format ----
#
# Header line: n.  Then one line "|I_k| |O_k|" per party.  Then one line per
# joint output, row-major: "o_0 ... o_{n-1} : i_0 ... i_{n-1}".


def parse_process_table(text: str) -> ProcessTable:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TableFormatError("empty process table")
    try:
        n = int(lines[0])
    except ValueError:
        raise TableFormatError(f"bad party count line: {lines[0]!r}") from None
    if n < 1:
        raise TableFormatError("party count must be >= 1")
    if len(lines) < 1 + n:
        raise TableFormatError("missing alphabet lines")
    inputs, outputs = [], []
    for k in range(n):
        parts = lines[1 + k].split()
        if len(parts) != 2:
            raise TableFormatError(f"bad alphabet line: {lines[1 + k]!r}")
        try:
            i_size, o_size = int(parts[0]), int(parts[1])
        except ValueError:
            raise TableFormatError(f"bad alphabet line: {lines[1 + k]!r}") from None
        inputs.append(i_size)
        outputs.append(o_size)
    try:
        alphabet = Alphabet(tuple(inputs), tuple(outputs))
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None
    expected = prod(outputs)
    entries: dict[tuple[int, ...], tuple[int, ...]] = {}
    for line in lines[1 + n:]:
        if ":" not in line:
            raise TableFormatError(f"bad table line: {line!r}")
        left, right = line.split(":", 1)
        try:
            o = tuple(int(tok) for tok in left.split())
            i = tuple(int(tok) for tok in right.split())
        except ValueError:
            raise TableFormatError(f"bad table line: {line!r}") from None
        if len(o) != n or len(i) != n:
            raise TableFormatError(f"bad table line: {line!r}")
        if o in entries:
            raise TableFormatError(f"duplicate table entry for output {o}")
        entries[o] = i
    if len(entries) != expected:
        raise TableFormatError(
            f"table must define all {expected} joint outputs, got {len(entries)}"
        )
    rows = []
    for o in alphabet.joint_outputs():
        if o not in entries:
            raise TableFormatError(f"missing table entry for output {o}")
        rows.append(entries[o])
    try:
        return ProcessTable(alphabet, tuple(rows))
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None


def format_process_table(w: ProcessTable) -> str:
    a = w.alphabet
    lines = [str(a.n)]
    lines.extend(f"{i} {o}" for i, o in zip(a.inputs, a.outputs))
    for o in a.joint_outputs():
        left = " ".join(str(s) for s in o)
        right = " ".join(str(s) for s in w.apply(o))
        lines.append(f"{left} : {right}")
    return "\n".join(lines) + "\n"


# Experiment files list one line per party with |I_k| output symbols, the
# table of mu_k in input order.


def parse_experiment(text: str, alphabet: Alphabet) -> Experiment:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) != alphabet.n:
        raise TableFormatError(
            f"expected one line per party ({alphabet.n}), got {len(lines)}"
        )
    tables = []
    for k, line in enumerate(lines):
        toks = line.split()
        if len(toks) != alphabet.inputs[k]:
            raise TableFormatError(
                f"party {k}: expected {alphabet.inputs[k]} output symbols"
            )
        try:
            row = tuple(int(t) for t in toks)
        except ValueError:
            raise TableFormatError(f"party {k}: bad line {line!r}") from None
        for sym in row:
            if not (0 <= sym < alphabet.outputs[k]):
                raise TableFormatError(
                    f"party {k}: output symbol {sym} out of range"
                )
        tables.append(row)
    return Experiment(tuple(tables))


def format_experiment(mu: Experiment) -> str:
    return "\n".join(" ".join(str(s) for s in row) for row in mu.tables) + "\n"
