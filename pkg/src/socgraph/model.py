"""The canonical selection model on a digraph and its exhaustive verification.

Every party k gets a bit as input and selects at most one of its children
as output (symbol 0 is "no selection", symbol 1+r is the r-th child in
ascending node order).  Party k receives input 1 exactly when all of its
parents select k.  Graphs whose every cycle carries a sibling pair
should make this a valid process for every experiment; the verifier checks
that claim by scanning the full experiment space and cross-checking the
scan against the recursive prediction of the fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Any, Iterable

import numpy as np

from .digraph import DiGraph, is_soc
from .errors import BudgetExceededError
from .process import (
    DEFAULT_BUDGET,
    Alphabet,
    Experiment,
    ProcessTable,
    check_budget,
    experiment_from_index,
)

# suffix grid size per vectorized scan chunk
_CHUNK_CAP = 1 << 19


@dataclass(frozen=True)
class SocModel:
    """Selection-model wiring for a fixed graph: sorted child lists, parent
    lists, and the induced two-input alphabet."""

    graph: DiGraph
    children: tuple[tuple[int, ...], ...]
    parents: tuple[tuple[int, ...], ...]
    alphabet: Alphabet

    @property
    def n(self) -> int:
        return self.graph.n

    def selection_symbol(self, party: int, child: int) -> int:
        """Output symbol by which ``party`` selects ``child``."""
        return 1 + self.children[party].index(child)

    def decode_selection(self, party: int, symbol: int) -> int | None:
        """Child selected by ``symbol``, or None for no selection."""
        if symbol == 0:
            return None
        return self.children[party][symbol - 1]

    def receives(self, k: int, selections: dict[int, int | None]) -> int:
        """Input bit of party k given each parent's decoded selection."""
        return int(all(selections[p] == k for p in self.parents[k]))


def build_model(g: DiGraph) -> SocModel:
    """Model parameters for ``g``.  Rejects self-loops: a party cannot be
    its own parent, and a self-loop already breaks the sibling criterion."""
    if g.has_self_loop():
        raise ValueError("model requires a self-loop-free graph")
    children = tuple(tuple(sorted(g.children(k))) for k in range(g.n))
    parents = tuple(tuple(sorted(g.parents(k))) for k in range(g.n))
    alphabet = Alphabet(
        inputs=(2,) * g.n,
        outputs=tuple(len(ch) + 1 for ch in children),
    )
    return SocModel(g, children, parents, alphabet)


def model_process_table(m: SocModel) -> ProcessTable:
    """Expanded table: for every joint selection, each party receives 1 iff
    all its parents selected it (empty parent set gives the constant 1)."""
    rows = []
    for o in m.alphabet.joint_outputs():
        selections = {k: m.decode_selection(k, o[k]) for k in range(m.n)}
        rows.append(tuple(m.receives(k, selections) for k in range(m.n)))
    return ProcessTable(m.alphabet, tuple(rows))


@dataclass(frozen=True)
class ModelTableView:
    """Entry-on-demand stand-in for the expanded table, for models whose
    joint output space is too large to materialize.  Supports the lookup
    surface that correlation evaluation uses."""

    model: SocModel

    @property
    def alphabet(self) -> Alphabet:
        return self.model.alphabet

    @property
    def n(self) -> int:
        return self.model.n

    def apply(self, o: tuple[int, ...]) -> tuple[int, ...]:
        m = self.model
        selections = {k: m.decode_selection(k, o[k]) for k in range(m.n)}
        return tuple(m.receives(k, selections) for k in range(m.n))

    def component(self, k: int, o: tuple[int, ...]) -> int:
        return self.apply(o)[k]


def check_faithfulness(m: SocModel) -> bool:
    """True iff every edge carries signal: for each edge (l, k) some joint
    selection of k's parents flips i_k when only party l's entry changes."""
    for k in range(m.n):
        parents = m.parents[k]
        for pos, _ in enumerate(parents):
            if not _edge_signals(m, k, parents, pos):
                return False
    return True


def _edge_signals(m: SocModel, k: int, parents: tuple[int, ...], pos: int) -> bool:
    sizes = [len(m.children[p]) + 1 for p in parents]
    for joint in product(*(range(s) for s in sizes)):
        base = _receives_from_symbols(m, k, parents, joint)
        for alt in range(sizes[pos]):
            if alt == joint[pos]:
                continue
            varied = joint[:pos] + (alt,) + joint[pos + 1:]
            if _receives_from_symbols(m, k, parents, varied) != base:
                return True
    return False


def _receives_from_symbols(
    m: SocModel, k: int, parents: tuple[int, ...], symbols: tuple[int, ...]
) -> int:
    return int(all(m.decode_selection(p, s) == k for p, s in zip(parents, symbols)))


def receives_one(m: SocModel, mu: Experiment, k: int, visited: tuple[int, ...] = ()) -> int:
    """Predicted input bit of party k under ``mu``, computed recursively.

    Party k receives 1 exactly when every parent l selects k, and parent l's
    selection is driven by the bit l itself receives, so the recursion asks
    the same question for each parent with k prepended to the visited
    sequence; revisited parties short-circuit to 0.

    Worked example, bare two-node loop 0 <-> 1 with mu_0 constant "select 1"
    and mu_1 constant "select 0": the query for party 0 descends to party 1,
    then to party 0 again, which is a revisit and returns 0; party 1
    therefore evaluates [1 = mu_0(0)], which holds since mu_0 always selects
    1; finally party 0 evaluates [0 = mu_1(1)], which also holds, so the
    predicted bit is 1.
    """
    if k in visited:
        return 0
    for parent in m.parents[k]:
        bit = receives_one(m, mu, parent, (k,) + tuple(visited))
        if m.decode_selection(parent, mu.tables[parent][bit]) != k:
            return 0
    return 1


def predicted_fixed_point(m: SocModel, mu: Experiment) -> tuple[int, ...]:
    """The joint input claimed to be the unique fixed point under ``mu``."""
    return tuple(receives_one(m, mu, k) for k in range(m.n))


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of an exhaustive model verification.

    status is "consistent", "counterexample", or "skipped" (non-SOC graph,
    verification not forced).  For counterexamples, ``experiment`` is the
    lexicographically first failing one, ``fixed_points`` the joint inputs it
    fixes, ``predicted`` the recursive prediction, and ``reason`` either
    "count" (not exactly one fixed point) or "prediction" (unique fixed
    point differs from the prediction).
    """

    status: str
    soc: bool
    experiment: Experiment | None = None
    experiment_index: int | None = None
    fixed_points: tuple[tuple[int, ...], ...] | None = None
    predicted: tuple[int, ...] | None = None
    reason: str | None = None

    def counterexample_json(self, g: DiGraph) -> dict[str, Any]:
        return {
            "graph": {"n": g.n, "edges": [[u, v] for u, v in g.edges()]},
            "mu": [list(t) for t in self.experiment.tables],
            "fixed_points": [list(fp) for fp in self.fixed_points],
            "predicted_point": list(self.predicted),
        }


def verify_consistency(
    g: DiGraph,
    force: bool = False,
    budget: int | None = DEFAULT_BUDGET,
    engine: str = "auto",
) -> VerifyResult:
    """Scans every experiment of the graph's model: consistent iff each one
    has exactly one fixed point and that fixed point equals the recursive
    prediction.

    Non-SOC graphs are skipped unless ``force`` is set, since the sibling
    criterion already rules them out; forcing produces the explicit failing
    experiment instead.
    """
    if g.has_self_loop():
        raise ValueError("verification requires a self-loop-free graph")
    soc = is_soc(g)
    if not soc and not force:
        return VerifyResult("skipped", soc)
    m = build_model(g)
    check_budget(m.alphabet, budget)
    if engine == "auto":
        engine = "vectorized" if m.alphabet.experiment_count() > 512 else "reference"
    if engine == "vectorized":
        index = _first_failure_vectorized(m)
    elif engine == "reference":
        index = _first_failure_reference(m)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if index is None:
        return VerifyResult("consistent", soc)
    mu = experiment_from_index(m.alphabet, index)
    w = model_process_table(m)
    fps = tuple(i for i in m.alphabet.joint_inputs() if w.apply(mu.apply(i)) == i)
    predicted = predicted_fixed_point(m, mu)
    reason = "count" if len(fps) != 1 else "prediction"
    return VerifyResult(
        "counterexample",
        soc,
        experiment=mu,
        experiment_index=index,
        fixed_points=fps,
        predicted=predicted,
        reason=reason,
    )


# ---- reference scan ----


def _first_failure_reference(m: SocModel) -> int | None:
    w = model_process_table(m)
    joints = list(m.alphabet.joint_inputs())
    index = 0
    for mu in _iter_experiments_local(m.alphabet):
        fps = [i for i in joints if w.apply(mu.apply(i)) == i]
        if len(fps) != 1 or fps[0] != predicted_fixed_point(m, mu):
            return index
        index += 1
    return None


def _iter_experiments_local(alphabet: Alphabet):
    per_party = [
        [tuple(t) for t in product(range(o), repeat=i)]
        for i, o in zip(alphabet.inputs, alphabet.outputs)
    ]
    for combo in product(*per_party):
        yield Experiment(tuple(combo))


# ---- vectorized scan ----
#
# Experiments are indexed party-0-major; each party's local function f maps
# to the pair (f // |O_k|, f % |O_k|) of selections for input bits 0 and 1.
# The scan fixes a prefix of parties per chunk and holds one numpy axis per
# remaining party, so a chunk evaluates all suffix experiments at once and
# the first failing index can be read off in lexicographic order.


def _first_failure_vectorized(m: SocModel) -> int | None:
    n = m.n
    osizes = list(m.alphabet.outputs)
    msizes = [o * o for o in osizes]
    split = n
    suffix_size = 1
    while split > 0 and suffix_size * msizes[split - 1] <= _CHUNK_CAP:
        suffix_size *= msizes[split - 1]
        split -= 1
    suffix = list(range(split, n))
    suffix_shape = tuple(msizes[k] for k in suffix)
    n_chunks = prod(msizes[:split])

    # per suffix party: selection symbol arrays for input bits 0 and 1,
    # shaped to broadcast along that party's own axis
    sel = {}
    for axis, k in enumerate(suffix):
        shape = [1] * len(suffix)
        shape[axis] = msizes[k]
        f = np.arange(msizes[k], dtype=np.int16)
        sel[k] = (
            (f // osizes[k]).reshape(shape),
            (f % osizes[k]).reshape(shape),
        )

    input_grid = list(product((0, 1), repeat=n))
    for chunk in range(n_chunks):
        prefix_sel = _decode_prefix(chunk, msizes[:split], osizes[:split])
        fail = _chunk_failures(m, prefix_sel, sel, suffix_shape, input_grid)
        if fail is not None:
            return chunk * suffix_size + fail
    return None


def _decode_prefix(
    chunk: int, msizes: list[int], osizes: list[int]
) -> list[tuple[int, int]]:
    digits = []
    for radix in reversed(msizes):
        digits.append(chunk % radix)
        chunk //= radix
    digits.reverse()
    return [(f // o, f % o) for f, o in zip(digits, osizes)]


def _selects(m: SocModel, sel, prefix_sel, party: int, bit: int, target: int):
    """Condition "party selects target when its input bit is ``bit``", as a
    scalar for prefix parties or a broadcastable array for suffix parties."""
    symbol = m.selection_symbol(party, target)
    if party < len(prefix_sel):
        return prefix_sel[party][bit] == symbol
    return sel[party][bit] == symbol


def _chunk_failures(m, prefix_sel, sel, suffix_shape, input_grid) -> int | None:
    n = m.n
    counts = np.zeros(suffix_shape, dtype=np.int16)

    for i in input_grid:
        mask: Any = True
        possible = True
        for j in range(n):
            received: Any = True
            for p in m.parents[j]:
                received = received & _selects(m, sel, prefix_sel, p, i[p], j)
                if received is False:
                    break
            cond = received if i[j] else _not(received)
            if cond is False:
                possible = False
                break
            if cond is not True:
                mask = mask & cond
        if not possible:
            continue
        if mask is True:
            counts += 1
        else:
            counts += mask

    predicted = [_receives_one_vec(m, sel, prefix_sel, k, 0) for k in range(n)]
    ok: Any = True
    for j in range(n):
        received: Any = True
        for p in m.parents[j]:
            on_zero = _selects(m, sel, prefix_sel, p, 0, j)
            on_one = _selects(m, sel, prefix_sel, p, 1, j)
            received = received & _choose(predicted[p], on_one, on_zero)
        ok = ok & _xnor(received, predicted[j])

    fail = counts != 1
    bad = _not(ok)
    if bad is not False:
        fail |= bad
    if fail.any():
        return int(np.argmax(fail))
    return None


def _receives_one_vec(m, sel, prefix_sel, k: int, visited_mask: int):
    """The recursive bit prediction evaluated over a whole chunk at once;
    identical recursion to receives_one, with the visited set as a bitmask."""
    if visited_mask >> k & 1:
        return False
    value: Any = True
    for p in m.parents[k]:
        bit = _receives_one_vec(m, sel, prefix_sel, p, visited_mask | 1 << k)
        on_zero = _selects(m, sel, prefix_sel, p, 0, k)
        on_one = _selects(m, sel, prefix_sel, p, 1, k)
        value = value & _choose(bit, on_one, on_zero)
        if value is False:
            return False
    return value


def _choose(cond, if_true, if_false):
    if cond is True:
        return if_true
    if cond is False:
        return if_false
    return np.where(cond, if_true, if_false)


def _not(value):
    if value is True:
        return False
    if value is False:
        return True
    return ~value


def _xnor(a, b):
    if a is True:
        return b
    if a is False:
        return _not(b)
    if b is True:
        return a
    if b is False:
        return _not(a)
    return ~(a ^ b)
