"""Observed correlations of a process under local instruments, their causal
decomposition by source peeling, and the fixed-order game-value oracle.

All probabilities are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import prod
from typing import Any, Iterable, Iterator

from .digraph import DiGraph, find_source, induced_subgraph, is_chordless_soc
from .errors import BudgetExceededError, InvariantError, TableFormatError
from .model import SocModel
from .process import ProcessTable, reduce_party


@dataclass(frozen=True)
class Instrument:
    """Per-party local operations: tables[k][x][i] = (o, a) maps the pair of
    received input i and setting x to a selection o and an outcome a."""

    input_sizes: tuple[int, ...]
    output_sizes: tuple[int, ...]
    setting_sizes: tuple[int, ...]
    outcome_sizes: tuple[int, ...]
    tables: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]

    def __post_init__(self) -> None:
        n = len(self.input_sizes)
        if not (
            len(self.output_sizes) == len(self.setting_sizes)
            == len(self.outcome_sizes) == len(self.tables) == n
        ):
            raise ValueError("per-party field lengths disagree")
        for k in range(n):
            if len(self.tables[k]) != self.setting_sizes[k]:
                raise ValueError(f"party {k}: table must cover every setting")
            for row in self.tables[k]:
                if len(row) != self.input_sizes[k]:
                    raise ValueError(f"party {k}: table row must cover every input")
                for o, a in row:
                    if not (0 <= o < self.output_sizes[k]):
                        raise ValueError(f"party {k}: selection {o} out of range")
                    if not (0 <= a < self.outcome_sizes[k]):
                        raise ValueError(f"party {k}: outcome {a} out of range")

    @property
    def n(self) -> int:
        return len(self.input_sizes)

    def apply(self, k: int, i: int, x: int) -> tuple[int, int]:
        return self.tables[k][x][i]


@dataclass(frozen=True)
class CorrelationTable:
    """Exact table p(a|x); only nonzero entries are stored."""

    setting_sizes: tuple[int, ...]
    outcome_sizes: tuple[int, ...]
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]

    def prob(self, x: tuple[int, ...], a: tuple[int, ...]) -> Fraction:
        return self.entries.get((x, a), Fraction(0))

    def column_sum(self, x: tuple[int, ...]) -> Fraction:
        return sum(
            (p for (xx, _), p in self.entries.items() if xx == x), Fraction(0)
        )

    def is_normalized(self) -> bool:
        sums = {}
        for (x, _), p in self.entries.items():
            sums[x] = sums.get(x, Fraction(0)) + p
        return all(s == 1 for s in sums.values()) and len(sums) == prod(
            self.setting_sizes
        )

    def joint_settings(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(s) for s in self.setting_sizes))

    def joint_outcomes(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(s) for s in self.outcome_sizes))

    def to_tsv(self) -> str:
        lines = []
        for x in self.joint_settings():
            for a in self.joint_outcomes():
                p = self.prob(x, a)
                if p:
                    xs = ",".join(str(v) for v in x)
                    As = ",".join(str(v) for v in a)
                    lines.append(f"{xs}\t{As}\t{p.numerator}\t{p.denominator}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict[str, Any]:
        rows = []
        for x in self.joint_settings():
            for a in self.joint_outcomes():
                p = self.prob(x, a)
                if p:
                    rows.append(
                        {"x": list(x), "a": list(a),
                         "num": p.numerator, "den": p.denominator}
                    )
        return {
            "settings": list(self.setting_sizes),
            "outcomes": list(self.outcome_sizes),
            "entries": rows,
            "normalized": self.is_normalized(),
        }


def _check_shapes(w: ProcessTable, inst: Instrument) -> None:
    if inst.n != w.n:
        raise ValueError("instrument party count does not match table")
    if tuple(inst.input_sizes) != w.alphabet.inputs:
        raise ValueError("instrument input sizes do not match table")
    if tuple(inst.output_sizes) != w.alphabet.outputs:
        raise ValueError("instrument output sizes do not match table")


def evaluate_column(
    w: ProcessTable, inst: Instrument, x: tuple[int, ...]
) -> dict[tuple[int, ...], Fraction]:
    """p(a|x) for one joint setting: a joint input i contributes to outcome a
    exactly when the selections it induces are mapped back to i itself."""
    out: dict[tuple[int, ...], Fraction] = {}
    for i in w.alphabet.joint_inputs():
        pairs = [inst.apply(k, i[k], x[k]) for k in range(w.n)]
        o = tuple(p[0] for p in pairs)
        if w.apply(o) == i:
            a = tuple(p[1] for p in pairs)
            out[a] = out.get(a, Fraction(0)) + 1
    return out


def evaluate(w: ProcessTable, inst: Instrument) -> CorrelationTable:
    """Full correlation table over all joint settings.  For a valid process
    every column is a point distribution; for an invalid table columns can
    sum to 0 or more than 1, which is visible via is_normalized()."""
    _check_shapes(w, inst)
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = {}
    for x in product(*(range(s) for s in inst.setting_sizes)):
        for a, p in evaluate_column(w, inst, x).items():
            entries[(x, a)] = p
    return CorrelationTable(
        tuple(inst.setting_sizes), tuple(inst.outcome_sizes), entries
    )


@dataclass(frozen=True)
class CausalDecomposition:
    """Leader-first factorization of a correlation table.

    The leader's marginal depends only on its own setting; each realized
    (setting, outcome) pair of the leader points to a decomposition of the
    remaining parties.  ``parties`` lists the original ids still covered.
    A deterministic process peels with a single leader, so the leader weight
    is always 1 here.
    """

    parties: tuple[int, ...]
    leader: int
    marginal: dict[int, dict[int, Fraction]]
    children: dict[tuple[int, int], "CausalDecomposition | None"]
    weight: Fraction = field(default_factory=lambda: Fraction(1))

    def prob(self, x: tuple[int, ...], a: tuple[int, ...]) -> Fraction:
        """Reconstructed p(a|x); x and a are full joint tuples indexed by
        original party id."""
        xk = x[self.leader]
        ak = a[self.leader]
        p = self.marginal.get(xk, {}).get(ak, Fraction(0))
        if not p:
            return Fraction(0)
        child = self.children[(xk, ak)]
        if child is None:
            return self.weight * p
        return self.weight * p * child.prob(x, a)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "parties": list(self.parties),
            "leader": self.leader,
            "weight": {"num": self.weight.numerator, "den": self.weight.denominator},
            "marginal": {
                str(x): {
                    str(a): {"num": p.numerator, "den": p.denominator}
                    for a, p in row.items()
                }
                for x, row in self.marginal.items()
            },
            "children": {
                f"{x},{a}": (child.to_json_dict() if child is not None else None)
                for (x, a), child in self.children.items()
            },
        }


def reconstruct(
    decomp: CausalDecomposition,
    setting_sizes: tuple[int, ...],
    outcome_sizes: tuple[int, ...],
) -> CorrelationTable:
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = {}
    for x in product(*(range(s) for s in setting_sizes)):
        for a in product(*(range(s) for s in outcome_sizes)):
            p = decomp.prob(x, a)
            if p:
                entries[(x, a)] = p
    return CorrelationTable(tuple(setting_sizes), tuple(outcome_sizes), entries)


def peel_decompose(
    w: ProcessTable, g: DiGraph, inst: Instrument
) -> CausalDecomposition:
    """Decomposes the correlations of a process whose causal structure is a
    chordless sibling-on-cycles graph, by repeatedly peeling a source party.

    The source's input component is constant, so its outcome marginal
    depends only on its own setting; fixing its local function reduces the
    process on the remaining parties, whose structure stays chordless, and
    the recursion continues until no parties remain.
    """
    _check_shapes(w, inst)
    if g.n != w.n:
        raise ValueError("graph party count does not match table")
    if not is_chordless_soc(g):
        raise ValueError("peeling requires a chordless sibling-on-cycles graph")
    return _peel(w, g, list(inst.tables), list(range(g.n)), inst, top=True)


def _component_depends(w: ProcessTable, j: int, el: int) -> bool:
    """Does input component j of w vary with output component el?"""
    sizes = w.alphabet.outputs
    for o in w.alphabet.joint_outputs():
        if o[el] != 0:
            continue
        base = w.component(j, o)
        for alt in range(1, sizes[el]):
            probe = o[:el] + (alt,) + o[el + 1:]
            if w.component(j, probe) != base:
                return True
    return False


def _prune_structure(w: ProcessTable, g: DiGraph) -> DiGraph:
    """Causal structure of a reduced process: peeling a source only removes
    dependencies, so it is the inherited edge set minus the edges whose
    signaling the fixed local function switched off."""
    edges = [
        (u, v) for (u, v) in g.edges() if _component_depends(w, v, u)
    ]
    return DiGraph.from_edges(g.n, edges)


def _peel(
    w: ProcessTable,
    g: DiGraph,
    tables: list,
    parties: list[int],
    inst: Instrument,
    top: bool,
) -> CausalDecomposition:
    if not top and not is_chordless_soc(g):
        raise InvariantError("peeled structure lost the chordless property")
    src = find_source(g)
    if src is None:
        raise ValueError("no source party: structure precondition violated")
    k_orig = parties[src]

    i_star = _constant_component(w, src)
    x_size = inst.setting_sizes[k_orig]
    marginal: dict[int, dict[int, Fraction]] = {}
    children: dict[tuple[int, int], CausalDecomposition | None] = {}
    for x in range(x_size):
        _, a_out = tables[src][x][i_star]
        marginal[x] = {a_out: Fraction(1)}
        if len(parties) == 1:
            children[(x, a_out)] = None
            continue
        mu_k = tuple(tables[src][x][i][0] for i in range(w.alphabet.inputs[src]))
        w_next = reduce_party(w, src, mu_k)
        g_next = _prune_structure(
            w_next, induced_subgraph(g, [v for v in range(g.n) if v != src])
        )
        tables_next = tables[:src] + tables[src + 1:]
        parties_next = parties[:src] + parties[src + 1:]
        children[(x, a_out)] = _peel(
            w_next, g_next, tables_next, parties_next, inst, top=False
        )
    return CausalDecomposition(tuple(parties), k_orig, marginal, children)


def _constant_component(w: ProcessTable, k: int) -> int:
    values = {w.component(k, o) for o in w.alphabet.joint_outputs()}
    if len(values) != 1:
        raise ValueError(
            f"party {k} is a source but its received input varies; "
            "the graph does not describe this table"
        )
    return values.pop()


# ---- instruments for steering the selection model ----


def binary_steering_instrument(m: SocModel) -> Instrument:
    """Two settings per party: the setting picks which child to select (the
    first or, when present, the second in ascending order); parties without
    children select nothing.  The outcome always reports the received bit."""
    tables = []
    for k in range(m.n):
        nch = len(m.children[k])
        rows = []
        for x in range(2):
            sym = 0 if nch == 0 else 1 + min(x, nch - 1)
            rows.append(tuple((sym, i) for i in range(2)))
        tables.append(tuple(rows))
    return Instrument(
        input_sizes=m.alphabet.inputs,
        output_sizes=m.alphabet.outputs,
        setting_sizes=(2,) * m.n,
        outcome_sizes=(2,) * m.n,
        tables=tuple(tables),
    )


# ---- fixed-order game-value oracle ----


def max_causal_game_value(n: int, guess_parties: Iterable[int]) -> Fraction:
    """Maximum winning probability of the guessing game over deterministic
    strategies with a fixed party order, where each party may depend on all
    settings and outcomes of the parties before it.

    A referee draws a guesser s from ``guess_parties`` and a bit b uniformly;
    s sees (s, blank), the other guess parties see (s, b), everyone else a
    blank setting, and s must output b.  Deterministic strategies are
    enumerated through their behavior on reachable inputs: what a party sees
    is determined by the setting prefix, so a strategy assigns one bit per
    (position, distinct prefix) and unreachable inputs cannot matter.
    """
    S = sorted(set(guess_parties))
    if not S or any(not (0 <= s < n) for s in S):
        raise ValueError("guess parties must be a nonempty subset of the parties")
    if n > 3:
        raise BudgetExceededError("game-value oracle scans n <= 3 only")
    draws = [(s, b) for s in S for b in (0, 1)]
    blank = (None, None)

    def setting(k: int, s: int, b: int) -> tuple:
        if k == s:
            return (s, None)
        if k in S:
            return (s, b)
        return blank

    best = 0
    for order in permutations(range(n)):
        # draw_group[p][d]: which distinct setting prefix draw d presents to
        # the party at position p
        draw_group: list[list[int]] = []
        sizes: list[int] = []
        for p in range(n):
            seen: dict[tuple, int] = {}
            per_draw = []
            for s, b in draws:
                prefix = tuple(setting(order[q], s, b) for q in range(p + 1))
                per_draw.append(seen.setdefault(prefix, len(seen)))
            draw_group.append(per_draw)
            sizes.append(len(seen))
        guess_pos = [order.index(s) for s, _ in draws]
        for assignment in product(*[product((0, 1), repeat=sz) for sz in sizes]):
            wins = 0
            for d, (s, b) in enumerate(draws):
                p = guess_pos[d]
                if assignment[p][draw_group[p][d]] == b:
                    wins += 1
            if wins > best:
                best = wins
    return Fraction(best, len(draws))


# ---- instrument text format ----
#
# Blocks separated by blank lines, one block per setting value in ascending
# order; block x has one line per party with |I_k| comma-separated "o,a"
# pairs separated by whitespace.  All parties share the block's setting.


def parse_instrument(
    text: str,
    input_sizes: tuple[int, ...],
    output_sizes: tuple[int, ...],
    setting_size: int,
    outcome_size: int = 2,
) -> Instrument:
    n = len(input_sizes)
    blocks: list[list[str]] = [[]]
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        blocks[-1].append(line)
    if blocks and not blocks[-1]:
        blocks.pop()
    if len(blocks) != setting_size:
        raise TableFormatError(
            f"expected {setting_size} setting blocks, got {len(blocks)}"
        )
    per_party: list[list[tuple[tuple[int, int], ...]]] = [[] for _ in range(n)]
    for x, block in enumerate(blocks):
        if len(block) != n:
            raise TableFormatError(
                f"setting block {x} must have one line per party"
            )
        for k, line in enumerate(block):
            tokens = line.split()
            if len(tokens) != input_sizes[k]:
                raise TableFormatError(
                    f"party {k}, setting {x}: expected {input_sizes[k]} entries"
                )
            row = []
            for tok in tokens:
                parts = tok.split(",")
                if len(parts) != 2:
                    raise TableFormatError(f"bad instrument entry {tok!r}")
                try:
                    o, a = int(parts[0]), int(parts[1])
                except ValueError:
                    raise TableFormatError(f"bad instrument entry {tok!r}") from None
                row.append((o, a))
            per_party[k].append(tuple(row))
    try:
        return Instrument(
            input_sizes=tuple(input_sizes),
            output_sizes=tuple(output_sizes),
            setting_sizes=(setting_size,) * n,
            outcome_sizes=(outcome_size,) * n,
            tables=tuple(tuple(rows) for rows in per_party),
        )
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None
