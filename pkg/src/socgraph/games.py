"""Multipartite guessing games and the cycle strategy that wins them.

A referee picks a guess party s from a set S and a bit b uniformly at
random.  Party s receives the setting (s, blank), every other party in S
receives (s, b), and everyone else receives (blank, blank); party s wins
the round by outputting b.  Any strategy compatible with a fixed causal
order among the parties wins at most 1 - 1/(2|S|).

When S is the node set of a cycle whose common parents all lie on the
cycle itself, the deterministic selection model of the graph admits a
strategy that wins with certainty, exceeding the bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .digraph import Cycle, DiGraph, enumerate_cycles
from .correlations import Instrument, evaluate_column
from .errors import InvariantError
from .model import ModelTableView, SocModel, build_model
from .process import ProcessTable

BLANK = None  # printable stand-in for the blank symbol


def encode_setting(n: int, u: int | None, v: int | None) -> int:
    """Settings are pairs (u, v) with u a party id or blank and v a bit or
    blank, packed as u * 3 + v with blank as the last value of each slot."""
    uu = n if u is None else u
    vv = 2 if v is None else v
    if not (0 <= uu <= n and 0 <= vv <= 2):
        raise ValueError("setting component out of range")
    return uu * 3 + vv


def decode_setting(n: int, x: int) -> tuple[int | None, int | None]:
    if not (0 <= x < 3 * (n + 1)):
        raise ValueError("setting out of range")
    u, v = divmod(x, 3)
    return (None if u == n else u, None if v == 2 else v)


@dataclass(frozen=True)
class GameSpec:
    """The game on n parties with guess set S (stored sorted)."""

    n: int
    parties: tuple[int, ...]

    def __post_init__(self) -> None:
        S = tuple(sorted(set(self.parties)))
        if not S:
            raise ValueError("guess set must be nonempty")
        if S[0] < 0 or S[-1] >= self.n:
            raise ValueError("guess set must be a subset of the parties")
        object.__setattr__(self, "parties", S)

    @property
    def size(self) -> int:
        return len(self.parties)

    @property
    def setting_size(self) -> int:
        return 3 * (self.n + 1)

    def bound(self) -> Fraction:
        """Best winning probability under any fixed causal order."""
        return Fraction(2 * self.size - 1, 2 * self.size)

    def draws(self) -> list[tuple[int, int]]:
        return [(s, b) for s in self.parties for b in (0, 1)]

    def joint_setting(self, s: int, b: int) -> tuple[int, ...]:
        if s not in self.parties or b not in (0, 1):
            raise ValueError("draw outside the game")
        xs = []
        for k in range(self.n):
            if k == s:
                xs.append(encode_setting(self.n, s, None))
            elif k in self.parties:
                xs.append(encode_setting(self.n, s, b))
            else:
                xs.append(encode_setting(self.n, None, None))
        return tuple(xs)


@dataclass(frozen=True)
class Strategy:
    """A winning assignment of local functions for a cycle game.

    Roles, per guess party s on cycle c:
      - the cycle predecessor of s encodes the referee bit by selecting s
        exactly when b = 1;
      - off-cycle parents of cycle nodes (feeders) always select their
        unique child on the cycle;
      - remaining on-cycle parents of s select s unconditionally;
      - every other cycle node relays: it selects its cycle successor
        exactly when its received bit is 1;
      - s itself selects nothing and outputs its received bit.
    """

    spec: GameSpec
    cycle: Cycle
    instrument: Instrument
    feeders: tuple[int, ...]
    encoders: dict[int, int]
    co_selectors: dict[int, tuple[int, ...]]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "cycle": list(self.cycle.nodes),
            "feeders": list(self.feeders),
            "roles": {
                str(s): {
                    "encoder": self.encoders[s],
                    "co_selectors": list(self.co_selectors[s]),
                }
                for s in self.spec.parties
            },
        }


def eligible_cycle(g: DiGraph, parties: tuple[int, ...]) -> Cycle | None:
    """First cycle whose node set is exactly ``parties`` and whose common
    parents are nonempty and lie on the cycle."""
    want = frozenset(parties)
    copa = g.copa(want)
    if not copa or not (copa <= want):
        return None
    for c in enumerate_cycles(g):
        if c.node_set() == want:
            return c
    return None


def build_violation_strategy(g: DiGraph, c: Cycle, spec: GameSpec) -> Strategy:
    """Instrument tables realizing the certain win on cycle c of g."""
    if spec.n != g.n:
        raise ValueError("game and graph party counts disagree")
    if g.has_self_loop():
        raise ValueError("graph must be free of self-loops")
    nodes = c.node_set()
    if frozenset(spec.parties) != nodes:
        raise ValueError("guess set must equal the cycle node set")
    copa = g.copa(nodes)
    if not copa or not (copa <= nodes):
        raise ValueError("cycle common parents must be nonempty and on the cycle")

    m = build_model(g)
    n = g.n
    feeders = sorted(k for v in nodes for k in g.parents(v) if k not in nodes)
    feeder_child: dict[int, int] = {}
    for d in feeders:
        ch = sorted(g.children(d) & nodes)
        if len(ch) != 1:
            raise InvariantError(
                f"feeder {d} has {len(ch)} cycle children; "
                "one is guaranteed when common parents lie on the cycle"
            )
        feeder_child[d] = ch[0]
    encoders = {s: c.predecessor(s) for s in spec.parties}
    co_selectors = {
        s: tuple(sorted((g.parents(s) & nodes) - {encoders[s]} - {s}))
        for s in spec.parties
    }

    tables = []
    for k in range(n):
        rows = []
        for x in range(spec.setting_size):
            u, v = decode_setting(n, x)
            row = []
            for i in range(2):
                row.append(_local_rule(m, k, u, v, i, nodes, feeder_child, c))
            rows.append(tuple(row))
        tables.append(tuple(rows))
    inst = Instrument(
        input_sizes=m.alphabet.inputs,
        output_sizes=m.alphabet.outputs,
        setting_sizes=(spec.setting_size,) * n,
        outcome_sizes=(2,) * n,
        tables=tuple(tables),
    )
    return Strategy(spec, c, inst, tuple(feeders), encoders, co_selectors)


def _local_rule(
    m: SocModel,
    k: int,
    u: int | None,
    v: int | None,
    i: int,
    nodes: frozenset[int],
    feeder_child: dict[int, int],
    c: Cycle,
) -> tuple[int, int]:
    if k in feeder_child:
        return m.selection_symbol(k, feeder_child[k]), 0
    if k not in nodes or u is None or u not in nodes:
        return 0, 0
    s = u
    if k == s:
        return 0, i
    if k == c.predecessor(s):
        return (m.selection_symbol(k, s) if v == 1 else 0), 0
    if s in m.graph.children(k):
        return m.selection_symbol(k, s), 0
    return (m.selection_symbol(k, c.successor(k)) if i == 1 else 0), 0


def play(
    w: ProcessTable | ModelTableView,
    strategy: Strategy | Instrument,
    spec: GameSpec | None = None,
) -> Fraction:
    """Exact winning probability of the strategy on the process w."""
    if isinstance(strategy, Strategy):
        inst = strategy.instrument
        spec = strategy.spec if spec is None else spec
    else:
        inst = strategy
        if spec is None:
            raise ValueError("a bare instrument needs an explicit game")
    draws = spec.draws()
    wins = Fraction(0)
    for s, b in draws:
        x = spec.joint_setting(s, b)
        column = evaluate_column(w, inst, x)
        total = sum(column.values(), Fraction(0))
        if total != 1:
            raise ValueError(
                f"draw (s={s}, b={b}): outcome column sums to {total}, "
                "the table is not a valid process on this branch"
            )
        wins += sum(
            (p for a, p in column.items() if a[s] == b), Fraction(0)
        )
    return wins / len(draws)


def play_model(g: DiGraph, c: Cycle, spec: GameSpec) -> tuple[Strategy, Fraction]:
    """Builds the model process of g and its cycle strategy, then plays."""
    strat = build_violation_strategy(g, c, spec)
    w = ModelTableView(build_model(g))
    return strat, play(w, strat)


def random_strategy_scan(
    w: ProcessTable | ModelTableView, spec: GameSpec, samples: int, seed: int
) -> Fraction:
    """Best winning probability found over uniformly random deterministic
    instruments.  Draws whose outcome column is not normalized count the
    winning mass as is, so the scan never errors on invalid branches."""
    rng = random.Random(seed)
    n = w.n
    best = Fraction(0)
    draws = spec.draws()
    for _ in range(samples):
        tables = tuple(
            tuple(
                tuple(
                    (rng.randrange(w.alphabet.outputs[k]), rng.randrange(2))
                    for _ in range(w.alphabet.inputs[k])
                )
                for _ in range(spec.setting_size)
            )
            for k in range(n)
        )
        inst = Instrument(
            input_sizes=w.alphabet.inputs,
            output_sizes=w.alphabet.outputs,
            setting_sizes=(spec.setting_size,) * n,
            outcome_sizes=(2,) * n,
            tables=tables,
        )
        wins = Fraction(0)
        for s, b in draws:
            column = evaluate_column(w, inst, spec.joint_setting(s, b))
            wins += sum((p for a, p in column.items() if a[s] == b), Fraction(0))
        value = wins / len(draws)
        if value > best:
            best = value
    return best


def game_report(
    g: DiGraph, spec: GameSpec, strategy: Strategy, win: Fraction
) -> dict[str, Any]:
    bound = spec.bound()
    return {
        "n": spec.n,
        "S": list(spec.parties),
        "bound": {"num": bound.numerator, "den": bound.denominator},
        "win": {"num": win.numerator, "den": win.denominator},
        "violated": win > bound,
        "strategy": strategy.to_json_dict(),
    }
