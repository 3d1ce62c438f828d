"""Exhaustive enumeration of directed graphs up to relabeling, and the
record stream that classifies every class of a given size.

Graphs are packed into integers position by position (row-major, most
significant bit first) and canonicalized by taking the minimum over all
node permutations with vectorized bit moves.  Classes are emitted in
ascending canonical order, which fixes the output byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import partial
from itertools import permutations
from multiprocessing import Pool
from typing import Any, Iterable, Iterator

import numpy as np

from .digraph import (
    DiGraph,
    canonical_form,
    enumerate_cycles,
    find_source,
    graph_code,
    is_induced_cycle,
)
from .errors import BudgetExceededError
from .games import GameSpec, build_violation_strategy, play
from .model import ModelTableView, build_model, verify_consistency
from .process import DEFAULT_BUDGET

_CHUNK = 1 << 22


def _positions(n: int, loops: bool) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i in range(n)
        for j in range(n)
        if loops or i != j
    ]


def _perm_maps(n: int, loops: bool) -> list[list[int]]:
    """Destination position index for every source position, one map per
    non-identity permutation."""
    positions = _positions(n, loops)
    index = {pos: idx for idx, pos in enumerate(positions)}
    maps = []
    for perm in permutations(range(n)):
        dest = [index[(perm[i], perm[j])] for (i, j) in positions]
        if dest != list(range(len(positions))):
            maps.append(dest)
    return maps


def _min_over_perms(codes: np.ndarray, maps: list[list[int]], P: int) -> np.ndarray:
    acc = codes.copy()
    for dest in maps:
        permuted = np.zeros_like(codes)
        for src in range(P):
            bit = (codes >> (P - 1 - src)) & 1
            permuted |= bit << (P - 1 - dest[src])
        np.minimum(acc, permuted, out=acc)
    return acc


def _graph_from_position_code(n: int, code: int, positions: list[tuple[int, int]]) -> DiGraph:
    P = len(positions)
    edges = [
        positions[idx]
        for idx in range(P)
        if (code >> (P - 1 - idx)) & 1
    ]
    return DiGraph.from_edges(n, edges)


def _scan_codes(n: int, loops: bool) -> Iterator[int]:
    """Canonical representatives over the full labeled space, ascending."""
    positions = _positions(n, loops)
    P = len(positions)
    maps = _perm_maps(n, loops)
    dtype = np.uint64 if P > 31 else np.uint32
    total = 1 << P
    for lo in range(0, total, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, total), dtype=dtype)
        acc = _min_over_perms(codes, maps, P)
        for code in codes[acc == codes]:
            yield int(code)


def _extend_codes(n: int, loops: bool, override: bool) -> Iterator[int]:
    """Canonical representatives for n nodes built by attaching one node to
    every class of n - 1 nodes.  Every class of size n restricts to some
    class of size n - 1 after deleting a node, so relabeling that subgraph
    to its canonical form exhibits the class inside this candidate set."""
    prev_positions = _positions(n - 1, loops)
    positions = _positions(n, loops)
    P = len(positions)
    index = {pos: idx for idx, pos in enumerate(positions)}

    # bit scatter maps: old positions, new out-edges, new in-edges
    old_shift = [
        P - 1 - index[pos] for pos in prev_positions
    ]
    out_shift = [P - 1 - index[(i, n - 1)] for i in range(n - 1)]
    in_shift = [P - 1 - index[(n - 1, j)] for j in range(n - 1)]
    loop_shift = P - 1 - index[(n - 1, n - 1)] if loops else None

    prev_codes = np.fromiter(
        enumerate_codes(n - 1, allow_self_loops=loops, override=override),
        dtype=np.uint64,
    )
    Pp = len(prev_positions)
    scattered = np.zeros_like(prev_codes)
    for src in range(Pp):
        bit = (prev_codes >> (Pp - 1 - src)) & 1
        scattered |= bit << old_shift[src]

    new_bits = n - 1 + (n - 1) + (1 if loops else 0)
    patterns = np.zeros(1 << new_bits, dtype=np.uint64)
    shifts = out_shift + in_shift + ([loop_shift] if loops else [])
    raw = np.arange(1 << new_bits, dtype=np.uint64)
    for b, shift in enumerate(shifts):
        patterns |= ((raw >> b) & 1) << shift

    maps = _perm_maps(n, loops)
    seen: list[np.ndarray] = []
    rows_per_batch = max(1, _CHUNK // len(patterns))
    for lo in range(0, len(scattered), rows_per_batch):
        block = scattered[lo:lo + rows_per_batch]
        cands = np.unique(block[:, None] | patterns[None, :])
        seen.append(np.unique(_min_over_perms(cands, maps, P)))
    merged = np.unique(np.concatenate(seen)) if seen else np.array([], np.uint64)
    for code in merged:
        yield int(code)


def enumerate_codes(
    n: int, *, allow_self_loops: bool = False, override: bool = False
) -> Iterator[int]:
    if n < 1:
        raise ValueError("need at least one node")
    if n > 7:
        raise ValueError("enumeration supports at most seven nodes")
    if n == 7 and not override:
        raise BudgetExceededError(
            "seven-node enumeration must be forced explicitly and is "
            "impractically slow"
        )
    if n >= 6 and allow_self_loops:
        raise BudgetExceededError(
            "enumeration with self-loops stops at five nodes"
        )
    if n <= 5:
        yield from _scan_codes(n, allow_self_loops)
    else:
        yield from _extend_codes(n, allow_self_loops, override)


def enumerate_digraphs(
    n: int, *, allow_self_loops: bool = False, override: bool = False
) -> Iterator[DiGraph]:
    """All directed graphs on n nodes up to relabeling, one canonical
    representative per class, in ascending canonical order.  Self-loops are
    excluded unless requested.  Six nodes is a documented long run (tens of
    minutes); seven requires override and is impractical."""
    positions = _positions(n, allow_self_loops)
    for code in enumerate_codes(
        n, allow_self_loops=allow_self_loops, override=override
    ):
        yield _graph_from_position_code(n, code, positions)


def count_classes(n: int, *, allow_self_loops: bool = False) -> int:
    return sum(1 for _ in enumerate_codes(n, allow_self_loops=allow_self_loops))


@dataclass(frozen=True)
class ClassificationRecord:
    """One surveyed graph class.

    ``noncausal_cycle`` is populated only for admissible (sibling-on-cycles)
    graphs: the first cycle whose common parents are nonempty and lie on the
    cycle, the shape that supports a certain-win game strategy.  ``verdict``
    is present exactly when verification ran.
    """

    canon: str
    n: int
    soc: bool
    chordless_soc: bool
    noncausal_cycle: tuple[int, ...] | None
    source: int | None
    verdict: str | None = None
    counterexample: dict[str, Any] | None = None
    game: dict[str, Any] | None = None

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "canon": self.canon,
            "n": self.n,
            "soc": self.soc,
            "chordless_soc": self.chordless_soc,
            "noncausal_cycle": (
                list(self.noncausal_cycle)
                if self.noncausal_cycle is not None
                else None
            ),
            "source": self.source,
        }
        if self.verdict is not None:
            out["verdict"] = self.verdict
            if self.counterexample is not None:
                out["counterexample"] = self.counterexample
        if self.game is not None:
            out["game"] = self.game
        return out

    def json_line(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    def tsv_line(self) -> str:
        cycle = (
            ",".join(map(str, self.noncausal_cycle))
            if self.noncausal_cycle is not None
            else "-"
        )
        fields = [
            self.canon,
            str(self.n),
            "soc" if self.soc else "non-soc",
            "chordless" if self.chordless_soc else "-",
            cycle,
            str(self.source) if self.source is not None else "-",
            self.verdict if self.verdict is not None else "-",
        ]
        if self.game is not None:
            win = self.game["win"]
            fields.append(f"{win['num']}/{win['den']}")
        return "\t".join(fields)


def classify_graph(
    g: DiGraph,
    *,
    verify: bool = False,
    games: bool = False,
    budget: int = DEFAULT_BUDGET,
    assume_canonical: bool = False,
) -> ClassificationRecord:
    canon = (
        format(graph_code(g), f"0{g.n * g.n}b")
        if assume_canonical
        else canonical_form(g)
    )
    cycles = enumerate_cycles(g)
    soc = all(g.copa(c.node_set()) for c in cycles)
    chordless = soc and all(is_induced_cycle(g, c) for c in cycles)
    noncausal = None
    if soc:
        for c in cycles:
            copa = g.copa(c.node_set())
            if copa and copa <= c.node_set():
                noncausal = c.nodes
                break
    source = find_source(g)

    verdict = None
    counterexample = None
    if verify:
        try:
            res = verify_consistency(g, force=True, budget=budget)
            verdict = res.status
            if res.status == "counterexample":
                counterexample = res.counterexample_json(g)
        except BudgetExceededError:
            verdict = "budget_exceeded"

    game = None
    if games and noncausal is not None:
        spec = GameSpec(g.n, noncausal)
        for c in cycles:
            if c.nodes == noncausal:
                strat = build_violation_strategy(g, c, spec)
                win = play(ModelTableView(build_model(g)), strat)
                bound = spec.bound()
                game = {
                    "S": list(spec.parties),
                    "bound": {"num": bound.numerator, "den": bound.denominator},
                    "win": {"num": win.numerator, "den": win.denominator},
                    "violated": win > bound,
                }
                break

    return ClassificationRecord(
        canon=canon,
        n=g.n,
        soc=soc,
        chordless_soc=chordless,
        noncausal_cycle=noncausal,
        source=source,
        verdict=verdict,
        counterexample=counterexample,
        game=game,
    )


def survey(
    n: int,
    *,
    verify: bool = False,
    games: bool = False,
    jobs: int = 1,
    allow_self_loops: bool = False,
    budget: int = DEFAULT_BUDGET,
    override: bool = False,
    skip_canons: Iterable[str] = (),
) -> Iterator[ClassificationRecord]:
    """Classifies every graph class of size n, in ascending canonical order
    regardless of the number of workers."""
    if verify and allow_self_loops:
        raise ValueError("verification requires graphs without self-loops")
    if jobs < 1:
        raise ValueError("need at least one worker")
    skip = frozenset(skip_canons)
    width = n * n

    def graphs() -> Iterator[DiGraph]:
        for g in enumerate_digraphs(
            n, allow_self_loops=allow_self_loops, override=override
        ):
            if skip and format(graph_code(g), f"0{width}b") in skip:
                continue
            yield g

    work = partial(
        classify_graph,
        verify=verify,
        games=games,
        budget=budget,
        assume_canonical=True,
    )
    if jobs == 1:
        for g in graphs():
            yield work(g)
    else:
        with Pool(jobs) as pool:
            yield from pool.imap(work, graphs(), chunksize=16)


def empty_summary() -> dict[str, int]:
    return {
        "classes": 0,
        "soc": 0,
        "chordless": 0,
        "noncausal": 0,
        "consistent": 0,
        "counterexample": 0,
        "budget_exceeded": 0,
    }


def update_summary(summary: dict[str, int], rec: ClassificationRecord) -> None:
    summary["classes"] += 1
    summary["soc"] += rec.soc
    summary["chordless"] += rec.chordless_soc
    summary["noncausal"] += rec.noncausal_cycle is not None
    if rec.verdict == "consistent":
        summary["consistent"] += 1
    elif rec.verdict == "counterexample":
        summary["counterexample"] += 1
    elif rec.verdict == "budget_exceeded":
        summary["budget_exceeded"] += 1


def summary_line(summary: dict[str, int], verified: bool) -> str:
    classes = summary["classes"]
    soc = summary["soc"]
    if verified:
        inadmissible = classes - soc
        return (
            f"{classes} classes, {soc} soc, "
            f"{summary['consistent']} consistent, {inadmissible} inadmissible"
        )
    return (
        f"{classes} classes, {soc} soc, "
        f"{summary['chordless']} chordless, {summary['noncausal']} noncausal"
    )
