"""Guessing games: referee encoding, the certain-win cycle strategy, and
the causal bound it beats."""

from fractions import Fraction

import pytest

from socgraph import (
    Cycle,
    DiGraph,
    GameSpec,
    ModelTableView,
    build_model,
    build_violation_strategy,
    decode_setting,
    eligible_cycle,
    encode_setting,
    enumerate_cycles,
    find_noncausal_cycle,
    game_report,
    play,
    play_model,
    random_strategy_scan,
    relabel,
)

from test_digraph import all_graphs


@pytest.fixture
def fed_k3():
    # complete bidirected triangle with one off-cycle feeder of node 1
    return DiGraph.from_edges(
        4, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1), (3, 1)]
    )


class TestSettingCodes:
    def test_roundtrip(self):
        n = 3
        for u in [None, 0, 1, 2]:
            for v in [None, 0, 1]:
                assert decode_setting(n, encode_setting(n, u, v)) == (u, v)

    def test_blank_is_last(self):
        assert encode_setting(2, None, None) == 8  # 3 * (2 + 1) - 1

    def test_range_checked(self):
        with pytest.raises(ValueError):
            encode_setting(2, 3, 0)
        with pytest.raises(ValueError):
            decode_setting(2, 9)


class TestGameSpec:
    def test_bound(self):
        assert GameSpec(3, (0, 1, 2)).bound() == Fraction(5, 6)
        assert GameSpec(2, (0, 1)).bound() == Fraction(3, 4)
        assert GameSpec(2, (0,)).bound() == Fraction(1, 2)

    def test_draw_order(self):
        assert GameSpec(3, (2, 0)).draws() == [(0, 0), (0, 1), (2, 0), (2, 1)]

    def test_joint_setting(self):
        spec = GameSpec(3, (0, 1))
        x = spec.joint_setting(0, 1)
        assert decode_setting(3, x[0]) == (0, None)   # the guesser
        assert decode_setting(3, x[1]) == (0, 1)      # sees the draw
        assert decode_setting(3, x[2]) == (None, None)

    def test_validation(self):
        with pytest.raises(ValueError):
            GameSpec(2, ())
        with pytest.raises(ValueError):
            GameSpec(2, (2,))
        with pytest.raises(ValueError):
            GameSpec(3, (0, 1)).joint_setting(2, 0)


class TestViolationStrategy:
    def test_triangle_roles(self, triangle):
        spec = GameSpec(3, (0, 1, 2))
        c = eligible_cycle(triangle, spec.parties)
        strat = build_violation_strategy(triangle, c, spec)
        assert strat.feeders == ()
        assert strat.encoders == {0: 2, 1: 0, 2: 1}
        assert strat.co_selectors == {0: (1,), 1: (2,), 2: (0,)}

    def test_triangle_wins_with_certainty(self, triangle):
        spec = GameSpec(3, (0, 1, 2))
        c = eligible_cycle(triangle, spec.parties)
        strat, win = play_model(triangle, c, spec)
        assert win == 1
        assert win > spec.bound()

    def test_feeder_role(self, fed_k3):
        spec = GameSpec(4, (0, 1, 2))
        c = eligible_cycle(fed_k3, spec.parties)
        assert c is not None
        strat, win = play_model(fed_k3, c, spec)
        assert strat.feeders == (3,)
        assert win == 1

    def test_two_cycle_with_on_cycle_parent_only(self):
        # 0 <-> 1 plus 1 -> 0 again is just the pair; bare pairs are out
        g = DiGraph.from_edges(2, [(0, 1), (1, 0)])
        assert eligible_cycle(g, (0, 1)) is None

    def test_switch_not_eligible(self, switch):
        # its only cycle's common parent sits off the cycle
        assert eligible_cycle(switch, (1, 2)) is None

    def test_guess_set_must_match_cycle(self, triangle):
        spec = GameSpec(3, (0, 1))
        c = Cycle((0, 1, 2))
        with pytest.raises(ValueError):
            build_violation_strategy(triangle, c, spec)

    def test_report_shape(self, triangle):
        spec = GameSpec(3, (0, 1, 2))
        c = eligible_cycle(triangle, spec.parties)
        strat, win = play_model(triangle, c, spec)
        d = game_report(triangle, spec, strat, win)
        assert d["violated"] is True
        assert d["win"] == {"num": 1, "den": 1}
        assert d["bound"] == {"num": 5, "den": 6}
        assert d["strategy"]["roles"]["0"]["encoder"] == 2

    def test_relabel_invariance(self, triangle, fed_k3):
        for g in (triangle, fed_k3):
            nodes = find_noncausal_cycle(g).nodes
            spec = GameSpec(g.n, nodes)
            _, win = play_model(g, eligible_cycle(g, spec.parties), spec)
            perm = tuple((i + 1) % g.n for i in range(g.n))
            h = relabel(g, perm)
            h_nodes = find_noncausal_cycle(h).nodes
            h_spec = GameSpec(h.n, h_nodes)
            _, h_win = play_model(h, eligible_cycle(h, h_spec.parties), h_spec)
            assert win == h_win == 1

    def test_every_noncausal_graph_wins_n4(self):
        hits = 0
        for n in (2, 3, 4):
            for g in all_graphs(n):
                c = find_noncausal_cycle(g)
                if c is None:
                    continue
                spec = GameSpec(n, c.nodes)
                _, win = play_model(g, c, spec)
                assert win == 1, g
                hits += 1
        assert hits > 0


class TestPlayErrors:
    def test_unnormalized_branch_raises(self, directed_3cycle):
        # relay-only instrument on the bare directed cycle: the all-ones and
        # all-zeros points are both fixed, so a branch column sums to 2
        m = build_model(directed_3cycle)
        w = ModelTableView(m)
        spec = GameSpec(3, (0, 1, 2))
        from socgraph import Instrument

        succ = {0: 1, 1: 2, 2: 0}
        tables = tuple(
            tuple(
                ((0, 0), (m.selection_symbol(k, succ[k]), 0))
                for _ in range(spec.setting_size)
            )
            for k in range(3)
        )
        inst = Instrument(
            input_sizes=m.alphabet.inputs,
            output_sizes=m.alphabet.outputs,
            setting_sizes=(spec.setting_size,) * 3,
            outcome_sizes=(2,) * 3,
            tables=tables,
        )
        with pytest.raises(ValueError):
            play(w, inst, spec)

    def test_bare_instrument_needs_spec(self, triangle):
        spec = GameSpec(3, (0, 1, 2))
        c = eligible_cycle(triangle, spec.parties)
        strat = build_violation_strategy(triangle, c, spec)
        w = ModelTableView(build_model(triangle))
        with pytest.raises(ValueError):
            play(w, strat.instrument)


class TestAgainstBound:
    def test_ignoring_the_received_bit_halves(self, triangle):
        # patch the guesser's outcome to a constant: only b=0 rounds win
        spec = GameSpec(3, (0, 1, 2))
        c = eligible_cycle(triangle, spec.parties)
        strat = build_violation_strategy(triangle, c, spec)
        tables = [list(map(list, t)) for t in strat.instrument.tables]
        for k in spec.parties:
            for x in range(spec.setting_size):
                u, v = decode_setting(3, x)
                if u == k:
                    for i in (0, 1):
                        o, _ = tables[k][x][i]
                        tables[k][x][i] = (o, 0)
        from socgraph import Instrument

        blind = Instrument(
            input_sizes=strat.instrument.input_sizes,
            output_sizes=strat.instrument.output_sizes,
            setting_sizes=strat.instrument.setting_sizes,
            outcome_sizes=strat.instrument.outcome_sizes,
            tables=tuple(tuple(tuple(r) for r in t) for t in tables),
        )
        w = ModelTableView(build_model(triangle))
        assert play(w, blind, spec) == Fraction(1, 2)

    def test_random_scan_cannot_violate_without_noncausal_cycle(self, switch):
        # no cycle of the switch graph qualifies, so random instruments stay
        # under the bound for its only pair of siblings
        spec = GameSpec(4, (1, 2))
        w = ModelTableView(build_model(switch))
        best = random_strategy_scan(w, spec, samples=200, seed=3)
        assert best <= spec.bound()

    def test_random_scan_finds_wins_on_triangle(self, triangle):
        spec = GameSpec(3, (0, 1, 2))
        w = ModelTableView(build_model(triangle))
        best = random_strategy_scan(w, spec, samples=50, seed=5)
        assert Fraction(0) < best <= 1
