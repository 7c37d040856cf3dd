import random
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgoods import game, topology as tp

PARAMS = game.GameParams()


def make_state(name=tp.CYCLE, placement=None, params=PARAMS):
    net = tp.canonical_network(name)
    return game.SessionState(net=net, placement=placement, params=params)


class TestPayoff:
    # the four worked examples from the served instructions (4 neighbors)
    def test_worked_example_all_ten(self):
        assert game.payoff(10, [10, 10, 10, 10], PARAMS) == 20.0

    def test_worked_example_all_two(self):
        assert game.payoff(2, [2, 2, 2, 2], PARAMS) == 12.0

    def test_worked_example_low_among_high(self):
        assert game.payoff(2, [10, 10, 10, 10], PARAMS) == 24.8

    def test_worked_example_high_among_low(self):
        assert game.payoff(10, [2, 2, 2, 2], PARAMS) == 7.2

    def test_no_contributions_keeps_endowment(self):
        assert game.payoff(0, [0, 0, 0, 0, 0], PARAMS) == 10.0

    def test_out_of_range(self):
        with pytest.raises(game.OutOfRangeContribution):
            game.payoff(11, [0] * 5, PARAMS)
        with pytest.raises(game.OutOfRangeContribution):
            game.payoff(5, [0, -1, 0, 0, 0], PARAMS)

    def test_exact_tenths(self):
        assert game.payoff_tenths(2, [10, 10, 10, 10], PARAMS) == 248

    def test_own_contribution_strictly_decreases_own_payoff(self):
        others = [4, 7, 0, 10, 3]
        pays = [game.payoff_tenths(c, others, PARAMS) for c in range(11)]
        diffs = {b - a for a, b in zip(pays, pays[1:])}
        assert diffs == {PARAMS.mpcr_tenths - 10}  # -0.6 points per point

    def test_own_contribution_strictly_increases_group_total(self):
        # on a k-regular graph each extra point adds M*(k+1) - 1 to the pot
        net = tp.canonical_network(tp.CLIQUES)
        k = net.k

        def total(c0):
            contribs = {v: 5 for v in net.nodes}
            contribs[0] = c0
            return sum(
                game.payoff_tenths(
                    contribs[v], [contribs[u] for u in net.neighbors(v)], PARAMS
                )
                for v in net.nodes
            )

        slope = total(6) - total(5)
        assert slope == PARAMS.mpcr_tenths * (k + 1) - 10  # +1.4 points per point


class TestBudgetIdentity:
    @pytest.mark.parametrize("name", tp.TOPOLOGY_NAMES)
    def test_random_rounds(self, name):
        net = tp.canonical_network(name)
        rng = random.Random(hash(name) & 0xFFFF)
        for _ in range(200):
            contribs = {v: rng.randint(0, 10) for v in net.nodes}
            total = sum(
                game.payoff_tenths(
                    contribs[v], [contribs[u] for u in net.neighbors(v)], PARAMS
                )
                for v in net.nodes
            )
            expected = 10 * net.n * PARAMS.endowment + (
                PARAMS.mpcr_tenths * (net.k + 1) - 10
            ) * sum(contribs.values())
            assert total == expected

    def test_clique_reduces_to_group_game(self):
        # on a 4-clique the neighborhood payoff is the classic n=4 group game
        net = tp.build_cliques(6, 4)
        params = game.GameParams(round_durations=game.DEFAULT_ROUND_DURATIONS)
        params.validate(net.k)
        contribs = {v: (v * 3) % 11 for v in net.nodes}
        for v in net.nodes:
            group = [u for u in net.nodes if net.groups[u] == net.groups[v]]
            group_pool = sum(contribs[u] for u in group)
            classic = 10 * (params.endowment - contribs[v]) + params.mpcr_tenths * group_pool
            networked = game.payoff_tenths(
                contribs[v], [contribs[u] for u in net.neighbors(v)], params
            )
            assert networked == classic


class TestFillMissing:
    def test_repeats_last_entry(self):
        rng = random.Random(0)
        assert game.fill_missing([7, 3], 3, rng) == (3, game.Origin.AUTO_REPEAT)

    def test_no_history_draws_zero_or_ten(self):
        rng = random.Random(0)
        value, origin = game.fill_missing([], 1, rng)
        assert value in (0, 10)
        assert origin == game.Origin.AUTO_RANDOM

    def test_repeated_application_is_sticky(self):
        rng = random.Random(0)
        history = [5]
        for _ in range(2):
            value, origin = game.fill_missing(history, len(history) + 1, rng)
            assert (value, origin) == (5, game.Origin.AUTO_REPEAT)
            history.append(value)

    @given(st.lists(st.integers(min_value=0, max_value=10), max_size=9), st.integers(0, 2**32 - 1))
    def test_fill_rule_property(self, history, seed):
        value, origin = game.fill_missing(history, len(history) + 1, random.Random(seed))
        if history:
            assert value == history[-1] and origin == game.Origin.AUTO_REPEAT
        else:
            assert value in (0, 10) and origin == game.Origin.AUTO_RANDOM


class TestCloseRound:
    def test_all_submit_ten(self):
        state = make_state()
        state.begin_round()
        records = game.close_round(
            state, {v: 10 for v in state.net.nodes}, random.Random(0)
        )
        # 10 - 10 + 0.4 * 60 with a six-node neighborhood
        assert all(rec.payoff_tenths == 240 for rec in records)
        assert all(rec.origin == game.Origin.HUMAN for rec in records)
        assert state.phase == game.Phase.BETWEEN_ROUNDS

    def test_seed_payoff_under_defect_cover(self):
        placement = tp.canonical_placement(tp.CYCLE, tp.COVER, behavior=0)
        state = make_state(placement=placement)
        state.begin_round()
        submitted = {v: 10 for v in state.human_positions()}
        records = game.close_round(state, submitted, random.Random(0))
        by_player = {rec.player: rec for rec in records}
        for s in placement.seeds:
            assert by_player[s].contribution == 0
            assert by_player[s].origin == game.Origin.BOT
            assert by_player[s].payoff_tenths == 300  # 10 - 0 + 0.4 * 50
        # humans next to a defecting seed: 10 - 10 + 0.4 * (10 + 4*10 + 0)
        for v in state.human_positions():
            assert by_player[v].payoff_tenths == 200

    def test_empty_submission_round_one_fills_randomly(self):
        state = make_state()
        state.begin_round()
        records = game.close_round(state, {}, random.Random(42))
        assert all(rec.origin == game.Origin.AUTO_RANDOM for rec in records)
        assert all(rec.contribution in (0, 10) for rec in records)

    def test_missing_after_history_repeats(self):
        state = make_state()
        state.begin_round()
        game.close_round(state, {v: 7 for v in state.net.nodes}, random.Random(0))
        state.begin_round()
        records = game.close_round(state, {}, random.Random(0))
        assert all(rec.contribution == 7 for rec in records)
        assert all(rec.origin == game.Origin.AUTO_REPEAT for rec in records)

    def test_phase_violation_when_not_in_round(self):
        state = make_state()
        with pytest.raises(game.PhaseViolation):
            game.close_round(state, {}, random.Random(0))

    def test_no_round_replay(self):
        params = game.GameParams(rounds=2, round_durations=(45, 45))
        state = make_state(params=params)
        state.begin_round()
        game.close_round(state, {}, random.Random(0))
        state.begin_round()
        game.close_round(state, {}, random.Random(0))
        assert state.phase == game.Phase.FINISHED
        with pytest.raises(game.PhaseViolation):
            state.begin_round()

    def test_cumulative_totals_accumulate(self):
        state = make_state()
        for _ in range(3):
            state.begin_round()
            game.close_round(state, {v: 10 for v in state.net.nodes}, random.Random(0))
        assert all(total == 3 * 240 for total in state.cumulative_tenths.values())


class TestSessionValidity:
    def _records(self, auto_count, rounds=10, players=20):
        recs = []
        flips = auto_count
        for p in range(players):
            for r in range(1, rounds + 1):
                if flips > 0:
                    origin = game.Origin.AUTO_REPEAT
                    flips -= 1
                else:
                    origin = game.Origin.HUMAN
                recs.append(
                    game.RoundRecord(
                        round=r, player=p, contribution=5, origin=origin, payoff_tenths=0
                    )
                )
        return recs

    def test_exact_boundary_is_valid(self):
        fraction, valid = game.session_validity(self._records(auto_count=20))
        assert fraction == pytest.approx(0.90)
        assert valid

    def test_all_human(self):
        fraction, valid = game.session_validity(self._records(auto_count=0))
        assert (fraction, valid) == (1.0, True)

    def test_just_below_boundary_invalid(self):
        fraction, valid = game.session_validity(self._records(auto_count=21))
        assert fraction == pytest.approx(0.895)
        assert not valid

    def test_bot_positions_excluded(self):
        recs = self._records(auto_count=0)
        for r in range(1, 11):
            recs.append(
                game.RoundRecord(
                    round=r, player=99, contribution=10,
                    origin=game.Origin.BOT, payoff_tenths=0,
                )
            )
        fraction, valid = game.session_validity(recs)
        assert (fraction, valid) == (1.0, True)

    def test_incomplete_session_rejected(self):
        recs = self._records(auto_count=0)[:-1]
        with pytest.raises(game.IncompleteSession):
            game.session_validity(recs)

    @settings(max_examples=60)
    @given(st.integers(min_value=0, max_value=200))
    def test_threshold_flags_exactly_at_90_percent(self, auto_count):
        fraction, valid = game.session_validity(self._records(auto_count=auto_count))
        assert valid == (fraction >= 0.90)
        assert fraction == pytest.approx((200 - auto_count) / 200)


class TestMoney:
    def test_standard_rate(self):
        params = game.GameParams()
        assert game.points_to_dollars(1500, params) == Decimal("3.50")

    def test_zero_points_base_only(self):
        assert game.points_to_dollars(0, game.GameParams()) == Decimal("0.50")

    def test_low_compensation_arm(self):
        params = game.GameParams(point_value=Decimal("0.005"))
        assert game.points_to_dollars(1000, params) == Decimal("1.00")

    def test_half_cent_rounds_up(self):
        params = game.GameParams(point_value=Decimal("0.005"))
        # 101 points -> 0.505 bonus -> 1.01 after half-up rounding
        assert game.points_to_dollars(1010, params) == Decimal("1.01")


class TestRoi:
    def test_known_deltas(self):
        assert game.roi(1120, 1000, 400, 300) == pytest.approx(1.2)

    def test_zero_cost(self):
        with pytest.raises(game.ZeroCost):
            game.roi(1120, 1000, 400, 400)

    def test_table_reference_ratios(self):
        # reference ROI cells, re-derived from integer fixture totals
        cases = {
            "Cliques": (1260, 1000, 400, 150, 1.04),
            "PairedCliques": (1218, 1000, 400, 200, 1.09),
            "Cycle": (1276, 1000, 400, 200, 1.38),
            "SmallWorld": (1160, 1000, 400, 200, 0.80),
            "RandomRegular": (1200, 1000, 400, 200, 1.00),
        }
        for seeded, base, seed_total, counterfactual, expected in cases.values():
            assert game.roi(seeded, base, seed_total, counterfactual) == pytest.approx(expected)


class TestParams:
    def test_default_is_social_dilemma(self):
        PARAMS.validate(5)
        assert PARAMS.multiplier(5) == pytest.approx(2.4)

    def test_calibration_params(self):
        PARAMS.validate(3)
        assert PARAMS.multiplier(3) == pytest.approx(1.6)

    def test_rejects_non_dilemma(self):
        # multiplier 0.6 < 1: contributing is dominated AND socially wasteful
        with pytest.raises(game.GameError):
            game.GameParams(mpcr_tenths=1).validate(5)
