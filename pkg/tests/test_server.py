import asyncio
import json
import math

import pytest

from netgoods import agents, config as cfg, game, logs
from netgoods.server import content, protocol as proto
from netgoods.server.engine import LiveSession

QUIZ_DEFAULT = (10, 24, 20, 17, 10, 18)


def tiny_config(rounds=3, duration=0.4, condition=cfg.ALL_HUMAN, **kwargs):
    """Four-player clique session for fast engine tests."""
    raw = {
        "session_id": kwargs.pop("session_id", "t1"),
        "condition": condition,
        "topology": {"name": "CalibrationClique", "num_cliques": 1, "clique_size": 4},
        "params": {
            "rounds": rounds,
            "round_durations": [duration] * rounds,
            "mpcr": 0.4,
        },
        "agents": {"default": "unconditional:10"},
        "rng_seed": kwargs.pop("rng_seed", 11),
    }
    raw.update(kwargs)
    return cfg.SessionConfig.from_dict(raw)


class Inbox:
    def __init__(self):
        self.messages = []

    async def send(self, msg):
        self.messages.append(msg)

    def of_type(self, msg_type):
        return [m for m in self.messages if m["type"] == msg_type]

    def last(self, msg_type):
        found = self.of_type(msg_type)
        return found[-1] if found else None


async def enroll(session, token, answers=None):
    """JOIN -> TERMS_ACK -> QUIZ_SUBMIT(correct) for one player."""
    inbox = Inbox()
    player = await session.join(token, inbox.send)
    await session.terms_ack(player)
    if answers is None:
        answers = [q.answer for q in session._quiz]
    await session.quiz_submit(player, list(answers))
    return player, inbox


async def run_full_session(session, tokens, contribution=7):
    players = {}
    for token in tokens:
        players[token] = await enroll(session, token)
    await asyncio.sleep(0.05)
    while session.state.phase == game.Phase.IN_ROUND:
        r = session.state.round
        for token, (player, _) in players.items():
            try:
                await session.contribute(player, r, contribution)
            except proto.ProtocolError:
                pass
        deadline = session.round_deadline
        import time as _t

        await asyncio.sleep(max(0.01, deadline - _t.time() + 0.05))
    if session._task is not None:
        await asyncio.wait_for(session._task, timeout=10)
    return players


class TestContent:
    def test_default_quiz_answers(self):
        answers = content.quiz_answers(game.GameParams())
        assert tuple(answers) == QUIZ_DEFAULT

    def test_calibration_quiz_answers_adjust_to_degree(self):
        answers = content.quiz_answers(game.GameParams(), k=3)
        assert answers[1] == pytest.approx(16.0)  # 0.4 * 4 * 10
        assert answers[0] == pytest.approx(10.0)

    def test_instructions_carry_worked_examples(self):
        text = content.instructions_text(game.GameParams())
        for value in ("20", "12", "24.8", "7.2"):
            assert value in text

    def test_terms_mention_base_pay(self):
        assert "$0.50" in content.terms_text(game.GameParams())


class TestProtocol:
    def test_parse_valid_join(self):
        msg = proto.parse_client_message(
            json.dumps({"v": 1, "type": "JOIN", "session_id": "s", "token": "t"})
        )
        assert msg["type"] == proto.JOIN

    def test_rejects_bad_version(self):
        with pytest.raises(proto.ProtocolError) as err:
            proto.parse_client_message(json.dumps({"v": 2, "type": "JOIN"}))
        assert err.value.code == proto.E_UNSUPPORTED_VERSION

    def test_rejects_unknown_type(self):
        with pytest.raises(proto.ProtocolError):
            proto.parse_client_message(json.dumps({"v": 1, "type": "HACK"}))

    def test_rejects_missing_fields(self):
        with pytest.raises(proto.ProtocolError):
            proto.parse_client_message(json.dumps({"v": 1, "type": "CONTRIBUTE"}))

    def test_rejects_bool_as_int(self):
        with pytest.raises(proto.ProtocolError):
            proto.parse_client_message(
                json.dumps({"v": 1, "type": "CONTRIBUTE", "round": True, "amount": 3})
            )

    def test_rejects_non_json(self):
        with pytest.raises(proto.ProtocolError):
            proto.parse_client_message("not json")


class TestLobbyAndQuiz:
    def test_join_sends_terms_then_quiz(self):
        async def scenario():
            session = LiveSession(tiny_config(), time_scale=0.05)
            inbox = Inbox()
            player = await session.join("alice", inbox.send)
            assert inbox.last(proto.WELCOME)["phase"] == "terms"
            assert inbox.last(proto.TERMS) is not None
            await session.terms_ack(player)
            quiz = inbox.last(proto.QUIZ)
            assert [q["id"] for q in quiz["questions"]] == [
                "q1", "q2", "q3a", "q3b", "q4a", "q4b"
            ]
            assert "answer" not in json.dumps(quiz["questions"])

        asyncio.run(scenario())

    def test_quiz_retry_then_pass(self):
        async def scenario():
            session = LiveSession(tiny_config(), time_scale=0.05)
            inbox = Inbox()
            player = await session.join("bob", inbox.send)
            await session.terms_ack(player)
            good = [q.answer for q in session._quiz]
            wrong = list(good)
            wrong[0] = good[0] + 5
            outcome = await session.quiz_submit(player, wrong)
            assert outcome == "retry"
            assert inbox.last(proto.QUIZ_RESULT)["wrong"] == ["q1"]
            outcome = await session.quiz_submit(player, good)
            assert outcome == "pass"
            assert player.position is not None

        asyncio.run(scenario())

    def test_quiz_two_strikes_locks_out(self):
        async def scenario():
            session = LiveSession(tiny_config(), time_scale=0.05)
            inbox = Inbox()
            player = await session.join("carol", inbox.send)
            await session.terms_ack(player)
            good = [q.answer for q in session._quiz]
            wrong = list(good)
            wrong[2] = -1
            assert await session.quiz_submit(player, wrong) == "retry"
            assert await session.quiz_submit(player, wrong) == "fail"
            with pytest.raises(proto.ProtocolError) as err:
                await session.quiz_submit(player, good)
            assert err.value.code == proto.E_QUIZ_LOCKED
            # the freed slot admits another player
            for i in range(4):
                await enroll(session, f"p{i}")
            assert session.filled == 4

        asyncio.run(scenario())

    def test_quiz_tolerance(self):
        async def scenario():
            session = LiveSession(tiny_config(), time_scale=0.05)
            inbox = Inbox()
            player = await session.join("dora", inbox.send)
            await session.terms_ack(player)
            answers = [q.answer + 0.009 for q in session._quiz]
            assert await session.quiz_submit(player, answers) == "pass"

        asyncio.run(scenario())

    def test_session_full_and_started_errors(self):
        async def scenario():
            session = LiveSession(tiny_config(duration=0.5), time_scale=1.0)
            for i in range(4):
                await enroll(session, f"p{i}")
            with pytest.raises(proto.ProtocolError) as err:
                await session.join("late", Inbox().send)
            # the lobby filled and the game began, so late joiners are refused
            assert err.value.code in (proto.E_SESSION_FULL, proto.E_SESSION_STARTED)
            await session.abort()

        asyncio.run(scenario())

    def test_terms_required_before_quiz(self):
        async def scenario():
            session = LiveSession(tiny_config(), time_scale=0.05)
            inbox = Inbox()
            player = await session.join("eve", inbox.send)
            with pytest.raises(proto.ProtocolError) as err:
                await session.quiz_submit(player, [0] * 6)
            assert err.value.code == proto.E_TERMS_REQUIRED

        asyncio.run(scenario())

    def test_already_joined_vs_resume(self):
        async def scenario():
            session = LiveSession(tiny_config(), time_scale=0.05)
            inbox = Inbox()
            player = await session.join("frank", inbox.send)
            with pytest.raises(proto.ProtocolError) as err:
                await session.join("frank", Inbox().send)
            assert err.value.code == proto.E_ALREADY_JOINED
            session.disconnect(player)
            inbox2 = Inbox()
            again = await session.join("frank", inbox2.send)
            assert again is player
            assert inbox2.last(proto.WELCOME) is not None

        asyncio.run(scenario())

    def test_waiting_status_counts(self):
        async def scenario():
            session = LiveSession(tiny_config(duration=0.5), time_scale=1.0)
            _, first_inbox = await enroll(session, "p0")
            status = first_inbox.last(proto.WAITING_STATUS)
            assert (status["filled"], status["needed"]) == (1, 4)
            assert not status["game_starting"]
            for i in range(1, 4):
                await enroll(session, f"p{i}")
            status = first_inbox.last(proto.WAITING_STATUS)
            assert (status["filled"], status["needed"]) == (4, 4)
            assert status["game_starting"]
            await session.abort()

        asyncio.run(scenario())


class TestRounds:
    def test_full_session_and_replay(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=3, duration=0.4), time_scale=0.2)
            players = await run_full_session(session, [f"p{i}" for i in range(4)])
            assert session.state.phase == game.Phase.FINISHED
            # broadcast payoffs match an independent replay of the log
            recomputed = logs.replay(session.log)
            assert recomputed == session.log.payoffs_tenths()
            for _, inbox in players.values():
                end = inbox.last(proto.GAME_END)
                assert end is not None
                results = inbox.of_type(proto.ROUND_RESULT)
                assert len(results) == 3
                assert results[-1]["cumulative_tenths"] == end["points_tenths"]

        asyncio.run(scenario())

    def test_contribute_validation(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=2, duration=60), time_scale=1.0)
            players = {}
            for i in range(4):
                players[f"p{i}"] = await enroll(session, f"p{i}")
            await asyncio.sleep(0.05)
            player, inbox = players["p0"]
            assert session.state.phase == game.Phase.IN_ROUND

            with pytest.raises(proto.ProtocolError) as err:
                await session.contribute(player, 1, 11)
            assert err.value.code == proto.E_OUT_OF_RANGE

            with pytest.raises(proto.ProtocolError) as err:
                await session.contribute(player, 2, 5)
            assert err.value.code == proto.E_BAD_ROUND

            await session.contribute(player, 1, 7)
            assert inbox.last(proto.CONTRIBUTE_ACK) == {
                "v": 1, "type": "CONTRIBUTE_ACK", "round": 1, "amount": 7,
            }
            # duplicate delivery of the same value is an idempotent ack
            await session.contribute(player, 1, 7)
            assert len(inbox.of_type(proto.CONTRIBUTE_ACK)) == 2
            with pytest.raises(proto.ProtocolError) as err:
                await session.contribute(player, 1, 3)
            assert err.value.code == proto.E_RESUBMISSION
            await session.abort()

        asyncio.run(scenario())

    def test_deadline_fill_and_liveness(self):
        async def scenario():
            # nobody ever submits; the game still ends via the fill rules
            session = LiveSession(tiny_config(rounds=3, duration=0.3), time_scale=0.2)
            for i in range(4):
                await enroll(session, f"p{i}")
            await asyncio.wait_for(session._task, timeout=10)
            assert session.state.phase == game.Phase.FINISHED
            origins = session.log.origins()
            assert all(o == game.Origin.AUTO_RANDOM for o in origins[0].values())
            for row in origins[1:]:
                assert all(o == game.Origin.AUTO_REPEAT for o in row.values())
            for first, later in zip(
                session.log.contributions()[0].items(),
                session.log.contributions()[1].items(),
            ):
                assert first[1] in (0, 10)
                assert first[1] == later[1]

        asyncio.run(scenario())

    def test_late_submission_rejected(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=2, duration=0.25), time_scale=1.0)
            players = {}
            for i in range(4):
                players[f"p{i}"] = await enroll(session, f"p{i}")
            player, _ = players["p0"]
            # wait until round 1 is over, then try to submit for it
            while session.state.round < 2:
                await asyncio.sleep(0.02)
            with pytest.raises(proto.ProtocolError) as err:
                await session.contribute(player, 1, 5)
            assert err.value.code == proto.E_DEADLINE_PASSED
            await session.abort()

        asyncio.run(scenario())

    def test_early_close_flag(self):
        async def scenario():
            session = LiveSession(
                tiny_config(rounds=2, duration=30), time_scale=1.0, early_close=True
            )
            players = {}
            for i in range(4):
                players[f"p{i}"] = await enroll(session, f"p{i}")
            await asyncio.sleep(0.05)
            for token in players:
                player, _ = players[token]
                await session.contribute(player, 1, 4)
            await asyncio.sleep(0.3)
            assert session.state.round == 2  # closed early, long before 30s
            await session.abort()

        asyncio.run(scenario())

    def test_abort_mid_round(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=2, duration=30), time_scale=1.0)
            inboxes = {}
            for i in range(4):
                _, inboxes[i] = await enroll(session, f"p{i}")
            await asyncio.sleep(0.05)
            await session.abort()
            assert session.state.phase == game.Phase.ABORTED
            for inbox in inboxes.values():
                errors = inbox.of_type(proto.ERROR)
                assert any(e["code"] == proto.E_SESSION_ABORTED for e in errors)

        asyncio.run(scenario())

    def test_force_start_fills_with_bots(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=2, duration=0.2), time_scale=0.2)
            await enroll(session, "solo")
            await session.force_start("unconditional:10")
            await asyncio.wait_for(session._task, timeout=10)
            origins = session.log.origins()
            bot_positions = [v for v, o in origins[0].items() if o == game.Origin.BOT]
            assert len(bot_positions) == 3
            for row in session.log.contributions():
                assert all(row[v] == 10 for v in bot_positions)
            fraction, valid = game.session_validity(session.log.records())
            assert not valid  # the lone human never submitted

        asyncio.run(scenario())


class TestClientView:
    def test_view_shows_last_closed_round_only(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=2, duration=0.3), time_scale=1.0)
            players = {}
            for i in range(4):
                players[f"p{i}"] = await enroll(session, f"p{i}")
            await asyncio.sleep(0.05)
            player, inbox = players["p0"]
            view = await session.snapshot(player)
            assert view["round"] == 1
            assert view["own_last_contribution"] is None
            assert all(n["value"] is None for n in view["neighbor_contributions"])
            assert len(view["neighbor_contributions"]) == 3
            for token, (p, _) in players.items():
                await session.contribute(p, 1, int(token[-1]) + 2)
            while session.state.round < 2:
                await asyncio.sleep(0.02)
            view = await session.snapshot(player)
            assert view["own_last_contribution"] == 2
            values = sorted(n["value"] for n in view["neighbor_contributions"])
            assert values == [3, 4, 5]
            await session.abort()

        asyncio.run(scenario())

    def test_seed_bot_neighbor_always_shows_full_contribution(self):
        async def scenario():
            # one-clique session under cooperative cover: position 0 becomes a
            # seed bot, the three humans see its fixed 10 in every result
            session = LiveSession(
                tiny_config(rounds=3, duration=0.3, condition=cfg.COOP_COVER),
                time_scale=0.2,
            )
            assert session.needed == 3
            players = await run_full_session(
                session, ["h1", "h2", "h3"], contribution=2
            )
            for _, inbox in players.values():
                results = inbox.of_type(proto.ROUND_RESULT)
                assert len(results) == 3
                for result in results:
                    values = sorted(n["value"] for n in result["neighbors"])
                    assert values == [2, 2, 10]

        asyncio.run(scenario())

    def test_neighbor_labels_stable_across_rounds(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=3, duration=0.3), time_scale=0.2)
            players = await run_full_session(
                session, [f"p{i}" for i in range(4)], contribution=5
            )
            for _, inbox in players.values():
                results = inbox.of_type(proto.ROUND_RESULT)
                label_sets = [
                    tuple(n["label"] for n in r["neighbors"]) for r in results
                ]
                assert len(set(label_sets)) == 1
                assert all(lbl.startswith("Neighbor ") for lbl in label_sets[0])

        asyncio.run(scenario())


class TestInformationHiding:
    FORBIDDEN_SUBSTRINGS = (
        "Cliques", "PairedCliques", "Cycle", "SmallWorld", "RandomRegular",
        "CalibrationClique", "seed", "topology", "edges", "groups",
    )

    def test_no_message_leaks_structure_or_identities(self):
        async def scenario():
            config = tiny_config(rounds=2, duration=0.3, rng_seed=77)
            session = LiveSession(config, time_scale=0.2)
            players = await run_full_session(
                session, ["tok-alpha", "tok-beta", "tok-gamma", "tok-delta"]
            )
            all_tokens = set(players)
            for token, (player, inbox) in players.items():
                for msg in inbox.messages:
                    blob = json.dumps(msg)
                    for needle in self.FORBIDDEN_SUBSTRINGS:
                        assert needle not in blob, (needle, msg["type"])
                    for other in all_tokens - {token}:
                        assert other not in blob
                    if msg["type"] == proto.ROUND_RESULT:
                        assert len(msg["neighbors"]) == session.net.k
                        assert set(msg.keys()) == {
                            "v", "type", "round", "own", "origin", "neighbors",
                            "cumulative_tenths", "cumulative_points",
                        }

        asyncio.run(scenario())

    def test_no_round_result_before_round_closes(self):
        async def scenario():
            session = LiveSession(tiny_config(rounds=2, duration=0.5), time_scale=1.0)
            players = {}
            for i in range(4):
                players[f"p{i}"] = await enroll(session, f"p{i}")
            await asyncio.sleep(0.05)
            # submit from two players, round still open
            for token in ("p0", "p1"):
                player, _ = players[token]
                await session.contribute(player, 1, 9)
            assert session.state.phase == game.Phase.IN_ROUND
            for token, (player, inbox) in players.items():
                # contribution values travel only in ROUND_RESULT payloads
                # (and snapshot views); neither may carry them before close
                assert inbox.of_type(proto.ROUND_RESULT) == []
                assert not any("neighbors" in m or "own" in m for m in inbox.messages)
                view = await session.snapshot(player)
                assert view["own_last_contribution"] is None
                assert all(
                    n["value"] is None for n in view["neighbor_contributions"]
                )
            await session.abort()

        asyncio.run(scenario())
