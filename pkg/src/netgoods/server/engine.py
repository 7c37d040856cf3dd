"""Live session state machine.

One asyncio task per running session drives the round timers; all other
mutations (joins, quiz grading, submissions) go through the session lock,
so each session has a single logical writer. Clients receive pushed
phase events and are never the timing authority: the server closes
rounds at its own deadlines and late submissions are rejected, not
queued (the dropout fill rule covers them).
"""

from __future__ import annotations

import asyncio
import random
import time
import uuid
from dataclasses import dataclass, field
from typing import Awaitable, Callable

from .. import agents as ag, game, logs
from ..config import SessionConfig
from ..simulate import fill_rng
from . import content, protocol as proto

Sender = Callable[[dict], Awaitable[None]]

NEIGHBOR_LABELS = [f"Neighbor {chr(ord('A') + i)}" for i in range(26)]


@dataclass
class Player:
    token: str
    send: Sender | None = None
    terms_acked: bool = False
    quiz_passed: bool = False
    quiz_failed: bool = False
    wrong_counts: dict[str, int] = field(default_factory=dict)
    correct: set[str] = field(default_factory=set)
    position: int | None = None

    @property
    def connected(self) -> bool:
        return self.send is not None


class LiveSession:
    """Server-side realization: lobby, quiz gate, waiting room, timed rounds."""

    def __init__(
        self,
        config: SessionConfig,
        time_scale: float = 1.0,
        early_close: bool = False,
    ):
        self.config = config
        self.session_id = config.session_id or uuid.uuid4().hex
        self.net = config.resolve_network()
        self.placement = config.resolve_placement(self.net)
        self.params = config.params
        self.time_scale = time_scale
        self.early_close = early_close
        self.state = game.SessionState(
            net=self.net, placement=self.placement, params=self.params
        )
        self.log = logs.SessionLog()
        self.lock = asyncio.Lock()
        self.players: dict[str, Player] = {}
        self.position_tokens: dict[int, str] = {}
        self.bot_positions: dict[int, ag.Strategy] = {}
        self.submissions: dict[int, int] = {}
        self.round_deadline: float = 0.0
        self.round_duration: float = 0.0
        self._all_in = asyncio.Event()
        self._task: asyncio.Task | None = None
        self._fills = fill_rng(config.rng_seed)
        self._quiz = content.quiz_questions(self.params, self.net.k)
        self._label_cache: dict[int, dict[int, str]] = {}

    # ------------------------------------------------------------------ info

    @property
    def human_positions(self) -> list[int]:
        seeds = self.placement.seeds if self.placement else frozenset()
        return [v for v in self.net.nodes if v not in seeds]

    @property
    def needed(self) -> int:
        return len(self.human_positions)

    @property
    def filled(self) -> int:
        return len(self.position_tokens)

    @property
    def started(self) -> bool:
        return self.state.phase not in (
            game.Phase.LOBBY,
            game.Phase.QUIZ,
            game.Phase.WAITING_ROOM,
        )

    def status(self) -> dict:
        return {
            "session_id": self.session_id,
            "phase": self.state.phase.value,
            "round": self.state.round,
            "filled": self.filled,
            "needed": self.needed,
            "players": len(self.players),
        }

    def _labels_for(self, position: int) -> dict[int, str]:
        """Stable pseudonyms for a player's neighbors, shuffled per player."""
        if position not in self._label_cache:
            neighbors = sorted(self.net.neighbors(position))
            labels = NEIGHBOR_LABELS[: len(neighbors)]
            random.Random(f"{self.config.rng_seed}/labels/{position}").shuffle(labels)
            self._label_cache[position] = dict(zip(neighbors, labels))
        return self._label_cache[position]

    def client_view(self, position: int) -> dict:
        """Exactly the information a participant may see, nothing else."""
        last = self.state.contributions[-1] if self.state.contributions else None
        labels = self._labels_for(position)
        neighbors = [
            {"label": labels[u], "value": last[u] if last else None}
            for u in sorted(self.net.neighbors(position), key=lambda u: labels[u])
        ]
        seconds = 0.0
        if self.state.phase == game.Phase.IN_ROUND:
            seconds = max(0.0, self.round_deadline - time.time())
        cumulative = self.state.cumulative_tenths[position]
        return {
            "phase": self.state.phase.value,
            "round": self.state.round,
            "seconds_remaining": seconds,
            "endowment": self.params.endowment,
            "own_last_contribution": last[position] if last else None,
            "submitted_this_round": position in self.submissions,
            "neighbor_contributions": neighbors,
            "cumulative_tenths": cumulative,
            "cumulative_points": cumulative / 10,
        }

    # ------------------------------------------------------------------ flow

    async def join(self, token: str, send: Sender) -> Player:
        async with self.lock:
            player = self.players.get(token)
            if player is not None:
                if player.connected:
                    raise proto.ProtocolError(
                        proto.E_ALREADY_JOINED, "token already connected"
                    )
                player.send = send  # reconnect resumes the same enrollment
                await self._welcome(player, resumed=True)
                return player
            if self.state.phase == game.Phase.ABORTED:
                raise proto.ProtocolError(proto.E_SESSION_ABORTED)
            if self.started:
                raise proto.ProtocolError(
                    proto.E_SESSION_STARTED, "game already in progress"
                )
            active = sum(1 for p in self.players.values() if not p.quiz_failed)
            if active >= self.needed:
                raise proto.ProtocolError(proto.E_SESSION_FULL)
            player = Player(token=token, send=send)
            self.players[token] = player
            await self._welcome(player, resumed=False)
            return player

    async def _welcome(self, player: Player, resumed: bool) -> None:
        resume_view = None
        if player.position is not None:
            resume_view = self.client_view(player.position)
        await self._send(
            player,
            proto.message(
                proto.WELCOME,
                session_id=self.session_id,
                phase=self._player_phase(player),
                needed=self.needed,
                resume=resume_view,
            ),
        )
        if not player.terms_acked:
            await self._send(
                player, proto.message(proto.TERMS, text=content.terms_text(self.params))
            )
        elif not player.quiz_passed and not player.quiz_failed:
            await self._send_quiz(player)

    def _player_phase(self, player: Player) -> str:
        if player.quiz_failed:
            return "locked_out"
        if not player.terms_acked:
            return "terms"
        if not player.quiz_passed:
            return "quiz"
        if not self.started:
            return game.Phase.WAITING_ROOM.value
        return self.state.phase.value

    async def _send_quiz(self, player: Player) -> None:
        await self._send(
            player,
            proto.message(
                proto.QUIZ,
                instructions=content.instructions_text(self.params, self.net.k),
                questions=[{"id": q.id, "prompt": q.prompt} for q in self._quiz],
            ),
        )

    async def terms_ack(self, player: Player) -> None:
        async with self.lock:
            if player.terms_acked:
                return
            player.terms_acked = True
            await self._send_quiz(player)

    async def quiz_submit(self, player: Player, answers: list) -> str:
        async with self.lock:
            if not player.terms_acked:
                raise proto.ProtocolError(proto.E_TERMS_REQUIRED)
            if player.quiz_failed:
                raise proto.ProtocolError(proto.E_QUIZ_LOCKED)
            if player.quiz_passed:
                raise proto.ProtocolError(proto.E_BAD_MESSAGE, "quiz already passed")
            if len(answers) != len(self._quiz):
                raise proto.ProtocolError(
                    proto.E_BAD_MESSAGE, f"quiz expects {len(self._quiz)} answers"
                )
            outcome = self._grade(player, answers)
            wrong = [
                q.id for q in self._quiz
                if q.id not in player.correct
            ]
            await self._send(
                player,
                proto.message(proto.QUIZ_RESULT, outcome=outcome, wrong=wrong),
            )
            if outcome == "pass":
                await self._assign_position(player)
            return outcome

    def _grade(self, player: Player, answers: list) -> str:
        for question, answer in zip(self._quiz, answers):
            if question.id in player.correct:
                continue
            try:
                value = float(answer)
            except (TypeError, ValueError):
                value = float("nan")
            if abs(value - question.answer) <= content.ANSWER_TOLERANCE:
                player.correct.add(question.id)
            else:
                player.wrong_counts[question.id] = (
                    player.wrong_counts.get(question.id, 0) + 1
                )
        if len(player.correct) == len(self._quiz):
            player.quiz_passed = True
            return "pass"
        if any(c >= content.MAX_ATTEMPTS for c in player.wrong_counts.values()):
            player.quiz_failed = True  # frees the slot for the next joiner
            return "fail"
        return "retry"

    async def _assign_position(self, player: Player) -> None:
        # first come, first served over the human positions
        open_positions = [
            v for v in self.human_positions
            if v not in self.position_tokens and v not in self.bot_positions
        ]
        if not open_positions:
            raise proto.ProtocolError(proto.E_SESSION_FULL, "no positions left")
        player.position = open_positions[0]
        self.position_tokens[player.position] = player.token
        starting = self.filled + len(self.bot_positions) >= self.needed
        await self._broadcast_waiting(starting)
        if starting and not self.started:
            self._start_game()

    async def _broadcast_waiting(self, game_starting: bool) -> None:
        msg = proto.message(
            proto.WAITING_STATUS,
            filled=self.filled,
            needed=self.needed,
            game_starting=game_starting,
        )
        for p in self.players.values():
            if p.quiz_passed:
                await self._send(p, msg)

    async def force_start(self, fill_strategy: str | None = None) -> None:
        """Begin now, giving unclaimed human positions to server-side agents."""
        async with self.lock:
            if self.started:
                raise proto.ProtocolError(proto.E_SESSION_STARTED)
            strategy = ag.parse_strategy(fill_strategy or self.config.agents_default)
            for v in self.human_positions:
                if v not in self.position_tokens:
                    self.bot_positions[v] = strategy
            await self._broadcast_waiting(True)
            self._start_game()

    def _start_game(self) -> None:
        self.log.append(
            event=logs.SESSION_START,
            value=logs.start_event_value(
                self.session_id,
                self.config.condition,
                self.config.rng_seed,
                self.net,
                self.placement,
                self.params,
                tokens={p: t for p, t in sorted(self.position_tokens.items())},
            ),
            timestamp=time.time(),
        )
        self._task = asyncio.get_running_loop().create_task(self._run_game())

    # ------------------------------------------------------------------ rounds

    async def _run_game(self) -> None:
        try:
            for _ in range(self.params.rounds):
                await self._play_round()
                if self.state.phase == game.Phase.ABORTED:
                    return
            await self._finish()
        except asyncio.CancelledError:
            pass

    async def _play_round(self) -> None:
        async with self.lock:
            r = self.state.begin_round()
            self.submissions = {}
            self._all_in = asyncio.Event()
            self.round_duration = self.params.round_durations[r - 1] * self.time_scale
            self.round_deadline = time.time() + self.round_duration
            self.log.append(
                event=logs.ROUND_START, round=r, timestamp=time.time()
            )
            msg = proto.message(
                proto.ROUND_START,
                round=r,
                endowment=self.params.endowment,
                deadline=self.round_deadline,
                duration=self.round_duration,
            )
            for p in self.players.values():
                if p.position is not None:
                    await self._send(p, msg)

        try:
            remaining = self.round_deadline - time.time()
            if remaining > 0:
                await asyncio.wait_for(self._all_in.wait(), timeout=remaining)
        except asyncio.TimeoutError:
            pass

        async with self.lock:
            if self.state.phase != game.Phase.IN_ROUND:
                return  # aborted while the timer ran
            bots = {
                v: self._bot_decision(v, strategy)
                for v, strategy in self.bot_positions.items()
            }
            records = game.close_round(
                self.state, dict(self.submissions), self._fills, bot_positions=bots
            )
            now = time.time()
            for rec in records:
                self.log.append(
                    event=logs.CONTRIBUTION,
                    round=rec.round,
                    player=rec.player,
                    value=rec.contribution,
                    origin=rec.origin.value,
                    timestamp=now,
                )
            for rec in records:
                self.log.append(
                    event=logs.PAYOFF,
                    round=rec.round,
                    player=rec.player,
                    value=rec.payoff_tenths,
                    timestamp=now,
                )
            self.log.append(event=logs.ROUND_END, round=records[0].round, timestamp=now)
            by_player = {rec.player: rec for rec in records}
            for p in self.players.values():
                if p.position is None:
                    continue
                rec = by_player[p.position]
                labels = self._labels_for(p.position)
                neighbors = [
                    {"label": labels[u], "value": by_player[u].contribution}
                    for u in sorted(
                        self.net.neighbors(p.position), key=lambda u: labels[u]
                    )
                ]
                cumulative = self.state.cumulative_tenths[p.position]
                await self._send(
                    p,
                    proto.message(
                        proto.ROUND_RESULT,
                        round=rec.round,
                        own=rec.contribution,
                        origin=rec.origin.value,
                        neighbors=neighbors,
                        cumulative_tenths=cumulative,
                        cumulative_points=cumulative / 10,
                    ),
                )

    def _bot_decision(self, position: int, strategy: ag.Strategy) -> int:
        nbr_order = sorted(self.net.neighbors(position))
        history = self.state.history(position)
        neighbor_history = [
            [row[u] for u in nbr_order] for row in self.state.contributions
        ]
        return ag.decide(
            strategy,
            history,
            neighbor_history,
            self.state.round,
            ag.agent_rng(self.config.rng_seed, position),
            endowment=self.params.endowment,
        )

    async def _finish(self) -> None:
        async with self.lock:
            self.log.append(
                event=logs.SESSION_END,
                value={
                    "cumulative_tenths": {
                        str(v): t for v, t in self.state.cumulative_tenths.items()
                    }
                },
                timestamp=time.time(),
            )
            for p in self.players.values():
                if p.position is None:
                    continue
                tenths = self.state.cumulative_tenths[p.position]
                await self._send(
                    p,
                    proto.message(
                        proto.GAME_END,
                        points_tenths=tenths,
                        points=tenths / 10,
                        dollars=str(game.points_to_dollars(tenths, self.params)),
                        point_value=str(self.params.point_value),
                        base_pay=str(self.params.base_pay),
                    ),
                )

    async def contribute(self, player: Player, round_index: int, amount: int) -> None:
        async with self.lock:
            if player.position is None:
                raise proto.ProtocolError(proto.E_NOT_ENROLLED)
            if self.state.phase != game.Phase.IN_ROUND or round_index < self.state.round:
                raise proto.ProtocolError(
                    proto.E_DEADLINE_PASSED, f"round {round_index} is closed"
                )
            if round_index != self.state.round:
                raise proto.ProtocolError(
                    proto.E_BAD_ROUND, f"current round is {self.state.round}"
                )
            if not 0 <= amount <= self.params.endowment:
                raise proto.ProtocolError(
                    proto.E_OUT_OF_RANGE,
                    f"amount must lie in [0, {self.params.endowment}]",
                )
            previous = self.submissions.get(player.position)
            if previous is not None and previous != amount:
                raise proto.ProtocolError(
                    proto.E_RESUBMISSION, "a submitted contribution cannot be changed"
                )
            self.submissions[player.position] = amount
            await self._send(
                player,
                proto.message(proto.CONTRIBUTE_ACK, round=round_index, amount=amount),
            )
            human_live = [v for v in self.human_positions if v not in self.bot_positions]
            if self.early_close and all(v in self.submissions for v in human_live):
                self._all_in.set()

    async def snapshot(self, player: Player) -> dict:
        async with self.lock:
            if player.position is None:
                raise proto.ProtocolError(proto.E_NOT_ENROLLED)
            return self.client_view(player.position)

    async def abort(self) -> None:
        async with self.lock:
            if self.state.phase in (game.Phase.FINISHED, game.Phase.ABORTED):
                return
            self.state.abort()
            if self._task is not None:
                self._task.cancel()
            msg = proto.error_message(proto.E_SESSION_ABORTED, "session aborted")
            for p in self.players.values():
                await self._send(p, msg)

    def disconnect(self, player: Player) -> None:
        player.send = None

    async def _send(self, player: Player, msg: dict) -> None:
        if player.send is None:
            return
        try:
            await player.send(msg)
        except Exception:
            player.send = None  # connection died; fill rules keep the game alive


class SessionRegistry:
    """All live sessions on this server."""

    def __init__(self, time_scale: float = 1.0, early_close: bool = False):
        self.time_scale = time_scale
        self.early_close = early_close
        self.sessions: dict[str, LiveSession] = {}

    def create(self, config: SessionConfig) -> LiveSession:
        # a config-level time_scale overrides the server default
        scale = config.time_scale if config.time_scale != 1.0 else self.time_scale
        session = LiveSession(config, time_scale=scale, early_close=self.early_close)
        if session.session_id in self.sessions:
            raise proto.ProtocolError(
                proto.E_BAD_MESSAGE, f"session {session.session_id} already exists"
            )
        self.sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> LiveSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise proto.ProtocolError(proto.E_NOT_FOUND, f"no session {session_id}")
        return session
