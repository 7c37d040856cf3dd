"""Served documents: terms gate, game instructions, and the entry quiz.

The quiz answers are computed from the session's own payoff parameters,
so the grader and the instructions can never drift apart. With the
default parameters (endowment 10, per-capita return 0.4, five
neighbors) the six expected answers are 10, 24, 20, 17, 10, 18.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..game import GameParams

ANSWER_TOLERANCE = 0.01
MAX_ATTEMPTS = 2


def terms_text(params: GameParams) -> str:
    return (
        "The Investment Game: Terms of Participation\n"
        "\n"
        "1. This is a research study of group decision making, run as a game\n"
        "   of skill. By clicking \"I Agree\" you consent to take part.\n"
        f"2. You will be paid a base rate of ${params.base_pay} for passing the\n"
        "   entry quiz, plus a bonus that depends on the points you earn in\n"
        "   the game.\n"
        "3. You may leave the game at any time, but payment requires\n"
        "   completing the quiz, and the bonus requires playing the game.\n"
        "4. Only your anonymous worker identifier is stored with your\n"
        "   decisions; no personally identifying information is collected.\n"
        "5. Automated records of the game are kept for research purposes and\n"
        "   may be published in aggregate form.\n"
    )


def _fmt(points_tenths: int) -> str:
    if points_tenths % 10 == 0:
        return str(points_tenths // 10)
    return f"{points_tenths / 10:g}"


def instructions_text(params: GameParams, k: int = 5) -> str:
    e = params.endowment
    m = params.mpcr
    mt = params.mpcr_tenths
    nbh = k + 1  # you plus your neighbors

    # the four worked examples, computed from the actual payoff parameters
    # (a four-neighbor neighborhood, matching the classic group setting)
    ex_n = 4
    ex1_pool = (ex_n + 1) * e
    ex1 = mt * ex1_pool  # tenths
    ex2_pool = (ex_n + 1) * 2
    ex2 = 10 * (e - 2) + mt * ex2_pool
    ex3_pool = 2 + ex_n * e
    ex3 = 10 * (e - 2) + mt * ex3_pool
    ex4_pool = e + ex_n * 2
    ex4 = 10 * (e - e) + mt * ex4_pool

    return f"""Welcome to the Investment Game!

How much you earn depends on the decisions you make, so please read
these instructions carefully. A short quiz follows; you must answer it
correctly to play and to be paid.

Overview

You will be placed in a network with 23 other players, but you will only
interact with the players directly connected to you: your "neighbors".
The network, and your neighbors, stay the same for the whole game. The
game lasts 10 rounds. Each round, you and your neighbors choose how many
points to put into a joint project; the project pays out to you and to
them. Your earnings are counted in points and converted to dollars at
the end ({float(params.point_value) * 100:g} cents per point), added to your
${params.base_pay} base payment as a bonus.

How each round works

1. You receive an endowment of {e} points.
2. You choose how many points (a whole number from 0 to {e}) to
   contribute to the project, and you keep the rest. Once submitted,
   a contribution cannot be changed.
3. You have {params.round_durations[0]:g} seconds to decide in each of the first two
   rounds and {params.round_durations[-1]:g} seconds in later rounds. If you do not submit
   in time, the system enters a contribution for you and you earn no
   points for that round.
4. Your round income has two parts:
   (a) the points you kept: {e} minus your contribution;
   (b) your project income: {m:g} times the total contributed by you
       and your neighbors together.
5. Every player's income is computed the same way, each over their own
   neighborhood of {nbh} players (themselves plus {k} neighbors).

Four examples

1. Suppose you have four neighbors and all five of you contribute the
   full {e} points. The project total is {ex1_pool} points, so each of you
   receives {m:g} x {ex1_pool} = {_fmt(ex1)} points; you kept nothing, so your
   income is {_fmt(ex1)} points.
2. Suppose instead everyone contributes 2 points. The project total is
   {ex2_pool} points, paying {m:g} x {ex2_pool} = {_fmt(mt * ex2_pool)} each; you kept {e - 2},
   so your income is {_fmt(ex2)} points.
3. Now say you contribute 2 and each of your four neighbors contributes
   {e}. The total is {ex3_pool}, paying {_fmt(mt * ex3_pool)} each; with the {e - 2} you
   kept, your income is {_fmt(ex3)} points.
4. Finally, say you contribute {e} and each neighbor contributes 2. The
   total is {ex4_pool}, paying {_fmt(mt * ex4_pool)} each; you kept nothing, so your
   income is {_fmt(ex4)} points.

Points to note

- Every point you keep raises your income by 1 point.
- Every point you contribute raises the project total by 1 point and
  your own project income by {m:g} points.
- Every point you contribute also raises each neighbor's income by
  {m:g} points, and you earn {m:g} points for each point they contribute.
"""


@dataclass(frozen=True)
class QuizQuestion:
    id: str
    prompt: str
    answer_tenths: int

    @property
    def answer(self) -> float:
        return self.answer_tenths / 10


def quiz_questions(params: GameParams, k: int = 5) -> list[QuizQuestion]:
    """Entry quiz; answers derived from the payoff formula with k neighbors."""
    e = params.endowment
    mt = params.mpcr_tenths
    m = params.mpcr
    preamble = (
        f"Assume you have {k} neighbors, and you and your neighbors each "
        f"have an endowment of {e} points."
    )
    return [
        QuizQuestion(
            id="q1",
            prompt=f"{preamble} If nobody (including you) contributes any points "
            "to the project, what is your total income for the round?",
            answer_tenths=10 * e,
        ),
        QuizQuestion(
            id="q2",
            prompt=f"{preamble} If everyone (including you) contributes all "
            f"{e} points, what is your total income?",
            answer_tenths=mt * (k + 1) * e,
        ),
        QuizQuestion(
            id="q3a",
            prompt=f"{preamble} Your neighbors together contribute 25 points. "
            "If you contribute nothing, what is your total income?",
            answer_tenths=10 * e + mt * 25,
        ),
        QuizQuestion(
            id="q3b",
            prompt="Same situation: what is your total income if you contribute "
            "an additional 5 points yourself?",
            answer_tenths=10 * (e - 5) + mt * 30,
        ),
        QuizQuestion(
            id="q4a",
            prompt=f"{preamble} You contribute 8 points. What is your income if "
            "your neighbors contribute 12 points in total?",
            answer_tenths=10 * (e - 8) + mt * 20,
        ),
        QuizQuestion(
            id="q4b",
            prompt="Same situation: what is your income if your neighbors "
            "contribute 32 points in total?",
            answer_tenths=10 * (e - 8) + mt * 40,
        ),
    ]


def quiz_answers(params: GameParams, k: int = 5) -> list[float]:
    return [q.answer for q in quiz_questions(params, k)]
