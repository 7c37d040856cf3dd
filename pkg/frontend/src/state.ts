/**
 * Single-page application state: one reducer over server messages plus a
 * handful of user actions. The state holds nothing the protocol did not
 * deliver, and rendering is a pure function of it, so replaying the same
 * message stream always reconstructs the same screen (reconnects simply
 * converge on the latest snapshot).
 */

import type {
  ClientView,
  GameEnd,
  QuizQuestionView,
  RoundResult,
  ServerMessage,
} from "./protocol.js";

export type Screen =
  | "connecting"
  | "terms"
  | "quiz"
  | "locked_out"
  | "waiting"
  | "round"
  | "ended"
  | "aborted";

export interface QuizState {
  instructions: string;
  questions: QuizQuestionView[];
  wrong: string[]; // question ids answered wrong on the last submission
  attempts: number; // submissions so far
  outcome: "pending" | "retry" | "fail" | "pass";
}

export interface RoundState {
  round: number;
  endowment: number;
  deadline: number; // epoch seconds, server frame
  duration: number; // seconds
  submitted: number | null; // locked contribution, once sent
  acked: boolean;
}

export interface AppState {
  screen: Screen;
  sessionId: string | null;
  needed: number;
  waiting: { filled: number; needed: number; gameStarting: boolean } | null;
  terms: string | null;
  quiz: QuizState | null;
  round: RoundState | null;
  lastResult: RoundResult | null; // neighbor feedback from the last closed round
  cumulativeTenths: number;
  end: GameEnd | null;
  banner: string | null; // connection problems, non-fatal errors
}

export function initialState(): AppState {
  return {
    screen: "connecting",
    sessionId: null,
    needed: 0,
    waiting: null,
    terms: null,
    quiz: null,
    round: null,
    lastResult: null,
    cumulativeTenths: 0,
    end: null,
    banner: null,
  };
}

function screenForPhase(phase: string): Screen {
  switch (phase) {
    case "terms":
      return "terms";
    case "quiz":
      return "quiz";
    case "locked_out":
      return "locked_out";
    case "waiting_room":
      return "waiting";
    case "in_round":
    case "between_rounds":
      return "round";
    case "finished":
      return "ended";
    case "aborted":
      return "aborted";
    default:
      return "connecting";
  }
}

function applyView(state: AppState, view: ClientView): AppState {
  // a resume snapshot: adopt the server's authoritative picture
  const next: AppState = {
    ...state,
    screen: screenForPhase(view.phase),
    cumulativeTenths: view.cumulative_tenths,
  };
  if (view.phase === "in_round" || view.phase === "between_rounds") {
    next.round = {
      round: view.round,
      endowment: view.endowment,
      deadline: Date.now() / 1000 + view.seconds_remaining,
      duration: view.seconds_remaining,
      submitted: view.submitted_this_round ? -1 : null, // locked, amount unknown
      acked: view.submitted_this_round,
    };
  }
  return next;
}

export function applyServerMessage(state: AppState, msg: ServerMessage): AppState {
  switch (msg.type) {
    case "WELCOME": {
      const next: AppState = {
        ...state,
        sessionId: msg.session_id,
        needed: msg.needed,
        banner: null,
        screen: screenForPhase(msg.phase),
      };
      return msg.resume ? applyView(next, msg.resume) : next;
    }
    case "TERMS":
      return { ...state, screen: "terms", terms: msg.text };
    case "QUIZ":
      return {
        ...state,
        screen: "quiz",
        quiz: {
          instructions: msg.instructions,
          questions: msg.questions,
          wrong: [],
          attempts: 0,
          outcome: "pending",
        },
      };
    case "QUIZ_RESULT": {
      if (!state.quiz) return state;
      const quiz: QuizState = {
        ...state.quiz,
        wrong: msg.wrong,
        attempts: state.quiz.attempts + 1,
        outcome: msg.outcome,
      };
      if (msg.outcome === "pass") {
        return { ...state, quiz, screen: "waiting" };
      }
      if (msg.outcome === "fail") {
        return { ...state, quiz, screen: "locked_out" };
      }
      return { ...state, quiz };
    }
    case "WAITING_STATUS":
      // idempotent render of the latest status; stale ones just overwrite
      return {
        ...state,
        screen: state.screen === "round" ? state.screen : "waiting",
        waiting: {
          filled: msg.filled,
          needed: msg.needed,
          gameStarting: msg.game_starting,
        },
      };
    case "ROUND_START":
      return {
        ...state,
        screen: "round",
        round: {
          round: msg.round,
          endowment: msg.endowment,
          deadline: msg.deadline,
          duration: msg.duration,
          submitted: null,
          acked: false,
        },
      };
    case "CONTRIBUTE_ACK": {
      if (!state.round || msg.round !== state.round.round) return state;
      return {
        ...state,
        round: { ...state.round, submitted: msg.amount, acked: true },
      };
    }
    case "ROUND_RESULT":
      return {
        ...state,
        lastResult: msg,
        cumulativeTenths: msg.cumulative_tenths,
      };
    case "GAME_END":
      return { ...state, screen: "ended", end: msg, cumulativeTenths: msg.points_tenths };
    case "SNAPSHOT":
      return applyView(state, msg.view);
    case "ERROR":
      if (msg.code === "SESSION_ABORTED") {
        return { ...state, screen: "aborted", banner: msg.detail };
      }
      return { ...state, banner: `${msg.code}: ${msg.detail}` };
  }
}

/** Lock the input as soon as the user submits; the ack confirms later. */
export function markSubmitted(state: AppState, amount: number): AppState {
  if (!state.round || state.round.submitted !== null) return state;
  return { ...state, round: { ...state.round, submitted: amount } };
}

export function connectionLost(state: AppState): AppState {
  return { ...state, banner: "Connection lost; rejoining..." };
}

export function connectionRestored(state: AppState): AppState {
  return { ...state, banner: null };
}

// -- derived view helpers ----------------------------------------------------

export function waitingMessage(state: AppState): string {
  if (!state.waiting) return "Waiting for players...";
  const remaining = state.waiting.needed - state.waiting.filled;
  if (state.waiting.gameStarting || remaining <= 0) {
    return "All positions filled. The game is about to begin!";
  }
  const plural = remaining === 1 ? "player" : "players";
  return `Waiting for ${remaining} more ${plural} (${state.waiting.filled} of ${state.waiting.needed} ready)`;
}

export function paymentSummary(state: AppState): string | null {
  if (!state.end) return null;
  const { points, point_value, base_pay, dollars } = state.end;
  return `${points} points x $${point_value} + $${base_pay} base = $${dollars}`;
}

export function inputLocked(state: AppState): boolean {
  return state.round !== null && state.round.submitted !== null;
}
