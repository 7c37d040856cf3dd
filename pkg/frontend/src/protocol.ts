/**
 * Wire protocol v1, client side.
 *
 * Every inbound message is validated against a strict schema before it
 * reaches the state machine, so the client can only ever display fields
 * the protocol actually defines: its own data plus neighbor values under
 * pseudonymous labels. Unknown message types and unexpected extra fields
 * are rejected, not silently rendered.
 */

import { z } from "zod";

export const PROTOCOL_VERSION = 1;

const base = { v: z.literal(PROTOCOL_VERSION) };

const clientView = z
  .object({
    phase: z.string(),
    round: z.number().int(),
    seconds_remaining: z.number(),
    endowment: z.number().int(),
    own_last_contribution: z.number().int().nullable(),
    submitted_this_round: z.boolean(),
    neighbor_contributions: z.array(
      z.object({ label: z.string(), value: z.number().int().nullable() }).strict()
    ),
    cumulative_tenths: z.number().int(),
    cumulative_points: z.number(),
  })
  .strict();

export const welcomeSchema = z
  .object({
    ...base,
    type: z.literal("WELCOME"),
    session_id: z.string(),
    phase: z.string(),
    needed: z.number().int(),
    resume: clientView.nullable(),
  })
  .strict();

export const termsSchema = z
  .object({ ...base, type: z.literal("TERMS"), text: z.string() })
  .strict();

export const quizSchema = z
  .object({
    ...base,
    type: z.literal("QUIZ"),
    instructions: z.string(),
    questions: z.array(z.object({ id: z.string(), prompt: z.string() }).strict()),
  })
  .strict();

export const quizResultSchema = z
  .object({
    ...base,
    type: z.literal("QUIZ_RESULT"),
    outcome: z.enum(["pass", "retry", "fail"]),
    wrong: z.array(z.string()),
  })
  .strict();

export const waitingStatusSchema = z
  .object({
    ...base,
    type: z.literal("WAITING_STATUS"),
    filled: z.number().int(),
    needed: z.number().int(),
    game_starting: z.boolean(),
  })
  .strict();

export const roundStartSchema = z
  .object({
    ...base,
    type: z.literal("ROUND_START"),
    round: z.number().int(),
    endowment: z.number().int(),
    deadline: z.number(),
    duration: z.number(),
  })
  .strict();

export const contributeAckSchema = z
  .object({
    ...base,
    type: z.literal("CONTRIBUTE_ACK"),
    round: z.number().int(),
    amount: z.number().int(),
  })
  .strict();

export const roundResultSchema = z
  .object({
    ...base,
    type: z.literal("ROUND_RESULT"),
    round: z.number().int(),
    own: z.number().int(),
    origin: z.string(),
    neighbors: z.array(
      z.object({ label: z.string(), value: z.number().int() }).strict()
    ),
    cumulative_tenths: z.number().int(),
    cumulative_points: z.number(),
  })
  .strict();

export const gameEndSchema = z
  .object({
    ...base,
    type: z.literal("GAME_END"),
    points_tenths: z.number().int(),
    points: z.number(),
    dollars: z.string(),
    point_value: z.string(),
    base_pay: z.string(),
  })
  .strict();

export const snapshotSchema = z
  .object({ ...base, type: z.literal("SNAPSHOT"), view: clientView })
  .strict();

export const errorSchema = z
  .object({ ...base, type: z.literal("ERROR"), code: z.string(), detail: z.string() })
  .strict();

export const serverMessageSchema = z.discriminatedUnion("type", [
  welcomeSchema,
  termsSchema,
  quizSchema,
  quizResultSchema,
  waitingStatusSchema,
  roundStartSchema,
  contributeAckSchema,
  roundResultSchema,
  gameEndSchema,
  snapshotSchema,
  errorSchema,
]);

export type ServerMessage = z.infer<typeof serverMessageSchema>;
export type ClientView = z.infer<typeof clientView>;
export type RoundResult = z.infer<typeof roundResultSchema>;
export type GameEnd = z.infer<typeof gameEndSchema>;
export type QuizQuestionView = z.infer<typeof quizSchema>["questions"][number];

export function parseServerMessage(raw: string): ServerMessage {
  return serverMessageSchema.parse(JSON.parse(raw));
}

// -- outbound ---------------------------------------------------------------

export type ClientMessage =
  | { v: 1; type: "JOIN"; session_id: string; token: string }
  | { v: 1; type: "TERMS_ACK" }
  | { v: 1; type: "QUIZ_SUBMIT"; answers: number[] }
  | { v: 1; type: "CONTRIBUTE"; round: number; amount: number };

export function joinMessage(sessionId: string, token: string): ClientMessage {
  return { v: 1, type: "JOIN", session_id: sessionId, token };
}

export function termsAckMessage(): ClientMessage {
  return { v: 1, type: "TERMS_ACK" };
}

export function quizSubmitMessage(answers: number[]): ClientMessage {
  return { v: 1, type: "QUIZ_SUBMIT", answers };
}

export function contributeMessage(round: number, amount: number): ClientMessage {
  return { v: 1, type: "CONTRIBUTE", round, amount };
}

/** Mirror of the server-side check: integers from zero to the endowment. */
export function validContribution(raw: string, endowment: number): number | null {
  if (!/^\d+$/.test(raw.trim())) return null;
  const value = Number(raw.trim());
  return Number.isInteger(value) && value >= 0 && value <= endowment ? value : null;
}
