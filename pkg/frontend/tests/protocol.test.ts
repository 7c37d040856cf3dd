import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import {
  contributeMessage,
  joinMessage,
  parseServerMessage,
  quizSubmitMessage,
  serverMessageSchema,
  termsAckMessage,
  validContribution,
} from "../src/protocol.js";

const fixturesPath = fileURLToPath(
  new URL("./fixtures/server_messages.json", import.meta.url)
);
const fixtures: Record<string, unknown> = JSON.parse(
  readFileSync(fixturesPath, "utf8")
);

describe("server message schemas", () => {
  it("accept every captured live-server message", () => {
    for (const [type, msg] of Object.entries(fixtures)) {
      const parsed = serverMessageSchema.parse(msg);
      expect(parsed.type).toBe(type);
    }
  });

  it("covers all ten server message types", () => {
    expect(Object.keys(fixtures).sort()).toEqual([
      "CONTRIBUTE_ACK",
      "ERROR",
      "GAME_END",
      "QUIZ",
      "QUIZ_RESULT",
      "ROUND_RESULT",
      "ROUND_START",
      "TERMS",
      "WAITING_STATUS",
      "WELCOME",
    ]);
  });

  it("rejects unknown message types", () => {
    expect(() =>
      parseServerMessage(JSON.stringify({ v: 1, type: "TOPOLOGY_DUMP", edges: [] }))
    ).toThrow();
  });

  it("rejects undeclared extra fields (information-hiding guard)", () => {
    const roundResult = fixtures["ROUND_RESULT"] as Record<string, unknown>;
    const leaky = { ...roundResult, other_player_payoffs: [1, 2, 3] };
    expect(() => serverMessageSchema.parse(leaky)).toThrow();
  });

  it("rejects the wrong protocol version", () => {
    const welcome = fixtures["WELCOME"] as Record<string, unknown>;
    expect(() => serverMessageSchema.parse({ ...welcome, v: 2 })).toThrow();
  });

  it("builds correct client messages", () => {
    expect(joinMessage("s1", "tok")).toEqual({
      v: 1,
      type: "JOIN",
      session_id: "s1",
      token: "tok",
    });
    expect(termsAckMessage()).toEqual({ v: 1, type: "TERMS_ACK" });
    expect(quizSubmitMessage([10, 24, 20, 17, 10, 18]).answers).toHaveLength(6);
    expect(contributeMessage(3, 7)).toEqual({
      v: 1,
      type: "CONTRIBUTE",
      round: 3,
      amount: 7,
    });
  });
});

describe("contribution validation mirrors the server", () => {
  it("accepts whole numbers inside the endowment", () => {
    expect(validContribution("0", 10)).toBe(0);
    expect(validContribution("10", 10)).toBe(10);
    expect(validContribution(" 7 ", 10)).toBe(7);
  });

  it("rejects out-of-range, fractional and junk input", () => {
    expect(validContribution("11", 10)).toBeNull();
    expect(validContribution("-1", 10)).toBeNull();
    expect(validContribution("3.5", 10)).toBeNull();
    expect(validContribution("ten", 10)).toBeNull();
    expect(validContribution("", 10)).toBeNull();
  });
});
