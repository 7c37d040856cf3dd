import { describe, expect, it } from "vitest";

import { Countdown } from "../src/countdown.js";

describe("countdown", () => {
  it("counts down from the round duration", () => {
    const countdown = new Countdown();
    const clientNow = 50_000;
    countdown.startRound(1_000_030, 30, clientNow); // deadline 30s after server now
    expect(countdown.remainingSeconds(clientNow)).toBe(30);
    expect(countdown.remainingSeconds(clientNow + 12_000)).toBe(18);
    expect(countdown.remainingSeconds(clientNow + 30_000)).toBe(0);
  });

  it("never goes negative", () => {
    const countdown = new Countdown();
    countdown.startRound(1_000_030, 30, 0);
    expect(countdown.remainingSeconds(10_000_000)).toBe(0);
    expect(countdown.expired(10_000_000)).toBe(true);
  });

  it("is immune to client clock skew", () => {
    const countdown = new Countdown();
    // the client clock is three hours ahead of the server; the display
    // still starts at the full round duration because only the server
    // deadline and duration matter
    const skewedClientNow = (1_000_000 + 3 * 3600) * 1000;
    countdown.startRound(1_000_045, 45, skewedClientNow);
    expect(countdown.remainingSeconds(skewedClientNow)).toBe(45);
    expect(countdown.remainingSeconds(skewedClientNow + 44_000)).toBe(1);
  });
});
