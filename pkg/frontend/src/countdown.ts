/**
 * Display-only countdown from server-sent deadlines.
 *
 * The server stamps each round with an absolute deadline and a duration.
 * On receipt, the round is just starting, so `deadline - duration` is the
 * server's "now"; the difference to the local clock is the skew offset.
 * All submission timing remains server-side: a client with a wildly wrong
 * clock still plays fine, its countdown display is simply corrected.
 */

export class Countdown {
  private deadlineMs = 0;
  private offsetMs = 0; // serverNow - clientNow, estimated per round

  startRound(deadlineSeconds: number, durationSeconds: number, clientNowMs: number): void {
    this.deadlineMs = deadlineSeconds * 1000;
    const serverNowMs = (deadlineSeconds - durationSeconds) * 1000;
    this.offsetMs = serverNowMs - clientNowMs;
  }

  /** Whole seconds left in the round, never negative. */
  remainingSeconds(clientNowMs: number): number {
    const serverNowMs = clientNowMs + this.offsetMs;
    return Math.max(0, Math.ceil((this.deadlineMs - serverNowMs) / 1000));
  }

  expired(clientNowMs: number): boolean {
    return this.remainingSeconds(clientNowMs) <= 0;
  }
}
