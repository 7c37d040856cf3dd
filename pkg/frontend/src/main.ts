/**
 * Entry point: wire the socket, the reducer and the renderer together.
 * Session and player identity come from the URL, e.g.
 * index.html?session=cycle-01&token=worker-17&server=ws://host:8000/ws
 */

import { Countdown } from "./countdown.js";
import { render } from "./dom.js";
import {
  contributeMessage,
  quizSubmitMessage,
  termsAckMessage,
  validContribution,
} from "./protocol.js";
import { GameSocket } from "./socket.js";
import {
  applyServerMessage,
  connectionLost,
  connectionRestored,
  initialState,
  markSubmitted,
  type AppState,
} from "./state.js";

const params = new URLSearchParams(window.location.search);
const sessionId = params.get("session") ?? "";
const token = params.get("token") ?? `anon-${Math.random().toString(36).slice(2, 10)}`;
const wsUrl =
  params.get("server") ?? `ws://${window.location.hostname}:8000/ws`;

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

let state: AppState = initialState();
const countdown = new Countdown();

const socket = new GameSocket(wsUrl, sessionId, token, {
  onMessage(msg) {
    if (msg.type === "ROUND_START") {
      countdown.startRound(msg.deadline, msg.duration, Date.now());
    }
    update(applyServerMessage(state, msg));
  },
  onConnectionLost() {
    update(connectionLost(state));
  },
  onConnectionRestored() {
    update(connectionRestored(state));
  },
});

const handlers = {
  onTermsAgree() {
    socket.send(termsAckMessage());
  },
  onQuizSubmit(answers: number[]) {
    socket.send(quizSubmitMessage(answers));
  },
  onContribute(raw: string) {
    if (!state.round || state.round.submitted !== null) return;
    const amount = validContribution(raw, state.round.endowment);
    if (amount === null) {
      update({ ...state, banner: `Enter a whole number from 0 to ${state.round.endowment}` });
      return;
    }
    socket.send(contributeMessage(state.round.round, amount));
    update(markSubmitted({ ...state, banner: null }, amount));
  },
};

function update(next: AppState): void {
  state = next;
  render(root!, state, handlers, countdown);
}

setInterval(() => {
  const clock = document.getElementById("countdown");
  if (clock && state.screen === "round") {
    clock.textContent = `${countdown.remainingSeconds(Date.now())}s remaining`;
  }
}, 250);

update(state);
socket.connect();
