/**
 * DOM rendering: a pure projection of AppState into the #app element.
 * All interaction is routed through the handlers object; nothing in here
 * owns state or timing.
 */

import { Countdown } from "./countdown.js";
import {
  inputLocked,
  paymentSummary,
  waitingMessage,
  type AppState,
} from "./state.js";

export interface UiHandlers {
  onTermsAgree(): void;
  onQuizSubmit(answers: number[]): void;
  onContribute(raw: string): void;
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function render(
  root: HTMLElement,
  state: AppState,
  handlers: UiHandlers,
  countdown: Countdown
): void {
  root.textContent = "";

  if (state.banner) {
    root.appendChild(el("div", "banner", state.banner));
  }

  switch (state.screen) {
    case "connecting":
      root.appendChild(el("p", "status", "Connecting to the experiment server..."));
      return;

    case "terms": {
      const pre = el("pre", "terms-text", state.terms ?? "");
      const button = el("button", "agree", "I Agree") as HTMLButtonElement;
      button.id = "agree";
      button.onclick = () => handlers.onTermsAgree();
      root.append(el("h1", "title", "Terms of Participation"), pre, button);
      return;
    }

    case "quiz": {
      if (!state.quiz) return;
      root.appendChild(el("h1", "title", "Instructions"));
      root.appendChild(el("pre", "instructions", state.quiz.instructions));
      root.appendChild(el("h2", "subtitle", "Comprehension quiz"));
      if (state.quiz.outcome === "retry") {
        root.appendChild(
          el(
            "div",
            "quiz-retry",
            `Some answers were not correct (${state.quiz.wrong.join(", ")}). ` +
              "You have one more chance on those questions."
          )
        );
      }
      const form = el("form", "quiz-form") as HTMLFormElement;
      const inputs: HTMLInputElement[] = [];
      state.quiz.questions.forEach((q, i) => {
        const row = el("label", "quiz-row", `${i + 1}. ${q.prompt} `);
        const input = el("input", "quiz-answer") as HTMLInputElement;
        input.name = q.id;
        input.inputMode = "decimal";
        row.appendChild(input);
        inputs.push(input);
        form.appendChild(row);
      });
      const submit = el("button", "quiz-submit", "Submit answers") as HTMLButtonElement;
      submit.type = "submit";
      form.appendChild(submit);
      form.onsubmit = (event) => {
        event.preventDefault();
        handlers.onQuizSubmit(inputs.map((i) => Number(i.value)));
      };
      root.appendChild(form);
      return;
    }

    case "locked_out":
      root.appendChild(el("h1", "title", "Quiz not passed"));
      root.appendChild(
        el(
          "p",
          "status",
          "A question was answered incorrectly twice, so you cannot join this game."
        )
      );
      return;

    case "waiting":
      root.appendChild(el("h1", "title", "Waiting room"));
      root.appendChild(el("p", "waiting-status", waitingMessage(state)));
      return;

    case "round": {
      const round = state.round;
      if (!round) return;
      root.appendChild(el("h1", "title", `Round ${round.round}`));
      const clock = el("div", "countdown");
      clock.id = "countdown";
      clock.textContent = `${countdown.remainingSeconds(Date.now())}s remaining`;
      root.appendChild(clock);
      root.appendChild(
        el(
          "p",
          "endowment",
          `Your endowment this round: ${round.endowment} points. ` +
            `Contribute a whole number from 0 to ${round.endowment}.`
        )
      );

      const form = el("form", "contribute-form") as HTMLFormElement;
      const input = el("input", "contribution") as HTMLInputElement;
      input.id = "contribution";
      input.inputMode = "numeric";
      const submit = el("button", "submit", "Submit") as HTMLButtonElement;
      submit.type = "submit";
      const locked = inputLocked(state);
      input.disabled = locked;
      submit.disabled = locked;
      if (locked && round.submitted !== null && round.submitted >= 0) {
        input.value = String(round.submitted);
      }
      form.append(input, submit);
      form.onsubmit = (event) => {
        event.preventDefault();
        handlers.onContribute(input.value);
      };
      root.appendChild(form);
      if (locked) {
        root.appendChild(
          el("p", "locked-note", "Contribution submitted; it cannot be changed.")
        );
      }

      if (state.lastResult) {
        const feedback = el("div", "feedback");
        feedback.appendChild(
          el(
            "p",
            "own-last",
            `Last round you contributed ${state.lastResult.own} points.`
          )
        );
        const list = el("ul", "neighbors");
        for (const n of state.lastResult.neighbors) {
          list.appendChild(el("li", "neighbor", `${n.label}: ${n.value} points`));
        }
        feedback.appendChild(list);
        root.appendChild(feedback);
      }
      root.appendChild(
        el(
          "p",
          "cumulative",
          `Cumulative payoff: ${(state.cumulativeTenths / 10).toFixed(1)} points`
        )
      );
      return;
    }

    case "ended": {
      root.appendChild(el("h1", "title", "Game over"));
      const summary = paymentSummary(state);
      if (state.end && summary) {
        root.appendChild(
          el("p", "points", `You earned ${state.end.points} points.`)
        );
        const pay = el("p", "payment", summary);
        pay.id = "payment";
        root.appendChild(pay);
      }
      return;
    }

    case "aborted":
      root.appendChild(el("h1", "title", "Session ended"));
      root.appendChild(
        el("p", "status", "The session was stopped by the experimenters.")
      );
      return;
  }
}
