/**
 * Reconnecting websocket transport.
 *
 * The session id and token are remembered so every (re)connection
 * replays the JOIN automatically; the server resumes the same enrollment
 * and pushes a snapshot, so the UI converges without user action.
 */

import { joinMessage, parseServerMessage, type ClientMessage, type ServerMessage } from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface GameSocketHandlers {
  onMessage: (msg: ServerMessage) => void;
  onConnectionLost: () => void;
  onConnectionRestored: () => void;
}

const RECONNECT_BASE_MS = 500;
const RECONNECT_MAX_MS = 8000;

export class GameSocket {
  private socket: SocketLike | null = null;
  private attempts = 0;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly sessionId: string,
    private readonly token: string,
    private readonly handlers: GameSocketHandlers,
    private readonly factory: SocketFactory = (u) =>
      new WebSocket(u) as unknown as SocketLike
  ) {}

  connect(): void {
    if (this.closed) return;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
      this.handlers.onConnectionRestored();
      socket.send(JSON.stringify(joinMessage(this.sessionId, this.token)));
    };
    socket.onmessage = (event) => {
      let msg: ServerMessage;
      try {
        msg = parseServerMessage(event.data);
      } catch {
        return; // nonconforming frames are dropped, never rendered
      }
      this.handlers.onMessage(msg);
    };
    socket.onclose = () => {
      this.socket = null;
      if (this.closed) return;
      this.handlers.onConnectionLost();
      const delay = Math.min(
        RECONNECT_MAX_MS,
        RECONNECT_BASE_MS * 2 ** this.attempts
      );
      this.attempts += 1;
      this.timer = setTimeout(() => this.connect(), delay);
    };
  }

  send(msg: ClientMessage): void {
    this.socket?.send(JSON.stringify(msg));
  }

  close(): void {
    this.closed = true;
    if (this.timer) clearTimeout(this.timer);
    this.socket?.close();
  }
}
