"""HTTP/WebSocket service: participant protocol plus admin endpoints.

Participants connect to ``/ws`` and speak the versioned message protocol
(see protocol.py). Administrators manage sessions over REST:

    POST /admin/sessions                create from a SessionConfig body
    GET  /admin/sessions                list live sessions
    GET  /admin/sessions/{id}           one session's status
    POST /admin/sessions/{id}/start     begin now, bots fill empty seats
    POST /admin/sessions/{id}/abort     stop and notify clients
    GET  /admin/sessions/{id}/log       export the session log (JSONL)

Instruction documents are also served read-only under /content/*.
"""

from __future__ import annotations

import argparse

from fastapi import FastAPI, Response, WebSocket, WebSocketDisconnect

from .. import game
from ..config import SessionConfig
from . import content, protocol as proto
from .engine import LiveSession, Player, SessionRegistry


def create_app(time_scale: float = 1.0, early_close: bool = False) -> FastAPI:
    app = FastAPI(title="netgoods experiment server")
    registry = SessionRegistry(time_scale=time_scale, early_close=early_close)
    app.state.registry = registry

    # -------------------------------------------------------------- content

    @app.get("/content/terms")
    def get_terms():
        return {"text": content.terms_text(game.GameParams())}

    @app.get("/content/instructions")
    def get_instructions():
        return {"text": content.instructions_text(game.GameParams())}

    @app.get("/content/quiz")
    def get_quiz():
        questions = content.quiz_questions(game.GameParams())
        return {"questions": [{"id": q.id, "prompt": q.prompt} for q in questions]}

    # -------------------------------------------------------------- admin

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.post("/admin/sessions")
    def create_session(config: dict):
        try:
            session = registry.create(SessionConfig.from_dict(config))
        except proto.ProtocolError as exc:
            return Response(exc.detail, status_code=409)
        except Exception as exc:
            return Response(f"bad config: {exc}", status_code=400)
        return session.status()

    @app.get("/admin/sessions")
    def list_sessions():
        return [s.status() for s in registry.sessions.values()]

    @app.get("/admin/sessions/{session_id}")
    def session_status(session_id: str):
        try:
            return registry.get(session_id).status()
        except proto.ProtocolError as exc:
            return Response(exc.detail, status_code=404)

    @app.post("/admin/sessions/{session_id}/start")
    async def start_session(session_id: str, body: dict | None = None):
        try:
            session = registry.get(session_id)
            await session.force_start((body or {}).get("fill_strategy"))
        except proto.ProtocolError as exc:
            code = 404 if exc.code == proto.E_NOT_FOUND else 409
            return Response(exc.detail, status_code=code)
        return session.status()

    @app.post("/admin/sessions/{session_id}/abort")
    async def abort_session(session_id: str):
        try:
            session = registry.get(session_id)
        except proto.ProtocolError as exc:
            return Response(exc.detail, status_code=404)
        await session.abort()
        return session.status()

    @app.get("/admin/sessions/{session_id}/log")
    def export_log(session_id: str):
        try:
            session = registry.get(session_id)
        except proto.ProtocolError as exc:
            return Response(exc.detail, status_code=404)
        import json

        lines = [json.dumps(e, sort_keys=True) for e in session.log.events]
        return Response("\n".join(lines) + "\n", media_type="application/x-ndjson")

    # -------------------------------------------------------------- players

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()

        async def send(msg: dict) -> None:
            await ws.send_json(msg)

        session: LiveSession | None = None
        player: Player | None = None
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = proto.parse_client_message(raw)
                    if msg["type"] == proto.JOIN:
                        if player is not None:
                            raise proto.ProtocolError(proto.E_ALREADY_JOINED)
                        session = registry.get(msg["session_id"])
                        player = await session.join(msg["token"], send)
                    elif player is None or session is None:
                        raise proto.ProtocolError(
                            proto.E_NOT_ENROLLED, "JOIN a session first"
                        )
                    elif msg["type"] == proto.TERMS_ACK:
                        await session.terms_ack(player)
                    elif msg["type"] == proto.QUIZ_SUBMIT:
                        await session.quiz_submit(player, msg["answers"])
                    elif msg["type"] == proto.CONTRIBUTE:
                        await session.contribute(player, msg["round"], msg["amount"])
                except proto.ProtocolError as exc:
                    await send(proto.error_message(exc.code, exc.detail))
        except WebSocketDisconnect:
            pass
        finally:
            if session is not None and player is not None:
                session.disconnect(player)

    return app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="netgoods-server", description="Run the live experiment service."
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument(
        "--time-scale",
        type=float,
        default=1.0,
        help="multiply round durations (0.1 = ten times faster)",
    )
    parser.add_argument(
        "--early-close",
        action="store_true",
        help="close a round as soon as every connected human has submitted",
    )
    args = parser.parse_args(argv)

    import uvicorn

    uvicorn.run(
        create_app(time_scale=args.time_scale, early_close=args.early_close),
        host=args.host,
        port=args.port,
        log_level="warning",
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
