"""Wire protocol, version 1. One JSON object per websocket message.

Every message carries ``v`` (protocol version) and ``type``. The server
is authoritative for all state and timing; clients are pure views.

Client -> server:

    JOIN          {session_id, token}
    TERMS_ACK     {}
    QUIZ_SUBMIT   {answers: [six numbers, quiz order]}
    CONTRIBUTE    {round, amount}

Server -> client:

    WELCOME       {session_id, phase, needed, resume}
    TERMS         {text}
    QUIZ          {instructions, questions: [{id, prompt}]}
    QUIZ_RESULT   {outcome: pass|retry|fail, wrong: [ids]}
    WAITING_STATUS{filled, needed, game_starting}
    ROUND_START   {round, endowment, deadline, duration}
    CONTRIBUTE_ACK{round, amount}
    ROUND_RESULT  {round, own, origin, neighbors: [{label, value}],
                   cumulative_tenths, cumulative_points}
    GAME_END      {points_tenths, points, dollars, point_value, base_pay}
    SNAPSHOT      {view}
    ERROR         {code, detail}

A client only ever sees its own contributions and payoffs plus its k
neighbors' contributions under stable pseudonyms; no message names the
topology, other positions, seed identities, or anyone else's payoff.
"""

from __future__ import annotations

import json

PROTOCOL_VERSION = 1

JOIN = "JOIN"
TERMS_ACK = "TERMS_ACK"
QUIZ_SUBMIT = "QUIZ_SUBMIT"
CONTRIBUTE = "CONTRIBUTE"

WELCOME = "WELCOME"
TERMS = "TERMS"
QUIZ = "QUIZ"
QUIZ_RESULT = "QUIZ_RESULT"
WAITING_STATUS = "WAITING_STATUS"
ROUND_START = "ROUND_START"
CONTRIBUTE_ACK = "CONTRIBUTE_ACK"
ROUND_RESULT = "ROUND_RESULT"
GAME_END = "GAME_END"
SNAPSHOT = "SNAPSHOT"
ERROR = "ERROR"

_CLIENT_SCHEMAS = {
    JOIN: {"session_id": str, "token": str},
    TERMS_ACK: {},
    QUIZ_SUBMIT: {"answers": list},
    CONTRIBUTE: {"round": int, "amount": int},
}

# error codes carried by ERROR messages
E_BAD_MESSAGE = "BAD_MESSAGE"
E_UNSUPPORTED_VERSION = "UNSUPPORTED_VERSION"
E_NOT_FOUND = "SESSION_NOT_FOUND"
E_SESSION_FULL = "SESSION_FULL"
E_ALREADY_JOINED = "ALREADY_JOINED"
E_SESSION_STARTED = "SESSION_STARTED"
E_NOT_ENROLLED = "NOT_ENROLLED"
E_TERMS_REQUIRED = "TERMS_REQUIRED"
E_QUIZ_REQUIRED = "QUIZ_REQUIRED"
E_QUIZ_LOCKED = "QUIZ_LOCKED"
E_OUT_OF_RANGE = "OUT_OF_RANGE"
E_RESUBMISSION = "RESUBMISSION"
E_DEADLINE_PASSED = "DEADLINE_PASSED"
E_BAD_ROUND = "BAD_ROUND"
E_SESSION_ABORTED = "SESSION_ABORTED"


class ProtocolError(Exception):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(detail or code)
        self.code = code
        self.detail = detail or code


def message(msg_type: str, **fields) -> dict:
    return {"v": PROTOCOL_VERSION, "type": msg_type, **fields}


def error_message(code: str, detail: str = "") -> dict:
    return message(ERROR, code=code, detail=detail or code)


def parse_client_message(raw: str) -> dict:
    try:
        msg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(E_BAD_MESSAGE, f"not valid JSON: {exc}") from exc
    if not isinstance(msg, dict):
        raise ProtocolError(E_BAD_MESSAGE, "message must be a JSON object")
    if msg.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(
            E_UNSUPPORTED_VERSION, f"server speaks protocol v{PROTOCOL_VERSION}"
        )
    msg_type = msg.get("type")
    if msg_type not in _CLIENT_SCHEMAS:
        raise ProtocolError(E_BAD_MESSAGE, f"unknown message type {msg_type!r}")
    for field_name, field_type in _CLIENT_SCHEMAS[msg_type].items():
        if field_name not in msg:
            raise ProtocolError(E_BAD_MESSAGE, f"{msg_type} requires {field_name!r}")
        value = msg[field_name]
        if field_type is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ProtocolError(
                    E_BAD_MESSAGE, f"{msg_type}.{field_name} must be an integer"
                )
        elif not isinstance(value, field_type):
            raise ProtocolError(
                E_BAD_MESSAGE,
                f"{msg_type}.{field_name} must be {field_type.__name__}",
            )
    return msg
