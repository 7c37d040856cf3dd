"""Thin command line client for the admin endpoints."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="netgoods-admin", description="Manage sessions on a running server."
    )
    parser.add_argument("--server", default="http://127.0.0.1:8000")
    sub = parser.add_subparsers(dest="command", required=True)

    create = sub.add_parser("create", help="create a session from a config file")
    create.add_argument("config", help="SessionConfig JSON file")

    for name in ("start", "abort", "status"):
        p = sub.add_parser(name)
        p.add_argument("session_id")

    export = sub.add_parser("export", help="download a session log")
    export.add_argument("session_id")
    export.add_argument("--out", help="output path (default: <session_id>.jsonl)")

    sub.add_parser("list", help="list sessions")

    args = parser.parse_args(argv)
    base = args.server.rstrip("/")

    with httpx.Client(base_url=base, timeout=30.0) as client:
        if args.command == "create":
            config = json.loads(Path(args.config).read_text())
            response = client.post("/admin/sessions", json=config)
        elif args.command == "start":
            response = client.post(f"/admin/sessions/{args.session_id}/start", json={})
        elif args.command == "abort":
            response = client.post(f"/admin/sessions/{args.session_id}/abort")
        elif args.command == "status":
            response = client.get(f"/admin/sessions/{args.session_id}")
        elif args.command == "list":
            response = client.get("/admin/sessions")
        else:  # export
            response = client.get(f"/admin/sessions/{args.session_id}/log")
            if response.status_code == 200:
                out = Path(args.out or f"{args.session_id}.jsonl")
                out.write_text(response.text)
                print(f"wrote {out}")
                return 0

    if response.status_code >= 400:
        print(f"error {response.status_code}: {response.text}", file=sys.stderr)
        return 1
    print(json.dumps(response.json(), indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
