"""Command line: ``provn [--json] [--server URL] COMMAND ...``.

Commands run in-process unless ``--server`` points at a running
:mod:`provn.service`, in which case the request goes to its ``/run`` endpoint.
Exit status: 0 success, 2 not derivable or unknown, 1 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request

from . import commands
from .commands import Report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="provn", description="Reflection calculus over arithmetic theories.")
    p.add_argument("--json", action="store_true", help="print the versioned JSON report")
    p.add_argument("--server", metavar="URL", help="send the command to a provn service")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("normalize", help="normal form of a theory expression")
    c.add_argument("expr")

    c = sub.add_parser("ordinal", help="ordinal measure of a theory expression")
    c.add_argument("expr")
    c.add_argument("--measure", default="pi1", help="pi1 or sigma:k (k >= 2)")

    c = sub.add_parser("includes", help="derive A <= B")
    c.add_argument("a")
    c.add_argument("b")

    c = sub.add_parser("conserves", help="derive that A and B share their theorems of a class")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--class", dest="cls", default="Pi1", help="Pi1 or Sigma2")

    c = sub.add_parser("emit", help="print an arithmetized provability or schema formula")
    c.add_argument("kind", help="box, nprov:n, schema or schema:(rfn<n>[:Sigma<k>] | RFN<k> | con)")
    c.add_argument("theory")
    c.add_argument("target")

    c = sub.add_parser("axioms", help="enumerate axiom codes of a numeration")
    c.add_argument("expr")
    c.add_argument("--stage", help="override the progression stage")
    c.add_argument("--max-code", dest="max_code", type=int, default=1000)
    c.add_argument("--fuel", type=int, default=10_000)
    c.add_argument("--candidate", dest="candidates", action="append", default=[],
                   help="an extra code to test beyond the range (repeatable)")

    c = sub.add_parser("eval", help="evaluate a sentence in the standard model")
    c.add_argument("sentence")
    c.add_argument("--fuel", type=int, default=100_000)
    c.add_argument("--qbound", type=int, default=100)
    return p


def _remote(url: str, command: str, args: dict) -> Report:
    body = json.dumps({"command": command, "args": args}).encode()
    req = urllib.request.Request(url.rstrip("/") + "/run", data=body,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        d = json.load(resp)
    return Report(d["exit_code"], d["text"], d["data"])


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    args = {k: v for k, v in vars(ns).items() if k not in ("json", "server", "command")}
    if ns.server:
        try:
            report = _remote(ns.server, ns.command, args)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            print(f"error: cannot reach server {ns.server}: {exc}", file=sys.stderr)
            return 1
    else:
        report = commands.run(ns.command, **args)
    out = json.dumps(report.data, sort_keys=True) if ns.json else report.text
    stream = sys.stderr if report.exit_code == commands.INPUT_ERROR and not ns.json else sys.stdout
    print(out, file=stream)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
