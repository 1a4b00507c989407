"""Command-line client: every capability as a subcommand with JSON/CSV
reports and reproducible seeds.

By default the request is handled in-process; with --server URL the same
request is POSTed to a running stablekit service and the response relayed
verbatim.  Exit codes: 0 = ran and produced a report (refutations and
failed checks live IN the report), 1 = mathematical precondition
violation, 2 = I/O, parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from pydantic import ValidationError

from .api import service
from .api.app import ROUTES
from .errors import PreconditionError

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_IO = 2

# subcommand -> how the request model is assembled:
#   "file": --in parsed as one model field; "wrap": --in is the whole payload
_INPUT_SHAPES = {
    "stability": ("polynomial", None),
    "hyperbolicity": (None, None),  # --in carries {"polynomial":..., "direction":...}
    "cone": (None, None),
    "newton": (None, None),
    "pf": (None, None),
    "multiplier": (None, None),
    "matchings": ("weights", None),
    "forests": ("graph", None),
    "sr-audit": ("measure", None),
    "sr-closure": ("measure", None),
    "exclusion": (None, None),
    "detmeasure": ("kernel", None),
    "coupling": (None, None),
    "permanent": ("matrix", None),
    "capacity": ("polynomial", None),
    "gurvits": ("matrix", None),
    "bregman": ("matrix", None),
    "mmcpt": ("matrix", None),
    "bmv": ("a", "b"),
    "aztec": (None, None),
}

_FLAG_FIELDS = {
    "stability": {"trials": "trials", "seed": "seed"},
    "hyperbolicity": {"trials": "trials", "seed": "seed"},
    "multiplier": {"t_max": "n_max"},
    "pf": {"max_minor": "max_minor"},
    "sr-closure": {"seed": "seed", "steps": "length", "trials": "trials"},
    "exclusion": {"steps": "steps"},
    "capacity": {"tol": "tol"},
    "gurvits": {"tol": "tol"},
    "mmcpt": {"trials": "trials", "seed": "seed"},
    "bmv": {"t_max": "n"},
    "aztec": {"t_max": "t_max"},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablekit",
        description="Exact stability, negative dependence and permanent-bound checks.",
    )
    parser.add_argument("subcommand", choices=sorted(ROUTES))
    parser.add_argument("--in", dest="infile", help="primary input JSON file")
    parser.add_argument("--in2", dest="infile2", help="secondary input JSON file")
    parser.add_argument("--out", help="report output path (default: stdout)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--t-max", dest="t_max", type=int, default=8)
    parser.add_argument("--max-minor", dest="max_minor", type=int, default=4)
    parser.add_argument("--steps", type=int, default=64)
    parser.add_argument(
        "--server", help="base URL of a running service; run remotely if given"
    )
    return parser


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _assemble_payload(args: argparse.Namespace) -> dict:
    name = args.subcommand
    primary_key, secondary_key = _INPUT_SHAPES[name]
    payload: dict = {}
    if args.infile:
        data = _load_json(args.infile)
        if primary_key is None:
            payload.update(data)
        else:
            payload[primary_key] = data
    if args.infile2:
        data2 = _load_json(args.infile2)
        if secondary_key is None:
            payload.update(data2)
        else:
            payload[secondary_key] = data2
    for flag, field in _FLAG_FIELDS.get(name, {}).items():
        payload.setdefault(field, getattr(args, flag))
    return payload


def _write_report(report: dict, out: str | None) -> None:
    if out and out.endswith(".csv") and "csv" in report.get("result", {}):
        text = report["result"]["csv"]
    else:
        text = service.render_report(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_remote(server: str, name: str, payload: dict, out: str | None) -> int:
    import httpx

    url = server.rstrip("/") + ROUTES[name]
    try:
        resp = httpx.post(url, json=payload, timeout=600.0)
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if resp.status_code == 200:
        _write_report(resp.json(), out)
        return EXIT_OK
    try:
        detail = resp.json().get("detail")
    except ValueError:
        detail = resp.text
    print(f"error: {detail}", file=sys.stderr)
    # string detail = mathematical precondition; list = request validation
    return EXIT_PRECONDITION if isinstance(detail, str) else EXIT_IO


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = args.subcommand
    os.environ.setdefault("STABLEKIT_THREADS", "1")
    try:
        payload = _assemble_payload(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.server:
        return _run_remote(args.server, name, payload, args.out)

    model, handler = service.HANDLERS[name]
    try:
        request = model(**payload)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        report = handler(request)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        _write_report(report, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
