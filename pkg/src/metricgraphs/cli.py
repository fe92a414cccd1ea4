"""Command-line client for the service.

Every subcommand marshals its flags into one HTTP request against the
FastAPI app (in-process by default; --server points at a remote instance),
prints the JSON payload, and exits with a code describing the outcome:

    0   success
    2   domain error (bad arguments, violated precondition, unsupported case)
    3   capacity error (budget or feasibility refusal)
    4   a verification command found a counterexample
    64  usage error

Payloads are byte-stable for fixed flags; `count` additionally needs
--no-timing to suppress the elapsed-time field.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import httpx


@dataclass
class CommandResult:
    command: str
    params: dict
    payload: Any
    exit_code: int


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(64)


def _client(server: Optional[str]):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .api.service import app

    return TestClient(app)


def _load_graph(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _parse_shared(text: str) -> list[list[int]]:
    if not text:
        return []
    out = []
    for chunk in text.split(","):
        left, _, right = chunk.partition("=")
        out.append([int(left), int(right)])
    return out


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _error_exit(detail: Any) -> int:
    if isinstance(detail, dict):
        kind = detail.get("kind")
        sys.stderr.write("%s error: %s\n" % (kind, detail.get("message")))
        if kind == "capacity":
            return 3
        return 2
    sys.stderr.write("request error: %s\n" % json.dumps(detail))
    return 2


def _post(client, path: str, body: dict) -> tuple[Any, int]:
    """POST and return (payload, exit_code); payload is None on error."""
    response = client.post(path, json=body)
    if response.status_code == 200:
        return response.json(), 0
    try:
        detail = response.json().get("detail")
    except Exception:
        detail = {"kind": "domain", "message": response.text}
    return None, _error_exit(detail)


def _print_json(payload: Any, out: Optional[str]) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def build_parser() -> _Parser:
    parser = _Parser(prog="metricgraphs", description=__doc__.splitlines()[0])
    parser.add_argument("--server", help="base URL of a running service; default in-process")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, **kwargs) -> argparse.ArgumentParser:
        return sub.add_parser(name, **kwargs)

    p = add("count", help="exact counts and ratio for one (r, n)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")

    p = add("enumerate", help="stream every metric coloring")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--format", choices=["jsonl", "json"], default="jsonl")
    p.add_argument("--out")

    p = add("sample", help="seeded uniform samples by rejection")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("stats", help="structure statistics for one (r, n)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--epsilon", default="1/10")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--out")

    p = add("membership", help="structured-class membership certificate")
    p.add_argument("--in", dest="infile", required=True, help="coloring JSON file")
    p.add_argument("--out")

    p = add("nearest", help="edit distance to the structured class")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--budget", type=int, default=10, help="partition search vertex limit")
    p.add_argument("--out")

    p = add("components", help="link-color component decomposition")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")

    p = add("verify", help="exhaustive fact checks")
    vsub = p.add_subparsers(dest="check", metavar="CHECK")
    for name in ("size-lemma", "triangle-class", "importantcor"):
        v = vsub.add_parser(name)
        v.add_argument("--r-max", type=int, default=5)
        v.add_argument("--r-min", type=int, default=3)
        v.add_argument("--out")
    v = vsub.add_parser("weight-bound")
    v.add_argument("--r", type=int, required=True)
    v.add_argument("--t", type=int, required=True)
    v.add_argument("--out")
    for name in ("amalgam-mr", "amalgam-cr"):
        v = vsub.add_parser(name)
        v.add_argument("--r", type=int, required=True)
        v.add_argument("--max-size", type=int, default=3)
        v.add_argument("--out")

    p = add("inject", help="plant the gadget in a structured coloring")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")

    p = add("preimages", help="collision report of the gadget-planting map")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--out")

    p = add("gadget-h", help="the planted 4-vertex coloring")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")

    p = add("amalgamate", help="amalgamate two colorings over a shared part")
    p.add_argument("--mode", choices=["cr", "mr"], required=True)
    p.add_argument("--a", required=True, help="first coloring JSON file")
    p.add_argument("--b", required=True, help="second coloring JSON file")
    p.add_argument("--shared", default="", help="pairs like 1=1,2=3 (a-vertex=b-vertex)")
    p.add_argument("--out")

    p = add("axiom-eval", help="evaluate an extension axiom on one coloring")
    p.add_argument("--axiom", required=True, help="axiom JSON file {base, extended}")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")

    p = add("axiom-curve", help="empirical satisfaction curve of an axiom")
    p.add_argument("--axiom", required=True)
    p.add_argument("--family", choices=["metric", "cr"], default="cr")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")

    p = add("matching-bound", help="matching families and their total size")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")

    p = add("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    p = add("openapi", help="print the service schema")
    p.add_argument("--out")

    return parser


def run(argv: Sequence[str]) -> CommandResult:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("command",)}
    command = args.command
    if command is None:
        parser.print_usage(sys.stderr)
        return CommandResult("", params, None, 64)

    if command == "serve":
        import uvicorn

        from .api.service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return CommandResult(command, params, None, 0)

    if command == "openapi":
        from .api.service import app

        _print_json(app.openapi(), args.out)
        return CommandResult(command, params, None, 0)

    client = _client(args.server)
    out = getattr(args, "out", None)

    if command == "count":
        body = {
            "r": args.r,
            "n": args.n,
            "budget": args.budget,
            "threads": args.threads,
            "no_timing": args.no_timing,
        }
        payload, code = _post(client, "/count", body)
        if code == 0:
            if args.format == "csv":
                elapsed = payload["elapsed_ms"]
                ratio_num, ratio_den = payload["ratio_c_over_m"].split("/")
                row = "%d,%d,%d,%d,%.12g,%s" % (
                    payload["r"],
                    payload["n"],
                    payload["m_count"],
                    payload["c_count"],
                    int(ratio_num) / int(ratio_den),
                    "" if elapsed is None else "%.3f" % elapsed,
                )
                _emit("r,n,m_count,c_count,ratio,elapsed_ms\n" + row + "\n", out)
            else:
                _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "enumerate":
        body = {"r": args.r, "n": args.n, "budget": args.budget, "limit": args.limit}
        response = client.post("/enumerate", json=body)
        if response.status_code != 200:
            detail = response.json().get("detail")
            return CommandResult(command, params, None, _error_exit(detail))
        text = response.text
        if args.format == "json":
            items = [json.loads(line) for line in text.splitlines() if line]
            _print_json(items, out)
            return CommandResult(command, params, items, 0)
        _emit(text, out)
        return CommandResult(command, params, text, 0)

    if command == "sample":
        body = {"r": args.r, "n": args.n, "count": args.samples, "seed": args.seed}
        payload, code = _post(client, "/sample", body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "stats":
        body = {
            "r": args.r,
            "n": args.n,
            "mode": args.mode,
            "epsilon": args.epsilon,
            "samples": args.samples,
            "seed": args.seed,
            "budget": args.budget,
        }
        payload, code = _post(client, "/stats", body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command in ("membership", "components", "inject"):
        body = {"graph": _load_graph(args.infile)}
        payload, code = _post(client, "/" + command, body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "nearest":
        body = {"graph": _load_graph(args.infile), "limit": args.budget}
        payload, code = _post(client, "/nearest", body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "verify":
        if args.check is None:
            parser.print_usage(sys.stderr)
            return CommandResult(command, params, None, 64)
        if args.check in ("size-lemma", "triangle-class", "importantcor"):
            body = {"r_max": args.r_max, "r_min": args.r_min}
        elif args.check == "weight-bound":
            body = {"r": args.r, "t": args.t}
        else:
            body = {"r": args.r, "max_size": args.max_size}
        payload, code = _post(client, "/verify/" + args.check, body)
        if code == 0:
            _print_json(payload, args.out)
            if payload["counterexamples"] > 0:
                code = 4
        return CommandResult(command, params, payload, code)

    if command == "preimages":
        body = {"r": args.r, "n": args.n, "budget": args.budget}
        payload, code = _post(client, "/preimages", body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "gadget-h":
        payload, code = _post(client, "/gadget-h", {"r": args.r})
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "amalgamate":
        body = {
            "mode": args.mode,
            "a": _load_graph(args.a),
            "b": _load_graph(args.b),
            "shared": _parse_shared(args.shared),
        }
        payload, code = _post(client, "/amalgamate", body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "axiom-eval":
        body = {"axiom": _load_graph(args.axiom), "graph": _load_graph(args.infile)}
        payload, code = _post(client, "/axiom/eval", body)
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "axiom-curve":
        body = {
            "axiom": _load_graph(args.axiom),
            "family": args.family,
            "n_min": args.n_min,
            "n_max": args.n_max,
            "samples": args.samples,
            "seed": args.seed,
        }
        payload, code = _post(client, "/axiom/curve", body)
        if code == 0:
            if args.format == "csv":
                lines = ["n,estimate,ci_low,ci_high,samples"]
                for point in payload["points"]:
                    lines.append(
                        "%d,%.6f,%.6f,%.6f,%d"
                        % (
                            point["n"],
                            point["estimate"],
                            point["ci_low"],
                            point["ci_high"],
                            point["samples"],
                        )
                    )
                _emit("\n".join(lines) + "\n", out)
            else:
                _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    if command == "matching-bound":
        payload, code = _post(client, "/matching-bound", {"r": args.r, "n": args.n})
        if code == 0:
            _print_json(payload, out)
        return CommandResult(command, params, payload, code)

    raise AssertionError("unhandled command %r" % command)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        result = run(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    except FileNotFoundError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
