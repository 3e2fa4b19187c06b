"""``regen`` command line: encode, repair, reconstruct, simulate, tables, params-check.

Exit codes: 0 success, 2 parameter error, 3 IO error, 4 protocol error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from ..errors import ParameterError, ProtocolError
from .codecs import CLI_ALIASES, build_codec
from .files import BandwidthLedger, cmd_encode, cmd_reconstruct, cmd_repair
from .manifest import manifest_path
from .simulate import cmd_simulate, parse_script, random_script
from .tables import cmd_tables

EXIT_OK, EXIT_PARAM, EXIT_IO, EXIT_PROTOCOL = 0, 2, 3, 4

log = logging.getLogger("regen")


def _id_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node ids, got {text!r}") from None


def _add_code_args(p: argparse.ArgumentParser, *, required: bool = True) -> None:
    p.add_argument("--code", choices=sorted(CLI_ALIASES), default="nmbr")
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--k", type=int, required=required)
    p.add_argument("--d", type=int, help="repair degree (NMBR); fixed by k for NMSR")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--b", type=int, required=required)


def _manifest_arg(path: str) -> Path:
    p = Path(path)
    return manifest_path(p) if p.is_dir() else p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regen", description="Regenerating-code storage tools.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="split a file into n share files")
    p.add_argument("input")
    _add_code_args(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("repair", help="rebuild one node's share from d helpers")
    p.add_argument("manifest", help="manifest.json or the directory holding it")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--helpers", type=_id_list, required=True)
    p.add_argument("--shares", help="share directory (default: the manifest's)")
    p.add_argument("--out", help="where to write the repaired share (default: share directory)")

    p = sub.add_parser("reconstruct", help="rebuild the file from k nodes")
    p.add_argument("manifest")
    p.add_argument("--nodes", type=_id_list, required=True)
    p.add_argument("--shares")
    p.add_argument("--out", required=True, help="output file")

    p = sub.add_parser("simulate", help="run a failure script against an in-memory cluster")
    _add_code_args(p)
    p.add_argument("--script", help="script file ('-' for stdin); random script if omitted")
    p.add_argument("--events", type=int, default=20)
    p.add_argument("--stripes", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("tables", help="rate and size comparison tables")
    p.add_argument("preset", choices=["table1", "table2", "table3", "table4", "custom"])
    _add_code_args(p, required=False)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("params-check", help="validate parameters and print the derived sizes")
    _add_code_args(p)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run(args: argparse.Namespace) -> int:
    if args.command == "encode":
        man, paths = cmd_encode(args.input, args.code, args.n, args.k, args.d, args.q, args.b, args.out)
        print(f"encoded {man.original_length} bytes into {man.stripe_count} stripe(s), {len(paths)} shares in {args.out}")
        return EXIT_OK

    if args.command == "repair":
        man = _manifest_arg(args.manifest)
        shares = args.shares or man.parent
        path, entry = cmd_repair(man, args.node, args.helpers, shares, args.out)
        print(f"repaired node {args.node} -> {path} ({entry.symbols} symbols downloaded)")
        return EXIT_OK

    if args.command == "reconstruct":
        man = _manifest_arg(args.manifest)
        ledger = BandwidthLedger()
        data = cmd_reconstruct(man, args.nodes, args.shares or man.parent, args.out, ledger)
        print(f"reconstructed {len(data)} bytes -> {args.out} ({ledger.total()} symbols downloaded)")
        return EXIT_OK

    if args.command == "simulate":
        codec = build_codec(args.code, args.n, args.k, args.d, args.q, args.b)
        if args.script:
            fh = sys.stdin if args.script == "-" else open(args.script, encoding="utf-8")
            with fh:
                script = parse_script(fh)
        else:
            script = random_script(codec.n, codec.k, codec.d, args.events, args.seed)
        report = cmd_simulate(codec, script, args.stripes, args.seed)
        for r in report.results:
            status = "ok  " if r.ok else "FAIL"
            print(f"{status} {r.event:<40} {r.symbols:>8} symbols" + (f"  ({r.error})" if r.error else ""))
        print(f"total: repair {report.ledger.total('repair')}, reconstruct {report.ledger.total('reconstruct')}")
        if args.out:
            Path(args.out).write_text(json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8")
        return EXIT_OK if report.ok else EXIT_PROTOCOL

    if args.command == "tables":
        _emit(cmd_tables(args.preset, kind=args.code, n=args.n, k=args.k, d=args.d, b=args.b,
                         fmt=args.format), args.out)
        return EXIT_OK

    codec = build_codec(args.code, args.n, args.k, args.d, args.q, args.b)
    print(f"{codec.kind}: n={codec.n} k={codec.k} d={codec.d} q={codec.q} b={codec.b}")
    print(f"  B={codec.B} alpha={codec.alpha} beta={codec.beta}")
    print(f"  polynomial={list(codec.poly)} exponents={list(codec.exponents)}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except ProtocolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (ParameterError, ValueError) as exc:
        cond = getattr(exc, "condition", None)
        print(f"error: {exc}" + (f" [{cond}]" if cond else ""), file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
