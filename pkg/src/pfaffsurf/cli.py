"""Command-line front end.

Exit codes: 0 success, 1 validation failure (or non-Pfaffian orientation in
``check``), 2 I/O or parse error, 3 cap exceeded.  Errors are reported as a
JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, TextIO

from . import generators
from .complex import CellComplex, PuncturedComplex, euler_and_genus, puncture, validate
from .enumeration import Orientation, brute_force_count, count_pfaffian, enumerate_orientations, is_pfaffian
from .errors import CapExceeded, InvalidComplex, PfaffsurfError, TooLarge
from .gf2 import dump_int
from .incidence import build_system, incidence_matrix, reduce_system
from .matching import (
    DEFAULT_CAP,
    build_match_graph,
    construct,
    enumerate_matchings,
    find_acyclic_matching,
    involution,
    is_acyclic,
    matching_sign,
    select_row_basis,
)
from .selftest import report, run_selftest

EXIT_INVALID, EXIT_IO, EXIT_CAP = 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, extra: dict | None = None):
        super().__init__(message)
        self.code, self.kind, self.extra = code, kind, extra or {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfaffsurf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    source = argparse.ArgumentParser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--fixture", help=f"builtin complex ({', '.join(generators.FIXTURE_NAMES)}, ...)")
    group.add_argument("--input", type=Path, help="complex JSON file")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--output", type=Path, help="write to this file instead of stdout")

    punct = argparse.ArgumentParser(add_help=False)
    punct.add_argument("--puncture", required=True, help='face id to remove, or "all"')

    sub.add_parser("validate", parents=[source, common])
    sub.add_parser("euler", parents=[source, common])
    sub.add_parser("count", parents=[source, punct, common])
    p = sub.add_parser("brute-count", parents=[source, punct, common])
    p.add_argument("--cap", type=int, default=24, help="maximum edge count to sweep")
    sub.add_parser("construct", parents=[source, punct, common])
    p = sub.add_parser("enumerate", parents=[source, punct, common])
    p.add_argument("--limit", type=int, help="maximum number of orientations (required above 2^20)")
    p.add_argument("--out", type=Path, help="JSON-lines file for the orientations")
    p = sub.add_parser("check", parents=[source, punct, common])
    p.add_argument("--orientation", type=Path, required=True)
    p = sub.add_parser("matchings", parents=[source, punct, common])
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--list", action="store_const", dest="mode", const="list")
    mode.add_argument("--signs", action="store_const", dest="mode", const="signs")
    mode.add_argument("--involution-check", action="store_const", dest="mode", const="involution")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p = sub.add_parser("matrix", parents=[source, punct, common])
    p.add_argument("--dump", choices=("incidence", "pfaffian", "reduced"), required=True)
    p = sub.add_parser("selftest", parents=[common])
    p.add_argument("--seed", type=int, default=7)
    return parser


def load_complex(args: argparse.Namespace) -> CellComplex:
    if args.fixture:
        try:
            return generators.fixture(args.fixture)
        except ValueError as exc:
            raise CliError(EXIT_IO, "UnknownFixture", str(exc)) from exc
    try:
        return CellComplex.load(args.input)
    except OSError as exc:
        raise CliError(EXIT_IO, "IOError", str(exc)) from exc
    except (json.JSONDecodeError, InvalidComplex) as exc:
        raise CliError(EXIT_IO, "ParseError", str(exc)) from exc


def require_valid(c: CellComplex) -> None:
    rep = validate(c)
    if not rep.ok:
        raise CliError(EXIT_INVALID, "InvalidComplex", f"{c.name} failed validation", rep.to_dict())


def punctures(c: CellComplex, choice: str) -> list[PuncturedComplex]:
    if choice == "all":
        return [puncture(c, f.id) for f in c.faces]
    try:
        face = int(choice)
    except ValueError as exc:
        raise CliError(EXIT_IO, "ParseError", f"bad --puncture value {choice!r}") from exc
    if not 0 <= face < c.p:
        raise CliError(EXIT_INVALID, "UnknownFace", f"face {face} not in 0..{c.p - 1}")
    return [puncture(c, face)]


def emit(out: TextIO, args: argparse.Namespace, text: str, data: object) -> None:
    out.write((json.dumps(data, sort_keys=True) if args.format == "json" else text) + "\n")


def cmd_validate(args, out) -> int:
    c = load_complex(args)
    rep = validate(c)
    if args.format == "json":
        emit(out, args, "", rep.to_dict())
    else:
        out.write(("ok" if rep.ok else "invalid") + f" {c.name}\n")
        for v in rep.violations:
            out.write(f"violation {v.code}: {v.message} {list(v.ids)}\n")
        for w in rep.warnings:
            out.write(f"warning {w.code}: {w.message} {list(w.ids)}\n")
    return 0 if rep.ok else EXIT_INVALID


def cmd_euler(args, out) -> int:
    c = load_complex(args)
    require_valid(c)
    chi, g = euler_and_genus(c)
    emit(out, args, f"v={c.v} d={c.d} p={c.p} chi={chi} genus={g}",
         {"v": c.v, "d": c.d, "p": c.p, "chi": chi, "genus": g})
    return 0


def _counting(args, out, fn) -> int:
    c = load_complex(args)
    require_valid(c)
    for k in punctures(c, args.puncture):
        n = fn(k)
        emit(out, args, str(n), {"complex": c.name, "puncture": k.removed_face, "count": n})
    return 0


def cmd_count(args, out) -> int:
    return _counting(args, out, count_pfaffian)


def cmd_brute_count(args, out) -> int:
    return _counting(args, out, lambda k: brute_force_count(k, cap=args.cap))


def cmd_construct(args, out) -> int:
    c = load_complex(args)
    require_valid(c)
    for k in punctures(c, args.puncture):
        result = construct(k)
        data = Orientation(result.bits).to_dict(c.name)
        if args.format == "text":
            out.write(f"puncture={k.removed_face} flipped={list(result.flipped)} "
                      f"peel={[list(p) for p in result.peel_order]}\n")
        out.write(json.dumps(data) + "\n")
    return 0


def cmd_enumerate(args, out) -> int:
    c = load_complex(args)
    require_valid(c)
    if args.puncture == "all":
        raise CliError(EXIT_IO, "ParseError", 'enumerate needs a single face id, not "all"')
    (k,) = punctures(c, args.puncture)
    stream = enumerate_orientations(k, args.limit)
    sink = args.out.open("w") if args.out else out
    try:
        for o in stream:
            sink.write(json.dumps(o.to_dict(c.name)) + "\n")
    finally:
        if args.out:
            sink.close()
    emit(out if args.out else sys.stderr, args,
         f"emitted {len(stream)} of {stream.total}{' (truncated)' if stream.truncated else ''}",
         {"emitted": len(stream), "total": stream.total, "truncated": stream.truncated})
    return 0


def cmd_check(args, out) -> int:
    c = load_complex(args)
    require_valid(c)
    try:
        o = Orientation.from_json(args.orientation.read_text())
    except OSError as exc:
        raise CliError(EXIT_IO, "IOError", str(exc)) from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_IO, "ParseError", f"bad orientation file: {exc}") from exc
    verdicts = []
    for k in punctures(c, args.puncture):
        ok = is_pfaffian(k, o)
        verdicts.append(ok)
        emit(out, args, f"puncture={k.removed_face} pfaffian={str(ok).lower()}",
             {"complex": c.name, "puncture": k.removed_face, "pfaffian": ok})
    return 0 if all(verdicts) else EXIT_INVALID


def cmd_matchings(args, out) -> int:
    c = load_complex(args)
    require_valid(c)
    for k in punctures(c, args.puncture):
        g = build_match_graph(k, select_row_basis(k))
        if args.format == "dot":
            out.write(g.to_dot() + "\n")
            out.write(g.to_dot(find_acyclic_matching(g)) + "\n")
            continue
        matchings = enumerate_matchings(g, args.cap)
        mode = args.mode or "list"
        records = []
        for m in matchings:
            rec = {"pairs": [list(p) for p in m.pairs], "acyclic": is_acyclic(g, m)}
            if mode in ("signs", "involution"):
                rec["sign"] = matching_sign(m, k)
            records.append(rec)
        if mode == "involution":
            cyclic = [m for m in matchings if not is_acyclic(g, m)]
            ok = all(
                involution(g, involution(g, m)) == m
                and involution(g, m) != m
                and matching_sign(involution(g, m), k) == -matching_sign(m, k)
                for m in cyclic
            )
            total = sum(matching_sign(m, k) for m in cyclic)
            emit(out, args, f"puncture={k.removed_face} cyclic={len(cyclic)} involution_ok={str(ok).lower()} cyclic_sign_sum={total}",
                 {"puncture": k.removed_face, "cyclic": len(cyclic), "involution_ok": ok, "cyclic_sign_sum": total})
            continue
        if args.format == "json":
            emit(out, args, "", {"puncture": k.removed_face, "r_edges": list(g.r_edges), "matchings": records})
        else:
            out.write(f"puncture={k.removed_face} R={list(g.r_edges)} matchings={len(records)}\n")
            for rec in records:
                sign = f" sign={rec['sign']:+d}" if "sign" in rec else ""
                out.write(f"  {rec['pairs']} acyclic={str(rec['acyclic']).lower()}{sign}\n")
            if mode == "signs":
                out.write(f"  sum={sum(r['sign'] for r in records)}\n")
    return 0


def cmd_matrix(args, out) -> int:
    c = load_complex(args)
    require_valid(c)
    for k in punctures(c, args.puncture):
        if args.dump == "incidence":
            out.write(dump_int(incidence_matrix(k).entries) + "\n")
        elif args.dump == "pfaffian":
            out.write(build_system(k).matrix.dump() + "\n")
        else:
            out.write(reduce_system(build_system(k), k).matrix.dump() + "\n")
    return 0


def cmd_selftest(args, out) -> int:
    results = run_selftest(args.seed)
    if args.format == "json":
        emit(out, args, "", {"seed": args.seed, "checks": [r.__dict__ for r in results]})
    else:
        out.write(report(results, args.seed) + "\n")
    return 0 if all(r.passed for r in results) else EXIT_INVALID


COMMANDS = {
    "validate": cmd_validate,
    "euler": cmd_euler,
    "count": cmd_count,
    "brute-count": cmd_brute_count,
    "construct": cmd_construct,
    "enumerate": cmd_enumerate,
    "check": cmd_check,
    "matchings": cmd_matchings,
    "matrix": cmd_matrix,
    "selftest": cmd_selftest,
}


@contextmanager
def _output(path: Path | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with path.open("w") as fh:
            yield fh


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _output(args.output) as out:
            return COMMANDS[args.command](args, out)
    except CliError as exc:
        _fail(exc.kind, str(exc), exc.extra)
        return exc.code
    except (CapExceeded, TooLarge) as exc:
        _fail(type(exc).__name__, str(exc))
        return EXIT_CAP
    except OSError as exc:
        _fail("IOError", str(exc))
        return EXIT_IO
    except PfaffsurfError as exc:
        _fail(type(exc).__name__, str(exc))
        return EXIT_INVALID


def _fail(kind: str, message: str, extra: dict | None = None) -> None:
    payload = {"error": kind, "message": message, **(extra or {})}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
