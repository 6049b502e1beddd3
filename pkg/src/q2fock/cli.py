"""``q2fock`` command-line interface.

Exit status: 0 on success, 1 on bad input or a domain error (one JSON line
``{"error": ..., "message": ...}`` on stderr), 2 when ``verify`` finds a
failing invariant.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from q2fock import combinatorics as comb
from q2fock import distribution as dist
from q2fock import moments as mom
from q2fock import verify as ver
from q2fock.fock import OperatorWord, TestVector, as_scalar, vacuum_expectation

EXIT_OK, EXIT_ERROR, EXIT_VERIFY = 0, 1, 2
INT64_MAX = 2**63 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return as_scalar(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _real(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"malformed number {text!r}") from exc


def _rstr(x: Fraction) -> str:
    return str(x)


def _count(n: int):
    return n if n <= INT64_MAX else str(n)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# -- subcommands ----------------------------------------------------------------

def cmd_moments(args) -> tuple[str, int]:
    table = mom.moment_table(args.max_n, args.q, args.norm2, args.method)
    if args.format == "csv":
        rows = [(n, _rstr(u), _rstr(v)) for n, (u, v) in enumerate(zip(table.u, table.v))]
        return _dump_csv(("n", "u", "v"), rows), EXIT_OK
    doc = {
        "q": _rstr(table.q),
        "norm2": _rstr(table.norm2),
        "method": args.method,
        "u": [_rstr(x) for x in table.u],
        "v": [_rstr(x) for x in table.v],
    }
    return _dump_json(doc), EXIT_OK


def _load_word(text: str) -> tuple[Fraction, OperatorWord]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"word file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("word document must be a JSON object")
    missing = {"q", "dimension", "vectors", "word"} - doc.keys()
    if missing:
        raise ValueError(f"word document lacks {sorted(missing)}")
    q = as_scalar(doc["q"])
    d = doc["dimension"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValueError("dimension must be a positive integer")
    vectors = [TestVector(as_scalar(c) for c in vec) for vec in doc["vectors"]]
    if not vectors:
        raise ValueError("at least one vector must be registered")
    for v in vectors:
        if v.dimension != d:
            raise ValueError(f"vector {v} does not have dimension {d}")
    letters = []
    for item in doc["word"]:
        if not isinstance(item, list) or len(item) != 2 or item[0] not in ("+", "-"):
            raise ValueError(f"malformed letter {item!r}; expected [\"+\"|\"-\", index]")
        letters.append((1 if item[0] == "+" else -1, item[1]))
    return q, OperatorWord(letters, vectors)


def cmd_vexpect(args) -> tuple[str, int]:
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    q, word = _load_word(text)
    value = vacuum_expectation(word, q)
    if args.format == "csv":
        return _dump_csv(("value",), [(_rstr(value),)]), EXIT_OK
    return json.dumps(_rstr(value)) + "\n", EXIT_OK


_NEEDS_EPSILON = {"pp", "restricted", "theta"}


def _partition_doc(p: comb.PairPartition, with_depth: bool) -> dict:
    doc = {"pairs": [list(pair) for pair in p.pairs]}
    if with_depth:
        doc["depth"] = list(comb.depth_profile(p))
    return doc


def _partition_objects(kind: str, n, e):
    if kind == "eps-plus":
        return [list(s.values) for s in comb.enumerate_epsilon_plus(n)]
    if kind == "eps-plus-star":
        return [list(s.values) for s in comb.enumerate_epsilon_plus_star(n)]
    if kind == "ncpp":
        return [_partition_doc(p, True) for p in comb.enumerate_ncpp(n)]
    if kind == "all-pp":
        return [_partition_doc(p, False) for p in comb.all_pair_partitions(n)]
    if kind == "restricted-union":
        parts = sorted(comb.restricted_union(n), key=comb.PairPartition.sort_key)
        return [_partition_doc(p, False) for p in parts]
    if kind == "pp":
        return [_partition_doc(p, False) for p in comb.enumerate_pp(e)]
    if kind == "restricted":
        return [_partition_doc(p, False) for p in comb.restricted_partitions(e)]
    if kind == "theta":
        return [_partition_doc(comb.ncpp_of_epsilon(e), True)]
    raise ValueError(f"unknown kind {kind!r}")


def _parse_epsilon(text: str) -> comb.EpsilonSequence:
    try:
        values = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise ValueError(f"malformed sign sequence {text!r}") from exc
    return comb.EpsilonSequence(values)


def cmd_partitions(args) -> tuple[str, int]:
    kind = args.count or args.list
    e = None
    if kind in _NEEDS_EPSILON:
        if args.epsilon is None:
            raise ValueError(f"--epsilon is required for {kind}")
        e = _parse_epsilon(args.epsilon)
    elif args.n is None:
        raise ValueError(f"--n is required for {kind}")
    elif args.n < 0:
        raise ValueError("--n must be >= 0")
    if args.count and kind in ("eps-plus", "ncpp") and args.n is not None:
        # counts without materializing the objects
        total = comb.catalan(args.n)
    elif args.count and kind == "pp":
        total = comb.pp_count_formula(e) if e.is_plus else 0
    else:
        objects = _partition_objects(kind, args.n, e)
        total = len(objects)
    if args.count:
        if args.format == "csv":
            return _dump_csv(("kind", "count"), [(kind, total)]), EXIT_OK
        return json.dumps(_count(total)) + "\n", EXIT_OK
    if args.format == "csv":
        rows = [(json.dumps(o, separators=(",", ":")),) for o in objects]
        return _dump_csv((kind,), rows), EXIT_OK
    return _dump_json(objects), EXIT_OK


def _linspace(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + k * step for k in range(n - 1)] + [hi]


def cmd_density(args) -> tuple[str, int]:
    d = dist.field_distribution(args.q, args.norm)
    if args.points < 1:
        raise ValueError("--points must be >= 1")
    edge = 2 * d.norm if d.norm > 0 else 1.0
    lo = -edge if args.from_ is None else args.from_
    hi = edge if args.to is None else args.to
    if hi < lo:
        raise ValueError("--to must not be smaller than --from")
    xs = _linspace(lo, hi, args.points)
    points = [(x, d.density(x)) for x in xs]
    sidecar = {
        "kind": d.kind.value,
        "q": d.q,
        "norm": d.norm,
        "atoms": [{"x": at.x, "w": at.w} for at in d.atoms],
    }
    if args.format == "json":
        sidecar["points"] = [{"x": x, "density": y} for x, y in points]
        return _dump_json(sidecar), EXIT_OK
    target = args.sidecar or (args.out + ".json" if args.out else None)
    if target:
        Path(target).write_text(_dump_json(sidecar))
    return _dump_csv(("x", "density"), [(repr(x), repr(y)) for x, y in points]), EXIT_OK


def cmd_mgf(args) -> tuple[str, int]:
    if args.taylor is not None:
        coeffs = dist.mgf_taylor(args.q, args.norm2, args.taylor)
        if args.format == "csv":
            return _dump_csv(("n", "coefficient"), [(n, _rstr(c)) for n, c in enumerate(coeffs)]), EXIT_OK
        return _dump_json({"coefficients": [_rstr(c) for c in coeffs]}), EXIT_OK
    value = dist.mgf_T(args.q, args.norm2, args.x)
    if args.format == "csv":
        return _dump_csv(("x", "T"), [(repr(float(args.x)), repr(value))]), EXIT_OK
    return _dump_json({"x": float(args.x), "T": value}), EXIT_OK


def _fmt_discrepancy(info) -> str:
    if isinstance(info, float):
        return f"{info:.3e}"
    return str(info)


def cmd_verify(args) -> tuple[str, int]:
    if args.list:
        names = list(ver.REGISTRY)
        if args.format == "csv":
            return _dump_csv(("name", "module"), [(n, ver.REGISTRY[n].module) for n in names]), EXIT_OK
        return _dump_json(names), EXIT_OK
    selected = None
    if args.only:
        selected = [n for n in ver.REGISTRY if any(n.startswith(p) for p in args.only)]
        if not selected:
            raise ValueError(f"no invariant matches {args.only}")
    results = list(ver.run_all(selected, stop_on_failure=not args.keep_going))
    failed = any(not ok for _, ok, _ in results)
    code = EXIT_VERIFY if failed else EXIT_OK
    if args.format == "json":
        doc = [{"name": n, "ok": ok, "discrepancy": _fmt_discrepancy(i)} for n, ok, i in results]
        return _dump_json(doc), code
    if args.format == "csv":
        rows = [(n, "PASS" if ok else "FAIL", _fmt_discrepancy(i)) for n, ok, i in results]
        return _dump_csv(("name", "status", "discrepancy"), rows), code
    lines = [f"{'PASS' if ok else 'FAIL'} {n} discrepancy={_fmt_discrepancy(i)}" for n, ok, i in results]
    return "\n".join(lines) + "\n", code


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--format", choices=("json", "csv"), help="default: csv for density, json otherwise")
    shared.add_argument("--out", help="write the document here instead of stdout")

    parser = _Parser(prog="q2fock", description="(q,2)-Fock space toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moments", parents=[shared], help="vacuum moments u_n and v_n")
    p.add_argument("--q", type=_rational, required=True)
    p.add_argument("--norm2", type=_rational, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--method", choices=("closed", "simulator", "jacobi", "all"), default="closed")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("vexpect", parents=[shared], help="vacuum expectation of an operator word")
    p.add_argument("--file", required=True, help="JSON word document, or - for stdin")
    p.set_defaults(func=cmd_vexpect)

    kinds = ("eps-plus", "eps-plus-star", "ncpp", "all-pp", "restricted-union", "pp", "restricted", "theta")
    p = sub.add_parser("partitions", parents=[shared], help="sign sequences and pair partitions")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--count", choices=kinds)
    mode.add_argument("--list", choices=kinds)
    p.add_argument("--n", type=int)
    p.add_argument("--epsilon", help="comma-separated signs, e.g. -1,-1,1,1")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("density", parents=[shared], help="density grid and atoms of the field law")
    p.add_argument("--q", type=_real, required=True)
    p.add_argument("--norm", type=_real, required=True)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--from", dest="from_", type=_real)
    p.add_argument("--to", type=_real)
    p.add_argument("--sidecar", help="path of the JSON sidecar (CSV output only)")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("mgf", parents=[shared], help="moment-generating function")
    p.add_argument("--q", type=_rational, required=True)
    p.add_argument("--norm2", type=_rational, required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--x", type=_rational)
    which.add_argument("--taylor", type=int, metavar="N")
    p.set_defaults(func=cmd_mgf)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out")
    p.add_argument("--only", action="append", metavar="PREFIX")
    p.add_argument("--keep-going", action="store_true", help="do not stop at the first failure")
    p.add_argument("--list", action="store_true", help="list invariant names and exit")
    p.set_defaults(func=cmd_verify)
    return parser


def _error(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return EXIT_ERROR


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _error("usage", str(exc))
    if args.format is None:
        args.format = "csv" if args.command == "density" else "json"
    try:
        text, code = args.func(args)
    except (ValueError, TypeError, ArithmeticError, KeyError, OSError) as exc:
        return _error(type(exc).__name__, str(exc))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
