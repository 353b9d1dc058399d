"""Command-line interface: ``icoding {rate,encode,verify,gen,compare,bench}``.

Exit codes: 0 success, 1 domain error (bad instance, cap exceeded, failed
verification), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from icoding.errors import CapExceededError, IndexCodingError
from icoding.gf import FieldMatrix, next_prime_at_least
from icoding.instance import (
    Instance,
    gen_class_i6,
    gen_class_i7,
    load_instance,
    mais_bound,
    named_instance,
    serialize_instance,
)
from icoding.matching import BinaryMatrix
from icoding.mcd import VERIFY_CAP, mcd, verify_maxrank
from icoding.schemes import (
    fpcc_rate,
    fpumcd_rate,
    icc_rate,
    mds_rate,
    minrank_gf2_bruteforce,
    pcc_rate,
    pumcd_rate,
    recursive_rate,
    scalar_icc_rate,
)
from icoding.umcd import EXHAUSTIVE_MIN, LOWEST_INDEX, TieBreak, run_umcd
from icoding.verify import EXHAUSTIVE_CAP, decodability_report, exhaustive_size


def format_rational(x: Fraction | int) -> str:
    """Exact rendering: ``3``, ``7/2 (3.5)`` or ``10/3 (~3.333333)``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        digits = max(twos, fives)
        scaled = abs(x.numerator) * 10**digits // x.denominator
        sign = "-" if x < 0 else ""
        whole, frac = divmod(scaled, 10**digits)
        return f"{x.numerator}/{x.denominator} ({sign}{whole}.{frac:0{digits}d})"
    return f"{x.numerator}/{x.denominator} (~{float(x):.6f})"


def _table(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows
    )


def _rational_json(x: Fraction | int) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class Scheme:
    label: str
    run: Callable[[Instance, TieBreak], Fraction]


def _umcd(inst: Instance, policy: TieBreak) -> Fraction:
    return Fraction(run_umcd(inst, policy).rate)


SCHEMES: dict[str, Scheme] = {
    "mds": Scheme("MDS", lambda x, _: Fraction(mds_rate(x))),
    "pcc": Scheme("PCC", lambda x, _: Fraction(pcc_rate(x)[0])),
    "scalar-icc": Scheme("scalar ICC", lambda x, _: Fraction(scalar_icc_rate(x)[0])),
    "fpcc": Scheme("FPCC", lambda x, _: fpcc_rate(x)[0]),
    "icc": Scheme("ICC", lambda x, _: icc_rate(x)[0]),
    "recursive": Scheme("recursive", lambda x, _: recursive_rate(x)),
    "mais": Scheme("MAIS bound", lambda x, _: Fraction(mais_bound(x))),
    "umcd": Scheme("UMCD", _umcd),
    "pumcd": Scheme("P-UMCD", lambda x, p: Fraction(pumcd_rate(x, p)[0])),
    "fpumcd": Scheme("FP-UMCD", lambda x, p: fpumcd_rate(x, p)[0]),
    "minrank2": Scheme("minrank GF(2)", lambda x, _: Fraction(minrank_gf2_bruteforce(x))),
}

TABLE_ORDER = ("mds", "pcc", "scalar-icc", "fpcc", "icc", "recursive", "mais", "umcd", "pumcd", "fpumcd")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--instance", metavar="FILE", help="instance file (.ic or .json)")
    g.add_argument("--named", metavar="NAME", help="named instance I1-I5, I8-I10")


def _add_policy(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--tie-break",
        choices=("lowest_index", "seeded", "exhaustive_min", "all"),
        default="lowest_index",
        help="choice among receivers with least side information ('all' = exhaustive_min)",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for --tie-break seeded")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icoding", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rate", help="broadcast rate of one scheme")
    _add_source(p)
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="umcd")
    _add_policy(p)
    p.add_argument("--trace", action="store_true", help="print the UMCD schedule")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("compare", help="table of rates across schemes")
    _add_source(p)
    p.add_argument("--schemes", default=",".join(TABLE_ORDER), help="comma-separated scheme ids")
    _add_policy(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("encode", help="build the UMCD support and an MCD encoding matrix")
    _add_source(p)
    p.add_argument("--q", type=int, help="prime field size (default: next prime >= q_min)")
    p.add_argument("--out", metavar="FILE", help="write the matrix here instead of stdout")
    _add_policy(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="check that a matrix lets every receiver decode")
    _add_source(p)
    p.add_argument("--matrix", metavar="FILE", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gen", help="write a class-I6 or class-I7 instance")
    p.add_argument("--family", choices=("i6", "i7"), required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="UMCD versus baselines on an instance family")
    p.add_argument("--family", choices=("i6", "i7"), required=True)
    p.add_argument("--l-range", required=True, metavar="A..B")
    p.add_argument("--json", action="store_true")
    return parser


def _policy(args: argparse.Namespace) -> TieBreak:
    if args.tie_break in ("all", "exhaustive_min"):
        return EXHAUSTIVE_MIN
    if args.tie_break == "seeded":
        return TieBreak.seeded(args.seed)
    return LOWEST_INDEX


def _source(args: argparse.Namespace) -> Instance:
    return load_instance(args.instance) if args.instance else named_instance(args.named)


def _emit(args: argparse.Namespace, text: str, data: object) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def cmd_rate(args: argparse.Namespace) -> int:
    inst = _source(args)
    policy = _policy(args)
    data: dict[str, object] = {"scheme": args.scheme}
    lines = []
    if args.scheme == "umcd":
        res = run_umcd(inst, policy)
        rate = Fraction(res.rate)
        lines.append(format_rational(rate))
        if policy.kind == "exhaustive_min":
            lines.append(f"branches explored: {res.branches}")
            data["branches"] = res.branches
        if args.trace:
            lines.extend(rd.trace_line() for rd in res.schedule)
            data["schedule"] = [
                {"k": rd.k, "w": rd.chosen, "row": sorted(rd.row), "satisfied": sorted(rd.satisfied)}
                for rd in res.schedule
            ]
    else:
        rate = SCHEMES[args.scheme].run(inst, policy)
        lines.append(format_rational(rate))
    data["rate"] = _rational_json(rate)
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    inst = _source(args)
    policy = _policy(args)
    ids = [s.strip() for s in args.schemes.split(",") if s.strip()]
    unknown = [s for s in ids if s not in SCHEMES]
    if unknown:
        print(f"icoding: error: unknown scheme(s) {', '.join(unknown)}", file=sys.stderr)
        return 2
    rows = []
    for sid in ids:
        try:
            rate = SCHEMES[sid].run(inst, policy)
            cell, value = format_rational(rate), _rational_json(rate)
        except CapExceededError as exc:
            cell, value = f"skipped (cap: {exc})", None
        rows.append((sid, SCHEMES[sid].label, cell, value))
    text = _table([("scheme", "rate")] + [(r[1], r[2]) for r in rows])
    _emit(args, text, [{"scheme": r[0], "rate": r[3], "display": r[2]} for r in rows])
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    inst = _source(args)
    res = run_umcd(inst, _policy(args))
    q = args.q if args.q is not None else next_prime_at_least(res.q_min)
    H = mcd(res.support, q, allow_small_field=args.q is not None)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(H.to_text())
    lines = [f"r={res.rate} q_min={res.q_min} q={q}"]
    lines.extend(rd.trace_line() for rd in res.schedule)
    if not args.out:
        lines.append(H.to_text().rstrip("\n"))
    data = {
        "r": res.rate,
        "q_min": res.q_min,
        "q": q,
        "matrix": [list(row) for row in H.rows],
        "schedule": [
            {"k": rd.k, "w": rd.chosen, "row": sorted(rd.row), "satisfied": sorted(rd.satisfied)}
            for rd in res.schedule
        ],
    }
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _source(args)
    with open(args.matrix, encoding="utf-8") as fh:
        H = FieldMatrix.from_text(fh.read())
    if H.ncols != inst.m:
        raise IndexCodingError(f"matrix has {H.ncols} columns but the instance has m={inst.m}")
    by_rank = decodability_report(inst, H, "rank")
    by_enum = decodability_report(inst, H, "exhaustive")
    lines = [f"q={H.p} r={H.nrows} m={H.ncols}"]
    receivers = []
    all_ok = True
    agree = True
    for i in inst.receivers:
        kr = by_rank.first_prefix(i)
        ke: int | str | None
        if i in by_enum.skipped:
            ke = f"skipped (cap {exhaustive_size(inst, H, i)} > {EXHAUSTIVE_CAP})"
        else:
            ke = by_enum.first_prefix(i)
            agree &= ke == kr
        all_ok &= kr is not None
        lines.append(
            f"receiver {i}: rank={'-' if kr is None else kr} exhaustive={'-' if ke is None else ke}"
        )
        receivers.append({"receiver": i, "rank": kr, "exhaustive": ke})
    pattern = BinaryMatrix.from_rows(
        inst.m, ({i + 1 for i, x in enumerate(row) if x} for row in H.rows)
    )
    maxrank: bool | None = None
    if inst.m <= VERIFY_CAP:
        maxrank = verify_maxrank(pattern, H).ok
        lines.append(f"maxrank: {'pass' if maxrank else 'fail'}")
    else:
        lines.append("maxrank: skipped (cap)")
    lines.append(f"methods agree: {'yes' if agree else 'no'}")
    lines.append(f"all receivers decodable: {'yes' if all_ok else 'no'}")
    data = {
        "receivers": receivers,
        "maxrank": maxrank,
        "methods_agree": agree,
        "all_decodable": all_ok,
    }
    _emit(args, "\n".join(lines), data)
    return 0 if all_ok and agree else 1


def _family(name: str) -> Callable[[int], Instance]:
    return gen_class_i6 if name == "i6" else gen_class_i7


def cmd_gen(args: argparse.Namespace) -> int:
    inst = _family(args.family)(args.l)
    text = inst.to_json() + "\n" if args.json else serialize_instance(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected A..B")
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; need 1 <= A <= B")
    return range(a, b + 1)


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        ls = _parse_range(args.l_range)
    except argparse.ArgumentTypeError as exc:
        print(f"icoding: error: {exc}", file=sys.stderr)
        return 2
    cols = ("recursive",) if args.family == "i6" else ("fpcc", "icc")
    gap_ref = "recursive" if args.family == "i6" else "icc"
    rows = []
    for l in ls:
        inst = _family(args.family)(l)
        cells: dict[str, Fraction | None] = {"umcd": _umcd(inst, LOWEST_INDEX)}
        for c in cols:
            try:
                cells[c] = SCHEMES[c].run(inst, LOWEST_INDEX)
            except CapExceededError:
                cells[c] = None
        ref = cells[gap_ref]
        gap = None if ref is None else ref - cells["umcd"]  # type: ignore[operator]
        rows.append((l, inst.m, cells, gap))

    def show(x: Fraction | None) -> str:
        return "skipped (cap)" if x is None else format_rational(x)

    header = ["l", "m", "UMCD"] + [SCHEMES[c].label for c in cols] + ["gap"]
    table = [header] + [
        [str(l), str(m), show(cells["umcd"])] + [show(cells[c]) for c in cols] + [show(gap)]
        for l, m, cells, gap in rows
    ]
    data = [
        {
            "l": l,
            "m": m,
            **{k: (None if v is None else _rational_json(v)) for k, v in cells.items()},
            "gap": None if gap is None else _rational_json(gap),
        }
        for l, m, cells, gap in rows
    ]
    _emit(args, _table(table), data)
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "rate": cmd_rate,
    "compare": cmd_compare,
    "encode": cmd_encode,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (IndexCodingError, OSError, ValueError) as exc:
        print(f"icoding: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
