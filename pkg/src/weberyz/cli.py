"""Command line interface.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .arith import ArithError, DiscriminantPair, prime_power_str
from .weilrep import Check

log = logging.getLogger("weberyz")

CACHE_ENV = "WEBERYZ_CACHE_DIR"
FORMATS = ("text", "json", "csv", "md")
DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)
WEIL_SUITES = ("cosets", "dims", "udinv", "repembed", "appendix", "local", "additive", "laws", "compact", "all")


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    prec: int = 512
    order: int = 4
    fmt: str = "text"
    cache_dir: Optional[Path] = None
    verbose: int = 0

    def __post_init__(self) -> None:
        if self.prec < 128:
            raise InvalidInput("precision must be at least 128 bits")
        if self.order < 2:
            raise InvalidInput("series order N must be at least 2")
        if self.fmt not in FORMATS:
            raise InvalidInput(f"unknown format {self.fmt!r}")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "weberyz"


@dataclass
class Report:
    command: str
    inputs: Dict[str, object]
    checks: List[Check] = field(default_factory=list)
    text: List[str] = field(default_factory=list)
    elapsed_ms: int = 0
    raw: bool = False  # text is the whole output outside json (tables)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> Dict[str, object]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "checks": [_jsonable(c.as_dict()) for c in self.checks],
            "elapsed_ms": self.elapsed_ms,
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, int):
        return x
    return str(x)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(), indent=2)
    if report.raw:
        return "\n".join(report.text)
    rows = [report_row(c) for c in report.checks]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "lhs", "rhs"])
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    if fmt == "md":
        lines = ["| name | status | lhs | rhs |", "|---|---|---|---|"]
        lines += [f"| {n} | {s} | {l} | {r} |" for n, s, l, r in rows]
        return "\n".join(report.text + ([""] if report.text else []) + lines)
    lines = list(report.text)
    for n, s, l, r in rows:
        tail = f": {l} = {r}" if l != "" or r != "" else ""
        lines.append(f"{s} {n}{tail}")
    lines.append(f"{'PASS' if report.ok else 'FAIL'} ({len(report.checks)} checks, {report.elapsed_ms} ms)")
    return "\n".join(lines)


def report_row(c: Check) -> List[str]:
    d = c.as_dict()
    return [c.name, c.status, str(d.get("lhs", "")), str(d.get("rhs", ""))]


# ---------------------------------------------------------------------------
# argument helpers


def _pair(args) -> DiscriminantPair:
    try:
        pair = DiscriminantPair(args.d1, args.d2)
    except ArithError as exc:
        raise InvalidInput(str(exc)) from exc
    if not pair.admissible:
        raise InvalidInput(f"{args.d1}, {args.d2}: both must be 1 mod 8 and prime to 3")
    return pair


def _s_values(value: str) -> List[int]:
    if value == "all":
        return list(DIVISORS_24)
    try:
        s = int(value)
    except ValueError as exc:
        raise InvalidInput(f"bad s {value!r}") from exc
    if s not in DIVISORS_24:
        raise InvalidInput(f"s = {s} does not divide 24")
    return [s]


def _d_values(value: str) -> List[int]:
    return _s_values(value)


def _figure_path(path: Optional[str]) -> Optional[Path]:
    return Path(path) if path else None


# ---------------------------------------------------------------------------
# commands


def cmd_classpoly(args, cfg: RunConfig) -> Report:
    from .classpoly import class_polynomial
    from .modeval import InadmissibleDiscriminant
    from .quadratic import InvalidDiscriminant

    try:
        poly = class_polynomial(args.d, args.kind, cfg.prec, cfg.cache_dir)
    except (InadmissibleDiscriminant, InvalidDiscriminant, ValueError) as exc:
        raise InvalidInput(str(exc)) from exc
    rep = Report("classpoly", {"d": args.d, "kind": args.kind})
    rep.text = [str(list(poly.coeffs)), str(poly)]
    rep.checks.append(Check(f"class polynomial of {args.d} ({args.kind})", True,
                            {"coefficients": list(poly.coeffs), "degree": poly.degree}))
    if args.figure:
        from .plotting import plot_class_invariants

        plot_class_invariants(args.d, args.kind, cfg.prec, _figure_path(args.figure))
        rep.text.append(f"figure written to {args.figure}")
    return rep


def cmd_yz_verify(args, cfg: RunConfig) -> Report:
    from .classpoly import yz_lhs
    from .yzlocal import yz_rhs

    pair = _pair(args)
    rep = Report("yz verify", {"d1": pair.d1, "d2": pair.d2, "s": args.s})
    for s in _s_values(args.s):
        lhs = yz_lhs(pair, s, cfg.prec, cfg.cache_dir)
        rhs = yz_rhs(pair, s)
        rep.checks.append(Check(f"f_{s}({pair.d1},{pair.d2})", lhs == rhs,
                                {"lhs": lhs, "rhs": rhs, "factored": prime_power_str(lhs)}))
    return rep


def cmd_yz_table(args, cfg: RunConfig) -> Report:
    from .yzlocal import format_row_latex, table_headers, worked_table

    pair = _pair(args)
    rows = worked_table(pair)
    rep = Report("yz table", {"d1": pair.d1, "d2": pair.d2}, raw=True)
    headers = table_headers()
    cells = [[str(r.a), prime_power_str(r.m), str(r.m % 96)] + [prime_power_str(v) for v in r.values] for r in rows]
    if args.latex:
        rep.text = [format_row_latex(r) for r in rows]
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        w.writerows(cells)
        rep.text = buf.getvalue().rstrip("\n").split("\n")
    else:
        rep.text = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
        rep.text += ["| " + " | ".join(c) + " |" for c in cells]
    rep.checks.append(Check(f"table rows for ({pair.d1},{pair.d2})", True,
                            {"rows": [[r.a, r.m] + list(r.values) for r in rows]}))
    if args.figure:
        from .plotting import plot_worked_table

        plot_worked_table(pair, rows, _figure_path(args.figure))
        rep.text.append(f"figure written to {args.figure}")
    return rep


def cmd_gz_verify(args, cfg: RunConfig) -> Report:
    from .classpoly import gz_lhs
    from .yzlocal import gz_rhs

    pair = _pair(args)
    lhs = gz_lhs(pair, cfg.prec, cfg.cache_dir)
    rhs = gz_rhs(pair)
    rep = Report("gz verify", {"d1": pair.d1, "d2": pair.d2})
    rep.checks.append(Check(f"J({pair.d1},{pair.d2})", lhs == rhs,
                            {"lhs": lhs, "rhs": rhs, "factored": prime_power_str(lhs)}))
    return rep


def cmd_weil(args, cfg: RunConfig) -> Report:
    from . import weilrep

    suites = [s for s in WEIL_SUITES if s not in ("all", "compact")] if args.suite == "all" else [args.suite]
    rep = Report("weil check", {"d": args.d, "suite": args.suite})
    if args.suite in ("compact", "all") and (args.d1 is not None or args.suite == "compact"):
        if args.d1 is None or args.d2 is None:
            raise InvalidInput("the compact suite needs --d1 and --d2")
        try:
            rep.checks += weilrep.compact_check(args.d1, args.d2)
        except ValueError as exc:
            raise InvalidInput(str(exc)) from exc
        rep.inputs.update({"d1": args.d1, "d2": args.d2})
    suites = [s for s in suites if s != "compact"]
    if suites:
        if args.d is None:
            raise InvalidInput("--d is required for this suite")
        for d in _d_values(args.d):
            for suite in suites:
                log.info("weil suite %s, d = %d", suite, d)
                rep.checks += weilrep.run_suite(d, suite)
    return rep


def cmd_borcherds(args, cfg: RunConfig) -> Report:
    from . import qseries

    eps_values = (1, -1) if args.eps == "both" else (int(args.eps),)
    N = args.order if args.order is not None else cfg.order
    if N < 2:
        raise InvalidInput("series order N must be at least 2")
    rep = Report("borcherds check", {"s": args.s, "eps": args.eps, "order": N})
    for s in _s_values(args.s):
        for eps in eps_values:
            rep.checks.append(qseries.blift_check(s, eps, N))
        if args.second_route:
            for eps in eps_values:
                rep.checks.append(qseries.psi_single_check(s, eps, N))
        rep.checks.append(qseries.p_d_check(s))
        rep.checks.append(qseries.pol2_check(s))
    if args.dump:
        lines = []
        for s in _s_values(args.s):
            for eps in eps_values:
                lines.append(f"# s={s} eps={eps:+d} N={N}")
                lines += qseries.weber24s_series(s, eps, N).dump()
        Path(args.dump).write_text("\n".join(lines) + "\n")
        rep.text.append(f"series written to {args.dump}")
    return rep


def cmd_bigcm(args, cfg: RunConfig) -> Report:
    from .classpoly import yz_lhs
    from .yzlocal import bigcm_check, count_identities

    pair = _pair(args)
    rep = Report("bigcm check", {"d1": pair.d1, "d2": pair.d2, "s": args.s})
    for s in _s_values(args.s):
        f_s = yz_lhs(pair, s, cfg.prec, cfg.cache_dir)
        rep.checks.append(bigcm_check(pair, s, f_s))
        counts = count_identities(pair, s)
        rep.checks.append(Check(f"count2/count3 {pair.d1},{pair.d2} s={s}", counts.ok,
                                {"checked": counts.checked}, counts.failures[:5] or None))
    return rep


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    common.add_argument("--prec", type=int, default=512, help="working precision in bits (>= 128)")
    common.add_argument("--cache-dir", default=None, help=f"cache directory (env {CACHE_ENV})")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="weberyz", description="Weber class invariants, resultants of their class polynomials, and the identities behind them.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classpoly", parents=[common], help="class polynomial of a discriminant")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--kind", choices=("weber", "hilbert"), default="weber")
    c.add_argument("--figure", metavar="PATH", help="plot the class invariants (matplotlib)")
    c.set_defaults(func=cmd_classpoly)

    yz = sub.add_parser("yz", help="factorization of f_s(d1, d2)").add_subparsers(dest="action", required=True)
    v = yz.add_parser("verify", parents=[common])
    v.add_argument("--d1", type=int, required=True)
    v.add_argument("--d2", type=int, required=True)
    v.add_argument("--s", default="all")
    v.set_defaults(func=cmd_yz_verify)
    t = yz.add_parser("table", parents=[common])
    t.add_argument("--d1", type=int, required=True)
    t.add_argument("--d2", type=int, required=True)
    t.add_argument("--latex", action="store_true", help="rows in the LaTeX layout")
    t.add_argument("--figure", metavar="PATH", help="plot log F(m) per row (matplotlib)")
    t.set_defaults(func=cmd_yz_table)

    gz = sub.add_parser("gz", help="Gross-Zagier factorization").add_subparsers(dest="action", required=True)
    g = gz.add_parser("verify", parents=[common])
    g.add_argument("--d1", type=int, required=True)
    g.add_argument("--d2", type=int, required=True)
    g.set_defaults(func=cmd_gz_verify)

    weil = sub.add_parser("weil", help="Weil representation checks").add_subparsers(dest="action", required=True)
    w = weil.add_parser("check", parents=[common])
    w.add_argument("--d", default=None, help="divisor of 24 or 'all'")
    w.add_argument("--suite", choices=WEIL_SUITES, default="all")
    w.add_argument("--d1", type=int, default=None)
    w.add_argument("--d2", type=int, default=None)
    w.set_defaults(func=cmd_weil)

    bo = sub.add_parser("borcherds", help="Borcherds product identities").add_subparsers(dest="action", required=True)
    b = bo.add_parser("check", parents=[common])
    b.add_argument("--s", default="all")
    b.add_argument("--eps", choices=("1", "-1", "+1", "both"), default="both")
    b.add_argument("--order", type=int, default=None, help="truncation order N (>= 2)")
    b.add_argument("--second-route", action="store_true", help="also check each Psi_d on its own")
    b.add_argument("--dump", metavar="PATH", help="write the Weber side as 'i/D j/D num/den' lines")
    b.set_defaults(func=cmd_borcherds)

    bc = sub.add_parser("bigcm", help="big CM log identity").add_subparsers(dest="action", required=True)
    k = bc.add_parser("check", parents=[common])
    k.add_argument("--d1", type=int, required=True)
    k.add_argument("--d2", type=int, required=True)
    k.add_argument("--s", default="all")
    k.set_defaults(func=cmd_bigcm)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on unknown flags
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        cache = None if args.no_cache else Path(args.cache_dir) if args.cache_dir else default_cache_dir()
        cfg = RunConfig(prec=args.prec, fmt=args.fmt, cache_dir=cache, verbose=args.verbose)
        start = time.perf_counter()
        report = args.func(args, cfg)
        report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(report, cfg.fmt))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
