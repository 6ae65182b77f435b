"""Acceptance battery: one PASS/FAIL line per criterion.

Run with pytest, or directly as a script to get only the summary lines.
"""

import math
import random
import sys
import time
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DATA, SMALL_D  # noqa: E402
from weberyz import modeval as me  # noqa: E402
from weberyz import qseries as qs  # noqa: E402
from weberyz import weilrep as wr  # noqa: E402
from weberyz import yzlocal as yl  # noqa: E402
from weberyz.arith import DiscriminantPair, frak_F_divisor, frak_F_gamma  # noqa: E402
from weberyz.classpoly import IntPoly, class_polynomial, gz_lhs, hilbert_class_polynomial, yz_lhs  # noqa: E402
from weberyz.quadratic import reduced_forms  # noqa: E402

DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)
MAIN = DiscriminantPair(-31, -127)

# Hilbert class polynomial of -55, coefficients in factored form
H55 = IntPoly.from_desc([
    1,
    3**3 * 5**3 * 29 * 134219,
    -(3**7) * 5**3 * 23 * 101 * 32987,
    3**9 * 5**7 * 11**2 * 83 * 101 * 110641,
    -(3**12) * 5**6 * 11**3 * 29**3 * 41**3,
])


def _report(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line, flush=True)
    return line


# -- the criteria -----------------------------------------------------------------


def criterion_1():
    cases = [
        (-31, "weber", IntPoly.from_desc([1, 0, 1, -1])),
        (-127, "weber", IntPoly.from_desc([1, -1, -2, 1, 3, -1])),
        (-55, "weber", IntPoly.from_desc([1, 1, 0, -2, -1])),
        (-55, "hilbert", H55),
    ]
    ok, worst = True, 0.0
    for d, kind, want in cases:
        t = time.perf_counter()
        got = class_polynomial(d, kind, 512, None)
        dt = time.perf_counter() - t
        worst = max(worst, dt)
        ok &= got == want and dt < 5
    return ok, f"4 polynomials exact, slowest {worst:.2f}s"


def criterion_2():
    t = time.perf_counter()
    ok = all(yz_lhs(MAIN, s) == yl.yz_rhs(MAIN, s) for s in DIVISORS_24)
    ok &= yz_lhs(MAIN, 24) == 81
    pairs = [DiscriminantPair(a, b) for i, a in enumerate(SMALL_D) for b in SMALL_D[i + 1:]
             if math.gcd(a, b) == 1 and (a, b) != (-31, -127)]
    bad = [(p.d1, p.d2, s) for p in pairs for s in DIVISORS_24 if yz_lhs(p, s) != yl.yz_rhs(p, s)]
    ok &= not bad and len(pairs) >= 8
    dt = time.perf_counter() - t
    ok &= dt < 600
    return ok, f"main pair 8/8, f_24 = 81, {len(pairs)} more pairs x 8 s, {len(bad)} mismatches, {dt:.1f}s"


def _column_product():
    out = 1
    for line in (DATA / "worked_table.tex").read_text().splitlines():
        cell = line.split("&")[3].strip().strip("$").strip()
        base, _, exp = cell.partition("^")
        out *= int(base) ** int(exp.strip("{}") or 1)
    return out


def criterion_3():
    lhs, rhs, col = gz_lhs(MAIN), yl.gz_rhs(MAIN), _column_product()
    return lhs == rhs == col, f"J(-31,-127) = {yl.prime_power_str(lhs)}"


def criterion_4():
    ref = [line.rstrip() for line in (DATA / "worked_table.tex").read_text().splitlines()]
    got = [yl.format_row_latex(r) for r in yl.worked_table(MAIN)]
    same = sum(a == b for a, b in zip(got, ref))
    ncols = len(got[0].split("&")) - 3
    return len(got) == len(ref) == 31 and same == 31, f"{same}/31 rows byte-identical, {ncols} F columns"


def criterion_5():
    t = time.perf_counter()
    suites = [s for s in wr.SUITES if s != "compact"]
    checks = [c for d in DIVISORS_24 for s in suites for c in wr.run_suite(d, s)]
    checks += wr.compact_check(-31, -127)
    dims = {d: wr.orbit_dims(d)[0] for d in (1, 2, 4, 8)}
    dt = time.perf_counter() - t
    bad = [c.name for c in checks if not c.ok]
    ok = not bad and dims == {1: 4, 2: 16, 4: 46, 8: 118} and dt < 120
    return ok, f"{len(checks)} checks, {len(bad)} failed, dims {list(dims.values())}, {dt:.1f}s"


def criterion_6():
    t = time.perf_counter()
    checks = [qs.blift_check(s, e, 4) for s in DIVISORS_24 for e in (1, -1)]
    checks += [qs.blift_check(s, e, 6) for s in (1, 2, 3, 4) for e in (1, -1)]
    checks += [qs.p_d_check(d) for d in DIVISORS_24] + [qs.pol2_check(s) for s in DIVISORS_24]
    dt = time.perf_counter() - t
    bad = [c.name for c in checks if not c.ok]
    return not bad and dt < 120, f"{len(checks)} identities, {len(bad)} failed, {dt:.1f}s"


def criterion_7():
    ok = True
    for s in (1, 2, 8, 24):
        left, right = yl.bigcm_sides(MAIN, s, yz_lhs(MAIN, s))
        ok &= left == right
    reports = [yl.count_identities(MAIN, s) for s in DIVISORS_24]
    ok &= all(r.ok for r in reports)
    left24, _ = yl.bigcm_sides(MAIN, 24, 81)
    return ok, f"s in 1,2,8,24 exact (s=24: {left24}), counts over {reports[0].checked} values of a x 8 s"


def criterion_8():
    parts = {}
    # F(m) by the divisor product and by the closed form
    pairs = [MAIN, DiscriminantPair(-55, -103), DiscriminantPair(-151, -199)]
    parts["F"] = all(frak_F_divisor(p, m) == frak_F_gamma(p, m) for p in pairs for m in range(1, 10**4 + 1))
    # chi law for f2 at tau0
    ctx = me.new_context(160)
    tau0 = ctx.mpc("0.2", "0.9")
    base = me.weber_f2(tau0, 160).value
    rng = random.Random(20240601)
    worst = mpmath.mpf(0)
    for _ in range(100):
        g = me.random_gamma02(rng)
        moved = me.weber_f2(g.act(tau0), 160).value
        worst = max(worst, abs(moved - me.root_of_unity(ctx, me.chi_exponent(g), 24) * base))
    parts["chi"] = worst < mpmath.mpf(10) ** -30
    # vector-valued transformation of F_d under S and T
    res = mpmath.mpf(0)
    for d in DIVISORS_24:
        F = [x.value for x in me.F_vector(tau0, d, 160)]
        for which, moved in (("T", tau0 + 1), ("S", -1 / tau0)):
            G = me.F_vector(moved, d, 160)
            M = me.rho_d_matrix(d, which, ctx)
            res = max(res, max(abs(G[i].value - sum(M[i][k] * F[k] for k in range(3))) for i in range(3)))
    parts["F_d"] = res < mpmath.mpf(10) ** -25
    # class invariants do not depend on the representative
    rng = random.Random(5)
    forms = [f for d in (-31, -55, -127, -103, -199) for f in reduced_forms(d)]
    ok_rep = True
    for _ in range(20):
        f = rng.choice(forms)
        g = f.translate(rng.randint(-4, 4))
        if rng.random() < 0.5:
            g = g.flip().translate(rng.randint(-3, 3))
        a, b = me.class_invariant(f, 200), me.class_invariant(g, 200)
        ok_rep &= abs(a.value - b.value) < 2 * (a.err + b.err)
    parts["rep"] = ok_rep
    detail = (f"F agreement m<=10^4 x 3 pairs, chi worst {mpmath.nstr(worst, 3)}, "
              f"F_d residual {mpmath.nstr(res, 3)}, 20 representative pairs")
    return all(parts.values()), detail + ("" if all(parts.values()) else f" {parts}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print()
        _report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, crit in enumerate(CRITERIA, start=1):
        ok, detail = crit()
        _report(i, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
