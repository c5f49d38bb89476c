"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py`` for the bare report.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction

import pytest

from analytica import gallery
from analytica.complexq import I, ComplexRational
from analytica.composition import (
    JetOfMap,
    compose_jet,
    curve_from_series,
    faa_di_bruno_oracle,
    jet_from_series,
    jet_of_polynomial,
    majorant_estimate_check,
    multinomial_partition_sum,
)
from analytica.convergence import (
    CurveJet,
    GermFamily,
    WeightSeq,
    divergence_combination,
    nonanalytic_witness,
    radius_lower_bound,
)
from analytica.multilinear import (
    SymForm,
    bound_chain_22,
    box_bound,
    eval_sym,
    lambda_split_check,
    polarize_binom,
    polarize_eps,
    polarize_scaled,
)
from analytica.seq_spaces import (
    INF,
    MODELS,
    PolyRadius,
    WeightedElement,
    inclusion_norm_bound,
    lpr_norm,
    model_cauchy_bound,
)
from analytica.series import TruncatedSeries, factorial, geometric

SEED = 1729
LINES: list[str] = []


def _frac(rng, bound=9, denom=7):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, denom))


def _vec(rng, d):
    return tuple(_frac(rng) for _ in range(d))


# criteria ------------------------------------------------------------------------


def crit_multinomial():
    bad = [(k, l) for l in range(1, 31) for k in range(1, l + 1) if multinomial_partition_sum(k, l) != math.comb(l - 1, k - 1)]
    return not bad, f"465 pairs, mismatches {bad[:3]}"


def crit_polarization():
    rng = random.Random(SEED)
    n_forms = 0
    failures = []
    for trial in range(120):
        k, d = rng.randint(1, 5), rng.randint(1, 3)
        f = SymForm.random(k, d, rng)
        xs = [_vec(rng, d) for _ in range(k)]
        a, x = _vec(rng, d), _vec(rng, d)
        if polarize_eps(f.diagonal, a, xs) != eval_sym(f, xs):
            failures.append((trial, "eps"))
        if polarize_binom(f.diagonal, a, x, k) != eval_sym(f, [x] * k):
            failures.append((trial, "binom"))
        if polarize_scaled(f.diagonal, a, x, k) != eval_sym(f, [x] * k):
            failures.append((trial, "scaled"))
        pairs = [(_vec(rng, d), _vec(rng, d)) for _ in range(k)]
        for lam in (I, ComplexRational(_frac(rng), _frac(rng))):
            lhs, rhs, _ = lambda_split_check(f, pairs, lam)
            if lhs != rhs:
                failures.append((trial, f"lambda={lam}"))
        n_forms += 1
    return not failures, f"{n_forms} forms, failures {failures[:3]}"


def crit_composition():
    rng = random.Random(SEED)
    bad = 0
    for _ in range(120):
        N = rng.randint(1, 10)
        fs = TruncatedSeries(tuple(_frac(rng) for _ in range(N + 1)))
        cs = TruncatedSeries((Fraction(0),) + tuple(_frac(rng) for _ in range(N)))
        if compose_jet(jet_from_series(fs), curve_from_series(cs), N) != faa_di_bruno_oracle(fs, cs):
            bad += 1
    return bad == 0, f"120 instances, mismatches {bad}"


def _curve_jets(polys, grid, N):
    jets = []
    for a in grid:
        jets.append(
            tuple(
                tuple(sum((p[j] * math.comb(j, n) * a ** (j - n) for j in range(n, len(p))), Fraction(0)) for p in polys)
                for n in range(N + 1)
            )
        )
    return CurveJet(tuple(grid), tuple(jets))


def crit_majorant():
    r = WeightSeq.inverse_factorial()
    reports = []
    # univariate geometric jet along c(t) = t
    reports.append(majorant_estimate_check([jet_from_series(geometric().series(12))], _curve_jets([[0, 1]], [0], 12), r, Fraction(1, 2), 1, 12))
    # f = 0
    zero = JetOfMap(1, tuple(SymForm.zero(k, 1) for k in range(7)))
    reports.append(majorant_estimate_check([zero, zero], _curve_jets([[0, 1, 1]], [0, Fraction(1, 4)], 6), r, Fraction(1, 2), 1, 6, B_radius=2))
    rng = random.Random(SEED)
    for _ in range(6):
        poly = {(i, j): _frac(rng, 4, 4) for i in range(3) for j in range(3) if i + j <= 2}
        curve = [[_frac(rng, 4, 4) for _ in range(4)] for _ in range(2)]
        grid, L, eps = [Fraction(0), Fraction(1, 2), Fraction(-1, 3)], 8, Fraction(1, 4)
        cj = _curve_jets(curve, grid, L)
        jets = [jet_of_polynomial(poly, cj.jets[i][0], L) for i in range(len(grid))]
        box = max(max(max(abs(x) for x in v) for jet in cj.jets for v in jet[1:]), 1)
        C = max(box_bound(form, eps * box) / math.factorial(form.degree) for j in jets for form in j.forms)
        reports.append(majorant_estimate_check(jets, cj, r, eps, C, L, B_radius=box, samples=20, seed=rng.randint(0, 999)))
    pre = all(rep.preconditions_ok for rep in reports)
    violations = sum(not row.ok for rep in reports for row in rep.rows)
    rows = sum(len(rep.rows) for rep in reports)
    return pre and violations == 0, f"{len(reports)} instances, {rows} rows, violations {violations}, preconditions {pre}"


def crit_witnesses():
    w = nonanalytic_witness(factorial().series(200), 4)
    fam = GermFamily(tuple(tuple(n**n if k == n else 0 for k in range(65)) for n in range(65)))
    dw = divergence_combination(fam, 6)
    exact = all(
        abs(dw.combined[k]) >= Fraction(m**k, 3 * 4**m) for m, k in zip(range(1, 7), dw.k)
    )
    ok = w.subadditive and w.divergence_evidence and not dw.check() and exact
    return ok, f"blocks {w.blocks}, k_m {dw.k}"


def crit_bound_chains():
    rng = random.Random(SEED)
    total = 0
    for k in range(1, 5):
        for d in (1, 2, 3):
            f = SymForm.random(k, d, rng)
            rep = bound_chain_22(f, 1, box_bound(f, 1), samples=500, seed=rng.randint(0, 10**6))
            if not rep.precondition_ok:
                return False, f"precondition failed k={k} d={d}"
            total += rep.violations
    return total == 0, f"12 studies x 500 samples, violations {total}"


def crit_seq_spaces():
    rng = random.Random(SEED)
    axiom_bad = 0
    for _ in range(200):
        x, y = WeightedElement.random(2, rng), WeightedElement.random(2, rng)
        r = PolyRadius((Fraction(rng.randint(1, 30), 10), Fraction(rng.randint(1, 30), 10)))
        c = _frac(rng)
        for p in (1, INF):
            if lpr_norm(x.scale(c), r, p) != abs(c) * lpr_norm(x, r, p):
                axiom_bad += 1
            if lpr_norm(x + y, r, p) > lpr_norm(x, r, p) + lpr_norm(y, r, p):
                axiom_bad += 1
    configs = [
        ((1, (1, 1)), (INF, (1, 1))),
        ((1, (1, 1)), (2, (1, 1))),
        ((INF, (1,)), (1, (Fraction(1, 2),))),
        ((INF, (1, 1)), (1, (Fraction(1, 2), Fraction(1, 3)))),
        ((INF, (2, 3)), (2, (1, 1))),
    ]
    cert_bad = 0
    for (p, r), (q, s) in configs:
        cert = inclusion_norm_bound((p, PolyRadius(r)), (q, PolyRadius(s)))
        elems = [WeightedElement.random(len(r), rng, size=rng.randint(1, 10), max_degree=12) for _ in range(200)]
        cert_bad += len(cert.verify(elems))
    cauchy_bad = 0
    for name in MODELS:
        for rho in (Fraction(1, 4), Fraction(1, 2), Fraction(9, 10)):
            b, model = model_cauchy_bound(name, rho)
            cauchy_bad += len(b.violations([model.coefficient(k) for k in range(41)]))
    ok = axiom_bad == cert_bad == cauchy_bad == 0
    return ok, f"axiom {axiom_bad}, inclusion {cert_bad}/{200 * len(configs)}, cauchy {cauchy_bad}"


def crit_gallery():
    reports = gallery.run_gallery()
    failed = [f"{r.example_id}/{c.name}" for r in reports for c in r.failures()]
    n = sum(len(r.checks) for r in reports)
    return not failed, f"{n} checks, failed {failed}"


def crit_radius():
    out = {}
    for rho in (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)):
        est = radius_lower_bound(geometric(1 / rho).series(64))
        out[str(rho)] = est
    ok = all(float(Fraction(k)) / 1.1 <= v <= 1.1 * float(Fraction(k)) for k, v in out.items())
    return ok, ", ".join(f"{k}->{v:.4f}" for k, v in out.items())


CRITERIA = [
    (1, "multinomial identity", crit_multinomial, 10),
    (2, "polarization formulas", crit_polarization, 30),
    (3, "composition cross-oracle", crit_composition, 30),
    (4, "majorant estimate", crit_majorant, None),
    (5, "witness constructions", crit_witnesses, 20),
    (6, "bound chains", crit_bound_chains, None),
    (7, "sequence spaces", crit_seq_spaces, None),
    (8, "gallery", crit_gallery, 60),
    (9, "radius estimation", crit_radius, None),
]


def run_criterion(number, name, fn, limit):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    budget = f" < {limit}s" if limit else ""
    line = f"[{verdict}] criterion {number}: {name} ({elapsed:.2f}s{budget}) {detail}"
    return ok and in_time, line


@pytest.fixture(scope="module")
def report_lines(request):
    yield LINES
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_sep("-", "acceptance criteria")
        for line in LINES:
            reporter.write_line(line)


@pytest.mark.parametrize("number,name,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, fn, limit, report_lines):
    ok, line = run_criterion(number, name, fn, limit)
    print(line)
    report_lines.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
