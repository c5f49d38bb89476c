"""Taylor coefficients of a composite ``f o c`` from jets of ``f`` and ``c``.

``JetOfMap.forms[k]`` holds the raw ``k``-linear derivative ``d^k f(c(a))``;
the ``1/k!`` normalization is applied inside :func:`compose_jet` only.
Curve data are normalized coefficients ``c^(n)(a)/n!`` for ``n >= 1``.

The coefficient of ``t^l`` in ``(f o c)(a + t)`` is

    sum_k 1/k! sum_(m) k!/prod m_n! * d^k f(c(a))(prod_n c_n^(m_n))

over multisets ``m`` with ``sum m_n = k`` and ``sum n m_n = l``, where
``prod_n x_n^(m_n)`` is the tuple repeating ``x_1`` ``m_1`` times, then
``x_2`` ``m_2`` times, and so on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .convergence import CurveJet, WeightSeq
from .multilinear import SymForm, eval_sym, multi_indices
from .series import (
    CompositionDomainError,
    SeriesError,
    TruncatedSeries,
    _check_kinds,
    cauchy_product,
)


class TruncationDataError(SeriesError):
    def __init__(self, k: int, n: int | None, message: str):
        super().__init__(message)
        self.k = k
        self.n = n


@dataclass(frozen=True)
class JetOfMap:
    dim: int
    forms: tuple

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        for k, form in enumerate(self.forms):
            if form.degree != k or form.dim != self.dim:
                raise ValueError(f"forms[{k}] must have degree {k} and dim {self.dim}")

    @property
    def degree_max(self) -> int:
        return len(self.forms) - 1

    @property
    def value(self):
        return self.forms[0].coefficient((0,) * self.dim)


@dataclass(frozen=True)
class CurveCoefficients:
    """``coeffs[n-1] = c^(n)(a)/n!`` for ``n = 1..N``."""

    dim: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(tuple(v) for v in self.coeffs))
        if any(len(v) != self.dim for v in self.coeffs):
            raise ValueError(f"every curve coefficient must have length {self.dim}")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int):
        if n < 1:
            raise IndexError("curve coefficients start at n = 1")
        return self.coeffs[n - 1]


@dataclass(frozen=True, order=True)
class PartitionMultiset:
    """Multiplicities ``m_n``, stored as ascending ``(n, m_n)`` pairs with ``m_n > 0``."""

    parts: tuple

    @property
    def k(self) -> int:
        return sum(m for _, m in self.parts)

    @property
    def l(self) -> int:
        return sum(n * m for n, m in self.parts)

    def as_dict(self) -> dict:
        return dict(self.parts)

    def multiplicity(self, n: int) -> int:
        return self.as_dict().get(n, 0)

    def coefficient(self) -> int:
        """``k! / prod m_n!``"""
        out = math.factorial(self.k)
        for _, m in self.parts:
            out //= math.factorial(m)
        return out

    def argument_tuple(self, vectors) -> list:
        """``prod_n x_n^(m_n)`` in ascending ``n``; ``vectors[n]`` is ``x_n``."""
        args = []
        for n, m in self.parts:
            args.extend([vectors[n]] * m)
        return args


def _partitions_desc(l: int, k: int, largest: int):
    if k == 0:
        if l == 0:
            yield ()
        return
    for first in range(min(largest, l - (k - 1)), 0, -1):
        if first * k < l:
            break
        for rest in _partitions_desc(l - first, k - 1, first):
            yield (first,) + rest


def enumerate_partitions(k: int, l: int) -> list[PartitionMultiset]:
    """Multisets of ``k`` positive parts summing to ``l``.

    Ordered by largest part, then by the multiplicity vector ``(m_1, m_2, ...)``.
    """
    if k < 1 or k > l:
        return []
    out = []
    for parts in _partitions_desc(l, k, l):
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        out.append(PartitionMultiset(tuple(sorted(counts.items()))))
    out.sort(key=lambda pm: (max(n for n, _ in pm.parts), tuple(pm.multiplicity(n) for n in range(1, l + 1))))
    return out


def multinomial_partition_sum(k: int, l: int) -> int:
    """``sum k!/prod m_n!`` over :func:`enumerate_partitions`; equals ``C(l-1, k-1)``."""
    return sum(pm.coefficient() for pm in enumerate_partitions(k, l))


def _kind_of_values(values) -> str:
    return "float64" if any(isinstance(v, float) for v in values) else "rational"


def _coefficient(f: JetOfMap, c: CurveCoefficients, l: int):
    if l == 0:
        return f.value
    total = 0
    for k in range(1, l + 1):
        parts = enumerate_partitions(k, l)
        if not parts:
            continue
        if k > f.degree_max:
            raise TruncationDataError(k, None, f"coefficient {l} needs d^{k} f but the jet stops at {f.degree_max}")
        inner = 0
        for pm in parts:
            top = pm.parts[-1][0]
            if top > c.order:
                raise TruncationDataError(k, top, f"coefficient {l} needs curve term n={top} (k={k}); curve has {c.order}")
            vectors = {n: c[n] for n, _ in pm.parts}
            inner = inner + pm.coefficient() * eval_sym(f.forms[k], pm.argument_tuple(vectors))
        total = total + Fraction(1, math.factorial(k)) * inner
    return total


def compose_jet(f: JetOfMap, c: CurveCoefficients, L: int) -> TruncatedSeries:
    """Coefficients ``0..L`` of ``t -> f(c(a + t))``."""
    if f.dim != c.dim:
        raise ValueError(f"jet dimension {f.dim} != curve dimension {c.dim}")
    coeffs = [_coefficient(f, c, l) for l in range(L + 1)]
    kind = _kind_of_values(coeffs)
    return TruncatedSeries(tuple(coeffs), kind)


def faa_di_bruno_oracle(f_series: TruncatedSeries, c_series: TruncatedSeries) -> TruncatedSeries:
    """``f o c`` by Horner substitution with truncated products."""
    _check_kinds(f_series, c_series)
    if c_series[0] != 0:
        raise CompositionDomainError("inner series must have zero constant term")
    n = min(f_series.order, c_series.order)
    c = c_series.truncate(n)
    acc = TruncatedSeries.monomial(0, n, f_series[n], f_series.kind)
    for k in range(n - 1, -1, -1):
        acc = cauchy_product(acc, c)
        acc = TruncatedSeries((acc[0] + f_series[k],) + acc.coeffs[1:], acc.kind)
    return acc


# d = 1 reductions ------------------------------------------------------------


def jet_from_series(f_series: TruncatedSeries) -> JetOfMap:
    """Univariate jet with ``d^k f = k! * f_k``."""
    forms = [SymForm(k, 1, {(k,): math.factorial(k) * f_series[k]}) for k in range(f_series.order + 1)]
    return JetOfMap(1, tuple(forms))


def curve_from_series(c_series: TruncatedSeries) -> CurveCoefficients:
    return CurveCoefficients(1, tuple((c_series[n],) for n in range(1, c_series.order + 1)))


def jet_of_polynomial(poly: dict, point: Sequence, K: int) -> JetOfMap:
    """Jet at ``point`` of ``sum_beta poly[beta] x^beta``; ``forms[k][alpha] = d^alpha f(point)``."""
    dim = len(point)
    forms = []
    for k in range(K + 1):
        coeffs = {}
        for alpha in multi_indices(k, dim):
            total = 0
            for beta, cb in poly.items():
                if any(b < a for a, b in zip(alpha, beta)):
                    continue
                term = cb
                for a, b, p in zip(alpha, beta, point):
                    term = term * (math.factorial(b) // math.factorial(b - a)) * p ** (b - a)
                total = total + term
            coeffs[alpha] = total
        forms.append(SymForm(k, dim, coeffs))
    return JetOfMap(dim, tuple(forms))


# majorant estimate -----------------------------------------------------------


@dataclass
class MajorantRow:
    grid_index: int
    l: int
    lhs: object
    middle: object
    bound: object

    @property
    def ok(self) -> bool:
        if any(isinstance(v, float) for v in (self.lhs, self.middle, self.bound)):
            tol = 1e-12 * float(self.bound)
            return self.lhs <= self.middle + tol and self.middle <= self.bound + tol
        return self.lhs <= self.middle <= self.bound


@dataclass
class MajorantReport:
    C: object
    eps: object
    L: int
    curve_precondition_ok: bool
    form_precondition_ok: bool
    rows: list[MajorantRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def preconditions_ok(self) -> bool:
        return self.curve_precondition_ok and self.form_precondition_ok

    @property
    def violations(self) -> int:
        return sum(not row.ok for row in self.rows) if self.preconditions_ok else 0

    @property
    def passed(self) -> bool:
        return self.preconditions_ok and self.violations == 0


def _sup_norm(v):
    return max((abs(x) for x in v), default=0)


def majorant_estimate_check(
    jets: Sequence[JetOfMap],
    curve: CurveJet,
    r: WeightSeq,
    eps,
    C,
    L: int,
    B_radius=1,
    samples: int = 100,
    seed: int = 0,
) -> MajorantReport:
    """Verify ``|(f o c)^(l)(a)|/l! * r_l * (eps/2)^l <= C/2`` for ``1 <= l <= L``.

    ``jets[i]`` is the jet of ``f`` at ``curve`` point ``i``.  ``B`` is the box
    ``||x||_inf <= B_radius``.  Hypotheses checked on data:

    * ``c^(n)(a) r_n / n!`` lies in ``B`` for ``1 <= n <= L``;
    * ``|d^k f(z_1..z_k)|/k! <= C`` on random tuples from ``eps*B`` and on
      every tuple of scaled curve terms ``c_n r_n eps^n`` the estimate uses.

    The ``l = 0`` row is compared with ``C`` itself: the ``1/2`` comes from
    ``sum_k C(l-1, k-1) = 2^(l-1)``, which needs ``l >= 1``.
    A failed hypothesis is recorded in the report, never raised.
    """
    if len(jets) != len(curve.grid):
        raise ValueError("one jet of f per curve grid point")
    if curve.order < L or any(j.degree_max < L for j in jets):
        raise TruncationDataError(L, None, f"majorant check to order {L} needs jets and curve of order >= {L}")
    if not r.covers(L):
        raise ValueError(f"weights cover only up to {r.max_index}")
    rng = random.Random(seed)
    exact = not any(isinstance(x, float) for x in (eps, C, B_radius)) and r.kind == "rational"
    half = Fraction(1, 2) if exact else 0.5
    curve_ok, form_ok = True, True
    report = MajorantReport(C=C, eps=eps, L=L, curve_precondition_ok=True, form_precondition_ok=True)

    for i, f in enumerate(jets):
        cvec = {n: curve.jets[i][n] for n in range(1, L + 1)}
        if any(_sup_norm(cvec[n]) * r(n) > B_radius for n in cvec):
            curve_ok = False
        y = {n: tuple(x * r(n) * eps**n for x in cvec[n]) for n in cvec}

        # random tuples in eps*B
        for k in range(L + 1):
            fk = f.forms[k]
            for _ in range(samples if k else 1):
                zs = [
                    tuple(eps * B_radius * Fraction(rng.randint(-32, 32), 32) for _ in range(f.dim))
                    for _ in range(k)
                ]
                if abs(eval_sym(fk, zs)) * Fraction(1, math.factorial(k)) > C:
                    form_ok = False

        coeffs = compose_jet(f, CurveCoefficients(f.dim, tuple(cvec[n] for n in range(1, L + 1))), L)
        for l in range(L + 1):
            lhs = abs(coeffs[l]) * r(l) * (eps * half) ** l
            if l == 0:
                middle = abs(f.value) * r(0)
                if abs(f.value) > C:
                    form_ok = False
                bound = C
            else:
                total = 0
                for k in range(1, l + 1):
                    for pm in enumerate_partitions(k, l):
                        val = abs(eval_sym(f.forms[k], pm.argument_tuple(y))) * Fraction(1, math.factorial(k))
                        if val > C:
                            form_ok = False
                        total = total + pm.coefficient() * val
                middle = total * half**l
                bound = C * half
            report.rows.append(MajorantRow(i, l, lhs, middle, bound))

    report.curve_precondition_ok = curve_ok
    report.form_precondition_ok = form_ok
    if not curve_ok:
        report.notes.append("curve terms c^(n)(a) r_n / n! leave B")
    if not form_ok:
        report.notes.append("|d^k f|/k! exceeds C on sampled tuples from eps*B")
    return report
