"""Radius-of-convergence criteria on finite coefficient data.

Besides the numeric root test this module carries out the two constructive
arguments that turn "radius zero" into explicit data:

* :func:`nonanalytic_witness` builds a subadditive weight table ``r_k`` from
  blocks of a divergent series on which no ``eps`` makes ``a_k r_k eps^k``
  bounded.
* :func:`divergence_combination` combines a coefficientwise bounded family of
  germs with weights ``+-4^-m`` into a single series whose coefficients grow
  like ``m^(k_m) / (3 * 4^m)``.

Finite prefixes cannot certify limits, so every "bounded" verdict is the
running-max stabilization rule of :func:`running_max_stable` and is returned
together with the raw supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .series import (
    FLOAT64,
    FLOAT_RTOL,
    RATIONAL,
    SeriesError,
    TruncatedSeries,
    abs_log,
)


class InsufficientDataError(SeriesError):
    pass


class InsufficientPrefixError(SeriesError):
    def __init__(self, n: int, message: str):
        super().__init__(message)
        self.n = n


class InsufficientFamilyError(SeriesError):
    def __init__(self, m: int, message: str):
        super().__init__(message)
        self.m = m


def _exceeds(new, old) -> bool:
    if isinstance(new, float) or isinstance(old, float):
        return float(new) > float(old) * (1 + FLOAT_RTOL) + 1e-300
    return new > old


def running_max_stable(values: Sequence) -> bool:
    """True when no new running maximum appears in the last quarter."""
    if not values:
        return True
    n = len(values) - 1
    cut = (3 * n) // 4
    best = max(values[: cut + 1])
    for v in values[cut + 1 :]:
        if _exceeds(v, best):
            return False
    return True


# weight sequences ------------------------------------------------------------

GAUSSIAN_MAX_INDEX = 26  # e^{-27^2} underflows float64


@dataclass(frozen=True)
class WeightSeq:
    """Positive test sequence ``r_k`` with ``r_k r_l >= r_(k+l)``.

    ``family`` is one of ``inverse_factorial``, ``scaled_inverse_factorial``
    (``c^k/k!``), ``gaussian`` (``e^(-k^2)``, float only) or ``table``.
    Built-in families satisfy ``r_k t^k -> 0`` by closed form; tables carry
    the caller's ``attested`` flag instead.
    """

    family: str
    param: Fraction | None = None
    values: tuple = ()
    attested: bool = False

    def __post_init__(self):
        if self.family == "scaled_inverse_factorial":
            if self.param is None or self.param <= 0:
                raise ValueError("scaled_inverse_factorial needs c > 0")
        elif self.family == "table":
            if any(v <= 0 for v in self.values):
                raise ValueError("weight table entries must be positive")
        elif self.family not in ("inverse_factorial", "gaussian"):
            raise ValueError(f"unknown weight family {self.family!r}")

    @classmethod
    def inverse_factorial(cls):
        return cls("inverse_factorial")

    @classmethod
    def scaled_inverse_factorial(cls, c):
        return cls("scaled_inverse_factorial", Fraction(c))

    @classmethod
    def gaussian(cls):
        return cls("gaussian")

    @classmethod
    def table(cls, values, attested: bool = False):
        return cls("table", None, tuple(values), attested)

    @property
    def kind(self) -> str:
        if self.family == "gaussian":
            return FLOAT64
        if self.family == "table" and any(isinstance(v, float) for v in self.values):
            return FLOAT64
        return RATIONAL

    @property
    def decay_certified(self) -> bool:
        return self.family != "table" or self.attested

    @property
    def max_index(self) -> float:
        if self.family == "table":
            return len(self.values) - 1
        if self.family == "gaussian":
            return GAUSSIAN_MAX_INDEX
        return math.inf

    def covers(self, order: int) -> bool:
        return order <= self.max_index

    def __call__(self, k: int):
        if k > self.max_index:
            raise IndexError(f"{self.family} weights stop at index {self.max_index}")
        if self.family == "inverse_factorial":
            return Fraction(1, math.factorial(k))
        if self.family == "scaled_inverse_factorial":
            return self.param**k / math.factorial(k)
        if self.family == "gaussian":
            return math.exp(-(k * k))
        return self.values[k]

    def subadditivity_violations(self, k_max: int | None = None) -> list[tuple[int, int]]:
        """All ``(k, l)`` with ``k <= l``, ``k + l <= k_max`` and ``r_k r_l < r_(k+l)``."""
        if k_max is None:
            k_max = int(self.max_index)
        vals = [self(k) for k in range(k_max + 1)]
        bad = []
        for k in range(k_max + 1):
            for l in range(k, k_max - k + 1):
                lhs, rhs = vals[k] * vals[l], vals[k + l]
                if self.kind == FLOAT64:
                    if lhs < rhs * (1 - 1e-12):
                        bad.append((k, l))
                elif lhs < rhs:
                    bad.append((k, l))
        return bad


def _mixed(a, b):
    if isinstance(a, float) or isinstance(b, float):
        return float(a) * float(b)
    return a * b


# operations ------------------------------------------------------------------


def radius_lower_bound(a: TruncatedSeries) -> float:
    """Root-test estimate ``1 / max |a_k|^(1/k)`` over the upper half of the prefix.

    Returns ``math.inf`` when every tail coefficient vanishes.
    """
    if a.order < 8:
        raise InsufficientDataError(f"root test needs order >= 8, got {a.order}")
    start = max(1, (a.order + 1) // 2)
    logs = [abs_log(a[k]) / k for k in range(start, a.order + 1) if a[k] != 0]
    if not logs:
        return math.inf
    return math.exp(-max(logs))


def weight_boundedness_test(a: TruncatedSeries, r: WeightSeq, eps):
    """``(bounded_flag, sup_value)`` for the sequence ``|a_k| r_k eps^k``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not r.covers(a.order):
        raise InsufficientDataError(f"weights cover up to {r.max_index}, series order {a.order}")
    if isinstance(eps, float) or a.kind == FLOAT64 or r.kind == FLOAT64:
        terms = [abs(float(a[k])) * float(r(k)) * float(eps) ** k for k in range(a.order + 1)]
    else:
        eps = Fraction(eps)
        terms = [abs(a[k]) * r(k) * eps**k for k in range(a.order + 1)]
    return running_max_stable(terms), max(terms)


@dataclass
class NonanalyticWitness:
    blocks: list[int]
    weights: WeightSeq
    subadditivity_violations: list[tuple[int, int]]
    # block_sums[n][m] = sum over block m of |a_k| r_k n^-k, for m >= n
    block_sums: dict[int, dict[int, Fraction]]

    @property
    def subadditive(self) -> bool:
        return not self.subadditivity_violations

    @property
    def divergence_evidence(self) -> bool:
        return all(s >= 1 for row in self.block_sums.values() for s in row.values())

    @property
    def passed(self) -> bool:
        return self.subadditive and self.divergence_evidence


def nonanalytic_witness(a: TruncatedSeries, n_max: int) -> NonanalyticWitness:
    """Build blocks ``k_(n-1) <= k < k_n`` with ``sum |a_k| n^(-2k) >= 1``.

    Blocks close greedily at the earliest index; weights are ``r_k = n^-k`` on
    block ``n``.  Two postconditions are checked exactly: the table is
    subadditive on its whole range, and for every ``n`` each block ``m >= n``
    contributes at least 1 to ``sum_k |a_k| r_k n^-k``, which therefore grows
    without bound as blocks are appended.

    Raises
    ------
    InsufficientPrefixError
        naming the first ``n`` whose block does not close within the prefix.
    """
    coeffs = [abs(Fraction(c)) for c in a.coeffs]
    blocks = [0]
    k = 0
    for n in range(1, n_max + 1):
        scale = Fraction(1, n * n)
        acc = Fraction(0)
        closed = False
        while k <= a.order:
            acc += coeffs[k] * scale**k
            k += 1
            if acc >= 1:
                closed = True
                break
        if not closed:
            raise InsufficientPrefixError(
                n, f"block n={n} does not close within prefix of order {a.order} (partial sum {float(acc):.3g})"
            )
        blocks.append(k)

    table = []
    for n in range(1, n_max + 1):
        table.extend(Fraction(1, n**kk) for kk in range(blocks[n - 1], blocks[n]))
    weights = WeightSeq.table(table, attested=True)

    block_sums: dict[int, dict[int, Fraction]] = {}
    for n in range(1, n_max + 1):
        row = {}
        for m in range(n, n_max + 1):
            row[m] = sum(
                (coeffs[kk] * table[kk] * Fraction(1, n**kk) for kk in range(blocks[m - 1], blocks[m])),
                Fraction(0),
            )
        block_sums[n] = row

    return NonanalyticWitness(
        blocks=blocks,
        weights=weights,
        subadditivity_violations=weights.subadditivity_violations(len(table) - 1),
        block_sums=block_sums,
    )


@dataclass(frozen=True)
class CurveJet:
    """Normalized derivatives ``c^(k)(a)/k!`` of a curve into ``R^d``.

    ``jets[i][k]`` is the vector for grid point ``grid[i]`` and order ``k``.
    """

    grid: tuple
    jets: tuple

    def __post_init__(self):
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if len(self.grid) != len(self.jets):
            raise ValueError("one jet per grid point")
        shapes = {(len(j), len(j[0])) for j in self.jets}
        if len(shapes) != 1 or any(len(v) != len(j[0]) for j in self.jets for v in j):
            raise ValueError("all jets must share order N and dimension d")
        object.__setattr__(self, "jets", tuple(tuple(tuple(v) for v in j) for j in self.jets))

    @property
    def order(self) -> int:
        return len(self.jets[0]) - 1

    @property
    def dim(self) -> int:
        return len(self.jets[0][0])


def curve_analyticity_test(jet: CurveJet, r: WeightSeq):
    """``(bounded_flag, sup_value)`` for ``sup_a ||c^(k)(a)/k!||_inf r_k``."""
    if not r.covers(jet.order):
        raise InsufficientDataError(f"weights cover up to {r.max_index}, jet order {jet.order}")
    per_k = []
    for k in range(jet.order + 1):
        rk = r(k)
        per_k.append(max(_mixed(max(abs(x) for x in j[k]), rk) for j in jet.jets))
    return running_max_stable(per_k), max(per_k)


@dataclass(frozen=True)
class GermFamily:
    """Taylor coefficients ``b_(n,k)`` of finitely many germs, exact rationals."""

    members: tuple

    def __post_init__(self):
        if not self.members:
            raise ValueError("family needs at least one member")
        width = max(len(m) for m in self.members)
        padded = tuple(
            tuple(Fraction(c) for c in m) + (Fraction(0),) * (width - len(m)) for m in self.members
        )
        object.__setattr__(self, "members", padded)

    @property
    def k_max(self) -> int:
        return len(self.members[0]) - 1

    def column_sup(self, k: int) -> Fraction:
        return max(abs(m[k]) for m in self.members)


@dataclass
class DivergenceWitness:
    k: list[int]
    n: list[int]
    t: list[Fraction]
    combined: list[Fraction]
    lower_bounds: list[Fraction]
    # |b_(m,k_m)| (|t_m| - 2 sum_(j>m) |t_j|), the middle of the estimate chain
    chain_middle: list[Fraction]
    restricted_to_finite_family: bool = True
    notes: list[str] = field(default_factory=list)

    def check(self) -> list[str]:
        """Re-derive the estimate chain; returns a list of failures (empty = ok)."""
        failures = []
        for i, m in enumerate(range(1, len(self.k) + 1)):
            if abs(self.t[i]) != Fraction(1, 4**m):
                failures.append(f"|t_{m}| != 4^-{m}")
            lhs = abs(self.combined[self.k[i]])
            if lhs < self.chain_middle[i]:
                failures.append(f"m={m}: |b_inf,k_m| < chain middle")
            if self.chain_middle[i] < self.lower_bounds[i]:
                failures.append(f"m={m}: chain middle < m^k_m/(3*4^m)")
            if lhs < self.lower_bounds[i]:
                failures.append(f"m={m}: |b_inf,k_m| < m^k_m/(3*4^m)")
        if any(b <= a for a, b in zip(self.k, self.k[1:])):
            failures.append("k_m not strictly increasing")
        if any(b <= a for a, b in zip(self.n, self.n[1:])):
            failures.append("n_m not strictly increasing")
        return failures


def divergence_combination(fam: GermFamily, m_max: int) -> DivergenceWitness:
    """Select ``(k_m, n_m)`` and signs ``t_m`` so ``sum t_m b_(n_m)`` has radius 0.

    For each ``m`` the smallest ``k > k_(m-1)`` is taken for which some member
    ``n > n_(m-1)`` has ``|b_(n,k)| > m^k``; ``n_m`` is the first member of
    largest ``|b_(n,k)|`` past ``n_(m-1)``, so ``|b_(n_m,k_m)| >= |b_(j,k_m)|/2``
    for all later members of the (finite) family.

    Raises
    ------
    InsufficientFamilyError
        naming the first ``m`` for which no admissible ``(k, n)`` exists.
    """
    members = fam.members
    ks, ns = [], []
    k_prev, n_prev = 0, -1
    for m in range(1, m_max + 1):
        found = None
        for k in range(k_prev + 1, fam.k_max + 1):
            later = range(n_prev + 1, len(members))
            if not later:
                break
            best = max(later, key=lambda j: (abs(members[j][k]), -j))
            if abs(members[best][k]) > Fraction(m) ** k:
                found = (k, best)
                break
        if found is None:
            raise InsufficientFamilyError(
                m, f"no k in ({k_prev}, {fam.k_max}] and member n > {n_prev} with |b_n,k| > {m}^k"
            )
        k_prev, n_prev = found
        ks.append(k_prev)
        ns.append(n_prev)

    sub = [members[n] for n in ns]
    ts: list[Fraction] = []
    for i, m in enumerate(range(1, m_max + 1)):
        s = sum((ts[j] * sub[j][ks[i]] for j in range(i)), Fraction(0))
        sign = 1 if s * sub[i][ks[i]] >= 0 else -1
        ts.append(Fraction(sign, 4**m))

    combined = [sum((ts[i] * sub[i][k] for i in range(m_max)), Fraction(0)) for k in range(fam.k_max + 1)]
    lower = [Fraction(m**k, 3 * 4**m) for m, k in zip(range(1, m_max + 1), ks)]
    middle = []
    for i in range(m_max):
        tail = sum((abs(t) for t in ts[i + 1 :]), Fraction(0))
        middle.append(abs(sub[i][ks[i]]) * (abs(ts[i]) - 2 * tail))
    return DivergenceWitness(
        k=ks,
        n=ns,
        t=ts,
        combined=combined,
        lower_bounds=lower,
        chain_middle=middle,
        notes=["the choice of n_m only compares against members of the given finite family"],
    )
