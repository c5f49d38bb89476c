"""Symmetric multilinear forms on R^d and the polarization formulas.

A :class:`SymForm` of degree ``k`` is stored by multi-index: ``coeffs[alpha]``
is the common value ``T[i_1, ..., i_k]`` of the symmetric tensor on every
index tuple containing ``alpha_j`` copies of ``j``.  With this convention the
diagonal is ``f(x^k) = sum_alpha k!/alpha! * coeffs[alpha] * x^alpha``.

The polarization routes take only a diagonal oracle ``x -> f(x^k)`` and
recover either the full form or the diagonal at another point; they work
with any scalar supporting ``+``, ``*`` and division by integers
(:class:`~fractions.Fraction`, float, :class:`ComplexRational`).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

MAX_DEGREE = 8  # for the 2^k-term sign sums
MAX_DIM = 4
MAX_EXPANSION = MAX_DIM**MAX_DEGREE  # index tuples visited by eval_sym


class FormError(ValueError):
    pass


def multi_indices(k: int, d: int):
    """All ``alpha`` in ``N^d`` with ``|alpha| = k``, lexicographically descending."""
    if d == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in multi_indices(k - first, d - 1):
            yield (first,) + rest


def multinomial(alpha: Sequence[int]) -> int:
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


def _index_to_alpha(idx: Sequence[int], d: int) -> tuple:
    alpha = [0] * d
    for i in idx:
        alpha[i] += 1
    return tuple(alpha)


@dataclass(frozen=True)
class SymForm:
    degree: int
    dim: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise FormError(f"dimension {self.dim} outside 1..{MAX_DIM}")
        if self.degree < 0 or self.dim**self.degree > MAX_EXPANSION:
            raise FormError(f"degree {self.degree} in dimension {self.dim} exceeds the expansion limit")
        clean = {}
        for alpha, c in self.coeffs.items():
            alpha = tuple(alpha)
            if len(alpha) != self.dim or sum(alpha) != self.degree or min(alpha) < 0:
                raise FormError(f"multi-index {alpha} invalid for degree {self.degree}, dim {self.dim}")
            if c != 0:
                clean[alpha] = c
        object.__setattr__(self, "coeffs", clean)

    def coefficient(self, alpha) -> Fraction:
        return self.coeffs.get(tuple(alpha), 0)

    def __call__(self, *args):
        return eval_sym(self, args)

    def diagonal(self, x):
        """``f(x, ..., x)`` via the multinomial shortcut."""
        _check_vec(x, self.dim)
        total = 0
        for alpha, c in self.coeffs.items():
            term = multinomial(alpha) * c
            for xi, ai in zip(x, alpha):
                if ai:
                    term = term * xi**ai
            total = total + term
        return total

    def scale(self, factor) -> "SymForm":
        return SymForm(self.degree, self.dim, {a: factor * c for a, c in self.coeffs.items()})

    def __add__(self, other: "SymForm") -> "SymForm":
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise FormError("cannot add forms of different shape")
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return SymForm(self.degree, self.dim, out)

    @classmethod
    def zero(cls, degree: int, dim: int) -> "SymForm":
        return cls(degree, dim, {})

    @classmethod
    def random(cls, degree: int, dim: int, rng: random.Random, bound: int = 9, denom: int = 7):
        coeffs = {
            alpha: Fraction(rng.randint(-bound, bound), rng.randint(1, denom))
            for alpha in multi_indices(degree, dim)
        }
        return cls(degree, dim, coeffs)


def _check_vec(x, d):
    if len(x) != d:
        raise FormError(f"vector of length {len(x)} where dimension {d} was expected")


def eval_sym(f: SymForm, args: Sequence[Sequence]):
    """Full multilinear expansion over all ``d^k`` index tuples."""
    if len(args) != f.degree:
        raise FormError(f"degree-{f.degree} form called with {len(args)} arguments")
    for x in args:
        _check_vec(x, f.dim)
    total = 0
    for idx in product(range(f.dim), repeat=f.degree):
        c = f.coeffs.get(_index_to_alpha(idx, f.dim))
        if c is None:
            continue
        term = c
        for x, i in zip(args, idx):
            term = term * x[i]
        total = total + term
    return total


def box_bound(f: SymForm, radius):
    """Upper bound ``R^k sum_alpha k!/alpha! |c_alpha|`` for ``|f(x_1..x_k)|`` on ``||x_j||_inf <= R``."""
    return radius**f.degree * sum((multinomial(a) * abs(c) for a, c in f.coeffs.items()), 0)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


DiagonalOracle = Callable[[Sequence], object]


def polarize_eps(f_diag: DiagonalOracle, x0: Sequence, args: Sequence[Sequence]):
    """Recover ``f(x_1, ..., x_k)`` from diagonal values over the ``2^k`` sign patterns.

    ``f(x_1..x_k) = 1/k! sum_eps (-1)^(k - |eps|) f((x0 + sum eps_j x_j)^k)``
    for any base point ``x0``.
    """
    k = len(args)
    if k > MAX_DEGREE:
        raise FormError(f"sign sum over 2^{k} patterns exceeds the degree limit {MAX_DEGREE}")
    total = 0
    for eps in product((0, 1), repeat=k):
        point = tuple(x0)
        for e, x in zip(eps, args):
            if e:
                point = vadd(point, x)
        sign = -1 if (k - sum(eps)) % 2 else 1
        total = total + sign * f_diag(point)
    return total * Fraction(1, math.factorial(k))


def polarize_binom(f_diag: DiagonalOracle, a: Sequence, x: Sequence, k: int):
    """``f(x^k) = 1/k! sum_j (-1)^(k-j) C(k,j) f((a + j x)^k)``."""
    total = 0
    for j in range(k + 1):
        point = vadd(a, vscale(j, x))
        total = total + (-1) ** (k - j) * math.comb(k, j) * f_diag(point)
    return total * Fraction(1, math.factorial(k))


def polarize_scaled(f_diag: DiagonalOracle, a: Sequence, x: Sequence, k: int):
    """``f(x^k) = k^k/k! sum_j (-1)^(k-j) C(k,j) f((a + (j/k) x)^k)``."""
    if k == 0:
        return f_diag(tuple(a))
    total = 0
    for j in range(k + 1):
        point = vadd(a, vscale(Fraction(j, k), x))
        total = total + (-1) ** (k - j) * math.comb(k, j) * f_diag(point)
    return total * Fraction(k**k, math.factorial(k))


def lambda_split_check(f: SymForm, pairs: Sequence[tuple], lam):
    """Both sides of ``f(x_j^0 + lam x_j^1)_j = sum_eps lam^|eps| f(x_j^eps_j)``.

    Returns ``(lhs, rhs, n_terms)``; ``lam`` may be a :class:`ComplexRational`.
    """
    if len(pairs) != f.degree:
        raise FormError(f"degree-{f.degree} form needs {f.degree} pairs, got {len(pairs)}")
    combined = [tuple(a + lam * b for a, b in zip(x0, x1)) for x0, x1 in pairs]
    lhs = eval_sym(f, combined)
    rhs = 0
    n_terms = 0
    for eps in product((0, 1), repeat=f.degree):
        args = [pair[e] for pair, e in zip(pairs, eps)]
        rhs = rhs + lam ** sum(eps) * eval_sym(f, args)
        n_terms += 1
    return lhs, rhs, n_terms


def _random_box_point(rng: random.Random, d: int, radius, exact: bool):
    if exact:
        radius = Fraction(radius)
        return tuple(radius * Fraction(rng.randint(-64, 64), 64) for _ in range(d))
    return tuple(rng.uniform(-float(radius), float(radius)) for _ in range(d))


@dataclass
class BoundChainReport:
    degree: int
    C: object
    samples: int
    precondition_ok: bool
    diagonal_sup: float
    max_ratio: float
    violations: int
    # largest value of (1/k!) sum_eps (|eps|)^k |f(avg_eps^k)| over the samples
    max_intermediate: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.precondition_ok and self.violations == 0


def bound_chain_22(f: SymForm, U_radius, C, samples: int = 500, seed: int = 0, exact: bool = True):
    """Check ``|f(x_1..x_k)| <= C (2e)^k`` on random tuples from the box ``||x||_inf <= U_radius``.

    The diagonal hypothesis ``|f(x^k)| <= C`` is checked on random box points
    and on every average ``sum eps_j x_j / |eps|`` the estimate actually uses,
    so a passing precondition makes each tested inequality a consequence of
    the polarization formula.  A failed precondition is reported, not raised.
    """
    rng = random.Random(seed)
    k, d = f.degree, f.dim
    bound = C * (2 * math.e) ** k
    diag_sup = 0.0
    pre_ok = True
    violations = 0
    max_ratio = 0.0
    max_mid = 0.0
    for _ in range(samples):
        y = _random_box_point(rng, d, U_radius, exact)
        v = abs(f.diagonal(y))
        diag_sup = max(diag_sup, float(v))
        if v > C:
            pre_ok = False
        xs = [_random_box_point(rng, d, U_radius, exact) for _ in range(k)]
        mid = 0
        for eps in product((0, 1), repeat=k):
            s = sum(eps)
            if s == 0:
                continue
            avg = (0,) * d
            for e, x in zip(eps, xs):
                if e:
                    avg = vadd(avg, x)
            avg = vscale(Fraction(1, s) if exact else 1.0 / s, avg)
            dv = abs(f.diagonal(avg))
            diag_sup = max(diag_sup, float(dv))
            if dv > C:
                pre_ok = False
            mid += s**k * dv
        mid = mid / math.factorial(k) if k else abs(f.diagonal(()))
        max_mid = max(max_mid, float(mid))
        val = abs(eval_sym(f, xs))
        slack = 0 if exact else float(mid) * 1e-9
        if val > mid + slack:
            violations += 1
        if float(val) > float(bound):
            violations += 1
        if bound:
            max_ratio = max(max_ratio, float(val) / float(bound))
    notes = [] if pre_ok else ["diagonal bound |f(x^k)| <= C fails on the sample; chain not applicable"]
    return BoundChainReport(
        degree=k,
        C=C,
        samples=samples,
        precondition_ok=pre_ok,
        diagonal_sup=diag_sup,
        max_ratio=max_ratio,
        violations=violations if pre_ok else 0,
        max_intermediate=max_mid,
        notes=notes,
    )


def bound_chain_scaled(f: SymForm, x0: Sequence, V_radius, samples: int = 200, seed: int = 0):
    """The diagonal chain ``|f(x^k)| <= k^k/k! * 2^k * K <= K (2e)^k``.

    ``K`` is taken as the largest ``|f(y^k)|`` over the points
    ``y = x0 + (j/k) x`` the scaled polarization formula visits, so the
    hypothesis holds by construction.  Returns ``(violations, max_ratio)``.
    """
    rng = random.Random(seed)
    k, d = f.degree, f.dim
    if k == 0:
        return 0, 0.0
    violations, max_ratio = 0, 0.0
    for _ in range(samples):
        x = _random_box_point(rng, d, V_radius, True)
        pts = [vadd(x0, vscale(Fraction(j, k), x)) for j in range(k + 1)]
        K = max(abs(f.diagonal(p)) for p in pts)
        val = abs(f.diagonal(x))
        middle = Fraction(k**k, math.factorial(k)) * sum(math.comb(k, j) * abs(f.diagonal(p)) for j, p in enumerate(pts))
        if val > middle or middle > Fraction(k**k * 2**k, math.factorial(k)) * K:
            violations += 1
        outer = float(K) * (2 * math.e) ** k
        if float(val) > outer * (1 + 1e-12):
            violations += 1
        if outer:
            max_ratio = max(max_ratio, float(val) / outer)
    return violations, max_ratio
