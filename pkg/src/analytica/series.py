"""Truncated power series over exact rationals or float64.

A :class:`TruncatedSeries` stores the prefix ``a_0, ..., a_N`` of a power
series ``sum a_k t^k`` together with its scalar kind.  All arithmetic is
exact modulo ``t^(N+1)``; binary operations truncate to the smaller order
and refuse to mix scalar kinds.

Coefficients are always the normalized Taylor coefficients
``a_k = c^(k)(a) / k!``; callers holding raw derivatives divide by ``k!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence, Union

RATIONAL = "rational"
FLOAT64 = "float64"
KINDS = (RATIONAL, FLOAT64)

#: default relative tolerance for float64 comparisons
FLOAT_RTOL = 1e-9

Scalar = Union[Fraction, float]


class SeriesError(ValueError):
    """Base class for errors raised by series operations."""


class KindMismatchError(SeriesError):
    pass


class DivergentMajorantError(SeriesError):
    pass


class EmptyDerivativeError(SeriesError):
    pass


class CompositionDomainError(SeriesError):
    pass


def to_scalar(value, kind: str) -> Scalar:
    """Coerce ``value`` to the representation used by ``kind``."""
    if kind == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (Rational, str)):
            return Fraction(value)
        if isinstance(value, float):
            raise KindMismatchError(f"float {value!r} in a rational series")
        raise TypeError(f"cannot use {type(value).__name__} as a rational scalar")
    if kind == FLOAT64:
        return float(value)
    raise ValueError(f"unknown scalar kind {kind!r}")


def kind_of(value) -> str:
    return FLOAT64 if isinstance(value, float) else RATIONAL


def isclose(a, b, rtol: float = FLOAT_RTOL, atol: float = 0.0) -> bool:
    """Exact equality for rationals, relative tolerance otherwise."""
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(float(a), float(b), rel_tol=rtol, abs_tol=atol)
    return a == b


def abs_log(value) -> float:
    """``log|value|`` that survives huge integers and fractions."""
    if isinstance(value, Fraction):
        return math.log(abs(value.numerator)) - math.log(value.denominator)
    return math.log(abs(value))


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple
    kind: str = RATIONAL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scalar kind {self.kind!r}")
        if len(self.coeffs) == 0:
            raise SeriesError("a truncated series needs at least the constant term")
        object.__setattr__(
            self, "coeffs", tuple(to_scalar(c, self.kind) for c in self.coeffs)
        )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, kind: str | None = None) -> "TruncatedSeries":
        coeffs = list(coeffs)
        if kind is None:
            kind = FLOAT64 if any(isinstance(c, float) for c in coeffs) else RATIONAL
        return cls(tuple(coeffs), kind)

    @classmethod
    def zero(cls, order: int, kind: str = RATIONAL) -> "TruncatedSeries":
        return cls((0,) * (order + 1), kind)

    @classmethod
    def one(cls, order: int, kind: str = RATIONAL) -> "TruncatedSeries":
        return cls((1,) + (0,) * order, kind)

    @classmethod
    def monomial(cls, power: int, order: int, coeff=1, kind: str = RATIONAL):
        c = [0] * (order + 1)
        if power <= order:
            c[power] = coeff
        return cls(tuple(c), kind)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.kind)

    def to_float(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(float(c) for c in self.coeffs), FLOAT64)

    def scale(self, factor) -> "TruncatedSeries":
        factor = to_scalar(factor, self.kind)
        return TruncatedSeries(tuple(factor * c for c in self.coeffs), self.kind)

    def isclose(self, other: "TruncatedSeries", rtol: float = FLOAT_RTOL, atol: float = 0.0) -> bool:
        if self.order != other.order:
            return False
        return all(isclose(a, b, rtol, atol) for a, b in zip(self.coeffs, other.coeffs))

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, other.scale(-1))

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return cauchy_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __call__(self, t):
        """Evaluate the polynomial prefix at ``t`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


def _check_kinds(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.kind != b.kind:
        raise KindMismatchError(f"cannot combine {a.kind} and {b.kind} series")


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_kinds(a, b)
    n = min(a.order, b.order)
    return TruncatedSeries(tuple(a[k] + b[k] for k in range(n + 1)), a.kind)


def cauchy_product(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_kinds(a, b)
    n = min(a.order, b.order)
    out = []
    for m in range(n + 1):
        out.append(sum((a[i] * b[m - i] for i in range(m + 1)), to_scalar(0, a.kind)))
    return TruncatedSeries(tuple(out), a.kind)


def series_power(a: TruncatedSeries, exponent: int) -> TruncatedSeries:
    if exponent < 0:
        raise SeriesError("negative powers need series_reciprocal")
    result = TruncatedSeries.one(a.order, a.kind)
    base = a
    while exponent:
        if exponent & 1:
            result = cauchy_product(result, base)
        exponent >>= 1
        if exponent:
            base = cauchy_product(base, base)
    return result


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """``1/a`` modulo ``t^(N+1)``; requires ``a_0 != 0``."""
    if a[0] == 0:
        raise SeriesError("reciprocal needs a nonzero constant term")
    inv0 = to_scalar(1, a.kind) / a[0]
    out = [inv0]
    for m in range(1, a.order + 1):
        s = sum((a[i] * out[m - i] for i in range(1, m + 1)), to_scalar(0, a.kind))
        out.append(-s * inv0)
    return TruncatedSeries(tuple(out), a.kind)


def series_shift_down(a: TruncatedSeries, power: int) -> TruncatedSeries:
    """Divide by ``t^power``; the leading ``power`` coefficients must vanish."""
    if any(c != 0 for c in a.coeffs[:power]):
        raise SeriesError(f"series is not divisible by t^{power}")
    if power > a.order:
        raise SeriesError("shift exceeds truncation order")
    return TruncatedSeries(a.coeffs[power:], a.kind)


def series_derivative(a: TruncatedSeries) -> TruncatedSeries:
    if a.order < 1:
        raise EmptyDerivativeError("derivative of an order-0 series has no coefficients")
    return TruncatedSeries(tuple((k + 1) * a[k + 1] for k in range(a.order)), a.kind)


def evaluate_with_tail_bound(a: TruncatedSeries, t, M, rho):
    """Sum the prefix at ``t`` and bound the neglected tail.

    The caller asserts ``|a_k| <= M * rho**k`` for every ``k > N``; under that
    assertion the full sum lies within ``tail_bound`` of ``value``, where
    ``tail_bound = M (rho|t|)^(N+1) / (1 - rho|t|)``.

    Raises
    ------
    DivergentMajorantError
        if ``rho * |t| >= 1`` so the geometric majorant has no finite sum.
    """
    t = to_scalar(t, a.kind)
    M = to_scalar(M, a.kind)
    rho = to_scalar(rho, a.kind)
    q = rho * abs(t)
    if q >= 1:
        raise DivergentMajorantError(f"rho*|t| = {q} >= 1; majorant series diverges")
    value = a(t)
    tail = M * q ** (a.order + 1) / (1 - q)
    return value, tail


# generators -----------------------------------------------------------------


@dataclass(frozen=True)
class SeriesGenerator:
    """Closed-form coefficient rule ``k -> a_k``."""

    name: str
    rule: Callable[[int], Scalar]
    kind: str = RATIONAL
    radius: float | None = None

    def coefficient(self, k: int) -> Scalar:
        return to_scalar(self.rule(k), self.kind)

    def series(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(tuple(self.rule(k) for k in range(order + 1)), self.kind)


def geometric(rho=1) -> SeriesGenerator:
    rho = Fraction(rho) if not isinstance(rho, float) else rho
    kind = kind_of(rho)
    radius = math.inf if rho == 0 else 1 / abs(float(rho))
    return SeriesGenerator(f"geometric({rho})", lambda k: rho**k, kind, radius)


def factorial() -> SeriesGenerator:
    return SeriesGenerator("factorial", math.factorial, RATIONAL, 0.0)


def alternating_even() -> SeriesGenerator:
    """Coefficients of ``1/(1+u^2)`` at 0: ``(-1)^(k/2)`` for even ``k``."""
    return SeriesGenerator(
        "alternating_even", lambda k: (-1) ** (k // 2) if k % 2 == 0 else 0, RATIONAL, 1.0
    )


def _inverse_power_complex(re: Fraction, im: Fraction, power: int):
    # (re + i im)^(-power) as an exact (re, im) pair
    n2 = re * re + im * im
    cr, ci = re / n2, -im / n2
    out_r, out_i = Fraction(1), Fraction(0)
    for _ in range(power):
        out_r, out_i = out_r * cr - out_i * ci, out_r * ci + out_i * cr
    return out_r, out_i


def reciprocal_one_plus_square(center=0, scale=1) -> SeriesGenerator:
    """Taylor coefficients of ``u -> 1/(1 + (u/scale)^2)`` at ``center``.

    Uses ``1/(1+x^2) = Im 1/(x - i)``, so with ``x = c + h`` the coefficient
    of ``h^k`` is ``Im (-1)^k / (c - i)^(k+1)``; all exact for rational input.
    """
    center, scale = Fraction(center), Fraction(scale)
    c = center / scale

    def rule(k):
        re, im = _inverse_power_complex(c, Fraction(-1), k + 1)
        return (-1) ** k * im / scale**k

    radius = float(scale) * math.hypot(float(c), 1.0)
    return SeriesGenerator(
        f"reciprocal_one_plus_square(center={center}, scale={scale})", rule, RATIONAL, radius
    )


def exponential(center=0) -> SeriesGenerator:
    """Coefficients ``e^center / k!``; rational only at ``center == 0``."""
    if center == 0:
        return SeriesGenerator("exp", lambda k: Fraction(1, math.factorial(k)), RATIONAL, math.inf)
    ec = math.exp(float(center))
    return SeriesGenerator(
        f"exp(center={center})", lambda k: ec / math.factorial(k), FLOAT64, math.inf
    )


def constant(value=1) -> SeriesGenerator:
    kind = kind_of(value)
    return SeriesGenerator(f"constant({value})", lambda k: value if k == 0 else 0, kind, math.inf)


def table(values: Sequence, name: str = "table") -> SeriesGenerator:
    values = tuple(values)
    kind = FLOAT64 if any(isinstance(v, float) for v in values) else RATIONAL

    def rule(k):
        if k >= len(values):
            raise IndexError(f"table generator {name!r} has no coefficient {k}")
        return values[k]

    return SeriesGenerator(name, rule, kind)


GENERATORS = {
    "geometric": geometric,
    "factorial": factorial,
    "alternating_even": alternating_even,
    "reciprocal_one_plus_square": reciprocal_one_plus_square,
    "exp": exponential,
    "constant": constant,
}
