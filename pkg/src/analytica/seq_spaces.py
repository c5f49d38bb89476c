"""Weighted sequence spaces over multi-indices and coefficient bounds.

Elements are finite-support maps ``alpha -> x_alpha``.  The norm of ``x`` in
``l^p_r`` is the ``p``-norm of the family ``x_alpha r^alpha``.  Exact
rational arithmetic is used for ``p`` in ``{1, inf}``; ``p = 2`` is float.
"""

from __future__ import annotations

import cmath
import math
from random import Random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .convergence import running_max_stable

INF = "inf"
DEFAULT_GRID = 256


class SpaceError(ValueError):
    pass


def _parse_p(p):
    if p in (1, "1"):
        return 1
    if p in (2, "2"):
        return 2
    if p in (INF, "∞", math.inf) or (isinstance(p, str) and p.lower() in ("inf", "infinity")):
        return INF
    raise SpaceError(f"unsupported exponent p={p!r}; use 1, 2 or inf")


@dataclass(frozen=True)
class PolyRadius:
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(self.r))
        if not self.r:
            raise SpaceError("poly-radius needs at least one component")
        for ri in self.r:
            if not ri > 0:
                raise SpaceError(f"radius components must be positive, got {ri}")

    @property
    def n(self) -> int:
        return len(self.r)

    def power(self, alpha: Sequence[int]):
        out = 1
        for ri, a in zip(self.r, alpha):
            if a:
                out = out * ri**a
        return out


@dataclass(frozen=True)
class WeightedElement:
    n: int
    support: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for alpha, x in self.support.items():
            alpha = tuple(alpha)
            if len(alpha) != self.n or min(alpha, default=0) < 0:
                raise SpaceError(f"multi-index {alpha} does not fit dimension {self.n}")
            if x != 0:
                clean[alpha] = x
        object.__setattr__(self, "support", clean)

    def scale(self, c) -> "WeightedElement":
        return WeightedElement(self.n, {a: c * x for a, x in self.support.items()})

    def __add__(self, other: "WeightedElement") -> "WeightedElement":
        if self.n != other.n:
            raise SpaceError(f"cannot add elements of dimensions {self.n} and {other.n}")
        out = dict(self.support)
        for a, x in other.support.items():
            out[a] = out.get(a, 0) + x
        return WeightedElement(self.n, out)

    @classmethod
    def random(cls, n: int, rng: Random, size: int = 6, max_degree: int = 6, bound: int = 9):
        support = {}
        for _ in range(size):
            alpha = tuple(rng.randint(0, max_degree) for _ in range(n))
            support[alpha] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        return cls(n, support)


def lpr_norm(x: WeightedElement, r: PolyRadius, p=1):
    """``||(x_alpha r^alpha)||_p`` over the support of ``x``.

    Examples
    --------
    >>> lpr_norm(WeightedElement(1, {(k,): 1 for k in range(5)}), PolyRadius((Fraction(1, 2),)), 1)
    Fraction(31, 16)
    """
    if x.n != r.n:
        raise SpaceError(f"element dimension {x.n} != radius dimension {r.n}")
    p = _parse_p(p)
    terms = [abs(v * r.power(a)) for a, v in x.support.items()]
    if p == 1:
        return sum(terms, Fraction(0))
    if p == INF:
        return max(terms, default=Fraction(0))
    return math.sqrt(sum(float(t) ** 2 for t in terms))


@dataclass(frozen=True)
class InclusionBound:
    """Certified operator-norm bound for ``l^p_r -> l^q_s``."""

    source: tuple
    target: tuple
    bound: object
    reason: str
    surrogate: bool = False

    def verify(self, elements: Sequence[WeightedElement]) -> list[int]:
        """Indices of elements with ``||x||_target > bound * ||x||_source``."""
        (p, r), (q, s) = self.source, self.target
        bad = []
        for i, x in enumerate(elements):
            lhs = lpr_norm(x, s, q)
            rhs = self.bound * lpr_norm(x, r, p)
            if isinstance(lhs, float) or isinstance(rhs, float):
                if float(lhs) > float(rhs) * (1 + 1e-12):
                    bad.append(i)
            elif lhs > rhs:
                bad.append(i)
        return bad


def _geometric_product(r: PolyRadius, s: PolyRadius):
    out = 1
    for ri, si in zip(r.r, s.r):
        out = out / (1 - Fraction(si) / Fraction(ri)) if _exact(ri, si) else out / (1 - si / ri)
    return out


def _exact(*xs) -> bool:
    return not any(isinstance(x, float) for x in xs)


def inclusion_norm_bound(source: tuple, target: tuple, surrogate: bool = False):
    """Norm bound for the inclusion ``l^p_r -> l^q_s``, or ``None`` if none is known.

    Parameters
    ----------
    source, target
        Pairs ``(p, PolyRadius)``.
    surrogate
        Mark the result as a stand-in constant rather than a proved one.

    Two cases are certified: ``s <= r`` componentwise with ``q >= p`` gives
    bound 1 (``|x_alpha| s^alpha <= |x_alpha| r^alpha`` and ``l^p`` sits inside
    ``l^q``), and ``s < r`` strictly gives ``prod 1/(1 - s_i/r_i)`` for any
    exponents, since ``sum_alpha (s/r)^alpha`` is that product.
    """
    (p, r), (q, s) = source, target
    p, q = _parse_p(p), _parse_p(q)
    if r.n != s.n:
        raise SpaceError(f"radius dimensions differ: {r.n} vs {s.n}")
    rank = {1: 1, 2: 2, INF: 3}
    if all(si <= ri for si, ri in zip(s.r, r.r)) and rank[q] >= rank[p]:
        return InclusionBound((p, r), (q, s), 1, "monotone in r and in p", surrogate)
    if all(si < ri for si, ri in zip(s.r, r.r)):
        return InclusionBound(
            (p, r), (q, s), _geometric_product(r, s), "geometric sum of (s/r)^alpha", surrogate
        )
    return None


# Cauchy inequalities ---------------------------------------------------------


@dataclass(frozen=True)
class HolomorphicModel:
    name: str
    func: Callable[[complex], complex]
    coefficient: Callable[[int], object]
    radius: float


def _inv_one_plus_square_coeff(k: int) -> int:
    return 0 if k % 2 else (-1) ** (k // 2)


MODELS = {
    "geometric": HolomorphicModel("geometric", lambda w: 1 / (1 - w), lambda k: 1, 1.0),
    "exp": HolomorphicModel("exp", cmath.exp, lambda k: Fraction(1, math.factorial(k)), math.inf),
    "inv1p2": HolomorphicModel("inv1p2", lambda w: 1 / (1 + w * w), _inv_one_plus_square_coeff, 1.0),
    "one": HolomorphicModel("one", lambda w: 1, lambda k: 1 if k == 0 else 0, math.inf),
}


def circle_samples(f: Callable[[complex], complex], z: complex, rho: float, grid: int = DEFAULT_GRID) -> list[float]:
    """``|f|`` on a uniform angular grid of the circle ``|w - z| = rho``."""
    if grid < 1:
        raise SpaceError("grid size must be positive")
    return [abs(f(z + rho * cmath.exp(2j * math.pi * i / grid))) for i in range(grid)]


@dataclass(frozen=True)
class CauchyBounds:
    M: float
    rho: object
    grid: int | None

    def __call__(self, k: int) -> float:
        return self.M / float(self.rho) ** k

    def bounds(self, k_max: int) -> list[float]:
        return [self(k) for k in range(k_max + 1)]

    def violations(self, coeffs: Sequence, rtol: float = 1e-12) -> list[int]:
        return [k for k, a in enumerate(coeffs) if abs(float(a)) > self(k) * (1 + rtol)]


def cauchy_coeff_bound(samples: Sequence[float], rho, grid: int | None = None) -> CauchyBounds:
    """Coefficient bounds ``|a_k| <= M / rho^k`` with ``M`` the largest sample."""
    if not samples:
        raise SpaceError("no samples on the circle")
    if not rho > 0:
        raise SpaceError(f"rho must be positive, got {rho}")
    return CauchyBounds(max(float(v) for v in samples), rho, grid if grid is not None else len(samples))


def model_cauchy_bound(name: str, rho, grid: int = DEFAULT_GRID) -> tuple[CauchyBounds, HolomorphicModel]:
    try:
        model = MODELS[name]
    except KeyError:
        raise SpaceError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    if float(rho) >= model.radius:
        raise SpaceError(f"rho={rho} is outside the disc of holomorphy of {name}")
    return cauchy_coeff_bound(circle_samples(model.func, 0, float(rho), grid), rho, grid), model


# boundedness of families -----------------------------------------------------


@dataclass
class FamilySupTable:
    candidates: list
    sups: dict
    stable: dict
    # per candidate, the sup over the family at each total degree |alpha|
    profiles: dict


def bounded_family_test(fams: Sequence[dict], r_grid: Sequence):
    """Largest ``r`` in ``r_grid`` for which ``|f_alpha| r^|alpha|`` stays bounded.

    Each family member is a map ``alpha -> f_alpha``.  For a candidate ``r``
    the sequence ``s_j = max_{f, |alpha| = j} |f_alpha| r^j`` is tested with
    the running-max rule; returns ``(best_r or None, table)``.
    """
    dims = {len(a) for f in fams for a in f}
    if len(dims) > 1:
        raise SpaceError(f"family members use different index dimensions {sorted(dims)}")
    top = max((sum(a) for f in fams for a in f), default=0)
    col = [0] * (top + 1)
    for f in fams:
        for a, v in f.items():
            j = sum(a)
            col[j] = max(col[j], abs(v))
    sups, stable, profiles = {}, {}, {}
    for r in r_grid:
        if not r > 0:
            raise SpaceError(f"candidate radius must be positive, got {r}")
        prof = [c * r**j for j, c in enumerate(col)]
        profiles[r] = prof
        sups[r] = max(prof, default=0)
        stable[r] = running_max_stable(prof)
    ok = [r for r in r_grid if stable[r]]
    best = max(ok) if ok else None
    return best, FamilySupTable(list(r_grid), sups, stable, profiles)
