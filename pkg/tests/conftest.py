from __future__ import annotations

from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from analytica.series import TruncatedSeries

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))


@st.composite
def rational_series(draw, order=None, max_order=16):
    n = draw(st.integers(0, max_order)) if order is None else order
    return TruncatedSeries(tuple(draw(rationals) for _ in range(n + 1)))


def brute_product(a, b):
    """Full polynomial product, no truncation."""
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out
