"""Skew and symmetric cochains on canonical simplices, and weighted inner products."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex import WeightedComplex

FLAVORS = ("skew", "sym")


def check_flavor(flavor: str) -> str:
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be 'skew' or 'sym', got {flavor!r}")
    return flavor


def permutation_parity(seq: Sequence) -> int:
    """Parity (0 or 1) of the permutation sorting ``seq`` ascending, by inversion count."""
    inv = 0
    m = len(seq)
    for i in range(m):
        for j in range(i + 1, m):
            if seq[i] > seq[j]:
                inv += 1
    return inv & 1


def orientation_sign(tup: Sequence, flavor: str) -> int:
    """Sign relating ``f(tup)`` to the value stored on the sorted tuple."""
    if check_flavor(flavor) == "sym":
        return 1
    return -1 if permutation_parity(tup) else 1


@dataclass
class Cochain:
    """A degree-``k`` cochain stored on the canonical simplices of ``complex``.

    ``values`` may be an object array (e.g. of :class:`fractions.Fraction`)
    for exact work; the default is complex.
    """

    complex: WeightedComplex
    k: int
    flavor: str
    values: np.ndarray

    def __post_init__(self):
        check_flavor(self.flavor)
        if not 0 <= self.k <= self.complex.n:
            raise ValueError(f"degree k={self.k} outside 0..{self.complex.n}")
        if self.values.shape != (self.complex.size(self.k),):
            raise ValueError(
                f"expected {self.complex.size(self.k)} values for degree {self.k}, "
                f"got shape {self.values.shape}"
            )

    @classmethod
    def zeros(cls, cx: WeightedComplex, k: int, flavor: str = "skew", dtype=complex):
        return cls(cx, k, flavor, np.zeros(cx.size(k), dtype=dtype))

    @classmethod
    def indicator(cls, cx: WeightedComplex, simplex: Sequence, flavor: str = "skew"):
        """``+1`` on ``simplex`` taken with the orientation of the given tuple."""
        k = len(simplex) - 1
        f = cls.zeros(cx, k, flavor)
        f.set(simplex, 1)
        return f

    def _locate(self, tup: Sequence) -> int:
        if len(set(tup)) != len(tup):
            raise ValueError(f"tuple {tuple(tup)!r} has repeated vertices")
        if len(tup) != self.k + 1:
            raise ValueError(f"tuple {tuple(tup)!r} is not a {self.k}-simplex")
        s = tuple(sorted(tup))
        try:
            return self.complex.index[self.k][s]
        except KeyError:
            raise KeyError(f"{s!r} is not a registered {self.k}-simplex") from None

    def evaluate(self, tup: Sequence):
        return orientation_sign(tup, self.flavor) * self.values[self._locate(tup)]

    def set(self, tup: Sequence, value) -> None:
        """Assign ``f(tup) = value``, storing the sign-adjusted canonical value."""
        self.values[self._locate(tup)] = orientation_sign(tup, self.flavor) * value

    def __call__(self, tup: Sequence):
        return self.evaluate(tup)


def evaluate(f: Cochain, tup: Sequence):
    return f.evaluate(tup)


@dataclass(frozen=True)
class WeightedMetric:
    k: int
    diag: np.ndarray

    @classmethod
    def of(cls, cx: WeightedComplex, k: int) -> "WeightedMetric":
        if 0 <= k <= cx.n:
            return cls(k, cx.weight_arrays[k])
        return cls(k, np.zeros(0))

    def norm(self, values: np.ndarray) -> float:
        return float(np.sqrt(np.sum(self.diag * np.abs(values) ** 2)))


def inner_product(f: Cochain, g: Cochain, metric: WeightedMetric | None = None):
    """``sum_s m_k(s) f(s) conj(g(s))`` over canonical simplices.

    One term per unordered simplex: the ``(k+1)!`` ordered tuples of each
    simplex carry equal contributions, which cancels the factorial
    normalisation of the ordered-tuple sum.
    """
    if f.k != g.k:
        raise ValueError(f"degree mismatch: {f.k} vs {g.k}")
    if f.complex is not g.complex:
        raise ValueError("cochains live on different complexes")
    if metric is None:
        metric = WeightedMetric.of(f.complex, f.k)
    if metric.k != f.k:
        raise ValueError(f"metric degree {metric.k} does not match cochain degree {f.k}")
    return np.sum(metric.diag * f.values * np.conj(g.values))
