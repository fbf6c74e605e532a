"""Downward-closed multi-index sets for generalized-degree polynomial spaces.

An exponent set A collects all alpha in N^m with ||alpha||_p <= n. The norm
parameter p tunes how strongly mixed monomials enter the spanned space
Pi_A = span{x^alpha}: p=1 is total degree, p=2 Euclidean degree, p=inf
maximum degree. Sets are kept in lexicographic order read from the last
entry to the first, so e.g. (5,3,1) < (1,0,3) < (1,1,3).
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "MultiIndexSet",
    "build_index_set",
    "lex_compare",
    "is_downward_closed",
    "covering_degree",
]


def lex_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Compare two equal-length multi-indices, last entry first.

    Returns -1 when ``a`` precedes ``b``, 0 when equal, 1 otherwise.
    """
    ta = tuple(int(v) for v in a)
    tb = tuple(int(v) for v in b)
    if len(ta) != len(tb):
        raise DomainError(f"multi-index length mismatch: {len(ta)} vs {len(tb)}")
    ra, rb = ta[::-1], tb[::-1]
    if ra < rb:
        return -1
    return 1 if ra > rb else 0


def _in_ball(alpha: Sequence[int], n: int, p: float) -> bool:
    # Membership ||alpha||_p <= n. Exact integer arithmetic for p in {1, 2, inf}
    # so boundary indices are never misclassified; those decide set sizes and
    # hence all rank bookkeeping downstream.
    if p == 1:
        return sum(alpha) <= n
    if p == 2:
        return sum(a * a for a in alpha) <= n * n
    if math.isinf(p):
        return (max(alpha) if len(alpha) else 0) <= n
    return float(sum(float(a) ** p for a in alpha)) <= float(n) ** p


def covering_degree(indices, p: float) -> int:
    """Smallest n such that every given index satisfies ||alpha||_p <= n."""
    arr = np.atleast_2d(np.asarray(indices, dtype=np.int64))
    if arr.size == 0:
        return 0
    if p == 1:
        return int(arr.sum(axis=1).max())
    if p == 2:
        s = int((arr * arr).sum(axis=1).max())
        n = math.isqrt(s)
        return n if n * n >= s else n + 1
    if math.isinf(p):
        return int(arr.max())
    n = int(math.ceil(max(float((arr.astype(float) ** p).sum(axis=1).max()) ** (1.0 / p), 0.0)))
    while n > 0 and all(_in_ball(row, n - 1, p) for row in arr):
        n -= 1
    while not all(_in_ball(row, n, p) for row in arr):
        n += 1
    return n


class MultiIndexSet:
    """Ordered, downward-closed exponent set defining a polynomial space.

    Attributes
    ----------
    m : int
        Ambient dimension (length of every index).
    n : int
        Degree bound.
    p : float
        Norm selector; ``math.inf`` for maximum degree.
    indices : ndarray, shape (size, m)
        All indices in lexicographic order (last entry first), read-only.
    """

    def __init__(self, m: int, n: int, p: float, indices):
        self.m = int(m)
        self.n = int(n)
        self.p = float(p)
        arr = np.asarray(indices, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != self.m:
            raise DomainError("indices must form a (size, m) array")
        arr = arr.copy()
        arr.setflags(write=False)
        self.indices = arr
        self._pos = {tuple(row): i for i, row in enumerate(map(tuple, arr.tolist()))}

    def __len__(self) -> int:
        return self.indices.shape[0]

    def __iter__(self):
        return iter(map(tuple, self.indices.tolist()))

    def __contains__(self, alpha) -> bool:
        return tuple(int(v) for v in alpha) in self._pos

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiIndexSet)
            and self.m == other.m
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"MultiIndexSet(m={self.m}, n={self.n}, p={p}, size={len(self)})"

    def position(self, alpha) -> int:
        """Row of ``alpha`` within ``indices``; DomainError when absent."""
        key = tuple(int(v) for v in alpha)
        try:
            return self._pos[key]
        except KeyError:
            raise DomainError(f"index {key} is not in the set") from None

    @property
    def max_degrees(self) -> np.ndarray:
        """Per-dimension maxima n_i = max_alpha alpha_i."""
        return self.indices.max(axis=0)

    def as_tuples(self) -> list:
        return list(self)


def build_index_set(m: int, n: int, p) -> MultiIndexSet:
    """All multi-indices alpha in N^m with ||alpha||_p <= n, in lex order.

    The supported (and tested) norms are p = 1, 2 and inf; other positive
    values work through the same membership predicate but carry no exactness
    guarantee on the ball boundary. Sizes obey |A| = C(m+n, n) for p=1 and
    (n+1)^m for p=inf.
    """
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise DomainError("dimension m must be a positive integer")
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise DomainError("degree n must be a non-negative integer")
    try:
        pval = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"invalid degree norm p={p!r}") from None
    if math.isnan(pval) or pval <= 0:
        raise DomainError("degree norm p must be positive")

    selected = [
        alpha
        for alpha in itertools.product(range(int(n) + 1), repeat=int(m))
        if _in_ball(alpha, int(n), pval)
    ]
    selected.sort(key=lambda t: t[::-1])
    return MultiIndexSet(m, n, pval, np.array(selected, dtype=np.int64).reshape(len(selected), m))


def is_downward_closed(index_set) -> bool:
    """True iff every component-wise predecessor of each index is present."""
    if isinstance(index_set, MultiIndexSet):
        tuples = set(map(tuple, index_set.indices.tolist()))
    else:
        tuples = {tuple(int(v) for v in alpha) for alpha in index_set}
    for alpha in tuples:
        for i, ai in enumerate(alpha):
            if ai and alpha[:i] + (ai - 1,) + alpha[i + 1 :] not in tuples:
                return False
    return True
