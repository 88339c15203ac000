"""Non-realizable lattice points from a face of the zonotope.

Take n rows ``v_1..v_n`` whose columns run over every weight-k vector of
{0,1}^n for each class k in ``ks``.  When the only 0/1 vectors on the face
spanned by the rows are 0 and the rows themselves (the span lemma), and no
subset of rows sums to ``b = (1/2) sum v_i``, that point cannot be a degree
sequence although it lies in the polytope.  Both conditions are finite
checks and are verified here; the shift that moves the face into the
positive orthant is existential and is not materialized.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import InputRangeError

MAX_N = 24


@dataclass(frozen=True)
class CounterexampleSpec:
    n: int
    ks: tuple
    d: int
    columns: tuple   # one tuple of row indices (0-based) per column
    rows: tuple      # row i as a d-bit int; column c is bit c
    b: tuple

    def matrix(self) -> np.ndarray:
        B = np.zeros((self.n, self.d), dtype=np.int64)
        for c, support in enumerate(self.columns):
            B[list(support), c] = 1
        return B


def build_spec(n: int = 8, ks: Sequence[int] = (2, 4)) -> CounterexampleSpec:
    """Column blocks in the given class order, lexicographic inside a block."""
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise InputRangeError(f"n must lie in 1..{MAX_N}")
    ks = tuple(ks)
    if not ks or len(set(ks)) != len(ks):
        raise InputRangeError("ks must be a nonempty list of distinct classes")
    for k in ks:
        if not isinstance(k, int) or not 1 <= k < n:
            raise InputRangeError(f"class {k!r} not in 1..n-1")
        if k % 2:
            raise InputRangeError(f"b not integral: columns of weight {k} have an odd sum")
    d = sum(math.comb(n, k) for k in ks)
    if d > 1 << 22:
        raise InputRangeError(f"d = {d} columns is too large")
    columns = tuple(c for k in ks for c in combinations(range(n), k))
    rows = [0] * n
    for col, support in enumerate(columns):
        for i in support:
            rows[i] |= 1 << col
    b = tuple(len(support) // 2 for support in columns)
    return CounterexampleSpec(n, ks, d, columns, tuple(rows), b)


def _label(lam: Sequence[Fraction]) -> str:
    nonzero = [i for i, x in enumerate(lam) if x]
    if not nonzero:
        return "0"
    if len(nonzero) == 1 and lam[nonzero[0]] == 1:
        return f"e{nonzero[0] + 1}"
    return "(" + ",".join(str(x) for x in lam) + ")"


@dataclass(frozen=True)
class SpanLemmaResult:
    holds: bool
    candidates: int
    survivors: tuple


def verify_span_lemma(spec: CounterexampleSpec) -> SpanLemmaResult:
    """Find every lambda with ``lambda^T B`` a 0/1 vector, via pair sums.

    Pair sums ``s_12, s_13, s_23, s_14..s_1n`` fix lambda; a further bit
    ``s_24`` is enumerated and must match, so each admissible lambda is
    hit exactly once among the ``2^(n+1)`` candidates.
    """
    n = spec.n
    if 2 not in spec.ks or n < 4:
        raise InputRangeError("verification method inapplicable: needs a pair block and n >= 4")
    pairs = list(combinations(range(n), 2))
    survivors = []
    count = 0
    for bits in range(1 << (n + 1)):
        count += 1
        s12, s13, s23 = bits & 1, (bits >> 1) & 1, (bits >> 2) & 1
        l1 = Fraction(s12 + s13 - s23, 2)
        lam = [l1, s12 - l1, s13 - l1] + [((bits >> i) & 1) - l1 for i in range(3, n)]
        s24 = (bits >> n) & 1
        if lam[1] + lam[3] != s24:
            continue
        if any(lam[i] + lam[j] not in (0, 1) for i, j in pairs):
            continue
        if any(sum(lam[i] for i in support) not in (0, 1) for support in spec.columns):
            continue
        survivors.append(tuple(lam))
    expected = {tuple(Fraction(0) for _ in range(n))}
    expected |= {tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)}
    holds = set(survivors) == expected and len(survivors) == n + 1
    survivors.sort(key=lambda lam: (sum(1 for x in lam if x), [-x for x in lam]))
    return SpanLemmaResult(holds, count, tuple(_label(lam) for lam in survivors))


def verify_face_nonrealizable(spec: CounterexampleSpec) -> tuple[bool, int]:
    """True when no subset of the rows sums to ``b``; also the subset count."""
    B = spec.matrix()
    subsets = np.arange(1 << spec.n, dtype=np.int64)
    choose = ((subsets[:, None] >> np.arange(spec.n)) & 1).astype(np.int64)
    sums = choose @ B
    hits = (sums == np.array(spec.b, dtype=np.int64)).all(axis=1)
    return not bool(hits.any()), int(subsets.size)


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-exact elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class FaceCertificate:
    spec: CounterexampleSpec
    span_lemma: SpanLemmaResult
    face_nonrealizable: bool
    subsets: int
    rank: int

    @property
    def conclusion(self) -> bool:
        return self.span_lemma.holds and self.face_nonrealizable

    def to_dict(self) -> dict:
        s = self.spec
        return {
            "n": s.n,
            "ks": list(s.ks),
            "d": s.d,
            "b": list(s.b),
            "span_lemma": {"holds": self.span_lemma.holds, "candidates": self.span_lemma.candidates,
                           "survivors": list(self.span_lemma.survivors)},
            "face": {"nonrealizable": self.face_nonrealizable, "subsets": self.subsets},
            "rank": self.rank,
            "conclusion": self.conclusion,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def emit_certificate(spec: CounterexampleSpec) -> FaceCertificate:
    lemma = verify_span_lemma(spec)
    ok, subsets = verify_face_nonrealizable(spec)
    rank = exact_rank(spec.matrix().tolist())
    return FaceCertificate(spec, lemma, ok, subsets, rank)
