"""Exact membership in the degree-sequence zonotope.

The zonotope is ``{A x : x in [0, 1]^(2^d - 1)}`` where the columns of ``A``
are all nonzero 0/1 vectors.  Membership is decided by a two-phase
bounded-variable simplex over those columns, priced implicitly from the dual
vector, in exact integer arithmetic.  The result is either a basic feasible
solution, split into the columns at 1 and at most d fractional columns, or a
dual vector ``c`` with ``<c, b>`` exceeding the support function ``h(c)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .core import (
    EdgeSet,
    as_rational_vector,
    check_dimension,
    degree_sequence,
    format_rational,
    mask_to_vector,
    mask_to_vertices,
)
from .errors import ContractError, DimensionError, InputRangeError, ResourceLimitError

_LOWER, _UPPER, _BASIC = 0, 1, 2
DEFAULT_MAX_PIVOTS = 1_000_000
# consecutive degenerate basis changes before switching to Bland's rule
_DEGENERATE_RUN = 30
# entering candidates examined per pricing pass in Dantzig mode
_TOP_K = 32


def _subset_sums(weights: Sequence[int]) -> np.ndarray:
    """Array ``s`` with ``s[m] = sum of weights[i] over bits i of m``."""
    d = len(weights)
    bound = sum(abs(int(w)) for w in weights)
    dtype = np.int64 if bound < (1 << 62) else object
    sums = np.zeros(1 << d, dtype=dtype)
    for i, w in enumerate(weights):
        half = 1 << i
        sums[half: 2 * half] = sums[:half] + (int(w) if dtype is object else np.int64(w))
    return sums


def _bits(m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m.bit_length()) if (m >> i) & 1)


_BITS = [_bits(m) for m in range(1 << 16)]
_ORDERS: dict[int, list[int]] = {}


def _popcount_order(d: int) -> list[int]:
    order = _ORDERS.get(d)
    if order is None:
        order = sorted(range(1, 1 << d), key=lambda m: (-m.bit_count(), m))
        _ORDERS[d] = order
    return order


def _integer_direction(c: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(Fraction(x).denominator for x in c)) if c else 1
    return [int(Fraction(x) * den) for x in c], den


def support_function(c: Sequence) -> Fraction:
    """``h(c) = max over the zonotope of <c, x>``, i.e. the sum of the
    positive parts of ``<c, v>`` over all nonzero 0/1 vectors ``v``."""
    c = as_rational_vector(c)
    check_dimension(len(c))
    nums, den = _integer_direction(c)
    sums = _subset_sums(nums)
    positive = sums[sums > 0]
    total = int(positive.sum()) if positive.size else 0
    return Fraction(total, den)


@dataclass(frozen=True)
class Decomposition:
    """``b = degree_sequence(integral) + sum(alpha * v for v, alpha in fractional)``."""

    b: tuple
    integral: EdgeSet
    fractional: tuple  # of (mask, Fraction) with 0 < alpha < 1

    def __post_init__(self):
        d = self.integral.d
        if len(self.fractional) > d:
            raise ContractError(f"{len(self.fractional)} fractional columns exceed d={d}")
        total = [Fraction(x) for x in degree_sequence(self.integral)]
        seen = set()
        for mask, alpha in self.fractional:
            if not 0 < alpha < 1:
                raise ContractError(f"fractional weight {alpha} not in (0, 1)")
            if mask in self.integral.edges or mask in seen:
                raise ContractError("fractional column repeats an edge")
            seen.add(mask)
            for i in range(d):
                if (mask >> i) & 1:
                    total[i] += alpha
        if tuple(total) != tuple(self.b):
            raise ContractError("decomposition does not reproduce b")

    @property
    def d(self) -> int:
        return self.integral.d

    def fractional_part(self) -> tuple[Fraction, ...]:
        """The vector ``W`` contributed by the fractional columns."""
        w = [Fraction(0)] * self.d
        for mask, alpha in self.fractional:
            for i in range(self.d):
                if (mask >> i) & 1:
                    w[i] += alpha
        return tuple(w)

    def to_dict(self) -> dict:
        return {
            "status": "inside",
            "integral": self.integral.vertex_lists(),
            "fractional": [{"edge": mask_to_vertices(m), "alpha": format_rational(a)}
                           for m, a in sorted(self.fractional)],
        }


@dataclass(frozen=True)
class SeparationCertificate:
    """A direction ``c`` with ``<c, b> > h(c)``; recomputed on construction."""

    c: tuple
    lhs: Fraction
    rhs: Fraction
    b: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.b:
            if sum(ci * bi for ci, bi in zip(self.c, self.b)) != self.lhs:
                raise ContractError("certificate lhs does not match <c, b>")
        if support_function(self.c) != self.rhs:
            raise ContractError("certificate rhs does not match h(c)")
        if not self.lhs > self.rhs:
            raise ContractError("certificate does not separate")

    @classmethod
    def for_point(cls, c, b) -> "SeparationCertificate":
        c = as_rational_vector(c)
        b = as_rational_vector(b)
        lhs = sum((ci * bi for ci, bi in zip(c, b)), Fraction(0))
        return cls(c, lhs, support_function(c), b)

    def to_dict(self) -> dict:
        return {"status": "outside", "c": [format_rational(x) for x in self.c],
                "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs)}


@dataclass(frozen=True)
class Inside:
    decomposition: Decomposition

    @property
    def inside(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return self.decomposition.to_dict()


@dataclass(frozen=True)
class Outside:
    certificate: SeparationCertificate
    reason: str = "separated"

    @property
    def inside(self) -> bool:
        return False

    def to_dict(self) -> dict:
        out = self.certificate.to_dict()
        if self.reason != "separated":
            out["reason"] = self.reason
        return out


MembershipResult = Union[Inside, Outside]


class _BoundedSimplex:
    """Phase-1 simplex for ``A x = b, 0 <= x <= L`` with ``b`` integral.

    Variables are structural masks ``1 .. 2^d - 1`` and one artificial per
    row (id ``-1 - row``), which leaves for good once nonbasic.  The basis
    inverse is kept as ``M / D`` with ``M`` the (signed) adjugate, so basic
    values ``X / D`` and duals ``Y / D`` stay integral.
    """

    def __init__(self, d: int, b: list[int], upper: int, max_pivots: int):
        self.d = d
        self.b = b
        self.L = upper
        self.max_pivots = max_pivots
        self.status = np.zeros(1 << d, dtype=np.uint8)
        self.status[0] = _BASIC  # the zero mask never enters
        self.basis = [-1 - r for r in range(d)]
        self.M = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        self.D = 1
        self.ubsum = [0] * d
        self.pivots = 0
        self.bland = False
        self.degenerate_run = 0
        self.separated = False
        self._crash()

    def _crash(self):
        """Start with every column at its upper bound that still fits under b,
        largest support first; artificials carry the (nonnegative) rest."""
        r = list(self.b)
        L = self.L
        for m in _popcount_order(self.d):
            bits = _BITS[m] if m < len(_BITS) else _bits(m)
            if all(r[i] >= L for i in bits):
                for i in bits:
                    r[i] -= L
                self.status[m] = _UPPER
        self.ubsum = [bi - ri for bi, ri in zip(self.b, r)]
        self.X = r

    def _column(self, var: int) -> list[int]:
        if var < 0:
            r = -1 - var
            return [row[r] for row in self.M]
        bits = _BITS[var] if var < len(_BITS) else _bits(var)
        return [sum([Mi[k] for k in bits]) for Mi in self.M]

    def _duals(self) -> list[int]:
        Y = [0] * self.d
        for r, var in enumerate(self.basis):
            if var < 0:
                Mr = self.M[r]
                for k in range(self.d):
                    Y[k] += Mr[k]
        return Y

    def objective_numerator(self) -> int:
        return sum(self.X[r] for r, var in enumerate(self.basis) if var < 0)

    def _recompute_values(self):
        rhs = [bi - ui for bi, ui in zip(self.b, self.ubsum)]
        self.X = [sum(m * x for m, x in zip(row, rhs)) for row in self.M]

    def _ratio_test(self, alpha: list[int], sgn: int):
        """Smallest step (as num/den) and leaving row, or ``None`` for a bound flip."""
        best_num, best_den = self.L, 1  # entering variable's own bound
        leave = None
        leave_key = None
        LD = self.L * self.D
        for r in range(self.d):
            delta = sgn * alpha[r]
            if delta > 0:
                num, den, to_upper = self.X[r], delta, False
            elif delta < 0 and self.basis[r] > 0:
                num, den, to_upper = LD - self.X[r], -delta, True
            else:
                continue
            lhs, rhs = num * best_den, best_num * den
            key = self.basis[r]
            if lhs < rhs or (lhs == rhs and leave is not None and key < leave_key):
                best_num, best_den = num, den
                leave, leave_key = (r, to_upper), key
        return leave, best_num, best_den

    def _pivot(self, entering: int, alpha: list[int], r: int, leaves_upper: bool):
        leaving = self.basis[r]
        p = alpha[r]
        M, D = self.M, self.D
        Mr = M[r]
        newM = []
        for i in range(self.d):
            if i == r:
                newM.append(list(Mr))
                continue
            a = alpha[i]
            Mi = M[i]
            if a == 0:
                newM.append([(p * x) // D for x in Mi])
            else:
                newM.append([(p * x - a * y) // D for x, y in zip(Mi, Mr)])
        if p < 0:
            newM = [[-x for x in row] for row in newM]
            p = -p
        self.M, self.D = newM, p
        if self.status[entering] == _UPPER:
            for i in range(self.d):
                if (entering >> i) & 1:
                    self.ubsum[i] -= self.L
        self.status[entering] = _BASIC
        self.basis[r] = entering
        if leaving > 0:
            if leaves_upper:
                self.status[leaving] = _UPPER
                for i in range(self.d):
                    if (leaving >> i) & 1:
                        self.ubsum[i] += self.L
            else:
                self.status[leaving] = _LOWER
        self._recompute_values()
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise ResourceLimitError(f"LP pivot cap {self.max_pivots} exceeded")

    def _flip(self, entering: int, alpha: list[int], sgn: int):
        L = self.L
        if sgn > 0:
            self.status[entering] = _UPPER
            for i in range(self.d):
                if (entering >> i) & 1:
                    self.ubsum[i] += L
        else:
            self.status[entering] = _LOWER
            for i in range(self.d):
                if (entering >> i) & 1:
                    self.ubsum[i] -= L
        self.X = [x - sgn * L * a for x, a in zip(self.X, alpha)]

    def _candidates(self, Y: list[int]) -> np.ndarray:
        vals = _subset_sums(Y)
        # the current duals may already separate b / L (weak duality): stop early
        positive = vals[vals > 0]
        if sum(y * bi for y, bi in zip(Y, self.b)) > self.L * int(positive.sum()):
            self.separated = True
            return np.zeros(0, dtype=np.int64)
        at_lower = (self.status == _LOWER) & (vals > 0)
        at_upper = (self.status == _UPPER) & (vals < 0)
        eligible = np.nonzero(at_lower | at_upper)[0]
        if self.bland or eligible.size == 0:
            return eligible
        scores = np.abs(vals[eligible])
        if vals.dtype == object:
            order = sorted(range(eligible.size), key=lambda k: (-scores[k], eligible[k]))
            return eligible[np.asarray(order, dtype=np.int64)]
        if eligible.size > _TOP_K:
            keep = np.argpartition(-scores, _TOP_K - 1)[:_TOP_K]
            # argpartition is not stable; re-admit every column tied with the cutoff
            cutoff = scores[keep].min()
            keep = np.nonzero(scores >= cutoff)[0]
            eligible, scores = eligible[keep], scores[keep]
        return eligible[np.lexsort((eligible, -scores))]

    def solve(self):
        while True:
            if self.objective_numerator() == 0:
                return True
            Y = self._duals()
            cands = self._candidates(Y)
            if cands.size == 0:
                return False
            for m in cands:
                m = int(m)
                sgn = 1 if self.status[m] == _LOWER else -1
                alpha = self._column(m)
                leave, num, den = self._ratio_test(alpha, sgn)
                if leave is None:
                    self._flip(m, alpha, sgn)
                    if self.objective_numerator() == 0:
                        return True
                    continue
                r, to_upper = leave
                if num == 0:
                    self.degenerate_run += 1
                    if self.degenerate_run > _DEGENERATE_RUN:
                        self.bland = True
                else:
                    self.degenerate_run = 0
                    self.bland = False
                self._pivot(m, alpha, r, to_upper)
                break

    def decomposition(self, b_rational: tuple) -> Decomposition:
        LD = self.L * self.D
        integral = {int(m) for m in np.nonzero(self.status == _UPPER)[0]}
        fractional = []
        for r, var in enumerate(self.basis):
            if var <= 0:
                continue
            x = self.X[r]
            if x == LD:
                integral.add(var)
            elif 0 < x < LD:
                fractional.append((var, Fraction(x, LD)))
            elif x != 0:
                raise ContractError("basic value outside its bounds")
        return Decomposition(b_rational, EdgeSet(self.d, frozenset(integral)), tuple(sorted(fractional)))

    def separating_direction(self) -> list[int]:
        Y = self._duals()
        g = math.gcd(*Y)
        return [y // g for y in Y] if g else Y


@lru_cache(maxsize=None)
def _sign_support(d: int, plus: int, minus: int) -> int:
    # h depends only on how many +1 and -1 entries a sign vector has
    return int(support_function([1] * plus + [-1] * minus + [0] * (d - plus - minus)))


def quick_separation(b: Sequence) -> SeparationCertificate | None:
    """Try a few cheap directions before any LP.

    Candidates are +-sign(b - center), +-1, and integer roundings of the
    outer normal at ``b`` of the ellipsoid ``(x-c)^T (A A^T)^-1 (x-c) = N/4``
    that encloses the zonotope.  Any hit is an exact certificate.
    """
    b = as_rational_vector(b)
    d = len(b)
    c0 = Fraction(1 << d, 4)
    sign = [(x > c0) - (x < c0) for x in b]
    for c in (sign, [-s for s in sign], [1] * d, [-1] * d):
        plus = sum(1 for s in c if s > 0)
        minus = sum(1 for s in c if s < 0)
        if plus + minus and sum(ci * bi for ci, bi in zip(c, b) if ci) > _sign_support(d, plus, minus):
            return SeparationCertificate.for_point(c, b)
    y = np.array([float(x - c0) for x in b])
    normal = (d + 1) * y - y.sum()
    top = np.abs(normal).max()
    if top == 0:
        return None
    for scale in (1, 4, 16, 64):
        c = [int(v) for v in np.rint(normal / top * scale)]
        if any(c) and sum(ci * bi for ci, bi in zip(c, b)) > support_function(c):
            return SeparationCertificate.for_point(c, b)
    return None


def membership(b: Sequence, *, max_pivots: int = DEFAULT_MAX_PIVOTS, prefilter: bool = True) -> MembershipResult:
    """Decide whether ``b`` lies in the degree-sequence zonotope.

    Parameters
    ----------
    b : sequence of int, Fraction or "p/q" strings
        Nonnegative coordinates.
    max_pivots : int
        Basis changes allowed before :class:`ResourceLimitError`.
    prefilter : bool
        Try :func:`quick_separation` before the LP.

    Returns
    -------
    Inside or Outside
        ``Inside`` carries a :class:`Decomposition` taken from a basic
        feasible solution (at most d fractional columns); ``Outside`` a
        :class:`SeparationCertificate`.  Both are re-verified exactly.
    """
    b = as_rational_vector(b)
    d = len(b)
    check_dimension(d)
    if any(x < 0 for x in b):
        raise InputRangeError("the zonotope lies in the nonnegative orthant; negative coordinate given")
    if prefilter:
        cert = quick_separation(b)
        if cert is not None:
            return Outside(cert, reason="filter")
    nums, den = _integer_direction(b)
    lp = _BoundedSimplex(d, nums, den, max_pivots)
    if lp.solve():
        return Inside(lp.decomposition(b))
    c = lp.separating_direction()
    return Outside(SeparationCertificate.for_point(c, b))


def decompose_shifted(b: Sequence[int], shift: Sequence[int], **kwargs) -> MembershipResult:
    """Membership of ``b - shift``.

    A shifted point with a negative coordinate ``i`` is rejected without an
    LP, as ``Outside`` with ``reason="negative"`` and the direction ``-e_i``
    (for which ``h = 0``).
    """
    if len(b) != len(shift):
        raise DimensionError("b and shift have different lengths")
    point = as_rational_vector(bi - si for bi, si in zip(b, shift))
    for i, x in enumerate(point):
        if x < 0:
            c = [0] * len(point)
            c[i] = -1
            return Outside(SeparationCertificate.for_point(c, point), reason="negative")
    return membership(point, **kwargs)
