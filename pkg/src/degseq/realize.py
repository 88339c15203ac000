"""Constructive realization of integer points deep inside the zonotope.

The pipelines start from the integral part ``P`` of a basic LP solution for
a shifted point and move to ``b`` with four degree-changing moves:

* ``claim1`` adds a *good pair* ``f, g`` with ``f + g = 1 + e_i``;
* ``claim2`` raises every degree by one;
* ``swap`` trades one unit of degree from vertex ``i`` to vertex ``j``;
* ``trim`` lowers the total degree by one.

Vertices are 1-based in every public signature and in traces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from . import oracle
from .core import EdgeSet, check_degree_vector, complement, degree_sequence, max_degree, reflect
from .errors import ContractError, InputRangeError, ResourceLimitError
from .zonotope import Decomposition, SeparationCertificate, decompose_shifted, membership


@lru_cache(maxsize=None)
def _with_bit(d: int, i: int) -> np.ndarray:
    m = np.arange(1 << d, dtype=np.int64)
    return m[(m >> i) & 1 == 1]


@lru_cache(maxsize=None)
def _with_bit_without(d: int, i: int, j: int) -> np.ndarray:
    m = np.arange(1 << d, dtype=np.int64)
    return m[((m >> i) & 1 == 1) & ((m >> j) & 1 == 0)]


@lru_cache(maxsize=None)
def _by_popcount(d: int) -> np.ndarray:
    return np.array(sorted(range(1, 1 << d), key=lambda m: (m.bit_count(), m)), dtype=np.int64)


class _Work:
    """Mutable edge set with running degrees; private to one realization."""

    def __init__(self, H: EdgeSet):
        self.d = H.d
        self.present = np.zeros(1 << H.d, dtype=bool)
        for e in H.edges:
            self.present[e] = True
        self.deg = list(degree_sequence(H))
        self.size = len(H.edges)
        self.steps: list[dict] = []

    def _add(self, m: int):
        if self.present[m]:
            raise ContractError(f"edge {m} already present")
        self.present[m] = True
        self.size += 1
        for i in range(self.d):
            if (m >> i) & 1:
                self.deg[i] += 1

    def _remove(self, m: int):
        self.present[m] = False
        self.size -= 1
        for i in range(self.d):
            if (m >> i) & 1:
                self.deg[i] -= 1

    def edges(self) -> EdgeSet:
        return EdgeSet(self.d, frozenset(int(m) for m in np.nonzero(self.present)[0]))

    def _min_edge(self) -> int:
        order = _by_popcount(self.d)
        hit = self.present[order]
        if not hit.any():
            raise ContractError("edge set is empty")
        return int(order[int(np.argmax(hit))])

    def claim1(self, i: int, record: bool = True):
        d = self.d
        if d < 2:
            raise ContractError("good pairs need d >= 2")
        if self.deg[i] >= 1 << (d - 2):
            raise ContractError(f"claim1 at vertex {i + 1}: degree {self.deg[i]} is not below 2^(d-2)", self.steps)
        bit = 1 << i
        fs = _with_bit(d, i)
        gs = ((1 << d) - 1) ^ fs | bit
        free = ~self.present[fs] & ~self.present[gs]
        if not free.any():
            raise ContractError(f"claim1 at vertex {i + 1}: no unused good pair", self.steps)
        k = int(np.argmax(free))
        self._add(int(fs[k]))
        self._add(int(gs[k]))
        if record:
            self.steps.append({"op": "claim1", "i": i + 1})

    def claim2(self):
        d = self.d
        cap = 1 << (d - 2) if d >= 2 else 0
        if any(x >= cap for x in self.deg):
            raise ContractError("claim2 needs every degree below 2^(d-2)", self.steps)
        if self.size == 0:
            self._add((1 << d) - 1)
        else:
            u = self._min_edge()
            low = u & -u
            self._remove(u)
            if u != low:
                self._add(u ^ low)
            self.claim1(low.bit_length() - 1, record=False)
        self.steps.append({"op": "claim2"})

    def swap(self, i: int, j: int):
        if not self.deg[i] > self.deg[j]:
            raise ContractError(f"swap({i + 1},{j + 1}) needs degree {i + 1} > degree {j + 1}", self.steps)
        us = _with_bit_without(self.d, i, j)
        moved = us ^ ((1 << i) | (1 << j))
        ok = self.present[us] & ~self.present[moved]
        if not ok.any():
            raise ContractError(f"swap({i + 1},{j + 1}): no movable edge", self.steps)
        k = int(np.argmax(ok))
        self._remove(int(us[k]))
        self._add(int(moved[k]))
        self.steps.append({"op": "swap", "i": i + 1, "j": j + 1})

    def trim(self):
        u = self._min_edge()
        top = 1 << (u.bit_length() - 1)
        self._remove(u)
        if u != top:
            self._add(u ^ top)
        self.steps.append({"op": "trim"})

    def transport(self, b: Sequence[int], I: Sequence[int], J: Sequence[int]):
        q = self.deg
        for i in I:
            for j in J:
                if b[i] > b[j]:
                    raise ContractError(f"transport: b_{i + 1} = {b[i]} > b_{j + 1} = {b[j]}", self.steps)
        for i in I:
            if q[i] > b[i]:
                raise ContractError(f"transport: q_{i + 1} = {q[i]} exceeds b_{i + 1} = {b[i]} on I", self.steps)
        for j in J:
            if q[j] < b[j]:
                raise ContractError(f"transport: q_{j + 1} = {q[j]} below b_{j + 1} = {b[j]} on J", self.steps)
        if sum(q) != sum(b):
            raise ContractError("transport: degree sums differ", self.steps)
        while True:
            src = next((j for j in J if q[j] > b[j]), None)
            if src is None:
                break
            dst = next(i for i in I if q[i] < b[i])
            self.swap(src, dst)


def _vertex(i: int, d: int) -> int:
    if not isinstance(i, int) or not 1 <= i <= d:
        raise InputRangeError(f"vertex {i!r} not in 1..{d}")
    return i - 1


def claim1_step(H: EdgeSet, i: int) -> EdgeSet:
    """Add the first unused good pair for vertex ``i`` (degrees rise by 1 + e_i)."""
    w = _Work(H)
    w.claim1(_vertex(i, H.d))
    return w.edges()


def claim2_step(H: EdgeSet) -> EdgeSet:
    """Raise every degree by one; needs all degrees below 2^(d-2)."""
    w = _Work(H)
    w.claim2()
    return w.edges()


def swap_step(H: EdgeSet, i: int, j: int) -> EdgeSet:
    """Move one unit of degree from vertex ``i`` to vertex ``j``."""
    w = _Work(H)
    w.swap(_vertex(i, H.d), _vertex(j, H.d))
    return w.edges()


def trim_step(H: EdgeSet) -> EdgeSet:
    """Drop the highest vertex of a smallest edge (lowest mask among ties)."""
    if not H.edges:
        raise ContractError("trim needs a nonempty edge set")
    w = _Work(H)
    w.trim()
    return w.edges()


@dataclass(frozen=True)
class IndexPartition:
    """Disjoint 1-based index sets ``I`` and ``J`` covering ``1..d``."""

    I: tuple
    J: tuple

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(self.I)))
        object.__setattr__(self, "J", tuple(sorted(self.J)))
        if set(self.I) & set(self.J):
            raise InputRangeError("I and J overlap")

    def check_cover(self, d: int):
        if set(self.I) | set(self.J) != set(range(1, d + 1)) or len(self.I) + len(self.J) != d:
            raise InputRangeError(f"I and J must partition 1..{d}")

    @classmethod
    def by_center(cls, b: Sequence[int]) -> "IndexPartition":
        """``b_i <= 2^(d-2)`` goes to I, the rest to J."""
        c = Fraction(1 << len(b), 4)
        return cls(tuple(k + 1 for k, x in enumerate(b) if x <= c),
                   tuple(k + 1 for k, x in enumerate(b) if x > c))


def transport(H: EdgeSet, b: Sequence[int], part: IndexPartition) -> EdgeSet:
    """Swap degree from J down to I until the degrees equal ``b``."""
    b = check_degree_vector(b, H.d, bounded=False)
    part.check_cover(H.d)
    w = _Work(H)
    w.transport(b, [i - 1 for i in part.I], [j - 1 for j in part.J])
    if tuple(w.deg) != b:
        raise ContractError("transport did not reach b")
    return w.edges()


@dataclass(frozen=True)
class RealizationTrace:
    """Replayable record: start from ``base.integral`` and apply ``steps``.

    ``path`` names the route (``interior``, ``interior-reflected``,
    ``mixed``, ``mixed-reflected``).  Reflected routes end with a
    ``complement`` step.  ``trims``, ``a`` and ``T`` are the counters of the
    mixed route: trims used to fix the degree sum modulo d + 1, the quotient
    ``a`` and the number ``T`` of good-pair additions.
    """

    path: str
    base: Decomposition
    steps: tuple
    partition: IndexPartition | None = None
    trims: int | None = None
    a: int | None = None
    T: int | None = None

    def claim1_counts(self) -> dict:
        counts: dict = {}
        for s in self.steps:
            if s["op"] == "claim1":
                counts[s["i"]] = counts.get(s["i"], 0) + 1
        return counts

    def to_dict(self) -> dict:
        out = {"path": self.path, "base": self.base.to_dict(), "steps": [dict(s) for s in self.steps]}
        if self.partition is not None:
            out["partition"] = {"I": list(self.partition.I), "J": list(self.partition.J)}
        for key in ("trims", "a", "T"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def replay(trace: RealizationTrace) -> EdgeSet:
    """Re-run the recorded moves from the base point."""
    w = _Work(trace.base.integral)
    flip = False
    for step in trace.steps:
        op = step["op"]
        if op == "claim1":
            w.claim1(step["i"] - 1)
        elif op == "claim2":
            w.claim2()
        elif op == "swap":
            w.swap(step["i"] - 1, step["j"] - 1)
        elif op == "trim":
            w.trim()
        elif op == "complement":
            flip = not flip
        else:
            raise InputRangeError(f"unknown trace step {op!r}")
    H = w.edges()
    return complement(H) if flip else H


@dataclass(frozen=True)
class Realized:
    witness: EdgeSet
    trace: RealizationTrace | None = None
    status: str = field(default="realized", init=False)

    def __post_init__(self):
        if self.trace is not None and self.trace.base is None:
            raise ContractError("trace without a base decomposition")


@dataclass(frozen=True)
class Undecided:
    reason: str
    status: str = field(default="undecided", init=False)


@dataclass(frozen=True)
class NotInZonotope:
    certificate: SeparationCertificate
    status: str = field(default="not_in_zonotope", init=False)


RealizeOutcome = Union[Realized, Undecided, NotInZonotope]


def _integral_w(dec: Decomposition) -> list[int]:
    w = dec.fractional_part()
    if any(x.denominator != 1 for x in w):
        raise ContractError("fractional part of an integral point is not integral")
    w = [int(x) for x in w]
    if any(not 0 <= x <= dec.d - 1 for x in w):
        raise ContractError("fractional part outside [0, d-1]")
    return w


def _finish(b, w: _Work, path, dec, **counters) -> Realized:
    H = w.edges()
    if degree_sequence(H) != tuple(b):
        raise ContractError("realization does not reproduce b", w.steps)
    trace = RealizationTrace(path, dec, tuple(w.steps), **counters)
    return Realized(H, trace)


def realize_interior(b: Sequence[int], **lp_options) -> RealizeOutcome:
    """Realize ``b`` with every ``b_i <= 2^(d-2)`` from a basic solution of
    ``b - d^2 * 1``; ``Undecided`` when that shifted point is not in the zonotope."""
    b = check_degree_vector(b)
    d = len(b)
    if d < 2 or any(4 * x > 1 << d for x in b):
        raise InputRangeError("realize_interior needs d >= 2 and every b_i <= 2^(d-2)")
    res = decompose_shifted(b, [d * d] * d, **lp_options)
    if not res.inside:
        return Undecided(f"b - d^2*1 is outside the zonotope ({res.reason})")
    dec = res.decomposition
    wvec = _integral_w(dec)
    work = _Work(dec.integral)

    def below_target():
        if any(q >= t for q, t in zip(work.deg, b)):
            raise ContractError("a coordinate reached its target before the last move", work.steps)

    for i in range(d):
        for _ in range(wvec[i]):
            below_target()
            work.claim1(i)
    for _ in range(d * d - sum(wvec)):
        below_target()
        work.claim2()
    return _finish(b, work, "interior", dec)


def realize_main3(b: Sequence[int], part: IndexPartition, **lp_options) -> RealizeOutcome:
    """Realize a mixed ``b`` (``b_i <= 2^(d-2)`` on I, ``> 2^(d-2)`` on J,
    ``|I| >= |J| > 0``) from a basic solution of
    ``b - (d+1)^2 (sum_I e_i - sum_J e_j)``."""
    b = check_degree_vector(b)
    d = len(b)
    part.check_cover(d)
    I = [i - 1 for i in part.I]
    J = [j - 1 for j in part.J]
    if not len(I) >= len(J) > 0:
        raise InputRangeError("realize_main3 needs |I| >= |J| > 0")
    quarter = 1 << d
    if any(4 * b[i] > quarter for i in I) or any(4 * b[j] <= quarter for j in J):
        raise InputRangeError("partition does not split b at 2^(d-2)")
    k = (d + 1) ** 2
    shift = [k if idx in I else -k for idx in range(d)]
    res = decompose_shifted(b, shift, **lp_options)
    if not res.inside:
        return Undecided(f"shifted point is outside the zonotope ({res.reason})")
    dec = res.decomposition
    wvec = _integral_w(dec)
    work = _Work(dec.integral)
    P = list(work.deg)
    trims = (sum(P) - sum(b)) % (d + 1)
    if sum(P) < trims:
        raise ContractError("integral part too small to trim", work.steps)
    for _ in range(trims):
        work.trim()
    rw = sum(p - q for p, q in zip(P, work.deg)) + sum(wvec)
    if rw % (d + 1):
        raise ContractError("R + W is not a multiple of d + 1", work.steps)
    a = rw // (d + 1)
    T = a + (d + 1) * (len(I) - len(J))
    cap = 1 << (d - 2)
    for step in range(T):
        i = I[step % len(I)]
        if work.deg[i] >= cap:
            raise ContractError(f"round-robin step {step}: vertex {i + 1} reached 2^(d-2)", work.steps)
        work.claim1(i)
    q = work.deg
    if any(q[i] > b[i] for i in I) or any(q[j] < b[j] for j in J) or sum(q) != sum(b):
        raise ContractError("point after the good-pair phase does not bracket b", work.steps)
    work.transport(b, I, J)
    return _finish(b, work, "mixed", dec, partition=part, trims=trims, a=a, T=T)


def _reflected(outcome: RealizeOutcome, path: str) -> RealizeOutcome:
    if not isinstance(outcome, Realized):
        return outcome
    tr = outcome.trace
    trace = RealizationTrace(path, tr.base, tr.steps + ({"op": "complement"},),
                             tr.partition, tr.trims, tr.a, tr.T)
    return Realized(complement(outcome.witness), trace)


def realize(b: Sequence[int], *, fallback: bool = False,
            oracle_max_states: int = oracle.DEFAULT_MAX_STATES, known=None, **lp_options) -> RealizeOutcome:
    """Dispatch ``b`` to the route whose hypotheses match its shape.

    All ``b_i <= 2^(d-2)``: interior route.  All ``b_i >= 2^(d-2)``: interior
    route on the reflected point, then complement.  Mixed with at least as
    many low as high coordinates: mixed route; otherwise the mixed route on
    the reflected point, then complement.  When the route's LP hypothesis
    fails, ``b`` itself is tested: outside gives ``NotInZonotope``, inside
    gives ``Undecided`` unless ``fallback`` lets the DP oracle settle it.
    Coordinates above 2^(d-1) are accepted and always end in ``NotInZonotope``.
    ``known`` may pass an earlier ``membership(b)`` result to skip that LP.
    """
    b = check_degree_vector(b, bounded=False)
    d = len(b)
    outcome: RealizeOutcome = Undecided("no constructive route applies for d < 2")
    if any(x > max_degree(d) for x in b):
        outcome = Undecided("coordinate above 2^(d-1)")
    elif d >= 2:
        quarter = 1 << d  # compare 4*b_i against 2^d
        low = [4 * x <= quarter for x in b]
        high = [4 * x >= quarter for x in b]
        if all(low):
            outcome = realize_interior(b, **lp_options)
        elif all(high):
            outcome = _reflected(realize_interior(reflect(b), **lp_options), "interior-reflected")
        else:
            part = IndexPartition.by_center(b)
            if len(part.I) >= len(part.J):
                outcome = realize_main3(b, part, **lp_options)
            else:
                strict_low = tuple(k + 1 for k in range(d) if 4 * b[k] < quarter)
                rest = tuple(k + 1 for k in range(d) if 4 * b[k] >= quarter)
                outcome = _reflected(realize_main3(reflect(b), IndexPartition(rest, strict_low), **lp_options),
                                     "mixed-reflected")
    if isinstance(outcome, Realized):
        if degree_sequence(outcome.witness) != b:
            raise ContractError("dispatcher witness does not reproduce b")
        return outcome
    res = known if known is not None else membership(b, **lp_options)
    if not res.inside:
        return NotInZonotope(res.certificate)
    if fallback:
        try:
            witness = oracle.is_realizable(b, max_states=oracle_max_states)
        except ResourceLimitError as exc:
            return Undecided(f"{outcome.reason}; oracle fallback skipped: {exc}")
        if witness is not None:
            return Realized(witness, None)
        return Undecided(f"{outcome.reason}; b is in the zonotope but the oracle found no hypergraph")
    return outcome
