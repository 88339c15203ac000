"""Ground-truth realizability by dynamic programming over the edge columns.

Columns (nonzero masks) are swept in increasing mask order; after column k
the state set holds every sum of distinct columns among the first k.  Two
variants are provided: :func:`reachable_set` keeps the whole box
``[0, 2^(d-1)]^d`` for small d, and :func:`is_realizable` prunes to the box
below the query vector and backtracks a witness hypergraph.
"""
from __future__ import annotations

import math
import struct
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import (
    EdgeSet,
    check_degree_vector,
    check_dimension,
    degree_sequence,
    mask_to_vector,
    max_degree,
    popcount,
)
from .errors import ContractError, DimensionError, InputRangeError, ResourceLimitError

MAX_REACHABLE_D = 6
DEFAULT_MAX_STATES = 1 << 24
DEFAULT_MAX_BITS = 1 << 31
_HEADER = struct.Struct("<II")


class ReachableSet:
    """Indicator of the realizable points inside the box ``[0, bound]^d``.

    Storage is an ``uint64`` array over the first d-1 coordinates; bit ``x``
    of a word answers for last coordinate ``x``.  This needs ``bound < 64``.
    """

    def __init__(self, d: int, bound: int, words: np.ndarray):
        self.d = d
        self.bound = bound
        self.words = words

    def __contains__(self, b: Sequence[int]) -> bool:
        b = tuple(b)
        if len(b) != self.d:
            raise DimensionError(f"point has length {len(b)}, reachable set has d={self.d}")
        if any(not 0 <= x <= self.bound for x in b):
            return False
        word = int(self.words[tuple(b[:-1])])
        return bool((word >> b[-1]) & 1)

    def __len__(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def indicator(self) -> np.ndarray:
        """Dense boolean array of shape ``(bound + 1,) * d``."""
        shifts = np.arange(self.bound + 1, dtype=np.uint64)
        return ((self.words[..., None] >> shifts) & np.uint64(1)).astype(bool)

    def points(self) -> Iterator[tuple[int, ...]]:
        for idx in zip(*np.nonzero(self.indicator())):
            yield tuple(int(i) for i in idx)

    def dump(self, path) -> None:
        """Write an 8-byte little-endian header (d, bound) followed by the
        indicator bits in C order, least significant bit first."""
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(self.d, self.bound))
            ind = self.indicator().reshape(-1)
            fh.write(np.packbits(ind, bitorder="little").tobytes())

    @classmethod
    def load(cls, path) -> "ReachableSet":
        with open(path, "rb") as fh:
            d, bound = _HEADER.unpack(fh.read(_HEADER.size))
            raw = np.frombuffer(fh.read(), dtype=np.uint8)
        side = bound + 1
        ind = np.unpackbits(raw, bitorder="little")[: side**d].reshape((side,) * d).astype(np.uint64)
        weights = np.uint64(1) << np.arange(side, dtype=np.uint64)
        words = (ind * weights).sum(axis=-1, dtype=np.uint64)
        return cls(d, bound, words)


def reachable_set(d: int, bound: int | None = None) -> ReachableSet:
    """All subset sums of distinct nonzero masks, clipped to ``[0, bound]^d``."""
    check_dimension(d)
    if d > MAX_REACHABLE_D:
        raise ResourceLimitError(f"reachable_set supports d <= {MAX_REACHABLE_D}; d={d} needs (2^(d-1)+1)^d states")
    if bound is None:
        bound = max_degree(d)
    if not 0 <= bound < 64:
        raise InputRangeError("bound must lie in 0..63")
    side = bound + 1
    lastmask = np.uint64((1 << side) - 1)
    words = np.zeros((side,) * (d - 1), dtype=np.uint64)
    words[(0,) * (d - 1)] = 1
    for m in range(1, 1 << d):
        v = mask_to_vector(m, d)
        head, last = v[:-1], v[-1]
        if any(h > bound for h in head):
            continue
        src = tuple(slice(0, side - h) for h in head)
        dst = tuple(slice(h, side) for h in head)
        shifted = words[src] << np.uint64(last)
        if last:
            shifted &= lastmask
        words[dst] |= shifted
    return ReachableSet(d, bound, words)


def _flat_bit(packed: np.ndarray, idx: int) -> bool:
    return bool((packed[idx >> 3] >> (7 - (idx & 7))) & 1)


def _pruned_dp(b: tuple[int, ...], columns: Iterable[int], max_states: int, max_bits: int):
    d = len(b)
    shape = tuple(x + 1 for x in b)
    states = math.prod(shape)
    if states > max_states:
        raise ResourceLimitError(f"oracle infeasible at this size: {states} states exceed the cap {max_states}")
    cols = []
    for m in columns:
        v = mask_to_vector(m, d)
        if all(vi <= bi for vi, bi in zip(v, b)):
            cols.append((m, v))
    if states * len(cols) > max_bits:
        raise ResourceLimitError(
            f"oracle infeasible at this size: {states} states x {len(cols)} columns exceed the cap {max_bits} bits")
    reach = np.zeros(shape, dtype=bool)
    reach[(0,) * d] = True
    layers = []
    for m, v in cols:
        layers.append(np.packbits(reach))
        src = tuple(slice(0, n - vi) for n, vi in zip(shape, v))
        dst = tuple(slice(vi, n) for n, vi in zip(shape, v))
        reach[dst] |= reach[src].copy()
    return cols, layers, reach, shape


def _realize_by_dp(b, columns, max_states, max_bits) -> EdgeSet | None:
    d = len(b)
    cols, layers, reach, shape = _pruned_dp(b, columns, max_states, max_bits)
    if not reach[b]:
        return None
    x = list(b)
    chosen = []
    for (m, v), layer in zip(reversed(cols), reversed(layers)):
        idx = int(np.ravel_multi_index(tuple(x), shape))
        if not _flat_bit(layer, idx):
            chosen.append(m)
            x = [xi - vi for xi, vi in zip(x, v)]
    if any(x):
        raise ContractError("witness backtracking did not return to the origin")
    witness = EdgeSet(d, frozenset(chosen))
    if degree_sequence(witness) != b:
        raise ContractError("DP witness does not reproduce the query")
    return witness


def is_realizable(b: Sequence[int], *, max_states: int = DEFAULT_MAX_STATES,
                  max_bits: int = DEFAULT_MAX_BITS) -> EdgeSet | None:
    """Return a hypergraph with degree sequence ``b``, or ``None`` if none exists.

    Raises :class:`ResourceLimitError` when the pruned state space
    ``prod(b_i + 1)`` (or the stored choice bits) exceed the caps; that is
    never a claim of non-realizability.
    """
    b = check_degree_vector(b, bounded=False)
    d = len(b)
    if any(x > max_degree(d) for x in b):
        return None
    return _realize_by_dp(b, range(1, 1 << d), max_states, max_bits)


def triple_masks(d: int) -> list[int]:
    return [sum(1 << i for i in c) for c in combinations(range(d), 3)]


def is_realizable_3uniform(b: Sequence[int], *, brute_force_limit: int = 20,
                           max_states: int = DEFAULT_MAX_STATES,
                           max_bits: int = DEFAULT_MAX_BITS) -> EdgeSet | None:
    """Witness made of 3-element edges only, or ``None``.

    With at most ``brute_force_limit`` triples every subset is enumerated;
    otherwise the pruned DP runs over the triple columns.
    """
    b = check_degree_vector(b, bounded=False)
    d = len(b)
    if sum(b) % 3:
        return None
    triples = triple_masks(d)
    if len(triples) > brute_force_limit:
        witness = _realize_by_dp(b, triples, max_states, max_bits)
    else:
        witness = _brute_force_subset(b, triples)
    if witness is not None and any(popcount(e) != 3 for e in witness.edges):
        raise ContractError("3-uniform witness contains a non-triple")
    return witness


def _brute_force_subset(b, columns) -> EdgeSet | None:
    d = len(b)
    k = len(columns)
    if k == 0:
        return EdgeSet(d, frozenset()) if not any(b) else None
    subsets = np.arange(1 << k, dtype=np.int64)
    choose = ((subsets[:, None] >> np.arange(k)) & 1).astype(np.int32)
    colmat = np.array([mask_to_vector(m, d) for m in columns], dtype=np.int32)
    sums = choose @ colmat
    hits = np.nonzero((sums == np.array(b, dtype=np.int32)).all(axis=1))[0]
    if hits.size == 0:
        return None
    s = int(hits[0])
    witness = EdgeSet(d, frozenset(columns[j] for j in range(k) if (s >> j) & 1))
    if degree_sequence(witness) != b:
        raise ContractError("brute-force witness does not reproduce the query")
    return witness
