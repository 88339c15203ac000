"""Hardness reductions: 3-uniform degree sequences and knapsack counting.

With ``w = (-3, 1, ..., 1)`` in dimension d + 1, the hyperplane
``<w, x> = 0`` cuts the zonotope in a face whose 0/1 points with first
coordinate 1 are exactly ``(1, t)`` for triples ``t``.  Adding every
generator on the positive side (the vector ``z``) moves a 3-uniform
question about ``b`` to a plain degree-sequence question about
``z + (|b|/3, b)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .core import EdgeSet, as_rational_vector, check_degree_vector, check_dimension, format_rational
from .errors import ContractError, InputRangeError
from .zonotope import _integer_direction, _subset_sums


def closed_form_z(d: int) -> tuple[int, ...]:
    """Sum of the 0/1 vectors ``v`` of length d + 1 with ``<v, w> > 0``.

    All 2^(d+1) vectors sum to 2^d in each coordinate; the ones with
    ``<v, w> <= 0`` are 0 and ``(1, t)`` with ``|t| <= 3``.
    """
    check_dimension(d + 1)
    if d < 3:
        raise InputRangeError("the reduction needs d >= 3")
    top = 1 << d
    first = top - 1 - d - comb(d, 2) - comb(d, 3)
    other = top - 1 - (d - 1) - comb(d - 1, 2)
    return (first,) + (other,) * d


@dataclass(frozen=True)
class ReducedInstance:
    b: tuple
    z: tuple
    point: tuple

    @property
    def d(self) -> int:
        return len(self.point)

    def to_dict(self) -> dict:
        return {"d": self.d, "point": list(self.point)}


def reduce_3uniform(b: Sequence[int]) -> ReducedInstance:
    """Map ``b`` to a point that is a degree sequence iff ``b`` is the degree
    sequence of a 3-uniform hypergraph."""
    b = check_degree_vector(b, bounded=False)
    d = len(b)
    if d < 3:
        raise InputRangeError("the reduction needs d >= 3")
    cap = comb(d - 1, 2)
    if any(x > cap for x in b):
        raise InputRangeError(f"coordinate above C(d-1, 2) = {cap}")
    total = sum(b)
    if total % 3:
        raise InputRangeError("not reducible: |b| is not a multiple of 3, so b is trivially not 3-uniform")
    z = closed_form_z(d)
    point = (z[0] + total // 3,) + tuple(zi + bi for zi, bi in zip(z[1:], b))
    return ReducedInstance(b, z, point)


def linopt_over_Z(w: Sequence) -> Fraction:
    """``max <w, x>`` over the zonotope: sum of the positive ``<w, v>``."""
    w = as_rational_vector(w)
    check_dimension(len(w))
    nums, den = _integer_direction(w)
    values = _subset_sums(nums)
    pos = values[values > 0]
    return Fraction(int(pos.sum()) if pos.size else 0, den)


def linopt_argmax(w: Sequence) -> EdgeSet:
    """A hypergraph attaining :func:`linopt_over_Z`: all edges of positive value."""
    w = as_rational_vector(w)
    check_dimension(len(w))
    nums, _ = _integer_direction(w)
    values = _subset_sums(nums)
    return EdgeSet(len(w), frozenset(int(m) for m in np.nonzero(values > 0)[0]))


@dataclass(frozen=True)
class KnapsackCount:
    a: tuple
    beta: int
    opt1: Fraction
    opt2: Fraction
    N: int

    def to_dict(self) -> dict:
        return {"N": self.N, "opt1": format_rational(self.opt1), "opt2": format_rational(self.opt2)}


def count_knapsack(a: Sequence[int], beta: int) -> KnapsackCount:
    """``|{x in {0,1}^d : a.x < beta}|`` from two optimizations over the
    zonotope of dimension d + 1."""
    a = tuple(a)
    for x in a + (beta,):
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise InputRangeError("knapsack weights and capacity must be nonnegative integers")
    if not a:
        raise InputRangeError("knapsack needs at least one item")
    check_dimension(len(a) + 1)
    neg = [-x for x in a]
    opt1 = linopt_over_Z(neg + [beta])
    opt2 = linopt_over_Z(neg + [Fraction(2 * beta - 1, 2)])
    twice = 2 * (opt1 - opt2)
    if twice.denominator != 1:
        raise ContractError("knapsack count is not an integer")
    return KnapsackCount(a, beta, opt1, opt2, int(twice))
