"""Edges, hypergraphs and degree vectors on the vertex set {1, ..., d}.

A hyperedge is stored as a d-bit mask; vertex ``i`` (1-based, as in all
external formats) is bit ``i - 1``.  Degree vectors are plain tuples of
Python ints, rational vectors tuples of :class:`fractions.Fraction`.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, DimensionLimitError, InputRangeError

DEFAULT_MAX_D = 25


def max_dimension() -> int:
    """Dimension guard; ``DSP_MAX_D`` in the environment overrides the default."""
    raw = os.environ.get("DSP_MAX_D")
    if raw is None:
        return DEFAULT_MAX_D
    try:
        value = int(raw)
    except ValueError as exc:
        raise DimensionError(f"DSP_MAX_D must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DimensionError("DSP_MAX_D must be positive")
    return value


def check_dimension(d: int) -> int:
    if not isinstance(d, int) or isinstance(d, bool):
        raise DimensionError(f"dimension must be an int, got {type(d).__name__}")
    limit = max_dimension()
    if d < 1:
        raise DimensionError(f"dimension d={d} must be positive")
    if d > limit:
        raise DimensionLimitError(f"dimension d={d} outside 1..{limit} (set DSP_MAX_D to raise the guard)")
    return d


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(d: int) -> int:
    return (1 << d) - 1


def mask_to_vector(mask: int, d: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(d))


def mask_to_vertices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return out


def vertices_to_mask(vertices: Iterable[int], d: int) -> int:
    mask = 0
    for v in vertices:
        if not isinstance(v, int) or not 1 <= v <= d:
            raise InputRangeError(f"vertex {v!r} not in 1..{d}")
        bit = 1 << (v - 1)
        if mask & bit:
            raise InputRangeError(f"vertex {v} repeated in an edge")
        mask |= bit
    if mask == 0:
        raise InputRangeError("edges must be nonempty")
    return mask


def center(d: int) -> Fraction:
    """Coordinate of the symmetry center 2^(d-2) * 1 (a half-integer when d = 1)."""
    return Fraction(1 << d, 4)


def max_degree(d: int) -> int:
    return 1 << (d - 1)


@dataclass(frozen=True)
class EdgeSet:
    """A hypergraph on d vertices as a set of distinct nonzero masks."""

    d: int
    edges: frozenset

    def __post_init__(self):
        check_dimension(self.d)
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset(self.edges))
        top = 1 << self.d
        for e in self.edges:
            if not isinstance(e, int) or not 0 < e < top:
                raise InputRangeError(f"edge mask {e!r} is not a nonzero {self.d}-bit mask")

    @classmethod
    def from_vertex_lists(cls, d: int, edges: Iterable[Iterable[int]]) -> "EdgeSet":
        masks = [vertices_to_mask(e, d) for e in edges]
        if len(set(masks)) != len(masks):
            raise InputRangeError("duplicate hyperedge")
        return cls(d, frozenset(masks))

    @classmethod
    def empty(cls, d: int) -> "EdgeSet":
        return cls(d, frozenset())

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edges))

    def __contains__(self, mask: int) -> bool:
        return mask in self.edges

    def degrees(self) -> tuple[int, ...]:
        return degree_sequence(self)

    def vertex_lists(self) -> list[list[int]]:
        return sorted(mask_to_vertices(e) for e in self.edges)

    def to_dict(self) -> dict:
        return {"d": self.d, "edges": self.vertex_lists()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "EdgeSet":
        try:
            d = data["d"]
            edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise InputRangeError("hypergraph JSON needs 'd' and 'edges'") from exc
        for e in edges:
            if list(e) != sorted(e):
                raise InputRangeError(f"edge {e} is not sorted")
        return cls.from_vertex_lists(d, edges)

    @classmethod
    def from_json(cls, text: str) -> "EdgeSet":
        return cls.from_dict(json.loads(text))


def degree_sequence(H: EdgeSet) -> tuple[int, ...]:
    """Number of edges of ``H`` containing each vertex."""
    deg = [0] * H.d
    for e in H.edges:
        i = 0
        while e:
            if e & 1:
                deg[i] += 1
            e >>= 1
            i += 1
    return tuple(deg)


def complement(H: EdgeSet) -> EdgeSet:
    """All nonzero masks not in ``H``; its degrees are 2^(d-1) * 1 minus those of ``H``."""
    present = H.edges
    return EdgeSet(H.d, frozenset(m for m in range(1, 1 << H.d) if m not in present))


def check_degree_vector(b: Sequence[int], d: int | None = None, *, bounded: bool = True) -> tuple[int, ...]:
    """Validate an exact nonnegative integer vector, optionally capped at 2^(d-1)."""
    b = tuple(b)
    if d is None:
        d = len(b)
    check_dimension(d)
    if len(b) != d:
        raise DimensionError(f"vector has length {len(b)}, expected d={d}")
    cap = max_degree(d)
    for x in b:
        if not isinstance(x, int) or isinstance(x, bool):
            raise InputRangeError(f"coordinate {x!r} is not an integer")
        if x < 0:
            raise InputRangeError(f"coordinate {x} is negative")
        if bounded and x > cap:
            raise InputRangeError(f"coordinate {x} exceeds the maximum degree 2^(d-1) = {cap}")
    return b


def reflect(b: Sequence[int]) -> tuple[int, ...]:
    """Point reflection 2^(d-1) * 1 - b through the symmetry center."""
    b = check_degree_vector(b)
    cap = max_degree(len(b))
    return tuple(cap - x for x in b)


def as_rational_vector(values: Iterable) -> tuple[Fraction, ...]:
    out = []
    for x in values:
        if isinstance(x, float):
            raise InputRangeError("floating-point coordinates are not accepted; pass ints, Fractions or 'p/q' strings")
        out.append(Fraction(x))
    return tuple(out)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def degree_vector_to_dict(b: Sequence[int]) -> dict:
    return {"d": len(b), "b": list(b)}


def degree_vector_from_dict(data: dict) -> tuple[int, ...]:
    try:
        d = data["d"]
        b = data["b"]
    except (KeyError, TypeError) as exc:
        raise InputRangeError("degree vector JSON needs 'd' and 'b'") from exc
    return check_degree_vector(b, d, bounded=False)
