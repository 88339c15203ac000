"""Reproducible experiments: exhaustive small-d check and the sampling study.

Reports are plain dicts that serialize to deterministic JSON; wall-clock
timings are kept out of the dict unless asked for, so equal configs give
byte-identical output.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import oracle
from .core import check_dimension, degree_sequence, format_rational
from .errors import ContractError, InputRangeError
from .realize import NotInZonotope, Realized, realize
from .zonotope import DEFAULT_MAX_PIVOTS, membership, support_function

SCHEMA = "dsp/1"
MAX_SAMPLE_D = 16
MAX_ENUMERATE_D = oracle.MAX_REACHABLE_D


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    threads: int = 1
    oracle_max_states: int = oracle.DEFAULT_MAX_STATES
    max_pivots: int = DEFAULT_MAX_PIVOTS

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise InputRangeError("seed must be a 64-bit unsigned integer")
        if self.threads < 1:
            raise InputRangeError("threads must be positive")


def _ratio(num: int, den: int):
    return None if den == 0 else format_rational(Fraction(num, den))


def _float(num: int, den: int):
    return None if den == 0 else round(num / den, 12)


# ---------------------------------------------------------------- enumerate

def _directions(d: int) -> np.ndarray:
    dirs = np.array(list(itertools.product((-1, 0, 1), repeat=d)), dtype=np.int64)
    return dirs[np.any(dirs != 0, axis=1)]


def enumerate_report(d: int, config: RunConfig = RunConfig(), chunk: int = 1 << 15) -> dict:
    """Check that the box lattice points of the zonotope are exactly the
    realizable points.

    Non-realizable box points are first tested against every direction in
    {-1,0,1}^d; a point no direction separates goes to the exact LP, and an
    Inside answer there is a gap.  Realizable points must pass every filter.
    """
    check_dimension(d)
    if d > MAX_ENUMERATE_D:
        raise InputRangeError(f"enumerate supports d <= {MAX_ENUMERATE_D}")
    t0 = time.perf_counter()
    S = oracle.reachable_set(d)
    ind = S.indicator()
    dirs = _directions(d)
    h = np.array([int(support_function(list(map(int, c)))) for c in dirs], dtype=np.int64)
    side = S.bound + 1
    flat = ind.reshape(-1)
    filtered = lp_outside = 0
    gaps: list[list[int]] = []
    filter_violations = 0
    for start in range(0, flat.size, chunk):
        idx = np.arange(start, min(start + chunk, flat.size))
        pts = np.array(np.unravel_index(idx, ind.shape)).T
        real = flat[start:start + chunk]
        sep = (pts @ dirs.T) > h
        # a filter may never separate a realizable point
        filter_violations += int(np.count_nonzero(sep[real].any(axis=1)))
        cut = sep.any(axis=1)
        outside = ~real
        filtered += int(np.count_nonzero(outside & cut))
        for p in pts[outside & ~cut]:
            b = [int(x) for x in p]
            res = membership(b, max_pivots=config.max_pivots)
            if res.inside:
                gaps.append(b)
            else:
                lp_outside += 1
    if filter_violations:
        raise ContractError(f"{filter_violations} realizable points failed a support-function filter")
    realizable = len(S)
    box = side ** d
    report = {
        "schema": SCHEMA,
        "experiment": "enumerate",
        "config": {"d": d},
        "counts": {
            "box_points": box,
            "realizable": realizable,
            "outside_by_filter": filtered,
            "outside_by_lp": lp_outside,
            "gaps": len(gaps),
        },
        "filter_directions": int(dirs.shape[0]),
        "gaps": gaps,
        "ok": not gaps and realizable + filtered + lp_outside == box,
    }
    report["_seconds"] = time.perf_counter() - t0
    return report


# ------------------------------------------------------------------ sampling

def reference_fraction(d: int) -> Fraction:
    """The reference curve d^2 / 2^(d-1) for the undecided share."""
    return Fraction(d * d, 1 << (d - 1))


def in_enclosing_ellipsoid(p: Sequence[int]) -> bool:
    """Exact test of ``y^T (A A^T)^-1 y <= N/4`` for ``y = p - 2^(d-2) 1``.

    The zonotope lies in this ellipsoid: it is the image of the cube of
    half-width 1/2 in R^N, ``N = 2^d - 1``, under ``A``.
    """
    d = len(p)
    c = 1 << (d - 2)
    y = [x - c for x in p]
    s = sum(y)
    q = (d + 1) * sum(t * t for t in y) - s * s
    return 4 * q <= ((1 << d) - 1) * c * (d + 1)


def _ellipsoid_proposals(rng: np.random.Generator, d: int, k: int) -> np.ndarray:
    n = (1 << d) - 1
    scale = math.sqrt(n / 4) * 2 ** ((d - 2) / 2)
    a_min = scale
    inflate = 1 + (math.sqrt(d) / 2) / a_min
    g = rng.standard_normal((k, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    u = g * rng.random((k, 1)) ** (1 / d)
    coef = (math.sqrt(d + 1) - 1) / d
    y = u + coef * u.sum(axis=1, keepdims=True)
    y *= scale * inflate
    return np.rint(y + (1 << (d - 2))).astype(np.int64)


def sample_points(d: int, count: int, seed: int, sampler: str = "ellipsoid") -> tuple[list, int]:
    """Deterministic integer sample; returns ``(points, proposals)``.

    ``box``: uniform on ``{0..2^(d-1)}^d``.  ``ellipsoid``: uniform on the
    lattice points of the box inside the enclosing ellipsoid, by rounding
    uniform draws from an inflated copy whose margin covers each unit cell
    and rejecting the rounded points outside.  Conditioned on lying in the
    zonotope both samplers give the same uniform law.
    """
    if d < 2:
        raise InputRangeError("sampling needs d >= 2")
    rng = np.random.Generator(np.random.Philox(seed))
    cap = 1 << (d - 1)
    if sampler == "box":
        pts = rng.integers(0, cap + 1, size=(count, d), dtype=np.int64)
        return [tuple(int(x) for x in p) for p in pts], count
    if sampler != "ellipsoid":
        raise InputRangeError(f"unknown sampler {sampler!r}")
    out: list = []
    proposals = 0
    batch = max(256, 2 * count)
    while len(out) < count:
        for p in _ellipsoid_proposals(rng, d, batch):
            proposals += 1
            if p.min() < 0 or p.max() > cap:
                continue
            t = tuple(int(x) for x in p)
            if in_enclosing_ellipsoid(t):
                out.append(t)
                if len(out) == count:
                    break
    return out, proposals


def classify(b: Sequence[int], config: RunConfig = RunConfig(), fallback: bool = False) -> str:
    """``outside``, ``realized`` or ``undecided``; witnesses are re-verified."""
    res = membership(b, max_pivots=config.max_pivots)
    if not res.inside:
        return "outside"
    out = realize(b, fallback=fallback, oracle_max_states=config.oracle_max_states,
                  known=res, max_pivots=config.max_pivots)
    if isinstance(out, Realized):
        if degree_sequence(out.witness) != tuple(b):
            raise ContractError("sampled witness does not reproduce b")
        return "realized"
    if isinstance(out, NotInZonotope):
        return "outside"
    return "undecided"


def _classify_job(args):
    b, config = args
    return classify(b, config)


def _map(points: Iterable, config: RunConfig) -> list[str]:
    jobs = [(p, config) for p in points]
    if config.threads == 1:
        return [_classify_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(_classify_job, jobs, chunksize=4))


def sample_report(d: int, count: int, config: RunConfig = RunConfig(), sampler: str = "ellipsoid") -> dict:
    """Classify ``count`` sampled points and compare the undecided share
    among inside points with ``d^2 / 2^(d-1)``."""
    check_dimension(d)
    if d > MAX_SAMPLE_D:
        raise InputRangeError(f"sample supports d <= {MAX_SAMPLE_D}")
    if count < 0:
        raise InputRangeError("count must be nonnegative")
    t0 = time.perf_counter()
    points, proposals = sample_points(d, count, config.seed, sampler)
    labels = _map(points, config)
    tally = {k: labels.count(k) for k in ("realized", "undecided", "outside")}
    inside = tally["realized"] + tally["undecided"]
    ref = reference_fraction(d)
    report = {
        "schema": SCHEMA,
        "experiment": "sample",
        "config": {"d": d, "count": count, "sampler": sampler, **asdict(config)},
        "proposals": proposals,
        "counts": {"tested": len(points), **tally, "inside": inside},
        "undecided_among_inside": _ratio(tally["undecided"], inside),
        "undecided_among_inside_float": _float(tally["undecided"], inside),
        "reference": format_rational(ref),
        "reference_float": round(float(ref), 12),
        "ratio_to_reference": None if inside == 0 else round(tally["undecided"] / inside / float(ref), 12),
    }
    report["config"].pop("threads")
    report["_seconds"] = time.perf_counter() - t0
    return report


def public(report: dict) -> dict:
    """Drop run-dependent keys (those starting with an underscore)."""
    return {k: v for k, v in report.items() if not k.startswith("_")}
