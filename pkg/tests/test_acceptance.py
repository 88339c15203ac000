"""Acceptance criteria, one test (or pair) per criterion.

Each test records a one-line verdict that is printed at the end of the
pytest run.  Set DSP_STRETCH=1 to add d=6 to the exhaustive check.
"""
import functools
import json
import math
import os
import random
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from conftest import ACCEPTANCE
from degseq.core import EdgeSet, degree_sequence, mask_to_vector, reflect
from degseq.counterexample import build_spec, emit_certificate
from degseq.errors import ContractError
from degseq.experiments import RunConfig, enumerate_report, public, reference_fraction, sample_report
from degseq.oracle import is_realizable, is_realizable_3uniform, reachable_set
from degseq.realize import (
    IndexPartition,
    NotInZonotope,
    Realized,
    Undecided,
    claim1_step,
    claim2_step,
    realize,
    swap_step,
    trim_step,
)
from degseq.reductions import closed_form_z, count_knapsack, reduce_3uniform
from degseq.zonotope import decompose_shifted, membership, support_function

GOLDENS = os.path.join(os.path.dirname(__file__), "goldens")


def record(n, ok, detail):
    ACCEPTANCE[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


def checked(n):
    """Record FAIL with the exception text if the test body raises."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except BaseException as exc:
                if n not in ACCEPTANCE or "PASS" in ACCEPTANCE[n]:
                    record(n, False, f"{type(exc).__name__}: {str(exc)[:160]}")
                raise
        return run
    return wrap


# 1 ------------------------------------------------------------- exhaustive

@checked(1)
def test_criterion_1_exhaustive_lattice():
    dims = [2, 3, 4, 5] + ([6] if os.environ.get("DSP_STRETCH") == "1" else [])
    t0 = time.perf_counter()
    rng = random.Random(1)
    gaps = 0
    for d in dims:
        rep = enumerate_report(d)
        gaps += rep["counts"]["gaps"]
        assert rep["ok"], rep["gaps"][:5]
        # realizable points are in the zonotope: exact LP on a sample (all of them for d <= 3)
        pts = list(reachable_set(d).points())
        if len(pts) > 300:
            pts = rng.sample(pts, 300)
        for p in pts:
            assert membership(p, prefilter=False).inside, p
    elapsed = time.perf_counter() - t0
    assert elapsed < 30 * 60
    record(1, gaps == 0, f"d={dims}: 0 non-realizable lattice points in Z^d ({elapsed:.0f}s)")


# 2 ------------------------------------------------- constructive soundness

def _route_inputs(d, rng, count):
    """Random integer points near the center in the windows each route needs.

    Windows: interior b_i in [d^2, 2^(d-2)]; mixed: I below the center by at
    most a tenth of the room left by the (d+1)^2 shift, J symmetric above.
    Reflected routes use reflect(b).  Routes whose windows are empty are skipped.
    """
    c = 1 << (d - 2)
    k = (d + 1) ** 2
    routes = ["interior", "interior-reflected"]
    if c - k > 0:
        routes += ["mixed", "mixed-reflected"]
    for n in range(count):
        route = routes[n % len(routes)]
        if route.startswith("interior"):
            room = (c - d * d) // 3
            b = [c - rng.randint(0, room) for _ in range(d)]
        else:
            room = (c - k) // 10
            low = rng.randint((d + 1) // 2, d - 1)
            b = [c - rng.randint(0, room) for _ in range(low)] + [c + 1 + rng.randint(0, room) for _ in range(d - low)]
            rng.shuffle(b)
        if route.endswith("reflected"):
            b = list(reflect(b))
        yield route, tuple(b)


def _shift_for(b):
    d = len(b)
    c = 1 << (d - 2)
    if all(x <= c for x in b):
        return b, [d * d] * d
    if all(x >= c for x in b):
        return reflect(b), [d * d] * d
    low = sum(1 for x in b if x <= c)
    k = (d + 1) ** 2
    if low >= d - low:
        return b, [k if x <= c else -k for x in b]
    r = reflect(b)
    return r, [k if x <= c else -k for x in r]


@checked(2)
def test_criterion_2_constructive_soundness():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    summary = {}
    for d in (8, 10, 12):
        passed = failed_hyp = traces = 0
        gen = _route_inputs(d, rng, 10**9)
        while passed < 1000:
            route, b = next(gen)
            out = realize(b)
            if isinstance(out, Realized):
                assert degree_sequence(out.witness) == b
                assert len(set(out.witness.edges)) == len(out.witness)
                tr = out.trace
                if tr.partition is not None:
                    counts = tr.claim1_counts()
                    bound = math.ceil(tr.T / len(tr.partition.I)) if tr.T else 0
                    assert all(counts.get(i, 0) <= bound for i in tr.partition.I)
                    traces += 1
                passed += 1
            else:
                # an input the route did not realize must fail the route's LP hypothesis
                assert isinstance(out, Undecided), (b, out)
                point, shift = _shift_for(b)
                assert not decompose_shifted(point, shift).inside, b
                failed_hyp += 1
            assert failed_hyp < 20000, f"d={d}: too few inputs pass the hypotheses"
        summary[d] = (passed, failed_hyp, traces)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10 * 60
    detail = "; ".join(f"d={d}: {p} realized exactly ({m} mixed-route traces, round-robin bound held)"
                       for d, (p, f, m) in summary.items())
    record(2, True, f"{detail} ({elapsed:.0f}s)")


# 3 ------------------------------------------------------- oracle agreement

@checked(3)
def test_criterion_3_oracle_agreement():
    rng = random.Random(3)
    tally = {"realized": 0, "not_in_zonotope": 0, "undecided": 0}
    sets = {d: reachable_set(d) for d in (2, 3, 4, 5)}
    for n in range(10_000):
        d = 2 + n % 4
        b = tuple(rng.randint(0, 1 << (d - 1)) for _ in range(d))
        out = realize(b)
        tally[out.status] += 1
        if isinstance(out, Realized):
            assert b in sets[d], b
            assert degree_sequence(out.witness) == b
        elif isinstance(out, NotInZonotope):
            assert b not in sets[d], b
    # at d <= 5 the route hypotheses never hold, so Realized does not occur here
    record(3, True, f"10000 points d<=5, zero contradictions ({tally})")


# 4 ---------------------------------------------------------- counterexample

@checked(4)
def test_criterion_4_counterexample():
    t0 = time.perf_counter()
    cert = emit_certificate(build_spec(8, [2, 4]))
    elapsed = time.perf_counter() - t0
    data = cert.to_dict()
    assert data["d"] == 98
    assert data["b"] == [1] * 28 + [2] * 70
    assert data["span_lemma"]["holds"] and data["span_lemma"]["candidates"] == 512
    assert data["span_lemma"]["survivors"] == ["0"] + [f"e{i}" for i in range(1, 9)]
    assert data["face"] == {"nonrealizable": True, "subsets": 256}
    assert data["rank"] == 8 and data["conclusion"]
    assert elapsed < 1.0
    record(4, True, f"d=98, 512 candidates -> {{0,e1..e8}}, 256 subsets, rank 8 ({elapsed * 1000:.0f}ms)")


# 5 ---------------------------------------------------------------- reduction

def _z_brute(d):
    w = np.array([-3] + [1] * d)
    masks = np.arange(1 << (d + 1))
    V = (masks[:, None] >> np.arange(d + 1)) & 1
    return tuple(int(x) for x in V[V @ w > 0].sum(axis=0))


@checked(5)
def test_criterion_5_reduction():
    t0 = time.perf_counter()
    checked_points = agree = 0
    for b in product(range(4), repeat=4):
        three = is_realizable_3uniform(b)
        if sum(b) % 3:
            assert three is None
            continue
        point = reduce_3uniform(b).point
        plain = is_realizable(point)
        assert (three is not None) == (plain is not None), b
        checked_points += 1
        agree += 1
    for d in range(3, 11):
        assert closed_form_z(d) == _z_brute(d)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5 * 60
    record(5, True, f"{agree}/{checked_points} reducible b in {{0..3}}^4 agree; z closed form = brute force d=3..10 ({elapsed:.0f}s)")


# 6 ----------------------------------------------------------------- knapsack

@checked(6)
def test_criterion_6_knapsack():
    rng = random.Random(6)
    for _ in range(500):
        d = rng.randint(1, 12)
        a = np.array([rng.randint(0, 100) for _ in range(d)])
        beta = rng.randint(0, int(a.sum()) + 1)
        X = (np.arange(1 << d)[:, None] >> np.arange(d)) & 1
        brute = int(np.count_nonzero(X @ a < beta))
        assert count_knapsack([int(x) for x in a], beta).N == brute
    record(6, True, "500 random instances d<=12: 2(OPT1-OPT2) equals brute-force count")


# 7 ---------------------------------------------------------- sampling trend

TREND = {10: 800, 12: 600, 14: 600}
SEEDS = (1, 2, 3)


@pytest.fixture(scope="module")
def trend_reports():
    out = {}
    for d, count in TREND.items():
        for seed in SEEDS:
            rep = public(sample_report(d, count, RunConfig(seed=seed)))
            text = json.dumps(rep, separators=(",", ":")) + "\n"
            path = os.path.join(GOLDENS, f"sample_d{d}_seed{seed}.json")
            with open(path) as fh:
                assert fh.read() == text, f"report for d={d}, seed={seed} differs from its pinned golden"
            out[d, seed] = rep
    return out


def _pooled(reports, d):
    und = sum(reports[d, s]["counts"]["undecided"] for s in SEEDS)
    ins = sum(reports[d, s]["counts"]["inside"] for s in SEEDS)
    return und, ins


@checked(7)
def test_criterion_7_trend(trend_reports):
    fractions = {}
    for d in TREND:
        und, ins = _pooled(trend_reports, d)
        assert ins > 0, f"no inside points at d={d}"
        fractions[d] = und / ins
    ds = sorted(fractions)
    assert all(fractions[a] > fractions[b] for a, b in zip(ds, ds[1:])), fractions
    ACCEPTANCE[7] = "criterion 7: (pending reference bound) " + _trend_text(trend_reports)


def _trend_text(reports):
    parts = []
    for d in sorted(TREND):
        und, ins = _pooled(reports, d)
        parts.append(f"d={d}: {und}/{ins}={und / ins:.3f} vs 5*ref={5 * float(reference_fraction(d)):.3f}")
    return "; ".join(parts)


@pytest.mark.xfail(strict=True, reason="boundary shell sqrt(d)(d+1)^2 exceeds the inradius 2^(d-2) at d<=14")
def test_criterion_7_reference_bound(trend_reports):
    ok = True
    for d in TREND:
        und, ins = _pooled(trend_reports, d)
        ok &= und / ins < 5 * float(reference_fraction(d))
    trend_ok = ACCEPTANCE.get(7, "").startswith("criterion 7: (pending")
    record(7, ok and trend_ok, ("finite and decreasing; " if trend_ok else "") + _trend_text(trend_reports)
           + ("" if ok else "  [bound not met]"))
    assert ok


# 8 --------------------------------------------------------- move properties

def _degrees(H):
    return degree_sequence(H)


@checked(8)
def test_criterion_8_move_properties():
    rng = random.Random(8)
    applied = refused = 0
    while applied < 100_000:
        d = rng.choice([2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 8])
        H = EdgeSet(d, frozenset(m for m in range(1, 1 << d) if rng.random() < rng.choice([0.0, 0.1, 0.3])))
        quarter = 1 << (d - 2)
        for _ in range(60):
            q = _degrees(H)
            move = rng.randrange(4)
            i, j = rng.randrange(d), rng.randrange(d)
            try:
                if move == 0:
                    H2 = claim1_step(H, i + 1)
                    assert q[i] < quarter
                    assert len(H2) == len(H) + 2
                    assert _degrees(H2) == tuple(x + 1 + (k == i) for k, x in enumerate(q))
                elif move == 1:
                    H2 = claim2_step(H)
                    assert max(q) < quarter
                    assert _degrees(H2) == tuple(x + 1 for x in q)
                elif move == 2:
                    H2 = swap_step(H, i + 1, j + 1)
                    assert q[i] > q[j]
                    assert len(H2) == len(H)
                    assert _degrees(H2) == tuple(x - (k == i) + (k == j) for k, x in enumerate(q))
                else:
                    H2 = trim_step(H)
                    assert len(H) > 0
                    assert sum(_degrees(H2)) == sum(q) - 1
            except ContractError:
                # refusals must be exactly the precondition failures
                assert (move == 0 and q[i] >= quarter) or (move == 1 and max(q) >= quarter) \
                    or (move == 2 and q[i] <= q[j]) or (move == 3 and len(H) == 0)
                refused += 1
                continue
            applied += 1
            H = H2
    # LP decompositions round-trip exactly; certificates recompute strictly
    lp = 0
    for _ in range(300):
        d = rng.randint(2, 7)
        b = [Fraction(rng.randint(0, 6 * (1 << (d - 1))), 6) for _ in range(d)]
        res = membership(b)
        if res.inside:
            dec = res.decomposition
            total = [Fraction(0)] * d
            for m in dec.integral.edges:
                total = [t + v for t, v in zip(total, mask_to_vector(m, d))]
            for m, alpha in dec.fractional:
                total = [t + alpha * v for t, v in zip(total, mask_to_vector(m, d))]
            assert total == b and len(dec.fractional) <= d
        else:
            cert = res.certificate
            h = sum(max(Fraction(0), sum(ci * vi for ci, vi in zip(cert.c, mask_to_vector(m, d))))
                    for m in range(1, 1 << d))
            assert sum(ci * bi for ci, bi in zip(cert.c, b)) > h == support_function(cert.c)
        lp += 1
    record(8, True, f"{applied} move applications exact ({refused} refusals all precondition failures); {lp} LP results re-verified")
