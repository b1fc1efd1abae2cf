"""Tests for the Markov-tree quasi-Fuchsianity search."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cglue.bq import (
    TraceTriple,
    bq_search_python,
    bq_test,
    classify_point,
    vieta_neighbors,
)
from cglue.explicit_groups import markov_triple


def triple_at(c: float, tau: complex) -> TraceTriple:
    return TraceTriple(*markov_triple(c, tau))


def test_vieta_neighbors_examples():
    t = TraceTriple(3.0, 3.0, 3.0)
    coords = [n.coordinates() for n in vieta_neighbors(t)]
    assert (3.0, 3.0, 6.0) in [(x.real, y.real, z.real) for x, y, z in coords]
    for n in vieta_neighbors(t):
        assert all(w.imag == 0.0 for w in n.coordinates())


def test_vieta_moves_are_involutive():
    exact = TraceTriple(3.0, 3.0, 3.0)
    for k, n in enumerate(vieta_neighbors(exact)):
        assert vieta_neighbors(n)[k].coordinates() == exact.coordinates()
    t = triple_at(0.9, 0.4 + 1.1j)
    for k, n in enumerate(vieta_neighbors(t)):
        back = vieta_neighbors(n)[k]
        for w, w0 in zip(back.coordinates(), t.coordinates()):
            assert w == pytest.approx(w0, rel=1e-14, abs=1e-14)


def test_vieta_neighbors_keep_the_identity():
    rng = np.random.default_rng(17)
    for _ in range(100):
        c = float(rng.uniform(0.1, 2.0))
        tau = complex(rng.uniform(-2, 2), rng.uniform(-2.5, 2.5))
        for n in vieta_neighbors(triple_at(c, tau)):
            x, y, z = n.coordinates()
            assert abs(x * x + y * y + z * z - x * y * z) <= 1e-10


def test_trace_triple_validation():
    with pytest.raises(ValueError, match="not a trace triple"):
        TraceTriple(3.0, 3.0, 5.9)
    with pytest.raises(ValueError, match="finite"):
        TraceTriple(math.inf, 3.0, 3.0)
    t = triple_at(1.0, 0.3 + 0.8j)
    back = t.conjugate().conjugate()
    assert back.coordinates() == t.coordinates()


def test_fuchsian_points_are_qf():
    rng = np.random.default_rng(5)
    for c in (0.5, 1.0, 2.0):
        assert classify_point(c, 0.0).outcome == "QF"
        for _ in range(10):
            tau = float(rng.uniform(-c, c))
            assert classify_point(c, tau).outcome == "QF"


def test_real_trace_inside_band_is_not_qf():
    v = classify_point(1.0, 1j * math.pi)
    assert v.outcome == "NotQF"
    assert v.min_trace_norm_seen < 2.0


def test_golden_regressions():
    v = classify_point(1.0, 3.0j)
    assert v.outcome == "NotQF"
    assert v.nodes_visited == 1
    assert v.min_trace_norm_seen == pytest.approx(0.1857608835743521, abs=1e-12)
    assert not v.depth_limit_hit

    assert classify_point(1.0, 0.0).nodes_visited == 1
    v = classify_point(1.0, 1.0 + 1.5j)
    assert (v.outcome, v.nodes_visited) == ("QF", 2)
    v = classify_point(1.0, 0.5 + 2.9j)
    assert (v.outcome, v.nodes_visited) == ("NotQF", 1)


def test_budget_exhaustion_and_qf_stability():
    tau = -1.233174245386334 - 1.664454178299422j
    full = classify_point(1.0, tau)
    assert (full.outcome, full.nodes_visited) == ("QF", 4)
    small = classify_point(1.0, tau, budget=2)
    assert small.outcome == "Undecided"
    assert small.depth_limit_hit
    assert small.nodes_visited == 2

    rng = np.random.default_rng(23)
    for _ in range(60):
        t = complex(rng.uniform(-2, 2), rng.uniform(-3.1, 3.1))
        a = classify_point(1.0, t, budget=500)
        if a.outcome == "QF":
            b = classify_point(1.0, t, budget=50_000)
            assert b.outcome == "QF"
            assert b.nodes_visited == a.nodes_visited


def test_kernel_matches_python_mirror():
    names = {0: "QF", 1: "NotQF", 2: "Undecided"}
    for re in np.linspace(-1.8, 1.8, 7):
        for im in np.linspace(-2.9, 2.9, 7):
            x, y, z = markov_triple(1.0, complex(re, im))
            a = bq_test(TraceTriple(x, y, z), max_nodes=3000)
            code, visited, min_norm, hit = bq_search_python(x, y, z, 3000, 2.001)
            assert a.outcome == names[code]
            assert a.nodes_visited == visited
            assert a.min_trace_norm_seen == pytest.approx(min_norm, abs=1e-14)
            assert a.depth_limit_hit == hit


def test_conjugation_gives_identical_outcome_and_stats():
    rng = np.random.default_rng(31)
    for _ in range(40):
        c = float(rng.uniform(0.4, 2.2))
        tau = complex(rng.uniform(-2, 2), rng.uniform(-2.9, 2.9))
        t = triple_at(c, tau)
        a, b = bq_test(t), bq_test(t.conjugate())
        assert a.outcome == b.outcome
        assert a.nodes_visited == b.nodes_visited
        assert a.min_trace_norm_seen == pytest.approx(b.min_trace_norm_seen, abs=1e-13)


def test_twist_symmetries_of_classify_point():
    rng = np.random.default_rng(47)
    for _ in range(60):
        c = float(rng.uniform(0.4, 2.5))
        tau = complex(rng.uniform(-0.9 * c, 0.9 * c), rng.uniform(-2.8, 2.8))
        base = classify_point(c, tau).outcome
        assert classify_point(c, -tau).outcome == base
        assert classify_point(c, tau.conjugate()).outcome == base
        assert classify_point(c, tau + 2 * c).outcome == base


def test_classify_point_validation():
    with pytest.raises(ValueError, match="Im"):
        classify_point(1.0, 4.0j)
    with pytest.raises(ValueError):
        classify_point(-1.0, 0.0)
    with pytest.raises(ValueError, match="budget"):
        classify_point(1.0, 0.0, budget=0)
    with pytest.raises(ValueError, match="floor"):
        bq_test(TraceTriple(3.0, 3.0, 3.0), trace_floor=1.5)


def test_large_length_traces_still_classify():
    v = classify_point(20.0, 10.0 + 1.0j)
    assert v.outcome in ("QF", "NotQF", "Undecided")
    assert v.nodes_visited >= 1


@settings(max_examples=40, deadline=None)
@given(
    c=st.floats(min_value=0.3, max_value=2.2),
    re=st.floats(min_value=-2.0, max_value=2.0),
    im=st.floats(min_value=-2.9, max_value=2.9),
)
def test_search_is_deterministic(c, re, im):
    tau = complex(re, im)
    a = classify_point(c, tau, budget=2000)
    b = classify_point(c, tau, budget=2000)
    assert a == b
