"""Tests for the cusped data and the convergence report."""

from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cglue.limits import (
    QUANTITIES,
    ConvergenceReport,
    NumericFloorError,
    cusped_data,
    limit_check,
)
from cglue.moebius import Mat2C

MATRIX_QUANTITIES = ("A_inf", "A_0", "Omega_0", "Omega_1", "gate")


def test_cusped_data_matrices():
    d = cusped_data(2j)
    assert d.gen_a.scaled_residual(Mat2C(1, 2, 0, 1)) == 0.0
    assert d.gen_b.scaled_residual(Mat2C(1, 0, 2, 1)) == 0.0
    assert d.j.scaled_residual(Mat2C(-1j, 0, 0, 1j)) == 0.0
    assert d.t.scaled_residual(Mat2C(1, 2j, 0, 1)) == 0.0
    assert d.omega_0.scaled_residual(Mat2C(1, -1, 1, 0)) == 0.0
    assert d.omega_1.scaled_residual(Mat2C(0, -1, 1, -1)) == 0.0
    assert d.omega_inf.scaled_residual(Mat2C.identity()) == 0.0
    assert d.horocycle_height == pytest.approx(1.0)
    assert d.gen_a.classify().name == "PARABOLIC"
    assert d.gen_b.classify().name == "PARABOLIC"


def test_cusped_gluing_is_mu_minus_z():
    mu = 0.7 + 1.9j
    d = cusped_data(mu)
    rng = random.Random(3)
    for _ in range(20):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
        w = d.t.apply(d.j.apply(z))
        assert w == pytest.approx(mu - z, abs=1e-12)
        assert d.gate().apply(w) == pytest.approx(z, abs=1e-12)


def test_cusped_data_rejects_nonpositive_height():
    with pytest.raises(ValueError):
        cusped_data(1.0)
    with pytest.raises(ValueError):
        cusped_data(1.0 - 0.5j)


def test_limit_check_frozen_values():
    rep = limit_check(2j, (0.1, 0.01, 0.001))
    finals = {name: rep.deviations[name][-1] for name in QUANTITIES}
    assert finals["A_inf"] == pytest.approx(5.0e-7, rel=0.05)
    assert finals["A_0"] == pytest.approx(1.0e-6, rel=0.05)
    assert finals["Omega_0"] == pytest.approx(2.5e-7, rel=0.05)
    assert finals["Omega_1"] == pytest.approx(2.5e-7, rel=0.05)
    assert finals["gate"] == pytest.approx(5.0e-7, rel=0.05)
    assert finals["hypercycle"] == pytest.approx(1.667e-7, rel=0.05)
    assert finals["axis_inf"] == pytest.approx(1.0e-3, rel=0.05)
    assert finals["axis_0"] == pytest.approx(1.0e-3, rel=0.05)
    assert finals["axis_1"] == pytest.approx(5.0e-4, rel=0.05)
    assert all(rep.monotone.values())
    assert all(rep.controlled.values())
    for name in QUANTITIES:
        expected = 1.0 if name.startswith("axis") else 2.0
        assert rep.decay_order[name] == pytest.approx(expected, abs=0.05)


def test_limit_check_final_thresholds():
    rep = limit_check(2j, (0.1, 0.01, 0.001))
    for name in MATRIX_QUANTITIES:
        assert rep.deviations[name][-1] <= 1e-5
    assert rep.deviations["hypercycle"][-1] <= 1e-4


def test_limit_check_validation():
    with pytest.raises(ValueError, match="strictly decreasing"):
        limit_check(2j, (0.01, 0.1))
    with pytest.raises(ValueError, match="at least two"):
        limit_check(2j, (0.1,))
    with pytest.raises(NumericFloorError):
        limit_check(2j, (0.1, 1e-7))
    with pytest.raises(ValueError, match="exceeds pi"):
        limit_check(20j, (0.5, 0.05))
    with pytest.raises(ValueError, match="Im"):
        limit_check(-1j, (0.1, 0.01))


def test_report_serialization_and_table():
    rep = limit_check(1.5j, (0.2, 0.05))
    data = json.loads(rep.to_json())
    assert data["mu"] == [0.0, 1.5]
    assert set(data["deviations"]) == set(QUANTITIES)
    assert len(data["deviations"]["gate"]) == 2
    table = rep.format_table()
    for name in QUANTITIES:
        assert name in table


@settings(max_examples=25, deadline=None)
@given(
    im=st.floats(min_value=0.5, max_value=3.0),
    re=st.floats(min_value=-2.0, max_value=2.0),
)
def test_named_quantities_shrink_for_generic_mu(im, re):
    mu = complex(re, im)
    rep = limit_check(mu, (0.2, 0.02))
    for name in MATRIX_QUANTITIES + ("hypercycle",):
        first, last = rep.deviations[name]
        assert last <= first
        assert rep.controlled[name]


def test_report_is_plain_data():
    rep = limit_check(2j, (0.1, 0.01))
    assert isinstance(rep, ConvergenceReport)
    assert rep.cs == (0.1, 0.01)
    assert rep.mu == 2j
