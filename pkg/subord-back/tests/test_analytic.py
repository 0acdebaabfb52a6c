import logging
import math

import numpy as np
import pytest

from analytic import (
    AnalyticFn,
    SchwarzFn,
    boundary_sup,
    compose_janowski,
    disk_circle,
    eval_with_derivative,
    integrate_to_starlike,
    membership_margin,
    membership_witness,
    sample_member,
    sample_schwarz,
    series_divide,
    starlike_quotient_series,
    winding_number,
)
from geometry import JanowskiPair, PoleError


@pytest.mark.parametrize(
    "coefficients, z, expected",
    [
        ([1], 0.3 + 0.2j, (1, 0)),
        ([1, 1], 0.5, (1.5, 0.5)),
        ([1, 0, 2], 1j, (-1, -4)),
    ],
)
def test_eval_with_derivative(coefficients, z, expected):
    value, zderiv = eval_with_derivative(AnalyticFn(coefficients), z)
    assert value == pytest.approx(expected[0])
    assert zderiv == pytest.approx(expected[1])


def test_leading_order_is_enforced():
    with pytest.raises(ValueError):
        AnalyticFn([1, 0.5, 0.2], leading_order=2)
    assert AnalyticFn([1, 0, 0.2], leading_order=2).degree == 2


def test_from_json_infers_leading_order():
    p = AnalyticFn.from_json([[1, 0], [0, 0], [0, 0], [0.5, -0.5]])
    assert p.leading_order == 3
    assert p.coefficients[3] == 0.5 - 0.5j
    assert AnalyticFn.from_json(p.to_json()).coefficients.tolist() == p.coefficients.tolist()


def test_series_divide_geometric():
    np.testing.assert_allclose(series_divide([1], [1, -1], 6), np.ones(7))
    # (1 + z)/(1 - z) = 1 + 2z + 2z^2 + ...
    np.testing.assert_allclose(series_divide([1, 1], [1, -1], 4), [1, 2, 2, 2, 2])


def test_series_divide_pole():
    with pytest.raises(PoleError):
        series_divide([1], [0, 1], 3)


def test_sample_schwarz_single_term():
    omega = sample_schwarz(1, seed=3)
    assert omega.coefficients[0] == 0
    assert abs(omega.coefficients[1]) == pytest.approx(0.999)
    assert omega.sup_bound <= 1


def test_sample_schwarz_refined_sup():
    for seed in range(10):
        omega = sample_schwarz(3, seed=seed)
        assert omega(0) == 0
        assert boundary_sup(omega.coefficients, points=16384) <= 0.9995


def test_sample_schwarz_is_deterministic():
    first = sample_schwarz(5, leading_order=2, seed=11).coefficients
    second = sample_schwarz(5, leading_order=2, seed=11).coefficients
    assert first.tolist() == second.tolist()
    assert first[1] == 0


def test_schwarz_from_coefficients_rejects_large_sup():
    with pytest.raises(ValueError):
        SchwarzFn.from_coefficients([0, 0.8, 0.5])
    with pytest.raises(ValueError):
        SchwarzFn.from_coefficients([0.1, 0.5])


def test_compose_janowski_examples():
    zero = SchwarzFn.from_coefficients([0, 0])
    np.testing.assert_allclose(compose_janowski(zero, JanowskiPair(0.4, -0.9), 3).coefficients, [1, 0, 0, 0])

    identity = SchwarzFn.from_coefficients([0, 1])
    np.testing.assert_allclose(compose_janowski(identity, JanowskiPair(1, 0), 4).coefficients, [1, 1, 0, 0, 0])
    np.testing.assert_allclose(compose_janowski(identity, JanowskiPair(1, -1), 3).coefficients, [1, 2, 2, 2])


def test_compose_janowski_warns_on_heavy_tail(caplog):
    identity = SchwarzFn.from_coefficients([0, 1])
    with caplog.at_level(logging.WARNING, logger="analytic"):
        compose_janowski(identity, JanowskiPair(1, -1), 3)
    assert "tail" in caplog.text

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="analytic"):
        compose_janowski(identity, JanowskiPair(1, -1), 3, warn=False)
    assert caplog.text == ""


def test_membership_margin_examples():
    pair = JanowskiPair(1, 0)
    assert membership_margin(AnalyticFn([1]), pair, grid=256) == pytest.approx(1)
    assert membership_margin(AnalyticFn([1, 1]), pair, grid=256) == pytest.approx(0.001, abs=1e-6)
    assert membership_margin(AnalyticFn([1, 2]), pair, grid=256) == pytest.approx(-0.998, abs=1e-6)


def test_membership_witness_sits_on_circle():
    margin, z = membership_witness(AnalyticFn([1, 0, 0.5]), JanowskiPair(1, 0), grid=128, radius=0.9)
    assert abs(z) == pytest.approx(0.9)
    assert margin == pytest.approx(1 - 0.5 * 0.81)


def test_membership_rejects_bad_grid():
    with pytest.raises(ValueError):
        membership_margin(AnalyticFn([1]), JanowskiPair(1, 0), grid=32)
    with pytest.raises(ValueError):
        membership_margin(AnalyticFn([1]), JanowskiPair(1, 0), radius=1.0)


def test_composition_lands_inside(rng):
    for seed in range(30):
        lower = rng.uniform(-0.3, 0.3)
        pair = JanowskiPair(rng.uniform(lower + 0.05, 1), lower)
        p = sample_member(pair, degree=3, truncation=64, seed=seed)
        assert membership_margin(p, pair) > 0


def test_winding_number():
    z = disk_circle(256, 0.9)
    assert winding_number(z) == 1
    assert winding_number(z**2) == 2
    assert winding_number(1 + 0.5 * z) == 0


def test_integrate_to_starlike_examples():
    f = integrate_to_starlike(AnalyticFn([1]), 5)
    np.testing.assert_allclose(f.coefficients, [0, 1, 0, 0, 0, 0])

    # z e^z: a_{k+1} = 1/k!
    f = integrate_to_starlike(AnalyticFn([1, 1]), 8)
    expected = [0] + [1 / math.factorial(k) for k in range(8)]
    np.testing.assert_allclose(f.coefficients, expected, rtol=0, atol=1e-12)


def test_integrate_to_starlike_recovers_koebe():
    koebe_quotient = AnalyticFn([1] + [2] * 16)
    f = integrate_to_starlike(koebe_quotient, 16)
    np.testing.assert_allclose(f.coefficients, np.arange(17), rtol=0, atol=1e-12)


def test_integrate_to_starlike_requires_normalisation():
    with pytest.raises(ValueError):
        integrate_to_starlike(AnalyticFn([2, 1]), 4)


def test_starlike_quotient_round_trip(rng):
    pair = JanowskiPair(0.5, -0.3)
    p = sample_member(pair, degree=3, truncation=64, seed=7)
    f = integrate_to_starlike(p, 64)
    quotient = starlike_quotient_series(f, 64)
    np.testing.assert_allclose(quotient.coefficients, p.coefficients, atol=1e-10)
    assert membership_margin(quotient, pair) > 0


def test_starlike_quotient_needs_first_coefficient():
    with pytest.raises(PoleError):
        starlike_quotient_series(AnalyticFn([0, 0, 1], leading_order=1), 4)


def test_derivative_matches_central_differences(rng):
    h = 1e-6
    for _ in range(50):
        p = AnalyticFn(rng.normal(size=9) + 1j * rng.normal(size=9))
        z = 0.9 * np.sqrt(rng.uniform(0, 1, 32)) * np.exp(1j * rng.uniform(0, 2 * math.pi, 32))
        _, zd = eval_with_derivative(p, z)
        slope = (p(z + h) - p(z - h)) / (2 * h)
        np.testing.assert_allclose(zd, z * slope, rtol=1e-6, atol=1e-6)


def test_membership_margin_shrinks_with_radius(rng):
    radii = (0.3, 0.5, 0.7, 0.9, 0.99)
    for seed in range(100):
        lower = rng.uniform(-0.5, 0.5)
        pair = JanowskiPair(rng.uniform(lower + 0.2, 1.0), lower)
        p = sample_member(pair, degree=3, truncation=48, seed=seed, warn=False)
        margins = [membership_margin(p, pair, grid=512, radius=radius) for radius in radii]
        assert all(later <= earlier + 1e-12 for earlier, later in zip(margins, margins[1:]))
