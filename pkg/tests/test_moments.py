import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stimpdc import closed_form as cf
from stimpdc import fock
from stimpdc.errors import NumericalInconsistency, UnsupportedOrder
from stimpdc.model import AffineMode, SqueezerParams, StimulusParams, output_modes
from stimpdc.moments import (
    A,
    A_DAG,
    B,
    B_DAG,
    MomentRequest,
    coincidence_general,
    number_squared,
    real_part,
    single_counts_general,
    vacuum_expectation,
    word_expectation,
)

VAC = StimulusParams.vacuum()


@pytest.mark.parametrize(
    "word, expected",
    [
        ((), 1),
        ((A,), 0),
        ((A_DAG, A), 0),
        ((A, A_DAG), 1),
        ((B, B_DAG), 1),
        ((A, B_DAG), 0),
        ((A, A, A_DAG, A_DAG), 2),
        ((A, A_DAG, A, A_DAG), 1),
        ((A, B, B_DAG, A_DAG), 1),
        ((A, A_DAG, B, B_DAG), 1),
    ],
)
def test_word_expectation(word, expected):
    assert word_expectation(word) == expected


def test_vacuum_number_is_zero():
    a = AffineMode.vacuum_a()
    assert vacuum_expectation(MomentRequest.of((a, True), (a, False))) == 0


def test_order_limit():
    a = AffineMode.vacuum_a()
    with pytest.raises(UnsupportedOrder):
        MomentRequest(tuple([(a, False)] * 5))


def test_real_part_guard():
    assert real_part(2.0 + 1e-13j) == 2.0
    with pytest.raises(NumericalInconsistency):
        real_part(1.0 + 1e-6j)


def test_coherent_routed_by_swap():
    p, s = SqueezerParams(0.0), StimulusParams.symmetric(2.0)
    assert single_counts_general(p, s, 0.0) == pytest.approx(4.0, abs=1e-14)


def test_energy_conservation_single_arm_seed():
    p, s = SqueezerParams(0.0), StimulusParams(1.0, 0.0, 0.0, 0.0)
    a = single_counts_general(p, s, 0.0, "a")
    b = single_counts_general(p, s, 0.0, "b")
    assert a == pytest.approx(0.0, abs=1e-15)
    assert b == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("psi", [0.0, 0.4, 1.9, math.pi])
@pytest.mark.parametrize("g", [0.3, 1.1, 2.5])
def test_unseeded_singles_flat(g, psi):
    expected = math.sinh(g) ** 2
    assert single_counts_general(SqueezerParams(g, 0.7), VAC, psi, "a") == pytest.approx(expected, rel=1e-12)
    assert single_counts_general(SqueezerParams(g, 0.7), VAC, psi, "b") == pytest.approx(expected, rel=1e-12)


def test_coherent_inputs_uncorrelated():
    p, s = SqueezerParams(0.0), StimulusParams.symmetric(1.0)
    assert coincidence_general(p, s, 0.0) == pytest.approx(1.0, abs=1e-14)
    for psi in np.linspace(0, 2 * math.pi, 7):
        prod = single_counts_general(p, s, psi, "a") * single_counts_general(p, s, psi, "b")
        assert coincidence_general(p, s, psi) == pytest.approx(prod, abs=1e-14)


def test_matches_closed_form_random():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        g, mod = rng.uniform(0, 3), rng.uniform(0, 3)
        phi, theta, psi = rng.uniform(0, 2 * math.pi, size=3)
        p, s = SqueezerParams(g, phi), StimulusParams.symmetric(mod, theta)
        ref = cf.coincidence(p, s, psi)
        assert coincidence_general(p, s, psi) == pytest.approx(ref, rel=1e-10, abs=1e-13)
        assert single_counts_general(p, s, 0.0) == pytest.approx(cf.single_counts(p, s), rel=1e-12)


def test_asymmetric_seed_against_fock():
    p, s = SqueezerParams(0.3, 0.0), StimulusParams(1.0, 0.0, 0.0, 0.0)
    counts = fock.measure(fock.build_state(p, s), 0.7)
    assert coincidence_general(p, s, 0.7) == pytest.approx(counts.coincidence, rel=1e-6)
    assert single_counts_general(p, s, 0.7, "a") == pytest.approx(counts.single_a, rel=1e-6)


def test_wick_completeness_against_fock():
    rng = np.random.default_rng(8)
    for _ in range(50):
        g = rng.uniform(0, 0.8)
        s = StimulusParams(rng.uniform(0, 1.5), rng.uniform(0, 6.3), rng.uniform(0, 1.5), rng.uniform(0, 6.3))
        p, psi = SqueezerParams(g, rng.uniform(0, 6.3)), rng.uniform(0, 6.3)
        counts = fock.measure(fock.build_state(p, s), psi)
        assert coincidence_general(p, s, psi) == pytest.approx(counts.coincidence, rel=1e-6, abs=1e-9)
        assert single_counts_general(p, s, psi, "b") == pytest.approx(counts.single_b, rel=1e-6, abs=1e-9)


settings_small = settings(max_examples=60, deadline=None)
point = st.tuples(
    st.floats(0.0, 2.5), st.floats(0.0, 2.0), st.floats(-7, 7),
    st.floats(0.0, 2.0), st.floats(-7, 7), st.floats(-7, 7), st.floats(-7, 7),
)


@settings_small
@given(point)
def test_hermiticity_and_cauchy_schwarz(pt):
    g, am, ap, bm, bp, phi, psi = pt
    p, s = SqueezerParams(g, phi), StimulusParams(am, ap, bm, bp)
    a3, b3 = output_modes(p, s, psi)
    for req in (
        MomentRequest.of((a3, True), (a3, False)),
        MomentRequest.of((a3, True), (b3, True), (b3, False), (a3, False)),
    ):
        value = vacuum_expectation(req)
        assert abs(value.imag) < 1e-12 * max(1.0, abs(value.real))
    c = coincidence_general(p, s, psi)
    bound = math.sqrt(number_squared(p, s, psi, "a") * number_squared(p, s, psi, "b"))
    assert c <= bound * (1 + 1e-12) + 1e-14
