import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stimpdc import closed_form as cf
from stimpdc.errors import DegenerateStatistics, RangeExceeded, SymmetryRequired
from stimpdc.model import SqueezerParams, StimulusParams

# reference values below were evaluated with mpmath at 30 digits
SH2_HALF = 0.27154031740762188924
SH4_HALF = 0.07373414397783204321
SPONT_HALF = 0.41900860536328597565

VAC = StimulusParams.vacuum()


def sym(mod, theta=0.0):
    return StimulusParams.symmetric(mod, theta)


class TestSingles:
    def test_zero_gain_passes_seed(self):
        assert cf.single_counts(SqueezerParams(0.0), sym(1.0)) == pytest.approx(1.0, abs=1e-15)

    def test_unseeded(self):
        assert cf.single_counts(SqueezerParams(0.5), VAC) == pytest.approx(SH2_HALF, rel=1e-14)

    def test_in_phase_seed(self):
        value = cf.single_counts(SqueezerParams(0.5, 0.0), sym(1.0, 0.0))
        assert value == pytest.approx(2.98982214586666712460, rel=1e-14)

    def test_asymmetric_rejected(self):
        with pytest.raises(SymmetryRequired):
            cf.single_counts(SqueezerParams(0.5), StimulusParams(1.0, 0.0, 0.0, 0.0))


class TestCoefficients:
    def test_zero_gain(self):
        a, b = cf.coefficients_ab(SqueezerParams(0.0), sym(1.0))
        assert a == 0.0
        assert b == pytest.approx(0.5, abs=1e-15)

    def test_unseeded(self):
        a, b = cf.coefficients_ab(SqueezerParams(0.5), VAC)
        assert a == pytest.approx(SH4_HALF, rel=1e-14)
        assert b == pytest.approx(0.17263723069272696622, rel=1e-14)

    def test_opposed_phase(self):
        # Delta = pi collapses B to (sinh(2g)/2 - |alpha|^2 e^{-2g})^2 / 2
        g = 0.5
        _, b = cf.coefficients_ab(SqueezerParams(g, math.pi), sym(1.0, 0.0))
        assert b == pytest.approx(0.02413869312018648514, rel=1e-12)
        assert b == pytest.approx(0.5 * (math.sinh(2 * g) / 2 - math.exp(-2 * g)) ** 2, rel=1e-12)

    def test_gain_guard(self):
        with pytest.raises(RangeExceeded):
            cf.coefficients_ab(SqueezerParams(12.5), VAC)
        cf.coefficients_ab(SqueezerParams(12.0), VAC)


class TestVisibility:
    def test_small_gain_unseeded_is_one(self):
        assert cf.visibility(SqueezerParams(1e-8), VAC) == pytest.approx(1.0, abs=1e-12)

    def test_high_gain_unseeded(self):
        v = cf.visibility(SqueezerParams(3.0), VAC)
        assert v == pytest.approx(0.33554030206042075947, rel=1e-12)

    def test_seeded_at_gain_two(self):
        g = 2.0
        v = cf.visibility(SqueezerParams(g, 0.0), sym(math.sinh(g), 0.0))
        assert v == pytest.approx(0.93353054747222479740, rel=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateStatistics):
            cf.visibility(SqueezerParams(0.0), VAC)
        with pytest.raises(DegenerateStatistics):
            cf.count_stats(SqueezerParams(0.0), VAC)


class TestCoincidence:
    def test_fringe_minimum(self):
        c = cf.coincidence(SqueezerParams(0.5), VAC, math.pi / 2)
        assert c == pytest.approx(SH4_HALF, rel=1e-12)

    def test_fringe_maximum(self):
        assert cf.coincidence(SqueezerParams(0.5), VAC, 0.0) == pytest.approx(SPONT_HALF, rel=1e-14)

    def test_coherent_only(self):
        assert cf.coincidence(SqueezerParams(0.0), sym(1.0), 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_count_stats_bundle(self):
        p, s = SqueezerParams(0.7, 1.1), sym(0.8, 0.2)
        stats = cf.count_stats(p, s, 0.4)
        a, b = cf.coefficients_ab(p, s)
        assert stats.coeff_A == a and stats.coeff_B == b
        assert stats.coincidence == cf.coincidence(p, s, 0.4)
        assert stats.visibility == cf.visibility(p, s)
        assert stats.delta == pytest.approx(1.1 - 0.4)
        v = stats.visibility
        printed = a * (1 + v / (1 - v) * (1 + math.cos(0.8)))
        assert stats.coincidence == pytest.approx(printed, rel=1e-12)


class TestLimits:
    def test_spontaneous_visibility(self):
        assert cf.spontaneous_visibility_limit(SqueezerParams(0.0)) == 1.0
        assert cf.spontaneous_visibility_limit(SqueezerParams(12.0)) == pytest.approx(1 / 3, rel=1e-9)
        v = cf.spontaneous_visibility_limit(SqueezerParams(1.0))
        assert v == pytest.approx(0.46295196425908671391, rel=1e-14)
        assert v == pytest.approx(cf.visibility(SqueezerParams(1.0), VAC), rel=1e-14)

    def test_spontaneous_strength(self):
        assert cf.spontaneous_strength_limit(SqueezerParams(0.0)) == 0.0
        assert cf.spontaneous_strength_limit(SqueezerParams(0.5)) == pytest.approx(SPONT_HALF, rel=1e-14)
        ratio = cf.spontaneous_strength_limit(SqueezerParams(3.0)) / cf.spontaneous_strength_limit(
            SqueezerParams(2.0)
        )
        assert ratio == pytest.approx(math.exp(4), rel=0.05)

    def test_visibility_asymptote(self):
        assert cf.stimulated_visibility_asymptote(0.0, 0.3) == pytest.approx(1 / 3)
        assert cf.stimulated_visibility_asymptote(1.0, 0.0) == pytest.approx(6.25 / 10.75, rel=1e-14)
        assert cf.stimulated_visibility_asymptote(10.0, 0.0) == pytest.approx(420.25 / 460.75, rel=1e-14)
        # opposed phase loses the seed entirely
        assert cf.stimulated_visibility_asymptote(10.0, math.pi) == pytest.approx(1 / 3)

    def test_strength_asymptote(self):
        p = SqueezerParams(1.3)
        sh4 = math.sinh(1.3) ** 4
        assert cf.stimulated_strength_asymptote(p, 0.0, 0.0) == pytest.approx(2 * sh4)
        for x in (0.5, 3.0, 40.0):
            assert cf.stimulated_strength_asymptote(p, x, math.pi) == pytest.approx(2 * sh4)

    def test_strength_asymptote_approaches_exact(self):
        ratios = []
        for g in (2.0, 3.0, 4.0, 5.0):
            p = SqueezerParams(g, 0.0)
            x = math.sinh(g) ** 2
            exact = cf.coincidence(p, sym(math.sqrt(x), 0.0), 0.0)
            ratios.append(cf.stimulated_strength_asymptote(p, x, 0.0) / exact)
        assert abs(ratios[0] - 1) < 0.1
        assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))


class TestEnhancement:
    def test_unseeded_ratio_is_one(self):
        assert cf.enhancement_ratio(SqueezerParams(0.8), VAC) == pytest.approx(1.0, rel=1e-14)

    def test_zero_gain(self):
        with pytest.raises(DegenerateStatistics):
            cf.enhancement_ratio(SqueezerParams(0.0), sym(1.0))

    def test_equal_contribution_at_1_7(self):
        # pump phase pi with theta = pi/2 gives Delta = 0
        p = SqueezerParams(1.7, math.pi)
        mod = cf.spontaneous_strength_limit(p) ** 0.25
        ratio = cf.enhancement_ratio(p, sym(mod, math.pi / 2))
        assert ratio == pytest.approx(983.55140745060537927, rel=1e-12)

    def test_exp4g_scaling(self):
        def ratio(g):
            return cf.enhancement_ratio(SqueezerParams(g, 0.0), sym(math.sinh(g), 0.0))

        slope = math.log(ratio(3.5) / ratio(2.5))
        assert slope == pytest.approx(4.0, rel=0.05)


random_points = st.tuples(
    st.floats(0.0, 4.0),
    st.floats(0.0, 3.0),
    st.floats(-7.0, 7.0),
    st.floats(-7.0, 7.0),
    st.floats(-7.0, 7.0),
)


@given(random_points)
def test_nonnegative(point):
    g, mod, phi, theta, psi = point
    p, s = SqueezerParams(g, phi), sym(mod, theta)
    a, b = cf.coefficients_ab(p, s)
    assert a >= 0.0 and b >= 0.0
    assert cf.coincidence(p, s, psi) >= 0.0


@given(random_points)
def test_fringe_period_and_parity(point):
    g, mod, phi, theta, psi = point
    p, s = SqueezerParams(g, phi), sym(mod, theta)
    c = cf.coincidence(p, s, psi)
    assert cf.coincidence(p, s, psi + math.pi) == pytest.approx(c, rel=1e-12, abs=1e-300)
    assert cf.coincidence(p, s, -psi) == c


@given(random_points, st.floats(-5.0, 5.0))
def test_delta_only_dependence(point, shift):
    g, mod, phi, theta, psi = point
    p, s = SqueezerParams(g, phi), sym(mod, theta)
    q, t = SqueezerParams(g, phi + 2 * shift), sym(mod, theta + shift)
    # cancellation inside the bracket limits accuracy to the size of its largest term
    scale = 1e-12 * math.cosh(g) ** 4 * (1 + mod**2) ** 2
    for f in (cf.single_counts, cf.coefficients_ab):
        assert np.allclose(f(p, s), f(q, t), rtol=1e-12, atol=scale)


def test_form_equivalence():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 1000:
        g, mod = rng.uniform(0, 4), rng.uniform(0, 3)
        phi, theta, psi = rng.uniform(-7, 7, size=3)
        p, s = SqueezerParams(g, phi), sym(mod, theta)
        a, b = cf.coefficients_ab(p, s)
        if a + b == 0:
            continue
        v = b / (a + b)
        if v >= 1 - 1e-9:
            continue
        printed = a * (1 + v / (1 - v) * (1 + math.cos(2 * psi)))
        assert cf.coincidence(p, s, psi) == pytest.approx(printed, rel=1e-10)
        checked += 1


def test_limit_consistency_and_asymptote_convergence():
    for g in np.linspace(0.05, 10, 200):
        p = SqueezerParams(g)
        assert cf.visibility(p, VAC) == pytest.approx(cf.spontaneous_visibility_limit(p), rel=1e-12)
    for c in (0.5, 1.0, 10.0):
        for delta in (0.0, 1.0, 2.5):
            target = cf.stimulated_visibility_asymptote(c, delta)
            gaps = [
                abs(cf.visibility(SqueezerParams(g, delta), sym(math.sqrt(c), 0.0)) - target)
                for g in np.linspace(3, 10, 30)
            ]
            assert all(b <= a for a, b in zip(gaps, gaps[1:]))
            assert gaps[-1] < 1e-6
