"""Moment growth, Ψ₁ integrability, consecutive-moment comparison, C_p."""

import math

import pytest
import scipy.stats

from covineq import inequalities as ineq
from covineq import measures
from covineq.errors import (
    DomainError,
    HypothesisViolatedError,
    UnsupportedMeasureError,
)


class TestMomentGrowth:
    def test_laplace_p2(self, lap):
        c = ineq.check_moment_growth(lap, 2)
        assert abs(c.lhs - math.sqrt(2)) < 1e-6
        assert abs(c.rhs - 4.0) < 1e-6 and c.passed

    def test_gaussian_p1(self, gau):
        c = ineq.check_moment_growth(gau, 1)
        assert abs(c.lhs - math.sqrt(2 / math.pi)) < 1e-6
        assert abs(c.rhs - 2 / 0.7978845608028654) < 1e-4

    def test_uniform_p2(self, uni):
        c = ineq.check_moment_growth(uni, 2)
        assert abs(c.lhs - 1 / math.sqrt(12)) < 1e-8 and c.passed

    @pytest.mark.parametrize("p", [1, 2, 3, 5])
    def test_soundness(self, standard_measures, p):
        for m in standard_measures:
            assert ineq.check_moment_growth(m, p).passed, (m.label, p)


class TestPsi1Bound:
    @pytest.mark.parametrize(
        "m_name, want_rhs",
        [("laplace", 4.0), ("uniform", 2.0), ("exponential", 4.0)],
    )
    def test_oracles(self, standard_measures, m_name, want_rhs):
        m = {s.family: s for s in standard_measures}[m_name]
        c = ineq.check_psi1_bound(m)
        assert c.passed and abs(c.rhs - want_rhs) < 1e-6


class TestMomentComparison:
    def test_laplace_p2_oracle(self, lap):
        c = ineq.check_moment_comparison(lap, 2)
        assert abs(c.lhs - 6 ** (1 / 3)) < 1e-5
        assert abs(c.rhs - 2.0) < 1e-5

    def test_gaussian_p2(self, gau):
        c = ineq.check_moment_comparison(gau, 2)
        assert abs(c.lhs - (2 * math.sqrt(2 / math.pi)) ** (1 / 3)) < 1e-5
        assert c.passed

    def test_p_one_rejected(self, lap):
        with pytest.raises(DomainError):
            ineq.check_moment_comparison(lap, 1)

    def test_uncentered_measure_rejected(self, expo):
        with pytest.raises(HypothesisViolatedError):
            ineq.check_moment_comparison(expo, 2)


class TestLogconcaveMoments:
    def test_laplace_third_moment_witness(self, lap):
        c = ineq.check_logconcave_moments(lap, 2)
        assert abs(c.side_conditions["third_abs_moment"] - 6.0) < 1e-4
        assert abs(
            c.side_conditions["third_moment_bound"] - 4 * math.sqrt(3) * 2**1.5
        ) < 1e-4
        assert c.passed

    def test_gaussian_passes(self, gau):
        assert ineq.check_logconcave_moments(gau, 2).passed

    def test_heavy_tail_rejected(self):
        cauchy = measures.from_scipy(scipy.stats.cauchy(), "cauchy")
        with pytest.raises(UnsupportedMeasureError):
            ineq.check_logconcave_moments(cauchy, 2)

    def test_small_p_rejected(self, lap):
        with pytest.raises(DomainError):
            ineq.check_logconcave_moments(lap, 1.5)


class TestCpSequence:
    def test_values_and_monotonicity(self):
        cs = ineq.cp_sequence([2, 3, 5, 10, 100, 1000])
        assert abs(cs[0] - 2 ** (5 / 3) / 3 ** (5 / 6)) < 1e-12
        assert abs(cs[0] - 1.27091) < 1e-5
        assert all(b < a for a, b in zip(cs, cs[1:]))
        assert 1.0 < cs[-1] < 1.01

    def test_p_one_rejected(self):
        with pytest.raises(DomainError):
            ineq.cp_sequence([1, 2])
