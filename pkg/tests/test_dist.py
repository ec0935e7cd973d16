import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonbounds.dist import (
    CompoundPoissonLaw,
    Pmf,
    PoissonLaw,
    mean,
    pmf_bernoulli,
    pmf_compound_poisson,
    pmf_geometric,
    pmf_poisson_truncated,
    variance,
)


def poisson_oracle(k, lam):
    return math.exp(-lam) * lam**k / math.factorial(k)


class TestBernoulli:
    def test_zero_is_point_mass(self):
        assert list(pmf_bernoulli(0.0).probs) == [1.0]

    def test_half(self):
        assert list(pmf_bernoulli(0.5).probs) == [0.5, 0.5]

    def test_moments(self):
        P = pmf_bernoulli(0.1)
        assert mean(P) == pytest.approx(0.1, abs=1e-15)
        assert variance(P) == pytest.approx(0.09, abs=1e-15)
        assert mean(pmf_bernoulli(0.3)) == pytest.approx(0.3, abs=1e-15)

    def test_one_is_shift(self):
        assert list(pmf_bernoulli(1.0).probs) == [0.0, 1.0]

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_out_of_range(self, p):
        with pytest.raises(ValueError):
            pmf_bernoulli(p)


class TestPoisson:
    def test_p0_closed_form(self):
        P = pmf_poisson_truncated(1.0, 1e-12)
        assert P.probs[0] == pytest.approx(math.exp(-1), rel=1e-14)
        assert P.probs[0] == pytest.approx(0.3678794412, abs=1e-10)

    def test_normalisation(self):
        P = pmf_poisson_truncated(1.0, 1e-12)
        assert math.fsum(P.probs) >= 1 - 1e-12
        assert 0 < P.tail <= 1e-12

    def test_recurrence_ratio(self):
        P = pmf_poisson_truncated(0.5)
        assert P.probs[1] / P.probs[0] == pytest.approx(0.5, rel=1e-14)

    def test_truncation_index_is_smallest(self):
        lam, eps = 3.0, 1e-9
        P = pmf_poisson_truncated(lam, eps)
        N = P.max_index
        tail_at = lambda n: 1 - math.fsum(poisson_oracle(k, lam) for k in range(n + 1))
        assert tail_at(N) <= eps * (1 + 1e-6)
        assert tail_at(N - 1) > eps

    def test_mean(self):
        assert mean(pmf_poisson_truncated(2.0, 1e-12)) == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 7.5, 40.0])
    def test_matches_pointwise_law(self, lam):
        P = pmf_poisson_truncated(lam)
        law = PoissonLaw(lam).pmf(np.arange(len(P)))
        np.testing.assert_allclose(P.probs, law, rtol=1e-13, atol=0)

    @pytest.mark.parametrize("lam", [0.3, 2.0, 25.0, 300.0])
    def test_law_recurrence(self, lam):
        xs = np.arange(int(lam + 20 * math.sqrt(lam)) + 1)
        p = PoissonLaw(lam).pmf(xs)
        np.testing.assert_allclose(lam * p[:-1], (xs[:-1] + 1) * p[1:], rtol=1e-12)

    def test_law_against_factorial_oracle(self):
        law = PoissonLaw(2.5)
        for k in range(30):
            assert law.pmf(k) == pytest.approx(poisson_oracle(k, 2.5), rel=1e-13)

    def test_law_never_underflows_in_log_space(self):
        assert np.isfinite(PoissonLaw(1.0).logpmf(500))

    def test_bad_tail_eps(self):
        with pytest.raises(ValueError):
            pmf_poisson_truncated(1.0, 1e-3)


class TestGeometric:
    def test_q_one(self):
        assert list(pmf_geometric(1.0).probs) == [1.0]

    def test_half(self):
        P = pmf_geometric(0.5)
        np.testing.assert_allclose(P.probs[:3], [0.5, 0.25, 0.125], rtol=1e-15)
        assert mean(P) == pytest.approx(1.0, abs=1e-12)
        assert variance(P) == pytest.approx(2.0, abs=1e-9)

    def test_tail_is_exact(self):
        P = pmf_geometric(0.3, 1e-10)
        assert P.tail == pytest.approx(0.7 ** (P.max_index + 1), rel=1e-12)

    def test_array_variance(self):
        # the stored array, not just the cached closed form, carries the variance
        P = pmf_geometric(0.5)
        x = np.arange(len(P))
        v = math.fsum((x - 1.0) ** 2 * P.probs)
        assert v == pytest.approx(2.0, abs=1e-9)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            pmf_geometric(0.0)


class TestCompoundPoisson:
    def test_second_rate_zero(self):
        P = pmf_compound_poisson(CompoundPoissonLaw(1.0, 0.0))
        np.testing.assert_allclose(P.probs, pmf_poisson_truncated(1.0, 0.5e-12).probs)

    def test_mean(self):
        P = pmf_compound_poisson(CompoundPoissonLaw(0.5, 0.5))
        assert mean(P) == pytest.approx(1.5, abs=1e-9)

    def test_p1(self):
        P = pmf_compound_poisson(CompoundPoissonLaw(0.5, 0.5))
        assert P.probs[1] == pytest.approx(0.5 * math.exp(-1), rel=1e-13)
        assert P.probs[1] == pytest.approx(0.1839397, abs=1e-7)

    @pytest.mark.parametrize("lam", [0.2, 1.0, 4.0])
    def test_mean_three_halves(self, lam):
        P = pmf_compound_poisson(CompoundPoissonLaw(lam / 2, lam / 2), 1e-12)
        assert abs(mean(P) - 1.5 * lam) <= 1e-8

    @pytest.mark.parametrize("l1,l2", [(0.5, 0.5), (0.05, 0.3), (3.0, 1.0)])
    def test_panjer_matches_double_sum(self, l1, l2):
        law = CompoundPoissonLaw(l1, l2)
        for k in range(25):
            direct = math.fsum(poisson_oracle(k - 2 * j, l1) * poisson_oracle(j, l2) for j in range(k // 2 + 1))
            assert law.pmf(k) == pytest.approx(direct, rel=1e-12)

    def test_panjer_large_rate_does_not_underflow(self):
        law = CompoundPoissonLaw(400.0, 400.0)
        vals = law.pmf(np.arange(2000))
        assert math.fsum(vals) == pytest.approx(1.0, abs=1e-9)

    def test_array_matches_pointwise(self):
        law = CompoundPoissonLaw(0.7, 0.4)
        P = pmf_compound_poisson(law)
        # deep-tail entries miss truncated cross terms, so compare on an absolute scale
        np.testing.assert_allclose(P.probs, law.pmf(np.arange(len(P))), rtol=1e-12, atol=1e-12)

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            CompoundPoissonLaw(0.0, 0.0)


class TestPmfInvariants:
    def test_rejects_unnormalised(self):
        with pytest.raises(ValueError):
            Pmf(np.array([0.5, 0.4]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Pmf(np.array([1.1, -0.1]))

    def test_immutable(self):
        P = pmf_bernoulli(0.3)
        with pytest.raises(ValueError):
            P.probs[0] = 0.2

    def test_json_shape(self):
        assert pmf_bernoulli(0.25).to_dict() == {"probs": [0.75, 0.25], "tail": 0.0}

    @settings(max_examples=200, deadline=None)
    @given(
        st.sampled_from(["bern", "poisson", "geom"]),
        st.floats(0.01, 0.99),
    )
    def test_constructed_pmfs_are_valid(self, kind, x):
        if kind == "bern":
            P = pmf_bernoulli(x)
        elif kind == "poisson":
            P = pmf_poisson_truncated(20 * x)
        else:
            P = pmf_geometric(x)
        assert np.all(P.probs >= 0)
        assert abs(math.fsum(P.probs) + P.tail - 1) <= 1e-12
