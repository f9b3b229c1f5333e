import math

import pytest

from hardylab.errors import ValidationError, WeightIndexError
from hardylab.numerics import COMPENSATED, EXTENDED
from hardylab.weights import (
    CLASSICAL, KPP, WeightTable, classical_weight, h, kpp_weight, telescoping_residual,
    weight_gap, weight_value,
)

import helpers


class TestKPP:
    def test_n1(self):
        # 2 - sqrt(2) = 0.58578643762690495...; the product form rounds to the
        # nearer double, one ulp above fl(2 - fl(sqrt 2))
        assert abs(kpp_weight(1) - 0.5857864376269049) <= math.ulp(0.5857864376269049)
        assert kpp_weight(1) == float(helpers.kpp(1))

    @pytest.mark.parametrize("n,expected", [
        (2, 0.068148347421863426501),   # mpmath, 320 bits
        (10, 0.0025078537793346534089),
    ])
    def test_values(self, n, expected):
        assert kpp_weight(n) == pytest.approx(expected, rel=4e-16)

    @pytest.mark.parametrize("n", list(range(1, 60)) + [10**k for k in range(2, 10)])
    def test_against_oracle(self, n):
        exact = helpers.kpp(n)
        assert abs(kpp_weight(n) - exact) <= 5 * math.ulp(float(exact))

    @pytest.mark.parametrize("n", [1, 7, 1000, 123456])
    def test_extended_literal(self, n):
        v = kpp_weight(n, EXTENDED)
        with helpers.mp.workprec(320):
            err = abs(helpers.mpf(str(v)) - helpers.kpp(n)) / helpers.kpp(n)
        assert err < 1e-60

    def test_index_error(self):
        with pytest.raises(WeightIndexError):
            kpp_weight(0)
        with pytest.raises(IndexError):
            classical_weight(0)
        with pytest.raises(WeightIndexError):
            h(0)

    def test_positive_and_decreasing(self):
        prev = kpp_weight(1)
        for n in range(2, 200_001):
            w = kpp_weight(n)
            assert 0 < w < prev
            prev = w


class TestClassical:
    @pytest.mark.parametrize("n,expected", [(1, 0.25), (2, 0.0625), (5, 0.01), (10, 0.0025)])
    def test_values(self, n, expected):
        assert classical_weight(n) == expected


class TestH:
    def test_small(self):
        assert h(1) == 1.0
        assert h(2) == pytest.approx(math.sqrt(2) - 1, rel=1e-15)

    def test_large_is_cancellation_free(self):
        n = 10**12
        with helpers.mp.workprec(320):
            exact = helpers.mp.sqrt(n) - helpers.mp.sqrt(n - 1)
        assert abs(h(n) - exact) / exact <= 1e-12
        assert h(n) == pytest.approx(5.0e-7, rel=1e-6)


class TestGap:
    def test_n1(self):
        assert weight_gap(1) == pytest.approx((2 - math.sqrt(2)) - 0.25, rel=1e-15)
        assert weight_gap(1) == pytest.approx(0.3357864376, abs=1e-10)

    def test_n10(self):
        assert weight_gap(10) == pytest.approx(7.8537793346534088784e-6, rel=1e-12)

    def test_scaled_limit(self):
        # n^4 gap = 5/64 + 21/(512 n^2) + ...; mpmath at n = 1000 gives 0.0781250410...
        assert abs(1000**4 * weight_gap(1000) - 5 / 64) <= 1e-6
        for n, expected in [(10**4, 0.078125000410156252618), (10**5, 0.0781250000041015625)]:
            assert n**4 * weight_gap(n) == pytest.approx(expected, rel=1e-12)

    def test_auto_extended_matches_oracle(self):
        n = 10**6
        with helpers.mp.workprec(320):
            exact = helpers.kpp(n) - helpers.mpf(1) / (4 * helpers.mpf(n) ** 2)
        assert weight_gap(n) == pytest.approx(float(exact), rel=1e-14)

    def test_scaled_range_and_monotone(self):
        # n = 2 gives 0.0904, above the 0.0880 ceiling; the band holds from n = 3
        vals = [n**4 * weight_gap(n) for n in range(2, 1001)]
        assert vals[0] == pytest.approx(0.09037355874981468, rel=1e-12)
        assert all(0.0781 <= v <= 0.0880 for v in vals[1:])
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestTelescoping:
    @pytest.mark.parametrize("n", [1, 7, 10**6])
    def test_small_residual(self, n):
        assert abs(telescoping_residual(n)) <= 4 * math.ulp(kpp_weight(n))

    def test_extended_relative(self):
        n = 10**6
        assert abs(telescoping_residual(n)) / kpp_weight(n) <= 1e-12

    def test_binary64_route_small_n(self):
        # plain binary64 evaluation loses ~n ulps to cancellation in h_n - h_{n+1}
        assert abs(telescoping_residual(1, COMPENSATED)) <= 4 * math.ulp(kpp_weight(1))


class TestTables:
    def test_dispatch(self):
        t = KPP.perturb(1, 0.01)
        assert weight_value(t, 1) == kpp_weight(1) + 0.01
        assert weight_value(t, 2) == kpp_weight(2)
        assert weight_value(CLASSICAL, 5) == 0.01
        assert t(1) == weight_value(t, 1)

    def test_extended_perturbed(self):
        t = KPP.perturb(3, 0.5)
        assert float(weight_value(t, 3, EXTENDED)) == pytest.approx(kpp_weight(3) + 0.5, rel=1e-15)

    @pytest.mark.parametrize("kw", [
        dict(kind="perturbed", base=None, site=1, epsilon=1.0),
        dict(kind="perturbed", base=KPP, site=0, epsilon=1.0),
        dict(kind="perturbed", base=KPP, site=1, epsilon=0.0),
        dict(kind="perturbed", base=KPP, site=1, epsilon=-1.0),
        dict(kind="other"),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            WeightTable(**kw)
