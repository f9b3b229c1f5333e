import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylab.errors import IdentityViolation, ValidationError
from hardylab.numerics import COMPENSATED, EXTENDED, NAIVE
from hardylab.forms import (
    FormReport, dirichlet_energy, hardy_quotient, identity_report,
    pointwise_identity_residual, pointwise_scale, pointwise_terms,
    remainder_coefficients, remainder_form, summation_by_parts_residual, weighted_form,
)
from hardylab.sequences import (
    Sequence, from_pairs, ground_state, regularized_ground_state, unit,
)
from hardylab.weights import CLASSICAL, KPP, kpp_weight

import helpers

U12 = from_pairs([(1, 1), (2, 1)])
MODES = [NAIVE, COMPENSATED, EXTENDED]


class TestDirichlet:
    def test_examples(self):
        assert dirichlet_energy(unit(1)) == 2.0
        assert dirichlet_energy(U12) == 2.0
        assert dirichlet_energy(Sequence()) == 0.0

    def test_gap_in_support(self):
        # |1|^2 + |0-1|^2 + |i-0|^2 + |0-i|^2
        assert dirichlet_energy(from_pairs([(1, 1), (3, 1j)])) == 4.0


class TestWeighted:
    def test_examples(self):
        assert weighted_form(unit(1), KPP) == kpp_weight(1)
        assert weighted_form(unit(1), CLASSICAL) == 0.25
        # w_1 + w_2 in mpmath
        assert weighted_form(U12) == pytest.approx(0.6539347850487683777, rel=1e-15)


class TestRemainder:
    def test_e1(self):
        assert remainder_form(unit(1)) == pytest.approx(math.sqrt(2), rel=2e-16)

    def test_u12(self):
        # (b_2 - a_2)^2 + b_3^2 = 3/sqrt(2) - 2 + sqrt(3/2), mpmath
        assert remainder_form(U12) == pytest.approx(1.3460652149512316223, rel=1e-15)

    def test_ground_state_annihilates_interior(self):
        M = 50
        u = ground_state(M)
        # only the trailing n = M+1 term survives: |b_{M+1} sqrt(M)|^2
        b = remainder_coefficients(M + 1)[1]
        assert remainder_form(u) == pytest.approx(b * b * M, rel=1e-12)
        for n in range(2, M + 1):
            a, b = remainder_coefficients(n)
            assert abs(a * math.sqrt(n) - b * math.sqrt(n - 1)) <= 8 * math.ulp(math.sqrt(n))

    @pytest.mark.parametrize("n", [2, 3, 10, 999, 10**6])
    def test_coefficients(self, n):
        a, b = remainder_coefficients(n)
        assert abs(a * b - 1) <= 2 * math.ulp(1.0)
        assert abs(a * a - math.sqrt((n - 1) / n)) <= 2 * math.ulp(1.0)
        assert abs(b * b - math.sqrt(n / (n - 1))) <= 2 * math.ulp(b * b)
        ao, bo = helpers.coeffs(n)
        assert a == pytest.approx(float(ao), rel=4e-16)
        assert b == pytest.approx(float(bo), rel=4e-16)

    @pytest.mark.parametrize("n", [2, 3, 17, 1000, 10**5])
    def test_diagonal_identity(self, n):
        # a_n^2 + b_{n+1}^2 = 2 - w_n
        a = remainder_coefficients(n)[0]
        b = remainder_coefficients(n + 1)[1]
        assert abs(a * a + b * b - (2 - kpp_weight(n))) <= 8 * math.ulp(2.0)

    def test_coefficients_start_at_2(self):
        with pytest.raises(ValidationError):
            remainder_coefficients(1)


class TestIdentity:
    def test_e1_exact(self):
        r = identity_report(unit(1))
        assert r.dirichlet == 2.0
        assert r.weighted == kpp_weight(1)
        assert abs(r.remainder - math.sqrt(2)) <= math.ulp(math.sqrt(2))
        assert abs(r.residual) <= 4 * math.ulp(2.0)

    @pytest.mark.parametrize("mode", MODES)
    def test_u12(self, mode):
        r = identity_report(U12, mode)
        assert r.dirichlet == 2.0
        assert r.weighted == pytest.approx(0.6539347850487683777, rel=1e-15)
        assert r.remainder == pytest.approx(1.3460652149512316223, rel=1e-15)
        assert abs(r.residual) <= mode.tolerance * 2

    def test_extended_residual_tiny(self):
        r = identity_report(U12, EXTENDED)
        assert abs(r.residual) <= 1e-60

    def test_against_oracle(self):
        rng = np.random.default_rng(17)
        for size in (1, 5, 40, 300):
            u = helpers.random_sequence(rng, size, -3, 3)
            r = identity_report(u)
            assert r.dirichlet == pytest.approx(float(helpers.dirichlet(u)), rel=1e-13)
            assert r.weighted == pytest.approx(float(helpers.weighted(u)), rel=1e-13)
            assert r.remainder == pytest.approx(float(helpers.remainder(u)), rel=1e-13)

    def test_violation_raises(self, monkeypatch):
        import hardylab.forms as forms
        real = forms.remainder_form
        monkeypatch.setattr(forms, "remainder_form", lambda u, mode: real(u, mode) + 1e-9)
        with pytest.raises(IdentityViolation) as info:
            identity_report(U12)
        assert isinstance(info.value.report, FormReport)
        assert not info.value.report.passed
        assert identity_report(U12, check=False).residual == pytest.approx(-1e-9, rel=1e-3)

    @pytest.mark.parametrize("mode", [COMPENSATED, EXTENDED])
    def test_random_property(self, mode):
        rng = np.random.default_rng(99)
        for _ in range(20):
            size = int(rng.integers(1, 2000))
            u = helpers.random_sequence(rng, size)
            r = identity_report(u, mode)
            assert abs(r.residual) <= mode.tolerance * max(r.dirichlet, 1.0)

    @settings(max_examples=150, deadline=None)
    @given(st.dictionaries(
        st.integers(1, 5000),
        st.complex_numbers(min_magnitude=1e-6, max_magnitude=1e6,
                           allow_nan=False, allow_infinity=False),
        min_size=1, max_size=40))
    def test_inequality_and_improvement(self, d):
        u = Sequence(d)
        r = identity_report(u)
        tol = COMPENSATED.tolerance * max(r.dirichlet, 1.0)
        assert r.remainder >= 0
        assert r.dirichlet - r.weighted >= -tol
        assert weighted_form(u, KPP) > weighted_form(u, CLASSICAL)


class TestPointwise:
    def test_n1_convention(self):
        assert pointwise_identity_residual(1, 1.0, 123.0) == 0.0
        s, t, d = pointwise_terms(1, 1.0, 99.0)
        assert (s, t, d) == (0.0, 1.0, 1.0)

    @pytest.mark.parametrize("n,u,v", [(2, 1, 1), (5, 2 + 1j, -1), (10**6, 3j, 1e3)])
    def test_examples(self, n, u, v):
        r = pointwise_identity_residual(n, u, v)
        assert abs(r) <= 8 * math.ulp(pointwise_scale(n, u, v))

    def test_extended(self):
        r = pointwise_identity_residual(5, 2 + 1j, -1, EXTENDED)
        assert abs(r) < 1e-70

    def test_annihilation(self):
        # the remainder term at n vanishes on (sqrt(n), sqrt(n-1))
        for n in (2, 3, 100, 10**6):
            a, b = remainder_coefficients(n)
            term = (a * math.sqrt(n) - b * math.sqrt(n - 1)) ** 2
            assert term <= (8 * math.ulp(math.sqrt(n))) ** 2

    @settings(max_examples=500, deadline=None)
    @given(st.integers(1, 10**6),
           st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False,
                              allow_infinity=False),
           st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False,
                              allow_infinity=False))
    def test_property(self, n, u, v):
        r = pointwise_identity_residual(n, u, v)
        assert abs(r) <= 8 * math.ulp(pointwise_scale(n, u, v))


class TestSummationByParts:
    def test_e1(self):
        assert abs(summation_by_parts_residual(unit(1))) <= 1e-12

    def test_u12(self):
        assert abs(summation_by_parts_residual(U12)) <= 1e-12
        assert abs(summation_by_parts_residual(U12, EXTENDED)) <= 1e-60

    def test_random(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            u = helpers.random_sequence(rng, int(rng.integers(1, 1000)), -2, 2)
            w = weighted_form(u)
            assert abs(summation_by_parts_residual(u)) <= 1e-12 * max(w, 1.0)


class TestQuotient:
    def test_e1(self):
        assert hardy_quotient(unit(1)) == pytest.approx(2 + math.sqrt(2), rel=1e-15)
        assert hardy_quotient(unit(1), CLASSICAL) == 8.0

    def test_zero(self):
        with pytest.raises(ValidationError):
            hardy_quotient(Sequence())

    def test_probe_approaches_one(self):
        q16 = hardy_quotient(regularized_ground_state(16))
        q64 = hardy_quotient(regularized_ground_state(64))
        r = identity_report(regularized_ground_state(64))
        assert q64 == pytest.approx(1 + r.remainder / r.weighted, rel=1e-12)
        assert 1 < q64 < q16
