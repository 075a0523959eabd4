import json

import numpy as np
import pytest

from bohrlab.series import (
    Certificate,
    CoefficientSeries,
    LacunarySeries,
    RadiusError,
    TailWeight,
    boundary_supremum,
    certify_by_sampling,
    default_truncation,
    lacunary_expand,
    mobius_series,
    mobius_minus_series,
    schur_from_parameters,
    series_from_json,
    series_to_json,
    tail_bound,
)


class TestMobius:
    def test_identity_map(self):
        s = mobius_series(0.0, 5)
        assert s.coeffs == (0j, 1 + 0j, 0j, 0j, 0j, 0j)
        assert s.coefficient_bound == 0.0

    def test_second_coefficient_modulus(self):
        # |c_s| = (1 - a^2) a^(s-1) with a = 0.5, s = 2
        s = mobius_series(0.5, 10)
        assert abs(s.coeffs[2]) == pytest.approx(0.375, abs=1e-15)

    def test_boundary_sampling(self):
        # partial sums stay below 1 plus the tail certificate on |lam| = 0.99
        s = mobius_series(0.7, 200)
        sup = boundary_supremum(s, 0.99, samples=256)
        assert sup <= 1.0 + tail_bound(s, 0.99, TailWeight.LINEAR) + 1e-12

    def test_rejects_bad_parameter(self):
        with pytest.raises(ValueError):
            mobius_series(1.0, 5)
        with pytest.raises(ValueError):
            mobius_series(-0.1, 5)


class TestMobiusMinus:
    def test_identity_at_zero(self):
        s = mobius_minus_series(0.0, 4)
        assert s.coeffs[0] == 0j and s.coeffs[1] == 1 + 0j
        assert all(c == 0j for c in s.coeffs[2:])

    def test_first_coefficient(self):
        s = mobius_minus_series(0.5, 4)
        assert abs(s.coeffs[1]) == pytest.approx(0.75, abs=1e-15)

    def test_sign_pattern(self):
        s = mobius_minus_series(0.3, 8)
        assert s.coeffs[0].real < 0.0
        assert all(c.real > 0.0 for c in s.coeffs[1:])


class TestSchurParameters:
    def test_single_parameter_constant(self):
        s = schur_from_parameters([0.4 + 0.1j], 6)
        assert s.coeffs == (0.4 + 0.1j,)
        assert s.coefficient_bound == 0.0

    def test_two_step_shift(self):
        # one recursion step by hand: (0, a) gives a*lam
        s = schur_from_parameters([0j, 0.4 + 0j], 5)
        assert s.coeffs[0] == 0j
        assert s.coeffs[1] == pytest.approx(0.4)
        assert all(abs(c) < 1e-15 for c in s.coeffs[2:])

    def test_unimodular_terminator_gives_mobius(self):
        got = schur_from_parameters([0.5 + 0j, 1.0 + 0j], 12)
        want = mobius_series(0.5, 12)
        assert max(abs(a - b) for a, b in zip(got.coeffs, want.coeffs)) < 1e-14

    def test_rejects_parameter_outside_disk(self):
        with pytest.raises(ValueError):
            schur_from_parameters([1.2 + 0j], 4)

    def test_coefficient_bound_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            mags = 0.98 * np.sqrt(rng.random(6))
            args = 2.0 * np.pi * rng.random(6)
            s = schur_from_parameters(mags * np.exp(1j * args), 40)
            cap = 1.0 - abs(s.coeffs[0]) ** 2 + 1e-12
            assert all(abs(c) <= cap for c in s.coeffs[1:])

    def test_empty_parameters_zero_function(self):
        s = schur_from_parameters([], 3)
        assert s.coeffs == (0j,)
        assert s.coefficient_bound == 0.0


class TestLacunary:
    def test_pure_monomial(self):
        one = CoefficientSeries((1 + 0j,), 0.0, Certificate.SCHUR_EXACT)
        s = lacunary_expand(2, 3, one)
        assert s.coeffs[2] == 1 + 0j
        assert sum(1 for c in s.coeffs if c != 0j) == 1

    def test_gap_family_support_and_values(self):
        # m=1, p=2: c_1 = -a, c_{2s+1} = (1-a^2) a^(s-1)
        a = 0.4
        s = lacunary_expand(1, 2, mobius_minus_series(a, 6))
        assert s.coeffs[1] == pytest.approx(-a)
        for k in range(1, 7):
            assert abs(s.coeffs[2 * k + 1]) == pytest.approx((1 - a * a) * a ** (k - 1))

    def test_off_support_zero(self):
        s = lacunary_expand(1, 3, mobius_minus_series(0.5, 5))
        for idx, c in enumerate(s.coeffs):
            if idx % 3 != 1:
                assert c == 0j

    def test_roundtrip_identity(self):
        g = mobius_minus_series(0.6, 7)
        expanded = lacunary_expand(2, 3, g)
        read = tuple(expanded.coeffs[3 * s + 2] for s in range(8))
        assert read == g.coeffs

    def test_lacunary_series_calls(self):
        fam = LacunarySeries(1, 2, mobius_minus_series(0.3, 50))
        lam = 0.4 + 0.1j
        assert fam(lam) == pytest.approx(lam * fam.g(lam**2))


class TestTailBound:
    def test_zero_bound(self):
        s = CoefficientSeries((0.5 + 0j,), 0.0)
        for w in TailWeight:
            assert tail_bound(s, 0.7, w) == 0.0

    def test_linear_closed_form(self):
        s = CoefficientSeries((0j,) * 101, 1.0)
        got = tail_bound(s, 1.0 / 3.0, TailWeight.LINEAR)
        assert got == pytest.approx(3.0 ** (-101) * 1.5, rel=1e-12)

    def test_s_star_dominates_brute_force(self):
        # dropped tail of sum s |c_s|^2 r^(2s), summed directly to order 5000
        a, T, r = 0.9, 50, 0.5
        s = mobius_series(a, T)
        exact = sum(
            k * ((1 - a * a) * a ** (k - 1)) ** 2 * r ** (2 * k)
            for k in range(T + 1, 5001)
        )
        bound = tail_bound(s, r, TailWeight.S_STAR)
        assert bound >= exact
        assert bound <= exact * 10.0  # not wildly loose either

    def test_squared_and_linear_dominate_brute_force(self):
        a, T, r = 0.8, 30, 0.6
        s = mobius_series(a, T)
        lin = sum((1 - a * a) * a ** (k - 1) * r**k for k in range(T + 1, 4001))
        sq = sum(((1 - a * a) * a ** (k - 1)) ** 2 * r ** (2 * k) for k in range(T + 1, 4001))
        assert tail_bound(s, r, TailWeight.LINEAR) >= lin
        assert tail_bound(s, r, TailWeight.SQUARED) >= sq

    def test_rejects_radius_one(self):
        s = mobius_series(0.5, 5)
        with pytest.raises(RadiusError):
            tail_bound(s, 1.0, TailWeight.LINEAR)


class TestConstructorInvariants:
    def test_rejects_large_constant(self):
        with pytest.raises(ValueError):
            CoefficientSeries((1.5 + 0j,))

    def test_unimodular_constant_forces_zeros(self):
        with pytest.raises(ValueError):
            CoefficientSeries((1.0 + 0j, 0.5 + 0j))
        s = CoefficientSeries((1.0 + 0j,), 0.0, Certificate.SCHUR_EXACT)
        assert s.is_degenerate

    def test_exact_certificate_enforces_coefficient_cap(self):
        with pytest.raises(ValueError):
            CoefficientSeries((0.8 + 0j, 0.9 + 0j), 0.0, Certificate.SCHUR_EXACT)

    def test_boundary_invariant_for_exact_series(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            mags = 0.95 * np.sqrt(rng.random(5))
            args = 2.0 * np.pi * rng.random(5)
            s = schur_from_parameters(mags * np.exp(1j * args), 60)
            for r in (0.0, 0.3, 0.7, 0.99):
                sup = boundary_supremum(s, r, 256)
                assert sup <= 1.0 + tail_bound(s, max(r, 0.0), TailWeight.LINEAR) + 1e-12


class TestTruncationPolicy:
    def test_default_meets_target(self):
        for r in (0.1, 0.5, 0.9, 0.99):
            T = default_truncation(r)
            assert r ** (T + 1) / (1 - r) <= 1e-12

    def test_rejects_radius_beyond_cap(self):
        with pytest.raises(RadiusError):
            default_truncation(0.995)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("BOHRLAB_MAX_TRUNC", "50")
        assert default_truncation(0.99) == 50


class TestSerialization:
    def test_roundtrip_plain(self):
        s = mobius_series(0.3, 6)
        data = series_to_json(s)
        assert (data["m"], data["p"]) == (0, 1)
        back = series_from_json(json.loads(json.dumps(data)))
        assert back.g.coeffs == s.coeffs
        assert back.g.certificate is Certificate.SCHUR_EXACT

    def test_roundtrip_lacunary(self):
        fam = LacunarySeries(2, 3, mobius_minus_series(0.4, 5))
        back = series_from_json(series_to_json(fam))
        assert (back.m, back.p) == (2, 3)
        assert back.g.coeffs == fam.g.coeffs

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            series_from_json({"m": 0, "p": 1})


class TestSamplingCertificate:
    def test_upgrade_unknown(self):
        s = CoefficientSeries((0.2 + 0j, 0.5 + 0j, 0.1 + 0j), 0.0, Certificate.UNKNOWN)
        upgraded = certify_by_sampling(s)
        assert upgraded.certificate is Certificate.SCHUR_SAMPLED

    def test_rejects_unbounded(self):
        s = CoefficientSeries((0.9 + 0j, 0.9 + 0j, 0.9 + 0j), 0.0, Certificate.UNKNOWN)
        with pytest.raises(ValueError):
            certify_by_sampling(s)
