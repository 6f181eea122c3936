import numpy as np
import pytest
import scipy.integrate

from conftest import unit_vector
from kolmo_lab import (
    Exhaustion,
    FrameSpec,
    FunctionRep,
    ParameterError,
    SpaceSpec,
    tail_mass,
)
from kolmo_lab.besov import (
    BesovSpec,
    besov_norm,
    besov_tail,
    bp_admissibility,
    family_besov_profile,
    multi_indices,
    pointwise_domination_constant,
    taylor_coefficients,
)

BERGMAN = SpaceSpec.bergman()
HARDY = SpaceSpec.hardy()


class TestBesovSpec:
    def test_weight_integrability_guard(self):
        with pytest.raises(ParameterError):
            BesovSpec(weight_exponent=-1.0)

    def test_presets(self):
        assert BesovSpec.hardy(1).weight_exponent == 1.0
        assert BesovSpec.hardy(2).weight_exponent == 3.0
        assert BesovSpec.dirichlet(2.0, 1).weight_exponent == 0.0
        with pytest.raises(ParameterError):
            BesovSpec.dirichlet(2.0, 0)

    def test_multi_indices(self):
        assert multi_indices(1, 3) == [(3,)]
        assert sorted(multi_indices(2, 2)) == [(0, 2), (1, 1), (2, 0)]
        assert len(multi_indices(3, 2)) == 6


class TestTaylorConversion:
    def test_bergman_rescaling(self):
        t = taylor_coefficients(unit_vector(3), BERGMAN)
        np.testing.assert_allclose(t, [0, 0, 0, 2.0])

    def test_hardy_passthrough(self):
        t = taylor_coefficients(unit_vector(2), HARDY)
        np.testing.assert_allclose(t, [0, 0, 1.0])

    def test_sampler_rejected(self):
        f = FunctionRep(sampler=lambda z: np.asarray(z))
        with pytest.raises(ParameterError):
            taylor_coefficients(f, HARDY)


class TestBesovNorm:
    def test_normalized_unweighted_preset(self):
        spec = BesovSpec.bergman_radial(0.0, 2.0)
        assert besov_norm(spec, unit_vector(3), space=BERGMAN) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_constant_with_derivative_order(self):
        spec = BesovSpec.hardy(1)
        c = FunctionRep(coeffs=np.array([2.5 - 1.0j]))
        assert besov_norm(spec, c, space=HARDY) == pytest.approx(abs(2.5 - 1.0j))

    def test_boundary_equivalent_norm_closed_form(self):
        spec = BesovSpec.hardy(1)
        for m in range(1, 31):
            val = besov_norm(spec, unit_vector(m), space=HARDY)
            assert val**2 == pytest.approx(m / (m + 1.0), abs=1e-8)

    def test_norm_homogeneous(self, rng):
        spec = BesovSpec.hardy(1)
        f = FunctionRep(coeffs=rng.normal(size=6) + 1j * rng.normal(size=6))
        g = FunctionRep(coeffs=2.5j * f.coeffs)
        assert besov_norm(spec, g, space=HARDY) == pytest.approx(
            2.5 * besov_norm(spec, f, space=HARDY), rel=1e-12
        )

    def test_sampler_without_derivatives_rejected(self):
        spec = BesovSpec.hardy(1)
        f = FunctionRep(sampler=lambda z: np.asarray(z))
        with pytest.raises(ParameterError):
            besov_norm(spec, f)

    def test_sampler_with_derivatives(self):
        spec = BesovSpec.hardy(1)
        f = FunctionRep(sampler=lambda z: np.asarray(z) ** 2)
        derivs = (
            lambda z: np.asarray(z) ** 2,
            lambda z: 2.0 * np.asarray(z),
        )
        val = besov_norm(spec, f, derivatives=derivs)
        assert val**2 == pytest.approx(2.0 / 3.0, abs=1e-8)


class TestBesovTail:
    def test_constant_has_no_tail(self):
        spec = BesovSpec.hardy(1)
        c = FunctionRep(coeffs=np.array([4.0 + 0j]))
        assert besov_tail(spec, c, 0.3, space=HARDY) == 0.0

    def test_unweighted_collar_mass(self):
        spec = BesovSpec.bergman_radial(0.0, 2.0)
        got = besov_tail(spec, unit_vector(0), 0.5, space=BERGMAN)
        assert got == pytest.approx(0.75, abs=1e-8)

    def test_dirichlet_preset_value(self):
        spec = BesovSpec.dirichlet(2.0, 1)
        got = besov_tail(spec, unit_vector(1), 0.5, space=HARDY)
        assert got == pytest.approx(0.75, abs=1e-8)

    def test_full_collar_reaches_norm(self):
        spec = BesovSpec.hardy(1)
        f = unit_vector(5)
        t = besov_tail(spec, f, 1.0 - 1e-9, space=HARDY)
        n = besov_norm(spec, f, space=HARDY)
        # the point terms vanish for a monomial of positive degree
        assert t == pytest.approx(n**2, abs=1e-8)

    def test_tail_below_norm_power(self, rng):
        spec = BesovSpec.hardy(1)
        f = FunctionRep(coeffs=rng.normal(size=8) + 1j * rng.normal(size=8))
        n_p = besov_norm(spec, f, space=HARDY) ** 2
        for delta in (0.1, 0.4, 0.9):
            assert besov_tail(spec, f, delta, space=HARDY) <= n_p + 1e-12

    def test_tail_monotone_in_delta(self, rng):
        spec = BesovSpec.hardy(1)
        f = FunctionRep(coeffs=rng.normal(size=8) + 1j * rng.normal(size=8))
        deltas = [0.05, 0.1, 0.2, 0.4, 0.8]
        vals = [besov_tail(spec, f, d, space=HARDY) for d in deltas]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_delta_bounds(self):
        spec = BesovSpec.hardy(1)
        with pytest.raises(ParameterError):
            besov_tail(spec, unit_vector(1), 1.0, space=HARDY)


class TestBpAdmissibility:
    def test_unweighted(self):
        res = bp_admissibility(2.0, 0.0)
        assert res["sigma_integral"] == pytest.approx(1.0, abs=1e-12)
        assert res["dual_integral"] == pytest.approx(1.0, abs=1e-12)
        assert res["admissible_hint"]

    def test_half_power_admissible(self):
        res = bp_admissibility(2.0, 0.5)
        assert res["admissible_hint"]
        assert res["dual_integral"] == pytest.approx(2.0, abs=0.02)

    def test_steep_power_flagged(self):
        res = bp_admissibility(2.0, 1.5)
        assert not res["admissible_hint"]
        assert not res["dual_converged"]

    def test_p_guard(self):
        with pytest.raises(ParameterError):
            bp_admissibility(1.0, 0.5)


class TestFamilyProfile:
    def test_boundary_preset_profile_matches_radial_oracle(self):
        spec = BesovSpec.hardy(1)
        fam = [unit_vector(m) for m in range(21)]
        deltas = [2.0**-n for n in range(1, 8)]
        prof = family_besov_profile(spec, fam, deltas, space=HARDY)
        for d, got in zip(deltas, prof.values):
            oracle = 0.0
            for m in range(1, 21):
                val, _ = scipy.integrate.quad(
                    lambda r: m * m * (r ** (2 * m - 2) - r ** (2 * m)) * 2 * r,
                    1.0 - d,
                    1.0,
                )
                oracle = max(oracle, val)
            assert got == pytest.approx(oracle, abs=1e-7)

    def test_zero_family(self):
        spec = BesovSpec.hardy(1)
        zero = FunctionRep(coeffs=np.zeros(1, dtype=complex))
        prof = family_besov_profile(spec, [zero], [0.5, 0.25], space=HARDY)
        assert prof.values == (0.0, 0.0)

    def test_empty_family_rejected(self):
        with pytest.raises(ParameterError):
            family_besov_profile(BesovSpec.hardy(1), [], [0.5])

    def test_unweighted_tail_matches_frame_tail(self):
        spec = BesovSpec.bergman_radial(0.0, 2.0)
        frame = FrameSpec(BERGMAN)
        for j, delta in ((0, 0.5), (3, 0.25), (7, 0.1)):
            exh = Exhaustion("euclidean_radius", (1.0 - delta,))
            a = besov_tail(spec, unit_vector(j), delta, space=BERGMAN)
            b = tail_mass(frame, unit_vector(j), exh, 1)
            assert a == pytest.approx(b, abs=1e-8)


class TestDominationConstant:
    def test_measured_and_stable(self, rng):
        spec = BesovSpec.bergman_radial(0.0, 2.0)
        fam = [unit_vector(m) for m in range(11)]
        from kolmo_lab.besov import _default_disk_grid

        c1 = pointwise_domination_constant(spec, fam, 0.5, space=HARDY)
        c2 = pointwise_domination_constant(
            spec, fam, 0.5, space=HARDY, grid=_default_disk_grid(2)
        )
        assert c1 > 0
        assert abs(c1 - c2) <= 0.1 * c2
