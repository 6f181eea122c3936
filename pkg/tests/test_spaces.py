import math

import numpy as np
import pytest

from conftest import random_poly, unit_vector
from kolmo_lab import (
    DomainError,
    FunctionRep,
    ParameterError,
    SpaceSpec,
    basis_eval,
    bergman_distance,
    build_circle_grid,
    build_disk_grid,
    hyperbolic_ball_measure,
    kernel_eval,
    kernel_norm,
    mobius,
    normalized_kernel_eval,
    space_norm,
)
from kolmo_lab.spaces import basis_matrix, default_grid, gram_matrix


BERGMAN = SpaceSpec.bergman()
HARDY = SpaceSpec.hardy()
FOCK = SpaceSpec.fock()


class TestSpaceSpec:
    def test_bergman_weight_bound(self):
        with pytest.raises(ParameterError):
            SpaceSpec.bergman(t=-1.0)

    def test_exponent_bound(self):
        with pytest.raises(ParameterError):
            SpaceSpec("bergman", p=0.5)

    def test_band_positive(self):
        with pytest.raises(ParameterError):
            SpaceSpec.paley_wiener(0.0)


class TestKernels:
    def test_bergman_at_origin(self):
        for w in (0.0, 0.3, 0.5 - 0.2j):
            assert kernel_eval(BERGMAN, 0.0, w) == pytest.approx(1.0)

    def test_bergman_diagonal_value(self):
        assert kernel_eval(BERGMAN, 0.5, 0.5) == pytest.approx(16.0 / 9.0)

    def test_hardy_value(self):
        assert kernel_eval(HARDY, 0.5, 0.5) == pytest.approx(4.0 / 3.0)

    def test_hermitian_symmetry(self, rng):
        for space, scale in ((BERGMAN, 0.95), (HARDY, 0.95), (FOCK, 3.0)):
            z = scale * (rng.uniform(-0.7, 0.7, 1000) + 1j * rng.uniform(-0.7, 0.7, 1000))
            w = scale * (rng.uniform(-0.7, 0.7, 1000) + 1j * rng.uniform(-0.7, 0.7, 1000))
            k = kernel_eval(space, z, w)
            defect = np.abs(k - np.conj(kernel_eval(space, w, z)))
            assert np.max(defect / np.maximum(np.abs(k), 1.0)) <= 1e-13

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            kernel_eval(BERGMAN, 1.2, 0.9)

    def test_reproducing_identity(self, rng):
        grid = build_disk_grid(256, 512, 1.0, measure="v")
        for _ in range(10):
            f = random_poly(rng, 10)
            w = rng.uniform(0.0, 0.9) * np.exp(2j * np.pi * rng.uniform())
            field = f.evaluate(BERGMAN, grid.nodes) * np.conj(
                kernel_eval(BERGMAN, grid.nodes, w)
            )
            lhs = np.sum(grid.weights * field)
            rhs = f.evaluate(BERGMAN, np.array([w]))[0]
            assert abs(lhs - rhs) <= 1e-8

    def test_smoke_dimension_two(self):
        space = SpaceSpec("bergman", dim=2)
        z = np.array([0.3, 0.2j])
        w = np.array([0.1, -0.2])
        value = kernel_eval(space, z, w)
        expect = 1.0 / (1.0 - (0.3 * 0.1 + 0.2j * (-0.2))) ** 3
        assert value == pytest.approx(expect)


class TestNormalizedKernels:
    def test_center(self):
        for p in (1.5, 2.0, 4.0):
            assert normalized_kernel_eval(BERGMAN, 0.0, 0.0, p) == pytest.approx(1.0)

    def test_p2_diagonal(self):
        val = normalized_kernel_eval(BERGMAN, 0.6, 0.6, 2.0)
        assert val == pytest.approx(1.0 / 0.64)

    def test_p4_prefactor(self):
        val = normalized_kernel_eval(BERGMAN, 0.0, 0.6, 4.0)
        assert val == pytest.approx(0.64**1.5)

    def test_unit_norm_in_hilbert_case(self):
        grid = build_disk_grid(256, 512, 1.0, measure="v")
        for w in (0.0, 0.4, 0.7j):
            vals = normalized_kernel_eval(BERGMAN, grid.nodes, w, 2.0)
            mass = float(np.sum(grid.weights * np.abs(vals) ** 2))
            assert abs(mass - 1.0) <= 1e-9

    def test_exponent_guard(self):
        with pytest.raises(ParameterError):
            normalized_kernel_eval(BERGMAN, 0.0, 0.5, 1.0)


class TestMobiusAndMetric:
    def test_interchange(self):
        assert mobius(0.5, 0.5) == pytest.approx(0.0)
        assert mobius(0.5, 0.0) == pytest.approx(0.5)

    def test_direct_value(self):
        assert mobius(0.5, -0.5) == pytest.approx(0.8)

    def test_involution(self, rng):
        pts = 0.9 * (rng.uniform(-0.7, 0.7, 500) + 1j * rng.uniform(-0.7, 0.7, 500))
        a = 0.6 - 0.2j
        assert np.max(np.abs(mobius(a, mobius(a, pts)) - pts)) <= 1e-12

    def test_result_stays_inside(self, rng):
        pts = 0.95 * (rng.uniform(-0.7, 0.7, 500) + 1j * rng.uniform(-0.7, 0.7, 500))
        assert np.all(np.abs(mobius(0.7j, pts)) < 1.0)

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            mobius(1.0, 0.5)
        with pytest.raises(DomainError):
            mobius(0.5, 1.0 + 0j)

    def test_distance_values(self):
        assert bergman_distance(0.0, 0.5) == pytest.approx(0.5 * math.log(3.0))
        assert bergman_distance(0.3, 0.3) == 0.0
        # independent two-step evaluation: q = |0.3-0.7|/(1-0.21), then the
        # logarithmic profile of q
        q = 0.4 / (1.0 - 0.21)
        expect = 0.5 * math.log((1 + q) / (1 - q))
        assert bergman_distance(0.3, 0.7) == pytest.approx(expect, abs=1e-14)
        assert expect == pytest.approx(0.5577809, abs=1e-7)

    def test_metric_axioms(self, rng):
        pts = 0.9 * (rng.uniform(-0.7, 0.7, 3000) + 1j * rng.uniform(-0.7, 0.7, 3000))
        z, w, u = pts[:1000], pts[1000:2000], pts[2000:]
        dzw = bergman_distance(z, w)
        assert np.max(np.abs(dzw - bergman_distance(w, z))) <= 1e-12
        assert np.max(dzw - bergman_distance(z, u) - bergman_distance(u, w)) <= 1e-12

    def test_mobius_dimension_two_smoke(self):
        a = np.array([0.3, 0.1j])
        w = np.array([-0.2, 0.4])
        out = mobius(a, w, dim=2)
        assert np.linalg.norm(out) < 1.0
        back = mobius(a, out, dim=2)
        assert np.max(np.abs(back - w)) <= 1e-12
        assert np.max(np.abs(mobius(a, a, dim=2))) <= 1e-15


class TestKernelNormComparability:
    def test_ratio_bounded_on_metric_balls(self, rng):
        worst = 1.0
        for _ in range(1000):
            z = rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform())
            u = rng.uniform(0, math.tanh(1.0)) * np.exp(2j * np.pi * rng.uniform())
            w = mobius(z, u)
            assert bergman_distance(z, w) < 1.0 + 1e-12
            ratio = kernel_norm(BERGMAN, z) / kernel_norm(BERGMAN, w)
            worst = max(worst, ratio, 1.0 / ratio)
        assert worst <= math.e**2


class TestHyperbolicBallMeasure:
    def test_closed_form_at_origin(self):
        r = 0.5 * math.log(3.0)
        assert hyperbolic_ball_measure(0.0, r) == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_center_independence(self):
        r = 0.5 * math.log(3.0)
        base = 1.0 / 3.0
        assert hyperbolic_ball_measure(0.4, r) == pytest.approx(base, abs=1e-4)
        assert hyperbolic_ball_measure(0.35 + 0.45j, r) == pytest.approx(base, abs=1e-4)

    def test_shrinking_radius(self):
        vals = [hyperbolic_ball_measure(0.2, r) for r in (0.5, 0.1, 0.02)]
        assert vals[0] > vals[1] > vals[2]
        assert vals[2] < 1e-3


class TestBases:
    def test_bergman_examples(self):
        assert basis_eval(BERGMAN, 0, 0.7) == pytest.approx(1.0)
        assert basis_eval(BERGMAN, 3, 0.5) == pytest.approx(0.25)

    def test_hardy_boundary(self):
        theta = 0.83
        val = basis_eval(HARDY, 2, np.exp(1j * theta))
        assert val == pytest.approx(np.exp(2j * theta))

    def test_orthonormality(self):
        for space in (BERGMAN, HARDY, FOCK):
            g = gram_matrix(space, 40)
            assert np.max(np.abs(g - np.eye(41))) <= 1e-9

    def test_basis_matrix_matches_pointwise(self):
        z = np.array([0.1, 0.3 - 0.2j])
        b = basis_matrix(FOCK, 5, z)
        for j in range(6):
            np.testing.assert_allclose(b[:, j], basis_eval(FOCK, j, z))


class TestFunctionRep:
    def test_requires_some_representation(self):
        with pytest.raises(ParameterError):
            FunctionRep()

    def test_consistency_defect(self):
        f = FunctionRep(
            coeffs=np.array([0.0, 1.0]),  # e_1(z) = sqrt(2) z
            sampler=lambda z: np.sqrt(2.0) * np.asarray(z),
        )
        grid = build_disk_grid(32, 64, 1.0, measure="v")
        assert f.consistency_defect(BERGMAN, grid) <= 1e-9

    def test_inconsistent_pair_detected(self):
        f = FunctionRep(
            coeffs=np.array([0.0, np.sqrt(2.0)]),
            sampler=lambda z: np.asarray(z) ** 2,
        )
        grid = build_disk_grid(32, 64, 1.0, measure="v")
        assert f.consistency_defect(BERGMAN, grid) > 1e-3


class TestNorms:
    def test_bergman_basis_norms(self):
        for j in (0, 7, 40):
            assert space_norm(BERGMAN, unit_vector(j)) == pytest.approx(1.0, abs=1e-10)

    def test_hardy_monomials(self):
        for m in (0, 3, 11):
            assert space_norm(HARDY, unit_vector(m)) == pytest.approx(1.0, abs=1e-12)

    def test_zero_function(self):
        zero = FunctionRep(coeffs=np.zeros(1, dtype=complex))
        assert space_norm(BERGMAN, zero) == 0.0

    def test_coefficient_euclidean_identity(self, rng):
        for space in (BERGMAN, HARDY, FOCK):
            f = random_poly(rng, 12)
            assert space_norm(space, f) == pytest.approx(
                float(np.linalg.norm(f.coeffs)), abs=1e-9
            )

    def test_fock_gaussian_norm_via_grid(self):
        f = unit_vector(5)
        assert space_norm(FOCK, f, default_grid(FOCK)) == pytest.approx(1.0, abs=1e-10)

    def test_paley_wiener_coefficient_norm(self):
        pw = SpaceSpec.paley_wiener(0.5)
        f = FunctionRep(coeffs=np.array([3.0, 4.0]))
        assert space_norm(pw, f) == pytest.approx(5.0)

    def test_weighted_bergman_norm(self):
        # t = 1: ||z^m||^p with p=2 is m-th moment of (1-r^2) weight
        space = SpaceSpec.bergman(t=1.0)
        f = FunctionRep(coeffs=np.array([0.0, 0.0, 1.0]))  # z^2 scaled by sqrt(3)
        # int 3 r^4 (1-r^2) dv = 3 (1/3 - 1/4) = 1/4
        assert space_norm(space, f) == pytest.approx(0.5, abs=1e-10)

    def test_hardy_boundary_grid_override(self):
        val = space_norm(HARDY, unit_vector(2), build_circle_grid(64))
        assert val == pytest.approx(1.0)
