"""Kasteleyn matrix assembly and the characteristic polynomial det K."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from harnack.kasteleyn import (
    BivariatePolynomial,
    assemble_K,
    boundary_points,
    characteristic_polynomial,
    verify_boundary_vs_zigzag,
)
from harnack.lattice import EdgeWeights, GaugeVector, apply_gauge, apply_magnetic_field
from harnack.numerics import det_complex

seeds = st.integers(0, 10**9)

UNIFORM_COEFFS = {
    1: [[1.0, 1.0], [1.0, 0.0]],
    2: [[1.0, -2.0, 1.0], [-2.0, -2.0, 0.0], [1.0, 0.0, 0.0]],
    3: [
        [1.0, 3.0, 3.0, 1.0],
        [3.0, -21.0, 3.0, 0.0],
        [3.0, 3.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ],
}


class TestBivariatePolynomial:
    def test_support_outside_triangle_rejected(self):
        coeffs = np.zeros((3, 3))
        coeffs[0, 0] = 1.0
        coeffs[2, 2] = 1.0  # i + j = 4 > d = 2
        with pytest.raises(ValueError):
            BivariatePolynomial(2, coeffs)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            BivariatePolynomial(2, np.ones((2, 2)))

    def test_evaluation_and_sections(self):
        poly = BivariatePolynomial(2, [[1.0, 2.0, 3.0], [4.0, 5.0, 0.0], [6.0, 0.0, 0.0]])
        z, w = 1.3, -0.7
        manual = 1 + 2 * w + 3 * w**2 + 4 * z + 5 * z * w + 6 * z**2
        assert poly(z, w) == pytest.approx(manual, rel=1e-14)
        # section helpers vectorize over the frozen variable
        assert_allclose(
            poly.w_coefficients(z).ravel(), [1 + 4 * z + 6 * z**2, 2 + 5 * z, 3.0]
        )
        assert_allclose(
            poly.z_coefficients(w).ravel(), [1 + 2 * w + 3 * w**2, 4 + 5 * w, 6.0]
        )

    def test_scaled(self):
        poly = BivariatePolynomial(1, [[2.0, 4.0], [6.0, 0.0]])
        assert_allclose(poly.scaled(0.5).coeffs, [[1.0, 2.0], [3.0, 0.0]])


class TestAssembly:
    def test_single_cell_matrix(self):
        w = EdgeWeights(1, [[2.0]], [[3.0]], [[5.0]])
        z, v = 1.7 + 0.3j, -0.4 + 1.1j
        k = assemble_K(w, z, v)
        assert k.shape == (1, 1)
        assert k[0, 0] == pytest.approx(5.0 + 2.0 * z + 3.0 * v, rel=1e-14)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_polynomial_reproduces_determinant(self, d):
        # dual route: interpolated coefficients against direct LU determinants
        w = EdgeWeights.random(d, np.random.default_rng(d))
        poly = characteristic_polynomial(w)
        rng = np.random.default_rng(50 + d)
        for _ in range(5):
            z = complex(rng.standard_normal(), rng.standard_normal())
            v = complex(rng.standard_normal(), rng.standard_normal())
            det = det_complex(assemble_K(w, z, v))
            assert abs(poly(z, v) - det) <= 1e-9 * max(1.0, abs(det))


class TestCharacteristicPolynomial:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_uniform_coefficients(self, d):
        poly = characteristic_polynomial(EdgeWeights.uniform(d))
        assert_allclose(poly.coeffs, UNIFORM_COEFFS[d], atol=1e-9)

    def test_triangular_support(self):
        poly = characteristic_polynomial(EdgeWeights.random(4, np.random.default_rng(2)))
        for i in range(5):
            for j in range(5):
                if i + j > 4:
                    assert poly.coeffs[i, j] == 0.0

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_gauge_invariance_up_to_scale(self, seed):
        # det K picks up the product of all gauge factors; the zero set and
        # the normalized coefficients do not move
        rng = np.random.default_rng(seed)
        d = int(rng.integers(1, 4))
        w = EdgeWeights.random(d, rng)
        gauge = GaugeVector(
            d, np.exp(rng.uniform(-1, 1, (d, d))), np.exp(rng.uniform(-1, 1, (d, d)))
        )
        base = characteristic_polynomial(w).coeffs
        moved = characteristic_polynomial(apply_gauge(w, gauge)).coeffs
        assert_allclose(
            moved / moved[0, 0],
            base / base[0, 0],
            rtol=1e-9,
            atol=1e-9 * np.max(np.abs(base / base[0, 0])),
        )

    def test_magnetic_field_scales_coefficients(self):
        # the field acts on the curve as (z, w) -> (z e^{bx}, w e^{by})
        w = EdgeWeights.random(3, np.random.default_rng(6))
        bx, by = 0.35, -0.15
        base = characteristic_polynomial(w).coeffs
        moved = characteristic_polynomial(apply_magnetic_field(w, bx, by)).coeffs
        i = np.arange(4)[:, None]
        j = np.arange(4)[None, :]
        expected = base * np.exp(i * bx + j * by)
        assert_allclose(moved, expected, rtol=1e-9, atol=1e-9 * np.max(np.abs(expected)))


class TestBoundaryPoints:
    def test_uniform_triple_root(self):
        bp = boundary_points(characteristic_polynomial(EdgeWeights.uniform(3)))
        for family in (bp.on_w0, bp.on_z0, bp.at_inf):
            assert_allclose(np.sort(family), [-1.0, -1.0, -1.0], atol=1e-9)

    def test_single_cell(self):
        w = EdgeWeights(1, [[2.0]], [[3.0]], [[5.0]])
        bp = boundary_points(characteristic_polynomial(w))
        # 5 + 2z + 3w: intercepts -c/a, -c/b and the infinite direction -b/a
        assert_allclose(bp.on_w0, [-2.5])
        assert_allclose(bp.on_z0, [-5.0 / 3.0])
        assert_allclose(bp.at_inf, [-1.5])

    def test_all_real_and_negative(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            w = EdgeWeights.random(3, rng)
            bp = boundary_points(characteristic_polynomial(w))
            for family in (bp.on_w0, bp.on_z0, bp.at_inf):
                assert family.dtype.kind == "f"
                assert np.all(family < 0.0)

    def test_complex_axis_roots_rejected(self):
        # P(z, 0) = 1 + z + z^2 has no real roots; not a spectral curve
        coeffs = np.zeros((3, 3))
        coeffs[0, 0] = 1.0
        coeffs[1, 0] = 1.0
        coeffs[2, 0] = 1.0
        coeffs[0, 1] = 3.0
        coeffs[0, 2] = 1.0
        coeffs[1, 1] = 3.0
        with pytest.raises(ValueError, match="non-Harnack boundary"):
            boundary_points(BivariatePolynomial(2, coeffs))

    def test_degenerate_axis_polynomial_rejected(self):
        # no z terms at all: P(z, 0) is constant and has no roots to compare
        coeffs = np.zeros((3, 3))
        coeffs[0, 0] = 1.0
        coeffs[0, 1] = 3.0
        coeffs[0, 2] = 1.0
        with pytest.raises(ValueError, match="degenerate axis polynomial"):
            boundary_points(BivariatePolynomial(2, coeffs))

    def test_low_degree_axis_polynomial_rejected(self):
        # P(z, 0) = 1 + z has one root where the degree demands two
        coeffs = np.array([[1.0, 3.0, 1.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
        with pytest.raises(ValueError, match="degenerate axis polynomial"):
            boundary_points(BivariatePolynomial(2, coeffs))


class TestZigZagComparison:
    def test_orderings_are_permutations(self):
        w = EdgeWeights.random(3, np.random.default_rng(9))
        comparison = verify_boundary_vs_zigzag(w)
        assert comparison.passed(1e-8)
        for orientation, perm in comparison.ordering.items():
            assert sorted(perm) == [0, 1, 2], orientation

    def test_per_orientation_keys(self):
        comparison = verify_boundary_vs_zigzag(EdgeWeights.uniform(2))
        assert sorted(comparison.per_orientation) == ["at_inf", "on_w0", "on_z0"]
        assert comparison.max_rel_error < 1e-10
