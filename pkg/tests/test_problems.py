"""Tests for the problem generators and the sum-form machinery."""

import numpy as np
import pytest
import scipy.sparse as sp

from rsrr import (make_acoustic_1d, make_biot_damped, make_gun_form,
                  make_linear_pencil, make_loaded_string)
from rsrr.errors import (DimensionMismatch, InvalidParameter, PoleEvaluation,
                         SingularMatrix)
from rsrr.problems import (Monomial, RationalPole, SqrtBranch, SumFormNep,
                           _as_block)


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


class TestAcoustic1d:
    def test_stiffness_entries(self):
        prob = make_acoustic_1d(4, 1.0)
        stiffness = prob.coefficients[0].toarray()
        assert stiffness[0, 0] == 8.0
        assert stiffness[3, 3] == 4.0
        assert stiffness[0, 1] == -4.0

    def test_mass_corner(self):
        prob = make_acoustic_1d(4, 1.0)
        mass = prob.coefficients[2].toarray()
        assert mass[3, 3] == pytest.approx(-np.pi ** 2 / 2)
        assert mass[0, 0] == pytest.approx(-np.pi ** 2)

    def test_quadratic_assembly_exact(self):
        prob = make_acoustic_1d(6, 0.5 + 0.5j)
        z = 1.3 - 0.4j
        stiffness, damping, mass = (c.toarray() for c in prob.coefficients)
        expected = z ** 2 * mass + z * damping + stiffness
        # identical up to a few ulps (summation order / pow code path),
        # no approximation anywhere
        diff = np.abs(prob.assemble(z) - expected)
        bound = 4 * np.finfo(float).eps * np.maximum(np.abs(expected), 1.0)
        assert np.all(diff <= bound)

    def test_structured_solve_matches_dense(self):
        rng = np.random.default_rng(1)
        prob = make_acoustic_1d(180, 1.0)
        for z in (2.0 + 0.7j, -1.0 + 0.3j, 9.5 - 1.2j):
            b = random_complex(rng, 180, 3)
            x_fast = prob.solve(z, b)
            x_ref = prob.dense_solve(z, b)
            rel = np.linalg.norm(x_fast - x_ref) / np.linalg.norm(x_ref)
            assert rel <= 1e-9

    def test_resolvent_recovers_input(self):
        rng = np.random.default_rng(2)
        prob = make_acoustic_1d(50, 1.0)
        z = 3.0 + 1.0j
        x0 = random_complex(rng, 50, 2)
        recovered = prob.solve(z, np.asarray(prob.apply(z, x0)))
        assert np.linalg.norm(recovered - x0) <= 1e-9 * np.linalg.norm(x0)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameter):
            make_acoustic_1d(1, 1.0)
        with pytest.raises(InvalidParameter):
            make_acoustic_1d(10, 0.0)

    def test_quadratic_fd_derivative_near_exact(self):
        # central differences of a quadratic are exact up to roundoff, so no
        # O(h^2) ratio to measure here; check agreement at both steps instead
        prob = make_acoustic_1d(30, 1.0)
        z = 2.0 + 0.5j
        exact = prob.derivative_assemble(z)
        scale = np.linalg.norm(prob.assemble(z))
        for h in (1e-3, 1e-4):
            fd = (prob.assemble(z + h) - prob.assemble(z - h)) / (2 * h)
            assert np.linalg.norm(fd - exact) <= 1e-9 * scale


class TestLoadedString:
    def test_mass_corner(self):
        prob = make_loaded_string(3)
        t3 = -prob.coefficients[2].toarray()
        assert t3[2, 2] == pytest.approx(1.0 / 9.0)

    def test_assemble_at_zero_is_stiffness(self):
        prob = make_loaded_string(5)
        t1 = prob.coefficients[0].toarray()
        assert np.array_equal(prob.assemble(0.0), t1)

    def test_pole_at_one(self):
        prob = make_loaded_string(5)
        with pytest.raises(PoleEvaluation):
            prob.assemble(1.0 + 1e-14j)

    def test_structured_solve_matches_dense(self):
        rng = np.random.default_rng(3)
        prob = make_loaded_string(200)
        for z in (4.0 + 2.0j, 120.0 - 5.0j):
            b = random_complex(rng, 200, 2)
            x_fast = prob.solve(z, b)
            x_ref = prob.dense_solve(z, b)
            assert np.linalg.norm(x_fast - x_ref) / np.linalg.norm(x_ref) <= 1e-9

    def test_fd_ratio_near_pole(self):
        # rational term dominates the truncation error close to the pole
        prob = make_loaded_string(30)
        z = 2.0 + 0.5j
        exact = prob.derivative_assemble(z)
        errors = {}
        for h in (1e-3, 1e-4):
            fd = (prob.assemble(z + h) - prob.assemble(z - h)) / (2 * h)
            errors[h] = np.linalg.norm(fd - exact)
        ratio = errors[1e-3] / errors[1e-4]
        assert 80 <= ratio <= 120


class TestGunForm:
    def setup_method(self):
        rng = np.random.default_rng(4)
        self.n = 12
        self.mats = [rng.standard_normal((self.n, self.n)) for _ in range(4)]

    def test_sigma_zero_branch_identity(self):
        k, m, w1, w2 = self.mats
        prob = make_gun_form(k, m, w1, w2, 0.0, 2.5)
        z = 1.5 + 0.8j        # Re z > 0
        expected = (k - z ** 2 * m + 1j * z * w1
                    + 1j * np.sqrt(z ** 2 - 2.5 ** 2) * w2)
        assert np.allclose(prob.assemble(z), expected, atol=1e-12)

    def test_zero_w_reduces_to_generalized_pencil(self):
        # with W1 = W2 = 0 the spectrum is z^2 = eig(K, M)
        k, m = self.mats[0], self.mats[1] + 6 * np.eye(self.n)
        zero = np.zeros_like(k)
        prob = make_gun_form(k, m, zero, zero, 0.0, 1.0)
        mu = np.linalg.eigvals(np.linalg.solve(m, k))
        roots = np.sqrt(mu.astype(complex))
        for z in roots[:4]:
            t = prob.assemble(z)
            smin = np.linalg.svd(t, compute_uv=False)[-1]
            assert smin <= 1e-8 * np.linalg.norm(t)

    def test_dimension_mismatch(self):
        k, m, w1, _ = self.mats
        with pytest.raises(DimensionMismatch):
            make_gun_form(k, m, w1, np.zeros((3, 3)), 0.0, 1.0)

    def test_fd_ratio_near_branch_point(self):
        k, m, w1, w2 = self.mats
        prob = make_gun_form(k, m, w1, w2, 0.0, 2.0)
        z = 2.2 + 0.4j        # near the sigma2 branch point
        exact = prob.derivative_assemble(z)
        errors = {}
        for h in (1e-3, 1e-4):
            fd = (prob.assemble(z + h) - prob.assemble(z - h)) / (2 * h)
            errors[h] = np.linalg.norm(fd - exact)
        assert 80 <= errors[1e-3] / errors[1e-4] <= 120


class TestBiotDamped:
    def setup_method(self):
        rng = np.random.default_rng(5)
        n = 8
        self.mass = rng.standard_normal((n, n))
        self.visco = rng.standard_normal((n, n))
        self.stiff = rng.standard_normal((n, n))

    def test_shear_vanishes_at_zero(self):
        prob = make_biot_damped(self.mass, self.visco, self.stiff, 2.0,
                                [1.0, 3.0], [1.0, 2.0])
        assert np.allclose(prob.assemble(0.0), self.stiff, atol=1e-14)

    def test_single_term_half_value(self):
        g_inf = 3.0
        prob = make_biot_damped(self.mass, self.visco, self.stiff, g_inf,
                                [1.0], [1.0])
        expected = self.mass + 0.5 * g_inf * self.visco + self.stiff
        assert np.allclose(prob.assemble(1.0), expected, atol=1e-12)

    def test_leading_one_variant(self):
        g_inf = 2.0
        prob = make_biot_damped(self.mass, self.visco, self.stiff, g_inf,
                                [1.0], [1.0], leading_one=True)
        assert np.allclose(prob.assemble(0.0), self.stiff + g_inf * self.visco,
                           atol=1e-14)

    def test_shear_derivative_against_finite_difference(self):
        # scalar shear-function oracle with realistic multi-term coefficients
        a = [2.06, 67.1985, 506.9457]
        b = [193.39, 16345.0, 485918.4]
        g_inf = 3.441e5

        def shear(z):
            return g_inf * sum(ak * z / (z + bk) for ak, bk in zip(a, b))

        def shear_deriv(z):
            return g_inf * sum(ak * bk / (z + bk) ** 2 for ak, bk in zip(a, b))

        z, h = 10.0 + 1.0j, 1e-5
        fd = (shear(z + h) - shear(z - h)) / (2 * h)
        assert abs(fd - shear_deriv(z)) <= 1e-6 * abs(shear_deriv(z))

        # the problem's assembled derivative uses the same term derivative
        prob = make_biot_damped(self.mass, self.visco, self.stiff, g_inf, a, b)
        n = self.mass.shape[0]
        got = prob.derivative_assemble(z)
        expected = 2 * z * self.mass + shear_deriv(z) * self.visco
        assert np.allclose(got, expected, rtol=1e-12)

    def test_pole_rejected(self):
        prob = make_biot_damped(self.mass, self.visco, self.stiff, 1.0,
                                [1.0], [2.0])
        with pytest.raises(PoleEvaluation):
            prob.assemble(-2.0)

    def test_invalid(self):
        with pytest.raises(InvalidParameter):
            make_biot_damped(self.mass, self.visco, self.stiff, 1.0, [1.0], [-1.0])
        with pytest.raises(DimensionMismatch):
            make_biot_damped(self.mass, self.visco, np.zeros((3, 3)), 1.0,
                             [1.0], [1.0])

    def test_fd_ratio(self):
        prob = make_biot_damped(self.mass, self.visco, self.stiff, 1.0,
                                [1.5], [1.0])
        z = -0.4 + 0.5j       # near the pole at -1
        exact = prob.derivative_assemble(z)
        errors = {}
        for h in (1e-3, 1e-4):
            fd = (prob.assemble(z + h) - prob.assemble(z - h)) / (2 * h)
            errors[h] = np.linalg.norm(fd - exact)
        assert 80 <= errors[1e-3] / errors[1e-4] <= 120


class TestSumFormGeneric:
    def test_linear_pencil_eigenvalues(self):
        rng = np.random.default_rng(6)
        a = random_complex(rng, 9, 9)
        prob = make_linear_pencil(a)
        lam = np.linalg.eigvals(a)[0]
        t = prob.assemble(lam)
        assert np.linalg.svd(t, compute_uv=False)[-1] <= 1e-10 * np.linalg.norm(t)

    def test_sparse_solve_path(self):
        rng = np.random.default_rng(7)
        n = 40
        dense = rng.standard_normal((n, n)) + 5 * np.eye(n)
        prob = SumFormNep([(sp.csr_matrix(dense), Monomial(0)),
                           (sp.identity(n, format="csr") * -1.0, Monomial(1))])
        b = random_complex(rng, n, 3)
        x = prob.solve(0.5 + 0.5j, b)
        ref = np.linalg.solve(dense - (0.5 + 0.5j) * np.eye(n), b)
        assert np.linalg.norm(x - ref) <= 1e-9 * np.linalg.norm(ref)

    def test_project_matches_dense_projection(self):
        rng = np.random.default_rng(8)
        a = random_complex(rng, 10, 10)
        prob = make_linear_pencil(a)
        s, _ = np.linalg.qr(random_complex(rng, 10, 4))
        z = 0.3 - 0.2j
        projected = prob.project(s)
        total = sum(mat * f.value(z) for mat, f in projected)
        expected = s.conj().T @ prob.assemble(z) @ s
        assert np.allclose(total, expected, atol=1e-12)

    def test_apply_matches_assemble(self):
        rng = np.random.default_rng(9)
        prob = make_loaded_string(30)
        v = random_complex(rng, 30, 2)
        z = 5.0 + 1.0j
        assert np.allclose(prob.apply(z, v), prob.assemble(z) @ v, atol=1e-10)

    def test_vector_rhs_shape(self):
        rng = np.random.default_rng(10)
        prob = make_acoustic_1d(20, 1.0)
        b = random_complex(rng, 20, 1)[:, 0]
        x = prob.solve(1.0 + 1.0j, b)
        assert x.shape == (20,)

    def test_singular_node_raises(self):
        a = np.diag([1.0, 2.0])
        prob = make_linear_pencil(a)
        with pytest.raises(SingularMatrix):
            prob.solve(1.0, np.eye(2))


class TestScalarTerms:
    def test_monomial_derivatives(self):
        z = np.array([1.0 + 1.0j, 2.0])
        assert np.allclose(Monomial(0).deriv(z), 0)
        assert np.allclose(Monomial(1).deriv(z), 1)
        assert np.allclose(Monomial(3).deriv(z), 3 * z ** 2)

    def test_rational(self):
        f = RationalPole(2.0, 3.0)
        z = 1.0 + 1.0j
        assert f.value(z) == pytest.approx(2.0 * z / (z + 3.0))
        assert f.deriv(z) == pytest.approx(6.0 / (z + 3.0) ** 2)

    def test_sqrt_branch_principal(self):
        f = SqrtBranch(0.0)
        assert f.value(2.0 + 1.0j) == pytest.approx(1j * (2.0 + 1.0j))
        g = SqrtBranch(2.0)
        z = 3.0 + 0.5j
        assert g.value(z) == pytest.approx(1j * np.sqrt(z * z - 4.0))

    def test_sqrt_branch_point_derivative(self):
        g = SqrtBranch(2.0)
        with pytest.raises(PoleEvaluation):
            g.deriv(2.0)


def test_as_block_helper():
    v = np.arange(3.0)
    block, was_vector = _as_block(v)
    assert block.shape == (3, 1) and was_vector
    m = np.ones((3, 2))
    block, was_vector = _as_block(m)
    assert block.shape == (3, 2) and not was_vector
