import numpy as np
import pytest

from pwcalc import homfun
from pwcalc.calculus import pw_apply
from pwcalc.errors import BadParameter, FunctionNotContinuous, NotInvertible
from pwcalc.homfun import eval_f
from pwcalc.routes import (
    epsilon_regularized,
    is_nonincreasing,
    limit_study,
    parallel_sum_direct,
    parallel_sum_inverse_form,
    perspective_left,
    perspective_right,
)

from conftest import invertible_pair

OPEN_SAFE = [
    homfun.weighted_geometric(0.5),
    homfun.weighted_geometric(0.8),
    homfun.renyi(2.0),
    homfun.renyi(1.5),
    homfun.parallel_sum(),
    homfun.arithmetic(),
    homfun.entropy_kernel(),
    homfun.power_perspective(2),
]


class TestPerspectives:
    def test_arithmetic_identity(self):
        np.testing.assert_allclose(perspective_left(np.eye(2), np.eye(2), homfun.arithmetic()), np.eye(2))

    def test_geometric_scalars(self):
        g = homfun.weighted_geometric(0.5)
        np.testing.assert_allclose(perspective_left(4 * np.eye(2), np.eye(2), g), 2 * np.eye(2), atol=1e-14)
        np.testing.assert_allclose(perspective_right(np.eye(2), 9 * np.eye(2), g), 3 * np.eye(2), atol=1e-14)

    def test_parallel_sum_closed_form(self, rng):
        A, B = invertible_pair(rng, 3)
        want = A @ np.linalg.solve(A + B, B)
        np.testing.assert_allclose(perspective_left(A, B, homfun.parallel_sum()), want, atol=1e-10)

    def test_entropy_equal_density(self, rng):
        A, _ = invertible_pair(rng, 3)
        A /= np.trace(A).real
        np.testing.assert_allclose(perspective_right(A, A, homfun.entropy_kernel()), 0, atol=1e-14)

    def test_renyi2_route(self, rng):
        A, B = invertible_pair(rng, 3)
        fn = homfun.renyi(2.0)
        np.testing.assert_allclose(perspective_right(A, B, fn), pw_apply(A, B, fn), atol=1e-8)

    def test_gates(self):
        with pytest.raises(NotInvertible):
            perspective_left(np.diag([1.0, 0.0]), np.eye(2), homfun.arithmetic())
        with pytest.raises(NotInvertible):
            perspective_right(np.eye(2), np.diag([1.0, 0.0]), homfun.arithmetic())

    @pytest.mark.parametrize("seed", range(10))
    def test_route_agreement(self, seed):
        rng = np.random.default_rng(seed)
        A, B = invertible_pair(rng, 4)
        for fn in OPEN_SAFE:
            pw = pw_apply(A, B, fn)
            scale = 1 + np.linalg.norm(pw, 2)
            np.testing.assert_allclose(perspective_left(A, B, fn), pw, atol=1e-8 * scale)
            np.testing.assert_allclose(perspective_right(A, B, fn), pw, atol=1e-8 * scale)


class TestRegularized:
    def test_zero_pair(self):
        Z = np.zeros((2, 2))
        for fn in [homfun.parallel_sum(), homfun.weighted_geometric(0.3), homfun.arithmetic()]:
            want = 2 * fn.section(0.5) * np.eye(2)
            np.testing.assert_allclose(epsilon_regularized(Z, Z, fn, 1.0, 1.0), want, atol=1e-14)

    def test_parallel_sum_projectors(self):
        eps = 1e-4
        out = epsilon_regularized(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), homfun.parallel_sum(), eps, eps)
        # entrywise (a + e)(b + e) / (a + b + 2e) on the diagonal
        d = (1 + eps) * eps / (1 + 2 * eps)
        np.testing.assert_allclose(out, np.diag([d, d]), atol=1e-15)
        assert np.max(np.abs(out)) < 1e-3

    def test_bad_eps(self):
        with pytest.raises(BadParameter):
            epsilon_regularized(np.eye(2), np.eye(2), homfun.arithmetic(), 0.0, 0.0)
        with pytest.raises(BadParameter):
            epsilon_regularized(np.eye(2), np.eye(2), homfun.arithmetic(), -1.0, 2.0)

    def test_geometric_singular_3x3(self, rng):
        A = np.diag([1.0, 0.5, 0.0]).astype(complex)
        U = np.linalg.qr(rng.standard_normal((3, 3)))[0]
        B = U @ np.diag([0.0, 1.0, 2.0]) @ U.T
        curve = limit_study(A, B, homfun.weighted_geometric(0.5), [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
        errs = [e for _, e in curve]
        assert all(b < a for a, b in zip(errs, errs[1:]))


class TestLimitStudy:
    def test_identity_pair(self):
        for fn in [homfun.parallel_sum(), homfun.weighted_geometric(0.5), homfun.arithmetic()]:
            curve = limit_study(np.eye(2), np.eye(2), fn)
            for eps, err in curve:
                assert err <= 2 * eps + 1e-14

    def test_parallel_sum_projectors(self):
        curve = dict(limit_study(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), homfun.parallel_sum()))
        assert curve[1e-6] < curve[1e-2]

    def test_rank_one_projectors(self):
        p, q = np.array([1.0, 0.0]), np.array([np.cos(0.7), np.sin(0.7)])
        curve = limit_study(np.outer(p, p), np.outer(q, q), homfun.weighted_geometric(0.5))
        errs = [e for _, e in curve]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_skewed_ratio(self, rng):
        p, q = np.array([1.0, 0.0]), np.array([np.cos(0.3), np.sin(0.3)])
        for fn in [homfun.parallel_sum(), homfun.weighted_geometric(0.5)]:
            curve = limit_study(np.outer(p, p), np.outer(q, q), fn, ratio=2.0)
            assert is_nonincreasing(curve)

    def test_requires_continuity(self):
        with pytest.raises(FunctionNotContinuous):
            limit_study(np.eye(2), np.eye(2), homfun.entropy_kernel())

    def test_is_nonincreasing(self):
        assert is_nonincreasing([(1, 3.0), (2, 2.0), (3, 2.0)])
        assert not is_nonincreasing([(1, 3.0), (2, 3.5)])
        assert is_nonincreasing([(1, 3.0), (2, 3.5)], atol=1.0)


class TestParallelSum:
    def test_examples(self):
        np.testing.assert_allclose(parallel_sum_direct(np.eye(2), np.eye(2)), np.eye(2) / 2)
        np.testing.assert_allclose(parallel_sum_direct(2 * np.eye(2), 2 * np.eye(2)), np.eye(2))

    @pytest.mark.parametrize("seed", range(5))
    def test_forms_agree(self, seed):
        rng = np.random.default_rng(seed)
        A, B = invertible_pair(rng, 4)
        direct = parallel_sum_direct(A, B)
        np.testing.assert_allclose(direct, parallel_sum_inverse_form(A, B), atol=1e-10)
        np.testing.assert_allclose(direct, pw_apply(A, B, homfun.parallel_sum()), atol=1e-9)

    def test_needs_invertible(self):
        with pytest.raises(NotInvertible):
            parallel_sum_direct(np.diag([1.0, 0.0]), np.eye(2))
        with pytest.raises(NotInvertible):
            parallel_sum_inverse_form(np.eye(2), np.diag([1.0, 0.0]))

    def test_variational(self, rng):
        A, B = invertible_pair(rng, 4)
        P = parallel_sum_direct(A, B)
        x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        lhs = np.vdot(x, P @ x).real
        for _ in range(200):
            y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            z = x - y
            assert lhs <= np.vdot(y, A @ y).real + np.vdot(z, B @ z).real + 1e-9
        z = np.linalg.solve(A + B, A @ x)
        y = x - z
        assert np.vdot(y, A @ y).real + np.vdot(z, B @ z).real == pytest.approx(lhs, abs=1e-9)

    def test_pointwise_boundary(self):
        assert eval_f(homfun.parallel_sum(), 1.0, 0.0) == 0.0
