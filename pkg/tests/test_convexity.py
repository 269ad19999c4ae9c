import numpy as np
import pytest

from pwcalc import homfun
from pwcalc.convexity import (
    CONCAVE,
    embed_transformer_witness,
    falsify_transformer,
    joint_convexity_check,
    revalidate,
    section_operator_convexity_scan,
    transformer_check,
    transformer_suite,
)
from pwcalc.errors import BadParameter, BadWeights, DimensionMismatch, PreconditionViolation
from pwcalc.fixtures import OPERATOR_CONVEX_SECTIONS
from pwcalc.sampling import random_contraction, random_isometry, random_psd


class TestTransformerCheck:
    def test_arithmetic_exact(self, rng):
        A, B = random_psd(rng, 3), random_psd(rng, 3)
        V = random_isometry(rng, 3, 2)
        res = transformer_check(homfun.arithmetic(), A, B, V)
        assert res.passed and abs(res.margin) <= 1e-12

    @pytest.mark.parametrize("seed", range(20))
    def test_square_perspective(self, seed):
        rng = np.random.default_rng(seed)
        A, B = random_psd(rng, 3, 0.1), random_psd(rng, 3, 0.1)
        V = random_isometry(rng, 3, 2)
        res = transformer_check(homfun.power_perspective(2), A, B, V)
        assert res.passed and res.margin >= -1e-8

    @pytest.mark.parametrize("seed", range(20))
    def test_geometric_concave(self, seed):
        rng = np.random.default_rng(seed)
        A, B = random_psd(rng, 3), random_psd(rng, 3)
        V = random_contraction(rng, 3, 2)
        res = transformer_check(homfun.weighted_geometric(0.5), A, B, V, direction=CONCAVE)
        assert res.passed

    def test_preconditions(self, rng):
        A, B = random_psd(rng, 3, 0.1), random_psd(rng, 3, 0.1)
        with pytest.raises(PreconditionViolation):
            transformer_check(homfun.power_perspective(2), A, B, 0.5 * random_isometry(rng, 3, 2))
        with pytest.raises(PreconditionViolation):
            transformer_check(homfun.entropy_kernel(), np.diag([1.0, 0.0, 1.0]), B, random_isometry(rng, 3, 2))
        with pytest.raises(DimensionMismatch):
            transformer_check(homfun.arithmetic(), A, B, np.ones((2, 2)))
        with pytest.raises(BadParameter):
            transformer_check(homfun.arithmetic(), A, B, np.eye(3), direction="sideways")

    def test_unitary_never_violates(self, rng):
        A, B = random_psd(rng, 3, 0.1), random_psd(rng, 3, 0.1)
        V = random_isometry(rng, 3, 3)
        res = transformer_check(homfun.power_perspective(4), A, B, V)
        assert abs(res.margin) <= 1e-8 * (1 + np.linalg.norm(A, 2) ** 4)


class TestJointConvexity:
    def test_identical_pairs(self, rng):
        A, B = random_psd(rng, 3), random_psd(rng, 3)
        for fn in [homfun.weighted_geometric(0.5), homfun.parallel_sum(), homfun.arithmetic()]:
            res = joint_convexity_check(fn, [(A, B), (A, B), (A, B)], [0.2, 0.3, 0.5])
            assert abs(res.margin) <= 1e-12

    @pytest.mark.parametrize("seed", range(10))
    def test_entropy(self, seed):
        rng = np.random.default_rng(seed)
        pairs = [(random_psd(rng, 3, 0.1), random_psd(rng, 3, 0.1)) for _ in range(2)]
        assert joint_convexity_check(homfun.entropy_kernel(), pairs, [0.5, 0.5]).margin >= -1e-8

    @pytest.mark.parametrize("seed", range(10))
    def test_geometric_concave(self, seed):
        rng = np.random.default_rng(seed)
        pairs = [(random_psd(rng, 3), random_psd(rng, 3)) for _ in range(2)]
        res = joint_convexity_check(homfun.weighted_geometric(0.5), pairs, [0.5, 0.5], direction=CONCAVE)
        assert res.margin >= -1e-8

    def test_bad_weights(self, rng):
        A = random_psd(rng, 2)
        with pytest.raises(BadWeights):
            joint_convexity_check(homfun.arithmetic(), [(A, A), (A, A)], [0.5, 0.6])
        with pytest.raises(BadWeights):
            joint_convexity_check(homfun.arithmetic(), [(A, A), (A, A)], [1.5, -0.5])
        with pytest.raises(BadWeights):
            joint_convexity_check(homfun.arithmetic(), [(A, A)], [0.5, 0.5])

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            joint_convexity_check(homfun.arithmetic(), [(np.eye(2), np.eye(2)), (np.eye(3), np.eye(3))], [0.5, 0.5])


class TestSectionScan:
    def test_square(self):
        res = section_operator_convexity_scan(lambda t: t * t, (-2.0, 2.0), 3, 200, seed=1)
        assert res.passed and res.margin >= -1e-10

    def test_affine(self):
        res = section_operator_convexity_scan(lambda t: t, (0.0, 1.0), 3, 200, seed=1)
        assert res.passed and abs(res.margin) <= 1e-12

    def test_quartic_violation(self):
        res = section_operator_convexity_scan(lambda t: t**4, (0.0, 4.0), 2, 2000, seed=7)
        assert not res.passed
        w = res.witness
        assert w.seed[0] == 7
        margin = revalidate(None, w, psi=lambda t: t**4)
        assert margin == pytest.approx(w.margin, abs=1e-12)

    def test_bad_parameters(self):
        with pytest.raises(BadParameter):
            section_operator_convexity_scan(lambda t: t, (1.0, 0.0), 2, 1, 0)
        with pytest.raises(BadParameter):
            section_operator_convexity_scan(lambda t: t, (0.0, 1.0), 1, 1, 0)

    @pytest.mark.parametrize("key", sorted(OPERATOR_CONVEX_SECTIONS))
    def test_operator_convex_sections(self, key):
        fn = OPERATOR_CONVEX_SECTIONS[key]()
        res = section_operator_convexity_scan(fn.section, (0.0, 1.0), 3, 200, seed=3)
        assert res.passed


class TestFalsify:
    def test_arithmetic_passes(self):
        res = falsify_transformer(homfun.arithmetic(), [2, 3], 50, seed=0)
        assert res.passed and res.witness is None

    def test_geometric_convex_direction_fails(self):
        fn = homfun.weighted_geometric(0.5)
        res = falsify_transformer(fn, [2, 3, 4], 200, seed=0)
        assert not res.passed
        assert revalidate(fn, res.witness) == pytest.approx(res.witness.margin, abs=1e-12)

    def test_quartic_perspective(self):
        fn = homfun.power_perspective(4)
        res = falsify_transformer(fn, [2, 3, 4], 10_000, seed=4, tol=1e-6)
        assert not res.passed and res.margin <= -1e-6
        assert res.witness.seed == (4, res.trials - 1)
        assert revalidate(fn, res.witness) == pytest.approx(res.witness.margin, abs=1e-12)

    def test_schedule_independent(self):
        # a trial depends only on (seed, index)
        fn = homfun.power_perspective(4)
        full = falsify_transformer(fn, [2, 3, 4], 10_000, seed=4, tol=1e-6)
        k = full.trials - 1
        from pwcalc.convexity import _transformer_instance
        from pwcalc.sampling import trial_rng

        A, B, V = _transformer_instance(trial_rng(4, k), [2, 3, 4][k % 3], 0.1)
        np.testing.assert_array_equal(A, full.witness.matrices["A"])
        np.testing.assert_array_equal(V, full.witness.matrices["V"])

    def test_bad_dims(self):
        with pytest.raises(BadParameter):
            falsify_transformer(homfun.arithmetic(), [1], 1, 0)


class TestSuite:
    @pytest.mark.parametrize("key", sorted(OPERATOR_CONVEX_SECTIONS))
    def test_operator_convex_sections(self, key):
        fn = OPERATOR_CONVEX_SECTIONS[key]()
        res = transformer_suite(fn, [2, 3, 4, 6], 100, seed=11)
        assert res.passed, res.margin
        assert res.trials == 400

    def test_embedding_consistency(self):
        fn = homfun.power_perspective(4)
        res = falsify_transformer(fn, [2, 3, 4], 10_000, seed=4, tol=1e-6)
        m = res.witness.matrices
        pairs, weights = embed_transformer_witness(m["A"], m["B"], m["V"])
        joint = joint_convexity_check(fn, pairs, weights, tol=1e-6)
        assert not joint.passed
        assert joint.margin <= res.margin + 10 * 1e-6
        assert revalidate(fn, joint.witness) == pytest.approx(joint.margin, abs=1e-12)
