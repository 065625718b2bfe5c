import numpy as np
import pytest

from railcause.nn import ops
from railcause.nn.ops import GruParams


class TestRelu:
    def test_elementwise(self):
        np.testing.assert_array_equal(ops.relu(np.array([-1.0, 0.0, 2.0])), [0.0, 0.0, 2.0])

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(4, 7))
        np.testing.assert_array_equal(ops.relu(ops.relu(x)), ops.relu(x))

    def test_backward_hand_value(self):
        grad = ops.relu_backward(np.array([-1.0, 2.0]), np.array([1.0, 1.0]))
        np.testing.assert_array_equal(grad, [0.0, 1.0])

    def test_zero_subgradient_at_zero(self):
        grad = ops.relu_backward(np.array([0.0]), np.array([5.0]))
        assert grad[0] == 0.0


class TestSoftmax:
    def test_symmetry(self):
        np.testing.assert_allclose(ops.softmax(np.array([0.0, 0.0])), [0.5, 0.5])

    def test_hand_value(self):
        np.testing.assert_allclose(
            ops.softmax(np.array([np.log(2.0), 0.0])), [2 / 3, 1 / 3], atol=1e-12
        )

    def test_saturation_no_overflow(self):
        out = ops.softmax(np.array([1000.0, 0.0]))
        np.testing.assert_allclose(out, [1.0, 0.0], atol=1e-12)
        assert np.isfinite(out).all()

    def test_sums_to_one_and_open_interval(self):
        rng = np.random.default_rng(1)
        z = rng.normal(scale=10, size=(20, 6))
        p = ops.softmax(z, axis=-1)
        np.testing.assert_allclose(p.sum(axis=-1), 1.0, atol=1e-9)
        assert (p > 0).all() and (p < 1).all()

    def test_shift_invariance(self):
        rng = np.random.default_rng(2)
        z = rng.normal(size=9)
        np.testing.assert_allclose(ops.softmax(z), ops.softmax(z + 123.4), atol=1e-9)


class TestCrossEntropy:
    def test_near_certain(self):
        eps = 1e-9
        assert ops.cross_entropy(np.array([1 - eps, eps]), 0) == pytest.approx(0.0, abs=1e-8)

    def test_hand_value(self):
        assert ops.cross_entropy(np.array([0.5, 0.5]), 1) == pytest.approx(np.log(2), abs=1e-12)

    def test_target_out_of_range(self):
        with pytest.raises(ValueError):
            ops.cross_entropy(np.array([0.5, 0.5]), 2)

    def test_combined_gradient_hand_value(self):
        loss, d = ops.softmax_cross_entropy(np.array([0.0, 0.0]), 0)
        assert loss == pytest.approx(np.log(2), abs=1e-12)
        np.testing.assert_allclose(d, [-0.5, 0.5], atol=1e-12)

    def test_batched_mean(self):
        logits = np.zeros((2, 2))
        loss, d = ops.softmax_cross_entropy(logits, np.array([0, 1]))
        assert loss == pytest.approx(np.log(2), abs=1e-12)
        np.testing.assert_allclose(d, [[-0.25, 0.25], [0.25, -0.25]], atol=1e-12)


class TestDense:
    def test_identity(self):
        x = np.array([[1.0, 2.0]])
        out = ops.dense(x, np.eye(2), np.zeros(2))
        np.testing.assert_array_equal(out, x)

    def test_hand_value(self):
        out = ops.dense(np.array([1.0, 2.0]), np.eye(2), np.array([3.0, 3.0]))
        np.testing.assert_array_equal(out, [4.0, 5.0])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ops.dense(np.ones((2, 3)), np.ones((4, 2)), np.zeros(2))


class TestDropout:
    def test_rate_zero_identity(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(5, 5))
        np.testing.assert_array_equal(ops.dropout(x, 0.0, "train", rng), x)

    def test_infer_identity_any_rate(self):
        x = np.ones((3, 3))
        np.testing.assert_array_equal(ops.dropout(x, 0.7, "infer"), x)

    def test_rate_one_rejected(self):
        with pytest.raises(ValueError):
            ops.dropout(np.ones(3), 1.0, "train", np.random.default_rng(0))

    def test_monte_carlo_expectation(self):
        rng = np.random.default_rng(7)
        x = np.full(100_000, 2.0)
        out = ops.dropout(x, 0.5, "train", rng)
        assert out.mean() == pytest.approx(2.0, rel=0.02)

    def test_backward_masks_identically(self):
        rng = np.random.default_rng(3)
        mask = ops.dropout_mask((4, 4), 0.5, rng)
        grad = ops.dropout_backward(mask, np.ones((4, 4)))
        np.testing.assert_array_equal(grad, mask)


class TestConv1d:
    def test_all_ones(self):
        out = ops.conv1d(np.ones((5, 1)), np.ones((1, 5, 1)), np.zeros(1))
        np.testing.assert_allclose(out, [[5.0]])

    def test_output_length_500_to_496(self):
        x = np.zeros((500, 3))
        out = ops.conv1d(x, np.zeros((2, 5, 3)), np.zeros(2))
        assert out.shape == (496, 2)

    def test_too_short(self):
        with pytest.raises(ValueError):
            ops.conv1d(np.ones((3, 1)), np.ones((1, 5, 1)), np.zeros(1))

    def test_linearity_in_input(self):
        rng = np.random.default_rng(5)
        k = rng.normal(size=(3, 4, 2))
        b = np.zeros(3)
        x1 = rng.normal(size=(9, 2))
        x2 = rng.normal(size=(9, 2))
        lhs = ops.conv1d(2.5 * x1 - 1.5 * x2, k, b)
        rhs = 2.5 * ops.conv1d(x1, k, b) - 1.5 * ops.conv1d(x2, k, b)
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    def test_batched_matches_per_sample(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=(4, 10, 3))
        k = rng.normal(size=(2, 5, 3))
        b = rng.normal(size=2)
        batched = ops.conv1d(x, k, b)
        for i in range(4):
            np.testing.assert_allclose(batched[i], ops.conv1d(x[i], k, b), atol=1e-12)


class TestMaxPool1d:
    def test_single_window(self):
        out = ops.maxpool1d(np.array([1.0, 3.0, 2.0, 5.0, 4.0]).reshape(5, 1), size=5)
        np.testing.assert_array_equal(out, [[5.0]])

    def test_two_windows(self):
        x = np.arange(1.0, 11.0).reshape(10, 1)
        out = ops.maxpool1d(x, size=5, stride=5)
        np.testing.assert_array_equal(out, [[5.0], [10.0]])

    def test_too_short(self):
        with pytest.raises(ValueError):
            ops.maxpool1d(np.ones((3, 1)), size=5)

    def test_tie_routes_gradient_to_first_index(self):
        x = np.ones((10, 1))
        out, argmax = ops.maxpool1d_with_argmax(x, size=5, stride=5)
        np.testing.assert_array_equal(out, [[1.0], [1.0]])
        dx = ops.maxpool1d_backward(x.shape, argmax, np.ones((2, 1)), size=5, stride=5)
        np.testing.assert_array_equal(dx.ravel(), [1, 0, 0, 0, 0, 1, 0, 0, 0, 0])

    def test_tail_remainder_dropped(self):
        x = np.arange(496.0).reshape(496, 1)
        out = ops.maxpool1d(x, size=5, stride=5)
        assert out.shape == (99, 1)


class TestGruCell:
    def test_all_zero_params(self):
        p = GruParams.zeros(3, 2)
        h = ops.gru_cell(np.zeros(3), np.zeros(2), p)
        np.testing.assert_allclose(h, np.zeros(2), atol=1e-12)

    def test_update_gate_saturation_keeps_state(self):
        p = GruParams.zeros(2, 3)
        p.bz[:] = 1e4
        h_prev = np.array([0.3, -0.2, 0.9])
        h = ops.gru_cell(np.array([1.0, -1.0]), h_prev, p)
        assert np.abs(h - h_prev).max() < 1e-9

    def test_one_dim_hand_value(self):
        p = GruParams.zeros(1, 1)
        p.br[:] = 1e4  # r ~ 1
        p.Wh[:] = 1.0
        h = ops.gru_cell(np.array([1.0]), np.array([0.4]), p)
        expected = 0.5 * 0.4 + 0.5 * np.tanh(1.0)
        assert h[0] == pytest.approx(expected, abs=1e-6)
        assert h[0] == pytest.approx(0.58079, abs=1e-5)

    def test_shape_mismatch(self):
        p = GruParams.zeros(3, 2)
        with pytest.raises(ValueError):
            ops.gru_cell(np.zeros(4), np.zeros(2), p)

    def test_convex_combination_stays_in_unit_box(self):
        rng = np.random.default_rng(11)
        p = GruParams(
            Wz=rng.normal(size=(3, 4)), Uz=rng.normal(size=(4, 4)), bz=rng.normal(size=4),
            Wr=rng.normal(size=(3, 4)), Ur=rng.normal(size=(4, 4)), br=rng.normal(size=4),
            Wh=rng.normal(size=(3, 4)), Uh=rng.normal(size=(4, 4)), bh=rng.normal(size=4),
        )
        h = rng.uniform(-1, 1, size=4)
        for t in range(50):
            h = ops.gru_cell(rng.normal(size=3), h, p)
            assert (np.abs(h) <= 1.0).all()


class TestGruLayer:
    def _random_params(self, rng, d_in, d_h):
        return GruParams(
            Wz=rng.normal(size=(d_in, d_h)), Uz=rng.normal(size=(d_h, d_h)), bz=rng.normal(size=d_h),
            Wr=rng.normal(size=(d_in, d_h)), Ur=rng.normal(size=(d_h, d_h)), br=rng.normal(size=d_h),
            Wh=rng.normal(size=(d_in, d_h)), Uh=rng.normal(size=(d_h, d_h)), bh=rng.normal(size=d_h),
        )

    def test_length_one_equals_cell(self):
        rng = np.random.default_rng(13)
        p = self._random_params(rng, 3, 2)
        x = rng.normal(size=(1, 3))
        hs = ops.gru_layer(x, p)
        np.testing.assert_allclose(hs[0], ops.gru_cell(x[0], np.zeros(2), p), atol=1e-12)

    def test_zero_input_zero_params(self):
        p = GruParams.zeros(2, 3)
        hs = ops.gru_layer(np.zeros((6, 2)), p)
        np.testing.assert_allclose(hs, np.zeros((6, 3)), atol=1e-12)

    def test_emits_every_step(self):
        rng = np.random.default_rng(17)
        p = self._random_params(rng, 2, 2)
        x = rng.normal(size=(4, 2))
        hs = ops.gru_layer(x, p)
        assert hs.shape == (4, 2)
        h = np.zeros(2)
        for t in range(4):
            h = ops.gru_cell(x[t], h, p)
            np.testing.assert_allclose(hs[t], h, atol=1e-12)

    def test_batched_matches_per_sample(self):
        rng = np.random.default_rng(19)
        p = self._random_params(rng, 3, 2)
        x = rng.normal(size=(5, 4, 3))
        hs = ops.gru_layer(x, p)
        for i in range(5):
            np.testing.assert_allclose(hs[i], ops.gru_layer(x[i], p), atol=1e-12)
