import numpy as np
import pytest

from railcause.errors import NonFiniteGradientError
from railcause.nn.optim import Adam, Sgd, make_optimizer


class TestSgd:
    def test_basic_step(self):
        p = {"w": np.array([0.0])}
        Sgd(0.1).step(p, {"w": np.array([1.0])})
        np.testing.assert_allclose(p["w"], [-0.1], atol=1e-12)

    def test_zero_grad_leaves_params(self):
        p = {"w": np.array([1.5, -2.0])}
        Sgd(0.1).step(p, {"w": np.zeros(2)})
        np.testing.assert_array_equal(p["w"], [1.5, -2.0])

    def test_nonfinite_grad_names_parameter(self):
        p = {"w": np.array([0.0]), "hidden.b": np.array([0.0])}
        g = {"w": np.array([0.0]), "hidden.b": np.array([np.nan])}
        with pytest.raises(NonFiniteGradientError, match="hidden.b"):
            Sgd(0.1).step(p, g)


class TestAdam:
    def test_first_step_is_signed_lr(self):
        # with bias correction, step 1 gives update ~ -lr * sign(g)
        opt = Adam(learning_rate=1e-3)
        p = {"w": np.array([0.0, 0.0])}
        g = {"w": np.array([2.5, -0.01])}
        opt.step(p, g)
        np.testing.assert_allclose(p["w"], [-1e-3, 1e-3], rtol=1e-4)

    def test_moment_formulas_by_hand(self):
        opt = Adam(learning_rate=0.1, beta1=0.9, beta2=0.999, epsilon=1e-8)
        p = {"w": np.array([1.0])}
        opt.step(p, {"w": np.array([0.5])})
        opt.step(p, {"w": np.array([-0.25])})
        m1 = 0.1 * 0.5
        v1 = 0.001 * 0.25
        step1 = 0.1 * (m1 / (1 - 0.9)) / (np.sqrt(v1 / (1 - 0.999)) + 1e-8)
        m2 = 0.9 * m1 + 0.1 * (-0.25)
        v2 = 0.999 * v1 + 0.001 * 0.0625
        step2 = 0.1 * (m2 / (1 - 0.9**2)) / (np.sqrt(v2 / (1 - 0.999**2)) + 1e-8)
        np.testing.assert_allclose(p["w"], [1.0 - step1 - step2], rtol=1e-12)

    def test_zero_grads_change_is_epsilon_scale(self):
        opt = Adam(learning_rate=1e-3)
        p = {"w": np.array([1.0])}
        opt.step(p, {"w": np.zeros(1)})
        assert abs(p["w"][0] - 1.0) < 1e-9

    def test_nonfinite_grad_names_parameter(self):
        opt = Adam()
        with pytest.raises(NonFiniteGradientError, match="kern"):
            opt.step({"kern": np.array([0.0])}, {"kern": np.array([np.inf])})

    def test_state_buffers_match_param_shapes(self):
        opt = Adam()
        p = {"a": np.zeros((2, 3)), "b": np.zeros(4)}
        g = {"a": np.ones((2, 3)), "b": np.ones(4)}
        opt.step(p, g)
        assert opt.m["a"].shape == (2, 3)
        assert opt.v["b"].shape == (4,)
        assert opt.t == 1


def test_make_optimizer():
    assert isinstance(make_optimizer("sgd", 0.1), Sgd)
    assert isinstance(make_optimizer("adam", 0.1), Adam)
    with pytest.raises(ValueError):
        make_optimizer("lbfgs", 0.1)
