"""
Tests for the potential network and its hand-written gradients
"""

import numpy as np
import pytest

from pwtest.core import ConfigError, DimensionError, RngSeed
from pwtest.core.potentials import (
    Activation,
    PotentialNetwork,
    backward,
    backward_batch,
    forward,
    forward_batch,
    init_network,
    lipschitz_bound,
    load_checkpoint,
    num_params,
    save_checkpoint,
    weighted_gradients,
)


@pytest.fixture
def abs_net():
    """ReLU network computing |z|"""
    return PotentialNetwork.from_layers([[[1.0], [-1.0]], [[1.0, 1.0]]], [[0.0, 0.0], [0.0]])


@pytest.fixture
def tanh_net():
    return init_network([3, 5, 4, 1], activation="tanh", seed=RngSeed(5))


def numeric_gradient(fn, x, eps=1e-6):
    grad = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = eps
        grad[i] = (fn(x + step) - fn(x - step)) / (2 * eps)
    return grad


class TestConstruction:
    def test_num_params(self):
        assert num_params([1, 32, 32, 1]) == 1153

    def test_network_reports_num_params(self, tanh_net):
        assert tanh_net.num_params == tanh_net.flat_params().size == num_params([3, 5, 4, 1])

    @pytest.mark.parametrize("dims", [[2, 3, 2], [3], [2, 0, 1]])
    def test_bad_dims(self, dims):
        with pytest.raises(ConfigError):
            init_network(dims)

    def test_unknown_activation(self):
        with pytest.raises(ConfigError):
            init_network([1, 2, 1], activation="sigmoid")

    def test_init_is_seeded(self):
        a = init_network([2, 4, 1], seed=RngSeed(9))
        b = init_network([2, 4, 1], seed=RngSeed(9))
        np.testing.assert_array_equal(a.flat_params(), b.flat_params())

    def test_biases_start_at_zero(self):
        net = init_network([2, 4, 1], seed=RngSeed(9))
        assert all(np.all(b == 0.0) for b in net.biases)

    def test_parameters_are_read_only(self, tanh_net):
        with pytest.raises(ValueError):
            tanh_net.weights[0][0, 0] = 1.0

    def test_flat_round_trip(self, tanh_net):
        rebuilt = tanh_net.with_flat_params(tanh_net.flat_params())
        np.testing.assert_array_equal(rebuilt.flat_params(), tanh_net.flat_params())

    def test_wrong_flat_length(self):
        with pytest.raises(ConfigError):
            PotentialNetwork.from_flat([1, 2, 1], "relu", np.zeros(3))


class TestForward:
    def test_absolute_value(self, abs_net):
        assert forward(abs_net, [3.0]) == 3.0
        assert forward(abs_net, [-2.0]) == 2.0

    def test_zero_network(self):
        assert forward(PotentialNetwork.zeros([2, 4, 1]), [1.0, -1.0]) == 0.0

    def test_batch_matches_single(self, tanh_net, rng):
        Z = rng.normal(size=(6, 3))
        np.testing.assert_allclose(forward_batch(tanh_net, Z), [forward(tanh_net, z) for z in Z])

    def test_wrong_input_length(self, tanh_net):
        with pytest.raises(DimensionError):
            forward(tanh_net, [1.0, 2.0])

    def test_lipschitz_bound(self, abs_net):
        assert lipschitz_bound(abs_net) == pytest.approx(2.0)

    def test_tanh_network_respects_lipschitz_bound(self, rng):
        net = init_network([3, 16, 16, 1], activation="tanh", seed=RngSeed(11))
        bound = lipschitz_bound(net)
        for _ in range(200):
            z, w = rng.normal(scale=2.0, size=3), rng.normal(scale=2.0, size=3)
            assert abs(forward(net, z) - forward(net, w)) <= bound * np.linalg.norm(z - w) + 1e-12


class TestBackward:
    def test_relu_known_gradients(self, abs_net):
        grads = backward(abs_net, [3.0])
        np.testing.assert_allclose(grads.d_theta, [3.0, 0.0, 1.0, 0.0, 3.0, 0.0, 1.0])
        np.testing.assert_allclose(grads.d_input, [1.0])

    def test_relu_negative_side(self, abs_net):
        assert backward(abs_net, [-2.0]).d_input[0] == pytest.approx(-1.0)

    def test_relu_derivative_at_zero(self):
        assert Activation.RELU.derivative(np.array([0.0]), np.array([0.0]))[0] == 0.0

    def test_input_gradient_matches_finite_differences(self, tanh_net, rng):
        z = rng.normal(size=3)
        expected = numeric_gradient(lambda v: forward(tanh_net, v), z)
        np.testing.assert_allclose(backward(tanh_net, z).d_input, expected, rtol=1e-5, atol=1e-8)

    @pytest.mark.parametrize("dims", [[1, 1], [1, 16, 1], [2, 32, 32, 1]])
    def test_gradients_match_finite_differences_across_architectures(self, rng, dims):
        net = init_network(dims, activation="tanh", seed=RngSeed(len(dims)))
        theta = net.flat_params()
        for _ in range(3):
            z = rng.normal(size=dims[0])
            grads = backward(net, z)
            np.testing.assert_allclose(grads.d_input, numeric_gradient(lambda v: forward(net, v), z),
                                       rtol=1e-5, atol=1e-8)
            expected = numeric_gradient(lambda p: forward(net.with_flat_params(p), z), theta)
            np.testing.assert_allclose(grads.d_theta, expected, rtol=1e-5, atol=1e-8)

    def test_parameter_gradient_matches_finite_differences(self, tanh_net, rng):
        z = rng.normal(size=3)
        theta = tanh_net.flat_params()
        expected = numeric_gradient(lambda p: forward(tanh_net.with_flat_params(p), z), theta)
        np.testing.assert_allclose(backward(tanh_net, z).d_theta, expected, rtol=1e-5, atol=1e-8)

    def test_weighted_gradients_sum_rows(self, tanh_net, rng):
        Z = rng.normal(size=(4, 3))
        w = np.array([0.5, -1.0, 2.0, 0.25])
        d_theta, d_input = weighted_gradients(tanh_net, Z, w)
        per_row = [backward(tanh_net, z) for z in Z]
        np.testing.assert_allclose(d_theta, sum(wi * g.d_theta for wi, g in zip(w, per_row)), atol=1e-12)
        np.testing.assert_allclose(d_input, [wi * g.d_input for wi, g in zip(w, per_row)], atol=1e-12)

    def test_weight_count_mismatch(self, tanh_net, rng):
        with pytest.raises(DimensionError):
            weighted_gradients(tanh_net, rng.normal(size=(4, 3)), [1.0, 1.0])

    def test_backward_batch_rows(self, tanh_net, rng):
        Z = rng.normal(size=(3, 3))
        d_theta, d_input = backward_batch(tanh_net, Z)
        assert d_theta.shape == (3, tanh_net.num_params)
        for i, z in enumerate(Z):
            np.testing.assert_allclose(d_theta[i], backward(tanh_net, z).d_theta)
            np.testing.assert_allclose(d_input[i], backward(tanh_net, z).d_input)


class TestCheckpoint:
    def test_save_and_load(self, tanh_net, tmp_path):
        path = tmp_path / "psi.json"
        save_checkpoint(tanh_net, path)
        restored = load_checkpoint(path)
        assert restored.layer_dims == tanh_net.layer_dims
        assert restored.activation is Activation.TANH
        np.testing.assert_array_equal(restored.flat_params(), tanh_net.flat_params())

    def test_missing_key(self):
        with pytest.raises(ConfigError):
            PotentialNetwork.from_dict({"dims": [1, 1]})
