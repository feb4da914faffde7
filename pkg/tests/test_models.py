""" Sinkhorn projection, the network and its checkpoints. """

import numpy as np
import pytest

from tr2c.errors import InvalidInputError, InvalidConfigError, NumericalFailure, IngestionError
from tr2c.models import (SinkhornConfig, sinkhorn_project, sinkhorn_backward, init_params, count_params,
                         forward, backward, save_checkpoint, load_checkpoint)
from tr2c.models.network import normalization_backward
from tr2c.training.gradcheck import finite_difference, relative_errors


def test_sinkhorn_of_zeros():
    affinity = sinkhorn_project(np.zeros((4, 4)), SinkhornConfig(temperature=0.3))
    np.testing.assert_array_equal(affinity.gamma, 0.25)
    assert affinity.row_tol == 0. and affinity.col_tol == 0.


def test_sinkhorn_dominant_diagonal():
    gamma = sinkhorn_project(20. * np.eye(3)).gamma
    np.testing.assert_allclose(gamma, np.eye(3), atol=1e-6)


def test_sinkhorn_symmetric_input(rng):
    matrix = rng.uniform(-1, 1, size=(8, 8))
    matrix = (matrix + matrix.T) / 2
    gamma = sinkhorn_project(matrix, SinkhornConfig(iterations=200)).gamma
    np.testing.assert_allclose(gamma, gamma.T, atol=1e-9)


def test_sinkhorn_tolerances(rng):
    for _ in range(50):
        matrix = rng.uniform(-1, 1, size=(100, 100))
        default = sinkhorn_project(matrix)
        assert max(default.row_tol, default.col_tol) < 1e-3
        longer = sinkhorn_project(matrix, SinkhornConfig(iterations=50))
        assert max(longer.row_tol, longer.col_tol) < 1e-6
        assert np.all(default.gamma > 0)


def test_sinkhorn_row_error_does_not_grow(rng):
    matrix = rng.uniform(-1, 1, size=(30, 30))
    errors = [np.abs(sinkhorn_project(matrix, SinkhornConfig(iterations=k)).gamma.sum(axis=1) - 1).sum()
              for k in range(1, 51)]
    assert np.all(np.diff(errors) <= 1e-12)


def test_sinkhorn_permutation_equivariance(rng):
    matrix = rng.standard_normal((7, 7))
    rows, cols = rng.permutation(7), rng.permutation(7)
    permuted = sinkhorn_project(matrix[rows][:, cols]).gamma
    np.testing.assert_allclose(permuted, sinkhorn_project(matrix).gamma[rows][:, cols], atol=1e-10)


def test_sinkhorn_shift_invariance(rng):
    matrix = rng.standard_normal((6, 6))
    np.testing.assert_allclose(sinkhorn_project(matrix + 3.7).gamma, sinkhorn_project(matrix).gamma, atol=1e-10)


def test_sinkhorn_large_entries_do_not_overflow():
    affinity = sinkhorn_project(1000. * np.eye(4) + 900.)
    assert np.all(np.isfinite(affinity.gamma))
    np.testing.assert_allclose(affinity.gamma, np.eye(4), atol=1e-10)


def test_sinkhorn_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        sinkhorn_project(np.array([[0., np.nan], [1., 0.]]))
    with pytest.raises(InvalidInputError):
        sinkhorn_project(np.zeros((2, 3)))
    with pytest.raises(InvalidConfigError):
        SinkhornConfig(iterations=0)
    with pytest.raises(InvalidConfigError):
        SinkhornConfig(temperature=0.)


def test_sinkhorn_backward_zero_upstream(rng):
    matrix = rng.standard_normal((5, 5))
    np.testing.assert_array_equal(sinkhorn_backward(matrix, None, np.zeros((5, 5))), 0.)


def test_sinkhorn_backward_single_frame():
    assert sinkhorn_backward(np.array([[0.3]]), None, np.array([[2.]]))[0, 0] == 0.


@pytest.mark.parametrize('config', [SinkhornConfig(), SinkhornConfig(iterations=3, temperature=0.5)])
def test_sinkhorn_backward_matches_finite_differences(rng, config):
    matrix = rng.standard_normal((5, 5))
    upstream = rng.standard_normal((5, 5))
    analytic = sinkhorn_backward(matrix, config, upstream)

    def _objective(flat):
        return np.sum(upstream * sinkhorn_project(flat.reshape(5, 5), config).gamma)

    numeric = finite_difference(_objective, matrix.ravel(), range(25))
    assert relative_errors(analytic.ravel(), numeric, 1e-8).max() < 1e-4


def test_init_is_deterministic():
    first, second = init_params(6, 8, 3, seed=4), init_params(6, 8, 3, seed=4)
    for a, b in zip(first.tensors(), second.tensors()):
        np.testing.assert_array_equal(a, b)
    other = init_params(6, 8, 3, seed=5)
    assert not np.array_equal(first.flatten(), other.flatten())


def test_init_ranges():
    params = init_params(6, 8, 3, seed=0)
    assert np.abs(params.w1).max() <= np.sqrt(1 / 6)
    assert np.abs(params.w2).max() <= np.sqrt(1 / 8)
    np.testing.assert_array_equal(params.b1, 0.)
    np.testing.assert_array_equal(params.by, 0.)


def test_parameter_count():
    expected = 324 * 512 + 512 + 512 * 512 + 512 + 2 * (512 * 64 + 64)
    assert count_params(324, 512, 64) == expected == 494720
    assert init_params(324, 512, 64).size == expected
    assert init_params(4, 5, 3).size == count_params(4, 5, 3)


def test_flatten_unflatten():
    params = init_params(4, 5, 3, seed=1)
    restored = params.unflatten(params.flatten())
    for a, b in zip(params.tensors(), restored.tensors()):
        np.testing.assert_array_equal(a, b)


def test_forward_bias_only_heads(rng):
    params = init_params(4, 5, 3).zeros_like()
    params.bz = np.array([3., 0., 4.])
    params.by = np.array([0., -2., 0.])
    cache = forward(params, rng.standard_normal((4, 6)))
    np.testing.assert_allclose(cache.z_tilde, np.tile([[0.6], [0.], [0.8]], 6))
    np.testing.assert_allclose(cache.y_tilde, np.tile([[0.], [-1.], [0.]], 6))


def test_forward_unit_columns(rng):
    cache = forward(init_params(4, 16, 3, seed=2), rng.standard_normal((4, 20)))
    np.testing.assert_allclose(np.linalg.norm(cache.z_tilde, axis=0), 1., atol=1e-6)
    np.testing.assert_allclose(np.linalg.norm(cache.y_tilde, axis=0), 1., atol=1e-6)


def test_forward_is_columnwise(rng):
    params = init_params(4, 16, 3, seed=2)
    features = rng.standard_normal((4, 9))
    features[:, 5] = features[:, 2]
    cache = forward(params, features)
    np.testing.assert_allclose(cache.z_tilde[:, 5], cache.z_tilde[:, 2], rtol=0, atol=1e-14)

    order = rng.permutation(9)
    permuted = forward(params, features[:, order])
    np.testing.assert_allclose(permuted.z_tilde, cache.z_tilde[:, order], atol=1e-12)
    np.testing.assert_allclose(permuted.y_tilde, cache.y_tilde[:, order], atol=1e-12)


def test_forward_zero_head_output_is_guarded():
    params = init_params(2, 3, 2).zeros_like()
    cache = forward(params, np.ones((2, 3)))
    np.testing.assert_allclose(cache.z_tilde, np.tile([[1.], [0.]], 3))


def test_forward_rejects_mismatched_features(rng):
    with pytest.raises(InvalidInputError):
        forward(init_params(4, 5, 3), rng.standard_normal((5, 6)))


def test_forward_names_failing_layer():
    params = init_params(2, 3, 2)
    params.w1 = np.full((2, 3), 1e308)
    with pytest.raises(NumericalFailure) as error:
        with np.errstate(over='ignore', invalid='ignore'):
            forward(params, np.ones((2, 4)))
    assert error.value.term == 'encoder.1'


def test_backward_zero_adjoints(rng):
    params = init_params(4, 5, 3, seed=3)
    cache = forward(params, rng.standard_normal((4, 6)))
    grads = backward(params, cache, np.zeros((3, 6)), np.zeros((3, 6)))
    for tensor in grads.tensors():
        np.testing.assert_array_equal(tensor, 0.)


def test_backward_shape_mismatch(rng):
    params = init_params(4, 5, 3, seed=3)
    cache = forward(params, rng.standard_normal((4, 6)))
    with pytest.raises(InvalidInputError):
        backward(params, cache, np.zeros((3, 5)), np.zeros((3, 6)))


def test_normalization_adjoint_is_tangent(rng):
    raw = rng.standard_normal((3, 7))
    norms = np.linalg.norm(raw, axis=0)
    unit = raw / norms
    grad = normalization_backward(unit, norms, rng.standard_normal((3, 7)))
    np.testing.assert_allclose(np.sum(grad * unit, axis=0), 0., atol=1e-8)


def test_parallel_adjoint_is_annihilated(rng):
    params = init_params(4, 5, 3, seed=3)
    cache = forward(params, rng.standard_normal((4, 6)))
    grads = backward(params, cache, 2.5 * cache.z_tilde, np.zeros((3, 6)))
    np.testing.assert_allclose(grads.wz, 0., atol=1e-12)
    np.testing.assert_allclose(grads.bz, 0., atol=1e-12)


def test_checkpoint_round_trip(tmp_path):
    params = init_params(4, 5, 3, seed=9)
    path = str(tmp_path / 'nested' / 'checkpoint.tr2c')
    save_checkpoint(params, path)
    restored = load_checkpoint(path)
    assert restored.dims == (4, 5, 3)
    for a, b in zip(params.tensors(), restored.tensors()):
        np.testing.assert_array_equal(a, b)


def test_checkpoint_layout(tmp_path):
    path = str(tmp_path / 'checkpoint.tr2c')
    save_checkpoint(init_params(4, 5, 3), path)
    with open(path, 'rb') as file:
        raw = file.read()
    assert raw[:4] == b'TR2C'
    assert int.from_bytes(raw[4:6], 'little') == 1
    assert [int.from_bytes(raw[6 + 4 * i: 10 + 4 * i], 'little') for i in range(3)] == [4, 5, 3]
    assert len(raw) == 18 + 8 * count_params(4, 5, 3)


def test_checkpoint_corruption(tmp_path):
    path = str(tmp_path / 'checkpoint.tr2c')
    save_checkpoint(init_params(4, 5, 3), path)
    with open(path, 'rb') as file:
        raw = file.read()

    for name, payload in [('magic', b'XXXX' + raw[4:]), ('short', raw[:-8]), ('header', raw[:10])]:
        broken = str(tmp_path / name)
        with open(broken, 'wb') as file:
            file.write(payload)
        with pytest.raises(IngestionError):
            load_checkpoint(broken)
