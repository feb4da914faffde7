""" Encoder with feature and cluster heads, written with explicit forward and backward passes.

Frames are columns. For a frame x the network computes

    h = relu(W2^T relu(W1^T x + b1) + b2)
    z = Wz^T h + bz,   y = Wy^T h + by

and both head outputs are normalized to the unit sphere.
"""

import logging
from dataclasses import dataclass, fields

import numpy as np

from ..errors import InvalidInputError, NumericalFailure
from ..utils import as_matrix, normalize_columns

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

DEFAULT_HIDDEN_DIM = 512
DEFAULT_OUTPUT_DIM = 64
NORM_FLOOR = 1e-8


@dataclass
class NetworkParams:  # pylint: disable=too-many-instance-attributes
    """ Weights and biases of the encoder (two layers) and the two heads.

    Weights are stored fan_in x fan_out: ``w1`` is D x d_pre, ``w2`` is d_pre x d_pre,
    ``wz`` and ``wy`` are d_pre x d. The same container holds gradients.
    """
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    wz: np.ndarray
    bz: np.ndarray
    wy: np.ndarray
    by: np.ndarray

    @classmethod
    def names(cls):
        """ Field names in storage order. """
        return tuple(field.name for field in fields(cls))

    def tensors(self):
        """ Arrays in storage order. """
        return [getattr(self, name) for name in self.names()]

    @property
    def dims(self):
        """ (D, d_pre, d). """
        return self.w1.shape[0], self.w1.shape[1], self.wz.shape[1]

    @property
    def size(self):
        """ Total number of scalar parameters. """
        return sum(tensor.size for tensor in self.tensors())

    def flatten(self):
        """ All parameters concatenated into one vector, in storage order. """
        return np.concatenate([tensor.ravel() for tensor in self.tensors()])

    def unflatten(self, vector):
        """ Parameters of the same shapes filled from a flat vector. """
        tensors, start = [], 0
        for tensor in self.tensors():
            tensors.append(np.asarray(vector[start: start + tensor.size], dtype=np.float64).reshape(tensor.shape))
            start += tensor.size
        return NetworkParams(*tensors)

    def zeros_like(self):
        """ Zero container of matching shapes. """
        return NetworkParams(*[np.zeros_like(tensor) for tensor in self.tensors()])


def count_params(feature_dim, hidden_dim, output_dim):
    """ Number of parameters for dims (D, d_pre, d). """
    return (feature_dim * hidden_dim + hidden_dim + hidden_dim * hidden_dim + hidden_dim
            + 2 * (hidden_dim * output_dim + output_dim))


def init_params(feature_dim, hidden_dim=DEFAULT_HIDDEN_DIM, output_dim=DEFAULT_OUTPUT_DIM, seed=0):
    """ Randomly initialize parameters.

    Weights are drawn from ``U[-sqrt(1 / fan_in), sqrt(1 / fan_in)]``, biases are zero.

    Parameters
    ----------
    feature_dim : int
        input dimension D.
    hidden_dim : int
        encoder width d_pre.
    output_dim : int
        head output dimension d.
    seed : int
        seed of the generator.

    Returns
    -------
    NetworkParams
    """
    if min(feature_dim, hidden_dim, output_dim) < 1:
        raise InvalidInputError('network dims must be positive, got {}'.format((feature_dim, hidden_dim, output_dim)))
    rng = np.random.default_rng(seed)

    def _uniform(fan_in, fan_out):
        bound = np.sqrt(1. / fan_in)
        return rng.uniform(-bound, bound, size=(fan_in, fan_out))

    return NetworkParams(w1=_uniform(feature_dim, hidden_dim), b1=np.zeros(hidden_dim),
                         w2=_uniform(hidden_dim, hidden_dim), b2=np.zeros(hidden_dim),
                         wz=_uniform(hidden_dim, output_dim), bz=np.zeros(output_dim),
                         wy=_uniform(hidden_dim, output_dim), by=np.zeros(output_dim))


@dataclass
class ForwardCache:  # pylint: disable=too-many-instance-attributes
    """ Intermediates of a forward pass, all with one column per frame.

    Attributes
    ----------
    features : ndarray
        D x N input.
    pre1, act1, pre2, act2 : ndarray
        d_pre x N pre-activations and ReLU activations of the encoder layers.
    z, y : ndarray
        d x N raw head outputs.
    z_tilde, y_tilde : ndarray
        unit-norm head outputs.
    z_norms, y_norms : ndarray
        norms the head outputs were divided by.
    """
    features: np.ndarray
    pre1: np.ndarray
    act1: np.ndarray
    pre2: np.ndarray
    act2: np.ndarray
    z: np.ndarray
    y: np.ndarray
    z_tilde: np.ndarray
    y_tilde: np.ndarray
    z_norms: np.ndarray
    y_norms: np.ndarray


def _check_layer(values, layer):
    if not np.all(np.isfinite(values)):
        raise NumericalFailure('non-finite activations in layer {!r}'.format(layer), term=layer)
    return values


def forward(params, features):
    """ Evaluate encoder and heads on every column of `features`.

    Parameters
    ----------
    params : NetworkParams
        network parameters.
    features : ndarray
        D x N feature matrix.

    Returns
    -------
    ForwardCache
    """
    features = as_matrix(features, 'feature matrix')
    if features.shape[0] != params.dims[0]:
        raise InvalidInputError('features have {} rows, network expects {}'.format(features.shape[0], params.dims[0]))

    pre1 = _check_layer(params.w1.T @ features + params.b1[:, None], 'encoder.1')
    act1 = np.maximum(pre1, 0)
    pre2 = _check_layer(params.w2.T @ act1 + params.b2[:, None], 'encoder.2')
    act2 = np.maximum(pre2, 0)
    z = _check_layer(params.wz.T @ act2 + params.bz[:, None], 'feature_head')
    y = _check_layer(params.wy.T @ act2 + params.by[:, None], 'cluster_head')

    z_tilde, z_norms, z_guarded = normalize_columns(z, NORM_FLOOR)
    y_tilde, y_norms, y_guarded = normalize_columns(y, NORM_FLOOR)
    if np.any(z_guarded) or np.any(y_guarded):
        logger.debug('Guarded %d zero-norm feature and %d cluster head outputs',
                     np.sum(z_guarded), np.sum(y_guarded))
    return ForwardCache(features=features, pre1=pre1, act1=act1, pre2=pre2, act2=act2, z=z, y=y,
                        z_tilde=z_tilde, y_tilde=y_tilde, z_norms=z_norms, y_norms=y_norms)


def normalization_backward(unit, norms, upstream):
    """ Adjoint of column normalization: ``(I - u u^T) g / ||x||`` per column. """
    radial = np.sum(unit * upstream, axis=0, keepdims=True)
    return (upstream - unit * radial) / norms


def backward(params, cache, grad_z_tilde, grad_y_tilde):
    """ Propagate adjoints of the normalized head outputs to all parameters.

    Parameters
    ----------
    params : NetworkParams
        parameters used in the forward pass.
    cache : ForwardCache
        intermediates of that forward pass.
    grad_z_tilde, grad_y_tilde : ndarray
        d x N adjoints of the normalized feature and cluster head outputs.

    Returns
    -------
    NetworkParams
        gradients of matching shapes.
    """
    expected = cache.z_tilde.shape
    if grad_z_tilde.shape != expected or grad_y_tilde.shape != expected:
        raise InvalidInputError('head adjoints must have shape {}, got {} and {}'
                                .format(expected, grad_z_tilde.shape, grad_y_tilde.shape))

    grad_z = normalization_backward(cache.z_tilde, cache.z_norms, grad_z_tilde)
    grad_y = normalization_backward(cache.y_tilde, cache.y_norms, grad_y_tilde)

    grad_act2 = params.wz @ grad_z + params.wy @ grad_y
    grad_pre2 = grad_act2 * (cache.pre2 > 0)
    grad_act1 = params.w2 @ grad_pre2
    grad_pre1 = grad_act1 * (cache.pre1 > 0)

    return NetworkParams(w1=cache.features @ grad_pre1.T, b1=grad_pre1.sum(axis=1),
                         w2=cache.act1 @ grad_pre2.T, b2=grad_pre2.sum(axis=1),
                         wz=cache.act2 @ grad_z.T, bz=grad_z.sum(axis=1),
                         wy=cache.act2 @ grad_y.T, by=grad_y.sum(axis=1))
