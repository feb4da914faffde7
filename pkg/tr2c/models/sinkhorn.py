""" Differentiable Sinkhorn projection onto doubly stochastic matrices.

The projection exponentiates a similarity matrix, then alternates row and column
normalizations for a fixed number of rounds. The backward pass replays the forward
normalizations and propagates adjoints through each division and the exponential.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError, InvalidConfigError
from ..utils import as_matrix

DEFAULT_ITERATIONS = 10
DEFAULT_TEMPERATURE = 1.
DEFAULT_FLOOR = 1e-12


@dataclass(frozen=True)
class SinkhornConfig:
    """ Iteration budget and temperature of the projection.

    Parameters
    ----------
    iterations : int
        number of (row, column) normalization rounds, >= 1.
    temperature : float
        positive temperature tau; the kernel is ``exp(M / tau)``.
    epsilon_floor : float
        lower bound applied to kernel entries to guard underflow.
    """
    iterations: int = DEFAULT_ITERATIONS
    temperature: float = DEFAULT_TEMPERATURE
    epsilon_floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise InvalidConfigError('sinkhorn iterations must be a positive integer, got {}'
                                     .format(self.iterations))
        if not self.temperature > 0:
            raise InvalidConfigError('sinkhorn temperature must be positive, got {}'.format(self.temperature))
        if not self.epsilon_floor > 0:
            raise InvalidConfigError('sinkhorn floor must be positive, got {}'.format(self.epsilon_floor))


@dataclass
class Affinity:
    """ Result of a projection.

    Attributes
    ----------
    gamma : ndarray
        N x N matrix with positive entries.
    row_tol : float
        max absolute deviation of row sums from 1.
    col_tol : float
        max absolute deviation of column sums from 1.
    """
    gamma: np.ndarray
    row_tol: float
    col_tol: float


def _check_input(matrix):
    if np.any(np.isnan(np.asarray(matrix, dtype=np.float64))):
        raise InvalidInputError('sinkhorn input has NaN entries')
    matrix = as_matrix(matrix, 'sinkhorn input')
    if matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise InvalidInputError('sinkhorn input must be a nonempty square matrix, got {}'.format(matrix.shape))
    return matrix


def _kernel(matrix, config):
    """ ``exp(M / tau)`` shifted by row maxima, floored; also returns the mask of unfloored entries. """
    scaled = matrix / config.temperature
    scaled = scaled - scaled.max(axis=1, keepdims=True)
    kernel = np.exp(scaled)
    active = kernel > config.epsilon_floor
    return np.where(active, kernel, config.epsilon_floor), active


def _replay(kernel, iterations):
    """ Run the normalizations, keeping every intermediate for the backward pass. """
    states = []
    current = kernel
    for _ in range(iterations):
        row_sums = current.sum(axis=1, keepdims=True)
        rowed = current / row_sums
        col_sums = rowed.sum(axis=0, keepdims=True)
        current = rowed / col_sums
        states.append((row_sums, rowed, col_sums, current))
    return states


def sinkhorn_project(matrix, config=None):
    """ Project a similarity matrix onto the doubly stochastic set.

    Parameters
    ----------
    matrix : ndarray
        N x N finite similarity matrix M.
    config : SinkhornConfig or None
        iteration budget and temperature; defaults when None.

    Returns
    -------
    Affinity
    """
    config = config or SinkhornConfig()
    matrix = _check_input(matrix)
    gamma, _ = _kernel(matrix, config)
    for _ in range(config.iterations):
        gamma = gamma / gamma.sum(axis=1, keepdims=True)
        gamma = gamma / gamma.sum(axis=0, keepdims=True)
    return Affinity(gamma=gamma,
                    row_tol=float(np.max(np.abs(gamma.sum(axis=1) - 1))),
                    col_tol=float(np.max(np.abs(gamma.sum(axis=0) - 1))))


def sinkhorn_backward(matrix, config, upstream):
    """ Gradient of ``<upstream, sinkhorn_project(M)>`` w.r.t. M.

    Parameters
    ----------
    matrix : ndarray
        N x N input of the forward call being differentiated.
    config : SinkhornConfig or None
        same config as in the forward call.
    upstream : ndarray
        N x N adjoint of the projection output.

    Returns
    -------
    ndarray
        N x N gradient.
    """
    config = config or SinkhornConfig()
    matrix = _check_input(matrix)
    upstream = as_matrix(upstream, 'upstream gradient')
    if upstream.shape != matrix.shape:
        raise InvalidInputError('upstream gradient has shape {}, expected {}'.format(upstream.shape, matrix.shape))

    kernel, active = _kernel(matrix, config)
    states = _replay(kernel, config.iterations)

    grad = upstream
    for row_sums, rowed, col_sums, current in reversed(states):
        grad = (grad - np.sum(grad * current, axis=0, keepdims=True)) / col_sums
        grad = (grad - np.sum(grad * rowed, axis=1, keepdims=True)) / row_sums

    # the row-max shift cancels in the first row normalization
    return np.where(active, grad * kernel, 0.) / config.temperature
