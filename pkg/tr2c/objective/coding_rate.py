""" Coding rates of representations and their log-det machinery.

All log-determinants of the form ``log det(I + alpha * A A^T)`` are evaluated on the
smaller of the two Gram matrices ``A A^T`` (d x d) and ``A^T A`` (N x N), which share
the nonzero spectrum, through a Cholesky factorization.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import InvalidInputError, InvalidPartitionError, InternalError
from ..utils import as_matrix, as_labels

DEFAULT_EPSILON = 0.1


@dataclass(frozen=True)
class Partition:
    """ Hard assignment of N frames to K classes.

    Parameters
    ----------
    labels : ndarray
        int array of length N with values in [0, n_classes).
    n_classes : int
        number of classes K.
    """
    labels: np.ndarray
    n_classes: int

    @classmethod
    def from_labels(cls, labels, n_classes=None):
        """ Build a partition, inferring K as ``max(labels) + 1`` when not given. """
        labels = as_labels(labels)
        n_classes = int(labels.max()) + 1 if n_classes is None else int(n_classes)
        if np.any(labels >= n_classes):
            raise InvalidPartitionError('labels must be smaller than the class count {}'.format(n_classes))
        return cls(labels=labels, n_classes=n_classes)

    def sizes(self):
        """ tr(Pi_j) for every class j. """
        return np.bincount(self.labels, minlength=self.n_classes)


def check_epsilon(epsilon):
    """ Raise unless the coding precision is positive. """
    if not epsilon > 0:
        raise InvalidInputError('coding precision epsilon must be positive, got {}'.format(epsilon))


def cholesky_logdet(matrix):
    """ Log-determinant of a symmetric positive definite matrix via Cholesky.

    Returns
    -------
    tuple
        (logdet, lower Cholesky factor)
    """
    try:
        lower = scipy.linalg.cholesky(matrix, lower=True)
    except np.linalg.LinAlgError as error:
        raise InternalError('Cholesky factorization of I + PSD matrix failed') from error
    return 2 * np.sum(np.log(np.diag(lower))), lower


def logdet_identity_plus(a, alpha, method='auto'):
    """ Compute ``log det(I + alpha * A A^T)``.

    Parameters
    ----------
    a : ndarray
        d x N matrix.
    alpha : float
        nonnegative scale.
    method : str
        'primal' factors the d x d Gram ``A A^T``, 'dual' the N x N Gram ``A^T A``,
        'auto' the smaller of the two.

    Returns
    -------
    float
    """
    rows, cols = a.shape
    if method == 'auto':
        method = 'primal' if rows <= cols else 'dual'
    if method == 'primal':
        gram = a @ a.T
    elif method == 'dual':
        gram = a.T @ a
    else:
        raise InvalidInputError('Unknown log-det method {!r}'.format(method))
    gram = alpha * gram
    gram[np.diag_indices_from(gram)] += 1
    return cholesky_logdet(gram)[0]


def coding_rate(z, epsilon=DEFAULT_EPSILON, method='auto'):
    """ Coding rate ``1/2 log det(I + d / (N eps^2) Z Z^T)`` of representations.

    Parameters
    ----------
    z : ndarray
        d x N representations, one column per frame.
    epsilon : float
        coding precision.
    method : str
        Gram side used for the log-det, see :func:`logdet_identity_plus`.

    Returns
    -------
    float
        nonnegative rate.
    """
    z = as_matrix(z, 'representation')
    check_epsilon(epsilon)
    dim, n_frames = z.shape
    alpha = dim / (n_frames * epsilon ** 2)
    return 0.5 * logdet_identity_plus(z, alpha, method)


def coding_rate_with_grad(z, epsilon=DEFAULT_EPSILON):
    """ Coding rate and its gradient ``alpha (I + alpha Z Z^T)^{-1} Z``.

    The inverse is applied on the smaller Gram side (push-through identity
    ``(I + a Z Z^T)^{-1} Z = Z (I + a Z^T Z)^{-1}``).
    """
    dim, n_frames = z.shape
    alpha = dim / (n_frames * epsilon ** 2)
    if dim <= n_frames:
        gram = alpha * (z @ z.T)
        gram[np.diag_indices_from(gram)] += 1
        logdet, lower = cholesky_logdet(gram)
        grad = alpha * scipy.linalg.cho_solve((lower, True), z)
    else:
        gram = alpha * (z.T @ z)
        gram[np.diag_indices_from(gram)] += 1
        logdet, lower = cholesky_logdet(gram)
        grad = alpha * scipy.linalg.cho_solve((lower, True), z.T).T
    return 0.5 * logdet, grad


def class_coding_rate(z, partition, epsilon=DEFAULT_EPSILON):
    """ Sum of per-class coding rates weighted by class frequency.

    ``sum_j tr(Pi_j) / (2N) * log det(I + d / (tr(Pi_j) eps^2) Z Pi_j Z^T)``

    Parameters
    ----------
    z : ndarray
        d x N representations.
    partition : Partition or array-like
        class of every frame; a plain label array gets K = max + 1.
    epsilon : float
        coding precision.

    Returns
    -------
    float
    """
    z = as_matrix(z, 'representation')
    check_epsilon(epsilon)
    if not isinstance(partition, Partition):
        partition = Partition.from_labels(partition)
    dim, n_frames = z.shape
    if partition.labels.size != n_frames:
        raise InvalidPartitionError('partition has {} labels for {} frames'
                                    .format(partition.labels.size, n_frames))
    sizes = partition.sizes()
    if np.any(sizes == 0):
        raise InvalidPartitionError('classes {} are empty'.format(np.flatnonzero(sizes == 0).tolist()))

    total = 0.
    for j in range(partition.n_classes):
        members = z[:, partition.labels == j]
        alpha = dim / (sizes[j] * epsilon ** 2)
        total += sizes[j] / (2 * n_frames) * logdet_identity_plus(members, alpha)
    return total


def check_affinity(gamma, n_frames):
    """ Validate an N x N affinity and return it as float64. """
    gamma = as_matrix(gamma, 'affinity')
    if gamma.shape != (n_frames, n_frames):
        raise InvalidInputError('affinity must be {0} x {0}, got {1}'.format(n_frames, gamma.shape))
    return gamma


def _outer_columns(z):
    """ vec(z_i z_i^T) for every column, as a d^2 x N array. """
    dim, n_frames = z.shape
    return (z[:, None, :] * z[None, :, :]).reshape(dim * dim, n_frames)


def relaxed_factors(z, gamma, epsilon):
    """ Batched pieces of the relaxed class rate.

    ``M_j = I + d / eps^2 * Z Diag(Gamma_j) Z^T`` for every column j of Gamma are formed at
    once as ``(Z * Z) Gamma`` (a d^2 x N by N x N product) and factored as a stack.

    Returns
    -------
    tuple
        (outer, logdets, inverses) with `outer` the d^2 x N array of vec(z_i z_i^T),
        `logdets` the N log-determinants and `inverses` the N x d x d stack of M_j^{-1}.
    """
    dim, n_frames = z.shape
    beta = dim / epsilon ** 2
    outer = _outer_columns(z)
    stack = beta * (outer @ gamma).T.reshape(n_frames, dim, dim)
    stack += np.eye(dim)[None, :, :]
    try:
        lower = np.linalg.cholesky(stack)
    except np.linalg.LinAlgError as error:
        raise InternalError('Cholesky factorization of I + PSD matrix failed') from error
    logdets = 2 * np.sum(np.log(np.diagonal(lower, axis1=1, axis2=2)), axis=1)
    inverses = np.linalg.inv(stack)
    return outer, logdets, inverses


def relaxed_class_coding_rate(z, gamma, epsilon=DEFAULT_EPSILON):
    """ Coding rate of classes relaxed to a doubly stochastic affinity.

    ``1/N sum_j log det(I + d / eps^2 Z Diag(Gamma_j) Z^T)``, Gamma_j being the j-th column.

    Parameters
    ----------
    z : ndarray
        d x N representations.
    gamma : ndarray
        N x N doubly stochastic affinity.
    epsilon : float
        coding precision.

    Returns
    -------
    float
    """
    z = as_matrix(z, 'representation')
    check_epsilon(epsilon)
    gamma = check_affinity(gamma, z.shape[1])
    _, logdets, _ = relaxed_factors(z, gamma, epsilon)
    return np.sum(logdets) / z.shape[1]


def relaxed_class_coding_rate_with_grads(z, gamma, epsilon=DEFAULT_EPSILON):
    """ Relaxed class rate with its gradients w.r.t. Z and Gamma.

    Returns
    -------
    tuple
        (value, d value / dZ, d value / dGamma)
    """
    dim, n_frames = z.shape
    beta = dim / epsilon ** 2
    outer, logdets, inverses = relaxed_factors(z, gamma, epsilon)
    inverses_flat = inverses.reshape(n_frames, dim * dim).T

    # column i: sum_j Gamma_ij M_j^{-1}
    weighted = (inverses_flat @ gamma.T).reshape(dim, dim, n_frames)
    grad_z = 2 * beta / n_frames * np.einsum('abi,bi->ai', weighted, z)
    grad_gamma = beta / n_frames * (outer.T @ inverses_flat)
    return np.sum(logdets) / n_frames, grad_z, grad_gamma
