""" Normalized-cut spectral clustering of a learned affinity. """

import logging

import numpy as np
import scipy.linalg
from sklearn.preprocessing import normalize

from ..errors import InvalidInputError, InternalError
from ..models import sinkhorn_project
from ..utils import as_matrix, normalize_columns
from .kmeans import kmeans, N_INIT, MAX_ITER

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name


def symmetrize(gamma):
    """ ``(Gamma + Gamma^T) / 2``. """
    return (gamma + gamma.T) / 2


def spectral_embedding(gamma, n_clusters):
    """ Row-normalized eigenvectors of the K smallest eigenvalues of the normalized Laplacian.

    Parameters
    ----------
    gamma : ndarray
        N x N nonnegative affinity; symmetrized before use.
    n_clusters : int
        number of eigenvectors K.

    Returns
    -------
    ndarray
        N x K embedding with unit rows.
    """
    affinity = symmetrize(gamma)
    degrees = affinity.sum(axis=1)
    if np.any(degrees <= 0):
        raise InternalError('affinity has zero-degree rows {}'.format(np.flatnonzero(degrees <= 0).tolist()))
    scale = 1 / np.sqrt(degrees)
    laplacian = np.eye(len(degrees)) - scale[:, None] * affinity * scale[None, :]
    laplacian = symmetrize(laplacian)

    last = min(n_clusters, len(degrees) - 1)
    values, vectors = scipy.linalg.eigh(laplacian, subset_by_index=[0, last])
    if last >= n_clusters:
        logger.debug('Eigen-gap after %d eigenvalues: %.3e', n_clusters, values[n_clusters] - values[n_clusters - 1])
    return normalize(vectors[:, :n_clusters])


def spectral_cluster(gamma, n_clusters, seed=0, n_init=N_INIT, max_iter=MAX_ITER):
    """ Segment frames by spectral clustering of their affinity.

    Parameters
    ----------
    gamma : ndarray or Affinity
        N x N affinity.
    n_clusters : int
        number of segments K <= N.
    seed : int
        seed of the k-means restarts.
    n_init : int
        k-means restarts.
    max_iter : int
        cap on Lloyd iterations.

    Returns
    -------
    ndarray
        int64 labels in [0, K), one per frame.
    """
    gamma = as_matrix(getattr(gamma, 'gamma', gamma), 'affinity')
    n_frames = gamma.shape[0]
    if gamma.shape != (n_frames, n_frames):
        raise InvalidInputError('affinity must be square, got {}'.format(gamma.shape))
    if n_clusters < 1 or n_clusters > n_frames:
        raise InvalidInputError('cannot form {} clusters from {} frames'.format(n_clusters, n_frames))
    if n_clusters == 1:
        return np.zeros(n_frames, dtype=np.int64)
    embedding = spectral_embedding(gamma, n_clusters)
    return kmeans(embedding, n_clusters, seed=seed, n_init=n_init, max_iter=max_iter)


def cosine_affinity(features, sinkhorn_config=None):
    """ Doubly stochastic affinity of raw features: projection of their cosine similarities.

    Used as the raw-feature baseline against which learned affinities are compared.
    """
    features = as_matrix(features, 'feature matrix')
    unit, _, _ = normalize_columns(features)
    return sinkhorn_project(unit.T @ unit, sinkhorn_config)
