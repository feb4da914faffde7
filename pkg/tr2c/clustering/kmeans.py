""" K-means with k-means++ seeding, restarts and a deterministic empty-cluster rule. """

import logging

import numpy as np
from numba import njit
from sklearn.cluster import kmeans_plusplus

from ..errors import InvalidInputError
from ..utils import as_matrix

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

N_INIT = 10
MAX_ITER = 100


@njit(nogil=True)
def assign_labels(points, centers):
    """ Nearest center of every point; ties go to the lowest center index.

    Parameters
    ----------
    points : ndarray(n, k)
        points, one per row.
    centers : ndarray(m, k)
        centers, one per row.

    Returns
    -------
    tuple
        (labels ndarray(n) of int64, squared distances ndarray(n))
    """
    n_points, n_centers = points.shape[0], centers.shape[0]
    labels = np.zeros(n_points, dtype=np.int64)
    distances = np.zeros(n_points)
    for i in range(n_points):
        best = np.inf
        for j in range(n_centers):
            dist = 0.
            for axis in range(points.shape[1]):
                diff = points[i, axis] - centers[j, axis]
                dist += diff * diff
            if dist < best:
                best = dist
                labels[i] = j
        distances[i] = best
    return labels, distances


def _update_centers(points, labels, distances, n_clusters):
    """ Cluster means; an empty cluster is reseeded at the point farthest from its center. """
    centers = np.zeros((n_clusters, points.shape[1]))
    distances = distances.copy()
    for j in range(n_clusters):
        members = labels == j
        if np.any(members):
            centers[j] = points[members].mean(axis=0)
        else:
            farthest = int(np.argmax(distances))
            logger.debug('Cluster %d is empty, reseeding at point %d', j, farthest)
            centers[j] = points[farthest]
            distances[farthest] = -1.
    return centers


def lloyd(points, centers, max_iter=MAX_ITER):
    """ Lloyd iterations from given centers until the assignment is a fixpoint or `max_iter`.

    Returns
    -------
    tuple
        (labels, inertia)
    """
    labels, distances = assign_labels(points, centers)
    for _ in range(max_iter):
        centers = _update_centers(points, labels, distances, centers.shape[0])
        new_labels, distances = assign_labels(points, centers)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, float(np.sum(distances))


def kmeans(points, n_clusters, seed=0, n_init=N_INIT, max_iter=MAX_ITER):
    """ Cluster rows of `points` into `n_clusters` groups.

    Every restart seeds centers with k-means++ and runs Lloyd iterations; the restart with the
    lowest inertia wins, ties going to the earlier restart. Restart seeds are derived from
    `seed`, so the result is deterministic.

    Parameters
    ----------
    points : ndarray
        N x k points, one per row.
    n_clusters : int
        number of clusters K <= N.
    seed : int
        seed of the restarts.
    n_init : int
        number of restarts.
    max_iter : int
        cap on Lloyd iterations per restart.

    Returns
    -------
    ndarray
        int64 labels in [0, K), one per point.
    """
    points = as_matrix(points, 'points')
    if n_clusters < 1 or n_clusters > points.shape[0]:
        raise InvalidInputError('cannot form {} clusters from {} points'.format(n_clusters, points.shape[0]))
    if n_clusters == 1:
        return np.zeros(points.shape[0], dtype=np.int64)

    best_labels, best_inertia = None, np.inf
    for restart_seed in np.random.SeedSequence(seed).generate_state(n_init):
        centers, _ = kmeans_plusplus(points, n_clusters, random_state=int(restart_seed))
        labels, inertia = lloyd(points, centers, max_iter)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels
