""" Sliding-window temporal graph and the Laplacian regularizer. """

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ..errors import InvalidInputError, InvalidConfigError
from ..utils import as_matrix

DEFAULT_WINDOW = 2


@dataclass(frozen=True)
class TemporalGraph:
    """ Window graph over N frames.

    Attributes
    ----------
    window_size : int
        even window size s; frames i, j are linked iff ``|i - j| <= s / 2``.
    affinity : scipy.sparse.csr_matrix
        N x N binary affinity W, self-loops included.
    laplacian : scipy.sparse.csr_matrix
        ``L = Diag(W 1) - W``.
    """
    window_size: int
    affinity: sparse.csr_matrix
    laplacian: sparse.csr_matrix

    @property
    def n_frames(self):
        """ Number of frames N. """
        return self.affinity.shape[0]


def temporal_laplacian(n_frames, window_size=DEFAULT_WINDOW):
    """ Build the banded window affinity and its Laplacian.

    Parameters
    ----------
    n_frames : int
        sequence length N >= 2.
    window_size : int
        positive even window size s.

    Returns
    -------
    TemporalGraph
    """
    if n_frames < 2:
        raise InvalidInputError('temporal graph needs at least 2 frames, got {}'.format(n_frames))
    if window_size < 2 or window_size % 2:
        raise InvalidConfigError('window size must be a positive even integer, got {}'.format(window_size))

    half = min(window_size // 2, n_frames - 1)
    offsets = np.arange(-half, half + 1)
    bands = [np.ones(n_frames - abs(k)) for k in offsets]
    affinity = sparse.diags(bands, offsets, shape=(n_frames, n_frames), format='csr')

    # self-loops do not change L: they enter both the degree and W
    laplacian = sparse.csr_matrix(csgraph.laplacian(affinity))
    return TemporalGraph(window_size=window_size, affinity=affinity, laplacian=laplacian)


def check_graph(z, graph):
    """ Raise unless the graph spans the columns of `z`. """
    if graph.n_frames != z.shape[1]:
        raise InvalidInputError('temporal graph has {} frames, representation has {}'
                                .format(graph.n_frames, z.shape[1]))


def temporal_regularizer(z, graph):
    """ ``tr(Z L Z^T) = 1/2 sum_ij w_ij ||z_i - z_j||^2``.

    Parameters
    ----------
    z : ndarray
        d x N representations.
    graph : TemporalGraph
        graph over the same N frames.

    Returns
    -------
    float
    """
    z = as_matrix(z, 'representation')
    check_graph(z, graph)
    return float(np.sum((graph.laplacian @ z.T) * z.T))


def temporal_regularizer_with_grad(z, graph):
    """ Regularizer value and its gradient ``2 Z L``. """
    zl = (graph.laplacian @ z.T).T
    return float(np.sum(zl * z)), 2 * zl
