""" Synthetic temporal sequences drawn from a union of orthogonal subspaces. """

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import InvalidConfigError

DEFAULT_CLUSTERS = 3
DEFAULT_DIM = 30
DEFAULT_SUBSPACE_DIM = 3
DEFAULT_SEGMENTS = (100, 100, 100)
DEFAULT_SIGMA = 0.05


@dataclass(frozen=True)
class SyntheticSpec:
    """ Layout of a synthetic sequence.

    Parameters
    ----------
    n_clusters : int
        number of subspaces K.
    dim : int
        ambient dimension D.
    subspace_dim : int
        dimension r of every subspace; ``r * K <= D``.
    segment_lengths : tuple of int
        lengths of the contiguous segments, in temporal order.
    sigma : float
        std of the isotropic ambient noise.
    seed : int
        generator seed.
    segment_labels : tuple of int or None
        subspace of every segment; segment i uses subspace ``i % K`` when None.
    """
    n_clusters: int = DEFAULT_CLUSTERS
    dim: int = DEFAULT_DIM
    subspace_dim: int = DEFAULT_SUBSPACE_DIM
    segment_lengths: tuple = DEFAULT_SEGMENTS
    sigma: float = DEFAULT_SIGMA
    seed: int = 0
    segment_labels: tuple = None

    def __post_init__(self):
        if min(self.n_clusters, self.dim, self.subspace_dim) < 1:
            raise InvalidConfigError('cluster count, dim and subspace dim must be positive')
        if self.subspace_dim * self.n_clusters > self.dim:
            raise InvalidConfigError('{} orthogonal subspaces of dim {} do not fit into dim {}'
                                     .format(self.n_clusters, self.subspace_dim, self.dim))
        if len(self.segment_lengths) == 0 or min(self.segment_lengths) < 1:
            raise InvalidConfigError('segment lengths must be positive, got {}'.format(self.segment_lengths))
        if not self.sigma >= 0:
            raise InvalidConfigError('noise sigma must be nonnegative, got {}'.format(self.sigma))
        labels = self.labels_of_segments()
        if len(labels) != len(self.segment_lengths) or min(labels) < 0 or max(labels) >= self.n_clusters:
            raise InvalidConfigError('segment labels {} do not match {} segments and {} clusters'
                                     .format(labels, len(self.segment_lengths), self.n_clusters))

    @property
    def n_frames(self):
        """ Total sequence length. """
        return int(sum(self.segment_lengths))

    def labels_of_segments(self):
        """ Subspace index of every segment. """
        if self.segment_labels is None:
            return tuple(i % self.n_clusters for i in range(len(self.segment_lengths)))
        return tuple(self.segment_labels)


def orthogonal_bases(n_clusters, dim, subspace_dim, rng):
    """ K mutually orthogonal D x r orthonormal bases from the QR of a Gaussian matrix. """
    gaussian = rng.standard_normal((dim, n_clusters * subspace_dim))
    q, _ = scipy.linalg.qr(gaussian, mode='economic')
    return [q[:, k * subspace_dim:(k + 1) * subspace_dim] for k in range(n_clusters)]


def generate_synthetic(spec=None):
    """ Generate features and ground-truth labels of a synthetic sequence.

    Every frame of a segment is a random unit-norm combination of its subspace basis plus
    N(0, sigma^2 I) noise. Segments follow each other in time.

    Parameters
    ----------
    spec : SyntheticSpec or None
        layout; the default desk layout when None.

    Returns
    -------
    tuple
        (D x N features, N int64 labels)
    """
    spec = spec or SyntheticSpec()
    rng = np.random.default_rng(spec.seed)
    bases = orthogonal_bases(spec.n_clusters, spec.dim, spec.subspace_dim, rng)

    columns, labels = [], []
    for length, label in zip(spec.segment_lengths, spec.labels_of_segments()):
        coeffs = rng.standard_normal((spec.subspace_dim, length))
        coeffs /= np.linalg.norm(coeffs, axis=0)
        columns.append(bases[label] @ coeffs)
        labels.append(np.full(length, label, dtype=np.int64))

    features = np.concatenate(columns, axis=1)
    if spec.sigma > 0:
        features = features + spec.sigma * rng.standard_normal(features.shape)
    return features, np.concatenate(labels)
