""" Array validation helpers shared by all subpackages. """

import numpy as np

from .errors import InvalidInputError


def as_matrix(data, name='matrix'):
    """ Convert input to a finite 2d float64 array.

    Parameters
    ----------
    data : array-like
        input data.
    name : str
        name used in error messages.

    Returns
    -------
    ndarray
        2d float64 array (a copy only when conversion is needed).

    Raises
    ------
    InvalidInputError
        if input is not 2d or has NaN/Inf entries.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise InvalidInputError('{} must be 2d, got shape {}'.format(name, data.shape))
    if not np.all(np.isfinite(data)):
        raise InvalidInputError('{} has non-finite entries'.format(name))
    return data


def as_labels(labels, name='labels'):
    """ Convert input to a 1d int64 array of nonnegative labels. """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size == 0:
        raise InvalidInputError('{} must be a nonempty 1d sequence, got shape {}'.format(name, labels.shape))
    if labels.dtype.kind == 'f':
        if not np.all(np.isfinite(labels)) or np.any(labels != np.round(labels)):
            raise InvalidInputError('{} must be integers'.format(name))
    labels = labels.astype(np.int64)
    if np.any(labels < 0):
        raise InvalidInputError('{} must be nonnegative'.format(name))
    return labels


def validate_feature_matrix(features):
    """ Check invariants of a feature matrix X (D x N): finite, D >= 1, N >= 2. """
    features = as_matrix(features, 'feature matrix')
    if features.shape[0] < 1 or features.shape[1] < 2:
        raise InvalidInputError('feature matrix must have D >= 1 rows and N >= 2 columns, got {}'
                                .format(features.shape))
    return features


def normalize_columns(data, floor=1e-8):
    """ Scale every column to unit Euclidean norm.

    Columns with norm below `floor` are shifted by `floor` along the first axis
    before normalization.

    Returns
    -------
    tuple
        (normalized, norms, shifted) where `norms` are the norms actually divided by and
        `shifted` is a boolean mask of guarded columns.
    """
    norms = np.linalg.norm(data, axis=0)
    shifted = norms < floor
    if np.any(shifted):
        data = data.copy()
        data[0, shifted] += floor
        norms = np.linalg.norm(data, axis=0)
    return data / norms, norms, shifted
