""" PCA projection of features or representations for external plotting. """

import os

import numpy as np
import pandas as pd
import scipy.linalg

from ..errors import InvalidInputError
from ..utils import as_matrix, as_labels


def pca_project(data, n_components=3):
    """ Project columns of `data` on its top principal directions.

    Parameters
    ----------
    data : ndarray
        D x N matrix, one sample per column.
    n_components : int
        number of components k <= min(D, N).

    Returns
    -------
    tuple
        (k x N projections, k explained-variance fractions)

    Notes
    -----
    Each principal direction is signed so that its largest-magnitude entry is positive.
    """
    data = as_matrix(data, 'data')
    if n_components < 1 or n_components > min(data.shape):
        raise InvalidInputError('cannot take {} components of a {}x{} matrix'
                                .format(n_components, data.shape[0], data.shape[1]))
    centered = data - data.mean(axis=1, keepdims=True)
    left, singular, _ = scipy.linalg.svd(centered, full_matrices=False)
    directions = left[:, :n_components]
    pivots = np.argmax(np.abs(directions), axis=0)
    directions = directions * np.sign(directions[pivots, np.arange(n_components)])

    variances = singular ** 2
    total = variances.sum()
    ratios = variances[:n_components] / total if total > 0 else np.zeros(n_components)
    return directions.T @ centered, ratios


def pca_frame(data, labels=None, n_components=3):
    """ DataFrame with columns ``pc1..pck`` and, when labels are given, ``label``. """
    projections, _ = pca_project(data, n_components)
    frame = pd.DataFrame(projections.T, columns=['pc{}'.format(i + 1) for i in range(n_components)])
    if labels is not None:
        labels = as_labels(labels)
        if len(labels) != frame.shape[0]:
            raise InvalidInputError('{} labels for {} samples'.format(len(labels), frame.shape[0]))
        frame['label'] = labels
    return frame


def export_pca(data, path, labels=None, n_components=3):
    """ Write the PCA projection of `data` as CSV with header ``pc1,...,label``. """
    frame = pca_frame(data, labels, n_components)
    if os.path.dirname(str(path)):
        os.makedirs(os.path.dirname(str(path)), exist_ok=True)
    frame.to_csv(path, index=False, float_format='%.17g')
    return frame
