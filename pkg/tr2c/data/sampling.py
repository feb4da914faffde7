""" Temporal down-sampling of long sequences and label up-sampling back to full rate. """

import numpy as np

from ..errors import InvalidInputError
from ..utils import as_matrix, as_labels


def check_factor(factor):
    """ `factor` as an int, rejecting anything but a positive integer. """
    if int(factor) != factor or factor < 1:
        raise InvalidInputError('sampling factor must be a positive integer, got {}'.format(factor))
    return int(factor)


def downsample(features, factor):
    """ Keep every `factor`-th frame (column), starting with the first one. """
    features = as_matrix(features, 'feature matrix')
    return features[:, ::check_factor(factor)]


def upsample_labels(labels, factor, n_frames):
    """ Labels of the full sequence: frame i takes the label of kept frame ``i // factor``. """
    factor = check_factor(factor)
    labels = as_labels(labels)
    if len(labels) != -(-n_frames // factor):
        raise InvalidInputError('{} labels cannot come from {} frames sampled every {}'
                                .format(len(labels), n_frames, factor))
    return np.repeat(labels, factor)[:n_frames]
