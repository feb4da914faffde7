""" Additive isotropic Gaussian corruption of features. """

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConfigError
from ..utils import as_matrix


@dataclass(frozen=True)
class NoiseSpec:
    """ Noise level `sigma` and generator `seed`. """
    sigma: float = 0.
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise InvalidConfigError('noise sigma must be nonnegative, got {}'.format(self.sigma))


def corrupt(features, spec):
    """ ``X + G`` with G entries i.i.d. N(0, sigma^2); `features` returned unchanged for sigma = 0. """
    features = as_matrix(features, 'feature matrix')
    if spec.sigma == 0:
        return features
    rng = np.random.default_rng(spec.seed)
    return features + spec.sigma * rng.standard_normal(features.shape)
