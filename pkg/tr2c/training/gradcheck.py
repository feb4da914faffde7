""" Central finite-difference check of the full-pipeline parameter gradient. """

import logging

import numpy as np

from ..models import init_params
from ..objective import temporal_laplacian
from ..utils import validate_feature_matrix
from .trainer import evaluate_step

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

FD_STEP = 1e-5


def finite_difference(func, x0, indices, step=FD_STEP):
    """ Central differences of a scalar function along selected coordinates.

    Parameters
    ----------
    func : callable
        maps a flat vector to a float.
    x0 : ndarray
        point of evaluation.
    indices : sequence of int
        coordinates to differentiate along.
    step : float
        finite-difference step.

    Returns
    -------
    ndarray
        derivative estimates, one per index.
    """
    grad = np.zeros(len(indices))
    for pos, j in enumerate(indices):
        x = np.copy(x0)
        x[j] = x0[j] + step
        fplus = func(x)
        x[j] = x0[j] - step
        fminus = func(x)
        grad[pos] = (fplus - fminus) / (2 * step)
    return grad


def relative_errors(analytic, numeric, scale):
    """ ``|a - n| / max(|a| + |n|, scale)`` elementwise. """
    return np.abs(analytic - numeric) / np.maximum(np.abs(analytic) + np.abs(numeric), scale)


def finite_diff_check(features, config, n_params_sampled=20, step=FD_STEP, params=None):
    """ Compare the analytic parameter gradient with central finite differences.

    Parameters
    ----------
    features : ndarray
        small D x N feature matrix.
    config : TrainConfig
        run configuration (network dims, loss weights and gates, projection).
    n_params_sampled : int
        number of parameters, sampled without replacement, to check.
    step : float
        finite-difference step.
    params : NetworkParams or None
        point of evaluation; freshly initialized from ``config.seed`` when None.

    Returns
    -------
    float
        max relative error over the sampled parameters; entries whose gradient is at the
        level of the loss round-off (``1e-5 * max(1, |loss|)``) are measured against that level.
        0 when every gate is off.
    """
    features = validate_feature_matrix(features)
    graph = temporal_laplacian(features.shape[1], config.window_size)
    if params is None:
        params = init_params(features.shape[0], config.hidden_dim, config.output_dim, config.seed)
    if not any(config.coding.gates):
        return 0.

    terms, grads, _ = evaluate_step(params, features, graph, config)
    analytic = grads.flatten()
    x0 = params.flatten()

    rng = np.random.default_rng(config.seed)
    indices = np.sort(rng.choice(x0.size, size=min(n_params_sampled, x0.size), replace=False))

    def _loss(x):
        return evaluate_step(params.unflatten(x), features, graph, config, with_grads=False)[0].loss

    numeric = finite_difference(_loss, x0, indices, step)
    errors = relative_errors(analytic[indices], numeric, 1e-5 * max(1., abs(terms.loss)))
    logger.debug('Gradient check over %d parameters: max relative error %.3e', len(indices), errors.max())
    return float(errors.max())
