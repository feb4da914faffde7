""" Full-batch training of the reparameterized temporal rate reduction objective. """

import logging
import time
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..errors import InvalidConfigError, InvalidInputError, NumericalFailure
from ..models import (SinkhornConfig, init_params, forward, backward, sinkhorn_project, sinkhorn_backward,
                      DEFAULT_HIDDEN_DIM, DEFAULT_OUTPUT_DIM)
from ..objective import CodingConfig, loss_terms, temporal_laplacian
from ..objective.temporal import DEFAULT_WINDOW
from ..utils import validate_feature_matrix
from .optimizers import make_optimizer, OPTIMIZERS

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

DEFAULT_ITERATIONS = 500
DEFAULT_LEARNING_RATE = 5e-3
TRACE_COLUMNS = ('iter', 'loss', 'rho', 'rho_c', 'reg', 'grad_norm', 'ms')


@dataclass(frozen=True)
class TrainConfig:  # pylint: disable=too-many-instance-attributes
    """ Everything a training run depends on.

    Parameters
    ----------
    iterations : int
        number of updates T.
    learning_rate : float
        step size eta.
    optimizer : str
        'plain-gd' or 'adam'.
    adam_betas : tuple of float
        Adam moment decays.
    adam_eps : float
        Adam denominator guard.
    seed : int
        seed of parameter initialization.
    coding : CodingConfig
        loss weights, precision and gates.
    sinkhorn : SinkhornConfig
        projection budget and temperature.
    window_size : int
        temporal window s.
    n_clusters : int or None
        number of segments K used by the clustering step.
    hidden_dim : int
        encoder width d_pre.
    output_dim : int
        head output dimension d.
    """
    iterations: int = DEFAULT_ITERATIONS
    learning_rate: float = DEFAULT_LEARNING_RATE
    optimizer: str = 'plain-gd'
    adam_betas: tuple = (0.9, 0.999)
    adam_eps: float = 1e-8
    seed: int = 0
    coding: CodingConfig = field(default_factory=CodingConfig)
    sinkhorn: SinkhornConfig = field(default_factory=SinkhornConfig)
    window_size: int = DEFAULT_WINDOW
    n_clusters: int = None
    hidden_dim: int = DEFAULT_HIDDEN_DIM
    output_dim: int = DEFAULT_OUTPUT_DIM

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise InvalidConfigError('iterations must be a positive integer, got {}'.format(self.iterations))
        if not self.learning_rate > 0:
            raise InvalidConfigError('learning rate must be positive, got {}'.format(self.learning_rate))
        if self.optimizer not in OPTIMIZERS:
            raise InvalidConfigError('Unknown optimizer {!r}, expected one of {}'.format(self.optimizer, OPTIMIZERS))
        if self.n_clusters is not None and self.n_clusters < 2:
            raise InvalidConfigError('cluster count must be at least 2, got {}'.format(self.n_clusters))
        if self.window_size < 2 or self.window_size % 2:
            raise InvalidConfigError('window size must be a positive even integer, got {}'.format(self.window_size))
        if min(self.hidden_dim, self.output_dim) < 1:
            raise InvalidConfigError('network dims must be positive')


class RunTrace:
    """ Per-iteration telemetry of a run.

    Every record holds the loss, the raw values of the three terms, the gradient norm and the
    wall-clock duration of the iteration in milliseconds.
    """
    def __init__(self, lambda1=None):
        self.lambda1 = lambda1
        self.records = []

    def __len__(self):
        return len(self.records)

    def append(self, loss, rho, rho_c, reg, grad_norm, ms):
        """ Add the record of the next iteration. """
        self.records.append((len(self.records), loss, rho, rho_c, reg, grad_norm, ms))

    def to_frame(self):
        """ Trace as a DataFrame with an extra ``gap = rho - lambda1 * rho_c`` column. """
        frame = pd.DataFrame(self.records, columns=TRACE_COLUMNS)
        if self.lambda1 is not None:
            frame['gap'] = frame['rho'] - self.lambda1 * frame['rho_c']
        return frame

    def to_csv(self, path):
        """ Write the trace with header ``iter,loss,rho,rho_c,reg,grad_norm,ms``. """
        self.to_frame().loc[:, list(TRACE_COLUMNS)].to_csv(path, index=False, float_format='%.17g')

    @classmethod
    def from_csv(cls, path):
        """ Read a trace written by :meth:`to_csv`. """
        frame = pd.read_csv(path, float_precision='round_trip')
        trace = cls()
        trace.records = [tuple(row) for row in frame.loc[:, list(TRACE_COLUMNS)].itertuples(index=False)]
        return trace


TrainResult = namedtuple('TrainResult', ['params', 'affinity', 'trace'])


def compute_affinity(params, features, sinkhorn_config):
    """ Forward pass and ``Gamma = P(Y~^T Y~)``.

    Returns
    -------
    tuple
        (ForwardCache, cosine similarity matrix, Affinity)
    """
    cache = forward(params, features)
    similarity = cache.y_tilde.T @ cache.y_tilde
    return cache, similarity, sinkhorn_project(similarity, sinkhorn_config)


def evaluate_step(params, features, graph, config, with_grads=True):
    """ Loss of the current parameters and, optionally, its gradient w.r.t. them.

    Parameters
    ----------
    params : NetworkParams
        current parameters.
    features : ndarray
        D x N feature matrix.
    graph : TemporalGraph
        temporal graph over the N frames.
    config : TrainConfig
        run configuration.
    with_grads : bool
        whether to run the backward pass.

    Returns
    -------
    tuple
        (LossTerms, NetworkParams gradients or None, Affinity)
    """
    cache, similarity, affinity = compute_affinity(params, features, config.sinkhorn)
    terms = loss_terms(cache.z_tilde, affinity.gamma, graph, config.coding, with_grads=with_grads, all_terms=True)
    if not with_grads:
        return terms, None, affinity

    if config.coding.enable_rho_c:
        grad_similarity = sinkhorn_backward(similarity, config.sinkhorn, terms.grad_gamma)
        grad_y_tilde = cache.y_tilde @ (grad_similarity + grad_similarity.T)
    else:
        grad_y_tilde = np.zeros_like(cache.y_tilde)
    grads = backward(params, cache, terms.grad_z, grad_y_tilde)
    return terms, grads, affinity


def _check_terms(terms, iteration):
    for name in ('loss', 'rho', 'rho_c', 'reg'):
        value = getattr(terms, name)
        if value is not None and not np.isfinite(value):
            raise NumericalFailure('non-finite {} at iteration {}'.format(name, iteration),
                                   iteration=iteration, term=name)


def train(features, config, progress=False):
    """ Train the network on one sequence and return the learned affinity.

    Each iteration runs the forward pass, projects the cluster-head similarity, evaluates the
    loss, backpropagates through the projection and the network, and updates the parameters.

    Parameters
    ----------
    features : ndarray
        D x N feature matrix, one column per frame.
    config : TrainConfig
        run configuration.
    progress : bool
        show a progress bar.

    Returns
    -------
    TrainResult
        (final params, affinity of the final params, trace of length T)

    Raises
    ------
    NumericalFailure
        when the loss, one of its terms or an activation becomes non-finite.
    """
    features = validate_feature_matrix(features)
    n_frames = features.shape[1]
    if config.n_clusters is not None and n_frames < config.n_clusters:
        raise InvalidInputError('{} frames cannot form {} clusters'.format(n_frames, config.n_clusters))

    logger.info('Training on %d frames of dim %d: %d iterations, %s, lr=%g, gates=%s',
                n_frames, features.shape[0], config.iterations, config.optimizer,
                config.learning_rate, config.coding.gates)

    graph = temporal_laplacian(n_frames, config.window_size)
    params = init_params(features.shape[0], config.hidden_dim, config.output_dim, config.seed)
    optimizer = make_optimizer(config.optimizer, config.learning_rate, config.adam_betas, config.adam_eps)
    trace = RunTrace(lambda1=config.coding.lambda1)

    iterations = tqdm(range(config.iterations)) if progress else range(config.iterations)
    for iteration in iterations:
        start = time.perf_counter()
        try:
            terms, grads, _ = evaluate_step(params, features, graph, config)
        except NumericalFailure as error:
            error.iteration = iteration
            raise
        _check_terms(terms, iteration)

        grad_norm = float(np.linalg.norm(grads.flatten()))
        if not np.isfinite(grad_norm):
            raise NumericalFailure('non-finite gradient at iteration {}'.format(iteration),
                                   iteration=iteration, term='gradient')
        params = optimizer.step(params, grads)

        trace.append(terms.loss, terms.rho, terms.rho_c, terms.reg, grad_norm,
                     1000 * (time.perf_counter() - start))
        logger.debug('iter %d: loss=%.6g rho=%.6g rho_c=%.6g reg=%.6g |grad|=%.3g',
                     iteration, terms.loss, terms.rho, terms.rho_c, terms.reg, grad_norm)

    _, _, affinity = compute_affinity(params, features, config.sinkhorn)
    logger.info('Finished: loss %.6g -> %.6g, sinkhorn row deviation %.2e',
                trace.records[0][1], trace.records[-1][1], affinity.row_tol)
    return TrainResult(params, affinity, trace)
