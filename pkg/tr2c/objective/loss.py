""" Full temporal rate reduction loss and its analytic adjoints.

``L = -[rho] L_rho + lambda1 [rho_c] L_rho_c + lambda2 [temporal] L_r``

where bracketed flags are the ablation gates of :class:`CodingConfig`.
"""

from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from ..errors import InvalidConfigError
from ..utils import as_matrix
from .coding_rate import (DEFAULT_EPSILON, coding_rate_with_grad, relaxed_class_coding_rate_with_grads,
                          relaxed_factors, check_affinity, check_epsilon)
from .temporal import temporal_regularizer_with_grad, check_graph

DEFAULT_LAMBDA1 = 0.1
DEFAULT_LAMBDA2 = 12.


@dataclass(frozen=True)
class CodingConfig:
    """ Weights, precision and ablation gates of the loss.

    Parameters
    ----------
    epsilon : float
        coding precision, positive.
    lambda1 : float
        weight of the relaxed class rate.
    lambda2 : float
        weight of the temporal regularizer.
    enable_rho, enable_rho_c, enable_temporal : bool
        ablation gates of the three terms.
    """
    epsilon: float = DEFAULT_EPSILON
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2
    enable_rho: bool = True
    enable_rho_c: bool = True
    enable_temporal: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidConfigError('epsilon must be positive, got {}'.format(self.epsilon))
        if not (self.lambda1 >= 0 and self.lambda2 >= 0):
            raise InvalidConfigError('lambda1 and lambda2 must be nonnegative, got {}, {}'
                                     .format(self.lambda1, self.lambda2))

    @property
    def gates(self):
        """ (enable_rho, enable_rho_c, enable_temporal) as a tuple. """
        return self.enable_rho, self.enable_rho_c, self.enable_temporal

    def with_gates(self, gates):
        """ Copy of the config with the three gates replaced. """
        params = asdict(self)
        params.update(zip(('enable_rho', 'enable_rho_c', 'enable_temporal'), (bool(g) for g in gates)))
        return CodingConfig(**params)


@dataclass
class LossTerms:
    """ Values of a loss evaluation.

    Attributes
    ----------
    loss : float
        gated and weighted total.
    rho, rho_c, reg : float or None
        raw (ungated, unweighted) term values; None when a term was not evaluated.
    grad_z : ndarray or None
        d x N adjoint of the total w.r.t. Z.
    grad_gamma : ndarray or None
        N x N adjoint of the total w.r.t. Gamma.
    """
    loss: float
    rho: Optional[float] = None
    rho_c: Optional[float] = None
    reg: Optional[float] = None
    grad_z: Optional[np.ndarray] = None
    grad_gamma: Optional[np.ndarray] = None


def loss_terms(z, gamma, graph, config, with_grads=True, all_terms=False):
    """ Evaluate the loss, optionally with adjoints, sharing factorizations between them.

    Parameters
    ----------
    z : ndarray
        d x N representations.
    gamma : ndarray
        N x N doubly stochastic affinity.
    graph : TemporalGraph
        temporal graph over the N frames.
    config : CodingConfig
        weights and gates.
    with_grads : bool
        whether to compute adjoints.
    all_terms : bool
        evaluate gated-off terms as well, for telemetry (they still do not enter
        the loss nor the adjoints).

    Returns
    -------
    LossTerms
    """
    z = as_matrix(z, 'representation')
    check_epsilon(config.epsilon)
    gamma = check_affinity(gamma, z.shape[1])
    check_graph(z, graph)

    terms = LossTerms(loss=0.)
    if with_grads:
        terms.grad_z = np.zeros_like(z)
        terms.grad_gamma = np.zeros_like(gamma)

    if config.enable_rho or all_terms:
        terms.rho, grad = coding_rate_with_grad(z, config.epsilon)
        if config.enable_rho:
            terms.loss -= terms.rho
            if with_grads:
                terms.grad_z -= grad

    if config.enable_rho_c or all_terms:
        if config.enable_rho_c and with_grads:
            terms.rho_c, grad_z, grad_gamma = relaxed_class_coding_rate_with_grads(z, gamma, config.epsilon)
            terms.grad_z += config.lambda1 * grad_z
            terms.grad_gamma += config.lambda1 * grad_gamma
        else:
            _, logdets, _ = relaxed_factors(z, gamma, config.epsilon)
            terms.rho_c = np.sum(logdets) / z.shape[1]
        if config.enable_rho_c:
            terms.loss += config.lambda1 * terms.rho_c

    if config.enable_temporal or all_terms:
        terms.reg, grad = temporal_regularizer_with_grad(z, graph)
        if config.enable_temporal:
            terms.loss += config.lambda2 * terms.reg
            if with_grads:
                terms.grad_z += config.lambda2 * grad

    return terms


def total_loss(z, gamma, graph, config):
    """ Gated and weighted loss value.

    Parameters
    ----------
    z : ndarray
        d x N representations.
    gamma : ndarray
        N x N affinity.
    graph : TemporalGraph
        temporal graph.
    config : CodingConfig
        weights and gates.

    Returns
    -------
    float
    """
    return loss_terms(z, gamma, graph, config, with_grads=False).loss


def loss_adjoints(z, gamma, graph, config):
    """ Exact gradients of :func:`total_loss` w.r.t. Z and Gamma.

    Returns
    -------
    tuple
        (d x N gradient, N x N gradient)
    """
    terms = loss_terms(z, gamma, graph, config, with_grads=True)
    return terms.grad_z, terms.grad_gamma
