""" Parameter update rules: plain gradient descent and Adam. """

import numpy as np

from ..errors import InvalidConfigError

OPTIMIZERS = ('plain-gd', 'adam')


class GradientDescent:
    """ ``theta <- theta - lr * grad``. """
    def __init__(self, learning_rate):
        self.learning_rate = learning_rate

    def step(self, params, grads):
        """ Return updated parameters; inputs are left untouched. """
        return params.unflatten(params.flatten() - self.learning_rate * grads.flatten())


class Adam:
    """ Adam with bias-corrected moment estimates.

    Parameters
    ----------
    learning_rate : float
        step size.
    betas : tuple of float
        decay rates of the first and second moments.
    eps : float
        denominator guard.
    """
    def __init__(self, learning_rate, betas=(0.9, 0.999), eps=1e-8):
        self.learning_rate = learning_rate
        self.betas = betas
        self.eps = eps
        self.n_steps = 0
        self._first = None
        self._second = None

    def step(self, params, grads):
        """ Return updated parameters and advance the moment estimates. """
        grad = grads.flatten()
        if self._first is None:
            self._first = np.zeros_like(grad)
            self._second = np.zeros_like(grad)
        beta1, beta2 = self.betas
        self.n_steps += 1
        self._first = beta1 * self._first + (1 - beta1) * grad
        self._second = beta2 * self._second + (1 - beta2) * grad ** 2
        first = self._first / (1 - beta1 ** self.n_steps)
        second = self._second / (1 - beta2 ** self.n_steps)
        return params.unflatten(params.flatten() - self.learning_rate * first / (np.sqrt(second) + self.eps))


def make_optimizer(name, learning_rate, betas=(0.9, 0.999), eps=1e-8):
    """ Optimizer by name, one of :data:`OPTIMIZERS`. """
    if name == 'plain-gd':
        return GradientDescent(learning_rate)
    if name == 'adam':
        return Adam(learning_rate, betas, eps)
    raise InvalidConfigError('Unknown optimizer {!r}, expected one of {}'.format(name, OPTIMIZERS))
