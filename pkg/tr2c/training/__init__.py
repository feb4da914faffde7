""" Training loop, update rules and the gradient oracle. """

from .trainer import TrainConfig, RunTrace, TrainResult, train, evaluate_step, compute_affinity, TRACE_COLUMNS
from .optimizers import GradientDescent, Adam, make_optimizer, OPTIMIZERS
from .gradcheck import finite_diff_check, finite_difference
