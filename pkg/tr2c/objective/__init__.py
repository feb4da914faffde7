""" Temporal rate reduction objective: coding rates, temporal regularizer and the full loss. """

from .coding_rate import (Partition, coding_rate, class_coding_rate, relaxed_class_coding_rate,
                          logdet_identity_plus, DEFAULT_EPSILON)
from .temporal import TemporalGraph, temporal_laplacian, temporal_regularizer
from .loss import CodingConfig, LossTerms, loss_terms, total_loss, loss_adjoints
