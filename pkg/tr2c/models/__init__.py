""" Reparameterization network and the differentiable Sinkhorn projection. """

from .network import (NetworkParams, ForwardCache, init_params, count_params, forward, backward,
                      DEFAULT_HIDDEN_DIM, DEFAULT_OUTPUT_DIM)
from .sinkhorn import SinkhornConfig, Affinity, sinkhorn_project, sinkhorn_backward
from .checkpoint import save_checkpoint, load_checkpoint
