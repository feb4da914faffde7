""" Shared fixtures and the ``--runslow`` switch for end-to-end acceptance runs. """

import numpy as np
import pytest

from tr2c.models import sinkhorn_project, SinkhornConfig
from tr2c.training import TrainConfig


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow end-to-end tests')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: end-to-end runs taking minutes')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def unit_columns(rng, dim, n_frames):
    """ Random d x N matrix with unit columns. """
    z = rng.standard_normal((dim, n_frames))
    return z / np.linalg.norm(z, axis=0)


def doubly_stochastic(rng, n_frames):
    """ Random strictly positive doubly stochastic matrix. """
    return sinkhorn_project(rng.standard_normal((n_frames, n_frames)), SinkhornConfig(iterations=200)).gamma


@pytest.fixture
def small_config():
    """ Tiny network and a short run. """
    return TrainConfig(iterations=3, hidden_dim=5, output_dim=3, seed=7)
