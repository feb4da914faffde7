# pylint: disable=wildcard-import
"""Temporal rate reduction clustering of frame sequences."""

__version__ = '0.1.0'

from .objective import *
from .models import *
from .training import *
from .clustering import *
from .data import *
from .pipelines import *
