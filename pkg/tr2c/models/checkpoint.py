""" Binary checkpoint of network parameters.

Layout (little-endian): magic ``b'TR2C'``, version as u16, dims (D, d_pre, d) as three u32,
then every tensor of :class:`NetworkParams` in field order, row-major float64.
"""

import os

import numpy as np

from ..errors import IngestionError
from .network import NetworkParams

MAGIC = b'TR2C'
VERSION = 1
_HEADER = np.dtype([('magic', 'S4'), ('version', '<u2'), ('dims', '<u4', (3,))])


def _shapes(feature_dim, hidden_dim, output_dim):
    return [(feature_dim, hidden_dim), (hidden_dim,), (hidden_dim, hidden_dim), (hidden_dim,),
            (hidden_dim, output_dim), (output_dim,), (hidden_dim, output_dim), (output_dim,)]


def save_checkpoint(params, path):
    """ Write parameters to `path`.

    Parameters
    ----------
    params : NetworkParams
        parameters to store.
    path : str
        destination file; parent directories are created.
    """
    folder = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(folder):
        os.makedirs(folder)
    header = np.array([(MAGIC, VERSION, params.dims)], dtype=_HEADER)
    with open(path, 'wb') as file:
        file.write(header.tobytes())
        for tensor in params.tensors():
            file.write(np.ascontiguousarray(tensor, dtype='<f8').tobytes())


def load_checkpoint(path):
    """ Read parameters written by :func:`save_checkpoint`.

    Returns
    -------
    NetworkParams

    Raises
    ------
    IngestionError
        on a bad magic, unknown version or truncated payload.
    """
    with open(path, 'rb') as file:
        byted = file.read()
    if len(byted) < _HEADER.itemsize:
        raise IngestionError('{}: checkpoint shorter than its {}-byte header'.format(path, _HEADER.itemsize))
    header = np.frombuffer(byted, dtype=_HEADER, count=1)[0]
    if header['magic'] != MAGIC:
        raise IngestionError('{}: bad magic {!r} at offset 0'.format(path, bytes(header['magic'])))
    if header['version'] != VERSION:
        raise IngestionError('{}: unsupported checkpoint version {} at offset 4'.format(path, header['version']))

    tensors, offset = [], _HEADER.itemsize
    for shape in _shapes(*(int(dim) for dim in header['dims'])):
        count = int(np.prod(shape))
        if offset + 8 * count > len(byted):
            raise IngestionError('{}: truncated tensor at offset {}'.format(path, offset))
        tensors.append(np.frombuffer(byted, dtype='<f8', count=count, offset=offset).astype(np.float64).reshape(shape))
        offset += 8 * count
    if offset != len(byted):
        raise IngestionError('{}: {} trailing bytes after offset {}'.format(path, len(byted) - offset, offset))
    return NetworkParams(*tensors)
