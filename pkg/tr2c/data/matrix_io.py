""" Reading and writing of feature matrices and label files.

Two matrix formats are supported:

- ``csv``: D lines of N comma-separated values, no header.
- ``bin``: magic ``b'MTX1'``, little-endian u32 D, u32 N, then D * N little-endian f32
  values in row-major order.
"""

import os
import logging

import numpy as np
import pandas as pd

from ..errors import IngestionError, InvalidInputError
from ..utils import validate_feature_matrix, as_labels

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

MAGIC = b'MTX1'
HEADER_DTYPE = np.dtype([('magic', 'S4'), ('rows', '<u4'), ('cols', '<u4')])
FORMATS = ('csv', 'bin')


def infer_format(path, fmt=None):
    """ Matrix format from the explicit `fmt` or the file extension. """
    if fmt is None:
        fmt = os.path.splitext(str(path))[1].lstrip('.').lower() or 'csv'
    if fmt not in FORMATS:
        raise InvalidInputError('Unknown matrix format {!r}, expected one of {}'.format(fmt, FORMATS))
    return fmt


def _load_csv(path):
    try:
        frame = pd.read_csv(path, header=None, dtype=np.float64, float_precision='round_trip')
    except pd.errors.EmptyDataError:
        raise IngestionError('{}: file is empty'.format(path)) from None
    except (pd.errors.ParserError, ValueError) as error:
        raise IngestionError('{}: cannot parse matrix: {}'.format(path, error)) from error

    values = frame.values
    bad_rows = np.flatnonzero(~np.all(np.isfinite(values), axis=1))
    if bad_rows.size > 0:
        raise IngestionError('{}: row {} is ragged or has non-finite values'.format(path, bad_rows[0] + 1))
    return values


def _load_bin(path):
    with open(path, 'rb') as file:
        raw = file.read()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise IngestionError('{}: truncated header at offset {}'.format(path, len(raw)))
    header = np.frombuffer(raw, dtype=HEADER_DTYPE, count=1)[0]
    if header['magic'] != MAGIC:
        raise IngestionError('{}: bad magic {!r} at offset 0'.format(path, bytes(header['magic'])))

    rows, cols = int(header['rows']), int(header['cols'])
    expected = HEADER_DTYPE.itemsize + 4 * rows * cols
    if len(raw) != expected:
        raise IngestionError('{}: expected {} bytes for a {}x{} matrix, payload ends at offset {}'
                             .format(path, expected, rows, cols, len(raw)))
    values = np.frombuffer(raw, dtype='<f4', offset=HEADER_DTYPE.itemsize).reshape(rows, cols)
    bad = np.flatnonzero(~np.isfinite(values.ravel()))
    if bad.size > 0:
        raise IngestionError('{}: non-finite value at offset {}'.format(path, HEADER_DTYPE.itemsize + 4 * bad[0]))
    return values.astype(np.float64)


def load_matrix(path, fmt=None):
    """ Load a D x N feature matrix.

    Parameters
    ----------
    path : str
        file to read.
    fmt : str or None
        'csv' or 'bin'; inferred from the extension when None.

    Returns
    -------
    ndarray
        validated float64 matrix.

    Raises
    ------
    IngestionError
        on parse failures, naming the row (csv) or the byte offset (bin).
    """
    fmt = infer_format(path, fmt)
    values = _load_csv(path) if fmt == 'csv' else _load_bin(path)
    if values.size == 0:
        raise IngestionError('{}: matrix has no entries'.format(path))
    try:
        values = validate_feature_matrix(values)
    except InvalidInputError as error:
        raise IngestionError('{}: {}'.format(path, error)) from error
    logger.info('Loaded %dx%d matrix from %s', values.shape[0], values.shape[1], path)
    return values


def save_matrix(matrix, path, fmt=None):
    """ Write a matrix in the csv or bin format.

    CSV values are written with 17 significant digits; bin values are rounded to f32.
    """
    fmt = infer_format(path, fmt)
    matrix = np.asarray(matrix, dtype=np.float64)
    if os.path.dirname(str(path)):
        os.makedirs(os.path.dirname(str(path)), exist_ok=True)
    if fmt == 'csv':
        pd.DataFrame(matrix).to_csv(path, header=False, index=False, float_format='%.17g')
    else:
        header = np.array([(MAGIC, matrix.shape[0], matrix.shape[1])], dtype=HEADER_DTYPE)
        with open(path, 'wb') as file:
            file.write(header.tobytes())
            file.write(np.ascontiguousarray(matrix, dtype='<f4').tobytes())


def load_labels(path):
    """ Read labels, one integer per line. """
    try:
        labels = np.loadtxt(path, dtype=np.int64, ndmin=1)
    except ValueError as error:
        raise IngestionError('{}: cannot parse labels: {}'.format(path, error)) from error
    if labels.size == 0:
        raise IngestionError('{}: file is empty'.format(path))
    return as_labels(labels)


def save_labels(labels, path):
    """ Write labels, one integer per line. """
    if os.path.dirname(str(path)):
        os.makedirs(os.path.dirname(str(path)), exist_ok=True)
    np.savetxt(path, as_labels(labels), fmt='%d')
