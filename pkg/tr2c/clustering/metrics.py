""" Clustering accuracy under optimal label matching and normalized mutual information. """

import json
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import normalized_mutual_info_score

from ..errors import InvalidInputError
from ..utils import as_labels


@njit(nogil=True)
def confusion_counts(pred_codes, gt_codes, n_pred, n_gt):
    """ Contingency table of two coded labelings.

    Parameters
    ----------
    pred_codes : ndarray(N)
        predicted labels coded into [0, n_pred).
    gt_codes : ndarray(N)
        ground-truth labels coded into [0, n_gt).

    Returns
    -------
    ndarray(n_pred, n_gt)
        number of frames per (predicted, ground-truth) pair.
    """
    counts = np.zeros((n_pred, n_gt), dtype=np.int64)
    for i in range(pred_codes.shape[0]):
        counts[pred_codes[i], gt_codes[i]] += 1
    return counts


def _check_pair(pred, gt):
    pred = as_labels(pred, 'predicted labels')
    gt = as_labels(gt, 'ground-truth labels')
    if len(pred) != len(gt):
        raise InvalidInputError('label vectors differ in length: {} vs {}'.format(len(pred), len(gt)))
    if len(pred) == 0:
        raise InvalidInputError('label vectors are empty')
    return pred, gt


def confusion_matrix(pred, gt):
    """ Confusion matrix over the distinct labels of each side.

    Returns
    -------
    tuple
        (counts K_pred x K_gt, predicted label values, ground-truth label values)
    """
    pred, gt = _check_pair(pred, gt)
    pred_values, pred_codes = np.unique(pred, return_inverse=True)
    gt_values, gt_codes = np.unique(gt, return_inverse=True)
    counts = confusion_counts(pred_codes.astype(np.int64), gt_codes.astype(np.int64),
                              len(pred_values), len(gt_values))
    return counts, pred_values, gt_values


def accuracy(pred, gt):
    """ Fraction of frames labeled correctly under the best one-to-one label matching.

    The matching solves the maximum-weight assignment on the confusion matrix padded to a
    square; predicted labels left without a partner count as errors.

    Returns
    -------
    tuple
        (accuracy, dict mapping predicted label -> ground-truth label)
    """
    counts, pred_values, gt_values = confusion_matrix(pred, gt)
    size = max(counts.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:counts.shape[0], :counts.shape[1]] = counts
    rows, cols = linear_sum_assignment(padded, maximize=True)

    matching = {int(pred_values[r]): int(gt_values[c]) for r, c in zip(rows, cols)
                if r < len(pred_values) and c < len(gt_values)}
    return float(padded[rows, cols].sum()) / counts.sum(), matching


def nmi(pred, gt):
    """ Mutual information normalized by the geometric mean of the two entropies.

    Symmetric bit for bit: the labelings are passed to the contingency sum in a fixed order.
    """
    pred, gt = _check_pair(pred, gt)
    first, second = sorted((pred, gt), key=lambda labels: labels.tolist())
    return float(normalized_mutual_info_score(first, second, average_method='geometric'))


@dataclass
class EvalReport:
    """ Evaluation of one segmentation against ground truth. """
    acc: float
    nmi: float
    confusion: list
    matching: dict
    config_echo: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self):
        """ JSON-ready dict with keys acc, nmi, confusion, matching, config_echo, seed. """
        return {'acc': self.acc,
                'nmi': self.nmi,
                'confusion': [[int(v) for v in row] for row in self.confusion],
                'matching': {str(k): int(v) for k, v in sorted(self.matching.items())},
                'config_echo': self.config_echo,
                'seed': int(self.seed)}

    def to_json(self, path=None):
        """ Serialize with sorted keys; written to `path` when given. """
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, 'w') as file:
                file.write(text + '\n')
        return text


def evaluate(pred, gt, config_echo=None, seed=0):
    """ Build an :class:`EvalReport` for predicted labels. """
    acc, matching = accuracy(pred, gt)
    counts, _, _ = confusion_matrix(pred, gt)
    return EvalReport(acc=acc, nmi=nmi(pred, gt), confusion=counts.tolist(), matching=matching,
                      config_echo=dict(config_echo or {}), seed=seed)
