""" Segmentation runs and the sweeps built from them: seeds, ablations, noise curves, timings. """

import logging
import time
from collections import namedtuple
from dataclasses import replace

import numpy as np
import pandas as pd
import multiprocess as mp

from ..clustering import spectral_cluster, evaluate
from ..config import resolved_config
from ..data import downsample, upsample_labels, check_factor, corrupt, NoiseSpec
from ..errors import InvalidInputError
from ..models import init_params
from ..objective import temporal_laplacian
from ..training import train, evaluate_step, TrainConfig
from ..utils import as_labels, validate_feature_matrix

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

N_SEEDS = 5
BENCH_SIZES = (200, 1000, 2000, 4000)
BENCH_DIM = 324
BENCH_REPEATS = 3

# full loss first, then the single-term removals, the single-term runs and the untrained network
ABLATION_GATES = ((True, True, True),
                  (True, True, False),
                  (False, True, True),
                  (True, False, True),
                  (True, False, False),
                  (False, True, False),
                  (False, False, True),
                  (False, False, False))

SegmentationResult = namedtuple('SegmentationResult', ['labels', 'train', 'report'])


def resolve_clusters(config, labels=None, n_clusters=None):
    """ Number of segments: explicit value, then the config, then the ground-truth label count. """
    if n_clusters is None:
        n_clusters = config.n_clusters
    if n_clusters is None and labels is not None:
        n_clusters = len(np.unique(labels))
    if n_clusters is None:
        raise InvalidInputError('number of clusters is unknown: pass it explicitly or provide labels')
    return int(n_clusters)


def run_segmentation(features, config, labels=None, n_clusters=None, downsample_factor=1, progress=False):
    """ Train on a sequence, cluster the learned affinity and score it when labels are given.

    Parameters
    ----------
    features : ndarray
        D x N feature matrix.
    config : TrainConfig
        run configuration; its seed drives both training and clustering.
    labels : ndarray or None
        ground-truth labels of the N frames.
    n_clusters : int or None
        number of segments; see :func:`resolve_clusters`.
    downsample_factor : int
        train on every k-th frame and propagate labels back to all frames.
    progress : bool
        show a progress bar over iterations.

    Returns
    -------
    SegmentationResult
        (labels of all N frames, TrainResult, EvalReport or None)
    """
    features = validate_feature_matrix(features)
    downsample_factor = check_factor(downsample_factor)
    if labels is not None:
        labels = as_labels(labels, 'ground-truth labels')
        if len(labels) != features.shape[1]:
            raise InvalidInputError('{} labels for {} frames'.format(len(labels), features.shape[1]))
    n_clusters = resolve_clusters(config, labels, n_clusters)

    sampled = downsample(features, downsample_factor) if downsample_factor > 1 else features
    result = train(sampled, replace(config, n_clusters=n_clusters), progress=progress)
    pred = spectral_cluster(result.affinity, n_clusters, seed=config.seed)
    if downsample_factor > 1:
        pred = upsample_labels(pred, downsample_factor, features.shape[1])

    report = None
    if labels is not None:
        report = evaluate(pred, labels, resolved_config(replace(config, n_clusters=n_clusters)), config.seed)
        logger.info('seed %d: acc %.4f, nmi %.4f', config.seed, report.acc, report.nmi)
    return SegmentationResult(pred, result, report)


def parallel_map(func, tasks, n_workers=None):
    """ Map `func` over `tasks` in a process pool; serially when `n_workers` is 1. """
    tasks = list(tasks)
    if n_workers == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    pool = mp.Pool(n_workers or min(len(tasks), mp.cpu_count()))  # pylint: disable=no-member
    try:
        return pool.map(func, tasks)
    finally:
        pool.close()
        pool.join()


def _require_labels(labels, n_frames):
    if labels is None:
        raise InvalidInputError('scoring runs needs ground-truth labels')
    labels = as_labels(labels, 'ground-truth labels')
    if len(labels) != n_frames:
        raise InvalidInputError('{} labels for {} frames'.format(len(labels), n_frames))
    return labels


def _score_run(task):
    features, labels, config, n_clusters = task
    report = run_segmentation(features, config, labels, n_clusters).report
    return report.acc, report.nmi


def seed_configs(config, n_seeds):
    """ Copies of `config` with seeds ``seed ... seed + n_seeds - 1``. """
    return [replace(config, seed=config.seed + i) for i in range(n_seeds)]


def run_seeds(features, labels, config, n_seeds=N_SEEDS, n_clusters=None, n_workers=None):
    """ Score one sequence under several seeds.

    Returns
    -------
    pd.DataFrame
        columns seed, acc, nmi; sorted by seed.
    """
    labels = _require_labels(labels, np.shape(features)[1])
    configs = seed_configs(config, n_seeds)
    scores = parallel_map(_score_run, [(features, labels, cfg, n_clusters) for cfg in configs], n_workers)
    frame = pd.DataFrame([(cfg.seed, acc, nmi) for cfg, (acc, nmi) in zip(configs, scores)],
                         columns=['seed', 'acc', 'nmi'])
    return frame.sort_values('seed').reset_index(drop=True)


def summarize_scores(frame):
    """ Mean and population std of acc and nmi over the rows of a score table. """
    return {'acc_mean': float(frame['acc'].mean()), 'acc_std': float(frame['acc'].std(ddof=0)),
            'nmi_mean': float(frame['nmi'].mean()), 'nmi_std': float(frame['nmi'].std(ddof=0)),
            'seeds': int(len(frame))}


def run_ablation(features, labels, config, n_seeds=N_SEEDS, n_clusters=None, n_workers=None):
    """ Score every combination of loss gates, averaged over seeds.

    Returns
    -------
    pd.DataFrame
        columns enable_rho, enable_rho_c, enable_temporal, acc, nmi; one row per entry of
        :data:`ABLATION_GATES`, in that order.
    """
    labels = _require_labels(labels, np.shape(features)[1])
    tasks, keys = [], []
    for gates in ABLATION_GATES:
        for cfg in seed_configs(config, n_seeds):
            tasks.append((features, labels, replace(cfg, coding=cfg.coding.with_gates(gates)), n_clusters))
            keys.append(gates)
    scores = parallel_map(_score_run, tasks, n_workers)

    runs = pd.DataFrame([gates + score for gates, score in zip(keys, scores)],
                        columns=['enable_rho', 'enable_rho_c', 'enable_temporal', 'acc', 'nmi'])
    return runs.groupby(['enable_rho', 'enable_rho_c', 'enable_temporal'], sort=False).mean().reset_index()


def _noise_run(task):
    features, labels, config, n_clusters, sigma = task
    noisy = corrupt(features, NoiseSpec(sigma=sigma, seed=config.seed))
    report = run_segmentation(noisy, config, labels, n_clusters).report
    return sigma, config.seed, report.acc, report.nmi


def run_noise_curve(features, labels, config, sigmas, n_seeds=N_SEEDS, n_clusters=None, n_workers=None):
    """ Accuracy under additive Gaussian noise of increasing level.

    For every sigma and seed the features are corrupted with that seed, trained on and scored.

    Returns
    -------
    pd.DataFrame
        columns sigma, acc_mean, acc_std, nmi_mean, nmi_std, seeds; one row per sigma, in the
        given order. Std is over the seeds (population).
    """
    sigmas = [float(sigma) for sigma in sigmas]
    if any(sigma < 0 for sigma in sigmas):
        raise InvalidInputError('noise levels must be nonnegative, got {}'.format(sigmas))
    labels = _require_labels(labels, np.shape(features)[1])
    tasks = [(features, labels, cfg, n_clusters, sigma) for sigma in sigmas for cfg in seed_configs(config, n_seeds)]
    runs = pd.DataFrame(parallel_map(_noise_run, tasks, n_workers), columns=['sigma', 'seed', 'acc', 'nmi'])
    runs = runs.sort_values(['sigma', 'seed'], kind='mergesort')

    rows = []
    for sigma in sigmas:
        summary = summarize_scores(runs[runs['sigma'] == sigma])
        rows.append(dict(sigma=sigma, **summary))
    return pd.DataFrame(rows, columns=['sigma', 'acc_mean', 'acc_std', 'nmi_mean', 'nmi_std', 'seeds'])


def time_iteration(n_frames, dim, config, repeats=BENCH_REPEATS):
    """ Median wall-clock time in ms of one loss and gradient evaluation on random data. """
    rng = np.random.default_rng(config.seed)
    features = rng.standard_normal((dim, n_frames))
    params = init_params(dim, config.hidden_dim, config.output_dim, config.seed)
    graph = temporal_laplacian(n_frames, config.window_size)
    evaluate_step(params, features, graph, config)

    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        evaluate_step(params, features, graph, config)
        timings.append(1000 * (time.perf_counter() - start))
    return float(np.median(timings))


def run_benchmark(sizes=BENCH_SIZES, dim=BENCH_DIM, config=None, repeats=BENCH_REPEATS):
    """ Time per iteration across sequence lengths at fixed dims.

    Returns
    -------
    pd.DataFrame
        columns n, dim, d_pre, d, ms_per_iter.
    """
    config = config or TrainConfig()
    rows = []
    for n_frames in sizes:
        ms_per_iter = time_iteration(int(n_frames), dim, config, repeats)
        logger.info('N=%d: %.1f ms/iter', n_frames, ms_per_iter)
        rows.append((int(n_frames), dim, config.hidden_dim, config.output_dim, ms_per_iter))
    return pd.DataFrame(rows, columns=['n', 'dim', 'd_pre', 'd', 'ms_per_iter'])
