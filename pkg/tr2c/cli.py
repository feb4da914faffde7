""" Command line front end: ``tr2c <command> ...``.

Exit codes: 0 on success, 1 on numerical or internal failures, 2 on invalid input,
config or unwritable paths.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from . import __version__
from .clustering import spectral_cluster, cosine_affinity, evaluate
from .config import load_run_config, resolved_config, PRESETS
from .data import (SyntheticSpec, generate_synthetic, load_matrix, save_matrix, load_labels, save_labels,
                   export_pca)
from .errors import NumericalFailure, InternalError
from .models import save_checkpoint, load_checkpoint, forward
from .pipelines import (run_segmentation, run_seeds, run_ablation, run_noise_curve, run_benchmark,
                        summarize_scores, resolve_clusters, N_SEEDS, BENCH_SIZES, BENCH_DIM)
from .training import compute_affinity

logger = logging.getLogger('tr2c')  # pylint: disable=invalid-name

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'
FLOAT_FORMAT = '%.17g'


def _int_list(text):
    return [int(item) for item in text.split(',') if item.strip()]


def _float_list(text):
    return [float(item) for item in text.split(',') if item.strip()]


def _out_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def _write_json(payload, path):
    with open(path, 'w') as file:
        file.write(json.dumps(payload, indent=2, sort_keys=True) + '\n')


def _run_config(args):
    return load_run_config(args.config, args.preset, seed=getattr(args, 'seed', None),
                           k_clusters=getattr(args, 'k', None))


def cmd_synth(args):
    """ Generate a synthetic sequence: features and ground-truth labels. """
    spec = SyntheticSpec(n_clusters=args.k, dim=args.dim, subspace_dim=args.subspace_dim,
                         segment_lengths=tuple(args.segments), sigma=args.sigma, seed=args.seed)
    features, labels = generate_synthetic(spec)
    out = _out_dir(args.out)
    save_matrix(features, os.path.join(out, 'features.' + args.format), args.format)
    save_labels(labels, os.path.join(out, 'labels.txt'))
    logger.info('Wrote %d frames of dim %d to %s', features.shape[1], features.shape[0], out)


def cmd_train(args):
    """ Train on a feature matrix, cluster, and write labels, trace, checkpoint and reports. """
    config = _run_config(args)
    features = load_matrix(args.features)
    labels = load_labels(args.labels) if args.labels else None
    out = _out_dir(args.out)

    if args.seeds > 1:
        scores = run_seeds(features, labels, config, args.seeds, n_workers=args.workers)
        scores.to_csv(os.path.join(out, 'seeds.csv'), index=False, float_format=FLOAT_FORMAT)
        summary = summarize_scores(scores)
        summary['config_echo'] = resolved_config(replace(config, n_clusters=resolve_clusters(config, labels)))
        _write_json(summary, os.path.join(out, 'summary.json'))
        logger.info('acc %.4f +- %.4f, nmi %.4f +- %.4f over %d seeds', summary['acc_mean'], summary['acc_std'],
                    summary['nmi_mean'], summary['nmi_std'], summary['seeds'])
        return

    result = run_segmentation(features, config, labels, downsample_factor=args.downsample, progress=args.progress)
    save_labels(result.labels, os.path.join(out, 'labels.txt'))
    result.train.trace.to_csv(os.path.join(out, 'trace.csv'))
    save_checkpoint(result.train.params, os.path.join(out, 'checkpoint.tr2c'))

    sampled = features[:, ::args.downsample]
    representations = forward(result.train.params, sampled).z_tilde
    export_pca(representations, os.path.join(out, 'representations.csv'), labels=result.labels[::args.downsample],
               n_components=min(3, *representations.shape))
    if result.report is not None:
        result.report.to_json(os.path.join(out, 'report.json'))
        logger.info('acc %.4f, nmi %.4f', result.report.acc, result.report.nmi)


def cmd_eval(args):
    """ Cluster a stored network's affinity, or the raw-feature baseline, and score it. """
    config = _run_config(args)
    features = load_matrix(args.features)
    labels = load_labels(args.labels)
    n_clusters = resolve_clusters(config, labels)
    if args.baseline:
        affinity = cosine_affinity(features, config.sinkhorn)
    else:
        params = load_checkpoint(args.checkpoint)
        _, _, affinity = compute_affinity(params, features, config.sinkhorn)

    pred = spectral_cluster(affinity, n_clusters, seed=config.seed)
    out = _out_dir(args.out)
    save_labels(pred, os.path.join(out, 'labels.txt'))
    report = evaluate(pred, labels, resolved_config(replace(config, n_clusters=n_clusters)), config.seed)
    report.to_json(os.path.join(out, 'report.json'))
    logger.info('acc %.4f, nmi %.4f', report.acc, report.nmi)


def cmd_ablate(args):
    """ Score every combination of loss gates. """
    config = _run_config(args)
    table = run_ablation(load_matrix(args.features), load_labels(args.labels), config, args.seeds,
                         n_workers=args.workers)
    gates = ['enable_rho', 'enable_rho_c', 'enable_temporal']
    table[gates] = table[gates].astype(int)
    table.to_csv(os.path.join(_out_dir(args.out), 'ablation.csv'), index=False, float_format=FLOAT_FORMAT)


def cmd_noise(args):
    """ Accuracy curve under increasing Gaussian noise. """
    config = _run_config(args)
    curve = run_noise_curve(load_matrix(args.features), load_labels(args.labels), config, args.sigma, args.seeds,
                            n_workers=args.workers)
    curve.to_csv(os.path.join(_out_dir(args.out), 'noise.csv'), index=False, float_format=FLOAT_FORMAT)


def cmd_bench(args):
    """ Time one loss and gradient evaluation across sequence lengths. """
    config = load_run_config(args.config, args.preset, seed=args.seed, d=args.d, d_pre=args.d_pre)
    table = run_benchmark(args.n, args.dim, config, args.repeats)
    out = _out_dir(args.out)
    table.to_csv(os.path.join(out, 'bench.csv'), index=False, float_format=FLOAT_FORMAT)
    _write_json({'config_echo': resolved_config(config), 'dim': args.dim, 'repeats': args.repeats},
                os.path.join(out, 'bench.json'))


def cmd_pca(args):
    """ Export a PCA projection of a feature matrix. """
    features = load_matrix(args.features)
    labels = load_labels(args.labels) if args.labels else None
    export_pca(features, args.out, labels=labels, n_components=args.k)


def _add_config_flags(parser):
    parser.add_argument('--config', help='run config file of `key = value` lines')
    parser.add_argument('--preset', choices=sorted(PRESETS), help='named hyper-parameter preset')
    parser.add_argument('--seed', type=int, help='seed, overrides the config value')
    parser.add_argument('--k', type=int, help='number of segments, overrides the config value')


def build_parser():
    """ Argument parser of the ``tr2c`` command. """
    parser = argparse.ArgumentParser(prog='tr2c', description='Temporal rate reduction clustering of frame sequences.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    synth = commands.add_parser('synth', help='generate a synthetic union-of-subspaces sequence')
    synth.add_argument('--out', required=True, help='output directory')
    synth.add_argument('--k', type=int, default=3, help='number of subspaces')
    synth.add_argument('--dim', type=int, default=30, help='ambient dimension')
    synth.add_argument('--subspace-dim', type=int, default=3, help='dimension of every subspace')
    synth.add_argument('--segments', type=_int_list, default=[100, 100, 100], help='comma-separated segment lengths')
    synth.add_argument('--sigma', type=float, default=0.05, help='ambient noise std')
    synth.add_argument('--seed', type=int, default=0)
    synth.add_argument('--format', choices=('csv', 'bin'), default='csv')
    synth.set_defaults(func=cmd_synth)

    train = commands.add_parser('train', help='train, cluster and write a run directory')
    train.add_argument('--features', required=True)
    train.add_argument('--labels', help='ground-truth labels; enables report.json')
    train.add_argument('--out', required=True, help='output directory')
    _add_config_flags(train)
    train.add_argument('--seeds', type=int, default=1, help='number of seeds; >1 writes summary.json only')
    train.add_argument('--downsample', type=int, default=1, help='train on every k-th frame')
    train.add_argument('--progress', action='store_true', help='show a progress bar')
    train.add_argument('--workers', type=int, help='worker processes for multi-seed runs')
    train.set_defaults(func=cmd_train)

    evaluate_cmd = commands.add_parser('eval', help='cluster a checkpoint or the raw-feature baseline')
    evaluate_cmd.add_argument('--features', required=True)
    evaluate_cmd.add_argument('--labels', required=True)
    evaluate_cmd.add_argument('--out', required=True, help='output directory')
    source = evaluate_cmd.add_mutually_exclusive_group(required=True)
    source.add_argument('--checkpoint', help='checkpoint written by `train`')
    source.add_argument('--baseline', action='store_true', help='cluster the cosine affinity of raw features')
    _add_config_flags(evaluate_cmd)
    evaluate_cmd.set_defaults(func=cmd_eval)

    for name, func, helptext in (('ablate', cmd_ablate, 'score every combination of loss gates'),
                                 ('noise', cmd_noise, 'accuracy under additive Gaussian noise')):
        sweep = commands.add_parser(name, help=helptext)
        sweep.add_argument('--features', required=True)
        sweep.add_argument('--labels', required=True)
        sweep.add_argument('--out', required=True, help='output directory')
        _add_config_flags(sweep)
        sweep.add_argument('--seeds', type=int, default=N_SEEDS, help='number of seeds')
        sweep.add_argument('--workers', type=int, help='worker processes')
        if name == 'noise':
            sweep.add_argument('--sigma', type=_float_list, required=True, help='comma-separated noise levels')
        sweep.set_defaults(func=func)

    bench = commands.add_parser('bench', help='time per iteration across sequence lengths')
    bench.add_argument('--n', type=_int_list, default=list(BENCH_SIZES), help='comma-separated sequence lengths')
    bench.add_argument('--dim', type=int, default=BENCH_DIM, help='feature dimension D')
    bench.add_argument('--d', type=int, help='head output dimension')
    bench.add_argument('--d-pre', type=int, help='encoder width')
    bench.add_argument('--repeats', type=int, default=3)
    bench.add_argument('--config')
    bench.add_argument('--preset', choices=sorted(PRESETS))
    bench.add_argument('--seed', type=int)
    bench.add_argument('--out', required=True, help='output directory')
    bench.set_defaults(func=cmd_bench)

    pca = commands.add_parser('pca', help='export a PCA projection for plotting')
    pca.add_argument('--features', required=True)
    pca.add_argument('--labels')
    pca.add_argument('--k', type=int, default=3, help='number of components')
    pca.add_argument('--out', required=True, help='output CSV file')
    pca.set_defaults(func=cmd_pca)
    return parser


def main(argv=None):
    """ Run the command line; returns the exit code. """
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        args.func(args)
    except (NumericalFailure, InternalError) as error:
        logger.error('%s', error)
        return 1
    except (ValueError, OSError) as error:
        logger.error('%s', error)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
