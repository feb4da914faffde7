""" End-to-end runs of the ``tr2c`` command on tiny synthetic sequences. """

import json
import os

import numpy as np
import pandas as pd
import pytest

from tr2c.cli import main, build_parser
from tr2c.config import KEYS
from tr2c.data import load_labels, load_matrix

TINY_CONFIG = 'iterations = 3\nd_pre = 8\nd = 4\nsinkhorn_tau = 0.5\n'


def read(path):
    with open(path, 'rb') as file:
        return file.read()


@pytest.fixture
def dataset(tmp_path):
    """ Directory with a 3-segment synthetic sequence and a tiny run config. """
    out = str(tmp_path / 'data')
    assert main(['-q', 'synth', '--out', out, '--k', '3', '--dim', '9', '--subspace-dim', '3',
                 '--segments', '10,10,10', '--seed', '4']) == 0
    config = tmp_path / 'tiny.cfg'
    config.write_text(TINY_CONFIG)
    return {'features': os.path.join(out, 'features.csv'), 'labels': os.path.join(out, 'labels.txt'),
            'config': str(config), 'root': tmp_path}


def test_synth_files(dataset):
    features = load_matrix(dataset['features'])
    labels = load_labels(dataset['labels'])
    assert features.shape == (9, 30)
    assert np.count_nonzero(np.diff(labels)) == 2


def test_synth_is_byte_identical(tmp_path):
    for name in ('a', 'b'):
        assert main(['-q', 'synth', '--out', str(tmp_path / name), '--segments', '5,5,5', '--format', 'bin']) == 0
    assert read(str(tmp_path / 'a' / 'features.bin')) == read(str(tmp_path / 'b' / 'features.bin'))
    assert read(str(tmp_path / 'a' / 'labels.txt')) == read(str(tmp_path / 'b' / 'labels.txt'))


def test_synth_subspaces_must_fit(tmp_path):
    assert main(['-q', 'synth', '--out', str(tmp_path), '--k', '4', '--dim', '10', '--subspace-dim', '3']) == 2


def test_train_writes_run_directory(dataset):
    outs = [str(dataset['root'] / name) for name in ('run1', 'run2')]
    for out in outs:
        assert main(['-q', 'train', '--features', dataset['features'], '--labels', dataset['labels'],
                     '--config', dataset['config'], '--out', out]) == 0

    for name in ('labels.txt', 'trace.csv', 'checkpoint.tr2c', 'representations.csv', 'report.json'):
        assert os.path.isfile(os.path.join(outs[0], name))
    for name in ('labels.txt', 'report.json', 'checkpoint.tr2c'):
        assert read(os.path.join(outs[0], name)) == read(os.path.join(outs[1], name))

    trace = pd.read_csv(os.path.join(outs[0], 'trace.csv'))
    assert list(trace.columns) == ['iter', 'loss', 'rho', 'rho_c', 'reg', 'grad_norm', 'ms']
    assert len(trace) == 3

    with open(os.path.join(outs[0], 'report.json')) as file:
        report = json.load(file)
    assert set(report['config_echo']) == set(KEYS)
    assert report['config_echo']['lambda2'] == 12.
    assert report['config_echo']['k_clusters'] == 3
    assert 0. <= report['acc'] <= 1.

    representations = pd.read_csv(os.path.join(outs[0], 'representations.csv'))
    assert list(representations.columns) == ['pc1', 'pc2', 'pc3', 'label']
    assert len(representations) == 30


def test_train_with_downsampling(dataset):
    out = str(dataset['root'] / 'sampled')
    assert main(['-q', 'train', '--features', dataset['features'], '--config', dataset['config'],
                 '--k', '3', '--downsample', '2', '--out', out]) == 0
    assert len(load_labels(os.path.join(out, 'labels.txt'))) == 30
    assert not os.path.exists(os.path.join(out, 'report.json'))


def test_train_over_seeds(dataset):
    out = str(dataset['root'] / 'seeds')
    assert main(['-q', 'train', '--features', dataset['features'], '--labels', dataset['labels'],
                 '--config', dataset['config'], '--seeds', '2', '--workers', '1', '--out', out]) == 0
    scores = pd.read_csv(os.path.join(out, 'seeds.csv'))
    assert list(scores['seed']) == [0, 1]
    with open(os.path.join(out, 'summary.json')) as file:
        summary = json.load(file)
    assert summary['seeds'] == 2
    assert summary['acc_mean'] == pytest.approx(scores['acc'].mean())


@pytest.mark.parametrize('factor', ['0', '-1'])
def test_train_rejects_bad_downsample_factor(dataset, factor):
    out = dataset['root'] / 'bad_factor'
    assert main(['-q', 'train', '--features', dataset['features'], '--config', dataset['config'],
                 '--k', '3', '--downsample', factor, '--out', str(out)]) == 2
    assert not out.exists() or not any(out.iterdir())


def test_train_needs_cluster_count(dataset):
    assert main(['-q', 'train', '--features', dataset['features'], '--config', dataset['config'],
                 '--out', str(dataset['root'] / 'nok')]) == 2


def test_missing_features_file(dataset):
    assert main(['-q', 'train', '--features', str(dataset['root'] / 'missing.csv'), '--k', '2',
                 '--out', str(dataset['root'] / 'missing')]) == 2


def test_eval_baseline_and_checkpoint(dataset):
    run = str(dataset['root'] / 'run')
    assert main(['-q', 'train', '--features', dataset['features'], '--labels', dataset['labels'],
                 '--config', dataset['config'], '--out', run]) == 0

    for name, source in (('baseline', ['--baseline']),
                         ('learned', ['--checkpoint', os.path.join(run, 'checkpoint.tr2c')])):
        out = str(dataset['root'] / name)
        assert main(['-q', 'eval', '--features', dataset['features'], '--labels', dataset['labels'],
                     '--config', dataset['config'], '--out', out] + source) == 0
        with open(os.path.join(out, 'report.json')) as file:
            assert 0. <= json.load(file)['nmi'] <= 1.

    assert read(os.path.join(run, 'labels.txt')) == read(str(dataset['root'] / 'learned' / 'labels.txt'))


def test_ablate(dataset):
    out = str(dataset['root'] / 'ablate')
    assert main(['-q', 'ablate', '--features', dataset['features'], '--labels', dataset['labels'],
                 '--config', dataset['config'], '--seeds', '2', '--workers', '1', '--out', out]) == 0
    table = pd.read_csv(os.path.join(out, 'ablation.csv'))
    assert list(table.columns) == ['enable_rho', 'enable_rho_c', 'enable_temporal', 'acc', 'nmi']
    assert len(table) == 8
    assert list(table.iloc[0, :3]) == [1, 1, 1]
    assert list(table.iloc[-1, :3]) == [0, 0, 0]


def test_sweeps_default_to_five_seeds():
    parser = build_parser()
    common = ['--features', 'f.csv', '--labels', 'l.txt', '--out', 'o']
    assert parser.parse_args(['ablate'] + common).seeds == 5
    assert parser.parse_args(['noise', '--sigma', '0'] + common).seeds == 5


def test_noise(dataset):
    out = str(dataset['root'] / 'noise')
    assert main(['-q', 'noise', '--features', dataset['features'], '--labels', dataset['labels'],
                 '--config', dataset['config'], '--sigma', '0,0.1', '--seeds', '2', '--workers', '1',
                 '--out', out]) == 0
    curve = pd.read_csv(os.path.join(out, 'noise.csv'))
    assert list(curve['sigma']) == pytest.approx([0., 0.1])
    assert list(curve['seeds']) == [2, 2]


def test_bench(tmp_path):
    out = str(tmp_path / 'bench')
    assert main(['-q', 'bench', '--n', '20,40', '--dim', '6', '--d', '3', '--d-pre', '8', '--repeats', '1',
                 '--out', out]) == 0
    table = pd.read_csv(os.path.join(out, 'bench.csv'))
    assert list(table['n']) == [20, 40]
    assert np.all(table['ms_per_iter'] > 0)
    with open(os.path.join(out, 'bench.json')) as file:
        assert json.load(file)['config_echo']['d'] == 3


def test_pca(dataset):
    out = str(dataset['root'] / 'pca.csv')
    assert main(['-q', 'pca', '--features', dataset['features'], '--labels', dataset['labels'], '--k', '2',
                 '--out', out]) == 0
    assert list(pd.read_csv(out).columns) == ['pc1', 'pc2', 'label']
