""" Run config files, presets and the resolved echo. """

import pytest

from tr2c.config import (parse_config_text, parse_bool, merge_values, build_config, load_run_config,
                         resolved_config, DEFAULTS, KEYS, PRESETS)
from tr2c.errors import InvalidConfigError
from tr2c.training import TrainConfig


def test_parse_lines_and_comments():
    values = parse_config_text('# weights\nlambda1 = 0.2\n\nd=32   # head width\nenable_temporal = no\n')
    assert values == {'lambda1': 0.2, 'd': 32, 'enable_temporal': False}


@pytest.mark.parametrize('text, expected', [('true', True), ('YES', True), ('1', True),
                                            ('False', False), ('no', False), ('0', False)])
def test_parse_bool(text, expected):
    assert parse_bool(text) is expected


@pytest.mark.parametrize('text, location', [('lambda1 = 0.1\nlambda3 = 1', ':2:'),
                                            ('iterations 10', ':1:'),
                                            ('seed = 1\nseed = 2', ':2:'),
                                            ('\n\nenable_rho = maybe', ':3:'),
                                            ('d = 3.5', ':1:')])
def test_bad_lines_are_located(text, location):
    with pytest.raises(InvalidConfigError, match=location):
        parse_config_text(text, source='run.cfg')


def test_k_clusters_may_be_none():
    assert parse_config_text('k_clusters = none') == {'k_clusters': None}
    assert parse_config_text('k_clusters = 4') == {'k_clusters': 4}


def test_defaults_build_default_config():
    config = build_config(DEFAULTS)
    assert config == TrainConfig()
    assert resolved_config(config) == DEFAULTS


def test_preset_and_file_precedence(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text('lambda2 = 3\nseed = 5\n')
    config = load_run_config(str(path), preset='hog-keck', seed=9, k_clusters=None)
    assert config.coding.lambda1 == PRESETS['hog-keck']['lambda1']
    assert config.coding.lambda2 == 3.
    assert config.seed == 9
    assert config.n_clusters is None


def test_synthetic_preset():
    config = load_run_config(preset='synthetic')
    assert config.optimizer == 'adam'
    assert (config.hidden_dim, config.output_dim) == (128, 16)
    assert config.sinkhorn.temperature == 0.1


def test_unknown_preset_and_override():
    with pytest.raises(InvalidConfigError):
        merge_values('hog-unknown')
    with pytest.raises(InvalidConfigError):
        merge_values(None, None, learning_rate=0.1)


def test_invalid_values_fail_on_build():
    with pytest.raises(InvalidConfigError):
        build_config(merge_values(None, {'epsilon': 0.}))
    with pytest.raises(InvalidConfigError):
        build_config(merge_values(None, {'optimizer': 'sgd'}))


def test_resolved_config_has_every_key():
    config = load_run_config(preset='clip-weiz', k_clusters=4)
    echo = resolved_config(config)
    assert set(echo) == set(KEYS)
    assert echo['iterations'] == 100
    assert echo['k_clusters'] == 4
