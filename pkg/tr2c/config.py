""" Run configuration: ``key = value`` files, named presets and the resolved echo.

A run config file holds one ``key = value`` pair per line; blank lines and ``#`` comments
are ignored. Keys missing from the file keep their defaults (or the preset values).
"""

import logging

from .errors import InvalidConfigError
from .models import SinkhornConfig
from .objective import CodingConfig
from .training import TrainConfig

logger = logging.getLogger(__name__)  # pylint: disable=invalid-name

TRUE_WORDS = ('true', '1', 'yes')
FALSE_WORDS = ('false', '0', 'no')


def parse_bool(text):
    """ Parse true/false/1/0/yes/no (case-insensitive). """
    word = str(text).strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise ValueError('not a boolean: {!r}'.format(text))


def _optional_int(text):
    return None if str(text).strip().lower() in ('', 'none') else int(text)


# key -> (parser, default)
KEYS = {
    'lambda1': (float, 0.1),
    'lambda2': (float, 12.),
    'epsilon': (float, 0.1),
    'window_s': (int, 2),
    'd_pre': (int, 512),
    'd': (int, 64),
    'iterations': (int, 500),
    'eta': (float, 5e-3),
    'optimizer': (str, 'plain-gd'),
    'seed': (int, 0),
    'k_clusters': (_optional_int, None),
    'sinkhorn_iters': (int, 10),
    'sinkhorn_tau': (float, 1.),
    'enable_rho': (parse_bool, True),
    'enable_rho_c': (parse_bool, True),
    'enable_temporal': (parse_bool, True),
}
DEFAULTS = {key: default for key, (_, default) in KEYS.items()}

# hyper-parameters per feature type and dataset; the rest comes from DEFAULTS
PRESETS = {
    'hog-weiz': dict(lambda1=0.1, lambda2=12.),
    'hog-keck': dict(lambda1=0.1, lambda2=10.),
    'hog-ut': dict(lambda1=0.1, lambda2=10.),
    'hog-mad': dict(lambda1=0.15, lambda2=15.),
    'vgg-youtube': dict(lambda1=1., lambda2=2.),
    'clip-weiz': dict(lambda1=0.1, lambda2=12., iterations=100),
    'clip-keck': dict(lambda1=0.1, lambda2=10., iterations=100),
    'clip-youtube': dict(lambda1=1., lambda2=2., iterations=100),
    # desk-scale synthetic union of subspaces
    'synthetic': dict(lambda1=0.1, lambda2=1., d_pre=128, d=16, iterations=200, eta=1e-3,
                      optimizer='adam', sinkhorn_tau=0.1),
}


def parse_config_text(text, source='<string>'):
    """ Parse the ``key = value`` lines of a run config.

    Returns
    -------
    dict
        parsed values of the keys present in the text.

    Raises
    ------
    InvalidConfigError
        on malformed lines, unknown or repeated keys and unparsable values.
    """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise InvalidConfigError('{}:{}: expected `key = value`, got {!r}'.format(source, number, line))
        key, raw = (part.strip() for part in line.split('=', 1))
        if key not in KEYS:
            raise InvalidConfigError('{}:{}: unknown key {!r}'.format(source, number, key))
        if key in values:
            raise InvalidConfigError('{}:{}: key {!r} given twice'.format(source, number, key))
        parser = KEYS[key][0]
        try:
            values[key] = parser(raw)
        except ValueError as error:
            raise InvalidConfigError('{}:{}: bad value for {}: {}'.format(source, number, key, error)) from error
    return values


def read_config(path):
    """ Parse a run config file. """
    with open(path) as file:
        return parse_config_text(file.read(), source=str(path))


def merge_values(preset=None, values=None, **overrides):
    """ Flat config dict: defaults, then preset, then file values, then non-None overrides. """
    merged = dict(DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise InvalidConfigError('Unknown preset {!r}, expected one of {}'.format(preset, sorted(PRESETS)))
        merged.update(PRESETS[preset])
    merged.update(values or {})
    for key, value in overrides.items():
        if key not in KEYS:
            raise InvalidConfigError('unknown key {!r}'.format(key))
        if value is not None:
            merged[key] = value
    return merged


def build_config(values):
    """ :class:`TrainConfig` from a flat dict with the keys of :data:`KEYS`. """
    coding = CodingConfig(epsilon=values['epsilon'], lambda1=values['lambda1'], lambda2=values['lambda2'],
                          enable_rho=values['enable_rho'], enable_rho_c=values['enable_rho_c'],
                          enable_temporal=values['enable_temporal'])
    sinkhorn = SinkhornConfig(iterations=values['sinkhorn_iters'], temperature=values['sinkhorn_tau'])
    return TrainConfig(iterations=values['iterations'], learning_rate=values['eta'],
                       optimizer=values['optimizer'], seed=values['seed'], coding=coding, sinkhorn=sinkhorn,
                       window_size=values['window_s'], n_clusters=values['k_clusters'],
                       hidden_dim=values['d_pre'], output_dim=values['d'])


def load_run_config(path=None, preset=None, **overrides):
    """ Resolve a :class:`TrainConfig` from an optional file, an optional preset and overrides.

    Parameters
    ----------
    path : str or None
        run config file.
    preset : str or None
        name of a preset from :data:`PRESETS`.
    overrides
        config keys given on the command line; None values are ignored.

    Returns
    -------
    TrainConfig
    """
    values = read_config(path) if path is not None else {}
    merged = merge_values(preset, values, **overrides)
    missing = sorted(set(KEYS) - set(values) - set(k for k, v in overrides.items() if v is not None))
    if missing:
        logger.info('Config keys taking %s values: %s', 'preset' if preset else 'default', ', '.join(missing))
    return build_config(merged)


def resolved_config(config):
    """ Flat dict of every config key of a :class:`TrainConfig`, as echoed into reports. """
    return {
        'lambda1': config.coding.lambda1,
        'lambda2': config.coding.lambda2,
        'epsilon': config.coding.epsilon,
        'window_s': config.window_size,
        'd_pre': config.hidden_dim,
        'd': config.output_dim,
        'iterations': config.iterations,
        'eta': config.learning_rate,
        'optimizer': config.optimizer,
        'seed': config.seed,
        'k_clusters': config.n_clusters,
        'sinkhorn_iters': config.sinkhorn.iterations,
        'sinkhorn_tau': config.sinkhorn.temperature,
        'enable_rho': config.coding.enable_rho,
        'enable_rho_c': config.coding.enable_rho_c,
        'enable_temporal': config.coding.enable_temporal,
    }
