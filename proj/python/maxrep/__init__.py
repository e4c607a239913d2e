"""Maximal repetition, block entropies and repetition inequalities."""

import json as _json

from . import _core
from ._core import (
    CapabilityError,
    ConfigError,
    DomainError,
    InputError,
    fit_power_law_log,
    geometric_grid,
    longest_match,
    maximal_repetition,
    maximal_repetition_profile,
    permutation_baseline,
    plugin_entropy,
    repetition_experiment,
    subword_complexity,
    waiting_time,
)


def _model(model):
    return model if isinstance(model, str) else _json.dumps(model)


def _symbols(x):
    if isinstance(x, (bytes, bytearray)):
        return list(x)
    if isinstance(x, str):
        return [ord(c) for c in x]
    return list(x)


def sample(model, n, seed):
    return _core.sample(_model(model), n, seed)


def normalize_model(model):
    return _json.loads(_core.normalize_model(_model(model)))


def block_log_prob(model, word):
    return _core.block_log_prob(_model(model), _symbols(word))


def renyi_block_entropy(model, n, gamma):
    return _core.renyi_block_entropy(_model(model), n, gamma)


def conditional_renyi_entropy(model, n, gamma, context_length=None):
    return _core.conditional_renyi_entropy(_model(model), n, gamma, context_length)


def conditional_min_entropy(model, n):
    return _core.conditional_min_entropy(_model(model), n)


def check_bounds(model, checks, replicas=100_000, seed=1, workers=1):
    """Runs the named checks; returns (list of report dicts, capability errors)."""
    reports, errors = _core.check_bounds(_model(model), list(checks), replicas, seed, workers)
    return _json.loads(reports), errors
