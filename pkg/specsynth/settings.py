"""
Inference options.

Options are read from any object exposing them as attributes: an inner
Meta class, an argparse namespace or another InferenceOptions. Missing
attributes fall back to the defaults below.
"""

import os

SEED_VARIABLE = 'SPECSYNTH_SEED'

DEFAULTS = {
    'seed': 42,
    'test_budget': 500,
    'value_domain': (-8, 8),
    'max_list_len': 4,
    'max_unroll': 128,
    'se_unroll': 4,
    'step_limit': 100000,
    'explain_unroll': 64,
}


class InferenceOptions(object):
    def __init__(self, options=None):
        for name, default in DEFAULTS.items():
            value = getattr(options, name, None)
            setattr(self, name, default if value is None else value)
        self.value_domain = tuple(self.value_domain)
        self.validate()

    def validate(self):
        lo, hi = self.value_domain
        if self.test_budget < 1:
            message = 'test_budget must be at least 1, got %r'
            raise ValueError(message % self.test_budget)
        if lo > hi:
            message = 'value_domain lower bound %r exceeds upper bound %r'
            raise ValueError(message % (lo, hi))
        if self.max_list_len < 0:
            message = 'max_list_len must not be negative, got %r'
            raise ValueError(message % self.max_list_len)
        for name in ('max_unroll', 'se_unroll', 'explain_unroll',
                'step_limit'):
            if getattr(self, name) < 1:
                message = '%s must be at least 1, got %r'
                raise ValueError(message % (name, getattr(self, name)))

    def as_dict(self):
        """
        Plain form for provenance records.
        """
        values = {name: getattr(self, name) for name in DEFAULTS}
        values['value_domain'] = list(self.value_domain)
        return values

    def __repr__(self):
        return 'InferenceOptions(%s)' % ', '.join('%s=%r' % item
                for item in sorted(self.as_dict().items()))


def seed_from_environment(default):
    """
    SPECSYNTH_SEED, when set, overrides the configured seed.
    """
    value = os.environ.get(SEED_VARIABLE)
    if value is None or value.strip() == '':
        return default
    try:
        return int(value)
    except ValueError:
        message = '%s must be an integer, got %r'
        raise ValueError(message % (SEED_VARIABLE, value))
