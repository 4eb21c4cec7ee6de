"""Грассманова алгебра и интегрирование по Березину"""

from .coefficients import CoefficientMode, ExactField, FloatField
from .grassmann import (
    GeneratorRole,
    GeneratorTable,
    GrassmannElement,
    berezin_integrate,
    berezin_measure,
    berezin_sign_table,
    coefficient_of,
    create_algebra,
    delta_pair,
    left_derivative,
    mul,
)

__all__ = [
    'CoefficientMode',
    'ExactField',
    'FloatField',
    'GeneratorRole',
    'GeneratorTable',
    'GrassmannElement',
    'berezin_integrate',
    'berezin_measure',
    'berezin_sign_table',
    'coefficient_of',
    'create_algebra',
    'delta_pair',
    'left_derivative',
    'mul',
]
