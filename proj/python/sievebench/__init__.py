import json

from . import _sievebench as _core
from ._sievebench import (
    CapacityError,
    DomainError,
    IoError,
    PrecisionError,
    PreconditionError,
    RangeError,
    SievebenchError,
    ValidationError,
    additive_energy,
    asymmetric_energy,
    count_box_solutions,
    delta_exponent,
    error_term,
    moduli,
    phi_alpha,
    sh_sum,
    spacing_count,
    weyl_sum,
    window,
)

__version__ = "0.1.0"


def energy_report(values, backend="sparse", threads=1):
    return json.loads(_core.energy_report(list(values), backend, threads))


def sieve_sum(kind, param, Q, M, coefficients, fast=True):
    return json.loads(_core.sieve_sum(kind, param, Q, M, [complex(c) for c in coefficients], fast))


def crossovers(k):
    return json.loads(_core.crossovers(k))


def bv_report(alpha, x, R, threads=1):
    return json.loads(_core.bv_report(str(alpha), x, R, threads))


def acceptance(only=()):
    return json.loads(_core.acceptance(list(only)))
