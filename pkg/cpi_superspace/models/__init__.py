"""Модели данных"""

from .hamiltonian import HamiltonianModel, get_model
from .phase_space import Distribution, ExtendedState, LiouvilleResult, LyapunovResult, PropagatorRecord, Trajectory
from .quantum import KernelValue, ProbabilityAmplitudeReport, PropagatorRequest
from .run_config import RunConfig
from .superspace import LatticePath, SuperActionComponents, SuperField, SymplecticForm
from .verification import CheckResult, IdentityRecord, RunSummary

__all__ = [
    'HamiltonianModel',
    'get_model',
    'Distribution',
    'ExtendedState',
    'LiouvilleResult',
    'LyapunovResult',
    'PropagatorRecord',
    'Trajectory',
    'KernelValue',
    'ProbabilityAmplitudeReport',
    'PropagatorRequest',
    'RunConfig',
    'LatticePath',
    'SuperActionComponents',
    'SuperField',
    'SymplecticForm',
    'CheckResult',
    'IdentityRecord',
    'RunSummary',
]
