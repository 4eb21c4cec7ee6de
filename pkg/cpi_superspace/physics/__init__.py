"""Суперпространство, классическая динамика, эволюция плотности и квантовые ядра"""

from .dynamics import (
    FlowIntegrator,
    IntegratorOptions,
    classical_propagator,
    ensemble_evolve,
    extended_flow,
    hamilton_flow,
    lyapunov_spectrum,
)
from .ghost_kernel import probability_amplitude_check
from .liouville import LiouvilleOptions, liouville_evolve
from .quantum import (
    GaussianWavepacket,
    QuadraticKernel,
    exact_propagator,
    mehler_kernel,
    semiclassical_concentration,
    sliced_propagator,
    slicing_sweep,
)
from .superspace import (
    berezin_reduce,
    decompose,
    expansion_residual,
    reduction_residual,
    lattice_superaction,
    quantize_projector,
    surface_term,
)

__all__ = [
    'FlowIntegrator',
    'IntegratorOptions',
    'classical_propagator',
    'ensemble_evolve',
    'extended_flow',
    'hamilton_flow',
    'lyapunov_spectrum',
    'probability_amplitude_check',
    'LiouvilleOptions',
    'liouville_evolve',
    'GaussianWavepacket',
    'QuadraticKernel',
    'exact_propagator',
    'mehler_kernel',
    'semiclassical_concentration',
    'sliced_propagator',
    'slicing_sweep',
    'berezin_reduce',
    'decompose',
    'expansion_residual',
    'reduction_residual',
    'lattice_superaction',
    'quantize_projector',
    'surface_term',
]
