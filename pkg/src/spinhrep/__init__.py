"""Hermite-polynomial representation of spin states, spin tomograms and the
kernels between them."""

from .specfun import HalfInteger, half
from .spincore import (
    DensityMatrix,
    Spin,
    SpinOperator,
    SpinState,
    angular_momentum_matrices,
    density_from_pure,
    random_density,
    rotation_matrix,
    validate_density,
)
from .quad import QuadratureGrid, grid_for_spin, integrate_phase_space, sphere_grid_for_spin
from .hrep import (
    HPoint,
    dual_symbol,
    expectation,
    h_dequantizer,
    h_distribution,
    h_distribution_pure,
    h_distribution_on_grid,
    h_quantizer,
    h_state,
    reconstruct_density,
)
from .tomo import (
    TomogramPoint,
    reconstruct_from_tomogram,
    tomo_dequantizer,
    tomo_quantizer_analytic,
    tomogram_on_grid,
    tomogram_value,
)

__version__ = "0.1.0"
