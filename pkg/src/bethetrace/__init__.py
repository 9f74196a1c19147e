"""Exact Bethe spectra and semiclassical densities of states for bosons on a ring."""

from .errors import (
    BetheTraceError,
    InvalidQuantumNumbers,
    NonConvergence,
    NonPositiveEnergy,
    OutOfRange,
    WrongParticleNumber,
)
from .model import (
    BetheState,
    ModelParams,
    PartitionShape,
    QuantumNumbers,
    bethe_residual,
    energy,
    gaudin_determinants,
    gaudin_matrix,
    jacobian_det,
    momentum,
)
from .partitions import (
    PartitionSet,
    binomial_identity_check,
    enumerate_partitions,
    ordered_sum_decomposition_check,
)
from .solver import (
    SolverSettings,
    SpectrumTable,
    enumerate_spectrum,
    solve_state,
    staircase,
)
from .trace import (
    DensityGrid,
    GridSpec,
    PeakMatch,
    ResurgenceRow,
    TraceSettings,
    WindingVector,
    amplitude,
    find_peaks,
    match_levels_to_peaks,
    resurgence_profile,
    rho_osc_partition,
    rho_osc_total,
    rho_total,
    scaled_action,
    scattering_phase,
    semiclassical_count,
    stationary_rapidities,
    total_phase,
    winding_enumerate,
)
from .twobody import (
    ComparisonReport,
    TwoBodyLevel,
    compare_with_bethe,
    relative_secular_root,
    two_body_levels,
)
from .weyl import (
    QuadratureSpec,
    weyl_count,
    weyl_density_partition,
    weyl_density_total,
)

__version__ = "0.1.0"
