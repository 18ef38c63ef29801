"""Kinks, normal modes and ground-state entanglement of a Frenkel-Kontorova
chain on a double sine-Gordon substrate."""

from .errors import (
    DegenerateCriticalPointError,
    DomainError,
    DSGError,
    FlatProfileError,
    InstabilityError,
    NumericalDegeneracyError,
    SingularStepError,
    SolverError,
)
from .gaussian import (
    CovarianceData,
    EntropyScan,
    SymplecticSpectrum,
    block_entropy,
    correlation_profile,
    covariance,
    entanglement_entropy,
    entropy_scan,
    local_maxima,
    mode_entropy,
    symplectic_eigenvalues,
    symplectic_spectrum_jm,
)
from .potential import (
    CriticalKind,
    CriticalPoint,
    ModelParams,
    critical_points,
    potential_d1,
    potential_d2,
    potential_value,
)
from .spectral import (
    HessianMatrix,
    NormalModes,
    build_hessian,
    eigendecompose,
    normal_modes,
    zero_point_energy,
)
from .statics import (
    EnergyProfile,
    FieldConfiguration,
    FieldKind,
    energy_profile,
    energy_support,
    lump_centers,
    solve_kink,
    static_configuration,
    vacuum_configuration,
)

__version__ = "0.1.0"
