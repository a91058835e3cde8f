"""Photoelectron spectra of a laser-driven ionization channel coupled to a
neighbor two-level atom.

The bound sector (neutral ground state, neighbor-excited state) decays into
a flat continuum through direct ionization and through energy transfer from
the neighbor.  Everything observable here derives from the closed-form
continuum amplitudes of that model: stationary line shapes, their Rabi
decomposition into steady and oscillating parts, spectral zeros of both the
interference (Fano-like) and the dynamical kind, and parameter sweeps that
track how those zeros move, merge, and vanish with the pump strength.  A
discretized-continuum integrator is included as an independent referee for
all of it.
"""

from .errors import (
    ConfigError,
    DegenerateSpectrumError,
    DomainError,
    ExceptionalPointError,
    GridTooNarrowError,
    InvalidNormalizationError,
    IonospecError,
    NoLongTimeLimitError,
    NormDriftError,
    PoleError,
    RevivalTimeError,
    UnknownPresetError,
    WindowTooNarrowError,
)
from .core import (
    GROUND,
    EffectiveSystem,
    InitialState,
    NormalizedParams,
    PhysicalParams,
    bound_amplitudes,
    build_effective,
    continuum_amplitudes,
    d_matrices,
    effective_matrix,
    eigen_decompose,
    from_normalized,
    k_projector,
    mode_table,
    rabi_split,
    to_normalized,
    total_probability,
    transfer_moments,
)
from .spectra import (
    PRESET_NAMES,
    LongTimeAmplitudes,
    PresetSpec,
    SpectralDecomposition,
    decompose_intensity,
    figure_preset,
    find_peaks,
    longtime_amplitudes,
    longtime_spectrum_on_grid,
    pole_integral,
    quadrature_norm,
    residue_norm,
    spectrum_grid,
    time_resolved_intensity,
)
from .fano import (
    FanoParams,
    FanoSpectrum,
    fano_amplitude,
    fano_effective_matrix,
    fano_eigen,
    fano_from_normalized,
    fano_modes,
    fano_spectrum,
    fano_zero,
)
from .zeros import (
    REALITY_BOUND,
    SWEEP_PRESET_NAMES,
    SWEEP_PRESETS,
    PairEvent,
    SweepSpec,
    ZeroBranch,
    ZeroProblem,
    ZeroTrace,
    fano_like_zero,
    find_dynamical_zeros,
    poly_roots,
    sweep_preset,
    sweep_zero_traces,
    weak_offres_zeros_excited,
    weak_offres_zeros_ground,
    weak_resonant_quintic,
    weak_resonant_zeros,
)
from .oracle import (
    ComparisonReport,
    DiscretizedFano,
    DiscretizedSystem,
    OracleTrajectory,
    compare,
    discretize,
    discretize_fano,
    evolve,
    golden_rule_rate,
    rabi_frequency,
)

__version__ = "0.1.0"
