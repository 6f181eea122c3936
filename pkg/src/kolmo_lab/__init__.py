"""kolmo-lab: tail-mass compactness diagnostics for framed function spaces.

The library builds concrete reproducing-kernel spaces at finite
truncation, realizes their continuous Parseval frames over nested
exhaustions, evaluates tail-mass compactness functionals (and their
derivative-weighted and time-frequency counterparts), and applies them to
Toeplitz and little Hankel operator sections.  Every computable identity
ships with an independent oracle exercised by the test suite and by
``kolmo-lab selftest``.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    InconclusiveError,
    KolmoError,
    NumericError,
    ParameterError,
    ResolutionError,
    WindowError,
)
from .numerics import (
    QuadratureGrid,
    build_annulus_grid,
    build_box_grid,
    build_circle_grid,
    build_disk_grid,
    build_interval_grid,
    dft,
    idft,
    integrate,
    singular_values,
)
from .spaces import (
    FunctionRep,
    SpaceSpec,
    basis_eval,
    bergman_distance,
    hyperbolic_ball_measure,
    kernel_eval,
    kernel_norm,
    mobius,
    normalized_kernel_eval,
    space_norm,
)
from .frames import (
    Exhaustion,
    FrameSpec,
    LocalizationWeightSpec,
    TailProfile,
    compactness_verdict,
    family_tail_profile,
    frame_coeff,
    frame_localization_check,
    mazur_form,
    parseval_defect,
    tail_mass,
    umbrella_capacity,
)
from .besov import (
    BesovSpec,
    besov_norm,
    besov_tail,
    bp_admissibility,
    family_besov_profile,
)
from .operators import (
    DiagnosticReport,
    SymbolField,
    TruncatedOperator,
    berezin_boundary_profile,
    berezin_operator,
    berezin_symbol,
    berezin_truncation_remainder,
    compactness_report,
    essential_surrogate,
    hankel_matrix,
    hankel_oracle,
    localization_integrals,
    toeplitz_matrix,
    vmo_modulus,
)
from .euclid import (
    SampledSignal,
    STFTField,
    bandlimited_kernel,
    default_window,
    fourier_tail,
    l2_tail,
    pw_tail,
    stft_field,
    stft_grid,
    stft_tail,
    translation_modulus,
    unit_gaussian,
)
