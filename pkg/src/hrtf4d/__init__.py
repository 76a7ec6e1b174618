"""Fitting magnitude directivity data (HRTF sets) to 4D continuous bases.

Four basis families over direction and frequency are supported: hyperspherical
harmonics and three spherical-harmonic-times-1D-series constructions (cosine
Fourier, Fourier-Bessel and reversed Fourier-Bessel). Coefficient sets are
obtained by one large weighted least-squares fit and can be decoded at any
direction and frequency; evaluation tooling covers MSE maps, subject
representatives and Pareto analysis of order choices.
"""

from .basis import (
    BasisConfig,
    BasisFamily,
    BasisIndex,
    count_hsh,
    count_scs,
    eval_basis,
    index_set,
    matched_eta,
    psi_of_f,
)
from .dataset import (
    Direction,
    HrirSet,
    MagnitudeSet,
    flip_right_ear,
    hearing_range_mask,
    load_hrir,
    magnitude_spectra,
)
from .errors import (
    DimensionMismatchError,
    DomainError,
    ManifestError,
    MemoryBudgetError,
    UnderdeterminedError,
    ZeroDenominatorError,
)
from .evaluation import (
    ErrorReport,
    SweepEntry,
    SweepResult,
    ard_are,
    mse,
    mse_by_direction,
    mse_by_frequency,
    overall_mse,
    pareto_frontier,
    sweep,
)
from .fitting import (
    CoefficientSet,
    SamplePoint,
    WeightSpec,
    assemble_design_matrix,
    decode,
    fit,
    load_coefficients,
    save_coefficients,
    weight,
)
from .special import assoc_legendre, bessel_j0, bessel_j0_root, gegenbauer, real_sh

__version__ = "0.1.0"

__all__ = [
    "BasisConfig",
    "BasisFamily",
    "BasisIndex",
    "CoefficientSet",
    "DimensionMismatchError",
    "Direction",
    "DomainError",
    "ErrorReport",
    "HrirSet",
    "MagnitudeSet",
    "ManifestError",
    "MemoryBudgetError",
    "SamplePoint",
    "SweepEntry",
    "SweepResult",
    "UnderdeterminedError",
    "WeightSpec",
    "ZeroDenominatorError",
    "ard_are",
    "assemble_design_matrix",
    "assoc_legendre",
    "bessel_j0",
    "bessel_j0_root",
    "count_hsh",
    "count_scs",
    "decode",
    "eval_basis",
    "fit",
    "flip_right_ear",
    "gegenbauer",
    "hearing_range_mask",
    "index_set",
    "load_coefficients",
    "load_hrir",
    "magnitude_spectra",
    "matched_eta",
    "mse",
    "mse_by_direction",
    "mse_by_frequency",
    "overall_mse",
    "pareto_frontier",
    "psi_of_f",
    "real_sh",
    "save_coefficients",
    "sweep",
    "weight",
]
