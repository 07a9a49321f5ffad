"""Regularized factorization method for delamination imaging in the unit disk.

The pipeline builds the current-gap operator of a concentric circular defect
with a generalized Robin transmission condition, perturbs it with relative
noise, and images the defect with a spectral cut-off indicator.
"""

from .errors import (
    DegenerateParameterError,
    EmptySpectrumError,
    NumericalError,
    ValidationError,
)
from .forward import (
    BoundaryParams,
    DiskGeometry,
    kernel_matrix,
    mode_symbols,
    sigma0,
    sigma_gap,
    sigma_n,
)
from .data import (
    NoiseModel,
    OperatorMatrix,
    SvdFactors,
    add_noise,
    imaginary_part,
    read_matrix_csv,
    svd,
    write_matrix_csv,
)
from .sampling import (
    FilterSpec,
    IndicatorField,
    LevelSet,
    SamplePoint,
    indicator,
    level_set,
    probe,
    scan,
    separation_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryParams",
    "DegenerateParameterError",
    "DiskGeometry",
    "EmptySpectrumError",
    "FilterSpec",
    "IndicatorField",
    "LevelSet",
    "NoiseModel",
    "NumericalError",
    "OperatorMatrix",
    "SamplePoint",
    "SvdFactors",
    "ValidationError",
    "add_noise",
    "imaginary_part",
    "indicator",
    "kernel_matrix",
    "level_set",
    "mode_symbols",
    "probe",
    "read_matrix_csv",
    "scan",
    "separation_ratio",
    "sigma0",
    "sigma_gap",
    "sigma_n",
    "svd",
    "write_matrix_csv",
]
