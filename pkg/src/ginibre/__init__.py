"""Ensemble averages of multiplicative class functions over the real and
complex Ginibre ensembles, with Monte Carlo and combinatorial cross-checks."""

__version__ = "0.1.0"

from .antisym import (
    AntisymmetricMatrix,
    PfaffianResult,
    pfaffian,
    pfaffian_combinatorial,
    pfaffian_elimination,
)
from .averages import (
    EnsembleAverage,
    average_ginoe,
    average_ginoe_parity,
    average_ginoe_skew,
    average_ginue,
    average_ginue_orth,
    build_u_matrix,
    constant_c,
    constant_d,
    skew_orthogonalize,
)
from .quadrature import QuadratureConfig
from .sampler import mc_average
from .weights import CompleteFamily, MonicPolynomial, PsiSpec

__all__ = [
    "AntisymmetricMatrix",
    "CompleteFamily",
    "EnsembleAverage",
    "MonicPolynomial",
    "PfaffianResult",
    "PsiSpec",
    "QuadratureConfig",
    "average_ginoe",
    "average_ginoe_parity",
    "average_ginoe_skew",
    "average_ginue",
    "average_ginue_orth",
    "build_u_matrix",
    "constant_c",
    "constant_d",
    "mc_average",
    "pfaffian",
    "pfaffian_combinatorial",
    "pfaffian_elimination",
    "skew_orthogonalize",
]
