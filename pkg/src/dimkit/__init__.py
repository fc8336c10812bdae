"""Exact complexity measures for finite function classes.

Eluder dimension, star number and threshold dimension (combinatorial and
scale-sensitive), VC and Littlestone dimensions, generalized-rank
certificates and bounds, Ramsey extraction, and seeded random constructions.
"""

__version__ = "0.1.0"

from .classes import (  # noqa: E402
    FunctionClassTable,
    ReferenceFunction,
    gen_exp_class,
    gen_parities,
    gen_scale_counterexample,
    gen_singletons,
    gen_thresholds,
    load_class,
    parse_class,
    serialize_class,
)
from .combodim import (  # noqa: E402
    dim_comb,
    dim_sup_over_refs,
    edim_comb,
    ldim,
    sdim_comb,
    tdim_comb,
    vcdim,
)
from .errors import (  # noqa: E402
    ConstructionFailure,
    DimkitError,
    InvalidCertificate,
    InvalidClique,
    InvalidParameter,
    InvalidWitness,
    ParseError,
    ResourceLimit,
    SearchFailure,
    WrongKind,
)
from .kernels import BACKEND  # noqa: E402
from .scaledim import (  # noqa: E402
    ScaleSearchConfig,
    dim_scale,
    dim_sup_over_scales,
    edim_scale,
    sdim_scale,
    tdim_scale,
)
from .witness import DimensionReport, WitnessSequence, verify_witness  # noqa: E402

__all__ = [
    "__version__", "BACKEND",
    "FunctionClassTable", "ReferenceFunction", "WitnessSequence", "DimensionReport",
    "gen_thresholds", "gen_singletons", "gen_parities", "gen_scale_counterexample",
    "gen_exp_class", "parse_class", "serialize_class", "load_class",
    "dim_comb", "edim_comb", "sdim_comb", "tdim_comb", "dim_sup_over_refs", "vcdim", "ldim",
    "ScaleSearchConfig", "dim_scale", "edim_scale", "sdim_scale", "tdim_scale",
    "dim_sup_over_scales", "verify_witness",
    "DimkitError", "InvalidParameter", "ParseError", "WrongKind", "ResourceLimit",
    "InvalidWitness", "InvalidCertificate", "InvalidClique", "ConstructionFailure",
    "SearchFailure",
]
