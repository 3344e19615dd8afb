"""Certified continued-fraction machinery for shrinking-target problems.

Exact Gauss-map/cylinder arithmetic, directed-rounding enclosures of the
continuant power sums, certified pre-dimension root finding, pressure
estimates, shrinking-target covers and mass-distribution witnesses.
"""

__version__ = "0.1.0"

from .cf_core import (
    Continuants,
    CylinderInterval,
    Word,
    compare_cylinders,
    continuants,
    cylinder,
    eval_word,
    expand,
    gauss_step,
)
from .massdist import (
    CASE_I,
    CASE_II,
    CASE_III,
    Ball,
    ContentReport,
    FundamentalInterval,
    GapReport,
    HolderReport,
    MassBoundsReport,
    SpotcheckReport,
    WitnessMeasure,
    WitnessParams,
    build_witness,
    content_lower_bound,
    dump_witness,
    enumerate_fundamental,
    gap_check,
    holder_check,
    holder_limit,
    holder_samples,
    mass_bounds_check,
    measure_of,
    membership_spotcheck,
    solve_finite_s,
)
from .predim import (
    PredimResult,
    SstarEstimate,
    em_dimension,
    predim_result,
    select_sn,
    solve_predim,
    sstar_estimate,
    threshold_check,
)
from .pressure import (
    PotentialSpec,
    PressureEstimate,
    PressureRootResult,
    pressure_estimate,
    pressure_root,
    variation_check,
)
from .rounding import Enclosure, enclose
from .shrink import (
    CoverReport,
    DecayReport,
    ExtremalPiece,
    HitReport,
    JIntervalBound,
    cover_decay,
    cover_svolume,
    extremal_interval,
    hit_times,
    identity_check,
    j_interval_bounds,
    membership,
)
from .targets import TargetSpec, alpha_beta, first_digit, z_value

__all__ = [
    "Ball",
    "CASE_I",
    "CASE_II",
    "CASE_III",
    "ContentReport",
    "Continuants",
    "CoverReport",
    "CylinderInterval",
    "DecayReport",
    "Enclosure",
    "ExtremalPiece",
    "FundamentalInterval",
    "GapReport",
    "HitReport",
    "HolderReport",
    "JIntervalBound",
    "MassBoundsReport",
    "PotentialSpec",
    "PredimResult",
    "PressureEstimate",
    "PressureRootResult",
    "SpotcheckReport",
    "SstarEstimate",
    "TargetSpec",
    "WitnessMeasure",
    "WitnessParams",
    "Word",
    "__version__",
    "alpha_beta",
    "build_witness",
    "compare_cylinders",
    "content_lower_bound",
    "continuants",
    "cover_decay",
    "cover_svolume",
    "cylinder",
    "dump_witness",
    "em_dimension",
    "enclose",
    "enumerate_fundamental",
    "eval_word",
    "expand",
    "extremal_interval",
    "first_digit",
    "gap_check",
    "gauss_step",
    "hit_times",
    "holder_check",
    "holder_limit",
    "holder_samples",
    "identity_check",
    "j_interval_bounds",
    "mass_bounds_check",
    "measure_of",
    "membership",
    "membership_spotcheck",
    "predim_result",
    "pressure_estimate",
    "pressure_root",
    "select_sn",
    "solve_finite_s",
    "solve_predim",
    "sstar_estimate",
    "threshold_check",
    "variation_check",
    "z_value",
]
