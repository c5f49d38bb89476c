"""Truncated power series, symmetric multilinear forms and convergence tests."""

from .complexq import I, ComplexRational
from .composition import (
    CurveCoefficients,
    JetOfMap,
    PartitionMultiset,
    compose_jet,
    enumerate_partitions,
    faa_di_bruno_oracle,
    majorant_estimate_check,
    multinomial_partition_sum,
)
from .convergence import (
    CurveJet,
    GermFamily,
    WeightSeq,
    curve_analyticity_test,
    divergence_combination,
    nonanalytic_witness,
    radius_lower_bound,
    weight_boundedness_test,
)
from .multilinear import SymForm, eval_sym, polarize_binom, polarize_eps, polarize_scaled
from .seq_spaces import PolyRadius, WeightedElement, bounded_family_test, cauchy_coeff_bound, inclusion_norm_bound, lpr_norm
from .series import FLOAT64, RATIONAL, TruncatedSeries, cauchy_product, evaluate_with_tail_bound, series_add, series_derivative

__version__ = "0.1.0"

__all__ = [
    "ComplexRational",
    "CurveCoefficients",
    "CurveJet",
    "FLOAT64",
    "GermFamily",
    "I",
    "JetOfMap",
    "PartitionMultiset",
    "PolyRadius",
    "RATIONAL",
    "SymForm",
    "TruncatedSeries",
    "WeightSeq",
    "WeightedElement",
    "bounded_family_test",
    "cauchy_coeff_bound",
    "cauchy_product",
    "compose_jet",
    "curve_analyticity_test",
    "divergence_combination",
    "enumerate_partitions",
    "eval_sym",
    "evaluate_with_tail_bound",
    "faa_di_bruno_oracle",
    "inclusion_norm_bound",
    "lpr_norm",
    "majorant_estimate_check",
    "multinomial_partition_sum",
    "nonanalytic_witness",
    "polarize_binom",
    "polarize_eps",
    "polarize_scaled",
    "radius_lower_bound",
    "series_add",
    "series_derivative",
    "weight_boundedness_test",
]
