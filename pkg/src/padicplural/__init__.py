"""Noun pluralisation as linear regression under a p-adic metric."""
from .padic import INFINITY, check_prime, padic_distance, padic_norm, valuation
from .regress import (
    AlgorithmSpec,
    DataPoint,
    FitResult,
    Line,
    Variant,
    fit_padic,
    fit_siegel,
    neighbors,
    predict,
    predict_word,
    residual_sum_padic,
)
from .wordcode import EncodedWord, decode, encode, suffix_agreement

__all__ = [
    "INFINITY", "check_prime", "padic_distance", "padic_norm", "valuation",
    "AlgorithmSpec", "DataPoint", "FitResult", "Line", "Variant", "fit_padic", "fit_siegel",
    "neighbors", "predict", "predict_word", "residual_sum_padic",
    "EncodedWord", "decode", "encode", "suffix_agreement",
]
