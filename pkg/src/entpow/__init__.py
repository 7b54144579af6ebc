"""Operator entanglement and entangling power of kicked Ising Floquet operators."""

__version__ = "0.1.0"

from .entangling_power import EpEstimate, ep_linear_exact, ep_monte_carlo, entangling_power_series
from .floquet import FieldConfig, build_floquet, floquet_power
from .integrable import ExactMeasures, build_nonlocal_factor, exact_measures
from .op_entanglement import (
    MeasureSeries,
    SchmidtSpectrum,
    entanglement_entropies,
    measure_series,
    operator_schmidt_spectrum,
    swap_operator,
)
from .rmt import RmtPrediction, rmt_predictions, rmt_trajectory, sample_cue
from .spectral import SpectralReport, check_false_trs, number_variance, parity_sectors, spacing_statistics
from .tensor_core import Bipartition, eigenphases_unitary, kron, partial_trace_b, realign, svd_singular_values

__all__ = [
    "Bipartition",
    "EpEstimate",
    "ExactMeasures",
    "FieldConfig",
    "MeasureSeries",
    "RmtPrediction",
    "SchmidtSpectrum",
    "SpectralReport",
    "build_floquet",
    "build_nonlocal_factor",
    "check_false_trs",
    "eigenphases_unitary",
    "entangling_power_series",
    "entanglement_entropies",
    "ep_linear_exact",
    "ep_monte_carlo",
    "exact_measures",
    "floquet_power",
    "kron",
    "measure_series",
    "number_variance",
    "operator_schmidt_spectrum",
    "parity_sectors",
    "partial_trace_b",
    "realign",
    "rmt_predictions",
    "rmt_trajectory",
    "sample_cue",
    "spacing_statistics",
    "svd_singular_values",
    "swap_operator",
]
