"""spinmach: adaptive decomposition and complex-plane directional classifiers.

The pipeline: ingest close prices, decompose them into intrinsic modes,
embed the oscillatory part in the complex plane via the Hilbert transform,
grow amplitude-modulation layers on top, label states, classify direction
with either a kernel machine (trained by a from-scratch SMO solver) or the
parameter-free diameter rule, and score everything in a walk-forward
backtest with exact profit accounting.
"""

from .backtest import (
    BacktestConfig,
    BacktestReport,
    Prediction,
    StrategyKind,
    StrategySpec,
    accuracy_of,
    improved_performance,
    profit_of,
    run,
)
from .classify import (
    AngleClassifier,
    KernelSpec,
    SpinorFeatures,
    SvmModel,
    hyperbolic_distance,
    kernel_eval,
    smo_train,
    spinor_features,
    ssm_angle_predict,
    svm_predict,
)
from .emd import (
    EmdResult,
    Imf,
    SiftConfig,
    decompose,
    extract_imf,
    local_extrema,
    sift_once,
    spline_envelope,
)
from .hhsa import (
    HoloLayer,
    HoloStack,
    am2_signal,
    dominant_frequency,
    envelope_of_abs,
    holo_decompose,
)
from .ingest import (
    LabelSeries,
    PricePoint,
    PriceSeries,
    SplitSpec,
    log_return_window,
    make_labels,
    parse_csv,
    split,
)
from .spectral import (
    AnalyticSeries,
    InstAttr,
    hilbert_analytic,
    ichain_embed,
    inst_attributes,
)
from .states import (
    GateDecision,
    HiddenState,
    PhysiologyState,
    gate,
    hidden_of,
    physiology_of,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSeries",
    "AngleClassifier",
    "BacktestConfig",
    "BacktestReport",
    "EmdResult",
    "GateDecision",
    "HiddenState",
    "HoloLayer",
    "HoloStack",
    "Imf",
    "InstAttr",
    "KernelSpec",
    "LabelSeries",
    "PhysiologyState",
    "Prediction",
    "PricePoint",
    "PriceSeries",
    "SiftConfig",
    "SpinorFeatures",
    "SplitSpec",
    "StrategyKind",
    "StrategySpec",
    "SvmModel",
    "accuracy_of",
    "am2_signal",
    "decompose",
    "dominant_frequency",
    "envelope_of_abs",
    "extract_imf",
    "gate",
    "hidden_of",
    "hilbert_analytic",
    "holo_decompose",
    "hyperbolic_distance",
    "ichain_embed",
    "improved_performance",
    "inst_attributes",
    "kernel_eval",
    "local_extrema",
    "log_return_window",
    "make_labels",
    "parse_csv",
    "physiology_of",
    "profit_of",
    "run",
    "sift_once",
    "smo_train",
    "spinor_features",
    "spline_envelope",
    "split",
    "ssm_angle_predict",
    "svm_predict",
]
