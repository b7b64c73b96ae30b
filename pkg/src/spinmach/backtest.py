"""Walk-forward directional-prediction harness.

One static training pass on the training range, then one prediction per
out-of-sample day built strictly from data up to and including that day.
Scoring: a prediction of the move into `target` is correct when its sign
matches close(target) - close(target - 1); profit is direction times that
move, in index points. Gated strategies contribute "no signal" rows that
are excluded from the accuracy denominator and earn zero profit.

Strategy kinds
  SVM       kernel machine on trailing log-return windows of the closes
  HT_SVM    kernel machine on raw (re, im) lag pairs of the complex embedding
  HT_SSM    kernel machine on unit-normalized (spinor) embedding lag pairs
  SSM_ANGLE parameter-free diameter rule at theta_star on the embedding end point
  HHSA_AM2  gated two-day-ahead sign of the layer-2 envelope end-point slope
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import classify, hhsa, spectral, states
from .emd import SiftConfig
from .errors import (
    BoundsError,
    InsufficientDataError,
    UndefinedValueError,
    ValidationError,
)
from .ingest import PriceSeries, SplitSpec, log_return_window, make_labels, split


class StrategyKind(enum.Enum):
    SVM = "SVM"
    HT_SVM = "HT_SVM"
    SSM_ANGLE = "SSM_ANGLE"
    HT_SSM = "HT_SSM"
    HHSA_AM2 = "HHSA_AM2"


_KERNEL_KINDS = (StrategyKind.SVM, StrategyKind.HT_SVM, StrategyKind.HT_SSM)


@dataclass(frozen=True)
class StrategySpec:
    """What to run: strategy kind, kernel (where applicable), lags, horizon.

    The horizon is determined by the kind (2 for HHSA_AM2, 1 otherwise);
    passing it explicitly is allowed but must agree.
    """

    kind: StrategyKind
    kernel: classify.KernelSpec | None = None
    horizon: int | None = None
    feature_lags: int = 5
    theta_star: float = math.pi / 4.0
    c_param: float = 1.0

    def __post_init__(self) -> None:
        required = 2 if self.kind is StrategyKind.HHSA_AM2 else 1
        if self.horizon is None:
            object.__setattr__(self, "horizon", required)
        elif self.horizon != required:
            raise ValidationError(
                f"{self.kind.value} requires horizon {required}, got {self.horizon}"
            )
        if self.kind in _KERNEL_KINDS:
            if self.kernel is None:
                raise ValidationError(f"{self.kind.value} requires a kernel spec")
        if self.feature_lags < 1:
            raise ValidationError("feature_lags must be >= 1")
        if self.c_param <= 0:
            raise ValidationError("c_param must be positive")


@dataclass(frozen=True)
class BacktestConfig:
    """Module knobs shared by every strategy run."""

    sift: SiftConfig = SiftConfig()
    layers: int = 4
    gate_window: int = 20
    gate_tau: float = 1.0
    svm_tol: float = 1e-3
    svm_max_passes: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.layers < 1:
            raise ValidationError("layers must be >= 1")
        if self.gate_window < 4:
            raise ValidationError("gate_window must be >= 4")


@dataclass(frozen=True)
class Prediction:
    """A directional call: emitted on signal_ordinal, about target_ordinal."""

    signal_ordinal: int
    target_ordinal: int
    direction: int
    emitted: bool = True

    def __post_init__(self) -> None:
        if self.direction not in (-1, 1):
            raise ValidationError("direction must be +1 or -1")
        if self.target_ordinal <= self.signal_ordinal:
            raise ValidationError("target must lie after the signal day")


@dataclass(frozen=True)
class ReportRow:
    date_number: int
    close: float
    signal: int  # +1 / -1, 0 for a no-signal day
    emitted: bool
    correct: bool | None
    profit: float
    state: str
    target_ordinal: int


@dataclass(frozen=True)
class BacktestReport:
    strategy: StrategySpec
    symbol: str
    n_signals: int
    n_correct: int
    accuracy: float  # percent over emitted signals; nan when none emitted
    profit: float
    rows: tuple[ReportRow, ...]


@dataclass(frozen=True)
class ConstantModel:
    """Fallback when training labels are single-class: always that class."""

    direction: int


def profit_of(prediction: Prediction, series: PriceSeries) -> float:
    """direction * (close(target) - close(target-1)); 0 for no-signal days."""
    if not prediction.emitted:
        return 0.0
    c1 = series.close_at(prediction.target_ordinal - 1)
    c2 = series.close_at(prediction.target_ordinal)
    return prediction.direction * (c2 - c1)


def is_correct(prediction: Prediction, series: PriceSeries) -> bool | None:
    """Whether the realized move matched; a zero move counts as incorrect.

    None for no-signal predictions (they are outside the accuracy base).
    """
    if not prediction.emitted:
        return None
    c1 = series.close_at(prediction.target_ordinal - 1)
    c2 = series.close_at(prediction.target_ordinal)
    delta = c2 - c1
    if delta == 0.0:
        return False
    return (delta > 0.0) == (prediction.direction > 0)


def improved_performance(p_base: float, p_new: float) -> float:
    """Relative accuracy gain 100*(p_new - p_base)/p_base, in percent."""
    if p_base == 0.0:
        raise UndefinedValueError("improvement over a zero base accuracy is undefined")
    return 100.0 * (p_new - p_base) / p_base


def accuracy_of(rows) -> float:
    """100 * correct / emitted over report rows; no-signal rows are excluded."""
    emitted = [r for r in rows if r.emitted]
    if not emitted:
        raise UndefinedValueError("no emitted signals; accuracy undefined")
    n_correct = sum(1 for r in emitted if r.correct)
    return 100.0 * n_correct / len(emitted)


def fit(
    strategy: StrategySpec,
    series: PriceSeries,
    split_spec: SplitSpec,
    cfg: BacktestConfig = BacktestConfig(),
):
    """Train the strategy's model once on the training range.

    Returns an SvmModel for the kernel strategies (or a ConstantModel when
    the training window contains a single direction only), an
    AngleClassifier for SSM_ANGLE, and None for HHSA_AM2 (no trained state).
    """
    train, _ = split(series, split_spec)
    if strategy.kind is StrategyKind.SSM_ANGLE:
        return classify.AngleClassifier(strategy.theta_star)
    if strategy.kind is StrategyKind.HHSA_AM2:
        return None

    m = strategy.feature_lags
    labels = make_labels(train)
    rows: list[np.ndarray] = []
    ys: list[int] = []
    if strategy.kind is StrategyKind.SVM:
        for t in range(split_spec.train_start + m, split_spec.train_end):
            rows.append(log_return_window(train, t, m))
            ys.append(labels.label_at(t))
    else:
        z = spectral.ichain_embed(train, cfg.sift)
        for t in range(split_spec.train_start + m - 1, split_spec.train_end):
            k = t - split_spec.train_start
            if strategy.kind is StrategyKind.HT_SSM:
                rows.append(classify.spinor_features(z, k, m).vector)
            else:
                rows.append(classify.raw_plane_features(z, k, m))
            ys.append(labels.label_at(t))
    if len(rows) < 2:
        raise InsufficientDataError(
            f"training range yields {len(rows)} samples; need >= 2"
        )
    y = np.array(ys, dtype=float)
    if np.unique(y).size < 2:
        return ConstantModel(direction=int(y[0]))
    return classify.smo_train(
        np.vstack(rows),
        y,
        strategy.kernel,
        C=strategy.c_param,
        tol=cfg.svm_tol,
        max_passes=cfg.svm_max_passes,
        seed=cfg.seed,
    )


def _predict_detail(
    strategy: StrategySpec,
    model,
    series: PriceSeries,
    t: int,
    cfg: BacktestConfig,
) -> tuple[Prediction, str]:
    """Prediction for signal day t plus the physiology state label at t.

    Only data up to and including ordinal t are consulted.
    """
    target = t + strategy.horizon
    m = strategy.feature_lags

    if strategy.kind is StrategyKind.SVM:
        x = log_return_window(series, t, m)
        direction = (
            model.direction
            if isinstance(model, ConstantModel)
            else classify.svm_predict(model, x)
        )
        return Prediction(t, target, direction), ""

    prefix = series.prefix(t)
    z = spectral.ichain_embed(prefix, cfg.sift)
    end = len(z) - 1
    state = states.physiology_of(z, end).value

    if strategy.kind is StrategyKind.SSM_ANGLE:
        direction = classify.ssm_angle_predict(model, (z.re[end], z.im[end]))
        return Prediction(t, target, direction), state

    if strategy.kind is StrategyKind.HHSA_AM2:
        stack = hhsa.holo_decompose(z.re, cfg.layers, cfg.sift)
        decision = states.gate(stack, end, cfg.gate_window, cfg.gate_tau)
        if not decision.emit:
            return Prediction(t, target, 1, emitted=False), state
        slope = hhsa.am2_signal(stack, end)
        direction = -1 if slope < 0.0 else 1
        return Prediction(t, target, direction), state

    if strategy.kind is StrategyKind.HT_SSM:
        x = classify.spinor_features(z, end, m).vector
    else:
        x = classify.raw_plane_features(z, end, m)
    direction = (
        model.direction
        if isinstance(model, ConstantModel)
        else classify.svm_predict(model, x)
    )
    return Prediction(t, target, direction), state


def predict_at(
    strategy: StrategySpec,
    model,
    series: PriceSeries,
    t: int,
    cfg: BacktestConfig = BacktestConfig(),
) -> Prediction:
    """The prediction the strategy emits at signal day t (no lookahead)."""
    return _predict_detail(strategy, model, series, t, cfg)[0]


def run(
    strategy: StrategySpec,
    series: PriceSeries,
    split_spec: SplitSpec,
    cfg: BacktestConfig = BacktestConfig(),
) -> BacktestReport:
    """Train once, predict each out-of-sample day, score against realized moves.

    Out-of-sample days whose target ordinal falls outside the series are not
    scoreable and produce no row.
    """
    model = fit(strategy, series, split_spec, cfg)
    _, test = split(series, split_spec)

    rows: list[ReportRow] = []
    for point in test.points:
        t = point.date_ordinal
        target = t + strategy.horizon
        if target > series.last_ordinal:
            continue
        pred, state = _predict_detail(strategy, model, series, t, cfg)
        profit = profit_of(pred, series)
        correct = is_correct(pred, series)
        rows.append(
            ReportRow(
                date_number=t,
                close=point.close,
                signal=pred.direction if pred.emitted else 0,
                emitted=pred.emitted,
                correct=correct,
                profit=profit,
                state=state,
                target_ordinal=target,
            )
        )

    emitted = [r for r in rows if r.emitted]
    n_signals = len(emitted)
    n_correct = sum(1 for r in emitted if r.correct)
    profit = 0.0
    for r in rows:
        profit += r.profit
    accuracy = 100.0 * n_correct / n_signals if n_signals else math.nan
    return BacktestReport(
        strategy=strategy,
        symbol=series.symbol,
        n_signals=n_signals,
        n_correct=n_correct,
        accuracy=accuracy,
        profit=profit,
        rows=tuple(rows),
    )


def kernel_label(spec: classify.KernelSpec | None) -> str:
    if spec is None:
        return "-"
    if spec.kind == "rbs":
        return f"rbs({spec.gamma:g})"
    return "linear"


def summary_csv(report: BacktestReport, improved: float | None = None) -> str:
    """One-line summary: symbol,kernel,days,performance_pct,profit,improved_pct."""
    buf = io.StringIO()
    buf.write("symbol,kernel,days,performance_pct,profit,improved_pct\n")
    buf.write(_summary_row(report, improved) + "\n")
    return buf.getvalue()


def _summary_row(report: BacktestReport, improved: float | None) -> str:
    acc = "" if math.isnan(report.accuracy) else f"{report.accuracy:.2f}"
    imp = "" if improved is None else (
        "undefined" if math.isnan(improved) else f"{improved:.2f}"
    )
    return (
        f"{report.symbol},{kernel_label(report.strategy.kernel)},"
        f"{len(report.rows)},{acc},{report.profit!r},{imp}"
    )


def compare_csv(base: BacktestReport, new: BacktestReport) -> str:
    """Two summary rows; the second carries the improvement over the first."""
    try:
        improved = improved_performance(base.accuracy, new.accuracy)
        if math.isnan(improved):
            raise UndefinedValueError("nan accuracy")
    except UndefinedValueError:
        improved = math.nan
    buf = io.StringIO()
    buf.write("symbol,kernel,days,performance_pct,profit,improved_pct\n")
    buf.write(_summary_row(base, None) + "\n")
    buf.write(_summary_row(new, improved) + "\n")
    return buf.getvalue()


def ledger_csv(report: BacktestReport) -> str:
    """Per-day ledger: date_number,close,signal,result,profit,state."""
    buf = io.StringIO()
    buf.write("date_number,close,signal,result,profit,state\n")
    for r in report.rows:
        if not r.emitted:
            signal, result, profit = "no signal", "", ""
        else:
            arrow = "up" if r.signal > 0 else "down"
            signal = f"{arrow}(forecast {r.target_ordinal})"
            result = "correct" if r.correct else "wrong"
            profit = repr(r.profit)
        buf.write(f"{r.date_number},{r.close!r},{signal},{result},{profit},{r.state}\n")
    return buf.getvalue()


def report_json(report: BacktestReport) -> str:
    """JSON mirror of the summary and the per-day ledger."""
    doc = {
        "summary": {
            "symbol": report.symbol,
            "strategy": report.strategy.kind.value,
            "kernel": kernel_label(report.strategy.kernel),
            "horizon": report.strategy.horizon,
            "days": len(report.rows),
            "n_signals": report.n_signals,
            "n_correct": report.n_correct,
            "performance_pct": None if math.isnan(report.accuracy) else report.accuracy,
            "profit": report.profit,
        },
        "rows": [
            {
                "date_number": r.date_number,
                "close": r.close,
                "signal": r.signal,
                "emitted": r.emitted,
                "correct": r.correct,
                "profit": r.profit,
                "state": r.state,
                "target": r.target_ordinal,
            }
            for r in report.rows
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
