"""Flat key=value run configuration with typed keys and strict validation.

Layering order: built-in defaults, then a config file, then the --input /
--out / --seed flags, then --set overrides. Unknown keys are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from . import backtest, classify
from .emd import SiftConfig
from .errors import ConfigError, ValidationError
from .ingest import PriceSeries, SplitSpec


@dataclass
class RunConfig:
    input_path: str = ""
    out_dir: str = "out"
    seed: int = 0
    strategy_kind: str = "SVM"
    strategy_kernel: str = "linear"
    strategy_gamma: float = 0.05
    strategy_c: float = 1.0
    strategy_lags: int = 5
    strategy_theta_star: float = math.pi / 4.0
    strategy_horizon: int = 0  # 0 = determined by the strategy kind
    compare_kind: str = "SSM_ANGLE"
    compare_kernel: str = "linear"
    compare_gamma: float = 0.05
    compare_c: float = 1.0
    compare_lags: int = 5
    compare_theta_star: float = math.pi / 4.0
    compare_horizon: int = 0
    emd_sd_threshold: float = 0.2
    emd_max_sift_iters: int = 50
    emd_max_imfs: int = 12
    hhsa_layers: int = 4
    hhsa_gate_tau: float = 1.0
    hhsa_gate_window: int = 20
    split_train_start: int = 0  # all four 0 = auto 70/30 split
    split_train_end: int = 0
    split_test_start: int = 0
    split_test_end: int = 0
    svm_tol: float = 1e-3
    svm_max_passes: int = 10


# key name in files/--set  ->  (attribute, type)
KEY_TABLE: dict[str, tuple[str, type]] = {
    "input": ("input_path", str),
    "out": ("out_dir", str),
    "seed": ("seed", int),
    "strategy.kind": ("strategy_kind", str),
    "strategy.kernel": ("strategy_kernel", str),
    "strategy.gamma": ("strategy_gamma", float),
    "strategy.c": ("strategy_c", float),
    "strategy.lags": ("strategy_lags", int),
    "strategy.theta_star": ("strategy_theta_star", float),
    "strategy.horizon": ("strategy_horizon", int),
    "compare.kind": ("compare_kind", str),
    "compare.kernel": ("compare_kernel", str),
    "compare.gamma": ("compare_gamma", float),
    "compare.c": ("compare_c", float),
    "compare.lags": ("compare_lags", int),
    "compare.theta_star": ("compare_theta_star", float),
    "compare.horizon": ("compare_horizon", int),
    "emd.sd_threshold": ("emd_sd_threshold", float),
    "emd.max_sift_iters": ("emd_max_sift_iters", int),
    "emd.max_imfs": ("emd_max_imfs", int),
    "hhsa.layers": ("hhsa_layers", int),
    "hhsa.gate_tau": ("hhsa_gate_tau", float),
    "hhsa.gate_window": ("hhsa_gate_window", int),
    "split.train_start": ("split_train_start", int),
    "split.train_end": ("split_train_end", int),
    "split.test_start": ("split_test_start", int),
    "split.test_end": ("split_test_end", int),
    "svm.tol": ("svm_tol", float),
    "svm.max_passes": ("svm_max_passes", int),
}

_ATTR_TO_KEY = {attr: key for key, (attr, _) in KEY_TABLE.items()}


def set_key(cfg: RunConfig, key: str, value: str) -> None:
    """Apply one `key=value` assignment, with type conversion."""
    if key not in KEY_TABLE:
        raise ConfigError(f"unknown config key {key!r}")
    attr, typ = KEY_TABLE[key]
    try:
        setattr(cfg, attr, typ(value))
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({typ.__name__})") from exc


def apply_file(cfg: RunConfig, text: str) -> None:
    """Apply a key=value config file (#-comments and blank lines allowed)."""
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        set_key(cfg, key.strip(), value.strip())


def dump(cfg: RunConfig) -> str:
    """Emit the effective configuration; re-parsing recreates it exactly."""
    lines = []
    for f in fields(RunConfig):
        key = _ATTR_TO_KEY[f.name]
        value = getattr(cfg, f.name)
        lines.append(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")
    return "\n".join(sorted(lines)) + "\n"


def _kernel_of(kind: str, gamma: float) -> classify.KernelSpec | None:
    if kind == "linear":
        return classify.KernelSpec("linear")
    if kind == "rbs":
        return classify.KernelSpec("rbs", gamma)
    raise ConfigError(f"unknown kernel kind {kind!r}")


def strategy_spec(cfg: RunConfig, prefix: str = "strategy") -> backtest.StrategySpec:
    """Build the (validated) strategy from the `strategy.*` or `compare.*` keys."""
    get = lambda name: getattr(cfg, f"{prefix}_{name}")
    kind_name = get("kind")
    try:
        kind = backtest.StrategyKind(kind_name)
    except ValueError:
        valid = ", ".join(k.value for k in backtest.StrategyKind)
        raise ConfigError(f"unknown strategy kind {kind_name!r} (valid: {valid})")
    needs_kernel = kind in (
        backtest.StrategyKind.SVM,
        backtest.StrategyKind.HT_SVM,
        backtest.StrategyKind.HT_SSM,
    )
    kernel = _kernel_of(get("kernel"), get("gamma")) if needs_kernel else None
    horizon = get("horizon") or None
    try:
        return backtest.StrategySpec(
            kind=kind,
            kernel=kernel,
            horizon=horizon,
            feature_lags=get("lags"),
            theta_star=get("theta_star"),
            c_param=get("c"),
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def sift_config(cfg: RunConfig) -> SiftConfig:
    try:
        return SiftConfig(
            sd_threshold=cfg.emd_sd_threshold,
            max_sift_iters=cfg.emd_max_sift_iters,
            max_imfs=cfg.emd_max_imfs,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def backtest_config(cfg: RunConfig) -> backtest.BacktestConfig:
    try:
        return backtest.BacktestConfig(
            sift=sift_config(cfg),
            layers=cfg.hhsa_layers,
            gate_window=cfg.hhsa_gate_window,
            gate_tau=cfg.hhsa_gate_tau,
            svm_tol=cfg.svm_tol,
            svm_max_passes=cfg.svm_max_passes,
            seed=cfg.seed,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def split_spec(cfg: RunConfig, series: PriceSeries) -> SplitSpec:
    """Explicit split ordinals, or an automatic 70/30 cut when all are 0."""
    keys = (
        cfg.split_train_start,
        cfg.split_train_end,
        cfg.split_test_start,
        cfg.split_test_end,
    )
    if all(k == 0 for k in keys):
        lo, hi = series.first_ordinal, series.last_ordinal
        cut = lo + int((hi - lo) * 0.7)
        return SplitSpec(lo, cut, cut + 1, hi)
    if any(k == 0 for k in keys):
        raise ConfigError("either set all four split.* ordinals or none")
    try:
        return SplitSpec(*keys)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
