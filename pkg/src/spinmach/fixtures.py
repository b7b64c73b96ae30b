"""Deterministic synthetic series for demos, CLI smoke runs, and tests."""

from __future__ import annotations

import datetime
from importlib import resources

import numpy as np

from .ingest import PricePoint, PriceSeries, parse_csv


def make_series(
    closes,
    symbol: str = "synthetic",
    start_ordinal: int = 1,
    with_dates: bool = True,
) -> PriceSeries:
    """Wrap a close vector as a PriceSeries with sequential ordinals/dates."""
    closes = np.asarray(closes, dtype=float)
    points = tuple(
        PricePoint(date_ordinal=start_ordinal + k, close=float(c))
        for k, c in enumerate(closes)
    )
    dates: tuple[str, ...] = ()
    if with_dates:
        base = datetime.date(2000, 1, 3)
        dates = tuple(
            (base + datetime.timedelta(days=k)).isoformat() for k in range(len(points))
        )
    return PriceSeries(symbol=symbol, points=points, dates=dates)


def random_walk_closes(
    n: int, seed: int, start: float = 1000.0, vol: float = 0.01
) -> np.ndarray:
    """Geometric random walk: strictly positive, martingale directions."""
    rng = np.random.default_rng(seed)
    steps = rng.normal(0.0, vol, size=n - 1)
    return start * np.exp(np.concatenate(([0.0], np.cumsum(steps))))


def random_walk_series(
    n: int, seed: int, start: float = 1000.0, vol: float = 0.01, symbol: str = "walk"
) -> PriceSeries:
    return make_series(random_walk_closes(n, seed, start, vol), symbol=symbol)


def am_closes(
    n: int,
    carrier_cycles: float,
    modulator_cycles: float,
    depth: float = 0.5,
    offset: float = 100.0,
    scale: float = 10.0,
) -> np.ndarray:
    """Amplitude-modulated tone shifted positive so it can pose as closes."""
    t = np.arange(n)
    carrier = np.cos(2.0 * np.pi * carrier_cycles * t / n)
    modulator = 1.0 + depth * np.cos(2.0 * np.pi * modulator_cycles * t / n)
    return offset + scale * modulator * carrier


def bundled_walk_path() -> str:
    """Filesystem path of the packaged synthetic walk CSV."""
    return str(resources.files("spinmach").joinpath("data/synthetic_walk.csv"))


def bundled_walk_series() -> PriceSeries:
    with open(bundled_walk_path(), "rb") as fh:
        return parse_csv(fh.read(), symbol="synthetic_walk")
