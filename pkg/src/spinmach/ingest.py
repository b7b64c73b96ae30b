"""Close-price ingestion: CSV parsing, direction labels, train/test splits.

Ordinals are 1-based trading-day indices assigned by row position. All
functions are pure; series objects are immutable after construction.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundsError,
    InsufficientDataError,
    ParseError,
    ValidationError,
)

CSV_HEADER = "date,close"


@dataclass(frozen=True)
class PricePoint:
    """One trading day: a 1-based day ordinal and a positive close."""

    date_ordinal: int
    close: float


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Ordered close prices with strictly increasing day ordinals.

    `dates` is optional ISO-date text kept solely so that a parsed file can be
    re-serialized bit-exactly; synthetic series may leave it empty.
    """

    symbol: str
    points: tuple[PricePoint, ...]
    dates: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.points:
            raise ValidationError("price series must contain at least one point")
        if self.dates and len(self.dates) != len(self.points):
            raise ValidationError("dates, when present, must align with points")
        prev = None
        for p in self.points:
            if not math.isfinite(p.close) or p.close <= 0:
                raise ValidationError(
                    f"close must be finite and > 0, got {p.close!r} at ordinal {p.date_ordinal}"
                )
            if prev is not None and p.date_ordinal <= prev:
                raise ValidationError(
                    f"date_ordinal must be strictly increasing, got {p.date_ordinal} after {prev}"
                )
            prev = p.date_ordinal

    def __len__(self) -> int:
        return len(self.points)

    @property
    def first_ordinal(self) -> int:
        return self.points[0].date_ordinal

    @property
    def last_ordinal(self) -> int:
        return self.points[-1].date_ordinal

    def closes(self) -> np.ndarray:
        return np.array([p.close for p in self.points], dtype=float)

    def ordinals(self) -> np.ndarray:
        return np.array([p.date_ordinal for p in self.points], dtype=int)

    def index_of(self, ordinal: int) -> int:
        """Position of `ordinal` in the series, or BoundsError."""
        lo, hi = 0, len(self.points) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            o = self.points[mid].date_ordinal
            if o == ordinal:
                return mid
            if o < ordinal:
                lo = mid + 1
            else:
                hi = mid - 1
        raise BoundsError(f"ordinal {ordinal} not in series {self.symbol!r}")

    def close_at(self, ordinal: int) -> float:
        return self.points[self.index_of(ordinal)].close

    def window(self, start: int, end: int) -> "PriceSeries":
        """Sub-series covering ordinals [start, end], ordinals preserved."""
        if start > end:
            raise BoundsError(f"empty window [{start}, {end}]")
        i = self.index_of(start)
        j = self.index_of(end)
        dates = self.dates[i : j + 1] if self.dates else ()
        return PriceSeries(self.symbol, self.points[i : j + 1], dates)

    def prefix(self, end: int) -> "PriceSeries":
        """Sub-series from the first ordinal through `end` inclusive."""
        return self.window(self.first_ordinal, end)


@dataclass(frozen=True)
class SplitSpec:
    """Inclusive train/test ordinal intervals; test strictly after train."""

    train_start: int
    train_end: int
    test_start: int
    test_end: int

    def __post_init__(self) -> None:
        if self.train_start > self.train_end:
            raise ValidationError("train range is empty")
        if self.test_start > self.test_end:
            raise ValidationError("test range is empty")
        if self.test_start <= self.train_end:
            raise ValidationError(
                "test range must start after the training range ends "
                f"(train ends {self.train_end}, test starts {self.test_start})"
            )


@dataclass(frozen=True, eq=False)
class LabelSeries:
    """Next-day direction labels in {+1, -1}, aligned to signal ordinals.

    `labels[k]` is the label for ordinal `first_ordinal + k`; `flat[k]` marks
    days whose next close was unchanged (labeled +1 by convention).
    """

    first_ordinal: int
    labels: np.ndarray
    flat: np.ndarray

    def __post_init__(self) -> None:
        if self.labels.shape != self.flat.shape:
            raise ValidationError("labels and flat flags must align")
        if not np.all(np.isin(self.labels, (-1, 1))):
            raise ValidationError("labels must be +1 or -1")

    def __len__(self) -> int:
        return len(self.labels)

    def label_at(self, ordinal: int) -> int:
        k = ordinal - self.first_ordinal
        if k < 0 or k >= len(self.labels):
            raise BoundsError(f"no label at ordinal {ordinal}")
        return int(self.labels[k])


def parse_csv(raw: bytes | str, symbol: str = "series") -> PriceSeries:
    """Parse `date,close` CSV text into a validated PriceSeries.

    Rows must be in chronological order; ordinals are assigned 1..N by row
    position. Errors carry 1-based line numbers.
    """
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}", 1) from exc
    else:
        text = raw

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)

    header = lines[0].lstrip("﻿").strip()
    if header != CSV_HEADER:
        raise ParseError(f"expected header {CSV_HEADER!r}, got {header!r}", 1)

    points: list[PricePoint] = []
    dates: list[str] = []
    prev_date: datetime.date | None = None
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.strip().split(",")
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", lineno)
        date_text, close_text = fields[0].strip(), fields[1].strip()
        try:
            d = datetime.date.fromisoformat(date_text)
        except ValueError as exc:
            raise ParseError(f"bad ISO date {date_text!r}", lineno) from exc
        try:
            close = float(close_text)
        except ValueError as exc:
            raise ParseError(f"bad close value {close_text!r}", lineno) from exc
        if not math.isfinite(close) or close <= 0:
            raise ValidationError(
                f"line {lineno}: close must be finite and > 0, got {close_text}"
            )
        if prev_date is not None and d <= prev_date:
            raise ValidationError(
                f"line {lineno}: dates out of order ({date_text} follows {prev_date.isoformat()})"
            )
        prev_date = d
        points.append(PricePoint(date_ordinal=len(points) + 1, close=close))
        dates.append(date_text)

    if not points:
        raise ParseError("no data rows", 2)
    return PriceSeries(symbol=symbol, points=tuple(points), dates=tuple(dates))


def to_csv(series: PriceSeries) -> str:
    """Serialize a series back to `date,close` text.

    Inverse of parse_csv for canonically formatted input (shortest-repr
    closes). Series constructed without dates get sequential placeholder
    dates so the output stays parseable.
    """
    if series.dates:
        dates = series.dates
    else:
        base = datetime.date(2000, 1, 1)
        dates = tuple(
            (base + datetime.timedelta(days=p.date_ordinal - series.first_ordinal)).isoformat()
            for p in series.points
        )
    lines = [CSV_HEADER]
    lines.extend(f"{d},{p.close!r}" for d, p in zip(dates, series.points))
    return "\n".join(lines) + "\n"


def make_labels(series: PriceSeries) -> LabelSeries:
    """Next-day direction label per ordinal: +1 up, -1 down, +1 (flagged) flat.

    The label at t exists only when the close at t+1 exists, so the result is
    one element shorter than the series.
    """
    if len(series) < 2:
        raise InsufficientDataError("need at least 2 closes to label directions")
    c = series.closes()
    delta = c[1:] - c[:-1]
    labels = np.where(delta < 0, -1, 1).astype(np.int8)
    flat = delta == 0
    return LabelSeries(series.first_ordinal, labels, flat)


def split(series: PriceSeries, spec: SplitSpec) -> tuple[PriceSeries, PriceSeries]:
    """Cut (train, test) sub-series per the split ordinals, no mutation."""
    lo, hi = series.first_ordinal, series.last_ordinal
    for name, a, b in (
        ("train", spec.train_start, spec.train_end),
        ("test", spec.test_start, spec.test_end),
    ):
        if a < lo or b > hi:
            raise BoundsError(
                f"{name} range [{a}, {b}] outside series ordinals [{lo}, {hi}]"
            )
    return series.window(spec.train_start, spec.train_end), series.window(
        spec.test_start, spec.test_end
    )


def log_return_window(series: PriceSeries, t: int, m: int) -> np.ndarray:
    """The m trailing one-day log returns ending at ordinal t, oldest first."""
    if m < 1:
        raise ValidationError("window length m must be >= 1")
    idx = series.index_of(t)
    if idx < m:
        raise BoundsError(
            f"need {m} returns before ordinal {t}; only {idx} days of history"
        )
    ords = [series.points[k].date_ordinal for k in range(idx - m, idx + 1)]
    if ords != list(range(t - m, t + 1)):
        raise BoundsError(f"ordinals {t - m}..{t} are not contiguous in series")
    c = np.array([series.points[k].close for k in range(idx - m, idx + 1)])
    return np.log(c[1:] / c[:-1])
