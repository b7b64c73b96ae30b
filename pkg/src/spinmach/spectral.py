"""Analytic-signal machinery: FFT Hilbert transform and complex embedding.

The complex-plane embedding of a price series used throughout the package is
the analytic signal of the series after its slow trend (the EMD residual) has
been removed, so the scatter of (re, im) lives around the origin and angles
are meaningful.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import emd
from .errors import InsufficientDataError, ValidationError
from .ingest import PriceSeries


@dataclass(frozen=True, eq=False)
class AnalyticSeries:
    """Complex series: re is the input signal, im its Hilbert transform."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self) -> None:
        if self.re.shape != self.im.shape or self.re.ndim != 1:
            raise ValidationError("re and im must be equal-length 1-D vectors")
        if not (np.all(np.isfinite(self.re)) and np.all(np.isfinite(self.im))):
            raise ValidationError("analytic series must be finite")

    def __len__(self) -> int:
        return len(self.re)

    def modulus(self) -> np.ndarray:
        return np.hypot(self.re, self.im)


@dataclass(frozen=True, eq=False)
class InstAttr:
    """Instantaneous amplitude, unwrapped phase and frequency (rad/sample).

    `carried[k]` is True where the modulus was zero and the phase was carried
    forward from the previous sample.
    """

    amplitude: np.ndarray
    phase: np.ndarray
    frequency: np.ndarray
    carried: np.ndarray


def hilbert_analytic(x: np.ndarray) -> AnalyticSeries:
    """Analytic signal via the frequency domain, valid for any length >= 4.

    Forward FFT, zero the negative-frequency bins, double the positive ones,
    keep DC (and Nyquist, when present) unchanged, inverse FFT. The real
    channel is re-assigned from the input so it matches bit-exactly.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError("expected a 1-D signal")
    n = x.size
    if n < 4:
        raise InsufficientDataError("need at least 4 samples for the transform")

    spec = np.fft.fft(x)
    gain = np.zeros(n)
    gain[0] = 1.0
    if n % 2 == 0:
        gain[n // 2] = 1.0
        gain[1 : n // 2] = 2.0
    else:
        gain[1 : (n + 1) // 2] = 2.0
    z = np.fft.ifft(spec * gain)
    return AnalyticSeries(re=x.copy(), im=z.imag)


def inst_attributes(z: AnalyticSeries) -> InstAttr:
    """Modulus, unwrapped argument, and its central-difference derivative.

    Zero-modulus samples have no argument; their phase is carried forward
    (0.0 at the start) and flagged in `carried`.
    """
    amplitude = z.modulus()
    raw = np.arctan2(z.im, z.re)
    carried = amplitude == 0.0
    if carried.any():
        raw = raw.copy()
        prev = 0.0
        for k in range(raw.size):
            if carried[k]:
                raw[k] = prev
            else:
                prev = raw[k]
    phase = np.unwrap(raw)
    frequency = np.gradient(phase)
    return InstAttr(amplitude=amplitude, phase=phase, frequency=frequency, carried=carried)


def ichain_embed(series: PriceSeries, cfg: emd.SiftConfig = emd.SiftConfig()) -> AnalyticSeries:
    """Complex-plane embedding of a close series.

    The close series is detrended by subtracting its EMD residual; the
    analytic signal of the remaining oscillation is the embedding. Adding
    the residual back to the re channel reproduces the closes exactly.
    """
    closes = series.closes()
    result = emd.decompose(closes, cfg)
    oscillation = closes - result.residual
    return hilbert_analytic(oscillation)


def detrended_analytic(x: np.ndarray, cfg: emd.SiftConfig = emd.SiftConfig()) -> AnalyticSeries:
    """EMD-detrend a raw vector, then take its analytic signal."""
    x = np.asarray(x, dtype=float)
    result = emd.decompose(x, cfg)
    return hilbert_analytic(x - result.residual)


def to_csv(z: AnalyticSeries) -> str:
    """Export as `t,re,im` rows (t is the 0-based sample index)."""
    buf = io.StringIO()
    buf.write("t,re,im\n")
    for t in range(len(z)):
        buf.write(f"{t},{z.re[t]!r},{z.im[t]!r}\n")
    return buf.getvalue()
