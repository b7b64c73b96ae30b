"""Layered amplitude/frequency-modulation decomposition.

Each layer interpolates a natural spline through the maxima of the absolute
value of its input; the next layer repeats on that envelope. The same
recursion, applied to the instantaneous-frequency series of the input, gives
the frequency-modulation branch. Each layer also carries the analytic signal
of its (detrended) envelope, so layers expose their own instantaneous
attributes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import emd, spectral
from .errors import (
    InsufficientDataError,
    InsufficientDepthError,
    NotDecomposableError,
    ValidationError,
)


@dataclass(frozen=True, eq=False)
class HoloLayer:
    """One modulation layer: its envelope and the envelope's analytic view."""

    layer_index: int
    envelope: np.ndarray
    analytic: spectral.AnalyticSeries
    attrs: spectral.InstAttr


@dataclass(frozen=True, eq=False)
class HoloStack:
    """AM and FM layer chains grown from one source vector."""

    source: np.ndarray
    am_layers: tuple[HoloLayer, ...]
    fm_layers: tuple[HoloLayer, ...]

    @property
    def am_depth(self) -> int:
        return len(self.am_layers)

    @property
    def fm_depth(self) -> int:
        return len(self.fm_layers)


def envelope_of_abs(x: np.ndarray) -> np.ndarray:
    """Natural spline through the maxima of |x|, evaluated at every sample.

    No clamping is applied: the spline may locally undershoot |x| between
    anchors. Fewer than 2 maxima of |x| means the layer has no modulation
    structure left.
    """
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    maxima, _ = emd.local_extrema(a)
    if maxima.size < 2:
        raise NotDecomposableError(
            f"|x| has {maxima.size} interior maxima; envelope needs >= 2"
        )
    return emd.spline_envelope(maxima, a)


def _layer_of(env: np.ndarray, index: int, cfg: emd.SiftConfig) -> HoloLayer:
    analytic = spectral.detrended_analytic(env, cfg)
    attrs = spectral.inst_attributes(analytic)
    return HoloLayer(layer_index=index, envelope=env, analytic=analytic, attrs=attrs)


def _grow_branch(x: np.ndarray, layers: int, cfg: emd.SiftConfig) -> tuple[HoloLayer, ...]:
    out: list[HoloLayer] = []
    cur = x
    for k in range(1, layers + 1):
        try:
            env = envelope_of_abs(cur)
        except (NotDecomposableError, InsufficientDataError):
            break
        out.append(_layer_of(env, k, cfg))
        cur = env
    return tuple(out)


def holo_decompose(
    x: np.ndarray, layers: int = 4, cfg: emd.SiftConfig = emd.SiftConfig()
) -> HoloStack:
    """Grow up to `layers` AM layers from x and FM layers from its frequency.

    Recursion on a branch stops early when a layer input has fewer than two
    interior maxima of its absolute value; the stack records the achieved
    depth rather than raising.
    """
    x = np.asarray(x, dtype=float)
    if layers < 1:
        raise ValidationError("layer count must be >= 1")
    if x.size < 16:
        raise InsufficientDataError("need at least 16 samples for layering")

    am = _grow_branch(x, layers, cfg)
    freq = spectral.inst_attributes(spectral.detrended_analytic(x, cfg)).frequency
    fm = _grow_branch(freq, layers, cfg)
    return HoloStack(source=x.copy(), am_layers=am, fm_layers=fm)


def am2_signal(stack: HoloStack, t: int) -> float:
    """Slope of the layer-2 AM envelope at sample t.

    Central difference in the interior, one-sided at either end; the sign of
    this value at the last sample drives the two-day-ahead direction call.
    """
    if stack.am_depth < 2:
        raise InsufficientDepthError(
            f"layer-2 signal needs AM depth >= 2, stack has {stack.am_depth}"
        )
    env = stack.am_layers[1].envelope
    n = env.size
    if t < 0 or t >= n:
        raise ValidationError(f"sample {t} outside envelope of length {n}")
    if t == 0:
        return float(env[1] - env[0])
    if t == n - 1:
        return float(env[n - 1] - env[n - 2])
    return float(0.5 * (env[t + 1] - env[t - 1]))


def dominant_frequency(layer: HoloLayer, interior: float = 0.1) -> float:
    """Median instantaneous frequency over the interior of a layer.

    `interior` is the fraction trimmed from each end before taking the
    median, which suppresses boundary transients of the envelope splines.
    """
    freq = layer.attrs.frequency
    k = int(len(freq) * interior)
    core = freq[k : len(freq) - k] if len(freq) > 2 * k else freq
    return float(np.median(core))


def layer_to_csv(layer: HoloLayer) -> str:
    """Export one layer as `t,envelope,frequency,amplitude` rows."""
    buf = io.StringIO()
    buf.write("t,envelope,frequency,amplitude\n")
    for t in range(layer.envelope.size):
        buf.write(
            f"{t},{layer.envelope[t]!r},"
            f"{layer.attrs.frequency[t]!r},{layer.attrs.amplitude[t]!r}\n"
        )
    return buf.getvalue()
