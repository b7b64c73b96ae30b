"""State labeling of the complex embedding and the nonstationarity gate.

Physiology states are the four quadrants of the embedding angle; hidden
states pack the slope signs of the first three IMF amplitude tracks into a
3-bit index; the gate compares the latest layer-2 envelope move against its
recent volatility to decide whether a signal is emitted at all.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import emd as emd_mod
from . import spectral
from .errors import BoundsError, ValidationError
from .hhsa import HoloStack

GATE_EPS = 1e-12


class PhysiologyState(enum.Enum):
    """Quadrant of the embedding point, counter-clockwise from +re."""

    S1 = "s1"
    S2 = "s2"
    S3 = "s3"
    S4 = "s4"


@dataclass(frozen=True)
class HiddenState:
    """3-bit index packing IMF amplitude slope signs (bit i: IMF i+1 rising)."""

    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < 8:
            raise ValidationError(f"hidden state index must be in 0..7, got {self.bits}")


@dataclass(frozen=True)
class GateDecision:
    """Whether to emit a signal, with the nonstationarity score behind it.

    `flagged` marks degenerate no-signal decisions (stack too shallow to
    score), where the score is reported as 0.
    """

    emit: bool
    score: float
    flagged: bool = False


_QUADRANTS = (
    PhysiologyState.S1,
    PhysiologyState.S2,
    PhysiologyState.S3,
    PhysiologyState.S4,
)


def _quadrant(re: float, im: float) -> PhysiologyState:
    theta = math.atan2(im, re)
    if theta < 0.0:
        theta += 2.0 * math.pi
    k = min(int(theta // (math.pi / 2.0)), 3)
    return _QUADRANTS[k]


def physiology_timeline(z: spectral.AnalyticSeries) -> tuple[list[PhysiologyState], np.ndarray]:
    """Quadrant per sample; zero-modulus samples carry the previous state.

    Returns (states, carried) where carried[k] is True for carried-forward
    samples. A zero-modulus start defaults to s1, flagged.
    """
    states: list[PhysiologyState] = []
    carried = np.zeros(len(z), dtype=bool)
    prev = PhysiologyState.S1
    for k in range(len(z)):
        re, im = float(z.re[k]), float(z.im[k])
        if re == 0.0 and im == 0.0:
            states.append(prev)
            carried[k] = True
        else:
            prev = _quadrant(re, im)
            states.append(prev)
    return states, carried


def physiology_of(z: spectral.AnalyticSeries, t: int) -> PhysiologyState:
    """Quadrant state of the embedding at sample t (carry-forward on zeros)."""
    if t < 0 or t >= len(z):
        raise BoundsError(f"sample {t} outside series of length {len(z)}")
    re, im = float(z.re[t]), float(z.im[t])
    if re != 0.0 or im != 0.0:
        return _quadrant(re, im)
    for k in range(t - 1, -1, -1):
        re, im = float(z.re[k]), float(z.im[k])
        if re != 0.0 or im != 0.0:
            return _quadrant(re, im)
    return PhysiologyState.S1


def _amplitude_slope(amplitude: np.ndarray, t: int) -> float:
    n = amplitude.size
    if t == 0:
        return float(amplitude[1] - amplitude[0])
    if t == n - 1:
        return float(amplitude[n - 1] - amplitude[n - 2])
    return float(0.5 * (amplitude[t + 1] - amplitude[t - 1]))


def hidden_of(result: emd_mod.EmdResult, t: int) -> HiddenState:
    """Bit i set iff the amplitude of IMF i+1 is rising at sample t.

    IMFs beyond the achieved decomposition depth contribute a zero bit
    (zero-slope padding), so shallow decompositions never fail.
    """
    n = result.residual.size
    if t < 0 or t >= n:
        raise BoundsError(f"sample {t} outside series of length {n}")
    bits = 0
    for i in range(3):
        if i >= len(result.imfs):
            continue
        amp = spectral.inst_attributes(
            spectral.hilbert_analytic(result.imfs[i].samples)
        ).amplitude
        if _amplitude_slope(amp, t) > 0.0:
            bits |= 1 << i
    return HiddenState(bits)


def hidden_timeline(result: emd_mod.EmdResult) -> list[HiddenState]:
    """hidden_of for every sample, computing each amplitude track once."""
    n = result.residual.size
    amps = [
        spectral.inst_attributes(spectral.hilbert_analytic(imf.samples)).amplitude
        for imf in result.imfs[:3]
    ]
    out = []
    for t in range(n):
        bits = 0
        for i, amp in enumerate(amps):
            if _amplitude_slope(amp, t) > 0.0:
                bits |= 1 << i
        out.append(HiddenState(bits))
    return out


def gate(stack: HoloStack, t: int, window: int = 20, tau: float = 1.0) -> GateDecision:
    """Emit iff the latest layer-2 envelope move exceeds tau recent sigmas.

    score = |e2[t] - e2[t-1]| / (std of e2 over the trailing `window`
    samples + eps). A stack without a second AM layer cannot be scored and
    yields a flagged no-signal decision.
    """
    if window < 4:
        raise ValidationError("gate window must be >= 4")
    if tau < 0.0:
        raise ValidationError("gate threshold tau must be >= 0")
    if stack.am_depth < 2:
        return GateDecision(emit=False, score=0.0, flagged=True)
    env = stack.am_layers[1].envelope
    if t < 1 or t >= env.size:
        raise BoundsError(f"gate needs 1 <= t < {env.size}, got {t}")
    seg = env[max(0, t - window + 1) : t + 1]
    score = float(abs(env[t] - env[t - 1]) / (np.std(seg) + GATE_EPS))
    return GateDecision(emit=score > tau, score=score)
