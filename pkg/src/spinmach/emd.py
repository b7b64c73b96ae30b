"""Empirical mode decomposition by envelope sifting.

Extracts intrinsic mode functions (IMFs) with natural-cubic-spline envelopes
through local extrema, mirrored at the boundaries, and a Cauchy-type stopping
rule on consecutive sift iterates. Reconstruction is exact by construction:
the residual is the input minus the running IMF sum.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    DegenerateInputError,
    InsufficientDataError,
    NotSiftableError,
    ValidationError,
)


@dataclass(frozen=True)
class SiftConfig:
    """Stopping constants for sifting.

    sd_threshold is the Cauchy criterion on the normalized squared change
    between consecutive sift iterates; 0.2 is standard practice.
    """

    sd_threshold: float = 0.2
    max_sift_iters: int = 50
    max_imfs: int = 12

    def __post_init__(self) -> None:
        if not 0.0 < self.sd_threshold < 1.0:
            raise ValidationError("sd_threshold must lie in (0, 1)")
        if self.max_sift_iters < 1 or self.max_imfs < 1:
            raise ValidationError("iteration caps must be positive")


@dataclass(frozen=True, eq=False)
class Imf:
    """One intrinsic mode: extrema and zero-crossing counts differ by <= 1."""

    samples: np.ndarray


@dataclass(frozen=True, eq=False)
class EmdResult:
    """IMFs ordered fastest first plus the leftover residual."""

    imfs: tuple[Imf, ...]
    residual: np.ndarray

    def reconstruct(self) -> np.ndarray:
        out = self.residual.copy()
        for imf in self.imfs:
            out += imf.samples
        return out

    def oscillation(self) -> np.ndarray:
        """Input minus residual: the summed oscillatory content, exact."""
        total = self.residual.copy()
        for imf in self.imfs:
            total = total + imf.samples
        return total - self.residual


def local_extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of strict interior maxima and minima.

    Plateaus count once, at their center sample (deterministic tie-break);
    runs touching either end of the array are never extrema.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError("expected a 1-D signal")
    if x.size < 3:
        raise InsufficientDataError("need at least 3 samples to find extrema")

    # collapse runs of equal consecutive values to one representative
    run_start = np.flatnonzero(np.r_[True, np.diff(x) != 0])
    run_end = np.r_[run_start[1:] - 1, x.size - 1]
    v = x[run_start]

    maxima: list[int] = []
    minima: list[int] = []
    for j in range(1, v.size - 1):
        center = int((run_start[j] + run_end[j]) // 2)
        if v[j] > v[j - 1] and v[j] > v[j + 1]:
            maxima.append(center)
        elif v[j] < v[j - 1] and v[j] < v[j + 1]:
            minima.append(center)
    return np.array(maxima, dtype=int), np.array(minima, dtype=int)


def zero_crossings(x: np.ndarray) -> int:
    """Number of sign changes, ignoring exact zeros."""
    s = np.sign(np.asarray(x, dtype=float))
    s = s[s != 0]
    if s.size < 2:
        return 0
    return int(np.count_nonzero(np.diff(s)))


def satisfies_imf_counts(x: np.ndarray) -> bool:
    """True when |#extrema - #zero crossings| <= 1."""
    try:
        maxima, minima = local_extrema(x)
    except InsufficientDataError:
        return True
    n_ext = maxima.size + minima.size
    return abs(n_ext - zero_crossings(x)) <= 1


def spline_envelope(anchor_indices: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Natural cubic spline through (index, x[index]) anchors, all samples.

    Boundaries: when the outermost anchor on a side is strictly inside the
    signal, the two nearest anchors are mirrored across that end before
    fitting, which pins the spline near the edges. A single anchor yields a
    constant envelope; an empty anchor list is degenerate.
    """
    x = np.asarray(x, dtype=float)
    idx = np.asarray(anchor_indices, dtype=int)
    if idx.size == 0:
        raise DegenerateInputError("envelope needs at least one anchor")
    if idx.size == 1:
        return np.full(x.size, x[idx[0]])

    idx = np.sort(idx)
    n = x.size
    pos = list(idx.astype(float))
    val = list(x[idx])

    if idx[0] > 0:
        for a in idx[: min(2, idx.size)]:
            pos.insert(0, -float(a))  # -idx[1] ends up before -idx[0]: ascending
            val.insert(0, float(x[a]))
    if idx[-1] < n - 1:
        for a in idx[-min(2, idx.size) :][::-1]:
            pos.append(2.0 * (n - 1) - float(a))
            val.append(float(x[a]))

    spline = CubicSpline(pos, val, bc_type="natural")
    return spline(np.arange(n, dtype=float))


def sift_once(h: np.ndarray) -> np.ndarray:
    """One sifting pass: subtract the mean of the upper and lower envelopes."""
    h = np.asarray(h, dtype=float)
    maxima, minima = local_extrema(h)
    if maxima.size < 2 or minima.size < 2:
        raise NotSiftableError(
            f"need >= 2 maxima and >= 2 minima, found {maxima.size}/{minima.size}"
        )
    upper = spline_envelope(maxima, h)
    lower = spline_envelope(minima, h)
    return h - 0.5 * (upper + lower)


def extract_imf(x: np.ndarray, cfg: SiftConfig = SiftConfig()) -> Imf:
    """Sift until the Cauchy criterion (and the IMF count property) holds.

    SD = sum((h_prev - h)^2) / sum(h_prev^2) between consecutive iterates;
    iteration stops at sd_threshold, at max_sift_iters, or when the iterate
    runs out of extrema mid-sift.
    """
    h = np.asarray(x, dtype=float).copy()
    h = sift_once(h)  # x must be siftable: first failure propagates
    for _ in range(cfg.max_sift_iters - 1):
        if not np.any(h):
            break
        try:
            h_next = sift_once(h)
        except NotSiftableError:
            break
        denom = float(np.sum(h * h))
        sd = float(np.sum((h - h_next) ** 2)) / denom if denom > 0 else 0.0
        h = h_next
        if sd < cfg.sd_threshold and satisfies_imf_counts(h):
            break
    return Imf(samples=h)


def decompose(x: np.ndarray, cfg: SiftConfig = SiftConfig()) -> EmdResult:
    """Peel IMFs off the running remainder until it is no longer siftable."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError("expected a 1-D signal")
    if x.size < 8:
        raise InsufficientDataError("need at least 8 samples to decompose")
    if not np.all(np.isfinite(x)):
        raise ValidationError("input contains non-finite samples")

    imfs: list[Imf] = []
    remainder = x.copy()
    while len(imfs) < cfg.max_imfs:
        try:
            imf = extract_imf(remainder, cfg)
        except NotSiftableError:
            break
        imfs.append(imf)
        remainder = remainder - imf.samples
    return EmdResult(imfs=tuple(imfs), residual=remainder)


def to_csv(result: EmdResult) -> str:
    """Export as columns imf1..imfK,residual (header included)."""
    cols = [imf.samples for imf in result.imfs] + [result.residual]
    names = [f"imf{k + 1}" for k in range(len(result.imfs))] + ["residual"]
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in zip(*cols):
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    return buf.getvalue()
