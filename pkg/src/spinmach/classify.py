"""Classifiers over real and complex-plane features.

Two families live here. A soft-margin kernel machine trained by sequential
minimal optimization (pairwise dual coordinate ascent with box clipping and
an error cache), and the parameter-free diameter rule that splits the
complex plane along the direction theta_star. Both predict {+1, -1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundsError,
    DegenerateTrainingError,
    DimensionError,
    HyperbolicDomainError,
    UndefinedAngleError,
    ValidationError,
)
from .spectral import AnalyticSeries

KERNEL_KINDS = ("linear", "rbs")
_SNAP = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: `linear` <a,b> or `rbs` exp(-gamma*||a-b||^2)."""

    kind: str
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ValidationError(f"kernel kind must be one of {KERNEL_KINDS}")
        if self.kind == "rbs":
            if self.gamma is None or not self.gamma > 0:
                raise ValidationError("rbs kernel requires gamma > 0")
        elif self.gamma is not None:
            raise ValidationError("linear kernel takes no gamma")


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"kernel arguments must match, got {a.shape} vs {b.shape}")
    if spec.kind == "linear":
        return float(np.dot(a, b))
    d = a - b
    return float(np.exp(-spec.gamma * np.dot(d, d)))


def _kernel_matrix(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if spec.kind == "linear":
        return a @ b.T
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.clip(sq, 0.0, None, out=sq)
    return np.exp(-spec.gamma * sq)


@dataclass(frozen=True, eq=False)
class SvmModel:
    """Trained kernel machine: signed multipliers alpha_i*y_i over support vectors."""

    support_vectors: np.ndarray
    alphas: np.ndarray
    bias: float
    kernel: KernelSpec
    c_param: float

    def __post_init__(self) -> None:
        if self.support_vectors.ndim != 2:
            raise ValidationError("support_vectors must be a 2-D array")
        if self.alphas.shape != (self.support_vectors.shape[0],):
            raise ValidationError("alphas must align with support_vectors")
        if self.c_param <= 0:
            raise ValidationError("c_param must be positive")
        if np.any(np.abs(self.alphas) > self.c_param * (1 + 1e-9)):
            raise ValidationError("|alpha| must not exceed c_param")

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]


def decision_value(model: SvmModel, x: np.ndarray) -> float:
    """Raw margin sum(alphas * K(sv, x)) + bias."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != model.n_features:
        raise DimensionError(
            f"expected a vector of length {model.n_features}, got shape {x.shape}"
        )
    if model.support_vectors.shape[0] == 0:
        return model.bias
    k = _kernel_matrix(model.kernel, model.support_vectors, x[None, :])[:, 0]
    return float(np.dot(model.alphas, k) + model.bias)


def svm_predict(model: SvmModel, x: np.ndarray) -> int:
    """Sign of the decision value; an exact zero is called +1."""
    return 1 if decision_value(model, x) >= 0.0 else -1


def dual_objective(model: SvmModel) -> float:
    """Soft-margin dual value sum(alpha) - 0.5*(ay)'K(ay) of a trained model."""
    signed = model.alphas
    if signed.size == 0:
        return 0.0
    k = _kernel_matrix(model.kernel, model.support_vectors, model.support_vectors)
    return float(np.sum(np.abs(signed)) - 0.5 * signed @ k @ signed)


def smo_train(
    X: np.ndarray,
    y: np.ndarray,
    kernel: KernelSpec,
    C: float = 1.0,
    tol: float = 1e-3,
    max_passes: int = 10,
    seed: int = 0,
) -> SvmModel:
    """Solve the soft-margin dual by sequential minimal optimization.

    Pair selection follows the usual two-level heuristic: sweep candidates
    (all points, then non-bound points) for KKT violations beyond `tol`,
    pick the partner maximizing |E_i - E_j| first, then seeded-random
    fallbacks. Each pairwise subproblem is solved exactly with box clipping;
    the bias and an error cache are updated after every step. Training stops
    after `max_passes` consecutive violation-free full sweeps or a hard
    sweep cap. Deterministic for a fixed seed.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValidationError("X must be (n, d) with one label per row")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise ValidationError("features and labels must be finite")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValidationError("labels must be +1 or -1")
    n = X.shape[0]
    if n < 2 or np.unique(y).size < 2:
        raise DegenerateTrainingError("training needs >= 2 samples from both classes")
    if C <= 0 or tol <= 0 or max_passes < 1:
        raise ValidationError("C and tol must be positive, max_passes >= 1")

    K = _kernel_matrix(kernel, X, X)
    alpha = np.zeros(n)
    b = 0.0
    E = -y.copy()  # f(x_i) - y_i at alpha = 0, b = 0
    rng = np.random.default_rng(seed)
    at_bound_eps = 1e-10 * max(1.0, C)

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b, E
        if i1 == i2:
            return False
        a1o, a2o = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1o + a2o - C), min(C, a1o + a2o)
        else:
            lo, hi = max(0.0, a2o - a1o), min(C, C + a2o - a1o)
        if hi - lo <= _SNAP:
            return False
        k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0.0:
            a2 = a2o + y2 * (E[i1] - E[i2]) / eta
            a2 = min(max(a2, lo), hi)
        else:
            a2 = _best_bound(alpha, y, K, i1, i2, lo, hi)
            if a2 is None:
                return False
        if abs(a2 - a2o) < _SNAP * (a2 + a2o + _SNAP):
            return False
        a1 = a1o + s * (a2o - a2)
        a1 = min(max(a1, 0.0), C)
        if a1 < at_bound_eps:
            a1 = 0.0
        elif a1 > C - at_bound_eps:
            a1 = C
        if a2 < at_bound_eps:
            a2 = 0.0
        elif a2 > C - at_bound_eps:
            a2 = C

        d1, d2 = a1 - a1o, a2 - a2o
        b1 = b - E[i1] - y1 * d1 * k11 - y2 * d2 * k12
        b2 = b - E[i2] - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1 < C:
            b_new = b1
        elif 0.0 < a2 < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        alpha[i1], alpha[i2] = a1, a2
        E += y1 * d1 * K[i1] + y2 * d2 * K[i2] + (b_new - b)
        b = b_new
        return True

    def examine(i2: int) -> bool:
        r2 = E[i2] * y[i2]
        violates = (r2 < -tol and alpha[i2] < C - at_bound_eps) or (
            r2 > tol and alpha[i2] > at_bound_eps
        )
        if not violates:
            return False
        nonbound = np.flatnonzero((alpha > at_bound_eps) & (alpha < C - at_bound_eps))
        if nonbound.size > 1:
            i1 = int(nonbound[np.argmax(np.abs(E[nonbound] - E[i2]))])
            if take_step(i1, i2):
                return True
        for i1 in rng.permutation(nonbound):
            if take_step(int(i1), i2):
                return True
        for i1 in rng.permutation(n):
            if take_step(int(i1), i2):
                return True
        return False

    clean_full_sweeps = 0
    examine_all = True
    sweeps = 0
    hard_cap = 10000
    while clean_full_sweeps < max_passes and sweeps < hard_cap:
        sweeps += 1
        changed = 0
        if examine_all:
            for i in range(n):
                changed += examine(i)
        else:
            for i in np.flatnonzero(
                (alpha > at_bound_eps) & (alpha < C - at_bound_eps)
            ):
                changed += examine(int(i))
        if examine_all:
            clean_full_sweeps = clean_full_sweeps + 1 if changed == 0 else 0
            if changed > 0:
                examine_all = False
        elif changed == 0:
            examine_all = True

    keep = alpha > 0.0
    return SvmModel(
        support_vectors=X[keep].copy(),
        alphas=(alpha * y)[keep],
        bias=b,
        kernel=kernel,
        c_param=C,
    )


def _best_bound(alpha, y, K, i1, i2, lo, hi):
    """Degenerate pair direction (eta <= 0): move a2 to the better box end."""
    signed = alpha * y

    def objective(a2_cand: float) -> float:
        s = y[i1] * y[i2]
        a1_cand = alpha[i1] + s * (alpha[i2] - a2_cand)
        trial = signed.copy()
        trial[i1] = a1_cand * y[i1]
        trial[i2] = a2_cand * y[i2]
        a_trial = np.abs(trial)
        return float(np.sum(a_trial) - 0.5 * trial @ K @ trial)

    w_lo, w_hi = objective(lo), objective(hi)
    if w_lo > w_hi + 1e-12:
        return lo
    if w_hi > w_lo + 1e-12:
        return hi
    return None


# --- model serialization (versioned, bit-exact) ---

_MODEL_MAGIC = "spinmach-svm v1"


def model_to_text(model: SvmModel) -> str:
    """Flat text serialization; floats as C99 hex so round-trips are bit-exact."""
    lines = [_MODEL_MAGIC]
    if model.kernel.kind == "rbs":
        lines.append(f"kernel rbs {model.kernel.gamma.hex()}")
    else:
        lines.append("kernel linear")
    lines.append(f"c {float(model.c_param).hex()}")
    lines.append(f"bias {float(model.bias).hex()}")
    lines.append(f"shape {model.support_vectors.shape[0]} {model.support_vectors.shape[1]}")
    for a, sv in zip(model.alphas, model.support_vectors):
        coords = " ".join(float(v).hex() for v in sv)
        lines.append(f"sv {float(a).hex()} {coords}".rstrip())
    return "\n".join(lines) + "\n"


def model_from_text(text: str) -> SvmModel:
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != _MODEL_MAGIC:
        raise ValidationError(f"unrecognized model header (want {_MODEL_MAGIC!r})")
    try:
        kparts = lines[1].split()
        if kparts[0] != "kernel":
            raise ValueError("missing kernel line")
        if kparts[1] == "rbs":
            kernel = KernelSpec("rbs", float.fromhex(kparts[2]))
        else:
            kernel = KernelSpec("linear")
        c_param = float.fromhex(lines[2].split()[1])
        bias = float.fromhex(lines[3].split()[1])
        n_sv, dim = (int(v) for v in lines[4].split()[1:3])
        alphas = np.empty(n_sv)
        svs = np.empty((n_sv, dim))
        for k, ln in enumerate(lines[5 : 5 + n_sv]):
            parts = ln.split()
            if parts[0] != "sv" or len(parts) != dim + 2:
                raise ValueError(f"bad sv row {k}")
            alphas[k] = float.fromhex(parts[1])
            svs[k] = [float.fromhex(p) for p in parts[2:]]
    except (IndexError, ValueError) as exc:
        raise ValidationError(f"malformed model text: {exc}") from exc
    return SvmModel(
        support_vectors=svs, alphas=alphas, bias=bias, kernel=kernel, c_param=c_param
    )


# --- the angle (diameter) rule ---


@dataclass(frozen=True)
class AngleClassifier:
    """Diameter decision boundary through the origin at angle theta_star."""

    theta_star: float = math.pi / 4.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta_star < 2.0 * math.pi:
            raise ValidationError("theta_star must lie in [0, 2*pi)")


def ssm_angle_predict(clf: AngleClassifier, z: tuple[float, float]) -> int:
    """Classify a complex point by which side of the theta_star diameter it is on.

    +1 ("up") when cos(theta_star)*im - sin(theta_star)*re < 0, -1 ("down")
    when > 0; points exactly on the diameter are called +1. Invariant under
    positive scaling of z; undefined at the origin.
    """
    re, im = float(z[0]), float(z[1])
    if re == 0.0 and im == 0.0:
        raise UndefinedAngleError("the origin has no angle")
    side = math.cos(clf.theta_star) * im - math.sin(clf.theta_star) * re
    return -1 if side > 0.0 else 1


@dataclass(frozen=True, eq=False)
class SpinorFeatures:
    """Interleaved unit-modulus (re, im) lag pairs of an embedding."""

    vector: np.ndarray
    flagged: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))


def spinor_features(z: AnalyticSeries, t: int, m: int) -> SpinorFeatures:
    """The m trailing embedding points ending at sample t, each scaled to |.|=1.

    Zero-modulus lags carry no direction; they are passed through as (1, 0)
    and flagged.
    """
    if m < 1:
        raise ValidationError("lag count m must be >= 1")
    if t - m + 1 < 0 or t >= len(z):
        raise BoundsError(f"need samples {t - m + 1}..{t} inside [0, {len(z) - 1}]")
    vec = np.empty(2 * m)
    flagged = np.zeros(m, dtype=bool)
    for j, k in enumerate(range(t - m + 1, t + 1)):
        re, im = float(z.re[k]), float(z.im[k])
        mod = math.hypot(re, im)
        if mod == 0.0:
            vec[2 * j], vec[2 * j + 1] = 1.0, 0.0
            flagged[j] = True
        else:
            vec[2 * j], vec[2 * j + 1] = re / mod, im / mod
    return SpinorFeatures(vector=vec, flagged=flagged)


def raw_plane_features(z: AnalyticSeries, t: int, m: int) -> np.ndarray:
    """The m trailing (re, im) lag pairs without normalization, interleaved."""
    if m < 1:
        raise ValidationError("lag count m must be >= 1")
    if t - m + 1 < 0 or t >= len(z):
        raise BoundsError(f"need samples {t - m + 1}..{t} inside [0, {len(z) - 1}]")
    vec = np.empty(2 * m)
    for j, k in enumerate(range(t - m + 1, t + 1)):
        vec[2 * j], vec[2 * j + 1] = float(z.re[k]), float(z.im[k])
    return vec


def hyperbolic_distance(w: np.ndarray, x: np.ndarray) -> float:
    """arccosh(-<w, x>); raises outside the arccosh domain rather than clamp."""
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    if w.shape != x.shape or w.ndim != 1:
        raise DimensionError(f"vectors must match, got {w.shape} vs {x.shape}")
    v = -float(np.dot(w, x))
    if v < 1.0:
        raise HyperbolicDomainError(f"-<w,x> = {v} < 1, distance undefined")
    return math.acosh(v)
