"""Vector and operator p-norms on C^d with certified two-sided operator bounds.

For p in {1, 2, inf} the operator norm is exact (column sums, largest singular
value, row sums).  For other p the norm is NP-hard to certify, so we return a
(lower, upper) pair: the lower bound is the best ratio found by multi-restart
projected steepest ascent on the unit p-sphere, the upper bound is the
Riesz-Thorin interpolation bound ||T||_1^{1/p} ||T||_inf^{1-1/p} intersected
with the d^|1/2-1/p| equivalence bound through the 2-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import ComplexMatrix

_SCALE_HI = 1e100
_SCALE_LO = 1e-100


@dataclass(frozen=True)
class AscentConfig:
    """Multi-restart ascent engine knobs.  Deterministic given `seed`."""

    restarts: int = 32
    max_steps: int = 500
    rel_tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_steps < 1:
            raise ValueError("restarts and max_steps must be >= 1")


@dataclass(frozen=True, eq=False)
class NormBounds:
    """Two-sided bounds for an operator p-norm.

    `witness` is a unit p-norm vector with ||T witness||_p == lower (within
    1e-12 relative); for method='exact' lower == upper.
    """

    lower: float
    upper: float
    witness: np.ndarray
    method: str

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper * (1 + 1e-15) + 1e-300):
            raise ValueError(f"bounds out of order: {self.lower} > {self.upper}")


def vector_p_norm(v, p: float) -> float:
    """(sum |v_k|^p)^(1/p), max for p=inf.  Raises for p < 1."""
    if p < 1:
        raise ValueError(f"p-norms need p >= 1, got {p}")
    a = np.abs(np.asarray(v, dtype=complex))
    if a.size == 0:
        return 0.0
    if math.isinf(p):
        return float(a.max())
    m = float(a.max())
    if m == 0.0:
        return 0.0
    # factor the max out so large p cannot overflow
    return m * float(np.sum((a / m) ** p) ** (1.0 / p))


def _pnorm_cols(X: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(X)
    if math.isinf(p):
        return a.max(axis=0)
    m = a.max(axis=0)
    safe = np.where(m == 0.0, 1.0, m)
    return m * np.sum((a / safe) ** p, axis=0) ** (1.0 / p)


def _phase(Y: np.ndarray) -> np.ndarray:
    a = np.abs(Y)
    return np.where(a > 0, Y / np.where(a == 0, 1.0, a), 0.0)


def ascent_lower_bound(T: ComplexMatrix, p: float, cfg: AscentConfig = AscentConfig()):
    """Best ||Tx||_p over unit-p-sphere found by projected steepest ascent.

    Normalized-gradient steps with per-restart backtracking (step halves on a
    rejected proposal, grows after an accepted one).  Returns (value, witness).
    """
    if p < 1:
        raise ValueError(f"p-norms need p >= 1, got {p}")
    A = T.entries
    d = T.dim
    rng = np.random.default_rng(cfg.seed)
    X = rng.standard_normal((d, cfg.restarts)) + 1j * rng.standard_normal((d, cfg.restarts))
    X /= _pnorm_cols(X, p)
    f = _pnorm_cols(A @ X, p)
    step = np.full(cfg.restarts, 0.5)
    stall = 0
    for _ in range(cfg.max_steps):
        Y = A @ X
        # steepest-ascent direction of ||Ax||_p at x (up to positive scale)
        W = np.abs(Y) ** (p - 1) * _phase(Y) if not math.isinf(p) else _inf_subgrad(Y)
        G = A.conj().T @ W
        gn = np.sqrt(np.sum(np.abs(G) ** 2, axis=0))
        G = np.where(gn > 0, G / np.where(gn == 0, 1.0, gn), 0.0)
        Xp = X + step * G
        nrm = _pnorm_cols(Xp, p)
        nrm = np.where(nrm == 0.0, 1.0, nrm)
        Xp = Xp / nrm
        fp = _pnorm_cols(A @ Xp, p)
        accept = fp > f
        gain = np.where(accept, (fp - f) / np.maximum(f, 1e-300), 0.0)
        X = np.where(accept, Xp, X)
        f = np.where(accept, fp, f)
        step = np.where(accept, np.minimum(step * 1.5, 1.0), step * 0.5)
        if float(gain.max()) < cfg.rel_tol:
            stall += 1
            if stall >= 6 or float(step.max()) < 1e-14:
                break
        else:
            stall = 0
    i = int(np.argmax(f))
    return float(f[i]), X[:, i].copy()


def _inf_subgrad(Y: np.ndarray) -> np.ndarray:
    # subgradient of the max-modulus functional: mass on the argmax row
    W = np.zeros_like(Y)
    idx = np.argmax(np.abs(Y), axis=0)
    cols = np.arange(Y.shape[1])
    W[idx, cols] = _phase(Y[idx, cols])
    return W


def _exact_inf_norm(A: np.ndarray):
    sums = np.sum(np.abs(A), axis=1)
    i = int(np.argmax(sums))
    w = np.where(np.abs(A[i]) > 0, np.conj(_phase(A[i])), 1.0)
    return float(sums[i]), w


def _exact_one_norm(A: np.ndarray):
    sums = np.sum(np.abs(A), axis=0)
    j = int(np.argmax(sums))
    w = np.zeros(A.shape[0], dtype=complex)
    w[j] = 1.0
    return float(sums[j]), w


def operator_p_norm(T: ComplexMatrix, p: float, cfg: AscentConfig = AscentConfig()) -> NormBounds:
    """Two-sided bounds on ||T||_{p->p}; exact for p in {1, 2, inf}."""
    if p < 1:
        raise ValueError(f"p-norms need p >= 1, got {p}")
    A = T.entries
    if math.isinf(p):
        val, w = _exact_inf_norm(A)
        return NormBounds(val, val, w, "exact")
    if p == 1:
        val, w = _exact_one_norm(A)
        return NormBounds(val, val, w, "exact")
    if p == 2:
        U, s, Vh = np.linalg.svd(A)
        return NormBounds(float(s[0]), float(s[0]), Vh[0].conj(), "exact")
    lower, witness = ascent_lower_bound(T, p, cfg)
    n1, _ = _exact_one_norm(A)
    ninf, _ = _exact_inf_norm(A)
    sigma = float(np.linalg.svd(A, compute_uv=False)[0])
    riesz_thorin = n1 ** (1.0 / p) * ninf ** (1.0 - 1.0 / p)
    equivalence = T.dim ** abs(0.5 - 1.0 / p) * sigma
    upper = min(riesz_thorin, equivalence)
    return NormBounds(min(lower, upper), upper, witness, "ascent_plus_interpolation")


def power_norm_sequence(
    T: ComplexMatrix, p: float, n_max: int, cfg: AscentConfig = AscentConfig()
) -> list[NormBounds]:
    """Bounds for ||T^n||_p for n = 1..n_max.

    Powers accumulate by repeated multiplication with a log-scale ledger: the
    stored matrix is renormalized whenever its largest entry leaves
    [1e-100, 1e100], so Jordan-type growth cannot overflow the recurrence.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    A = T.entries
    M = np.eye(T.dim, dtype=complex)
    log_scale = 0.0
    out: list[NormBounds] = []
    for _ in range(n_max):
        M = A @ M
        peak = float(np.max(np.abs(M)))
        if peak > 0.0 and not (_SCALE_LO < peak < _SCALE_HI):
            M = M / peak
            log_scale += math.log(peak)
            if not math.isfinite(log_scale):
                raise OverflowError("power scale ledger left the representable range")
        b = operator_p_norm(ComplexMatrix(M), p, cfg)
        out.append(
            NormBounds(
                _rescale(b.lower, log_scale), _rescale(b.upper, log_scale), b.witness, b.method
            )
        )
    return out


def _rescale(value: float, log_scale: float) -> float:
    if value == 0.0 or log_scale == 0.0:
        return value
    x = math.log(value) + log_scale
    return math.exp(x) if x < 709.0 else math.inf
