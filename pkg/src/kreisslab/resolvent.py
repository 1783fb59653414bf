"""Kreiss-type resolvent diagnostics evaluated as suprema over search grids.

Four functionals of an operator T with spectral radius <= 1:

  kreiss_constant          sup_{|l|>1} (|l|-1) ||(l-T)^{-1}||
  strong_kreiss_constant   sup_{|l|>1, n} (|l|-1)^n ||(l-T)^{-n}||
  exponential_criterion    sup_{xi in C} e^{-|xi|} ||e^{xi T}||
  cesaro_partial_sum_bound sup_{|l|=1, n} ||sum_{k<=n} l^k T^k|| / (20 Ks (n+1))

All reported values are lower bounds of the suprema: the grid is truncated at
r_max, but the analytic |lambda| -> inf limit of the first two functionals
equals 1 exactly and is always included in the max.  Upper "hints" are
advisory only; no Lipschitz certificate is claimed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .norms import AscentConfig, ascent_lower_bound
from .operators import ComplexMatrix

_RHO_TOL = 1e-9
_R_MIN_OFFSET = 1e-8


class SingularResolventError(ArithmeticError):
    """lambda is (numerically) an eigenvalue of T."""


@dataclass(frozen=True)
class SearchConfig:
    """Grid over the resolvent domain |lambda| > 1.

    Radii live at 1 + 10^x with x equally spaced between log10(1e-8) and
    log10(r_max - 1); the blow-up regime near the unit circle therefore gets
    log-uniform coverage.  Counts are segment counts, so doubling them yields
    a strict refinement of the grid.
    """

    r_max: float = 1e6
    radial_count: int = 48
    angular_count: int = 64
    refine_rounds: int = 3
    refine_shrink: float = 0.25
    seed: int = 0
    p: float = 2.0

    def __post_init__(self):
        if not self.r_max > 1:
            raise ValueError("r_max must exceed 1")
        if self.radial_count < 4 or self.angular_count < 4:
            raise ValueError("grid counts must be >= 4")
        if self.refine_rounds < 0:
            raise ValueError("refinement rounds must be >= 0")
        if not (0 < self.refine_shrink < 1):
            raise ValueError("refine_shrink must lie in (0, 1)")
        if self.p < 1:
            raise ValueError("p must be >= 1")

    def ascent(self) -> AscentConfig:
        # reduced engine for per-grid-point lower bounds at general p
        return AscentConfig(restarts=8, max_steps=150, rel_tol=1e-9, seed=self.seed)


@dataclass(frozen=True)
class FunctionalEstimate:
    """A certified-from-below functional value with its search witness."""

    value: float
    argmax: complex | None
    n_at_max: int | None = None
    diverged: bool = False
    log_value: float | None = None


@dataclass(frozen=True)
class CesaroResult:
    ratio_max: float
    argmax: complex
    n_at_max: int
    cesaro_lower: float
    cesaro_argmax: complex
    cesaro_n_at_max: int
    ks_ref: float


def resolvent_at(T: ComplexMatrix, lam: complex) -> ComplexMatrix:
    """(lam - T)^{-1} by direct solve, with an enforced residual check."""
    A = lam * np.eye(T.dim, dtype=complex) - T.entries
    try:
        R = np.linalg.solve(A, np.eye(T.dim, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(f"lambda={lam} is an eigenvalue of T") from exc
    resid = _inf_norm(A @ R - np.eye(T.dim))
    if not resid <= 1e-10 * max(_inf_norm(R), 1e-300):
        raise SingularResolventError(
            f"residual {resid:.3e} too large at lambda={lam}; numerically singular"
        )
    return ComplexMatrix(R)


def _inf_norm(A: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(A), axis=1)))


def _batched_norm_lower(mats: np.ndarray, p: float, acfg: AscentConfig) -> np.ndarray:
    """Lower bounds (exact for p in {1,2,inf}) of ||M||_p over a stack."""
    if p == 2:
        return np.linalg.svd(mats, compute_uv=False)[..., 0]
    if math.isinf(p):
        return np.abs(mats).sum(axis=-1).max(axis=-1)
    if p == 1:
        return np.abs(mats).sum(axis=-2).max(axis=-1)
    return np.array(
        [ascent_lower_bound(ComplexMatrix(m), p, acfg)[0] for m in mats]
    )


def _grid(cfg: SearchConfig):
    lo = math.log10(_R_MIN_OFFSET)
    hi = math.log10(cfg.r_max - 1.0)
    xs = lo + (hi - lo) * np.arange(cfg.radial_count + 1) / cfg.radial_count
    radii = 1.0 + 10.0 ** xs
    angles = 2.0 * np.pi * np.arange(cfg.angular_count) / cfg.angular_count
    return xs, radii, angles


def _refine_2d(
    eval_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    seeds: list[tuple[float, float]],
    half_width: tuple[float, float],
    rounds: int,
    shrink: float,
    bounds_x: tuple[float, float],
):
    """Shrinking 9x9 local grids around each seed; returns (value, (x, t))."""
    best = -math.inf
    best_xt = seeds[0] if seeds else (0.0, 0.0)
    offs = np.linspace(-1.0, 1.0, 9)
    for x0, t0 in seeds:
        cx, ct, wx, wt = x0, t0, half_width[0], half_width[1]
        for _ in range(rounds):
            xs = np.clip(cx + wx * offs, bounds_x[0], bounds_x[1])
            ts = ct + wt * offs
            X, Tt = np.meshgrid(xs, ts, indexing="ij")
            vals = eval_fn(X.ravel(), Tt.ravel())
            i = int(np.argmax(vals))
            if float(vals[i]) > best:
                best = float(vals[i])
                best_xt = (float(X.ravel()[i]), float(Tt.ravel()[i]))
            cx, ct = float(X.ravel()[i]), float(Tt.ravel()[i])
            wx, wt = wx * shrink, wt * shrink
    return best, best_xt


def _top_seeds(vals: np.ndarray, X: np.ndarray, Tt: np.ndarray, k: int = 5):
    order = np.argsort(vals)[::-1][:k]
    return [(float(X[i]), float(Tt[i])) for i in order]


def kreiss_constant(T: ComplexMatrix, cfg: SearchConfig = SearchConfig()) -> FunctionalEstimate:
    """Grid-and-refine lower bound of the Kreiss constant sup (|l|-1)||(l-T)^{-1}||.

    The analytic limit value lim_{|l|->inf} (|l|-1)||(l-T)^{-1}|| = 1 is taken
    into the max explicitly; several gallery operators attain the sup only
    there.
    """
    rho = T.spectral_radius()
    if rho > 1.0 + _RHO_TOL:
        return FunctionalEstimate(math.inf, None, diverged=True)

    acfg = cfg.ascent()

    def evaluate(xflat: np.ndarray, tflat: np.ndarray) -> np.ndarray:
        r = 1.0 + 10.0 ** xflat
        lam = r * np.exp(1j * tflat)
        if cfg.p == 2:
            A = lam[:, None, None] * np.eye(T.dim) - T.entries
            smin = np.linalg.svd(A, compute_uv=False)[:, -1]
            with np.errstate(divide="ignore"):
                return np.where(smin > 0, (r - 1.0) / np.where(smin == 0, 1, smin), np.inf)
        A = lam[:, None, None] * np.eye(T.dim) - T.entries
        R = np.linalg.inv(A)
        return (r - 1.0) * _batched_norm_lower(R, cfg.p, acfg)

    xs, _, angles = _grid(cfg)
    X, Tt = np.meshgrid(xs, angles, indexing="ij")
    xf, tf = X.ravel(), Tt.ravel()
    vals = evaluate(xf, tf)
    i = int(np.argmax(vals))
    best, best_xt = float(vals[i]), (float(xf[i]), float(tf[i]))

    if cfg.refine_rounds > 0:
        hw = ((xs[-1] - xs[0]) / cfg.radial_count, 2 * np.pi / cfg.angular_count)
        rbest, rxt = _refine_2d(
            evaluate, _top_seeds(vals, xf, tf), hw, cfg.refine_rounds, cfg.refine_shrink,
            (xs[0], xs[-1]),
        )
        if rbest > best:
            best, best_xt = rbest, rxt

    if best >= 1.0:
        lam = (1.0 + 10.0 ** best_xt[0]) * complex(math.cos(best_xt[1]), math.sin(best_xt[1]))
        return FunctionalEstimate(best, lam, log_value=math.log(best))
    # sup attained only in the |lambda| -> inf limit
    return FunctionalEstimate(1.0, None, log_value=0.0)


def strong_kreiss_constant(
    T: ComplexMatrix, cfg: SearchConfig = SearchConfig(), n_max: int = 16
) -> FunctionalEstimate:
    """Lower bound of sup over |l|>1 and 1<=n<=n_max of (|l|-1)^n ||(l-T)^{-n}||.

    Resolvent powers accumulate multiplicatively with a per-point log-scale
    ledger, and the score is assembled in the log domain, so large n cannot
    underflow (|l|-1)^n or overflow the powers.  The n=1 term is merged with
    kreiss_constant's refined estimate, which makes Ks_lower >= K_lower hold
    by construction.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rho = T.spectral_radius()
    if rho > 1.0 + _RHO_TOL:
        return FunctionalEstimate(math.inf, None, diverged=True)

    acfg = cfg.ascent()
    eye = np.eye(T.dim, dtype=complex)

    def sweep(xflat: np.ndarray, tflat: np.ndarray):
        """Per-point max over n of the log score; returns (log_vals, n_at)."""
        r = 1.0 + 10.0 ** xflat
        lam = r * np.exp(1j * tflat)
        A = lam[:, None, None] * eye - T.entries
        R = np.linalg.inv(A)
        M = np.broadcast_to(eye, R.shape).copy()
        log_scale = np.zeros(len(r))
        log_gap = np.log(r - 1.0)
        best_log = np.full(len(r), -np.inf)
        best_n = np.zeros(len(r), dtype=int)
        for n in range(1, n_max + 1):
            M = M @ R
            peak = np.abs(M).max(axis=(1, 2))
            mask = (peak > 0) & ((peak > 1e100) | (peak < 1e-100))
            if mask.any():
                M[mask] /= peak[mask, None, None]
                log_scale[mask] += np.log(peak[mask])
            nl = _batched_norm_lower(M, cfg.p, acfg)
            with np.errstate(divide="ignore"):
                score = n * log_gap + log_scale + np.log(nl)
            better = score > best_log
            best_log = np.where(better, score, best_log)
            best_n = np.where(better, n, best_n)
        return best_log, best_n

    xs, _, angles = _grid(cfg)
    X, Tt = np.meshgrid(xs, angles, indexing="ij")
    xf, tf = X.ravel(), Tt.ravel()
    logs, ns = sweep(xf, tf)
    i = int(np.argmax(logs))
    best_log, best_xt, best_n = float(logs[i]), (float(xf[i]), float(tf[i])), int(ns[i])

    if cfg.refine_rounds > 0:
        hw = ((xs[-1] - xs[0]) / cfg.radial_count, 2 * np.pi / cfg.angular_count)
        rbest, rxt = _refine_2d(
            lambda a, b: sweep(a, b)[0],
            _top_seeds(logs, xf, tf),
            hw,
            cfg.refine_rounds,
            cfg.refine_shrink,
            (xs[0], xs[-1]),
        )
        if rbest > best_log:
            best_log, best_xt = rbest, rxt
            rl, rn = sweep(np.array([rxt[0]]), np.array([rxt[1]]))
            best_n = int(rn[0])

    k_est = kreiss_constant(T, cfg)
    candidates = [
        (best_log, _xt_to_lambda(best_xt), best_n),
        (k_est.log_value if k_est.log_value is not None else -math.inf, k_est.argmax, 1),
        (0.0, None, None),  # |lambda| -> inf limit, value 1 for every n
    ]
    log_val, argmax, n_at = max(candidates, key=lambda c: c[0])
    value = math.exp(log_val) if log_val < 709.0 else math.inf
    return FunctionalEstimate(value, argmax, n_at_max=n_at, log_value=log_val)


def _xt_to_lambda(xt: tuple[float, float]) -> complex:
    r = 1.0 + 10.0 ** xt[0]
    return r * complex(math.cos(xt[1]), math.sin(xt[1]))


def exponential_criterion(
    T: ComplexMatrix, cfg: SearchConfig = SearchConfig(), xi_max: float = 40.0
) -> FunctionalEstimate:
    """Lower bound of sup_xi e^{-|xi|} ||e^{xi T}|| over the disc |xi| <= xi_max.

    The modulus grid includes xi = 0, where the functional equals 1 exactly.
    Matrix exponentials use scipy's scaling-and-squaring Pade implementation.
    """
    if xi_max <= 0:
        raise ValueError("xi_max must be positive")
    acfg = cfg.ascent()

    def evaluate(mflat: np.ndarray, tflat: np.ndarray) -> np.ndarray:
        m = np.clip(mflat, 0.0, None)
        xi = m * np.exp(1j * tflat)
        E = scipy.linalg.expm(xi[:, None, None] * T.entries)
        nl = _batched_norm_lower(E, cfg.p, acfg)
        with np.errstate(divide="ignore"):
            return np.exp(np.log(np.maximum(nl, 1e-300)) - m)

    moduli = xi_max * np.arange(cfg.radial_count + 1) / cfg.radial_count
    angles = 2.0 * np.pi * np.arange(cfg.angular_count) / cfg.angular_count
    M, Tt = np.meshgrid(moduli, angles, indexing="ij")
    mf, tf = M.ravel(), Tt.ravel()
    vals = evaluate(mf, tf)
    i = int(np.argmax(vals))
    best, best_mt = float(vals[i]), (float(mf[i]), float(tf[i]))

    if cfg.refine_rounds > 0:
        hw = (xi_max / cfg.radial_count, 2 * np.pi / cfg.angular_count)
        rbest, rmt = _refine_2d(
            evaluate, _top_seeds(vals, mf, tf), hw, cfg.refine_rounds, cfg.refine_shrink,
            (0.0, xi_max),
        )
        if rbest > best:
            best, best_mt = rbest, rmt
    xi = best_mt[0] * complex(math.cos(best_mt[1]), math.sin(best_mt[1]))
    return FunctionalEstimate(best, xi)


def cesaro_partial_sum_bound(
    T: ComplexMatrix,
    cfg: SearchConfig,
    n_max: int,
    ks_ref: float,
) -> CesaroResult:
    """Scan ||sum_{k=0}^n l^k T^k|| along the unit circle against 20 Ks (n+1).

    ratio_max <= 1 certifies consistency of the tested range with the
    20 Ks (n+1) partial-sum ceiling for the supplied Ks_ref; ratio_max > 1 is a finding to
    report with its witness (lambda, n), not a disproof, whenever Ks_ref is
    itself only a lower bound of the true constant.  cesaro_lower is the
    un-normalized sup ||S_n||/(n+1), which is >= 1 at n = 0 for any T.
    """
    if ks_ref <= 0:
        raise ValueError("ks_ref must be positive")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    acfg = cfg.ascent()
    angles = 2.0 * np.pi * np.arange(cfg.angular_count) / cfg.angular_count
    lam = np.exp(1j * angles)
    G = len(lam)
    eye = np.eye(T.dim, dtype=complex)
    S = np.broadcast_to(eye, (G, T.dim, T.dim)).copy()
    P = eye.copy()
    phase = np.ones(G, dtype=complex)
    best_norm_ratio = 1.0  # n = 0 gives ||I||/(1) = 1 for every lambda
    best_i, best_n = 0, 0
    for n in range(1, n_max + 1):
        P = T.entries @ P
        phase = phase * lam
        S += phase[:, None, None] * P
        norms = _batched_norm_lower(S, cfg.p, acfg)
        ratios = norms / (n + 1.0)
        j = int(np.argmax(ratios))
        if float(ratios[j]) > best_norm_ratio:
            best_norm_ratio, best_i, best_n = float(ratios[j]), j, n
    cesaro_lower = best_norm_ratio
    ratio_max = best_norm_ratio / (20.0 * ks_ref)
    witness = complex(lam[best_i])
    return CesaroResult(
        ratio_max=ratio_max,
        argmax=witness,
        n_at_max=best_n,
        cesaro_lower=cesaro_lower,
        cesaro_argmax=witness,
        cesaro_n_at_max=best_n,
        ks_ref=ks_ref,
    )


def gz_partial_resolvent_ratio(
    T: ComplexMatrix, cfg: SearchConfig, n_max: int, ks_ref: float
) -> FunctionalEstimate:
    """Informational: sup (|l|-1) ||sum_{k=0}^n T^k / l^{k+1}|| / (4 Ks_ref).

    The constant 4 in the reference bound comes from a source not reproduced
    here, so this diagnostic is advisory and never asserted as an invariant.
    """
    if ks_ref <= 0:
        raise ValueError("ks_ref must be positive")
    acfg = cfg.ascent()
    xs, radii, angles = _grid(cfg)
    R, A = np.meshgrid(radii, angles, indexing="ij")
    lam = (R * np.exp(1j * A)).ravel()
    G = len(lam)
    eye = np.eye(T.dim, dtype=complex)
    inv_lam = 1.0 / lam
    S = inv_lam[:, None, None] * eye
    P = eye.copy()
    coef = inv_lam.copy()
    best = -math.inf
    best_i, best_n = 0, 0
    for n in range(0, n_max + 1):
        if n > 0:
            P = T.entries @ P
            coef = coef * inv_lam
            S += coef[:, None, None] * P
        norms = _batched_norm_lower(S, cfg.p, acfg)
        vals = (np.abs(lam) - 1.0) * norms / (4.0 * ks_ref)
        j = int(np.argmax(vals))
        if float(vals[j]) > best:
            best, best_i, best_n = float(vals[j]), j, n
    return FunctionalEstimate(best, complex(lam[best_i]), n_at_max=best_n)


@dataclass
class KreissReport:
    """All resolvent functionals of one operator, with search metadata."""

    p: float
    seed: int
    spectral_radius: float
    diverged: bool
    k_lower: float
    k_upper_hint: float | None
    k_argmax: complex | None
    ks_lower: float
    ks_argmax: complex | None
    ks_n_at_max: int | None
    exp_lower: float
    exp_argmax: complex | None
    cesaro_lower: float
    cesaro_ratio_max: float
    cesaro_argmax: complex | None
    cesaro_n_at_max: int | None
    ks_ref: float
    grid: dict = field(default_factory=dict)
    gz_ratio_max: float | None = None

    def to_json_dict(self) -> dict:
        def cplx(z):
            return None if z is None else {"re": float(z.real), "im": float(z.imag)}

        return {
            "schema": "kreisslab/1",
            "p": self.p,
            "seed": self.seed,
            "spectral_radius": self.spectral_radius,
            "diverged": self.diverged,
            "k_lower": self.k_lower,
            "k_upper_hint": self.k_upper_hint,
            "k_upper_note": "advisory grid supremum; no Lipschitz certificate is claimed",
            "k_argmax": cplx(self.k_argmax),
            "ks_lower": self.ks_lower,
            "ks_argmax": cplx(self.ks_argmax),
            "n_at_max": self.ks_n_at_max,
            "exp_lower": self.exp_lower,
            "exp_argmax": cplx(self.exp_argmax),
            "cesaro_lower": self.cesaro_lower,
            "cesaro_ratio_max": self.cesaro_ratio_max,
            "cesaro_argmax": cplx(self.cesaro_argmax),
            "cesaro_n_at_max": self.cesaro_n_at_max,
            "ks_ref": self.ks_ref,
            "gz_ratio_max": self.gz_ratio_max,
            "grid": self.grid,
        }


def kreiss_report(
    T: ComplexMatrix,
    cfg: SearchConfig = SearchConfig(),
    n_max: int = 16,
    xi_max: float = 40.0,
    cesaro_n_max: int = 256,
    with_gz: bool = False,
) -> KreissReport:
    """Run every functional and assemble the unified report."""
    rho = T.spectral_radius()
    k = kreiss_constant(T, cfg)
    ks = strong_kreiss_constant(T, cfg, n_max)
    ex = exponential_criterion(T, cfg, xi_max)
    ks_ref = ks.value if math.isfinite(ks.value) and ks.value > 0 else 1.0
    ces = cesaro_partial_sum_bound(T, cfg, cesaro_n_max, ks_ref)
    gz = None
    if with_gz and math.isfinite(ks_ref):
        gz = gz_partial_resolvent_ratio(T, cfg, min(cesaro_n_max, 64), ks_ref).value
    return KreissReport(
        p=cfg.p,
        seed=cfg.seed,
        spectral_radius=rho,
        diverged=k.diverged,
        k_lower=k.value,
        k_upper_hint=None if k.diverged else k.value,
        k_argmax=k.argmax,
        ks_lower=ks.value,
        ks_argmax=ks.argmax,
        ks_n_at_max=ks.n_at_max,
        exp_lower=ex.value,
        exp_argmax=ex.argmax,
        cesaro_lower=ces.cesaro_lower,
        cesaro_ratio_max=ces.ratio_max,
        cesaro_argmax=ces.argmax,
        cesaro_n_at_max=ces.n_at_max,
        ks_ref=ks_ref,
        grid={
            "r_max": cfg.r_max,
            "radial_count": cfg.radial_count,
            "angular_count": cfg.angular_count,
            "refine_rounds": cfg.refine_rounds,
            "refine_shrink": cfg.refine_shrink,
            "n_max": n_max,
            "xi_max": xi_max,
            "cesaro_n_max": cesaro_n_max,
        },
        gz_ratio_max=gz,
    )
