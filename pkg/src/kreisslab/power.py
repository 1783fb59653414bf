"""Growth profiling of ||T^n|| and regression against n^alpha (log(n+2))^beta.

The polynomial and polynomial-log exponents are nearly collinear over a
single octave of n, so fits use a wide window (n >= sqrt(n_max) by default)
rather than only the top of the range; with data up to 2^14 this separates
alpha from beta to ~0.002 / ~0.02 under 1% multiplicative noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import AscentConfig, NormBounds, power_norm_sequence
from .operators import ComplexMatrix

_E = math.e


class DegenerateFitError(ValueError):
    """The regression design matrix is rank-deficient."""


@dataclass(frozen=True)
class GrowthFit:
    alpha: float
    beta: float
    logC: float
    residual: float  # RMS of log-space misfit over the fitted window
    n_range: tuple[int, int]
    model: str


def default_fit_floor(n_max: int) -> int:
    return max(8, math.isqrt(n_max))


def growth_fit(seq, model: str = "poly", n_min_fit: int | None = None) -> GrowthFit:
    """Least squares of log v against log n (and log log(n+2) for poly_log).

    `seq` is a list of (n, value) with positive values and strictly
    increasing n; at least 8 samples are required.  Samples below the fit
    floor are dropped to suppress transients unless that would leave fewer
    than 8 points.
    """
    if model not in ("poly", "poly_log"):
        raise ValueError(f"unknown model {model!r}")
    pts = [(int(n), float(v)) for n, v in seq]
    if len(pts) < 8:
        raise ValueError("need at least 8 samples")
    ns = np.array([n for n, _ in pts], dtype=float)
    vs = np.array([v for _, v in pts], dtype=float)
    if np.any(vs <= 0):
        raise ValueError("values must be positive")
    if np.any(np.diff(ns) <= 0):
        raise ValueError("n must be strictly increasing")
    floor = default_fit_floor(int(ns[-1])) if n_min_fit is None else int(n_min_fit)
    keep = ns >= floor
    if int(keep.sum()) < 8:
        keep = np.ones_like(keep, dtype=bool)
    nf, vf = ns[keep], vs[keep]
    cols = [np.ones_like(nf), np.log(nf)]
    if model == "poly_log":
        cols.append(np.log(np.log(nf + 2.0)))
    X = np.stack(cols, axis=1)
    y = np.log(vf)
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise DegenerateFitError("design matrix is rank-deficient over the fit window")
    resid = float(np.sqrt(np.mean((X @ coef - y) ** 2)))
    beta = float(coef[2]) if model == "poly_log" else 0.0
    return GrowthFit(
        alpha=float(coef[1]),
        beta=beta,
        logC=float(coef[0]),
        residual=resid,
        n_range=(int(nf[0]), int(nf[-1])),
        model=model,
    )


@dataclass(frozen=True)
class BoundsRow:
    n: int
    norm_lower: float
    norm_upper: float
    ceiling_kreiss: float
    ceiling_strong: float
    ceiling_matrixthm: float
    margin_kreiss: float
    margin_strong: float
    margin_matrixthm: float


@dataclass
class BoundsReport:
    """Margins of ||T^n|| against the three universal ceilings.

    Margins divide by the upper side of the norm bounds, so a margin below 1
    is a real numeric finding and not an ascent artifact.  Because k_ref and
    ks_ref are themselves lower bounds of the true constants, such a finding
    flags inconsistency of the substituted reference, not of the ceiling.
    """

    dim: int
    p: float
    k_ref: float
    ks_ref: float
    n_max: int
    rows: list[BoundsRow]
    min_margin_kreiss: float
    n_at_min_kreiss: int
    min_margin_strong: float
    n_at_min_strong: int
    min_margin_matrixthm: float
    n_at_min_matrixthm: int
    implied_k_floor: float
    implied_k_floor_matrixthm: float
    implied_ks_floor: float
    note: str = "reference constants are lower-bound substitutions"

    def flagged(self, slack: float = 1e-6) -> bool:
        return (
            self.min_margin_kreiss < 1.0 - slack
            or self.min_margin_strong < 1.0 - slack
            or self.min_margin_matrixthm < 1.0 - slack
        )

    def combined_k_floor(self, k_ref_lower: float) -> float:
        """Best available lower bound for the true Kreiss constant: the max of
        the power-implied floors and the resolvent-search floor."""
        return max(self.implied_k_floor, self.implied_k_floor_matrixthm, k_ref_lower)


def _margin(ceiling: float, denom: float) -> float:
    if denom == 0.0:
        return math.inf
    return ceiling / denom


def check_universal_bounds(
    T: ComplexMatrix,
    p: float,
    k_ref: float,
    ks_ref: float,
    n_max: int,
    cfg: AscentConfig = AscentConfig(),
    seq: list[NormBounds] | None = None,
) -> BoundsReport:
    """Evaluate the linear, square-root, and dimension ceilings for n <= n_max."""
    if k_ref <= 0 or ks_ref <= 0:
        raise ValueError("reference constants must be positive")
    if seq is None:
        seq = power_norm_sequence(T, p, n_max, cfg)
    d = T.dim
    rows: list[BoundsRow] = []
    implied_k = 0.0
    implied_k_mat = 0.0
    implied_ks = 0.0
    for n, b in enumerate(seq, start=1):
        ck = k_ref * _E * (n + 1)
        cs = ks_ref * math.sqrt(2.0 * math.pi * (n + 1))
        cm = k_ref * _E * d
        rows.append(
            BoundsRow(
                n=n,
                norm_lower=b.lower,
                norm_upper=b.upper,
                ceiling_kreiss=ck,
                ceiling_strong=cs,
                ceiling_matrixthm=cm,
                margin_kreiss=_margin(ck, b.upper),
                margin_strong=_margin(cs, b.upper),
                margin_matrixthm=_margin(cm, b.upper),
            )
        )
        implied_k = max(implied_k, b.lower / (_E * (n + 1)))
        implied_k_mat = max(implied_k_mat, b.lower / (_E * d))
        implied_ks = max(implied_ks, b.lower / math.sqrt(2.0 * math.pi * (n + 1)))
    mk = min(rows, key=lambda r: r.margin_kreiss)
    ms = min(rows, key=lambda r: r.margin_strong)
    mm = min(rows, key=lambda r: r.margin_matrixthm)
    return BoundsReport(
        dim=d,
        p=p,
        k_ref=k_ref,
        ks_ref=ks_ref,
        n_max=n_max,
        rows=rows,
        min_margin_kreiss=mk.margin_kreiss,
        n_at_min_kreiss=mk.n,
        min_margin_strong=ms.margin_strong,
        n_at_min_strong=ms.n,
        min_margin_matrixthm=mm.margin_matrixthm,
        n_at_min_matrixthm=mm.n,
        implied_k_floor=implied_k,
        implied_k_floor_matrixthm=implied_k_mat,
        implied_ks_floor=implied_ks,
    )


BOUNDS_CSV_HEADER = (
    "n",
    "norm_lower",
    "norm_upper",
    "ceiling_kreiss",
    "ceiling_strong",
    "ceiling_matrixthm",
    "margin_kreiss",
    "margin_strong",
    "margin_matrixthm",
)


def bounds_csv_rows(report: BoundsReport) -> list[tuple]:
    return [
        (
            r.n,
            r.norm_lower,
            r.norm_upper,
            r.ceiling_kreiss,
            r.ceiling_strong,
            r.ceiling_matrixthm,
            r.margin_kreiss,
            r.margin_strong,
            r.margin_matrixthm,
        )
        for r in report.rows
    ]


GROWTH_CSV_HEADER = ("n", "norm_lower", "norm_upper")


def growth_csv_rows(seq: list[NormBounds]) -> list[tuple]:
    return [(n, b.lower, b.upper) for n, b in enumerate(seq, start=1)]
