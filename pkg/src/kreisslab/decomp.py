"""Upper/lower frequency-decomposition ratios and the derived inequalities.

For an interval family I covering the support of f, the two ratios

  upper side:  ||f||_p / (sum_I ||D_I f||_p^q)^{1/q}
  lower side:  (sum_I ||D_I f||_p^q)^{1/q} / ||f||_p

are sample-wise lower bounds for any admissible upper/lower decomposition
constant of the ambient space.  estimate_constant accumulates an empirical
floor over a seeded corpus; it never claims convergence to the true constant
(the interesting spaces are infinite dimensional) and all reports label the
value as an empirical floor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .fourier import (
    Interval,
    IntervalPartition,
    TrigPolynomial,
    lp_torus_norm,
    pairing,
    project_interval,
)
from .norms import vector_p_norm


class ZeroPolynomialError(ValueError):
    """Decomposition ratios are undefined for the zero polynomial."""


def lq_aggregate(values, q: float) -> float:
    """(sum a_k^q)^{1/q} for nonnegative a_k, max for q = inf; overflow-safe."""
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return 0.0
    if math.isinf(q):
        return float(a.max())
    m = float(a.max())
    if m == 0.0:
        return 0.0
    return m * float(np.sum((a / m) ** q) ** (1.0 / q))


def block_norms(
    f: TrigPolynomial, part: IntervalPartition, p: float, inner_p: float
) -> np.ndarray:
    return np.array(
        [lp_torus_norm(project_interval(f, iv), p, inner_p).value for iv in part.intervals]
    )


def decomposition_ratio(
    f: TrigPolynomial,
    part: IntervalPartition,
    p: float,
    q: float,
    inner_p: float = 2.0,
    side: str = "upper",
) -> float:
    """One decomposition sample; any valid constant must dominate it."""
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    if f.is_zero:
        raise ZeroPolynomialError("f must be nonzero")
    if not part.covers(f.support):
        raise ValueError("partition does not cover the support of f")
    total = lp_torus_norm(f, p, inner_p).value
    agg = lq_aggregate(block_norms(f, part, p, inner_p), q)
    if side == "upper":
        return total / agg
    return agg / total


@dataclass(frozen=True)
class DecompSearchConfig:
    """Seeded randomized witness search over supports, coefficients, partitions."""

    trials: int = 10_000
    ascent_steps: int = 200
    top_k: int = 10
    max_support: int = 32
    max_dim: int = 4
    seed: int = 0


@dataclass
class DecompositionEstimate:
    side: str
    p: float
    q: float
    inner_p: float
    gamma: float
    constant_lower: float
    witness: TrigPolynomial
    witness_partition: IntervalPartition
    trials: int
    seed: int
    label: str = "empirical floor"

    def reevaluate(self) -> float:
        ratio = decomposition_ratio(
            self.witness, self.witness_partition, self.p, self.q, self.inner_p, self.side
        )
        return ratio / len(self.witness_partition) ** self.gamma


def contiguous_partitions(freqs: tuple[int, ...]) -> list[IntervalPartition]:
    """Every way to cut the sorted support into contiguous interval blocks."""
    fs = sorted(freqs)
    if not fs:
        return []
    out = []
    for cuts in itertools.product((0, 1), repeat=len(fs) - 1):
        blocks = []
        start = fs[0]
        prev = fs[0]
        for i, c in enumerate(cuts):
            if c:
                blocks.append(Interval(start, prev))
                start = fs[i + 1]
            prev = fs[i + 1]
        blocks.append(Interval(start, prev))
        out.append(IntervalPartition(tuple(blocks)))
    return out


def _run_block_norms(f: TrigPolynomial, p: float, inner_p: float) -> np.ndarray:
    """w[i, j] = ||D_I f||_p for I spanning support slots i..j, on a shared grid.

    Prefix sums of the per-frequency waveforms give every contiguous block's
    values in one vectorized pass; the grid uses the full-support quadrature
    rule, which is at least as fine as any block needs.
    """
    from .fourier import quadrature_points

    s = len(f.freqs)
    N, _ = quadrature_points(f, p, inner_p)
    t = np.arange(N) / N
    phases = np.exp(2j * np.pi * np.outer(np.asarray(f.freqs, dtype=float), t))
    waves = f.vecs[:, None, :] * phases[:, :, None]
    prefix = np.concatenate([np.zeros((1, N, f.dim), dtype=complex), np.cumsum(waves, axis=0)])
    w = np.zeros((s, s))
    for i in range(s):
        vals = prefix[i + 1 :] - prefix[i]  # blocks i..j for j = i..s-1
        a = np.abs(vals)
        if math.isinf(inner_p):
            row = a.max(axis=2)
        elif inner_p == 2.0:
            row = np.sqrt(np.sum(a * a, axis=2))
        else:
            row = np.sum(a ** inner_p, axis=2) ** (1.0 / inner_p)
        w[i, i:] = np.mean(row ** p, axis=1) ** (1.0 / p)
    return w


def _best_contiguous_partition(
    w: np.ndarray, q: float, gamma: float, side: str
) -> tuple[float, list[tuple[int, int]]]:
    """Exact optimum of ratio / (#I)^gamma over contiguous partitions.

    Dynamic program over (block count, last slot): the lower side maximizes
    sum_I w^q, the upper side minimizes it, then each block count c is scored
    and the best (value, slot cuts) pair is reconstructed.
    """
    s = w.shape[0]
    wq = w ** q
    sign = 1.0 if side == "lower" else -1.0
    neg = -math.inf
    best = np.full((s + 1, s), neg)
    parent = np.zeros((s + 1, s), dtype=int)
    best[1, :] = sign * wq[0, :]
    for c in range(2, s + 1):
        # best[c, j] = opt_i best[c-1, i-1] + sign*wq[i, j] over i in [c-1, j]
        prev = best[c - 1]
        cand = np.full((s, s), neg)
        for i in range(c - 1, s):
            cand[i, i:] = prev[i - 1] + sign * wq[i, i:]
        best[c] = cand.max(axis=0)
        parent[c] = cand.argmax(axis=0)
    fnorm = w[0, s - 1]
    best_val, best_c = -math.inf, 1
    for c in range(1, s + 1):
        tot = sign * best[c, s - 1]
        if not (tot > 0) or not math.isfinite(tot):
            continue
        agg = tot ** (1.0 / q)
        ratio = (agg / fnorm) if side == "lower" else (fnorm / agg)
        val = ratio / c ** gamma
        if val > best_val:
            best_val, best_c = val, c
    cuts = []
    j, c = s - 1, best_c
    while c >= 1:
        i = int(parent[c, j]) if c > 1 else 0
        cuts.append((i, j))
        j, c = i - 1, c - 1
    cuts.reverse()
    return best_val, cuts


def _objective_dp(
    f: TrigPolynomial, p: float, q: float, inner_p: float, gamma: float, side: str
) -> tuple[float, IntervalPartition]:
    w = _run_block_norms(f, p, inner_p)
    if w[0, len(f.freqs) - 1] == 0.0:
        raise ZeroPolynomialError("f must be nonzero")
    val, cuts = _best_contiguous_partition(w, q, gamma, side)
    part = IntervalPartition(
        tuple(Interval(f.freqs[i], f.freqs[j]) for i, j in cuts)
    )
    return val, part


def _draw_polynomial(rng: np.random.Generator, cfg: DecompSearchConfig) -> TrigPolynomial:
    d = int(rng.integers(1, cfg.max_dim + 1))
    size = int(rng.integers(2, cfg.max_support + 1))
    span = cfg.max_support
    if rng.random() < 0.5:
        start = int(rng.integers(-span, span - size + 2))
        freqs = np.arange(start, start + size)
    else:
        freqs = rng.choice(np.arange(-span, span + 1), size=min(size, 2 * span + 1), replace=False)
    if rng.random() < 0.5:
        # sign-pattern coefficients probe the extremal combinatorics
        vecs = rng.choice([-1.0, 1.0], size=(len(freqs), d)).astype(complex)
    else:
        vecs = rng.standard_normal((len(freqs), d)) + 1j * rng.standard_normal((len(freqs), d))
    return TrigPolynomial(tuple(int(n) for n in freqs), vecs, d)


def _sign_pattern_candidates(cfg: DecompSearchConfig) -> list[TrigPolynomial]:
    # small scalar cases admit exhaustive sign enumeration; include it so the
    # corpus dominates any brute-force baseline on the same domain
    if cfg.max_dim != 1 or cfg.max_support > 8:
        return []
    s = cfg.max_support
    freqs = tuple(range(s))
    out = []
    for bits in range(2 ** s):
        signs = [1.0 if bits & (1 << k) else -1.0 for k in range(s)]
        out.append(TrigPolynomial(freqs, np.array(signs, dtype=complex)[:, None], 1))
    return out


def estimate_constant(
    p: float,
    q: float,
    inner_p: float = 2.0,
    side: str = "upper",
    gamma: float = 0.0,
    cfg: DecompSearchConfig = DecompSearchConfig(),
) -> DecompositionEstimate:
    """Empirical floor for the decomposition constant, maximizing
    ratio / (#I)^gamma over a seeded corpus plus coefficient ascent.

    Each sample is scored at its exact best contiguous partition (dynamic
    program), so the search over partitions is not itself randomized, and
    more trials can only raise the floor.
    """
    if not (1 < p < math.inf):
        raise ValueError("p must lie in (1, inf)")
    if not (1 <= q < math.inf):
        raise ValueError("q must lie in [1, inf)")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    rng = np.random.default_rng(cfg.seed)
    pool: list[tuple[float, TrigPolynomial, IntervalPartition]] = []
    for f in _sign_pattern_candidates(cfg):
        val, part = _objective_dp(f, p, q, inner_p, gamma, side)
        pool.append((val, f, part))
    for _ in range(cfg.trials):
        f = _draw_polynomial(rng, cfg)
        if f.is_zero:
            continue
        val, part = _objective_dp(f, p, q, inner_p, gamma, side)
        pool.append((val, f, part))
    if not pool:
        raise ValueError("corpus produced no nonzero polynomial")
    pool.sort(key=lambda t: t[0], reverse=True)
    best_val, bf, bpart = pool[0]
    best = (bf, bpart)

    for _, f, _part in pool[: cfg.top_k]:
        vecs = f.vecs.copy()
        cur, cur_part = _objective_dp(f, p, q, inner_p, gamma, side)
        step = 0.25
        for _ in range(cfg.ascent_steps):
            trial = vecs + step * (
                rng.standard_normal(vecs.shape) + 1j * rng.standard_normal(vecs.shape)
            )
            cand = TrigPolynomial(f.freqs, trial, f.dim)
            if cand.is_zero:
                continue
            v, vpart = _objective_dp(cand, p, q, inner_p, gamma, side)
            if v > cur:
                cur, vecs, cur_part = v, trial, vpart
                step = min(step * 1.3, 1.0)
            else:
                step = max(step * 0.7, 1e-6)
        if cur > best_val:
            best_val, best = cur, (TrigPolynomial(f.freqs, vecs, f.dim), cur_part)

    return DecompositionEstimate(
        side=side,
        p=p,
        q=q,
        inner_p=inner_p,
        gamma=gamma,
        constant_lower=best_val,
        witness=best[0],
        witness_partition=best[1],
        trials=cfg.trials,
        seed=cfg.seed,
    )


def hoelder_growth_check(
    f: TrigPolynomial,
    part: IntervalPartition,
    p: float,
    q: float,
    r: float,
    inner_p: float = 2.0,
) -> float:
    """margin = (#I)^{1/q - 1/r} (sum a^r)^{1/r} / (sum a^q)^{1/q}, a_I = ||D_I f||_p.

    Hoelder guarantees margin >= 1 for r >= q; the check applies the
    inequality to the computed block norms, so quadrature error cannot push
    it below 1.
    """
    if r < q:
        raise ValueError(f"need r >= q, got r={r} < q={q}")
    if not part.covers(f.support):
        raise ValueError("partition does not cover the support of f")
    a = block_norms(f, part, p, inner_p)
    denom = lq_aggregate(a, q)
    if denom == 0.0:
        return math.inf
    inv_r = 0.0 if math.isinf(r) else 1.0 / r
    count_pow = len(part) ** (1.0 / q - inv_r)
    return count_pow * lq_aggregate(a, r) / denom


def pairing_duality_check(
    f: TrigPolynomial,
    g: TrigPolynomial,
    part: IntervalPartition,
    p: float,
    q: float,
    inner_p: float = 2.0,
) -> float | None:
    """margin = (sum ||D_I f||_p^q)^{1/q} (sum ||D_I g||_{p'}^{q'})^{1/q'} / |<f, g>|.

    Two Hoelder applications give margin >= 1.  Returns None (a skip, not an
    error) when the pairing vanishes.
    """
    if not part.covers(f.support) or not part.covers(g.support):
        raise ValueError("partition must cover both supports")
    pr = pairing(f, g)
    if abs(pr) == 0.0:
        return None
    p_dual = math.inf if p == 1 else p / (p - 1.0)
    q_dual = math.inf if q == 1 else q / (q - 1.0)
    inner_dual = math.inf if inner_p == 1 else inner_p / (inner_p - 1.0)
    af = block_norms(f, part, p, inner_p)
    ag = block_norms(g, part, p_dual, inner_dual)
    return lq_aggregate(af, q) * lq_aggregate(ag, q_dual) / abs(pr)


def fourier_type_check(
    xs, p: float, q: float, u_ref: float, inner_p: float = 2.0
) -> float:
    """margin = U_ref (sum ||x_n||^q)^{1/q} / ||sum e_n x_n||_{L^p}.

    With U_ref produced by a singleton-partition estimate over a corpus
    containing xs, the margin is >= 1 up to that corpus' tolerance.
    """
    vecs = [np.atleast_1d(np.asarray(x, dtype=complex)) for x in xs]
    if not vecs or all(np.all(v == 0) for v in vecs):
        raise ValueError("xs must contain a nonzero vector")
    d = vecs[0].shape[0]
    f = TrigPolynomial.from_coeffs({n: v for n, v in enumerate(vecs)}, d)
    lhs = lp_torus_norm(f, p, inner_p).value
    rhs = u_ref * lq_aggregate([vector_p_norm(v, inner_p) for v in vecs], q)
    return rhs / lhs


@dataclass(frozen=True)
class RademacherEstimate:
    kind: str
    exponent: float
    value: float  # implied sample lower bound for tau_p or c_q
    std_error: float
    mean_square: float
    samples: int
    seed: int


def rademacher_constants(
    xs,
    exponent: float,
    kind: str = "type",
    samples: int = 4096,
    seed: int = 0,
    inner_p: float = 2.0,
) -> RademacherEstimate:
    """Monte-Carlo moment ||sum eps_k x_k||_{L^2(Omega)} against the l^p aggregate.

    eps_k are independent and uniform on the complex unit circle.  For
    kind='type' the estimate is a sample lower bound of the type-p constant;
    for kind='cotype' of the cotype-q constant.
    """
    if kind not in ("type", "cotype"):
        raise ValueError("kind must be 'type' or 'cotype'")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    vecs = np.stack([np.atleast_1d(np.asarray(x, dtype=complex)) for x in xs])
    k, d = vecs.shape
    rng = np.random.default_rng(seed)
    eps = np.exp(2j * np.pi * rng.random((samples, k)))
    sums = eps @ vecs  # (samples, d)
    if math.isinf(inner_p):
        row = np.abs(sums).max(axis=1)
    else:
        row = np.sum(np.abs(sums) ** inner_p, axis=1) ** (1.0 / inner_p)
    sq = row ** 2
    mean_sq = float(np.mean(sq))
    se_sq = float(np.std(sq, ddof=1) / math.sqrt(samples))
    l2 = math.sqrt(mean_sq)
    se_l2 = se_sq / (2.0 * l2) if l2 > 0 else 0.0
    agg = lq_aggregate([vector_p_norm(v, inner_p) for v in vecs], exponent)
    if kind == "type":
        value = l2 / agg
        se = se_l2 / agg
    else:
        value = agg / l2 if l2 > 0 else math.inf
        se = agg * se_l2 / (l2 * l2) if l2 > 0 else math.inf
    return RademacherEstimate(
        kind=kind,
        exponent=exponent,
        value=value,
        std_error=se,
        mean_square=mean_sq,
        samples=samples,
        seed=seed,
    )
