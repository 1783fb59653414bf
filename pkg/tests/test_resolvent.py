import math

import numpy as np
import pytest

from kreisslab.norms import power_norm_sequence
from kreisslab.operators import ComplexMatrix, OperatorSpec, gallery, make_gallery_operator
from kreisslab.resolvent import (
    SearchConfig,
    SingularResolventError,
    cesaro_partial_sum_bound,
    exponential_criterion,
    gz_partial_resolvent_ratio,
    kreiss_constant,
    kreiss_report,
    resolvent_at,
    strong_kreiss_constant,
)

FAST = SearchConfig(radial_count=16, angular_count=16, refine_rounds=2)


def nilpotent2():
    return make_gallery_operator(OperatorSpec("nilpotent", 2, coupling=2.0))


# ---------------------------------------------------------------------------
# resolvent_at
# ---------------------------------------------------------------------------


def test_resolvent_of_zero():
    T = make_gallery_operator(OperatorSpec("zero", 2))
    R = resolvent_at(T, 2.0)
    assert np.allclose(R.entries, 0.5 * np.eye(2), atol=1e-14)


def test_resolvent_of_nilpotent_closed_form():
    # Neumann series terminates: (r - T)^{-1} = [[1/r, 2/r^2], [0, 1/r]]
    T = nilpotent2()
    for r in (1.5, 3.0, 10.0):
        R = resolvent_at(T, r)
        expect = np.array([[1 / r, 2 / r**2], [0, 1 / r]])
        assert np.allclose(R.entries, expect, rtol=1e-12)


def test_resolvent_at_eigenvalue_raises():
    T = make_gallery_operator(OperatorSpec("identity", 2))
    with pytest.raises(SingularResolventError):
        resolvent_at(T, 1.0)


def test_resolvent_residual_contract_on_random_samples():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        d = int(rng.integers(1, 6))
        T = ComplexMatrix(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        lam = (1.1 + 3 * rng.random()) * np.exp(2j * np.pi * rng.random()) * max(
            1.0, T.spectral_radius()
        )
        R = resolvent_at(T, complex(lam))
        A = complex(lam) * np.eye(d) - T.entries
        resid = np.max(np.sum(np.abs(A @ R.entries - np.eye(d)), axis=1))
        assert resid <= 1e-10 * max(np.max(np.sum(np.abs(R.entries), axis=1)), 1e-300)


# ---------------------------------------------------------------------------
# kreiss_constant: closed-form oracles
# ---------------------------------------------------------------------------


def test_kreiss_identity_is_one():
    # sup of (|l|-1)/|l-1| over |l|>1 equals 1, attained on the real axis
    est = kreiss_constant(make_gallery_operator(OperatorSpec("identity", 3)))
    assert 1 - 1e-6 <= est.value <= 1 + 1e-6
    assert est.argmax is not None and abs(est.argmax.imag) < 1e-12


def test_kreiss_zero_limit_value():
    # (|l|-1)/|l| -> 1 only as |l| -> inf
    est = kreiss_constant(make_gallery_operator(OperatorSpec("zero", 2)))
    assert 1 - 1e-3 <= est.value <= 1.0


def test_kreiss_nilpotent_oracle():
    # closed form sigma_max((l-T)^{-1}) = (|y| + sqrt(y^2 + 4 x^2))/2 with
    # x = 1/r, y = 2/r^2; dense 1-D grid over r approaches the sup 1 from below
    rs = 1.0 + np.logspace(-8, 6, 20001)
    x, y = 1.0 / rs, 2.0 / rs**2
    vals = (rs - 1.0) * (y + np.sqrt(y**2 + 4 * x**2)) / 2.0
    oracle = float(vals.max())
    assert oracle <= 1.0
    est = kreiss_constant(nilpotent2())
    assert 0.99 <= est.value <= 1.0 + 1e-9
    assert est.value >= oracle - 1e-9


def test_kreiss_divergence_flag():
    T = make_gallery_operator(OperatorSpec("scalar", 2, scale=1.5))
    est = kreiss_constant(T)
    assert est.diverged and math.isinf(est.value)


# ---------------------------------------------------------------------------
# strong_kreiss_constant
# ---------------------------------------------------------------------------


def test_strong_kreiss_identity():
    est = strong_kreiss_constant(make_gallery_operator(OperatorSpec("identity", 3)), FAST, 16)
    assert est.value == pytest.approx(1.0, abs=1e-6)


def test_strong_kreiss_zero():
    est = strong_kreiss_constant(make_gallery_operator(OperatorSpec("zero", 2)), FAST, 8)
    assert 1 - 1e-3 <= est.value <= 1 + 1e-9


def test_strong_dominates_kreiss_everywhere(gallery_matrices):
    for name, T in gallery_matrices.items():
        if T.spectral_radius() > 1 + 1e-9:
            continue
        k = kreiss_constant(T, FAST)
        ks = strong_kreiss_constant(T, FAST, 8)
        assert k.value <= ks.value + 1e-9, name


# ---------------------------------------------------------------------------
# exponential_criterion
# ---------------------------------------------------------------------------


def test_exp_criterion_zero():
    est = exponential_criterion(make_gallery_operator(OperatorSpec("zero", 2)), FAST, 10.0)
    assert est.value == pytest.approx(1.0, abs=1e-9)


def test_exp_criterion_identity():
    # e^{Re xi - |xi|} <= 1 with equality on the nonnegative real axis
    est = exponential_criterion(make_gallery_operator(OperatorSpec("identity", 2)), FAST, 10.0)
    assert est.value == pytest.approx(1.0, abs=1e-9)


def test_exp_criterion_nilpotent_oracle():
    # e^{xi T} = I + xi T; on the real axis sigma_max = xi + sqrt(xi^2 + 1)
    xis = np.linspace(0.0, 10.0, 4001)
    oracle = float(np.max(np.exp(-xis) * (xis + np.sqrt(xis**2 + 1))))
    est = exponential_criterion(nilpotent2(), FAST, 10.0)
    assert est.value >= oracle - 1e-9
    assert est.value == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# cesaro partial sums
# ---------------------------------------------------------------------------


def test_cesaro_identity_ratio():
    T = make_gallery_operator(OperatorSpec("identity", 2))
    res = cesaro_partial_sum_bound(T, SearchConfig(angular_count=8), 50, 1.0)
    # ||sum_{k<=n} I|| = n + 1 at lambda = 1, so the ratio is exactly 1/20
    assert res.ratio_max == pytest.approx(1 / 20)
    assert res.cesaro_lower == pytest.approx(1.0)


def test_cesaro_zero_max_at_n0():
    T = make_gallery_operator(OperatorSpec("zero", 2))
    res = cesaro_partial_sum_bound(T, SearchConfig(angular_count=8), 20, 1.0)
    assert res.ratio_max == pytest.approx(1 / 20)
    assert res.n_at_max == 0


def test_cesaro_minus_one_resonance():
    # T = diag(-1): at lambda = -1 the summands are all +1, so the ratio
    # stays at its n = 0 value 1/20 for every n (sustained resonance)
    T = ComplexMatrix([[-1.0]])
    res = cesaro_partial_sum_bound(T, SearchConfig(angular_count=8), 64, 1.0)
    assert res.ratio_max == pytest.approx(1 / 20)
    for n in (1, 7, 64):
        resonant = sum((-1.0) ** k * (-1.0) ** k for k in range(n + 1))
        assert resonant / (20 * (n + 1)) == pytest.approx(1 / 20)


def test_gz_ratio_informational():
    T = make_gallery_operator(OperatorSpec("identity", 2))
    est = gz_partial_resolvent_ratio(T, FAST, 16, 1.0)
    assert math.isfinite(est.value) and est.value > 0


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def test_functionals_at_least_one_on_contractive_gallery(gallery_matrices):
    for name, T in gallery_matrices.items():
        if T.spectral_radius() > 1 + 1e-9:
            continue
        rep = kreiss_report(T, FAST, n_max=8, xi_max=10.0, cesaro_n_max=32)
        assert rep.k_lower >= 1 - 1e-6, name
        assert rep.ks_lower >= 1 - 1e-6, name
        assert rep.exp_lower >= 1 - 1e-6, name
        assert rep.cesaro_lower >= 1 - 1e-6, name


def test_power_bound_consistency(gallery_matrices):
    # Neumann argument: K <= sup_{n >= 0} ||T^n||, so the searched lower bound
    # cannot exceed an observed power bound
    for entry in gallery():
        if not entry.power_bounded:
            continue
        T = gallery_matrices[entry.name]
        seq = power_norm_sequence(T, 2.0, 10_000)
        ceiling = max(1.0, max(b.upper for b in seq))
        k = kreiss_constant(T, SearchConfig())
        assert k.value <= ceiling + 1e-6, entry.name


def test_refinement_monotonicity(gallery_matrices):
    base = SearchConfig(radial_count=16, angular_count=16, refine_rounds=2)
    dense = SearchConfig(radial_count=32, angular_count=32, refine_rounds=2)
    for name in ("identity3", "nilpotent2", "jordan2_damped", "rotation3"):
        T = gallery_matrices[name]
        assert kreiss_constant(T, dense).value >= kreiss_constant(T, base).value - 1e-12
        assert (
            strong_kreiss_constant(T, dense, 8).value
            >= strong_kreiss_constant(T, base, 8).value - 1e-12
        )


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(r_max=1.0)
    with pytest.raises(ValueError):
        SearchConfig(radial_count=2)
    with pytest.raises(ValueError):
        SearchConfig(refine_rounds=-1)


def test_report_json_shape(gallery_matrices):
    rep = kreiss_report(gallery_matrices["identity3"], FAST, n_max=4, xi_max=5.0,
                        cesaro_n_max=8, with_gz=True)
    d = rep.to_json_dict()
    for key in ("k_lower", "ks_lower", "exp_lower", "cesaro_ratio_max", "n_at_max",
                "seed", "grid", "gz_ratio_max"):
        assert key in d
    assert d["schema"] == "kreisslab/1"
