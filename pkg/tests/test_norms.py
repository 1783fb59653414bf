import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kreisslab.norms import (
    AscentConfig,
    ascent_lower_bound,
    operator_p_norm,
    power_norm_sequence,
    vector_p_norm,
)
from kreisslab.operators import ComplexMatrix, OperatorSpec, gallery, make_gallery_operator


def test_vector_norm_pythagorean():
    assert vector_p_norm([3, 4], 2) == pytest.approx(5.0)


def test_vector_norm_one():
    assert vector_p_norm([1, 1, 1], 1) == pytest.approx(3.0)


def test_vector_norm_inf():
    assert vector_p_norm([2, -5], math.inf) == pytest.approx(5.0)


def test_vector_norm_rejects_small_p():
    with pytest.raises(ValueError):
        vector_p_norm([1.0], 0.5)


def test_vector_norm_large_p_no_overflow():
    v = np.array([1e200, 1e200])
    assert math.isfinite(vector_p_norm(v, 64))


@given(st.integers(0, 2**32 - 1), st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]))
def test_vector_norm_triangle_inequality(seed, p):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert vector_p_norm(u + v, p) <= vector_p_norm(u, p) + vector_p_norm(v, p) + 1e-12


def test_operator_norm_inf_row_sum():
    T = ComplexMatrix([[1, 1], [0, 1]])
    b = operator_p_norm(T, math.inf)
    assert b.lower == b.upper == pytest.approx(2.0)
    assert b.method == "exact"


def test_operator_norm_identity_any_p():
    T = make_gallery_operator(OperatorSpec("identity", 4))
    for p in (1.0, 1.5, 2.0, 3.0, math.inf):
        b = operator_p_norm(T, p)
        assert b.lower == pytest.approx(1.0, rel=1e-9)
        assert b.upper == pytest.approx(1.0, rel=1e-9)


def test_operator_norm_nilpotent_svd_oracle():
    # explicit 2x2 SVD: singular values of [[0,2],[0,0]] are {2, 0}
    T = ComplexMatrix([[0, 2], [0, 0]])
    b = operator_p_norm(T, 2.0)
    assert b.lower == b.upper == pytest.approx(2.0)


def test_operator_norm_zero_matrix():
    T = make_gallery_operator(OperatorSpec("zero", 3))
    for p in (1.0, 2.0, 2.5, math.inf):
        b = operator_p_norm(T, p)
        assert b.lower == 0.0 and b.upper == 0.0


def test_witness_reproduces_lower():
    rng = np.random.default_rng(7)
    for p in (1.0, 2.0, 3.0, math.inf):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = operator_p_norm(ComplexMatrix(A), p)
        ratio = vector_p_norm(A @ b.witness, p) / vector_p_norm(b.witness, p)
        assert ratio == pytest.approx(b.lower, rel=1e-12)


def test_random_matrices_bound_ordering():
    rng = np.random.default_rng(123)
    for _ in range(20):
        A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        T = ComplexMatrix(A)
        for p in (1.0, 1.5, 2.0, 3.0, math.inf):
            b = operator_p_norm(T, p, AscentConfig(restarts=12, max_steps=200, seed=3))
            assert b.lower <= b.upper * (1 + 1e-12)
            if p in (1.0, 2.0, math.inf):
                assert b.lower == b.upper


def test_ascent_matches_svd_on_seeded_corpus():
    # sanity of the ascent engine: p=2 against the exact singular value
    rng = np.random.default_rng(42)
    for i in range(100):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        sv = float(np.linalg.svd(A, compute_uv=False)[0])
        est, witness = ascent_lower_bound(ComplexMatrix(A), 2.0, AscentConfig(seed=i))
        assert abs(est - sv) / sv < 1e-6
        assert vector_p_norm(witness, 2.0) == pytest.approx(1.0, rel=1e-9)


def test_ascent_deterministic_given_seed():
    A = np.random.default_rng(5).standard_normal((4, 4))
    cfg = AscentConfig(seed=99)
    v1, w1 = ascent_lower_bound(ComplexMatrix(A), 2.5, cfg)
    v2, w2 = ascent_lower_bound(ComplexMatrix(A), 2.5, cfg)
    assert v1 == v2
    assert np.array_equal(w1, w2)


def test_power_sequence_jordan_closed_form():
    T = ComplexMatrix([[1, 1], [0, 1]])
    seq = power_norm_sequence(T, math.inf, 5)
    # T^n = [[1, n], [0, 1]], row sum n + 1
    assert [b.lower for b in seq] == pytest.approx([2, 3, 4, 5, 6])


def test_power_sequence_zero():
    T = make_gallery_operator(OperatorSpec("zero", 2))
    seq = power_norm_sequence(T, 2.0, 4)
    assert all(b.lower == 0.0 and b.upper == 0.0 for b in seq)


def test_power_sequence_rotation_isometry():
    T = make_gallery_operator(OperatorSpec("rotation", 1, angles=0.3))
    seq = power_norm_sequence(T, 2.0, 50)
    assert all(b.lower == pytest.approx(1.0, rel=1e-12) for b in seq)


def test_power_sequence_scale_ledger():
    # 10^n growth forces renormalization through the 1e100 guard
    T = make_gallery_operator(OperatorSpec("scalar", 2, scale=10.0))
    seq = power_norm_sequence(T, 2.0, 150)
    assert seq[-1].lower == pytest.approx(1e150, rel=1e-10)


def test_power_sequence_requires_positive_n():
    T = make_gallery_operator(OperatorSpec("identity", 2))
    with pytest.raises(ValueError):
        power_norm_sequence(T, 2.0, 0)


@pytest.mark.parametrize("p", [2.0, 3.0, math.inf])
def test_submultiplicativity_of_upper_bounds(p):
    cfg = AscentConfig(restarts=8, max_steps=120, seed=1)
    for entry in gallery():
        T = make_gallery_operator(entry.spec)
        ub = {}
        M = np.eye(T.dim, dtype=complex)
        for n in range(1, 65):
            M = T.entries @ M
            ub[n] = operator_p_norm(ComplexMatrix(M), p, cfg).upper
        for m in range(1, 33):
            for n in range(1, 65 - m):
                assert ub[m + n] <= ub[m] * ub[n] * (1 + 1e-9) + 1e-300
