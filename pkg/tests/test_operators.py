import numpy as np
import pytest

from shiftsim import (
    ChainBreaks,
    K_matrix_via_times,
    K_matrix_via_toeplitz,
    RatFunc,
    TruncationUnsound,
    build_phi_context,
    circle,
    circle_inverse,
    intertwine_residual,
    jordan_chain,
    kernel_dim,
    kernel_dim_formula,
    similar,
    times,
    truncate_U_r,
)
from shiftsim.hardy import all_zeros
from shiftsim.ratfun import rel_distance

from _gen import random_invertible, random_phi, random_ratfunc

Z = RatFunc.monomial(1)
ONE = RatFunc.one()
ZERO = RatFunc.zero()


def _win(mat, w):
    return mat[:w, :w]


# -- truncations of U_r ------------------------------------------------------


def test_truncate_plain_shift(rng):
    ctx = build_phi_context(random_phi(rng))
    top = truncate_U_r(ctx, ZERO, 6)
    assert np.array_equal(top.matrix, np.eye(6, k=1))
    assert top.window == 6


def test_truncate_phi_one_eigenvalue_two():
    ctx = build_phi_context(ONE)
    top = truncate_U_r(ctx, RatFunc.from_poly([2.0]), 4)
    e0 = np.eye(4, dtype=complex)[0]
    assert np.allclose(top.matrix @ e0, 2.0 * e0)


def test_truncate_phi_z_placement():
    ctx = build_phi_context(Z)
    top = truncate_U_r(ctx, ONE, 4)
    want = np.eye(4, k=1, dtype=complex)
    want[0, 1] += 1.0
    assert np.allclose(top.matrix, want)


# -- K sections --------------------------------------------------------------


def test_k_phi_one_is_forward_shift():
    ctx = build_phi_context(ONE)
    top = K_matrix_via_times(ctx, ONE, 8)
    assert np.allclose(top.matrix, np.eye(8, k=-1))


def test_k_phi_z_is_neg_eval():
    ctx = build_phi_context(Z)
    top = K_matrix_via_times(ctx, ONE, 8)
    want = np.zeros((8, 8))
    want[0, 0] = -1.0
    assert np.allclose(top.matrix, want, atol=1e-12)


def test_k_zero_element(rng):
    ctx = build_phi_context(random_phi(rng))
    assert np.allclose(K_matrix_via_times(ctx, ZERO, 8).matrix, 0.0)
    assert np.allclose(K_matrix_via_toeplitz(ctx, ZERO, 16).matrix, 0.0, atol=1e-12)


def test_k_toeplitz_examples():
    ctx = build_phi_context(ONE)
    topo = K_matrix_via_toeplitz(ctx, ONE, 16)
    w = topo.window
    assert np.allclose(_win(topo.matrix, w), np.eye(16, k=-1)[:w, :w], atol=1e-10)
    ctx2 = build_phi_context(Z)
    topo2 = K_matrix_via_toeplitz(ctx2, ONE, 16)
    want = np.zeros((w, w))
    want[0, 0] = -1.0
    assert np.allclose(_win(topo2.matrix, topo2.window), want, atol=1e-10)


def test_k_constructions_agree(rng):
    for _ in range(4):
        ctx = build_phi_context(random_phi(rng))
        r = random_ratfunc(rng)
        kt = K_matrix_via_times(ctx, r, 48)
        ko = K_matrix_via_toeplitz(ctx, r, 48)
        w = min(kt.window, ko.window)
        assert np.max(np.abs(_win(kt.matrix, w) - _win(ko.matrix, w))) < 1e-8


def test_commutator_identity(rng):
    n, w = 48, 32
    for _ in range(4):
        ctx = build_phi_context(random_phi(rng))
        r = random_ratfunc(rng)
        U = np.eye(n, k=1, dtype=complex)
        K = K_matrix_via_times(ctx, r, n).matrix
        outer = np.outer(r.taylor_coeffs(n), np.conj(ctx.phi.taylor_coeffs(n)))
        resid = U @ K - K @ U - outer
        assert np.max(np.abs(_win(resid, w))) < 1e-10


def test_adjoint_annihilates_phi(rng):
    n, w = 48, 32
    for _ in range(4):
        ctx = build_phi_context(random_phi(rng))
        K = K_matrix_via_times(ctx, random_ratfunc(rng), n).matrix
        out = np.conj(K).T @ ctx.phi.taylor_coeffs(n)
        assert np.linalg.norm(out[:w]) < 1e-8


def test_representation_property(rng):
    n, w = 48, 24
    for _ in range(3):
        ctx = build_phi_context(random_phi(rng))
        r, s = random_ratfunc(rng), random_ratfunc(rng)
        Kr = K_matrix_via_times(ctx, r, n).matrix
        Ks = K_matrix_via_times(ctx, s, n).matrix
        Krs = K_matrix_via_times(ctx, times(ctx, r, s), n).matrix
        assert np.max(np.abs(_win(Kr @ Ks - Krs, w))) < 1e-8


def test_circle_to_operator(rng):
    n, w = 48, 24
    for _ in range(3):
        ctx = build_phi_context(random_phi(rng))
        t = random_invertible(ctx, rng)
        tinv = circle_inverse(ctx, t)
        A = np.eye(n) - K_matrix_via_times(ctx, t, n).matrix
        B = np.eye(n) - K_matrix_via_times(ctx, tinv, n).matrix
        assert np.max(np.abs(_win(A @ B - np.eye(n), w))) < 1e-8


# -- the intertwining identity -----------------------------------------------


def test_intertwine_zero_pair(rng):
    ctx = build_phi_context(random_phi(rng))
    assert intertwine_residual(ctx, ZERO, ZERO, 32, 16) < 1e-14


def test_intertwine_constant_half():
    ctx = build_phi_context(ONE)
    res = intertwine_residual(ctx, RatFunc.from_poly([0.5]), ZERO, 64, 32)
    assert res < 1e-10


def test_intertwine_random(rng):
    ctx = build_phi_context(Z)
    for _ in range(3):
        r, s = random_ratfunc(rng), random_ratfunc(rng)
        assert intertwine_residual(ctx, r, s, 64, 24) < 1e-8


def test_intertwine_rational_phi(rng):
    for _ in range(3):
        ctx = build_phi_context(random_phi(rng, "rational"))
        r, s = random_ratfunc(rng), random_ratfunc(rng)
        assert intertwine_residual(ctx, r, s, 64, 24) < 1e-8


# -- Jordan chains -----------------------------------------------------------


def test_chain_empty():
    ctx = build_phi_context(ONE)
    assert jordan_chain(ctx, RatFunc.from_poly([2.0]), 0.5, 0) == []


def test_chain_interior_eigenvalue():
    ctx = build_phi_context(ONE)
    (v,) = jordan_chain(ctx, RatFunc.from_poly([2.0]), 0.5, 1)
    assert rel_distance(v, RatFunc.from_poly([2.0])) < 1e-12
    # U_r v = (1/w) v: the resolvent vector is an eigenvector for 1/w = 2
    n = 16
    u_r = truncate_U_r(ctx, RatFunc.from_poly([2.0]), n).matrix
    vec = v.taylor_coeffs(n)
    assert np.linalg.norm(u_r @ vec - 2.0 * vec) < 1e-10


def test_chain_boundary_eigenvalue():
    ctx = build_phi_context(ONE)
    (v,) = jordan_chain(ctx, ONE, 1.0, 1)
    assert rel_distance(v, ONE) < 1e-12


def test_chain_breaks_when_order_exhausted():
    ctx = build_phi_context(ONE)
    with pytest.raises(ChainBreaks) as info:
        jordan_chain(ctx, RatFunc.from_poly([2.0]), 0.5, 2)
    assert info.value.step == 2
    assert len(info.value.chain) == 1


def test_chain_adjoint_side():
    # phi = z, r = -1: U_r* has a genuine kernel vector at w = 0
    ctx = build_phi_context(Z)
    (v,) = jordan_chain(ctx, RatFunc.from_poly([-1.0]), 0.0, 1, side="adjoint")
    n = 24
    u_r = truncate_U_r(ctx, RatFunc.from_poly([-1.0]), n + 1).matrix
    vec = v.taylor_coeffs(n)
    out = (np.conj(u_r).T @ np.pad(vec, (0, 1)))[:n]
    assert np.linalg.norm(out) < 1e-10


# -- kernel dimensions -------------------------------------------------------


def test_kernel_dim_examples():
    ctx = build_phi_context(ONE)
    assert kernel_dim(ctx, RatFunc.from_poly([2.0]), 0.5, 1, "forward", 64) == 1
    assert kernel_dim(ctx, RatFunc.from_poly([0.5]), 0.3, 2, "forward", 64) == 0
    ctx2 = build_phi_context(Z)
    assert kernel_dim(ctx2, RatFunc.from_poly([-1.0]), 0.0, 1, "adjoint", 64) == 1


def test_kernel_dim_matches_formula_examples():
    ctx = build_phi_context(ONE)
    r = RatFunc.from_poly([2.0])
    for k in (1, 2, 3):
        assert kernel_dim_formula(ctx, r, 0.5, k, "forward") == 1


def test_truncation_unsound_near_circle():
    ctx = build_phi_context(ONE)
    r = RatFunc([1.0], [(1.05, 1)])
    with pytest.raises(TruncationUnsound):
        kernel_dim(ctx, r, 0.3, 1, "forward", 96)


def test_kernel_dim_boundary_rejected():
    ctx = build_phi_context(ONE)
    with pytest.raises(ValueError):
        kernel_dim(ctx, ONE, 1.0, 1, "forward", 64)


def _sample_points(ctx, r, rng, tol):
    one = RatFunc.one()
    pts = []
    for f in (one - ctx.gamma_plus(r), ctx.phi, one - ctx.gamma_minus(r)):
        if not f.is_zero():
            pts += [
                z.location for z in all_zeros(f, tol) if z.region == "interior"
            ]
    pts += [0.5 * np.exp(2j * np.pi * rng.uniform()) for _ in range(3)]
    kept = []
    for w in pts:
        if all(abs(w - v) > 1e-6 for v in kept):
            kept.append(complex(w))
    return kept


def test_kernel_dim_agrees_with_formula(rng, tol):
    for _ in range(4):
        ctx = build_phi_context(random_phi(rng))
        r = random_ratfunc(rng, n_poles=1)
        for w in _sample_points(ctx, r, rng, tol):
            for side in ("forward", "adjoint"):
                for k in (1, 2, 3):
                    nu = kernel_dim(ctx, r, w, k, side, 96)
                    frm = kernel_dim_formula(ctx, r, w, k, side)
                    assert nu == frm, (side, w, k, nu, frm)


def test_verdict_consistency(rng, tol):
    # YES pairs share every sampled kernel dimension; the canonical NO pair
    # differs at its witnessing point
    ctx = build_phi_context(random_phi(rng, "one_zero"))
    r = random_ratfunc(rng, n_poles=1)
    s = circle(ctx, r, random_invertible(ctx, rng))
    assert similar(ctx, r, s).verdict == "YES"
    for w in _sample_points(ctx, r, rng, tol):
        for side in ("forward", "adjoint"):
            for k in (1, 2):
                assert kernel_dim(ctx, r, w, k, side, 96) == kernel_dim(
                    ctx, s, w, k, side, 96
                )
    ctx2 = build_phi_context(Z)
    assert similar(ctx2, RatFunc.from_poly([-1.0]), ZERO).verdict == "NO"
    d_r = kernel_dim(ctx2, RatFunc.from_poly([-1.0]), 0.0, 1, "adjoint", 64)
    d_s = kernel_dim(ctx2, ZERO, 0.0, 1, "adjoint", 64)
    assert (d_r, d_s) == (1, 0)
