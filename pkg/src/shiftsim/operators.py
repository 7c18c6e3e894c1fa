"""Finite truncations of the perturbed shift and its multiplication operators.

The rank-one perturbation U_r = U + r (x) phi and the twisted-multiplication
operator K_r f = r x f act on Hardy-space Taylor coefficients.  This module
builds their matrix sections in the monomial basis, measures the intertwining
identity, walks Jordan chains in exact rational arithmetic, and counts kernel
dimensions of (1 - w U_r)^k and (U_r* - w)^k both by SVD on truncations and by
the closed vanishing-order formulas.  The two routes are independent, which is
what makes the SVD side usable as an oracle for the similarity verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import cpoly
from .config import ToleranceConfig, resolve_tol
from .errors import ChainBreaks, IndeterminateKernel, TruncationUnsound
from .hardy import inner_product, ord_at, toeplitz_conj_apply
from .ratfun import RatFunc
from .staralg import PhiContext, times


# -- matrix sections -----------------------------------------------------------


@dataclass(frozen=True)
class TruncatedOperator:
    """An n x n matrix section together with its trusted degree window."""

    matrix: np.ndarray
    n: int
    window: int


# Degrees above ``n - _TOEPLITZ_MARGIN`` of the assembled Toeplitz sum are not
# trusted: the Fourier coefficients of the mixed symbol are computed from
# Taylor sections and the documented margin absorbs their geometric tails.
_TOEPLITZ_MARGIN = 8


def truncate_U_r(ctx: PhiContext, r: RatFunc, n: int) -> TruncatedOperator:
    """Section of U_r = U + r (x) phi: superdiagonal ones plus an outer product."""
    if n < 4:
        raise ValueError("truncation dimension must be at least 4")
    mat = np.eye(n, k=1, dtype=complex)
    mat += np.outer(r.taylor_coeffs(n), np.conj(ctx.phi.taylor_coeffs(n)))
    return TruncatedOperator(mat, n, n)


def _times_monomial_columns(ctx: PhiContext, r: RatFunc, n: int) -> list[RatFunc]:
    """The products r x z^m for m < n, stably.

    Expanding z^m r over kernel blocks splits it into two parts of size
    |pole|^m that cancel, so the generic product routine loses digits once m
    is large.  Commuting the shift out instead,

        T_phibar(z g) = z T_phibar(g) + <z g, phi>,

    keeps every intermediate at the scale of the functions themselves.
    """
    phi = ctx.phi
    t_phi = np.conj(phi.taylor_coeffs(n + 1))
    t_r = toeplitz_conj_apply(phi, r, ctx.tol)
    zr = r.shift_up()
    columns = []
    h = t_r  # T_phibar(z^m r), starting at m = 0
    for m in range(n):
        t_zm = t_phi[: m + 1][::-1]  # T_phibar(z^m), a polynomial
        zm1_r = r.mul_poly(np.eye(1, m + 2, m + 1, dtype=complex)[0])
        h = h.shift_up() + RatFunc.from_poly([inner_product(zm1_r, phi, ctx.tol)])
        term = zr.mul_poly(t_zm) + t_r.mul_poly(np.eye(1, m + 2, m + 1, dtype=complex)[0])
        columns.append(term - h)
    return columns


def K_matrix_via_times(ctx: PhiContext, r: RatFunc, n: int) -> TruncatedOperator:
    """Section of K_r from its definition: column m = coefficients of r x z^m.

    Every column is computed in rational arithmetic and expanded afterwards,
    so the whole section is exact up to rounding.
    """
    if n < 4:
        raise ValueError("truncation dimension must be at least 4")
    cols = _times_monomial_columns(ctx, r, n)
    mat = np.empty((n, n), dtype=complex)
    for m in range(n):
        mat[:, m] = cols[m].taylor_coeffs(n)
    return TruncatedOperator(mat, n, n)


def _toeplitz_full(symbol_coeffs: np.ndarray, n: int) -> np.ndarray:
    """Toeplitz section T[i, j] = c[i - j] from coefficients c[-(n-1) .. n-1]."""
    col = symbol_coeffs[n - 1 :]
    row = symbol_coeffs[n - 1 :: -1]
    return scipy.linalg.toeplitz(col, row)


def K_matrix_via_toeplitz(ctx: PhiContext, r: RatFunc, n: int) -> TruncatedOperator:
    """Section of K_r assembled as T_{zr} T_{phibar} + T_{z T_phibar r} - T_{zr phibar}.

    The analytic symbols give triangular Toeplitz sections; the mixed symbol's
    Fourier coefficients come from correlating Taylor sections with a margin,
    so the trusted window is ``n - 8``.
    """
    if n < 4:
        raise ValueError("truncation dimension must be at least 4")
    margin = 2 * n + 64
    zr = r.shift_up()
    a = zr.taylor_coeffs(margin)
    p = ctx.phi.taylor_coeffs(margin)

    lower_zr = scipy.linalg.toeplitz(a[:n], np.zeros(n, dtype=complex))
    first_row = np.conj(p[:n])
    upper_phibar = scipy.linalg.toeplitz(
        np.concatenate([first_row[:1], np.zeros(n - 1, dtype=complex)]), first_row
    )
    lower_gamma = scipy.linalg.toeplitz(
        ctx.gamma_plus(r).taylor_coeffs(n), np.zeros(n, dtype=complex)
    )
    # c[k] = sum_j conj(p[j]) a[j + k]; numpy's correlate conjugates its
    # second argument, so the full correlation lists exactly these values.
    corr = np.correlate(a, p, "full")
    center = p.size - 1
    window_coeffs = corr[center - (n - 1) : center + n]
    full_mixed = _toeplitz_full(window_coeffs, n)

    mat = lower_zr @ upper_phibar + lower_gamma - full_mixed
    return TruncatedOperator(mat, n, n - _TOEPLITZ_MARGIN)


def intertwine_residual(ctx: PhiContext, r: RatFunc, s: RatFunc, n: int, window: int) -> float:
    """Residual of (I - K_r)(U + s (x) phi) = (U + (r o s) (x) phi)(I - K_r).

    Both sides are applied to monomials z^m, m < window, in rational
    arithmetic; the residual is the largest Euclidean norm of the first n
    Taylor coefficients of the difference.  The identity is unconditional, so
    anything above rounding noise indicates a defect.
    """
    if window > n:
        raise ValueError("window must not exceed the truncation dimension")
    rs = ctx.circle(r, s)
    # (I - K_r) s, kept as one group: its scale is set by the pairing
    # coefficient below and must not be mixed into the O(1) monomial part.
    s_reduced = s - times(ctx, r, s)
    cols = _times_monomial_columns(ctx, r, window)  # r x z^m
    phi_hat = ctx.phi.taylor_coeffs(window)
    worst = 0.0
    for m in range(window):
        # left side: (I - K_r)(U + s (x) phi) z^m
        u_zm = RatFunc.monomial(m - 1) - cols[m - 1] if m >= 1 else RatFunc.zero()
        pair = complex(np.conj(phi_hat[m]))
        lhs = u_zm + s_reduced.scale(pair)
        # right side: (U + (r o s) (x) phi)(I - K_r) z^m
        g = RatFunc.monomial(m) - cols[m]
        ug = _coanalytic_step(g, 0j)  # the backward shift (g - g(0)) / z
        rhs = ug + rs.scale(inner_product(g, ctx.phi, ctx.tol))
        diff = (lhs - rhs).taylor_coeffs(n)
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst


# -- Jordan chains in exact rational arithmetic ---------------------------------


def _resolvent_step(g: RatFunc, w: complex) -> RatFunc:
    """(1 - wU)^{-1} g = (z g(z) - w g(w)) / (z - w), an exact division."""
    gw = complex(g(np.array([w]))[0])
    num = cpoly.psub(cpoly.pmul(g.num, np.array([0.0, 1.0], dtype=complex)),
                     cpoly.pscale(g.den, w * gw))
    quot, _rem = cpoly.synth_div(num, w)
    return RatFunc(quot, g.poles)


def _coanalytic_step(g: RatFunc, w: complex) -> RatFunc:
    """T_{1/(z-w)} g = (g(z) - g(w)) / (z - w), an exact division."""
    gw = complex(g(np.array([w]))[0])
    num = cpoly.psub(g.num, cpoly.pscale(g.den, gw))
    quot, _rem = cpoly.synth_div(num, w)
    return RatFunc(quot, g.poles)


def jordan_chain(
    ctx: PhiContext,
    r: RatFunc,
    w,
    k: int,
    side: str = "forward",
    tol: ToleranceConfig | None = None,
) -> list[RatFunc]:
    """The chain B f, B^2 f, ..., B^k f for the rank-one perturbed kernels.

    Forward side: f = r and B is the shift resolvent, valid on the closed
    disc because every step is an exact polynomial division.  Adjoint side:
    f = phi and B divides by (z - w).  Each prefix is validated by the
    left-inverse and orthogonality conditions that characterize Jordan
    chains of A + f (x) g; the first failing step raises ChainBreaks with
    the chain attached, since a break is a finding, not a fault.
    """
    tol = resolve_tol(tol)
    w = complex(w)
    if side not in ("forward", "adjoint"):
        raise ValueError("side must be 'forward' or 'adjoint'")
    if side == "forward" and abs(w) > 1.0 + tol.delta_boundary:
        raise ValueError("forward chains require |w| <= 1")
    if side == "adjoint" and abs(w) >= 1.0 - tol.delta_boundary:
        raise ValueError("adjoint chains require |w| < 1")
    if k == 0:
        return []

    chain: list[RatFunc] = []
    g = r if side == "forward" else ctx.phi
    for _i in range(k):
        g = _resolvent_step(g, w) if side == "forward" else _coanalytic_step(g, w)
        chain.append(g)

    scale = max(1.0, max(float(np.max(np.abs(v.num))) for v in chain))
    for i in range(1, k + 1):
        vec = chain[i - 1]
        if side == "forward":
            # With 1 - w U_r = (1 - wU) + (-r) (x) (conj(w) phi), the
            # left-inverse condition holds identically and the pairing
            # condition reads w <B^i r, phi> = (1 if i == 1 else 0).
            pair = w * inner_product(vec, ctx.phi, tol)
            target = 1.0 if i == 1 else 0.0
        else:
            # With U_r* - w = (U* - w) + phi (x) r, the left-inverse
            # condition needs (B^{i-1} phi)(w) = 0 and the pairing reads
            # <B^i phi, r> = (-1 if i == 1 else 0).
            prev = ctx.phi if i == 1 else chain[i - 2]
            pw = abs(complex(prev(np.array([w]))[0]))
            if pw > tol.tau_ord * scale:
                raise ChainBreaks(i, pw, chain[: i - 1])
            pair = inner_product(vec, r, tol)
            target = -1.0 if i == 1 else 0.0
        residual = abs(pair - target)
        if residual > tol.tau_ord * scale:
            raise ChainBreaks(i, residual, chain[: i - 1])
    return chain


# -- kernel dimensions: SVD route and formula route -----------------------------


def _tail_estimate(poles, n: int) -> float:
    moduli = [abs(p) for p, _m in poles]
    if not moduli:
        return 0.0
    return n * min(moduli) ** (-n)


def kernel_dim(
    ctx: PhiContext,
    r: RatFunc,
    w,
    k: int,
    side: str = "forward",
    n: int = 96,
    tol: ToleranceConfig | None = None,
) -> int:
    """dim ker (1 - w U_r)^k or dim ker (U_r* - w)^k from an n x n truncation.

    Counts singular values below sigma_svd, guarded two ways: the Taylor
    tails of the rational kernel vectors must sit below sigma_svd / 10
    (TruncationUnsound otherwise), and the singular spectrum must show a
    clean gap around the threshold (IndeterminateKernel otherwise).
    """
    tol = resolve_tol(tol)
    w = complex(w)
    if side not in ("forward", "adjoint"):
        raise ValueError("side must be 'forward' or 'adjoint'")
    if abs(w) >= 1.0 - tol.delta_boundary:
        raise ValueError("the truncation route requires |w| < 1; "
                         "use exact chains on the boundary")
    estimate = _tail_estimate(list(r.poles) + list(ctx.phi.poles), n)
    if estimate > tol.sigma_svd / 10.0:
        raise TruncationUnsound(estimate, tol.sigma_svd / 10.0)

    if side == "forward":
        # U_r lowers the degree, so the square section acts faithfully.
        u_r = truncate_U_r(ctx, r, n).matrix
        base = np.eye(n, dtype=complex) - w * u_r
        power = np.linalg.matrix_power(base, k)
    else:
        # U_r* raises the degree by one per factor; keep k extra rows so the
        # section stays faithful on the n-dimensional domain, then restrict.
        big = n + k
        u_r = truncate_U_r(ctx, r, big).matrix
        base = np.conj(u_r).T - w * np.eye(big, dtype=complex)
        power = np.linalg.matrix_power(base, k)[:, :n]
    svals = np.linalg.svd(power, compute_uv=False)
    nu = int(np.sum(svals < tol.sigma_svd))
    if nu < n and svals[n - 1 - nu] <= 10.0 * tol.sigma_svd:
        raise IndeterminateKernel(svals[max(0, n - 2 - nu) :].tolist(), tol.sigma_svd)
    return nu


def kernel_dim_formula(
    ctx: PhiContext,
    r: RatFunc,
    w,
    k: int,
    side: str = "forward",
    tol: ToleranceConfig | None = None,
) -> int:
    """Closed-form kernel dimensions from vanishing orders.

    Forward: min(k, ord_w(1 - Gamma_plus(.; r))) on the closed disc.
    Adjoint: min(k, ord_w(phi), ord_w(1 - Gamma_minus(.; r))) on the open disc.
    """
    tol = resolve_tol(tol)
    w = complex(w)
    one = RatFunc.one()
    if side == "forward":
        rep = ord_at(one - ctx.gamma_plus(r), w, k, tol)
        return min(k, rep.ord)
    if side == "adjoint":
        rep_phi = ord_at(ctx.phi, w, k, tol)
        rep_gm = ord_at(one - ctx.gamma_minus(r), w, k, tol)
        return min(k, rep_phi.ord, rep_gm.ord)
    raise ValueError("side must be 'forward' or 'adjoint'")
