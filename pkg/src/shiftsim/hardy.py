"""Hardy-space operations on admissible rational functions.

Everything here works through the kernel-block decomposition of
:mod:`shiftsim.ratfun`: inner products against reproducing kernels, the
co-analytic Toeplitz action, the two boundary functionals ``Gamma_plus`` and
``Gamma_minus`` attached to a kernel symbol phi, vanishing orders, and zero
localization against the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cpoly
from .config import ToleranceConfig, resolve_tol
from .errors import PoleAt
from .ratfun import KBasis, RatFunc, from_kbasis, nonzero_or_raise, to_kbasis


def inner_product(f: RatFunc, g: RatFunc, tol: ToleranceConfig | None = None) -> complex:
    """Hardy-space inner product <f, g> of admissible rational functions.

    Expands g over kernel blocks and uses <f, k_w^(n)> = f^(n)(w); the result
    is linear in f and conjugate-linear in g.
    """
    tol = resolve_tol(tol)
    total = 0.0 + 0.0j
    for w, c in to_kbasis(g, tol).node_items():
        derivs = f.eval_derivs(w, c.size - 1)
        total += np.conj(c) @ derivs
    return complex(total)


def toeplitz_conj_apply(
    phi: RatFunc, r: RatFunc, tol: ToleranceConfig | None = None
) -> RatFunc:
    """Co-analytic Toeplitz action ``T_phibar r`` (analytic projection of phibar*r).

    Acts block-diagonally on the kernel decomposition: on the polynomial block
    it is the upper-triangular Toeplitz matrix of conj(Taylor(phi)); on the
    block at node w it is the Leibniz lowering action through the derivatives
    of phi at w.
    """
    tol = resolve_tol(tol)
    kb = to_kbasis(r, tol)
    out: dict[complex, np.ndarray] = {}
    for w, c in kb.node_items():
        if abs(w) <= tol.eps_zero:
            q = c * cpoly.factorials(c.size - 1)
            pt = phi.taylor_coeffs(q.size)
            corr = np.correlate(q, pt, "full")
            oq = corr[pt.size - 1 :][: q.size]
            out[w] = oq / cpoly.factorials(q.size - 1)
        else:
            M = c.size - 1
            pd = phi.eval_derivs(w, M)
            P = cpoly.pascal(M + 1)
            oc = np.zeros(M + 1, dtype=complex)
            for j in range(M + 1):
                oc[: M + 1 - j] += P[j:, j] * np.conj(pd[j]) * c[j:]
            out[w] = oc
    return from_kbasis(KBasis(out), tol)


def gamma_plus(phi: RatFunc, r: RatFunc, tol: ToleranceConfig | None = None) -> RatFunc:
    """The analytic symbol ``Gamma_plus(.; r) = z * (T_phibar r)`` as a function.

    Always vanishes at 0; linear in r.
    """
    return toeplitz_conj_apply(phi, r, tol).shift_up()


def gamma_minus_fn(phi: RatFunc, r: RatFunc, tol: ToleranceConfig | None = None) -> RatFunc:
    """The co-analytic functional ``Gamma_minus(w; r) = <phi/(w - z), r>``.

    Returned as the rational function of w that continues the |w| < 1 branch;
    conjugate-linear in r.  Computed per kernel block through the recurrence

        G_0(w; a) = (phi(w) - phi(a)) / (a - w),
        G_n(w; a) = (-phi^(n)(a) - n G_{n-1}(w; a)) / (a - w),

    where each division by (a - w) is an exact synthetic division (the
    numerator vanishes at w = a; the roundoff remainder is discarded), so no
    near-singular factors are ever materialized.
    """
    tol = resolve_tol(tol)
    kb = to_kbasis(r, tol)
    P, Q = phi.num, phi.den
    acc = np.zeros(1, dtype=complex)
    for a, c in kb.node_items():
        M = c.size - 1
        pd = phi.eval_derivs(a, max(M, 0))
        Qa = cpoly.peval(Q, a)
        N0 = cpoly.psub(cpoly.pscale(P, Qa), cpoly.pscale(Q, cpoly.peval(P, a)))
        q0, _rem = cpoly.synth_div(N0, a)
        g = cpoly.pscale(q0, -1.0 / Qa)
        acc = cpoly.padd(acc, cpoly.pscale(g, np.conj(c[0])))
        for n in range(1, M + 1):
            B = cpoly.psub(cpoly.pscale(Q, -pd[n]), cpoly.pscale(g, n))
            qn, _rem = cpoly.synth_div(B, a)
            g = cpoly.pscale(qn, -1.0)
            acc = cpoly.padd(acc, cpoly.pscale(g, np.conj(c[n])))
    return RatFunc(acc, phi.poles, tol)


@dataclass
class OrdReport:
    """Order of vanishing at a point with the inspected derivative values.

    ``ord == cap + 1`` is the sentinel for "all derivatives up to cap vanish".
    """

    ord: int
    derivative_values: np.ndarray
    scale: float


def ord_at(
    f: RatFunc, w, cap: int, tol: ToleranceConfig | None = None
) -> OrdReport:
    """Vanishing order of f at w, capped at ``cap``.

    The order is the index of the first derivative value whose modulus
    exceeds ``tau_ord * scale`` with ``scale = max |num coefficients|``;
    requires w to be at least ``delta_boundary`` away from every pole.
    """
    tol = resolve_tol(tol)
    w = complex(w)
    for p, _m in f.poles:
        if abs(w - p) <= tol.delta_boundary:
            raise PoleAt(w)
    if f.is_zero():
        return OrdReport(cap + 1, np.zeros(cap + 1, dtype=complex), 0.0)
    dv = f.eval_derivs(w, cap)
    scale = float(np.max(np.abs(f.num)))
    big = np.nonzero(np.abs(dv) > tol.tau_ord * scale)[0]
    return OrdReport(int(big[0]) if big.size else cap + 1, dv, scale)


def all_zeros(f: RatFunc, tol: ToleranceConfig | None = None) -> list[cpoly.ZeroDatum]:
    """Every zero of f (clustered, polished, region-classified)."""
    tol = resolve_tol(tol)
    nonzero_or_raise(f)
    return cpoly.roots(f.num, tol)


def zeros_in_closed_disc(
    f: RatFunc, tol: ToleranceConfig | None = None
) -> list[cpoly.ZeroDatum]:
    """Zeros of f in the closed unit disc (boundary-band zeros included,
    flagged by their region)."""
    return [zd for zd in all_zeros(f, tol) if zd.region != "exterior"]
