"""The twisted-multiplication algebra attached to a kernel symbol phi.

The product ``r x s = z r T_phibar(s) + z s T_phibar(r) - T_phibar(z r s)``
makes the admissible rational functions a commutative algebra; the circle
operation ``r o s = r + s - r x s`` is its "multiplicative" group law shifted
to 0.  This module builds the per-symbol context (local units e_a at the
interior zeros of phi with their sign calibration), the structure
decomposition (analytic symbol + nilpotent local coordinates), lifts, the
circle-equation solver, and the similarity verdict for two rank-one
perturbations of the backward shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cpoly
from .config import ToleranceConfig, resolve_tol
from .cpoly import ZeroDatum
from .errors import (
    BoundaryAmbiguous,
    NoCircleSolution,
    NotCircleInvertible,
    PhiZero,
    ShiftSimError,
    SingularBlock,
)
from .hardy import all_zeros, gamma_minus_fn, gamma_plus, ord_at, toeplitz_conj_apply
from .ratfun import (
    RatFunc,
    circle_grid,
    from_kbasis,
    KBasis,
    kernel_block,
    kernel_fn,
    conj_reflect,
    project_plus,
    sup_circle,
    to_kbasis,
)

# ---------------------------------------------------------------------------
# context construction
# ---------------------------------------------------------------------------


@dataclass
class LocalData:
    """Everything attached to one interior zero ``a`` of phi (order N)."""

    a: complex
    order: int
    u: RatFunc  # ((z - a) / (1 - conj(a) z))**N
    psi: RatFunc  # phi / u, nonvanishing at a
    alpha: RatFunc  # kernel-block solution of (alpha psi)^(j)(a) = sigma delta_j0
    beta: RatFunc  # (alpha psi - sigma) / u
    unit: RatFunc  # the local unit e_a of S_a
    sigma: int  # calibrated sign
    basis: list[RatFunc] = field(repr=False)  # [e_a, x, x^2, ..., x^(N-1)]
    basis_matrix: np.ndarray = field(repr=False)  # kernel coords, column per basis elt


@dataclass
class PhiContext:
    """A validated kernel symbol with its local algebra data."""

    phi: RatFunc
    tol: ToleranceConfig
    zeros: list[LocalData]

    def times(self, r: RatFunc, s: RatFunc) -> RatFunc:
        return _times(self.phi, r, s, self.tol)

    def circle(self, r: RatFunc, s: RatFunc) -> RatFunc:
        return _circle(self.phi, r, s, self.tol)

    def gamma_plus(self, r: RatFunc) -> RatFunc:
        return gamma_plus(self.phi, r, self.tol)

    def gamma_minus(self, r: RatFunc) -> RatFunc:
        return gamma_minus_fn(self.phi, r, self.tol)


def _times(phi: RatFunc, r: RatFunc, s: RatFunc, tol: ToleranceConfig) -> RatFunc:
    zr, zs = r.shift_up(), s.shift_up()
    Tr = toeplitz_conj_apply(phi, r, tol)
    Ts = toeplitz_conj_apply(phi, s, tol)
    return zr * Ts + zs * Tr - toeplitz_conj_apply(phi, zr * s, tol)


def _circle(phi: RatFunc, r: RatFunc, s: RatFunc, tol: ToleranceConfig) -> RatFunc:
    return r + s - _times(phi, r, s, tol)


def times(ctx: PhiContext, r: RatFunc, s: RatFunc) -> RatFunc:
    """Twisted product ``r x s`` in the algebra of ``ctx``."""
    return ctx.times(r, s)


def circle(ctx: PhiContext, r: RatFunc, s: RatFunc) -> RatFunc:
    """Circle operation ``r o s = r + s - r x s``."""
    return ctx.circle(r, s)


def _one_minus_abar_z_pow(a: complex, n: int) -> np.ndarray:
    """Coefficients of ``(1 - conj(a) z)**n``."""
    if abs(a) == 0.0:
        return np.ones(1, dtype=complex)
    return cpoly.pscale(
        cpoly.from_roots([1.0 / np.conj(a)] * n), (-np.conj(a)) ** n
    )


def _inner_factor_power(a: complex, n: int, tol: ToleranceConfig) -> RatFunc:
    """``((z - a)/(1 - conj(a) z))**n`` with structural poles."""
    if abs(a) <= tol.eps_zero:
        return RatFunc.monomial(n)
    p = 1.0 / np.conj(a)
    base_num = cpoly.pscale(np.array([-a, 1.0], dtype=complex), -p)  # (z-a)/(-abar)
    u = RatFunc.one()
    for _ in range(n):
        u = u * RatFunc(base_num, [(p, 1)], tol)
    return u


def _node_coords(f: RatFunc, a: complex, n: int, tol: ToleranceConfig) -> np.ndarray:
    """First n kernel coefficients of f at the node a (zeros if absent)."""
    out = np.zeros(n, dtype=complex)
    for w, c in to_kbasis(f, tol).terms.items():
        if abs(w - a) <= tol.delta_cluster * max(1.0, abs(a)):
            k = min(n, c.size)
            out[:k] = c[:k]
            break
    return out


def _unit_residual(phi: RatFunc, e: RatFunc, a: complex, order: int, tol) -> float:
    worst = 0.0
    grid = 0.6 * circle_grid(64)
    for m in range(order):
        km = kernel_fn(a, m)
        prod = _times(phi, e, km, tol)
        scale = float(np.max(np.abs(km(grid)))) + 1.0
        worst = max(worst, float(np.max(np.abs(prod(grid) - km(grid)))) / scale)
    return worst


def build_phi_context(phi: RatFunc, tol: ToleranceConfig | None = None) -> PhiContext:
    """Validate phi and assemble the local algebra at each interior zero.

    For a zero ``a`` of order ``N``: ``u = ((z-a)/(1-conj(a)z))**N``,
    ``psi = phi/u`` (nonvanishing at a), ``alpha`` is the kernel-block element
    with ``(alpha psi)^(j)(a) = sigma delta_j0`` for j < N, ``beta =
    (alpha psi - sigma)/u``, and the local unit is ``e_a = P_+(reflect(z
    alpha) u)``.  The sign sigma is calibrated so that ``e_a x k_a^(m) =
    k_a^(m)`` holds numerically; the calibration failing for both signs is an
    error.  Zeros of phi inside the boundary band are not given local data.
    """
    tol = resolve_tol(tol)
    phi.validate_in_ratd(tol)
    if phi.is_zero():
        raise PhiZero("the kernel symbol is identically zero")
    locs: list[LocalData] = []
    for zd in all_zeros(phi, tol):
        if zd.region != "interior":
            continue
        a, N = zd.location, zd.multiplicity
        u = _inner_factor_power(a, N, tol)
        one_m = _one_minus_abar_z_pow(a, N)
        psi = RatFunc(
            cpoly.deflate(cpoly.pmul(phi.num, one_m), a, N), phi.poles, tol
        )
        # alpha: solve the N x N Hermite interpolation system in the kernel basis
        basis_k = [kernel_fn(a, j) for j in range(N)]
        K = np.column_stack([b.eval_derivs(a, N - 1) for b in basis_k])
        psid = psi.eval_derivs(a, N - 1)
        A = np.zeros((N, N), dtype=complex)
        for d in range(N):
            for i in range(d + 1):
                A[d] += cpoly.binom(d, i) * psid[d - i] * K[i]
        rhs = np.zeros(N, dtype=complex)
        rhs[0] = 1.0
        x = np.linalg.solve(A, rhs)
        alpha = from_kbasis(KBasis({complex(a): x}), tol)
        num_b = cpoly.deflate(
            cpoly.pmul((alpha * psi - RatFunc.one()).num, one_m), a, N
        )
        beta = RatFunc(num_b, (alpha * psi).poles, tol)
        e = project_plus(conj_reflect(alpha.shift_up(), tol) * u, tol)

        res_plus = _unit_residual(phi, e, a, N, tol)
        if res_plus < 1e-6:
            sigma = +1
        else:
            res_minus = _unit_residual(phi, -e, a, N, tol)
            if res_minus < 1e-6:
                sigma = -1
                e, alpha, beta = -e, -alpha, -beta
            else:
                raise ShiftSimError(
                    f"unit calibration failed at zero {a}: residuals "
                    f"{res_plus:.2e} / {res_minus:.2e}"
                )

        basis = [e]
        if N >= 2:
            xgen = kernel_fn(a, N - 2)
            basis.append(xgen)
            for _ in range(2, N):
                basis.append(_times(phi, basis[-1], xgen, tol))
        M = np.column_stack([_node_coords(b, a, N, tol) for b in basis])
        locs.append(
            LocalData(
                a=complex(a),
                order=N,
                u=u,
                psi=psi,
                alpha=alpha,
                beta=beta,
                unit=e,
                sigma=sigma,
                basis=basis,
                basis_matrix=M,
            )
        )
    return PhiContext(phi=phi, tol=tol, zeros=locs)


# ---------------------------------------------------------------------------
# structure isomorphism
# ---------------------------------------------------------------------------


@dataclass
class LocalNilElement:
    """Coordinates in the basis ``(e_a, x, ..., x^(N-1))`` of one local algebra."""

    a: complex
    coeffs: np.ndarray


@dataclass
class StructureData:
    """Image of an element under the structure decomposition."""

    symbol: RatFunc  # gamma_plus component, a function vanishing at 0
    locals: list[LocalNilElement]


def to_structure(ctx: PhiContext, r: RatFunc) -> StructureData:
    """Decompose r into its analytic symbol and local nilpotent coordinates."""
    tol = ctx.tol
    locs = []
    for ld in ctx.zeros:
        proj = _times(ctx.phi, ld.unit, r, tol)
        v = _node_coords(proj, ld.a, ld.order, tol)
        locs.append(LocalNilElement(ld.a, np.linalg.solve(ld.basis_matrix, v)))
    return StructureData(symbol=gamma_plus(ctx.phi, r, tol), locals=locs)


def from_structure(ctx: PhiContext, sd: StructureData) -> RatFunc:
    """Reassemble the element with the given symbol and local coordinates."""
    tol = ctx.tol
    t = lift_symbol(ctx, sd.symbol)
    for ld in ctx.zeros:
        t = t - _times(ctx.phi, ld.unit, t, tol)
    for el in sd.locals:
        ld = _find_zero(ctx, el.a)
        for j, cj in enumerate(el.coeffs):
            if cj != 0:
                t = t + ld.basis[j].scale(cj)
    return t


def _find_zero(ctx: PhiContext, a: complex) -> LocalData:
    for ld in ctx.zeros:
        if abs(ld.a - a) <= ctx.tol.delta_cluster * max(1.0, abs(ld.a)):
            return ld
    raise KeyError(f"{a} is not a registered zero of the symbol")


def lift_symbol(ctx: PhiContext, q: RatFunc) -> RatFunc:
    """A preimage t0 of q under ``gamma_plus`` (block-triangular solves).

    Requires q(0) = 0.  At a node where phi does not vanish the block is
    upper triangular with diagonal ``conj(phi(w))``; at a registered zero of
    phi of order N the block indices shift by N (the lowest N coefficients of
    the preimage block are zero) and the diagonal carries ``phi^(N)(a)``.
    """
    tol = ctx.tol
    if q.is_zero():
        return RatFunc.zero()
    scale = float(np.max(np.abs(q.num)))
    if abs(q(0.0)) > 1e-8 * max(1.0, scale):
        raise ValueError("symbol must vanish at 0")
    hnum, _r0 = cpoly.synth_div(q.num, 0.0)
    h = RatFunc(hnum, q.poles, tol)
    out: dict[complex, np.ndarray] = {}
    for w, c in to_kbasis(h, tol).node_items():
        M = c.size - 1
        ld = next(
            (
                z
                for z in ctx.zeros
                if abs(z.a - w) <= tol.delta_cluster * max(1.0, abs(z.a))
            ),
            None,
        )
        if ld is None:
            pd = ctx.phi.eval_derivs(w, M)
            pscale_ = float(np.max(np.abs(pd))) + 1e-300
            if abs(pd[0]) <= 1e-8 * pscale_:
                raise SingularBlock(w, pd[0])
            A = np.zeros((M + 1, M + 1), dtype=complex)
            for i in range(M + 1):
                for n in range(i, M + 1):
                    A[i, n] = cpoly.binom(n, n - i) * np.conj(pd[n - i])
            d = np.linalg.solve(A, c)
            out[w] = d if w not in out else out[w] + d
        else:
            Na = ld.order
            pd = ctx.phi.eval_derivs(ld.a, Na + M)
            A = np.zeros((M + 1, M + 1), dtype=complex)
            for i in range(M + 1):
                for j in range(i, M + 1):
                    A[i, j] = cpoly.binom(Na + j, Na + j - i) * np.conj(
                        pd[Na + j - i]
                    )
            d = np.linalg.solve(A, c)
            block = np.zeros(Na + M + 1, dtype=complex)
            block[Na:] = d
            key = complex(ld.a)
            out[key] = block if key not in out else out[key] + block
    return from_kbasis(KBasis(out), tol)


# ---------------------------------------------------------------------------
# circle invertibility and the circle equation
# ---------------------------------------------------------------------------


@dataclass
class InvertibilityReport:
    invertible: bool
    ambiguous: bool
    reasons: list[str]
    interior_zeros: list[ZeroDatum]
    boundary_zeros: list[ZeroDatum]
    local_values: list[tuple[complex, complex]]  # (a, Gamma_minus(a; t))


def is_circle_invertible(
    ctx: PhiContext, t: RatFunc, tol: ToleranceConfig | None = None
) -> InvertibilityReport:
    """Decide invertibility of t for the circle operation.

    t is circle-invertible iff ``1 - gamma_plus(t)`` has no zero in the
    closed disc and ``Gamma_minus(a; t) != 1`` at every interior zero a of
    phi.  Zeros inside the boundary band make the verdict ambiguous.
    """
    tol = ctx.tol if tol is None else tol
    g = RatFunc.one() - gamma_plus(ctx.phi, t, tol)
    zs = [zd for zd in all_zeros(g, tol) if zd.region != "exterior"]
    interior = [zd for zd in zs if zd.region == "interior"]
    boundary = [zd for zd in zs if zd.region == "boundary"]
    reasons = [
        f"1 - gamma_plus(t) vanishes at {zd.location} (multiplicity {zd.multiplicity})"
        for zd in interior
    ]
    ambiguous = bool(boundary)
    reasons += [
        f"1 - gamma_plus(t) has a boundary-band zero at {zd.location}"
        for zd in boundary
    ]
    vals = []
    if ctx.zeros:
        gm = gamma_minus_fn(ctx.phi, t, tol)
        for ld in ctx.zeros:
            v = complex(gm(ld.a))
            vals.append((ld.a, v))
            if abs(v - 1.0) <= tol.tau_unit:
                reasons.append(
                    f"local factor at zero {ld.a} is not a unit "
                    f"(Gamma_minus = {v:.6g})"
                )
    invertible = not reasons
    return InvertibilityReport(invertible, ambiguous, reasons, interior, boundary, vals)


def _nil_valuation(v: np.ndarray, tol: ToleranceConfig) -> int:
    """x-adic valuation of local coordinates (N for the zero element)."""
    scale = max(1.0, float(np.max(np.abs(v))))
    big = np.nonzero(np.abs(v) > tol.tau_unit * scale)[0]
    return int(big[0]) if big.size else v.size


def _local_coords(ctx: PhiContext, ld: LocalData, r: RatFunc) -> np.ndarray:
    proj = _times(ctx.phi, ld.unit, r, ctx.tol)
    v = _node_coords(proj, ld.a, ld.order, ctx.tol)
    return np.linalg.solve(ld.basis_matrix, v)


def _series_solve(Ash: np.ndarray, Bsh: np.ndarray, n: int) -> np.ndarray:
    """w with ``Ash * w = Bsh`` as truncated power series of length n."""
    import scipy.signal

    x = np.zeros(n, dtype=complex)
    x[0] = 1.0
    return scipy.signal.lfilter(Bsh.astype(complex), Ash.astype(complex), x)


@dataclass
class LocalConditionRow:
    a: complex
    order: int  # N_a
    ord_r: int  # ord_a(1 - Gamma_minus(.; r)), sentinel order+1 for >= cap
    ord_s: int
    d_r: int  # min(N_a, ord_r)
    d_s: int


@dataclass
class _Analysis:
    gr: RatFunc
    gs: RatFunc
    zr_all: list[ZeroDatum]
    zs_all: list[ZeroDatum]
    pairs: list[tuple[complex, complex]]
    cond_a: str  # 'pass' | 'fail' | 'ambiguous'
    cond_b_rows: list[LocalConditionRow]
    cond_b_ok: bool
    reasons: list[str]


def _match_multisets(za: list[ZeroDatum], zb: list[ZeroDatum], tol: ToleranceConfig):
    A = [zd.location for zd in za for _ in range(zd.multiplicity)]
    B = [zd.location for zd in zb for _ in range(zd.multiplicity)]
    if len(A) != len(B):
        return None
    used = [False] * len(B)
    pairs = []
    for x in A:
        best, bd = None, np.inf
        for j, y in enumerate(B):
            if not used[j] and abs(x - y) < bd:
                best, bd = j, abs(x - y)
        if best is None or bd > tol.delta_match:
            return None
        used[best] = True
        pairs.append((x, B[best]))
    return pairs


def _analyze(ctx: PhiContext, r: RatFunc, s: RatFunc) -> _Analysis:
    tol = ctx.tol
    r.validate_in_ratd(tol)
    s.validate_in_ratd(tol)
    gr = RatFunc.one() - gamma_plus(ctx.phi, r, tol)
    gs = RatFunc.one() - gamma_plus(ctx.phi, s, tol)
    zr_all = all_zeros(gr, tol)
    zs_all = all_zeros(gs, tol)
    reasons: list[str] = []

    def in_disc(zl):
        return [zd for zd in zl if zd.region != "exterior"]

    def interior(zl):
        return [zd for zd in zl if zd.region == "interior"]

    zr_d, zs_d = in_disc(zr_all), in_disc(zs_all)
    boundary_present = any(zd.region == "boundary" for zd in zr_d + zs_d)
    pairs_all = _match_multisets(zr_d, zs_d, tol)
    if pairs_all is not None and not boundary_present:
        cond_a, pairs = "pass", pairs_all
    elif _match_multisets(interior(zr_all), interior(zs_all), tol) is not None:
        # interior parts agree; the verdict hangs on boundary-band zeros
        cond_a = "ambiguous" if boundary_present else "pass"
        pairs = pairs_all or _match_multisets(interior(zr_all), interior(zs_all), tol)
        if cond_a == "ambiguous":
            reasons.append(
                "zero matching of 1 - gamma_plus depends on boundary-band zeros: "
                f"r-side {[zd.location for zd in zr_d if zd.region == 'boundary']}, "
                f"s-side {[zd.location for zd in zs_d if zd.region == 'boundary']}"
            )
    else:
        cond_a, pairs = "fail", []
        reasons.append(
            "interior zero multisets of 1 - gamma_plus differ: "
            f"r-side {[(zd.location, zd.multiplicity) for zd in interior(zr_all)]} vs "
            f"s-side {[(zd.location, zd.multiplicity) for zd in interior(zs_all)]}"
        )

    rows: list[LocalConditionRow] = []
    cond_b_ok = True
    if ctx.zeros:
        one = RatFunc.one()
        gmr = one - gamma_minus_fn(ctx.phi, r, tol)
        gms = one - gamma_minus_fn(ctx.phi, s, tol)
        for ld in ctx.zeros:
            o_r = ord_at(gmr, ld.a, ld.order, tol).ord
            o_s = ord_at(gms, ld.a, ld.order, tol).ord
            d_r, d_s = min(ld.order, o_r), min(ld.order, o_s)
            rows.append(LocalConditionRow(ld.a, ld.order, o_r, o_s, d_r, d_s))
            if d_r != d_s:
                cond_b_ok = False
                reasons.append(
                    f"local depth mismatch at zero {ld.a}: "
                    f"min(N, ord) = {d_r} for r vs {d_s} for s"
                )
    return _Analysis(gr, gs, zr_all, zs_all, pairs or [], cond_a, rows, cond_b_ok, reasons)


def _construct_witness(ctx: PhiContext, r: RatFunc, s: RatFunc, an: _Analysis) -> RatFunc:
    """Build t with r o t = s assuming both similarity conditions hold."""
    tol = ctx.tol
    num_r, num_s = an.gr.num, an.gs.num
    for zd in an.zr_all:
        if zd.region == "interior":
            num_r = cpoly.deflate(num_r, zd.location, zd.multiplicity)
    for zd in an.zs_all:
        if zd.region == "interior":
            num_s = cpoly.deflate(num_s, zd.location, zd.multiplicity)
    # h = (reduced gs) / (reduced gr); poles are gs-poles plus exterior gr-zeros
    h_poles = list(an.gs.poles) + [
        (zd.location, zd.multiplicity) for zd in an.zr_all if zd.region == "exterior"
    ]
    h = RatFunc(
        cpoly.pscale(cpoly.pmul(num_s, an.gr.den), 1.0 / num_r[-1]), h_poles, tol
    )
    h = h.scale(1.0 / h(0.0))
    q = RatFunc.one() - h

    locs = []
    for ld in ctx.zeros:
        N = ld.order
        ecoords = np.zeros(N, dtype=complex)
        ecoords[0] = 1.0
        A = ecoords - _local_coords(ctx, ld, r)
        B = ecoords - _local_coords(ctx, ld, s)
        d = min(_nil_valuation(A, tol), _nil_valuation(B, tol))
        if d >= N:
            w = ecoords.copy()
        else:
            w = np.zeros(N, dtype=complex)
            w[: N - d] = _series_solve(A[d:], B[d:], N - d)
        locs.append(LocalNilElement(ld.a, ecoords - w))
    return from_structure(ctx, StructureData(symbol=q, locals=locs))


def solve_circle(ctx: PhiContext, r: RatFunc, s: RatFunc) -> RatFunc:
    """Solve ``r o t = s`` for t, raising when no solution exists.

    Raises :class:`NoCircleSolution` when the similarity conditions fail and
    :class:`BoundaryAmbiguous` when boundary-band zeros prevent a verdict.
    """
    an = _analyze(ctx, r, s)
    if an.cond_a == "ambiguous":
        raise BoundaryAmbiguous(an.reasons)
    if an.cond_a == "fail" or not an.cond_b_ok:
        raise NoCircleSolution(an.reasons)
    return _construct_witness(ctx, r, s, an)


def circle_inverse(ctx: PhiContext, t: RatFunc) -> RatFunc:
    """The circle inverse t' with ``t o t' = 0``.

    Exists iff t is circle-invertible; raises :class:`NotCircleInvertible`
    (or :class:`BoundaryAmbiguous` inside the boundary band) otherwise.
    """
    rep = is_circle_invertible(ctx, t)
    if rep.ambiguous:
        raise BoundaryAmbiguous(rep.reasons)
    if not rep.invertible:
        raise NotCircleInvertible(rep.reasons)
    an = _analyze(ctx, t, RatFunc.zero())
    if an.cond_a == "ambiguous":
        raise BoundaryAmbiguous(an.reasons)
    if an.cond_a == "fail" or not an.cond_b_ok:
        raise NotCircleInvertible(an.reasons)
    return _construct_witness(ctx, t, RatFunc.zero(), an)


# ---------------------------------------------------------------------------
# the similarity verdict
# ---------------------------------------------------------------------------


@dataclass
class SimilarityReport:
    """Outcome of the similarity decision for U + r (x) phi vs U + s (x) phi."""

    verdict: str  # 'YES' | 'NO' | 'BOUNDARY_AMBIGUOUS'
    witness: RatFunc | None
    residual: float | None
    zeros_r: list[ZeroDatum]
    zeros_s: list[ZeroDatum]
    pairs: list[tuple[complex, complex]]
    local_rows: list[LocalConditionRow]
    reasons: list[str]
    tol: ToleranceConfig


def similar(ctx: PhiContext, r: RatFunc, s: RatFunc) -> SimilarityReport:
    """Decide similarity of the two perturbed shifts and build a witness.

    YES requires (a) the zero multisets of ``1 - gamma_plus`` of r and s in
    the closed disc to match within ``delta_match`` and (b) equal truncated
    vanishing depths ``min(N_a, ord_a(1 - Gamma_minus))`` at every interior
    zero a of phi.  On YES the witness t solves ``r o t = s`` and the
    relative circle-residual of that identity is reported.
    """
    an = _analyze(ctx, r, s)
    in_disc_r = [zd for zd in an.zr_all if zd.region != "exterior"]
    in_disc_s = [zd for zd in an.zs_all if zd.region != "exterior"]
    base = dict(
        zeros_r=in_disc_r,
        zeros_s=in_disc_s,
        pairs=an.pairs,
        local_rows=an.cond_b_rows,
        reasons=an.reasons,
        tol=ctx.tol,
    )
    if an.cond_a == "fail" or not an.cond_b_ok:
        return SimilarityReport("NO", None, None, **base)
    if an.cond_a == "ambiguous":
        return SimilarityReport("BOUNDARY_AMBIGUOUS", None, None, **base)
    t = _construct_witness(ctx, r, s, an)
    rt = _circle(ctx.phi, r, t, ctx.tol)
    res = sup_circle(rt - s) / (sup_circle(s) + 1.0)
    return SimilarityReport("YES", t, float(res), **base)
