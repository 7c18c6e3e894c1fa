"""Rational functions over C with structural pole bookkeeping.

A :class:`RatFunc` is ``num / prod (z - p)**m`` with a trimmed numerator and an
explicit pole multiset; the denominator is always the monic product of its
pole factors.  Arithmetic carries the pole multiset along (union-max for
addition, sum for multiplication, exact synthetic division wherever a
cancellation is engineered) instead of re-rooting denominators, so multiple
poles never suffer the ``eps**(1/m)`` companion-matrix scatter.  Residual
common factors are detected by the numerator's Taylor coefficients at a pole
vanishing relative to :data:`CANCEL_REL`.

The module also provides the Hardy-space plumbing that only needs one
function at a time: Taylor expansions (via :func:`scipy.signal.lfilter`),
partial fractions, the analytic projection, and the reproducing-kernel-basis
decomposition with nodes at reflected poles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.signal

from . import cpoly
from .config import ToleranceConfig, resolve_tol
from .errors import IdenticallyZero, PoleAt, PoleInDisc, PoleOnCircle

#: Relative size under which leading Taylor coefficients of a numerator at a
#: pole are treated as an exact cancellation (the root-matching tolerance
#: restated as a coefficient test).
CANCEL_REL = 1e-12

PoleList = tuple[tuple[complex, int], ...]


def _sorted_poles(poles) -> PoleList:
    items = [(complex(p), int(m)) for p, m in poles if m > 0]
    items.sort(key=lambda pm: (pm[0].real, pm[0].imag))
    return tuple(items)


def _expand(poles: PoleList):
    out = []
    for p, m in poles:
        out.extend([p] * m)
    return out


class RatFunc:
    """Rational function ``num / prod (z - p)**m`` (denominator monic)."""

    __slots__ = ("num", "poles", "_den", "_ratd_checked")

    def __init__(self, num, poles=(), tol: ToleranceConfig | None = None):
        tol = resolve_tol(tol)
        num = cpoly.trim(num, tol.eps_zero)
        poles = _sorted_poles(poles)
        num, poles = _cancel(num, poles, tol)
        self.num = num
        self.poles = poles
        self._den = None
        self._ratd_checked = False

    # -- construction -----------------------------------------------------

    @classmethod
    def from_num_den(cls, num, den, tol: ToleranceConfig | None = None) -> "RatFunc":
        """Build from raw numerator/denominator coefficient arrays."""
        tol = resolve_tol(tol)
        den = cpoly.trim(den, tol.eps_zero)
        if cpoly.is_zero_poly(den):
            raise ValueError("denominator is identically zero")
        lc = den[-1]
        pole_data = cpoly.roots(den, tol)
        return cls(
            cpoly.pscale(num, 1.0 / lc),
            [(zd.location, zd.multiplicity) for zd in pole_data],
            tol,
        )

    @classmethod
    def from_poly(cls, coeffs) -> "RatFunc":
        return cls(coeffs, ())

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls([0.0], ())

    @classmethod
    def one(cls) -> "RatFunc":
        return cls([1.0], ())

    @classmethod
    def monomial(cls, m: int) -> "RatFunc":
        c = np.zeros(m + 1, dtype=complex)
        c[m] = 1.0
        return cls(c, ())

    # -- basic structure ---------------------------------------------------

    @property
    def den(self) -> np.ndarray:
        if self._den is None:
            self._den = cpoly.from_roots(_expand(self.poles))
        return self._den

    def is_zero(self) -> bool:
        return cpoly.is_zero_poly(self.num)

    def is_polynomial(self) -> bool:
        return not self.poles

    def __call__(self, z):
        return cpoly.peval(self.num, z) / cpoly.peval(self.den, z)

    def __repr__(self):
        return f"RatFunc(num={np.round(self.num, 6)}, poles={self.poles})"

    # -- ring operations ---------------------------------------------------

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.poles)

    def scale(self, s) -> "RatFunc":
        return RatFunc(self.num * complex(s), self.poles)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        union = _merge_union(self.poles, other.poles)
        na = cpoly.pmul(self.num, _cofactor(union, self.poles))
        nb = cpoly.pmul(other.num, _cofactor(union, other.poles))
        return RatFunc(cpoly.padd(na, nb), union)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        merged = _merge_sum(self.poles, other.poles)
        return RatFunc(cpoly.pmul(self.num, other.num), merged)

    def mul_poly(self, coeffs) -> "RatFunc":
        if self.is_zero():
            return self
        return RatFunc(cpoly.pmul(self.num, coeffs), self.poles)

    def shift_up(self) -> "RatFunc":
        """Multiply by z."""
        return self.mul_poly([0.0, 1.0])

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "RatFunc":
        """d/dz, with the structural (z-p)^(m-1) cancellation built in."""
        if not self.poles:
            return RatFunc(cpoly.pder(self.num), ())
        distinct = [p for p, _m in self.poles]
        D = cpoly.from_roots(distinct)
        acc = cpoly.pmul(cpoly.pder(self.num), D)
        for p, m in self.poles:
            term = cpoly.pmul(self.num, cpoly.deflate(D, p, 1))
            acc = cpoly.psub(acc, cpoly.pscale(term, m))
        return RatFunc(acc, [(p, m + 1) for p, m in self.poles])

    def taylor_at(self, w, n: int) -> np.ndarray:
        """First ``n`` Taylor coefficients about ``w`` (requires den(w) != 0)."""
        w = complex(w)
        b = cpoly.taylor_shift(self.num, w) if w != 0 else self.num
        a = cpoly.taylor_shift(self.den, w) if w != 0 else self.den
        if abs(a[0]) <= 1e-13 * max(1.0, float(np.max(np.abs(a)))):
            raise PoleAt(w)
        x = np.zeros(n, dtype=complex)
        x[0] = 1.0
        return scipy.signal.lfilter(b.astype(complex), a.astype(complex), x)

    def taylor_coeffs(self, n: int) -> np.ndarray:
        """First ``n`` Maclaurin coefficients."""
        return self.taylor_at(0.0, n)

    def eval_derivs(self, w, k: int) -> np.ndarray:
        """Array ``[f(w), f'(w), ..., f^(k)(w)]``."""
        return self.taylor_at(w, k + 1) * cpoly.factorials(k)

    # -- membership --------------------------------------------------------

    def validate_in_ratd(self, tol: ToleranceConfig | None = None) -> "RatFunc":
        """Check all poles have modulus >= 1 + tau_pole; returns self."""
        if self._ratd_checked:
            return self
        tol = resolve_tol(tol)
        bad = [p for p, _m in self.poles if abs(p) < 1.0 + tol.tau_pole]
        if bad:
            raise PoleInDisc(bad)
        self._ratd_checked = True
        return self

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        enc = lambda c: [[float(v.real), float(v.imag)] for v in np.atleast_1d(c)]
        return {"num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json_obj(cls, obj, tol: ToleranceConfig | None = None) -> "RatFunc":
        def dec(entries):
            return np.array([complex(re, im) for re, im in entries], dtype=complex)

        if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
            raise ValueError("rational function JSON must have 'num' and 'den'")
        return cls.from_num_den(dec(obj["num"]), dec(obj["den"]), tol)


# -- pole multiset plumbing --------------------------------------------------


def _locate(poles: PoleList, p: complex, tol: ToleranceConfig):
    for i, (q, _m) in enumerate(poles):
        if abs(q - p) <= tol.delta_cluster * max(1.0, abs(q)):
            return i
    return None


def _merge_union(pa: PoleList, pb: PoleList, tol: ToleranceConfig | None = None):
    tol = resolve_tol(tol)
    out = [[p, m] for p, m in pa]
    for p, m in pb:
        i = _locate(tuple((q, mm) for q, mm in out), p, tol)
        if i is None:
            out.append([p, m])
        else:
            out[i][1] = max(out[i][1], m)
    return tuple((p, m) for p, m in out)


def _merge_sum(pa: PoleList, pb: PoleList, tol: ToleranceConfig | None = None):
    tol = resolve_tol(tol)
    out = [[p, m] for p, m in pa]
    for p, m in pb:
        i = _locate(tuple((q, mm) for q, mm in out), p, tol)
        if i is None:
            out.append([p, m])
        else:
            out[i][1] += m
    return tuple((p, m) for p, m in out)


def _cofactor(target: PoleList, have: PoleList, tol: ToleranceConfig | None = None):
    """Monic polynomial ``prod (z-p)**(m_target - m_have)``."""
    tol = resolve_tol(tol)
    extra = []
    for p, m in target:
        i = _locate(have, p, tol)
        deficit = m - (have[i][1] if i is not None else 0)
        extra.extend([p] * deficit)
    return cpoly.from_roots(extra)


def _cancel(num, poles: PoleList, tol: ToleranceConfig):
    """Remove pole factors the numerator (numerically) vanishes against."""
    if cpoly.is_zero_poly(num):
        return np.zeros(1, dtype=complex), ()
    out = []
    for p, m in poles:
        t = cpoly.taylor_shift(num, p)
        # Per-index conditioning majorant: |t[j]| <= u[j] always, and u[j]
        # bounds the roundoff of computing t[j], so t[j]/u[j] is a genuine
        # relative-cancellation measure.  A single max-|t| scale would be
        # inflated by binomial growth at high degree and misfire.
        u = cpoly.taylor_shift(np.abs(num).astype(complex), abs(p)).real
        j = 0
        while j < m and j < t.size and abs(t[j]) <= CANCEL_REL * u[j]:
            j += 1
        if j:
            num = cpoly.deflate(num, p, j)
            if cpoly.is_zero_poly(cpoly.trim(num, tol.eps_zero)):
                return np.zeros(1, dtype=complex), ()
        if m - j > 0:
            out.append((p, m - j))
    return cpoly.trim(num, tol.eps_zero), _sorted_poles(out)


# -- division ----------------------------------------------------------------


def reciprocal(f: RatFunc, num_zeros=None, tol: ToleranceConfig | None = None) -> RatFunc:
    """1/f.  ``num_zeros`` may supply the (location, multiplicity) factorization
    of the numerator to avoid re-rooting it."""
    tol = resolve_tol(tol)
    if f.is_zero():
        raise ZeroDivisionError("reciprocal of the zero function")
    if num_zeros is None:
        num_zeros = [
            (zd.location, zd.multiplicity) for zd in cpoly.roots(f.num, tol)
        ]
    else:
        num_zeros = [
            (complex(loc), int(m))
            for loc, m in (
                (z.location, z.multiplicity) if hasattr(z, "location") else z
                for z in num_zeros
            )
        ]
    lc = f.num[-1]
    return RatFunc(cpoly.pscale(f.den, 1.0 / lc), num_zeros, tol)


def divide(f: RatFunc, g: RatFunc, gzeros=None, tol: ToleranceConfig | None = None):
    return f * reciprocal(g, num_zeros=gzeros, tol=tol)


# -- partial fractions and the analytic projection ---------------------------


def polynomial_part(f: RatFunc) -> np.ndarray:
    if f.is_polynomial():
        return f.num.copy()
    q, _r = cpoly.pdivmod(f.num, f.den)
    return q


def principal_parts(f: RatFunc) -> list[tuple[complex, np.ndarray]]:
    """Per pole p (mult m): coefficients ``A[1..m]`` of ``sum A_j/(z-p)^j``.

    Returned arrays are indexed ``A[j-1] = A_j``.
    """
    out = []
    for p, m in f.poles:
        rest = tuple(pm for pm in f.poles if pm[0] != p)
        g = RatFunc(f.num, rest)
        t = g.taylor_at(p, m)
        out.append((p, t[::-1].copy()))  # A_j = t[m-j]
    return out


def project_plus(f: RatFunc, tol: ToleranceConfig | None = None) -> RatFunc:
    """Analytic projection: keep the polynomial part and exterior-pole terms.

    Principal parts at poles inside the open disc (including pure negative
    powers, i.e. a pole at 0) are discarded.  Poles inside the boundary band
    raise :class:`PoleOnCircle` since the split is then ill-defined.
    """
    tol = resolve_tol(tol)
    band = [p for p, _m in f.poles if abs(abs(p) - 1.0) <= tol.delta_boundary]
    if band:
        raise PoleOnCircle(band)
    acc = RatFunc(polynomial_part(f), ())
    for p, A in principal_parts(f):
        if abs(p) <= 1.0:
            continue
        m = A.size
        num = np.zeros(1, dtype=complex)
        for j in range(1, m + 1):
            num = cpoly.padd(num, cpoly.pscale(cpoly.from_roots([p] * (m - j)), A[j - 1]))
        acc = acc + RatFunc(num, [(p, m)])
    return acc


# -- reproducing-kernel basis -------------------------------------------------


@dataclass
class KBasis:
    """Decomposition over kernel blocks: node w -> coefficients of k_w^(n).

    Node 0 carries the polynomial part (k_0^(n) = n! z^n); every other node
    is the reflection 1/conj(p) of a pole p of the function.
    """

    terms: dict[complex, np.ndarray]

    def node_items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].real, kv[0].imag))


def to_kbasis(f: RatFunc, tol: ToleranceConfig | None = None) -> KBasis:
    """Expand an admissible rational function over the kernel blocks."""
    tol = resolve_tol(tol)
    terms: dict[complex, np.ndarray] = {}
    q = polynomial_part(f)
    if not cpoly.is_zero_poly(q):
        terms[0j] = q / cpoly.factorials(q.size - 1)
    for p, A in principal_parts(f):
        m = A.size
        w = 1.0 / np.conj(p)
        c = np.zeros(m, dtype=complex)
        fact = cpoly.factorials(m)
        for n in range(m - 1, -1, -1):
            j = n + 1
            s = A[j - 1]
            for n2 in range(n + 1, m):
                s -= (
                    c[n2]
                    * fact[n2]
                    * (-p) ** (n2 + 1)
                    * cpoly.binom(n2, n2 + 1 - j)
                    * p ** (j - 1)
                )
            c[n] = s / (fact[n] * (-p) ** (n + 1) * p ** n)
        w = complex(w)
        if w in terms:  # two poles reflecting onto one node cannot happen for
            terms[w] = terms[w] + c  # distinct poles, but keep the sum safe
        else:
            terms[w] = c
    return KBasis(terms)


def kernel_fn(w, n: int = 0) -> RatFunc:
    """The reproducing kernel ``k_w^(n) = n! z^n / (1 - conj(w) z)^(n+1)``."""
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    return kernel_block(w, c)


def kernel_block(w, c, tol: ToleranceConfig | None = None) -> RatFunc:
    """``sum_n c[n] * k_w^(n)`` as a RatFunc."""
    return _kernel_block(complex(w), np.asarray(c, dtype=complex), resolve_tol(tol))


def _kernel_block(w: complex, c: np.ndarray, tol: ToleranceConfig) -> RatFunc:
    """sum_n c[n] * k_w^(n) as a RatFunc."""
    c = np.asarray(c, dtype=complex)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0.0:
        return RatFunc.zero()
    top = c.size - 1
    while top > 0 and abs(c[top]) <= tol.eps_zero * scale:
        top -= 1
    c = c[: top + 1]
    if abs(w) <= tol.eps_zero:
        return RatFunc(c * cpoly.factorials(top), ())
    p = 1.0 / np.conj(w)
    fact = cpoly.factorials(top)
    num = np.zeros(1, dtype=complex)
    for n in range(top + 1):
        if c[n] == 0:
            continue
        mono = np.zeros(n + 1, dtype=complex)
        mono[n] = c[n] * fact[n] * (-p) ** (n + 1)
        num = cpoly.padd(num, cpoly.pmul(mono, cpoly.from_roots([p] * (top - n))))
    return RatFunc(num, [(p, top + 1)])


def from_kbasis(kb: KBasis, tol: ToleranceConfig | None = None) -> RatFunc:
    tol = resolve_tol(tol)
    acc = RatFunc.zero()
    for w, c in kb.node_items():
        acc = acc + _kernel_block(w, c, tol)
    return acc


def conj_reflect(f: RatFunc, tol: ToleranceConfig | None = None) -> RatFunc:
    """The reflection ``f~(z) = conj(f(1/conj(z)))`` as a rational function.

    Coefficients are conjugated and the argument inverted; poles move to the
    reflected locations ``1/conj(p)`` and a z-power imbalance becomes a pole
    or zero at the origin.
    """
    tol = resolve_tol(tol)
    if any(abs(p) <= tol.eps_zero for p, _m in f.poles):
        raise ValueError("conj_reflect with a pole at the origin is unsupported")
    n, d = f.num, f.den
    dn, dd = n.size - 1, d.size - 1
    rn = np.conj(n)[::-1]
    rd = np.conj(d)[::-1]
    lc = rd[-1]  # leading coeff of the reversed den = conj(d_0) = conj(prod(-p)) != 0
    poles = [(1.0 / np.conj(p), m) for p, m in f.poles]
    if dn > dd:
        poles.append((0.0, dn - dd))
        num = rn
    else:
        num = cpoly.pmul(rn, cpoly.from_roots([0.0] * (dd - dn)))
    return RatFunc(cpoly.pscale(num, 1.0 / lc), poles, tol)


# -- norms and grids -----------------------------------------------------------


def circle_grid(n: int = 256) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def sup_circle(f: RatFunc, n: int = 256) -> float:
    return float(np.max(np.abs(f(circle_grid(n)))))


def rel_distance(f: RatFunc, g: RatFunc, n: int = 256) -> float:
    """max |f - g| on the circle, relative to max(1, |f|, |g|)."""
    grid = circle_grid(n)
    fv, gv = f(grid), g(grid)
    scale = max(1.0, float(np.max(np.abs(fv))), float(np.max(np.abs(gv))))
    return float(np.max(np.abs(fv - gv))) / scale


def nonzero_or_raise(f: RatFunc) -> RatFunc:
    if f.is_zero():
        raise IdenticallyZero("the zero function was given")
    return f
