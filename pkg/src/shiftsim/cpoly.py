"""Polynomials over C in ascending-coefficient convention.

Thin wrappers around :mod:`numpy.polynomial.polynomial` plus the pieces that
library does not provide: relative trimming, exact synthetic division by a
linear factor, Taylor shifts, root clustering into multiplicities with Newton
polish, region classification against the unit circle, and a numerically
guarded Bezout identity.

A polynomial is a 1-d complex ndarray ``c`` with ``c[k]`` the coefficient of
``z**k``.  The zero polynomial is ``[0]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from .config import ToleranceConfig, resolve_tol
from .errors import BezoutIllConditioned

_PASCAL_CACHE: dict[int, np.ndarray] = {}
_FACT_CACHE: dict[int, np.ndarray] = {}


def pascal(n: int) -> np.ndarray:
    """(n x n) table of binomial coefficients, ``pascal(n)[i, j] = C(i, j)``."""
    tbl = _PASCAL_CACHE.get(n)
    if tbl is None:
        tbl = np.zeros((n, n))
        tbl[:, 0] = 1.0
        for i in range(1, n):
            tbl[i, 1:i + 1] = tbl[i - 1, 1:i + 1] + tbl[i - 1, 0:i]
        _PASCAL_CACHE[n] = tbl
    return tbl


def binom(n: int, k: int) -> float:
    if k < 0 or k > n:
        return 0.0
    return pascal(n + 1)[n, k]


def factorials(n: int) -> np.ndarray:
    """Array ``[0!, 1!, ..., n!]`` as floats (exact up to n = 170)."""
    if n > 170:
        raise OverflowError(f"factorial table capped at 170, asked for {n}")
    tbl = _FACT_CACHE.get(n)
    if tbl is None:
        tbl = np.cumprod(np.concatenate(([1.0], np.arange(1.0, n + 1))))
        _FACT_CACHE[n] = tbl
    return tbl


def as_poly(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.ndim != 1:
        raise ValueError("polynomial coefficients must be one-dimensional")
    return c if c.size else np.zeros(1, dtype=complex)


def trim(c, rel: float = 1e-12) -> np.ndarray:
    """Strip trailing coefficients smaller than ``rel`` times the largest one."""
    c = as_poly(c)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > rel * scale)[0]
    if keep.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: keep[-1] + 1].copy()


def padd(a, b) -> np.ndarray:
    return trim(npoly.polyadd(as_poly(a), as_poly(b)))


def psub(a, b) -> np.ndarray:
    return trim(npoly.polysub(as_poly(a), as_poly(b)))


def pmul(a, b) -> np.ndarray:
    return trim(npoly.polymul(as_poly(a), as_poly(b)))


def pscale(a, s) -> np.ndarray:
    return as_poly(a) * complex(s)


def pdivmod(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_poly(a), as_poly(b)
    q, r = npoly.polydiv(a, b)
    return trim(q), trim(r)


def pder(a, m: int = 1) -> np.ndarray:
    return as_poly(npoly.polyder(as_poly(a), m))


def peval(a, z):
    return npoly.polyval(z, as_poly(a))


def degree(a) -> int:
    a = trim(a)
    return 0 if a.size == 1 and a[0] == 0 else a.size - 1


def is_zero_poly(a) -> bool:
    a = as_poly(a)
    return bool(np.all(a == 0))


def monic(a) -> np.ndarray:
    a = trim(a)
    if is_zero_poly(a):
        raise ValueError("zero polynomial cannot be made monic")
    return a / a[-1]


def from_roots(roots) -> np.ndarray:
    """Monic polynomial with the given roots (multiplicity by repetition)."""
    roots = np.asarray(list(roots), dtype=complex)
    if roots.size == 0:
        return np.ones(1, dtype=complex)
    return npoly.polyfromroots(roots).astype(complex)


def synth_div(a, w) -> tuple[np.ndarray, complex]:
    """Divide by ``(z - w)``: returns ``(q, rem)`` with ``a = (z-w) q + rem``."""
    a = as_poly(a)
    n = a.size
    if n == 1:
        return np.zeros(1, dtype=complex), complex(a[0])
    q = np.empty(n - 1, dtype=complex)
    acc = a[-1]
    for k in range(n - 2, -1, -1):
        q[k] = acc
        acc = a[k] + w * acc
    return q, complex(acc)


def taylor_shift(a, w) -> np.ndarray:
    """Coefficients of ``p(z + w)``, i.e. the Taylor expansion of p about w."""
    a = as_poly(a)
    w = complex(w)
    if w == 0.0:
        return a.copy()
    n = a.size
    P = pascal(n)
    # B[k, i] = C(k, i) * w**(k-i) for i <= k; coeff_i(p(z+w)) = sum_k a_k B[k, i]
    e = np.subtract.outer(np.arange(n), np.arange(n))
    B = np.tril(P * np.power(w, np.maximum(e, 0)))
    return a @ B


@dataclass(frozen=True)
class ZeroDatum:
    """A located zero: position, multiplicity, and unit-circle region."""

    location: complex
    multiplicity: int
    region: str  # 'interior' | 'boundary' | 'exterior'


def classify_region(w, tol: ToleranceConfig | None = None) -> str:
    tol = resolve_tol(tol)
    m = abs(w)
    if abs(m - 1.0) <= tol.delta_boundary:
        return "boundary"
    return "interior" if m < 1.0 else "exterior"


def _polish_root(a, da, z0, radius):
    """A few Newton steps from z0 on the polynomial ``da`` (a derivative of a)."""
    z = complex(z0)
    for _ in range(8):
        d = peval(pder(da), z)
        f = peval(da, z)
        if d == 0:
            break
        step = f / d
        if not np.isfinite(step) or abs(step) > 100.0 * max(radius, 1e-12):
            break
        z -= step
        if abs(step) < 1e-16 * max(1.0, abs(z)):
            break
    # accept the polished point only if it did not wander off
    return z if abs(z - z0) <= 100.0 * max(radius, 1e-12) else complex(z0)


def roots(a, tol: ToleranceConfig | None = None) -> list[ZeroDatum]:
    """Roots of ``a`` clustered into multiplicities and polished.

    Companion-matrix roots scatter like ``eps**(1/m)`` around an m-fold root;
    clusters of radius ``delta_cluster * max(1, |root|)`` are merged, their
    mean is polished by Newton iteration on the (m-1)-st derivative, and each
    cluster is reported once with its multiplicity and circle region.
    """
    tol = resolve_tol(tol)
    a = trim(a, tol.eps_zero)
    if degree(a) == 0:
        return []
    raw = npoly.polyroots(a)
    order = np.argsort(raw.real + 1e-9 * raw.imag)  # deterministic sweep order
    remaining = list(raw[order])
    out: list[ZeroDatum] = []
    while remaining:
        seed = remaining.pop(0)
        cluster = [seed]
        changed = True
        while changed:
            changed = False
            center = np.mean(cluster)
            rad = tol.delta_cluster * max(1.0, abs(center))
            for z in list(remaining):
                if abs(z - center) <= rad:
                    cluster.append(z)
                    remaining.remove(z)
                    changed = True
        m = len(cluster)
        center = complex(np.mean(cluster))
        spread = max((abs(z - center) for z in cluster), default=0.0)
        if m > 1:
            center = _polish_root(a, pder(a, m - 1), center, spread)
        else:
            center = _polish_root(a, a, center, max(spread, 1e-12))
        out.append(ZeroDatum(complex(center), m, classify_region(center, tol)))
    out.sort(key=lambda zd: (zd.location.real, zd.location.imag))
    return out


def deflate(a, location, multiplicity) -> np.ndarray:
    """Divide out ``(z - location)**multiplicity``, discarding tiny remainders."""
    q = as_poly(a)
    for _ in range(multiplicity):
        q, _rem = synth_div(q, location)
    return q


def _match_common_roots(rp, rq, tol: ToleranceConfig):
    common = []
    used = [False] * len(rq)
    for zd in rp:
        best, best_d = None, np.inf
        for j, zq in enumerate(rq):
            if used[j]:
                continue
            d = abs(zd.location - zq.location)
            if d < best_d:
                best, best_d = j, d
        if best is not None and best_d <= tol.delta_cluster * max(
            1.0, abs(zd.location)
        ) * 10.0:
            used[best] = True
            m = min(zd.multiplicity, rq[best].multiplicity)
            loc = 0.5 * (zd.location + rq[best].location)
            common.append((loc, m))
    return common


def bezout(p, q, tol: ToleranceConfig | None = None):
    """Solve ``u*p + v*q = g`` with g a monic numerical GCD of p and q.

    For numerically coprime inputs g = 1 and (u, v) solve the Sylvester system
    directly.  Common root clusters are divided out first.  Convention for
    proportional inputs: ``bezout(p, c*p) = (monic(p), 1/lc(p), 0)``.  Raises
    :class:`BezoutIllConditioned` when the residual of the returned identity
    exceeds ``eps_bezout`` relative to the coefficient scale.
    """
    tol = resolve_tol(tol)
    p, q = trim(p, tol.eps_zero), trim(q, tol.eps_zero)
    if is_zero_poly(p) and is_zero_poly(q):
        raise ValueError("bezout(0, 0) is undefined")
    if is_zero_poly(p):
        return monic(q), np.zeros(1, dtype=complex), as_poly(1.0 / q[-1])
    if is_zero_poly(q):
        return monic(p), as_poly(1.0 / p[-1]), np.zeros(1, dtype=complex)

    common = _match_common_roots(roots(p, tol), roots(q, tol), tol)
    g = np.ones(1, dtype=complex)
    p1, q1 = p, q
    for loc, m in common:
        g = pmul(g, from_roots([loc] * m))
        p1 = deflate(p1, loc, m)
        q1 = deflate(q1, loc, m)

    dp, dq = degree(p1), degree(q1)
    if dp == 0:
        u = as_poly(1.0 / p1[0])
        v = np.zeros(1, dtype=complex)
    elif dq == 0:
        u = np.zeros(1, dtype=complex)
        v = as_poly(1.0 / q1[0])
    else:
        # Sylvester system: columns are z^i * p1 (i < dq) then z^j * q1 (j < dp)
        n = dp + dq
        S = np.zeros((n, n), dtype=complex)
        for i in range(dq):
            S[i : i + dp + 1, i] = p1
        for j in range(dp):
            S[j : j + dq + 1, dq + j] = q1
        rhs = np.zeros(n, dtype=complex)
        rhs[0] = 1.0
        sol, *_ = np.linalg.lstsq(S, rhs, rcond=None)
        u, v = trim(sol[:dq]), trim(sol[dq:])

    scale = max(np.max(np.abs(p)), np.max(np.abs(q)), 1.0)
    resid = padd(padd(pmul(u, p), pmul(v, q)), pscale(g, -1.0))
    rnorm = float(np.max(np.abs(resid))) / scale
    if rnorm > tol.eps_bezout:
        raise BezoutIllConditioned(rnorm, tol.eps_bezout)
    return trim(g), u, v
