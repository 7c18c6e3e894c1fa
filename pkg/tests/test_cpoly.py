import numpy as np

from shiftsim import cpoly


def _close(a, b, tol=1e-12):
    a, b = np.atleast_1d(a), np.atleast_1d(b)
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    return np.max(np.abs(a - b)) <= tol


def test_derivative_power_rule():
    assert _close(cpoly.pder([0, 0, 0, 1]), [0, 0, 3])


def test_divmod_exact_factorization():
    q, r = cpoly.pdivmod([-1, 0, 1], [-1, 1])
    assert _close(q, [1, 1])
    assert cpoly.is_zero_poly(r)


def test_eval_linear_root():
    assert abs(cpoly.peval([1, -2], 0.5)) < 1e-15


def test_arith_ring_ops():
    a, b = np.array([1, 2j, 3]), np.array([-2, 1])
    assert _close(cpoly.padd(a, b), [-1, 1 + 2j, 3])
    assert _close(cpoly.psub(a, b), [3, -1 + 2j, 3])
    assert _close(cpoly.pmul(b, b), [4, -4, 1])
    assert _close(cpoly.pscale(b, 2j), [-4j, 2j])


def test_roots_double_plus_exterior():
    p = cpoly.from_roots([0.5, 0.5, 3.0])
    zs = cpoly.roots(p)
    assert [(round(z.location.real, 6), z.multiplicity, z.region) for z in zs] == [
        (0.5, 2, "interior"),
        (3.0, 1, "exterior"),
    ]


def test_roots_linear_interior():
    zs = cpoly.roots([1, -2])
    assert len(zs) == 1
    assert abs(zs[0].location - 0.5) < 1e-12
    assert zs[0].multiplicity == 1 and zs[0].region == "interior"


def test_roots_unit_circle_boundary():
    zs = cpoly.roots([1, 0, 1])
    assert sorted(z.region for z in zs) == ["boundary", "boundary"]
    assert sorted(round(z.location.imag, 9) for z in zs) == [-1.0, 1.0]


def test_roots_constant_empty():
    assert cpoly.roots([3.0]) == []


def test_bezout_z_and_one_minus_z():
    g, u, v = cpoly.bezout([0, 1], [1, -1])
    assert _close(g, [1])
    ident = cpoly.padd(cpoly.pmul(u, [0, 1]), cpoly.pmul(v, [1, -1]))
    assert _close(ident, [1], 1e-12)


def test_bezout_equal_inputs():
    g, u, v = cpoly.bezout([0, 0, 1], [0, 0, 1])
    assert _close(g, [0, 0, 1])
    ident = cpoly.padd(cpoly.pmul(u, [0, 0, 1]), cpoly.pmul(v, [0, 0, 1]))
    assert _close(ident, g, 1e-12)


def test_bezout_coprime_linears():
    p, q = np.array([-1, 1]), np.array([-2, 1])
    g, u, v = cpoly.bezout(p, q)
    assert _close(g, [1])
    ident = cpoly.padd(cpoly.pmul(u, p), cpoly.pmul(v, q))
    assert _close(ident, [1], 1e-12)


def test_divmod_roundtrip_random(rng):
    for _ in range(200):
        a = rng.standard_normal(rng.integers(1, 8)) + 1j * rng.standard_normal(1)
        b = rng.standard_normal(rng.integers(2, 7)) + 1j * rng.standard_normal(1)
        a, b = cpoly.trim(a), cpoly.trim(b)
        if cpoly.is_zero_poly(b):
            continue
        q, r = cpoly.pdivmod(a, b)
        assert cpoly.degree(r) < cpoly.degree(b) or cpoly.is_zero_poly(r)
        back = cpoly.padd(cpoly.pmul(q, b), r)
        scale = np.max(np.abs(a)) + 1.0
        assert _close(back, a, 1e-10 * scale)


def test_roots_reconstruction_random(rng):
    for _ in range(60):
        deg = int(rng.integers(1, 9))
        locs = rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
        lc = complex(rng.standard_normal() + 1j * rng.standard_normal()) + 2.0
        p = cpoly.pscale(cpoly.from_roots(locs), lc)
        zs = cpoly.roots(p)
        assert sum(z.multiplicity for z in zs) == deg
        rebuilt = np.ones(1, dtype=complex)
        for z in zs:
            rebuilt = cpoly.pmul(rebuilt, cpoly.from_roots([z.location] * z.multiplicity))
        rebuilt = cpoly.pscale(rebuilt, lc)
        assert _close(rebuilt, p, 1e-6 * np.max(np.abs(p)))


def test_bezout_random_coprime(rng, tol):
    for _ in range(60):
        p = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        q = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        g, u, v = cpoly.bezout(p, q)
        ident = cpoly.padd(cpoly.pmul(u, p), cpoly.pmul(v, q))
        scale = max(np.max(np.abs(p)), np.max(np.abs(q)), 1.0)
        assert _close(ident, g, tol.eps_bezout * scale)


def test_taylor_shift_matches_derivatives(rng):
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    w = 0.4 - 0.2j
    shifted = cpoly.taylor_shift(a, w)
    for j in range(a.size):
        dj = cpoly.peval(cpoly.pder(a, j), w) / cpoly.factorials(j)[-1]
        assert abs(shifted[j] - dj) < 1e-12


def test_synth_div_remainder_is_value(rng):
    a = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    w = -0.3 + 0.7j
    q, rem = cpoly.synth_div(a, w)
    assert abs(rem - cpoly.peval(a, w)) < 1e-12
    back = cpoly.padd(cpoly.pmul(q, [-w, 1]), [rem])
    assert _close(back, a, 1e-12)
