import cmath
import math

import numpy as np

from sixvertex.scalar import LaurentPoly, q_var, u_var, w_var
from sixvertex.vertex import (
    Weights,
    build_L,
    build_R,
    check_delta,
    check_yang_baxter,
    delta_residual,
    l_matrix_from_weights,
    matrix_is_zero,
    permutation_matrix,
    weights_of,
)
from sixvertex.sampling import make_rng, sample_point

Q = LaurentPoly.var(q_var())


def test_weights_b_vanishes_at_equal_points():
    w = weights_of(1 + 0j, 1.7 + 0.1j)
    assert w.b == 0


def test_weights_c_independent_of_z(rng):
    q = sample_point(rng)
    c_vals = {weights_of(sample_point(rng), q).c for _ in range(5)}
    assert len(c_vals) == 1


def test_weights_ice_point():
    z = cmath.exp(1j * math.pi / 3)
    q = cmath.exp(1j * math.pi / 3)
    w = weights_of(z, q)
    want = 1j * math.sqrt(3) / 2
    for v in (w.a, w.b, w.c):
        assert abs(v - want) < 1e-15


def test_delta_identity_symbolic():
    z = LaurentPoly.var(u_var(1)) * LaurentPoly.var(w_var(1)).monomial_inverse()
    assert delta_residual(z, Q).is_zero()
    assert check_delta(z, Q).passed
    # also on a composite monomial argument
    z2 = LaurentPoly.monomial(1, {u_var(1): 2, u_var(2): -2})
    assert delta_residual(z2, Q).is_zero()


def test_delta_identity_float(rng):
    assert check_delta(sample_point(rng), sample_point(rng)).passed


def test_l_matrix_sparsity_pattern():
    wts = Weights(a=5 + 0j, b=3 + 0j, c=2 + 0j)
    m = l_matrix_from_weights(wts)
    allowed = {(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3)}
    for r in range(4):
        for c in range(4):
            if (r, c) in allowed:
                assert m[r, c] != 0
            else:
                assert m[r, c] == 0
    assert m[0, 0] == m[3, 3]


def test_l_matrix_symbolic_entries_match_weights():
    z = LaurentPoly.var(u_var(1))
    m = build_L(z, Q)
    w = weights_of(z, Q)
    assert m[0, 0] == w.a and m[3, 3] == w.a
    assert m[1, 1] == w.b and m[2, 2] == w.b
    assert m[1, 2] == w.c and m[2, 1] == w.c


def test_l_matrix_b_zero_at_equal_points():
    m = build_L(1 + 0j, 1.3 + 0.2j)
    assert m[1, 1] == 0 and m[2, 2] == 0
    assert m[0, 0] == m[1, 2]  # a = c at z = 1


def test_det_regression():
    m = build_L(0.7 + 0.3j, 1.2 - 0.5j)
    det = np.linalg.det(m)
    frozen = -2.4486593024640956e-06 + 9.133139637821408e-07j
    assert abs(det - frozen) <= 1e-12 * abs(frozen)
    a, b, c = m[0, 0], m[1, 1], m[1, 2]
    assert abs(det - a * a * (b * b - c * c)) <= 1e-12 * abs(det)


def test_permutation_matrix_swaps():
    p = permutation_matrix(exact=False)
    v = np.array([1, 2, 3, 4], dtype=complex)
    assert np.allclose(p @ v, [1, 3, 2, 4])
    r = build_R(0.8 + 0.1j, 1.1 - 0.3j)
    l = build_L(0.8 + 0.1j, 1.1 - 0.3j)
    assert np.allclose(r, p @ l)


def test_yang_baxter_symbolic_exact():
    pts = [LaurentPoly.var(u_var(i)) for i in (1, 2, 3)]
    assert check_yang_baxter(pts[0], pts[1], pts[2], Q).passed


def test_yang_baxter_equal_arguments():
    u = LaurentPoly.var(u_var(1))
    assert check_yang_baxter(u, u, u, Q).passed


def test_yang_baxter_numeric_sweep():
    rng = make_rng(7)
    for _ in range(100):
        out = check_yang_baxter(
            sample_point(rng), sample_point(rng), sample_point(rng),
            sample_point(rng), tolerance=1e-10)
        assert out.passed


def test_matrix_is_zero_helper():
    zero = np.full((2, 2), LaurentPoly.zero(), dtype=object)
    assert matrix_is_zero(zero)
    zero[0, 1] = Q
    assert not matrix_is_zero(zero)
