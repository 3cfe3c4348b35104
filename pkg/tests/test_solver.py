import pytest

from sixvertex.asymptotics import asymptotic_norm
from sixvertex.errors import SizeLimitExceeded
from sixvertex.scalar import (
    LaurentPoly,
    RationalFunction,
    invert,
    q_var,
)
from sixvertex.solver import (
    CoefficientTable,
    UniPoly,
    ansatz_box,
    expected_l2_table,
    h_table_from_z,
    homogeneous_ode_residual,
    homogeneous_partition_polynomial,
    phi_polynomials,
    reference_l3_ratios,
    solve_fz,
    solve_fz_exact,
    solve_fz_numeric,
    verify_h_table,
)
from sixvertex.sampling import make_rng

Q = LaurentPoly.var(q_var())


def test_unipoly_algebra():
    p = UniPoly({0: Q, 2: LaurentPoly.one()})
    r = UniPoly({1: 2 * Q})
    assert (p * r).coeff(3) == 2 * Q
    assert (p + r - r) == p
    assert p.derivative().coeff(1) == LaurentPoly.rational(2)
    assert UniPoly({}).is_zero()


def test_phi_polynomial_coefficients():
    phi0, phi1, phi2 = phi_polynomials()
    assert phi0.coeff(0) == -4 * Q ** 2 * (1 + Q ** 2 + Q ** 4)
    assert phi2.coeff(0) == 0  # no constant term
    assert phi1.coeff(4) == Q ** 4 * (-1 + 4 * Q ** 2 + 4 * Q ** 4 - Q ** 6)
    assert phi1.coeff(2) == 0


def test_homogeneous_l1_constant():
    z = homogeneous_partition_polynomial(1)
    assert z.degree() == 0
    assert z.coeff(0) == (Q - invert(Q)) / 2


def test_homogeneous_l2_coefficients():
    z = homogeneous_partition_polynomial(2)
    k2 = (Q - invert(Q)) ** 2 * (1 + Q ** 2) / 16
    assert z.coeff(2) == k2
    assert RationalFunction(z.coeff(1)) == RationalFunction(-4 * k2, 1 + Q ** 2)
    assert RationalFunction(z.coeff(0)) == RationalFunction(k2, Q ** 2)


def test_ode_residuals_vanish():
    assert homogeneous_ode_residual(1).is_zero()
    assert homogeneous_ode_residual(2).is_zero()


def test_ode_negative_control():
    z = homogeneous_partition_polynomial(2)
    bad = UniPoly(dict(z.coeffs))
    bad.coeffs[1] = bad.coeffs[1] + LaurentPoly.one()
    assert not homogeneous_ode_residual(2, bad).is_zero()


def test_ode_size_guard():
    with pytest.raises(ValueError):
        homogeneous_ode_residual(3)


def test_solve_l1_constant():
    table = solve_fz_exact(1)
    assert table.entries[(0,)] == RationalFunction((Q - invert(Q)) / 2)


def test_solve_l2_matches_expected_and_direct():
    table = solve_fz_exact(2)
    expected = expected_l2_table()
    direct = h_table_from_z(2)
    for idx in ansatz_box(2):
        assert table.entries[idx] == expected.entries[idx]
        assert table.entries[idx] == direct.entries[idx]
    # five of the nine box entries solve to zero
    assert len(table.nonzero_entries()) == 4


def test_solve_l2_symmetry():
    table = solve_fz_exact(2)
    for (m, n), v in table.entries.items():
        assert v == table.entries[(n, m)]


def test_normalizations_related_by_overall_scale():
    asym = solve_fz_exact(2, "asymptotic")
    topone = solve_fz_exact(2, "top-one")
    norm = asymptotic_norm(2, Q)
    assert topone.entries[(1, 1)] == RationalFunction(1)
    for idx in ansatz_box(2):
        assert topone.entries[idx] * norm == asym.entries[idx]


def test_solve_size_guards():
    with pytest.raises(SizeLimitExceeded):
        solve_fz_exact(4)
    with pytest.raises(ValueError):
        solve_fz_exact(2, "bogus")
    with pytest.raises(SizeLimitExceeded):
        solve_fz_numeric(5, make_rng(0))


def test_direct_l3_table_against_reference():
    table = h_table_from_z(3)
    report = verify_h_table(table)
    assert report.ok
    assert len(table.nonzero_entries()) == 27
    want3 = (Q - invert(Q)) ** 3 * (1 + Q ** 2) * (1 + Q ** 2 + Q ** 4) / 2 ** 9
    assert table.entries[(2, 2, 2)] == RationalFunction(want3)


def test_l3_parity_emerges():
    table = h_table_from_z(3)
    for idx, v in table.nonzero_entries().items():
        assert all(m % 2 == 0 for m in idx)


def test_reference_ratios_cover_26_indices():
    assert len(reference_l3_ratios()) == 26


def test_verify_h_table_flags_corruption():
    table = h_table_from_z(3)
    table.entries[(0, 0, 0)] = table.entries[(0, 0, 0)] * Q
    report = verify_h_table(table)
    assert not report.ok
    bad = [e.index for e in report.entries if not e.matches]
    assert (0, 0, 0) in bad


def test_verify_h_table_flags_unexpected_nonzero():
    table = h_table_from_z(3)
    table.entries[(1, 0, 0)] = RationalFunction(Q)
    report = verify_h_table(table)
    assert not report.ok
    assert (1, 0, 0) in report.unexpected_nonzero


def test_verify_h_table_size_guard():
    with pytest.raises(ValueError):
        verify_h_table(h_table_from_z(2))


def test_numeric_solver_matches_exact_l2():
    rng = make_rng(321)
    result = solve_fz_numeric(2, rng, q_count=4)
    exact = solve_fz_exact(2)
    for s in result.samples:
        assert s.singular_gap < 1e-8
        assert s.batch_discrepancy < 1e-6
        for idx, val in s.ratios.items():
            want = exact.entries[idx].eval({q_var(): s.q})
            assert abs(val - want) <= 1e-8 * abs(want)


def test_solve_dispatch():
    rng = make_rng(11)
    assert isinstance(solve_fz(1, backend="exact"), CoefficientTable)
    res = solve_fz(2, backend="float", rng=rng, q_count=1)
    assert res.samples
    with pytest.raises(ValueError):
        solve_fz(2, backend="quantum")
    with pytest.raises(ValueError):
        solve_fz(2, backend="float")


def test_table_json_shape():
    doc = solve_fz_exact(2).to_json_obj()
    assert doc["L"] == 2
    assert doc["zero_indices"] == 5
    indices = [tuple(e["index"]) for e in doc["entries"]]
    assert (1, 1) in indices and (-1, -1) in indices
