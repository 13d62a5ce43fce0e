from fractions import Fraction

from planardirac.checks import (
    check_anticommutant_dimension,
    check_basis_completeness,
    check_chirality,
    check_clifford,
    check_representation_invariant,
    check_sigma_identity,
    check_similarity_stability,
    check_vector_rewrite,
    chirality_residuals,
    representation_invariant,
    run_full_suite,
    vector_rewrite_residual,
)
from planardirac.exact import ExactComplex, Mat2, REP_MINUS, REP_PLUS, pauli


def test_clifford_both_representations():
    for rep in (REP_PLUS, REP_MINUS):
        rpt = check_clifford(rep)
        assert rpt.passed
        assert rpt.residual.is_zero()


def test_clifford_detects_corruption():
    # gamma^1 -> sigma_1 keeps {gamma^0, gamma^1} = 0 but breaks the square:
    # sigma_1^2 = +I while g^{11} I = -I.
    rpt = check_clifford(REP_PLUS, override_gamma1=pauli(1))
    assert not rpt.passed
    assert "(1, 1)" in rpt.detail


def test_basis_completeness():
    for rep in (REP_PLUS, REP_MINUS):
        rpt = check_basis_completeness(rep)
        assert rpt.passed and rpt.residual == 4


def test_sigma_identity_all_pairs():
    assert check_sigma_identity().passed


def test_vector_rewrite_zero_residual():
    assert vector_rewrite_residual(1, 0, +1).is_zero()
    assert vector_rewrite_residual(0, 1, -1).is_zero()
    assert vector_rewrite_residual(0, 0, +1).is_zero()
    assert vector_rewrite_residual(Fraction(5, 3), Fraction(-7, 11), -1).is_zero()
    assert check_vector_rewrite().passed


def test_anticommutant_dimension_zero():
    rpt = check_anticommutant_dimension()
    assert rpt.passed and rpt.residual == (0, 0)


def test_chirality_residual_pattern():
    r0, r1, r2 = chirality_residuals(REP_PLUS)
    assert r0.is_zero() and r1.is_zero()
    assert r2 == Mat2.ident().scale(ExactComplex(0, -1))
    r0, r1, r2 = chirality_residuals(REP_MINUS)
    assert r2 == Mat2.ident().scale(ExactComplex(0, 1))
    assert check_chirality(REP_PLUS).passed
    assert check_chirality(REP_MINUS).passed


def test_chirality_sigma3_candidate_fails_at_mu0():
    r0, _, _ = chirality_residuals(REP_PLUS, candidate=pauli(3))
    assert r0 == Mat2.ident()


def test_representation_invariant_values():
    assert representation_invariant(REP_PLUS) == ExactComplex(0, -2)
    assert representation_invariant(REP_MINUS) == ExactComplex(0, 2)
    assert check_representation_invariant(REP_PLUS).passed
    assert check_representation_invariant(REP_MINUS).passed


def test_similarity_stability():
    assert check_similarity_stability().passed


def test_full_suite_green_and_sized():
    reports = run_full_suite()
    assert len(reports) == 12
    assert all(r.passed for r in reports)


def test_full_suite_corruption_trips():
    reports = run_full_suite(override_gamma1=pauli(1))
    assert any(not r.passed for r in reports)


def test_report_json_round():
    rpt = check_clifford(REP_PLUS)
    d = rpt.to_dict()
    assert d["passed"] is True
    assert d["residual"] == [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
