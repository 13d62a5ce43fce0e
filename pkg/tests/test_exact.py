from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planardirac.exact import (
    ExactComplex,
    Mat2,
    REP_MINUS,
    REP_PLUS,
    Representation,
    anticommutant,
    anticommutator,
    commutator,
    decompose,
    gamma,
    gammas,
    pauli,
    span_dimension,
)

I2 = Mat2.ident()


def test_pauli_values():
    assert pauli(1) == Mat2.of([[0, 1], [1, 0]])
    assert pauli(3) == Mat2.of([[1, 0], [0, -1]])
    assert (pauli(2) @ pauli(2)) == I2


def test_pauli_index_rejected():
    with pytest.raises(IndexError):
        pauli(0)
    with pytest.raises(IndexError):
        pauli(4)


def test_gamma_values():
    assert gamma(0, +1) == pauli(3)
    assert gamma(1, +1) == Mat2.of([[0, 1], [-1, 0]])
    assert gamma(2, -1) == Mat2.of(
        [[0, ExactComplex(0, 1)], [ExactComplex(0, 1), 0]]
    )
    with pytest.raises(IndexError):
        gamma(3, +1)


def test_representation_validation():
    assert Representation(+1).s == 1
    assert Representation(-1).flipped() == REP_PLUS
    with pytest.raises(ValueError):
        Representation(0)
    with pytest.raises(ValueError):
        Representation(2)


def test_anticommutators():
    for rep in (REP_PLUS, REP_MINUS):
        g = gammas(rep)
        assert anticommutator(g[1], g[2]).is_zero()
        assert anticommutator(g[0], g[0]) == I2.scale(2)


def test_identity_commutes():
    m = Mat2.of([[ExactComplex(1, 2), 3], [Fraction(1, 7), ExactComplex(0, -5)]])
    assert commutator(I2, m).is_zero()


def test_decompose_examples():
    d = decompose(I2)
    assert d.coefficients() == (ExactComplex(1), ExactComplex(0), ExactComplex(0), ExactComplex(0))
    # gamma^1 = i sigma_2
    d = decompose(gamma(1, +1))
    assert d.c_2 == ExactComplex(0, 1)
    assert d.c_I.is_zero() and d.c_1.is_zero() and d.c_3.is_zero()
    # triple product gamma^0 gamma^1 gamma^2 = -i s I
    g = gammas(REP_PLUS)
    d = decompose(g[0] @ g[1] @ g[2])
    assert d.c_I == ExactComplex(0, -1)
    assert d.c_1.is_zero() and d.c_2.is_zero() and d.c_3.is_zero()


def test_span_dimensions():
    for rep in (REP_PLUS, REP_MINUS):
        g = gammas(rep)
        assert span_dimension([I2, *g]) == 4
        assert span_dimension([I2, g[0]]) == 2
        assert span_dimension([g[1], g[1].scale(ExactComplex(0, 1))]) == 1


def test_anticommutant_empty_set_is_whole_space():
    assert len(anticommutant([])) == 4


def test_anticommutant_of_sigma3():
    basis = anticommutant([pauli(3)])
    assert len(basis) == 2
    assert span_dimension(basis + [pauli(1), pauli(2)]) == 2


def test_anticommutant_of_gammas_is_trivial():
    for rep in (REP_PLUS, REP_MINUS):
        assert anticommutant(list(gammas(rep))) == []


_rat = st.fractions(min_value=-50, max_value=50, max_denominator=20)
_ec = st.builds(ExactComplex, _rat, _rat)
_mat = st.builds(lambda a, b, c, d: Mat2(((a, b), (c, d))), _ec, _ec, _ec, _ec)


@given(_mat)
def test_decompose_recompose_roundtrip(m):
    assert decompose(m).recompose() == m


@given(_mat, _mat)
def test_trace_cyclicity(a, b):
    assert ((a @ b).trace() - (b @ a).trace()).is_zero()


@given(_ec, _ec)
def test_exact_field_operations(x, y):
    assert (x + y) - y == x
    assert (x * y) - (y * x) == ExactComplex(0)
    if not y.is_zero():
        assert ((x / y) * y - x).is_zero()


@given(_ec)
def test_conjugation_involution(x):
    assert x.conj().conj() == x
    assert (x * x.conj()).im == 0
