"""Exact rational-complex arithmetic and 2x2 matrix algebra.

Everything in this module is computed over Q(i): scalars are pairs of
`fractions.Fraction`, so equality tests are decisions, not tolerance
checks. Floating point is deliberately banned here; a passing identity
is a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class ExactComplex:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __init__(self, re: Rat = 0, im: Rat = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        other = _coerce(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        other = _coerce(other)
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "ExactComplex":
        return _coerce(other) - self

    def __mul__(self, other) -> "ExactComplex":
        other = _coerce(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __truediv__(self, other) -> "ExactComplex":
        other = _coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conj(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce(x) -> ExactComplex:
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactComplex(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ExactComplex")


ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I_UNIT = ExactComplex(0, 1)

#: Diagonal of the flat metric with signature (+, -, -).
METRIC_DIAG = (1, -1, -1)


@dataclass(frozen=True)
class Representation:
    """Choice of the sign s = +-1 selecting one of the two gamma-matrix sets.

    The two values lead to physically distinct operators; no similarity
    transform connects them (see `representation_invariant`).
    """

    s: int

    def __post_init__(self):
        if self.s not in (+1, -1):
            raise ValueError(f"representation sign must be +1 or -1, got {self.s}")

    def flipped(self) -> "Representation":
        return Representation(-self.s)


REP_PLUS = Representation(+1)
REP_MINUS = Representation(-1)


def as_rep(rep: Union[Representation, int]) -> Representation:
    if isinstance(rep, Representation):
        return rep
    return Representation(int(rep))


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix over exact complex scalars."""

    e: tuple  # ((a, b), (c, d)) of ExactComplex

    @staticmethod
    def of(rows: Sequence[Sequence]) -> "Mat2":
        return Mat2(tuple(tuple(_coerce(x) for x in row) for row in rows))

    @staticmethod
    def zero() -> "Mat2":
        return Mat2.of([[0, 0], [0, 0]])

    @staticmethod
    def ident() -> "Mat2":
        return Mat2.of([[1, 0], [0, 1]])

    def __add__(self, other: "Mat2") -> "Mat2":
        a, b = self.e, other.e
        return Mat2(tuple(tuple(a[i][j] + b[i][j] for j in range(2)) for i in range(2)))

    def __sub__(self, other: "Mat2") -> "Mat2":
        a, b = self.e, other.e
        return Mat2(tuple(tuple(a[i][j] - b[i][j] for j in range(2)) for i in range(2)))

    def __neg__(self) -> "Mat2":
        return Mat2(tuple(tuple(-x for x in row) for row in self.e))

    def __matmul__(self, other: "Mat2") -> "Mat2":
        a, b = self.e, other.e
        return Mat2(
            tuple(
                tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2))
                for i in range(2)
            )
        )

    def scale(self, c) -> "Mat2":
        c = _coerce(c)
        return Mat2(tuple(tuple(c * x for x in row) for row in self.e))

    def trace(self) -> ExactComplex:
        return self.e[0][0] + self.e[1][1]

    def det(self) -> ExactComplex:
        return self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]

    def adjoint(self) -> "Mat2":
        return Mat2(
            tuple(tuple(self.e[j][i].conj() for j in range(2)) for i in range(2))
        )

    def inverse(self) -> "Mat2":
        d = self.det()
        if d.is_zero():
            raise ZeroDivisionError("matrix is singular")
        a, b = self.e[0]
        c, dd = self.e[1]
        return Mat2(((dd / d, -b / d), (-c / d, a / d)))

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.e for x in row)

    def to_complex(self):
        import numpy as np

        return np.array([[complex(x) for x in row] for row in self.e])

    def __repr__(self) -> str:
        return f"[[{self.e[0][0]}, {self.e[0][1]}], [{self.e[1][0]}, {self.e[1][1]}]]"


def pauli(i: int) -> Mat2:
    """Standard Pauli matrix, i in {1, 2, 3}."""
    if i == 1:
        return Mat2.of([[0, 1], [1, 0]])
    if i == 2:
        return Mat2.of([[0, ExactComplex(0, -1)], [ExactComplex(0, 1), 0]])
    if i == 3:
        return Mat2.of([[1, 0], [0, -1]])
    raise IndexError(f"Pauli index must be 1, 2 or 3, got {i}")


def gamma(mu: int, rep: Union[Representation, int]) -> Mat2:
    """Gamma matrix for spacetime index mu in {0, 1, 2}.

    gamma^0 = sigma_3, gamma^1 = sigma_3 sigma_1, gamma^2 = s sigma_3 sigma_2.
    """
    s = as_rep(rep).s
    if mu == 0:
        return pauli(3)
    if mu == 1:
        return pauli(3) @ pauli(1)
    if mu == 2:
        return (pauli(3) @ pauli(2)).scale(s)
    raise IndexError(f"gamma index must be 0, 1 or 2, got {mu}")


def gammas(rep: Union[Representation, int]) -> tuple:
    return tuple(gamma(mu, rep) for mu in range(3))


def commutator(a: Mat2, b: Mat2) -> Mat2:
    return a @ b - b @ a


def anticommutator(a: Mat2, b: Mat2) -> Mat2:
    return a @ b + b @ a


@dataclass(frozen=True)
class PauliDecomposition:
    """Coefficients of M = c_I I + c_1 s1 + c_2 s2 + c_3 s3."""

    c_I: ExactComplex
    c_1: ExactComplex
    c_2: ExactComplex
    c_3: ExactComplex

    def coefficients(self) -> tuple:
        return (self.c_I, self.c_1, self.c_2, self.c_3)

    def recompose(self) -> Mat2:
        m = Mat2.ident().scale(self.c_I)
        for c, i in ((self.c_1, 1), (self.c_2, 2), (self.c_3, 3)):
            m = m + pauli(i).scale(c)
        return m


_HALF = Fraction(1, 2)


def decompose(m: Mat2) -> PauliDecomposition:
    """Exact Pauli-basis coefficients, c_i = tr(sigma_i M)/2 and c_I = tr(M)/2."""
    cs = [m.trace() * _HALF]
    for i in (1, 2, 3):
        cs.append((pauli(i) @ m).trace() * _HALF)
    return PauliDecomposition(*cs)


def _pivot_row(rows, r0, col):
    for r in range(r0, len(rows)):
        if not rows[r][col].is_zero():
            return r
    return None


def _row_reduce(rows: list) -> tuple:
    """In-place Gauss-Jordan over ExactComplex; returns (rank, pivot_cols)."""
    if not rows:
        return 0, []
    ncols = len(rows[0])
    rank = 0
    pivots = []
    for col in range(ncols):
        r = _pivot_row(rows, rank, col)
        if r is None:
            continue
        rows[rank], rows[r] = rows[r], rows[rank]
        inv = ONE / rows[rank][col]
        rows[rank] = [inv * x for x in rows[rank]]
        for rr in range(len(rows)):
            if rr != rank and not rows[rr][col].is_zero():
                f = rows[rr][col]
                rows[rr] = [rows[rr][j] - f * rows[rank][j] for j in range(ncols)]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rank, pivots


def exact_rank(rows: Iterable[Sequence[ExactComplex]]) -> int:
    work = [list(r) for r in rows]
    rank, _ = _row_reduce(work)
    return rank


def exact_nullspace(rows: Iterable[Sequence[ExactComplex]]) -> list:
    """Basis of the right nullspace of an exact matrix, as coefficient lists."""
    work = [list(r) for r in rows]
    if not work:
        return []
    ncols = len(work[0])
    rank, pivots = _row_reduce(work)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -work[r][fc]
        basis.append(vec)
    return basis


_PAULI_BASIS = None


def pauli_basis() -> tuple:
    """(I, sigma_1, sigma_2, sigma_3) - a basis of all 2x2 complex matrices."""
    global _PAULI_BASIS
    if _PAULI_BASIS is None:
        _PAULI_BASIS = (Mat2.ident(), pauli(1), pauli(2), pauli(3))
    return _PAULI_BASIS


def span_dimension(mats: Sequence[Mat2]) -> int:
    """Dimension of the complex span of the given matrices, by exact rank."""
    rows = [list(decompose(m).coefficients()) for m in mats]
    return exact_rank(rows)


def anticommutant(mats: Sequence[Mat2]) -> list:
    """Exact basis of {X : {X, M} = 0 for every M in mats}.

    Each matrix condition contributes four scalar equations on the four
    Pauli coefficients of X; the stacked system is row-reduced exactly.
    An empty input imposes no condition, so the whole 4-dimensional space
    comes back.
    """
    basis = pauli_basis()
    rows = []
    for m in mats:
        cols = [decompose(anticommutator(b, m)).coefficients() for b in basis]
        for comp in range(4):
            rows.append([cols[j][comp] for j in range(4)])
    if not rows:
        return list(basis)
    null = exact_nullspace(rows)
    out = []
    for coeffs in null:
        acc = Mat2.zero()
        for c, b in zip(coeffs, basis):
            acc = acc + b.scale(c)
        out.append(acc)
    return out
