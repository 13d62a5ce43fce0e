"""Machine verification of the planar Dirac algebra claims.

Each check returns an AlgebraReport whose residual is an exact object
(a Mat2, a dimension, or a scalar); `passed` is true only when the
residual is exactly what the algebra dictates. The full suite of twelve
checks is what the `verify-algebra` CLI command runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import (
    ExactComplex,
    Mat2,
    METRIC_DIAG,
    Representation,
    REP_MINUS,
    REP_PLUS,
    anticommutant,
    anticommutator,
    as_rep,
    decompose,
    gamma,
    gammas,
    pauli,
    span_dimension,
)


@dataclass(frozen=True)
class AlgebraReport:
    check_name: str
    passed: bool
    residual: object  # Mat2, int, ExactComplex or tuple of those
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "check": self.check_name,
            "passed": self.passed,
            "residual": _residual_json(self.residual),
            "detail": self.detail,
        }


def _residual_json(res):
    if isinstance(res, Mat2):
        return [[_pair(x) for x in row] for row in res.e]
    if isinstance(res, ExactComplex):
        return _pair(res)
    if isinstance(res, (tuple, list)):
        return [_residual_json(r) for r in res]
    return res


def _pair(x: ExactComplex):
    return [float(x.re), float(x.im)]


def _gamma_set(rep: Representation, override_gamma1: Optional[Mat2]) -> tuple:
    g = list(gammas(rep))
    if override_gamma1 is not None:
        g[1] = override_gamma1
    return tuple(g)


def check_clifford(
    rep: Union[Representation, int], override_gamma1: Optional[Mat2] = None
) -> AlgebraReport:
    """{gamma^mu, gamma^nu} = 2 g^{mu nu} I for all nine index pairs, exactly."""
    rep = as_rep(rep)
    g = _gamma_set(rep, override_gamma1)
    ident = Mat2.ident()
    worst = Mat2.zero()
    bad = []
    for mu in range(3):
        for nu in range(3):
            expected = ident.scale(2 * METRIC_DIAG[mu]) if mu == nu else Mat2.zero()
            res = anticommutator(g[mu], g[nu]) - expected
            if not res.is_zero():
                bad.append((mu, nu))
                worst = res
    passed = not bad
    detail = f"s={rep.s}; all 9 pairs exact" if passed else f"s={rep.s}; violated at (mu,nu) in {bad}"
    return AlgebraReport("clifford_algebra", passed, worst, detail)


def check_basis_completeness(rep: Union[Representation, int]) -> AlgebraReport:
    """span{I, gamma^0, gamma^1, gamma^2} has complex dimension exactly 4."""
    rep = as_rep(rep)
    dim = span_dimension([Mat2.ident(), *gammas(rep)])
    return AlgebraReport(
        "basis_completeness",
        dim == 4,
        dim,
        f"s={rep.s}; dim span{{I, gamma^mu}} = {dim}, expected 4",
    )


def check_sigma_identity() -> AlgebraReport:
    """sigma_i sigma_j = delta_ij I + i sum_k eps_ijk sigma_k, all nine pairs."""
    eps = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1, (2, 1, 3): -1, (3, 2, 1): -1, (1, 3, 2): -1}
    worst = Mat2.zero()
    bad = []
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            rhs = Mat2.ident().scale(1 if i == j else 0)
            for k in (1, 2, 3):
                e = eps.get((i, j, k), 0)
                if e:
                    rhs = rhs + pauli(k).scale(ExactComplex(0, e))
            res = pauli(i) @ pauli(j) - rhs
            if not res.is_zero():
                bad.append((i, j))
                worst = res
    passed = not bad
    return AlgebraReport(
        "sigma_product_identity",
        passed,
        worst,
        "all 9 pairs exact" if passed else f"violated at (i,j) in {bad}",
    )


def vector_rewrite_residual(
    a1, a2, rep: Union[Representation, int]
) -> Mat2:
    """Residual of sigma.A = i s sigma.(sigma_3 a) with a = (A^2, -A^1).

    Both sides use the planar convention sigma = (sigma_1, s sigma_2);
    the residual must be exactly zero for every real (A^1, A^2).
    """
    s = as_rep(rep).s
    A1, A2 = ExactComplex(Fraction(a1)), ExactComplex(Fraction(a2))
    lhs = pauli(1).scale(A1) + pauli(2).scale(ExactComplex(s) * A2)
    b1, b2 = A2, -A1  # a = (A^2, -A^1)
    sig_s3_a = (pauli(1) @ pauli(3)).scale(b1) + (pauli(2) @ pauli(3)).scale(
        ExactComplex(s) * b2
    )
    rhs = sig_s3_a.scale(ExactComplex(0, s))
    return lhs - rhs


def check_vector_rewrite() -> AlgebraReport:
    samples = [
        (1, 0),
        (0, 1),
        (0, 0),
        (Fraction(3, 7), Fraction(-2, 5)),
        (Fraction(-11, 3), Fraction(13, 9)),
    ]
    worst = Mat2.zero()
    bad = []
    for rep in (REP_PLUS, REP_MINUS):
        for a1, a2 in samples:
            res = vector_rewrite_residual(a1, a2, rep)
            if not res.is_zero():
                bad.append((a1, a2, rep.s))
                worst = res
    passed = not bad
    return AlgebraReport(
        "vector_coupling_rewrite",
        passed,
        worst,
        f"{len(samples)} sample fields, both s" if passed else f"violated at {bad}",
    )


def check_anticommutant_dimension(
    override_gamma1: Optional[Mat2] = None,
) -> AlgebraReport:
    """No fourth matrix anticommutes with all three gamma matrices.

    Computed as the exact nullspace dimension of the stacked linear system
    on Pauli coefficients; zero for both representations.
    """
    dims = []
    for rep in (REP_PLUS, REP_MINUS):
        basis = anticommutant(list(_gamma_set(rep, override_gamma1)))
        dims.append(len(basis))
    passed = dims == [0, 0]
    return AlgebraReport(
        "anticommutant_empty",
        passed,
        tuple(dims),
        f"dim anticommutant(gamma set) = {dims[0]} (s=+1), {dims[1]} (s=-1); expected 0, 0",
    )


def chirality_residuals(
    rep: Union[Representation, int], candidate: Optional[Mat2] = None
) -> tuple:
    """R^mu = P_R gamma^mu - gamma^mu P_L for the projector pair built from
    a chirality candidate (default sigma_1). All three vanish iff the
    candidate anticommutes with every gamma^mu."""
    rep = as_rep(rep)
    g5 = candidate if candidate is not None else pauli(1)
    ident = Mat2.ident()
    half = Fraction(1, 2)
    p_left = (ident - g5).scale(half)
    p_right = (ident + g5).scale(half)
    return tuple(p_right @ gamma(mu, rep) - gamma(mu, rep) @ p_left for mu in range(3))


def check_chirality(rep: Union[Representation, int]) -> AlgebraReport:
    """The projector identity P_R gamma^mu = gamma^mu P_L fails at mu = 2.

    For the candidate sigma_1 the residuals are exactly (0, 0, -i s I):
    sigma_1 anticommutes with gamma^0 and gamma^1 but commutes with
    gamma^2, which is proportional to sigma_1 itself.
    """
    rep = as_rep(rep)
    r0, r1, r2 = chirality_residuals(rep)
    expected_r2 = Mat2.ident().scale(ExactComplex(0, -rep.s))
    passed = r0.is_zero() and r1.is_zero() and (r2 - expected_r2).is_zero()
    return AlgebraReport(
        "chirality_projector_defect",
        passed,
        (r0, r1, r2),
        f"s={rep.s}; R0=R1=0 and R2=-i s I confirmed: identity fails at mu=2"
        if passed
        else f"s={rep.s}; unexpected residual pattern",
    )


def representation_invariant(rep: Union[Representation, int]) -> ExactComplex:
    """tr(gamma^0 gamma^1 gamma^2), invariant under similarity transforms."""
    g = gammas(as_rep(rep))
    return (g[0] @ g[1] @ g[2]).trace()


def check_representation_invariant(rep: Union[Representation, int]) -> AlgebraReport:
    rep = as_rep(rep)
    tr = representation_invariant(rep)
    expected = ExactComplex(0, -2 * rep.s)
    passed = (tr - expected).is_zero()
    return AlgebraReport(
        "representation_invariant",
        passed,
        tr,
        f"s={rep.s}; tr(g0 g1 g2) = {tr}, expected -2is = {expected}; "
        "distinct values for the two s certify nonequivalence",
    )


_SIMILARITY_SAMPLES = [
    Mat2.of([[1, 2], [0, 1]]),
    Mat2.of([[ExactComplex(2, 1), 1], [ExactComplex(0, -3), 1]]),
    Mat2.of([[Fraction(1, 2), Fraction(-3, 4)], [1, 5]]),
    Mat2.of([[0, ExactComplex(1, 1)], [ExactComplex(2, -1), Fraction(7, 3)]]),
]


def check_similarity_stability(samples: Sequence[Mat2] = _SIMILARITY_SAMPLES) -> AlgebraReport:
    """tr(U g0 g1 g2 U^-1) equals tr(g0 g1 g2) for exact invertible U.

    A similarity invariant taking different values in the two
    representations is a complete nonequivalence proof; this check pins
    down that the quantity really is invariant.
    """
    bad = []
    worst = ExactComplex(0)
    for rep in (REP_PLUS, REP_MINUS):
        base = representation_invariant(rep)
        g = gammas(rep)
        for u in samples:
            uinv = u.inverse()
            prod = (u @ g[0] @ uinv) @ (u @ g[1] @ uinv) @ (u @ g[2] @ uinv)
            res = prod.trace() - base
            if not res.is_zero():
                bad.append(rep.s)
                worst = res
    passed = not bad
    return AlgebraReport(
        "invariant_similarity_stability",
        passed,
        worst,
        f"{len(_SIMILARITY_SAMPLES)} exact similarity transforms, both s",
    )


def run_full_suite(override_gamma1: Optional[Mat2] = None) -> list:
    """The twelve-check verification suite.

    `override_gamma1` deliberately corrupts gamma^1 in the Clifford and
    anticommutant checks; it exists as a negative-control hook.
    """
    return [
        check_clifford(REP_PLUS, override_gamma1),
        check_clifford(REP_MINUS, override_gamma1),
        check_basis_completeness(REP_PLUS),
        check_basis_completeness(REP_MINUS),
        check_sigma_identity(),
        check_vector_rewrite(),
        check_anticommutant_dimension(override_gamma1),
        check_chirality(REP_PLUS),
        check_chirality(REP_MINUS),
        check_representation_invariant(REP_PLUS),
        check_representation_invariant(REP_MINUS),
        check_similarity_stability(),
    ]
