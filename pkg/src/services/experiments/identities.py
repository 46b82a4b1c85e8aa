"""Displayed identities of the canonical function, checked as exact rational-function equalities."""
from itertools import combinations
from typing import Any, List, Optional, Tuple

from configuration.configuration import Configuration as Config, logger
from models.models import IdentityReport, IdentityResult
from services import polytext
from services.algebra import A
from services.base_experiment import BaseExperiment
from services.complex import SimplicialComplex, orient
from services.corpus import boundary_simplex, cross_polytope, cycle, move_fixture
from services.experiments.diffop import diffop_experiment
from services.lsop import normalized_lsop
from services.moves import BistellarMove, apply_move
from services.oracle import oracle_functional
from services.reduction import PsiContext, face_monomial, generator_difference, is_zero
from utils.utils import make_rng

FACET_FIXTURES = {
    "boundary-simplex-3": lambda: boundary_simplex(3),
    "boundary-simplex-4": lambda: boundary_simplex(4),
    "octahedron": lambda: cross_polytope(3),
}


def _sign_of(value, expected) -> Optional[int]:
    if not value - expected:
        return 1
    if not value + expected:
        return -1
    return None


def facet_identities(name: str, K: SimplicialComplex, seed: int, config: Config) -> List[IdentityResult]:
    """Ψ(x_F) = s(F)/det M(F), the generator relation across facet pairs, and agreement with the oracle."""
    oriented = orient(K)
    lsop = normalized_lsop(K, 0)
    ctx = PsiContext(oriented, lsop, check=False)
    facets = K.sorted_facets
    normalized = all(
        not (ctx.psi_monomial(face_monomial(F)) - ctx.field.element(oriented.sign[F]) / lsop.minor(F))
        for F in facets
    )
    generators = all(not ctx.psi_element(generator_difference(ctx, F, G)) for F, G in combinations(facets, 2))

    target = ctx.witness_field(config.field_bits, config.witness_prime)
    point, spec = ctx.random_specialization(make_rng(seed, 401), target)
    oracle = oracle_functional(K, spec.lsop, oriented, max_vertices=config.oracle_max_vertices)
    agree = all(spec.psi_monomial(mono) == value for mono, value in oracle.items())
    return [
        IdentityResult(name=f"facet-normalization:{name}", passed=normalized, detail=f"{len(facets)} facets"),
        IdentityResult(name=f"generator-relation:{name}", passed=generators,
                       detail=f"{len(facets) * (len(facets) - 1) // 2} pairs"),
        IdentityResult(name=f"oracle-agreement:{name}", passed=agree, detail=f"{len(oracle)} monomials over {target!r}"),
    ]


def zero_move_fixture(d: int) -> Tuple[SimplicialComplex, int]:
    """A 0-move on a small (d-1)-sphere: the new vertex m subdivides the facet [d]."""
    if d == 2:
        K = cycle(4)
    else:
        K = boundary_simplex(d)
    m = K.m + 1
    return apply_move(K, BistellarMove(tuple(range(1, d + 1)), (m,))), m


def zero_move_identity(d: int) -> IdentityResult:
    """After a 0-move, x_{σ₁}² for σ₁ = [n-1] ∪ {m} has Ψ = ±∏_{i<n} a[i][m] / ∏_{i=n}^{d} a[i][m].

    Even d also checks x_{σ₁}² = -(∏_{i<n} a[i][m] / ∏_{i=n}^{d-1} a[i][m])·x_{[d-1] ∪ m}; odd d
    multiplies by x_m first.
    """
    K, m = zero_move_fixture(d)
    ctx = PsiContext(orient(K), normalized_lsop(K, 0, pin=range(1, d + 1), require_facet=False), check=False)
    field = ctx.field
    n = d // 2
    sigma = tuple(range(1, n)) + (m,)
    num = field.one
    for i in range(1, n):
        num = num * field.var(A(i, m))
    den = field.one
    for i in range(n, d + 1):
        den = den * field.var(A(i, m))
    expected = num / den

    square = face_monomial(sigma, 2)
    if d % 2:
        value = ctx.psi_product(square, ((m, 1),))
        relation = True
    else:
        value = ctx.psi_monomial(square)
        partner = tuple(range(1, d)) + (m,)
        coefficient = -(num / (den / field.var(A(d, m))))
        relation = is_zero(ctx, ctx.face_element(sigma, 2) - ctx.face_element(partner).scale(coefficient))
    sign = _sign_of(value, expected)
    return IdentityResult(
        name=f"zero-move:d={d}",
        passed=sign is not None and relation,
        sign=sign,
        detail=polytext.format_ratfunc(value, field),
    )


def structured_move_identities(seed: int, config: Config) -> List[IdentityResult]:
    delta, move = move_fixture()
    report = diffop_experiment(delta, 2, 1, move, seed, config)
    return [
        IdentityResult(name="structured-move:top", passed=report.values["top"] == "1", sign=1,
                       detail=report.values["top"]),
        IdentityResult(name="structured-move:square", passed=report.fact_c, detail=report.values["coefficient"]),
    ]


def identity_suite(seed: int = 0, config: Optional[Config] = None) -> IdentityReport:
    config = config or Config()
    report = IdentityReport()
    for name, build in FACET_FIXTURES.items():
        report.results.extend(facet_identities(name, build(), seed, config))
    for d in (2, 3, 4):
        report.results.append(zero_move_identity(d))
    report.results.extend(structured_move_identities(seed, config))
    for result in report.results:
        (logger.info if result.passed else logger.error)(f"{'✅' if result.passed else '❌'} {result.name}")
    return report


class IdentityExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("IdentityExperiment", config)

    def run(self, seed: int = 0, **_: Any):
        return identity_suite(seed, self.config)
