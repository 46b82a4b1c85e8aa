"""Acceptance checks that are not tied to one argument: dimensions, oracle agreement, ball duality, algebra laws."""
from typing import Any, Optional, Sequence

from configuration.configuration import Configuration as Config, logger
from models.errors import DenominatorVanishes, InvalidLsop, NotHomologySphere
from models.models import CheckReport
from services.algebra import (
    B,
    FiniteScalarField,
    PolyContext,
    degree_lc,
    frobenius_decompose,
    partial_derivative,
    point_from_dict,
    witness_field,
)
from services.base_experiment import BaseExperiment, basis_options, sphere_context
from services.complex import SimplicialComplex, cone, fh_vectors, is_homology_sphere, orient
from services.linalg import exact_rank
from services.lsop import cone_lsop
from services.oracle import oracle_functional
from services.reduction import PsiContext, face_monomial_span, pairing_matrix, select_basis
from utils.utils import make_rng


def stanley_dimensions(K: SimplicialComplex, seed: int = 0, characteristic: int = 2,
                       config: Optional[Config] = None) -> CheckReport:
    """|select_basis(i)| = h_i in every degree."""
    config = config or Config()
    ctx = sphere_context(K, characteristic, config)
    h = list(fh_vectors(K).h)
    sizes = [len(select_basis(ctx, i, seed, **basis_options(config)).faces) for i in range(ctx.d + 1)]
    return CheckReport(check="dimensions", complex=K.hash, passed=sizes == h, detail={"h": h, "sizes": sizes})


def ball_duality(K: SimplicialComplex, seed: int = 0, characteristic: int = 2,
                 config: Optional[Config] = None) -> CheckReport:
    """On the cone C over K, pairing k(C)_i against the interior faces of degree d - i has rank h_i(K).

    Ranks are exact at each basis witness point, once for the certified basis
    and once for the whole face span.
    """
    config = config or Config()
    if not is_homology_sphere(K, characteristic):
        raise NotHomologySphere(f"Complex is not a homology sphere over characteristic {characteristic}")
    C, apex = cone(K)
    ctx = PsiContext(orient(C), cone_lsop(C, apex=apex, characteristic=characteristic), mode="ball",
                     check=False, strategy=config.replacement_vector)
    target = ctx.witness_field(config.field_bits, config.witness_prime)
    h = list(fh_vectors(K).h)
    basis_ranks, span_ranks = [], []
    for i in range(ctx.d):
        basis = select_basis(ctx, i, seed, **basis_options(config))
        spec = ctx.specialize(point_from_dict(basis.witness["point"], target), target)
        cols = spec.column_faces(ctx.d - i)
        basis_ranks.append(exact_rank(pairing_matrix(spec, i, basis.faces, cols).entries, spec.field))
        span_ranks.append(exact_rank(pairing_matrix(spec, i, face_monomial_span(C, i), cols).entries, spec.field))
    passed = basis_ranks == h and span_ranks == h
    (logger.info if passed else logger.error)(
        f"{'✅' if passed else '❌'} Ball duality on the cone: ranks {span_ranks}, h {h}")
    return CheckReport(check="duality", complex=K.hash, passed=passed,
                       detail={"h": h, "basis_ranks": basis_ranks, "span_ranks": span_ranks})


def oracle_agreement(
        K: SimplicialComplex,
        seed: int = 0,
        points: int = 20,
        fields: Optional[Sequence[FiniteScalarField]] = None,
        config: Optional[Config] = None,
) -> CheckReport:
    """Lee's formula against the kernel oracle on every top-degree monomial at random points."""
    config = config or Config()
    fields = fields or [witness_field(2, config.field_bits), FiniteScalarField(101)]
    compared, mismatches, skipped = 0, 0, 0
    for target in fields:
        ctx = sphere_context(K, target.characteristic, config)
        for t in range(points):
            try:
                _, spec = ctx.random_specialization(make_rng(seed, 503, target.order, t), target)
                oracle = oracle_functional(K, spec.lsop, ctx.oriented, max_vertices=config.oracle_max_vertices)
                for mono, value in oracle.items():
                    compared += 1
                    if spec.psi_monomial(mono) != value:
                        mismatches += 1
            except (DenominatorVanishes, InvalidLsop):
                skipped += 1
    logger.info(f"🔍 Oracle agreement: {compared} values, {mismatches} mismatches, {skipped} degenerate points")
    return CheckReport(check="oracle", complex=K.hash, passed=mismatches == 0 and compared > 0,
                       detail={"compared": compared, "mismatches": mismatches, "skipped": skipped})


def _random_poly(ctx: PolyContext, rng, terms: int = 6, top: int = 3):
    exps = {}
    for _ in range(int(rng.integers(1, terms + 1))):
        monom = tuple(int(x) for x in rng.integers(0, top + 1, size=len(ctx.variables)))
        exps[monom] = ctx.domain(int(rng.integers(1, max(ctx.characteristic, 2) + 3)))
    return ctx.ring.from_dict(exps)


def _random_ratfunc(ctx: PolyContext, rng):
    den = _random_poly(ctx, rng, terms=2, top=2)
    return ctx.lift(_random_poly(ctx, rng)) / ctx.lift(den or ctx.ring.one)


def _degree_law_holds(ctx: PolyContext, f, g, v) -> bool:
    df, lf = degree_lc(f, v, ctx)
    dg, lg = degree_lc(g, v, ctx)
    ds, ls = degree_lc(f + g, v, ctx)
    dp, lp = degree_lc(f * g, v, ctx)
    top = max(df, dg)
    if not f and not g:
        return not (f + g)
    if ds > top:
        return False
    if df == dg:
        cancelled = not (lf + lg)
        sum_ok = ds < top if cancelled else (ds == top and not (ls - lf - lg))
    else:
        sum_ok = ds == top and not (ls - (lf if df > dg else lg))
    if not f or not g:
        return sum_ok
    return sum_ok and dp == df + dg and not (lp - lf * lg)


def algebra_laws(trials: int = 1000, seed: int = 0) -> CheckReport:
    """Parity round trip, vanishing derivative of squares in characteristic 2, and the degree law."""
    ctx = PolyContext([B(1), B(2), B(3)], 2)
    rng = make_rng(seed, 601)
    failures = {"parity": 0, "square-derivative": 0, "degree-law": 0}
    for _ in range(trials):
        f = _random_poly(ctx, rng)
        if frobenius_decompose(f).reassemble() != f:
            failures["parity"] += 1
        if partial_derivative(f ** 2, B(1), ctx):
            failures["square-derivative"] += 1
        if not _degree_law_holds(ctx, _random_ratfunc(ctx, rng), _random_ratfunc(ctx, rng), B(1)):
            failures["degree-law"] += 1
    passed = not any(failures.values())
    (logger.info if passed else logger.error)(f"{'✅' if passed else '❌'} Algebra laws over {trials} trials: {failures}")
    return CheckReport(check="algebra", passed=passed, detail={"trials": trials, "failures": failures})


class CheckExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("CheckExperiment", config)

    def run(self, check: str, complex: Optional[SimplicialComplex] = None, seed: int = 0,
            characteristic: int = 2, points: int = 20, trials: int = 1000, **_: Any) -> CheckReport:
        if check == "dimensions":
            return stanley_dimensions(complex, seed, characteristic, self.config)
        if check == "oracle":
            return oracle_agreement(complex, seed, points, config=self.config)
        if check == "duality":
            return ball_duality(complex, seed, characteristic, self.config)
        if check == "algebra":
            return algebra_laws(trials, seed)
        raise ValueError(f"Unknown check: {check}")
