import asyncio
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from configuration.configuration import Configuration as Config, logger
from models.errors import BadParams, MalformedInput
from models.models import (
    Certificate,
    ComplexRecord,
    HomologyReport,
    InspectReport,
    LefschetzReport,
    ProbeReport,
    RunConfig,
    SuiteSummary,
)
from services.complex import (
    SimplicialComplex,
    build_from_facets,
    fh_vectors,
    is_homology_ball,
    is_homology_sphere,
    orient,
    reduced_betti,
)
from services.base_experiment import basis_options
from services.corpus import generate
from services.experiments.anisotropy import aniso_char2_certificate, aniso_random_probe, verify_certificate
from services.experiments.lefschetz import lefschetz_check
from services.lsop import LsopMatrix, normalized_lsop
from services.moves import BistellarMove, apply_move, random_walk, reduce_to_boundary_simplex, valid_moves
from services.reduction import (
    PsiContext,
    basis_error_bound_log2,
    face_monomial_span,
    make_monomial,
    pairing_matrix,
    select_basis,
)
from services import polytext
from services.suite_orchestrator import SuiteOrchestrator, corpus_tasks, reproduce_tasks


def complex_from_record(data: Dict[str, Any]) -> SimplicialComplex:
    try:
        record = ComplexRecord.model_validate(data)
    except ValidationError as e:
        raise MalformedInput(f"Not a complex record: {e.error_count()} problem(s), first: {e.errors()[0]['msg']}") from e
    return build_from_facets(record.m, record.facets)


def complex_to_record(K: SimplicialComplex) -> ComplexRecord:
    return ComplexRecord(**K.to_dict())


class ToolkitService:
    """
    Main service interface of the face-ring toolkit.
    Every CLI command goes through one method here.
    """

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()

        if not self.config.validate():
            raise ValueError("Invalid configuration. Please check your environment variables.")
        self.config.apply_logging()

        logger.debug("✅ ToolkitService initialized")

    def run_config(self) -> RunConfig:
        return RunConfig(
            seed=self.config.seed,
            char=self.config.characteristic,
            field_bits=self.config.field_bits,
            trials=self.config.trials,
            budget=self.config.budget,
            format=self.config.output_format,
        )

    # --- complexes -------------------------------------------------------
    def generate(self, kind: str, params: Sequence[int], seed: Optional[int] = None) -> ComplexRecord:
        return complex_to_record(generate(kind, list(params), self.config.seed if seed is None else seed))

    def inspect(self, K: SimplicialComplex) -> InspectReport:
        fh = fh_vectors(K)
        return InspectReport(complex=K.hash, m=K.m, vertices=len(K.vertices), d=K.dim + 1, pure=K.is_pure,
                             f=list(fh.f), h=list(fh.h))

    def homology(self, K: SimplicialComplex, characteristic: Optional[int] = None) -> HomologyReport:
        p = self.config.characteristic if characteristic is None else characteristic
        betti = reduced_betti(K, p)
        return HomologyReport(
            complex=K.hash,
            char=p,
            reduced_betti=[betti[i] for i in sorted(betti)],
            homology_sphere=is_homology_sphere(K, p),
            homology_ball=is_homology_ball(K, p),
        )

    # --- moves -----------------------------------------------------------
    def list_moves(self, K: SimplicialComplex) -> List[dict]:
        return [mv.to_dict() for mv in valid_moves(K)]

    def walk(self, K: SimplicialComplex, steps: int, seed: Optional[int] = None) -> Dict[str, Any]:
        seed = self.config.seed if seed is None else seed
        final, log = random_walk(K, steps, seed, vertex_cap=self.config.walk_vertex_cap)
        # moves are validated exactly; the seed only chooses the path
        return {"seed": seed, "error_bound_log2": 0, "complex": final.to_dict(), "log": log.to_dict()}

    def reduce(self, K: SimplicialComplex, budget: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        seed = self.config.seed if seed is None else seed
        outcome = reduce_to_boundary_simplex(
            K, self.config.budget if budget is None else budget, seed,
            t_start=self.config.anneal_start, t_end=self.config.anneal_end,
        )
        return {"seed": seed, "error_bound_log2": 0, **outcome.to_dict(), "complex": outcome.final.to_dict()}

    def apply(self, K: SimplicialComplex, sigma: Sequence[int], tau: Sequence[int]) -> ComplexRecord:
        return complex_to_record(apply_move(K, BistellarMove(tuple(sorted(sigma)), tuple(sorted(tau)))))

    # --- reduction queries -------------------------------------------------
    def context(self, K: SimplicialComplex, characteristic: Optional[int] = None,
                lsop: Optional[dict] = None, mode: str = "sphere") -> PsiContext:
        p = self.config.characteristic if characteristic is None else characteristic
        matrix = LsopMatrix.from_dict(lsop, p) if lsop else normalized_lsop(K, p)
        return PsiContext(orient(K), matrix, mode=mode, strategy=self.config.replacement_vector)

    def psi(self, K: SimplicialComplex, exps: Dict[int, int], characteristic: Optional[int] = None,
            lsop: Optional[dict] = None, mode: str = "sphere") -> Dict[str, Any]:
        ctx = self.context(K, characteristic, lsop, mode)
        value = ctx.psi_monomial(make_monomial(exps))
        return {"complex": K.hash, "exps": {str(v): e for v, e in sorted(exps.items())},
                "lsop": ctx.lsop.name, "value": polytext.format_value(value, ctx.field)}

    def basis(self, K: SimplicialComplex, degree: int, must_include: Sequence[Sequence[int]] = (),
              characteristic: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        ctx = self.context(K, characteristic)
        seed = self.config.seed if seed is None else seed
        options = basis_options(self.config)
        basis = select_basis(ctx, degree, seed, must_include=must_include, **options)
        return {"complex": K.hash, "seed": seed, "error_bound_log2": basis_error_bound_log2(ctx, degree, **options),
                **basis.to_dict()}

    def pairing(self, K: SimplicialComplex, degree: int, must_include: Sequence[Sequence[int]] = (),
                characteristic: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        """Pairing matrix between a certified basis in degree i and one in degree d - i."""
        ctx = self.context(K, characteristic)
        seed = self.config.seed if seed is None else seed
        options = basis_options(self.config)
        rows = select_basis(ctx, degree, seed, must_include=must_include, **options).faces
        cols = select_basis(ctx, ctx.d - degree, seed, **options).faces
        matrix = pairing_matrix(ctx, degree, rows, cols)
        # either search may miss; union bound
        bound = max(basis_error_bound_log2(ctx, degree, **options), basis_error_bound_log2(ctx, ctx.d - degree, **options))
        return {"complex": K.hash, "seed": seed, "error_bound_log2": min(0, bound + 1),
                **matrix.to_dict(), "rank": matrix.rank()}

    def faces(self, K: SimplicialComplex, degree: int) -> List[List[int]]:
        return [list(f) for f in face_monomial_span(K, degree)]

    # --- certify -----------------------------------------------------------
    def certificate(self, K: SimplicialComplex, characteristic: Optional[int] = None,
                    seed: Optional[int] = None) -> Certificate:
        p = self.config.characteristic if characteristic is None else characteristic
        return aniso_char2_certificate(K, self.config.seed if seed is None else seed, self.config, p)

    def verify(self, K: SimplicialComplex, certificate: Dict[str, Any]) -> bool:
        return verify_certificate(K, Certificate.model_validate(certificate), self.config)

    def probe(self, K: SimplicialComplex, characteristic: Optional[int] = None, trials: Optional[int] = None,
              seed: Optional[int] = None, lsop: Optional[dict] = None) -> ProbeReport:
        p = self.config.characteristic if characteristic is None else characteristic
        matrix = LsopMatrix.from_dict(lsop, p) if lsop else None
        return aniso_random_probe(K, p, self.config.trials if trials is None else trials,
                                  self.config.seed if seed is None else seed, self.config, matrix)

    def lefschetz(self, K: SimplicialComplex, characteristic: Optional[int] = None, seed: Optional[int] = None,
                  points: int = 1) -> LefschetzReport:
        p = self.config.characteristic if characteristic is None else characteristic
        return lefschetz_check(K, self.config.seed if seed is None else seed, p, self.config, points)

    # --- suites ------------------------------------------------------------
    def reproduce(self, suite: str, seed: Optional[int] = None) -> SuiteSummary:
        try:
            tasks = reproduce_tasks(suite, self.config.seed if seed is None else seed)
        except ValueError as e:
            raise BadParams(str(e)) from e
        return asyncio.run(SuiteOrchestrator(self.config).run(tasks))

    def corpus_run(self, seed: Optional[int] = None, stacked_count: int = 10) -> SuiteSummary:
        tasks = corpus_tasks(self.config.seed if seed is None else seed, stacked_count)
        logger.info(f"🚀 Corpus run with {len(tasks)} tasks")
        return asyncio.run(SuiteOrchestrator(self.config).run(tasks))
