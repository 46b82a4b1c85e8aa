"""Hard Lefschetz ranks at random specializations."""
from typing import Any, List, Optional

from configuration.configuration import Configuration as Config, logger
from models.errors import DenominatorVanishes, WitnessSearchFailed
from models.models import LefschetzReport
from services.algebra import point_to_dict
from services.base_experiment import BaseExperiment, basis_options, sphere_context
from services.complex import SimplicialComplex, fh_vectors
from services.linalg import miss_bound_log2
from services.reduction import PsiContext, RingElement, psi_degree_bound, select_basis
from utils.utils import make_rng


def lefschetz_ranks(ctx: PsiContext, weights: dict, seed: int, config: Config) -> List[int]:
    """Ranks of [Ψ(ω^{d-2i} μ_a μ_b)] for i = 0..⌊d/2⌋ on a specialized context."""
    d = ctx.d
    omega = RingElement.linear(ctx.complex, ctx.field, weights)
    ranks = []
    for i in range(d // 2 + 1):
        mu = select_basis(ctx, i, seed, **basis_options(config)).faces
        lifted = [omega.power(d - 2 * i) * ctx.face_element(f) for f in mu]
        rows = [[ctx.psi_element(a * ctx.face_element(g)) for g in mu] for a in lifted]
        ranks.append(ctx.field.rank(rows))
    return ranks


def lefschetz_error_bound_log2(ctx: PsiContext, h: List[int], points: int, spare: int, target) -> int:
    """log2 bound on fewer than ``points`` full-rank draws among ``points + spare``.

    One draw misses only on the zero set of the product, over the degrees i, of the
    basis minor, the Lefschetz determinant and their denominators.
    """
    if not ctx.field.is_symbolic:
        return 0
    step = psi_degree_bound(ctx) + ctx.d
    degree = sum((2 * h[i] + 2) * step for i in range(ctx.d // 2 + 1))
    return miss_bound_log2(degree, target.order, points + spare, spare + 1)


def lefschetz_check(
        K: SimplicialComplex,
        seed: int = 0,
        characteristic: int = 2,
        config: Optional[Config] = None,
        points: int = 1,
) -> LefschetzReport:
    """Hard Lefschetz for a random ω at ``points`` random specializations.

    A full rank at a specialization is exact evidence for the generic map; the
    verdict is "holds" only when every requested point gave full ranks.
    """
    config = config or Config()
    ctx = sphere_context(K, characteristic, config)
    h = fh_vectors(K).h
    expected = list(h[: ctx.d // 2 + 1])
    report = LefschetzReport(complex=K.hash, char=characteristic, seed=seed, expected=expected,
                             ranks=[0] * len(expected))
    target = ctx.witness_field(config.field_bits, config.witness_prime)
    report.error_bound_log2 = lefschetz_error_bound_log2(ctx, h, points, config.max_witness_attempts, target)
    full = 0
    for attempt in range(points + config.max_witness_attempts):
        if full == points:
            break
        rng = make_rng(seed, 307, attempt)
        weights = {v: target.random_element(rng) for v in K.vertices}
        try:
            point, spec = ctx.random_specialization(rng, target)
            ranks = lefschetz_ranks(spec, weights, seed + attempt, config)
        except (DenominatorVanishes, WitnessSearchFailed) as e:
            logger.debug(f"⚠️ Lefschetz attempt {attempt} skipped: {e}")
            continue
        report.ranks = [max(r, s) for r, s in zip(report.ranks, ranks)]
        if ranks != expected:
            logger.debug(f"🔍 Ranks {ranks} below {expected} at attempt {attempt}")
            continue
        if full == 0:
            report.omega = {
                "field": repr(target),
                "w": {str(v): target.to_int(x) for v, x in weights.items()},
                "point": point_to_dict(point, target),
            }
        full += 1
    report.points = full
    report.verdict = "holds" if full == points else "inconclusive"
    log = logger.info if report.verdict == "holds" else logger.warning
    log(f"{'✅' if report.verdict == 'holds' else '⚠️'} Lefschetz {report.verdict}: ranks {report.ranks}, "
        f"{full}/{points} full-rank points")
    return report


class LefschetzExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("LefschetzExperiment", config)

    def run(self, complex: SimplicialComplex, seed: int = 0, characteristic: int = 2, points: int = 1, **_: Any):
        return lefschetz_check(complex, seed, characteristic, self.config, points)
