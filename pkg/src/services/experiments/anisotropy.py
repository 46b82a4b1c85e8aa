"""
Generic anisotropy: exact certificates in characteristic 2 and random probes elsewhere.

In characteristic 2, α ↦ Ψ(α²·ν) is additive and Ψ((Σ l_i μ_i)²·ν_k) = Σ l_i² c_{i,k}
with c_{i,k} = Ψ(μ_i² ν_k). Over a common denominator D, write each numerator as
Σ_e m_e P_{i,k,e}²; then an isotropic vector exists iff the rows of the matrix
[P_{i,(k,e)}] are linearly dependent.
"""
import math
from typing import Any, List, Optional, Sequence, Tuple

from configuration.configuration import Configuration as Config, logger
from models.errors import DenominatorVanishes, InvalidLsop, NotHomologySphere, WitnessSearchFailed, WrongCharacteristic
from models.models import Certificate, ProbeReport, Status
from services import polytext
from services.algebra import (
    PolyContext,
    frobenius_decompose,
    point_from_dict,
    point_to_dict,
    specialize,
    total_degree,
)
from services.base_experiment import BaseExperiment, basis_options, sphere_context
from services.complex import Face, SimplicialComplex, is_homology_sphere, make_face, orient
from services.lsop import LsopMatrix, is_lsop, normalized_lsop
from services.reduction import PsiContext, face_monomial, select_basis
from utils.utils import make_rng

CertificateData = Tuple[List[List[Any]], Any, List[Tuple[int, Tuple[int, ...]]], List[List[Any]]]


def middle_degrees(d: int) -> Tuple[int, int]:
    """(n, d - 2n): the degree whose squares are tested and the degree of the multipliers."""
    n = d // 2
    return n, d - 2 * n


def square_coefficients(ctx: PsiContext, basis: Sequence[Face], multipliers: Sequence[Face]) -> List[List[Any]]:
    """c_{i,k} = Ψ(μ_i² ν_k)."""
    return [
        [ctx.psi_product(face_monomial(mu, 2), face_monomial(nu)) for nu in multipliers]
        for mu in basis
    ]


def parity_matrix(ctx: PsiContext, coefficients: List[List[Any]]) -> CertificateData:
    """Rows i, columns (k, parity class e), entries P_{i,k,e}; also returns D and the columns."""
    ring = ctx.field.ring
    D = ring.one
    for row in coefficients:
        for x in row:
            D = D.lcm(x.denom)
    numerators = [[x.numer * D.exquo(x.denom) for x in row] for row in coefficients]
    parts = [[frobenius_decompose(p) for p in row] for row in numerators]
    columns = sorted({(k, e) for row in parts for k, dec in enumerate(row) for e in dec.classes})
    matrix = [[row[k].classes.get(e, ring.zero) for k, e in columns] for row in parts]
    return numerators, D, columns, matrix


def _column_to_dict(column: Tuple[int, Tuple[int, ...]], ctx: PolyContext) -> dict:
    k, e = column
    return {"k": k, "class": [ctx.variables[t].name for t, bit in enumerate(e) if bit]}


def _column_from_dict(data: dict, ctx: PolyContext) -> Tuple[int, Tuple[int, ...]]:
    odd = set(data["class"])
    return int(data["k"]), tuple(1 if v.name in odd else 0 for v in ctx.variables)


def planned_trials(matrix: List[List[Any]], field_bits: int, target_error_log2: int, cap: int) -> Tuple[int, int]:
    """Trials t and the bound log2((D/2^k)^t) on missing a full-rank witness t times.

    D bounds the degree of any maximal minor: rows times the largest entry degree.
    """
    degree = max((total_degree(p) for row in matrix for p in row), default=0)
    bound = max(1, len(matrix) * degree)
    gap = field_bits - math.log2(bound)
    if gap <= 0:
        logger.warning(f"⚠️ Witness field too small for degree bound {bound}; no error guarantee")
        return max(cap, 1), 0
    trials = max(1, math.ceil(-target_error_log2 / gap))
    return trials, math.ceil(-trials * gap)


def _specialized(matrix, point, ctx, target):
    return [[specialize(p, point, ctx, target) for p in row] for row in matrix]


def _exact_kernel_vector(ctx: PsiContext, matrix: List[List[Any]]) -> Optional[List[Any]]:
    """A nonzero l with l·P = 0, or None when the rows are independent."""
    s = len(matrix)
    if not matrix[0]:
        return [ctx.field.one] + [ctx.field.zero] * (s - 1)
    transposed = [[ctx.field.lift(matrix[i][c]) for i in range(s)] for c in range(len(matrix[0]))]
    kernel = ctx.field.kernel(transposed)
    return kernel[0] if kernel else None


def isotropic(coefficients: List[List[Any]], vector: Sequence[Any]) -> bool:
    """Σ l_i² c_{i,k} = 0 for every k."""
    for k in range(len(coefficients[0])):
        total = 0
        for i, l in enumerate(vector):
            total = total + l ** 2 * coefficients[i][k]
        if total:
            return False
    return True


def aniso_char2_certificate(
        K: SimplicialComplex,
        seed: int = 0,
        config: Optional[Config] = None,
        characteristic: int = 2,
) -> Certificate:
    """Exact generic-anisotropy certificate in characteristic 2 for degree ⌊d/2⌋.

    Lower degrees follow from the top one: a nonzero α of lower degree has a
    nonzero product αα' in degree ⌊d/2⌋ by Poincaré duality.
    """
    config = config or Config()
    if not is_homology_sphere(K, characteristic):
        raise NotHomologySphere(f"Complex is not a homology sphere over characteristic {characteristic}")
    if characteristic != 2:
        raise WrongCharacteristic("Exact certificates exist for characteristic 2 only; use the probe")
    ctx = sphere_context(K, 2, config)
    d = ctx.d
    n, rest = middle_degrees(d)
    certificate = Certificate(complex=K.hash, char=2, degree=n, status=Status.INCONCLUSIVE, seed=seed,
                              lsop={"name": ctx.lsop.name, **ctx.lsop.params})
    try:
        basis = select_basis(ctx, n, seed, **basis_options(config)).faces
        multipliers = select_basis(ctx, rest, seed, **basis_options(config)).faces if rest else [()]
    except WitnessSearchFailed as e:
        logger.warning(f"⚠️ Basis search failed: {e}")
        certificate.witness = {"reason": str(e)}
        return certificate
    certificate.basis = [list(f) for f in basis]
    certificate.multipliers = [list(f) for f in multipliers]

    coefficients = square_coefficients(ctx, basis, multipliers)
    _, _, columns, matrix = parity_matrix(ctx, coefficients)
    s = len(basis)
    witness_field = ctx.witness_field(config.field_bits, config.witness_prime)
    trials, bound = planned_trials(matrix, config.field_bits, config.target_error_log2, config.trials)
    certificate.error_bound_log2 = bound
    logger.info(f"🔍 Parity matrix {s}x{len(columns)}; up to {trials} witness trials")

    for t in range(trials):
        rng = make_rng(seed, 101, t)
        point = ctx.field.random_point(rng, witness_field)
        values = _specialized(matrix, point, ctx.field, witness_field)
        if witness_field.rank(values) < s:
            continue
        pivots = witness_field.pivots(values)
        minor = witness_field.det([[row[p] for p in pivots] for row in values])
        certificate.status = Status.ANISOTROPIC
        certificate.witness = {
            "field": repr(witness_field),
            "point": point_to_dict(point, witness_field),
            "columns": [_column_to_dict(columns[p], ctx.field) for p in pivots],
            "minor": witness_field.to_int(minor),
            "trial": t,
        }
        logger.info(f"✅ ANISOTROPIC in degree {n} (witness at trial {t})")
        return certificate

    if not config.exact_fallback:
        logger.warning("⚠️ No witness found and exact fallback disabled")
        return certificate
    logger.info("🔄 No full-rank witness; falling back to exact elimination")
    vector = _exact_kernel_vector(ctx, matrix)
    if vector is None:
        certificate.status = Status.ANISOTROPIC
        certificate.witness = {"exact": True, "rank": s}
        certificate.error_bound_log2 = 0
        return certificate
    if not isotropic(coefficients, vector):
        logger.error("❌ Kernel vector failed re-verification")
        certificate.witness = {"reason": "kernel vector failed re-verification"}
        return certificate
    certificate.status = Status.NOT_ANISOTROPIC
    certificate.witness = {"kernel": [polytext.format_ratfunc(x, ctx.field) for x in vector]}
    certificate.error_bound_log2 = 0
    logger.info(f"✅ NOT_ANISOTROPIC with a verified isotropic vector in degree {n}")
    return certificate


def verify_certificate(K: SimplicialComplex, certificate: Certificate, config: Optional[Config] = None) -> bool:
    """Rebuild the parity matrix from the recorded basis and re-check the witness exactly."""
    config = config or Config()
    if certificate.status == Status.INCONCLUSIVE or certificate.complex != K.hash:
        return False
    ctx = sphere_context(K, 2, config, pin=certificate.lsop.get("pin"))
    basis = [make_face(f) for f in certificate.basis]
    multipliers = [make_face(f) for f in certificate.multipliers]
    coefficients = square_coefficients(ctx, basis, multipliers)
    witness = certificate.witness
    if certificate.status == Status.NOT_ANISOTROPIC:
        vector = [polytext.parse_ratfunc(text, ctx.field) for text in witness["kernel"]]
        return any(vector) and isotropic(coefficients, vector)
    _, _, columns, matrix = parity_matrix(ctx, coefficients)
    if witness.get("exact"):
        return _exact_kernel_vector(ctx, matrix) is None
    target = ctx.witness_field(config.field_bits, config.witness_prime)
    point = point_from_dict(witness["point"], target)
    index = {col: k for k, col in enumerate(columns)}
    chosen = [_column_from_dict(c, ctx.field) for c in witness["columns"]]
    if any(col not in index for col in chosen):
        return False
    values = _specialized([[row[index[col]] for col in chosen] for row in matrix], point, ctx.field, target)
    minor = target.det(values)
    return not target.is_zero(minor) and target.to_int(minor) == witness["minor"]


# ----------------------------------------------------------------------
# Random probe (any characteristic)
# ----------------------------------------------------------------------
def _square_values(ctx: PsiContext, basis: Sequence[Face], multipliers: Sequence[Face], coeffs: Sequence[int]) -> List[Any]:
    alpha = None
    for face, c in zip(basis, coeffs):
        term = ctx.face_element(face).scale(ctx.field.element(c))
        alpha = term if alpha is None else alpha + term
    square = alpha * alpha
    return [ctx.psi_element(square * ctx.face_element(nu)) for nu in multipliers]


def aniso_random_probe(
        K: SimplicialComplex,
        characteristic: int,
        trials: int,
        seed: int = 0,
        config: Optional[Config] = None,
        lsop: Optional[LsopMatrix] = None,
) -> ProbeReport:
    """Search for α with Ψ(α²·ν) = 0 for all ν; a hit is confirmed symbolically."""
    config = config or Config()
    if not is_homology_sphere(K, characteristic):
        raise NotHomologySphere(f"Complex is not a homology sphere over characteristic {characteristic}")
    lsop = lsop or normalized_lsop(K, characteristic)
    if not is_lsop(K, lsop):
        raise InvalidLsop("Probe refused: matrix is not an l.s.o.p.")
    n, rest = middle_degrees(K.dim + 1)
    report = ProbeReport(complex=K.hash, char=characteristic, degree=n, trials=trials, seed=seed,
                         status=Status.INCONCLUSIVE)
    if trials == 0:
        report.message = "no trials requested"
        return report
    ctx = PsiContext(orient(K), lsop, check=False, strategy=config.replacement_vector)
    basis = select_basis(ctx, n, seed, **basis_options(config)).faces
    multipliers = select_basis(ctx, rest, seed, **basis_options(config)).faces if rest else [()]
    witness_field = ctx.witness_field(config.field_bits, config.witness_prime)
    modulus = characteristic or None
    for t in range(trials):
        rng = make_rng(seed, 211, t)
        coeffs = [int(x) for x in rng.integers(-3, 4, size=len(basis))]
        if all((c % modulus if modulus else c) == 0 for c in coeffs):
            coeffs[0] = 1
        try:
            if ctx.field.is_symbolic:
                _, spec = ctx.random_specialization(rng, witness_field)
            else:
                spec = ctx
            values = _square_values(spec, basis, multipliers, coeffs)
        except DenominatorVanishes:
            continue
        if not all(spec.field.is_zero(v) for v in values):
            continue
        exact = _square_values(ctx, basis, multipliers, coeffs)
        if all(ctx.field.is_zero(v) for v in exact):
            report.status = Status.NOT_ANISOTROPIC
            report.counterexample = {
                "basis": [list(f) for f in basis],
                "coefficients": coeffs,
                "trial": t,
            }
            logger.info(f"✅ Isotropic element confirmed at trial {t}")
            return report
    report.message = f"no counterexample in {trials} trials"
    logger.info(f"🔍 Probe finished: {report.message}")
    return report


class AnisotropyExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("AnisotropyExperiment", config)

    def run(self, complex: SimplicialComplex, seed: int = 0, mode: str = "cert",
            characteristic: int = 2, trials: Optional[int] = None, **_: Any):
        if mode == "probe":
            return aniso_random_probe(complex, characteristic, self.config.trials if trials is None else trials,
                                      seed, self.config)
        return aniso_char2_certificate(complex, seed, self.config, characteristic)
