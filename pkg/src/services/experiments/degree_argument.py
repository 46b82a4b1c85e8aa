"""
Degree and leading-coefficient bookkeeping on cones over even-dimensional spheres.

For Δ of dimension 2n, K = {v}*Δ carries an l.s.o.p. with apex column e_1 and
λ_u = (a[1][u], 1, 0, …) at the least vertex u of Δ. Then, as functions of
a[1][u], Ψ_K(x_{σ_i} x_{σ_j}) has degree 1 with leading coefficient
ε·Ψ_{L₁}(x_{ρ_i} x_{ρ_j}) (σ_i = v ∪ ρ_i, ρ a basis of L₁ = lk_u Δ), while the
products involving τ_j = v ∪ π_j (π_j ∪ u ∉ Δ) do not grow in a[1][u].
"""
from itertools import combinations_with_replacement, product
from typing import Any, List, Optional, Sequence

from configuration.configuration import Configuration as Config, logger
from models.errors import BadParameters, NotHomologySphere
from models.models import DegreeArgumentReport, DegreeEntry
from services.algebra import A, C, NEG_INFINITY, degree_lc
from services.base_experiment import BaseExperiment, basis_options
from services.complex import Face, SimplicialComplex, cone, is_homology_sphere, link, orient, suspension
from services.lsop import LsopMatrix, cone_lsop, generic_lsop, unit_column
from services.oracle import face_supported_monomials
from services.reduction import PsiContext, face_monomial, monomial_product, select_basis

CONE_CHECK_LIMIT = 12


def _degree(value) -> Optional[int]:
    return None if value == NEG_INFINITY else int(value)


def _restricted_context(K_ctx: PsiContext, L: SimplicialComplex, rows: Sequence[int]) -> PsiContext:
    """Ψ on L with the rows ``rows`` of K's l.s.o.p., in K's coefficient field."""
    theta = K_ctx.lsop.restrict(L.vertices, rows, name="restricted")
    replacement = tuple(K_ctx.field.var(C(k)) for k in range(1, len(rows) + 1))
    return PsiContext(orient(L), theta, replacement=replacement, check=False)


def _matching_sign(pairs) -> Optional[int]:
    """One ε ∈ {±1} with a = ε·b for every (a, b) pair with b ≠ 0, or None."""
    sign = None
    for a, b in pairs:
        if not b:
            continue
        if sign is not None:
            if a - sign * b:
                return None
            continue
        # in characteristic 2 both tests agree and +1 is kept
        sign = 1 if not a - b else -1 if not a + b else None
        if sign is None:
            return None
    return sign or 1


def cone_isomorphism_check(
        delta: SimplicialComplex,
        characteristic: int = 2,
        variant: str = "apex",
        limit: int = CONE_CHECK_LIMIT,
) -> bool:
    """Ψ_K(x_v·x^e) = ε·Ψ_Δ(x^e) with Θ₀ = rows 2..d of K's l.s.o.p. on Δ.

    ``apex``: K = {v}*Δ as a ball. ``suspension``: K = {v, w}*Δ as a sphere,
    whose star of v is the same cone.
    """
    if variant == "apex":
        K, v = cone(delta)
        lsop = cone_lsop(K, "apex", apex=v, characteristic=characteristic)
        mode = "ball"
    elif variant == "suspension":
        K, (v, w) = suspension(delta)
        lsop = cone_lsop(K, "suspension", apex=(v, w), characteristic=characteristic)
        mode = "sphere"
    else:
        raise BadParameters(f"Unknown cone variant: {variant}")
    K_ctx = PsiContext(orient(K), lsop, mode=mode, check=False)
    d_ctx = _restricted_context(K_ctx, delta, range(2, K_ctx.d + 1))
    pairs = []
    for mono in face_supported_monomials(delta, d_ctx.d)[:limit]:
        pairs.append((K_ctx.psi_monomial(monomial_product(((v, 1),), mono)), d_ctx.psi_monomial(mono)))
    sign = _matching_sign(pairs)
    logger.info(f"{'✅' if sign else '❌'} Cone isomorphism ({variant}) on {len(pairs)} monomials, sign {sign}")
    return sign is not None


def degree_argument_lsop(K: SimplicialComplex, v: int, u: int, pinned: Face, characteristic: int = 2) -> LsopMatrix:
    """Generic l.s.o.p. of the cone K with columns e_1 at v, (a[1][u], 1, 0, …) at u and
    e_3..e_d on ``pinned``, a facet of lk_u of the base.
    """
    d = K.dim + 1
    # The fixed d columns form a unipotent block, so every generic l.s.o.p. is a row change
    # away from it. A row change scales Ψ_K and Ψ_{L₁} by one common unit and leaves
    # a[1][u] free; the pinned facet keeps a unit minor in rows 3..d.
    fixed = {v: unit_column(1, d), u: (A(1, u), 1) + (0,) * (d - 2)}
    fixed.update({w: unit_column(k + 3, d) for k, w in enumerate(pinned)})
    return generic_lsop(K, characteristic, fixed=fixed, name="cone-degree", params={"apex": v, "u": u})


def degree_argument_experiment(
        delta: SimplicialComplex,
        seed: int = 0,
        characteristic: int = 2,
        config: Optional[Config] = None,
        cone_check: bool = True,
) -> DegreeArgumentReport:
    config = config or Config()
    if delta.dim % 2:
        raise BadParameters(f"Needs an even-dimensional sphere, got dimension {delta.dim}")
    if not is_homology_sphere(delta, characteristic):
        raise NotHomologySphere(f"Complex is not a homology sphere over characteristic {characteristic}")
    n = delta.dim // 2
    K, v = cone(delta)
    d = K.dim + 1
    u = delta.vertices[0]
    L1 = link(delta, [u]).ambient()
    pinned = L1.sorted_facets[0]
    lsop = degree_argument_lsop(K, v, u, pinned, characteristic)
    ctx = PsiContext(orient(K), lsop, mode="ball", check=False, strategy=config.replacement_vector)
    link_ctx = _restricted_context(ctx, L1, range(3, d + 1))

    rho = select_basis(link_ctx, n, seed, **basis_options(config)).faces
    pi = [f for f in ctx.faces_of_degree(n) if v not in f and tuple(sorted(set(f) | {u})) not in delta.face_set]
    sigmas: List[Face] = [tuple(sorted(r + (v,))) for r in rho]
    taus: List[Face] = [tuple(sorted(p + (v,))) for p in pi]
    variable = A(1, u)

    def psi(f: Face, g: Face):
        return ctx.psi_product(face_monomial(f), face_monomial(g))

    report = DegreeArgumentReport(complex=delta.hash, n=n, pinned=list(pinned))
    leading_pairs = []
    for i, j in combinations_with_replacement(range(len(sigmas)), 2):
        deg, lead = degree_lc(psi(sigmas[i], sigmas[j]), variable, ctx.field)
        expected = link_ctx.psi_product(face_monomial(rho[i]), face_monomial(rho[j]))
        entry = DegreeEntry(kind="sigma-sigma", rows=list(sigmas[i]), cols=list(sigmas[j]), degree=_degree(deg))
        if expected:
            leading_pairs.append((lead, expected, entry))
        report.entries.append(entry)
    for i, j in combinations_with_replacement(range(len(taus)), 2):
        deg, _ = degree_lc(psi(taus[i], taus[j]), variable, ctx.field)
        report.entries.append(DegreeEntry(kind="tau-tau", rows=list(taus[i]), cols=list(taus[j]), degree=_degree(deg)))
    for i, j in product(range(len(sigmas)), range(len(taus))):
        deg, _ = degree_lc(psi(sigmas[i], taus[j]), variable, ctx.field)
        report.entries.append(DegreeEntry(kind="sigma-tau", rows=list(sigmas[i]), cols=list(taus[j]), degree=_degree(deg)))

    sign = _matching_sign([(lead, expected) for lead, expected, _ in leading_pairs])
    report.sign = sign or 1
    for lead, expected, entry in leading_pairs:
        entry.leading_matches = sign is not None and not (lead - report.sign * expected)
    report.passed = sign is not None and all(_entry_ok(e) for e in report.entries)
    if cone_check:
        report.cone_isomorphism = cone_isomorphism_check(delta, characteristic)
    (logger.info if report.passed else logger.error)(
        f"{'✅' if report.passed else '❌'} Degree argument on {len(report.entries)} entries (n={n}, sign {report.sign})")
    return report


def _entry_ok(entry: DegreeEntry) -> bool:
    if entry.leading_matches is not None:
        return entry.degree == 1 and entry.leading_matches
    return entry.degree is None or entry.degree <= 0


class DegreeArgumentExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("DegreeArgumentExperiment", config)

    def run(self, complex: SimplicialComplex, seed: int = 0, characteristic: int = 2, **_: Any):
        return degree_argument_experiment(complex, seed, characteristic, self.config)

    def cone_isomorphism_check(self, complex: SimplicialComplex, characteristic: int = 2, variant: str = "apex") -> bool:
        return cone_isomorphism_check(complex, characteristic, variant)
