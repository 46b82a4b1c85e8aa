"""
Brute-force Ψ without Lee's formula.

The top degree of k[Δ]/(Θ) is cut out directly: Ψ is the functional on the
face-supported degree-d monomials that kills every θ_j·u with u of degree d-1,
normalized by Ψ(x_F) = s(F)/det M(F) on the reference facet.
"""
from itertools import combinations
from typing import Any, Dict, List, Mapping, Optional, Sequence

from configuration.configuration import logger
from models.errors import (
    BadParameters,
    CostGuard,
    InvalidLsop,
    NotHomologySphere,
    SupportNotAFace,
    WrongDegree,
)
from services.complex import OrientedComplex, SimplicialComplex, make_face, orient
from services.lsop import LsopMatrix, is_lsop
from services.reduction import Monomial, face_monomial, make_monomial, monomial_degree, monomial_support


def face_supported_monomials(K: SimplicialComplex, k: int) -> List[Monomial]:
    """All degree-k monomials whose support is a face."""
    if k == 0:
        return [()]
    result = []
    for face in K.faces():
        if not face or len(face) > k:
            continue
        # compositions of k into len(face) positive parts
        for cuts in combinations(range(1, k), len(face) - 1):
            bounds = (0,) + cuts + (k,)
            result.append(tuple((v, bounds[t + 1] - bounds[t]) for t, v in enumerate(face)))
    return sorted(result)


def oracle_functional(
        K: SimplicialComplex,
        M: LsopMatrix,
        oriented: Optional[OrientedComplex] = None,
        reference: Optional[Sequence[int]] = None,
        max_vertices: int = 10,
) -> Dict[Monomial, Any]:
    """Ψ on every face-supported degree-d monomial, by one kernel computation."""
    if len(K.vertices) > max_vertices:
        raise CostGuard(f"Oracle limited to {max_vertices} vertices, complex has {len(K.vertices)}")
    field = M.field
    if field.is_symbolic:
        raise BadParameters("The oracle needs a specialized matrix")
    if not is_lsop(K, M):
        raise InvalidLsop("Matrix is not an l.s.o.p. for this complex")
    d = K.dim + 1
    top = face_supported_monomials(K, d)
    index = {mono: k for k, mono in enumerate(top)}
    rows = []
    for u in face_supported_monomials(K, d - 1):
        for j in range(1, d + 1):
            row = [field.zero] * len(top)
            for v, c in M.row(j).items():
                mono = make_monomial({**dict(u), v: dict(u).get(v, 0) + 1})
                if mono in index:
                    row[index[mono]] = row[index[mono]] + c
            rows.append(row)
    kernel = field.kernel(rows)
    if len(kernel) != 1:
        raise NotHomologySphere(f"Top degree of the reduction has dimension {len(kernel)}")
    vec = kernel[0]
    oriented = oriented or orient(K)
    ref = make_face(reference) if reference is not None else oriented.root
    want = field.element(oriented.sign[ref]) / M.minor(ref)
    at_ref = vec[index[face_monomial(ref)]]
    scale = want / at_ref
    logger.debug(f"🔍 Oracle solved {len(rows)} relations on {len(top)} monomials")
    return {mono: vec[k] * scale for k, mono in enumerate(top)}


def oracle_psi(
        K: SimplicialComplex,
        M: LsopMatrix,
        exps: Mapping[int, int],
        oriented: Optional[OrientedComplex] = None,
        max_vertices: int = 10,
) -> Any:
    mono = exps if isinstance(exps, tuple) else make_monomial(exps)
    if monomial_degree(mono) != K.dim + 1:
        raise WrongDegree(f"Ψ needs degree {K.dim + 1}")
    if monomial_support(mono) not in K.face_set:
        raise SupportNotAFace(f"Support {list(monomial_support(mono))} is not a face")
    return oracle_functional(K, M, oriented, max_vertices=max_vertices)[mono]
