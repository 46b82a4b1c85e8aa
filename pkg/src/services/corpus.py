"""Generator corpus of spheres plus a few fixed test fixtures."""
from itertools import combinations, product
from typing import Any, Callable, Dict, List, Optional, Tuple

from configuration.configuration import logger
from models.errors import BadParams
from services.complex import SimplicialComplex, build_from_facets
from services.moves import BistellarMove
from utils.utils import make_rng

# Six-vertex RP² (hemi-icosahedron quotient)
RP2_FACETS = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
]


def boundary_simplex(d: int) -> SimplicialComplex:
    """∂Δ^d on [d+1], a (d-1)-sphere."""
    if d < 1:
        raise BadParams("boundary_simplex needs d >= 1")
    return build_from_facets(d + 1, list(combinations(range(1, d + 2), d)))


def cross_polytope(n: int) -> SimplicialComplex:
    """Boundary of the n-dimensional cross-polytope; antipodal pairs are (2i-1, 2i)."""
    if n < 1:
        raise BadParams("cross_polytope needs n >= 1")
    pairs = [(2 * i - 1, 2 * i) for i in range(1, n + 1)]
    return build_from_facets(2 * n, list(product(*pairs)))


def _gale_even(facet: tuple, m: int) -> bool:
    members = set(facet)
    outside = [v for v in range(1, m + 1) if v not in members]
    for i, j in combinations(outside, 2):
        between = sum(1 for v in facet if i < v < j)
        if between % 2:
            return False
    return True


def cyclic_polytope_boundary(d: int, m: int) -> SimplicialComplex:
    """Boundary of the cyclic d-polytope on m vertices via Gale's evenness condition."""
    if d < 2 or m < d + 2:
        raise BadParams(f"cyclic polytope needs d >= 2 and m >= d+2 (got d={d}, m={m})")
    facets = [f for f in combinations(range(1, m + 1), d) if _gale_even(f, m)]
    return build_from_facets(m, facets)


def cycle(n: int) -> SimplicialComplex:
    if n < 3:
        raise BadParams("cycle needs n >= 3")
    return build_from_facets(n, [(i, i % n + 1) for i in range(1, n + 1)])


def stacked_sphere(d: int, k: int, seed: int) -> SimplicialComplex:
    """∂Δ^d followed by k stellar subdivisions of random facets."""
    if d < 2 or k < 0:
        raise BadParams("stacked_sphere needs d >= 2 and k >= 0")
    rng = make_rng(seed)
    facets: List[tuple] = list(combinations(range(1, d + 2), d))
    m = d + 1
    for _ in range(k):
        facets.sort()
        target = facets.pop(int(rng.integers(len(facets))))
        m += 1
        facets.extend(tuple(sorted(set(target) - {v} | {m})) for v in target)
    return build_from_facets(m, facets)


def rp2() -> SimplicialComplex:
    return build_from_facets(6, RP2_FACETS)


GENERATORS: Dict[str, Callable[..., SimplicialComplex]] = {
    "boundary-simplex": boundary_simplex,
    "cross-polytope": cross_polytope,
    "cyclic": cyclic_polytope_boundary,
    "stacked": stacked_sphere,
    "cycle": cycle,
    "rp2": rp2,
}


def generate(kind: str, params: List[int], seed: Optional[int] = None) -> SimplicialComplex:
    """Dispatch to a corpus generator; ``stacked`` takes its seed from ``seed``."""
    kind = kind.replace("_", "-")
    if kind not in GENERATORS:
        raise BadParams(f"Unknown complex kind: {kind}")
    try:
        if kind == "stacked":
            complex_ = stacked_sphere(*params, seed=seed or 0)
        else:
            complex_ = GENERATORS[kind](*params)
    except TypeError as e:
        raise BadParams(f"Bad parameters for {kind}: {params}") from e
    logger.debug(f"Generated {kind}{tuple(params)}: {complex_}")
    return complex_


def acceptance_corpus(seed: int = 0, stacked_count: int = 10) -> Dict[str, SimplicialComplex]:
    """Named spheres exercised by the acceptance suite, from the 0-spheres up."""
    corpus: Dict[str, Any] = {}
    for d in range(1, 7):
        corpus[f"boundary-simplex-{d}"] = boundary_simplex(d)
    for n in range(1, 5):
        corpus[f"cross-polytope-{n}"] = cross_polytope(n)
    for m in range(6, 9):
        corpus[f"cyclic-4-{m}"] = cyclic_polytope_boundary(4, m)
    for k in range(stacked_count):
        corpus[f"stacked-3-{k}"] = stacked_sphere(3, 1 + k % 4, seed + k)
    return corpus


def move_fixture() -> Tuple[SimplicialComplex, BistellarMove]:
    """{1,2} * ∂{3,4,5,6} with the 1-move σ = 345, τ = 12, already in structured labels."""
    facets = [(a,) + f for a in (1, 2) for f in combinations((3, 4, 5, 6), 3)]
    return build_from_facets(6, facets), BistellarMove((3, 4, 5), (1, 2))
