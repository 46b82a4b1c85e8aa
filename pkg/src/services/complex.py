"""
Simplicial-complex combinatorics.

Faces are sorted tuples of positive vertex labels. A complex stores its maximal
faces only; every other face is derived. Labels need not be contiguous: inverse
0-moves leave gaps, and ``m`` is the label bound rather than a vertex count.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import galois
import networkx as nx
import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from configuration.configuration import logger
from models.errors import (
    DimensionOutOfRange,
    DisconnectedDualGraph,
    EmptyInput,
    FaceNotInComplex,
    NonOrientable,
    NotPure,
    VertexClash,
    VertexOutOfRange,
)
from utils.utils import canonical_hash

Face = Tuple[int, ...]
EMPTY_FACE: Face = ()


def make_face(vertices: Iterable[int]) -> Face:
    """Sorted, duplicate-free face from any iterable of labels."""
    verts = [int(v) for v in vertices]
    result = tuple(sorted(set(verts)))
    if len(result) != len(verts):
        raise ValueError(f"Face has repeated vertices: {verts}")
    return result


class SimplicialComplex:
    """Immutable simplicial complex given by its facets.

    ``labels`` maps position k (1-based) to the vertex label of the ambient
    complex this one was cut out of; it is the identity for top-level complexes.
    """

    def __init__(self, m: int, facets: Iterable[Sequence[int]], labels: Optional[Sequence[int]] = None):
        candidates = {make_face(f) for f in facets}
        # Keep inclusion-maximal faces only; the void complex has no facets.
        ordered = sorted(candidates, key=len, reverse=True)
        kept: List[Face] = []
        for f in ordered:
            fs = set(f)
            if not any(fs < set(g) for g in kept):
                kept.append(f)
        self.m = int(m)
        self.facets: FrozenSet[Face] = frozenset(kept)
        self.labels: Tuple[int, ...] = tuple(labels) if labels is not None else tuple(range(1, self.m + 1))

    # ------------------------------------------------------------------
    # Basic attributes
    # ------------------------------------------------------------------
    @cached_property
    def sorted_facets(self) -> List[Face]:
        return sorted(self.facets)

    @cached_property
    def dim(self) -> int:
        if not self.facets:
            return -2  # void complex
        return max(len(f) for f in self.facets) - 1

    @cached_property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted({v for f in self.facets for v in f}))

    @cached_property
    def face_set(self) -> FrozenSet[Face]:
        faces = set()
        for f in self.facets:
            for k in range(len(f) + 1):
                faces.update(combinations(f, k))
        return frozenset(faces)

    def __contains__(self, face: Sequence[int]) -> bool:
        return tuple(sorted(face)) in self.face_set

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex(m={self.m}, dim={self.dim}, facets={len(self.facets)})"

    @cached_property
    def hash(self) -> str:
        return canonical_hash(self.sorted_facets)

    def to_dict(self) -> dict:
        return {"m": self.m, "facets": [list(f) for f in self.sorted_facets]}

    def ambient(self) -> "SimplicialComplex":
        """The same complex written in the labels of the complex it was cut from."""
        facets = [[self.labels[v - 1] for v in f] for f in self.facets]
        bound = max(self.labels) if self.labels else 0
        return SimplicialComplex(bound, facets)

    def faces(self) -> List[Face]:
        return sorted(self.face_set, key=lambda f: (len(f), f))

    def facets_containing(self, face: Sequence[int]) -> List[Face]:
        fs = set(face)
        return [f for f in self.sorted_facets if fs.issubset(f)]


# ----------------------------------------------------------------------
# Construction and face enumeration
# ----------------------------------------------------------------------
def build_from_facets(m: int, facets: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Validated constructor used for every external input."""
    facets = [list(f) for f in facets]
    if not facets or any(len(f) == 0 for f in facets):
        raise EmptyInput("A complex needs at least one nonempty facet")
    for f in facets:
        for v in f:
            if not 1 <= int(v) <= m:
                raise VertexOutOfRange(f"Vertex {v} outside [1, {m}]")
    complex_ = SimplicialComplex(m, facets)
    missing = set(range(1, m + 1)) - set(complex_.vertices)
    if missing:
        logger.debug(f"Complex leaves labels unused: {sorted(missing)}")
    return complex_


def void_complex() -> SimplicialComplex:
    return SimplicialComplex(0, [])


def empty_face_complex() -> SimplicialComplex:
    """The complex {∅}: unit of the join, link of a facet."""
    return SimplicialComplex(0, [EMPTY_FACE])


def faces_of_dim(K: SimplicialComplex, i: int) -> List[Face]:
    if not -1 <= i <= K.dim:
        raise DimensionOutOfRange(f"Dimension {i} outside [-1, {K.dim}]")
    return sorted(f for f in K.face_set if len(f) == i + 1)


@dataclass(frozen=True)
class FHVectors:
    f: Tuple[int, ...]
    h: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {"f": list(self.f), "h": list(self.h)}


def fh_vectors(K: SimplicialComplex) -> FHVectors:
    """f-vector (f_0..f_{d-1}) and h-vector (h_0..h_d) of a pure complex."""
    if not K.is_pure:
        raise NotPure("f/h-vectors need a pure complex")
    d = K.dim + 1
    f = [0] * d
    for face in K.face_set:
        if face:
            f[len(face) - 1] += 1
    fm = [1] + f  # fm[i] = f_{i-1}
    h = [
        sum((-1) ** (k - i) * comb(d - i, k - i) * fm[i] for i in range(k + 1))
        for k in range(d + 1)
    ]
    return FHVectors(tuple(f), tuple(h))


# ----------------------------------------------------------------------
# Links, stars, joins
# ----------------------------------------------------------------------
def _reindexed(K: SimplicialComplex, facets: List[Face]) -> SimplicialComplex:
    verts = sorted({v for f in facets for v in f})
    position = {v: k + 1 for k, v in enumerate(verts)}
    labels = [K.labels[v - 1] for v in verts]
    return SimplicialComplex(len(verts), [[position[v] for v in f] for f in facets], labels=labels)


def link(K: SimplicialComplex, sigma: Sequence[int]) -> SimplicialComplex:
    """lk_σ K, re-indexed to [k]; ``labels`` records the injection back into K's labels."""
    sigma = make_face(sigma)
    if sigma not in K.face_set:
        raise FaceNotInComplex(f"{list(sigma)} is not a face")
    s = set(sigma)
    facets = sorted({tuple(v for v in f if v not in s) for f in K.facets_containing(sigma)})
    return _reindexed(K, facets)


def star(K: SimplicialComplex, sigma: Sequence[int]) -> SimplicialComplex:
    sigma = make_face(sigma)
    if sigma not in K.face_set:
        raise FaceNotInComplex(f"{list(sigma)} is not a face")
    return _reindexed(K, K.facets_containing(sigma))


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Join of complexes on disjoint label sets."""
    shared = set(K.vertices) & set(L.vertices)
    if shared:
        raise VertexClash(f"Shared vertices {sorted(shared)}")
    if not K.facets or not L.facets:
        return void_complex()
    facets = [f + g for f in K.sorted_facets for g in L.sorted_facets]
    return SimplicialComplex(max(K.m, L.m), facets)


def cone(K: SimplicialComplex, apex: Optional[int] = None) -> Tuple[SimplicialComplex, int]:
    apex = K.m + 1 if apex is None else apex
    if apex in K.vertices:
        raise VertexClash(f"Apex {apex} already used")
    return join(K, SimplicialComplex(apex, [[apex]])), apex


def suspension(K: SimplicialComplex) -> Tuple[SimplicialComplex, Tuple[int, int]]:
    """∂Δ¹ * K on two fresh vertices m+1, m+2."""
    v, w = K.m + 1, K.m + 2
    return join(K, SimplicialComplex(w, [[v], [w]])), (v, w)


# ----------------------------------------------------------------------
# Homology
# ----------------------------------------------------------------------
def _rank(rows: List[List[int]], p: int) -> int:
    if not rows or not rows[0]:
        return 0
    if p == 0:
        return DomainMatrix([[QQ(x) for x in r] for r in rows], (len(rows), len(rows[0])), QQ).rank()
    GF = galois.GF(p)
    return int(np.linalg.matrix_rank(GF(np.array(rows, dtype=np.int64) % p)))


def reduced_betti(K: SimplicialComplex, p: int) -> Dict[int, int]:
    """Reduced Betti numbers over F_p (or Q when p = 0), keyed by dimension from -1."""
    if not K.facets:
        return {}
    top = K.dim
    faces = {i: faces_of_dim(K, i) for i in range(-1, top + 1)}
    ranks = {}
    for i in range(0, top + 1):
        index = {f: k for k, f in enumerate(faces[i - 1])}
        rows = [[0] * len(faces[i]) for _ in faces[i - 1]]
        for col, face in enumerate(faces[i]):
            for pos in range(len(face)):
                rows[index[face[:pos] + face[pos + 1:]]][col] = (-1) ** pos
        ranks[i] = _rank(rows, p)
    betti = {}
    for i in range(-1, top + 1):
        betti[i] = len(faces[i]) - ranks.get(i, 0) - ranks.get(i + 1, 0)
    return betti


def homology_ranks(K: SimplicialComplex, p: int) -> Tuple[int, ...]:
    """Reduced Betti numbers in dimensions 0..dim K."""
    if not K.facets:
        raise EmptyInput("Homology of the void complex is not defined here")
    betti = reduced_betti(K, p)
    return tuple(betti[i] for i in range(0, K.dim + 1))


def _is_sphere_homology(K: SimplicialComplex, dim: int, p: int) -> bool:
    betti = reduced_betti(K, p)
    return all(b == (1 if i == dim else 0) for i, b in betti.items()) and K.dim == dim


def _is_acyclic(K: SimplicialComplex, p: int) -> bool:
    return all(b == 0 for b in reduced_betti(K, p).values())


def is_homology_sphere(K: SimplicialComplex, p: int) -> bool:
    """Link of every face (∅ included) has the homology of a sphere of the right dimension."""
    if not K.is_pure:
        raise NotPure("Sphere recognition needs a pure complex")
    top = K.dim
    for face in K.faces():
        if not _is_sphere_homology(link(K, face), top - len(face), p):
            return False
    return True


def boundary_complex(K: SimplicialComplex) -> SimplicialComplex:
    """Complex generated by the ridges lying in exactly one facet."""
    if not K.is_pure:
        raise NotPure("Boundary needs a pure complex")
    counts: Dict[Face, int] = {}
    for f in K.facets:
        for pos in range(len(f)):
            ridge = f[:pos] + f[pos + 1:]
            counts[ridge] = counts.get(ridge, 0) + 1
    ridges = [r for r, c in counts.items() if c == 1]
    return SimplicialComplex(K.m, ridges, labels=K.labels)


def is_homology_ball(K: SimplicialComplex, p: int) -> bool:
    """Acyclic, boundary a homology sphere, links spherical inside and acyclic on the boundary."""
    if not K.is_pure:
        raise NotPure("Ball recognition needs a pure complex")
    if not _is_acyclic(K, p):
        return False
    top = K.dim
    boundary = boundary_complex(K)
    if not is_homology_sphere(boundary, p):
        return False
    for face in K.faces():
        if not face:
            continue
        lk = link(K, face)
        if face in boundary.face_set:
            if not _is_acyclic(lk, p):
                return False
        elif not _is_sphere_homology(lk, top - len(face), p):
            return False
    return True


# ----------------------------------------------------------------------
# Orientation
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class OrientedComplex:
    complex: SimplicialComplex
    sign: Dict[Face, int] = field(hash=False)
    root: Face = EMPTY_FACE

    def is_coherent(self) -> bool:
        return _coherent(self.complex, self.sign)


def _ridge_sign(facet: Face, drop: int) -> int:
    return -1 if facet.index(drop) % 2 else 1


def _coherent(K: SimplicialComplex, sign: Dict[Face, int]) -> bool:
    for f, g, data in _dual_graph(K).edges(data=True):
        expected = -sign[f] * _ridge_sign(f, data["drop"][f]) * _ridge_sign(g, data["drop"][g])
        if sign[g] != expected:
            return False
    return True


def _dual_graph(K: SimplicialComplex) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(K.sorted_facets)
    by_ridge: Dict[Face, List[Face]] = {}
    for f in K.sorted_facets:
        for pos in range(len(f)):
            by_ridge.setdefault(f[:pos] + f[pos + 1:], []).append(f)
    for ridge, owners in by_ridge.items():
        if len(owners) > 2:
            raise NonOrientable(f"Ridge {list(ridge)} lies in {len(owners)} facets")
        if len(owners) == 2:
            f, g = owners
            (u,) = set(f) - set(ridge)
            (w,) = set(g) - set(ridge)
            graph.add_edge(f, g, drop={f: u, g: w})
    return graph


def orient(K: SimplicialComplex, root: Optional[Sequence[int]] = None, root_sign: int = 1) -> OrientedComplex:
    """Coherent facet signs by breadth-first propagation across ridges.

    Signs are relative to each facet's sorted vertex order; the root facet
    (lexicographically least by default) gets ``root_sign``.
    """
    if not K.is_pure or not K.facets:
        raise NotPure("Orientation needs a pure nonempty complex")
    graph = _dual_graph(K)
    if not nx.is_connected(graph):
        raise DisconnectedDualGraph("Dual graph has several components")
    root = make_face(root) if root is not None else K.sorted_facets[0]
    if root not in K.facets:
        raise FaceNotInComplex(f"Root {list(root)} is not a facet")
    sign = {root: root_sign}
    for f, g in nx.bfs_edges(graph, root):
        drop = graph.edges[f, g]["drop"]
        sign[g] = -sign[f] * _ridge_sign(f, drop[f]) * _ridge_sign(g, drop[g])
    if not _coherent(K, sign):
        raise NonOrientable("Orientation propagation met a conflicting cycle")
    logger.debug(f"Oriented {len(sign)} facets from root {list(root)}")
    return OrientedComplex(K, sign, root)


def relabel(K: SimplicialComplex, mapping: Dict[int, int]) -> SimplicialComplex:
    facets = [[mapping.get(v, v) for v in f] for f in K.facets]
    bound = max([K.m] + [mapping.get(v, v) for v in K.vertices])
    return SimplicialComplex(bound, facets)


def compact(K: SimplicialComplex) -> Tuple[SimplicialComplex, Dict[int, int]]:
    """Relabel used vertices to [m'] preserving order."""
    mapping = {v: k + 1 for k, v in enumerate(K.vertices)}
    facets = [[mapping[v] for v in f] for f in K.facets]
    return SimplicialComplex(len(mapping), facets), mapping


def is_boundary_simplex(K: SimplicialComplex) -> bool:
    """Combinatorial recognition of ∂Δ^{d}: d+1 vertices, every d-subset a facet."""
    if not K.facets or not K.is_pure:
        return False
    n = len(K.vertices)
    return K.dim == n - 2 and len(K.facets) == n
