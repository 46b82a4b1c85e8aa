"""Bistellar moves: detection, application, logs, random walks and reduction."""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from configuration.configuration import logger
from models.errors import InvalidMove, NotPure
from services.complex import (
    Face,
    SimplicialComplex,
    fh_vectors,
    is_boundary_simplex,
    link,
    make_face,
)
from utils.utils import make_rng


@dataclass(frozen=True, order=True)
class BistellarMove:
    """Replace st_σ by ∂σ * τ. ``index`` is |τ| - 1."""

    sigma: Face
    tau: Face

    @property
    def index(self) -> int:
        return len(self.tau) - 1

    def inverse(self) -> "BistellarMove":
        return BistellarMove(self.tau, self.sigma)

    def to_dict(self) -> dict:
        return {"sigma": list(self.sigma), "tau": list(self.tau)}


@dataclass
class MoveLog:
    start: str
    moves: List[BistellarMove] = field(default_factory=list)
    end: str = ""

    def to_dict(self) -> dict:
        return {"start": self.start, "moves": [mv.to_dict() for mv in self.moves], "end": self.end}


def _link_is_boundary_of(K: SimplicialComplex, sigma: Face, fresh: int) -> Optional[Face]:
    """τ with lk_σ K = ∂τ, or None. Links of facets give the fresh vertex."""
    lk = link(K, sigma).ambient()
    if lk.facets == frozenset([()]):
        return (fresh,)
    verts = lk.vertices
    if not lk.is_pure or len(lk.facets) != len(verts) or lk.dim != len(verts) - 2:
        return None
    return verts


def valid_moves(K: SimplicialComplex) -> List[BistellarMove]:
    """All (σ, τ) with lk_σ K = ∂τ and τ ∉ K, in a deterministic order."""
    if not K.is_pure:
        raise NotPure("Moves need a pure complex")
    fresh = K.m + 1
    moves = []
    for sigma in K.faces():
        if not sigma:
            continue
        tau = _link_is_boundary_of(K, sigma, fresh)
        if tau is None or tau in K.face_set:
            continue
        moves.append(BistellarMove(sigma, tau))
    return sorted(moves, key=lambda mv: (mv.index, mv.sigma, mv.tau))


def apply_move(K: SimplicialComplex, mv: BistellarMove) -> SimplicialComplex:
    """(K ∖ st_σ) ∪ (∂σ * τ)."""
    sigma, tau = make_face(mv.sigma), make_face(mv.tau)
    if sigma not in K.face_set:
        raise InvalidMove(f"σ={list(sigma)} is not a face")
    if tau in K.face_set:
        raise InvalidMove(f"τ={list(tau)} is already a face")
    expected = _link_is_boundary_of(K, sigma, max(tau) if len(tau) == 1 else K.m + 1)
    if expected != tau:
        raise InvalidMove(f"Link of {list(sigma)} is not the boundary of {list(tau)}")
    s = set(sigma)
    kept = [f for f in K.facets if not s.issubset(f)]
    added = [tuple(sorted(s - {x} | set(tau))) for x in sigma]
    m = max(K.m, max(tau))
    return SimplicialComplex(m, kept + added)


def replay_log(K: SimplicialComplex, log: MoveLog) -> SimplicialComplex:
    if K.hash != log.start:
        raise InvalidMove("Log does not start at this complex")
    for mv in log.moves:
        K = apply_move(K, mv)
    if log.end and K.hash != log.end:
        raise InvalidMove("Replay did not reach the recorded end")
    return K


def _allowed(K: SimplicialComplex, moves: List[BistellarMove], vertex_cap: Optional[int]) -> List[BistellarMove]:
    if vertex_cap is None or len(K.vertices) < vertex_cap:
        return moves
    return [mv for mv in moves if len(mv.sigma) != len(K.sorted_facets[0])]


def random_walk(K: SimplicialComplex, steps: int, seed: int, vertex_cap: Optional[int] = None) -> Tuple[SimplicialComplex, MoveLog]:
    """Uniform random walk over valid moves; 0-moves are skipped once the vertex cap is reached."""
    rng = make_rng(seed)
    log = MoveLog(start=K.hash)
    for step in range(steps):
        moves = _allowed(K, valid_moves(K), vertex_cap)
        if not moves:
            logger.warning(f"⚠️ No valid move at step {step}; walk stops early")
            break
        mv = moves[int(rng.integers(len(moves)))]
        K = apply_move(K, mv)
        log.moves.append(mv)
    log.end = K.hash
    return K, log


def _energy(K: SimplicialComplex) -> int:
    return sum(fh_vectors(K).f)


@dataclass
class ReductionOutcome:
    success: bool
    log: MoveLog
    steps: int
    final: SimplicialComplex
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "steps": self.steps,
            "reason": self.reason,
            "log": self.log.to_dict(),
        }


def reduce_to_boundary_simplex(
        K: SimplicialComplex,
        budget: int,
        seed: int,
        t_start: float = 2.0,
        t_end: float = 0.01,
        vertex_cap: Optional[int] = None,
) -> ReductionOutcome:
    """Greedy descent on total face count with simulated-annealing escapes.

    Failure only means the budget ran out; it never disproves sphericity.
    """
    rng = make_rng(seed)
    log = MoveLog(start=K.hash)
    cap = vertex_cap if vertex_cap is not None else len(K.vertices) + 2
    energy = _energy(K)
    for step in range(budget):
        if is_boundary_simplex(K):
            log.end = K.hash
            logger.info(f"✅ Reduced to a simplex boundary in {len(log.moves)} moves ({step} steps)")
            return ReductionOutcome(True, log, step, K)
        moves = _allowed(K, valid_moves(K), cap)
        if not moves:
            break
        scored: Dict[BistellarMove, Tuple[SimplicialComplex, int]] = {}
        for mv in moves:
            nxt = apply_move(K, mv)
            scored[mv] = (nxt, _energy(nxt) - energy)
        best = min(delta for _, delta in scored.values())
        if best < 0:
            candidates = [mv for mv in moves if scored[mv][1] == best]
            mv = candidates[int(rng.integers(len(candidates)))]
        else:
            temperature = t_start * (t_end / t_start) ** (step / max(budget - 1, 1))
            mv = moves[int(rng.integers(len(moves)))]
            if rng.random() >= math.exp(-scored[mv][1] / temperature):
                continue
        K, delta = scored[mv]
        energy += delta
        log.moves.append(mv)
    log.end = K.hash
    if is_boundary_simplex(K):
        return ReductionOutcome(True, log, budget, K)
    logger.warning(f"⚠️ Reduction budget exhausted after {budget} steps")
    return ReductionOutcome(False, log, budget, K, reason="BudgetExhausted")


def h_vector_shift(d: int, index: int) -> List[int]:
    """Change of (h_0..h_d) under an index-i move on a (d-1)-sphere."""
    shift = [0] * (d + 1)
    for j in range(d + 1):
        if index + 1 <= j <= d - index - 1:
            shift[j] = 1
        elif d - index <= j <= index:
            shift[j] = -1
    return shift


def is_move(K: SimplicialComplex, sigma: Sequence[int], tau: Sequence[int]) -> bool:
    """True iff σ ∈ K, τ ∉ K and lk_σ K = ∂τ."""
    sigma, tau = make_face(sigma), make_face(tau)
    if sigma not in K.face_set or tau in K.face_set or set(sigma) & set(tau):
        return False
    fresh = max(tau) if len(tau) == 1 else K.m + 1
    return _link_is_boundary_of(K, sigma, fresh) == tau


def label_for_move(K: SimplicialComplex, mv: BistellarMove) -> Tuple[SimplicialComplex, Dict[int, int]]:
    """Relabel so that τ = [|τ|] and σ follows it; other vertices keep their order after that."""
    ordered = list(mv.tau) + list(mv.sigma)
    rest = [v for v in K.vertices if v not in ordered]
    mapping = {v: k + 1 for k, v in enumerate(ordered + rest)}
    facets = [[mapping[v] for v in f] for f in K.facets]
    return SimplicialComplex(len(mapping), facets), mapping
