"""
The derivative argument for q-moves on (2n-1)-spheres.

On Δ' (the side where τ = [q+1] is a face) with the structured move l.s.o.p.,
x_{[n]}² is a fixed multiple of x_1⋯x_{2n}, and the composite derivative in
b_{2n-q}, …, b_{2n} separates Ψ(x_{[n]}²) from the squares of the other basis
monomials, all of which avoid the move.
"""
from typing import Any, Optional

from configuration.configuration import Configuration as Config, logger
from models.errors import BadParameters
from models.models import DiffopReport
from services import polytext
from services.algebra import B, partial_derivative
from services.base_experiment import BaseExperiment, basis_options
from services.complex import SimplicialComplex, orient
from services.lsop import structured_move_lsop
from services.moves import BistellarMove, apply_move, is_move, label_for_move
from services.reduction import PsiContext, face_monomial, is_zero, select_basis


def fact_c_coefficient(ctx: PsiContext, n: int, q: int):
    """∏_{i=q+2}^{n} b_i / ∏_{i=n+1}^{2n} b_i; the numerator is 1 when q = n-1."""
    field = ctx.field
    num, den = field.one, field.one
    for i in range(q + 2, n + 1):
        num = num * field.var(B(i))
    for i in range(n + 1, 2 * n + 1):
        den = den * field.var(B(i))
    return num / den


def derivative_operator(value, n: int, q: int, ctx: PsiContext):
    """∂/∂b_{2n-q} ⋯ ∂/∂b_{2n}."""
    for i in range(2 * n - q, 2 * n + 1):
        value = partial_derivative(value, B(i), ctx.field)
    return value


def moved_side(K: SimplicialComplex, n: int, q: int, move: Optional[BistellarMove] = None) -> SimplicialComplex:
    """Δ' in structured labels: relabel and apply ``move`` if given, else check K is already Δ'."""
    tau = tuple(range(1, q + 2))
    sigma = tuple(range(q + 2, 2 * n + 2))
    if move is None:
        if not is_move(K, tau, sigma):
            raise BadParameters(f"Complex does not carry τ={list(tau)} with link ∂{list(sigma)}")
        return K
    if move.index != q:
        raise BadParameters(f"Move has index {move.index}, expected {q}")
    labeled, mapping = label_for_move(K, move)
    relabeled = BistellarMove(tuple(mapping[v] for v in move.sigma), tuple(mapping[v] for v in move.tau))
    return apply_move(labeled, relabeled)


def diffop_experiment(
        K: SimplicialComplex,
        n: int,
        q: int,
        move: Optional[BistellarMove] = None,
        seed: int = 0,
        config: Optional[Config] = None,
) -> DiffopReport:
    config = config or Config()
    if not 0 < q < n:
        raise BadParameters(f"Need 0 < q < n, got q={q}, n={n}")
    if K.dim != 2 * n - 1:
        raise BadParameters(f"Complex has dimension {K.dim}, expected {2 * n - 1}")
    moved = moved_side(K, n, q, move)
    lsop = structured_move_lsop(moved, n, q)
    top = tuple(range(1, 2 * n + 1))
    ctx = PsiContext(orient(moved, root=top), lsop, check=False, strategy=config.replacement_vector)

    first = tuple(range(1, n + 1))
    tau = set(range(1, q + 2))
    candidates = [f for f in ctx.faces_of_degree(n) if tuple(sorted(tau | set(f))) not in moved.face_set]
    basis = select_basis(ctx, n, seed, must_include=[first], candidates=candidates, **basis_options(config)).faces

    coefficient = fact_c_coefficient(ctx, n, q)
    unit = ctx.psi_monomial(face_monomial(top))
    fact_c = not (unit - ctx.field.one) and is_zero(
        ctx, ctx.face_element(first, 2) - ctx.face_element(top).scale(coefficient))

    squares = [ctx.psi_monomial(face_monomial(f, 2)) for f in basis]
    derived = [derivative_operator(c, n, q, ctx) for c in squares]
    report = DiffopReport(
        complex=moved.hash,
        n=n,
        q=q,
        basis=[list(f) for f in basis],
        fact_c=fact_c,
        distinguished_nonzero=not ctx.field.is_zero(derived[0]),
        others_vanish=all(ctx.field.is_zero(x) for x in derived[1:]),
        values={
            "top": polytext.format_ratfunc(unit, ctx.field),
            "coefficient": polytext.format_ratfunc(coefficient, ctx.field),
            "squares": [polytext.format_ratfunc(c, ctx.field) for c in squares],
            "derived": [polytext.format_ratfunc(c, ctx.field) for c in derived],
        },
    )
    ok = report.fact_c and report.distinguished_nonzero and report.others_vanish
    (logger.info if ok else logger.error)(
        f"{'✅' if ok else '❌'} Derivative argument n={n}, q={q}: fact_c={report.fact_c}, "
        f"distinguished={report.distinguished_nonzero}, others={report.others_vanish}")
    return report


class DiffopExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("DiffopExperiment", config)

    def run(self, complex: SimplicialComplex, n: int = 2, q: int = 1, move: Optional[BistellarMove] = None,
            seed: int = 0, **_: Any):
        return diffop_experiment(complex, n, q, move, seed, self.config)
