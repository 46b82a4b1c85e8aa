"""Polynomial text format: ``c * a[i][j]^e * b[i]^e`` terms, rational functions as ``(num) / (den)``."""
import re
from fractions import Fraction
from typing import Any, List, Set

from lark import Lark, Token, Transformer
from lark.exceptions import LarkError, VisitError

from models.errors import PolynomialSyntaxError
from services.algebra import PolyContext, VarId

_GRAMMAR = r"""
    ?start: ratfunc

    ?ratfunc: "(" poly ")" "/" "(" poly ")"   -> quotient
            | poly

    poly: signed_term (SIGN term)*
    signed_term: SIGN? term
    term: factor ("*" factor)*
    ?factor: coeff
           | power
    coeff: INT ("/" INT)?
    power: VAR ("^" INT)?

    SIGN: "+" | "-"
    VAR: /[abcw]\[\d+\](\[\d+\])?/

    %import common.INT
    %import common.WS
    %ignore WS
"""

_parser = Lark(_GRAMMAR, parser="lalr")
_VAR_SCAN = re.compile(r"[abcw]\[\d+\](?:\[\d+\])?")


class _PolyBuilder(Transformer):
    def __init__(self, ctx: PolyContext):
        super().__init__()
        self.ctx = ctx

    def power(self, items):
        var = VarId.parse(str(items[0]))
        if var not in self.ctx:
            raise PolynomialSyntaxError(f"Unknown variable {var}")
        exponent = int(items[1]) if len(items) > 1 else 1
        return self.ctx.poly_var(var) ** exponent

    def coeff(self, items):
        num = int(items[0])
        den = int(items[1]) if len(items) > 1 else 1
        domain = self.ctx.domain
        if den == 0 or (self.ctx.characteristic and den % self.ctx.characteristic == 0):
            raise PolynomialSyntaxError(f"Coefficient {num}/{den} is undefined here")
        return self.ctx.ring.ground_new(domain(num) / domain(den))

    def term(self, items):
        result = self.ctx.ring.one
        for factor in items:
            result *= factor
        return result

    def signed_term(self, items):
        if isinstance(items[0], Token):
            return -items[1] if items[0] == "-" else items[1]
        return items[0]

    def poly(self, items):
        total = items[0]
        for sign, term in zip(items[1::2], items[2::2]):
            total = total - term if sign == "-" else total + term
        return total

    def quotient(self, items):
        return self.ctx.ratfunc(items[0], items[1])


def scan_variables(text: str) -> Set[VarId]:
    return {VarId.parse(name) for name in _VAR_SCAN.findall(text)}


def parse(text: str, ctx: PolyContext):
    """Parse into a polynomial of ``ctx.ring`` (or a rational function of ``ctx.field``)."""
    try:
        return _PolyBuilder(ctx).transform(_parser.parse(text))
    except VisitError as e:
        if isinstance(e.orig_exc, PolynomialSyntaxError):
            raise e.orig_exc
        raise PolynomialSyntaxError(str(e.orig_exc)) from e
    except LarkError as e:
        raise PolynomialSyntaxError(f"Cannot parse {text!r}: {e}") from e


def parse_ratfunc(text: str, ctx: PolyContext):
    return ctx.lift(parse(text, ctx))


def _coefficient(coeff: Any, ctx: PolyContext) -> Fraction:
    if ctx.characteristic == 0:
        return Fraction(int(ctx.domain.numer(coeff)), int(ctx.domain.denom(coeff)))
    return Fraction(int(ctx.domain.to_int(coeff)))


def format_poly(p, ctx: PolyContext) -> str:
    if not p:
        return "0"
    parts: List[str] = []
    for monom, coeff in p.terms():
        c = _coefficient(coeff, ctx)
        factors = [
            f"{v.name}^{e}" if e > 1 else v.name
            for v, e in zip(ctx.variables, monom) if e
        ]
        if abs(c) != 1 or not factors:
            factors.insert(0, str(abs(c)))
        body = " * ".join(factors)
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts)


def format_ratfunc(f, ctx: PolyContext) -> str:
    f = ctx.lift(f)
    if f.denom == ctx.ring.one:
        return format_poly(f.numer, ctx)
    return f"({format_poly(f.numer, ctx)}) / ({format_poly(f.denom, ctx)})"


def format_value(x, field) -> Any:
    """Text for symbolic values, plain integers for finite-field values."""
    if getattr(field, "is_symbolic", False):
        return format_ratfunc(x, field)
    return field.to_int(x)
