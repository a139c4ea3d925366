"""Text syntax for algebra and Witt elements.

Grammar (whitespace is ignored between tokens)::

    element := '0' | ['-'] term (('+' | '-') term)*
    term    := coeff ('*' factor)* | factor ('*' factor)*
    factor  := 'x[' q (',' q)* ']' | 't' INT ('^' INT)? | 'd' INT
    coeff   := INT | INT '/' INT
    q       := ['-'] INT ['/' INT]

A term carrying a ``d`` factor is a Witt term; all terms of one element must
agree.  x-exponents are raw rational coordinates of a Gamma-vector.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from . import qq
from .algebra import AlgebraElement, AlgebraParams, _accumulate
from .errors import ArityError, ExpressionSyntaxError
from .witt import WittElement

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<xopen>x\[)
  | (?P<t>t)
  | (?P<d>d)
  | (?P<op>[-+*/^,\]])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind if kind != "op" else m.group(), m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _error(text: str, pos: int, message: str) -> ExpressionSyntaxError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ExpressionSyntaxError(message, line, col)


@dataclass
class TermAst:
    coeff: Fraction
    alpha: Optional[tuple]
    tpowers: dict
    d: Optional[int]
    pos: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise _error(self.text, self.tok.pos, f"expected {want}, got {got}")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        return int(self.take("num").text)

    def element(self) -> List[TermAst]:
        sign = 1
        if self.tok.kind == "-":
            self.take("-")
            sign = -1
        terms = [self.term(sign)]
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.take(self.tok.kind).kind == "+" else -1
            terms.append(self.term(sign))
        self.take("end")
        return terms

    def term(self, sign: int) -> TermAst:
        start = self.tok.pos
        coeff = Fraction(sign)
        ast = TermAst(coeff, None, {}, None, start)
        if self.tok.kind == "num":
            num = self.integer()
            den = 1
            if self.tok.kind == "/":
                self.take("/")
                den = self.integer()
                if den == 0:
                    raise _error(self.text, self.toks[self.i - 1].pos, "zero denominator")
            ast.coeff = coeff * Fraction(num, den)
        else:
            self.factor(ast)
        while self.tok.kind == "*":
            self.take("*")
            self.factor(ast)
        return ast

    def rational(self) -> Fraction:
        sign = 1
        if self.tok.kind == "-":
            self.take("-")
            sign = -1
        num = self.integer()
        den = 1
        if self.tok.kind == "/":
            self.take("/")
            den = self.integer()
            if den == 0:
                raise _error(self.text, self.toks[self.i - 1].pos, "zero denominator")
        return Fraction(sign * num, den)

    def factor(self, ast: TermAst) -> None:
        tok = self.tok
        if tok.kind == "xopen":
            self.take("xopen")
            coords = [self.rational()]
            while self.tok.kind == ",":
                self.take(",")
                coords.append(self.rational())
            self.take("]")
            coords = tuple(coords)
            if ast.alpha is None:
                ast.alpha = coords
            elif len(coords) != len(ast.alpha):
                raise ArityError("x-factors of different lengths in one term")
            else:
                ast.alpha = qq.vadd(ast.alpha, coords)
        elif tok.kind == "t":
            self.take("t")
            k = self.integer()
            e = 1
            if self.tok.kind == "^":
                self.take("^")
                e = self.integer()
            ast.tpowers[k] = ast.tpowers.get(k, 0) + e
        elif tok.kind == "d":
            self.take("d")
            if ast.d is not None:
                raise _error(self.text, tok.pos, "a term may carry at most one d-factor")
            ast.d = self.integer()
        else:
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise _error(self.text, tok.pos, f"expected a factor, got {got}")


def parse_terms(text: str) -> List[TermAst]:
    """Syntax-only parse into term records (no parameter checks)."""
    stripped = text.strip()
    if stripped == "0":
        return []
    return _Parser(text).element()


def parse(text: str, params: AlgebraParams) -> Union[AlgebraElement, WittElement]:
    """Parse text into an AlgebraElement (no d-factors) or a WittElement."""
    terms = parse_terms(text)
    kinds = {t.d is not None for t in terms}
    if len(kinds) > 1:
        raise ArityError("mixes terms with and without a d-factor")
    witt = kinds == {True}
    out: dict = {}
    for t in terms:
        alpha = t.alpha if t.alpha is not None else qq.zeros(params.n)
        if len(alpha) != params.n:
            raise ArityError(f"x[...] needs {params.n} entries, got {len(alpha)}")
        ivec = [0] * params.m
        for k, e in t.tpowers.items():
            if not 1 <= k <= params.m:
                raise ArityError(f"t{k} does not exist; variables are t1..t{params.m}")
            ivec[k - 1] += e
        if witt and not 1 <= t.d <= params.ell:
            raise ArityError(f"d{t.d} does not exist; derivations are d1..d{params.ell}")
        params.check_monomial(alpha, tuple(ivec))
        key = (alpha, tuple(ivec), t.d) if witt else (alpha, tuple(ivec))
        _accumulate(out, key, t.coeff)
    if witt:
        return WittElement._raw(params, out)
    return AlgebraElement._raw(params, out)


def parse_witt(text: str, params: AlgebraParams) -> WittElement:
    u = parse(text, params)
    if isinstance(u, AlgebraElement):
        if u:
            raise ArityError("expected a Witt element (terms need a d-factor)")
        return WittElement.zero(params)
    return u


def parse_algebra(text: str, params: AlgebraParams) -> AlgebraElement:
    u = parse(text, params)
    if isinstance(u, WittElement):
        if u:
            raise ArityError("expected an algebra element (no d-factors)")
        return AlgebraElement.zero(params)
    return u


def _factors(alpha, ivec, p) -> List[str]:
    out = []
    for k, e in enumerate(ivec, start=1):
        if e == 1:
            out.append(f"t{k}")
        elif e:
            out.append(f"t{k}^{e}")
    if any(alpha):
        out.append("x[" + ",".join(qq.fmt_q(a) for a in alpha) + "]")
    if p is not None:
        out.append(f"d{p}")
    return out


def format_element(u: Union[AlgebraElement, WittElement]) -> str:
    """Canonical text: terms in the global monomial order, unit coefficients
    elided, signs folded into the separators."""
    if not u.terms:
        return "0"
    pieces = []
    for key, c in u.sorted_terms():
        if len(key) == 3:
            alpha, ivec, p = key
        else:
            (alpha, ivec), p = key, None
        factors = _factors(alpha, ivec, p)
        mag = abs(c)
        if not factors:
            body = qq.fmt_q(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = qq.fmt_q(mag) + "*" + "*".join(factors)
        pieces.append((c < 0, body))
    neg, body = pieces[0]
    out = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out
