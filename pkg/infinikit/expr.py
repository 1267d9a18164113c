# infinikit/expr.py
"""Expression language shared by every subcommand.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'
    exponent := ['-'] INT | '(' ['-'] INT ['/' INT] ')' | 'n' after (-1)

Rational exponents need parentheses: `n^-1/2` is (n^-1)/2, `n^(-1/2)` is
the square root.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from infinikit import hyperseq as hs
from infinikit import levi_civita as lc
from infinikit.errors import (
    DivisionByZeroError,
    ExprSyntaxError,
    ModeMismatchError,
    PreconditionError,
)

MODES = ("lc", "seq", "poly")
FUNCTIONS = ("ln", "exp", "sqrt")
SYMBOLS = {"eps": "lc", "n": "seq", "x": "poly"}


# --- Tree -----------------------------------------------------------------------
@dataclass(frozen=True)
class Num:
    text: str

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Alt:
    """(-1)^n"""


@dataclass(frozen=True)
class Call:
    fn: str
    arg: Expr


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: Fraction


Expr = Union[Num, Sym, Alt, Call, Neg, BinOp, Pow]


# --- Tokens ---------------------------------------------------------------------
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line, line_start = line + 1, pos + 1
            pos += 1
        if pos >= len(text):
            tokens.append(Token("end", "", line, pos - line_start + 1))
            return tokens
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {text[pos]!r}",
                line,
                pos - line_start + 1,
                ("number", "name", "operator"),
            )
        kind = m.lastgroup or "op"
        tokens.append(Token(kind, m.group(kind), line, m.start(kind) - line_start + 1))
        pos = m.end()


class Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0

    # -------- helpers --------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def _fail(self, expected: tuple[str, ...]) -> ExprSyntaxError:
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        return ExprSyntaxError(f"unexpected {found}", t.line, t.column, expected)

    def _expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            raise self._fail((text,))
        return self._advance()

    # -------- grammar --------
    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise self._fail(("+", "-", "*", "/", "^", "end of input"))
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if not (self.tok.kind == "op" and self.tok.text == "^"):
            return base
        self._advance()
        if self.tok.kind == "name" and self.tok.text == "n":
            if base != Neg(Num("1")):
                raise self._fail(("integer", "(p/q)"))
            self._advance()
            return Alt()
        return Pow(base, self.exponent())

    def _int(self, sign: int = 1) -> int:
        if self.tok.kind != "num" or "." in self.tok.text:
            raise self._fail(("integer",))
        return sign * int(self._advance().text)

    def _signed_int(self) -> int:
        if self.tok.kind == "op" and self.tok.text == "-":
            self._advance()
            return self._int(-1)
        return self._int()

    def exponent(self) -> Fraction:
        if self.tok.kind == "op" and self.tok.text == "(":
            self._advance()
            num = self._signed_int()
            den = 1
            if self.tok.kind == "op" and self.tok.text == "/":
                self._advance()
                den = self._int()
                if den == 0:
                    raise ExprSyntaxError("zero denominator in exponent", self.tok.line, self.tok.column)
            self._expect(")")
            return Fraction(num, den)
        if self.tok.kind == "num" or (self.tok.kind == "op" and self.tok.text == "-"):
            return Fraction(self._signed_int())
        raise self._fail(("integer", "-", "(", "n"))

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self._advance()
            return Num(t.text)
        if t.kind == "name":
            self._advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                if t.text not in FUNCTIONS:
                    raise ExprSyntaxError(
                        f"unknown function {t.text!r}", t.line, t.column, FUNCTIONS
                    )
                self._advance()
                arg = self.expr()
                self._expect(")")
                return Call(t.text, arg)
            if t.text not in SYMBOLS:
                raise ExprSyntaxError(
                    f"unknown symbol {t.text!r}", t.line, t.column, tuple(SYMBOLS)
                )
            return Sym(t.text)
        if t.kind == "op" and t.text == "(":
            self._advance()
            inner = self.expr()
            self._expect(")")
            return inner
        raise self._fail(("number", "name", "(", "-"))


def parse(text: str) -> Expr:
    return Parser(text).parse()


# --- Printing -------------------------------------------------------------------
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, (Pow, Alt)):
        return 4
    return 5


def _wrap(e: Expr, below: int) -> str:
    text = unparse(e)
    return f"({text})" if _prec(e) < below else text


def _format_exponent(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"({r.numerator}/{r.denominator})"


def unparse(e: Expr) -> str:
    """Canonical text; parse(unparse(t)) == t."""
    if isinstance(e, Num):
        return e.text
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Alt):
        return "(-1)^n"
    if isinstance(e, Call):
        return f"{e.fn}({unparse(e.arg)})"
    if isinstance(e, Neg):
        return f"-{_wrap(e.operand, 3)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 5)}^{_format_exponent(e.exponent)}"
    p = _PREC[e.op]
    return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"


# --- Evaluation -----------------------------------------------------------------
def symbols_of(e: Expr) -> set[str]:
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Alt):
        return {"(-1)^n"}
    if isinstance(e, Call):
        return {e.fn} | symbols_of(e.arg)
    if isinstance(e, Neg):
        return symbols_of(e.operand)
    if isinstance(e, Pow):
        return symbols_of(e.base)
    if isinstance(e, BinOp):
        return symbols_of(e.left) | symbols_of(e.right)
    return set()


def _symbol_mode(symbol: str) -> str:
    return SYMBOLS.get(symbol, "seq")


def infer_mode(e: Expr) -> str:
    """lc for eps, seq for n / ln / (-1)^n, poly for x; plain numbers are lc."""
    modes = {_symbol_mode(s) for s in symbols_of(e)}
    if len(modes) > 1:
        first = sorted(modes)[0]
        offender = sorted(s for s in symbols_of(e) if _symbol_mode(s) != first)[0]
        raise ModeMismatchError(offender, first)
    return modes.pop() if modes else "lc"


def eval_expr(e: Expr, mode: str) -> lc.LCNumber | hs.RateSeq | lc.Polynomial:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    return {"lc": _eval_lc, "seq": _eval_seq, "poly": _eval_poly}[mode](e)


def _mismatch(e: Expr, mode: str) -> ModeMismatchError:
    if isinstance(e, Sym):
        return ModeMismatchError(e.name, mode)
    if isinstance(e, Call):
        return ModeMismatchError(e.fn, mode)
    return ModeMismatchError("(-1)^n", mode)


def _eval_lc(e: Expr) -> lc.LCNumber:
    if isinstance(e, Num):
        return lc.constant(e.value)
    if isinstance(e, Sym) and e.name == "eps":
        return lc.EPS
    if isinstance(e, (Sym, Alt, Call)):
        raise _mismatch(e, "lc")
    if isinstance(e, Neg):
        return lc.neg(_eval_lc(e.operand))
    if isinstance(e, Pow):
        base = _eval_lc(e.base)
        if e.exponent.denominator == 1:
            return lc.power(base, int(e.exponent))
        if len(base.terms) == 1 and base.terms[0][1] == 1:
            return lc.monomial(1, base.terms[0][0] * e.exponent)
        raise PreconditionError(
            f"rational powers are exact only for eps^q monomials, got {lc.format_lc(base)}"
        )
    a, b = _eval_lc(e.left), _eval_lc(e.right)
    if e.op == "+":
        return lc.add(a, b)
    if e.op == "-":
        return lc.sub(a, b)
    if e.op == "*":
        return lc.mul(a, b)
    return lc.div(a, b)


_SEQ_FUNCTIONS = {"ln": math.log, "exp": math.exp, "sqrt": math.sqrt}


def _eval_seq(e: Expr) -> hs.RateSeq:
    if isinstance(e, Num):
        return hs.constant(e.value)
    if isinstance(e, Sym):
        if e.name != "n":
            raise _mismatch(e, "seq")
        return hs.N
    if isinstance(e, Alt):
        return hs.ALTERNATING
    if isinstance(e, Call):
        if e.fn == "ln" and e.arg == Sym("n"):
            return hs.LN
        return hs.extend(_SEQ_FUNCTIONS[e.fn], _eval_seq(e.arg))
    if isinstance(e, Neg):
        return hs.neg(_eval_seq(e.operand))
    if isinstance(e, Pow):
        return hs.extend(hs.Power(e.exponent), _eval_seq(e.base))
    a, b = _eval_seq(e.left), _eval_seq(e.right)
    if e.op == "+":
        return hs.termwise_add(a, b)
    if e.op == "-":
        return hs.sub(a, b)
    if e.op == "*":
        return hs.termwise_mul(a, b)
    return hs.termwise_mul(a, hs.reciprocal(b))


def _eval_poly(e: Expr) -> lc.Polynomial:
    if isinstance(e, Num):
        return lc.Polynomial([e.value])
    if isinstance(e, Sym) and e.name == "x":
        return lc.Polynomial([0, 1])
    if isinstance(e, (Sym, Alt, Call)):
        raise _mismatch(e, "poly")
    if isinstance(e, Neg):
        return -_eval_poly(e.operand)
    if isinstance(e, Pow):
        if e.exponent.denominator != 1 or e.exponent < 0:
            raise PreconditionError(f"polynomials take nonnegative integer powers, got {e.exponent}")
        return _eval_poly(e.base) ** int(e.exponent)
    a, b = _eval_poly(e.left), _eval_poly(e.right)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if b.degree > 0:
        raise PreconditionError("polynomials divide by nonzero constants only")
    if b.degree < 0:
        raise DivisionByZeroError("division by the zero polynomial")
    return a * (1 / b.coeffs[0])


def evaluate(text: str, mode: str = "auto") -> lc.LCNumber | hs.RateSeq | lc.Polynomial:
    tree = parse(text)
    return eval_expr(tree, infer_mode(tree) if mode == "auto" else mode)
