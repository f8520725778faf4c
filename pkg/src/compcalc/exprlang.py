"""Surface expression language for calculus terms.

Grammar (loosest to tightest binding):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*          # literal * x scales; x * y is the
                                             # total composition
    factor  := '-' factor | comp
    comp    := primary ('o_<k>' primary)*    # partial composition, left-assoc
    primary := INT ['/' INT] | 'I' | fn '(' args ')' | name | '(' expr ')'

Functions: cup(f,g), brace(h;f;g), assoc(h;f;g), comm(f,g), delta(f),
dev_total(f,g), dev_brace(h;f;g), lam(k;f;g), lamp(k;f;g).  ``I`` is the
unit; ``delta``/``cup``/``lam`` use the mu bound in the session.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import calculus as cal
from .errors import CompCalcError, DegreeError, FormatError, PositionError, RingMismatchError


class ParseError(CompCalcError, ValueError):
    def __init__(self, offset: int, expected: str, got: str):
        self.offset = offset
        self.expected = expected
        self.got = got
        super().__init__(f"syntax error at offset {offset}: expected {expected}, got {got}")


class EvalError(CompCalcError, ValueError):
    def __init__(self, message: str, subterm: str = ""):
        self.subterm = subterm
        if subterm:
            message = f"{message} (in subterm '{subterm}')"
        super().__init__(message)


# -- AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class CompAt:
    left: object
    index: int
    right: object


@dataclass(frozen=True)
class Cup:
    left: object
    right: object


@dataclass(frozen=True)
class Total:
    left: object
    right: object


@dataclass(frozen=True)
class Braces:
    outer: object
    first: object
    second: object


@dataclass(frozen=True)
class Assoc:
    outer: object
    first: object
    second: object


@dataclass(frozen=True)
class Comm:
    left: object
    right: object


@dataclass(frozen=True)
class Delta:
    arg: object


@dataclass(frozen=True)
class DevTotal:
    left: object
    right: object


@dataclass(frozen=True)
class DevBraces:
    outer: object
    first: object
    second: object


@dataclass(frozen=True)
class Lambda:
    k: int
    left: object
    right: object


@dataclass(frozen=True)
class LambdaPrime:
    k: int
    left: object
    right: object


@dataclass(frozen=True)
class ScalarMul:
    num: int
    den: int
    arg: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


_FUNCTIONS = {
    "cup": (Cup, 2, ","),
    "comm": (Comm, 2, ","),
    "delta": (Delta, 1, ","),
    "dev_total": (DevTotal, 2, ","),
    "brace": (Braces, 3, ";"),
    "assoc": (Assoc, 3, ";"),
    "dev_brace": (DevBraces, 3, ";"),
    "lam": (Lambda, 3, ";"),
    "lamp": (LambdaPrime, 3, ";"),
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<comp>o_(?P<compix>\d+))|(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<punct>[()+\-*/,;]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            off = len(text) - len(stripped)
            raise ParseError(off, "a token", repr(stripped[0]))
        if m.lastgroup is None and not m.group().strip():
            pos = m.end()
            continue
        start = m.start() + (len(m.group()) - len(m.group().lstrip()))
        if m.group("comp"):
            tokens.append(("comp", int(m.group("compix")), start))
        elif m.group("int"):
            tokens.append(("int", int(m.group("int")), start))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), start))
        else:
            tokens.append((m.group("punct"), m.group("punct"), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Lit:
    """A numeric literal waiting to scale an element expression."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        self.num = num
        self.den = den


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, expected: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(tok[2], expected, self._describe(tok))
        return self.advance()

    @staticmethod
    def _describe(tok) -> str:
        if tok[0] == "end":
            return "end of input"
        return repr(str(tok[1]))

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(tok[2], "end of input or an operator", self._describe(tok))
        if isinstance(e, _Lit):
            raise ParseError(0, "an element expression", "a bare scalar literal")
        return e

    def expr(self):
        left = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            right = self.term()
            left = self._as_element(left)
            right = self._as_element(right)
            if op == "-":
                right = ScalarMul(-1, 1, right)
            left = Add(left, right)
        return left

    def term(self):
        left = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            right = self.factor()
            if isinstance(left, _Lit) and isinstance(right, _Lit):
                left = _Lit(left.num * right.num, left.den * right.den)
            elif isinstance(left, _Lit):
                left = ScalarMul(left.num, left.den, right)
            elif isinstance(right, _Lit):
                left = ScalarMul(right.num, right.den, left)
            else:
                left = Total(left, right)
        return left

    def factor(self):
        tok = self.peek()
        if tok[0] == "-":
            self.advance()
            inner = self.factor()
            if isinstance(inner, _Lit):
                return _Lit(-inner.num, inner.den)
            return ScalarMul(-1, 1, inner)
        return self.comp()

    def comp(self):
        left = self.primary()
        while self.peek()[0] == "comp":
            tok = self.advance()
            right = self.primary()
            left = CompAt(self._as_element(left), tok[1], self._as_element(right))
        return left

    def primary(self):
        tok = self.peek()
        if tok[0] == "int":
            self.advance()
            num = tok[1]
            if self.peek()[0] == "/":
                self.advance()
                den_tok = self.expect("int", "a denominator")
                if den_tok[1] == 0:
                    raise ParseError(den_tok[2], "a nonzero denominator", "0")
                return _Lit(num, den_tok[1])
            return _Lit(num)
        if tok[0] == "(":
            self.advance()
            e = self.expr()
            self.expect(")", "')'")
            return e
        if tok[0] == "name":
            self.advance()
            name = tok[1]
            if name == "I":
                return Unit()
            if name in _FUNCTIONS:
                return self.call(name, tok[2])
            return Var(name)
        raise ParseError(tok[2], "expression", self._describe(tok))

    def call(self, name: str, offset: int):
        node, arity, sep = _FUNCTIONS[name]
        self.expect("(", f"'(' after {name!r}")
        args = []
        index = None
        if name in ("lam", "lamp"):
            k_tok = self.expect("int", "an integer index")
            index = k_tok[1]
            self.expect(sep, f"'{sep}'")
            arity -= 1
        while True:
            args.append(self._as_element(self.expr()))
            if len(args) == arity:
                break
            self.expect(sep, f"'{sep}'")
        self.expect(")", f"')' closing {name!r}")
        if index is not None:
            return node(index, *args)
        return node(*args)

    def _as_element(self, e):
        if isinstance(e, _Lit):
            tok = self.peek()
            raise ParseError(tok[2], "an element expression", "a bare scalar literal")
        return e


def parse(text: str):
    """Parse the expression language into an AST."""
    return _Parser(text).parse()


# -- canonical printer -----------------------------------------------------------


def print_expr(e) -> str:
    """Canonical text form; parsing it back yields the identical AST."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unit):
        return "I"
    if isinstance(e, CompAt):
        return f"{_atom(e.left)} o_{e.index} {_atom(e.right)}"
    if isinstance(e, Cup):
        return f"cup({print_expr(e.left)}, {print_expr(e.right)})"
    if isinstance(e, Total):
        return f"{_atom(e.left)} * {_atom(e.right)}"
    if isinstance(e, Braces):
        return f"brace({print_expr(e.outer)}; {print_expr(e.first)}; {print_expr(e.second)})"
    if isinstance(e, Assoc):
        return f"assoc({print_expr(e.outer)}; {print_expr(e.first)}; {print_expr(e.second)})"
    if isinstance(e, Comm):
        return f"comm({print_expr(e.left)}, {print_expr(e.right)})"
    if isinstance(e, Delta):
        return f"delta({print_expr(e.arg)})"
    if isinstance(e, DevTotal):
        return f"dev_total({print_expr(e.left)}, {print_expr(e.right)})"
    if isinstance(e, DevBraces):
        return f"dev_brace({print_expr(e.outer)}; {print_expr(e.first)}; {print_expr(e.second)})"
    if isinstance(e, Lambda):
        return f"lam({e.k}; {print_expr(e.left)}; {print_expr(e.right)})"
    if isinstance(e, LambdaPrime):
        return f"lamp({e.k}; {print_expr(e.left)}; {print_expr(e.right)})"
    if isinstance(e, ScalarMul):
        lit = str(e.num) if e.den == 1 else f"{e.num}/{e.den}"
        if e.num < 0:
            lit = f"-{abs(e.num)}" if e.den == 1 else f"-{abs(e.num)}/{e.den}"
        return f"{lit} * {_atom(e.arg)}"
    if isinstance(e, Add):
        return f"{print_expr(e.left)} + {print_expr(e.right)}"
    raise TypeError(f"not an expression node: {e!r}")


def _atom(e) -> str:
    if isinstance(e, (Var, Unit, Cup, Braces, Assoc, Comm, Delta, DevTotal, DevBraces, Lambda, LambdaPrime)):
        return print_expr(e)
    return f"({print_expr(e)})"


# -- evaluation -------------------------------------------------------------------


@dataclass
class Session:
    """Evaluation state: a model context, bound variables, optional mu."""

    ctx: object
    bindings: dict
    mu: object = None


def eval_expr(session: Session, e):
    """Evaluate an AST against the session; exact, referentially transparent."""
    try:
        return _eval(session, e)
    except (DegreeError, PositionError, RingMismatchError, FormatError) as exc:
        raise EvalError(str(exc), print_expr(e)) from exc


def _require_mu(session: Session, e):
    if session.mu is None:
        raise EvalError("no mu of degree 2 bound in the session", print_expr(e))
    return session.mu


def _eval(session: Session, e):
    if isinstance(e, Var):
        try:
            return session.bindings[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}", print_expr(e)) from None
    if isinstance(e, Unit):
        return session.ctx.unit()
    if isinstance(e, CompAt):
        left = _eval(session, e.left)
        right = _eval(session, e.right)
        try:
            return cal.compose_at(left, e.index, right)
        except (DegreeError, PositionError, RingMismatchError) as exc:
            raise EvalError(str(exc), print_expr(e)) from exc
    if isinstance(e, Cup):
        return cal.cup(_require_mu(session, e), _eval(session, e.left), _eval(session, e.right))
    if isinstance(e, Total):
        return cal.total(_eval(session, e.left), _eval(session, e.right))
    if isinstance(e, Braces):
        return cal.braces(
            _eval(session, e.outer), _eval(session, e.first), _eval(session, e.second)
        )
    if isinstance(e, Assoc):
        return cal.associator(
            _eval(session, e.outer), _eval(session, e.first), _eval(session, e.second)
        )
    if isinstance(e, Comm):
        return cal.commutator(_eval(session, e.left), _eval(session, e.right))
    if isinstance(e, Delta):
        return cal.delta(_require_mu(session, e), _eval(session, e.arg))
    if isinstance(e, DevTotal):
        return cal.dev_total(
            _require_mu(session, e), _eval(session, e.left), _eval(session, e.right)
        )
    if isinstance(e, DevBraces):
        return cal.dev_braces(
            _require_mu(session, e),
            _eval(session, e.outer),
            _eval(session, e.first),
            _eval(session, e.second),
        )
    if isinstance(e, Lambda):
        return cal.lambda_aux(
            _require_mu(session, e), _eval(session, e.left), _eval(session, e.right), e.k
        )
    if isinstance(e, LambdaPrime):
        return cal.lambda_prime_aux(
            _require_mu(session, e), _eval(session, e.left), _eval(session, e.right), e.k
        )
    if isinstance(e, ScalarMul):
        arg = _eval(session, e.arg)
        try:
            c = session.ctx.ring.from_fraction(e.num, e.den)
        except FormatError as exc:
            raise EvalError(str(exc), print_expr(e)) from exc
        return arg.scale(c)
    if isinstance(e, Add):
        left = _eval(session, e.left)
        right = _eval(session, e.right)
        try:
            return left + right
        except (DegreeError, RingMismatchError) as exc:
            raise EvalError(str(exc), print_expr(e)) from exc
    raise TypeError(f"not an expression node: {e!r}")
