"""Endomorphism model: multilinear maps on a rank-d free module.

A degree-n element is a map A^n -> A stored as a dense tensor of d^(n+1)
exact scalars, indexed [out; in_1..in_n] and serialized row-major with the
output index slowest.  Partial composition substitutes one map into an input
slot of another and carries the Koszul sign (-1)^(i*|g|), |g| = deg(g) - 1.
"""

from __future__ import annotations

import random

from .errors import DegreeError, FormatError, PositionError, RingMismatchError
from .ring import Ring, check_same_ring, ring_from_token

MAX_DIM = 8


class EndoContext:
    """Model context for the endomorphism pre-operad of a rank-d module.

    ``sign_bug=True`` corrupts the composition sign (it uses the plain degree
    of g in the Koszul exponent instead of the shifted one).  It exists so the
    verification suite can demonstrate that its identity checks are able to
    fail; never enable it for real computations.
    """

    __slots__ = ("d", "ring", "sign_bug")

    def __init__(self, d: int, ring: Ring, *, sign_bug: bool = False):
        if not 1 <= d <= MAX_DIM:
            raise DegreeError(f"module rank must be in 1..{MAX_DIM}, got {d}")
        self.d = d
        self.ring = ring
        self.sign_bug = sign_bug

    @property
    def key(self) -> str:
        return f"endo:{self.d}"

    def __eq__(self, other):
        return (
            isinstance(other, EndoContext)
            and self.d == other.d
            and self.ring == other.ring
            and self.sign_bug == other.sign_bug
        )

    def __hash__(self):
        return hash(("endo", self.d, self.ring, self.sign_bug))

    def __repr__(self):
        return f"EndoContext(d={self.d}, ring={self.ring.token})"

    # -- element constructors -------------------------------------------------

    def element(self, arity: int, coeffs) -> "HomElement":
        return HomElement(self, arity, coeffs)

    def zero(self, degree: int) -> "HomElement":
        if degree < 0:
            raise DegreeError(f"no elements of degree {degree}")
        return HomElement(self, degree, [self.ring.zero] * self.d ** (degree + 1))

    def unit(self) -> "HomElement":
        d = self.d
        one, zero = self.ring.one, self.ring.zero
        return HomElement(self, 1, [one if o == i else zero for o in range(d) for i in range(d)])

    def random_element(self, degree: int, rng: random.Random) -> "HomElement":
        if degree < 0:
            raise DegreeError(f"no elements of degree {degree}")
        r = self.ring
        return HomElement(self, degree, [r.random(rng) for _ in range(self.d ** (degree + 1))])

    # -- partial composition ---------------------------------------------------

    def compose_at(self, f: "HomElement", i: int, g: "HomElement") -> "HomElement":
        if f.ctx is not self and f.ctx != self:
            raise RingMismatchError("left operand belongs to a different context")
        if g.ctx is not self and g.ctx != self:
            raise RingMismatchError("right operand belongs to a different context")
        m, n = f.arity, g.arity
        if m == 0:
            raise DegreeError("degree-0 element has no composition positions")
        if not 0 <= i <= m - 1:
            raise PositionError(f"position {i} out of range 0..{m - 1}")

        d = self.d
        exponent = i * n if self.sign_bug else i * (n - 1)
        negate = exponent % 2 == 1

        d_post = d ** (m - 1 - i)
        d_mid = d**n
        fo, go = f.coeffs, g.coeffs
        ring = self.ring
        out = [0] * (d ** (m + n))

        # result[op, mid, post] = sum_c f[op, c, post] * g[c, mid], with
        # op running over the fused (out, in_1..in_i) index block.
        for op in range(d ** (i + 1)):
            f_base = op * d * d_post
            r_base = op * d_mid * d_post
            for c in range(d):
                g_base = c * d_mid
                f_row = f_base + c * d_post
                for post in range(d_post):
                    fc = fo[f_row + post]
                    if not fc:
                        continue
                    r_off = r_base + post
                    for mid in range(d_mid):
                        out[r_off + mid * d_post] += fc * go[g_base + mid]

        p = ring.char
        if p:
            if negate:
                out = [(-v) % p for v in out]
            else:
                out = [v % p for v in out]
        elif negate:
            out = [-v for v in out]
        return HomElement(self, m + n - 1, out, _trusted=True)


class HomElement:
    """A multilinear map of a fixed arity, as a dense coefficient tensor."""

    __slots__ = ("ctx", "arity", "coeffs")

    def __init__(self, ctx: EndoContext, arity: int, coeffs, *, _trusted: bool = False):
        if arity < 0:
            raise DegreeError(f"negative arity {arity}")
        coeffs = tuple(coeffs)
        if not _trusted and len(coeffs) != ctx.d ** (arity + 1):
            raise FormatError(
                f"need {ctx.d ** (arity + 1)} coefficients for arity {arity}, dim {ctx.d}; "
                f"got {len(coeffs)}"
            )
        self.ctx = ctx
        self.arity = arity
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return self.arity

    @property
    def ring(self) -> Ring:
        return self.ctx.ring

    def is_zero(self) -> bool:
        is_zero = self.ctx.ring.is_zero
        return all(is_zero(c) for c in self.coeffs)

    def _check_compatible(self, other: "HomElement") -> None:
        if self.ctx != other.ctx:
            raise RingMismatchError("elements from different endomorphism contexts")
        if self.arity != other.arity:
            raise DegreeError(f"degree mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "HomElement") -> "HomElement":
        self._check_compatible(other)
        add = self.ctx.ring.add
        return HomElement(
            self.ctx, self.arity, [add(a, b) for a, b in zip(self.coeffs, other.coeffs)],
            _trusted=True,
        )

    def __sub__(self, other: "HomElement") -> "HomElement":
        self._check_compatible(other)
        sub = self.ctx.ring.sub
        return HomElement(
            self.ctx, self.arity, [sub(a, b) for a, b in zip(self.coeffs, other.coeffs)],
            _trusted=True,
        )

    def __neg__(self) -> "HomElement":
        neg = self.ctx.ring.neg
        return HomElement(self.ctx, self.arity, [neg(a) for a in self.coeffs], _trusted=True)

    def scale(self, c) -> "HomElement":
        mul = self.ctx.ring.mul
        return HomElement(self.ctx, self.arity, [mul(c, a) for a in self.coeffs], _trusted=True)

    def __eq__(self, other):
        return (
            isinstance(other, HomElement)
            and self.ctx == other.ctx
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.arity, self.coeffs))

    def __getitem__(self, multi_index) -> object:
        """Coefficient at [out, in_1, .., in_n]."""
        d = self.ctx.d
        off = 0
        for ix in multi_index:
            if not 0 <= ix < d:
                raise PositionError(f"index {ix} out of range for dim {d}")
            off = off * d + ix
        return self.coeffs[off]

    def eval(self, args) -> list:
        """Apply the multilinear map to a list of d-vectors of scalars."""
        if len(args) != self.arity:
            raise DegreeError(f"expected {self.arity} arguments, got {len(args)}")
        d = self.ctx.d
        for v in args:
            if len(v) != d:
                raise FormatError(f"argument vectors must have length {d}")
        ring = self.ctx.ring
        n = self.arity
        size = d**n
        out = []
        for k in range(d):
            acc = ring.zero
            base = k * size
            for flat in range(size):
                c = self.coeffs[base + flat]
                if ring.is_zero(c):
                    continue
                term = c
                rest = flat
                for j in range(n - 1, -1, -1):
                    term = ring.mul(term, args[j][rest % d])
                    rest //= d
                acc = ring.add(acc, term)
            out.append(acc)
        return out

    def describe(self):
        return self.to_json_obj()

    def to_json_obj(self) -> dict:
        r = self.ctx.ring
        return {
            "dim": self.ctx.d,
            "arity": self.arity,
            "ring": r.token,
            "coeffs": [r.fmt(c) for c in self.coeffs],
        }

    def __repr__(self):
        r = self.ctx.ring
        coeffs = ",".join(r.fmt(c) for c in self.coeffs)
        return f"Hom(d={self.ctx.d}, C^{self.arity}; [{coeffs}])"


def identity_hom(ctx: EndoContext) -> HomElement:
    return ctx.unit()


def random_hom(ctx: EndoContext, arity: int, seed: int) -> HomElement:
    """Seed-deterministic random element of the given arity."""
    return ctx.random_element(arity, random.Random(seed))


def hom_from_json(obj: dict, ctx: EndoContext | None = None) -> HomElement:
    """Load an element from its JSON form, checking it against ctx if given."""
    try:
        d = int(obj["dim"])
        arity = int(obj["arity"])
        ring = ring_from_token(obj["ring"])
        raw = obj["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed element object: {exc}") from exc
    if ctx is None:
        ctx = EndoContext(d, ring)
    else:
        if ctx.d != d:
            raise FormatError(f"element has dim {d}, context has dim {ctx.d}")
        check_same_ring(ctx.ring, ring)
    if not isinstance(raw, list):
        raise FormatError("coeffs must be a list of scalar strings")
    coeffs = [ctx.ring.parse(s) for s in raw]
    return HomElement(ctx, arity, coeffs)


def scalar_context(ring: Ring) -> EndoContext:
    """The rank-1 model, where degree-n elements are single scalars."""
    return EndoContext(1, ring)


def scalar_hom(ctx: EndoContext, degree: int, value) -> HomElement:
    """Convenience constructor for rank-1 elements (a scalar in C^degree)."""
    if ctx.d != 1:
        raise DegreeError("scalar elements exist only in the rank-1 model")
    if isinstance(value, int):
        value = ctx.ring.from_int(value)
    return HomElement(ctx, degree, [value])
