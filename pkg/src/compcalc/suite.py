"""Randomized, seeded verification of every identity of the calculus.

Each identity is a named check that draws random elements from a model
context and tests an exact equality (or a family of them, e.g. one per
composition position).  A run evaluates a grid of (identity, model, ring)
cells; every trial derives its own RNG from the master seed through SHA-256,
so runs are reproducible bit for bit and independent of process state.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass

from . import calculus as cal
from .endomodel import EndoContext
from .errors import FormatError
from .freemodel import (
    FreeContext,
    Signature,
    default_signature,
    load_signature,
    random_representation,
)
from .hochschild import builtin_algebra, mu_from_spec
from .ring import QQ, IntegersMod, Ring, koszul_sign, ring_from_token, sign_pow


@dataclass(frozen=True)
class ModelSpec:
    """A model to instantiate per ring: endo:<d> or free:<signature>."""

    kind: str  # "endo" | "free"
    d: int = 0
    signature: Signature | None = None

    @property
    def key(self) -> str:
        if self.kind == "endo":
            return f"endo:{self.d}"
        return f"free:{self.signature.key}"

    def build(self, ring: Ring, *, sign_bug: bool = False):
        if self.kind == "endo":
            return EndoContext(self.d, ring, sign_bug=sign_bug)
        return FreeContext(self.signature, ring)


def parse_model_token(token: str) -> ModelSpec:
    token = token.strip()
    if token.startswith("endo:"):
        try:
            d = int(token[5:])
        except ValueError as exc:
            raise FormatError(f"bad model token {token!r}") from exc
        return ModelSpec(kind="endo", d=d)
    if token == "free":
        return ModelSpec(kind="free", signature=default_signature())
    if token.startswith("free:"):
        return ModelSpec(kind="free", signature=load_signature(token[5:]))
    raise FormatError(f"unknown model token {token!r}; use endo:<d>, free, or free:<sigfile>")


def default_model_specs() -> list[ModelSpec]:
    return [
        ModelSpec(kind="endo", d=1),
        ModelSpec(kind="endo", d=2),
        ModelSpec(kind="free", signature=default_signature()),
    ]


def default_rings() -> list[Ring]:
    return [QQ, IntegersMod(2), IntegersMod(3)]


@dataclass
class IdentityReport:
    identity: str
    model: str
    ring: str
    trials: int
    passes: int
    seed: int
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.passes == self.trials

    def to_json_obj(self) -> dict:
        return {
            "identity": self.identity,
            "model": self.model,
            "ring": self.ring,
            "trials": self.trials,
            "passes": self.passes,
            "seed": self.seed,
            "counterexample": self.counterexample,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


# -- random input helpers -------------------------------------------------------


def _min_degree(ctx) -> int:
    # Degree 0 exists in the endomorphism model only (arity-0 tensors).
    return 0 if isinstance(ctx, EndoContext) else 1


def _deg(rng, lo: int, max_degree: int) -> int:
    return rng.randint(lo, max(lo, max_degree))


def _el(ctx, rng, degree: int):
    return ctx.random_element(degree, rng)


def _cx(case: str, inputs: dict, lhs, rhs) -> dict:
    def show(v):
        return v.describe() if hasattr(v, "describe") else v

    return {
        "case": case,
        "inputs": {k: show(v) for k, v in inputs.items()},
        "lhs": show(lhs),
        "rhs": show(rhs),
    }


# -- identity checks -------------------------------------------------------------
# Each check returns None on success or a counterexample dict on failure.


def _check_relation_b(ctx, rng, maxd):
    lo = _min_degree(ctx)
    h = _el(ctx, rng, _deg(rng, 2, maxd))
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    ks = koszul_sign(ctx.ring, cal.desusp(f), cal.desusp(g))
    for i in range(1, cal.desusp(h) + 1):
        hf = ctx.compose_at(h, i, f)
        for j in range(0, i):
            lhs = ctx.compose_at(hf, j, g)
            rhs = ctx.compose_at(ctx.compose_at(h, j, g), i + cal.desusp(g), f).scale(ks)
            if lhs != rhs:
                return _cx(f"(i,j)=({i},{j})", {"h": h, "f": f, "g": g}, lhs, rhs)
    return None


def _check_relation_a(ctx, rng, maxd):
    lo = _min_degree(ctx)
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    for i in range(0, cal.desusp(h) + 1):
        hf = ctx.compose_at(h, i, f)
        for j in range(i, i + cal.desusp(f) + 1):
            lhs = ctx.compose_at(hf, j, g)
            rhs = ctx.compose_at(h, i, ctx.compose_at(f, j - i, g))
            if lhs != rhs:
                return _cx(f"(i,j)=({i},{j})", {"h": h, "f": f, "g": g}, lhs, rhs)
    return None


def _check_relation_g(ctx, rng, maxd):
    lo = _min_degree(ctx)
    h = _el(ctx, rng, _deg(rng, 2, maxd))
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    ks = koszul_sign(ctx.ring, cal.desusp(f), cal.desusp(g))
    for i in range(0, cal.desusp(h)):
        hf = ctx.compose_at(h, i, f)
        for j in range(i + f.degree, cal.desusp(f) + cal.desusp(h) + 1):
            lhs = ctx.compose_at(hf, j, g)
            rhs = ctx.compose_at(ctx.compose_at(h, j - cal.desusp(f), g), i, f).scale(ks)
            if lhs != rhs:
                return _cx(f"(i,j)=({i},{j})", {"h": h, "f": f, "g": g}, lhs, rhs)
    return None


def _check_unit_axioms(ctx, rng, maxd):
    lo = _min_degree(ctx)
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    unit = ctx.unit()
    left = ctx.compose_at(unit, 0, f)
    if left != f:
        return _cx("I o_0 f", {"f": f}, left, f)
    for i in range(f.degree):
        right = ctx.compose_at(f, i, unit)
        if right != f:
            return _cx(f"f o_{i} I", {"f": f}, right, f)
    return None


def _check_cup_unit_forms(ctx, rng, maxd):
    lo = _min_degree(ctx)
    ring = ctx.ring
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    unit = ctx.unit()
    lhs = ctx.compose_at(mu, 0, f)
    rhs = cal.cup(mu, f, unit).scale(sign_pow(ring, f.degree))
    if lhs != rhs:
        return _cx("mu o_0 f = (-1)^f f~I", {"mu": mu, "f": f}, lhs, rhs)
    lhs = ctx.compose_at(mu, 1, f)
    rhs = -cal.cup(mu, unit, f)
    if lhs != rhs:
        return _cx("mu o_1 f = -I~f", {"mu": mu, "f": f}, lhs, rhs)
    lhs = cal.cup(mu, f, g)
    rhs = ctx.compose_at(ctx.compose_at(mu, 1, g), 0, f).scale(
        ring.neg(koszul_sign(ring, cal.desusp(f), g.degree))
    )
    if lhs != rhs:
        return _cx("f~g via mu o_1 g", {"mu": mu, "f": f, "g": g}, lhs, rhs)
    return None


def _check_cup_compose(ctx, rng, maxd):
    lo = _min_degree(ctx)
    ring = ctx.ring
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    h = _el(ctx, rng, _deg(rng, lo, maxd))
    fg = cal.cup(mu, f, g)
    for j in range(f.degree + g.degree):
        lhs = ctx.compose_at(fg, j, h)
        if j <= cal.desusp(f):
            rhs = cal.cup(mu, ctx.compose_at(f, j, h), g).scale(
                koszul_sign(ring, g.degree, cal.desusp(h))
            )
        else:
            rhs = cal.cup(mu, f, ctx.compose_at(g, j - f.degree, h))
        if lhs != rhs:
            return _cx(f"j={j}", {"mu": mu, "f": f, "g": g, "h": h}, lhs, rhs)
    return None


def _check_cup_total_derivation(ctx, rng, maxd):
    ring = ctx.ring
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.total(cal.cup(mu, f, g), h)
    rhs = cal.cup(mu, f, cal.total(g, h)) + cal.cup(mu, cal.total(f, h), g).scale(
        koszul_sign(ring, cal.desusp(h), g.degree)
    )
    return None if lhs == rhs else _cx("", {"mu": mu, "f": f, "g": g, "h": h}, lhs, rhs)


def _check_getzler(ctx, rng, maxd):
    ring = ctx.ring
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.associator(h, f, g)
    rhs = cal.braces(h, f, g) + cal.braces(h, g, f).scale(
        koszul_sign(ring, cal.desusp(f), cal.desusp(g))
    )
    return None if lhs == rhs else _cx("", {"h": h, "f": f, "g": g}, lhs, rhs)


def _check_gerstenhaber(ctx, rng, maxd):
    ring = ctx.ring
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.associator(h, f, g)
    rhs = cal.associator(h, g, f).scale(koszul_sign(ring, cal.desusp(f), cal.desusp(g)))
    return None if lhs == rhs else _cx("", {"h": h, "f": f, "g": g}, lhs, rhs)


def _check_cup_braces(ctx, rng, maxd):
    lo = _min_degree(ctx)
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    lhs = cal.cup(mu, f, g)
    rhs = cal.braces(mu, f, g).scale(sign_pow(ctx.ring, f.degree))
    return None if lhs == rhs else _cx("", {"mu": mu, "f": f, "g": g}, lhs, rhs)


def _check_jacobi(ctx, rng, maxd):
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    j = cal.jacobian(f, g, h)
    zero = ctx.zero(j.degree)
    return None if j.is_zero() else _cx("", {"f": f, "g": g, "h": h}, j, zero)


def _check_square_zero_even(ctx, rng, maxd):
    # |f| even means odd degree.
    degree = rng.choice([n for n in range(1, max(maxd, 1) + 1, 2)])
    f = _el(ctx, rng, degree)
    c = cal.commutator(f, f)
    return None if c.is_zero() else _cx("[f,f]", {"f": f}, c, ctx.zero(c.degree))


def _check_cube_zero_odd(ctx, rng, maxd):
    # |f| odd means even degree >= 2.
    evens = [n for n in range(2, max(maxd, 2) + 1, 2)]
    f = _el(ctx, rng, rng.choice(evens))
    c = cal.commutator(cal.commutator(f, f), f)
    return None if c.is_zero() else _cx("[[f,f],f]", {"f": f}, c, ctx.zero(c.degree))


def _check_antisymmetry(ctx, rng, maxd):
    ring = ctx.ring
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.commutator(f, g)
    rhs = cal.commutator(g, f).scale(
        ring.neg(koszul_sign(ring, cal.desusp(f), cal.desusp(g)))
    )
    return None if lhs == rhs else _cx("", {"f": f, "g": g}, lhs, rhs)


def _check_coboundary_cup_form(ctx, rng, maxd):
    lo = _min_degree(ctx)
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    lhs = cal.delta_via_cup(mu, f)
    rhs = cal.delta(mu, f)
    return None if lhs == rhs else _cx("", {"mu": mu, "f": f}, lhs, rhs)


def _check_coboundary_square(ctx, rng, maxd):
    # delta^2 f = [f, mu . mu]; holds for arbitrary (non-associative) mu.
    lo = _min_degree(ctx)
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, lo, maxd))
    lhs = cal.delta(mu, cal.delta(mu, f))
    rhs = cal.commutator(f, cal.total(mu, mu))
    return None if lhs == rhs else _cx("", {"mu": mu, "f": f}, lhs, rhs)


def _check_coboundary_square_zero(ctx, rng, maxd):
    # Associative mu (mu . mu = 0) must give delta^2 = 0 on the nose.
    if ctx.d == 2 and rng.randrange(2):
        mu = mu_from_spec(builtin_algebra("dual", ctx.ring), ctx)
    else:
        # diagonal algebra K^d: e_i e_j = delta_ij e_i
        one, zero = ctx.ring.one, ctx.ring.zero
        d = ctx.d
        mu = ctx.element(
            2, [one if i == j == k else zero for k in range(d) for i in range(d) for j in range(d)]
        )
    musq = cal.total(mu, mu)
    if not musq.is_zero():
        return _cx("mu.mu", {"mu": mu}, musq, ctx.zero(3))
    f = _el(ctx, rng, _deg(rng, 0, maxd))
    dd = cal.delta(mu, cal.delta(mu, f))
    return None if dd.is_zero() else _cx("delta^2 f", {"mu": mu, "f": f}, dd, ctx.zero(dd.degree))


def _check_dev_total_cup(ctx, rng, maxd):
    ring = ctx.ring
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.dev_total(mu, f, g).scale(sign_pow(ring, cal.desusp(g)))
    rhs = cal.cup(mu, f, g) - cal.cup(mu, g, f).scale(
        koszul_sign(ring, f.degree, g.degree)
    )
    return None if lhs == rhs else _cx("", {"mu": mu, "f": f, "g": g}, lhs, rhs)


def _check_aux_compose(ctx, rng, maxd):
    lo = _min_degree(ctx)
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    dg = cal.delta(mu, g)
    for i in range(f.degree):
        lhs = cal.delta(mu, ctx.compose_at(f, i, g)) - ctx.compose_at(f, i, dg)
        rhs = cal.lambda_aux(mu, f, g, i + 1) + cal.lambda_prime_aux(mu, f, g, i + 1)
        if lhs != rhs:
            return _cx(f"i={i}", {"mu": mu, "f": f, "g": g}, lhs, rhs)
    return None


def _check_aux_interior(ctx, rng, maxd):
    lo = _min_degree(ctx)
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, 2, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    df = cal.delta(mu, f)
    sg = sign_pow(ctx.ring, cal.desusp(g))
    for i in range(1, f.degree):
        lhs = ctx.compose_at(df, i, g).scale(sg)
        rhs = cal.lambda_aux(mu, f, g, i) + cal.lambda_prime_aux(mu, f, g, i + 1)
        if lhs != rhs:
            return _cx(f"i={i}", {"mu": mu, "f": f, "g": g}, lhs, rhs)
    return None


def _check_aux_boundary(ctx, rng, maxd):
    lo = _min_degree(ctx)
    mu = _el(ctx, rng, 2)
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, lo, maxd))
    lhs = cal.dev_total(mu, f, g)
    rhs = -cal.lambda_aux(mu, f, g, 0) - cal.lambda_prime_aux(mu, f, g, f.degree + 1)
    return None if lhs == rhs else _cx("", {"mu": mu, "f": f, "g": g}, lhs, rhs)


def _check_dev_braces_cup(ctx, rng, maxd):
    ring = ctx.ring
    mu = _el(ctx, rng, 2)
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.dev_braces(mu, h, f, g).scale(sign_pow(ring, cal.desusp(g)))
    rhs = (
        cal.cup(mu, cal.total(h, f), g)
        + cal.cup(mu, f, cal.total(h, g)).scale(koszul_sign(ring, cal.desusp(h), f.degree))
        - cal.total(h, cal.cup(mu, f, g))
    )
    return None if lhs == rhs else _cx("", {"mu": mu, "h": h, "f": f, "g": g}, lhs, rhs)


def _check_dev_braces_commutator(ctx, rng, maxd):
    ring = ctx.ring
    mu = _el(ctx, rng, 2)
    h = _el(ctx, rng, _deg(rng, 1, maxd))
    f = _el(ctx, rng, _deg(rng, 1, maxd))
    g = _el(ctx, rng, _deg(rng, 1, maxd))
    lhs = cal.dev_braces(mu, h, f, g).scale(sign_pow(ring, cal.desusp(g)))
    rhs = (
        cal.cup(mu, cal.commutator(h, f), g)
        + cal.cup(mu, f, cal.commutator(h, g)).scale(
            koszul_sign(ring, cal.desusp(h), f.degree)
        )
        - cal.commutator(h, cal.cup(mu, f, g))
    )
    return None if lhs == rhs else _cx("", {"mu": mu, "h": h, "f": f, "g": g}, lhs, rhs)


def _check_bilinearity(ctx, rng, maxd):
    ring = ctx.ring
    c = ring.random_nonzero(rng)
    op = rng.choice(["compose", "cup0", "cup1", "total", "braces", "commutator"])
    if op == "compose":
        a = _deg(rng, 1, maxd)
        b = _deg(rng, _min_degree(ctx), maxd)
        i = rng.randrange(a)
        f, f2 = _el(ctx, rng, a), _el(ctx, rng, a)
        g, g2 = _el(ctx, rng, b), _el(ctx, rng, b)
        lhs = ctx.compose_at(f + f2.scale(c), i, g)
        rhs = ctx.compose_at(f, i, g) + ctx.compose_at(f2, i, g).scale(c)
        if lhs != rhs:
            return _cx(f"left slot, i={i}", {"f": f, "f'": f2, "g": g, "c": ring.fmt(c)}, lhs, rhs)
        lhs = ctx.compose_at(f, i, g + g2.scale(c))
        rhs = ctx.compose_at(f, i, g) + ctx.compose_at(f, i, g2).scale(c)
        if lhs != rhs:
            return _cx(f"right slot, i={i}", {"f": f, "g": g, "g'": g2, "c": ring.fmt(c)}, lhs, rhs)
        return None
    if op in ("cup0", "cup1"):
        mu = _el(ctx, rng, 2)
        a, b = _deg(rng, 1, maxd), _deg(rng, 1, maxd)
        f, f2 = _el(ctx, rng, a), _el(ctx, rng, a)
        g = _el(ctx, rng, b)
        if op == "cup0":
            lhs = cal.cup(mu, f + f2.scale(c), g)
            rhs = cal.cup(mu, f, g) + cal.cup(mu, f2, g).scale(c)
        else:
            lhs = cal.cup(mu, g, f + f2.scale(c))
            rhs = cal.cup(mu, g, f) + cal.cup(mu, g, f2).scale(c)
        if lhs != rhs:
            return _cx(op, {"mu": mu, "f": f, "f'": f2, "g": g, "c": ring.fmt(c)}, lhs, rhs)
        return None
    if op == "total" or op == "commutator":
        a, b = _deg(rng, 1, maxd), _deg(rng, 1, maxd)
        f, f2 = _el(ctx, rng, a), _el(ctx, rng, a)
        g = _el(ctx, rng, b)
        fn = cal.total if op == "total" else cal.commutator
        lhs = fn(f + f2.scale(c), g)
        rhs = fn(f, g) + fn(f2, g).scale(c)
        if lhs != rhs:
            return _cx(op, {"f": f, "f'": f2, "g": g, "c": ring.fmt(c)}, lhs, rhs)
        return None
    a, b, e = (_deg(rng, 1, maxd) for _ in range(3))
    h = _el(ctx, rng, a)
    f, f2 = _el(ctx, rng, b), _el(ctx, rng, b)
    g = _el(ctx, rng, e)
    lhs = cal.braces(h, f + f2.scale(c), g)
    rhs = cal.braces(h, f, g) + cal.braces(h, f2, g).scale(c)
    if lhs != rhs:
        return _cx("braces middle slot", {"h": h, "f": f, "f'": f2, "g": g, "c": ring.fmt(c)}, lhs, rhs)
    return None


def _check_represent_morphism(ctx, rng, maxd):
    # Free model only: the induced morphism must commute with o_i.
    d = rng.choice([2, 3])
    endo = EndoContext(d, ctx.ring)
    psi = random_representation(ctx, endo, rng)
    a = _deg(rng, 1, min(maxd, 3))
    b = _deg(rng, 1, min(maxd, 3))
    x = ctx.random_element(a, rng)
    y = ctx.random_element(b, rng)
    i = rng.randrange(a)
    lhs = psi.apply(ctx.compose_at(x, i, y))
    rhs = endo.compose_at(psi.apply(x), i, psi.apply(y))
    if lhs != rhs:
        images = {name: img.describe() for name, img in psi.images.items()}
        return _cx(f"i={i}, target d={d}", {"x": x, "y": y, "psi": images}, lhs, rhs)
    return None


@dataclass(frozen=True)
class Check:
    identity: str
    fn: object
    models: frozenset = frozenset({"endo", "free"})


CHECKS: list[Check] = [
    Check("relation-b", _check_relation_b),
    Check("relation-a", _check_relation_a),
    Check("relation-g", _check_relation_g),
    Check("unit-axioms", _check_unit_axioms),
    Check("cup-unit-forms", _check_cup_unit_forms),
    Check("cup-compose", _check_cup_compose),
    Check("cup-total-derivation", _check_cup_total_derivation),
    Check("getzler", _check_getzler),
    Check("gerstenhaber", _check_gerstenhaber),
    Check("cup-braces", _check_cup_braces),
    Check("jacobi", _check_jacobi),
    Check("square-zero-even", _check_square_zero_even),
    Check("cube-zero-odd", _check_cube_zero_odd),
    Check("antisymmetry", _check_antisymmetry),
    Check("coboundary-cup-form", _check_coboundary_cup_form),
    Check("coboundary-square", _check_coboundary_square),
    Check("coboundary-square-zero", _check_coboundary_square_zero, frozenset({"endo"})),
    Check("dev-total-cup", _check_dev_total_cup),
    Check("aux-compose", _check_aux_compose),
    Check("aux-interior", _check_aux_interior),
    Check("aux-boundary", _check_aux_boundary),
    Check("dev-braces-cup", _check_dev_braces_cup),
    Check("dev-braces-commutator", _check_dev_braces_commutator),
    Check("bilinearity", _check_bilinearity),
    Check("represent-morphism", _check_represent_morphism, frozenset({"free"})),
]

IDENTITY_IDS = [c.identity for c in CHECKS]

AXIOM_IDS = ["relation-b", "relation-a", "relation-g", "unit-axioms"]


def _trial_seed(master: int, identity: str, model: str, ring: str, trial: int) -> int:
    text = f"{master}|{identity}|{model}|{ring}|{trial}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def run_suite(
    model_specs: list[ModelSpec] | None = None,
    rings: list[Ring] | None = None,
    *,
    seed: int = 0,
    trials: int = 200,
    max_degree: int = 4,
    only: list[str] | None = None,
    per_cell: bool = False,
    sign_bug: bool = False,
) -> list[IdentityReport]:
    """Run the identity grid; returns one report per (identity, model, ring).

    ``trials`` is the budget per identity, distributed over its applicable
    cells; with ``per_cell=True`` every cell runs the full count instead.
    ``sign_bug=True`` corrupts the endomorphism composition sign so the
    harness can demonstrate a failing run.
    """
    if model_specs is None:
        model_specs = default_model_specs()
    if rings is None:
        rings = default_rings()
    checks = CHECKS
    if only:
        unknown = set(only) - set(IDENTITY_IDS)
        if unknown:
            raise FormatError(f"unknown identity ids: {sorted(unknown)}")
        checks = [c for c in CHECKS if c.identity in set(only)]

    reports: list[IdentityReport] = []
    for check in checks:
        specs = [ms for ms in model_specs if ms.kind in check.models]
        cells = [(ms, ring) for ms in specs for ring in rings]
        if not cells:
            continue
        if per_cell:
            counts = [trials] * len(cells)
        else:
            base, extra = divmod(trials, len(cells))
            counts = [max(1, base + (1 if k < extra else 0)) for k in range(len(cells))]
        for (ms, ring), count in zip(cells, counts):
            ctx = ms.build(ring, sign_bug=sign_bug)
            passes = 0
            counterexample = None
            for t in range(count):
                rng = random.Random(_trial_seed(seed, check.identity, ms.key, ring.token, t))
                cx = check.fn(ctx, rng, max_degree)
                if cx is None:
                    passes += 1
                else:
                    cx["trial"] = t
                    counterexample = cx
                    break
            reports.append(
                IdentityReport(
                    identity=check.identity,
                    model=ms.key,
                    ring=ring.token,
                    trials=count,
                    passes=passes,
                    seed=seed,
                    counterexample=counterexample,
                )
            )
    reports.sort(key=lambda r: (r.identity, r.model, r.ring))
    return reports


def all_passed(reports: list[IdentityReport]) -> bool:
    return all(r.passed for r in reports)


def summary_table(reports: list[IdentityReport]) -> str:
    """Human-readable fixed-width summary, one row per cell."""
    header = f"{'identity':<24} {'model':<18} {'ring':<8} {'trials':>6} {'passes':>6}  status"
    lines = [header, "-" * len(header)]
    for r in reports:
        status = "ok" if r.passed else "FAIL"
        lines.append(
            f"{r.identity:<24} {r.model:<18} {r.ring:<8} {r.trials:>6} {r.passes:>6}  {status}"
        )
    n_fail = sum(1 for r in reports if not r.passed)
    total_trials = sum(r.trials for r in reports)
    identities = len({r.identity for r in reports})
    lines.append("-" * len(header))
    verdict = "all passed" if n_fail == 0 else f"{n_fail} cell(s) FAILED"
    lines.append(
        f"{identities} identities, {len(reports)} cells, {total_trials} trials: {verdict}"
    )
    for r in reports:
        if r.counterexample is not None:
            lines.append("")
            lines.append(f"counterexample for {r.identity} [{r.model}, {r.ring}]:")
            lines.append(json.dumps(r.counterexample, sort_keys=True, indent=2, default=str))
    return "\n".join(lines)
