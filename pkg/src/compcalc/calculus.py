"""Derived operations of the composition calculus, generic over any model.

Every function here is written purely against the model contract (partial
composition, unit, linear-combination arithmetic, exact equality), so it
works identically for the endomorphism model and the free planar-tree model.
Degrees are the plain grading n; the shifted degree |f| = n - 1 drives all
Koszul signs.
"""

from __future__ import annotations

import enum

from .errors import DegreeError, PositionError, RingMismatchError
from .ring import koszul_sign, sign_pow


class Region(enum.Enum):
    """The three pieces of the iterated-composition scope."""

    B = "B"
    A = "A"
    G = "G"


def desusp(f) -> int:
    """Shifted degree |f| = deg(f) - 1 (may be -1 for degree-0 elements)."""
    return f.degree - 1


def classify_region(h_deg: int, f_deg: int, i: int, j: int) -> Region:
    """Locate (i, j) within the scope of (h o_i f) o_j g.

    The scope is 0 <= i <= h_deg - 1, 0 <= j <= f_deg + h_deg - 2; it is the
    disjoint union of two triangles (B, G) around a parallelogram (A).
    """
    if not 0 <= i <= h_deg - 1:
        raise PositionError(f"i={i} outside scope 0..{h_deg - 1}")
    if not 0 <= j <= f_deg + h_deg - 2:
        raise PositionError(f"j={j} outside scope 0..{f_deg + h_deg - 2}")
    if 1 <= i and j <= i - 1:
        return Region.B
    if i <= j <= i + f_deg - 1:
        return Region.A
    if i <= h_deg - 2 and i + f_deg <= j:
        return Region.G
    raise PositionError(f"({i},{j}) not in any region for degrees ({h_deg},{f_deg})")


def _check_same_model(*elements) -> None:
    ctx = elements[0].ctx
    for e in elements[1:]:
        if e.ctx != ctx:
            raise RingMismatchError("operands from different model contexts")


def compose_at(f, i: int, g):
    """Partial composition f o_i g; degree deg(f) + deg(g) - 1."""
    _check_same_model(f, g)
    return f.ctx.compose_at(f, i, g)


def cup(mu, f, g):
    """Cup product relative to mu: (-1)^deg(f) (mu o_0 f) o_deg(f) g."""
    _check_same_model(mu, f, g)
    if mu.degree != 2:
        raise DegreeError(f"cup needs mu of degree 2, got {mu.degree}")
    ctx = f.ctx
    r = ctx.compose_at(ctx.compose_at(mu, 0, f), f.degree, g)
    return r.scale(sign_pow(ctx.ring, f.degree))


def total(f, g):
    """Total composition: the sum of f o_i g over all positions i."""
    _check_same_model(f, g)
    target = f.degree + g.degree - 1
    if target < 0:
        raise DegreeError("total composition of two degree-0 elements")
    ctx = f.ctx
    acc = ctx.zero(target)
    for i in range(f.degree):
        acc = acc + ctx.compose_at(f, i, g)
    return acc


def braces(h, f, g):
    """Ternary braces: the sum of (h o_i f) o_j g over the G triangle."""
    _check_same_model(h, f, g)
    target = h.degree + f.degree + g.degree - 2
    if target < 0:
        raise DegreeError(f"braces target degree {target} is negative")
    ctx = h.ctx
    acc = ctx.zero(target)
    sh = desusp(h)
    for i in range(0, sh):
        hf = ctx.compose_at(h, i, f)
        for j in range(i + f.degree, desusp(f) + sh + 1):
            acc = acc + ctx.compose_at(hf, j, g)
    return acc


def associator(h, f, g):
    """(h . f) . g - h . (f . g) for the total composition."""
    return total(total(h, f), g) - total(h, total(f, g))


def commutator(f, g):
    """Graded commutator of the total composition."""
    return total(f, g) - total(g, f).scale(koszul_sign(f.ctx.ring, desusp(f), desusp(g)))


def jacobian(f, g, h):
    """The graded cyclic Jacobi sum; identically zero in any model."""
    ring = f.ctx.ring
    t1 = commutator(commutator(f, g), h).scale(koszul_sign(ring, desusp(f), desusp(h)))
    t2 = commutator(commutator(g, h), f).scale(koszul_sign(ring, desusp(g), desusp(f)))
    t3 = commutator(commutator(h, f), g).scale(koszul_sign(ring, desusp(h), desusp(g)))
    return t1 + t2 + t3


def delta(mu, f):
    """Pre-coboundary: delta_mu f = (-1)^|f| mu . f - f . mu; degree + 1."""
    _check_same_model(mu, f)
    if mu.degree != 2:
        raise DegreeError(f"delta needs mu of degree 2, got {mu.degree}")
    return total(mu, f).scale(sign_pow(f.ctx.ring, desusp(f))) - total(f, mu)


def delta_via_cup(mu, f):
    """The cup-product form of the pre-coboundary; must agree with delta."""
    _check_same_model(mu, f)
    if mu.degree != 2:
        raise DegreeError(f"delta needs mu of degree 2, got {mu.degree}")
    unit = f.ctx.unit()
    ring = f.ctx.ring
    s = cup(mu, f, unit) + total(f, mu) + cup(mu, unit, f).scale(sign_pow(ring, desusp(f)))
    return -s


def dev_total(mu, f, g):
    """Deviation of delta_mu from being a derivation of the total composition."""
    return (
        delta(mu, total(f, g))
        - total(f, delta(mu, g))
        - total(delta(mu, f), g).scale(sign_pow(f.ctx.ring, desusp(g)))
    )


def dev_braces(mu, h, f, g):
    """Deviation of delta_mu from being a derivation of the ternary braces."""
    ring = h.ctx.ring
    sg, sf = desusp(g), desusp(f)
    return (
        delta(mu, braces(h, f, g))
        - braces(h, f, delta(mu, g))
        - braces(h, delta(mu, f), g).scale(sign_pow(ring, sg))
        - braces(delta(mu, h), f, g).scale(sign_pow(ring, sg + sf))
    )


def lambda_aux(mu, f, g, k: int):
    """Auxiliary element lambda_k of the telescoping ladder, 0 <= k <= deg(f).

    For k >= 1 this is the explicit three-part formula (with i = k - 1); the
    k = 0 endpoint is defined through the ladder equation
    (-1)^|g| (delta f) o_0 g = lambda_0 + lambda'_1.
    """
    _check_same_model(mu, f, g)
    if mu.degree != 2:
        raise DegreeError(f"lambda needs mu of degree 2, got {mu.degree}")
    if f.degree < 1:
        raise DegreeError("lambda ladder needs deg(f) >= 1")
    if not 0 <= k <= f.degree:
        raise PositionError(f"lambda index {k} out of range 0..{f.degree}")
    ctx = f.ctx
    ring = ctx.ring
    if k == 0:
        head = ctx.compose_at(delta(mu, f), 0, g).scale(sign_pow(ring, desusp(g)))
        return head - lambda_prime_aux(mu, f, g, 1)
    i = k - 1
    unit = ctx.unit()
    sg = sign_pow(ring, desusp(g))
    t1 = cup(mu, unit, ctx.compose_at(f, i, g)).scale(
        ring.neg(sign_pow(ring, desusp(f) + desusp(g)))
    )
    t2 = ctx.zero(f.degree + g.degree)
    for j in range(0, i):
        t2 = t2 + ctx.compose_at(ctx.compose_at(f, j, mu), i + 1, g)
    t3 = ctx.compose_at(f, i, cup(mu, unit, g))
    return t1 - t2.scale(sg) + t3.scale(sg)


def lambda_prime_aux(mu, f, g, k: int):
    """Auxiliary element lambda'_k of the ladder, 1 <= k <= deg(f) + 1.

    For k <= deg(f) this is the explicit formula (with i = k - 1); the
    k = deg(f) + 1 endpoint is defined through
    (-1)^|g| (delta f) o_deg(f) g = lambda_deg(f) + lambda'_deg(f)+1.
    """
    _check_same_model(mu, f, g)
    if mu.degree != 2:
        raise DegreeError(f"lambda needs mu of degree 2, got {mu.degree}")
    if f.degree < 1:
        raise DegreeError("lambda ladder needs deg(f) >= 1")
    if not 1 <= k <= f.degree + 1:
        raise PositionError(f"lambda' index {k} out of range 1..{f.degree + 1}")
    ctx = f.ctx
    ring = ctx.ring
    if k == f.degree + 1:
        head = ctx.compose_at(delta(mu, f), f.degree, g).scale(sign_pow(ring, desusp(g)))
        return head - lambda_aux(mu, f, g, f.degree)
    i = k - 1
    unit = ctx.unit()
    t1 = ctx.compose_at(f, i, cup(mu, g, unit))
    t2 = ctx.zero(f.degree + g.degree)
    for j in range(i + 1, desusp(f) + 1):
        t2 = t2 + ctx.compose_at(ctx.compose_at(f, j, mu), i, g)
    t3 = cup(mu, ctx.compose_at(f, i, g), unit)
    return t1 - t2.scale(sign_pow(ring, desusp(g))) - t3
