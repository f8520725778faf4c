"""Free model: generator-decorated planar rooted trees.

The basis of degree n consists of planar trees with n leaves whose internal
vertices are labelled by generators of matching arity (plus the bare leaf,
which is the unit in degree 1).  Partial composition grafts one tree onto a
leaf of another; the Koszul sign is fixed by a canonical construction order:

    sign(t o_i s) = (-1)^(|s| * D)

where |s| = degree(s) - 1 and D is the sum of (arity - 1) over the internal
vertices of t visited strictly after leaf i in pre-order (root first,
children left to right).  Equivalently, a tree stands for the left-nested
composition of its generator corollas in pre-order, and grafting moves the
block of s past the vertex blocks behind the insertion point.  The defining
composition relations are the arbiter of this convention; the verification
suite checks them directly and also cross-checks against the endomorphism
model through representations.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass

from .endomodel import EndoContext, HomElement, hom_from_json
from .errors import DegreeError, FormatError, PositionError, RingMismatchError
from .ring import LinComb, Ring, check_same_ring

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


@dataclass(frozen=True)
class Generator:
    name: str
    arity: int

    @property
    def desusp(self) -> int:
        return self.arity - 1


class Signature:
    """An ordered set of generators with unique names and arity >= 1."""

    def __init__(self, generators):
        gens = []
        for g in generators:
            if not isinstance(g, Generator):
                g = Generator(str(g[0]), int(g[1]))
            if g.arity < 1:
                raise FormatError(f"generator {g.name!r} has arity {g.arity}; need >= 1")
            if not _NAME_RE.fullmatch(g.name):
                raise FormatError(f"bad generator name {g.name!r}")
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise FormatError("duplicate generator names")
        self.generators = tuple(gens)
        self.by_name = {g.name: g for g in gens}

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def key(self) -> str:
        return ",".join(f"{g.name}/{g.arity}" for g in self.generators)

    def to_json_obj(self) -> list:
        return [{"name": g.name, "arity": g.arity} for g in self.generators]

    @classmethod
    def from_json_obj(cls, obj) -> "Signature":
        if not isinstance(obj, list):
            raise FormatError("signature file must hold a JSON list of {name, arity}")
        try:
            return cls((entry["name"], entry["arity"]) for entry in obj)
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed signature entry: {exc}") from exc

    def __repr__(self):
        return f"Signature({self.key})"


class PlanarTree:
    """An immutable planar rooted tree; the bare leaf is the unit tree.

    Equality, hashing and the canonical total order all go through the
    parenthesized text form, e.g. ``m(_,g(_,_))`` with ``_`` for a leaf.
    """

    __slots__ = ("gen", "children", "degree", "text")

    def __init__(self, gen: Generator | None, children=()):
        if gen is None:
            if children:
                raise FormatError("a leaf has no children")
            self.gen = None
            self.children = ()
            self.degree = 1
            self.text = "_"
            return
        children = tuple(children)
        if len(children) != gen.arity:
            raise FormatError(
                f"generator {gen.name!r} has arity {gen.arity}, got {len(children)} children"
            )
        self.gen = gen
        self.children = children
        self.degree = sum(c.degree for c in children)
        self.text = f"{gen.name}({','.join(c.text for c in children)})"

    @property
    def is_leaf(self) -> bool:
        return self.gen is None

    @property
    def desusp(self) -> int:
        return self.degree - 1

    def vertex_desusp_sum(self) -> int:
        """Sum of (arity - 1) over internal vertices; equals degree - 1."""
        if self.is_leaf:
            return 0
        return self.gen.desusp + sum(c.vertex_desusp_sum() for c in self.children)

    def vertex_count(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + sum(c.vertex_count() for c in self.children)

    def graft(self, i: int, sub: "PlanarTree") -> tuple["PlanarTree", int]:
        """Replace leaf i by ``sub``; return (tree, Koszul sign exponent)."""
        if not 0 <= i <= self.degree - 1:
            raise PositionError(f"leaf index {i} out of range 0..{self.degree - 1}")
        grafted, _ = self._replace_leaf(i, sub)
        exponent = sub.desusp * self._desusp_after_leaf(i)
        return grafted, exponent

    def _replace_leaf(self, i: int, sub: "PlanarTree"):
        # Returns (tree, -1) once replaced, else (self, leaves still to skip).
        if self.is_leaf:
            return (sub, -1) if i == 0 else (self, i - 1)
        remaining = i
        for pos, child in enumerate(self.children):
            replaced, remaining = child._replace_leaf(remaining, sub)
            if remaining == -1:
                new_children = list(self.children)
                new_children[pos] = replaced
                return (PlanarTree(self.gen, new_children), -1)
        return (self, remaining)

    def _desusp_after_leaf(self, i: int) -> int:
        # Pre-order walk: count the vertex desuspensions seen strictly after
        # the i-th leaf.
        acc = 0
        seen_leaves = 0
        stack = [self]
        passed = False
        while stack:
            node = stack.pop()
            if node.is_leaf:
                if not passed:
                    if seen_leaves == i:
                        passed = True
                    seen_leaves += 1
                continue
            if passed:
                acc += node.gen.desusp
            stack.extend(reversed(node.children))
        return acc

    def __eq__(self, other):
        return isinstance(other, PlanarTree) and self.text == other.text

    def __lt__(self, other):
        return self.text < other.text

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return self.text


LEAF = PlanarTree(None)


def parse_tree(text: str, signature: Signature) -> PlanarTree:
    """Parse the parenthesized tree format, e.g. ``m(_,g(_,_))``."""
    pos = 0
    s = text

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def node() -> PlanarTree:
        nonlocal pos
        skip_ws()
        if pos < len(s) and s[pos] == "_":
            pos += 1
            return LEAF
        m = _NAME_RE.match(s, pos)
        if not m:
            raise FormatError(f"tree syntax error at offset {pos} in {text!r}")
        name = m.group(0)
        gen = signature.by_name.get(name)
        if gen is None:
            raise FormatError(f"unknown generator {name!r} in {text!r}")
        pos = m.end()
        skip_ws()
        if pos >= len(s) or s[pos] != "(":
            raise FormatError(f"expected '(' after {name!r} at offset {pos} in {text!r}")
        pos += 1
        children = [node()]
        skip_ws()
        while pos < len(s) and s[pos] == ",":
            pos += 1
            children.append(node())
            skip_ws()
        if pos >= len(s) or s[pos] != ")":
            raise FormatError(f"expected ')' at offset {pos} in {text!r}")
        pos += 1
        return PlanarTree(gen, children)

    t = node()
    skip_ws()
    if pos != len(s):
        raise FormatError(f"trailing input at offset {pos} in {text!r}")
    return t


class FreeContext:
    """Model context for the free pre-operad on a signature."""

    __slots__ = ("signature", "ring")

    def __init__(self, signature: Signature, ring: Ring):
        self.signature = signature
        self.ring = ring

    @property
    def key(self) -> str:
        return f"free:{self.signature.key}"

    def __eq__(self, other):
        return (
            isinstance(other, FreeContext)
            and self.signature == other.signature
            and self.ring == other.ring
        )

    def __hash__(self):
        return hash(("free", self.signature, self.ring))

    def __repr__(self):
        return f"FreeContext({self.signature.key}; ring={self.ring.token})"

    # -- element constructors -------------------------------------------------

    def element(self, terms, degree: int | None = None) -> "FreeElement":
        terms = dict(terms)
        degrees = {t.degree for t in terms}
        if degree is None:
            if not degrees:
                raise DegreeError("cannot infer the degree of an empty combination")
            degree = degrees.pop()
            if degrees:
                raise DegreeError("mixed-degree trees in one combination")
        elif degrees - {degree}:
            raise DegreeError("tree degrees disagree with the ambient degree")
        return FreeElement(self, LinComb(self.ring, degree, terms))

    def from_tree(self, tree: PlanarTree) -> "FreeElement":
        return FreeElement(self, LinComb.single(self.ring, tree.degree, tree, self.ring.one))

    def from_text(self, text: str) -> "FreeElement":
        return self.from_tree(parse_tree(text, self.signature))

    def zero(self, degree: int) -> "FreeElement":
        if degree < 0:
            raise DegreeError(f"no elements of degree {degree}")
        return FreeElement(self, LinComb(self.ring, degree))

    def unit(self) -> "FreeElement":
        return self.from_tree(LEAF)

    def random_tree(self, degree: int, rng: random.Random, budget: int | None = None) -> PlanarTree:
        """A random tree with the given leaf count; budget caps vertex count."""
        if degree < 1:
            raise DegreeError("trees have at least one leaf")
        if budget is None:
            budget = degree + 2
        if degree == 1 and (budget <= 0 or rng.randrange(2)):
            return LEAF
        choices = [g for g in self.signature if g.arity <= degree]
        if budget <= 0 and degree > 1:
            # out of budget: force strict degree decrease in the children
            choices = [g for g in choices if g.arity >= 2]
        if not choices:
            if degree == 1:
                return LEAF
            raise DegreeError(
                f"signature {self.signature.key} admits no tree of degree {degree}"
            )
        gen = rng.choice(choices)
        parts = _random_composition(degree, gen.arity, rng)
        budget -= 1
        children = []
        for part in parts:
            child = self.random_tree(part, rng, budget)
            budget -= child.vertex_count()
            children.append(child)
        return PlanarTree(gen, children)

    def random_element(self, degree: int, rng: random.Random, max_terms: int = 2) -> "FreeElement":
        n_terms = rng.randint(1, max_terms)
        terms = {}
        for _ in range(n_terms):
            terms[self.random_tree(degree, rng)] = self.ring.random_nonzero(rng)
        return self.element(terms, degree)

    # -- partial composition ---------------------------------------------------

    def compose_at(self, x: "FreeElement", i: int, y: "FreeElement") -> "FreeElement":
        if x.ctx != self or y.ctx != self:
            raise RingMismatchError("operands belong to a different free context")
        if x.degree == 0:
            raise DegreeError("degree-0 element has no composition positions")
        if not 0 <= i <= x.degree - 1:
            raise PositionError(f"position {i} out of range 0..{x.degree - 1}")
        ring = self.ring
        target = x.degree + y.degree - 1
        acc: dict = {}
        for t, a in x.lin.terms.items():
            for s, b in y.lin.terms.items():
                grafted, exponent = t.graft(i, s)
                c = ring.mul(a, b)
                if exponent % 2:
                    c = ring.neg(c)
                prev = acc.get(grafted)
                c = c if prev is None else ring.add(prev, c)
                if ring.is_zero(c):
                    acc.pop(grafted, None)
                else:
                    acc[grafted] = c
        return FreeElement(self, LinComb(ring, target, acc, _normalized=True))


def _random_composition(n: int, parts: int, rng: random.Random) -> list[int]:
    """Split n into `parts` positive summands, uniformly over cut positions."""
    if parts == 1:
        return [n]
    cuts = sorted(rng.sample(range(1, n), parts - 1))
    bounds = [0] + cuts + [n]
    return [bounds[k + 1] - bounds[k] for k in range(parts)]


class FreeElement:
    """A formal linear combination of planar trees of one degree."""

    __slots__ = ("ctx", "lin")

    def __init__(self, ctx: FreeContext, lin: LinComb):
        self.ctx = ctx
        self.lin = lin

    @property
    def degree(self) -> int:
        return self.lin.degree

    @property
    def ring(self) -> Ring:
        return self.ctx.ring

    def is_zero(self) -> bool:
        return self.lin.is_zero()

    def _check_compatible(self, other: "FreeElement") -> None:
        if self.ctx != other.ctx:
            raise RingMismatchError("elements from different free contexts")

    def __add__(self, other: "FreeElement") -> "FreeElement":
        self._check_compatible(other)
        return FreeElement(self.ctx, self.lin + other.lin)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        self._check_compatible(other)
        return FreeElement(self.ctx, self.lin - other.lin)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.ctx, -self.lin)

    def scale(self, c) -> "FreeElement":
        return FreeElement(self.ctx, self.lin.scale(c))

    def __eq__(self, other):
        return (
            isinstance(other, FreeElement) and self.ctx == other.ctx and self.lin == other.lin
        )

    def __hash__(self):
        return hash((self.ctx, self.lin))

    def serialize(self) -> str:
        if self.is_zero():
            return "0"
        fmt = self.ring.fmt
        parts = []
        for t, c in self.lin.sorted_items():
            s = fmt(c)
            parts.append(f"({s})*{t.text}" if " " in s else f"{s}*{t.text}")
        return " + ".join(parts)

    def describe(self):
        return self.serialize()

    def __repr__(self):
        return f"Free(C^{self.degree}; {self.serialize()})"


class Representation:
    """An arity-preserving assignment of generators to endomorphism elements.

    Induces the unique morphism from the free model that commutes with all
    partial compositions.
    """

    def __init__(self, free_ctx: FreeContext, endo_ctx: EndoContext, images: dict):
        check_same_ring(free_ctx.ring, endo_ctx.ring)
        self.free_ctx = free_ctx
        self.endo_ctx = endo_ctx
        self.images = dict(images)
        for g in free_ctx.signature:
            img = self.images.get(g.name)
            if img is None:
                raise FormatError(f"no image assigned to generator {g.name!r}")
            if img.arity != g.arity:
                raise FormatError(
                    f"image of {g.name!r} has arity {img.arity}, expected {g.arity}"
                )
            if img.ctx != endo_ctx:
                raise RingMismatchError(f"image of {g.name!r} from a different context")

    def apply_tree(self, tree: PlanarTree) -> HomElement:
        # Fold the children left to right; in the pre-order construction
        # order every graft carries sign +1, so no extra signs appear here.
        if tree.is_leaf:
            return self.endo_ctx.unit()
        h = self.images[tree.gen.name]
        offset = 0
        for child in tree.children:
            if child.is_leaf:
                offset += 1
                continue
            h = self.endo_ctx.compose_at(h, offset, self.apply_tree(child))
            offset += child.degree
        return h

    def apply(self, x: FreeElement) -> HomElement:
        if x.ctx != self.free_ctx:
            raise RingMismatchError("element from a different free context")
        acc = self.endo_ctx.zero(x.degree)
        for tree, coeff in x.lin.terms.items():
            acc = acc + self.apply_tree(tree).scale(coeff)
        return acc


def represent(psi: Representation, x: FreeElement) -> HomElement:
    """Evaluate the induced morphism on an element of the free model."""
    return psi.apply(x)


def random_representation(
    free_ctx: FreeContext, endo_ctx: EndoContext, rng: random.Random
) -> Representation:
    images = {
        g.name: endo_ctx.random_element(g.arity, rng) for g in free_ctx.signature
    }
    return Representation(free_ctx, endo_ctx, images)


def load_signature(path: str) -> Signature:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return Signature.from_json_obj(obj)


def load_representation(path: str, free_ctx: FreeContext, endo_ctx: EndoContext) -> Representation:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise FormatError("representation file must hold a JSON object name -> element")
    images = {name: hom_from_json(elem, endo_ctx) for name, elem in obj.items()}
    return Representation(free_ctx, endo_ctx, images)


def default_signature() -> Signature:
    """Mixed-arity signature used by the built-in free model: u/1, m/2, w/3."""
    return Signature([("u", 1), ("m", 2), ("w", 3)])
