import json
import random

import pytest

from compcalc import calculus as cal
from compcalc.endomodel import EndoContext, scalar_hom
from compcalc.errors import DegreeError, FormatError, PositionError, RingMismatchError
from compcalc.freemodel import (
    LEAF,
    FreeContext,
    Generator,
    PlanarTree,
    Representation,
    Signature,
    default_signature,
    load_representation,
    load_signature,
    parse_tree,
    random_representation,
)
from compcalc.ring import QQ, IntegersMod


@pytest.fixture
def sig():
    return default_signature()


@pytest.fixture
def ctx(sig):
    return FreeContext(sig, QQ)


def corolla(sig, name):
    gen = sig.by_name[name]
    return PlanarTree(gen, [LEAF] * gen.arity)


def test_signature_validation():
    with pytest.raises(FormatError):
        Signature([("m", 0)])
    with pytest.raises(FormatError):
        Signature([("m", 2), ("m", 3)])
    with pytest.raises(FormatError):
        Signature([("_bad", 1)])


def test_signature_json_round_trip(sig):
    assert Signature.from_json_obj(sig.to_json_obj()) == sig


def test_tree_parse_print_round_trip(sig):
    for text in ("_", "m(_,_)", "m(_,g(_,_))".replace("g", "m"), "w(u(_),m(_,_),_)"):
        t = parse_tree(text, sig)
        assert t.text == text.replace(" ", "")
        assert parse_tree(t.text, sig) == t


def test_tree_parse_errors(sig):
    with pytest.raises(FormatError):
        parse_tree("q(_,_)", sig)  # unknown generator
    with pytest.raises(FormatError):
        parse_tree("m(_)", sig)  # arity mismatch
    with pytest.raises(FormatError):
        parse_tree("m(_,_", sig)
    with pytest.raises(FormatError):
        parse_tree("m(_,_) junk", sig)


def test_degree_and_desusp(sig):
    t = parse_tree("w(u(_),m(_,_),_)", sig)
    assert t.degree == 4
    assert t.desusp == 3
    # vertex desuspensions add up to degree - 1
    assert t.vertex_desusp_sum() == t.degree - 1


def test_graft_replaces_leaf(sig):
    m = corolla(sig, "m")
    grafted, exponent = m.graft(1, m)
    assert grafted.text == "m(_,m(_,_))"
    assert exponent % 2 == 0  # no vertices after the last leaf


def test_graft_sign_spec_example(ctx, sig):
    # (m o_1 m) o_0 m = -(m o_0 m) o_2 m as elements
    m = ctx.from_tree(corolla(sig, "m"))
    lhs = ctx.compose_at(ctx.compose_at(m, 1, m), 0, m)
    rhs = ctx.compose_at(ctx.compose_at(m, 0, m), 2, m)
    assert lhs == -rhs
    assert not lhs.is_zero()


def test_graft_leaf_index_error(sig):
    m = corolla(sig, "m")
    with pytest.raises(PositionError):
        m.graft(2, m)


def test_unit_axioms(ctx):
    rng = random.Random(1)
    unit = ctx.unit()
    assert unit.degree == 1
    for _ in range(20):
        x = ctx.random_element(rng.randint(1, 4), rng)
        assert ctx.compose_at(unit, 0, x) == x
        for i in range(x.degree):
            assert ctx.compose_at(x, i, unit) == x


def test_degree_additivity_under_grafting(ctx):
    rng = random.Random(2)
    for _ in range(30):
        t = ctx.random_tree(rng.randint(1, 4), rng)
        s = ctx.random_tree(rng.randint(1, 4), rng)
        i = rng.randrange(t.degree)
        grafted, _ = t.graft(i, s)
        assert grafted.degree == t.degree + s.degree - 1
        assert grafted.vertex_desusp_sum() == t.vertex_desusp_sum() + s.vertex_desusp_sum()


def test_element_normal_form_equality(ctx, sig):
    m = corolla(sig, "m")
    u = corolla(sig, "u")
    two = QQ.from_int(2)
    x = ctx.element({m: QQ.one}) + ctx.element({m: QQ.one})
    assert x == ctx.element({m: two})
    assert (x - x.scale(QQ.one)).is_zero()
    with pytest.raises(DegreeError):
        ctx.element({m: QQ.one, u: QQ.one})  # mixed degrees


def test_serialize_canonical_order(ctx, sig):
    m = ctx.from_tree(parse_tree("m(m(_,_),_)", sig))
    n = ctx.from_tree(parse_tree("m(_,m(_,_))", sig))
    s = (m + n.scale(QQ.from_int(3))).serialize()
    # keys sorted by text form
    assert s == "3*m(_,m(_,_)) + 1*m(m(_,_),_)"


def test_bilinearity_of_composition(ctx):
    rng = random.Random(3)
    two = QQ.from_int(2)
    three = QQ.from_int(3)
    for _ in range(10):
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        x = ctx.random_element(a, rng)
        y = ctx.random_element(b, rng)
        i = rng.randrange(a)
        lhs = ctx.compose_at(x.scale(two), i, y.scale(three))
        assert lhs == ctx.compose_at(x, i, y).scale(QQ.from_int(6))


def test_compose_position_and_context_errors(ctx, sig):
    other = FreeContext(Signature([("m", 2)]), QQ)
    x = ctx.from_tree(corolla(sig, "m"))
    with pytest.raises(PositionError):
        ctx.compose_at(x, 2, x)
    with pytest.raises(RingMismatchError):
        ctx.compose_at(x, 0, other.from_tree(corolla(other.signature, "m")))


def test_random_tree_determinism(ctx):
    t1 = ctx.random_tree(4, random.Random(77))
    t2 = ctx.random_tree(4, random.Random(77))
    assert t1 == t2
    assert t1.degree == 4


def test_random_tree_impossible_degree():
    ctx = FreeContext(Signature([("w", 3)]), QQ)
    with pytest.raises(DegreeError):
        ctx.random_tree(2, random.Random(0))


def test_representation_of_corolla(ctx, sig):
    endo = EndoContext(2, QQ)
    rng = random.Random(4)
    psi = random_representation(ctx, endo, rng)
    m = corolla(sig, "m")
    assert psi.apply_tree(m) == psi.images["m"]
    assert psi.apply_tree(LEAF) == endo.unit()


def test_representation_validation(ctx):
    endo = EndoContext(2, QQ)
    rng = random.Random(5)
    with pytest.raises(FormatError):
        Representation(ctx, endo, {})
    images = {g.name: endo.random_element(g.arity, rng) for g in ctx.signature}
    images["m"] = endo.random_element(3, rng)  # wrong arity
    with pytest.raises(FormatError):
        Representation(ctx, endo, images)
    with pytest.raises(RingMismatchError):
        Representation(ctx, EndoContext(2, IntegersMod(3)), {})


def test_representation_morphism_property(ctx):
    rng = random.Random(6)
    for d in (2, 3):
        endo = EndoContext(d, QQ)
        for _ in range(25):
            psi = random_representation(ctx, endo, rng)
            a, b = rng.randint(1, 3), rng.randint(1, 3)
            x = ctx.random_element(a, rng)
            y = ctx.random_element(b, rng)
            i = rng.randrange(a)
            assert psi.apply(ctx.compose_at(x, i, y)) == endo.compose_at(
                psi.apply(x), i, psi.apply(y)
            )


def test_representation_d1_scalar_consistency(ctx, sig):
    # binary m |-> the scalar 1: tree values collapse to signed products,
    # pinned by the endomorphism model
    endo = EndoContext(1, QQ)
    images = {"u": scalar_hom(endo, 1, 1), "m": scalar_hom(endo, 2, 1), "w": scalar_hom(endo, 3, 1)}
    psi = Representation(ctx, endo, images)
    m = ctx.from_tree(corolla(sig, "m"))
    x = ctx.compose_at(m, 0, m) - ctx.compose_at(m, 1, m)
    lhs = psi.apply(x)
    rhs = endo.compose_at(psi.apply(m), 0, psi.apply(m)) - endo.compose_at(
        psi.apply(m), 1, psi.apply(m)
    )
    assert lhs == rhs


def test_representation_files(tmp_path, ctx):
    endo = EndoContext(2, QQ)
    rng = random.Random(7)
    psi = random_representation(ctx, endo, rng)
    sig_path = tmp_path / "sig.json"
    sig_path.write_text(json.dumps(ctx.signature.to_json_obj()))
    assert load_signature(str(sig_path)) == ctx.signature
    rep_path = tmp_path / "rep.json"
    rep_path.write_text(
        json.dumps({name: img.to_json_obj() for name, img in psi.images.items()})
    )
    loaded = load_representation(str(rep_path), ctx, endo)
    assert loaded.images == psi.images


def test_calculus_identities_run_in_free_model(ctx):
    # spot check: the generic layer works unchanged over trees
    rng = random.Random(8)
    mu = ctx.random_element(2, rng)
    f = ctx.random_element(2, rng)
    assert cal.delta_via_cup(mu, f) == cal.delta(mu, f)
    g = ctx.random_element(1, rng)
    assert cal.cup(mu, f, g) == cal.braces(mu, f, g)  # (-1)^deg(f) = +1
