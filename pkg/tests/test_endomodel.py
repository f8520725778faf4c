import random

import pytest

from compcalc.endomodel import EndoContext, hom_from_json, random_hom, scalar_hom
from compcalc.errors import DegreeError, FormatError, PositionError, RingMismatchError
from compcalc.ring import QQ, IntegersMod, koszul_sign


def q(n, d=1):
    return QQ.from_fraction(n, d)


def test_identity_hom_shapes():
    ctx1 = EndoContext(1, QQ)
    assert ctx1.unit().coeffs == (QQ.one,)
    ctx2 = EndoContext(2, QQ)
    assert ctx2.unit().coeffs == (QQ.one, QQ.zero, QQ.zero, QQ.one)


def test_dim_guard():
    with pytest.raises(DegreeError):
        EndoContext(0, QQ)
    with pytest.raises(DegreeError):
        EndoContext(9, QQ)


def test_scalar_compose_signs():
    # rank-1 model: composition is multiplication times (-1)^(i*|g|)
    ctx = EndoContext(1, QQ)
    f = scalar_hom(ctx, 2, 2)
    g3 = scalar_hom(ctx, 3, 3)
    assert ctx.compose_at(f, 0, g3).coeffs == (q(6),)
    assert ctx.compose_at(f, 1, g3).coeffs == (q(6),)  # |g| = 2 even
    g2 = scalar_hom(ctx, 2, 3)
    assert ctx.compose_at(f, 1, g2).coeffs == (q(-6),)  # sign (-1)^(1*1)


def test_compose_with_arity_zero_contracts():
    ctx = EndoContext(2, QQ)
    f = ctx.random_element(2, random.Random(0))
    v = ctx.random_element(0, random.Random(1))
    out = ctx.compose_at(f, 0, v)  # position 0 keeps the sign +1
    assert out.arity == 1
    # pointwise: composing against a vector is partial evaluation
    e0 = [QQ.one, QQ.zero]
    assert out.eval([e0]) == f.eval([list(v.coeffs), e0])
    # at position 1 the Koszul exponent is 1*|v| = -1, so a sign appears
    out1 = ctx.compose_at(f, 1, v)
    assert out1.eval([e0]) == [QQ.neg(c) for c in f.eval([e0, list(v.coeffs)])]


def test_compose_position_errors():
    ctx = EndoContext(1, QQ)
    f = scalar_hom(ctx, 2, 1)
    g = scalar_hom(ctx, 1, 1)
    with pytest.raises(PositionError):
        ctx.compose_at(f, 2, g)
    with pytest.raises(DegreeError):
        ctx.compose_at(scalar_hom(ctx, 0, 1), 0, g)


def test_compose_context_mismatch():
    a = EndoContext(2, QQ)
    b = EndoContext(2, IntegersMod(3))
    with pytest.raises(RingMismatchError):
        a.compose_at(a.unit(), 0, b.unit())


def test_unit_axioms_random():
    rng = random.Random(5)
    for d in (1, 2, 3):
        ctx = EndoContext(d, QQ)
        unit = ctx.unit()
        for _ in range(10):
            f = ctx.random_element(rng.randint(0, 3), rng)
            assert ctx.compose_at(unit, 0, f) == f
            for i in range(f.arity):
                assert ctx.compose_at(f, i, unit) == f


def test_eval_identity_and_table():
    ctx = EndoContext(2, QQ)
    e0, e1 = [QQ.one, QQ.zero], [QQ.zero, QQ.one]
    assert ctx.unit().eval([e0]) == e0
    # mu(e_i, e_j) = e_min(i,j)
    coeffs = []
    for k in range(2):
        for i in range(2):
            for j in range(2):
                coeffs.append(QQ.one if min(i, j) == k else QQ.zero)
    mu = ctx.element(2, coeffs)
    assert mu.eval([e0, e1]) == e0
    assert mu.eval([e1, e1]) == e1


def test_eval_arity_mismatch():
    ctx = EndoContext(2, QQ)
    with pytest.raises(DegreeError):
        ctx.unit().eval([])


def test_functional_consistency_of_composition():
    # eval(f o_i g)(args) = (-1)^(i|g|) f(.., g(block), ..) pointwise
    rng = random.Random(9)
    ctx = EndoContext(2, QQ)
    for _ in range(40):
        m = rng.randint(1, 3)
        n = rng.randint(0, 3)
        i = rng.randrange(m)
        f = ctx.random_element(m, rng)
        g = ctx.random_element(n, rng)
        args = [[QQ.random(rng) for _ in range(2)] for _ in range(m + n - 1)]
        lhs = ctx.compose_at(f, i, g).eval(args)
        inner = g.eval(args[i : i + n])
        rhs = f.eval(args[:i] + [inner] + args[i + n :])
        if koszul_sign(QQ, i, n - 1) == QQ.minus_one:
            rhs = [QQ.neg(v) for v in rhs]
        assert lhs == rhs


def test_random_hom_determinism():
    ctx = EndoContext(2, QQ)
    assert random_hom(ctx, 3, seed=7) == random_hom(ctx, 3, seed=7)
    assert random_hom(ctx, 3, seed=7) != random_hom(ctx, 3, seed=8)


def test_json_round_trip():
    ctx = EndoContext(2, IntegersMod(5))
    f = ctx.random_element(2, random.Random(3))
    obj = f.to_json_obj()
    assert obj["dim"] == 2 and obj["arity"] == 2 and obj["ring"] == "zmod:5"
    assert hom_from_json(obj, ctx) == f
    assert hom_from_json(obj) == f  # context rebuilt from the payload


def test_json_validation():
    with pytest.raises(FormatError):
        hom_from_json({"dim": 2, "arity": 1, "ring": "q", "coeffs": ["1"]})
    ctx = EndoContext(2, QQ)
    with pytest.raises(FormatError):
        hom_from_json({"dim": 1, "arity": 1, "ring": "q", "coeffs": ["1"]}, ctx)


def test_addition_shape_guards():
    ctx = EndoContext(2, QQ)
    f = ctx.random_element(1, random.Random(0))
    g = ctx.random_element(2, random.Random(0))
    with pytest.raises(DegreeError):
        f + g


def test_sign_bug_context_differs():
    good = EndoContext(1, QQ)
    bad = EndoContext(1, QQ, sign_bug=True)
    assert good != bad
    f = scalar_hom(good, 2, 2)
    g = scalar_hom(good, 2, 3)
    fb = scalar_hom(bad, 2, 2)
    gb = scalar_hom(bad, 2, 3)
    # the corrupted Koszul exponent changes this composition's sign
    assert good.compose_at(f, 1, g).coeffs != bad.compose_at(fb, 1, gb).coeffs
