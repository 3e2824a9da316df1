import random

import pytest

from moufang.fields import PrimeField, RationalField, RationalFunctionField
from moufang.valuations import (INF, CompositeValuation, FieldMismatch, GroupValue,
                                NotInValuationRing, PAdicValuation, Place,
                                RankTooLow, TAdicValuation, TrivialValuation,
                                coarsen, compose_valuations, group_compare,
                                nu_eval, place_reduce, valuation_from_descriptor,
                                value_is_infinite)

Q = RationalField()
F2 = PrimeField(2)
F5 = PrimeField(5)
F2S = RationalFunctionField("s", F2)
F2ST = RationalFunctionField("t", F2S)


def test_nu_eval_examples():
    v3 = PAdicValuation(Q, 3)
    assert nu_eval(v3, Q.from_int(18)).payload == 2
    vt = TAdicValuation(RationalFunctionField("t", F2))
    f = vt.field.parse("t^2/(1+t)")
    assert nu_eval(vt, f).payload == 2
    triv = TrivialValuation(Q)
    assert nu_eval(triv, Q.from_int(7)).payload is None
    assert group_compare(nu_eval(triv, Q.from_int(7)), triv.zero_value()) == 0
    assert value_is_infinite(nu_eval(v3, Q.zero))


def test_place_reduce_examples():
    v3 = PAdicValuation(Q, 3)
    # 5/2 -> 5 * inv(2) = 5 * 2 = 10 = 1 mod 3, the modular-arithmetic oracle
    assert place_reduce(Place(v3), Q.parse("5/2")) == PrimeField(3).from_int(1)
    F5t = RationalFunctionField("t", F5)
    vt = TAdicValuation(F5t)
    assert place_reduce(vt, F5t.parse("(1+t)/(1-t)")) == F5.one
    with pytest.raises(NotInValuationRing):
        place_reduce(v3, Q.parse("1/3"))


def test_reduction_is_ring_homomorphism():
    v3 = PAdicValuation(Q, 3)
    rng = random.Random(12)
    count = 0
    while count < 1000:
        x, y = Q.sample(rng, 9), Q.sample(rng, 9)
        try:
            rx, ry = v3.reduce(x), v3.reduce(y)
        except NotInValuationRing:
            continue
        count += 1
        assert v3.reduce(x * y) == rx * ry
        assert v3.reduce(x + y) == rx + ry


def test_composite_valuation_examples():
    inner = TAdicValuation(F2ST)
    outer = TAdicValuation(F2S)
    vc = compose_valuations(inner, outer)
    assert vc.rank == 2
    assert vc.value(F2ST.parse("s*t+t^2")).payload == (1, 1)
    assert vc.value(F2ST.one).payload == (0, 0)
    assert vc.value(F2ST.parse("s")).payload == (0, 1)
    assert vc.residue_field == F2
    with pytest.raises(FieldMismatch):
        compose_valuations(inner, PAdicValuation(Q, 3))


def test_coarsen_splits_and_recomposes():
    inner = TAdicValuation(F2ST)
    outer = TAdicValuation(F2S)
    vc = compose_valuations(inner, outer)
    head, tail = coarsen(vc)
    assert head is inner and tail is outer
    rebuilt = compose_valuations(head, tail)
    rng = random.Random(3)
    for _ in range(200):
        x = F2ST.sample(rng, 2)
        assert group_compare(rebuilt.value(x), vc.value(x)) == 0
        assert vc.value(x).payload[:1] == (head.value(x).payload,) \
            if not x.is_zero() else True
    with pytest.raises(RankTooLow):
        coarsen(inner)


def test_group_compare_examples():
    assert GroupValue("lex", (0, 5)) < GroupValue("lex", (1, -100))
    assert GroupValue("sqrt2", (1, -1)) < GroupValue.zero("sqrt2")  # 1 - sqrt2 < 0
    assert GroupValue("int", 10 ** 9) < INF
    assert group_compare(INF, INF) == 0
    assert group_compare(GroupValue("int", 2), GroupValue("int", 2)) == 0


def test_sqrt2_group_scaling_law():
    # multiplication by sqrt2 is order preserving and squares to doubling
    vals = [GroupValue("sqrt2", (a, b)) for a in range(-3, 4) for b in range(-3, 4)]
    for v in vals:
        assert v.sqrt2_times().sqrt2_times() == v.scaled(2)
        for w in vals:
            if v < w:
                assert v.sqrt2_times() < w.sqrt2_times()


def test_ultrametric_equality_sampled():
    for v, field, bound in ((PAdicValuation(Q, 3), Q, 8),
                            (TAdicValuation(F2ST), F2ST, 2),
                            (CompositeValuation(TAdicValuation(F2ST),
                                                TAdicValuation(F2S)), F2ST, 2)):
        rng = random.Random(4)
        for _ in range(150):
            x, y = field.sample(rng, bound), field.sample(rng, bound)
            if x.is_zero() or y.is_zero():
                continue
            vx, vy, vs = v.value(x), v.value(y), v.value(x + y)
            m = vx if group_compare(vx, vy) <= 0 else vy
            assert group_compare(vs, m) >= 0
            if group_compare(vx, vy) != 0:
                assert group_compare(vs, m) == 0
            assert group_compare(v.value(x * y), vx + vy) == 0


def test_valuation_ring_total_subring_property():
    v3 = PAdicValuation(Q, 3)
    zero = v3.zero_value()
    rng = random.Random(5)

    def in_ring(x):
        return value_is_infinite(v3.value(x)) or group_compare(v3.value(x), zero) >= 0

    for _ in range(500):
        x, y = Q.sample(rng, 9), Q.sample(rng, 9)
        if in_ring(x) and in_ring(y):
            assert in_ring(x + y) and in_ring(x * y)
        if not x.is_zero():
            assert in_ring(x) or in_ring(x.inv())
        if not x.is_zero() and group_compare(v3.value(x), zero) == 0:
            assert group_compare(v3.value(x.inv()), zero) == 0


def test_surjectivity_witnesses():
    vc = CompositeValuation(TAdicValuation(F2ST), TAdicValuation(F2S))
    gens = vc.group_generators()
    assert [g.payload for g, _ in gens] == [(1, 0), (0, 1)]
    for gv, pre in gens:
        assert group_compare(vc.value(pre), gv) == 0


def test_valuation_descriptors_roundtrip():
    for field, desc in ((Q, {"rule": "p-adic", "p": 3}),
                        (Q, {"rule": "trivial"}),
                        (F2ST, {"rule": "composite", "inner": {"rule": "t-adic"},
                                "outer": {"rule": "t-adic"}})):
        v = valuation_from_descriptor(field, desc)
        assert v.descriptor() == desc
