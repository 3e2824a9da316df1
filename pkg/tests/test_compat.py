import random

import pytest

from moufang.compat import (RankNotOne, check_exceptional, check_hex, check_oct,
                            check_qp, check_qq, qq_level_witness, strengthen_rank1)
from moufang.epi import CompatibilityFailure, EpiDescriptor, realize
from moufang.fields import (FieldEndo, GaloisField, PrimeField, RationalField,
                            RationalFunctionField)
from moufang.geometry import QuadraticSpace
from moufang.valuations import (GroupValue, PAdicValuation, TAdicValuation,
                                TrivialValuation, group_compare)

Q = RationalField()
F2 = PrimeField(2)
F2T = RationalFunctionField("t", F2)
F2ST = RationalFunctionField("t", RationalFunctionField("s", F2))
QS = QuadraticSpace.diagonal(Q, [1, 1])
V3 = PAdicValuation(Q, 3)
V5 = PAdicValuation(Q, 5)


def test_check_qq_good_reduction():
    res = check_qq(QS, V3, V3.zero_value(), 500, random.Random(1))
    assert res.passed and res.samples >= 500


def test_check_qq_recorded_witness():
    res = check_qq(QS, V5, GroupValue("int", 1), 500, random.Random(1))
    assert not res.passed
    assert res.witness["u"] == ["1", "2"]
    assert res.witness["v"] == ["1", "-2"]
    assert res.witness["nu_q_u"] == 1 and res.witness["nu_f"] == 0


def test_check_qq_witness_reverifies():
    res = check_qq(QS, V5, GroupValue("int", 1), 200, random.Random(2))
    u = tuple(Q.parse(c) for c in res.witness["u"])
    v = tuple(Q.parse(c) for c in res.witness["v"])
    level = GroupValue("int", 1)
    assert group_compare(V5.value(QS.q(u)), level) >= 0
    assert group_compare(V5.value(QS.q(v)), level) >= 0
    assert group_compare(V5.value(QS.f(u, v)), level) < 0


def test_check_qq_trivial_valuation():
    triv = TrivialValuation(Q)
    res = check_qq(QS, triv, triv.zero_value(), 100, random.Random(3))
    assert res.passed


def test_check_qq_scaling_robustness():
    # the verdict must not change when all samples are rescaled by a unit
    scaled = QuadraticSpace.diagonal(Q, [Q.from_int(4), Q.from_int(4)])
    res_base = check_qq(QS, V3, V3.zero_value(), 300, random.Random(4))
    res_scaled = check_qq(scaled, V3, V3.zero_value(), 300, random.Random(4))
    assert res_base.passed == res_scaled.passed


def test_qq_level_witness():
    w = qq_level_witness(QS, V3, V3.zero_value())
    assert w is not None and V3.value(QS.q(w)).payload == 0
    w2 = qq_level_witness(QS, V3, GroupValue("int", 2))
    assert w2 is not None and V3.value(QS.q(w2)).payload == 2
    # odd levels are unattainable for a sum of two squares at p = 3
    assert qq_level_witness(QS, V3, GroupValue("int", 1)) is None


def test_check_qp_identity_and_frobenius():
    assert check_qp(FieldEndo(Q), V3, 100, random.Random(5)).passed
    F9 = GaloisField(3, 2, [1, 0, 1])
    res = check_qp(FieldEndo(F9, frobenius=1), TrivialValuation(F9), 100,
                   random.Random(5))
    assert res.passed


def test_check_qp_swap_fails():
    swap = FieldEndo(F2ST, env={"s": "t", "t": "s"})
    res = check_qp(swap, TAdicValuation(F2ST), 50, random.Random(6))
    assert not res.passed
    assert res.witness["nu_t"] != res.witness["nu_t_sigma"]


def test_check_qp_pairs_condition():
    pairs = [{"t": Q.from_int(3), "s": Q.from_int(9), "f": Q.from_int(6)},
             {"t": Q.from_int(9), "s": Q.from_int(3), "f": Q.from_int(27)}]
    res = check_qp(FieldEndo(Q), V3, 50, random.Random(7), pairs=pairs,
                   level=GroupValue("int", 1))
    assert res.passed
    bad = [{"t": Q.from_int(3), "s": Q.from_int(3), "f": Q.one}]
    res = check_qp(FieldEndo(Q), V3, 50, random.Random(7), pairs=bad,
                   level=GroupValue("int", 1))
    assert not res.passed


def test_check_hex_cubic_norm():
    v2 = PAdicValuation(Q, 2)
    norm = lambda x: x ** 3
    trace = lambda u, v: Q.from_int(3) * u * v
    assert check_hex(norm, trace, v2, v2.zero_value(), 150, random.Random(8)).passed
    assert check_hex(norm, trace, v2, GroupValue("int", 3), 150,
                     random.Random(8)).passed
    triv = TrivialValuation(Q)
    assert check_hex(norm, trace, triv, triv.zero_value(), 50,
                     random.Random(8)).passed


def test_check_oct_frobenius_substitution():
    sq = FieldEndo(F2T, env={"t": "t^2"})
    res = check_oct(sq, TAdicValuation(F2T), 200, random.Random(9))
    assert res.passed
    swap = FieldEndo(F2ST, env={"s": "t", "t": "s"})
    res = check_oct(swap, TAdicValuation(F2ST), 200, random.Random(9))
    assert not res.passed
    # the witness is a unit with a non-unit image
    x = F2ST.parse(res.witness["x"]) if isinstance(res.witness["x"], str) else None
    assert res.witness["nu_x_sigma"] != 0
    assert check_oct(FieldEndo(Q), TrivialValuation(Q), 50, random.Random(9)).passed


def test_check_exceptional_conditions():
    ok = {"products": {"1": [[0, 0, 0], ["inf", 1, 1]], "4": [[0, 0, 0]]},
          "comm13": [[0, 3, 1], [0, 0, 0]],
          "comm24": [[0, 0, 0], [1, 0, 1]],
          "mu": [{"rule": "phi3_of_u1_mu4", "values": [1, 2, 5]},
                 {"rule": "phi1_of_u3_mu4", "values": [5, 2, 1]},
                 {"rule": "phi4_of_u2_mu1", "values": [3, 1, 2]},
                 {"rule": "phi2_of_u4_mu1", "values": [3, 1, 4]}]}
    res = check_exceptional(ok, 0, 0)
    assert res.passed, (res.details, res.witness)
    # violating phi1 = k, phi3 > k+2l  =>  phi2 > k+l
    bad = {"comm13": [[0, 1, 0]]}
    res = check_exceptional(bad, 0, 0)
    assert not res.passed and res.witness["condition"] == "comm13-eq-gt"
    # subgroup condition violated
    bad2 = {"products": {"1": [[0, 0, -1]]}}
    res = check_exceptional(bad2, 0, 0)
    assert not res.passed
    # mu-action inconsistency
    bad3 = {"mu": [{"rule": "phi3_of_u1_mu4", "values": [1, 2, 4]}]}
    res = check_exceptional(bad3, 0, 0)
    assert not res.passed and res.witness["condition"].startswith("mu:")


def test_check_exceptional_lex_values():
    data = {"comm13": [[[0, 0], [0, 3], [0, 1]]]}
    res = check_exceptional(data, [0, 0], [0, 0])
    assert res.passed


def test_strengthen_rank1():
    res = strengthen_rank1(QS, V3, 150, random.Random(10))
    assert res.passed and res.details["discrete_slack_3_ok"]
    res = strengthen_rank1(QS, V5, 150, random.Random(10))
    assert not res.passed
    # the witness re-verifies: 2 nu(f) < nu(q(u)) + nu(q(v))
    u = tuple(Q.parse(c) for c in res.witness["u"])
    v = tuple(Q.parse(c) for c in res.witness["v"])
    assert 2 * V5.value(QS.f(u, v)).payload < (V5.value(QS.q(u)).payload
                                               + V5.value(QS.q(v)).payload)
    single = QuadraticSpace.diagonal(Q, [1])
    assert strengthen_rank1(single, V3, 150, random.Random(10)).passed
    with pytest.raises(RankNotOne):
        strengthen_rank1(QS, TrivialValuation(Q), 10, random.Random(10))


def test_realize_success_implies_checker_passes():
    # consistency coupling: whatever realize accepts, the checker accepts too
    rng = random.Random(11)
    desc = EpiDescriptor("QQ", Q, V3, qspace=QS)
    realize(desc, rng)
    res = check_qq(QS, V3, V3.zero_value(), 300, random.Random(11))
    assert res.passed
    with pytest.raises(CompatibilityFailure):
        realize(EpiDescriptor("QQ", Q, V5, qspace=QS), rng)
    res = check_qq(QS, V5, V5.zero_value(), 600, random.Random(11))
    assert not res.passed
