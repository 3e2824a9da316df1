import random

from moufang.fields import PrimeField, RationalField
from moufang.geometry import ProjectivePlane, QuadraticSpace, QuadricQuadrangle
from moufang.rootgroups import HatRack
from moufang.suites import (commutator_containment_check, commutator_formula_check,
                            decomposition_roundtrip_check, kappa_classes_check,
                            mu_conjugation_check, subring_recovery_check,
                            switch_check)
from moufang.valuations import PAdicValuation

Q = RationalField()
V3 = PAdicValuation(Q, 3)
PLANE = ProjectivePlane(Q)
QUAD = QuadricQuadrangle(Q, QuadraticSpace.diagonal(Q, [1, 1]))


def test_kappa_classes_both_roots():
    hr = HatRack.plane(PLANE)
    for i in (0, 3):
        res = kappa_classes_check(hr, V3, i, 60, random.Random(i))
        assert res.passed, res.witness


def test_kappa_classes_scaled_levels():
    hr = HatRack.plane(PLANE, scale=[Q.one, Q.one, Q.from_int(3)])
    res = kappa_classes_check(hr, V3, 0, 60, random.Random(1))
    assert res.passed, res.witness


def test_switch_lands_in_kernel_class():
    hr = HatRack.plane(PLANE)
    res = switch_check(hr, V3, 0, 25, random.Random(2))
    assert res.passed, res.witness
    assert res.details["distinct_images"] > 1


def test_mu_conjugation_relevels():
    hr = HatRack.plane(PLANE)
    res = mu_conjugation_check(hr, V3, 0, 30, random.Random(3))
    assert res.passed, res.witness
    hq = HatRack.quadrangle(QUAD)
    res = mu_conjugation_check(hq, V3, 1, 15, random.Random(3))
    assert res.passed, res.witness


def test_commutator_containment():
    hr = HatRack.plane(PLANE)
    res = commutator_containment_check(hr, V3, 40, random.Random(4))
    assert res.passed, res.witness
    hq = HatRack.quadrangle(QUAD)
    res = commutator_containment_check(hq, V3, 20, random.Random(4))
    assert res.passed, res.witness


def test_roundtrip_and_formula_suites():
    hq = HatRack.quadrangle(QUAD)
    assert decomposition_roundtrip_check(hq, 20, random.Random(5)).passed
    assert commutator_formula_check(hq, 25, random.Random(5)).passed


def test_subring_recovery():
    hr = HatRack.plane(PLANE)
    res = subring_recovery_check(hr, V3, 300, random.Random(6))
    assert res.passed, res.witness
