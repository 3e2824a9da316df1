"""Sampled verification suites for the subgroup calculus on a hat-rack.

Everything here works on the formula side (valuation classes at the per-root
levels), with matrix decompositions as ground truth.  The geometric descent
oracle lives in `epi` and is bridged to these classes by `epi.derive_vw`.
"""

from __future__ import annotations

from .reports import CheckResult
from .rootgroups import (BadClassification, DecompositionFailure, commutator,
                         conjugate_by, conjugate_into, decompose, kappa,
                         kappa_inv, mu, switch_map, vw_classify)
from .valuations import group_compare, value_is_infinite


def _classify(group, valuation, a):
    return vw_classify(valuation, group.eta, group.level(valuation), a)


def _sample_param(group, rng, bound=5):
    if group.kind == "field":
        return group.field.sample(rng, bound)
    return tuple(group.field.sample(rng, bound) for _ in range(group.model.qspace.dim))


def _sample_param_in_class(group, valuation, rng, target, tries=300):
    """A parameter with the requested class, built with uniformizer shifts.

    Multiplying the parameter by pi^k moves nu(eta) by k * deg(eta), so the
    exact level is only reachable when the gap divides; the strict classes
    take the nearest step past the level.
    """
    level = group.level(valuation)
    for _ in range(tries):
        a = _sample_param(group, rng)
        if group.param_is_zero(a):
            continue
        if valuation.rank == 1:
            val = valuation.value(group.eta(a))
            gap = level.payload - val.payload
            d = group.eta_degree
            if target == "V-minus-W":
                if gap % d != 0:
                    continue
                k = gap // d
            elif target == "W":
                k = gap // d + 1 if gap % d == 0 else -((-gap) // d)
            else:
                k = gap // d - 1 if gap % d == 0 else gap // d
            pi = valuation.uniformizer()
            if group.kind == "field":
                a = a * pi ** k
            else:
                a = tuple(c * pi ** k for c in a)
        if _classify(group, valuation, a) == target:
            return a
    raise RuntimeError(f"could not sample a {target} parameter for U_{group.index}")


KAPPA_CLASS_MAP = {"W": "outside-V", "V-minus-W": "V-minus-W", "outside-V": "W"}


def kappa_classes_check(hatrack, valuation, i, samples, rng) -> CheckResult:
    """kappa_i swaps the kernel class with the complement and fixes the middle:
    W* -> outside-V, V\\W -> V\\W, outside-V -> W*."""
    group = hatrack.group(i)
    n = hatrack.gonality
    opposite = hatrack.group(i + n)
    witness = None
    per_class = samples // 3
    tested = 0
    for target in ("W", "V-minus-W", "outside-V"):
        for _ in range(per_class):
            a = _sample_param_in_class(group, valuation, rng, target)
            k = kappa(hatrack, i, group.elation(a))
            got = _classify(opposite, valuation, k.param)
            tested += 1
            if got != KAPPA_CLASS_MAP[target]:
                witness = {"root": i, "class_in": target, "class_out": got}
                break
        if witness:
            break
    return CheckResult("kappa-classes", witness is None, samples=tested,
                       witness=witness)


def switch_check(hatrack, valuation, i, samples, rng) -> CheckResult:
    """The switch built from kappa lands in W*, and so does the arithmetic
    shortcut a b^-1 a on the field side."""
    group = hatrack.group(i)
    witness = None
    tested = 0
    seen = set()
    for _ in range(samples):
        v_param = _sample_param_in_class(group, valuation, rng, "V-minus-W")
        g_param = _sample_param_in_class(group, valuation, rng, "outside-V")
        v_el, g_el = group.elation(v_param), group.elation(g_param)
        k_prod = kappa(hatrack, i, v_el) * kappa(hatrack, i, g_el)
        back = kappa_inv(hatrack, i, conjugate_into(hatrack, k_prod, i + hatrack.gonality))
        w_el = back * v_el.inv()
        w_param = decompose(hatrack, w_el, i, i)[0]
        tested += 1
        cls = _classify(group, valuation, w_param)
        if cls != "W" or group.param_is_zero(w_param):
            witness = {"root": i, "landed": cls}
            break
        seen.add(_param_key(w_param))
        if group.kind == "field":
            arith = switch_map(valuation, group.level(valuation), v_param, g_param)
            if _classify(group, valuation, arith) != "W":
                witness = {"root": i, "arith": str(arith)}
                break
    details = {"distinct_images": len(seen)}
    return CheckResult("switch-map", witness is None, samples=tested,
                       details=details, witness=witness)


def _param_key(p):
    return p if not isinstance(p, tuple) else tuple(p)


def mu_conjugation_check(hatrack, valuation, i, samples, rng) -> CheckResult:
    """Conjugating by mu_i of a middle-class element carries the classified
    sets of U_j onto those of U_{2i+n-j}."""
    group = hatrack.group(i)
    n = hatrack.gonality
    witness = None
    tested = 0
    for _ in range(samples):
        v_param = _sample_param_in_class(group, valuation, rng, "V-minus-W")
        m = mu(hatrack, i, group.elation(v_param))
        j = rng.randrange(2 * n)
        src = hatrack.group(j)
        cls = rng.choice(("W", "V-minus-W", "outside-V"))
        a = _sample_param_in_class(src, valuation, rng, cls)
        conj = conjugate_by(src.elation(a), m)
        k = (2 * i + n - j) % (2 * n)
        dst = hatrack.group(k)
        tested += 1
        try:
            image = conjugate_into(hatrack, conj, k)
        except DecompositionFailure:
            witness = {"from": j, "to": k, "error": "conjugate left the root group"}
            break
        got = _classify(dst, valuation, image.param)
        if got != cls:
            witness = {"from": j, "to": k, "class_in": cls, "class_out": got}
            break
    return CheckResult("mu-conjugation", witness is None, samples=tested,
                       witness=witness)


def commutator_containment_check(hatrack, valuation, samples, rng) -> CheckResult:
    """[V_i, V_j] stays inside the V-classes of the span; one W input pushes
    every factor into the W-classes."""
    n = hatrack.gonality
    witness = None
    tested = 0
    for _ in range(samples):
        i = rng.randrange(2 * n)
        j = i + rng.randint(2, n - 1)
        gi, gj = hatrack.group(i), hatrack.group(j)
        strict = rng.randrange(3)
        cls_i = "W" if strict == 1 else "V-minus-W"
        cls_j = "W" if strict == 2 else "V-minus-W"
        a = _sample_param_in_class(gi, valuation, rng, cls_i)
        b = _sample_param_in_class(gj, valuation, rng, cls_j)
        comm = commutator(gi.elation(a), gj.elation(b))
        params = decompose(hatrack, comm, i + 1, j - 1)
        want_w = strict != 0
        tested += 1
        for offset, p in enumerate(params):
            mid = hatrack.group(i + 1 + offset)
            cls = _classify(mid, valuation, p)
            if cls == "outside-V" or (want_w and cls != "W"):
                witness = {"i": i, "j": j, "factor_index": i + 1 + offset,
                           "class": cls, "strict_input": want_w}
                break
        if witness:
            break
    return CheckResult("commutator-containment", witness is None,
                       samples=tested, witness=witness)


def decomposition_roundtrip_check(hatrack, samples, rng) -> CheckResult:
    """Refactoring a random product u_i ... u_j returns the original
    parameters (the unique-decomposition property)."""
    n = hatrack.gonality
    witness = None
    for _ in range(samples):
        i = rng.randrange(2 * n)
        width = rng.randint(1, n)
        params = []
        product = None
        for k in range(width):
            group = hatrack.group(i + k)
            p = _sample_param(group, rng)
            params.append(p)
            e = group.elation(p)
            product = e if product is None else product * e
        try:
            recovered = decompose(hatrack, product, i, i + width - 1)
        except DecompositionFailure as exc:
            witness = {"i": i, "width": width, "error": str(exc)}
            break
        if recovered != params:
            witness = {"i": i, "width": width}
            break
    return CheckResult("decomposition-roundtrip", witness is None,
                       samples=samples, witness=witness)


def commutator_formula_check(hatrack, samples, rng) -> CheckResult:
    """The decomposed commutator factors match the closed-form relations
    (with the recorded per-index signs) wherever a closed form exists."""
    from .rootgroups import commutator_check
    n = hatrack.gonality
    witness = None
    tested = 0
    for _ in range(samples):
        i = rng.randrange(2 * n)
        if n == 3:
            j, invert = i + 2, False
        else:
            j = i + (2 if i % 2 == 0 else 3)
            invert = True
        gi, gj = hatrack.group(i), hatrack.group(j)
        a, b = _sample_param(gi, rng), _sample_param(gj, rng)
        out = commutator_check(hatrack, i, a, j, b, invert_second=invert)
        if out["formula_ok"] is None:
            continue
        tested += 1
        if not out["formula_ok"]:
            witness = {"i": i, "j": j}
            break
    return CheckResult("commutator-formula", witness is None, samples=tested,
                       witness=witness)


def subring_recovery_check(hatrack, valuation, samples, rng) -> CheckResult:
    """The classified sets reassemble the valuation ring: B u C u {0} is
    closed under + and *, its units are exactly B, and every element outside
    lands back inside after inversion (the total-subring property)."""
    group = hatrack.group(0)
    if group.kind != "field":
        raise BadClassification("subring recovery reads classes on a field root")
    field = group.field
    level = group.level(valuation)

    def cls(y):
        return vw_classify(valuation, lambda x: x, level, y)

    witness = None
    tested = 0
    for _ in range(samples):
        x = field.sample(rng, 5)
        y = field.sample(rng, 5)
        tested += 1
        in_ring = {"V-minus-W", "W"}
        if cls(x) in in_ring and cls(y) in in_ring:
            if cls(x + y) not in in_ring or cls(x * y) not in in_ring:
                witness = {"pair": [str(x), str(y)], "reason": "not closed"}
                break
        if cls(x) == "V-minus-W":
            if cls(x.inv()) != "V-minus-W":
                witness = {"x": str(x), "reason": "unit with non-unit inverse"}
                break
        if not x.is_zero() and cls(x) == "outside-V":
            if cls(x.inv()) not in in_ring or cls(x.inv()) == "outside-V":
                witness = {"x": str(x), "reason": "total-subring property"}
                break
    return CheckResult("subring-recovery", witness is None, samples=tested,
                       witness=witness)
