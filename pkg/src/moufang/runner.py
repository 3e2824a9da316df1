"""The check registry and the scenario runner.

Checks execute in declaration order with per-check child seeds derived from
the scenario seed, so a failing check never hides a later one and two runs of
the same scenario produce byte-identical report bodies (timings are kept out
of the body).
"""

from __future__ import annotations

import hashlib
import json
import random
import time

from . import __version__
from .axioms import verify_gp_axioms, verify_moufang, verify_wd_axioms
from .compat import (check_exceptional, check_hex, check_oct, check_qp,
                     check_qq, qq_level_witness, strengthen_rank1)
from .epi import (CompatibilityFailure, Epimorphism, EpiDescriptor, Stage,
                  descends, derive_vw, factor_check, find_lift_check,
                  incidence_check, pasini_check, product_descent_check,
                  property_star, realize, rigid_check, surjectivity_check)
from .geometry import FlagBuilding
from .reports import CheckResult
from .scenario import (ScenarioContext, SchemaError, canonical_json,
                       scenario_digest)
from .suites import (commutator_containment_check, commutator_formula_check,
                     decomposition_roundtrip_check, kappa_classes_check,
                     mu_conjugation_check, subring_recovery_check, switch_check)
from .valuations import INF, coarsen, group_compare, value_is_infinite

PRNG_NAME = "mt19937 (random.Random), child seeds sha256(seed:check)"


def child_rng(seed, name):
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# ---------------------------------------------------------------------------
# Individual checks.  Each takes (ctx, rng, samples) and returns CheckResult.

def _check_field_axioms(ctx, rng, samples):
    field = ctx.field
    bad = None
    for _ in range(samples):
        x, y, z = (field.sample(rng, 5) for _ in range(3))
        if (x + y) + z != x + (y + z) or x * (y + z) != x * y + x * z:
            bad = {"triple": [str(x), str(y), str(z)]}
            break
        if not x.is_zero() and not (x * x.inv()).is_one():
            bad = {"x": str(x)}
            break
    return CheckResult("field-axioms", bad is None, samples=samples, witness=bad)


def _check_valuation_axioms(ctx, rng, samples):
    v = ctx.valuation
    field = ctx.field
    bad = None
    samples = min(samples, 120)
    for _ in range(samples):
        x, y = field.sample(rng, 3), field.sample(rng, 3)
        vx, vy, vxy = v.value(x), v.value(y), v.value(x * y)
        if not value_is_infinite(vx) and not value_is_infinite(vy):
            if group_compare(vxy, vx + vy) != 0:
                bad = {"pair": [str(x), str(y)], "rule": "nu(xy) = nu(x)+nu(y)"}
                break
        vsum = v.value(x + y)
        m = vx if group_compare(vx, vy) <= 0 else vy
        if group_compare(vsum, m) < 0:
            bad = {"pair": [str(x), str(y)], "rule": "ultrametric"}
            break
        if group_compare(vx, vy) != 0 and group_compare(vsum, m) != 0:
            bad = {"pair": [str(x), str(y)], "rule": "ultrametric equality"}
            break
    if bad is None and not value_is_infinite(v.value(field.zero)):
        bad = {"rule": "nu(0) = infinity"}
    if bad is None and v.rank > 0:
        for gv, pre in v.group_generators():
            if group_compare(v.value(pre), gv) != 0:
                bad = {"rule": "surjectivity witness", "value": repr(gv)}
                break
    return CheckResult("valuation-axioms", bad is None, samples=samples, witness=bad)


def _check_gp(ctx, rng, samples):
    return verify_gp_axioms(ctx.model.incidence_data())


def _check_gp_dual(ctx, rng, samples):
    res = verify_gp_axioms(ctx.model.dual_incidence_data())
    res.name = "gp-axioms-dual"
    return res


def _check_wd(ctx, rng, samples):
    if not isinstance(ctx.model, FlagBuilding):
        raise SchemaError("wd-axioms needs an A-class geometry")
    return verify_wd_axioms(ctx.model)


def _check_moufang(ctx, rng, samples):
    return verify_moufang(ctx.model)


def _check_moufang_image(ctx, rng, samples):
    e = ctx.epimorphism(rng)
    res = verify_moufang(e.target)
    res.name = "moufang-image"
    return res


def _check_realize(ctx, rng, samples):
    try:
        e = ctx.epimorphism(rng)
    except CompatibilityFailure as exc:
        return CheckResult("realize", False, samples=0,
                           details={"error": str(exc)}, witness=exc.witness)
    return CheckResult("realize", True, samples=0, details={
        "stages": len(e.stages),
        "target_field": repr(e.target.field)})


def _check_surjective(ctx, rng, samples):
    return surjectivity_check(ctx.epimorphism(rng), rng)


def _check_incidence(ctx, rng, samples):
    return incidence_check(ctx.epimorphism(rng), samples, rng)


def _check_fibers(ctx, rng, samples):
    return pasini_check(ctx.epimorphism(rng), 10, rng)


def _check_find_lift(ctx, rng, samples):
    return find_lift_check(ctx.epimorphism(rng), min(samples, 50), rng)


def _check_descent_bridge(ctx, rng, samples):
    e = ctx.epimorphism(rng)
    hatrack = ctx.hatrack
    n = hatrack.gonality
    half = max(1, samples // 2)
    disagreements = 0
    for i in (0, n):
        out = derive_vw(e, hatrack, i, half, rng)
        disagreements += out["samples"] - out["agreements"]
    levels = hatrack.levels(e.stages[0].valuation)
    return CheckResult("descent-bridge", disagreements == 0, samples=2 * half,
                       details={"roots": [0, n],
                                "levels": {str(i): _gv_json(lv) for i, lv in levels.items()}},
                       witness=None if disagreements == 0
                       else {"disagreements": disagreements})


def _gv_json(v):
    if value_is_infinite(v):
        return "inf"
    if v.kind == "trivial":
        return 0
    if v.kind == "int":
        return v.payload
    return list(v.payload)


def _check_property_star(ctx, rng, samples):
    e = ctx.epimorphism(rng)
    hatrack = ctx.hatrack
    from .suites import _sample_param_in_class
    group = hatrack.group(0)
    witness = None
    rounds = max(1, samples // 20)
    for _ in range(rounds):
        a = _sample_param_in_class(group, e.stages[0].valuation, rng, "V-minus-W")
        g = group.elation(a)
        ok, wit = property_star(e, g, hatrack.x(0), 20, rng)
        if not ok:
            witness = wit
            break
    return CheckResult("property-star", witness is None,
                       samples=rounds * 20, witness=witness)


def _check_product_descent(ctx, rng, samples):
    return product_descent_check(ctx.epimorphism(rng), ctx.hatrack,
                                 min(samples, 60), rng)


def _check_rigidity(ctx, rng, samples):
    return rigid_check(ctx.epimorphism(rng), ctx.hatrack, min(samples, 60), rng)


def _check_factor(ctx, rng, samples):
    full = ctx.epimorphism(rng)
    descriptor = ctx.descriptor
    if descriptor.valuation.rank < 2:
        raise SchemaError("factor needs a valuation of rank at least 2")
    inner, _ = coarsen(descriptor.valuation)
    head = realize(EpiDescriptor(descriptor.class_tag, descriptor.field, inner,
                                 qspace=descriptor.qspace,
                                 flag_rank=descriptor.flag_rank), rng)
    direct = Epimorphism([Stage(full.source, descriptor.valuation, full.target)],
                         descriptor)
    res = factor_check(head, full, min(samples, 80), rng)
    if res.passed:
        agree = 0
        probes = min(samples, 80)
        from .epi import _sample_elements
        for _ in range(probes):
            z = _sample_elements(full.source, 1, rng)[0]
            if full.map_element(z) == direct.map_element(z):
                agree += 1
        res.details["direct_equals_two_step"] = agree == probes
        res.samples += probes
        if agree != probes:
            res.passed = False
            res.witness = {"reason": "direct rank-n reduction disagrees"}
    return res


def _suite_check(fn, needs_root=False):
    def run(ctx, rng, samples):
        hatrack = ctx.hatrack
        v = ctx.valuation
        if needs_root:
            n = hatrack.gonality
            half = max(1, samples // 2)
            r0 = fn(hatrack, v, 0, half, rng)
            rn = fn(hatrack, v, n, half, rng)
            merged = CheckResult(r0.name, r0.passed and rn.passed,
                                 samples=r0.samples + rn.samples,
                                 details={"roots": [0, n]},
                                 witness=r0.witness or rn.witness)
            return merged
        return fn(hatrack, v, samples, rng)
    return run


def _check_decomposition(ctx, rng, samples):
    return decomposition_roundtrip_check(ctx.hatrack, min(samples, 80), rng)


def _check_commutator_formula(ctx, rng, samples):
    return commutator_formula_check(ctx.hatrack, min(samples, 80), rng)


def _check_compat_qq(ctx, rng, samples):
    space = ctx.qspace
    v = ctx.valuation
    level = ctx.compat_level("k") if "compat" in ctx.scenario else v.zero_value()
    witness = qq_level_witness(space, v, level, rng)
    res = check_qq(space, v, level, samples, rng)
    res.details["level_witness"] = (None if witness is None else
                                    [space.field.element_to_str(c) for c in witness])
    return res


def _check_compat_qp(ctx, rng, samples):
    cfg = ctx.compat_config
    pairs = None
    if "pairs" in cfg:
        pairs = [{k: ctx.field.parse(val) for k, val in entry.items()}
                 for entry in cfg["pairs"]]
    return check_qp(ctx.sigma(), ctx.valuation, samples, rng, pairs=pairs,
                    level=ctx.compat_level("k") if "k" in cfg else None)


def _check_compat_hex(ctx, rng, samples):
    cfg = ctx.compat_config
    if cfg.get("preset", "cubic-diagonal") != "cubic-diagonal":
        raise SchemaError("unknown hexagon preset")
    field = ctx.field
    three = field.from_int(3)
    return check_hex(lambda x: x ** 3, lambda u, v: three * u * v,
                     ctx.valuation, ctx.compat_level("k"), samples, rng)


def _check_compat_oct(ctx, rng, samples):
    return check_oct(ctx.sigma(), ctx.valuation, samples, rng)


def _check_compat_exceptional(ctx, rng, samples):
    cfg = ctx.compat_config
    return check_exceptional(cfg.get("data", {}), cfg.get("k", 0), cfg.get("l", 0))


def _check_rank1(ctx, rng, samples):
    return strengthen_rank1(ctx.qspace, ctx.valuation, samples, rng)


REGISTRY = {
    "field-axioms": _check_field_axioms,
    "valuation-axioms": _check_valuation_axioms,
    "gp-axioms": _check_gp,
    "gp-axioms-dual": _check_gp_dual,
    "wd-axioms": _check_wd,
    "moufang": _check_moufang,
    "moufang-image": _check_moufang_image,
    "realize": _check_realize,
    "epi-surjective": _check_surjective,
    "epi-incidence": _check_incidence,
    "epi-fibers": _check_fibers,
    "find-lift": _check_find_lift,
    "descent-bridge": _check_descent_bridge,
    "property-star": _check_property_star,
    "product-descent": _check_product_descent,
    "opposite-rigidity": _check_rigidity,
    "factor": _check_factor,
    "kappa-classes": _suite_check(kappa_classes_check, needs_root=True),
    "switch-map": _suite_check(switch_check, needs_root=True),
    "mu-conjugation": _suite_check(mu_conjugation_check, needs_root=True),
    "commutator-containment": _suite_check(commutator_containment_check),
    "commutator-formula": _check_commutator_formula,
    "decomposition-roundtrip": _check_decomposition,
    "subring-recovery": _suite_check(subring_recovery_check),
    "compat-qq": _check_compat_qq,
    "compat-qp": _check_compat_qp,
    "compat-hex": _check_compat_hex,
    "compat-oct": _check_compat_oct,
    "compat-exceptional": _check_compat_exceptional,
    "rank1-strengthened": _check_rank1,
}


def run_checks(scenario, seed=None, samples=None, only=None):
    """Execute the scenario's checks in order; returns (report dict, all_passed)."""
    ctx = ScenarioContext(scenario, seed=seed, samples=samples)
    names = scenario["checks"] if only is None else only
    for name in names:
        if name not in REGISTRY:
            raise SchemaError(f"unknown check {name!r}")
    results = []
    timing = {}
    start_all = time.monotonic()
    for name in names:
        rng = child_rng(ctx.seed, name)
        start = time.monotonic()
        try:
            result = REGISTRY[name](ctx, rng, ctx.samples)
        except CompatibilityFailure as exc:
            result = CheckResult(name, False, samples=0,
                                 details={"error": str(exc)}, witness=exc.witness)
        timing[name] = round(time.monotonic() - start, 6)
        results.append(result)
    timing["total_seconds"] = round(time.monotonic() - start_all, 6)

    body = {
        "tool": {"name": "moufang", "version": __version__, "rng": PRNG_NAME},
        "seed": ctx.seed,
        "samples": ctx.samples,
        "scenario_digest": scenario_digest(scenario),
        "checks": [r.to_json() for r in results],
    }
    if "geometry" in scenario and scenario["geometry"]["class"] in ("T", "QQ"):
        try:
            hatrack = ctx.hatrack
            body["hatrack"] = hatrack.describe()
            if "valuation" in scenario:
                body["levels"] = {str(i): _gv_json(lv)
                                  for i, lv in hatrack.levels(ctx.valuation).items()}
        except SchemaError:
            pass
    report = {"body": body, "timing": timing}
    return report, all(r.passed for r in results)


def render_report(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def render_body(report):
    return json.dumps(report["body"], sort_keys=True, indent=2,
                      ensure_ascii=True) + "\n"
