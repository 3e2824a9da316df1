"""Place-induced epimorphisms onto residue geometries.

An epimorphism is a chain of reduction stages.  Each stage scales an element
by the inverse of its first minimal-valuation coordinate (so everything lands
in the valuation ring with a unit pivot) and reduces coordinatewise; bases of
subspaces are pivoted the same way, one echelon step per row, which keeps the
reduced rows independent over the residue field.

The geometric descent test, Property (*) sampling, fiber lifting, descriptor
realization and the factorization check all live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .fields import Element
from .geometry import (Flag, FlagBuilding, PlaneLine, Point, ProjectivePlane,
                       QuadraticSpace, QuadricQuadrangle, SpanLine)
from .linalg import proj_normalize, rank as row_rank, vadd, vscale, vsub, vzero
from .reports import CheckResult
from .rootgroups import HatRack, RootElation, vw_classify
from .valuations import (GroupValue, TrivialValuation, Valuation, coarsen,
                         group_compare, value_is_infinite)


class EpiError(Exception):
    pass


class RankCollapse(EpiError):
    pass


class CollapsedHatRack(EpiError):
    pass


class LiftFailure(EpiError):
    pass


class CompatibilityFailure(EpiError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedClass(EpiError):
    pass


class FactorMismatch(EpiError):
    pass


class FactorPrecondition(EpiError):
    pass


# ---------------------------------------------------------------------------
# Coordinate reduction.

def _min_valuation_pivot(valuation, row):
    best = None
    best_idx = None
    for idx, entry in enumerate(row):
        v = valuation.value(entry)
        if value_is_infinite(v):
            continue
        if best is None or group_compare(v, best) < 0:
            best, best_idx = v, idx
    if best_idx is None:
        raise RankCollapse("zero row during reduction")
    return best_idx


def _adapted_rows(valuation, rows):
    """Pivot a basis over the valuation ring: each row is scaled by the
    inverse of its first minimal-valuation entry after clearing the earlier
    pivot columns, so the rows reduce to independent residue vectors."""
    work = [list(r) for r in rows]
    pivots = []
    for ri in range(len(work)):
        row = work[ri]
        for pj, pc in pivots:
            if not row[pc].is_zero():
                f = row[pc]
                row = [x - f * y for x, y in zip(row, work[pj])]
        pc = _min_valuation_pivot(valuation, row)
        inv = row[pc].inv()
        row = [x * inv for x in row]
        work[ri] = row
        pivots.append((ri, pc))
    return [tuple(r) for r in work]


def reduce_rows(valuation, rows):
    """Reduce a basis to a full-rank residue basis."""
    adapted = _adapted_rows(valuation, rows)
    reduced = tuple(tuple(valuation.reduce(x) for x in row) for row in adapted)
    if row_rank(reduced) != len(rows):
        raise RankCollapse("reduced basis lost rank")
    return reduced


def reduce_vector(valuation, coords):
    return reduce_rows(valuation, [coords])[0]


@dataclass
class Stage:
    source: object
    valuation: Valuation
    target: object

    def map_element(self, x):
        if isinstance(x, Point):
            return self.target.point(reduce_vector(self.valuation, x.coords))
        if isinstance(x, PlaneLine):
            return self.target.line(reduce_vector(self.valuation, x.coords))
        if isinstance(x, SpanLine):
            return self.target.line(reduce_rows(self.valuation, x.rows))
        if isinstance(x, Flag):
            return self.target.flag(tuple(reduce_rows(self.valuation, s)
                                          for s in x.spaces))
        raise EpiError(f"cannot reduce {x!r}")


def reduce_element(stage: Stage, x):
    return stage.map_element(x)


class Epimorphism:
    """A composition of reduction stages from a source model to a target."""

    def __init__(self, stages, descriptor=None):
        if not stages:
            raise EpiError("an epimorphism needs at least one stage")
        self.stages = stages
        self.descriptor = descriptor

    @property
    def source(self):
        return self.stages[0].source

    @property
    def target(self):
        return self.stages[-1].target

    def is_identity(self):
        return all(st.valuation.is_trivial() for st in self.stages)

    def map_element(self, x):
        for st in self.stages:
            x = st.map_element(x)
        return x

    def lift_element(self, y, rng=None, perturb=False):
        """A source element mapping to y; optionally perturbed within the fiber."""
        for st in reversed(self.stages):
            y = _lift_stage(st, y, rng if perturb else None)
            if perturb:
                perturb = False  # perturbing the innermost stage is enough
        return y

    def provenance(self):
        return [st.valuation.descriptor() for st in self.stages]


HYPERBOLIC_PARTNER = {0: 1, 1: 0, 2: 3, 3: 2}


def _small_perturbation(valuation, rng):
    """An element of strictly positive value: a uniformizer multiple with the
    random factor pushed into the valuation ring first."""
    pi = valuation.uniformizer()
    s = valuation.field.sample(rng, 3)
    if s.is_zero():
        return pi
    val = valuation.value(s).as_tuple()[0]
    return pi ** (1 + max(0, -val)) * s


def _lift_coords(st, coords, rng):
    lifted = [st.valuation.lift(c) for c in coords]
    if rng is not None and not st.valuation.is_trivial():
        pivot = next(i for i, c in enumerate(lifted) if not c.is_zero())
        for i in range(len(lifted)):
            if i != pivot:
                lifted[i] = lifted[i] + _small_perturbation(st.valuation, rng)
    return lifted


def _singular_correct(model, coords):
    pivot = next(i for i, c in enumerate(coords[:4]) if not c.is_zero())
    partner = HYPERBOLIC_PARTNER[pivot]
    defect = model.qhat(tuple(coords))
    coords = list(coords)
    coords[partner] = coords[partner] - defect / coords[pivot]
    return coords


def _lift_stage(st, y, rng):
    if isinstance(y, Point):
        lifted = _lift_coords(st, y.coords, rng)
        if isinstance(st.source, QuadricQuadrangle):
            lifted = _singular_correct(st.source, lifted)
        out = st.source.point(lifted)
    elif isinstance(y, PlaneLine):
        out = st.source.line(_lift_coords(st, y.coords, rng))
    elif isinstance(y, SpanLine):
        out = _lift_span_line(st, y, rng)
    elif isinstance(y, Flag):
        out = _lift_flag(st, y, rng)
    else:
        raise EpiError(f"cannot lift {y!r}")
    if st.map_element(out) != y:
        raise LiftFailure("lift failed to reduce back")
    return out


def _lift_span_line(st, y, rng, attempts=400):
    """Lift one point of the line, then search its pencil for a preimage."""
    import random as _random
    model = st.source
    base_point = Point(proj_normalize(y.rows[0]))
    local = rng if rng is not None else _random.Random(20924)
    p = _lift_stage(st, base_point, rng)
    at, special = model.base_pencil_lines()
    matrix, _ = model.transporter(p)
    from .linalg import row_times_mat
    cand = model.line(tuple(row_times_mat(r, matrix) for r in special))
    if st.map_element(cand) == y:
        return cand
    for _ in range(attempts):
        w = tuple(model.field.sample(local, 4) for _ in range(model.qspace.dim))
        cand = model.line(tuple(row_times_mat(r, matrix) for r in at(w)))
        if st.map_element(cand) == y:
            return cand
    raise LiftFailure("no line preimage found within the attempt budget")


def _lift_flag(st, y, rng):
    """Lift an adapted chain basis so the lifted subspaces stay nested."""
    chain = []
    collected = []
    for space in y.spaces:
        for row in space:
            if row_rank(tuple(collected) + (row,)) > len(collected):
                collected.append(row)
                chain.append(row)
        if len(collected) != len(space):
            raise LiftFailure("degenerate flag")
    lifted_chain = [_lift_coords(st, row, rng) for row in chain]
    spaces = [tuple(tuple(r) for r in lifted_chain[:k])
              for k in range(1, len(lifted_chain) + 1)]
    return st.source.flag(tuple(spaces[:st.source.rank]))


# ---------------------------------------------------------------------------
# Descriptors and realization.

@dataclass
class EpiDescriptor:
    """Class tag, field, valuation, form data and level constants."""

    class_tag: str
    field: object
    valuation: Valuation
    qspace: QuadraticSpace = None
    flag_rank: int = None
    hatrack_scale: list = None
    levels: dict = dfield(default_factory=dict)

    def build_source(self):
        return build_model(self.class_tag, self.field, qspace=self.qspace,
                           flag_rank=self.flag_rank)

    def validate_levels(self):
        """Each level must be a finite value of the relevant norm image."""
        for key, level in self.levels.items():
            if value_is_infinite(level):
                raise CompatibilityFailure(f"level {key} is infinite")
            if self.class_tag == "QQ" and int(key) % 2 == 0:
                from .compat import qq_level_witness
                witness = qq_level_witness(self.qspace, self.valuation, level)
                if witness is None:
                    raise CompatibilityFailure(
                        f"level {key} is not attained by nu(q(L0*))")

    def to_json(self):
        out = {"class": self.class_tag, "field": self.field.descriptor(),
               "valuation": self.valuation.descriptor()}
        if self.qspace is not None:
            out["qspace"] = self.qspace.descriptor()
        if self.flag_rank is not None:
            out["flag_rank"] = self.flag_rank
        return out


def build_model(class_tag, field, qspace=None, flag_rank=None):
    if class_tag == "T":
        return ProjectivePlane(field)
    if class_tag == "QQ":
        if qspace is None:
            raise UnsupportedClass("quadrangles need a quadratic space")
        return QuadricQuadrangle(field, qspace)
    if class_tag == "A":
        if flag_rank is None:
            raise UnsupportedClass("flag buildings need a rank")
        return FlagBuilding(field, flag_rank)
    raise UnsupportedClass(f"no geometric model for class {class_tag!r}")


def _reduce_qspace(qspace, valuation):
    residue = valuation.residue_field
    rows = []
    for row in qspace.coeffs:
        out = []
        for c in row:
            val = valuation.value(c)
            if not value_is_infinite(val) and group_compare(val, valuation.zero_value()) < 0:
                raise CompatibilityFailure(
                    "quadratic form coefficient outside the valuation ring",
                    witness={"coefficient": str(c)})
            out.append(valuation.reduce(c))
        rows.append(out)
    return QuadraticSpace(residue, rows)


def realize(descriptor: EpiDescriptor, rng=None) -> Epimorphism:
    """Identity for rank zero, place reduction for rank one, a coarsening
    recursion for higher finite rank."""
    tag = descriptor.class_tag
    if tag not in ("T", "QQ", "A"):
        raise UnsupportedClass(f"class {tag!r} has no realized geometry here")
    descriptor.validate_levels()
    source = descriptor.build_source()
    v = descriptor.valuation
    if v.rank == 0:
        return Epimorphism([Stage(source, v, source)], descriptor)
    if v.rank == 1:
        target = _reduce_target(descriptor, source, v, rng)
        return Epimorphism([Stage(source, v, target)], descriptor)
    inner, outer = coarsen(v)
    head = EpiDescriptor(tag, descriptor.field, inner, qspace=descriptor.qspace,
                         flag_rank=descriptor.flag_rank)
    e1 = realize(head, rng)
    tail_q = e1.target.qspace if tag == "QQ" else None
    tail = EpiDescriptor(tag, inner.residue_field, outer, qspace=tail_q,
                         flag_rank=descriptor.flag_rank)
    e2 = realize(tail, rng)
    return Epimorphism(e1.stages + e2.stages, descriptor)


def _reduce_target(descriptor, source, valuation, rng):
    tag = descriptor.class_tag
    residue = valuation.residue_field
    if tag == "T":
        return ProjectivePlane(residue)
    if tag == "A":
        return FlagBuilding(residue, descriptor.flag_rank)
    from .compat import check_qq
    level = valuation.zero_value()
    report = check_qq(descriptor.qspace, valuation, level,
                      samples=200, rng=rng)
    if not report.passed:
        raise CompatibilityFailure("bilinear values drop below the level",
                                   witness=report.witness)
    reduced = _reduce_qspace(descriptor.qspace, valuation)
    iso = reduced.check_anisotropic(rng=rng, samples=500)
    if iso is not None:
        raise CompatibilityFailure(
            "residue quadratic form is isotropic",
            witness={"vector": [residue.element_to_str(c) for c in iso]})
    return QuadricQuadrangle(residue, reduced)


# ---------------------------------------------------------------------------
# Descent.

def _check_hatrack(e, hatrack):
    if hatrack.collapses_under(e.map_element):
        raise CollapsedHatRack("hat-rack apartment collapses under the map")


def descends(e: Epimorphism, hatrack: HatRack, g: RootElation):
    """Geometric three-way test, with no reference to the valuation formula.

    g in U_i descends iff the image of x_{i-1}^g avoids the image of x_{i+1};
    it descends to a nontrivial automorphism iff the image also moves.
    """
    _check_hatrack(e, hatrack)
    i = g.group.index
    pendant = hatrack.x(i - 1)
    moved = e.map_element(hatrack.act(g, pendant))
    if moved == e.map_element(hatrack.x(i + 1)):
        return "no"
    if moved == e.map_element(pendant):
        return "yes-trivial-image"
    return "yes-nontrivial"


GEOMETRIC_TO_CLASS = {"no": "outside-V", "yes-trivial-image": "W",
                      "yes-nontrivial": "V-minus-W"}


def derive_vw(e: Epimorphism, hatrack: HatRack, i, samples, rng):
    """Classify sampled parameters with the descent oracle, next to the
    valuation-formula classification at the hat-rack's level for U_i."""
    _check_hatrack(e, hatrack)
    group = hatrack.group(i)
    valuation = e.stages[0].valuation
    level = group.level(valuation)
    rows = []
    agreements = 0
    for _ in range(samples):
        param = _sample_param(group, rng)
        geo = GEOMETRIC_TO_CLASS[descends(e, hatrack, group.elation(param))]
        formula = vw_classify(valuation, group.eta, level, param)
        rows.append((param, geo, formula))
        if geo == formula:
            agreements += 1
    return {"level": level, "rows": rows, "agreements": agreements,
            "samples": samples}


def _sample_param(group, rng, bound=6):
    if group.kind == "field":
        return group.field.sample(rng, bound)
    return tuple(group.field.sample(rng, bound) for _ in range(group.model.qspace.dim))


def property_star(e: Epimorphism, g, x, budget, rng):
    """Sample pairs incident with x and test image-equality equivariance.

    Pairs include deliberate fiber collisions (chart parameters perturbed by
    uniformizer multiples), since random pairs rarely share an image.
    Returns (holds, witness).
    """
    model = e.source
    mapper = e.map_element
    for _ in range(budget):
        a = model.pencil_sample(x, rng)
        if rng.randrange(2) == 0 or e.stages[0].valuation.is_trivial():
            b = model.pencil_sample(x, rng)
        else:
            b = _collided_neighbor(e, model, x, a, rng)
        same_before = mapper(a) == mapper(b)
        ga, gb = hat_act(model, g, a), hat_act(model, g, b)
        same_after = mapper(ga) == mapper(gb)
        if same_before != same_after:
            return False, {"a": repr(a), "b": repr(b),
                           "before": same_before, "after": same_after}
    return True, None


def hat_act(model, auto, elem):
    return model.apply(elem, auto.matrix, auto.inverse)


def _collided_neighbor(e, model, x, a, rng):
    """An element of the pencil of x likely sharing a's image."""
    valuation = e.stages[0].valuation
    if isinstance(model, ProjectivePlane):
        f0, f1 = model.pencil_chart(x)
        make = model.line if x.kind == "point" else model.point
        t = model.field.sample(rng, 5)
        base = vadd(f0, vscale(f1, t))
        return make(vadd(base, vscale(f1, _small_perturbation(valuation, rng))))
    if x.kind == "line":
        r0, r1 = x.rows
        t = model.field.sample(rng, 5)
        return model.point(vadd(r0, vscale(r1, t + _small_perturbation(valuation, rng))))
    return model.sample_line_through(x, rng)


def fibers_sample(e: Epimorphism, y, n, rng):
    """n pairwise-distinct preimages of a target element."""
    if e.is_identity():
        exact = e.lift_element(y)
        if n > 1:
            raise LiftFailure("fibers of an isomorphism are singletons")
        return [exact]
    out = []
    seen = set()
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 40 * n + 40:
            raise LiftFailure(f"only {len(out)} distinct preimages found")
        z = e.lift_element(y, rng=rng, perturb=True)
        if z not in seen:
            seen.add(z)
            out.append(z)
    return out


# ---------------------------------------------------------------------------
# Factorization through a coarsening.

def _head_valuation(e):
    v = e.stages[0].valuation
    return v


def factor_check(e_fine: Epimorphism, e_coarse: Epimorphism, samples, rng,
                 refinement_pairs=None) -> CheckResult:
    """Connect the finer-resolution image to the coarser one and verify the
    factorization identity on sampled elements.

    e_fine is the rank-one head (its valuation is the coarsening of the full
    one); e_coarse is the full map.  The connector is built pointwise from
    sampled (fine image, coarse image) pairs; a functional violation is a
    factorization failure.  Fiber refinement (equal fine images force equal
    coarse images) is exercised on deliberately collided pairs.
    """
    if e_fine.source.field != e_coarse.source.field:
        raise FactorPrecondition("the two maps reduce different geometries")
    vf, vc = _head_valuation(e_fine), _head_valuation(e_coarse)
    identical = vf.descriptor() == vc.descriptor() and len(e_fine.stages) == len(e_coarse.stages)
    if not identical:
        full = e_coarse.descriptor.valuation if e_coarse.descriptor else None
        if full is None or full.rank < 2:
            raise FactorPrecondition("the full map must have rank at least 2")
        inner, _ = coarsen(full)
        if inner.descriptor() != vf.descriptor():
            raise FactorPrecondition(
                "the head valuation is not the coarsening of the full one")

    connector = {}
    checked = 0
    witness = None
    elements = _sample_elements(e_fine.source, samples, rng)
    for z in elements:
        fine, coarse = e_fine.map_element(z), e_coarse.map_element(z)
        checked += 1
        if fine in connector and connector[fine] != coarse:
            witness = {"element": repr(z), "fine": repr(fine),
                       "coarse": [repr(connector[fine]), repr(coarse)]}
            break
        connector[fine] = coarse

    wanted_pairs = refinement_pairs if refinement_pairs is not None \
        else max(1, samples // 4)
    refinement_pairs = 0
    if witness is None:
        for z in _sample_elements(e_fine.source, wanted_pairs, rng, bound=2):
            try:
                mates = fibers_sample(e_fine, e_fine.map_element(z), 2, rng)
            except LiftFailure:
                continue
            refinement_pairs += 1
            imgs = {repr(e_coarse.map_element(m)) for m in mates}
            if len(imgs) != 1:
                witness = {"fiber_of": repr(e_fine.map_element(z)),
                           "coarse_images": sorted(imgs)}
                break

    bijective = None
    if identical and witness is None:
        values = list(connector.values())
        bijective = len(set(repr(v) for v in values)) == len(set(connector))
        if not bijective:
            witness = {"reason": "connector identifies distinct images"}

    details = {"connector_size": len(connector), "refinement_pairs": refinement_pairs}
    if bijective is not None:
        details["connector_bijective_on_samples"] = bijective
    return CheckResult("factor", witness is None, samples=checked,
                       details=details, witness=witness)


def _sample_elements(model, count, rng, bound=3):
    out = []
    for k in range(count):
        if isinstance(model, ProjectivePlane):
            out.append(model.sample_point(rng, bound) if k % 2 == 0
                       else model.sample_line(rng, bound))
        elif isinstance(model, QuadricQuadrangle):
            p = model.sample_point(rng, bound)
            out.append(p if k % 2 == 0 else model.sample_line_through(p, rng, bound))
        else:
            raise EpiError("sampling is defined for the polygon models")
    return out


# ---------------------------------------------------------------------------
# Sampled suite helpers used by the runner and the tests.

def surjectivity_check(e: Epimorphism, rng) -> CheckResult:
    """Exhaustively lift every element of a finite target."""
    target = e.target
    if isinstance(target, FlagBuilding):
        elements = target.chambers()
    else:
        elements = target.elements()
    missed = None
    for y in elements:
        try:
            z = e.lift_element(y, rng=rng)
        except LiftFailure:
            missed = repr(y)
            break
        if e.map_element(z) != y:
            missed = repr(y)
            break
    return CheckResult("epi-surjective", missed is None, samples=len(elements),
                       details={"target_elements": len(elements)},
                       witness=missed and {"element": missed})


def incidence_check(e: Epimorphism, samples, rng) -> CheckResult:
    """Sampled incident source pairs stay incident in the target."""
    model = e.source
    bad = None
    for _ in range(samples):
        if isinstance(model, ProjectivePlane):
            l = model.sample_line(rng)
            p = model.pencil_sample(l, rng)
        else:
            p0 = model.sample_point(rng)
            l = model.sample_line_through(p0, rng)
            p = model.sample_point_on(l, rng)
        if not e.target.incident(e.map_element(p), e.map_element(l)):
            bad = {"point": repr(p), "line": repr(l)}
            break
    return CheckResult("epi-incidence", bad is None, samples=samples, witness=bad)


def pasini_check(e: Epimorphism, per_element, rng) -> CheckResult:
    """Every finite-target element has at least `per_element` distinct lifts."""
    target = e.target
    elements = target.chambers() if isinstance(target, FlagBuilding) else target.elements()
    bad = None
    for y in elements:
        try:
            lifts = fibers_sample(e, y, per_element, rng)
        except LiftFailure as exc:
            bad = {"element": repr(y), "error": str(exc)}
            break
        if len(set(lifts)) != per_element:
            bad = {"element": repr(y)}
            break
    return CheckResult("epi-fibers", bad is None,
                       samples=len(elements) * per_element,
                       details={"per_element": per_element}, witness=bad)


def find_lift_check(e: Epimorphism, samples, rng) -> CheckResult:
    """Sampled incident target pairs lift to incident source pairs through a
    prescribed preimage of the first member."""
    model = e.source
    bad = None
    done = 0
    for _ in range(samples):
        a = model.sample_point(rng)
        b_img = e.target.pencil_sample(e.map_element(a), rng)
        try:
            b = lift_into_pencil(e, a, b_img, rng)
        except LiftFailure as exc:
            bad = {"a": repr(a), "target": repr(b_img), "error": str(exc)}
            break
        done += 1
        if not model.incident(a, b) or e.map_element(b) != b_img:
            bad = {"a": repr(a), "b": repr(b)}
            break
    return CheckResult("find-lift", bad is None, samples=done, witness=bad)


def _linear_pencil(model, x):
    """Basis vectors of the pencil of x when it is a projective line, together
    with the element constructor; None when the pencil is not linear."""
    if isinstance(model, ProjectivePlane):
        basis = model.pencil_chart(x)
        make = model.line if x.kind == "point" else model.point
        return basis, make
    if x.kind == "line":
        return x.rows, model.point
    return None


def lift_into_pencil(e: Epimorphism, a, b_img, rng):
    """The element of the pencil of a mapping to b_img.

    On a linear pencil this is exact: pivot the pencil basis over the
    valuation ring, express b_img in the reduced basis, and lift the two
    coefficients.  The quadrangle's line pencils are not linear, so those
    fall back to a seeded search.
    """
    if len(e.stages) > 1:
        head = Epimorphism(e.stages[:1])
        tail = Epimorphism(e.stages[1:])
        mid = lift_into_pencil(tail, head.map_element(a), b_img, rng)
        return lift_into_pencil(head, a, mid, rng)
    stage = e.stages[0]
    model = e.source
    pencil = _linear_pencil(model, a)
    if pencil is None:
        for _ in range(600):
            cand = model.pencil_sample(a, rng)
            if e.map_element(cand) == b_img:
                return cand
        raise LiftFailure("no pencil preimage found within the attempt budget")
    (f0, f1), make = pencil
    adapted = _adapted_rows(stage.valuation, [f0, f1])
    reduced = [tuple(stage.valuation.reduce(c) for c in row) for row in adapted]
    from .linalg import solve_in_span
    coeffs = solve_in_span(reduced, b_img.coords)
    if coeffs is None:
        raise LiftFailure("target is outside the reduced pencil")
    lam = stage.valuation.lift(coeffs[0])
    muc = stage.valuation.lift(coeffs[1])
    raw = vadd(vscale(adapted[0], lam), vscale(adapted[1], muc))
    cand = make(raw)
    if e.map_element(cand) != b_img:
        raise LiftFailure("pencil lift failed to reduce back")
    return cand



def product_descent_check(e, hatrack, samples, rng) -> CheckResult:
    """Products of root elations descend exactly when every factor does.

    Descent of a product is certified against sampled fiber pairs: a product
    with a non-descending factor must merge some fiber it should keep apart,
    and one with all factors descending must preserve all sampled fibers.
    """
    _check_hatrack(e, hatrack)
    n = hatrack.gonality
    valuation = e.stages[0].valuation
    bad = None
    tested = 0
    for _ in range(samples):
        i = rng.randrange(2 * n)
        width = rng.randint(1, n - 1)
        factors = []
        all_descend = True
        product = None
        for k in range(width):
            group = hatrack.group(i + k)
            param = _sample_param(group, rng)
            g = group.elation(param)
            factors.append(g)
            cls = GEOMETRIC_TO_CLASS[descends(e, hatrack, g)]
            if cls == "outside-V":
                all_descend = False
            product = g if product is None else product * g
        merged = _product_merges_fiber(e, hatrack, product, rng)
        tested += 1
        if all_descend and merged:
            bad = {"indices": [f.group.index for f in factors], "expected": "descends"}
            break
        if not all_descend and not merged:
            bad = {"indices": [f.group.index for f in factors],
                   "expected": "does not descend"}
            break
    return CheckResult("product-descent", bad is None, samples=tested, witness=bad)


def _product_merges_fiber(e, hatrack, product, rng, probes=40):
    """True if the product breaks image-equality on some sampled fiber pair."""
    model = e.source
    for _ in range(probes):
        z = _sample_elements(model, 1, rng)[0]
        try:
            mates = fibers_sample(e, e.map_element(z), 2, rng)
        except LiftFailure:
            continue
        a, b = mates
        ia = e.map_element(hat_act(model, product, a))
        ib = e.map_element(hat_act(model, product, b))
        if ia != ib:
            return True
    return False


def rigid_check(e, hatrack, samples, rng) -> CheckResult:
    """The image of x_1 moved by u_2...u_n is opposite the image of x_{n+1}
    exactly when every factor descends."""
    _check_hatrack(e, hatrack)
    n = hatrack.gonality
    bad = None
    for _ in range(samples):
        product = None
        all_descend = True
        for i in range(2, n + 1):
            group = hatrack.group(i)
            param = _sample_param(group, rng)
            g = group.elation(param)
            cls = GEOMETRIC_TO_CLASS[descends(e, hatrack, g)]
            if cls == "outside-V":
                all_descend = False
            product = g if product is None else product * g
        moved = hat_act(e.source, product, hatrack.x(1))
        img = e.map_element(moved)
        far = e.map_element(hatrack.x(n + 1))
        opposite = e.target.distance(img, far) == n
        if opposite != all_descend:
            bad = {"all_descend": all_descend, "opposite": opposite}
            break
    return CheckResult("opposite-rigidity", bad is None, samples=samples, witness=bad)
