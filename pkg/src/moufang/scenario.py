"""Scenario loading: schema validation and lazy construction of the objects
a check needs (field, valuation, model, hat-rack, epimorphism, compat data)."""

from __future__ import annotations

import hashlib
import json
from importlib import resources

import jsonschema

from .epi import EpiDescriptor, build_model, realize
from .fields import FieldEndo, field_from_descriptor
from .geometry import QuadraticSpace
from .rootgroups import HatRack
from .valuations import GroupValue, valuation_from_descriptor


class SchemaError(Exception):
    pass


def _load_schema(name):
    with resources.files("moufang.schemas").joinpath(name).open() as handle:
        return json.load(handle)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def scenario_digest(scenario):
    return hashlib.sha256(canonical_json(scenario).encode()).hexdigest()


def load_scenario(path):
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read scenario: {exc}") from exc
    validate_scenario(raw)
    return raw


def validate_scenario(raw):
    schema = _load_schema("scenario.schema.json")
    try:
        jsonschema.validate(raw, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"scenario does not match the schema: {exc.message}") from exc


def parse_group_value(raw, kind="int", rank=1):
    if isinstance(raw, str):
        raw = int(raw)
    if isinstance(raw, list):
        return GroupValue("lex", tuple(int(c) for c in raw))
    if kind == "lex":
        return GroupValue("lex", (int(raw),) + (0,) * (rank - 1))
    if kind == "trivial":
        return GroupValue("trivial")
    return GroupValue("int", int(raw))


class ScenarioContext:
    """Lazily materialized scenario objects, shared across the checks."""

    def __init__(self, scenario, seed=None, samples=None):
        self.scenario = scenario
        self.seed = seed if seed is not None else scenario["seed"]
        self.samples = samples if samples is not None else scenario["samples"]
        self._cache = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def field(self):
        return self._get("field", lambda: field_from_descriptor(self.scenario["field"]))

    @property
    def valuation(self):
        if "valuation" not in self.scenario:
            raise SchemaError("scenario has no valuation section")
        return self._get("valuation", lambda: valuation_from_descriptor(
            self.field, self.scenario["valuation"]))

    @property
    def qspace(self):
        def build():
            geo = self.scenario.get("geometry", {})
            spec = geo.get("qspace")
            if spec is None:
                raise SchemaError("scenario geometry has no quadratic space")
            if "diag" in spec:
                return QuadraticSpace.diagonal(
                    self.field, [self.field.parse(c) for c in spec["diag"]])
            coeffs = [[self.field.parse(c) for c in row] for row in spec["coeffs"]]
            return QuadraticSpace(self.field, coeffs)
        return self._get("qspace", build)

    @property
    def model(self):
        def build():
            geo = self.scenario.get("geometry")
            if geo is None:
                raise SchemaError("scenario has no geometry section")
            tag = geo["class"]
            return build_model(tag, self.field,
                               qspace=self.qspace if tag == "QQ" else None,
                               flag_rank=geo.get("rank"))
        return self._get("model", build)

    @property
    def hatrack(self):
        def build():
            model = self.model
            scale = None
            epi_cfg = self.scenario.get("epi", {})
            if "hatrack_scale" in epi_cfg:
                scale = [self.field.parse(c) for c in epi_cfg["hatrack_scale"]]
            if model.class_tag == "T":
                return HatRack.plane(model, scale)
            if model.class_tag == "QQ":
                return HatRack.quadrangle(model, scale)
            raise SchemaError("hat-racks exist for the polygon classes only")
        return self._get("hatrack", build)

    @property
    def descriptor(self):
        def build():
            geo = self.scenario.get("geometry")
            if geo is None:
                raise SchemaError("scenario has no geometry section")
            tag = geo["class"]
            return EpiDescriptor(
                tag, self.field, self.valuation,
                qspace=self.qspace if tag == "QQ" else None,
                flag_rank=geo.get("rank"))
        return self._get("descriptor", build)

    def epimorphism(self, rng):
        return self._get("epimorphism", lambda: realize(self.descriptor, rng))

    @property
    def compat_config(self):
        cfg = self.scenario.get("compat")
        if cfg is None:
            raise SchemaError("scenario has no compat section")
        return cfg

    def sigma(self):
        cfg = self.compat_config.get("sigma")
        if cfg is None:
            return FieldEndo(self.field)
        return FieldEndo(self.field, env=cfg.get("env"),
                         frobenius=cfg.get("frobenius", 0))

    def compat_level(self, key="k"):
        v = self.valuation
        raw = self.compat_config.get(key, 0)
        return parse_group_value(raw, v.group_kind if v.rank else "int",
                                 max(v.rank, 1))
