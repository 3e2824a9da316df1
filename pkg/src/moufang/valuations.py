"""Ordered abelian groups, valuations of finite rank, and places.

Group values are exact: integers, lexicographic integer vectors, the rank-one
dense subgroup Z + Z*sqrt(2) of the reals, or the trivial group.  Infinity is
an explicit tagged value so that the value of 0 compares correctly.
"""

from __future__ import annotations

from .fields import (DivisionByZero, Element, Field, FieldError, GaloisField, PrimeField,
                     RationalField, RationalFunctionField, pconst, plow)


class ValuationError(Exception):
    pass


class GroupMismatch(ValuationError):
    pass


class NotInValuationRing(ValuationError):
    pass


class FieldMismatch(ValuationError):
    pass


class RankTooLow(ValuationError):
    pass


class _Infinity:
    """The single point above every ordered group, the value of 0."""

    def __repr__(self):
        return "oo"

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("oo")


INF = _Infinity()


class GroupValue:
    """An element of an ordered abelian group.

    kind: 'trivial' (payload None), 'int' (int), 'lex' (tuple of ints, first
    coordinate most significant), or 'sqrt2' (pair (a, b) meaning a + b*sqrt2,
    compared via its real embedding).
    """

    __slots__ = ("kind", "payload")

    def __init__(self, kind, payload=None):
        if kind == "lex":
            payload = tuple(payload)
        self.kind = kind
        self.payload = payload

    @staticmethod
    def zero(kind, rank=1):
        if kind == "trivial":
            return GroupValue("trivial")
        if kind == "int":
            return GroupValue("int", 0)
        if kind == "lex":
            return GroupValue("lex", (0,) * rank)
        if kind == "sqrt2":
            return GroupValue("sqrt2", (0, 0))
        raise GroupMismatch(f"unknown group kind {kind!r}")

    def _check(self, other):
        if not isinstance(other, GroupValue) or other.kind != self.kind:
            raise GroupMismatch(f"{self!r} vs {other!r}")
        if self.kind == "lex" and len(self.payload) != len(other.payload):
            raise GroupMismatch("lex vectors of different rank")

    def __add__(self, other):
        if isinstance(other, _Infinity):
            return INF
        self._check(other)
        if self.kind == "trivial":
            return self
        if self.kind == "int":
            return GroupValue("int", self.payload + other.payload)
        if self.kind == "lex":
            return GroupValue("lex", tuple(a + b for a, b in zip(self.payload, other.payload)))
        return GroupValue("sqrt2", (self.payload[0] + other.payload[0],
                                    self.payload[1] + other.payload[1]))

    def __neg__(self):
        if self.kind == "trivial":
            return self
        if self.kind == "int":
            return GroupValue("int", -self.payload)
        if self.kind == "lex":
            return GroupValue("lex", tuple(-a for a in self.payload))
        return GroupValue("sqrt2", (-self.payload[0], -self.payload[1]))

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, n):
        """n-fold sum for an integer n."""
        if self.kind == "trivial":
            return self
        if self.kind == "int":
            return GroupValue("int", n * self.payload)
        if self.kind == "lex":
            return GroupValue("lex", tuple(n * a for a in self.payload))
        return GroupValue("sqrt2", (n * self.payload[0], n * self.payload[1]))

    def sqrt2_times(self):
        """Multiplication by sqrt(2) on the quadratic-real group."""
        if self.kind != "sqrt2":
            raise GroupMismatch("sqrt2_times needs the quadratic-real group")
        a, b = self.payload
        return GroupValue("sqrt2", (2 * b, a))

    def _sign(self):
        if self.kind == "trivial":
            return 0
        if self.kind == "int":
            return (self.payload > 0) - (self.payload < 0)
        if self.kind == "lex":
            for a in self.payload:
                if a:
                    return 1 if a > 0 else -1
            return 0
        a, b = self.payload
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # Signs differ: a + b*sqrt2 > 0 iff sign matches the dominant square.
        if a > 0:  # b < 0
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return True
        self._check(other)
        return (self - other)._sign() < 0

    def __le__(self, other):
        return self < other or self == other

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return False
        return other < self

    def __ge__(self, other):
        if isinstance(other, _Infinity):
            return False
        return self > other or self == other

    def __eq__(self, other):
        if isinstance(other, _Infinity):
            return False
        if not isinstance(other, GroupValue):
            return NotImplemented
        return self.kind == other.kind and self.payload == other.payload

    def __hash__(self):
        return hash((self.kind, self.payload))

    def __repr__(self):
        if self.kind == "trivial":
            return "0"
        if self.kind == "sqrt2":
            return f"{self.payload[0]}+{self.payload[1]}*sqrt2"
        return repr(self.payload)

    def as_tuple(self):
        if self.kind == "int":
            return (self.payload,)
        if self.kind == "lex":
            return self.payload
        raise GroupMismatch(f"{self.kind} value has no lex coordinates")


def group_compare(a, b):
    """Total order as -1/0/+1; infinity is above everything."""
    a_inf, b_inf = isinstance(a, _Infinity), isinstance(b, _Infinity)
    if a_inf and b_inf:
        return 0
    if a_inf:
        return 1
    if b_inf:
        return -1
    if a == b:
        return 0
    return -1 if a < b else 1


def value_is_infinite(v):
    return isinstance(v, _Infinity)


# ---------------------------------------------------------------------------
# Valuations.

class Valuation:
    """A surjective valuation of a field onto an ordered abelian group."""

    field: Field
    group_kind: str
    rank: int

    def value(self, x):
        raise NotImplementedError

    def zero_value(self):
        return GroupValue.zero(self.group_kind, self.rank)

    @property
    def residue_field(self):
        raise NotImplementedError

    def reduce(self, x):
        raise NotImplementedError

    def lift(self, r):
        raise NotImplementedError

    def uniformizer(self):
        raise RankTooLow(f"{self} has no uniformizer")

    def group_generators(self):
        """Witnesses (value, preimage) generating the value group."""
        return []

    def is_trivial(self):
        return self.rank == 0

    def _check_field(self, x):
        if not isinstance(x, Element) or x.field != self.field:
            raise FieldMismatch(f"element not in {self.field}")

    def __repr__(self):
        return f"{self.__class__.__name__} on {self.field}"


class TrivialValuation(Valuation):
    group_kind = "trivial"
    rank = 0

    def __init__(self, field):
        self.field = field

    def value(self, x):
        self._check_field(x)
        return INF if x.is_zero() else GroupValue("trivial")

    @property
    def residue_field(self):
        return self.field

    def reduce(self, x):
        self._check_field(x)
        return x

    def lift(self, r):
        return r

    def descriptor(self):
        return {"rule": "trivial"}


class PAdicValuation(Valuation):
    """The p-adic valuation on the rationals, normalized so nu(p) = 1."""

    group_kind = "int"
    rank = 1

    def __init__(self, field, p):
        if not isinstance(field, RationalField):
            raise FieldMismatch("p-adic valuations live on the rationals")
        self.field = field
        self.p = PrimeField(p).p  # validates primality
        self._residue = PrimeField(p)

    @staticmethod
    def _vp(n, p):
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    def value(self, x):
        self._check_field(x)
        if x.is_zero():
            return INF
        frac = x.payload
        return GroupValue("int", self._vp(frac.numerator, self.p) - self._vp(frac.denominator, self.p))

    @property
    def residue_field(self):
        return self._residue

    def reduce(self, x):
        v = self.value(x)
        if not isinstance(v, _Infinity) and v._sign() < 0:
            raise NotInValuationRing(f"nu({x}) < 0")
        frac = x.payload
        num = self._residue.from_int(frac.numerator)
        den = self._residue.from_int(frac.denominator)
        return num / den

    def lift(self, r):
        if r.field != self._residue:
            raise FieldMismatch("not a residue element")
        return self.field.from_int(r.payload)

    def uniformizer(self):
        return self.field.from_int(self.p)

    def group_generators(self):
        return [(GroupValue("int", 1), self.uniformizer())]

    def descriptor(self):
        return {"rule": "p-adic", "p": self.p}


class TAdicValuation(Valuation):
    """Order of vanishing at x = 0 on a rational function field K(x)."""

    group_kind = "int"
    rank = 1

    def __init__(self, field):
        if not isinstance(field, RationalFunctionField):
            raise FieldMismatch("t-adic valuations live on rational function fields")
        self.field = field

    def value(self, x):
        self._check_field(x)
        if x.is_zero():
            return INF
        num, den = x.payload
        return GroupValue("int", plow(num) - plow(den))

    @property
    def residue_field(self):
        return self.field.base

    def reduce(self, x):
        v = self.value(x)
        if not isinstance(v, _Infinity) and v._sign() < 0:
            raise NotInValuationRing(f"nu({x}) < 0")
        num, den = x.payload
        # Canonical fractions are coprime, so nu >= 0 forces den(0) != 0.
        base = self.field.base
        n0 = num[0] if num else base.zero
        return n0 / den[0]

    def lift(self, r):
        return self.field.constant(r)

    def uniformizer(self):
        return self.field.gen

    def group_generators(self):
        return [(GroupValue("int", 1), self.uniformizer())]

    def descriptor(self):
        return {"rule": "t-adic"}


class CompositeValuation(Valuation):
    """Stack a valuation of the inner residue field on top of a rank-one one.

    Values are lexicographic vectors with the inner value first:
    nu(f) = (m, nu_outer(reduce(f * u^-m))) with u the inner uniformizer and
    m = nu_inner(f).  Rank adds up, and coarsening onto the first coordinate
    recovers the inner valuation.
    """

    group_kind = "lex"

    def __init__(self, inner, outer):
        if inner.rank != 1 or inner.group_kind != "int":
            raise ValuationError("inner valuation must have rank one")
        if outer.rank < 1:
            raise ValuationError("outer valuation must be nontrivial")
        if outer.field != inner.residue_field:
            raise FieldMismatch("outer valuation must live on the inner residue field")
        self.inner = inner
        self.outer = outer
        self.field = inner.field
        self.rank = 1 + outer.rank

    def value(self, x):
        self._check_field(x)
        if x.is_zero():
            return INF
        m = self.inner.value(x).payload
        u = self.inner.uniformizer() ** m
        r = self.inner.reduce(x / u)
        return GroupValue("lex", (m,) + self.outer.value(r).as_tuple())

    @property
    def residue_field(self):
        return self.outer.residue_field

    def reduce(self, x):
        v = self.value(x)
        if not isinstance(v, _Infinity) and v._sign() < 0:
            raise NotInValuationRing(f"nu({x}) < 0")
        return self.outer.reduce(self.inner.reduce(x))

    def lift(self, r):
        return self.inner.lift(self.outer.lift(r))

    def uniformizer(self):
        return self.inner.uniformizer()

    def group_generators(self):
        gens = [(GroupValue("lex", (1,) + (0,) * (self.rank - 1)), self.inner.uniformizer())]
        for gv, w in self.outer.group_generators():
            gens.append((GroupValue("lex", (0,) + gv.as_tuple()), self.inner.lift(w)))
        return gens

    def descriptor(self):
        return {"rule": "composite", "inner": self.inner.descriptor(),
                "outer": self.outer.descriptor()}


def compose_valuations(inner, outer):
    return CompositeValuation(inner, outer)


def coarsen(v):
    """Split a lex valuation into its rank-one head and the residual tail."""
    if not isinstance(v, CompositeValuation):
        raise RankTooLow("only composite valuations of rank >= 2 can be coarsened")
    return v.inner, v.outer


class Place:
    """The reduction map of a valuation onto its residue field."""

    def __init__(self, valuation):
        self.valuation = valuation

    @property
    def residue_field(self):
        return self.valuation.residue_field

    def reduce(self, x):
        return self.valuation.reduce(x)

    def lift(self, r):
        return self.valuation.lift(r)


def place_reduce(place, x):
    if isinstance(place, Valuation):
        return place.reduce(x)
    return place.reduce(x)


def nu_eval(valuation, x):
    return valuation.value(x)


def valuation_from_descriptor(field, d):
    rule = d.get("rule")
    if rule == "trivial":
        return TrivialValuation(field)
    if rule == "p-adic":
        return PAdicValuation(field, int(d["p"]))
    if rule == "t-adic":
        return TAdicValuation(field)
    if rule == "composite":
        inner = valuation_from_descriptor(field, d["inner"])
        outer = valuation_from_descriptor(inner.residue_field, d["outer"])
        return CompositeValuation(inner, outer)
    raise ValuationError(f"unknown valuation rule {rule!r}")
