"""Exact arithmetic for towers of computable fields.

Supported kinds: prime fields F_p, Galois extensions GF(p^n) with an explicit
irreducible modulus, the rationals, and univariate rational function fields
K(x) over any other supported field.  Elements are immutable, canonical and
hashable, so equality is plain payload comparison.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(Exception):
    pass


class DivisionByZero(FieldError):
    pass


class DescriptorMismatch(FieldError):
    """Mixed elements of two different fields in one operation."""


class ParseError(FieldError):
    pass


class Element:
    """An element of a field, represented as (field, canonical payload)."""

    __slots__ = ("field", "payload")

    def __init__(self, field, payload):
        self.field = field
        self.payload = payload

    def _coerce(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        if other.field != self.field:
            raise DescriptorMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Element(self.field, self.field.add(self.payload, other.payload))

    __radd__ = __add__

    def __neg__(self):
        return Element(self.field, self.field.neg(self.payload))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Element(self.field, self.field.add(self.payload, self.field.neg(other.payload)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Element(self.field, self.field.mul(self.payload, other.payload))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.field.from_int(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inv(self):
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field}")
        return Element(self.field, self.field.inv_payload(self.payload))

    def is_zero(self):
        return self.field.is_zero(self.payload)

    def is_one(self):
        return self.payload == self.field.one.payload

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.field == other.field and self.payload == other.payload

    def __hash__(self):
        return hash((self.field.key, self.payload))

    def __str__(self):
        return self.field.format(self.payload)

    def __repr__(self):
        return f"<{self} in {self.field}>"


# ---------------------------------------------------------------------------
# Generic dense polynomials over a field, as tuples of Elements with no
# trailing zeros.  The zero polynomial is the empty tuple.

def pnormalize(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1].is_zero():
        n -= 1
    return tuple(coeffs[:n])


def pdeg(a):
    return len(a) - 1


def plow(a):
    """Index of the lowest nonzero coefficient (the order at 0)."""
    for i, c in enumerate(a):
        if not c.is_zero():
            return i
    raise ValueError("zero polynomial has no order")


def padd(field, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return pnormalize(out)


def pneg(a):
    return tuple(-c for c in a)


def psub(field, a, b):
    return padd(field, a, pneg(b))


def pmul(field, a, b):
    if not a or not b:
        return ()
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca.is_zero():
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return pnormalize(out)


def pscale(a, c):
    if c.is_zero():
        return ()
    return tuple(x * c for x in a)


def pdivmod(field, a, b):
    """Quotient and remainder with deg(rem) < deg(b).  Raises on b = 0."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = list(a)
    db = pdeg(b)
    lead_inv = b[-1].inv()
    q = [field.zero] * max(0, len(a) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c.is_zero():
            continue
        factor = c * lead_inv
        q[i - db] = factor
        for j in range(db + 1):
            rem[i - db + j] = rem[i - db + j] - factor * b[j]
    return pnormalize(q), pnormalize(rem)


def pgcd(field, a, b):
    """Monic gcd.  Over a rational function base the naive remainder sequence
    suffers severe coefficient swell, so a primitive pseudo-remainder sequence
    (denominators cleared, content divided out at each step) is used instead."""
    if isinstance(field, RationalFunctionField) and a and b:
        return _pgcd_primitive(field, a, b)
    while b:
        a, b = b, pdivmod(field, a, b)[1]
    if not a:
        return ()
    return pscale(a, a[-1].inv())


def _clear_denominators(field, a):
    """Scale a polynomial over Frac(R) into R[x] (denominators all 1)."""
    den = (field.base.one,)
    for c in a:
        den = pdivmod(field.base, pmul(field.base, den, c.payload[1]),
                      pgcd(field.base, den, c.payload[1]))[0]
    d = Element(field, (den, (field.base.one,)))
    return tuple(c * d for c in a)


def _int_content(field, a):
    g = ()
    for c in a:
        g = pgcd(field.base, g, c.payload[0])
    return g


def _divide_content(field, a, g):
    if pdeg(g) <= 0:
        return a
    out = []
    for c in a:
        num = pdivmod(field.base, c.payload[0], g)[0]
        out.append(Element(field, (num, c.payload[1])))
    return tuple(out)


def _pgcd_primitive(field, a, b):
    a = _divide_content(field, *((lambda x: (x, _int_content(field, x)))(
        _clear_denominators(field, a))))
    b = _divide_content(field, *((lambda x: (x, _int_content(field, x)))(
        _clear_denominators(field, b))))
    while b:
        # pseudo-remainder: multiply by lc(b) instead of dividing
        r = a
        while r and pdeg(r) >= pdeg(b):
            shift = pdeg(r) - pdeg(b)
            lead = r[-1]
            r = pscale(r, b[-1])
            sub = pscale(b, lead)
            sub = (field.zero,) * shift + sub
            r = psub(field, r, sub)
        r = _divide_content(field, r, _int_content(field, r)) if r else ()
        a, b = b, r
    return pscale(a, a[-1].inv())


def pxgcd(field, a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = (field.one,), ()
    t0, t1 = (), (field.one,)
    while r1:
        q, r = pdivmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(field, s0, pmul(field, q, s1))
        t0, t1 = t1, psub(field, t0, pmul(field, q, t1))
    if not r0:
        return (), s0, t0
    c = r0[-1].inv()
    return pscale(r0, c), pscale(s0, c), pscale(t0, c)


def peval(field, a, x):
    acc = field.zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pconst(c):
    return () if c.is_zero() else (c,)


def ppowmod(field, a, n, m):
    result = (field.one,)
    base = pdivmod(field, a, m)[1]
    while n:
        if n & 1:
            result = pdivmod(field, pmul(field, result, base), m)[1]
        base = pdivmod(field, pmul(field, base, base), m)[1]
        n >>= 1
    return result


def poly_divmod(field, num, den):
    """Public long-division entry point on coefficient sequences."""
    num = pnormalize([c if isinstance(c, Element) else field.from_int(c) for c in num])
    den = pnormalize([c if isinstance(c, Element) else field.from_int(c) for c in den])
    return pdivmod(field, num, den)


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Field classes.

class Field:
    kind = None

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def from_int(self, n):
        raise NotImplementedError

    def size(self):
        """Number of elements, or None for infinite fields."""
        return None

    def characteristic(self):
        raise NotImplementedError

    def elements(self):
        raise FieldError(f"{self} is not finite")

    def sample(self, rng, bound=8):
        raise NotImplementedError

    def sample_nonzero(self, rng, bound=8):
        for _ in range(64):
            x = self.sample(rng, bound)
            if not x.is_zero():
                return x
        return self.one

    def small_elements(self, limit=16):
        """Deterministic battery of simple elements, used by adversarial checks."""
        raise NotImplementedError

    def atom(self, name):
        raise ParseError(f"unknown symbol {name!r} in {self}")

    def parse(self, text):
        return _ExprParser(self, text).parse()

    def format(self, payload):
        raise NotImplementedError

    def element_to_str(self, x):
        return self.format(x.payload)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.name


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.key = ("prime", p)
        self.name = f"F_{p}"
        self._zero = Element(self, 0)
        self._one = Element(self, 1 % p)

    def from_int(self, n):
        return Element(self, n % self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv_payload(self, a):
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def size(self):
        return self.p

    def characteristic(self):
        return self.p

    def elements(self):
        return (Element(self, a) for a in range(self.p))

    def sample(self, rng, bound=8):
        return Element(self, rng.randrange(self.p))

    def small_elements(self, limit=16):
        for a in range(min(self.p, limit)):
            yield Element(self, a)

    def format(self, payload):
        return str(payload)

    def descriptor(self):
        return {"kind": "prime", "p": self.p}


class RationalField(Field):
    kind = "rational"

    def __init__(self):
        self.key = ("rational",)
        self.name = "Q"
        self._zero = Element(self, Fraction(0))
        self._one = Element(self, Fraction(1))

    def from_int(self, n):
        return Element(self, Fraction(n))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv_payload(self, a):
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def characteristic(self):
        return 0

    def sample(self, rng, bound=8):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        return Element(self, Fraction(num, den))

    def small_elements(self, limit=16):
        seq = [0, 1, 2, -1, -2, 3, -3, 4, -4, 5, -5]
        fracs = [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(3, 2), Fraction(2, 3)]
        for v in (seq + fracs)[:limit]:
            yield Element(self, Fraction(v))

    def format(self, payload):
        return str(payload)

    def descriptor(self):
        return {"kind": "rational"}


class GaloisField(Field):
    """GF(p^n) with an explicit modulus, irreducibility checked at build time.

    Payloads are coefficient tuples of prime-field Elements (degree < n).
    """

    kind = "galois"

    def __init__(self, p, n, modulus, gen="g"):
        if n < 2:
            raise FieldError("use PrimeField for n = 1")
        if p ** n > 2 ** 16:
            raise FieldError(f"GF({p}^{n}) exceeds the supported size 2^16")
        self.p = p
        self.n = n
        self.base = PrimeField(p)
        mod = pnormalize([self.base.from_int(c) for c in modulus])
        if pdeg(mod) != n:
            raise FieldError(f"modulus degree {pdeg(mod)} != {n}")
        if not mod[-1].is_one():
            mod = pscale(mod, mod[-1].inv())
        self.modulus = mod
        self.gen_name = gen
        self.key = ("galois", p, n, tuple(c.payload for c in mod), gen)
        self.name = f"GF({p}^{n})"
        if not self._modulus_irreducible():
            raise FieldError("modulus is reducible")
        self._zero = Element(self, ())
        self._one = Element(self, (self.base.one,))

    def _modulus_irreducible(self):
        # Rabin test: x^(p^n) = x mod m, gcd(x^(p^(n/r)) - x, m) = 1.
        F, m = self.base, self.modulus
        x = (F.zero, F.one)
        if ppowmod(F, x, self.p ** self.n, m) != pdivmod(F, x, m)[1]:
            return False
        for r in _prime_factors(self.n):
            h = psub(F, ppowmod(F, x, self.p ** (self.n // r), m), x)
            if pdeg(pgcd(F, h, m)) != 0:
                return False
        return True

    def _wrap(self, coeffs):
        return Element(self, pdivmod(self.base, pnormalize(coeffs), self.modulus)[1])

    @property
    def gen(self):
        return self._wrap((self.base.zero, self.base.one))

    def from_int(self, k):
        return Element(self, pconst(self.base.from_int(k)))

    def add(self, a, b):
        return padd(self.base, a, b)

    def neg(self, a):
        return pneg(a)

    def mul(self, a, b):
        return pdivmod(self.base, pmul(self.base, a, b), self.modulus)[1]

    def inv_payload(self, a):
        g, s, _ = pxgcd(self.base, a, self.modulus)
        if pdeg(g) != 0:
            raise DivisionByZero("element not invertible (reducible modulus?)")
        return pdivmod(self.base, pscale(s, g[0].inv()), self.modulus)[1]

    def is_zero(self, a):
        return a == ()

    def size(self):
        return self.p ** self.n

    def characteristic(self):
        return self.p

    def elements(self):
        from itertools import product
        for coeffs in product(range(self.p), repeat=self.n):
            yield Element(self, pnormalize([self.base.from_int(c) for c in coeffs]))

    def sample(self, rng, bound=8):
        return Element(self, pnormalize([self.base.from_int(rng.randrange(self.p))
                                         for _ in range(self.n)]))

    def small_elements(self, limit=16):
        count = 0
        for x in self.elements():
            if count >= limit:
                return
            yield x
            count += 1

    def frobenius(self, x, power=1):
        return x ** (self.p ** power)

    def atom(self, name):
        if name == self.gen_name:
            return self.gen
        raise ParseError(f"unknown symbol {name!r} in {self}")

    def format(self, payload):
        return _format_poly(payload, self.gen_name, lambda c: str(c.payload), lambda c: False)

    def descriptor(self):
        return {"kind": "galois", "p": self.p, "n": self.n,
                "modulus": [c.payload for c in self.modulus], "gen": self.gen_name}


class RationalFunctionField(Field):
    """K(x): reduced fractions of polynomials over the base, monic denominator."""

    kind = "ratfunc"

    def __init__(self, var, base):
        if not isinstance(base, Field):
            raise FieldError("base must be a Field")
        if var in _tower_vars(base):
            raise FieldError(f"variable {var!r} already used in the tower")
        self.var = var
        self.base = base
        self.key = ("ratfunc", var, base.key)
        self.name = f"{base.name}({var})"
        self._zero = Element(self, ((), (base.one,)))
        self._one = Element(self, ((base.one,), (base.one,)))

    def _canon(self, num, den):
        if not den:
            raise DivisionByZero(f"zero denominator in {self}")
        if not num:
            return ((), (self.base.one,))
        g = pgcd(self.base, num, den)
        if pdeg(g) > 0:
            num = pdivmod(self.base, num, g)[0]
            den = pdivmod(self.base, den, g)[0]
        lead_inv = den[-1].inv()
        return (pscale(num, lead_inv), pscale(den, lead_inv))

    def ratfunc(self, num, den=None):
        num = pnormalize(tuple(num))
        den = (self.base.one,) if den is None else pnormalize(tuple(den))
        return Element(self, self._canon(num, den))

    @property
    def gen(self):
        return self.ratfunc((self.base.zero, self.base.one))

    def constant(self, c):
        if c.field != self.base:
            raise DescriptorMismatch(f"{c.field} is not the base of {self}")
        return Element(self, (pconst(c), (self.base.one,)))

    def from_int(self, k):
        return self.constant(self.base.from_int(k))

    def add(self, a, b):
        (n1, d1), (n2, d2) = a, b
        num = padd(self.base, pmul(self.base, n1, d2), pmul(self.base, n2, d1))
        return self._canon(num, pmul(self.base, d1, d2))

    def neg(self, a):
        return (pneg(a[0]), a[1])

    def mul(self, a, b):
        (n1, d1), (n2, d2) = a, b
        return self._canon(pmul(self.base, n1, n2), pmul(self.base, d1, d2))

    def inv_payload(self, a):
        return self._canon(a[1], a[0])

    def is_zero(self, a):
        return a[0] == ()

    def characteristic(self):
        return self.base.characteristic()

    def sample(self, rng, bound=3):
        def rand_poly():
            return pnormalize([self.base.sample(rng, bound) for _ in range(rng.randint(1, bound + 1))])
        num = rand_poly()
        den = ()
        while not den:
            den = rand_poly()
        return Element(self, self._canon(num, den))

    def small_elements(self, limit=16):
        base_small = list(self.base.small_elements(4))
        one = self.base.one
        cands = [((), (one,)), ((one,), (one,)), ((self.base.zero, one), (one,)),
                 ((one, one), (one,)), ((self.base.zero, self.base.zero, one), (one,)),
                 ((one,), (self.base.zero, one))]
        for c in base_small[2:]:
            cands.append((pconst(c), (one,)))
        count = 0
        for num, den in cands:
            if count >= limit:
                return
            yield Element(self, self._canon(pnormalize(num), pnormalize(den)))
            count += 1

    def atom(self, name):
        if name == self.var:
            return self.gen
        return self.constant_from_tower(self.base.atom(name))

    def constant_from_tower(self, c):
        """Embed an element of any field lower in the tower."""
        if c.field == self.base:
            return self.constant(c)
        if isinstance(self.base, RationalFunctionField):
            return self.constant(self.base.constant_from_tower(c))
        raise DescriptorMismatch(f"{c.field} does not embed into {self}")

    def _coeff_str(self, c):
        s = self.base.format(c.payload)
        plain = s.lstrip("-").isdigit()
        return s if plain else f"({s})"

    def format(self, payload):
        num, den = payload
        ns = _format_poly(num, self.var, self._coeff_str, lambda c: not _is_plain(self._coeff_str(c)))
        if den == (self.base.one,):
            return ns
        ds = _format_poly(den, self.var, self._coeff_str, lambda c: not _is_plain(self._coeff_str(c)))
        return f"({ns})/({ds})"

    def descriptor(self):
        return {"kind": "ratfunc", "var": self.var, "base": self.base.descriptor()}


def _is_plain(s):
    return s.lstrip("-").isdigit()


def _format_poly(coeffs, var, coeff_str, needs_parens):
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c.is_zero():
            continue
        cs = coeff_str(c)
        if i == 0:
            parts.append(cs)
        else:
            xs = var if i == 1 else f"{var}^{i}"
            parts.append(xs if cs == "1" else f"{cs}*{xs}")
    return "+".join(parts).replace("+-", "-")


def _tower_vars(field):
    names = []
    f = field
    while isinstance(f, RationalFunctionField):
        names.append(f.var)
        f = f.base
    if isinstance(f, GaloisField):
        names.append(f.gen_name)
    return names


def field_from_descriptor(d):
    kind = d.get("kind")
    if kind == "prime":
        return PrimeField(int(d["p"]))
    if kind == "rational":
        return RationalField()
    if kind == "galois":
        return GaloisField(int(d["p"]), int(d["n"]),
                           [int(c) for c in d["modulus"]], d.get("gen", "g"))
    if kind == "ratfunc":
        return RationalFunctionField(d["var"], field_from_descriptor(d["base"]))
    raise FieldError(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# A small expression grammar shared by all fields:
#   expr   := term (('+' | '-') term)*
#   term   := factor (('*' | '/') factor)*
#   factor := '-' factor | atom ('^' int)?
#   atom   := integer | name | '(' expr ')'

class _ExprParser:
    def __init__(self, field, text):
        self.field = field
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        tokens = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                tokens.append(("int", int(text[i:j])))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(("name", text[i:j]))
                i = j
            elif ch in "+-*/^()":
                tokens.append((ch, ch))
                i += 1
            else:
                raise ParseError(f"bad character {ch!r}")
        tokens.append(("end", None))
        return tokens

    def _peek(self):
        return self.tokens[self.pos][0]

    def _next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        value = self._expr()
        if self._peek() != "end":
            raise ParseError(f"trailing input at token {self.tokens[self.pos]}")
        return value

    def _expr(self):
        value = self._term()
        while self._peek() in "+-":
            op = self._next()[0]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._factor()
        while self._peek() in "*/":
            op = self._next()[0]
            rhs = self._factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def _factor(self):
        if self._peek() == "-":
            self._next()
            return -self._factor()
        value = self._atom()
        if self._peek() == "^":
            self._next()
            neg = False
            if self._peek() == "-":
                self._next()
                neg = True
            kind, n = self._next()
            if kind != "int":
                raise ParseError("exponent must be an integer")
            value = value ** (-n if neg else n)
        return value

    def _atom(self):
        kind, val = self._next()
        if kind == "int":
            return self.field.from_int(val)
        if kind == "name":
            return self.field.atom(val)
        if kind == "(":
            value = self._expr()
            if self._next()[0] != ")":
                raise ParseError("missing closing parenthesis")
            return value
        raise ParseError(f"unexpected token {val!r}")


def embed_constant(target, x):
    """Embed an element of a field lower in target's tower into target."""
    if x.field == target:
        return x
    if isinstance(target, RationalFunctionField):
        return target.constant(embed_constant(target.base, x))
    raise DescriptorMismatch(f"{x.field} does not embed into {target}")


def evaluate_with_env(x, env, target):
    """Apply the substitution homomorphism sending each named generator to
    env[name] (defaulting to itself), landing in target."""
    f = x.field
    if isinstance(f, RationalFunctionField):
        image = env.get(f.var)
        if image is None:
            image = embed_constant(target, f.gen) if f != target else f.gen
        num, den = x.payload
        num_img = _eval_poly_with_env(num, image, env, target)
        den_img = _eval_poly_with_env(den, image, env, target)
        return num_img / den_img
    if isinstance(f, GaloisField):
        gen_image = env.get(f.gen_name)
        if gen_image is None:
            return embed_constant(target, x)
        acc = target.zero
        for c in reversed(x.payload):
            acc = acc * gen_image + embed_constant(target, Element(f, pconst(c)))
        return acc
    return embed_constant(target, x)


def _eval_poly_with_env(coeffs, image, env, target):
    acc = target.zero
    for c in reversed(coeffs):
        acc = acc * image + evaluate_with_env(c, env, target)
    return acc


class FieldEndo:
    """A field endomorphism: a Frobenius power on a finite field, or a
    substitution on the named generators of a function-field tower."""

    def __init__(self, field, env=None, frobenius=0):
        self.field = field
        self.frobenius = frobenius
        self.env = dict(env or {})
        for name, val in list(self.env.items()):
            if isinstance(val, str):
                self.env[name] = field.parse(val)

    def __call__(self, x):
        if x.field != self.field:
            raise DescriptorMismatch("element is not in the endomorphism's field")
        if self.frobenius:
            p = self.field.characteristic()
            return x ** (p ** self.frobenius)
        if not self.env:
            return x
        return evaluate_with_env(x, self.env, self.field)

    def descriptor(self):
        if self.frobenius:
            return {"frobenius": self.frobenius}
        return {"env": {k: self.field.element_to_str(v) for k, v in self.env.items()}}


def field_arith(op, x, y=None):
    """Dispatch entry point: op in {'add', 'mul', 'neg', 'inv'}."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    raise FieldError(f"unknown operation {op!r}")


def sample_element(field, rng, bound=8):
    """Seed-deterministic sample; nonzero with probability at least 1/2."""
    return field.sample(rng, bound)
