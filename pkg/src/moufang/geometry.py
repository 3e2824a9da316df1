"""Concrete models of the supported geometries.

* projective planes over any supported field (points and lines in homogeneous
  coordinates, canonicalized so the first nonzero coordinate is 1),
* orthogonal quadrangles: totally singular 1- and 2-spaces of the form
  x0*x1 + x2*x3 + q(v) with q anisotropic on a vector space L0,
* flag buildings: complete flags of K^(l+1) with a symmetric-group valued
  Weyl distance computed from intersection dimensions.

Points are row vectors and automorphisms act on the right, so group products
compose left to right.
"""

from __future__ import annotations

from itertools import product as iproduct

from .fields import Element, Field
from .linalg import (cross3, proj_normalize, rref, row_times_mat, span_contains,
                     unit_vector, vadd, vdot, vec, vscale, vsub, vzero)


class GeometryError(Exception):
    pass


class KindMismatch(GeometryError):
    pass


class OppositeOrEqual(GeometryError):
    pass


class NotInModel(GeometryError):
    pass


# ---------------------------------------------------------------------------
# Elements.

class Point:
    __slots__ = ("coords",)
    kind = "point"

    def __init__(self, coords):
        self.coords = coords

    def __eq__(self, other):
        return isinstance(other, Point) and self.coords == other.coords

    def __hash__(self):
        return hash(("point", self.coords))

    def __repr__(self):
        return "P(" + ":".join(str(c) for c in self.coords) + ")"


class PlaneLine:
    """A line of a projective plane, as a canonical covector."""

    __slots__ = ("coords",)
    kind = "line"

    def __init__(self, coords):
        self.coords = coords

    def __eq__(self, other):
        return isinstance(other, PlaneLine) and self.coords == other.coords

    def __hash__(self):
        return hash(("dline", self.coords))

    def __repr__(self):
        return "L[" + ":".join(str(c) for c in self.coords) + "]"


class SpanLine:
    """A line of the quadrangle: a totally singular 2-space in echelon form."""

    __slots__ = ("rows",)
    kind = "line"

    def __init__(self, rows):
        self.rows = rows

    def __eq__(self, other):
        return isinstance(other, SpanLine) and self.rows == other.rows

    def __hash__(self):
        return hash(("sline", self.rows))

    def __repr__(self):
        return "L<" + "; ".join(":".join(str(c) for c in r) for r in self.rows) + ">"


class Flag:
    """A complete flag of subspaces, dims 1..l, each in reduced echelon form."""

    __slots__ = ("spaces",)
    kind = "chamber"

    def __init__(self, spaces):
        self.spaces = spaces

    def __eq__(self, other):
        return isinstance(other, Flag) and self.spaces == other.spaces

    def __hash__(self):
        return hash(self.spaces)

    def __repr__(self):
        return "Flag" + repr([len(s) for s in self.spaces])


class IncidenceData:
    """A finite point-line geometry in indexed form, for the axiom verifiers."""

    def __init__(self, points, lines, pairs, gonality):
        self.points = list(points)
        self.lines = list(lines)
        self.pairs = set(pairs)
        self.gonality = gonality

    def neighbors(self):
        """Adjacency lists over nodes 0..P+L-1 (lines offset by len(points))."""
        np_ = len(self.points)
        adj = [[] for _ in range(np_ + len(self.lines))]
        for pi, li in sorted(self.pairs):
            adj[pi].append(np_ + li)
            adj[np_ + li].append(pi)
        return adj


# ---------------------------------------------------------------------------
# Projective planes.

def _canonical_projectives(field, length):
    """All canonical representatives of 1-spaces of field^length."""
    elems = list(field.elements())
    for pivot in range(length):
        prefix = (field.zero,) * pivot + (field.one,)
        for tail in iproduct(elems, repeat=length - pivot - 1):
            yield prefix + tail


class ProjectivePlane:
    gonality = 3
    class_tag = "T"

    def __init__(self, field: Field):
        self.field = field
        self.dim = 3
        self._points = None
        self._lines = None

    def __repr__(self):
        return f"PG(2, {self.field})"

    def is_finite(self):
        return self.field.size() is not None

    def point(self, coords):
        coords = vec(self.field, coords)
        if len(coords) != 3 or vzero(coords):
            raise NotInModel("plane points need a nonzero coordinate triple")
        return Point(proj_normalize(coords))

    def line(self, coords):
        coords = vec(self.field, coords)
        if len(coords) != 3 or vzero(coords):
            raise NotInModel("plane lines need a nonzero coordinate triple")
        return PlaneLine(proj_normalize(coords))

    def incident(self, x, y):
        if x.kind == y.kind:
            raise KindMismatch("incidence is between a point and a line")
        p, l = (x, y) if x.kind == "point" else (y, x)
        return vdot(p.coords, l.coords).is_zero()

    def join(self, p, q):
        return self.line(cross3(p.coords, q.coords))

    def meet(self, l, m):
        return self.point(cross3(l.coords, m.coords))

    def distance(self, x, y):
        if x == y:
            return 0
        if x.kind != y.kind:
            return 1 if self.incident(x, y) else 3
        return 2

    def project(self, x, y):
        """The unique element incident with x closest to y."""
        d = self.distance(x, y)
        if d == 0 or d >= self.gonality:
            raise OppositeOrEqual(f"distance {d}")
        if d == 1:
            return y
        if x.kind == "point":
            return self.join(x, y)
        return self.meet(x, y)

    def points(self):
        if self._points is None:
            self._points = [Point(c) for c in _canonical_projectives(self.field, 3)]
        return self._points

    def lines(self):
        if self._lines is None:
            self._lines = [PlaneLine(c) for c in _canonical_projectives(self.field, 3)]
        return self._lines

    def elements(self):
        return self.points() + self.lines()

    def incidence_data(self):
        pts, lns = self.points(), self.lines()
        pairs = {(i, j) for i, p in enumerate(pts) for j, l in enumerate(lns)
                 if vdot(p.coords, l.coords).is_zero()}
        return IncidenceData(pts, lns, pairs, self.gonality)

    def dual_incidence_data(self):
        data = self.incidence_data()
        return IncidenceData(data.lines, data.points,
                             {(j, i) for (i, j) in data.pairs}, self.gonality)

    def pencil_chart(self, x):
        """Two base vectors (f0, f1) so the pencil of x is {f0 + t*f1} + {f1}."""
        coords = x.coords
        k = next(i for i, c in enumerate(coords) if not c.is_zero())
        inv = coords[k].inv()
        rows = []
        for j in range(3):
            if j != k:
                row = list(unit_vector(self.field, 3, j))
                row[k] = -(coords[j] * inv)
                rows.append(tuple(row))
        return rows[0], rows[1]

    def pencil(self, x):
        """All elements incident with x (finite fields only)."""
        f0, f1 = self.pencil_chart(x)
        make = self.line if x.kind == "point" else self.point
        out = [make(f1)]
        for t in self.field.elements():
            out.append(make(vadd(f0, vscale(f1, t))))
        return out

    def pencil_sample(self, x, rng, bound=4):
        f0, f1 = self.pencil_chart(x)
        make = self.line if x.kind == "point" else self.point
        if rng.randrange(8) == 0:
            return make(f1)
        t = self.field.sample(rng, bound)
        return make(vadd(f0, vscale(f1, t)))

    def sample_point(self, rng, bound=4):
        while True:
            coords = tuple(self.field.sample(rng, bound) for _ in range(3))
            if not vzero(coords):
                return self.point(coords)

    def sample_line(self, rng, bound=4):
        while True:
            coords = tuple(self.field.sample(rng, bound) for _ in range(3))
            if not vzero(coords):
                return self.line(coords)

    def apply(self, x, matrix, inverse):
        if x.kind == "point":
            return self.point(row_times_mat(x.coords, matrix))
        return self.line(row_times_mat(x.coords, tuple(zip(*inverse))))

    def parse_element(self, kind, text):
        coords = tuple(self.field.parse(part) for part in text.split(","))
        return self.point(coords) if kind == "point" else self.line(coords)

    def format_element(self, x):
        return ",".join(self.field.element_to_str(c) for c in x.coords)


# ---------------------------------------------------------------------------
# Quadratic spaces and orthogonal quadrangles.

class AnisotropyError(GeometryError):
    pass


class QuadraticSpace:
    """(K, L0, q) with q given by an upper-triangular coefficient matrix."""

    def __init__(self, field, coeffs):
        self.field = field
        self.dim = len(coeffs)
        self.coeffs = tuple(tuple(row) for row in coeffs)
        for i in range(self.dim):
            for j in range(self.dim):
                if j < i and not self.coeffs[i][j].is_zero():
                    raise GeometryError("coefficient matrix must be upper triangular")

    @classmethod
    def diagonal(cls, field, diag):
        n = len(diag)
        coeffs = [[field.zero] * n for _ in range(n)]
        for i, c in enumerate(diag):
            coeffs[i][i] = c if isinstance(c, Element) else field.from_int(c)
        return cls(field, coeffs)

    def q(self, v):
        acc = self.field.zero
        for i in range(self.dim):
            if v[i].is_zero():
                continue
            for j in range(i, self.dim):
                c = self.coeffs[i][j]
                if not c.is_zero():
                    acc = acc + c * v[i] * v[j]
        return acc

    def f(self, u, v):
        return self.q(vadd(u, v)) - self.q(u) - self.q(v)

    def vectors(self):
        elems = list(self.field.elements())
        for v in iproduct(elems, repeat=self.dim):
            yield tuple(v)

    def check_anisotropic(self, rng=None, samples=1000):
        """Exhaustive for finite fields, sampled otherwise; returns a witness or None."""
        if self.field.size() is not None:
            vecs = self.vectors()
        else:
            vecs = (tuple(self.field.sample(rng, 6) for _ in range(self.dim))
                    for _ in range(samples))
        for v in vecs:
            if not vzero(v) and self.q(v).is_zero():
                return v
        return None

    def descriptor(self):
        return {"dim": self.dim,
                "coeffs": [[self.field.element_to_str(c) for c in row] for row in self.coeffs]}


class QuadricQuadrangle:
    """Points and lines of the quadric x0*x1 + x2*x3 + q(v) = 0 (Witt index 2)."""

    gonality = 4
    class_tag = "QQ"

    def __init__(self, field, qspace: QuadraticSpace):
        if qspace.field != field:
            raise GeometryError("quadratic space is over a different field")
        self.field = field
        self.qspace = qspace
        self.dim = 4 + qspace.dim
        self._points = None
        self._lines = None

    def __repr__(self):
        return f"Q({self.field}, d={self.qspace.dim})"

    def is_finite(self):
        return self.field.size() is not None

    def qhat(self, x):
        return x[0] * x[1] + x[2] * x[3] + self.qspace.q(x[4:])

    def fhat(self, x, y):
        return self.qhat(vadd(x, y)) - self.qhat(x) - self.qhat(y)

    def embed_l0(self, w):
        return (self.field.zero,) * 4 + tuple(w)

    def point(self, coords):
        coords = vec(self.field, coords)
        if len(coords) != self.dim or vzero(coords):
            raise NotInModel("bad coordinate length")
        if not self.qhat(coords).is_zero():
            raise NotInModel("point is not on the quadric")
        return Point(proj_normalize(coords))

    def line(self, rows):
        rows = rref([vec(self.field, r) for r in rows])
        if len(rows) != 2:
            raise NotInModel("lines are 2-spaces")
        r0, r1 = rows
        if not (self.qhat(r0).is_zero() and self.qhat(r1).is_zero()
                and self.fhat(r0, r1).is_zero()):
            raise NotInModel("2-space is not totally singular")
        return SpanLine(rows)

    def incident(self, x, y):
        if x.kind == y.kind:
            raise KindMismatch("incidence is between a point and a line")
        p, l = (x, y) if x.kind == "point" else (y, x)
        return span_contains(l.rows, p.coords)

    def collinear(self, p, r):
        return self.fhat(p.coords, r.coords).is_zero()

    def join(self, p, r):
        if p == r or not self.collinear(p, r):
            raise GeometryError("points are not collinear")
        return self.line((p.coords, r.coords))

    def meet(self, l, m):
        from .linalg import subspace_intersection
        common = subspace_intersection(l.rows, m.rows)
        if len(common) != 1:
            raise GeometryError("lines do not meet")
        return Point(proj_normalize(common[0]))

    def distance(self, x, y):
        if x == y:
            return 0
        if x.kind != y.kind:
            return 1 if self.incident(x, y) else 3
        if x.kind == "point":
            return 2 if self.collinear(x, y) else 4
        from .linalg import intersection_dim
        return 2 if intersection_dim(x.rows, y.rows) == 1 else 4

    def project(self, x, y):
        d = self.distance(x, y)
        if d == 0 or d >= self.gonality:
            raise OppositeOrEqual(f"distance {d}")
        if d == 1:
            return y
        if d == 2:
            return self.join(x, y) if x.kind == "point" else self.meet(x, y)
        # d = 3: project the far element across the unique connecting path.
        p, l = (x, y) if x.kind == "point" else (y, x)
        r0, r1 = l.rows
        a, b = self.fhat(p.coords, r0), self.fhat(p.coords, r1)
        z = vsub(vscale(r0, b), vscale(r1, a))
        zp = self.point(z)
        if x.kind == "point":
            return self.join(p, zp)
        return zp

    def points(self):
        if self._points is None:
            self._points = [Point(c) for c in _canonical_projectives(self.field, self.dim)
                            if self.qhat(c).is_zero()]
        return self._points

    def lines(self):
        if self._lines is None:
            pts = self.points()
            seen = {}
            for i, p in enumerate(pts):
                for r in pts[i + 1:]:
                    if self.collinear(p, r):
                        rows = rref((p.coords, r.coords))
                        seen.setdefault(rows, SpanLine(rows))
            self._lines = list(seen.values())
        return self._lines

    def elements(self):
        return self.points() + self.lines()

    def incidence_data(self):
        pts, lns = self.points(), self.lines()
        pairs = {(i, j) for i, p in enumerate(pts) for j, l in enumerate(lns)
                 if span_contains(l.rows, p.coords)}
        return IncidenceData(pts, lns, pairs, self.gonality)

    # -- charts and transport ------------------------------------------------

    def frame_vector(self, i):
        return unit_vector(self.field, self.dim, i)

    def _transvection(self, v):
        """x -> x - (fhat(x, v)/qhat(v)) v, an isometry for anisotropic v."""
        qv_inv = self.qhat(v).inv()
        rows = []
        for i in range(self.dim):
            e = self.frame_vector(i)
            rows.append(vsub(e, vscale(v, self.fhat(e, v) * qv_inv)))
        return tuple(rows)

    def transporter(self, p):
        """An isometry (matrix, inverse) moving the base point e0 to p."""
        target = p.coords
        e0 = self.frame_vector(0)
        steps = []
        current = e0
        if proj_normalize(current) != proj_normalize(target):
            if not self.fhat(current, target).is_zero():
                steps.append(self._transvection(vsub(current, target)))
                current = target
            else:
                s = self._bridge(target)
                steps.append(self._transvection(vsub(current, s)))
                steps.append(self._transvection(vsub(s, target)))
                current = target
        matrix = None
        for m in steps:
            matrix = m if matrix is None else tuple(
                row_times_mat(r, m) for r in matrix)
        if matrix is None:
            from .linalg import identity_matrix
            matrix = identity_matrix(self.field, self.dim)
        from .linalg import mat_inv
        return matrix, mat_inv(matrix)

    def _bridge(self, p):
        """A singular vector not perpendicular to e0 or to p (with p _|_ e0)."""
        e1 = self.frame_vector(1)
        for cand in (e1, vadd(e1, self.frame_vector(2)), vadd(e1, self.frame_vector(3))):
            if not self.fhat(cand, p).is_zero():
                return cand
        raise GeometryError("no bridge vector; input is not a quadric point")

    def base_pencil_lines(self):
        """Chart of the lines through e0: w in L0 plus the special line <e0, e2>."""
        e0, e2, e3 = self.frame_vector(0), self.frame_vector(2), self.frame_vector(3)

        def at(w):
            z = vadd(vadd(e3, self.embed_l0(w)),
                     vscale(e2, -self.qspace.q(w)))
            return (e0, z)

        return at, (e0, e2)

    def lines_through(self, p):
        """All lines through p (finite fields only)."""
        matrix, inverse = self.transporter(p)
        at, special = self.base_pencil_lines()
        out = [self.line(tuple(row_times_mat(r, matrix) for r in special))]
        for w in self.qspace.vectors():
            out.append(self.line(tuple(row_times_mat(r, matrix) for r in at(w))))
        return out

    def sample_line_through(self, p, rng, bound=5):
        matrix, _ = self.transporter(p)
        at, special = self.base_pencil_lines()
        if rng.randrange(8) == 0:
            rows = special
        else:
            w = tuple(self.field.sample(rng, bound) for _ in range(self.qspace.dim))
            rows = at(w)
        return self.line(tuple(row_times_mat(r, matrix) for r in rows))

    def points_on(self, l):
        r0, r1 = l.rows
        out = [Point(proj_normalize(r1))]
        for t in self.field.elements():
            out.append(self.point(vadd(r0, vscale(r1, t))))
        return out

    def sample_point_on(self, l, rng, bound=5):
        r0, r1 = l.rows
        if rng.randrange(8) == 0:
            return Point(proj_normalize(r1))
        t = self.field.sample(rng, bound)
        return self.point(vadd(r0, vscale(r1, t)))

    def pencil_sample(self, x, rng, bound=5):
        if x.kind == "point":
            return self.sample_line_through(x, rng, bound)
        return self.sample_point_on(x, rng, bound)

    def sample_point(self, rng, bound=5):
        """A singular point from the affine chart x0 = 1 (plus rare strata)."""
        F = self.field
        if rng.randrange(8) == 0:
            w = tuple(F.sample(rng, bound) for _ in range(self.qspace.dim))
            x2 = F.sample(rng, bound)
            coords = ((F.zero, F.one, x2) + ((-self.qspace.q(w) / x2,) if not x2.is_zero()
                      else (F.zero,)) + w)
            if self.qhat(coords).is_zero():
                return self.point(coords)
        x2, x3 = F.sample(rng, bound), F.sample(rng, bound)
        w = tuple(F.sample(rng, bound) for _ in range(self.qspace.dim))
        x1 = -(x2 * x3 + self.qspace.q(w))
        return self.point((F.one, x1, x2, x3) + w)

    def apply(self, x, matrix, inverse):
        if x.kind == "point":
            return self.point(row_times_mat(x.coords, matrix))
        return self.line(tuple(row_times_mat(r, matrix) for r in x.rows))

    def parse_element(self, kind, text):
        if kind == "point":
            return self.point(tuple(self.field.parse(p) for p in text.split(",")))
        rows = [tuple(self.field.parse(p) for p in row.split(","))
                for row in text.split(";")]
        return self.line(rows)

    def format_element(self, x):
        if x.kind == "point":
            return ",".join(self.field.element_to_str(c) for c in x.coords)
        return ";".join(",".join(self.field.element_to_str(c) for c in r) for r in x.rows)


# ---------------------------------------------------------------------------
# Flag buildings of type A.

def perm_identity(n):
    return tuple(range(n))


def perm_mul(a, b):
    """Apply a first, then b."""
    return tuple(b[a[i]] for i in range(len(a)))


def perm_inv(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_length(a):
    n = len(a)
    return sum(1 for i in range(n) for j in range(i + 1, n) if a[i] > a[j])


def transposition(n, i):
    """The Coxeter generator s_i (1-based) of S_n: swap positions i-1, i."""
    out = list(range(n))
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


class FlagBuilding:
    """The chamber system of complete flags of K^(l+1), type A_l."""

    class_tag = "A"

    def __init__(self, field, rank):
        if rank < 1:
            raise GeometryError("rank must be at least 1")
        self.field = field
        self.rank = rank
        self.dim = rank + 1
        self._chambers = None
        self._subspaces = {}

    def __repr__(self):
        return f"Flags(A_{self.rank}, {self.field})"

    def is_finite(self):
        return self.field.size() is not None

    def generators(self):
        return list(range(1, self.rank + 1))

    def flag(self, spaces):
        canon = tuple(rref(s) for s in spaces)
        dims = [len(s) for s in canon]
        if dims != list(range(1, self.rank + 1)):
            raise NotInModel(f"flag dimensions {dims}")
        for small, big in zip(canon, canon[1:]):
            if any(not span_contains(big, row) for row in small):
                raise NotInModel("flag subspaces are not nested")
        return Flag(canon)

    def subspaces_of_dim(self, k):
        if k in self._subspaces:
            return self._subspaces[k]
        if k == 0:
            result = [()]
        elif k == 1:
            result = [rref((c,)) for c in _canonical_projectives(self.field, self.dim)]
        else:
            result = []
            seen = set()
            for small in self.subspaces_of_dim(k - 1):
                for c in _canonical_projectives(self.field, self.dim):
                    if span_contains(small, c):
                        continue
                    big = rref(small + (c,))
                    if big not in seen:
                        seen.add(big)
                        result.append(big)
        self._subspaces[k] = result
        return result

    def chambers(self):
        if self._chambers is not None:
            return self._chambers

        def extend(chain):
            k = len(chain)
            if k == self.rank:
                yield Flag(tuple(chain))
                return
            for c in _canonical_projectives(self.field, self.dim):
                if chain and span_contains(chain[-1], c):
                    continue
                big = rref((chain[-1] if chain else ()) + (c,)) if chain else rref((c,))
                if len(big) != k + 1:
                    continue
                yield from extend(chain + [big])

        seen = set()
        out = []
        for flag in extend([]):
            if flag not in seen:
                seen.add(flag)
                out.append(flag)
        self._chambers = out
        return out

    def weyl_distance(self, F, G):
        """The permutation tracking how the two flags sit relative to each other."""
        n = self.dim
        full = tuple(unit_vector(self.field, n, i) for i in range(n))
        F_chain = ((),) + F.spaces + (full,)
        G_chain = ((),) + G.spaces + (full,)
        dims = [[0] * (n + 1) for _ in range(n + 1)]
        for i in range(n + 1):
            for j in range(n + 1):
                if i == 0 or j == 0:
                    dims[i][j] = 0
                else:
                    stacked = F_chain[i] + G_chain[j]
                    dims[i][j] = i + j - len(rref(stacked))
        perm = [0] * n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if dims[i][j] - dims[i - 1][j] - dims[i][j - 1] + dims[i - 1][j - 1] == 1:
                    perm[i - 1] = j - 1
        return tuple(perm)

    def _panel_directions(self, F, s):
        n = self.dim
        below = F.spaces[s - 2] if s >= 2 else ()
        above = F.spaces[s] if s < self.rank else tuple(
            unit_vector(self.field, n, i) for i in range(n))
        dirs = []
        for row in above:
            cand = below + tuple(dirs) + (row,)
            if len(rref(cand)) == len(below) + len(dirs) + 1:
                dirs.append(row)
            if len(dirs) == 2:
                break
        return below, dirs

    def panel_sample(self, F, s, rng, bound=3):
        """A random chamber in the s-panel of F (any field)."""
        below, dirs = self._panel_directions(F, s)
        if rng.randrange(4) == 0:
            v = dirs[1]
        else:
            t = self.field.sample(rng, bound)
            v = vadd(dirs[0], vscale(dirs[1], t))
        mid = rref(below + (v,))
        return Flag(F.spaces[:s - 1] + (mid,) + F.spaces[s:])

    def panel(self, F, s):
        """All chambers s-equivalent to F (differing at most in the s-dim space)."""
        n = self.dim
        below = F.spaces[s - 2] if s >= 2 else ()
        above = F.spaces[s] if s < self.rank else tuple(
            unit_vector(self.field, n, i) for i in range(n))
        out = []
        quotient_reps = []
        for c in _canonical_projectives(self.field, 2):
            quotient_reps.append(c)
        # two independent directions of `above` modulo `below`
        dirs = []
        for row in above:
            cand = below + tuple(dirs) + (row,)
            if len(rref(cand)) == len(below) + len(dirs) + 1:
                dirs.append(row)
            if len(dirs) == 2:
                break
        for rep in quotient_reps:
            v = vadd(vscale(dirs[0], rep[0]), vscale(dirs[1], rep[1]))
            mid = rref(below + (v,))
            spaces = F.spaces[:s - 1] + (mid,) + F.spaces[s:]
            out.append(Flag(spaces))
        return out

    def apply(self, flag, matrix, inverse):
        return Flag(tuple(rref(tuple(row_times_mat(r, matrix) for r in s))
                          for s in flag.spaces))

    # Point sets per subspace make the exhaustive Weyl checks cheap.
    def subspace_point_set(self, rows):
        pts = set()
        elems = list(self.field.elements())
        k = len(rows)
        for coeffs in iproduct(elems, repeat=k):
            v = None
            for c, row in zip(coeffs, rows):
                term = vscale(row, c)
                v = term if v is None else vadd(v, term)
            if v is not None and not vzero(v):
                pts.add(proj_normalize(v))
        return frozenset(pts)

    def weyl_distance_fast(self, F_sets, G_sets):
        """As weyl_distance, with precomputed point sets per flag subspace."""
        n = self.dim
        q = self.field.size()
        count_to_dim = {0: 0}
        c = 0
        for d in range(1, n + 1):
            c = c * q + 1
            count_to_dim[c] = d
        dims = [[0] * (n + 1) for _ in range(n + 1)]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                dims[i][j] = count_to_dim[len(F_sets[i] & G_sets[j])]
        perm = [0] * n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if dims[i][j] - dims[i - 1][j] - dims[i][j - 1] + dims[i - 1][j - 1] == 1:
                    perm[i - 1] = j - 1
        return tuple(perm)

    def flag_point_sets(self, F):
        n = self.dim
        full = tuple(unit_vector(self.field, n, i) for i in range(n))
        sets = [frozenset()]
        for s in F.spaces:
            sets.append(self.subspace_point_set(s))
        sets.append(self.subspace_point_set(full))
        return sets


def flag_weyl_distance(building, F, G):
    return building.weyl_distance(F, G)
