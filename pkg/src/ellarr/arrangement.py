"""Face categories of toric arrangements, computed exactly in the lift.

A face of the periodic lift is identified by its *code*: for each
hypersurface family ``j`` an integer that is ``2k`` when the face lies on
``a_j . x = b_j + k`` and ``2k + 1`` when it lies in the open slab
``b_j + k < a_j . x < b_j + k + 1``.  Translating by ``u`` adds
``2 a_j . u`` to entry ``j``.  Every face orbit has a vertex in
``[0, 1)^d``, so all orbits are reached from the vertex orbits and the
covectors of the central arrangement at each vertex.
"""

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .linalg import dot, independent_subset, rank as matrix_rank, solve
from .polyhedral import conforms, covectors
from .scwol import AcyclicCategory


class SpecError(ValueError):
    """Malformed or unsupported arrangement data."""


class NonEssentialError(SpecError):
    pass


def _parse_fraction(value, where):
    try:
        if isinstance(value, str):
            if "/" in value:
                p, q = value.split("/")
                p, q = int(p), int(q)
                if q <= 0:
                    raise SpecError(f"{where}: denominator must be positive")
                return Fraction(p, q)
            return Fraction(int(value))
        if isinstance(value, int):
            return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"{where}: cannot parse rational {value!r}") from exc
    raise SpecError(f"{where}: expected a 'p/q' string, got {value!r}")


def _hypersurface_key(col, off):
    lead = next(v for v in col if v != 0)
    if lead < 0:
        return tuple(-v for v in col), (-off) % 1
    return tuple(col), off % 1


@dataclass(frozen=True)
class ArrangementSpec:
    d: int
    columns: tuple
    offsets: tuple

    def __post_init__(self):
        cols = tuple(tuple(int(v) for v in c) for c in self.columns)
        offs = tuple(Fraction(b) for b in self.offsets)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "offsets", offs)
        if self.d < 1:
            raise SpecError("d: must be a positive integer")
        if not cols:
            raise SpecError("columns: at least one column required")
        if len(offs) != len(cols):
            raise SpecError("offsets: need one offset per column")
        for j, c in enumerate(cols):
            if len(c) != self.d:
                raise SpecError(f"columns[{j}]: expected {self.d} entries")
            if all(v == 0 for v in c):
                raise SpecError(f"columns[{j}]: zero column")
        for j, b in enumerate(offs):
            if not 0 <= b < 1:
                raise SpecError(f"offsets[{j}]: must lie in [0, 1)")
        seen = {}
        for j, (c, b) in enumerate(zip(cols, offs)):
            key = _hypersurface_key(c, b)
            if key in seen:
                raise SpecError(f"columns[{j}]: repeats hypersurface {seen[key]}")
            seen[key] = j
        r = matrix_rank([list(c) for c in cols])
        if r < self.d:
            raise NonEssentialError(
                f"non-essential arrangement: columns span rank {r} < d = {self.d}; "
                f"split off the {self.d - r}-dimensional elliptic factor and pass the "
                f"essential arrangement on the quotient lattice instead")

    @property
    def n(self):
        return len(self.columns)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise SpecError("top level: expected an object")
        for key in ("d", "columns", "offsets"):
            if key not in data:
                raise SpecError(f"{key}: missing field")
        d = data["d"]
        if not isinstance(d, int) or isinstance(d, bool):
            raise SpecError("d: expected an integer")
        cols = data["columns"]
        if not isinstance(cols, list):
            raise SpecError("columns: expected a list of integer lists")
        for j, c in enumerate(cols):
            if not isinstance(c, list) or not all(
                    isinstance(v, int) and not isinstance(v, bool) for v in c):
                raise SpecError(f"columns[{j}]: expected a list of integers")
        offs = data["offsets"]
        if not isinstance(offs, list):
            raise SpecError("offsets: expected a list of 'p/q' strings")
        offsets = [_parse_fraction(b, f"offsets[{j}]") for j, b in enumerate(offs)]
        return cls(d, tuple(tuple(c) for c in cols), tuple(offsets))

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)

    def to_dict(self):
        return {"d": self.d, "columns": [list(c) for c in self.columns],
                "offsets": [f"{b.numerator}/{b.denominator}" for b in self.offsets]}


def coxeter_a(n):
    """Toric arrangement of Coxeter type A_n: ``x_i = 0`` and ``x_i = x_j``."""
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cols.append(tuple(e))
    for i in range(n):
        for j in range(i + 1, n):
            e = [0] * n
            e[i], e[j] = 1, -1
            cols.append(tuple(e))
    return ArrangementSpec(n, tuple(cols), tuple(Fraction(0) for _ in cols))


@dataclass
class FaceOrbit:
    """Canonical representative of one ``Z^d``-orbit of faces of the lift."""

    id: int
    dim: int
    vertices: list
    barycenter: tuple
    support: frozenset
    code: tuple = field(repr=False, default=())

    def to_dict(self):
        def q(x):
            return f"{x.numerator}/{x.denominator}"
        return {"id": self.id, "dim": self.dim, "support": sorted(self.support),
                "barycenter": [q(x) for x in self.barycenter],
                "vertices": [[q(x) for x in v] for v in self.vertices]}


def _floor_vec(x):
    return tuple(math.floor(v) for v in x)


class _Lift:
    """Exact geometry of the periodic lift of one arrangement."""

    def __init__(self, spec):
        self.spec = spec
        self.cols = spec.columns
        self.offs = spec.offsets
        self._vertex_cache = {}
        # neighbouring cells share most of their tight systems and vertices
        self._solve_cache = {}
        self._values_cache = {}

    def value(self, j, x):
        return dot(self.cols[j], x) - self.offs[j]

    def code_of_point(self, x):
        out = []
        for j in range(self.spec.n):
            t = self.value(j, x)
            f = math.floor(t)
            out.append(2 * f if t == f else 2 * f + 1)
        return tuple(out)

    def translate(self, code, u):
        return tuple(c + 2 * dot(a, u) for c, a in zip(code, self.cols))

    def values(self, x):
        vals = self._values_cache.get(x)
        if vals is None:
            vals = tuple(self.value(j, x) for j in range(self.spec.n))
            self._values_cache[x] = vals
        return vals

    def in_closure(self, code, x):
        for c, t in zip(code, self.values(x)):
            if c % 2 == 0:
                if t != c // 2:
                    return False
            else:
                k = (c - 1) // 2
                if not k <= t <= k + 1:
                    return False
        return True

    def closure_vertices(self, code):
        """Vertices of the closed cell with the given code (sorted)."""
        if code in self._vertex_cache:
            return self._vertex_cache[code]
        d = self.spec.d
        eq = [j for j, c in enumerate(code) if c % 2 == 0]
        eq_rows = [list(self.cols[j]) for j in eq]
        basis = [eq[i] for i in independent_subset(eq_rows)]
        free = d - len(basis)
        rows = [(self.cols[j], self.offs[j] + code[j] // 2) for j in basis]
        bounds = []
        for j, c in enumerate(code):
            if c % 2:
                k = (c - 1) // 2
                bounds.append((j, self.offs[j] + k))
                bounds.append((j, self.offs[j] + k + 1))
        found = set()
        for combo in itertools.combinations(bounds, free):
            if len({j for j, _ in combo}) < free:
                continue
            key = tuple(sorted([(j, self.offs[j] + code[j] // 2) for j in basis] + list(combo)))
            if key in self._solve_cache:
                x = self._solve_cache[key]
            else:
                system = rows + [(self.cols[j], r) for j, r in combo]
                x = solve([list(a) for a, _ in system], [r for _, r in system])
                x = None if x is None else tuple(x)
                self._solve_cache[key] = x
            if x is not None and self.in_closure(code, x):
                found.add(x)
        verts = sorted(found)
        if not verts:
            raise ArithmeticError(f"cell {code} has no vertices (arrangement not essential?)")
        self._vertex_cache[code] = verts
        return verts

    def dimension(self, code):
        eq_rows = [list(self.cols[j]) for j, c in enumerate(code) if c % 2 == 0]
        return self.spec.d - (matrix_rank(eq_rows) if eq_rows else 0)


def _barycenter(verts):
    k = len(verts)
    return tuple(sum(v[i] for v in verts) / k for i in range(len(verts[0])))


def vertex_orbits(spec, margin_cap=64):
    """Representatives in ``[0, 1)^d`` of all vertex orbits of the lift.

    For each independent ``d``-subset ``J`` of columns, the vertices on
    those hyperplanes are indexed by ``Z^J`` modulo the image of ``A_J``,
    whose index is ``|det A_J|``; the box ``[0, |det|)^d`` covers every
    coset.  ``margin_cap`` bounds that box and is exceeded loudly.
    """
    d = spec.d
    reps = set()
    for J in itertools.combinations(range(spec.n), d):
        rows = [list(spec.columns[j]) for j in J]
        if matrix_rank(rows) < d:
            continue
        det = abs(_det(rows))
        if det > margin_cap:
            raise RuntimeError(f"translate box {det} exceeds margin cap {margin_cap}")
        for ks in itertools.product(range(det), repeat=d):
            rhs = [spec.offsets[j] + k for j, k in zip(J, ks)]
            x = solve(rows, rhs)
            reps.add(tuple(v - math.floor(v) for v in x))
    return sorted(reps)


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    return sum((-1) ** c * rows[0][c] * _det([r[:c] + r[c + 1:] for r in rows[1:]])
               for c in range(n))


def affine_face_complex(spec, margin_cap=64):
    """All canonical faces of the lift (barycenter in ``[0, 1)^d``).

    Returns ``(faces, lift)`` with faces sorted by (dim, barycenter).
    """
    lift = _Lift(spec)
    local = {}
    canon = {}
    for v in vertex_orbits(spec, margin_cap):
        vcode = lift.code_of_point(v)
        supp = [j for j, c in enumerate(vcode) if c % 2 == 0]
        normals = tuple(spec.columns[j] for j in supp)
        if normals not in local:
            local[normals] = covectors(normals)
        for tau in local[normals]:
            code = list(vcode)
            for j, s in zip(supp, tau):
                code[j] += s
            code = tuple(code)
            verts = lift.closure_vertices(code)
            u = _floor_vec(_barycenter(verts))
            ccode = lift.translate(code, [-x for x in u])
            if ccode not in canon:
                canon[ccode] = [tuple(x - s for x, s in zip(p, u)) for p in verts]
    faces = []
    for ccode, verts in canon.items():
        bary = _barycenter(verts)
        faces.append(FaceOrbit(0, lift.dimension(ccode), sorted(verts), bary,
                               frozenset(j for j, c in enumerate(ccode) if c % 2 == 0),
                               ccode))
    faces.sort(key=lambda f: (f.dim, f.barycenter))
    for i, f in enumerate(faces):
        f.id = i
    return faces, lift


@dataclass
class ToricFaceCategory:
    """Face category of a toric arrangement with its geometry table."""

    spec: ArrangementSpec
    cat: AcyclicCategory
    faces: list
    lift: object = field(repr=False, default=None)

    def objects_of_dim(self, k):
        return [f.id for f in self.faces if f.dim == k]

    def counts(self):
        return self.cat.rank_counts()

    def geometry_table(self):
        return [f.to_dict() for f in self.faces]

    def morphism_index(self):
        return {(s, t, g): m for m, (s, t, g) in
                enumerate(zip(self.cat.sources, self.cat.targets, self.cat.tags))}


def toric_face_category(spec, margin_cap=64):
    """Build the face category of the toric arrangement ``spec``.

    Morphism ``F -> G`` with tag ``v`` means that the canonical
    representative of ``F`` translated by ``v`` lies in the closure of the
    canonical representative of ``G``.  Composition adds tags.
    """
    faces, lift = affine_face_complex(spec, margin_cap)
    by_code = {f.code: f.id for f in faces}
    local = {}
    morphs = set()
    for g in faces:
        for w in g.vertices:
            wcode = lift.code_of_point(w)
            supp = [j for j, c in enumerate(wcode) if c % 2 == 0]
            normals = tuple(spec.columns[j] for j in supp)
            if normals not in local:
                local[normals] = covectors(normals)
            sigma = tuple(g.code[j] - wcode[j] for j in supp)
            for tau in local[normals]:
                if tau == sigma or not conforms(tau, sigma):
                    continue
                code = list(wcode)
                for j, s in zip(supp, tau):
                    code[j] += s
                code = tuple(code)
                verts = [x for x in g.vertices if lift.in_closure(code, x)]
                u = _floor_vec(_barycenter(verts))
                f_id = by_code[lift.translate(code, [-x for x in u])]
                morphs.add((f_id, g.id, u))
    morphs = sorted(morphs)
    index = {m: i for i, m in enumerate(morphs)}
    out = {}
    for i, (s, t, tag) in enumerate(morphs):
        out.setdefault(s, []).append(i)
    comp = {}
    for i, (s, t, tag) in enumerate(morphs):
        for k in out.get(t, []):
            _, t2, tag2 = morphs[k]
            key = (s, t2, tuple(a + b for a, b in zip(tag, tag2)))
            comp[i, k] = index[key]
    counters = {}
    labels = []
    for f in faces:
        counters[f.dim] = counters.get(f.dim, -1) + 1
        labels.append(f"f{f.dim}.{counters[f.dim]:03d}")
    cat = AcyclicCategory([f.dim for f in faces], labels,
                          [m[0] for m in morphs], [m[1] for m in morphs],
                          [m[2] for m in morphs], comp)
    return ToricFaceCategory(spec, cat, faces, lift)


@dataclass
class WallEdge:
    wall: int
    tail: int
    head: int
    tail_morphism: int
    head_morphism: int

    @property
    def is_loop(self):
        return self.tail == self.head


@dataclass
class ChamberGraph:
    chambers: list
    edges: list

    def edge_of_wall(self, wall):
        for e in self.edges:
            if e.wall == wall:
                return e
        raise KeyError(wall)


def chamber_graph(fc):
    """Graph of chambers and walls with a deterministic orientation.

    A wall is oriented from the chamber with the lexicographically smaller
    barycenter; for a loop, from the coboundary with the smaller tag.
    """
    d = fc.spec.d
    cat = fc.cat
    chambers = fc.objects_of_dim(d)
    edges = []
    for a in fc.objects_of_dim(d - 1):
        cob = [m for m in cat.out_morphisms(a) if fc.faces[cat.targets[m]].dim == d]
        if len(cob) != 2:
            raise ArithmeticError(f"wall {a} has {len(cob)} chamber incidences")
        cob.sort(key=lambda m: (fc.faces[cat.targets[m]].barycenter, cat.tags[m]))
        m0, m1 = cob
        edges.append(WallEdge(a, cat.targets[m0], cat.targets[m1], m0, m1))
    return ChamberGraph(chambers, edges)


@dataclass
class StarStep:
    """Crossing of one lifted wall in the cyclic order around a codim-2 face.

    The lifted wall is ``wall`` translated by ``-wall_tag``; ``sign`` is +1
    when the traversal agrees with the wall orientation.  ``before`` and
    ``after`` are ``(chamber, tag)`` pairs naming chamber lifts the same way.
    """

    wall: int
    wall_tag: tuple
    sign: int
    before: tuple
    after: tuple


def _angle_cmp(p, q):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    hp, hq = half(p), half(q)
    if hp != hq:
        return hp - hq
    cross = p[0] * q[1] - p[1] * q[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def codim2_star(fc, graph, p):
    """Walls and chambers around the codim-2 face ``p`` in counter-clockwise order.

    The transverse chart is ``x -> (a_i . x, a_j . x)`` for the first two
    independent normals through ``p``; angles are compared exactly.
    """
    d = fc.spec.d
    face = fc.faces[p]
    if d < 2 or face.dim != d - 2:
        raise ValueError(f"object {p} is not a codimension-2 face")
    cat = fc.cat
    supp = sorted(face.support)
    normals = [fc.spec.columns[j] for j in supp]
    chart = [normals[i] for i in independent_subset([list(v) for v in normals])[:2]]

    def direction(bary, tag):
        diff = [b - t - c for b, t, c in zip(bary, tag, face.barycenter)]
        return tuple(dot(a, diff) for a in chart)

    walls, chambers = [], []
    for m in cat.out_morphisms(p):
        tgt = cat.targets[m]
        dim = fc.faces[tgt].dim
        entry = (direction(fc.faces[tgt].barycenter, cat.tags[m]), tgt, cat.tags[m])
        if dim == d - 1:
            walls.append(entry)
        elif dim == d:
            chambers.append(entry)
    key = cmp_to_key(lambda x, y: _angle_cmp(x[0], y[0]))
    walls.sort(key=key)
    chambers.sort(key=key)
    if len(walls) != len(chambers) or len(walls) < 2:
        raise ArithmeticError(f"star of {p} is not a polygon")
    # the sector after wall i holds the chamber whose direction follows it
    k = len(walls)
    offset = next((i for i in range(k) if _angle_cmp(chambers[i][0], walls[0][0]) > 0), 0)
    after = [chambers[(offset + i) % k] for i in range(k)]
    index = fc.morphism_index()
    steps = []
    for i, (_, a, v) in enumerate(walls):
        prev = after[i - 1]
        nxt = after[i]
        for ch in (prev, nxt):
            rel = tuple(x - y for x, y in zip(ch[2], v))
            if (a, ch[1], rel) not in index:
                raise ArithmeticError(f"star of {p}: sector chamber not adjacent to wall")
        edge = graph.edge_of_wall(a)
        tail = (edge.tail, tuple(x + y for x, y in zip(cat.tags[edge.tail_morphism], v)))
        head = (edge.head, tuple(x + y for x, y in zip(cat.tags[edge.head_morphism], v)))
        b, n = (prev[1], prev[2]), (nxt[1], nxt[2])
        if (tail, head) == (b, n):
            sign = 1
        elif (tail, head) == (n, b):
            sign = -1
        else:
            raise ArithmeticError(f"star of {p}: wall {a} does not separate its sectors")
        steps.append(StarStep(a, v, sign, b, n))
    return steps
