"""Cyclic partitions, the weak order on S_n and the explicit A_n presentation.

A cyclic partition of ``n`` is a partition of ``{0, ..., n}`` with cyclically
ordered blocks.  It is stored rotated so the block holding 0 comes first.
A separator is named by the block right before it.

Permutations are tuples in one-line notation ``(s(1), ..., s(n))``; the
chamber of ``s`` is ``0|s(1)|...|s(n)|``.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .arrangement import chamber_graph, coxeter_a, toric_face_category
from .elliptic import build_model
from .isomorphism import categories_isomorphic, check_isomorphism
from .pi1 import Presentation, presentation, relator_key
from .scwol import AcyclicCategory


@dataclass(frozen=True)
class CyclicPartition:
    blocks: tuple

    @classmethod
    def make(cls, blocks):
        blocks = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in blocks):
            raise ValueError("empty block")
        elems = sorted(x for b in blocks for x in b)
        if elems != list(range(len(elems))):
            raise ValueError(f"blocks do not partition 0..{len(elems) - 1}: {blocks}")
        k = next(i for i, b in enumerate(blocks) if 0 in b)
        return cls(tuple(blocks[k:] + blocks[:k]))

    @classmethod
    def parse(cls, text):
        parts = text.strip().split("|")
        if parts[-1] == "":
            parts = parts[:-1]
        blocks = [[int(c) for c in (p.split(",") if "," in p else p)] for p in parts]
        return cls.make(blocks)

    @property
    def n(self):
        return sum(len(b) for b in self.blocks) - 1

    @property
    def rank(self):
        return len(self.blocks) - 1

    def label(self):
        sep = "," if self.n >= 10 else ""
        return "".join(sep.join(map(str, b)) + "|" for b in self.blocks)

    def __str__(self):
        return self.label()

    def separators(self):
        return list(self.blocks)

    def merge(self, seps):
        """Remove the separators following the blocks in ``seps``."""
        seps = set(seps)
        h = len(self.blocks)
        if not seps <= set(self.blocks) or len(seps) >= h:
            raise ValueError("can remove between 1 and h-1 existing separators")
        # start right after a surviving separator
        start = next(i for i in range(h) if self.blocks[i] not in seps) + 1
        out, cur = [], []
        for k in range(h):
            b = self.blocks[(start + k) % h]
            cur.extend(b)
            if b not in seps:
                out.append(cur)
                cur = []
        return CyclicPartition.make(out)

    def position(self):
        """Map element -> index of its block."""
        return {x: i for i, b in enumerate(self.blocks) for x in b}


def cyclic_partitions(n):
    if n < 1:
        raise ValueError("n must be at least 1")
    elems = list(range(n + 1))
    out = []

    def set_partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in set_partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    for part in set_partitions(elems):
        head = next(b for b in part if 0 in b)
        others = [b for b in part if b is not head]
        for perm in permutations(others):
            out.append(CyclicPartition.make([head] + list(perm)))
    return sorted(set(out), key=lambda p: (p.rank, p.blocks))


def cyclic_partitions_category(n):
    """Objects: cyclic partitions ranked by #blocks - 1.

    A morphism ``x -> y`` is a set of separators of ``y`` whose removal
    gives ``x``; composition takes the union after lifting.  The tag is
    the sorted tuple of blocks preceding the removed separators.
    """
    objs = cyclic_partitions(n)
    index = {p: i for i, p in enumerate(objs)}
    sources, targets, tags = [], [], []
    mindex = {}
    for y, py in enumerate(objs):
        h = len(py.blocks)
        for k in range(1, h):
            for seps in combinations(py.blocks, k):
                x = index[py.merge(seps)]
                tag = tuple(sorted(seps))
                mindex[y, tag] = len(sources)
                sources.append(x)
                targets.append(y)
                tags.append(tag)
    out = [[] for _ in objs]
    for m, s in enumerate(sources):
        out[s].append(m)
    comp = {}
    for m1 in range(len(sources)):
        py = objs[targets[m1]]
        for m2 in out[targets[m1]]:
            pz = objs[targets[m2]]
            comp[m1, m2] = mindex[targets[m2], tuple(sorted(
                set(tags[m2]) | {_lift(b, py, pz) for b in tags[m1]}))]
    return AcyclicCategory([p.rank for p in objs], [p.label() for p in objs],
                           sources, targets, tags, comp)


def _lift(block, coarse, fine):
    """Separator of ``fine`` matching the one after ``block`` of ``coarse``."""
    members = set(block)
    fb = fine.blocks
    for i, b in enumerate(fb):
        if set(b) <= members and not set(fb[(i + 1) % len(fb)]) <= members:
            return b
    raise ValueError(f"{coarse} is not a coarsening of {fine}")


# --- geometric comparison ---------------------------------------------------

def partition_of_point(point):
    """Cyclic partition recorded by the fractional parts of ``(0, x_1, ..., x_n)``."""
    vals = [Fraction(0)] + [Fraction(v) % 1 for v in point]
    groups = {}
    for i, v in enumerate(vals):
        groups.setdefault(v, []).append(i)
    return CyclicPartition.make([groups[v] for v in sorted(groups)])


def geometric_object_map(fc, cat=None):
    """Object bijection from the geometric face category of A_n to cyclic partitions."""
    n = fc.spec.d
    objs = cyclic_partitions(n)
    index = {p: i for i, p in enumerate(objs)}
    fmap = [index[partition_of_point(f.barycenter)] for f in fc.faces]
    if sorted(fmap) != list(range(len(objs))):
        raise ArithmeticError("fractional-part map is not a bijection")
    return fmap


def verify_an_iso(n, fc=None):
    """Isomorphism from the geometric face category of A_n to cyclic partitions.

    The object map is forced by fractional parts; raises if no morphism
    bijection exists.
    """
    fc = fc or toric_face_category(coxeter_a(n))
    cp = cyclic_partitions_category(n)
    fmap = geometric_object_map(fc)
    iso = categories_isomorphic(fc.cat, cp, object_map=fmap)
    if iso is None or not check_isomorphism(fc.cat, cp, iso):
        raise ArithmeticError(f"no isomorphism for n={n}")
    return iso


# --- permutations and the tree ---------------------------------------------

def inversions(perm):
    return sum(1 for i, j in combinations(range(len(perm)), 2) if perm[i] > perm[j])


def apply_word(word, n):
    """Product ``s_{i1} ... s_{ik}`` in one-line notation."""
    p = list(range(1, n + 1))
    for i in word:
        # right multiplication by s_i swaps positions i and i+1
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def lex_first_reduced_word(perm):
    """Greedy on the smallest left descent: value i+1 sits before value i."""
    p = list(perm)
    n = len(p)
    if sorted(p) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    word = []
    while True:
        pos = {v: k for k, v in enumerate(p)}
        i = next((i for i in range(1, n) if pos[i + 1] < pos[i]), None)
        if i is None:
            break
        word.append(i)
        a, b = pos[i], pos[i + 1]
        p[a], p[b] = i + 1, i
    return tuple(word)


def chamber_of(perm):
    return CyclicPartition.make([[0]] + [[k] for k in perm])


def source_target(wall):
    """``s(W)`` and ``t(W)`` for a wall ``i0 i1|rest``."""
    k = next(i for i, b in enumerate(wall.blocks) if len(b) == 2)
    i0, i1 = wall.blocks[k]
    rest = [list(b) for b in wall.blocks[k + 1:] + wall.blocks[:k]]
    return (CyclicPartition.make([[i0], [i1]] + rest),
            CyclicPartition.make([[i1], [i0]] + rest))


@dataclass(frozen=True)
class WallLabel:
    wall: CyclicPartition
    source: CyclicPartition
    target: CyclicPartition

    @classmethod
    def of(cls, wall):
        if len(wall.blocks) != wall.n:
            raise ValueError(f"{wall} is not a wall")
        return cls(wall, *source_target(wall))


def walls(n):
    return [p for p in cyclic_partitions(n) if len(p.blocks) == n]


def chambers(n):
    """Chambers in lexicographic order of their permutations; the identity first."""
    return [chamber_of(p) for p in permutations(range(1, n + 1))]


def an_tree(n):
    """Walls ``W_s`` between ``t`` and ``s = t s_i`` along lex-first words."""
    tree = []
    for perm in permutations(range(1, n + 1)):
        word = lex_first_reduced_word(perm)
        if not word:
            continue
        tau = apply_word(word[:-1], n)
        i = word[-1]
        blocks = [[0]] + [[k] for k in tau]
        blocks[i] = [tau[i - 1], tau[i]]
        del blocks[i + 1]
        tree.append(CyclicPartition.make(blocks))
    return sorted(tree, key=lambda p: p.blocks)


def tree_is_spanning(n, tree):
    cs = chambers(n)
    parent = {c: c for c in cs}

    def find(c):
        while parent[c] != c:
            c = parent[c]
        return c

    for w in tree:
        s, t = source_target(w)
        a, b = find(s), find(t)
        if a == b:
            return False
        parent[a] = b
    return len(tree) == len(cs) - 1


# --- codimension-2 faces ----------------------------------------------------

def classify_codim2(n):
    """Split codim-2 partitions into a triple block (P2) or two doubletons (P11)."""
    p2, p11 = [], []
    for p in cyclic_partitions(n):
        if len(p.blocks) != n - 1:
            continue
        sizes = sorted(len(b) for b in p.blocks)
        if sizes[-1] == 3:
            p2.append(p)
        else:
            p11.append(p)
    return p2, p11


def support_pairs(p):
    """Pairs ``(i, j)``, i < j, in a common block: the hyperplanes through the face."""
    return sorted((a, b) for blk in p.blocks for a, b in combinations(blk, 2))


def column_of_pair(n, i, j):
    """Column of ``x_j - x_i = 0`` (or ``x_j = 0`` when i = 0) in ``coxeter_a(n)``."""
    if i == 0:
        return j - 1
    k = n
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if (a, b) == (i, j):
                return k
            k += 1
    raise ValueError((i, j))


def _replace(p, k, new_blocks):
    blocks = [list(b) for b in p.blocks]
    return CyclicPartition.make(blocks[:k] + [list(b) for b in new_blocks] + blocks[k + 1:])


def p2_walls(p):
    """``(U, V, W, U', V', W')`` for ``p = ijk|...`` with i < j < k."""
    k0 = next(t for t, b in enumerate(p.blocks) if len(b) == 3)
    i, j, k = p.blocks[k0]
    return (_replace(p, k0, [[k], [i, j]]), _replace(p, k0, [[i, k], [j]]),
            _replace(p, k0, [[i], [j, k]]), _replace(p, k0, [[i, j], [k]]),
            _replace(p, k0, [[j], [i, k]]), _replace(p, k0, [[j, k], [i]]))


def p11_walls(p):
    """``(V, V', W, W')`` for ``p = ij|...|kh|...``; ``ij`` is the first doubleton."""
    a, b = [t for t, blk in enumerate(p.blocks) if len(blk) == 2]
    i, j = p.blocks[a]
    k, h = p.blocks[b]
    return (_replace(p, a, [[i], [j]]), _replace(p, a, [[j], [i]]),
            _replace(p, b, [[h], [k]]), _replace(p, b, [[k], [h]]))


# --- the presentation -------------------------------------------------------

@dataclass
class AnPresentation:
    presentation: Presentation
    cells: list
    tree: list
    # index of the first relator of each kind
    families: dict


def an_presentation(n):
    """Generators ``(C, W)``, ``(W, C)``; relators from pairs of walls and from
    codimension-2 faces paired with chambers.

    Tree generators are deleted from the words.  Relators are written in
    composition order (right to left), so they present the opposite group;
    abelianizations coincide and reversing every word gives the path-order
    presentation.
    """
    cs = chambers(n)
    ws = sorted(walls(n), key=lambda p: p.blocks)
    tree = an_tree(n)
    tset = set(tree)
    cid = cs[0]
    st = {w: source_target(w) for w in ws}

    cells = [("wc", w, cid) for w in ws if w not in tset]
    cells += [("wc", w, c) for c in cs[1:] for w in ws]
    cells += [("cw", c, w) for c in cs for w in ws if w not in tset]
    gen = {cell: i + 1 for i, cell in enumerate(cells)}

    def wc(w, c, e=1):
        g = gen.get(("wc", w, c))
        return () if g is None else (e * g,)

    def cw(c, w, e=1):
        g = gen.get(("cw", c, w))
        return () if g is None else (e * g,)

    rels, sources, families = [], [], {}
    families["wall x wall"] = 0
    supp = {w: next(b for b in w.blocks if len(b) == 2) for w in ws}
    for v in ws:
        for w in ws:
            if supp[v] == supp[w]:
                continue
            sv, tv = st[v]
            sw, tw = st[w]
            rels.append(cw(tv, w) + wc(v, sw) + cw(sv, w, -1) + wc(v, tw, -1))
            sources.append(f"({v},{w})")
    p2, p11 = classify_codim2(n) if n >= 2 else ([], [])
    p2.sort(key=lambda p: p.blocks)
    p11.sort(key=lambda p: p.blocks)
    families["p2 x chamber"] = len(rels)
    for p in p2:
        u, v, w, u2, v2, w2 = p2_walls(p)
        for c in cs:
            rels.append(wc(u, c) + wc(v, c) + wc(w, c) + wc(u2, c, -1) + wc(v2, c, -1) + wc(w2, c, -1))
            sources.append(f"({p},{c})")
    families["chamber x p2"] = len(rels)
    for p in p2:
        u, v, w, u2, v2, w2 = p2_walls(p)
        for c in cs:
            rels.append(cw(c, u) + cw(c, v) + cw(c, w) + cw(c, u2, -1) + cw(c, v2, -1) + cw(c, w2, -1))
            sources.append(f"({c},{p})")
    families["p11 x chamber"] = len(rels)
    for p in p11:
        v, v2, w, w2 = p11_walls(p)
        for c in cs:
            rels.append(wc(w, c) + wc(v, c) + wc(w2, c, -1) + wc(v2, c, -1))
            sources.append(f"({p},{c})")
    families["chamber x p11"] = len(rels)
    for p in p11:
        v, v2, w, w2 = p11_walls(p)
        for c in cs:
            rels.append(cw(c, w) + cw(c, v) + cw(c, w2, -1) + cw(c, v2, -1))
            sources.append(f"({c},{p})")
    labels = [f"({a},{b})" for _, a, b in cells]
    pres = Presentation(labels, rels, sources)
    pres.check()
    return AnPresentation(pres, cells, tree, families)


@dataclass
class AnComparison:
    """Outcome of matching the A_n presentation with the general construction."""

    general: object
    explicit: AnPresentation
    relators_match: bool
    mismatched: int


def compare_with_geometric(n, model=None):
    """Build the general presentation on the geometric A_n model with the same tree.

    Generators are matched through the fractional-part object map, with
    a sign where the geometric wall orientation disagrees with s(W) -> t(W).
    The explicit relators are reversed (they are in composition order) and
    compared with the general ones up to rotation and inversion.
    """
    if model is None:
        model = build_model(toric_face_category(coxeter_a(n)))
    fc = model.fc
    fmap = geometric_object_map(fc)
    objs = cyclic_partitions(n)
    part = [objs[k] for k in fmap]
    back = {p: f for f, p in enumerate(part)}
    graph = chamber_graph(fc)
    explicit = an_presentation(n)
    tree = sorted(back[w] for w in explicit.tree)
    general = presentation(model, tree=tree, graph=graph)
    if part[min(graph.chambers, key=lambda c: (fc.faces[c].barycenter, c))] != chambers(n)[0]:
        raise ArithmeticError("root chamber is not the identity chamber")

    sign = {}
    for e in graph.edges:
        s, _ = source_target(part[e.wall])
        sign[part[e.wall]] = 1 if part[e.tail] == s else -1
    gen_index = {x: i + 1 for i, x in enumerate(general.generator_cells)}
    to_general = {}
    for k, (kind, a, b) in enumerate(explicit.cells):
        if kind == "wc":
            x = model.object_of(back[a], back[b])
            s = sign[a]
        else:
            x = model.object_of(back[a], back[b])
            s = sign[b]
        to_general[k + 1] = s * gen_index[x]
    if sorted(abs(v) for v in to_general.values()) != list(range(1, len(gen_index) + 1)):
        raise ArithmeticError("generator sets differ")
    mapped = [tuple(to_general[abs(x)] * (1 if x > 0 else -1) for x in reversed(r))
              for r in explicit.presentation.relators]
    want = Counter(relator_key(r) for r in general.presentation.relators)
    got = Counter(relator_key(r) for r in mapped)
    diff = sum(((want - got) + (got - want)).values())
    return AnComparison(general, explicit, diff == 0, diff)
