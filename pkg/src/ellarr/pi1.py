"""Presentations of the fundamental group of the model complex.

Words are tuples of nonzero ints: ``k`` stands for generator ``k - 1`` and
``-k`` for its inverse.  Relators are read left to right in the order the
boundary of a 2-cell is travelled.
"""

import json
from collections import deque
from dataclasses import dataclass, field

from .arrangement import chamber_graph, codim2_star
from .elliptic import verify_cw
from .homology import smith_normal_form


# --- words -----------------------------------------------------------------

def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(word):
    return tuple(-x for x in reversed(word))


def relator_key(word):
    """Canonical representative of a cyclic word up to rotation and inversion."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    cands = []
    for v in (w, invert(w)):
        cands.extend(v[i:] + v[:i] for i in range(len(v)))
    return min(cands)


# --- presentations ---------------------------------------------------------

@dataclass
class Presentation:
    generators: list
    relators: list
    # 2-cell each relator came from, when known
    sources: list = field(default_factory=list)

    def check(self):
        n = len(self.generators)
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > n:
                    raise ValueError(f"generator index {x} out of range")

    def to_text(self):
        names = [f"g{i + 1}" for i in range(len(self.generators))]
        lines = ["gens: " + " ".join(names)]
        for r in self.relators:
            lines.append(" ".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in r))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines()]
        if not lines or not lines[0].startswith("gens:"):
            raise ValueError("first line must start with 'gens:'")
        gens = lines[0][len("gens:"):].split()
        pos = {g: i + 1 for i, g in enumerate(gens)}
        rels = []
        for ln in lines[1:]:
            if not ln:
                continue
            word = []
            for tok in ln.split():
                inv = tok.endswith("^-1")
                name = tok[:-3] if inv else tok
                if name not in pos:
                    raise ValueError(f"unknown generator {name!r}")
                word.append(-pos[name] if inv else pos[name])
            rels.append(tuple(word))
        return cls(gens, rels)

    def to_dict(self):
        return {"generators": [{"name": f"g{i + 1}", "cell": g}
                               for i, g in enumerate(self.generators)],
                "relators": [[[abs(x), 1 if x > 0 else -1] for x in r]
                             for r in self.relators]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


# --- trees -----------------------------------------------------------------

def root_chamber(fc, graph):
    return min(graph.chambers, key=lambda c: (fc.faces[c].barycenter, c))


def spanning_tree_chambers(fc, graph=None):
    """Breadth-first spanning tree of the chamber graph, as a sorted list of walls."""
    graph = graph or chamber_graph(fc)
    root = root_chamber(fc, graph)
    adj = {c: [] for c in graph.chambers}
    for e in sorted(graph.edges, key=lambda e: e.wall):
        if not e.is_loop:
            adj[e.tail].append((e.wall, e.head))
            adj[e.head].append((e.wall, e.tail))
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        c = queue.popleft()
        for wall, other in adj[c]:
            if other not in seen:
                seen.add(other)
                tree.append(wall)
                queue.append(other)
    if len(seen) != len(graph.chambers):
        raise ValueError("chamber graph is not connected")
    return sorted(tree)


def one_cell_endpoints(model, graph, x):
    """Tail and head vertices of the 1-cell ``x``, oriented by its wall."""
    f, g = model.pair[x]
    fc = model.fc
    d = fc.spec.d
    if fc.faces[f].dim == d - 1:
        e = graph.edge_of_wall(f)
        return model.object_of(e.tail, g), model.object_of(e.head, g)
    e = graph.edge_of_wall(g)
    return model.object_of(f, e.tail), model.object_of(f, e.head)


def model_tree(model, tree, graph=None):
    """Spanning tree of the 1-skeleton of the model: ``(t, C0)`` and ``(C, t)`` cells."""
    fc = model.fc
    graph = graph or chamber_graph(fc)
    root = root_chamber(fc, graph)
    cells = [model.object_of(t, root) for t in tree]
    cells += [model.object_of(c, t) for c in graph.chambers for t in tree]
    return sorted(cells)


def is_spanning_tree(model, cells, graph=None):
    graph = graph or chamber_graph(model.fc)
    verts = [x for x, r in enumerate(model.cat.ranks) if r == 0]
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x in cells:
        a, b = one_cell_endpoints(model, graph, x)
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return len(cells) == len(verts) - 1


# --- the presentation ------------------------------------------------------

@dataclass
class PresentationData:
    """Presentation together with the choices it was built from."""

    presentation: Presentation
    graph: object
    tree: list
    model_tree: list
    generator_cells: list
    walk_relators: list


def _certify(model):
    report = getattr(model, "certificate", None)
    if report is None:
        report = verify_cw(model)
        model.certificate = report
    if not report.passed:
        bad = report.failures()[0]
        raise ValueError(f"model is not certified: {bad.label}: {bad.reason}")


def presentation(model, tree=None, graph=None, cross_check=True):
    """Generators are non-tree 1-cells; one relator per 2-cell.

    With ``cross_check`` every relator is compared (up to rotation and
    inversion) with the word read off by walking the boundary polygon of
    the 2-cell in the category itself.
    """
    _certify(model)
    fc = model.fc
    d = fc.spec.d
    graph = graph or chamber_graph(fc)
    if tree is None:
        tree = spanning_tree_chambers(fc, graph)
    root = root_chamber(fc, graph)
    tree_set = set(tree)
    walls = sorted(e.wall for e in graph.edges)
    chambers = sorted(graph.chambers, key=lambda c: (c != root, fc.faces[c].barycenter, c))

    gen_cells = []
    gen_cells += [model.object_of(a, root) for a in walls if a not in tree_set]
    gen_cells += [model.object_of(a, c) for c in chambers if c != root for a in walls]
    gen_cells += [model.object_of(c, a) for c in chambers for a in walls if a not in tree_set]
    gen_of = {x: i + 1 for i, x in enumerate(gen_cells)}
    labels = [model.cat.labels[x] for x in gen_cells]

    def letter(f, g, sign):
        x = model.object_of(f, g)
        k = gen_of.get(x)
        return () if k is None else (sign * k,)

    stars = {}
    rels, sources = [], []
    for x, (f, g) in enumerate(model.pair):
        if model.cat.ranks[x] != 2:
            continue
        df, dg = fc.faces[f].dim, fc.faces[g].dim
        word = ()
        if df == d - 1 and dg == d - 1:
            ea, eb = graph.edge_of_wall(f), graph.edge_of_wall(g)
            word = (letter(ea.tail, g, 1) + letter(f, eb.head, 1)
                    + letter(ea.head, g, -1) + letter(f, eb.tail, -1))
        elif df == d - 2:
            if f not in stars:
                stars[f] = codim2_star(fc, graph, f)
            for s in stars[f]:
                word += letter(s.wall, g, s.sign)
        elif dg == d - 2:
            if g not in stars:
                stars[g] = codim2_star(fc, graph, g)
            for s in stars[g]:
                word += letter(f, s.wall, s.sign)
        else:
            raise ArithmeticError(f"unexpected 2-cell {model.cat.labels[x]}")
        rels.append(word)
        sources.append(model.cat.labels[x])

    walks = []
    if cross_check:
        for x, word in zip((x for x, r in enumerate(model.cat.ranks) if r == 2), rels):
            w = boundary_walk(model, graph, x, gen_of)
            if relator_key(w) != relator_key(word):
                raise ArithmeticError(
                    f"relator of {model.cat.labels[x]} disagrees with its boundary walk")
            walks.append(w)

    pres = Presentation(labels, rels, sources)
    pres.check()
    return PresentationData(pres, graph, list(tree), model_tree(model, tree, graph),
                            gen_cells, walks)


def boundary_walk(model, graph, x, gen_of):
    """Word read along the boundary polygon of the 2-cell ``x``.

    Uses only the category: the 1-cells and vertices of the polygon are the
    morphisms into ``x`` from rank-1 and rank-0 objects.
    """
    cat = model.cat
    edges = []
    for m in cat.in_morphisms(x):
        e = cat.sources[m]
        if cat.ranks[e] != 1:
            continue
        tail, head = one_cell_endpoints(model, graph, e)
        ends = {}
        for v in cat.in_morphisms(e):
            ends.setdefault(cat.sources[v], []).append(v)
        # a loop wall gives two morphisms from the same vertex; tags tell them apart
        tail_m, head_m = _orient_ends(model, graph, e, ends, tail, head)
        edges.append((m, e, cat.compose(tail_m, m), cat.compose(head_m, m)))
    incident = {}
    for k, (_, _, t, h) in enumerate(edges):
        incident.setdefault(t, []).append(k)
        incident.setdefault(h, []).append(k)
    if any(len(v) != 2 for v in incident.values()):
        raise ArithmeticError(f"boundary of {cat.labels[x]} is not a polygon")
    word = []
    k = 0
    at = edges[0][2]
    used = set()
    while k not in used:
        used.add(k)
        _, e, t, h = edges[k]
        forward = at == t
        g = gen_of.get(e)
        if g is not None:
            word.append(g if forward else -g)
        at = h if forward else t
        k = next(j for j in incident[at] if j != k)
    if len(used) != len(edges):
        raise ArithmeticError(f"boundary of {cat.labels[x]} is not connected")
    return tuple(word)


def _orient_ends(model, graph, e, ends, tail, head):
    cat = model.cat
    fc = model.fc
    f, g = model.pair[e]
    if fc.faces[f].dim == fc.spec.d - 1:
        edge = graph.edge_of_wall(f)
        want = [(tail, (fc.cat.tags[edge.tail_morphism], None)),
                (head, (fc.cat.tags[edge.head_morphism], None))]
    else:
        edge = graph.edge_of_wall(g)
        want = [(tail, (None, fc.cat.tags[edge.tail_morphism])),
                (head, (None, fc.cat.tags[edge.head_morphism]))]
    out = []
    for obj, tag in want:
        match = [v for v in ends.get(obj, []) if cat.tags[v] == tag]
        if len(match) != 1:
            raise ArithmeticError(f"cannot orient 1-cell {cat.labels[e]}")
        out.append(match[0])
    return out


# --- simplification and abelianization ------------------------------------

def _substitute(word, g, repl):
    out = []
    for x in word:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(invert(repl))
        else:
            out.append(x)
    return free_reduce(out)


def tietze_simplify(pres, max_passes=1000):
    """Simplify with reduction, relator deletion and generator elimination.

    Generator ``g`` is eliminated through a relator in which it occurs
    exactly once; the relator is solved for ``g`` and substituted into the
    others.  Surviving generators keep their labels.
    """
    gens = list(range(1, len(pres.generators) + 1))
    rels = [cyclic_reduce(r) for r in pres.relators]
    for _ in range(max_passes):
        seen, uniq = set(), []
        for r in rels:
            key = relator_key(r)
            if key and key not in seen:
                seen.add(key)
                uniq.append(cyclic_reduce(r))
        rels = uniq
        choice = None
        for i, r in sorted(enumerate(rels), key=lambda t: (len(t[1]), t[0])):
            counts = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted(g for g, c in counts.items() if c == 1)
            if once:
                choice = (i, once[0])
                break
        if choice is None:
            break
        i, g = choice
        r = rels.pop(i)
        j = next(k for k, x in enumerate(r) if abs(x) == g)
        # r = u g^e v = 1  =>  g^e = u^-1 v^-1
        u, v = r[:j], r[j + 1:]
        repl = invert(u) + invert(v)
        if r[j] < 0:
            repl = invert(repl)
        repl = free_reduce(repl)
        rels = [cyclic_reduce(_substitute(w, g, repl)) for w in rels]
        gens.remove(g)
    renum = {g: i + 1 for i, g in enumerate(gens)}
    new_rels = [tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r) for r in rels]
    out = Presentation([pres.generators[g - 1] for g in gens], new_rels)
    out.check()
    return out


@dataclass
class Abelianization:
    rank: int
    torsion: list

    def to_dict(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}


def exponent_matrix(pres):
    n = len(pres.generators)
    rows = []
    for r in pres.relators:
        row = [0] * n
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def abelianization(pres):
    n = len(pres.generators)
    rows = [r for r in exponent_matrix(pres) if any(r)]
    factors = smith_normal_form(rows).factors if rows else []
    return Abelianization(n - len(factors), [q for q in factors if q > 1])
