"""Isomorphism search for finite acyclic categories and posets.

Objects are matched by colour refinement followed by backtracking on
hom-set sizes.  Morphisms are then matched hom-set by hom-set: only
indecomposables are branched on, composites are forced by composition and
checked for consistency as soon as both factors are placed.
"""

import sys
from collections import Counter, defaultdict
from dataclasses import dataclass


@dataclass
class Isomorphism:
    objects: list
    morphisms: list


def _hom_sizes(cat):
    hs = Counter(zip(cat.sources, cat.targets))
    nbr = [set() for _ in range(cat.n_objects)]
    for s, t in hs:
        nbr[s].add(t)
        nbr[t].add(s)
    return hs, nbr


def _refine(cats):
    """Joint colour refinement; returns one colour list per category."""
    colours = []
    for cat in cats:
        colours.append([(cat.ranks[x], len(cat.in_morphisms(x)), len(cat.out_morphisms(x)))
                        for x in range(cat.n_objects)])
    n_classes = -1
    while True:
        sigs = []
        for cat, col in zip(cats, colours):
            hs = Counter(zip(cat.sources, cat.targets))
            outs = defaultdict(list)
            ins = defaultdict(list)
            for (s, t), k in hs.items():
                outs[s].append((k, col[t]))
                ins[t].append((k, col[s]))
            sigs.append([(col[x], tuple(sorted(outs[x])), tuple(sorted(ins[x])))
                         for x in range(cat.n_objects)])
        table = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig}))}
        colours = [[table[s] for s in sig] for sig in sigs]
        k = len(table)
        if k == n_classes:
            return colours
        n_classes = k


def _match_morphisms(cat1, cat2, fobj):
    nm = cat1.n_morphisms
    img = [None] * nm
    used = [False] * cat2.n_morphisms
    indec1 = cat1.indecomposables()
    indec2 = set(cat2.indecomposables())
    order = sorted(indec1, key=lambda m: (-cat1.ranks[cat1.sources[m]], m))
    comp1, comp2 = cat1.composition, cat2.composition

    def assign(m, v, trail):
        if used[v]:
            return False
        if (cat2.sources[v] != fobj[cat1.sources[m]]
                or cat2.targets[v] != fobj[cat1.targets[m]]):
            return False
        img[m] = v
        used[v] = True
        trail.append(m)
        return True

    def propagate(start, trail):
        queue = [start]
        while queue:
            a = queue.pop()
            pairs = [(a, b) for b in cat1.out_morphisms(cat1.targets[a])]
            pairs += [(b, a) for b in cat1.in_morphisms(cat1.sources[a])]
            for p, q in pairs:
                if img[p] is None or img[q] is None:
                    continue
                c = comp1[p, q]
                v = comp2[img[p], img[q]]
                if img[c] is None:
                    if not assign(c, v, trail):
                        return False
                    queue.append(c)
                elif img[c] != v:
                    return False
        return True

    def undo(trail, upto):
        while len(trail) > upto:
            m = trail.pop()
            used[img[m]] = False
            img[m] = None

    trail = []
    # explicit stack of (position in order, candidate list, next candidate, trail mark)
    stack = []
    i = 0
    while True:
        while i < len(order) and img[order[i]] is not None:
            i += 1
        if i == len(order):
            if all(v is not None for v in img):
                return list(img)
            frame = None
        else:
            m = order[i]
            cands = [v for v in cat2.hom(fobj[cat1.sources[m]], fobj[cat1.targets[m]])
                     if v in indec2]
            frame = [i, cands, 0, len(trail)]
            stack.append(frame)
        # advance the top frame to its next viable candidate, backtracking as needed
        while stack:
            frame = stack[-1]
            pos, cands, k, mark = frame
            undo(trail, mark)
            m = order[pos]
            placed = False
            while k < len(cands):
                v = cands[k]
                k += 1
                if assign(m, v, trail) and propagate(m, trail):
                    placed = True
                    break
                undo(trail, mark)
            frame[2] = k
            if placed:
                i = pos + 1
                break
            stack.pop()
        else:
            return None


def categories_isomorphic(cat1, cat2, object_map=None):
    """Find an isomorphism ``cat1 -> cat2`` or return ``None``.

    ``object_map`` optionally fixes the object bijection; only morphisms
    are then searched.  The result is deterministic.
    """
    if (cat1.n_objects != cat2.n_objects or cat1.n_morphisms != cat2.n_morphisms
            or len(cat1.composition) != len(cat2.composition)
            or sorted(cat1.ranks) != sorted(cat2.ranks)):
        return None
    hs1, nbr1 = _hom_sizes(cat1)
    hs2, _ = _hom_sizes(cat2)
    if sorted(hs1.values()) != sorted(hs2.values()):
        return None
    n = cat1.n_objects

    if object_map is not None:
        fobj = list(object_map)
        if sorted(fobj) != list(range(n)):
            return None
        for (s, t), k in hs1.items():
            if hs2.get((fobj[s], fobj[t]), 0) != k:
                return None
        if any(cat1.ranks[x] != cat2.ranks[fobj[x]] for x in range(n)):
            return None
        mors = _match_morphisms(cat1, cat2, fobj)
        return None if mors is None else Isomorphism(fobj, mors)

    col1, col2 = _refine([cat1, cat2])
    if Counter(col1) != Counter(col2):
        return None
    classes = defaultdict(list)
    for y, c in enumerate(col2):
        classes[c].append(y)
    class_size = Counter(col1)

    order, placed = [], set()
    while len(order) < n:
        best = max((x for x in range(n) if x not in placed),
                   key=lambda x: (sum(1 for y in nbr1[x] if y in placed),
                                  -class_size[col1[x]], -x))
        order.append(best)
        placed.add(best)

    fobj = [None] * n
    taken = [False] * n
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 1000))

    def consistent(x, y):
        for x2 in nbr1[x]:
            y2 = fobj[x2]
            if y2 is None:
                continue
            if hs1.get((x, x2), 0) != hs2.get((y, y2), 0):
                return False
            if hs1.get((x2, x), 0) != hs2.get((y2, y), 0):
                return False
        return True

    def search(i):
        if i == n:
            return _match_morphisms(cat1, cat2, fobj)
        x = order[i]
        for y in classes[col1[x]]:
            if taken[y] or not consistent(x, y):
                continue
            fobj[x] = y
            taken[y] = True
            res = search(i + 1)
            if res is not None:
                return res
            fobj[x] = None
            taken[y] = False
        return None

    try:
        mors = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if mors is None:
        return None
    return Isomorphism(list(fobj), mors)


def check_isomorphism(cat1, cat2, iso):
    """Verify that ``iso`` is a functor and a bijection; returns a bool."""
    fo, fm = iso.objects, iso.morphisms
    if sorted(fo) != list(range(cat2.n_objects)) or sorted(fm) != list(range(cat2.n_morphisms)):
        return False
    for m in range(cat1.n_morphisms):
        if cat2.sources[fm[m]] != fo[cat1.sources[m]] or cat2.targets[fm[m]] != fo[cat1.targets[m]]:
            return False
    for x in range(cat1.n_objects):
        if cat1.ranks[x] != cat2.ranks[fo[x]]:
            return False
    for (a, b), c in cat1.composition.items():
        if cat2.composition.get((fm[a], fm[b])) != fm[c]:
            return False
    return True
