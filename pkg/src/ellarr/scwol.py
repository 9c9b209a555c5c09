"""Finite acyclic categories (scwols): structure, constructions, nerves.

Identity morphisms are never stored.  A morphism is an index into the
parallel tuples ``sources``, ``targets`` and ``tags``; composition is an
explicit dict keyed by ``(first, second)`` pairs of composable morphisms,
written in diagrammatic order (``first`` then ``second``).
"""

import json
from collections import defaultdict
from dataclasses import dataclass

SCHEMA_VERSION = 1


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def _thaw(value):
    if isinstance(value, tuple):
        return [_thaw(v) for v in value]
    return value


def tag_key(tag):
    """Total order on tags of mixed shape."""
    return json.dumps(_thaw(tag))


class AcyclicCategory:
    """A finite category without loops, stored explicitly.

    Parameters
    ----------
    ranks, labels : sequences indexed by object
    sources, targets, tags : sequences indexed by morphism
    composition : mapping ``(m1, m2) -> m`` for every pair with
        ``targets[m1] == sources[m2]``
    """

    def __init__(self, ranks, labels, sources, targets, tags, composition):
        self.ranks = tuple(int(r) for r in ranks)
        self.labels = tuple(str(s) for s in labels)
        self.sources = tuple(sources)
        self.targets = tuple(targets)
        self.tags = tuple(tags)
        self.composition = dict(composition)
        if len(self.ranks) != len(self.labels):
            raise ValueError("ranks and labels differ in length")
        if not len(self.sources) == len(self.targets) == len(self.tags):
            raise ValueError("morphism tables differ in length")
        self._out = None
        self._in = None
        self._hom = None

    def __repr__(self):
        return (f"AcyclicCategory({self.n_objects} objects, "
                f"{self.n_morphisms} morphisms)")

    @property
    def n_objects(self):
        return len(self.ranks)

    @property
    def n_morphisms(self):
        return len(self.sources)

    def _index(self):
        out = [[] for _ in self.ranks]
        inc = [[] for _ in self.ranks]
        hom = defaultdict(list)
        for m, (s, t) in enumerate(zip(self.sources, self.targets)):
            if 0 <= s < len(out) and 0 <= t < len(out):
                out[s].append(m)
                inc[t].append(m)
            hom[s, t].append(m)
        self._out, self._in, self._hom = out, inc, dict(hom)

    def out_morphisms(self, x):
        if self._out is None:
            self._index()
        return self._out[x]

    def in_morphisms(self, x):
        if self._in is None:
            self._index()
        return self._in[x]

    def hom(self, x, y):
        if self._hom is None:
            self._index()
        return self._hom.get((x, y), [])

    def compose(self, m1, m2):
        """Composite of ``m1`` followed by ``m2``; ``None`` stands for an identity."""
        if m1 is None:
            return m2
        if m2 is None:
            return m1
        return self.composition[m1, m2]

    def rank_counts(self):
        if not self.ranks:
            return []
        counts = [0] * (max(self.ranks) + 1)
        for r in self.ranks:
            counts[r] += 1
        return counts

    def indecomposables(self):
        composite = set(self.composition.values())
        return [m for m in range(self.n_morphisms) if m not in composite]

    def factorizations(self):
        """Map each morphism to the list of pairs composing to it."""
        fac = defaultdict(list)
        for pair, m in self.composition.items():
            fac[m].append(pair)
        return fac


def is_poset(cat):
    """At most one morphism between any ordered pair of objects."""
    seen = set()
    for key in zip(cat.sources, cat.targets):
        if key in seen:
            return False
        seen.add(key)
    return True


def validate(cat):
    """Return a list of human-readable violations; empty iff ``cat`` is valid."""
    report = []
    n = cat.n_objects
    for m, (s, t) in enumerate(zip(cat.sources, cat.targets)):
        if not (0 <= s < n and 0 <= t < n):
            report.append(f"morphism {m}: endpoint out of range")
        elif s == t:
            report.append(f"morphism {m}: endomorphism on object {s}")
    if report:
        return report

    parallel = defaultdict(set)
    for m, key in enumerate(zip(cat.sources, cat.targets)):
        k = tag_key(cat.tags[m])
        if k in parallel[key]:
            report.append(f"morphism {m}: duplicate tag among parallel morphisms")
        parallel[key].add(k)

    # directed cycles among objects
    indeg = [0] * n
    succ = [set() for _ in range(n)]
    for s, t in zip(cat.sources, cat.targets):
        if t not in succ[s]:
            succ[s].add(t)
            indeg[t] += 1
    queue = [x for x in range(n) if indeg[x] == 0]
    seen = 0
    while queue:
        x = queue.pop()
        seen += 1
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if seen != n:
        report.append("reachability has a directed cycle")
        return report

    comp = cat.composition
    for (m1, m2), m in comp.items():
        if cat.targets[m1] != cat.sources[m2]:
            report.append(f"composition ({m1},{m2}) defined on a non-composable pair")
        elif not (0 <= m < cat.n_morphisms):
            report.append(f"composition ({m1},{m2}) -> {m} out of range")
        elif cat.sources[m] != cat.sources[m1] or cat.targets[m] != cat.targets[m2]:
            report.append(f"composition ({m1},{m2}) -> {m} has wrong endpoints")
    if report:
        return report
    for m1 in range(cat.n_morphisms):
        for m2 in cat.out_morphisms(cat.targets[m1]):
            if (m1, m2) not in comp:
                report.append(f"composition ({m1},{m2}) missing")
    if report:
        return report

    for m1 in range(cat.n_morphisms):
        for m2 in cat.out_morphisms(cat.targets[m1]):
            a = comp[m1, m2]
            for m3 in cat.out_morphisms(cat.targets[m2]):
                if comp[a, m3] != comp[m1, comp[m2, m3]]:
                    report.append(f"associativity fails on ({m1},{m2},{m3})")

    if n and min(cat.ranks) != 0:
        report.append("minimum rank is not 0")
    if any(r < 0 for r in cat.ranks):
        report.append("negative rank")
    for m in cat.indecomposables():
        s, t = cat.sources[m], cat.targets[m]
        if cat.ranks[t] != cat.ranks[s] + 1:
            report.append(f"indecomposable morphism {m} does not raise rank by 1")
    return report


def _shift_ranks(ranks):
    if not ranks:
        return []
    low = min(ranks)
    return [r - low for r in ranks]


def opposite(cat):
    top = max(cat.ranks) if cat.ranks else 0
    comp = {(m2, m1): m for (m1, m2), m in cat.composition.items()}
    return AcyclicCategory([top - r for r in cat.ranks], cat.labels,
                           cat.targets, cat.sources, cat.tags, comp)


def product(cat1, cat2):
    """Product category; morphisms are pairs with at most one identity."""
    n2 = cat2.n_objects
    ranks, labels = [], []
    for x in range(cat1.n_objects):
        for y in range(n2):
            ranks.append(cat1.ranks[x] + cat2.ranks[y])
            labels.append(f"({cat1.labels[x]},{cat2.labels[y]})")

    def choices(cat, x):
        return [None] + list(cat.out_morphisms(x))

    sources, targets, tags, pairs = [], [], [], []
    index = {}
    for x in range(cat1.n_objects):
        for y in range(n2):
            for a in choices(cat1, x):
                for b in choices(cat2, y):
                    if a is None and b is None:
                        continue
                    tx = x if a is None else cat1.targets[a]
                    ty = y if b is None else cat2.targets[b]
                    index[x, y, a, b] = len(sources)
                    sources.append(x * n2 + y)
                    targets.append(tx * n2 + ty)
                    tags.append((None if a is None else cat1.tags[a],
                                 None if b is None else cat2.tags[b]))
                    pairs.append((x, y, a, b))
    comp = {}
    for m1, (x, y, a1, b1) in enumerate(pairs):
        tx, ty = divmod(targets[m1], n2)
        for a2 in choices(cat1, tx):
            for b2 in choices(cat2, ty):
                if a2 is None and b2 is None:
                    continue
                m2 = index[tx, ty, a2, b2]
                comp[m1, m2] = index[x, y, cat1.compose(a1, a2), cat2.compose(b1, b2)]
    return AcyclicCategory(ranks, labels, sources, targets, tags, comp)


def full_subcategory(cat, keep):
    """Full subcategory on ``keep`` (ranks shifted so the minimum is 0)."""
    keep = sorted(set(keep))
    new = {x: i for i, x in enumerate(keep)}
    mors = [m for m in range(cat.n_morphisms)
            if cat.sources[m] in new and cat.targets[m] in new]
    mnew = {m: i for i, m in enumerate(mors)}
    comp = {(mnew[a], mnew[b]): mnew[c] for (a, b), c in cat.composition.items()
            if a in mnew and b in mnew}
    return AcyclicCategory(_shift_ranks([cat.ranks[x] for x in keep]),
                           [cat.labels[x] for x in keep],
                           [new[cat.sources[m]] for m in mors],
                           [new[cat.targets[m]] for m in mors],
                           [cat.tags[m] for m in mors], comp)


def slice_category(cat, x):
    """The slice ``cat / x``; object 0 is the identity at ``x``.

    Object ``i > 0`` is the morphism ``cat.in_morphisms(x)[i - 1]``.  The
    morphism ``mu_zeta: phi -> psi`` exists for each ``zeta`` with
    ``zeta . psi == phi`` and carries the tag of ``zeta``.
    """
    into = list(cat.in_morphisms(x))
    obj_of = {None: 0}
    for i, m in enumerate(into):
        obj_of[m] = i + 1
    ranks = [cat.ranks[x]] + [cat.ranks[cat.sources[m]] for m in into]
    labels = [f"id:{cat.labels[x]}"] + [
        f"{cat.labels[cat.sources[m]]}->{cat.labels[x]}#{m}" for m in into]

    sources, targets, tags, under = [], [], [], []
    key = {}
    for psi in [None] + into:
        if psi is None:
            zetas = [(phi, phi) for phi in into]
        else:
            zetas = [(z, cat.composition[z, psi])
                     for z in cat.in_morphisms(cat.sources[psi])]
        for zeta, phi in zetas:
            key[zeta, obj_of[psi]] = len(sources)
            sources.append(obj_of[phi])
            targets.append(obj_of[psi])
            tags.append(cat.tags[zeta])
            under.append(zeta)
    comp = {}
    by_source = defaultdict(list)
    for m, s in enumerate(sources):
        by_source[s].append(m)
    for m1, z1 in enumerate(under):
        for m2 in by_source[targets[m1]]:
            comp[m1, m2] = key[cat.composition[z1, under[m2]], targets[m2]]
    return AcyclicCategory(_shift_ranks(ranks), labels, sources, targets, tags, comp)


def _perm_is_identity(p):
    return all(i == v for i, v in enumerate(p))


def quotient_by_free_action(cat, action):
    """Quotient by a group acting freely on objects.

    ``action`` is a list of ``(object_perm, morphism_perm)`` pairs, one per
    group element, each a list mapping index -> image index.  The list must
    be closed under composition and contain the identity.
    """
    n, nm = cat.n_objects, cat.n_morphisms
    elems = [(tuple(op), tuple(mp)) for op, mp in action]
    if len(set(elems)) != len(elems):
        raise ValueError("group elements repeated")
    ident = (tuple(range(n)), tuple(range(nm)))
    if ident not in elems:
        raise ValueError("action lacks the identity element")
    elem_set = set(elems)
    for op, mp in elems:
        if sorted(op) != list(range(n)) or sorted(mp) != list(range(nm)):
            raise ValueError("group element is not a permutation")
        for m in range(nm):
            if (op[cat.sources[m]] != cat.sources[mp[m]]
                    or op[cat.targets[m]] != cat.targets[mp[m]]):
                raise ValueError("permutation data is not functorial (endpoints)")
        for (a, b), c in cat.composition.items():
            if cat.composition.get((mp[a], mp[b])) != mp[c]:
                raise ValueError("permutation data is not functorial (composition)")
        for x in range(n):
            if cat.ranks[op[x]] != cat.ranks[x]:
                raise ValueError("action does not preserve rank")
    for op1, mp1 in elems:
        for op2, mp2 in elems:
            prod = (tuple(op1[i] for i in op2), tuple(mp1[i] for i in mp2))
            if prod not in elem_set:
                raise ValueError("action is not closed under composition")
    for op, mp in elems:
        if (op, mp) != ident and any(op[x] == x for x in range(n)):
            raise ValueError("action is not free on objects")

    def orbits(size, which):
        seen, out = {}, []
        for i in range(size):
            if i in seen:
                continue
            orb = sorted({e[which][i] for e in elems})
            for j in orb:
                seen[j] = len(out)
            out.append(orb)
        return seen, out

    obj_orbit, obj_orbits = orbits(n, 0)
    mor_orbit, mor_orbits = orbits(nm, 1)
    sources = [obj_orbit[cat.sources[o[0]]] for o in mor_orbits]
    targets = [obj_orbit[cat.targets[o[0]]] for o in mor_orbits]
    tags = [cat.tags[o[0]] for o in mor_orbits]
    seen_tags = defaultdict(int)
    for k in range(len(tags)):
        seen_tags[sources[k], targets[k], tag_key(tags[k])] += 1
    tags = [t if seen_tags[sources[k], targets[k], tag_key(t)] == 1 else (t, k)
            for k, t in enumerate(tags)]
    comp = {}
    for (a, b), c in cat.composition.items():
        key = (mor_orbit[a], mor_orbit[b])
        val = mor_orbit[c]
        if comp.setdefault(key, val) != val:
            raise ValueError("induced composition is not well defined")
    return AcyclicCategory([cat.ranks[o[0]] for o in obj_orbits],
                           [cat.labels[o[0]] for o in obj_orbits],
                           sources, targets, tags, comp)


@dataclass
class ChainBasis:
    """Nerve chains per dimension.

    ``chains[0]`` lists object indices; ``chains[d]`` for ``d >= 1`` lists
    tuples of ``d`` composable morphism indices.
    """

    chains: list

    def counts(self):
        return [len(c) for c in self.chains]

    def euler_characteristic(self):
        return sum((-1) ** d * len(c) for d, c in enumerate(self.chains))


def nerve_chains(cat, max_dim=None):
    chains = [list(range(cat.n_objects))]
    level = [(m,) for m in range(cat.n_morphisms)]
    d = 1
    while level and (max_dim is None or d <= max_dim):
        chains.append(level)
        nxt = []
        for c in level:
            for m in cat.out_morphisms(cat.targets[c[-1]]):
                nxt.append(c + (m,))
        level = nxt
        d += 1
    return ChainBasis(chains)


def euler_characteristic(cat):
    return nerve_chains(cat).euler_characteristic()


def canonical_form(cat):
    """Reindex objects by (rank, label) and morphisms by (source, target, tag)."""
    objs = sorted(range(cat.n_objects), key=lambda x: (cat.ranks[x], cat.labels[x], x))
    onew = {x: i for i, x in enumerate(objs)}
    mors = sorted(range(cat.n_morphisms),
                  key=lambda m: (onew[cat.sources[m]], onew[cat.targets[m]],
                                 tag_key(cat.tags[m])))
    mnew = {m: i for i, m in enumerate(mors)}
    comp = {(mnew[a], mnew[b]): mnew[c] for (a, b), c in cat.composition.items()}
    return AcyclicCategory([cat.ranks[x] for x in objs], [cat.labels[x] for x in objs],
                           [onew[cat.sources[m]] for m in mors],
                           [onew[cat.targets[m]] for m in mors],
                           [cat.tags[m] for m in mors], comp)


def to_dict(cat):
    cat = canonical_form(cat)
    return {
        "schema": SCHEMA_VERSION,
        "objects": [{"index": i, "rank": r, "label": s}
                    for i, (r, s) in enumerate(zip(cat.ranks, cat.labels))],
        "morphisms": [{"index": m, "source": s, "target": t, "tag": _thaw(g)}
                      for m, (s, t, g) in enumerate(zip(cat.sources, cat.targets, cat.tags))],
        "composition": [[a, b, c] for (a, b), c in sorted(cat.composition.items())],
    }


def from_dict(data):
    objs = sorted(data["objects"], key=lambda o: o["index"])
    mors = sorted(data["morphisms"], key=lambda m: m["index"])
    return AcyclicCategory([o["rank"] for o in objs], [o["label"] for o in objs],
                           [m["source"] for m in mors], [m["target"] for m in mors],
                           [_freeze(m["tag"]) for m in mors],
                           {(a, b): c for a, b, c in data["composition"]})


def dumps(cat):
    return json.dumps(to_dict(cat), sort_keys=True, separators=(",", ":"))


def loads(text):
    return from_dict(json.loads(text))
