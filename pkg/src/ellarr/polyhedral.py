"""Zonotope face posets from covectors, poset products, poset isomorphism.

A zonotope's face lattice is the order dual of the covector poset of the
central arrangement whose normals are its generators: the zero covector is
the whole zonotope and the topes are its vertices.
"""

from dataclasses import dataclass

from .isomorphism import categories_isomorphic
from .linalg import rank as matrix_rank
from .lp import sign_vector_feasible
from .scwol import AcyclicCategory

_SIGN_CHAR = {-1: "-", 0: "0", 1: "+"}


def covectors(generators):
    """All sign vectors ``(sign(g_1.x), ..., sign(g_k.x))`` for real ``x``.

    Enumerated by a prefix search: a partial sign vector that is already
    infeasible on its first entries cannot be extended, so its subtree is
    skipped.  Feasibility is decided exactly.
    """
    gens = [tuple(int(v) for v in g) for g in generators]
    if not gens:
        raise ValueError("at least one generator required")
    if any(all(v == 0 for v in g) for g in gens):
        raise ValueError("zero vector among generators")
    found = []
    stack = [()]
    while stack:
        prefix = stack.pop()
        if len(prefix) == len(gens):
            found.append(prefix)
            continue
        k = len(prefix)
        for s in (1, 0, -1):
            cand = prefix + (s,)
            if sign_vector_feasible(gens[:k + 1], cand):
                stack.append(cand)
    return sorted(found)


def compose_signs(x, y):
    """Sign-vector composition: ``x`` where nonzero, else ``y``."""
    return tuple(a if a != 0 else b for a, b in zip(x, y))


def conforms(y, x):
    """``y <= x`` in the covector order: every nonzero entry of y agrees with x."""
    return all(b == 0 or b == a for a, b in zip(x, y))


@dataclass
class FacePoset:
    """Graded poset given by ranks and its cover relations ``(lower, upper)``."""

    ranks: list
    labels: list
    covers: list

    def __len__(self):
        return len(self.ranks)

    def maxima(self):
        has_upper = {a for a, _ in self.covers}
        return [x for x in range(len(self.ranks)) if x not in has_upper]

    def is_graded(self):
        return all(self.ranks[b] == self.ranks[a] + 1 for a, b in self.covers)

    def to_category(self):
        """Poset as an acyclic category with one morphism per strict relation."""
        n = len(self.ranks)
        up = [[] for _ in range(n)]
        for a, b in self.covers:
            up[a].append(b)
        above = []
        for x in range(n):
            seen, stack = set(), list(up[x])
            while stack:
                y = stack.pop()
                if y not in seen:
                    seen.add(y)
                    stack.extend(up[y])
            above.append(sorted(seen))
        sources, targets, index = [], [], {}
        for x in range(n):
            for y in above[x]:
                index[x, y] = len(sources)
                sources.append(x)
                targets.append(y)
        comp = {}
        for (x, y), m1 in index.items():
            for z in above[y]:
                comp[m1, index[y, z]] = index[x, z]
        return AcyclicCategory(self.ranks, self.labels, sources, targets,
                               [None] * len(sources), comp)


def point_poset():
    return FacePoset([0], ["pt"], [])


def zonotope_face_poset(generators):
    """Face poset of the zonotope generated by ``generators``, graded by dimension."""
    gens = [tuple(int(v) for v in g) for g in generators]
    covs = covectors(gens)
    ranks = []
    for x in covs:
        zero = [g for g, s in zip(gens, x) if s == 0]
        ranks.append(matrix_rank(zero) if zero else 0)
    by_rank = {}
    for i, r in enumerate(ranks):
        by_rank.setdefault(r, []).append(i)
    covers = []
    for i, x in enumerate(covs):
        for j in by_rank.get(ranks[i] + 1, []):
            # face(x) is contained in face(y) iff y conforms to x
            if conforms(covs[j], x):
                covers.append((i, j))
    labels = ["".join(_SIGN_CHAR[s] for s in x) for x in covs]
    return FacePoset(ranks, labels, covers)


def poset_product(p1, p2):
    n2 = len(p2)
    ranks, labels, covers = [], [], []
    for a in range(len(p1)):
        for b in range(n2):
            ranks.append(p1.ranks[a] + p2.ranks[b])
            labels.append(f"({p1.labels[a]},{p2.labels[b]})")
    for a, a2 in p1.covers:
        for b in range(n2):
            covers.append((a * n2 + b, a2 * n2 + b))
    for b, b2 in p2.covers:
        for a in range(len(p1)):
            covers.append((a * n2 + b, a * n2 + b2))
    return FacePoset(ranks, labels, sorted(covers))


def poset_isomorphic(p1, p2):
    """Isomorphism between two posets (``FacePoset`` or poset-shaped categories)."""
    c1 = p1.to_category() if isinstance(p1, FacePoset) else p1
    c2 = p2.to_category() if isinstance(p2, FacePoset) else p2
    return categories_isomorphic(c1, c2)
