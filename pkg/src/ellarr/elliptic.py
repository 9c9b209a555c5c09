"""The model category for the complement of an elliptic arrangement.

Objects are pairs ``(F, G)`` of toric faces with disjoint supports; a
morphism ``(F1, G1) -> (F2, G2)`` is a pair of face-category morphisms
``F2 -> F1`` and ``G2 -> G1`` (either may be an identity, not both).  The
rank of ``(F, G)`` is ``codim F + codim G``.
"""

from dataclasses import dataclass, field

from .isomorphism import categories_isomorphic
from .polyhedral import point_poset, poset_product, zonotope_face_poset
from .scwol import AcyclicCategory, is_poset, nerve_chains, slice_category


@dataclass
class EllipticModel:
    fc: object
    cat: AcyclicCategory
    pair: list
    cell_dim: list
    index: dict = field(repr=False, default_factory=dict)
    # CWReport once verify_cw has been run through the presentation code
    certificate: object = field(repr=False, default=None)

    @property
    def d(self):
        return self.fc.spec.d

    def object_of(self, f, g):
        return self.index[f, g]


def build_model(fc):
    fcat = fc.cat
    d = fc.spec.d
    faces = fc.faces
    pairs = [(f.id, g.id) for f in faces for g in faces if not (f.support & g.support)]
    pairs.sort(key=lambda fg: (2 * d - faces[fg[0]].dim - faces[fg[1]].dim, fg))
    index = {fg: i for i, fg in enumerate(pairs)}
    ranks = [2 * d - faces[f].dim - faces[g].dim for f, g in pairs]
    labels = [f"({fcat.labels[f]},{fcat.labels[g]})" for f, g in pairs]

    sources, targets, tags, parts = [], [], [], []
    mindex = {}
    for x, (f1, g1) in enumerate(pairs):
        for a in [None] + list(fcat.in_morphisms(f1)):
            f2 = f1 if a is None else fcat.sources[a]
            for b in [None] + list(fcat.in_morphisms(g1)):
                if a is None and b is None:
                    continue
                g2 = g1 if b is None else fcat.sources[b]
                y = index.get((f2, g2))
                if y is None:
                    continue
                mindex[x, a, b] = len(sources)
                sources.append(x)
                targets.append(y)
                tags.append((None if a is None else fcat.tags[a],
                             None if b is None else fcat.tags[b]))
                parts.append((a, b))
    out = [[] for _ in pairs]
    for m, s in enumerate(sources):
        out[s].append(m)
    comp = {}
    for m1, (a1, b1) in enumerate(parts):
        x = sources[m1]
        for m2 in out[targets[m1]]:
            a2, b2 = parts[m2]
            comp[m1, m2] = mindex[x, fcat.compose(a2, a1), fcat.compose(b2, b1)]
    cat = AcyclicCategory(ranks, labels, sources, targets, tags, comp)
    return EllipticModel(fc, cat, pairs, ranks, index)


def f_vector(model):
    return model.cat.rank_counts()


def euler_characteristic(model):
    return sum((-1) ** k * c for k, c in enumerate(f_vector(model)))


def nerve_euler_characteristic(model):
    return nerve_chains(model.cat).euler_characteristic()


def zonotope_oracle(fc, face_id):
    """Face poset of the zonotope of the normals through a lift of the face."""
    supp = sorted(fc.faces[face_id].support)
    if not supp:
        return point_poset()
    return zonotope_face_poset([fc.spec.columns[j] for j in supp])


@dataclass
class CellCheck:
    obj: int
    label: str
    ok: bool
    reason: str = ""


@dataclass
class CWReport:
    checks: list

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def verify_cw(model):
    """Compare every slice of the model with the zonotope-product oracle."""
    zono = {}

    def oracle_for(f):
        key = tuple(sorted(model.fc.faces[f].support))
        if key not in zono:
            zono[key] = zonotope_oracle(model.fc, f)
        return zono[key]

    products = {}
    checks = []
    cat = model.cat
    for x, (f, g) in enumerate(model.pair):
        s = slice_category(cat, x)
        label = cat.labels[x]
        if not is_poset(s):
            checks.append(CellCheck(x, label, False, "slice is not a poset"))
            continue
        key = (tuple(sorted(model.fc.faces[f].support)), tuple(sorted(model.fc.faces[g].support)))
        if key not in products:
            products[key] = poset_product(oracle_for(f), oracle_for(g)).to_category()
        oracle = products[key]
        if max(oracle.ranks) != cat.ranks[x]:
            checks.append(CellCheck(x, label, False, "oracle dimension differs from cell rank"))
            continue
        if categories_isomorphic(s, oracle) is None:
            checks.append(CellCheck(x, label, False, "slice not isomorphic to zonotope product"))
        else:
            checks.append(CellCheck(x, label, True))
    return CWReport(checks)
