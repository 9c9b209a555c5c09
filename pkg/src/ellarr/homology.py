"""Integer homology of the nerve of an acyclic category.

Chains of dimension d are tuples of d composable non-identity morphisms
(objects in dimension 0).  Face i of ``(m1, ..., md)`` drops ``m1`` for
i = 0, drops ``md`` for i = d and composes ``m_i`` with ``m_{i+1}``
otherwise; for a single morphism face 0 is its source and face 1 its
target.
"""

import heapq
from dataclasses import dataclass, field

from .scwol import nerve_chains


@dataclass
class ChainComplex:
    """Chain bases plus sparse boundaries.

    ``boundaries[d]`` (d >= 1) is a list of columns, one per d-chain; each
    column maps a (d-1)-chain index to its coefficient.
    """

    chains: list
    boundaries: list = field(repr=False)

    @property
    def top(self):
        return len(self.chains) - 1

    def counts(self):
        return [len(c) for c in self.chains]

    def shape(self, d):
        return (len(self.chains[d - 1]), len(self.chains[d]))

    def dense(self, d):
        rows, cols = self.shape(d)
        out = [[0] * cols for _ in range(rows)]
        for j, col in enumerate(self.boundaries[d]):
            for i, v in col.items():
                out[i][j] = v
        return out

    def triplets(self, d):
        return sorted((i, j, v) for j, col in enumerate(self.boundaries[d])
                      for i, v in col.items())

    def dump(self):
        """Text dump: a header per dimension followed by ``row col value`` lines."""
        lines = []
        for d in range(1, self.top + 1):
            rows, cols = self.shape(d)
            lines.append(f"boundary {d} {rows} {cols}")
            lines.extend(f"{i} {j} {v}" for i, j, v in self.triplets(d))
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"counts": self.counts(),
                "boundaries": [{"dim": d, "shape": list(self.shape(d)),
                                "entries": [list(t) for t in self.triplets(d)]}
                               for d in range(1, self.top + 1)]}


def _faces(cat, chain):
    if len(chain) == 1:
        m = chain[0]
        return [cat.sources[m], cat.targets[m]]
    out = [chain[1:]]
    for i in range(len(chain) - 1):
        out.append(chain[:i] + (cat.compose(chain[i], chain[i + 1]),) + chain[i + 2:])
    out.append(chain[:-1])
    return out


def _apply(col, prev):
    acc = {}
    for i, v in col.items():
        for k, w in prev[i].items():
            acc[k] = acc.get(k, 0) + v * w
    return {k: v for k, v in acc.items() if v}


def boundary_matrices(cat, chains=None, max_dim=None):
    """Nerve chain complex of ``cat``; raises AssertionError if ∂∂ != 0."""
    if chains is None:
        chains = nerve_chains(cat, max_dim)
    bases = chains.chains if hasattr(chains, "chains") else chains
    bounds = [None]
    for d in range(1, len(bases)):
        if d == 1:
            index = None
        else:
            index = {c: i for i, c in enumerate(bases[d - 1])}
        cols = []
        for chain in bases[d]:
            col = {}
            for i, face in enumerate(_faces(cat, chain)):
                r = face if index is None else index[face]
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        bounds.append(cols)
    cx = ChainComplex([list(b) for b in bases], bounds)
    for d in range(2, len(bases)):
        prev = bounds[d - 1]
        for j, col in enumerate(bounds[d]):
            if _apply(col, prev):
                raise AssertionError(f"boundary of boundary nonzero on chain {d}:{j}")
    return cx


# --- Smith normal form with certificates (small dense matrices) -----------

def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(a, b):
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _det(m):
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass
class SmithForm:
    factors: list
    S: list
    U: list
    V: list

    def verify(self, M):
        if _matmul(_matmul(self.U, M), self.V) != self.S:
            return False
        if abs(_det(self.U)) != 1 or abs(_det(self.V)) != 1:
            return False
        m = len(self.S)
        n = len(self.S[0]) if m else 0
        for i in range(m):
            for j in range(n):
                if i != j and self.S[i][j] != 0:
                    return False
        f = self.factors
        return all(f[k + 1] % f[k] == 0 for k in range(len(f) - 1))


def smith_normal_form(M, certify=True):
    """Smith normal form ``S = U M V`` over the integers.

    Pivots are chosen of smallest magnitude; the certificates are checked
    before returning.
    """
    a = [[int(v) for v in row] for row in M]
    m = len(a)
    n = len(a[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    r = 0
    while r < min(m, n):
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        swap_rows(r, best[1])
        swap_cols(r, best[2])
        while True:
            p = a[r][r]
            for i in range(r + 1, m):
                if a[i][r]:
                    add_row(i, r, a[i][r] // p)
            for j in range(r + 1, n):
                if a[r][j]:
                    add_col(j, r, a[r][j] // p)
            cand = [(abs(a[i][r]), 0, i) for i in range(r + 1, m) if a[i][r]]
            cand += [(abs(a[r][j]), 1, j) for j in range(r + 1, n) if a[r][j]]
            if cand:
                _, kind, k = min(cand)
                if kind == 0:
                    swap_rows(r, k)
                else:
                    swap_cols(r, k)
                continue
            bad = next((i for i in range(r + 1, m) for j in range(r + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(r, bad, -1)
        if a[r][r] < 0:
            a[r] = [-x for x in a[r]]
            U[r] = [-x for x in U[r]]
        r += 1
    factors = [a[i][i] for i in range(r)]
    form = SmithForm(factors, a, U, V)
    if certify and not form.verify(M):
        raise AssertionError("Smith normal form certificate failed")
    return form


# --- sparse elimination ----------------------------------------------------

def _sparse_reduce(columns):
    """Eliminate unit pivots from a sparse column matrix.

    Returns ``(units, residual)`` where ``units`` counts the unit invariant
    factors split off and ``residual`` is the remaining columns (with at
    least one entry) as dicts.
    """
    cols = [dict(c) for c in columns]
    rows = {}
    for j, c in enumerate(cols):
        for i in c:
            rows.setdefault(i, set()).add(j)
    alive = [bool(c) for c in cols]
    heap = [(len(c), j) for j, c in enumerate(cols) if c]
    heapq.heapify(heap)
    units = 0
    while heap:
        size, j = heapq.heappop(heap)
        if not alive[j] or size != len(cols[j]):
            continue
        col = cols[j]
        piv = [i for i, v in col.items() if v in (1, -1)]
        if not piv:
            continue
        r = min(piv, key=lambda i: (len(rows[i]), i))
        pv = col[r]
        for k in sorted(rows[r] - {j}):
            other = cols[k]
            q = other[r] * pv
            for i, v in col.items():
                nv = other.get(i, 0) - q * v
                if nv:
                    if i not in other:
                        rows[i].add(k)
                    other[i] = nv
                elif i in other:
                    del other[i]
                    rows[i].discard(k)
            if other:
                heapq.heappush(heap, (len(other), k))
            else:
                alive[k] = False
        for i in col:
            rows[i].discard(j)
        alive[j] = False
        cols[j] = {}
        units += 1
    residual = [cols[j] for j in range(len(cols)) if alive[j] and cols[j]]
    return units, residual


def invariant_factors(columns):
    """Nonzero invariant factors of a sparse integer matrix given by columns.

    Unit pivots are split off sparsely; whatever is left is small and goes
    through the dense Smith form.
    """
    units, residual = _sparse_reduce(columns)
    if not residual:
        return [1] * units
    rows = sorted({i for c in residual for i in c})
    rindex = {i: k for k, i in enumerate(rows)}
    dense = [[0] * len(residual) for _ in rows]
    for j, c in enumerate(residual):
        for i, v in c.items():
            dense[rindex[i]][j] = v
    return [1] * units + smith_normal_form(dense, certify=False).factors


@dataclass
class HomologySummary:
    betti: list
    torsion: list
    chain_counts: list

    def euler_characteristic(self):
        return sum((-1) ** d * b for d, b in enumerate(self.betti))

    def to_dict(self):
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion],
                "chain_counts": list(self.chain_counts)}

    def report(self):
        lines = []
        for d, (b, t) in enumerate(zip(self.betti, self.torsion)):
            parts = []
            if b:
                parts.append("Z" if b == 1 else f"Z^{b}")
            parts.extend(f"Z/{q}" for q in t)
            lines.append(f"H_{d} = {' + '.join(parts) if parts else '0'}")
        return "\n".join(lines) + "\n"


def betti_torsion(cx):
    counts = cx.counts()
    top = len(counts) - 1
    factors = [[] for _ in range(top + 2)]
    for d in range(1, top + 1):
        factors[d] = invariant_factors(cx.boundaries[d])
    betti, torsion = [], []
    for d in range(top + 1):
        betti.append(counts[d] - len(factors[d]) - len(factors[d + 1]))
        torsion.append([q for q in factors[d + 1] if q > 1])
    return HomologySummary(betti, torsion, counts)


def homology(cat, max_dim=None):
    """Homology of the nerve; with ``max_dim`` set, degrees up to ``max_dim - 1`` are exact."""
    cx = boundary_matrices(cat, max_dim=max_dim)
    summary = betti_torsion(cx)
    if max_dim is not None and len(cx.chains) == max_dim + 1:
        # the top degree is missing the next boundary and is only an upper bound
        summary.betti = summary.betti[:max_dim]
        summary.torsion = summary.torsion[:max_dim]
    return summary
