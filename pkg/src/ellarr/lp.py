"""Exact rational feasibility for small linear systems.

Phase-one simplex over ``fractions.Fraction`` with Bland's rule, so every
answer is exact and the method always terminates.
"""

from fractions import Fraction


def _phase_one(rows, rhs, nvars):
    """Minimise the sum of artificials for ``rows @ y == rhs, y >= 0``.

    ``rhs`` must already be nonnegative.  Returns the optimal objective.
    """
    m = len(rows)
    if m == 0:
        return Fraction(0)
    width = nvars + m
    # tableau rows: [coeffs..., artificials..., rhs]
    tab = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(list(row) + art + [b])
    basis = [nvars + i for i in range(m)]
    # reduced cost row for min sum(artificials), expressed in nonbasics
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            cost[j] -= tab[i][j]
    for i in range(m):
        cost[nvars + i] += 1

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # unbounded below cannot happen for a sum of nonnegatives
            raise ArithmeticError("phase-one simplex unbounded")
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
        if cost[entering] != 0:
            f = cost[entering]
            cost = [a - f * b for a, b in zip(cost, tab[r])]
        basis[r] = entering
    return -cost[-1]


def feasible(eq_rows=(), eq_rhs=(), ge_rows=(), ge_rhs=()):
    """Decide whether some real ``x`` satisfies ``E x = e`` and ``G x >= g``.

    Rows are sequences of rationals (anything ``Fraction`` accepts).  The
    variables are free; they are split into positive and negative parts
    internally.
    """
    all_rows = [list(r) for r in eq_rows] + [list(r) for r in ge_rows]
    if not all_rows:
        return True
    d = len(all_rows[0])
    n_ge = len(ge_rows)
    rows, rhs = [], []
    for k, (row, b) in enumerate(zip(all_rows, list(eq_rhs) + list(ge_rhs))):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        slack = [Fraction(0)] * n_ge
        if k >= len(eq_rows):
            slack[k - len(eq_rows)] = Fraction(-1)
        full = row + [-v for v in row] + slack
        if b < 0:
            full = [-v for v in full]
            b = -b
        rows.append(full)
        rhs.append(b)
    return _phase_one(rows, rhs, 2 * d + n_ge) == 0


def sign_vector_feasible(vectors, signs):
    """True iff some ``x`` has ``sign(v_i . x) == signs[i]`` for every i.

    The cone is scaled so that strict inequalities become ``>= 1``.
    """
    eq, ge = [], []
    for v, s in zip(vectors, signs):
        if s == 0:
            eq.append(v)
        elif s > 0:
            ge.append(v)
        else:
            ge.append([-a for a in v])
    return feasible(eq, [0] * len(eq), ge, [1] * len(ge))
