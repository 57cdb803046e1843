"""Brute-force references that share no code path with the library.

Everything here works from first principles: explicit iteration of the
map, dense matrices of the cohomological operator, grid minimisation.
"""

from fractions import Fraction
from itertools import permutations

import numpy as np


def brute_period(images):
    n = len(images)
    state = list(range(n))
    q = 0
    while True:
        state = [images[s] for s in state]
        q += 1
        if state == list(range(n)):
            return q


def brute_rotation_period(alpha):
    x, q = Fraction(0), 0
    while True:
        x = (x + alpha) % 1
        q += 1
        if x == 0:
            return q


def operator_matrix(images):
    """Dense matrix A with (A u)_i = u_{f(i)} - u_i."""
    n = len(images)
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        A[i][images[i]] += 1
        A[i][i] -= 1
    return A


def row_echelon(rows):
    """Row-reduce a list of Fraction rows; returns the nonzero pivot rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix):
    return len(row_echelon(matrix)[0])


class ColumnSpace:
    """Membership test for the column space of a Fraction matrix."""

    def __init__(self, matrix):
        n = len(matrix)
        cols = [[matrix[i][j] for i in range(n)] for j in range(len(matrix[0]))]
        self.basis, self.pivots = row_echelon(cols) if cols else ([], [])

    def contains(self, vec):
        v = list(vec)
        for row, c in zip(self.basis, self.pivots):
            if v[c] != 0:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return all(x == 0 for x in v)

    @property
    def rank(self):
        return len(self.basis)


def cumulative_solve(images, phi, x0):
    """Walk the cycle of x0 with u(f^k x0) = sum_{i<k} phi(f^i x0).

    Returns (u on the cycle, closing defect).  The defect is the full
    cycle sum; zero exactly when the walk closes up.
    """
    u = {x0: Fraction(0)}
    x, acc = x0, Fraction(0)
    while True:
        acc += phi[x]
        x = images[x]
        if x == x0:
            return u, acc
        u[x] = acc


def cycle_lists(images):
    seen, out = set(), []
    for s in range(len(images)):
        if s in seen:
            continue
        c, x = [], s
        while x not in seen:
            seen.add(x)
            c.append(x)
            x = images[x]
        out.append(c)
    return out


def grid_quotient_norm(images, phi, rounds=60, width=41):
    """min over per-cycle constants c of max |phi + c| by grid refinement.

    Each cycle is an independent one-dimensional convex problem; the grid
    around the current best point shrinks geometrically.
    """
    worst = 0.0
    for cyc in cycle_lists(images):
        vals = np.array([float(phi[i]) for i in cyc])
        span = float(np.max(np.abs(vals))) + 1.0
        center = 0.0
        best = None
        for _ in range(rounds):
            cs = center + np.linspace(-span, span, width)
            obj = np.max(np.abs(vals[None, :] + cs[:, None]), axis=1)
            k = int(np.argmin(obj))
            center, best = cs[k], obj[k]
            span *= 4.0 / width
        worst = max(worst, float(best))
    return worst


def all_permutations(max_size):
    for size in range(1, max_size + 1):
        for p in permutations(range(size)):
            yield p


def tent_value(x, center, radius, weight):
    t = abs(x - center) % 1
    d = min(t, 1 - t)
    return weight * max(Fraction(0), (radius - d) / radius)


def float_grid_values(bumps, offset, grid):
    xs = np.arange(grid) / grid
    vals = np.full(grid, float(offset))
    for c, r, w in bumps:
        t = np.abs(xs - float(c)) % 1.0
        d = np.minimum(t, 1.0 - t)
        vals += float(w) * np.maximum(0.0, 1.0 - d / float(r))
    return vals
