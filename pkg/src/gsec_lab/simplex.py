"""Dense exact-rational simplex (Bland's rule) and a small Gaussian solver.

Solves max c.x subject to A x <= b, x >= 0 with b >= 0, so the slack basis
is feasible and no phase-1 is needed.  All arithmetic is `Fraction`; Bland's
anti-cycling rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GsecLabError

ZERO = Fraction(0)
ONE = Fraction(1)


class Unbounded(GsecLabError):
    """The LP has unbounded objective (never happens on [0,1]^E boxes)."""


def simplex_max(c, A, b):
    """Return (optimal value, optimal x) for max c.x, Ax <= b, x >= 0.

    Requires b >= 0.  Deterministic: Bland picks the smallest eligible
    entering index and breaks ratio ties by smallest basic variable.
    """
    n = len(c)
    m = len(A)
    if n == 0:
        return ZERO, []
    for bi in b:
        if bi < 0:
            raise ValueError("simplex_max needs b >= 0")
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [ZERO] * m + [Fraction(b[i])]
        row[n + i] = ONE
        rows.append(row)
    z = [Fraction(x) for x in c] + [ZERO] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        enter = next((j for j in range(n + m) if z[j] > 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if (best is None or ratio < best
                        or (ratio == best and basis[i] < basis[leave])):
                    best = ratio
                    leave = i
        if leave is None:
            raise Unbounded("objective unbounded above")
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        pivot_row = rows[leave]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                factor = rows[i][enter]
                rows[i] = [x - factor * y for x, y in zip(rows[i], pivot_row)]
        factor = z[enter]
        z = [x - factor * y for x, y in zip(z, pivot_row)]
        basis[leave] = enter

    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    return -z[-1], x


def gauss_solve(A, b):
    """Solve the square exact system A x = b; None when singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col]
        M[col] = [x / inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][-1] for r in range(n)]
