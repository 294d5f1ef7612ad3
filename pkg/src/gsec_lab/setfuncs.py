"""Exact set functions over vertex subsets and integer RHS tables.

Everything is exact: values are `fractions.Fraction`, tables are dense
arrays indexed by vertex bitmask (desk scale keeps them at <= 256 entries).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import BadParams, OutOfRange
from .graphs import Graph, iter_bits

Rat = Fraction


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# --------------------------------------------------------------------------
# set functions g : 2^V -> Q with g(emptyset) = 0


@dataclass(frozen=True)
class XosFunction:
    """Pointwise maximum of finitely many additive weight vectors."""

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.weights:
            raise BadParams("XOS function needs at least one weight vector")
        if len({len(w) for w in self.weights}) != 1:
            raise BadParams("weight vectors must share a length")

    @property
    def n(self) -> int:
        return len(self.weights[0])

    def eval(self, mask: int) -> Fraction:
        if mask == 0:
            return Fraction(0)
        return max(sum((w[v] for v in iter_bits(mask)), Fraction(0))
                   for w in self.weights)


@dataclass(frozen=True)
class TableFunction:
    """Explicit table of rationals, indexed by vertex bitmask."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values or self.values[0] != 0:
            raise BadParams("table must be nonempty with g(emptyset) = 0")
        size = len(self.values)
        if size & (size - 1):
            raise BadParams("table length must be a power of two")

    @property
    def n(self) -> int:
        return len(self.values).bit_length() - 1

    def eval(self, mask: int) -> Fraction:
        return self.values[mask]


@dataclass(frozen=True)
class ScenarioFunction:
    """g(S) = max over finitely many demand scenarios of d(S)/Q."""

    scenarios: tuple[tuple[Fraction, ...], ...]
    Q: Fraction

    def __post_init__(self):
        if not self.scenarios:
            raise BadParams("need at least one scenario")
        if self.Q <= 0:
            raise BadParams("Q must be positive")

    @property
    def n(self) -> int:
        return len(self.scenarios[0])

    def eval(self, mask: int) -> Fraction:
        if mask == 0:
            return Fraction(0)
        return max(sum((d[v] for v in iter_bits(mask)), Fraction(0))
                   for d in self.scenarios) / self.Q


@dataclass(frozen=True)
class BudgetedRobustFunction:
    """g(S) = max demand of S over a budgeted uncertainty set, divided by Q.

    The set is {dbar + xi * dhat : 0 <= xi <= 1, sum(xi) <= gamma}; the
    maximum over S is the analytic top-floor(gamma) sum with fractional
    interpolation on the next-largest deviation.
    """

    dbar: tuple[Fraction, ...]
    dhat: tuple[Fraction, ...]
    gamma: Fraction
    Q: Fraction

    def __post_init__(self):
        if len(self.dbar) != len(self.dhat):
            raise BadParams("dbar and dhat must share a length")
        if any(x < 0 for x in self.dbar) or any(x < 0 for x in self.dhat):
            raise BadParams("dbar and dhat must be nonnegative")
        if not 0 <= self.gamma <= len(self.dbar):
            raise BadParams("gamma must lie in [0, n]")
        if self.Q <= 0:
            raise BadParams("Q must be positive")

    @property
    def n(self) -> int:
        return len(self.dbar)

    def eval(self, mask: int) -> Fraction:
        if mask == 0:
            return Fraction(0)
        base = sum((self.dbar[v] for v in iter_bits(mask)), Fraction(0))
        devs = sorted((self.dhat[v] for v in iter_bits(mask)), reverse=True)
        whole = int(self.gamma)
        frac = self.gamma - whole
        bump = sum(devs[:whole], Fraction(0))
        if frac and whole < len(devs):
            bump += frac * devs[whole]
        return (base + bump) / self.Q


SetFunction = XosFunction | TableFunction | ScenarioFunction | BudgetedRobustFunction


def xos_from_demands(d, Q) -> XosFunction:
    """The two-vector XOS max{d(S)/Q, -d(S)/Q} = |d(S)|/Q."""
    Q = as_fraction(Q)
    if Q <= 0:
        raise BadParams("Q must be positive")
    pos = tuple(as_fraction(x) / Q for x in d)
    neg = tuple(-x for x in pos)
    return XosFunction((pos, neg))


def cvrp_g(d, Q) -> XosFunction:
    """g(S) = d(S)/Q for nonnegative demands."""
    Q = as_fraction(Q)
    if Q <= 0:
        raise BadParams("Q must be positive")
    return XosFunction((tuple(as_fraction(x) / Q for x in d),))


def disjoint_pairs(n: int) -> Iterator[tuple[int, int]]:
    """All unordered pairs of disjoint nonempty vertex masks over n bits."""
    for union in range(1, 1 << n):
        sub = (union - 1) & union
        while sub:
            other = union ^ sub
            if other and sub < other:
                yield sub, other
            sub = (sub - 1) & union


def is_subadditive(g: SetFunction, host: Graph) -> tuple[bool, tuple[int, int] | None]:
    """Exhaustive disjoint-pair check g(A | B) <= g(A) + g(B).

    Returns (verdict, violating (A, B) masks or None).
    """
    vals = [g.eval(mask) for mask in range(1 << host.n)]
    for a, b in disjoint_pairs(host.n):
        if vals[a | b] > vals[a] + vals[b]:
            return False, (a, b)
    return True, None


# --------------------------------------------------------------------------
# RHS tables f : 2^V -> Z with f(emptyset) = 0 and 1 <= f(S) <= |S|


@dataclass(frozen=True)
class RhsTable:
    host: Graph
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != 1 << self.host.n:
            raise BadParams("table size must be 2^n")
        if self.values[0] != 0:
            raise BadParams("f(emptyset) must be 0")
        for mask in range(1, 1 << self.host.n):
            v = self.values[mask]
            if not 1 <= v <= mask.bit_count():
                raise BadParams(
                    f"f at mask {mask:#b} is {v}, outside 1..|S|")

    def __getitem__(self, mask: int) -> int:
        return self.values[mask]


def rhs_ones(host: Graph) -> RhsTable:
    """f == 1 on nonempty sets: plain subtour elimination constraints."""
    return RhsTable(host, (0,) + (1,) * ((1 << host.n) - 1))


def rhs_cardinality(host: Graph) -> RhsTable:
    """f(S) = |S|: the polytope collapses to the zero vector."""
    return RhsTable(host, tuple(m.bit_count() for m in range(1 << host.n)))


def rhs_from_g(g: SetFunction, host: Graph) -> RhsTable:
    """f(S) = max(1, ceil(g(S))), after checking g(S) <= |S| everywhere."""
    values = [0] * (1 << host.n)
    for mask in range(1, 1 << host.n):
        gv = g.eval(mask)
        if gv > mask.bit_count():
            raise OutOfRange(mask, gv)
        values[mask] = max(1, math.ceil(gv))
    return RhsTable(host, tuple(values))


def pointwise_leq(a, b) -> bool:
    """a(S) <= b(S) for every subset; accepts RhsTable or raw sequences."""
    av = a.values if hasattr(a, "values") else a
    bv = b.values if hasattr(b, "values") else b
    if len(av) != len(bv):
        raise BadParams("tables must share a host")
    return all(x <= y for x, y in zip(av, bv))
