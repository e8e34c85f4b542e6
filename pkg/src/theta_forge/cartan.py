"""Weights as tuples of Cartan values x_k = lambda(h_{alpha_k}).

Only pairings with roots matter for everything computed here, so a weight is
represented by its pairings with the simple roots; roots and lattice offsets
are given in simple coordinates.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import errors
from .polynomial import Poly
from .rootdata import RootSystem, Weight


def form_matrix(rs: RootSystem) -> list:
    return [[rs.pairing(a, b) for b in rs.simple] for a in rs.simple]


def rho_values(rs: RootSystem) -> tuple:
    return rs.cartan_values(rs.rho)


def values_of(rs: RootSystem, lam) -> tuple:
    """Cartan values of a Weight, or pass a tuple through as Fractions."""
    if isinstance(lam, Weight):
        return rs.cartan_values(lam)
    return tuple(v if isinstance(v, Poly) else Fraction(v) for v in lam)


def pair(values: Sequence, sc: Sequence[int]):
    """(lambda, beta) for beta with simple coordinates sc."""
    total = 0
    for x, b in zip(values, sc):
        if b:
            total = total + x * b
    return total


def root_norm(rs: RootSystem, sc: Sequence[int]) -> Fraction:
    B = form_matrix(rs)
    return sum((Fraction(a) * b * B[i][j] for i, a in enumerate(sc) for j, b in enumerate(sc)),
               Fraction(0))


def shifted_pair(rs: RootSystem, values: Sequence, sc: Sequence[int]):
    """(lambda + rho, beta)."""
    return pair(values, sc) + pair(rho_values(rs), sc)


def shifted_coroot(rs: RootSystem, values: Sequence, sc: Sequence[int]):
    """(lambda + rho, beta^vee) for non-isotropic beta."""
    nn = root_norm(rs, sc)
    if nn == 0:
        raise errors.IsotropicCoroot("isotropic root has no coroot")
    return shifted_pair(rs, values, sc) * 2 / nn


def minus(rs: RootSystem, values: Sequence, sc: Sequence[int], times=1) -> tuple:
    """Cartan values of lambda - times * beta."""
    B = form_matrix(rs)
    return tuple(x - times * sum((Fraction(b) * B[j][k] for j, b in enumerate(sc)), Fraction(0))
                 for k, x in enumerate(values))


def dot_reflect(rs: RootSystem, values: Sequence, sc: Sequence[int]) -> tuple:
    """s_beta . lambda for even beta."""
    n = shifted_coroot(rs, values, sc)
    return minus(rs, values, sc, n)


class Hyperplane:
    """H_{gamma,m}: (lambda + rho, gamma) = m (gamma, gamma) / 2, in Cartan coordinates.

    The eliminated coordinate is the largest index k with gamma_k != 0; the
    free coordinates parametrize the hyperplane.
    """

    def __init__(self, rs: RootSystem, gamma_sc: Sequence[int], m: int = 1):
        self.rs = rs
        self.gamma = tuple(gamma_sc)
        self.m = m
        self.rank = rs.rank
        self.const = pair(rho_values(rs), self.gamma) - Fraction(m) * root_norm(rs, self.gamma) / 2
        self.eliminated = max(k for k, g in enumerate(self.gamma) if g)
        self.free = tuple(k for k in range(self.rank) if k != self.eliminated)

    def contains(self, values: Sequence) -> bool:
        return pair(values, self.gamma) + self.const == 0

    def solve_eliminated(self, values: Sequence):
        """Value of the eliminated coordinate given the others."""
        e = self.eliminated
        rest = 0
        for k in self.free:
            if self.gamma[k]:
                rest = rest + values[k] * self.gamma[k]
        return -(rest + self.const) / self.gamma[e]

    def point(self, free_values: Sequence) -> tuple:
        vals = [Fraction(0)] * self.rank
        for k, v in zip(self.free, free_values):
            vals[k] = Fraction(v)
        vals[self.eliminated] = self.solve_eliminated(vals)
        return tuple(vals)

    def free_part(self, values: Sequence) -> tuple:
        return tuple(values[k] for k in self.free)

    def linear_poly(self, ring) -> Poly:
        return ring.linear(list(self.gamma) + [0] * (ring.nvars - self.rank), self.const)

    def reduce(self, poly: Poly) -> Poly:
        """Canonical representative modulo the hyperplane ideal."""
        e = self.eliminated
        if not poly.involves(e):
            return poly
        ring = poly.ring
        sub = ring.const(-self.const / self.gamma[e])
        for k in self.free:
            if self.gamma[k]:
                sub = sub - ring.var(k) * (Fraction(self.gamma[k]) / self.gamma[e])
        return poly.substitute({e: sub})

    def reduce_homogeneous(self, poly: Poly) -> Poly:
        """Reduction of a homogeneous form by the linear part of the hyperplane."""
        e = self.eliminated
        ring = poly.ring
        sub = ring.zero()
        for k in self.free:
            if self.gamma[k]:
                sub = sub - ring.var(k) * (Fraction(self.gamma[k]) / self.gamma[e])
        return poly.substitute({e: sub})

    @property
    def eliminated_name(self) -> str:
        return self.rs.cartan_names[self.eliminated]


def rational_sequence(seed: int = 0):
    """Deterministic distinct non-integral rationals: 1/3, -2/3, 4/3, -5/3, ..."""
    k = 0
    offset = Fraction(seed, 11)
    while True:
        n = 3 * (k // 2) + 1 + (k % 2)
        sign = 1 if k % 2 == 0 else -1
        yield sign * Fraction(n, 3) + offset
        k += 1


def grid_points(nvars: int, values: Sequence):
    """Tuples over ``values`` ordered by the largest index used, then lexicographically."""
    import itertools
    if nvars == 0:
        yield ()
        return
    for top in range(len(values)):
        for idx in itertools.product(range(top + 1), repeat=nvars):
            if max(idx) == top:
                yield tuple(values[i] for i in idx)
