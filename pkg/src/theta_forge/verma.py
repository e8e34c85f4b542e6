"""Partitions, partition functions, Verma weight spaces and Gram matrices.

A weight offset ``eta`` is a tuple of simple-root coordinates. A Verma vector
is a dict ``{partition: coefficient}`` standing for sum c_pi e_{-pi} v_lambda.
A highest weight is passed around as its tuple of Cartan values
(lambda(h_a), lambda(h_b), ...); entries may be Fractions or polynomials in T.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import errors
from .linalg import nullspace
from .pbw import UAlgebra, _add_into
from .polynomial import Poly


@dataclass(frozen=True)
class FormalCharacter:
    depth: int
    table: dict = field(hash=False)

    def __getitem__(self, eta) -> int:
        return self.table.get(tuple(eta), 0)

    def to_json(self) -> dict:
        return {"schema": 1, "depth": self.depth,
                "entries": [[list(eta), n] for eta, n in sorted(self.table.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "FormalCharacter":
        return cls(data["depth"], {tuple(eta): n for eta, n in data["entries"]})


@dataclass
class GramMatrix:
    eta: tuple
    basis: list
    entries: list   # rows of Poly in T (or Fractions)

    @property
    def size(self) -> int:
        return len(self.basis)


def etas_up_to(rank: int, depth: int) -> list:
    """All eta in Q^+ of height <= depth, sorted by height then lexicographically."""
    out = [eta for eta in itertools.product(range(depth + 1), repeat=rank) if sum(eta) <= depth]
    return sorted(out, key=lambda e: (sum(e), e))


def _root_indices(alg: UAlgebra, roots) -> frozenset:
    out = set()
    for r in roots or ():
        out.add(r if isinstance(r, int) else alg.rs.index(alg.rs.root(r)))
    return frozenset(out)


def check_orthogonal_isotropic(alg: UAlgebra, X) -> frozenset:
    idx = _root_indices(alg, X)
    rs = alg.rs
    for i in idx:
        if not rs.positive[i].isotropic:
            raise errors.NotOrthogonalIsotropic(f"{rs.positive[i].name} is not isotropic")
    for i, j in itertools.combinations(sorted(idx), 2):
        if rs.pairing(rs.positive[i], rs.positive[j]) != 0:
            raise errors.NotOrthogonalIsotropic(
                f"{rs.positive[i].name} and {rs.positive[j].name} are not orthogonal")
    return idx


_PART_MEMO: dict = {}


def partitions(alg: UAlgebra, eta: Sequence[int], X: Iterable = ()) -> list:
    """P_X(eta) as exponent tuples, sorted in decreasing lexicographic order."""
    eta = tuple(int(e) for e in eta)
    excluded = _root_indices(alg, X)
    key = (id(alg), eta, excluded)
    memo = _PART_MEMO.get(key)
    if memo is not None:
        return memo
    if any(e < 0 for e in eta):
        _PART_MEMO[key] = []
        return []
    roots = alg.simple_coords
    n = alg.nroots
    out = []
    exps = [0] * n

    def rec(i, rem):
        if i == n:
            if not any(rem):
                out.append(tuple(exps))
            return
        r = roots[i]
        if i in excluded:
            cap = 0
        else:
            cap = min((rem[j] // c for j, c in enumerate(r) if c), default=0)
            if alg.odd[i]:
                cap = min(cap, 1)
        for k in range(cap, -1, -1):
            exps[i] = k
            rec(i + 1, tuple(a - k * c for a, c in zip(rem, r)))
        exps[i] = 0

    rec(0, eta)
    out.sort(reverse=True)
    _PART_MEMO[key] = out
    return out


def partition_count(alg: UAlgebra, eta, X=()) -> int:
    return len(partitions(alg, eta, X))


def p_x_character(alg: UAlgebra, X: Iterable, depth: int, cross_check: bool = True) -> FormalCharacter:
    """Truncated expansion of prod_{odd, not in X}(1+e^-a) / prod_{even}(1-e^-a)."""
    excluded = check_orthogonal_isotropic(alg, X)
    rank = alg.rank
    series = {(0,) * rank: 1}

    def within(eta):
        return sum(eta) <= depth

    for i, r in enumerate(alg.rs.positive):
        sc = r.simple
        if r.odd:
            if i in excluded:
                continue
            nxt = dict(series)
            for eta, c in series.items():
                e2 = tuple(a + b for a, b in zip(eta, sc))
                if within(e2):
                    nxt[e2] = nxt.get(e2, 0) + c
        else:
            nxt = {}
            for eta, c in series.items():
                k = 0
                e2 = eta
                while within(e2):
                    nxt[e2] = nxt.get(e2, 0) + c
                    k += 1
                    e2 = tuple(a + k * b for a, b in zip(eta, sc))
        series = nxt
    char = FormalCharacter(depth, {eta: c for eta, c in series.items() if c})
    if cross_check:
        for eta in etas_up_to(rank, depth):
            if char[eta] != partition_count(alg, eta, excluded):
                raise errors.VerificationFailure(f"product expansion disagrees at {eta}")
    return char


# -- Verma module arithmetic ---------------------------------------------------

def symbolic_values(alg: UAlgebra) -> tuple:
    return tuple(alg.ring.var(k) for k in range(alg.rank))


def deformed_values(alg: UAlgebra, lam_values: Sequence, xi_values: Sequence) -> tuple:
    """Cartan values of lambda + T xi as polynomials in T."""
    T = alg.ring.var(alg.t_index)
    return tuple(alg.ring.const(a) + T * Fraction(b) for a, b in zip(lam_values, xi_values))


def _eval(poly: Poly, values, alg: UAlgebra):
    if values is None:
        return poly
    vals = list(values) + [alg.ring.var(alg.t_index)]
    return poly.evaluate(vals)


class RaiseCache:
    """Raising operators evaluated at a fixed highest weight."""

    def __init__(self, alg: UAlgebra, values):
        self.alg = alg
        self.values = None if values is None else tuple(values)
        self._memo: dict = {}

    def column(self, s: int, mono: tuple) -> dict:
        key = (s, mono)
        col = self._memo.get(key)
        if col is None:
            raw = self.alg.raise_vector(s, mono)
            if self.values is None:
                col = raw
            else:
                col = {}
                for m, p in raw.items():
                    _add_into(col, m, _eval(p, self.values, self.alg))
            self._memo[key] = col
        return col

    def apply(self, s: int, vec: Mapping) -> dict:
        out: dict = {}
        for mono, c in vec.items():
            for m, v in self.column(s, mono).items():
                _add_into(out, m, v * c)
        return out


def apply_lowering(alg: UAlgebra, u: Mapping, vec: Mapping) -> dict:
    """u . vec for u in U(n^-) with coefficients independent of lambda."""
    return alg.neg_product(u, vec)


def apply_theta(alg: UAlgebra, theta: Mapping, vec: Mapping, weight_values: Sequence) -> dict:
    """theta(mu) . vec where vec has weight mu, given by its Cartan values.

    ``theta`` maps partitions to polynomials in the Cartan variables (and
    possibly T); they are evaluated at ``weight_values``.
    """
    vals = list(weight_values) + [alg.ring.var(alg.t_index)]
    u = {}
    for mono, h in theta.items():
        v = h.evaluate(vals) if isinstance(h, Poly) else h
        if v:
            u[mono] = v
    return alg.neg_product(u, vec)


def shifted_values(alg: UAlgebra, values: Sequence, eta: Sequence[int]) -> tuple:
    """Cartan values of lambda - eta (eta in simple coordinates)."""
    rs = alg.rs
    out = []
    for k, s in enumerate(rs.simple):
        shift = sum((Fraction(c) * rs.pairing(s, t) for c, t in zip(eta, rs.simple)), Fraction(0))
        out.append(values[k] - shift)
    return tuple(out)


def singular_vectors(alg: UAlgebra, lam_values: Sequence, eta: Sequence[int]) -> list:
    """Basis of vectors of weight lambda - eta killed by every simple raising operator."""
    basis = partitions(alg, eta)
    if not basis:
        return []
    cache = RaiseCache(alg, lam_values)
    rows: dict = {}
    for j, mono in enumerate(basis):
        for s in alg.rs.simple_index:
            for m, v in cache.column(s, mono).items():
                rows.setdefault((s, m), [Fraction(0)] * len(basis))[j] = _as_fraction(v)
    ns = nullspace(list(rows.values()), len(basis))
    return [{mono: c for mono, c in zip(basis, v) if c} for v in ns]


def _as_fraction(v):
    if isinstance(v, Poly):
        if not v.is_constant():
            raise errors.UnevaluatedVariable("expected a numeric highest weight")
        return v.constant_value()
    return Fraction(v)


def gram_rows(alg: UAlgebra, values, eta: Sequence[int]) -> list:
    """Rows <e_{-pi} v, e_{-pi'} v> for pi, pi' in P(eta); <v, v> = 1."""
    basis = partitions(alg, eta)
    cache = RaiseCache(alg, values)
    prefix_memo: dict = {(): [{m: 1} for m in basis]}

    def state(prefix):
        got = prefix_memo.get(prefix)
        if got is None:
            prev = state(prefix[:-1])
            got = [cache.apply(prefix[-1], vec) for vec in prev]
            prefix_memo[prefix] = got
        return got

    empty = alg.empty
    zero = 0 if values is not None and not isinstance(values[0], Poly) else alg.ring.zero()
    rows = []
    for mono in basis:
        vecs = state(tuple(alg.letters(mono)))
        rows.append([vec.get(empty, zero) for vec in vecs])
    return rows


def gram_matrix(alg: UAlgebra, lam_values: Sequence, xi_values: Sequence, eta) -> GramMatrix:
    """Gram matrix of the contravariant form at highest weight lambda + T xi."""
    vals = deformed_values(alg, lam_values, xi_values)
    rows = gram_rows(alg, vals, eta)
    ring = alg.ring
    rows = [[v if isinstance(v, Poly) else ring.const(v) for v in row] for row in rows]
    return GramMatrix(tuple(eta), partitions(alg, eta), rows)


def vector_rank(vectors: Sequence[Mapping], basis: Sequence) -> int:
    from .linalg import rank
    rows = [[_as_fraction(v.get(m, 0)) for m in basis] for v in vectors]
    rows = [r for r in rows if any(r)]
    return rank(rows) if rows else 0
