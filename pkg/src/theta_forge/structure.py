"""Exact structure constants from matrix realizations.

Basis labels used throughout the package:

* ``("n", i)``  root vector e_{-gamma_i} for the i-th positive root,
* ``("p", i)``  root vector e_{gamma_i},
* ``("h", k)``  Cartan element h_{alpha_k} for the k-th simple root.

Root vectors are scaled so that [e_gamma, e_{-gamma}] = h_gamma, where
beta(h_gamma) = (gamma, beta).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import errors
from .linalg import nullspace, solve_unique
from .rootdata import RootSystem

Matrix = dict  # sparse: (row, col) -> Fraction


@dataclass(frozen=True)
class BasisElement:
    kind: str          # "n", "p" or "h"
    index: int
    matrix: tuple      # sorted ((row, col), value) pairs
    odd: bool

    @property
    def label(self):
        return (self.kind, self.index)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    by_row: dict = {}
    for (i, j), v in b.items():
        by_row.setdefault(i, []).append((j, v))
    out: Matrix = {}
    for (i, k), v in a.items():
        for j, w in by_row.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + v * w
    return {k: v for k, v in out.items() if v}


def super_bracket(a: Matrix, a_odd: bool, b: Matrix, b_odd: bool) -> Matrix:
    ab, ba = _mat_mul(a, b), _mat_mul(b, a)
    sign = -1 if (a_odd and b_odd) else 1
    out = dict(ab)
    for k, v in ba.items():
        out[k] = out.get(k, 0) - sign * v
    return {k: v for k, v in out.items() if v}


class Realization:
    """Supermatrix realization of g together with its bracket table."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._setup_space()
        self.elements: dict = {}
        self._realize()
        self._table: dict = {}
        labels = list(self.elements)
        for x, y in itertools.product(labels, repeat=2):
            self._table[(x, y)] = self._decompose(super_bracket(
                self.elements[x].matrix_dict, self.elements[x].odd,
                self.elements[y].matrix_dict, self.elements[y].odd))

    # -- the natural module ----------------------------------------------
    def _setup_space(self):
        rs = self.rs
        fam = rs.spec.family
        dim = rs.dim
        if fam == "osp_2_2n":
            n = rs.spec.ranks[0]
            # u+, u- (even, weights +-e1), w_k, w_{-k} (odd, weights +-d_k)
            weights, parity = [], []
            for s in (1, -1):
                v = [Fraction(0)] * dim
                v[0] = Fraction(s)
                weights.append(tuple(v))
                parity.append(False)
            for s in (1, -1):
                for k in range(n):
                    v = [Fraction(0)] * dim
                    v[1 + k] = Fraction(s)
                    weights.append(tuple(v))
                    parity.append(True)
            size = 2 + 2 * n
            form = {(0, 1): 1, (1, 0): 1}
            for k in range(n):
                form[(2 + k, 2 + n + k)] = 1
                form[(2 + n + k, 2 + k)] = -1
            self.form = form
        else:
            weights, parity = [], []
            for i in range(dim):
                v = [Fraction(0)] * dim
                v[i] = Fraction(1)
                weights.append(tuple(v))
                parity.append(rs.signs[i] < 0)
            size = dim
            self.form = None
        self.size = size
        self.vweights = weights
        self.vparity = parity

    def _candidates(self, weight):
        """Matrix units E_ij of the given weight (wt(i) - wt(j))."""
        out = []
        for i, j in itertools.product(range(self.size), repeat=2):
            w = tuple(a - b for a, b in zip(self.vweights[i], self.vweights[j]))
            if w == tuple(weight):
                out.append((i, j))
        return out

    def _root_space(self, weight, odd: bool) -> Matrix:
        units = self._candidates(weight)
        if self.form is None:
            if len(units) != 1:
                raise errors.NormalizationImpossible(f"root space {weight} not one-dimensional")
            return {units[0]: Fraction(1)}
        # B(Xv, w) + (-1)^{|X||v|} B(v, Xw) = 0 for all basis v, w
        rows = []
        for v, w in itertools.product(range(self.size), repeat=2):
            row = []
            for (i, j) in units:
                c = Fraction(0)
                if j == v:
                    c += self.form.get((i, w), 0)
                if j == w:
                    sgn = -1 if (odd and self.vparity[v]) else 1
                    c += sgn * self.form.get((v, i), 0)
                row.append(c)
            if any(row):
                rows.append(row)
        ns = nullspace(rows, len(units))
        if len(ns) != 1:
            raise errors.NormalizationImpossible(f"root space {weight} has dimension {len(ns)}")
        vec = ns[0]
        first = next(x for x in vec if x)
        return {u: x / first for u, x in zip(units, vec) if x}

    def _cartan_matrix(self, gamma_coords) -> Matrix:
        """Matrix of h_gamma: acts on a basis vector of weight w by (gamma, w)."""
        rs = self.rs
        out = {}
        for i, w in enumerate(self.vweights):
            v = rs.pairing(gamma_coords, w)
            if v:
                out[(i, i)] = v
        return out

    def _realize(self):
        rs = self.rs
        for k, s in enumerate(rs.simple):
            self._add("h", k, self._cartan_matrix(s.coords), False)
        for i, r in enumerate(rs.positive):
            ep = self._root_space(r.coords, r.odd)
            em = self._root_space(tuple(-c for c in r.coords), r.odd)
            br = super_bracket(ep, r.odd, em, r.odd)
            target = self._cartan_matrix(r.coords)
            ratio = None
            for key in set(br) | set(target):
                a, b = br.get(key, 0), target.get(key, 0)
                if b == 0 and a == 0:
                    continue
                if b == 0 or a == 0:
                    raise errors.NormalizationImpossible(f"[e,e-] not proportional to h for {r}")
                q = Fraction(b) / a
                if ratio is None:
                    ratio = q
                elif ratio != q:
                    raise errors.NormalizationImpossible(f"[e,e-] not proportional to h for {r}")
            em = {key: v * ratio for key, v in em.items()}
            self._add("p", i, ep, r.odd)
            self._add("n", i, em, r.odd)

    def _add(self, kind, index, matrix, odd):
        el = BasisElement(kind, index, tuple(sorted(matrix.items())), odd)
        object.__setattr__(el, "matrix_dict", dict(matrix))
        self.elements[(kind, index)] = el

    def _decompose(self, mat: Matrix) -> tuple:
        """Express a matrix as a combination of basis labels."""
        rs = self.rs
        rest = dict(mat)
        out = []
        for i, r in enumerate(rs.positive):
            for kind in ("p", "n"):
                el = self.elements[(kind, i)].matrix_dict
                key = next(iter(sorted(el)))
                if key in rest:
                    c = rest[key] / el[key]
                    for k, v in el.items():
                        nv = rest.get(k, 0) - c * v
                        if nv:
                            rest[k] = nv
                        else:
                            rest.pop(k, None)
                    out.append(((kind, i), c))
        if any(i != j for (i, j) in rest):
            raise errors.NotInSpan("bracket leaves the realized algebra")
        if rest:
            hs = [self.elements[("h", k)].matrix_dict for k in range(rs.rank)]
            rows = [[h.get((d, d), 0) for h in hs] for d in range(self.size)]
            rhs = [rest.get((d, d), 0) for d in range(self.size)]
            sol = solve_unique(rows, rhs)
            if sol is None:
                raise errors.NotInSpan("diagonal part not in the span of h_alpha")
            out.extend((("h", k), c) for k, c in enumerate(sol) if c)
        return tuple(out)

    # -- public ------------------------------------------------------------
    def bracket(self, x, y) -> tuple:
        """Super bracket of two basis labels as ((label, coeff), ...)."""
        return self._table[(_label(x), _label(y))]

    def is_odd(self, label) -> bool:
        kind, i = _label(label)
        return kind != "h" and self.rs.positive[i].odd

    def h_gamma_coeffs(self, gamma) -> tuple:
        """h_gamma in terms of the h_{alpha_k}: the simple coordinates of gamma."""
        return tuple(self.rs.simple_coords(gamma))

    @property
    def labels(self) -> list:
        return list(self.elements)

    def matrix(self, label) -> Matrix:
        return dict(self.elements[_label(label)].matrix_dict)


def _label(x):
    return x.label if isinstance(x, BasisElement) else tuple(x)


def realize(rs: RootSystem) -> Realization:
    return Realization(rs)


def combine(terms, realization: Realization):
    """Sum a list of ((label, coeff), ...) tuples into a dict."""
    out: dict = {}
    for t in terms:
        for lab, c in t:
            out[lab] = out.get(lab, 0) + c
    return {k: v for k, v in out.items() if v}


def super_jacobi_failures(real: Realization) -> list:
    """Triples violating [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]."""
    def br(u: dict, v: dict) -> dict:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for lab, c in real.bracket(a, b):
                    out[lab] = out.get(lab, 0) + ca * cb * c
        return {k: c for k, c in out.items() if c}

    bad = []
    labels = real.labels
    for x, y, z in itertools.product(labels, repeat=3):
        X, Y, Z = {x: 1}, {y: 1}, {z: 1}
        lhs = br(X, br(Y, Z))
        sign = -1 if (real.is_odd(x) and real.is_odd(y)) else 1
        rhs = br(br(X, Y), Z)
        for k, v in br(Y, br(X, Z)).items():
            rhs[k] = rhs.get(k, 0) + sign * v
        rhs = {k: c for k, c in rhs.items() if c}
        if lhs != rhs:
            bad.append((x, y, z))
    return bad
