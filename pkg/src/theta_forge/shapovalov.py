"""Shapovalov elements theta_{gamma,m} and the identities they satisfy.

An element is stored as ``{partition: H_pi}`` with H_pi a polynomial in the
Cartan coordinates h_a, h_b, ... reduced modulo the hyperplane H_{gamma,m}:
the coordinate with the largest index occurring in gamma is eliminated.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import islice
from pathlib import Path
from typing import Iterator, Sequence

from . import cartan, errors
from .cartan import Hyperplane
from .linalg import nullspace, rank, solve_unique
from .pbw import UAlgebra, _add_into, algebra, right_divide
from .polynomial import Poly, monomials_up_to
from .rootdata import AlgebraSpec, Root, RootSystem, WeylWord, odd_reflection
from .verma import RaiseCache, partitions

ORDERING = "height-desc-lex"
METHODS = ("solve_interpolate", "recursion")
EXTRA_CHECKS = 5


@dataclass
class ShapovalovElement:
    alg: UAlgebra = field(repr=False)
    gamma: Root
    m: int
    coeffs: dict
    method: str
    hyperplane: Hyperplane = field(repr=False)
    weyl_data: tuple | None = None     # (beta, word, [(alpha, q), ...])
    ordering: str = ORDERING

    @property
    def gamma_index(self) -> int:
        return self.alg.rs.index(self.gamma)

    @property
    def weight(self) -> tuple:
        return tuple(self.m * g for g in self.gamma.simple)

    @property
    def top_partition(self) -> tuple:
        """m pi^gamma: the partition using gamma itself m times."""
        return tuple(self.m if i == self.gamma_index else 0 for i in range(self.alg.nroots))

    @property
    def pi0(self) -> tuple:
        return simple_partition(self.alg, self.weight)

    @property
    def eliminated(self) -> str:
        return self.hyperplane.eliminated_name

    def evaluate(self, values: Sequence) -> dict:
        """theta(lambda) in U(n^-) for numeric Cartan values."""
        vals = list(values) + [Fraction(0)]
        out = {}
        for mono, h in self.coeffs.items():
            v = h.evaluate(vals)
            if v:
                out[mono] = Fraction(v) if not isinstance(v, Poly) else v
        return out

    def evaluate_symbolic(self, shift_by: Sequence[int] | None = None) -> dict:
        """theta(lambda - eta) with lambda symbolic; eta in simple coordinates."""
        if shift_by is None or not any(shift_by):
            return dict(self.coeffs)
        rs = self.alg.rs
        zero = (Fraction(0),) * rs.rank
        offs = list(cartan.minus(rs, zero, shift_by)) + [0]
        return {mono: h.shift(offs) for mono, h in self.coeffs.items()}

    def to_json(self) -> dict:
        spec = self.alg.rs.spec
        out = {
            "schema": 1,
            "algebra": spec.name,
            "borel": spec.borel,
            "gamma": self.gamma.name,
            "m": self.m,
            "method": self.method,
            "ordering": self.ordering,
            "eliminated": self.eliminated,
            "coeffs": [[[[i, k] for i, k in enumerate(mono) if k], str(h)]
                       for mono, h in sorted(self.coeffs.items(), reverse=True)],
        }
        if self.weyl_data is not None:
            beta, word, exps = self.weyl_data
            out["weyl_data"] = {"beta": beta.name, "word": list(word.letters),
                                "exponents": [[a.name, str(q)] for a, q in exps]}
        else:
            out["weyl_data"] = None
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ShapovalovElement":
        alg = algebra(data["algebra"])
        rs = alg.rs
        gamma = rs.root(data["gamma"])
        m = int(data["m"])
        coeffs = {}
        for part, text in data["coeffs"]:
            mono = [0] * alg.nroots
            for i, k in part:
                mono[i] = k
            coeffs[tuple(mono)] = alg.ring.parse(text)
        return cls(alg, gamma, m, coeffs, data["method"], Hyperplane(rs, gamma.simple, m),
                   _weyl_data(rs, gamma), data.get("ordering", ORDERING))

    def __str__(self):
        names = [r.name for r in self.alg.rs.positive]
        parts = []
        for mono, h in sorted(self.coeffs.items(), reverse=True):
            word = "".join(f"e_-({names[i]})" for i in self.alg.letters(mono))
            parts.append(f"{word}*({h})")
        return " + ".join(parts)


def simple_partition(alg: UAlgebra, eta: Sequence[int]) -> tuple:
    """pi^0: the partition of eta supported on simple roots."""
    mono = [0] * alg.nroots
    for k, c in enumerate(eta):
        mono[alg.rs.simple_index[k]] = c
    mono = tuple(mono)
    for i, k in enumerate(mono):
        if k > 1 and alg.odd[i]:
            raise errors.NormalizationImpossible("the all-simple partition is not a partition")
    return mono


def _weyl_data(rs: RootSystem, gamma: Root):
    try:
        beta, word = rs.find_weyl_expression(gamma)
    except errors.NotInEvenOrbit:
        return None
    return beta, word, rs.n_set_and_exponents(word, beta)


def _resolve_root(alg: UAlgebra, gamma) -> Root:
    return alg.rs.root(gamma)


# -- sample fitting -----------------------------------------------------------

class _Echelon:
    """Incrementally maintained row-echelon basis."""

    def __init__(self):
        self.rows: list = []   # (pivot, row)

    def add(self, row) -> bool:
        row = list(row)
        for piv, r in self.rows:
            if row[piv]:
                c = row[piv] / r[piv]
                row = [a - c * b for a, b in zip(row, r)]
        piv = next((i for i, v in enumerate(row) if v), None)
        if piv is None:
            return False
        self.rows.append((piv, row))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _vander(point: Sequence, monos: Sequence) -> list:
    row = []
    for m in monos:
        v = Fraction(1)
        for x, k in zip(point, m):
            if k:
                v *= x ** k
        row.append(v)
    return row


def _fit(alg: UAlgebra, hp: Hyperplane, basis: list, bound: int,
         samples: Iterator) -> dict:
    """Interpolate H_pi from pointwise solutions, then check extra samples."""
    nfree = len(hp.free)
    top = max(bound - min(sum(p) for p in basis), 0)
    monos = monomials_up_to(nfree, top)
    ech = _Echelon()
    pts, vecs = [], []
    for vals, vec in samples:
        pt = hp.free_part(vals)
        if ech.add(_vander(pt, monos)):
            pts.append(pt)
            vecs.append(vec)
            if ech.rank == len(monos):
                break
    else:
        raise errors.SampleDegeneracy("ran out of sample points before the grid became unisolvent")

    ring = alg.ring
    coeffs = {}
    for mono in basis:
        deg = bound - sum(mono)
        values = [v.get(mono, Fraction(0)) for v in vecs]
        if deg < 0:
            if any(values):
                raise errors.InterpolationMismatch(f"nonzero coefficient beyond the degree bound at {mono}")
            continue
        sub = monomials_up_to(nfree, deg)
        rows = [_vander(p, sub) for p in pts]
        sol = solve_unique(rows, values)
        if sol is None:
            raise errors.InterpolationMismatch(f"no polynomial of degree <= {deg} fits {mono}")
        terms = {}
        for e, c in zip(sub, sol):
            if c:
                full = [0] * ring.nvars
                for k, x in zip(hp.free, e):
                    full[k] = x
                terms[tuple(full)] = c
        if terms:
            coeffs[mono] = Poly(ring, terms)

    checked = 0
    for vals, vec in samples:
        got = {}
        full = list(vals) + [Fraction(0)]
        for mono, h in coeffs.items():
            v = h.evaluate(full)
            if v:
                got[mono] = v
        if got != {k: v for k, v in vec.items() if v}:
            raise errors.InterpolationMismatch(f"fitted element disagrees at sample {vals}")
        checked += 1
        if checked == EXTRA_CHECKS:
            break
    if checked < EXTRA_CHECKS:
        raise errors.SampleDegeneracy("not enough samples left for the verification pass")
    return coeffs


def singular_at(alg: UAlgebra, values: Sequence, basis: list, pi0: tuple) -> dict | None:
    """Unique singular vector of the weight space normalized at pi0, or None."""
    cache = RaiseCache(alg, values)
    rows: dict = {}
    n = len(basis)
    for j, mono in enumerate(basis):
        for s in alg.rs.simple_index:
            for tgt, v in cache.column(s, mono).items():
                rows.setdefault((s, tgt), [Fraction(0)] * n)[j] = Fraction(v)
    ns = nullspace(list(rows.values()), n)
    if len(ns) != 1:
        return None
    vec = ns[0]
    c = vec[basis.index(pi0)]
    if not c:
        return None
    return {mono: x / c for mono, x in zip(basis, vec) if x}


def _nullspace_samples(alg, hp, basis, pi0, seed):
    values = list(islice(cartan.rational_sequence(seed), 48))
    for free in cartan.grid_points(len(hp.free), values):
        vals = hp.point(free)
        vec = singular_at(alg, vals, basis, pi0)
        if vec is not None:
            yield vals, vec


def _index_grid(sizes: Sequence[int]):
    n = len(sizes)
    if n == 0:
        yield ()
        return
    for top in range(max(sizes)):
        for idx in itertools.product(*(range(min(top + 1, s)) for s in sizes)):
            if max(idx) == top:
                yield idx


def recursion_at(alg: UAlgebra, gamma: Root, m: int, word: WeylWord, beta: Root,
                 values: Sequence) -> dict:
    """theta_{gamma,m}(lambda) by descending along w; every p must be a positive integer."""
    rs = alg.rs
    letters = list(word.letters)

    def step(j, vals, root_sc):
        if j == len(letters):
            return {tuple(m if i == rs.index(beta) else 0 for i in range(alg.nroots)): Fraction(1)}
        pos = letters[j]
        a_sc = tuple(1 if k == pos else 0 for k in range(rs.rank))
        a_idx = rs.simple_index[pos]
        p = -cartan.shifted_coroot(rs, vals, a_sc)
        q = Fraction(2) * cartan.pair(cartan.minus(rs, (Fraction(0),) * rs.rank, root_sc, -1), a_sc) \
            / cartan.root_norm(rs, a_sc)
        if p.denominator != 1 or p <= 0 or q.denominator != 1 or q <= 0:
            raise errors.PreconditionViolated(f"recursion step needs p, q in N \\ {{0}} (p={p}, q={q})")
        p, q = int(p), int(q)
        lower_sc = tuple(g - q * a for g, a in zip(root_sc, a_sc))
        mu = cartan.dot_reflect(rs, vals, a_sc)
        lower = step(j + 1, mu, lower_sc)
        u = alg.neg_product({tuple((p + m * q) if i == a_idx else 0 for i in range(alg.nroots)): 1},
                            lower)
        return right_divide(alg, u, a_idx, p)

    return step(0, tuple(values), tuple(gamma.simple))


def _recursion_samples(alg, hp, gamma, m, weyl, seed):
    rs = alg.rs
    beta, word, nset = weyl
    rnk = rs.rank
    rows = [list(map(Fraction, gamma.simple))]
    rhs_kind = [("hyper", None)]
    coroot_rows = []
    for root, _q in nset:
        nn = cartan.root_norm(rs, root.simple)
        coroot_rows.append([Fraction(2 * b) / nn for b in root.simple])
    indep = []
    for j, r in enumerate(coroot_rows):
        if rank(rows + [r]) > len(rows):
            rows.append(r)
            rhs_kind.append(("p", j))
            indep.append(j)
    for k in range(rnk):
        unit = [Fraction(1 if i == k else 0) for i in range(rnk)]
        if rank(rows + [unit]) > len(rows):
            rows.append(unit)
            rhs_kind.append(("free", k))
    rho = cartan.rho_values(rs)
    ints = list(range(1, 41))
    rats = list(islice(cartan.rational_sequence(seed), 40))
    params = [k for k in rhs_kind[1:]]
    sizes = [40 for _ in params]
    for idx in _index_grid(sizes):
        rhs = [-hp.const]
        for (kind, j), i in zip(params, idx):
            if kind == "p":
                r = coroot_rows[j]
                rhs.append(-ints[i] - sum((a * b for a, b in zip(r, rho)), Fraction(0)))
            else:
                rhs.append(rats[i])
        vals = solve_unique(rows, rhs)
        if vals is None:
            continue
        ok = True
        for r in coroot_rows:
            pv = -sum((a * (x + y) for a, x, y in zip(r, vals, rho)), Fraction(0))
            if pv.denominator != 1 or pv <= 0:
                ok = False
                break
        if not ok:
            continue
        vec = recursion_at(alg, gamma, m, word, beta, vals)
        yield tuple(vals), vec


# -- computing elements -------------------------------------------------------

_MEMO: dict = {}


def _cache_file(alg: UAlgebra, gamma: Root, m: int, method: str) -> Path | None:
    root = os.environ.get("THETA_FORGE_CACHE")
    if not root:
        return None
    spec = alg.rs.spec
    safe = "".join(ch if ch.isalnum() else "_" for ch in f"{spec.name}__{gamma.name}__{m}__{method}")
    return Path(root) / f"{safe}.json"


def compute_shapovalov(alg: UAlgebra | str | AlgebraSpec, gamma, m: int = 1,
                       method: str = "solve_interpolate", seed: int = 0,
                       use_cache: bool = True) -> ShapovalovElement:
    """theta_{gamma,m}, either from pointwise null spaces or from the Weyl-group recursion."""
    if not isinstance(alg, UAlgebra):
        alg = algebra(alg)
    rs = alg.rs
    gamma = _resolve_root(alg, gamma)
    if method not in METHODS:
        raise errors.ThetaForgeError(f"unknown method {method!r}")
    if m < 1:
        raise errors.PreconditionViolated("m must be a positive integer")
    if gamma.isotropic and m != 1:
        raise errors.PreconditionViolated("m must be 1 for an isotropic root")
    key = (rs.spec, gamma.coords, m, method)
    path = _cache_file(alg, gamma, m, method) if use_cache else None
    if use_cache and key in _MEMO:
        theta = _MEMO[key]
        if path is not None and not path.exists():
            _store(path, theta)
        return theta
    if path is not None and path.exists():
        try:
            theta = ShapovalovElement.from_json(json.loads(path.read_text()))
            verify_defining_property(theta)
            _MEMO[key] = theta
            return theta
        except (errors.ThetaForgeError, ValueError, KeyError):
            pass

    hp = Hyperplane(rs, gamma.simple, m)
    weyl = _weyl_data(rs, gamma)
    eta = tuple(m * g for g in gamma.simple)
    basis = partitions(alg, eta)
    gi = rs.index(gamma)
    if gamma.height == 1:
        coeffs = {tuple(m if i == gi else 0 for i in range(alg.nroots)): alg.ring.one()}
    else:
        pi0 = simple_partition(alg, eta)
        bound = m * gamma.height
        if method == "solve_interpolate":
            samples = _nullspace_samples(alg, hp, basis, pi0, seed)
        else:
            if weyl is None:
                raise errors.NotInEvenOrbit(f"{gamma.name} is not W_even-conjugate to a simple root")
            samples = _recursion_samples(alg, hp, gamma, m, weyl, seed)
        coeffs = _fit(alg, hp, basis, bound, samples)
        if coeffs.get(pi0) != alg.ring.one():
            raise errors.NormalizationImpossible(f"H_pi0 = {coeffs.get(pi0)} instead of 1")
    theta = ShapovalovElement(alg, gamma, m, coeffs, method, hp, weyl)
    _MEMO[key] = theta
    if path is not None:
        _store(path, theta)
    return theta


def _store(path: Path, theta: ShapovalovElement) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(theta.to_json(), sort_keys=True, indent=1))


def method_agreement(alg, gamma, m: int = 1) -> bool:
    """Both construction methods give the same canonical element."""
    a = compute_shapovalov(alg, gamma, m, "solve_interpolate")
    b = compute_shapovalov(alg, gamma, m, "recursion")
    if a.coeffs != b.coeffs:
        raise errors.InterpolationMismatch(f"methods disagree for {a.gamma.name}, m={m}")
    return True


def reduce_element(theta: ShapovalovElement) -> ShapovalovElement:
    """Re-reduce every coefficient modulo the hyperplane ideal."""
    hp = theta.hyperplane
    coeffs = {}
    for mono, h in theta.coeffs.items():
        r = hp.reduce(h)
        if r:
            coeffs[mono] = r
    return replace(theta, coeffs=coeffs)


# -- checks -------------------------------------------------------------------

@dataclass
class PropertyReport:
    gamma: str
    m: int
    passed: bool
    residues: dict        # simple root name -> {partition: residue before reduction}
    hyperplane: str

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "m": self.m, "passed": self.passed,
                "hyperplane": self.hyperplane,
                "residues": {a: [[list(k), str(v)] for k, v in sorted(r.items(), reverse=True)]
                             for a, r in self.residues.items()}}


def raise_symbolic(alg: UAlgebra, s: int, vec: dict) -> dict:
    """e_{gamma_s} applied to sum_pi H_pi(lambda) e_{-pi} v_lambda, lambda symbolic."""
    out: dict = {}
    for mono, h in vec.items():
        for tgt, c in alg.raise_vector(s, mono).items():
            _add_into(out, tgt, c * h)
    return out


def verify_defining_property(theta: ShapovalovElement) -> PropertyReport:
    alg = theta.alg
    rs = alg.rs
    hp = theta.hyperplane
    residues = {}
    for k, s in enumerate(rs.simple_index):
        raw = raise_symbolic(alg, s, theta.coeffs)
        residues[rs.simple[k].name] = raw
        for tgt, poly in raw.items():
            if hp.reduce(poly):
                raise errors.PropertyViolated(
                    f"e_{rs.simple[k].name} theta v has residue {hp.reduce(poly)} at {tgt}")
    if not any(hp.reduce(h) for h in theta.coeffs.values()):
        raise errors.PropertyViolated("theta v_lambda vanishes on the hyperplane")
    return PropertyReport(theta.gamma.name, theta.m, True, residues,
                          str(hp.linear_poly(alg.ring)) + " = 0")


@dataclass
class DegreeReport:
    degrees: dict
    d: int
    leading_exponents: list      # [(root name, m q)]
    leading_scalar: Fraction | None
    passed: bool

    def to_json(self) -> dict:
        return {"d": self.d, "passed": self.passed,
                "degrees": [[list(k), v] for k, v in sorted(self.degrees.items(), reverse=True)],
                "leading_exponents": [[a, int(e)] for a, e in self.leading_exponents],
                "leading_scalar": None if self.leading_scalar is None else str(self.leading_scalar)}


def degree_report(theta: ShapovalovElement) -> DegreeReport:
    alg = theta.alg
    hp = theta.hyperplane
    bound = theta.m * theta.gamma.height
    degrees = {mono: h.degree() for mono, h in theta.coeffs.items()}
    for mono, d in degrees.items():
        if sum(mono) + d > bound:
            raise errors.BoundViolated(f"|pi| + deg H_pi = {sum(mono) + d} > {bound} at {mono}")
    top = theta.top_partition
    if top not in theta.coeffs:
        raise errors.LeadingTermMismatch("H_{m pi^gamma} is zero")
    d = degrees[top]
    for mono, dd in degrees.items():
        if mono != top and dd >= d:
            raise errors.BoundViolated(f"H at {mono} has degree {dd} >= d = {d}")
    lead, scalar = [], None
    if theta.weyl_data is not None:
        _beta, _word, nset = theta.weyl_data
        expected = alg.ring.one()
        for root, q in nset:
            e = theta.m * q
            lead.append((root.name, e))
            expected = expected * alg.cartan_of_root(alg.rs.index(root)) ** int(e)
        expected = hp.reduce_homogeneous(expected)
        got = theta.coeffs[top].homogeneous_part(d)
        scalar = _proportional(got, expected)
        if scalar is None or expected.degree() != d:
            raise errors.LeadingTermMismatch(f"leading form {got} is not a multiple of {expected}")
    return DegreeReport(degrees, d, lead, scalar, True)


def _proportional(a: Poly, b: Poly):
    if a.is_zero() or b.is_zero():
        return None
    key = next(iter(sorted(b.terms)))
    if key not in a.terms:
        return None
    c = a.terms[key] / b.terms[key]
    return c if a == b * c else None


@dataclass
class SquareReport:
    gamma: str
    vanishes: bool
    terms_before_reduction: int


def square_check(alg, gamma) -> SquareReport:
    """theta_gamma(lambda - gamma) theta_gamma(lambda) = 0 on H_gamma, lambda symbolic."""
    if not isinstance(alg, UAlgebra):
        alg = algebra(alg)
    gamma = _resolve_root(alg, gamma)
    if not gamma.isotropic:
        raise errors.NotIsotropic(f"{gamma.name} is not isotropic")
    theta = compute_shapovalov(alg, gamma, 1)
    left = theta.evaluate_symbolic(gamma.simple)
    prod = alg.neg_product(left, theta.coeffs)
    hp = theta.hyperplane
    for mono, h in prod.items():
        if hp.reduce(h):
            raise errors.SquareNonzero(f"coefficient {hp.reduce(h)} at {mono}")
    return SquareReport(gamma.name, True, len(prod))


# -- Borel chains ----------------------------------------------------------------

def find_chain(rs: RootSystem, gamma: Root) -> list:
    """Shortest odd-reflection chain (positions) making gamma simple.

    Every step reflects at an isotropic root that is positive for the starting
    Borel and has not been used before.
    """
    start = tuple(rs.basis)
    initial = {r.coords for r in rs.positive}
    target = tuple(gamma.coords)
    frontier = [(start, (), frozenset())]
    seen = {start}
    for _ in range(len(rs.isotropic_positive) + 1):
        nxt = []
        for basis, path, used in frontier:
            if target in basis:
                return list(path)
            for pos, b in enumerate(basis):
                if b in initial and b not in used and rs._odd.get(b) and rs.pairing(b, b) == 0:
                    nb = tuple(odd_reflection(list(basis), pos, rs.signs))
                    if nb not in seen:
                        seen.add(nb)
                        nxt.append((nb, path + (pos,), used | {b}))
        frontier = nxt
    raise errors.NotSimple(f"no odd-reflection chain makes {gamma.name} simple")


def chain_roots(rs: RootSystem, positions: Sequence[int]) -> list:
    basis = list(rs.basis)
    out = []
    for pos in positions:
        if not 0 <= pos < len(basis):
            raise errors.NotSimple(f"chain step {pos} out of range")
        out.append(basis[pos])
        basis = odd_reflection(basis, pos, rs.signs)
    return out, basis


@dataclass
class ChainReport:
    chain: list
    steps: list          # root names
    gamma: str
    F: list
    c: Fraction
    samples: int
    skipped: int
    symbolic: bool
    verified: bool

    def to_json(self) -> dict:
        return {"chain": self.chain, "steps": self.steps, "gamma": self.gamma, "F": self.F,
                "c": str(self.c), "samples": self.samples, "skipped": self.skipped,
                "symbolic": self.symbolic, "verified": self.verified}


def _chain_vector(alg: UAlgebra, step_idx: list, gi: int, cache: RaiseCache) -> dict:
    vec: dict = {alg.empty: 1}
    for i in step_idx:
        vec = alg.neg_product({alg.unit(i): 1}, vec)
    vec = alg.neg_product({alg.unit(gi): 1}, vec)
    for i in reversed(step_idx):
        vec = cache.apply(i, vec)
    return vec


def borel_chain_compare(alg, gamma, chain: Sequence[int] | None = None,
                        samples: Sequence | None = None, nsamples: int = 20,
                        seed: int = 0, symbolic: bool = True) -> ChainReport:
    if not isinstance(alg, UAlgebra):
        alg = algebra(alg)
    rs = alg.rs
    gamma = _resolve_root(alg, gamma)
    if not gamma.isotropic:
        raise errors.NotIsotropic(f"{gamma.name} is not isotropic")
    positions = find_chain(rs, gamma) if chain is None else list(chain)
    steps, final = chain_roots(rs, positions)
    if tuple(gamma.coords) not in [tuple(b) for b in final]:
        raise errors.NotSimple(f"{gamma.name} is not simple after the chain")
    if len({tuple(s) for s in steps}) != len(steps):
        raise errors.PreconditionViolated("chain roots must be distinct")
    step_roots = []
    for s in steps:
        try:
            step_roots.append(rs.root(s))
        except errors.ThetaForgeError:
            raise errors.PreconditionViolated("chain roots must be positive for the starting Borel")
    step_idx = [rs.index(r) for r in step_roots]
    F = [i for i, r in enumerate(step_roots) if rs.pairing(gamma, r) == 0]
    theta = compute_shapovalov(alg, gamma, 1)
    hp = theta.hyperplane
    gi = rs.index(gamma)

    if samples is None:
        values = list(islice(cartan.rational_sequence(seed), 40))
        points = (hp.point(f) for f in cartan.grid_points(len(hp.free), values))
    else:
        points = (cartan.values_of(rs, s) for s in samples)
    c = None
    used = skipped = 0
    for vals in points:
        if not hp.contains(vals):
            raise errors.PreconditionViolated("sample not on the hyperplane")
        factor = Fraction(1)
        for i in F:
            factor *= cartan.shifted_pair(rs, vals, step_roots[i].simple)
        if factor == 0:
            skipped += 1
            if samples is not None:
                raise errors.ZeroFactorAtSample(f"product over F vanishes at {vals}")
            continue
        lhs = _chain_vector(alg, step_idx, gi, RaiseCache(alg, vals))
        rhs = {k: v * factor for k, v in theta.evaluate(vals).items()}
        ratio = _vector_ratio(lhs, rhs)
        if ratio is None or ratio == 0 or (c is not None and ratio != c):
            raise errors.NotProportional(f"chain identity fails at {vals}")
        c = ratio
        used += 1
        if samples is None and used >= nsamples:
            break
    if c is None:
        raise errors.ZeroFactorAtSample("no usable samples")

    sym_ok = False
    if symbolic:
        lhs = _chain_vector(alg, step_idx, gi, RaiseCache(alg, None))
        ring = alg.ring
        factor = ring.one()
        rho = cartan.rho_values(rs)
        for i in F:
            sc = step_roots[i].simple
            factor = factor * ring.linear(list(sc) + [0], cartan.pair(rho, sc))
        for mono in set(lhs) | set(theta.coeffs):
            a = hp.reduce(ring.const(0) + lhs.get(mono, 0))
            b = hp.reduce(theta.coeffs.get(mono, ring.zero()) * factor * c)
            if a != b:
                raise errors.NotProportional(f"symbolic chain identity fails at {mono}")
        sym_ok = True
    return ChainReport(positions, [r.name for r in step_roots], gamma.name,
                       [step_roots[i].name for i in F], c, used, skipped, sym_ok, True)


def _vector_ratio(a: dict, b: dict):
    """c with a = c b, or None."""
    a = {k: v for k, v in a.items() if v}
    b = {k: v for k, v in b.items() if v}
    if not b:
        return None
    if set(a) != set(b):
        return None
    key = next(iter(sorted(b)))
    c = Fraction(a[key]) / b[key]
    return c if all(a[k] == c * b[k] for k in b) else None


# -- identities between elements ---------------------------------------------

def _solve_weight(rs: RootSystem, constraints: list, seed: int = 0) -> tuple:
    """Cartan values meeting [(row, rhs)] exactly, other directions generic."""
    rows = [list(map(Fraction, r)) for r, _ in constraints]
    rhs = [Fraction(v) for _, v in constraints]
    gen = cartan.rational_sequence(seed + 5)
    for k in range(rs.rank):
        unit = [Fraction(1 if i == k else 0) for i in range(rs.rank)]
        if rank(rows + [unit]) > len(rows):
            rows.append(unit)
            rhs.append(next(gen))
    sol = solve_unique(rows, rhs)
    if sol is None:
        raise errors.PreconditionViolated("constraints on lambda are inconsistent")
    return tuple(sol)


def _theta_eval(alg, root, m, vals) -> dict:
    if m == 0:
        return {alg.empty: Fraction(1)}
    return compute_shapovalov(alg, root, m).evaluate(vals)


@dataclass
class ManReport:
    side: str
    p: int
    values: tuple
    lhs: dict
    rhs: dict
    equal: bool

    def to_json(self, alg: UAlgebra) -> dict:
        return {"side": self.side, "p": self.p, "lambda": [str(v) for v in self.values],
                "equal": self.equal, "lhs": _vec_json(alg, self.lhs), "rhs": _vec_json(alg, self.rhs)}


def _vec_json(alg, vec):
    return [[[[i, k] for i, k in enumerate(mono) if k], str(c)] for mono, c in sorted(vec.items(), reverse=True)]


def man_identity(alg, gamma, alpha, p: int, side: str, lam=None, seed: int = 0) -> ManReport:
    """theta_gamma theta_{alpha,p} v = theta_{alpha,p+1} theta_{gamma'} v (pin) or
    theta_{gamma'} theta_{alpha,p} v = theta_{alpha,p-1} theta_gamma v (pun)."""
    if not isinstance(alg, UAlgebra):
        alg = algebra(alg)
    rs = alg.rs
    gamma = _resolve_root(alg, gamma)
    alpha = _resolve_root(alg, alpha)
    if side not in ("pin", "pun"):
        raise errors.ThetaForgeError(f"side must be pin or pun, not {side!r}")
    if not gamma.isotropic:
        raise errors.NotIsotropic(f"{gamma.name} is not isotropic")
    if alpha.odd or any(c and rs.simple[k].odd for k, c in enumerate(alpha.simple)):
        raise errors.PreconditionViolated(f"{alpha.name} is not in the even root lattice cone")
    p = int(p)
    if p < 1:
        raise errors.PreconditionViolated("p must be a positive integer" if side == "pin"
                                          else "p - 1 >= 0 fails")
    # both sides have the same weight only when gamma' = gamma - alpha
    if rs.coroot_pairing(gamma, alpha) != 1:
        raise errors.PreconditionViolated(
            f"(gamma, alpha^vee) = {rs.coroot_pairing(gamma, alpha)}; the identity needs 1")
    reflected = rs.reflect(gamma, alpha)
    try:
        gamma2 = rs.root(reflected)
    except errors.ThetaForgeError:
        raise errors.PreconditionViolated("s_alpha gamma is not a positive root")
    nn = cartan.root_norm(rs, alpha.simple)
    rho = cartan.rho_values(rs)
    cor = [Fraction(2 * b) / nn for b in alpha.simple]
    on = gamma2 if side == "pin" else gamma
    if lam is None:
        vals = _solve_weight(rs, [
            (cor, p - sum((a * r for a, r in zip(cor, rho)), Fraction(0))),
            (on.simple, -cartan.pair(rho, on.simple)),
        ], seed)
    else:
        vals = cartan.values_of(rs, lam)
    if cartan.shifted_coroot(rs, vals, alpha.simple) != p:
        raise errors.PreconditionViolated("(lambda + rho, alpha^vee) != p")
    if cartan.shifted_pair(rs, vals, on.simple) != 0:
        raise errors.PreconditionViolated(f"lambda is not on H_{on.name}")
    below = cartan.minus(rs, vals, alpha.simple, p)
    if side == "pin":
        lhs = alg.neg_product(_theta_eval(alg, gamma, 1, below), _theta_eval(alg, alpha, p, vals))
        rhs = alg.neg_product(_theta_eval(alg, alpha, p + 1, cartan.minus(rs, vals, gamma2.simple)),
                              _theta_eval(alg, gamma2, 1, vals))
    else:
        lhs = alg.neg_product(_theta_eval(alg, gamma2, 1, below), _theta_eval(alg, alpha, p, vals))
        rhs = alg.neg_product(_theta_eval(alg, alpha, p - 1, cartan.minus(rs, vals, gamma.simple)),
                              _theta_eval(alg, gamma, 1, vals))
    lhs = {k: v for k, v in lhs.items() if v}
    rhs = {k: v for k, v in rhs.items() if v}
    return ManReport(side, p, tuple(vals), lhs, rhs, lhs == rhs)


@dataclass
class KTReport:
    gamma: str
    gamma2: str
    values: tuple
    ratio: Fraction
    ratio_from_coefficient: Fraction
    consistent: bool

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "gamma2": self.gamma2, "lambda": [str(v) for v in self.values],
                "ratio": str(self.ratio), "ratio_from_coefficient": str(self.ratio_from_coefficient),
                "consistent": self.consistent}


def generic_on(rs: RootSystem, roots: Sequence[Root], seed: int = 0, index: int = 0) -> tuple:
    """A deterministic point on the intersection of the H_gamma with no other integrality."""
    rho = cartan.rho_values(rs)
    cons = [(r.simple, -cartan.pair(rho, r.simple)) for r in roots]
    found = 0
    for s in itertools.count(seed):
        vals = _solve_weight(rs, cons, s)
        a_set, b_set = rs.ab_sets(rs.weight_from_cartan_values(vals))
        if not a_set and len(b_set) == len(roots):
            if found == index:
                return vals
            found += 1
    raise AssertionError("unreachable")


def kt_proportionality(alg, gamma, gamma2, lam=None, seed: int = 0) -> KTReport:
    """p(lambda) with theta_{g'}(l-g) theta_g(l) v = p theta_g(l-g') theta_{g'}(l) v."""
    if not isinstance(alg, UAlgebra):
        alg = algebra(alg)
    rs = alg.rs
    g1 = _resolve_root(alg, gamma)
    g2 = _resolve_root(alg, gamma2)
    if not (g1.isotropic and g2.isotropic) or rs.pairing(g1, g2) != 0 or g1 == g2:
        raise errors.NotOrthogonalIsotropic("need two distinct orthogonal isotropic roots")
    vals = generic_on(rs, [g1, g2], seed) if lam is None else cartan.values_of(rs, lam)
    for g in (g1, g2):
        if cartan.shifted_pair(rs, vals, g.simple) != 0:
            raise errors.PreconditionViolated(f"lambda is not on H_{g.name}")
    left = alg.neg_product(_theta_eval(alg, g2, 1, cartan.minus(rs, vals, g1.simple)),
                           _theta_eval(alg, g1, 1, vals))
    right = alg.neg_product(_theta_eval(alg, g1, 1, cartan.minus(rs, vals, g2.simple)),
                            _theta_eval(alg, g2, 1, vals))
    left = {k: v for k, v in left.items() if v}
    right = {k: v for k, v in right.items() if v}
    if not left or not right:
        raise errors.DegenerateSample(f"a product of Shapovalov elements vanishes at {vals}")
    ratio = _vector_ratio(left, right)
    if ratio is None:
        raise errors.NotProportional("the two products are not proportional")
    key = tuple(1 if i in (rs.index(g1), rs.index(g2)) else 0 for i in range(alg.nroots))
    if left.get(key) and right.get(key):
        coef = Fraction(left[key]) / right[key]
    else:
        # fall back to the all-simple partition of gamma + gamma'
        key = simple_partition(alg, tuple(a + b for a, b in zip(g1.simple, g2.simple)))
        coef = Fraction(left[key]) / right[key]
    return KTReport(g1.name, g2.name, tuple(vals), ratio, coef, coef == ratio)
