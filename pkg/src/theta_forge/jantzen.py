"""Jantzen layers, the sum formula and the modules M^X(lambda), at the level of dimensions.

The deformed highest weight is lambda + T xi. Layer dimensions come from the
T-adic valuations of the elementary divisors of each Gram matrix, computed
over k[T]/(T^N) with N one larger than the valuation of the determinant.
Ranks over B = k(T) are taken at two rational values of T that must agree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import cartan, errors
from .linalg import rank, solve_unique
from .pbw import UAlgebra, algebra
from .polynomial import Poly
from .rootdata import Root, RootSystem
from .shapovalov import compute_shapovalov, _solve_weight
from .verma import (check_orthogonal_isotropic, etas_up_to, gram_matrix, partition_count,
                    partitions)

T_POINTS = (Fraction(3, 7), Fraction(-5, 11), Fraction(13, 17), Fraction(-19, 23), Fraction(29, 31))


def _alg(alg) -> UAlgebra:
    return alg if isinstance(alg, UAlgebra) else algebra(alg)


def _root(alg: UAlgebra, r) -> Root:
    return alg.rs.root(r)


# -- deformation directions ------------------------------------------------------

@dataclass(frozen=True)
class DeformationConfig:
    xi: tuple                    # Cartan values of xi
    X: tuple = ()                # names of roots gamma with (xi, gamma) = 0
    orthogonal_to_X: bool = True
    nonintegral_even_coroots: bool = False
    nonzero_on_roots: bool = False
    source: str = "search"

    def to_json(self) -> dict:
        return {"xi": [str(v) for v in self.xi], "X": list(self.X), "source": self.source,
                "orthogonal_to_X": self.orthogonal_to_X,
                "nonintegral_even_coroots": self.nonintegral_even_coroots,
                "nonzero_on_roots": self.nonzero_on_roots}


def _flags(rs: RootSystem, xi: Sequence, X: Sequence[Root]) -> dict:
    xs = {r.coords for r in X}
    even_ok = all(Fraction(2) * cartan.pair(xi, r.simple) / cartan.root_norm(rs, r.simple) % 1 != 0
                  for r in rs.even_positive)
    nonzero = all(cartan.pair(xi, r.simple) != 0 for r in rs.positive if r.coords not in xs)
    ortho = all(cartan.pair(xi, r.simple) == 0 for r in X)
    return {"orthogonal_to_X": ortho, "nonintegral_even_coroots": even_ok, "nonzero_on_roots": nonzero}


def deformation_config(alg, X: Sequence = (), xi=None, purpose: str = "filtration",
                       seed: int = 0) -> DeformationConfig:
    """A valid xi for the Jantzen filtration (purpose="filtration") or for M^X (purpose="mx").

    Filtration: (xi, alpha) != 0 for every positive root; rho is tried first.
    M^X: (xi, gamma) = 0 on X, (xi, alpha^vee) not integral for even alpha and
    (xi, beta) != 0 for the other roots.
    """
    alg = _alg(alg)
    rs = alg.rs
    roots = [_root(alg, g) for g in X]
    names = tuple(r.name for r in roots)

    def ok(flags):
        if purpose == "filtration":
            return flags["nonzero_on_roots"] and flags["orthogonal_to_X"]
        return all(flags.values())

    if xi is not None:
        vals = cartan.values_of(rs, xi)
        flags = _flags(rs, vals, roots)
        if not ok(flags):
            raise errors.PreconditionViolated(f"xi violates the deformation constraints: {flags}")
        return DeformationConfig(vals, names, source="given", **flags)
    rho = cartan.rho_values(rs)
    flags = _flags(rs, rho, roots)
    if ok(flags):
        return DeformationConfig(rho, names, source="rho", **flags)
    cons = [(r.simple, 0) for r in roots]
    for s in itertools.count(seed):
        vals = _solve_weight(rs, cons, s) if cons else _free_weight(rs, s)
        flags = _flags(rs, vals, roots)
        if ok(flags):
            return DeformationConfig(vals, names, source="search", **flags)


def _free_weight(rs: RootSystem, s: int) -> tuple:
    gen = cartan.rational_sequence(s + 5)
    return tuple(next(gen) for _ in range(rs.rank))


# -- local Smith form ---------------------------------------------------------

def _series(entry, t_index: int) -> list:
    """Coefficient list (ascending powers of T) of a polynomial in T only."""
    if not isinstance(entry, Poly):
        return [Fraction(entry)]
    out = []
    for e, c in entry.terms.items():
        if any(k for i, k in enumerate(e) if i != t_index):
            raise errors.UnevaluatedVariable("Gram entry depends on more than T")
        d = e[t_index]
        out.extend([Fraction(0)] * (d + 1 - len(out)))
        out[d] += c
    return out or [Fraction(0)]


def _valuation(s: Sequence) -> int | None:
    return next((i for i, c in enumerate(s) if c), None)


def _det_poly(mat: list) -> list:
    """det of a matrix of coefficient lists, via evaluation at integer points and interpolation."""
    n = len(mat)
    if n == 0:
        return [Fraction(1)]
    deg = sum(max(len(e) - 1 for e in row) for row in mat)
    xs = list(range(deg + 1))
    dets = []
    for x in xs:
        num = [[sum((c * Fraction(x) ** k for k, c in enumerate(e)), Fraction(0)) for e in row]
               for row in mat]
        dets.append(_det_fraction(num))
    rows = [[Fraction(x) ** k for k in range(deg + 1)] for x in xs]
    return solve_unique(rows, dets)


def _det_fraction(m: list) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _mul_trunc(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                if y:
                    out[i + j] += x * y
    return out


def _inverse_series(a, n):
    inv = [Fraction(0)] * n
    inv[0] = 1 / a[0]
    for k in range(1, n):
        s = sum((a[j] * inv[k - j] for j in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        inv[k] = -s * inv[0]
    return inv


def smith_valuations(mat: list, precision: int) -> list:
    """Valuations of the elementary divisors over k[T]_(T), working modulo T^precision.

    Entries are coefficient lists. Valuations >= precision are reported as
    ``precision`` and signal that more precision is needed.
    """
    n = precision
    a = [[(list(e) + [Fraction(0)] * n)[:n] for e in row] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    out = []
    active_r = list(range(rows))
    active_c = list(range(cols))
    while active_r and active_c:
        best = None
        for i in active_r:
            for j in active_c:
                v = _valuation(a[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            out.extend([n] * min(len(active_r), len(active_c)))
            break
        v, pi, pj = best
        out.append(v)
        unit_inv = _inverse_series(a[pi][pj][v:] + [Fraction(0)] * v, n)
        for i in active_r:
            if i == pi or _valuation(a[i][pj]) is None:
                continue
            f = _mul_trunc(a[i][pj][v:] + [Fraction(0)] * v, unit_inv, n)
            for j in active_c:
                prod = _mul_trunc(f, a[pi][j], n)
                a[i][j] = [x - y for x, y in zip(a[i][j], prod)]
        active_r.remove(pi)
        active_c.remove(pj)
    return sorted(out)


@dataclass
class LayerResult:
    eta: tuple
    size: int
    valuations: list            # elementary divisor valuations (zeros omitted)
    det_valuation: int

    @property
    def layers(self) -> tuple:
        """(d_1, d_2, ...) with d_i = #{valuations >= i}."""
        top = max(self.valuations, default=0)
        return tuple(sum(1 for v in self.valuations if v >= i) for i in range(1, top + 1))

    @property
    def valuation_counts(self) -> tuple:
        """(#{valuation = 1}, #{valuation = 2}, ...)."""
        top = max(self.valuations, default=0)
        return tuple(sum(1 for v in self.valuations if v == i) for i in range(1, top + 1))

    @property
    def total(self) -> int:
        return sum(self.valuations)


def _layer_result(alg: UAlgebra, lam_vals, cfg: DeformationConfig, eta) -> LayerResult:
    g = gram_matrix(alg, lam_vals, cfg.xi, eta)
    mat = [[_series(e, alg.t_index) for e in row] for row in g.entries]
    if not mat:
        return LayerResult(tuple(eta), 0, [], 0)
    det = _det_poly(mat)
    nu = _valuation(det)
    if nu is None:
        raise errors.DegenerateSample(f"Gram determinant vanishes identically at eta={eta}; change xi")
    vals = smith_valuations(mat, nu + 1)
    if sum(vals) != nu:
        raise errors.VerificationFailure(f"Smith valuations {vals} disagree with det valuation {nu}")
    return LayerResult(tuple(eta), len(mat), [v for v in vals if v], nu)


def layer_dimensions(alg, lam, cfg: DeformationConfig, eta) -> tuple:
    """(d_1, d_2, ...) for the weight space lambda - eta."""
    alg = _alg(alg)
    return _layer_result(alg, cartan.values_of(alg.rs, lam), cfg, eta).layers


def layer_table(alg, lam, cfg: DeformationConfig, depth: int) -> dict:
    alg = _alg(alg)
    vals = cartan.values_of(alg.rs, lam)
    return {eta: _layer_result(alg, vals, cfg, eta) for eta in etas_up_to(alg.rank, depth)}


# -- sum formula -----------------------------------------------------------------

def _sub(a, b, k=1):
    return tuple(x - k * y for x, y in zip(a, b))


@dataclass
class SumRow:
    eta: tuple
    lhs: int
    rhs: int
    contributions: dict    # label -> count


@dataclass
class SumFormulaReport:
    values: tuple
    depth: int
    A: list
    B: list
    rows: list
    passed: bool
    flag: str | None = None
    cfg: DeformationConfig | None = None

    def to_json(self) -> dict:
        return {"lambda": [str(v) for v in self.values], "depth": self.depth,
                "A": self.A, "B": self.B, "passed": self.passed, "flag": self.flag,
                "xi": None if self.cfg is None else self.cfg.to_json(),
                "rows": [{"eta": list(r.eta), "lhs": r.lhs, "rhs": r.rhs,
                          "contributions": r.contributions} for r in self.rows]}


def sum_formula_report(alg, lam, depth: int, cfg: DeformationConfig | None = None) -> SumFormulaReport:
    alg = _alg(alg)
    rs = alg.rs
    vals = cartan.values_of(rs, lam)
    cfg = cfg or deformation_config(alg)
    a_set, b_set = rs.ab_sets(rs.weight_from_cartan_values(vals))
    shifts = []
    for a in a_set:
        n = cartan.shifted_coroot(rs, vals, a.simple)
        shifts.append((f"M(s_{a.name}.lambda)", tuple(int(n) * c for c in a.simple), None))
    for g in b_set:
        shifts.append((f"M^{g.name}(lambda-{g.name})", tuple(g.simple), rs.index(g)))
    rows = []
    passed = True
    for eta in etas_up_to(alg.rank, depth):
        lhs = _layer_result(alg, vals, cfg, eta).total
        contrib = {}
        for label, sh, excl in shifts:
            rest = _sub(eta, sh)
            cnt = 0 if min(rest) < 0 else partition_count(alg, rest, () if excl is None else (excl,))
            if cnt:
                contrib[label] = cnt
        rhs = sum(contrib.values())
        rows.append(SumRow(eta, lhs, rhs, contrib))
        passed = passed and lhs == rhs
    flag = None
    if not b_set and a_set and all(sum(sh) > depth for _, sh, _ in shifts):
        flag = "depth-too-small"
    return SumFormulaReport(vals, depth, [a.name for a in a_set], [g.name for g in b_set],
                            rows, passed, flag, cfg)


# -- M^X(lambda) -------------------------------------------------------------------

def _at(values: Sequence, xi: Sequence, t: Fraction) -> tuple:
    return tuple(a + t * b for a, b in zip(values, xi))


def _rank_of(vectors: list, basis: list) -> int:
    rows = [[Fraction(v.get(m, 0)) for m in basis] for v in vectors]
    rows = [r for r in rows if any(r)]
    return rank(rows) if rows else 0


def _generic_rank(build, points=T_POINTS) -> int:
    """Rank over k(T) from two evaluations of T that must agree."""
    got = [build(points[0]), build(points[1])]
    if got[0] == got[1]:
        return got[0]
    for t in points[2:]:
        got.append(build(t))
        if got.count(max(got)) >= 2:
            return max(got)
    raise errors.RankDisagreement(f"ranks {got} at the T sample points do not agree")


def _submodule_vectors(alg: UAlgebra, thetas: list, vals: tuple, eta) -> list:
    """e_{-pi} theta_gamma(lambda) v for gamma in X and pi in P(eta - gamma)."""
    out = []
    for th in thetas:
        rest = _sub(eta, th.gamma.simple)
        if min(rest) < 0:
            continue
        tv = th.evaluate(vals)
        for pi in partitions(alg, rest):
            out.append(alg.neg_product({pi: 1}, tv))
    return out


@dataclass
class MXReport:
    X: list
    values: tuple
    depth: int
    rows: list              # (eta, dim, p_X)
    passed: bool
    series: dict | None = None
    cfg: DeformationConfig | None = None

    def to_json(self) -> dict:
        return {"X": self.X, "lambda": [str(v) for v in self.values], "depth": self.depth,
                "passed": self.passed, "series": self.series,
                "xi": None if self.cfg is None else self.cfg.to_json(),
                "rows": [{"eta": list(e), "dim": d, "p_X": p} for e, d, p in self.rows]}


def mx_weight_dims(alg, lam, X: Sequence, depth: int, cfg: DeformationConfig | None = None) -> MXReport:
    """dim_B of each weight space of M(lambda + T xi)_B / sum U theta_gamma v, compared with p_X."""
    alg = _alg(alg)
    rs = alg.rs
    vals = cartan.values_of(rs, lam)
    xs = check_orthogonal_isotropic(alg, [_root(alg, g) for g in X])
    roots = [rs.positive[i] for i in sorted(xs)]
    for g in roots:
        if cartan.shifted_pair(rs, vals, g.simple) != 0:
            raise errors.PreconditionViolated(f"lambda is not on H_{g.name}")
    cfg = cfg or deformation_config(alg, [g.name for g in roots], purpose="mx")
    thetas = [compute_shapovalov(alg, g, 1) for g in roots]
    rows = []
    passed = True
    for eta in etas_up_to(alg.rank, depth):
        basis = partitions(alg, eta)
        if thetas:
            r = _generic_rank(lambda t: _rank_of(
                _submodule_vectors(alg, thetas, _at(vals, cfg.xi, t), eta), basis))
        else:
            r = 0
        dim = len(basis) - r
        expect = partition_count(alg, eta, xs)
        rows.append((eta, dim, expect))
        if dim != expect:
            raise errors.DimensionMismatch(f"dim M^X at eta={eta} is {dim}, expected {expect}")
    series = None
    if len(roots) == 2:
        series = series_memberships(alg, vals, cfg, roots[0], roots[1])
        passed = all(series.values())
        if not passed:
            raise errors.VerificationFailure(f"series memberships fail: {series}")
    return MXReport([g.name for g in roots], vals, depth, rows, passed, series, cfg)


def series_memberships(alg: UAlgebra, vals, cfg: DeformationConfig, g1: Root, g2: Root) -> dict:
    """theta_g theta_g' v in W_2, theta_g' theta_g v in W_3, theta_g' theta_g theta_g' v = 0."""
    rs = alg.rs
    t1 = compute_shapovalov(alg, g1, 1)
    t2 = compute_shapovalov(alg, g2, 1)
    res = {"theta_g theta_g' v in W2": True, "theta_g' theta_g v in W3": True,
           "theta_g' theta_g theta_g' v = 0": True}
    eta = tuple(a + b for a, b in zip(g1.simple, g2.simple))
    basis = partitions(alg, eta)
    for t in T_POINTS[:2]:
        lt = _at(vals, cfg.xi, t)
        v12 = alg.neg_product(t1.evaluate(cartan.minus(rs, lt, g2.simple)), t2.evaluate(lt))
        v21 = alg.neg_product(t2.evaluate(cartan.minus(rs, lt, g1.simple)), t1.evaluate(lt))
        w2 = [alg.neg_product({pi: 1}, t1.evaluate(lt)) for pi in partitions(alg, g2.simple)]
        if _rank_of(w2 + [v12], basis) != _rank_of(w2, basis):
            res["theta_g theta_g' v in W2"] = False
        if _rank_of([v12, v21], basis) != _rank_of([v12], basis):
            res["theta_g' theta_g v in W3"] = False
        both = tuple(a + b for a, b in zip(g1.simple, g2.simple))
        v212 = alg.neg_product(t2.evaluate(cartan.minus(rs, lt, both)), v12)
        if any(v212.values()):
            res["theta_g' theta_g theta_g' v = 0"] = False
    return res


def character_additivity(alg, gamma, depth: int) -> bool:
    """p(eta) = p_gamma(eta) + p_gamma(eta - gamma) for every eta within depth."""
    alg = _alg(alg)
    g = _root(alg, gamma)
    gi = alg.rs.index(g)
    for eta in etas_up_to(alg.rank, depth):
        rest = _sub(eta, g.simple)
        shifted = 0 if min(rest) < 0 else partition_count(alg, rest, (gi,))
        if partition_count(alg, eta) != partition_count(alg, eta, (gi,)) + shifted:
            return False
    return True


# -- strict kernel -------------------------------------------------------------------

@dataclass
class KernelRow:
    eta: tuple
    kernel_dim: int        # specialized lattice kernel of M(lambda) -> M^gamma(lambda)
    generated_dim: int     # U(g) theta_gamma v_lambda

    @property
    def strict(self) -> bool:
        return self.kernel_dim > self.generated_dim


@dataclass
class KernelProbe:
    gamma: str
    values: tuple
    depth: int
    rows: list
    cfg: DeformationConfig | None = None

    @property
    def strict_at(self) -> list:
        return [r.eta for r in self.rows if r.strict]

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "lambda": [str(v) for v in self.values], "depth": self.depth,
                "strict_at": [list(e) for e in self.strict_at],
                "rows": [{"eta": list(r.eta), "kernel": r.kernel_dim, "generated": r.generated_dim}
                         for r in self.rows]}


def strict_kernel_probe(alg, lam, gamma, depth: int, cfg: DeformationConfig | None = None) -> KernelProbe:
    alg = _alg(alg)
    rs = alg.rs
    vals = cartan.values_of(rs, lam)
    g = _root(alg, gamma)
    if not g.isotropic:
        raise errors.NotIsotropic(f"{g.name} is not isotropic")
    if cartan.shifted_pair(rs, vals, g.simple) != 0:
        raise errors.PreconditionViolated(f"lambda is not on H_{g.name}")
    cfg = cfg or deformation_config(alg, [g.name], purpose="mx")
    theta = compute_shapovalov(alg, g, 1)
    rows = []
    for eta in etas_up_to(alg.rank, depth):
        basis = partitions(alg, eta)
        kernel = _generic_rank(lambda t: _rank_of(
            _submodule_vectors(alg, [theta], _at(vals, cfg.xi, t), eta), basis))
        generated = _rank_of(_submodule_vectors(alg, [theta], vals, eta), basis)
        rows.append(KernelRow(eta, kernel, generated))
    return KernelProbe(g.name, vals, depth, rows, cfg)


# -- two orthogonal isotropic roots ------------------------------------------------

@dataclass
class PigReport:
    gamma: str
    gamma2: str
    values: tuple
    depth: int
    rows: list            # dicts per eta
    max_valuation: int
    profile_at_sum: tuple
    valuation_counts_at_sum: tuple
    passed: bool
    cfg: DeformationConfig | None = None

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "gamma2": self.gamma2, "lambda": [str(v) for v in self.values],
                "depth": self.depth, "passed": self.passed, "max_valuation": self.max_valuation,
                "layers_at_gamma_plus_gamma2": list(self.profile_at_sum),
                "valuation_counts_at_gamma_plus_gamma2": list(self.valuation_counts_at_sum),
                "xi": None if self.cfg is None else self.cfg.to_json(),
                "rows": self.rows}


def check_generic_pair(rs: RootSystem, vals, g1: Root, g2: Root, depth: int) -> None:
    """Weak genericity of every mu in lambda + Z g1 + Z g2 with |r|, |s| <= depth."""
    want = {g1.coords, g2.coords}
    for r, s in itertools.product(range(-depth, depth + 1), repeat=2):
        mu = cartan.minus(rs, cartan.minus(rs, vals, g1.simple, r), g2.simple, s)
        a_set, b_set = rs.ab_sets(rs.weight_from_cartan_values(mu))
        if a_set or {b.coords for b in b_set} != want:
            raise errors.NotGenericSample(f"lambda - {r}{g1.name} - {s}{g2.name} is not weakly generic")


def pig_check(alg, lam, gamma, gamma2, depth: int, cfg: DeformationConfig | None = None) -> PigReport:
    alg = _alg(alg)
    rs = alg.rs
    vals = cartan.values_of(rs, lam)
    g1, g2 = _root(alg, gamma), _root(alg, gamma2)
    check_orthogonal_isotropic(alg, [g1, g2])
    for g in (g1, g2):
        if cartan.shifted_pair(rs, vals, g.simple) != 0:
            raise errors.NotGenericSample(f"lambda is not on H_{g.name}")
    check_generic_pair(rs, vals, g1, g2, depth)
    from .shapovalov import kt_proportionality
    try:
        kt_proportionality(alg, g1, g2, lam=vals)
    except errors.DegenerateSample as exc:
        raise errors.NotGenericSample(str(exc))
    cfg = cfg or deformation_config(alg)
    i1, i2 = rs.index(g1), rs.index(g2)
    both = tuple(a + b for a, b in zip(g1.simple, g2.simple))
    rows = []
    passed = True
    max_val = 0
    profile = counts = ()
    for eta in etas_up_to(alg.rank, depth):
        res = _layer_result(alg, vals, cfg, eta)
        r1, r2, r12 = _sub(eta, g1.simple), _sub(eta, g2.simple), _sub(eta, both)
        rhs = (0 if min(r1) < 0 else partition_count(alg, r1, (i1,))) + \
              (0 if min(r2) < 0 else partition_count(alg, r2, (i2,)))
        second = 0 if min(r12) < 0 else partition_count(alg, r12, (i1, i2))
        layers = res.layers
        d2 = layers[1] if len(layers) > 1 else 0
        ok = res.total == rhs and max(res.valuations, default=0) <= 2 and d2 == second
        passed = passed and ok
        max_val = max(max_val, max(res.valuations, default=0))
        if eta == both:
            profile, counts = layers, res.valuation_counts
        rows.append({"eta": list(eta), "layers": list(layers), "sum": res.total, "rhs": rhs,
                     "d2": d2, "expected_d2": second, "ok": ok})
    return PigReport(g1.name, g2.name, vals, depth, rows, max_val, profile, counts, passed, cfg)
