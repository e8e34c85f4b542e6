"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line in ``RESULTS``; conftest prints them as a
block at the end of the session. Running this file directly prints the same
lines without pytest.
"""
import functools
import itertools
import time

from theta_forge import cartan
from theta_forge import jantzen as J
from theta_forge import shapovalov as S
from theta_forge.pbw import algebra
from theta_forge.verma import p_x_character, partition_count, singular_vectors

from conftest import PRESETS

RESULTS: dict = {}

DEFINING_PRESETS = ["sl(3)", "sl(4)", "sl(2|1)", "gl(2|2)", "osp(2|4)"]


def criterion(n, label):
    """Run the body, which returns (ok, detail), and record one verdict line."""
    def wrap(body):
        @functools.wraps(body)
        def test():
            try:
                ok, detail = body()
            except Exception as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            RESULTS[n] = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {label}" + \
                (f"  [{detail}]" if detail else "")
            assert ok, RESULTS[n]
        return test
    return wrap


def _elements(spec):
    """(alg, gamma, m) for every non-simple positive gamma; m = 1, 2 unless gamma is isotropic."""
    alg = algebra(spec)
    for root in alg.rs.positive:
        if root.height == 1:
            continue
        for m in ((1,) if root.isotropic else (1, 2)):
            yield alg, root, m


def _minus_rho(alg):
    return tuple(-x for x in alg.rs.cartan_values(alg.rs.rho))


def _generic(alg, *names):
    return S.generic_on(alg.rs, [alg.rs.root(n) for n in names])


@criterion(1, "defining property for every non-simple root, m = 1, 2")
def test_criterion_01_defining_property():
    timings = {}
    for spec in DEFINING_PRESETS:
        S._MEMO.clear()
        start = time.perf_counter()
        for _alg, root, m in _elements(spec):
            S.verify_defining_property(S.compute_shapovalov(spec, root, m, use_cache=False))
        timings[spec] = time.perf_counter() - start
    worst = max(timings, key=timings.get)
    return timings[worst] < 60, f"slowest {worst} {timings[worst]:.1f}s"


@criterion(2, "theta spans the brute-force singular line")
def test_criterion_02_oracle_equivalence():
    checked = 0
    values = list(itertools.islice(cartan.rational_sequence(3), 12))
    for spec in DEFINING_PRESETS:
        for alg, root, m in _elements(spec):
            theta = S.compute_shapovalov(alg, root, m)
            hp = theta.hyperplane
            n = 0
            for free in itertools.islice(cartan.grid_points(len(hp.free), values), 10):
                vals = hp.point(free)
                sing = singular_vectors(alg, vals, theta.weight)
                if len(sing) != 1:
                    return False, f"{spec} {root.name} m={m}: singular space of dim {len(sing)}"
                got = theta.evaluate(vals)
                normalized = {k: v / got[theta.pi0] for k, v in got.items()}
                oracle = {k: v / sing[0][theta.pi0] for k, v in sing[0].items()}
                if normalized != oracle:
                    return False, f"{spec} {root.name} m={m} at {vals}"
                n += 1
            if n < 10:
                return False, f"{spec} {root.name}: only {n} samples"
            checked += n
    return True, f"{checked} samples"


@criterion(3, "degree bound, leading term, unique maximizer at m pi^gamma")
def test_criterion_03_degree_and_leading_term():
    count = 0
    for spec in DEFINING_PRESETS:
        for alg, root, m in _elements(spec):
            theta = S.compute_shapovalov(alg, root, m)
            rep = S.degree_report(theta)
            top = [k for k, d in rep.degrees.items() if d == rep.d]
            if top != [theta.top_partition]:
                return False, f"{spec} {root.name} m={m}: maximizers {top}"
            count += 1
    return True, f"{count} elements"


@criterion(4, "solve_interpolate == recursion")
def test_criterion_04_method_agreement():
    count = 0
    for spec in PRESETS:
        alg = algebra(spec)
        for root in alg.rs.positive:
            if root.height == 1 or S._weyl_data(alg.rs, root) is None:
                continue
            for m in ((1,) if root.isotropic else (1, 2)):
                S.method_agreement(alg, root, m)
                count += 1
    return True, f"{count} elements"


@criterion(5, "theta_gamma(lambda - gamma) theta_gamma(lambda) = 0")
def test_criterion_05_square_vanishing():
    count = 0
    for spec in PRESETS:
        alg = algebra(spec)
        for root in alg.rs.positive:
            if root.isotropic:
                S.square_check(alg, root)
                count += 1
    return True, f"{count} isotropic roots"


@criterion(6, "Borel-chain proportionality")
def test_criterion_06_borel_chain():
    rep = S.borel_chain_compare("sl(2|1)", "a+b")
    ok = rep.c == 1 and rep.F == [] and rep.symbolic
    details = [f"sl(2|1) c={rep.c}"]
    for spec in ("gl(2|2)", "osp(2|4)"):
        alg = algebra(spec)
        for root in alg.rs.positive:
            if root.isotropic and root.height > 1:
                r = S.borel_chain_compare(alg, root, nsamples=20)
                ok = ok and r.c != 0 and r.samples >= 20
                details.append(f"{spec} {root.name} c={r.c}")
    return ok, "; ".join(details)


@criterion(7, "p_gamma(eta - gamma) + p_gamma(eta) = p(eta), product expansion")
def test_criterion_07_partition_identity():
    count = 0
    for spec in PRESETS:
        alg = algebra(spec)
        iso = [r for r in alg.rs.positive if r.isotropic]
        for root in iso:
            if not J.character_additivity(alg, root, 8):
                return False, f"{spec} {root.name}"
            p_x_character(alg, [root], 8)
            count += 1
        p_x_character(alg, (), 8)
    return True, f"{count} isotropic roots to height 8"


@criterion(8, "dim M^X(lambda) = p_X")
def test_criterion_08_mx_character():
    # sl(2|2) has a degenerate centre, so gl(2|2) stands in for it
    runs = 0
    for spec in ("sl(2|1)", "gl(2|2)"):
        alg = algebra(spec)
        for root in alg.rs.positive:
            if root.isotropic:
                J.mx_weight_dims(alg, _generic(alg, root.name), [root.name], 6)
                runs += 1
    alg = algebra("gl(2|2)")
    for pair in (("a+b", "b+c"), ("a+b+c", "b")):
        J.mx_weight_dims(alg, _generic(alg, *pair), list(pair), 5)
        runs += 1
    return True, f"{runs} runs"


@criterion(9, "sum formula to depth 6")
def test_criterion_09_sum_formula():
    sl2 = algebra("sl(2)")
    for n in (1, 2, 3):
        rep = J.sum_formula_report(sl2, (n - 1,), 6)
        for row in rep.rows:
            # the right side is ch M(s_a . lambda) = e^{lambda - n a} p
            expect = partition_count(sl2, (row.eta[0] - n,)) if row.eta[0] >= n else 0
            if not row.lhs == row.rhs == expect:
                return False, f"sl(2) n={n} at {row.eta}"
    sl21 = algebra("sl(2|1)")
    for name in ("b", "a+b"):
        if not J.sum_formula_report(sl21, _generic(sl21, name), 6).passed:
            return False, f"sl(2|1) on H_{name}"
    gl22 = algebra("gl(2|2)")
    for root in gl22.rs.positive:
        if root.isotropic:
            rep = J.sum_formula_report(gl22, _generic(gl22, root.name), 6)
            if not (rep.passed and rep.B == [root.name]):
                return False, f"gl(2|2) on H_{root.name}"
    return True, ""


@criterion(10, "two orthogonal isotropic roots in gl(2|2)")
def test_criterion_10_two_orthogonal_roots():
    alg = algebra("gl(2|2)")
    pair = ("a+b+c", "b")
    rep = J.pig_check(alg, _generic(alg, *pair), *pair, 5)
    kt = S.kt_proportionality(alg, *pair)
    back = S.kt_proportionality(alg, pair[1], pair[0], lam=kt.values)
    ok = (rep.passed and rep.max_valuation <= 2
          and rep.valuation_counts_at_sum == (2, 1)
          and kt.consistent and kt.ratio != 0 and back.ratio * kt.ratio == 1)
    return ok, (f"valuation counts {rep.valuation_counts_at_sum}, layers {rep.profile_at_sum}, "
                f"ratio {kt.ratio}")


@criterion(11, "pin and pun for p = 1, 2, 3")
def test_criterion_11_man_identities():
    ok = all(S.man_identity("sl(2|1)", "a+b", "a", p, side).equal
             for p in (1, 2, 3) for side in ("pin", "pun"))
    return ok, ""


@criterion(12, "strict kernel inclusion at -rho, none for generic lambda on H_b")
def test_criterion_12_strict_kernel():
    # not reproducible at -rho; the analysis is in the decisions ledger
    alg = algebra("sl(2|1)")
    at_rho = {g: J.strict_kernel_probe(alg, _minus_rho(alg), g, 6).strict_at for g in ("b", "a+b")}
    generic = J.strict_kernel_probe(alg, _generic(alg, "b"), "b", 6).strict_at
    return any(at_rho.values()) and not generic, f"strict at -rho: {at_rho}; generic: {generic}"


if __name__ == "__main__":
    import sys
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(0 if all(" PASS " in line for line in RESULTS.values()) else 1)
