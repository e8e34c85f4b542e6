import json
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from theta_forge import cartan, errors
from theta_forge import shapovalov as S
from theta_forge.pbw import algebra
from theta_forge.verma import singular_vectors

from conftest import PRESETS


def _mono(alg, **exps):
    names = [r.name for r in alg.rs.positive]
    out = [0] * alg.nroots
    for name, k in exps.items():
        out[names.index(name.replace("_", "+"))] = k
    return tuple(out)


def test_sl21_odd_root_element():
    alg = algebra("sl(2|1)")
    theta = S.compute_shapovalov(alg, "a+b")
    ring = alg.ring
    assert theta.coeffs == {_mono(alg, a_b=1): ring.var(0), _mono(alg, a=1, b=1): ring.one()}
    assert theta.eliminated == "h_b"


def test_sl3_evaluation():
    alg = algebra("sl(3)")
    theta = S.compute_shapovalov(alg, "a+b")
    got = theta.evaluate((-2, 1))
    assert got == {_mono(alg, a_b=1): -2, _mono(alg, a=1, b=1): 1}


@pytest.mark.parametrize("spec", ["sl(2)", "sl(3)", "sl(2|1)"])
def test_simple_even_root_square(spec):
    alg = algebra(spec)
    theta = S.compute_shapovalov(alg, "a", 2)
    assert theta.coeffs == {_mono(alg, a=2): alg.ring.one()}


def test_isotropic_needs_m_one():
    with pytest.raises(errors.PreconditionViolated):
        S.compute_shapovalov("sl(2|1)", "a+b", 2)


def test_unknown_method():
    with pytest.raises(errors.ThetaForgeError):
        S.compute_shapovalov("sl(3)", "a+b", method="guess")


@pytest.mark.parametrize("spec,gamma,m", [
    ("sl(3)", "a+b", 1), ("sl(3)", "a+b", 2), ("sl(4)", "a+b+c", 1),
    ("sl(2|1)", "a+b", 1), ("gl(2|2)", "a+b+c", 1), ("gl(2|2)", "b+c", 1),
    ("osp(2|4)", "a+b", 1),
])
def test_defining_property(spec, gamma, m):
    theta = S.compute_shapovalov(spec, gamma, m)
    assert S.verify_defining_property(theta).passed


def test_corrupted_element_is_rejected():
    theta = S.compute_shapovalov("sl(3)", "a+b")
    alg = theta.alg
    bad = dict(theta.coeffs)
    key = _mono(alg, a_b=1)
    bad[key] = bad[key] + alg.ring.one()
    with pytest.raises(errors.PropertyViolated):
        S.verify_defining_property(replace(theta, coeffs=bad))


def test_singular_at_random_points_of_hyperplane():
    # theta(lambda) v_lambda spans the singular space at generic hyperplane points
    alg = algebra("sl(4)")
    theta = S.compute_shapovalov(alg, "a+b+c")
    hp = theta.hyperplane
    for free in [(Fraction(1, 3), Fraction(-2, 7)), (Fraction(5, 2), Fraction(1, 9))]:
        vals = hp.point(free)
        sing = singular_vectors(alg, vals, theta.weight)
        assert len(sing) == 1
        got = theta.evaluate(vals)
        ratio = S._vector_ratio(got, sing[0])
        assert ratio not in (None, 0)


def test_degree_report_sl4():
    rep = S.degree_report(S.compute_shapovalov("sl(4)", "a+b+c"))
    assert rep.d == 2
    assert [(a, int(e)) for a, e in rep.leading_exponents] == [("a", 1), ("a+b", 1)]
    assert rep.leading_scalar == 1


@pytest.mark.parametrize("spec", ["sl(3)", "sl(2|1)", "gl(2|2)", "osp(2|4)"])
def test_degree_bound_all_roots(spec):
    alg = algebra(spec)
    for root in alg.rs.positive:
        theta = S.compute_shapovalov(alg, root, 1)
        rep = S.degree_report(theta)
        for mono, d in rep.degrees.items():
            assert sum(mono) + d <= root.height


@pytest.mark.parametrize("spec", ["sl(2|1)", "gl(2|2)", "gl(1|3)", "osp(2|4)"])
def test_square_vanishes(spec):
    alg = algebra(spec)
    for root in alg.rs.positive:
        if root.isotropic:
            assert S.square_check(alg, root).vanishes


def test_square_needs_isotropic():
    with pytest.raises(errors.NotIsotropic):
        S.square_check("sl(2|1)", "a")


@pytest.mark.parametrize("spec,gamma,m", [
    ("sl(3)", "a+b", 1), ("sl(3)", "a+b", 2), ("sl(4)", "a+b+c", 1),
    ("sl(2|1)", "a+b", 1), ("gl(2|2)", "a+b+c", 1),
])
def test_methods_agree(spec, gamma, m):
    assert S.method_agreement(spec, gamma, m)


@pytest.mark.parametrize("spec", PRESETS)
def test_json_round_trip(spec):
    alg = algebra(spec)
    root = max(alg.rs.positive, key=lambda r: r.height)
    theta = S.compute_shapovalov(alg, root)
    back = S.ShapovalovElement.from_json(json.loads(json.dumps(theta.to_json())))
    assert back.coeffs == theta.coeffs
    assert back.gamma == theta.gamma
    assert S.verify_defining_property(back).passed


def test_reduction_is_idempotent():
    theta = S.compute_shapovalov("gl(2|2)", "a+b+c")
    assert S.reduce_element(theta).coeffs == theta.coeffs


@given(st.fractions(max_denominator=20), st.fractions(max_denominator=20))
def test_theta_shift_matches_evaluation(x, y):
    alg = algebra("sl(3)")
    theta = S.compute_shapovalov(alg, "a+b")
    eta = (1, 0)
    shifted = theta.evaluate_symbolic(eta)
    direct = theta.evaluate(cartan.minus(alg.rs, (x, y), eta))
    via = {k: h.evaluate([x, y, 0]) for k, h in shifted.items()}
    assert {k: v for k, v in via.items() if v} == direct


# -- Borel chains ----------------------------------------------------------------

def test_chain_sl21():
    rep = S.borel_chain_compare("sl(2|1)", "a+b")
    assert rep.c == 1 and rep.F == [] and rep.verified and rep.symbolic


def test_chain_empty_for_simple_root():
    rep = S.borel_chain_compare("sl(2|1)", "b", chain=[])
    assert rep.c == 1 and rep.chain == []


def test_chain_gl22():
    rep = S.borel_chain_compare("gl(2|2)", "a+b+c")
    assert rep.verified and rep.symbolic
    assert rep.c != 0
    assert len(rep.steps) == len(rep.chain)


def test_chain_needs_isotropic():
    with pytest.raises(errors.NotIsotropic):
        S.borel_chain_compare("sl(3)", "a+b")


# -- identities -----------------------------------------------------------------

def test_man_pin_sl21():
    alg = algebra("sl(2|1)")
    rep = S.man_identity(alg, "a+b", "a", 1, "pin")
    assert rep.equal and rep.lhs
    # gamma' = b, theta_{a,2} = e_{-a}^2, so the right side is e_{-a}^2 e_{-b}
    assert rep.rhs == alg.neg_product({_mono(alg, a=2): 1}, {_mono(alg, b=1): 1})


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("side", ["pin", "pun"])
def test_man_identity_holds(p, side):
    assert S.man_identity("sl(2|1)", "a+b", "a", p, side).equal


def test_man_pun_needs_positive_p():
    with pytest.raises(errors.PreconditionViolated):
        S.man_identity("sl(2|1)", "a+b", "a", 0, "pun")


def test_man_rejects_weight_mismatch():
    with pytest.raises(errors.PreconditionViolated):
        S.man_identity("sl(2|1)", "b", "a", 1, "pin")


def test_kt_ratio_gl22():
    rep = S.kt_proportionality("gl(2|2)", "a+b", "b+c")
    assert rep.ratio == Fraction(-13, 46)
    assert rep.consistent
    swapped = S.kt_proportionality("gl(2|2)", "b+c", "a+b", lam=rep.values)
    assert swapped.ratio == 1 / rep.ratio


def test_kt_rejects_non_orthogonal():
    with pytest.raises(errors.NotOrthogonalIsotropic):
        S.kt_proportionality("gl(2|2)", "a+b", "b")


def test_generic_on_lies_on_hyperplanes():
    rs = algebra("gl(2|2)").rs
    g1, g2 = rs.root("a+b"), rs.root("b+c")
    vals = S.generic_on(rs, [g1, g2])
    assert cartan.shifted_pair(rs, vals, g1.simple) == 0
    assert cartan.shifted_pair(rs, vals, g2.simple) == 0
