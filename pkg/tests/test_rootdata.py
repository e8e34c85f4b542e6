from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from theta_forge import build_root_system, errors, parse_algebra
from theta_forge.rootdata import Weight, WeylWord, odd_reflection

from conftest import PRESETS, SUPER_PRESETS
from oracle import gl_roots

F = Fraction


def rs_of(name):
    return build_root_system(parse_algebra(name))


def test_sl21_positive_system():
    rs = rs_of("sl(2|1)")
    got = {(r.name, r.parity, r.isotropic) for r in rs.positive}
    assert got == {("a", "even", False), ("b", "odd", True), ("a+b", "odd", True)}
    assert rs.root("a").coords == (1, -1, 0)
    assert rs.root("b").coords == (0, 1, -1)


def test_sl3_has_no_isotropic_roots():
    rs = rs_of("sl(3)")
    assert sorted(r.name for r in rs.positive) == ["a", "a+b", "b"]
    assert rs.isotropic_positive == []


def test_sl21_rho_is_minus_beta():
    rs = rs_of("sl(2|1)")
    assert rs.rho == -rs.root("b").weight
    assert rs.coroot_pairing(rs.rho, rs.root("a")) == 1


@pytest.mark.parametrize("m,n", [(2, 1), (1, 3), (3, 1), (2, 2)])
def test_distinguished_roots_match_matrix_units(m, n):
    rs = rs_of(f"gl({m}|{n})")
    assert {(r.coords, r.odd) for r in rs.positive} == gl_roots(m, n)


def test_pairing_examples():
    rs = rs_of("sl(2|1)")
    a, b, ab = rs.root("a"), rs.root("b"), rs.root("a+b")
    assert rs.pairing(a, a) == 2
    assert rs.pairing(b, b) == 0
    assert rs.pairing(b, ab) == -1
    with pytest.raises(errors.DimensionMismatch):
        rs.pairing(Weight((1, 0)), a)


def test_coroot_pairing_examples():
    rs = rs_of("sl(2|1)")
    a = rs.root("a")
    assert rs.coroot_pairing(-rs.root("b").weight, a) == 1
    assert rs.coroot_pairing(rs.zero_weight(), a) == 0
    assert rs_of("sl(3)").coroot_pairing(rs_of("sl(3)").rho, rs_of("sl(3)").root("a")) == 1
    with pytest.raises(errors.IsotropicCoroot):
        rs.coroot_pairing(rs.rho, rs.root("b"))


def test_weyl_expressions():
    rs = rs_of("sl(2|1)")
    beta, w = rs.find_weyl_expression(rs.root("a+b"))
    assert beta.name == "b" and w == WeylWord((0,))
    beta, w = rs.find_weyl_expression(rs.root("b"))
    assert beta.name == "b" and w.length == 0
    r4 = rs_of("sl(4)")
    beta, w = r4.find_weyl_expression(r4.root("a+b+c"))
    assert beta.name == "c" and w.letters == (0, 1)
    assert [(a.name, q) for a, q in r4.n_set_and_exponents(w, beta)] == [("a", 1), ("a+b", 1)]


def test_n_set_examples():
    r3 = rs_of("sl(3)")
    assert [(a.name, q) for a, q in r3.n_set_and_exponents(WeylWord((0,)), r3.root("b"))] == [("a", 1)]
    assert r3.n_set_and_exponents(WeylWord(()), r3.root("b")) == []


@pytest.mark.parametrize("name", PRESETS)
def test_weyl_word_reproduces_gamma(name):
    rs = rs_of(name)
    for g in rs.positive:
        try:
            beta, w = rs.find_weyl_expression(g)
        except errors.NotInEvenOrbit:
            continue
        assert rs.apply_word(w, beta) == g.weight


@pytest.mark.parametrize("name", PRESETS)
def test_rho_halves(name):
    rs = rs_of(name)
    even = [sum(r.coords[i] for r in rs.positive if not r.odd) for i in range(rs.dim)]
    odd = [sum(r.coords[i] for r in rs.positive if r.odd) for i in range(rs.dim)]
    assert [2 * c for c in rs.rho0.coords] == even
    assert [2 * c for c in rs.rho1.coords] == odd


@pytest.mark.parametrize("name", PRESETS)
def test_rho_pairs_with_simple_roots(name):
    rs = rs_of(name)
    for s in rs.simple:
        assert rs.pairing(rs.rho, s) == rs.pairing(s, s) / 2


def test_odd_reflection_examples():
    rs = rs_of("sl(2|1)")
    new = odd_reflection(rs.basis, 1, rs.signs)
    assert set(new) == {rs.root("a+b").coords, tuple(-c for c in rs.root("b").coords)}
    assert odd_reflection(new, 1, rs.signs) == list(rs.basis)
    with pytest.raises(errors.NotIsotropic):
        odd_reflection(rs.basis, 0, rs.signs)


@pytest.mark.parametrize("name", SUPER_PRESETS)
def test_odd_reflection_involution_and_positive_flip(name):
    rs = rs_of(name)
    for k, s in enumerate(rs.simple):
        if not s.isotropic:
            continue
        new = odd_reflection(rs.basis, k, rs.signs)
        assert odd_reflection(new, k, rs.signs) == list(rs.basis)
        flipped = rs_of(rs.spec.name.split("@")[0] + "@chain[" + ",".join(
            map(str, list(rs.chain.positions) + [k])) + "]")
        old = {r.coords for r in rs.positive}
        now = {r.coords for r in flipped.positive}
        assert old - now == {s.coords}
        assert now - old == {tuple(-c for c in s.coords)}


def test_gl22_reflection_negates_isotropic_simple():
    rs = rs_of("gl(2|2)")
    b = rs.root("b")
    new = odd_reflection(rs.basis, 1, rs.signs)
    assert tuple(-c for c in b.coords) in new


def test_ab_sets_examples():
    rs = rs_of("sl(2|1)")
    a_set, b_set = rs.ab_sets(-rs.rho)
    assert a_set == [] and {g.name for g in b_set} == {"b", "a+b"}
    s2 = rs_of("sl(2)")
    lam = Weight((F(1), F(-1)))        # (lam + rho, alpha^vee) = 3
    a_set, b_set = s2.ab_sets(lam)
    assert [a.name for a in a_set] == ["a"] and b_set == []


def test_unsupported_and_bad_specs():
    with pytest.raises(errors.UnsupportedFamily):
        parse_algebra("sl(2|2)")
    with pytest.raises(errors.UnsupportedFamily):
        parse_algebra("so(5)")
    with pytest.raises(errors.UnsupportedFamily):
        parse_algebra("sl(1)")


@given(st.sampled_from(PRESETS), st.lists(st.integers(-4, 4), min_size=6, max_size=6),
       st.integers(0, 2))
def test_hyperplane_membership_is_affine(name, raw, m):
    rs = rs_of(name)
    lam = Weight(tuple(F(x, 2) for x in raw[:rs.dim]))
    for g in rs.positive:
        if g.isotropic and m != 1:
            continue
        target = m * rs.pairing(g, g) / 2
        gap = rs.pairing(lam + rs.rho, g) - target
        moved = lam - Weight(tuple(gap * c for c in g.coords)) * (1 / rs.pairing(g, g)) \
            if rs.pairing(g, g) else None
        if moved is not None:
            assert rs.on_hyperplane(moved, g, m)
        assert rs.on_hyperplane(lam, g, m) == (gap == 0)


@pytest.mark.parametrize("name", PRESETS)
def test_cartan_value_roundtrip(name):
    rs = rs_of(name)
    lam = Weight(tuple(F(k + 1, 3) for k in range(rs.dim)))
    vals = rs.cartan_values(lam)
    back = rs.weight_from_cartan_values(vals)
    assert rs.cartan_values(back) == vals
