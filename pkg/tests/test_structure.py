from fractions import Fraction

import pytest

from theta_forge.pbw import algebra
from theta_forge.structure import combine, super_jacobi_failures

from conftest import PRESETS
from oracle import label_matrix, _mul, _add


def real_of(name):
    return algebra(name).real


def idx(name, root):
    return algebra(name).rs.index(algebra(name).rs.root(root))


def test_gl21_odd_root_vectors():
    r = real_of("gl(2|1)")
    g = idx("gl(2|1)", "a+b")
    assert r.matrix(("p", g)) == {(0, 2): 1}
    assert r.matrix(("n", g)) == {(2, 0): 1}
    assert dict(r.bracket(("p", g), ("n", g))) == {("h", 0): 1, ("h", 1): 1}   # E11 + E33


def test_h_beta_is_e22_plus_e33():
    r = real_of("gl(2|1)")
    assert r.matrix(("h", 1)) == {(1, 1): 1, (2, 2): 1}
    b = idx("gl(2|1)", "b")
    assert dict(r.bracket(("p", b), ("n", b))) == {("h", 1): 1}
    assert dict(r.bracket(("h", 1), ("p", b))) == {}          # beta(h_beta) = 0


def test_sl2_cartan():
    assert real_of("sl(2)").matrix(("h", 0)) == {(0, 0): 1, (1, 1): -1}


def test_bracket_examples():
    r = real_of("gl(2|1)")
    a = idx("gl(2|1)", "a")
    ab = idx("gl(2|1)", "a+b")
    b = idx("gl(2|1)", "b")
    assert dict(r.bracket(("p", a), ("n", a))) == {("h", 0): 1}
    assert r.bracket(("p", ab), ("p", ab)) == ()
    assert dict(r.bracket(("n", a), ("n", b))) == {("n", ab): -1}


@pytest.mark.parametrize("name", PRESETS)
def test_normalization(name):
    alg = algebra(name)
    r = alg.real
    for i, g in enumerate(alg.rs.positive):
        want = {("h", k): c for k, c in enumerate(g.simple) if c}
        assert combine([r.bracket(("p", i), ("n", i))], r) == want


@pytest.mark.parametrize("name", PRESETS)
def test_root_vector_weights(name):
    alg = algebra(name)
    r = alg.real
    for i, g in enumerate(alg.rs.positive):
        for k, s in enumerate(alg.rs.simple):
            got = dict(r.bracket(("h", k), ("p", i)))
            val = alg.rs.pairing(s, g)
            assert got == ({("p", i): val} if val else {})
        assert r.is_odd(("p", i)) == g.odd


@pytest.mark.parametrize("name", PRESETS)
def test_brackets_agree_with_matrices(name):
    alg = algebra(name)
    r = alg.real
    for x in r.labels:
        for y in r.labels:
            mx, my = label_matrix(alg, x), label_matrix(alg, y)
            sign = -1 if r.is_odd(x) and r.is_odd(y) else 1
            want = _add(_mul(mx, my), _mul(my, mx), -sign)
            got = [[Fraction(0)] * len(mx) for _ in mx]
            for lab, c in r.bracket(x, y):
                got = _add(got, label_matrix(alg, lab), c)
            assert got == want, (x, y)


@pytest.mark.parametrize("name", PRESETS)
def test_super_antisymmetry(name):
    r = real_of(name)
    for x in r.labels:
        for y in r.labels:
            sign = 1 if r.is_odd(x) and r.is_odd(y) else -1
            assert dict(r.bracket(x, y)) == {k: sign * c for k, c in r.bracket(y, x)}


@pytest.mark.parametrize("name", ["sl(3)", "sl(2|1)", "gl(2|2)", "osp(2|4)", "osp(2|4)@anti"])
def test_super_jacobi(name):
    assert super_jacobi_failures(real_of(name)) == []


@pytest.mark.parametrize("name", PRESETS)
def test_positive_brackets_are_root_vectors(name):
    alg = algebra(name)
    rs = alg.rs
    for i, g in enumerate(rs.positive):
        for j, s in enumerate(rs.positive):
            terms = dict(alg.real.bracket(("p", i), ("p", j)))
            total = tuple(a + b for a, b in zip(g.coords, s.coords))
            if not terms:
                continue
            (lab, _), = terms.items()
            assert lab[0] == "p" and rs.positive[lab[1]].coords == total
