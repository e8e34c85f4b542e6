"""Root systems of the preset algebras, Weyl data and odd reflections.

Weights and roots are stored in the epsilon|delta coordinate basis, where the
invariant form is diagonal: (e_i, e_j) = delta_ij, (d_i, d_j) = -delta_ij.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import errors
from .linalg import solve_particular, solve_unique

FAMILIES = ("sl_n", "gl_mn", "sl_mn", "osp_2_2n")
LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class AlgebraSpec:
    family: str
    ranks: tuple
    borel: str = "distinguished"
    chain: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise errors.UnsupportedFamily(f"unknown family {self.family!r}")
        if any(r < 1 for r in self.ranks):
            raise errors.UnsupportedFamily(f"ranks must be positive: {self.ranks}")
        if self.family == "sl_n" and (len(self.ranks) != 1 or self.ranks[0] < 2):
            raise errors.UnsupportedFamily("sl(N) needs N >= 2")
        if self.family in ("gl_mn", "sl_mn") and len(self.ranks) != 2:
            raise errors.UnsupportedFamily("gl(M|N)/sl(M|N) need two ranks")
        if self.family == "sl_mn" and self.ranks[0] == self.ranks[1]:
            raise errors.UnsupportedFamily("sl(N|N) has a degenerate centre; use gl(N|N)")
        if self.family == "osp_2_2n" and len(self.ranks) != 1:
            raise errors.UnsupportedFamily("osp(2|2N) takes a single rank")
        if self.borel not in ("distinguished", "anti_distinguished", "chain"):
            raise errors.UnsupportedFamily(f"unknown Borel {self.borel!r}")

    @property
    def name(self) -> str:
        if self.family == "sl_n":
            base = f"sl({self.ranks[0]})"
        elif self.family == "osp_2_2n":
            base = f"osp(2|{2 * self.ranks[0]})"
        else:
            pre = "gl" if self.family == "gl_mn" else "sl"
            base = f"{pre}({self.ranks[0]}|{self.ranks[1]})"
        if self.borel == "anti_distinguished":
            return base + "@anti"
        if self.borel == "chain":
            return base + "@chain[" + ",".join(map(str, self.chain)) + "]"
        return base


_SPEC_RE = re.compile(
    r"^\s*(?:(sl)\((\d+)\)|(gl|sl)\((\d+)\|(\d+)\)|osp\(2\|(\d+)\))"
    r"(?:@(distinguished|anti|chain\[([\d,\s]*)\]))?\s*$"
)


def parse_algebra(text: str) -> AlgebraSpec:
    """Parse ``sl(N)``, ``gl(M|N)``, ``sl(M|N)``, ``osp(2|2N)`` with optional Borel suffix."""
    m = _SPEC_RE.match(text)
    if not m:
        raise errors.UnsupportedFamily(f"cannot parse algebra {text!r}")
    if m.group(1):
        family, ranks = "sl_n", (int(m.group(2)),)
    elif m.group(3):
        family = "gl_mn" if m.group(3) == "gl" else "sl_mn"
        ranks = (int(m.group(4)), int(m.group(5)))
    else:
        two_n = int(m.group(6))
        if two_n % 2:
            raise errors.UnsupportedFamily("osp(2|2N) needs an even second rank")
        family, ranks = "osp_2_2n", (two_n // 2,)
    suffix = m.group(7)
    if suffix is None or suffix == "distinguished":
        return AlgebraSpec(family, ranks)
    if suffix == "anti":
        return AlgebraSpec(family, ranks, "anti_distinguished")
    steps = tuple(int(s) for s in m.group(8).split(",") if s.strip())
    return AlgebraSpec(family, ranks, "chain", steps)


@dataclass(frozen=True)
class Weight:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def __add__(self, other):
        _check_dims(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords, _coords(other))))

    def __sub__(self, other):
        _check_dims(self, other)
        return Weight(tuple(a - b for a, b in zip(self.coords, _coords(other))))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, c):
        c = Fraction(c)
        return Weight(tuple(a * c for a in self.coords))

    __rmul__ = __mul__

    def __len__(self):
        return len(self.coords)


def _coords(x):
    return x.coords


def _check_dims(a, b):
    if len(a.coords) != len(b.coords):
        raise errors.DimensionMismatch(f"{len(a.coords)} != {len(b.coords)}")


@dataclass(frozen=True)
class Root(Weight):
    odd: bool = False
    isotropic: bool = False
    simple: tuple = ()
    height: int = 0
    name: str = ""

    @property
    def parity(self) -> str:
        return "odd" if self.odd else "even"

    @property
    def weight(self) -> Weight:
        return Weight(self.coords)

    def __repr__(self):
        return f"Root({self.name or self.coords})"


@dataclass(frozen=True)
class WeylWord:
    """Product s_{i1} s_{i2} ... of even simple reflections (indices into the simple basis)."""
    letters: tuple = ()

    @property
    def length(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class BorelChain:
    steps: tuple                      # isotropic roots alpha_1..alpha_r (coords)
    bases: tuple                      # simple bases b^(0), ..., b^(r)
    positions: tuple = ()


def _family_layout(spec: AlgebraSpec):
    """Coordinate names, form signs, all roots as (coords, odd), distinguished basis."""
    if spec.family == "osp_2_2n":
        n = spec.ranks[0]
        names = ["e1"] + [f"d{j + 1}" for j in range(n)]
        signs = [1] + [-1] * n
        dim = n + 1

        def vec(pairs):
            v = [0] * dim
            for i, c in pairs:
                v[i] += c
            return tuple(Fraction(x) for x in v)

        roots = []
        for i in range(n):
            for j in range(i + 1, n):
                for s1, s2 in itertools.product((1, -1), repeat=2):
                    roots.append((vec([(1 + i, s1), (1 + j, s2)]), False))
            for s in (1, -1):
                roots.append((vec([(1 + i, 2 * s)]), False))
            for s1, s2 in itertools.product((1, -1), repeat=2):
                roots.append((vec([(0, s1), (1 + i, s2)]), True))
        basis = [vec([(0, 1), (1, -1)])]
        basis += [vec([(1 + j, 1), (2 + j, -1)]) for j in range(n - 1)]
        basis.append(vec([(n, 2)]))
        return names, signs, roots, basis

    if spec.family == "sl_n":
        m, n = spec.ranks[0], 0
    else:
        m, n = spec.ranks
    names = [f"e{i + 1}" for i in range(m)] + [f"d{j + 1}" for j in range(n)]
    signs = [1] * m + [-1] * n
    dim = m + n
    roots = []
    for i in range(dim):
        for j in range(dim):
            if i != j:
                v = [Fraction(0)] * dim
                v[i], v[j] = Fraction(1), Fraction(-1)
                roots.append((tuple(v), (i < m) != (j < m)))
    basis = []
    for i in range(dim - 1):
        v = [Fraction(0)] * dim
        v[i], v[i + 1] = Fraction(1), Fraction(-1)
        basis.append(tuple(v))
    return names, signs, roots, basis


def odd_reflection(basis: Sequence[tuple], alpha, signs: Sequence[int]) -> list:
    """Reflect a simple basis at the isotropic simple root ``alpha``.

    ``alpha`` may be a position in ``basis`` or a coordinate tuple/Root.
    """
    basis = [tuple(b) for b in basis]
    if isinstance(alpha, int):
        pos = alpha
        if not 0 <= pos < len(basis):
            raise errors.NotSimple(f"no simple root at position {pos}")
    else:
        coords = tuple(alpha.coords if isinstance(alpha, Weight) else alpha)
        if coords not in basis:
            raise errors.NotSimple(f"{coords} is not simple in this basis")
        pos = basis.index(coords)
    a = basis[pos]
    form = lambda x, y: sum(s * p * q for s, p, q in zip(signs, x, y))
    if form(a, a) != 0:
        raise errors.NotIsotropic(f"{a} is not isotropic")
    out = []
    for i, s in enumerate(basis):
        if i == pos:
            out.append(tuple(-c for c in a))
        elif form(s, a) != 0:
            out.append(tuple(p + q for p, q in zip(s, a)))
        else:
            out.append(s)
    return out


class RootSystem:
    """Positive system, simple basis, rho and the form for a preset algebra."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        names, signs, roots, basis = _family_layout(spec)
        self.coord_names = tuple(names)
        self.signs = tuple(signs)
        self.dim = len(signs)
        self._all = [(tuple(c), odd) for c, odd in roots]
        self._odd = {c: odd for c, odd in self._all}
        for c, odd in self._all:
            if not odd and self._form(c, c) == 0:
                raise errors.ThetaForgeError(f"even isotropic root {c}")
            if odd and self._form(c, c) != 0:
                raise errors.OddNonIsotropicRoot(f"odd root {c} is not isotropic")
        self.distinguished_basis = [tuple(b) for b in basis]
        bases = [self.distinguished_basis]
        steps = []
        positions = []
        if spec.borel == "anti_distinguished":
            positions = self._anti_chain_positions()
        elif spec.borel == "chain":
            positions = list(spec.chain)
        for pos in positions:
            if not 0 <= pos < len(bases[-1]):
                raise errors.NotSimple(f"chain step {pos} out of range")
            steps.append(bases[-1][pos])
            bases.append(odd_reflection(bases[-1], pos, self.signs))
        self.chain = BorelChain(tuple(steps), tuple(tuple(b) for b in bases), tuple(positions))
        self.basis = list(bases[-1])
        self.rank = len(self.basis)
        self._build_positive()

    # -- construction --------------------------------------------------
    def _form(self, x, y) -> Fraction:
        return sum((s * p * q for s, p, q in zip(self.signs, x, y)), Fraction(0))

    def _anti_chain_positions(self) -> list:
        """Greedy odd reflections at simple isotropic roots positive for the distinguished Borel."""
        dist_pos = {c for c, _ in self._all if self._positive_in(c, self.distinguished_basis)}
        basis = list(self.distinguished_basis)
        positions = []
        while True:
            pos = next((i for i, b in enumerate(basis)
                        if self._odd.get(b) and b in dist_pos), None)
            if pos is None:
                return positions
            positions.append(pos)
            basis = odd_reflection(basis, pos, self.signs)

    def _simple_coords_in(self, v, basis) -> tuple | None:
        rows = [[b[i] for b in basis] for i in range(self.dim)]
        sol = solve_unique(rows, list(v))
        return None if sol is None else tuple(sol)

    def _positive_in(self, v, basis) -> bool:
        c = self._simple_coords_in(v, basis)
        return c is not None and all(x >= 0 for x in c)

    def _build_positive(self):
        pos = []
        for c, odd in self._all:
            sc = self._simple_coords_in(c, self.basis)
            if sc is None:
                raise errors.ThetaForgeError(f"root {c} not in the root lattice span")
            if all(x >= 0 for x in sc):
                if any(x.denominator != 1 for x in sc):
                    raise errors.ThetaForgeError("non-integral simple coordinates")
                sc = tuple(int(x) for x in sc)
                pos.append(Root(c, odd, odd and self._form(c, c) == 0, sc, sum(sc),
                                self.name_of(sc)))
        pos.sort(key=lambda r: (-r.height, r.coords))
        self.positive = pos
        self._index = {r.coords: i for i, r in enumerate(pos)}
        self.simple = [self.positive[self._index[b]] for b in self.basis]
        self.simple_index = [self._index[b] for b in self.basis]

    # -- naming --------------------------------------------------------
    def name_of(self, simple_coords: Sequence[int]) -> str:
        parts = []
        for k, c in enumerate(simple_coords):
            if c:
                letter = LETTERS[k]
                parts.append(letter if c == 1 else f"{c}{letter}")
        return "+".join(parts) if parts else "0"

    @property
    def letters(self) -> tuple:
        return tuple(LETTERS[k] for k in range(self.rank))

    @property
    def cartan_names(self) -> tuple:
        return tuple(f"h_{l}" for l in self.letters)

    def root(self, name_or_coords) -> Root:
        """Positive root by name ("a+b", "2b+c", "e1-d2") or coordinates."""
        if isinstance(name_or_coords, Root):
            return self.positive[self.index(name_or_coords)]
        if isinstance(name_or_coords, str):
            sc = self.parse_root_coords(name_or_coords)
            coords = tuple(sum((Fraction(k) * b[i] for k, b in zip(sc, self.basis)), Fraction(0))
                           for i in range(self.dim))
        else:
            coords = tuple(Fraction(c) for c in getattr(name_or_coords, "coords", name_or_coords))
        if coords not in self._index:
            raise errors.ThetaForgeError(f"{name_or_coords!r} is not a positive root")
        return self.positive[self._index[coords]]

    def parse_root_coords(self, text: str) -> tuple:
        text = text.replace(" ", "")
        if re.search(r"[ed]\d", text):
            coords = [Fraction(0)] * self.dim
            for sign, coef, name in re.findall(r"([+-]?)(\d*)([ed]\d+)", text):
                if name not in self.coord_names:
                    raise errors.ThetaForgeError(f"unknown coordinate {name}")
                c = Fraction(int(coef) if coef else 1) * (-1 if sign == "-" else 1)
                coords[self.coord_names.index(name)] += c
            sc = self.simple_coords(coords)
            return tuple(int(x) for x in sc)
        sc = [0] * self.rank
        for sign, coef, letter in re.findall(r"([+-]?)(\d*)([a-z])", text):
            k = LETTERS.index(letter)
            if k >= self.rank:
                raise errors.ThetaForgeError(f"no simple root named {letter}")
            sc[k] += (int(coef) if coef else 1) * (-1 if sign == "-" else 1)
        return tuple(sc)

    def index(self, root) -> int:
        return self._index[tuple(root.coords)]

    # -- forms ---------------------------------------------------------
    def pairing(self, x, y) -> Fraction:
        cx, cy = _as_coords(x), _as_coords(y)
        if len(cx) != self.dim or len(cy) != self.dim:
            raise errors.DimensionMismatch(f"expected {self.dim} coordinates")
        return self._form(cx, cy)

    def coroot_pairing(self, lam, alpha) -> Fraction:
        aa = self.pairing(alpha, alpha)
        if aa == 0:
            raise errors.IsotropicCoroot(f"{alpha!r} is isotropic")
        return 2 * self.pairing(lam, alpha) / aa

    def simple_coords(self, v) -> tuple:
        sc = self._simple_coords_in(_as_coords(v), self.basis)
        if sc is None:
            raise errors.ThetaForgeError(f"{v} is not in the root span")
        return sc

    def from_simple_coords(self, sc: Sequence) -> Weight:
        return Weight(tuple(sum((Fraction(k) * b[i] for k, b in zip(sc, self.basis)), Fraction(0))
                            for i in range(self.dim)))

    def height_of(self, v) -> Fraction:
        return sum(self.simple_coords(v))

    @cached_property
    def rho0(self) -> Weight:
        return self._half_sum(False)

    @cached_property
    def rho1(self) -> Weight:
        return self._half_sum(True)

    @cached_property
    def rho(self) -> Weight:
        return self.rho0 - self.rho1

    def _half_sum(self, odd: bool) -> Weight:
        total = [Fraction(0)] * self.dim
        for r in self.positive:
            if r.odd == odd:
                total = [a + b for a, b in zip(total, r.coords)]
        return Weight(tuple(a / 2 for a in total))

    @property
    def even_positive(self) -> list:
        return [r for r in self.positive if not r.odd]

    @property
    def odd_positive(self) -> list:
        return [r for r in self.positive if r.odd]

    @property
    def isotropic_positive(self) -> list:
        return [r for r in self.positive if r.isotropic]

    def zero_weight(self) -> Weight:
        return Weight((0,) * self.dim)

    # -- Cartan coordinates ---------------------------------------------
    def cartan_values(self, lam) -> tuple:
        """(lam(h_a), lam(h_b), ...) = pairings of lam with the simple roots."""
        return tuple(self.pairing(lam, s) for s in self.simple)

    def weight_from_cartan_values(self, values: Sequence) -> Weight:
        rows = [[sg * c for sg, c in zip(self.signs, s.coords)] for s in self.simple]
        sol = solve_particular(rows, [Fraction(v) for v in values])
        if sol is None:
            raise errors.ThetaForgeError("inconsistent Cartan values")
        return Weight(tuple(sol))

    def reflect(self, v, alpha) -> Weight:
        c = self.coroot_pairing(v, alpha)
        return Weight(tuple(a - c * b for a, b in zip(_as_coords(v), alpha.coords)))

    def dot(self, alpha, lam) -> Weight:
        """Shifted action s_alpha . lam = s_alpha(lam + rho) - rho."""
        return self.reflect(Weight(_as_coords(lam)) + self.rho, alpha) - self.rho

    def on_hyperplane(self, lam, gamma, m: int = 1) -> bool:
        return self.pairing(Weight(_as_coords(lam)) + self.rho, gamma) == \
            m * self.pairing(gamma, gamma) / 2

    # -- Weyl group data ---------------------------------------------------
    @property
    def even_simple_positions(self) -> list:
        return [k for k, s in enumerate(self.simple) if not s.odd]

    def apply_word(self, word: WeylWord, v) -> Weight:
        out = Weight(_as_coords(v))
        for k in reversed(word.letters):
            out = self.reflect(out, self.simple[k])
        return out

    def find_weyl_expression(self, gamma) -> tuple:
        """Shortest (then lexicographically least) word w and simple beta with gamma = w beta."""
        target = tuple(_as_coords(gamma))
        even = self.even_simple_positions
        max_len = len(self.even_positive)
        for length in range(max_len + 1):
            for letters in itertools.product(even, repeat=length):
                word = WeylWord(tuple(letters))
                for beta in self.simple:
                    if self.apply_word(word, beta).coords == target:
                        return beta, word
        raise errors.NotInEvenOrbit(f"{gamma!r} is not W_even-conjugate to a simple root")

    def n_set_and_exponents(self, word: WeylWord, beta) -> list:
        """[(alpha, q(w, alpha)) for alpha in N(w^-1)] in word order."""
        gamma = self.apply_word(word, beta)
        out = []
        seen = set()
        for j, k in enumerate(word.letters):
            prefix = WeylWord(word.letters[:j])
            a = self.apply_word(prefix, self.simple[k])
            if a.coords not in self._index or a.coords in seen:
                raise errors.NonReducedWord(f"word {word.letters} is not reduced")
            seen.add(a.coords)
            root = self.positive[self._index[a.coords]]
            out.append((root, self.coroot_pairing(gamma, root)))
        return out

    def ab_sets(self, lam) -> tuple:
        shifted = Weight(_as_coords(lam)) + self.rho
        a_set = []
        for r in self.even_positive:
            v = self.coroot_pairing(shifted, r)
            if v.denominator == 1 and v > 0:
                a_set.append(r)
        b_set = [r for r in self.odd_positive if self.pairing(shifted, r) == 0]
        return a_set, b_set

    def __repr__(self):
        return f"RootSystem({self.spec.name})"


def _as_coords(x) -> tuple:
    return tuple(x.coords) if isinstance(x, Weight) else tuple(Fraction(c) for c in x)


def build_root_system(spec) -> RootSystem:
    if isinstance(spec, str):
        spec = parse_algebra(spec)
    return RootSystem(spec)
