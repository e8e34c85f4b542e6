"""Normal-ordered arithmetic in U(g).

PBW monomials are ``e_{-pi} H e_{pi'}``: lowering factors in the fixed root
order, a Cartan coefficient ``H`` in S(h)[T], raising factors in the same
order. Exponent tuples are indexed by positive-root index; an *order* is a
permutation of root indices deciding which factor is written first.

The Verma action is the fast path used everywhere else: ``raise_vector``
applies e_gamma to e_{-pi} v_lambda with lambda symbolic, so coefficients are
polynomials in the Cartan coordinates h_a, h_b, ...
"""
from __future__ import annotations

import json
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import errors
from .polynomial import Poly, PolyRing
from .rootdata import AlgebraSpec, RootSystem, parse_algebra
from .structure import Realization


def _add_into(acc: dict, key, value):
    v = acc.get(key)
    v = value if v is None else v + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class UAlgebra:
    """U(g) for one preset algebra and Borel, with memoized straightening."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.real = Realization(rs)
        self.nroots = len(rs.positive)
        self.rank = rs.rank
        self.ring = PolyRing(rs.cartan_names + ("T",))
        self.t_index = self.rank
        self.odd = tuple(r.odd for r in rs.positive)
        self.standard_order = tuple(range(self.nroots))
        # (alpha_k, gamma_i): Cartan shift caused by one factor e_{-gamma_i}
        self._shift = tuple(
            tuple(rs.pairing(s, r) for s in rs.simple) for r in rs.positive
        )
        self.simple_coords = tuple(r.simple for r in rs.positive)
        self._lock = threading.RLock()
        self._mul_memo: dict = {}
        self._raise_memo: dict = {}
        self._z_memo: dict = {}
        self._pos_memo: dict = {}
        self._hvars = tuple(self.ring.var(k) for k in range(self.rank))

    # -- small helpers ---------------------------------------------------
    def unit(self, i: int) -> tuple:
        e = [0] * self.nroots
        e[i] = 1
        return tuple(e)

    @property
    def empty(self) -> tuple:
        return (0,) * self.nroots

    def weight_of(self, mono: Sequence[int]) -> tuple:
        """Simple coordinates of sum mono_i gamma_i."""
        out = [0] * self.rank
        for i, k in enumerate(mono):
            if k:
                for j, c in enumerate(self.simple_coords[i]):
                    out[j] += k * c
        return tuple(out)

    def shift_of(self, mono: Sequence[int]) -> tuple:
        """((alpha_k, wt(mono)))_k."""
        out = [Fraction(0)] * self.rank
        for i, k in enumerate(mono):
            if k:
                for j, c in enumerate(self._shift[i]):
                    out[j] += k * c
        return tuple(out)

    def h_poly(self, coeffs: Sequence) -> Poly:
        """sum coeffs[k] h_{alpha_k}."""
        return self.ring.linear(list(coeffs) + [0])

    def cartan_of_root(self, i: int) -> Poly:
        return self.h_poly(self.simple_coords[i])

    def shift_poly(self, f: Poly, offsets: Sequence, sign: int = -1) -> Poly:
        """f(h_k + sign*offsets[k])."""
        if not any(offsets):
            return f
        return f.shift([sign * o for o in offsets] + [0])

    def letters(self, mono: Sequence[int], order: Sequence[int] | None = None) -> list:
        order = self.standard_order if order is None else order
        out = []
        for i in order:
            out.extend([i] * mono[i])
        return out

    # -- U(n^-) and U(n^+) with an arbitrary order ---------------------------
    def mul_letter(self, kind: str, s: int, mono: tuple, order: tuple | None = None) -> dict:
        """e_{-+gamma_s} * e_{mono} in the given order; constant coefficients."""
        order = self.standard_order if order is None else tuple(order)
        key = (kind, s, mono, order)
        memo = self._mul_memo.get(key)
        if memo is not None:
            return memo
        with self._lock:
            result = self._mul_letter(kind, s, mono, order)
            self._mul_memo[key] = result
        return result

    def _mul_letter(self, kind, s, mono, order):
        first = next((i for i in order if mono[i]), None)
        if first is None:
            return {self.unit(s): Fraction(1)}
        pos = self._positions(order)
        if s == first:
            if self.odd[s]:
                return {}
            m = list(mono)
            m[s] += 1
            return {tuple(m): Fraction(1)}
        if pos[s] < pos[first]:
            m = list(mono)
            m[s] += 1
            return {tuple(m): Fraction(1)}
        rest = list(mono)
        rest[first] -= 1
        rest = tuple(rest)
        out: dict = {}
        sign = -1 if (self.odd[s] and self.odd[first]) else 1
        for m, c in self.mul_letter(kind, s, rest, order).items():
            for m2, c2 in self.mul_letter(kind, first, m, order).items():
                _add_into(out, m2, sign * c * c2)
        for (lk, t), c in self.real.bracket((kind, s), (kind, first)):
            if lk != kind:
                raise errors.ThetaForgeError("bracket of same-sign root vectors left n")
            for m2, c2 in self.mul_letter(kind, t, rest, order).items():
                _add_into(out, m2, c * c2)
        return out

    def _positions(self, order: tuple) -> dict:
        pos = self._pos_memo.get(order)
        if pos is None:
            pos = self._pos_memo[order] = {i: p for p, i in enumerate(order)}
        return pos

    def mul_mono(self, kind: str, a: tuple, b: tuple, order: tuple | None = None) -> dict:
        """e_a * e_b for monomials of the same sign."""
        cur = {b: Fraction(1)}
        for s in reversed(self.letters(a, order)):
            nxt: dict = {}
            for m, c in cur.items():
                for m2, c2 in self.mul_letter(kind, s, m, order).items():
                    _add_into(nxt, m2, c * c2)
            cur = nxt
        return cur

    def neg_product(self, u: Mapping, w: Mapping, order: tuple | None = None) -> dict:
        """Product in U(n^-) of two mono->coeff maps (coefficients any ring)."""
        out: dict = {}
        for a, ca in u.items():
            for b, cb in w.items():
                for m, c in self.mul_mono("n", a, b, order).items():
                    _add_into(out, m, ca * cb * c)
        return out

    def reorder(self, u: Mapping, src: tuple | None, dst: tuple | None) -> dict:
        """Rewrite a U(n^-) element from PBW order ``src`` into order ``dst``."""
        out: dict = {}
        for mono, c in u.items():
            cur = {self.empty: Fraction(1)}
            for s in reversed(self.letters(mono, src)):
                nxt: dict = {}
                for m, cc in cur.items():
                    for m2, c2 in self.mul_letter("n", s, m, dst).items():
                        _add_into(nxt, m2, cc * c2)
                cur = nxt
            for m, cc in cur.items():
                _add_into(out, m, c * cc)
        return out

    def order_with_last(self, i: int) -> tuple:
        return tuple(j for j in self.standard_order if j != i) + (i,)

    # -- Verma action ------------------------------------------------------
    def raise_vector(self, s: int, mono: tuple) -> dict:
        """e_{gamma_s} e_{-mono} v_lambda as {mono': Poly in h}, lambda symbolic."""
        key = (s, mono)
        memo = self._raise_memo.get(key)
        if memo is not None:
            return memo
        with self._lock:
            result = self._raise_vector(s, mono)
            self._raise_memo[key] = result
        return result

    def _raise_vector(self, s, mono):
        first = next((i for i in self.standard_order if mono[i]), None)
        if first is None:
            return {}
        rest = list(mono)
        rest[first] -= 1
        rest = tuple(rest)
        out: dict = {}
        sign = -1 if (self.odd[s] and self.odd[first]) else 1
        for m, c in self.raise_vector(s, rest).items():
            for m2, c2 in self.mul_letter("n", first, m).items():
                _add_into(out, m2, c * (sign * c2))
        hpart = None
        for (lk, t), c in self.real.bracket(("p", s), ("n", first)):
            if lk == "h":
                term = self._hvars[t] * c
                hpart = term if hpart is None else hpart + term
            elif lk == "p":
                for m2, c2 in self.raise_vector(t, rest).items():
                    _add_into(out, m2, c2 * c)
            else:
                for m2, c2 in self.mul_letter("n", t, rest).items():
                    _add_into(out, m2, self.ring.const(c * c2))
        if hpart is not None:
            _add_into(out, rest, self.shift_poly(hpart, self.shift_of(rest)))
        return out

    # -- general U(g) straightening ------------------------------------------
    def z_product(self, s: int, mono: tuple) -> "UElement":
        """e_{gamma_s} e_{-mono} as a normal-ordered UElement."""
        key = (s, mono)
        memo = self._z_memo.get(key)
        if memo is not None:
            return memo
        with self._lock:
            result = self._z_product(s, mono)
            self._z_memo[key] = result
        return result

    def _z_product(self, s, mono):
        one = self.ring.one()
        first = next((i for i in self.standard_order if mono[i]), None)
        if first is None:
            return UElement(self, {(self.empty, self.unit(s)): one})
        rest = list(mono)
        rest[first] -= 1
        rest = tuple(rest)
        sign = -1 if (self.odd[s] and self.odd[first]) else 1
        out = self.z_product(s, rest).left_mul(("n", first)) * sign
        rest_el = UElement(self, {(rest, self.empty): one})
        for lab, c in self.real.bracket(("p", s), ("n", first)):
            out = out + rest_el.left_mul(lab) * c
        return out

    def element(self, terms: Mapping | None = None) -> "UElement":
        return UElement(self, terms or {})

    def one(self) -> "UElement":
        return UElement(self, {(self.empty, self.empty): self.ring.one()})

    def normal_order(self, word: Iterable) -> "UElement":
        """Straighten a word of basis labels and Cartan polynomials."""
        out = self.one()
        for letter in reversed(list(word)):
            out = out.left_mul(letter)
        return out


class UElement:
    """Finite sum of e_{-n} H e_{p} with H in S(h)[T]."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: UAlgebra, terms: Mapping):
        self.alg = alg
        ring = alg.ring
        self.terms = {}
        for k, v in terms.items():
            if not isinstance(v, Poly):
                v = ring.const(v)
            if v:
                self.terms[k] = v

    def __add__(self, other: "UElement"):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(out, k, v)
        return UElement(self.alg, out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, UElement):
            return self.product(other)
        return UElement(self.alg, {k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, UElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def left_mul(self, letter) -> "UElement":
        alg = self.alg
        if isinstance(letter, Poly):
            out: dict = {}
            for (n, p), h in self.terms.items():
                _add_into(out, (n, p), alg.shift_poly(letter, alg.shift_of(n)) * h)
            return UElement(alg, out)
        kind, s = letter
        out = {}
        if kind == "h":
            return self.left_mul(alg.ring.var(s))
        if kind == "n":
            for (n, p), h in self.terms.items():
                for m, c in alg.mul_letter("n", s, n).items():
                    _add_into(out, (m, p), h * c)
            return UElement(alg, out)
        for (n, p), h in self.terms.items():
            z = alg.z_product(s, n)
            for (n2, p2), h2 in z.terms.items():
                coeff = h2 * alg.shift_poly(h, alg.shift_of(p2))
                for m, c in alg.mul_mono("p", p2, p).items():
                    _add_into(out, (n2, m), coeff * c)
        return UElement(alg, out)

    def product(self, other: "UElement") -> "UElement":
        alg = self.alg
        total = UElement(alg, {})
        for (n, p), h in self.terms.items():
            cur = other
            for s in reversed(alg.letters(p)):
                cur = cur.left_mul(("p", s))
            cur = cur.left_mul(h)
            for s in reversed(alg.letters(n)):
                cur = cur.left_mul(("n", s))
            total = total + cur
        return total

    def neg_part(self) -> dict:
        """Terms with no raising factor, i.e. the action on v_lambda (lambda symbolic)."""
        return {n: h for (n, p), h in self.terms.items() if not any(p)}

    def evaluate(self, lam_values: Sequence, t=None) -> "UElement":
        """Substitute lambda(h_k) = lam_values[k] (and T = t) into every coefficient."""
        alg = self.alg
        uses_t = any(h.involves(alg.t_index) for h in self.terms.values())
        if uses_t and t is None:
            raise errors.UnevaluatedVariable("T occurs but no value was supplied")
        vals = list(lam_values) + [Fraction(0) if t is None else t]
        return UElement(alg, {k: alg.ring.const(h.evaluate(vals)) for k, h in self.terms.items()})

    def to_json(self) -> list:
        alg = self.alg
        names = alg.ring.names
        out = []
        for (n, p), h in sorted(self.terms.items(), reverse=True):
            by_cartan: dict = {}
            for e, c in h.terms.items():
                ckey = e[: alg.rank]
                rest = (0,) * alg.rank + e[alg.rank:]
                by_cartan.setdefault(ckey, {})[rest] = c
            for ckey in sorted(by_cartan, reverse=True):
                coeff = Poly(alg.ring, by_cartan[ckey])
                out.append({
                    "neg": [[i, k] for i, k in enumerate(n) if k],
                    "cartan": [[names[i], k] for i, k in enumerate(ckey) if k],
                    "pos": [[i, k] for i, k in enumerate(p) if k],
                    "coeff": str(coeff),
                })
        return out

    @classmethod
    def from_json(cls, alg: UAlgebra, data: list) -> "UElement":
        out: dict = {}
        for item in data:
            n = [0] * alg.nroots
            for i, k in item["neg"]:
                n[i] = k
            p = [0] * alg.nroots
            for i, k in item["pos"]:
                p[i] = k
            mono = [0] * alg.ring.nvars
            for name, k in item["cartan"]:
                mono[alg.ring.index(name)] = k
            coeff = alg.ring.parse(item["coeff"]) * Poly(alg.ring, {tuple(mono): Fraction(1)})
            _add_into(out, (tuple(n), tuple(p)), coeff)
        return cls(alg, out)

    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.alg
        names = [r.name for r in alg.rs.positive]
        parts = []
        for (n, p), h in sorted(self.terms.items(), reverse=True):
            word = []
            for i in alg.letters(n):
                word.append(f"e_-({names[i]})")
            for i in alg.letters(p):
                word.append(f"e_({names[i]})")
            hs = str(h)
            parts.append(f"({hs})" + ("*" + "*".join(word) if word else ""))
        return " + ".join(parts)

    __repr__ = __str__


@lru_cache(maxsize=None)
def _algebra_for(spec: AlgebraSpec) -> UAlgebra:
    return UAlgebra(RootSystem(spec))


def algebra(spec) -> UAlgebra:
    """Shared UAlgebra (with its memo tables) for an algebra spec or string."""
    if isinstance(spec, str):
        spec = parse_algebra(spec)
    return _algebra_for(spec)


# -- free functions mirroring the module's operations -------------------------

def normal_order(alg: UAlgebra, word: Iterable) -> UElement:
    return alg.normal_order(word)


def evaluate_at_weight(u: UElement, lam, t=None) -> UElement:
    """x(lambda): substitute a weight into the Cartan coefficients of u in U(b^-)."""
    if any(any(p) for (_, p) in u.terms):
        raise errors.ThetaForgeError("evaluate_at_weight expects an element of U(b^-)")
    return u.evaluate(_values(u.alg, lam), t)


def _values(alg: UAlgebra, lam) -> tuple:
    if hasattr(lam, "coords"):
        return alg.rs.cartan_values(lam)
    return tuple(Fraction(v) for v in lam)


def act_on_verma(u: UElement, vec: Mapping, lam=None) -> dict:
    """u . (sum c_pi e_{-pi} v_lambda).

    With ``lam`` None, lambda is symbolic (coefficients are polynomials in
    h_a, h_b, ...). Otherwise ``lam`` is a Weight or a tuple of Cartan values.
    """
    alg = u.alg
    out: dict = {}
    vals = None
    if lam is not None:
        vals = list(_values(alg, lam)) + [alg.ring.var(alg.t_index)]
    for mono, c in vec.items():
        prod = u.product(UElement(alg, {(mono, alg.empty): alg.ring.one()}))
        for n, h in prod.neg_part().items():
            val = h if vals is None else h.evaluate(vals)
            _add_into(out, n, val * c)
    return out


def right_divide(alg: UAlgebra, u: Mapping, alpha_index: int, p: int) -> dict:
    """theta with u = theta * e_{-alpha}^p in U(n^-), both in the standard order."""
    if alg.odd[alpha_index]:
        raise errors.ThetaForgeError("right division only by even root vectors")
    alt = alg.order_with_last(alpha_index)
    in_alt = alg.reorder(u, None, alt)
    quot: dict = {}
    for mono, c in in_alt.items():
        if mono[alpha_index] < p:
            raise errors.NotDivisible(f"not divisible by e_-alpha^{p}")
        m = list(mono)
        m[alpha_index] -= p
        _add_into(quot, tuple(m), c)
    return alg.reorder(quot, alt, None)


def ujson_dumps(u: UElement) -> str:
    return json.dumps(u.to_json(), sort_keys=True)
