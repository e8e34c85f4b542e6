"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`PolyRing` fixes the variable names; a :class:`Poly` is an
immutable map from exponent tuples to :class:`fractions.Fraction`.
Coefficients of elements of U(b^-) live here: the Cartan coordinate
functions ``h_a, h_b, ...`` plus the deformation variable ``T``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence


class PolyRing:
    __slots__ = ("names", "nvars", "_index", "_zero_exp")

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.nvars = len(self.names)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def index(self, name: str) -> int:
        return self._index[name]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self._zero_exp: Fraction(1)})

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {self._zero_exp: c} if c else {})

    def var(self, name_or_index) -> "Poly":
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def linear(self, coeffs: Sequence, const=0) -> "Poly":
        """sum(coeffs[i] * x_i) + const."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = c
        const = Fraction(const)
        if const:
            terms[self._zero_exp] = const
        return Poly(self, terms)

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)


class Poly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def leading_form(self) -> "Poly":
        return self.homogeneous_part(self.degree())

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return Poly(self.ring, {})
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = Fraction(other)
        return Poly(self.ring, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- substitution / evaluation --------------------------------------
    def evaluate(self, values: Sequence):
        """Substitute ``values[i]`` for variable i.

        Values may be numbers or elements of any commutative ring that
        supports ``+`` and ``*`` with Fractions (including Poly).
        """
        if len(values) != self.ring.nvars:
            raise ValueError("wrong number of values")
        total = 0
        cache: dict = {}
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    p = cache.get(key)
                    if p is None:
                        p = values[i] ** k
                        cache[key] = p
                    term = term * p
            total = total + term
        return total

    def substitute(self, mapping: Mapping[int, "Poly"]) -> "Poly":
        """Replace the variables listed in ``mapping`` by polynomials."""
        vals = [mapping.get(i, self.ring.var(i)) for i in range(self.ring.nvars)]
        out = self.evaluate(vals)
        return out if isinstance(out, Poly) else self.ring.const(out)

    def shift(self, offsets: Sequence) -> "Poly":
        """p(x_0 + o_0, x_1 + o_1, ...)."""
        mapping = {i: self.ring.var(i) + o for i, o in enumerate(offsets) if o}
        if not mapping:
            return self
        return self.substitute(mapping)

    def univariate_coeffs(self, i: int) -> list:
        """Coefficient list in variable i; all other exponents must vanish."""
        out = [Fraction(0)] * (self.degree_in(i) + 1)
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial involves other variables")
            out[e[i]] += c
        return out

    # -- printing ------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                self.ring.names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


_TERM_RE = re.compile(r"\s*([+-])\s*")


def parse_poly(ring: PolyRing, text: str) -> Poly:
    """Parse the output format of ``str(Poly)``: sums of ``c*x^k*y`` terms."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial string")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_RE.split(text)[1:]
    result = ring.zero()
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        coeff = Fraction(1)
        exps = [0] * ring.nvars
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"bad term {body!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            name, _, power = factor.partition("^")
            exps[ring.index(name)] += int(power) if power else 1
        if sign == "-":
            coeff = -coeff
        result = result + Poly(ring, {tuple(exps): coeff})
    return result


def interpolate(points: Sequence[Sequence[Fraction]], values: Sequence[Fraction],
                nvars: int, degree: int) -> dict | None:
    """Fit a polynomial of total degree <= degree through the data.

    Returns exponent-dict of the unique fit, or None if the points do not
    determine it. Over-determined data must be consistent.
    """
    from .linalg import solve_unique
    monos = monomials_up_to(nvars, degree)
    rows = []
    for pt in points:
        row = []
        for m in monos:
            v = Fraction(1)
            for x, k in zip(pt, m):
                if k:
                    v *= x ** k
            row.append(v)
        rows.append(row)
    sol = solve_unique(rows, list(values))
    if sol is None:
        return None
    return {m: c for m, c in zip(monos, sol) if c}


def monomials_up_to(nvars: int, degree: int) -> list:
    out = []

    def rec(prefix, left, i):
        if i == nvars:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            prefix.append(k)
            rec(prefix, left - k, i + 1)
            prefix.pop()

    rec([], degree, 0)
    return out

