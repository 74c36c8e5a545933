"""Exact scalar fields: the rationals and cyclotomic extensions Q(zeta_m).

Every computation in this package is exact.  Scalars are either plain Python
ints / ``fractions.Fraction`` (field ``QQ``) or ``CycNum`` coefficient vectors
in the power basis of Q(zeta_m) reduced modulo the m-th cyclotomic polynomial
(field ``Cyclotomic(m)``).  Field objects carry parsing/formatting and the few
operations (inversion, canonical text form) that depend on the field.

Scalar text format: rationals are "p" or "p/q"; cyclotomic numbers are
polynomials in the letter "z", e.g. "z^2 - 1/2*z + 3".
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache


def _poly_trim(cs):
    while cs and not cs[-1]:
        cs.pop()
    return cs


def _poly_divmod_exact(num, den):
    # long division of integer-coefficient polynomials, exact at every step
    num = list(num)
    q = [0] * max(0, len(num) - len(den) + 1)
    while len(num) >= len(den) and _poly_trim(list(num)):
        if not num[-1]:
            num.pop()
            continue
        shift = len(num) - len(den)
        c = num[-1] // den[-1]
        assert c * den[-1] == num[-1], "non-exact polynomial division"
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        assert not num[-1]
        num.pop()
    assert not any(num), "non-exact polynomial division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int):
    """Integer coefficient list (low degree first) of Phi_m, by divide-out."""
    assert m >= 1
    # x^m - 1
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divmod_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


class CycNum:
    """An element of Q(zeta_m): tuple of Fractions in the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)
        assert len(self.coeffs) == field.degree

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.field.m == other.field.m and self.coeffs == other.coeffs
        if other == 0:
            return not self
        return self == self.field.from_fraction(Fraction(other))

    def __hash__(self):
        return hash((self.field.m, self.coeffs))

    def __add__(self, other):
        other = self.field.coerce(other)
        return CycNum(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.field, [a * other for a in self.coeffs])
        other = self.field.coerce(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"CycNum({self.field.m}, {format_scalar(self.field, self)})"


class FieldQ:
    """The rational field; values are ints or Fractions."""

    kind = "Q"
    m = 1

    def __repr__(self):
        return "QQ"

    zero = 0
    one = 1

    def coerce(self, x):
        assert isinstance(x, (int, Fraction)), x
        return x

    def from_int(self, n):
        return n

    def from_fraction(self, q):
        return q

    def inv(self, x):
        assert x
        return Fraction(1) / Fraction(x)

    def div(self, a, b):
        assert b
        q = Fraction(a) / Fraction(b)
        return int(q) if q.denominator == 1 else q

    def eq(self, a, b):
        return Fraction(a) == Fraction(b)

    def parse(self, text):
        return parse_scalar(self, text)

    def fmt(self, x):
        return format_scalar(self, x)


class FieldCyclotomic:
    """Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1)."""

    kind = "cyclotomic"

    def __init__(self, m: int):
        assert m >= 2
        self.m = m
        phi = cyclotomic_polynomial(m)
        self.degree = len(phi) - 1
        assert phi[-1] == 1
        # reduction of z^degree: z^deg = -sum_{i<deg} phi_i z^i
        self._red = tuple(Fraction(-c) for c in phi[:-1])
        self.zero = CycNum(self, [Fraction(0)] * self.degree)
        self.one = self.from_fraction(Fraction(1))
        self.zeta = self.from_coeffs([0, 1] if self.degree > 1 else None)

    def __repr__(self):
        return f"Cyclotomic({self.m})"

    def from_coeffs(self, coeffs):
        if coeffs is None:  # degree-1 field: zeta is rational = -phi_0
            return CycNum(self, [self._red[0]])
        cs = [Fraction(c) for c in coeffs]
        assert len(cs) <= self.degree
        cs += [Fraction(0)] * (self.degree - len(cs))
        return CycNum(self, cs)

    def from_int(self, n):
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q):
        cs = [Fraction(0)] * self.degree
        cs[0] = Fraction(q)
        return CycNum(self, cs)

    def coerce(self, x):
        if isinstance(x, CycNum):
            assert x.field.m == self.m
            return x
        return self.from_fraction(Fraction(x))

    def _mul(self, a, b):
        n = self.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, ai in enumerate(a.coeffs):
            if not ai:
                continue
            for j, bj in enumerate(b.coeffs):
                if bj:
                    prod[i + j] += ai * bj
        # reduce degrees >= n using z^n = red
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if not c:
                continue
            prod[k] = Fraction(0)
            for i, r in enumerate(self._red):
                if r:
                    prod[k - n + i] += c * r
        return CycNum(self, prod[:n])

    def inv(self, x):
        # solve x*y = 1 as a linear system on y's coefficients
        x = self.coerce(x)
        assert x
        n = self.degree
        basis_imgs = []
        p = self.one
        for _ in range(n):
            basis_imgs.append(self._mul(x, p))
            p = self._mul(p, self.zeta)
        # columns: x * z^j ; solve sum_j y_j (x z^j) = 1
        from .linalg import solve_exact

        mat = [[basis_imgs[j].coeffs[i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        sol = solve_exact(FieldQ(), mat, rhs)
        assert sol is not None, "nonzero cyclotomic number must be invertible"
        return self.from_coeffs(sol)

    def div(self, a, b):
        return self.coerce(a) * self.inv(b)

    def eq(self, a, b):
        return self.coerce(a) == self.coerce(b)

    def parse(self, text):
        return parse_scalar(self, text)

    def fmt(self, x):
        return format_scalar(self, x)


QQ = FieldQ()


@lru_cache(maxsize=None)
def Cyclotomic(m: int) -> FieldCyclotomic:
    return FieldCyclotomic(m)


_FRAC_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_TERM_RE = re.compile(
    r"^(?P<coef>[+-]?\d+(?:/\d+)?|[+-])?(?P<star>\*)?(?P<z>z(?:\^(?P<pow>\d+))?)?$"
)


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not _FRAC_RE.match(text):
        raise ValueError(f"bad rational scalar: {text!r}")
    return Fraction(text)


def parse_scalar(field, text):
    """Parse "p/q" (rational) or a polynomial in z (cyclotomic)."""
    if isinstance(text, int):
        return field.from_int(text)
    text = str(text).strip()
    if field.kind == "Q":
        q = parse_fraction(text)
        return int(q) if q.denominator == 1 else q
    # split into signed terms at top level
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    terms, cur = [], ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "+-*^/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    coeffs = {}
    for term in terms:
        mt = _TERM_RE.match(term)
        if not mt or (mt.group("coef") is None and mt.group("z") is None):
            raise ValueError(f"bad cyclotomic scalar term: {term!r} in {text!r}")
        if mt.group("coef") in ("+", "-") and mt.group("z") is None:
            raise ValueError(f"bad cyclotomic scalar term: {term!r} in {text!r}")
        coef = mt.group("coef")
        if coef in (None, "+", "-"):
            c = Fraction((coef or "") + "1")
        else:
            c = Fraction(coef)
        power = 0
        if mt.group("z"):
            power = int(mt.group("pow") or 1)
        coeffs[power] = coeffs.get(power, Fraction(0)) + c
    deg = field.degree
    out = field.zero
    zpow = field.one
    maxp = max(coeffs)
    for p in range(maxp + 1):
        if coeffs.get(p):
            out = out + zpow * coeffs[p]
        if p < maxp:
            zpow = zpow * field.zeta
    assert isinstance(deg, int)
    return out


def format_scalar(field, x) -> str:
    if field.kind == "Q":
        q = Fraction(x)
        return str(q)
    x = field.coerce(x)
    parts = []
    for p, c in enumerate(x.coeffs):
        if not c:
            continue
        if p == 0:
            parts.append(str(c))
            continue
        zs = "z" if p == 1 else f"z^{p}"
        if c == 1:
            parts.append(zs)
        elif c == -1:
            parts.append(f"-{zs}")
        else:
            parts.append(f"{c}*{zs}")
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return out
