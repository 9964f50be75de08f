"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is a residue modulo the N-th cyclotomic polynomial Phi_N with
Fraction coefficients, so equality is coefficient comparison after the two
operands are pushed into the compositum Q(zeta_lcm).  Division goes through
the extended Euclidean algorithm against Phi_N; no factorization anywhere.

Roots of unity additionally travel as canonical pairs (m, j) meaning
zeta_m^j with gcd(j, m) = 1 (and (1, 0) for the value 1).  The pair form is
what the Jordan-class layer uses for grouping and serialization; conversion
in both directions lives here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import InputError, MathError

# Largest root-of-unity order the field tower will represent.  phi(240) = 64,
# comfortably past every order the bundled computations need (<= 24).
MAX_ORDER = 240

Rou = tuple[int, int]


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# -- dense polynomial helpers (lists indexed by degree) ------------------------


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_sub(a: list, b: list) -> list:
    out = list(a) + [0] * (len(b) - len(a))
    for i, bi in enumerate(b):
        out[i] -= bi
    return _poly_trim(out)


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead if lead != 1 else a[-1]
        d = len(a) - len(b)
        q[d] = c
        for i, bi in enumerate(b):
            a[d + i] -= c * bi
        _poly_trim(a)
    return _poly_trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, index = degree."""
    if n == 1:
        return (-1, 1)
    num: list = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n):
        if d < n:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


def _reduce_mod_phi(coeffs: list, n: int) -> list[Fraction]:
    phi = [Fraction(c) for c in cyclotomic_polynomial(n)]
    _, rem = _poly_divmod([Fraction(c) for c in coeffs], phi)
    deg = euler_phi(n)
    return [Fraction(c) for c in rem] + [Fraction(0)] * (deg - len(rem))


def _check_order(n: int) -> None:
    if n < 1:
        raise MathError(f"order must be positive, got {n}", code="UNSUPPORTED_ORDER")
    if n > MAX_ORDER:
        raise MathError(
            f"order {n} exceeds the supported bound {MAX_ORDER}",
            code="UNSUPPORTED_ORDER",
        )


class CyclotomicNumber:
    """Element of Q(zeta_order), fully reduced modulo Phi_order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        _check_order(order)
        object.__setattr__(self, "order", order)
        vals = [Fraction(c) for c in coeffs]
        deg = euler_phi(order)
        if len(vals) > deg:
            vals = _reduce_mod_phi(vals, order)
        else:
            vals = vals + [Fraction(0)] * (deg - len(vals))
        object.__setattr__(self, "coeffs", tuple(vals))

    def __setattr__(self, *a):
        raise AttributeError("CyclotomicNumber is immutable")

    @staticmethod
    def from_rational(q) -> "CyclotomicNumber":
        return CyclotomicNumber(1, [Fraction(q)])

    # -- order management -------------------------------------------------------

    def embed(self, m: int) -> "CyclotomicNumber":
        """Rewrite in Q(zeta_m); requires order | m."""
        if m == self.order:
            return self
        if m % self.order:
            raise MathError(f"cannot embed order {self.order} into {m}")
        _check_order(m)
        step = m // self.order
        raised = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            raised[i * step] = c
        return CyclotomicNumber(m, _reduce_mod_phi(raised, m))

    @staticmethod
    def _unify(a: "CyclotomicNumber", b: "CyclotomicNumber"):
        m = lcm(a.order, b.order)
        return a.embed(m), b.embed(m)

    @staticmethod
    def _coerce(x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CyclotomicNumber.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CyclotomicNumber")

    # -- predicates ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction | None:
        return self.coeffs[0] if self.is_rational() else None

    # -- field arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self._unify(self, other)
        return CyclotomicNumber(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self._unify(self, other)
        prod = _poly_mul(list(a.coeffs), list(b.coeffs))
        return CyclotomicNumber(a.order, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise MathError("division by zero", code="DIVISION_BY_ZERO")
        # Extended Euclid: maintain s_i with s_i * self = r_i (mod Phi_N).
        # Phi_N is irreducible, so the loop ends at a nonzero constant.
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = phi, _poly_trim([Fraction(c) for c in self.coeffs])
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return CyclotomicNumber(self.order, [x / c for x in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k == 0:
            return CyclotomicNumber.from_rational(1)
        base = self
        if k < 0:
            base = self.inverse()
            k = -k
        result = None
        while k:
            if k & 1:
                result = base if result is None else result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._unify(self, other)
        return a.coeffs == b.coeffs

    # Equal values can live at different orders, so there is no cheap
    # equality-compatible hash; key on as_root_of_unity() / coeffs instead.
    __hash__ = None

    def __repr__(self):
        return f"Cyc({format_cyclotomic(self)})"

    # -- roots of unity ---------------------------------------------------------------

    def as_root_of_unity(self) -> Rou | None:
        """Canonical (m, j) with self = zeta_m^j, or None."""
        if self.is_zero():
            return None
        r = self.as_rational()
        if r is not None:
            if r == 1:
                return (1, 0)
            if r == -1:
                return (2, 1)
            return None
        # The roots of unity inside Q(zeta_N) are exactly mu_M, M = lcm(2, N).
        m = self.order if self.order % 2 == 0 else 2 * self.order
        target = self.embed(m)
        z = zeta(m)
        cur = CyclotomicNumber.from_rational(1).embed(m)
        for j in range(m):
            if cur.coeffs == target.coeffs:
                return rou_normalize(m, j)
            cur = cur * z
        return None

    def root_of_unity_order(self) -> int | None:
        rou = self.as_root_of_unity()
        return None if rou is None else rou[0]


def zeta(n: int, k: int = 1) -> CyclotomicNumber:
    """zeta_n^k as an element of Q(zeta_n)."""
    _check_order(n)
    k %= n
    deg = euler_phi(n)
    coeffs = [Fraction(0)] * (k + 1)
    coeffs[k] = Fraction(1)
    if k < deg:
        return CyclotomicNumber(n, coeffs + [Fraction(0)] * (deg - k - 1))
    return CyclotomicNumber(n, _reduce_mod_phi(coeffs, n))


ZERO = CyclotomicNumber.from_rational(0)
ONE = CyclotomicNumber.from_rational(1)
MINUS_ONE = CyclotomicNumber.from_rational(-1)


# -- canonical root-of-unity pairs ----------------------------------------------


def rou_normalize(m: int, j: int) -> Rou:
    j %= m
    if j == 0:
        return (1, 0)
    g = gcd(j, m)
    return (m // g, j // g)


def rou_mul(a: Rou, b: Rou) -> Rou:
    m = lcm(a[0], b[0])
    return rou_normalize(m, a[1] * (m // a[0]) + b[1] * (m // b[0]))


def rou_inv(a: Rou) -> Rou:
    return rou_normalize(a[0], -a[1])


def rou_pow(a: Rou, k: int) -> Rou:
    return rou_normalize(a[0], a[1] * k)


def rou_neg(a: Rou) -> Rou:
    return rou_mul(a, (2, 1))


def rou_sqrt(a: Rou) -> Rou:
    # The canonical square root of zeta_m^j is zeta_(2m)^j.
    return rou_normalize(2 * a[0], a[1])


def rou_is_one(a: Rou) -> bool:
    return a == (1, 0)


def rou_to_cyc(a: Rou) -> CyclotomicNumber:
    return zeta(a[0], a[1]) if a[0] > 1 else ONE


def rou_from_cyc(x: CyclotomicNumber) -> Rou:
    rou = x.as_root_of_unity()
    if rou is None:
        raise MathError(f"{format_cyclotomic(x)} is not a root of unity")
    return rou


def rou_str(a: Rou) -> str:
    m, j = a
    if m == 1:
        return "1"
    if m == 2:
        return "-1"
    return f"zeta({m})" if j == 1 else f"zeta({m})^{j}"


# -- parsing and formatting ----------------------------------------------------------

_ZETA_RE = re.compile(r"^zeta\((\d+)\)(?:\^(-?\d+))?$")
_RAT_RE = re.compile(r"^\d+(?:/\d+)?$")


def _split_terms(s: str) -> list[str]:
    # Split on top-level +/-.  A sign directly after '^', '*' or another sign
    # belongs to the factor (e.g. "zeta(6)^-1"), not to the term structure.
    terms, cur, prev = [], "", ""
    for ch in s:
        if ch in "+-" and cur and prev not in "^*+-":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
        prev = ch
    if cur:
        terms.append(cur)
    return terms


def parse_cyclotomic(text) -> CyclotomicNumber:
    """Parse "zeta(N)^k", "-1", "1/2", or sums like "zeta(8) - 2*zeta(8)^3 + 1"."""
    if isinstance(text, (int, Fraction)):
        return CyclotomicNumber.from_rational(text)
    if isinstance(text, CyclotomicNumber):
        return text
    s = str(text).replace(" ", "")
    if not s:
        raise InputError("empty cyclotomic literal")
    total = CyclotomicNumber.from_rational(0)
    for term in _split_terms(s):
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        if not term:
            raise InputError(f"bad cyclotomic literal: {text!r}")
        value = CyclotomicNumber.from_rational(sign)
        for factor in term.split("*"):
            m = _ZETA_RE.match(factor)
            if m:
                value = value * zeta(int(m.group(1)), int(m.group(2) or 1))
            elif _RAT_RE.match(factor):
                value = value * Fraction(factor)
            else:
                raise InputError(f"bad cyclotomic literal: {text!r}")
        total = total + value
    return total


def format_cyclotomic(x: CyclotomicNumber) -> str:
    """Canonical string; roots of unity collapse to zeta(m)^j form."""
    r = x.as_rational()
    if r is not None:
        return str(r)
    rou = x.as_root_of_unity()
    if rou is not None:
        return rou_str(rou)
    n = x.order
    out = ""
    for k, c in enumerate(x.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            z = f"zeta({n})" if k == 1 else f"zeta({n})^{k}"
            body = z if mag == 1 else f"{mag}*{z}"
        if not out:
            out = body if c > 0 else "-" + body
        else:
            out += (" + " if c > 0 else " - ") + body
    return out
