"""Exact arithmetic in the field Q(q) of rational functions in q.

A :class:`Scalar` is stored in a canonical form

    q**lo * N(q) / (c * D(q))

where ``N`` and ``D`` are integer polynomials with nonzero constant terms,
``D`` is primitive with positive leading coefficient, ``gcd(N, D) = 1`` over
Q, ``c`` is a positive integer and ``gcd(content(N), c) = 1``.  Two scalars
are equal exactly when these canonical tuples agree.

The module also provides :class:`ModularPoint` and :func:`eval_mod`, a cheap
evaluation homomorphism into Z/p used as a zero-test filter.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterable, Optional, Tuple

Poly = Tuple[int, ...]

__all__ = [
    "LaurentPoly",
    "Scalar",
    "ScalarZeroDivision",
    "ModularPoint",
    "eval_mod",
    "q_bracket",
    "random_prime",
    "random_point",
    "Q",
    "ONE",
    "ZERO",
]


class ScalarZeroDivision(ZeroDivisionError):
    """Division of a Scalar by zero."""


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (ascending coefficient tuples)
# ---------------------------------------------------------------------------


def _trim(a: Poly) -> Poly:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a if n == len(a) else a[:n]


def _content(a: Iterable[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return tuple(out)


def _pscale(a: Poly, s: int) -> Poly:
    if s == 1:
        return a
    return tuple(s * x for x in a)


def _pshift(a: Poly, k: int) -> Poly:
    return (0,) * k + a if k else a


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return _pscale(a, b[0])
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                out[i + j] += x * y
    return tuple(out)


def _primpart(a: Poly) -> Poly:
    g = _content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return a
    return tuple(x // g for x in a)


def _prem(a: Poly, b: Poly) -> Poly:
    """A nonzero integer multiple of the remainder of a by b."""
    out = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(out) - 1 >= db:
        la = out[-1]
        g = gcd(la, lb)
        fa, fb = lb // g, la // g
        shift = len(out) - 1 - db
        if fa != 1:
            out = [x * fa for x in out]
        for i, y in enumerate(b):
            out[shift + i] -= fb * y
        while out and out[-1] == 0:
            out.pop()
        if not out:
            break
    return tuple(out)


def _pgcd_prs(a: Poly, b: Poly) -> Poly:
    a = _primpart(a)
    b = _primpart(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (1,)
        r = _prem(a, b)
        a, b = b, (_primpart(r) if r else ())
    return a


_GCD_PRIME = (1 << 61) - 1


def _coprime_mod(a: Poly, b: Poly) -> bool:
    """True when a and b are certainly coprime (checked modulo a large prime).

    If p does not divide a leading coefficient, the gcd mod p has degree at
    least that of the gcd over Z, so a constant gcd mod p proves coprimality.
    """
    p = _GCD_PRIME
    if a[-1] % p == 0 and b[-1] % p == 0:
        return False
    x = [c % p for c in a]
    y = [c % p for c in b]
    while x and x[-1] == 0:
        x.pop()
    while y and y[-1] == 0:
        y.pop()
    if len(x) < len(y):
        x, y = y, x
    while y:
        if len(y) == 1:
            return True
        inv = pow(y[-1], -1, p)
        dy = len(y) - 1
        while len(x) - 1 >= dy:
            f = x[-1] * inv % p
            shift = len(x) - 1 - dy
            if f:
                for i, c in enumerate(y):
                    x[shift + i] = (x[shift + i] - f * c) % p
            x.pop()
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    return len(x) <= 1


def _pdiv_check(a: Poly, b: Poly):
    """Exact quotient a / b over Z, or None when b does not divide a."""
    if len(b) > len(a):
        return None
    out = list(a)
    db = len(b) - 1
    lb = b[-1]
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = out[k + db]
        if c:
            qk, r = divmod(c, lb)
            if r:
                return None
            quot[k] = qk
            for i, y in enumerate(b):
                out[k + i] -= qk * y
    if any(out[:db]):
        return None
    return tuple(quot)


def _heu_gcd(a: Poly, b: Poly):
    """Heuristic gcd by evaluation at a large integer; None on failure."""
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bound = 2 * min(ma, mb) + 29
    xi = max(min(bound, 99 * isqrt(bound)), 2 * min(ma // abs(a[-1]), mb // abs(b[-1])) + 2)
    for _ in range(6):
        fa = 0
        for c in reversed(a):
            fa = fa * xi + c
        fb = 0
        for c in reversed(b):
            fb = fb * xi + c
        if fa and fb:
            h = gcd(fa, fb)
            digits = []
            half = xi // 2
            while h:
                c = h % xi
                if c > half:
                    c -= xi
                digits.append(c)
                h = (h - c) // xi
            if digits:
                cand = _primpart(_trim(tuple(digits)))
                if _pdiv_check(a, cand) is not None and _pdiv_check(b, cand) is not None:
                    return cand
        xi = xi * 73794 // 27011
    return None


def _pgcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient of two nonzero polys."""
    if len(a) == 1 or len(b) == 1:
        return (1,)
    if _coprime_mod(a, b):
        return (1,)
    a = _primpart(a)
    b = _primpart(b)
    g = _heu_gcd(a, b)
    if g is None:
        g = _pgcd_prs(a, b)
    return g


def _pdivexact(a: Poly, b: Poly) -> Poly:
    """Quotient a / b over Z, assuming exact divisibility."""
    if len(b) == 1:
        d = b[0]
        return tuple(x // d for x in a)
    out = list(a)
    db = len(b) - 1
    lb = b[-1]
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = out[k + db]
        if c:
            qk = c // lb
            quot[k] = qk
            for i, y in enumerate(b):
                out[k + i] -= qk * y
    return tuple(quot)


def _strip_low(a: Poly) -> Tuple[int, Poly]:
    k = 0
    while a[k] == 0:
        k += 1
    return k, (a[k:] if k else a)


def _horner_mod(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


# ---------------------------------------------------------------------------
# LaurentPoly
# ---------------------------------------------------------------------------


class LaurentPoly:
    """A Laurent polynomial in q with rational coefficients.

    ``coefficients`` maps integer exponents to nonzero Fractions.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Optional[Dict[int, object]] = None):
        coeffs = {}
        for e, c in (coefficients or {}).items():
            c = Fraction(c)
            if c:
                coeffs[int(e)] = c
        self.coefficients: Dict[int, Fraction] = coeffs

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coefficients)
        for e, c in other.coefficients.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: Dict[int, Fraction] = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    def to_scalar(self) -> "Scalar":
        return Scalar.from_laurent(self.coefficients)

    def __repr__(self):
        return f"LaurentPoly({self.coefficients!r})"


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------


def _normalize(lo: int, num: Poly, c: int, den: Poly, coprime: bool = False) -> "Scalar":
    num = _trim(num)
    if not num:
        return ZERO
    k, num = _strip_low(num)
    lo += k
    den = _trim(den)
    k, den = _strip_low(den)
    lo -= k
    if len(den) > 1:
        if not coprime and len(num) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivexact(num, g)
                den = _pdivexact(den, g)
        cd = _content(den)
        if den[-1] < 0:
            cd = -cd
        if cd != 1:
            den = tuple(x // cd for x in den)
            c *= cd
    else:
        c *= den[0]
        den = (1,)
    if c < 0:
        c = -c
        num = tuple(-x for x in num)
    if c != 1:
        g = gcd(_content(num), c)
        if g != 1:
            num = tuple(x // g for x in num)
            c //= g
    return Scalar._raw(lo, num, c, den)


def _coerce(x) -> "Scalar":
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._from_int(x)
    if isinstance(x, Fraction):
        return _normalize(0, (x.numerator,), x.denominator, (1,))
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


class Scalar:
    """An exact element of Q(q), immutable and hashable."""

    __slots__ = ("_lo", "_num", "_c", "_den", "_hash")

    def __new__(cls, value=0):
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return _coerce(value)

    @classmethod
    def _raw(cls, lo: int, num: Poly, c: int, den: Poly) -> "Scalar":
        self = object.__new__(cls)
        self._lo = lo
        self._num = num
        self._c = c
        self._den = den
        self._hash = None
        return self

    @classmethod
    def _from_int(cls, n: int) -> "Scalar":
        if n == 0:
            return ZERO
        if n == 1:
            return ONE
        return cls._raw(0, (n,), 1, (1,))

    @classmethod
    def from_laurent(cls, coefficients: Dict[int, object]) -> "Scalar":
        """Build a Laurent polynomial scalar from ``{exponent: coefficient}``."""
        items = [(int(e), Fraction(c)) for e, c in coefficients.items() if c]
        if not items:
            return ZERO
        lo = min(e for e, _ in items)
        hi = max(e for e, _ in items)
        den = 1
        for _, c in items:
            den = den * c.denominator // gcd(den, c.denominator)
        num = [0] * (hi - lo + 1)
        for e, c in items:
            num[e - lo] += c.numerator * (den // c.denominator)
        return _normalize(lo, tuple(num), den, (1,))

    @classmethod
    def from_polys(cls, num: Iterable[int], den: Iterable[int], shift: int = 0) -> "Scalar":
        """The scalar ``q**shift * num(q) / den(q)`` for integer coefficient lists."""
        den = _trim(tuple(den))
        if not den:
            raise ScalarZeroDivision("zero denominator")
        return _normalize(shift, tuple(num), 1, den)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        from .expr import parse_scalar

        return parse_scalar(text)

    # -- structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self):
        return bool(self._num)

    def is_laurent(self) -> bool:
        """True when the denominator is a constant."""
        return self._den == (1,)

    def canonical(self) -> Tuple[int, Poly, int, Poly]:
        return (self._lo, self._num, self._c, self._den)

    def numerator(self) -> LaurentPoly:
        return LaurentPoly({self._lo + i: Fraction(x, self._c) for i, x in enumerate(self._num) if x})

    def denominator(self) -> LaurentPoly:
        return LaurentPoly({i: x for i, x in enumerate(self._den) if x})

    def normalize(self) -> "Scalar":
        return _normalize(self._lo, self._num, self._c, self._den)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self._lo, self._num, self._c, self._den))
        return h

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self._num == other._num
            and self._lo == other._lo
            and self._c == other._c
            and self._den == other._den
        )

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        if not self._num:
            return self
        return Scalar._raw(self._lo, tuple(-x for x in self._num), self._c, self._den)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        if not other._num:
            return self
        if not self._num:
            return other
        a, b = self, other
        lo = min(a._lo, b._lo)
        na = _pshift(a._num, a._lo - lo)
        nb = _pshift(b._num, b._lo - lo)
        if a._den == b._den:
            ca, cb = a._c, b._c
            if ca == cb:
                num = _padd(na, nb)
                c = ca
            else:
                g = gcd(ca, cb)
                num = _padd(_pscale(na, cb // g), _pscale(nb, ca // g))
                c = ca // g * cb
            if a._den == (1,):
                num = _trim(num)
                if not num:
                    return ZERO
                k, num = _strip_low(num)
                if c != 1:
                    g = gcd(_content(num), c)
                    if g != 1:
                        num = tuple(x // g for x in num)
                        c //= g
                return Scalar._raw(lo + k, num, c, (1,))
            return _normalize(lo, num, c, a._den)
        da, db = a._den, b._den
        g = _pgcd(da, db)
        if g == (1,):
            # coprime denominators: no polynomial factor can cancel
            num = _padd(_pscale(_pmul(na, db), b._c), _pscale(_pmul(nb, da), a._c))
            return _normalize(lo, num, a._c * b._c, _pmul(da, db), coprime=True)
        sa, sb = _pdivexact(da, g), _pdivexact(db, g)
        num = _padd(_pscale(_pmul(na, sb), b._c), _pscale(_pmul(nb, sa), a._c))
        num = _trim(num)
        if not num:
            return ZERO
        g2 = _pgcd(num, g)
        if g2 != (1,):
            num = _pdivexact(num, g2)
            g = _pdivexact(g, g2)
        return _normalize(lo, num, a._c * b._c, _pmul(_pmul(sa, sb), g), coprime=True)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        a, b = self, other
        if not a._num or not b._num:
            return ZERO
        lo = a._lo + b._lo
        if a._den == (1,) and b._den == (1,):
            num = _pmul(a._num, b._num)
            c = a._c * b._c
            if c != 1:
                g = gcd(_content(num), c)
                if g != 1:
                    num = tuple(x // g for x in num)
                    c //= g
            return Scalar._raw(lo, num, c, (1,))
        na, da, nb, db = a._num, a._den, b._num, b._den
        if len(db) > 1 and len(na) > 1:
            g = _pgcd(na, db)
            if len(g) > 1:
                na, db = _pdivexact(na, g), _pdivexact(db, g)
        if len(da) > 1 and len(nb) > 1:
            g = _pgcd(nb, da)
            if len(g) > 1:
                nb, da = _pdivexact(nb, g), _pdivexact(da, g)
        return _normalize(lo, _pmul(na, nb), a._c * b._c, _pmul(da, db), coprime=True)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self._num:
            raise ScalarZeroDivision("Scalar division by zero")
        return _normalize(-self._lo, _pscale(self._den, self._c), 1, self._num, coprime=True)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- output ----------------------------------------------------------

    def render(self) -> str:
        """Text form in the shared scalar grammar (round-trips through parse)."""
        if not self._num:
            return "0"
        num = _render_laurent(self._lo, self._num)
        if self._den == (1,) and self._c == 1:
            return num
        if self._den == (1,):
            den = str(self._c)
        else:
            den = _render_laurent(0, _pscale(self._den, self._c))
            if _count_terms(self._den) > 1:
                den = f"({den})"
        if len([x for x in self._num if x]) > 1:
            num = f"({num})"
        return f"{num}/{den}"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Scalar('{self.render()}')"


def _count_terms(a: Poly) -> int:
    return sum(1 for x in a if x)


def _render_laurent(lo: int, coeffs: Poly) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        e = lo + i
        if e == 0:
            mono = ""
        elif e == 1:
            mono = "q"
        else:
            mono = f"q^{e}"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


ZERO = Scalar._raw(0, (), 1, (1,))
ONE = Scalar._raw(0, (1,), 1, (1,))
Q = Scalar._raw(1, (1,), 1, (1,))


def q_bracket(n: int) -> Scalar:
    """The quantum integer q^(n-1) + q^(n-3) + ... + q^(1-n)."""
    if n < 0:
        raise ValueError("q_bracket expects a natural number")
    if n == 0:
        return ZERO
    coeffs = [0] * (2 * n - 1)
    for i in range(0, 2 * n - 1, 2):
        coeffs[i] = 1
    return Scalar._raw(1 - n, tuple(coeffs), 1, (1,))


# ---------------------------------------------------------------------------
# modular evaluation
# ---------------------------------------------------------------------------


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ModularPoint:
    """A prime together with a value for q modulo that prime."""

    prime: int
    q_value: int
    order_bound: int = field(default=64, compare=False)

    def __post_init__(self):
        p, x = self.prime, self.q_value
        if p.bit_length() > 64 or not is_prime(p):
            raise ValueError(f"{p} is not a machine-word prime")
        if x % p == 0:
            raise ValueError("q_value must be invertible mod prime")
        y = 1
        for k in range(1, self.order_bound + 1):
            y = y * x % p
            if y == 1:
                raise ValueError(f"q_value has multiplicative order {k} <= {self.order_bound}")


def eval_mod(x: Scalar, pt: ModularPoint) -> Optional[int]:
    """Evaluate x at q = pt.q_value modulo pt.prime; None when undefined."""
    p = pt.prime
    if not x._num:
        return 0
    qv = pt.q_value % p
    den = _horner_mod(x._den, qv, p) * x._c % p
    if den == 0:
        return None
    num = _horner_mod(x._num, qv, p)
    return num * pow(qv, x._lo, p) * pow(den, -1, p) % p


def random_prime(rng: random.Random, bits: int = 61) -> int:
    while True:
        n = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_prime(n):
            return n


def random_point(rng: random.Random, prime: Optional[int] = None, bits: int = 61) -> ModularPoint:
    p = prime if prime is not None else random_prime(rng, bits)
    while True:
        try:
            return ModularPoint(p, rng.randrange(2, p - 1))
        except ValueError:
            continue
