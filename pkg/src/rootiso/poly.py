"""Exact integer polynomial arithmetic and the Moebius-type transforms used by
subdivision solvers.

Coefficients are stored low-to-high: ``coeffs[i]`` multiplies ``X**i``.
Rational values are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from pathlib import Path
from typing import Iterable, Sequence, Union

import gmpy2

RationalLike = Union[int, Fraction, "DyadicRational"]


class ZeroPolynomialError(ValueError):
    pass


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Dense univariate polynomial with arbitrary-precision integer coefficients."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike]) -> "IntPolynomial":
        """Primitive integer polynomial vanishing exactly at the given rationals."""
        out = cls([1])
        for r in roots:
            r = _as_fraction(r)
            out = out * cls([-r.numerator, r.denominator])
        return out

    @property
    def degree(self) -> int | None:
        """Index of the top nonzero coefficient; ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self), len(other))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return IntPolynomial()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x: RationalLike) -> Fraction:
        return evaluate(self, x)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if i and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)!r})"


@dataclass(frozen=True)
class DyadicRational:
    """``mantissa / 2**exponent`` kept in canonical form (odd mantissa or exponent 0)."""

    mantissa: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("dyadic exponent must be non-negative")
        m, k = self.mantissa, self.exponent
        if m == 0:
            k = 0
        else:
            tz = min((m & -m).bit_length() - 1, k)
            m >>= tz
            k -= tz
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", k)

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> "DyadicRational":
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1):
            raise ValueError(f"{x} is not dyadic")
        return cls(x.numerator, den.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __lt__(self, other: "DyadicRational") -> bool:
        return self.to_fraction() < other.to_fraction()

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.mantissa)
        return f"{self.mantissa}/2^{self.exponent}"


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, DyadicRational):
        return x.to_fraction()
    return Fraction(x)


def is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def format_rational(x: Fraction) -> str:
    """Exact text form; dyadics are written ``m/2^k``."""
    if is_dyadic(x):
        return str(DyadicRational.from_fraction(x))
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/2^" in text:
        m, k = text.split("/2^")
        return Fraction(int(m), 1 << int(k))
    return Fraction(text)


# ---------------------------------------------------------------------------
# basic operations

def bitsize(f: IntPolynomial | Sequence[int]) -> int:
    coeffs = f.coeffs if isinstance(f, IntPolynomial) else f
    return max((abs(c).bit_length() for c in coeffs), default=0)


def total_bitsize(coeffs: Sequence[int]) -> int:
    return sum(abs(c).bit_length() for c in coeffs)


def one_norm(f: IntPolynomial) -> int:
    if f.is_zero:
        raise ZeroPolynomialError("zero polynomial has no meaningful norm for condition formulas")
    return sum(abs(c) for c in f.coeffs)


def evaluate(f: IntPolynomial, x: RationalLike) -> Fraction:
    """Exact value ``f(x)`` via Horner's scheme on numerator and denominator."""
    x = _as_fraction(x)
    if f.is_zero:
        return Fraction(0)
    n = len(f.coeffs) - 1
    return Fraction(_homog(f.coeffs, x.numerator, x.denominator), x.denominator**n)


def _homog(coeffs: Sequence[int], p: int, q: int) -> int:
    """``q**n * f(p/q)`` as an exact integer, n = len(coeffs) - 1."""
    n = len(coeffs) - 1
    acc = coeffs[n]
    qp = 1
    for i in range(n - 1, -1, -1):
        qp *= q
        acc = acc * p + coeffs[i] * qp
    return acc


def sign_at(f: IntPolynomial | Sequence[int], x: RationalLike) -> int:
    """Sign of ``f(x)`` computed in integer arithmetic only."""
    coeffs = f.coeffs if isinstance(f, IntPolynomial) else f
    if not coeffs:
        return 0
    x = _as_fraction(x)
    v = _homog(coeffs, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def derivative(f: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(i * c for i, c in enumerate(f.coeffs) if i)


def kth_taylor_coefficient(f: IntPolynomial, k: int, x: RationalLike) -> Fraction:
    """``f^(k)(x) / k!`` exactly."""
    d = f.degree
    if d is None or not 0 <= k <= d:
        raise ValueError(f"k={k} out of range for degree {d}")
    return taylor_coefficients(f, x)[k]


def taylor_coefficients(f: IntPolynomial, x: RationalLike) -> list[Fraction]:
    """All coefficients of ``f(x + Y)`` in ``Y``, exact."""
    x = _as_fraction(x)
    p, q = x.numerator, x.denominator
    n = len(f.coeffs) - 1
    if n < 0:
        return []
    # q^n f((p + q Y)/q) = sum_i b_i Y^i  ->  coefficient i of f(x+Y) is b_i q^i / q^n
    scaled = [c * q ** (n - i) for i, c in enumerate(f.coeffs)]
    shifted = _shift_coeffs(scaled, p)
    return [Fraction(b * q**i, q**n) for i, b in enumerate(shifted)]


# ---------------------------------------------------------------------------
# transforms

def reciprocal(f: IntPolynomial, degree: int | None = None) -> IntPolynomial:
    """``X^d f(1/X)``; ``degree`` overrides d when f has a vanishing top part."""
    d = f.degree if degree is None else degree
    if d is None:
        raise ZeroPolynomialError("reciprocal of the zero polynomial")
    full = [f[i] for i in range(d + 1)]
    return IntPolynomial(reversed(full))


def homothety(f: IntPolynomial, k: int) -> IntPolynomial:
    """``2^(d k) f(X / 2^k)``: coefficient i is scaled by ``2^(k (d - i))``."""
    if k < 0:
        raise ValueError("homothety exponent must be non-negative")
    d = len(f.coeffs) - 1
    return IntPolynomial(c << (k * (d - i)) for i, c in enumerate(f.coeffs))


def scale(f: IntPolynomial, r: int) -> IntPolynomial:
    """``f(r X)``."""
    out, rp = [], 1
    for c in f.coeffs:
        out.append(c * rp)
        rp *= r
    return IntPolynomial(out)


def _shift_coeffs(coeffs: Sequence[int], c: int) -> list[int]:
    """Classical Taylor shift ``f(X + c)`` on a raw coefficient list."""
    n = len(coeffs) - 1
    if n <= 0 or c == 0:
        return list(coeffs)
    if c == 1:
        # each pass is a suffix cumulative sum (Pascal triangle, one row at a time)
        a = list(coeffs)
        for i in range(n):
            tail = list(accumulate(reversed(a[i:])))
            tail.reverse()
            a[i:] = tail
        return a
    if c == -1:
        a = [x if i % 2 == 0 else -x for i, x in enumerate(coeffs)]
        a = _shift_coeffs(a, 1)
        return [x if i % 2 == 0 else -x for i, x in enumerate(a)]
    # f(X + c) = g(X/c + 1) with g(Y) = f(cY)
    scaled = [x * c**i for i, x in enumerate(coeffs)]
    shifted = _shift_coeffs(scaled, 1)
    out = []
    for i, x in enumerate(shifted):
        q, r = divmod(x, c**i)
        assert r == 0
        out.append(q)
    return out


def taylor_shift(f: IntPolynomial, c: int) -> IntPolynomial:
    """``f(X + c)`` for an integer c."""
    return IntPolynomial(_shift_coeffs(f.coeffs, int(c)))


def sign_variations(coeffs: Iterable[int]) -> int:
    """Number of sign changes in the sequence, zeros skipped."""
    count, last = 0, 0
    for c in coeffs:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def remove_power_of_two_content(coeffs: Sequence[int]) -> tuple[list[int], int]:
    """Divide out the largest power of two dividing every coefficient."""
    acc = 0
    for c in coeffs:
        acc |= c
    if acc == 0:
        return list(coeffs), 0
    s = (acc & -acc).bit_length() - 1
    if s == 0:
        return list(coeffs), 0
    return [c >> s for c in coeffs], s


def interval_transform(f: IntPolynomial, a: Fraction, b: Fraction) -> list[int]:
    """Coefficients of ``(X + 1)^d f((a X + b) / (X + 1))`` up to a positive factor.

    Composition: first ``g(Y) = f(a + (b - a) Y)`` (homothety to clear the common
    power-of-two denominator, integer shift by the numerator of ``a``, scaling
    by the numerator of ``b - a``), then ``T_1(R(g))``.  Works for any rational
    endpoints; non-dyadic denominators are cleared the same way.
    """
    d = f.degree
    if d is None:
        raise ZeroPolynomialError("interval transform of the zero polynomial")
    den = math.lcm(a.denominator, b.denominator)
    p = a.numerator * (den // a.denominator)
    r = b.numerator * (den // b.denominator) - p
    # den^d f(X / den): coefficient i scaled by den^(d - i)
    g = [c * den ** (d - i) for i, c in enumerate(f.coeffs)]
    g = _shift_coeffs(g, p)
    rp = 1
    for i in range(len(g)):
        g[i] *= rp
        rp *= r
    g.reverse()
    return _shift_coeffs(g, 1)


def var_on_interval(f: IntPolynomial, J) -> int:
    """Descartes bound ``var((X + 1)^d f((a X + b)/(X + 1)))`` for ``J = (a, b)``."""
    a, b = _endpoints(J)
    if a >= b:
        raise ValueError(f"empty interval ({a}, {b})")
    return sign_variations(interval_transform(f, a, b))


def _endpoints(J) -> tuple[Fraction, Fraction]:
    if hasattr(J, "low") and hasattr(J, "high"):
        return _as_fraction(J.low), _as_fraction(J.high)
    a, b = J
    return _as_fraction(a), _as_fraction(b)


# ---------------------------------------------------------------------------
# division, gcd and square-free part

def content(f: IntPolynomial | Sequence[int]) -> int:
    coeffs = f.coeffs if isinstance(f, IntPolynomial) else f
    g = gmpy2.mpz(0)
    for c in coeffs:
        g = gmpy2.gcd(g, c)
        if g == 1:
            break
    return int(g)


def divide_content(coeffs: Sequence[int], c: int) -> list[int]:
    """Exact division of every coefficient by the integer c."""
    c = gmpy2.mpz(c)
    return [int(gmpy2.divexact(x, c)) for x in coeffs]


def primitive_part(f: IntPolynomial) -> IntPolynomial:
    """f divided by its content, with positive leading coefficient."""
    if f.is_zero:
        return f
    g = content(f)
    if f.leading < 0:
        g = -g
    return IntPolynomial(divide_content(f.coeffs, g))


def pseudo_remainder(a: Sequence[int], b: Sequence[int], positive: bool = True) -> tuple[list[int], int]:
    """Remainder of ``m * a`` by ``b`` where ``m = lc(b)^(deg a - deg b + 1)``.

    With ``positive=True`` the multiplier is ``|lc(b)|^(...)`` so the result is a
    positive multiple of the true remainder.  Returns ``(remainder, m)``.
    """
    mpz = gmpy2.mpz
    a = [mpz(x) for x in a]
    b = [mpz(x) for x in b]
    nb = len(b) - 1
    lc = b[-1]
    if positive and lc < 0:
        lc = -lc
        b = [-x for x in b]
    delta = len(a) - 1 - nb
    if delta < 0:
        return [int(x) for x in a], 1
    # one leading term per step; the lower part picks up a factor lc each time
    for k in range(len(a) - 1, nb - 1, -1):
        q = a[k]
        off = k - nb
        if q:
            for i in range(off):
                a[i] *= lc
            for i in range(nb):
                a[off + i] = a[off + i] * lc - q * b[i]
        else:
            for i in range(k):
                a[i] *= lc
        a[k] = 0
    rem = a[:nb]
    while rem and rem[-1] == 0:
        rem.pop()
    return [int(x) for x in rem], int(lc ** (delta + 1))


def exact_divide(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Quotient a / b, required to be exact over the integers."""
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a.coeffs)
    nb = len(b) - 1
    lc = b.leading
    q = [0] * max(len(r) - nb, 0)
    for k in range(len(r) - 1, nb - 1, -1):
        c, rem = divmod(r[k], lc)
        if rem:
            raise ValueError("division is not exact over the integers")
        q[k - nb] = c
        if c:
            for i in range(nb + 1):
                r[k - nb + i] -= c * b.coeffs[i]
    if any(r[:nb]):
        raise ValueError("division leaves a remainder")
    return IntPolynomial(q)


def primitive_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """gcd over Z[X] by a primitive pseudo-remainder sequence (positive leading coefficient)."""
    a, b = primitive_part(f), primitive_part(g)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    cont = math.gcd(content(f), content(g))
    if len(a) < len(b):
        a, b = b, a
    while not b.is_zero and b.degree > 0:
        r, _ = pseudo_remainder(a.coeffs, b.coeffs)
        a, b = b, primitive_part(IntPolynomial(r))
    if b.is_zero:
        return a * cont
    return IntPolynomial([cont])


_PRIMES = (2**61 - 1, 2**31 - 1, 1_000_000_007, 998_244_353)


def _gcd_degree_mod(f: Sequence[int], g: Sequence[int], p: int) -> int:
    a = [x % p for x in f]
    b = [x % p for x in g]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        inv = pow(b[-1], -1, p)
        nb = len(b) - 1
        while len(a) - 1 >= nb and a:
            q = a[-1] * inv % p
            off = len(a) - 1 - nb
            if q:
                for i in range(nb):
                    a[off + i] = (a[off + i] - q * b[i]) % p
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def is_squarefree(f: IntPolynomial) -> bool:
    """True iff gcd(f, f') is constant.

    A constant gcd modulo a prime not dividing the leading coefficients certifies
    a constant gcd over Q; otherwise fall back to the exact sequence.
    """
    if f.is_zero:
        return False
    if f.degree <= 1:
        return True
    df = derivative(f)
    for p in _PRIMES:
        if f.leading % p and df.leading % p:
            if _gcd_degree_mod(f.coeffs, df.coeffs, p) == 0:
                return True
            break
    return primitive_gcd(f, df).degree == 0


def squarefree_part(f: IntPolynomial) -> IntPolynomial:
    """Primitive part of ``f / gcd(f, f')`` with positive leading coefficient."""
    if f.is_zero:
        raise ZeroPolynomialError("square-free part of the zero polynomial")
    if is_squarefree(f):
        return primitive_part(f)
    g = primitive_gcd(f, derivative(f))
    return primitive_part(exact_divide(primitive_part(f), primitive_part(g)))


# ---------------------------------------------------------------------------
# text format

def dumps(f: IntPolynomial) -> str:
    d = f.degree
    if d is None:
        return "d=0\n"
    lines = [f"d={d}"]
    lines += [f"{i} {c}" for i, c in enumerate(f.coeffs) if c]
    return "\n".join(lines) + "\n"


def loads(text: str) -> IntPolynomial:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("d="):
        raise ValueError("polynomial file must start with 'd=<degree>'")
    d = int(lines[0][2:])
    if d < 0:
        raise ValueError("negative degree")
    coeffs = [0] * (d + 1)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad coefficient line {ln!r}")
        i, c = int(parts[0]), int(parts[1])
        if not 0 <= i <= d:
            raise ValueError(f"index {i} outside 0..{d}")
        coeffs[i] += c
    f = IntPolynomial(coeffs)
    if d > 0 and f.degree != d:
        raise ValueError(f"declared degree {d} but coefficient of X^{d} is zero")
    return f


def read_polynomial(path: str | Path) -> IntPolynomial:
    return loads(Path(path).read_text())


def write_polynomial(f: IntPolynomial, path: str | Path) -> None:
    Path(path).write_text(dumps(f))
