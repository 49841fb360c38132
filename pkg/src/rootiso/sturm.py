"""Sturm-sequence root counting and the Sturm subdivision solver.

The sequence is stored in the standard representation (every polynomial in
full), kept integral by primitive pseudo-remainders with positive multipliers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from rootiso.descartes import DyadicInterval, IsolationResult, NodeRecord, SubdivisionStats
from rootiso.poly import (
    IntPolynomial,
    _as_fraction,
    content,
    divide_content,
    derivative,
    exact_divide,
    pseudo_remainder,
    sign_at,
    sign_variations,
    total_bitsize,
)


class EndpointRootError(ValueError):
    pass


@dataclass(frozen=True)
class SturmSequence:
    polys: tuple[IntPolynomial, ...]
    # F_i = scale_factors[i] * (-rem(F_{i-2}, F_{i-1})) for i >= 2; 1 for F_0, F_1
    scale_factors: tuple[Fraction, ...]
    # F_i / F_s, used only at points where the gcd F_s vanishes
    reduced: tuple[IntPolynomial, ...] | None = field(default=None, compare=False)

    @property
    def gcd(self) -> IntPolynomial:
        return self.polys[-1]

    @property
    def is_squarefree(self) -> bool:
        return self.polys[-1].degree == 0

    def __len__(self) -> int:
        return len(self.polys)


def sturm_sequence(f: IntPolynomial) -> SturmSequence:
    if f.is_zero or f.degree == 0:
        raise ValueError("Sturm sequence needs a nonconstant polynomial")
    polys = [f, derivative(f)]
    scales = [Fraction(1), Fraction(1)]
    while True:
        a, b = polys[-2], polys[-1]
        r, mult = pseudo_remainder(a.coeffs, b.coeffs, positive=True)
        if not r:
            break
        cont = content(r)
        polys.append(IntPolynomial(divide_content(r, -cont)))
        scales.append(Fraction(mult, cont))
    reduced = None
    g = polys[-1]
    if g.degree > 0:
        # F_i / g up to a positive factor; a common sign flip would not change variations
        m = abs(g.leading)
        reduced = tuple(_positive_primitive(exact_divide(p * m ** (p.degree - g.degree + 1), g)) for p in polys)
    return SturmSequence(tuple(polys), tuple(scales), reduced)


def _positive_primitive(p: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(divide_content(p.coeffs, content(p)))


def total_sequence_bitsize(seq: SturmSequence) -> int:
    return sum(total_bitsize(p.coeffs) for p in seq.polys)


def var_at(seq: SturmSequence, x) -> int:
    """Sign variations of the sequence evaluated at x, zeros excluded.

    Where the gcd of f and f' vanishes (a multiple root), the sequence divided
    by that gcd is evaluated instead; at a simple root the zero of f is just
    skipped.  Either way the value equals the count just to the right of x.
    """
    x = _as_fraction(x)
    polys = seq.polys
    if seq.reduced is not None and sign_at(seq.gcd, x) == 0:
        polys = seq.reduced
    return sign_variations(sign_at(p, x) for p in polys)


def count_roots_in(seq: SturmSequence, a, b) -> int:
    """Number of distinct real roots of f in the open interval (a, b)."""
    a, b = _as_fraction(a), _as_fraction(b)
    if not a < b:
        raise ValueError(f"empty interval ({a}, {b})")
    f = seq.polys[0]
    for e in (a, b):
        if sign_at(f, e) == 0:
            raise EndpointRootError(f"endpoint {e} is a root; handle it separately or perturb the interval")
    return var_at(seq, a) - var_at(seq, b)


def _open_count(va: int, vb: int, b_is_root: bool) -> int:
    # va - vb counts roots in (a, b]
    return va - vb - (1 if b_is_root else 0)


def isolate_sturm(f: IntPolynomial, seq: SturmSequence | None = None) -> tuple[IsolationResult, SubdivisionStats]:
    """Isolate the distinct real roots of f in (-1, 1) by bisection with exact Sturm counts."""
    if seq is None:
        seq = sturm_sequence(f)
    result, stats = IsolationResult(), SubdivisionStats()
    stats.total_sequence_bitsize = total_sequence_bitsize(seq)
    stats.max_intermediate_bitsize = max(max((abs(c).bit_length() for c in p.coeffs), default=0) for p in seq.polys)
    cache: dict[Fraction, tuple[int, bool]] = {}

    def at(x: Fraction) -> tuple[int, bool]:
        if x not in cache:
            cache[x] = (var_at(seq, x), sign_at(f, x) == 0)
        return cache[x]

    queue = deque([(0, 0, None)])
    while queue:
        c, depth, parent = queue.popleft()
        J = DyadicInterval.from_index(c, depth)
        va, _ = at(J.low)
        vb, b_root = at(J.high)
        v = _open_count(va, vb, b_root)
        if v == 0:
            stats.record(NodeRecord(J, depth, v, parent, "discard"))
            continue
        if v == 1:
            stats.record(NodeRecord(J, depth, v, parent, "isolate"))
            result.intervals.append(J)
            continue
        me = stats.record(NodeRecord(J, depth, v, parent, "split"))
        _, m_root = at(J.mid)
        if m_root:
            result.exact_roots.append(J.mid)
        queue.append((2 * c, depth + 1, me))
        queue.append((2 * c + 1, depth + 1, me))
    return result, stats


def cauchy_power_of_two(f: IntPolynomial) -> int:
    """Least k with every root of f strictly inside ``(-2^k, 2^k)``."""
    ratio = max(abs(c) for c in f.coeffs[:-1]) // abs(f.leading) + 2 if f.degree > 0 else 1
    return ratio.bit_length()


def isolate_sturm_all(f: IntPolynomial) -> tuple[IsolationResult, SubdivisionStats]:
    """All distinct real roots: isolate ``f(2^k X)`` in (-1, 1) and scale back."""
    k = cauchy_power_of_two(f)
    g = IntPolynomial([c << (k * i) for i, c in enumerate(f.coeffs)])
    res, stats = isolate_sturm(g)
    s = 1 << k
    out = IsolationResult([type(J)(J.low * s, J.high * s) for J in res.intervals], [r * s for r in res.exact_roots])
    return out.sorted(), stats
