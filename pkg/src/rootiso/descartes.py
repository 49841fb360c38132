"""Descartes subdivision solver on (-1, 1), instrumented with its subdivision tree."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from rootiso.poly import (
    DyadicRational,
    IntPolynomial,
    _shift_coeffs,
    bitsize,
    format_rational,
    is_dyadic,
    is_squarefree,
    reciprocal,
    remove_power_of_two_content,
    sign_at,
    sign_variations,
    var_on_interval,
)


class NotSquareFreeError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    """Open interval with exact rational endpoints."""

    low: Fraction
    high: Fraction

    def __post_init__(self):
        object.__setattr__(self, "low", Fraction(self.low))
        object.__setattr__(self, "high", Fraction(self.high))
        if not self.low < self.high:
            raise ValueError(f"empty interval ({self.low}, {self.high})")

    @property
    def mid(self) -> Fraction:
        return (self.low + self.high) / 2

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    def contains(self, x) -> bool:
        return self.low < x < self.high

    def __str__(self) -> str:
        return f"({format_rational(self.low)}, {format_rational(self.high)})"


@dataclass(frozen=True)
class DyadicInterval(Interval):
    """Interval whose endpoints are dyadic rationals ``m / 2^k``."""

    def __post_init__(self):
        super().__post_init__()
        if not (is_dyadic(self.low) and is_dyadic(self.high)):
            raise ValueError(f"non-dyadic endpoint in {self}")

    @classmethod
    def from_index(cls, c: int, depth: int) -> "DyadicInterval":
        """Node ``c`` at ``depth`` of the bisection tree of (-1, 1)."""
        w = Fraction(2, 1 << depth)
        return cls(-1 + c * w, -1 + (c + 1) * w)

    @property
    def low_dyadic(self) -> DyadicRational:
        return DyadicRational.from_fraction(self.low)

    @property
    def high_dyadic(self) -> DyadicRational:
        return DyadicRational.from_fraction(self.high)


@dataclass
class IsolationResult:
    intervals: list[Interval] = field(default_factory=list)
    exact_roots: list[Fraction] = field(default_factory=list)

    @property
    def root_count(self) -> int:
        return len(self.intervals) + len(self.exact_roots)

    def sorted(self) -> "IsolationResult":
        return IsolationResult(sorted(self.intervals, key=lambda J: J.low), sorted(self.exact_roots))

    def to_json(self) -> dict:
        return {
            "intervals": [[format_rational(J.low), format_rational(J.high)] for J in self.intervals],
            "exact_roots": [format_rational(r) for r in self.exact_roots],
        }


@dataclass(frozen=True)
class NodeRecord:
    interval: DyadicInterval
    depth: int
    var: int
    parent: int | None
    outcome: str  # "discard" | "isolate" | "split"


@dataclass
class SubdivisionStats:
    node_count: int = 0
    max_depth: int = 0
    width_per_level: list[int] = field(default_factory=list)
    var_per_node: list[int] = field(default_factory=list)
    max_intermediate_bitsize: int = 0
    total_sequence_bitsize: int | None = None
    nodes: list[NodeRecord] = field(default_factory=list, repr=False)

    def record(self, node: NodeRecord) -> int:
        while len(self.width_per_level) <= node.depth:
            self.width_per_level.append(0)
        self.width_per_level[node.depth] += 1
        self.node_count += 1
        self.max_depth = max(self.max_depth, node.depth)
        self.var_per_node.append(node.var)
        self.nodes.append(node)
        return len(self.nodes) - 1

    @property
    def max_width(self) -> int:
        return max(self.width_per_level, default=0)

    def check_shape(self) -> None:
        if self.node_count != sum(self.width_per_level):
            raise AssertionError("node_count differs from the sum of level widths")
        if self.node_count and self.max_depth != len(self.width_per_level) - 1:
            raise AssertionError("max_depth inconsistent with width_per_level")

    def to_json(self) -> dict:
        out = {
            "node_count": self.node_count,
            "max_depth": self.max_depth,
            "width_per_level": self.width_per_level,
            "var_per_node": self.var_per_node,
            "max_intermediate_bitsize": self.max_intermediate_bitsize,
        }
        if self.total_sequence_bitsize is not None:
            out["total_sequence_bitsize"] = self.total_sequence_bitsize
        return out


def _unit_map(f: IntPolynomial) -> list[int]:
    """Coefficients of ``f(2X - 1)``, which maps (0, 1) onto (-1, 1)."""
    g = _shift_coeffs(f.coeffs, -1)
    return [c << i for i, c in enumerate(g)]


def _var_of(g: list[int]) -> tuple[int, int]:
    t = g[::-1]
    t = _shift_coeffs(t, 1)
    return sign_variations(t), bitsize(t)


def isolate_in_unit_interval(f: IntPolynomial, check_squarefree: bool = True) -> tuple[IsolationResult, SubdivisionStats]:
    """Isolate the real roots of a square-free ``f`` lying in (-1, 1).

    Each queued node carries ``g`` with ``g(x) ~ f(a + (b - a) x)`` up to a positive
    power of two, so the node's Descartes bound is ``var(T_1(R(g)))`` and the two
    children are ``H_1(g)`` and ``T_1(H_1(g))``.  The queue is FIFO.
    """
    if f.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if check_squarefree and not is_squarefree(f):
        raise NotSquareFreeError("input is not square-free; apply squarefree_part first")
    result, stats = IsolationResult(), SubdivisionStats()
    if f.degree == 0:
        stats.record(NodeRecord(DyadicInterval(-1, 1), 0, 0, None, "discard"))
        return result, stats
    d = f.degree
    g0, _ = remove_power_of_two_content(_unit_map(f))
    stats.max_intermediate_bitsize = bitsize(g0)
    queue = deque([(0, 0, g0, None)])
    while queue:
        c, depth, g, parent = queue.popleft()
        J = DyadicInterval.from_index(c, depth)
        v, bs = _var_of(g)
        stats.max_intermediate_bitsize = max(stats.max_intermediate_bitsize, bs)
        if v == 0:
            stats.record(NodeRecord(J, depth, v, parent, "discard"))
            continue
        if v == 1:
            stats.record(NodeRecord(J, depth, v, parent, "isolate"))
            result.intervals.append(J)
            continue
        me = stats.record(NodeRecord(J, depth, v, parent, "split"))
        left = [x << (d - i) for i, x in enumerate(g)]
        # sum of H_1(g) is 2^d g(1/2): zero iff the midpoint is a root
        if sum(left) == 0:
            result.exact_roots.append(J.mid)
        right = _shift_coeffs(left, 1)
        left, _ = remove_power_of_two_content(left)
        right, _ = remove_power_of_two_content(right)
        stats.max_intermediate_bitsize = max(stats.max_intermediate_bitsize, bitsize(left), bitsize(right))
        queue.append((2 * c, depth + 1, left, me))
        queue.append((2 * c + 1, depth + 1, right, me))
    return result, stats


def isolate_all(f: IntPolynomial, check_squarefree: bool = True) -> IsolationResult:
    """All real roots: (-1, 1) directly, +-1 by evaluation, |x| > 1 through ``R(f)``."""
    return isolate_all_with_stats(f, check_squarefree)[0]


def isolate_all_with_stats(f: IntPolynomial, check_squarefree: bool = True
                           ) -> tuple[IsolationResult, SubdivisionStats, SubdivisionStats | None]:
    """Like ``isolate_all``, also returning the trees for (-1, 1) and for ``R(f)`` on (-1, 1)."""
    if f.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if check_squarefree and not is_squarefree(f):
        raise NotSquareFreeError("input is not square-free; apply squarefree_part first")
    inner, inner_stats = isolate_in_unit_interval(f, check_squarefree=False)
    out = IsolationResult(list(inner.intervals), list(inner.exact_roots))
    for e in (-1, 1):
        if sign_at(f, e) == 0:
            out.exact_roots.append(Fraction(e))
    if f.degree == 0:
        return out.sorted(), inner_stats, None
    # strip factors of X so that R(f) keeps degree d and has no root at 0
    k = 0
    while f.coeffs[k] == 0:
        k += 1
    rf = reciprocal(IntPolynomial(f.coeffs[k:]))
    outer, outer_stats = isolate_in_unit_interval(rf, check_squarefree=False)
    for r in outer.exact_roots:
        out.exact_roots.append(1 / r)
    # every root of R(f) has modulus >= 1 / (1 + max |f_i / f_d|) >= 2^-k
    ratio = max(abs(c) for c in f.coeffs) // abs(f.leading) + 2
    eps = Fraction(1, 1 << ratio.bit_length())
    for J in outer.intervals:
        pieces = [J]
        if J.low < 0 < J.high:
            # R(f)(0) != 0, so exactly one side carries the root
            pieces = [P for P in (Interval(J.low, 0), Interval(0, J.high)) if var_on_interval(rf, P) == 1]
        for P in pieces:
            lo = eps if P.low == 0 else P.low
            hi = -eps if P.high == 0 else P.high
            out.intervals.append(Interval(1 / hi, 1 / lo))
    return out.sorted(), inner_stats, outer_stats


def describe(result: IsolationResult) -> str:
    lines = [f"interval {J}" for J in result.intervals]
    lines += [f"root {format_rational(r)}" for r in result.exact_roots]
    return "\n".join(lines)
