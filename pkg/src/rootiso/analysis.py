"""Condition numbers, separation, root counts near the real axis, and the
numeric root oracle these quantities are measured with.

The oracle runs Aberth-Ehrlich iterations in gmpy2 multiprecision and certifies
its output with the Weierstrass-correction inclusion disks
``D(z_i, d |W_i|)``, ``W_i = f(z_i) / (lc(f) prod_{j != i} (z_i - z_j))``:
when these disks are pairwise disjoint each holds exactly one root.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from rootiso.descartes import DyadicInterval, Interval, SubdivisionStats
from rootiso.poly import (
    IntPolynomial,
    _as_fraction,
    _homog,
    derivative,
    evaluate,
    is_squarefree,
    one_norm,
    primitive_gcd,
    sign_at,
    squarefree_part,
)

START_PRECISION = 128
MAX_PRECISION = 4096
LOG2_E = math.log2(math.e)


class OracleError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# numeric root oracle

@dataclass(frozen=True)
class NumericRootSet:
    """Certified root approximations: the root near ``roots[i]`` lies within ``radii[i]``."""

    roots: tuple
    radii: tuple
    is_real: tuple[bool, ...]
    precision_bits: int

    def __len__(self) -> int:
        return len(self.roots)

    def real_roots(self) -> list[tuple]:
        """``(center, radius)`` for the certified real roots, sorted."""
        out = [(z.real, r) for z, r, re in zip(self.roots, self.radii, self.is_real) if re]
        return sorted(out, key=lambda t: t[0])

    def count_real_in(self, a, b) -> tuple[int, int]:
        """(definitely, possibly) many real roots in the open interval (a, b)."""
        a, b = gmpy2.mpq(_as_fraction(a)), gmpy2.mpq(_as_fraction(b))
        definite = possible = 0
        with working_precision(self.precision_bits):
            for x, r in self.real_roots():
                if a < x - r and x + r < b:
                    definite += 1
                if x + r > a and x - r < b:
                    possible += 1
        return definite, possible

    def complex_approximations(self) -> list[complex]:
        return [complex(z) for z in self.roots]


def working_precision(bits: int):
    """Context manager for gmpy2 arithmetic at ``bits`` of precision."""
    return gmpy2.context(gmpy2.get_context(), precision=bits)


_ctx = working_precision


def _initial_guesses(f: IntPolynomial) -> list[complex]:
    d = f.degree
    shift = max(0, max(abs(c).bit_length() for c in f.coeffs) - 60)
    c = np.array([float(x >> shift if x >= 0 else -((-x) >> shift)) for x in reversed(f.coeffs)])
    guesses = None
    if d <= 600 and c[0] != 0:
        with np.errstate(all="ignore"):
            r = np.roots(c)
        if len(r) == d and np.all(np.isfinite(r)):
            guesses = list(r)
    if guesses is None:
        # circle of radius given by a Fujiwara-style bound, slightly rotated
        lc = abs(f.leading)
        rad = max(abs(Fraction(x, lc)) ** (Fraction(1, d - i)) if x else 0 for i, x in enumerate(f.coeffs[:-1]))
        rad = 2 * float(rad) if rad else 1.0
        guesses = [rad * complex(math.cos(2 * math.pi * k / d + 0.4), math.sin(2 * math.pi * k / d + 0.4)) for k in range(d)]
    # exact duplicates stall the iteration
    seen = set()
    out = []
    for k, z in enumerate(guesses):
        z = complex(z)
        while z in seen:
            z += complex(1e-7 * (k + 1), 1e-7)
        seen.add(z)
        out.append(z)
    return out


def _horner2(coeffs, z):
    p = coeffs[-1]
    dp = mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_sweep(coeffs, zs) -> mpfr:
    """One Gauss-Seidel Aberth pass; returns the largest relative correction."""
    n = len(zs)
    worst = mpfr(0)
    for i in range(n):
        zi = zs[i]
        p, dp = _horner2(coeffs, zi)
        if p == 0:
            continue
        if dp == 0:
            dp = mpc(1e-30)
        ratio = p / dp
        s = mpc(0)
        for j in range(n):
            if j != i:
                s += 1 / (zi - zs[j])
        w = ratio / (1 - ratio * s)
        zs[i] = zi - w
        rel = abs(w) / max(abs(zi), mpfr(1))
        if rel > worst:
            worst = rel
    return worst


def _certify(f: IntPolynomial, coeffs, abscoeffs, zs, prec: int):
    """Inclusion radii and certified realness, or None if disks overlap."""
    n = len(zs)
    lc = abs(coeffs[-1])
    u = mpfr(2) ** (-prec)
    safety = 1 + mpfr(2) ** (-(prec // 2))
    radii = []
    for i in range(n):
        zi = zs[i]
        p, _ = _horner2(coeffs, zi)
        az = abs(zi)
        bound = mpfr(0)
        for c in reversed(abscoeffs):
            bound = bound * az + c
        err = 4 * (2 * n + 2) * u * bound
        prod = mpfr(1)
        for j in range(n):
            if j != i:
                prod *= abs(zi - zs[j])
        if prod == 0:
            return None
        radii.append(n * (abs(p) + err) / (lc * prod) * safety)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(zs[i] - zs[j]) <= radii[i] + radii[j]:
                return None
    real = []
    for i in range(n):
        zi, ri = zs[i], radii[i]
        if abs(zi.imag) > ri:
            real.append(False)
            continue
        cz = mpc(zi.real, -zi.imag)
        # the conjugate root lies in conj(D_i); if that meets no other disk it is in D_i itself
        if any(abs(cz - zs[j]) <= ri + radii[j] for j in range(n) if j != i):
            return None
        real.append(True)
    return radii, real


def numeric_roots(f: IntPolynomial, precision_bits: int = START_PRECISION,
                  max_precision: int = MAX_PRECISION) -> NumericRootSet:
    """All complex roots of a square-free f with certified inclusion radii."""
    if f.is_zero or f.degree < 1:
        raise ValueError("numeric_roots needs degree >= 1")
    if not is_squarefree(f):
        raise ValueError("numeric_roots needs a square-free polynomial; apply squarefree_part first")
    d = f.degree
    prec = precision_bits
    guesses = _initial_guesses(f)
    zs = None
    while prec <= max_precision:
        with _ctx(prec):
            coeffs = [mpc(c) for c in f.coeffs]
            abscoeffs = [mpfr(abs(c)) for c in f.coeffs]
            if zs is None:
                zs = [mpc(z) for z in guesses]
            else:
                zs = [mpc(z) for z in zs]
            if d == 1:
                zs = [mpc(mpfr(-f.coeffs[0]) / f.coeffs[1])]
            tol = mpfr(2) ** (-(prec - 12))
            for it in range(60 + 4 * d):
                worst = _aberth_sweep(coeffs, zs)
                if worst < tol:
                    break
                if it % 8 == 7:
                    cert = _certify(f, coeffs, abscoeffs, zs, prec)
                    if cert is not None and worst < mpfr(2) ** (-(prec // 2)):
                        break
            cert = _certify(f, coeffs, abscoeffs, zs, prec)
            if cert is not None:
                radii, real = cert
                zs = [mpc(z.real, 0) if re else z for z, re in zip(zs, real)]
                return NumericRootSet(tuple(zs), tuple(radii), tuple(real), prec)
        prec *= 2
    raise OracleError("oracle certification failed")


def _distinct_roots(f: IntPolynomial) -> tuple[IntPolynomial, NumericRootSet]:
    g = squarefree_part(f)
    if g.degree == 0:
        return g, NumericRootSet((), (), (), START_PRECISION)
    return g, numeric_roots(g)


# ---------------------------------------------------------------------------
# condition numbers

def _inv_cond_parts(f: IntPolynomial, df: IntPolynomial, norm: int, x: Fraction) -> tuple[Fraction, Fraction]:
    """``|f(x)| / ||f||_1`` and ``|f'(x)| / (d ||f||_1)`` exactly."""
    d = f.degree
    p, q = x.numerator, x.denominator
    a = abs(_homog(f.coeffs, p, q))  # q^d |f(x)|
    b = abs(_homog(df.coeffs, p, q)) if not df.is_zero else 0  # q^(d-1) |f'(x)|
    return Fraction(a, q**d * norm), Fraction(b, d * q ** (d - 1) * norm)


def _inv_cond(f: IntPolynomial, df: IntPolynomial, norm: int, x: Fraction) -> Fraction:
    """``1 / C(f, x) = max(|f(x)|, |f'(x)| / d) / ||f||_1`` exactly."""
    if f.degree == 0:
        return Fraction(1)
    return max(_inv_cond_parts(f, df, norm, x))


def _round_up(x: Fraction) -> float:
    v = float(x)
    if Fraction(v) < x:
        v = math.nextafter(v, math.inf)
    return v


def _round_down(x: Fraction) -> float:
    v = float(x)
    if Fraction(v) > x:
        v = math.nextafter(v, -math.inf)
    return v


def local_cond_exact(f: IntPolynomial, x) -> Fraction | None:
    """``C(f, x)`` as an exact rational, ``None`` when f(x) = f'(x) = 0."""
    norm = one_norm(f)
    v = _inv_cond(f, derivative(f), norm, _as_fraction(x))
    return None if v == 0 else 1 / v


def local_cond(f: IntPolynomial, x) -> float:
    """``||f||_1 / max(|f(x)|, |f'(x)| / d)`` rounded up; ``inf`` at a singular point."""
    c = local_cond_exact(f, x)
    return math.inf if c is None else _round_up(c)


@dataclass(frozen=True)
class ConditionEstimate:
    """Bracket ``lower <= cond_R(f) <= upper``; both infinite for a singular real point."""

    lower: float
    upper: float
    grid_step: float
    evaluations: int = 0

    @property
    def infinite(self) -> bool:
        return math.isinf(self.lower)

    @property
    def finite(self) -> bool:
        return not math.isinf(self.upper)


def _has_singular_point_in_I(f: IntPolynomial) -> bool:
    g = primitive_gcd(f, derivative(f))
    if g.degree == 0:
        return False
    from rootiso.descartes import isolate_in_unit_interval

    h = squarefree_part(g)
    if sign_at(h, -1) == 0 or sign_at(h, 1) == 0:
        return True
    res, _ = isolate_in_unit_interval(h, check_squarefree=False)
    return res.root_count > 0


def _lipschitz_constants(f: IntPolynomial) -> tuple[Fraction, Fraction]:
    """Lipschitz constants on [-1, 1] of ``f / ||f||_1`` and ``f' / (d ||f||_1)``.

    ``|p'(x)| <= ||p'||_1`` on [-1, 1]; both values are at most d.
    """
    d = f.degree
    norm = one_norm(f)
    df = derivative(f)
    l0 = Fraction(sum(abs(c) for c in df.coeffs), norm)
    l1 = Fraction(sum(abs(c) for c in derivative(df).coeffs), d * norm) if d >= 2 else Fraction(0)
    return l0, l1


def _cond_float_bnb(f: IntPolynomial, target_rel_err: float, initial_cells: int,
                    max_depth: int = 44, max_cells: int = 20_000_000) -> ConditionEstimate | None:
    """Vectorised cell search in double precision.

    With coefficients scaled by ``1/||f||_1`` every Horner value on [-1, 1] is off
    by at most ``err = (4d + 16) 2^-53``, which is charged against each cell
    bound.  Returns None when that error is not negligible against the minimum.
    """
    d = f.degree
    norm = one_norm(f)
    df = derivative(f)
    a = np.array([float(Fraction(c, norm)) for c in f.coeffs])
    b = np.array([float(Fraction(c, d * norm)) for c in df.coeffs])
    l0, l1 = (float(c) * (1 + 1e-12) for c in _lipschitz_constants(f))
    err = (4 * d + 16) * 2.0**-53

    def horner(coeffs, x):
        p = np.full_like(x, coeffs[-1])
        for c in coeffs[-2::-1]:
            p = p * x + c
        return np.abs(p)

    h = 1.0 / initial_cells
    x = -1 + (2 * np.arange(initial_cells) + 1) * h
    best, best_x = math.inf, 0.0
    lb_min = math.inf
    evals = 0
    for _ in range(max_depth):
        va, vb = horner(a, x), horner(b, x)
        v = np.maximum(va, vb)
        evals += len(x)
        i = int(np.argmin(v))
        if v[i] + err < best:
            best, best_x = float(v[i]) + err, float(x[i])
        if best <= 1e6 * err:
            return None
        lb = np.maximum(va - l0 * h, vb - l1 * h) - err
        keep = lb * (1 + target_rel_err) < best
        if not np.all(keep):
            lb_min = min(lb_min, float(np.min(lb[~keep])))
        x = x[keep]
        if len(x) == 0:
            break
        if 2 * len(x) > max_cells:
            return None
        h /= 2
        x = np.concatenate((x - h, x + h))
    else:
        return None
    if not lb_min > 0:
        return None
    # the lower end is an exact sample; best_x is a dyadic double
    lower = _round_down(1 / _inv_cond(f, df, norm, Fraction(best_x)))
    upper = math.nextafter(1 / lb_min, math.inf) * (1 + 1e-15)
    return ConditionEstimate(lower, max(upper, lower), 2 * h, evals)


def _cond_exact_bnb(f: IntPolynomial, target_rel_err: float, initial_cells: int,
                    max_evaluations: int) -> ConditionEstimate:
    d = f.degree
    df = derivative(f)
    norm = one_norm(f)
    l0, l1 = _lipschitz_constants(f)
    target = Fraction(target_rel_err).limit_denominator(10**6)

    def cell(x: Fraction, h: Fraction):
        va, vb = _inv_cond_parts(f, df, norm, x)
        return max(va - l0 * h, vb - l1 * h), max(va, vb)

    half = Fraction(1, initial_cells)
    heap = []
    best = None
    evals = 0
    finest = 2 * half
    for k in range(initial_cells):
        x = -1 + (2 * k + 1) * half
        lb, v = cell(x, half)
        evals += 1
        best = v if best is None else min(best, v)
        heapq.heappush(heap, (lb, x, half))
    while best > 0:
        lb = heap[0][0]
        if lb > 0 and best <= (1 + target) * lb:
            break
        if evals >= max_evaluations:
            break
        plb, x, h = heapq.heappop(heap)
        h2 = h / 2
        finest = min(finest, 2 * h2)
        for xc in (x - h2, x + h2):
            clb, vc = cell(xc, h2)
            evals += 1
            best = min(best, vc)
            # a child's certified value never drops below its parent's
            heapq.heappush(heap, (max(clb, plb), xc, h2))
    if best == 0:
        return ConditionEstimate(math.inf, math.inf, float(finest), evals)
    lb = heap[0][0]
    lower = _round_down(1 / best)
    upper = _round_up(1 / lb) if lb > 0 else math.inf
    return ConditionEstimate(lower, upper, float(finest), evals)


def global_cond_certified(f: IntPolynomial, target_rel_err: float = 0.05, initial_cells: int = 16,
                          max_evaluations: int = 200_000) -> ConditionEstimate:
    """Certified bracket for ``cond_R(f) = max_{x in [-1,1]} C(f, x)``.

    ``x -> 1/C(f, x)`` is d-Lipschitz on [-1, 1].  A cell of half-width h sampled
    at its centre therefore carries a certified lower bound for 1/C on the whole
    cell, and cells are halved, most promising first, until
    ``upper / lower <= 1 + target_rel_err``.  ``lower`` is always an exactly
    evaluated sample.  Low degrees run entirely in rational arithmetic; higher
    ones use a vectorised double-precision pass with a rigorous rounding error
    term and fall back to rationals when that term is too large.
    """
    if f.is_zero:
        raise ValueError("condition number of the zero polynomial")
    if f.degree == 0:
        return ConditionEstimate(1.0, 1.0, 2.0, 1)
    if not is_squarefree(f) and _has_singular_point_in_I(f):
        return ConditionEstimate(math.inf, math.inf, 0.0, 0)
    if f.degree > 2:
        fast = _cond_float_bnb(f, target_rel_err, initial_cells)
        if fast is not None:
            return fast
    return _cond_exact_bnb(f, target_rel_err, initial_cells, max_evaluations)


def cond_grid_brackets(f: IntPolynomial, levels: int) -> list[ConditionEstimate]:
    """Brackets from uniform dyadic grids of step ``2^(1-k)``, k = 1..levels.

    Each bracket is intersected with the previous one, so ``lower`` never
    decreases and ``upper`` never increases along the list.
    """
    if f.is_zero or f.degree < 1:
        raise ValueError("needs a nonconstant polynomial")
    d = f.degree
    df = derivative(f)
    norm = one_norm(f)
    out = []
    lower, upper = 0.0, math.inf
    for k in range(1, levels + 1):
        n = 1 << k
        step = Fraction(2, n)
        vals = [_inv_cond(f, df, norm, -1 + i * step) for i in range(n + 1)]
        m = min(vals)
        if m == 0:
            out.append(ConditionEstimate(math.inf, math.inf, float(step), n + 1))
            continue
        lower = max(lower, _round_down(1 / m))
        lb = m - d * step / 2
        if lb > 0:
            upper = min(upper, _round_up(1 / lb))
        out.append(ConditionEstimate(lower, upper, float(step), n + 1))
    return out

# ---------------------------------------------------------------------------
# separation

@dataclass(frozen=True)
class SeparationEstimate:
    lower: float
    upper: float

    @property
    def infinite(self) -> bool:
        return math.isinf(self.lower)


def _dist_to_I(z) -> mpfr:
    x, y = z.real, z.imag
    if x > 1:
        return gmpy2.sqrt((x - 1) ** 2 + y * y)
    if x < -1:
        return gmpy2.sqrt((x + 1) ** 2 + y * y)
    return abs(y)


def _in_I_eps(z, r, eps, real: bool = False) -> tuple[bool, bool]:
    if real:
        # the root is known to lie on the segment [x - r, x + r]
        x = z.real
        return x - r >= -1 - eps and x + r <= 1 + eps, x + r >= -1 - eps and x - r <= 1 + eps
    dist = _dist_to_I(z)
    return dist + r <= eps, dist - r <= eps


def separation(f: IntPolynomial, eps: float, roots: NumericRootSet | None = None) -> SeparationEstimate:
    """ε-real separation: least distance between distinct roots within ε of [-1, 1].

    0 when a multiple root lies there; +inf when fewer than two roots do.
    ``roots`` must be the oracle output for the square-free part of f.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    g = squarefree_part(f)
    if g.degree < f.degree:
        _, mult = _distinct_roots(primitive_gcd(f, derivative(f)))
        with _ctx(mult.precision_bits):
            flags = [_in_I_eps(z, r, mpfr(eps), re) for z, r, re in zip(mult.roots, mult.radii, mult.is_real)]
        if any(dfn for dfn, _ in flags):
            return SeparationEstimate(0.0, 0.0)
        multiple_possible = any(pos for _, pos in flags)
    else:
        multiple_possible = False
    if g.degree == 0:
        return SeparationEstimate(0.0 if multiple_possible else math.inf, math.inf)
    if roots is None:
        roots = numeric_roots(g)
    with _ctx(roots.precision_bits):
        e = mpfr(eps)
        flags = [_in_I_eps(z, r, e, re) for z, r, re in zip(roots.roots, roots.radii, roots.is_real)]
        definite = [i for i, (dfn, _) in enumerate(flags) if dfn]
        possible = [i for i, (_, pos) in enumerate(flags) if pos]
        lo = mpfr("inf")
        for a in range(len(possible)):
            for b in range(a + 1, len(possible)):
                i, j = possible[a], possible[b]
                lo = min(lo, abs(roots.roots[i] - roots.roots[j]) - roots.radii[i] - roots.radii[j])
        hi = mpfr("inf")
        for a in range(len(definite)):
            for b in range(a + 1, len(definite)):
                i, j = definite[a], definite[b]
                hi = min(hi, abs(roots.roots[i] - roots.roots[j]) + roots.radii[i] + roots.radii[j])
        lower = 0.0 if multiple_possible else float(gmpy2.next_below(lo) if gmpy2.is_finite(lo) else lo)
        upper = float(gmpy2.next_above(hi)) if gmpy2.is_finite(hi) else math.inf
    return SeparationEstimate(max(lower, 0.0), upper)


# ---------------------------------------------------------------------------
# hyperbolic disk family and the root count rho

@dataclass(frozen=True)
class DiskFamily:
    degree: int
    N: int
    entries: tuple[tuple[int, Fraction, Fraction], ...]  # (n, centre, radius)

    def centre(self, n: int) -> Fraction:
        return self.entries[n + self.N][1]

    def radius(self, n: int) -> Fraction:
        return self.entries[n + self.N][2]


def ceil_log2(d: int) -> int:
    return (d - 1).bit_length() if d > 0 else 0


def disk_family(d: int) -> DiskFamily:
    """Disks ``D(xi_n, rho_n)``, ``|n| <= N = ceil(log2 d)``, accumulating at +-1."""
    if d < 1:
        raise ValueError("disk family needs d >= 1")
    N = ceil_log2(d)
    entries = []
    for n in range(-N, N + 1):
        s = (n > 0) - (n < 0)
        m = abs(n)
        if m <= N - 1:
            xi = s * (1 - Fraction(3, 4) / 2**m)
            rho = Fraction(3, 8) / 2**m
        else:
            xi = s * (1 - Fraction(1, 2**N))
            rho = Fraction(3, 2) / 2**N
        entries.append((n, Fraction(xi), rho))
    return DiskFamily(d, N, tuple(entries))


@dataclass(frozen=True)
class RhoCount:
    """Roots in the disk union: at least ``definite``, at most ``possible``."""

    definite: int
    possible: int

    @property
    def exact(self) -> bool:
        return self.definite == self.possible


def _membership(z, r, centre, radius, margin) -> tuple[bool, bool]:
    dist = abs(z - centre)
    return dist + r + margin < radius, dist - r - margin < radius


def rho_count(f: IntPolynomial, roots: NumericRootSet | None = None) -> RhoCount:
    """Number of distinct roots of f in the union of the disk family for deg f."""
    if f.is_zero or f.degree < 1:
        return RhoCount(0, 0)
    fam = disk_family(f.degree)
    if roots is None:
        _, roots = _distinct_roots(f)
    definite = possible = 0
    with _ctx(roots.precision_bits):
        margin = mpfr(2) ** (-(roots.precision_bits - 8))
        disks = [(mpc(mpfr(xi)), mpfr(rho)) for _, xi, rho in fam.entries]
        for z, r in zip(roots.roots, roots.radii):
            flags = [_membership(z, r, c, R, margin) for c, R in disks]
            definite += any(dfn for dfn, _ in flags)
            possible += any(pos for _, pos in flags)
    return RhoCount(definite, possible)


def rho_upper_bound(f: IntPolynomial) -> float:
    """``sum_n log2(e ||f||_1 / |f(xi_n)|)`` over the disk family, rounded up; inf if some f(xi_n) = 0."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    d = max(f.degree, 1)
    fam = disk_family(d)
    log_norm = math.log2(one_norm(f)) + LOG2_E
    total = 0.0
    for _, xi, _ in fam.entries:
        v = evaluate(f, xi)
        if v == 0:
            return math.inf
        v = abs(v)
        total += log_norm - (math.log2(v.numerator) - math.log2(v.denominator))
    return total * (1 + 1e-12) + 1e-9


# ---------------------------------------------------------------------------
# Obreshkoff geometry

@dataclass(frozen=True)
class ObreshkoffRegion:
    """The two Obreshkoff disks of J for parameter alpha (angle pi / (alpha + 2))."""

    interval: Interval
    alpha: int
    upper_centre: object
    lower_centre: object
    radius: object
    precision_bits: int

    @property
    def diameter(self):
        return 2 * self.radius

    def _flags(self, z, r):
        with _ctx(self.precision_bits):
            margin = self.radius * mpfr(2) ** (-(self.precision_bits - 16))
            up = _membership(mpc(z), mpfr(r), self.upper_centre, self.radius, margin)
            lo = _membership(mpc(z), mpfr(r), self.lower_centre, self.radius, margin)
        return up, lo

    def in_area(self, z, r=0) -> tuple[bool, bool]:
        up, lo = self._flags(z, r)
        return up[0] or lo[0], up[1] or lo[1]

    def in_lens(self, z, r=0) -> tuple[bool, bool]:
        up, lo = self._flags(z, r)
        return up[0] and lo[0], up[1] and lo[1]

    def count_area(self, roots: NumericRootSet) -> tuple[int, int]:
        flags = [self.in_area(z, r) for z, r in zip(roots.roots, roots.radii)]
        return sum(a for a, _ in flags), sum(b for _, b in flags)

    def count_lens(self, roots: NumericRootSet) -> tuple[int, int]:
        flags = [self.in_lens(z, r) for z, r in zip(roots.roots, roots.radii)]
        return sum(a for a, _ in flags), sum(b for _, b in flags)


def obreshkoff_region(J, alpha: int, precision_bits: int = 256) -> ObreshkoffRegion:
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if not isinstance(J, Interval):
        J = Interval(*J)
    with _ctx(precision_bits):
        phi = gmpy2.const_pi() / (alpha + 2)
        w = mpfr(J.width)
        mid = mpfr(J.mid)
        radius = w / (2 * gmpy2.sin(phi))
        offset = w / 2 * gmpy2.cos(phi) / gmpy2.sin(phi)
        up = mpc(mid, offset)
        lo = mpc(mid, -offset)
    return ObreshkoffRegion(J, alpha, up, lo, radius, precision_bits)


@dataclass
class SandwichReport:
    nodes: int = 0
    violations: list[tuple[int, int, tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    uncertain: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def obreshkoff_sandwich(f: IntPolynomial, stats: SubdivisionStats, roots: NumericRootSet | None = None) -> SandwichReport:
    """Check ``#roots in lens L_d(J) <= var(f, J) <= #roots in area A_d(J)`` at every node.

    A root sitting exactly at an endpoint of J lies on both circle boundaries, so
    it is removed before counting rather than left ambiguous.
    """
    if roots is None:
        roots = numeric_roots(f)
    d = f.degree
    rep = SandwichReport()
    prec = max(256, roots.precision_bits)
    for idx, node in enumerate(stats.nodes):
        J = node.interval
        region = obreshkoff_region(J, d, prec)
        ends = [e for e in (J.low, J.high) if evaluate(f, e) == 0]
        pairs = list(zip(roots.roots, roots.radii))
        if ends:
            with working_precision(roots.precision_bits):
                pairs = [(z, r) for z, r in pairs if not any(abs(z - gmpy2.mpq(e)) <= r for e in ends)]
        lens = [region.in_lens(z, r) for z, r in pairs]
        area = [region.in_area(z, r) for z, r in pairs]
        lens = (sum(a for a, _ in lens), sum(b for _, b in lens))
        area = (sum(a for a, _ in area), sum(b for _, b in area))
        rep.nodes += 1
        v = node.var
        if lens[0] > v or area[1] < v:
            rep.violations.append((idx, v, lens, area))
        elif lens[1] > v or area[0] < v:
            rep.uncertain += 1
    return rep


# ---------------------------------------------------------------------------
# separation versus condition number

@dataclass(frozen=True)
class SeparationConditionReport:
    verdict: str  # "holds" | "violated" | "inconclusive"
    margin: float  # certified separation lower bound minus the largest admissible threshold
    eps: float
    separation: SeparationEstimate
    threshold_low: float
    threshold_high: float


def check_separation_condition_inequality(f: IntPolynomial, cond: ConditionEstimate | None = None,
                                          roots: NumericRootSet | None = None) -> SeparationConditionReport:
    """Test ``sep_eps(f) >= 1 / (12 d cond_R(f))`` at ``eps = 1 / (2 e d upper)``.

    Pessimistic ends are used throughout: the verdict is "holds" only if the
    certified separation lower bound clears the largest admissible threshold.
    """
    if cond is None:
        cond = global_cond_certified(f)
    if not cond.finite:
        raise ValueError("needs a finite certified condition number")
    d = f.degree
    eps = 1 / (2 * math.e * d * cond.upper)
    sep = separation(f, eps, roots)
    th_hi = 1 / (12 * d * cond.lower)
    th_lo = 1 / (12 * d * cond.upper)
    if sep.lower >= th_hi:
        verdict = "holds"
    elif sep.upper < th_lo:
        verdict = "violated"
    else:
        verdict = "inconclusive"
    return SeparationConditionReport(verdict, sep.lower - th_hi, eps, sep, th_lo, th_hi)


def depth_bound(f: IntPolynomial, cond: ConditionEstimate, roots: NumericRootSet | None = None) -> float:
    """``log2(4 / min(sep_eps, eps))`` with ``eps = 1 / (e d cond_R)``: the depth beyond which
    every interval has var 0 or 1."""
    d = f.degree
    eps = 1 / (math.e * d * cond.upper)
    sep = separation(f, eps, roots)
    return math.log2(4 / min(sep.lower, eps)) if min(sep.lower, eps) > 0 else math.inf


def real_roots_in_unit_interval(roots: NumericRootSet) -> list[tuple]:
    """Certified real roots whose inclusion interval meets (-1, 1)."""
    with working_precision(roots.precision_bits):
        return [(x, r) for x, r in roots.real_roots() if x + r > -1 and x - r < 1]
