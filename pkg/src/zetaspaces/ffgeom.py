"""Varieties over finite fields: point counts, Hasse-Weil zeta, closed points and 0-cycles.

Counting is exact. For an affine system the variables that occur are split
into an *eliminated* variable ``y`` and the remaining ``e`` enumerated ones;
for each of the ``q^e`` enumerated tuples the specialised polynomials are
univariate in ``y`` and their common roots in ``F_q`` are counted as
``deg gcd(h, y^q - y)``. Variables that occur in no equation contribute a
factor ``q``. A projective system is counted chart by chart over normalised
representatives (first nonzero coordinate equal to 1).

The enumeration budget bounds the number of enumerated tuples; it defaults
to ``10**7`` and can be overridden with ``ZETASPACES_BUDGET``.
"""
from __future__ import annotations

import os
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from . import kernels
from .errors import FieldTooLarge, InconsistentCounts, NotHomogeneous, NotRational
from .ffield import FiniteField, fp_count_roots, fp_gcd, prime_power
from .polynomial import Polynomial, parse_polynomial
from .poset import Multiset, MultisetPoset
from .series import PowerSeries, RationalFunction, _pmul, _trim, cyclotomic_product, ps_exp

__all__ = [
    "DEFAULT_BUDGET",
    "VarietySpec",
    "count_points",
    "point_counts",
    "hasse_weil_zeta",
    "closed_point_counts",
    "product_formula_series",
    "mobius_series",
    "ClosedPoint",
    "ZeroCycle",
    "ZeroCyclePoset",
    "iter_0cycles",
    "enumerate_0cycles",
    "zero_cycle_series",
    "mobius_0cycle",
    "FunctionalEquationResult",
    "weil_functional_check",
]

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "ZETASPACES_BUDGET"
_CHUNK = 4096


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class VarietySpec:
    """Zero locus of integer polynomials in affine ``m``-space or projective ``m``-space."""

    ambient: str
    dim: int
    polynomials: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if self.ambient not in ("affine", "projective"):
            raise ValueError(f"unknown ambient {self.ambient!r}")
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        object.__setattr__(self, "polynomials", tuple(self.polynomials))
        for f in self.polynomials:
            if f.nvars != self.nvars:
                raise ValueError(f"polynomial has {f.nvars} variables, expected {self.nvars}")
            if self.ambient == "projective" and not f.is_homogeneous():
                raise NotHomogeneous(f"{f} is not homogeneous")

    @property
    def nvars(self) -> int:
        return self.dim + 1 if self.ambient == "projective" else self.dim

    @classmethod
    def affine(cls, m: int, polys: Sequence[Polynomial | str] = ()) -> VarietySpec:
        return cls("affine", m, tuple(_as_poly(f, m) for f in polys))

    @classmethod
    def projective(cls, m: int, polys: Sequence[Polynomial | str] = ()) -> VarietySpec:
        return cls("projective", m, tuple(_as_poly(f, m + 1) for f in polys))

    @classmethod
    def point(cls) -> VarietySpec:
        return cls("affine", 0)

    @classmethod
    def parse(cls, ambient: str, polys: Sequence[str] = ()) -> VarietySpec:
        """``ambient`` is ``"affine:m"`` or ``"projective:m"``."""
        kind, _, m = ambient.partition(":")
        if kind not in ("affine", "projective") or not m.isdigit():
            raise ValueError(f"ambient must look like affine:2 or projective:1, got {ambient!r}")
        return getattr(cls, kind)(int(m), polys)

    def reduce_mod(self, p: int) -> VarietySpec:
        return VarietySpec(self.ambient, self.dim, tuple(f.reduce_mod(p) for f in self.polynomials))

    def describe(self) -> dict:
        from .polynomial import format_polynomial

        return {
            "ambient": f"{self.ambient}:{self.dim}",
            "polynomials": [format_polynomial(f) for f in self.polynomials],
        }


def _as_poly(f, nvars):
    return parse_polynomial(f, nvars) if isinstance(f, str) else f


# --- counting ----------------------------------------------------------------

@dataclass
class _Plan:
    """An affine system reduced mod ``p`` and prepared for elimination."""

    empty: bool
    free: int
    polys: list  # Polynomial over (enumerated..., y), y last
    n_enum: int

    def evaluations(self, q: int) -> int:
        if self.empty or not self.polys:
            return 0
        return q**self.n_enum


def _plan(polys: Sequence[Polynomial], nvars: int, p: int) -> _Plan:
    reduced = [f.reduce_mod(p) for f in polys]
    reduced = [f for f in reduced if not f.is_zero()]
    if any(all(not any(e) for e in f.terms) for f in reduced):
        return _Plan(True, 0, [], 0)
    occurring = [i for i in range(nvars) if any(f.degree_in(i) for f in reduced)]
    free = nvars - len(occurring)
    if not reduced:
        return _Plan(False, free, [], 0)
    # eliminate the variable of smallest degree; ties go to the highest index
    y = min(occurring, key=lambda i: (max(f.degree_in(i) for f in reduced), -i))
    keep = [i for i in occurring if i != y] + [y]
    return _Plan(False, free, [f.drop_variables(keep) for f in reduced], len(keep) - 1)


def _charts(X: VarietySpec):
    if X.ambient == "affine":
        yield list(X.polynomials), X.dim
        return
    n = X.nvars
    for i in range(n):
        values = {j: 0 for j in range(i)}
        values[i] = 1
        keep = list(range(i + 1, n))
        yield [f.substitute(values).drop_variables(keep) for f in X.polynomials], len(keep)


def _kernel_module(max_ydeg: int, n_polys: int, n_enum: int):
    if kernels.BACKEND == "cython" and max_ydeg < 63 and n_polys <= 64 and n_enum <= 64:
        return kernels._impl
    return kernels.python_kernels


def _count_plan(plan: _Plan, F: FiniteField, threads: int) -> int:
    q, p = F.q, F.p
    if plan.empty:
        return 0
    if not plan.polys:
        return q**plan.free
    if plan.n_enum == 0:
        # univariate with coefficients in F_p: no tables needed, works for any q
        h: list = []
        for f in plan.polys:
            coeffs = [0] * (f.degree_in(0) + 1)
            for (d,), c in f.terms.items():
                coeffs[d] = c % p
            h = fp_gcd(h, coeffs, p) if h else _trim(coeffs)
        return q**plan.free * fp_count_roots(h, p, F.k)
    exp_t, log_t, zech_t = F.tables()
    n_enum = plan.n_enum
    poly_start = array("q", [0])
    mono_coef, mono_exps, mono_ydeg = array("q"), array("q"), array("q")
    max_ydeg = 0
    for f in plan.polys:
        for e, c in f.terms.items():
            mono_coef.append(c % p)
            mono_exps.extend(e[:n_enum])
            mono_ydeg.append(e[n_enum])
            max_ydeg = max(max_ydeg, e[n_enum])
        poly_start.append(len(mono_coef))
    impl = _kernel_module(max_ydeg, len(plan.polys), n_enum)
    total_idx = q**n_enum

    def run(bounds):
        start, stop = bounds
        return impl.count_roots_range(p, q, exp_t, log_t, zech_t, n_enum, max_ydeg, poly_start,
                                      mono_coef, mono_exps, mono_ydeg, start, stop)

    if threads <= 1 or total_idx <= _CHUNK:
        total = run((0, total_idx))
    else:
        n_chunks = min(total_idx // _CHUNK, threads * 8) or 1
        step = -(-total_idx // n_chunks)
        ranges = [(s, min(s + step, total_idx)) for s in range(0, total_idx, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            total = sum(pool.map(run, ranges))
    return q**plan.free * total


def count_points(X: VarietySpec, F: FiniteField, budget: int | None = None, threads: int = 1) -> int:
    """``#X(F)``: affine solutions, or projective solutions up to scalars.

    Raises :class:`FieldTooLarge` if more than ``budget`` tuples would be enumerated.
    """
    budget = default_budget() if budget is None else budget
    plans = [_plan(polys, n, F.p) for polys, n in _charts(X)]
    needed = sum(pl.evaluations(F.q) for pl in plans)
    if needed > budget:
        raise FieldTooLarge(needed, budget)
    return sum(_count_plan(pl, F, threads) for pl in plans)


def point_counts(X: VarietySpec, q: int, order: int, budget: int | None = None, threads: int = 1) -> list[int]:
    """``[#X(F_q), #X(F_{q^2}), ..., #X(F_{q^order})]``."""
    p, k = prime_power(q)
    return [count_points(X, FiniteField(p, k * n), budget, threads) for n in range(1, order + 1)]


def zeta_from_counts(N: Sequence[int]) -> PowerSeries:
    order = len(N)
    z = ps_exp(PowerSeries([0] + [Fraction(c, n) for n, c in enumerate(N, 1)], order))
    if not z.is_integral():
        raise InconsistentCounts("exp of the counting series has non-integral coefficients")
    return z


def hasse_weil_zeta(X: VarietySpec, q: int, order: int, budget: int | None = None,
                    threads: int = 1) -> PowerSeries:
    """``Z(X, t) = exp(sum_n #X(F_{q^n}) t^n / n)`` truncated at ``t^order``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return zeta_from_counts(point_counts(X, q, order, budget, threads))


def closed_point_counts(N: Sequence[int]) -> list[int]:
    """Invert ``N_n = sum_{d | n} d a_d``; raises if some ``a_d`` is negative or fractional."""
    a: list[int] = []
    for n, Nn in enumerate(N, 1):
        s = Nn - sum(d * a[d - 1] for d in range(1, n) if n % d == 0)
        if s < 0 or s % n:
            raise InconsistentCounts(f"a_{n} = {Fraction(s, n)} is not a nonnegative integer")
        a.append(s // n)
    return a


def product_formula_series(a: Sequence[int], order: int) -> PowerSeries:
    """``prod_d (1 - t^d)^(-a_d)``."""
    return cyclotomic_product({d: -ad for d, ad in enumerate(a, 1)}, order)


def mobius_series(a: Sequence[int], order: int) -> PowerSeries:
    """``prod_d (1 - t^d)^(a_d)``, the generating series of the 0-cycle Moebius function."""
    return cyclotomic_product({d: ad for d, ad in enumerate(a, 1)}, order)


# --- 0-cycles ----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ClosedPoint:
    """Abstract closed point: the ``index``-th point of degree ``degree``."""

    degree: int
    index: int

    def __repr__(self):
        return f"x{self.degree}.{self.index}"


class ZeroCycle(Multiset):
    """Effective 0-cycle: a multiset of closed points."""

    __slots__ = ()

    @property
    def degree(self) -> int:
        return sum(m * x.degree for x, m in self.items())


class ZeroCyclePoset(MultisetPoset):
    """Effective 0-cycles ordered by ``alpha <= beta`` iff ``beta - alpha`` is effective."""

    def __init__(self):
        super().__init__(ZeroCycle)


def closed_points(a: Sequence[int]) -> list[ClosedPoint]:
    return [ClosedPoint(d, i) for d, ad in enumerate(a, 1) for i in range(1, ad + 1)]


def _cycle_tuples(points: list, n: int, start: int = 0) -> Iterator[tuple]:
    # multisets over points[start:] of total degree n, as (point, mult) tuples;
    # points are sorted by degree
    if n == 0:
        yield ()
        return
    for i in range(start, len(points)):
        x = points[i]
        if x.degree > n:
            break
        for m in range(1, n // x.degree + 1):
            for rest in _cycle_tuples(points, n - m * x.degree, i + 1):
                yield ((x, m),) + rest


def iter_0cycles(a: Sequence[int], n: int) -> Iterator[ZeroCycle]:
    """All effective 0-cycles of degree ``n`` on points with ``a_d`` points of degree ``d``."""
    for t in _cycle_tuples(closed_points(a[:n]), n):
        yield ZeroCycle(t)


def enumerate_0cycles(a: Sequence[int], n: int) -> int:
    return sum(1 for _ in _cycle_tuples(closed_points(a[:n]), n))


def zero_cycle_series(a: Sequence[int], order: int) -> PowerSeries:
    """Coefficient ``n`` counts effective 0-cycles of degree ``n`` by direct enumeration."""
    return PowerSeries([enumerate_0cycles(a, n) for n in range(order + 1)], order)


def mobius_0cycle(alpha: ZeroCycle) -> int:
    mults = [m for _, m in alpha.items()]
    if any(m > 1 for m in mults):
        return 0
    return (-1) ** len(mults)


# --- functional equation -----------------------------------------------------

@dataclass(frozen=True)
class FunctionalEquationResult:
    holds: bool
    epsilon: int | None = None

    def __bool__(self):
        return self.holds


def _exact_root(q: int, n: int, E: int) -> Fraction | None:
    """``q^(nE/2)`` if rational."""
    e = n * E
    if e % 2 == 0:
        return Fraction(q) ** (e // 2)
    r = isqrt(q)
    if r * r == q:
        return Fraction(r) ** e
    return None


def weil_functional_check(Z: RationalFunction | None, q: int, n: int, E: int) -> FunctionalEquationResult:
    """Test ``Z(1/(q^n t)) = eps * q^(nE/2) * t^E * Z(t)`` as an identity of rational functions."""
    if Z is None:
        raise NotRational("no rational function to check")
    P = [Fraction(c) for c in Z.numerator]
    Q = [Fraction(c) for c in Z.denominator]
    c = Fraction(q) ** n
    D = max(len(P), len(Q)) - 1
    # Z(1/(ct)) = Pr/Qr with both sides multiplied by t^D
    Pr = [Fraction(0)] * (D + 1)
    Qr = [Fraction(0)] * (D + 1)
    for i, x in enumerate(P):
        Pr[D - i] = x / c**i
    for i, x in enumerate(Q):
        Qr[D - i] = x / c**i
    s = _exact_root(q, n, E)
    if s is None:
        return FunctionalEquationResult(False)
    # Pr * Q * t^max(-E,0) =? eps * s * t^max(E,0) * P * Qr
    lhs = [Fraction(0)] * max(-E, 0) + _pmul(Pr, Q)
    rhs = [Fraction(0)] * max(E, 0) + [s * x for x in _pmul(P, Qr)]
    lhs, rhs = _trim(lhs), _trim(rhs)
    if lhs == rhs:
        return FunctionalEquationResult(True, 1)
    if lhs == [-x for x in rhs]:
        return FunctionalEquationResult(True, -1)
    return FunctionalEquationResult(False)

