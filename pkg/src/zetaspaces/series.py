"""Truncated formal power series and Dirichlet series over the rationals.

Everything here is exact: coefficients are :class:`fractions.Fraction` and a
product of two truncated objects is only known to the smaller of the two
truncation orders, so results carry ``min(order_a, order_b)``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from ._linalg import solve_exact
from .errors import (
    BadConstantTerm,
    InsufficientPrecision,
    NonInvertible,
    NotRational,
    ZeroConstantTerm,
)

__all__ = [
    "PowerSeries",
    "DirichletCoefficients",
    "RationalFunction",
    "ps_mul",
    "ps_inv",
    "ps_exp",
    "ps_log",
    "ds_mul",
    "ds_inv",
    "rational_reconstruct",
    "cyclotomic_product",
    "format_rational",
    "parse_rational",
]


def format_rational(x) -> str:
    return str(Fraction(x))


def parse_rational(s) -> Fraction:
    return Fraction(s)


class PowerSeries:
    """Power series ``sum c_n t^n`` known up to and including ``t^order``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = cs[: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self._coeffs = tuple(cs)

    @classmethod
    def one(cls, order: int) -> PowerSeries:
        return cls([1], order)

    @classmethod
    def geometric(cls, ratio, order: int) -> PowerSeries:
        """``1/(1 - ratio*t)``."""
        r = Fraction(ratio)
        return cls([r**n for n in range(order + 1)], order)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def __getitem__(self, n):
        return self._coeffs[n]

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, PowerSeries):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        terms = ", ".join(format_rational(c) for c in self._coeffs)
        return f"PowerSeries([{terms}], order={self.order})"

    def truncate(self, order: int) -> PowerSeries:
        if order > self.order:
            raise InsufficientPrecision(f"cannot extend order {self.order} to {order}")
        return PowerSeries(self._coeffs[: order + 1], order)

    def _align(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], self.order)
        n = min(self.order, other.order)
        return self._coeffs[: n + 1], other._coeffs[: n + 1], n

    def __add__(self, other):
        a, b, n = self._align(other)
        return PowerSeries([x + y for x, y in zip(a, b)], n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self._coeffs], self.order)

    def __sub__(self, other):
        a, b, n = self._align(other)
        return PowerSeries([x - y for x, y in zip(a, b)], n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return ps_mul(self, other)
        c = Fraction(other)
        return PowerSeries([c * x for x in self._coeffs], self.order)

    __rmul__ = __mul__

    def inverse(self) -> PowerSeries:
        return ps_inv(self)

    def exp(self) -> PowerSeries:
        return ps_exp(self)

    def log(self) -> PowerSeries:
        return ps_log(self)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> PowerSeries:
        return cls([parse_rational(s) for s in data])


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(n + 1):
        s = Fraction(0)
        for i in range(k + 1):
            x = ac[i]
            if x:
                s += x * bc[k - i]
        out.append(s)
    return PowerSeries(out, n)


def ps_inv(a: PowerSeries) -> PowerSeries:
    ac = a.coeffs
    if ac[0] == 0:
        raise ZeroConstantTerm("power series with zero constant term is not invertible")
    inv0 = 1 / ac[0]
    out = [inv0]
    for n in range(1, a.order + 1):
        s = sum((ac[i] * out[n - i] for i in range(1, n + 1) if ac[i]), Fraction(0))
        out.append(-s * inv0)
    return PowerSeries(out, a.order)


def ps_exp(a: PowerSeries) -> PowerSeries:
    # E' = A'E, so n e_n = sum_{k=1}^{n} k a_k e_{n-k}.
    ac = a.coeffs
    if ac[0] != 0:
        raise BadConstantTerm(ac[0], 0)
    out = [Fraction(1)]
    for n in range(1, a.order + 1):
        s = sum((k * ac[k] * out[n - k] for k in range(1, n + 1) if ac[k]), Fraction(0))
        out.append(s / n)
    return PowerSeries(out, a.order)


def ps_log(a: PowerSeries) -> PowerSeries:
    # L' = A'/A, so n l_n = n a_n - sum_{k=1}^{n-1} k l_k a_{n-k}.
    ac = a.coeffs
    if ac[0] != 1:
        raise BadConstantTerm(ac[0], 1)
    out = [Fraction(0)]
    for n in range(1, a.order + 1):
        s = sum((k * out[k] * ac[n - k] for k in range(1, n) if ac[n - k]), Fraction(0))
        out.append(ac[n] - s / n)
    return PowerSeries(out, a.order)


def cyclotomic_product(exponents: Mapping[int, int] | Sequence[int], order: int) -> PowerSeries:
    """``prod_d (1 - t^d)^{e_d}`` truncated at ``order``.

    ``exponents`` is either a mapping ``d -> e_d`` or a sequence ``e_1, e_2, ...``.
    Negative exponents multiply by the geometric series ``1/(1 - t^d)``.
    """
    if not isinstance(exponents, Mapping):
        exponents = {d: e for d, e in enumerate(exponents, start=1)}
    c = [0] * (order + 1)
    c[0] = 1
    for d in sorted(exponents):
        e = exponents[d]
        if d < 1:
            raise ValueError("degrees must be positive")
        if d > order or e == 0:
            continue
        if e > 0:
            for _ in range(e):
                for n in range(order, d - 1, -1):
                    c[n] -= c[n - d]
        else:
            for _ in range(-e):
                for n in range(d, order + 1):
                    c[n] += c[n - d]
    return PowerSeries(c, order)


class DirichletCoefficients:
    """Coefficients ``c_1 .. c_N`` of a truncated Dirichlet series ``sum c_n n^{-s}``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = tuple(Fraction(c) for c in coeffs)
        if not cs:
            raise ValueError("bound must be >= 1")
        self._coeffs = cs

    @classmethod
    def ones(cls, bound: int) -> DirichletCoefficients:
        return cls([1] * bound)

    @classmethod
    def delta(cls, bound: int) -> DirichletCoefficients:
        return cls([1] + [0] * (bound - 1))

    @classmethod
    def from_function(cls, f, bound: int) -> DirichletCoefficients:
        return cls(f(n) for n in range(1, bound + 1))

    @property
    def bound(self) -> int:
        return len(self._coeffs)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __getitem__(self, n: int) -> Fraction:
        """Coefficient of ``n^{-s}`` (1-based)."""
        if not 1 <= n <= len(self._coeffs):
            raise IndexError(n)
        return self._coeffs[n - 1]

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, DirichletCoefficients):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        head = ", ".join(format_rational(c) for c in self._coeffs[:8])
        more = ", ..." if len(self._coeffs) > 8 else ""
        return f"DirichletCoefficients([{head}{more}], bound={self.bound})"

    def __mul__(self, other):
        return ds_mul(self, other)

    def truncate(self, bound: int) -> DirichletCoefficients:
        if bound > self.bound:
            raise InsufficientPrecision(f"cannot extend bound {self.bound} to {bound}")
        return DirichletCoefficients(self._coeffs[:bound])

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> DirichletCoefficients:
        return cls(parse_rational(s) for s in data)


def ds_mul(f: DirichletCoefficients, g: DirichletCoefficients) -> DirichletCoefficients:
    n = min(f.bound, g.bound)
    fc, gc = f.coeffs, g.coeffs
    out = [Fraction(0)] * (n + 1)
    for i in range(1, n + 1):
        fi = fc[i - 1]
        if not fi:
            continue
        for j in range(1, n // i + 1):
            gj = gc[j - 1]
            if gj:
                out[i * j] += fi * gj
    return DirichletCoefficients(out[1:])


def ds_inv(f: DirichletCoefficients) -> DirichletCoefficients:
    n = f.bound
    fc = f.coeffs
    if fc[0] == 0:
        raise NonInvertible("Dirichlet series with f(1) = 0 is not invertible")
    inv1 = 1 / fc[0]
    g = [Fraction(0)] * (n + 1)
    # acc[m] collects sum_{d | m, d > 1} f(d) g(m/d) as g values are finalised.
    acc = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        g[m] = ((1 if m == 1 else 0) - acc[m]) * inv1
        gm = g[m]
        if gm:
            for d in range(2, n // m + 1):
                fd = fc[d - 1]
                if fd:
                    acc[m * d] += fd * gm
    return DirichletCoefficients(g[1:])


# --- univariate polynomials over Q, ascending coefficient lists -------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a = [Fraction(x) for x in _trim(a)]
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = _trim(a)
    return _trim(q), a


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


class RationalFunction:
    """``numerator/denominator`` with integer coefficients in ascending degree.

    Normalised so the two polynomials are coprime, jointly primitive, and the
    denominator has positive constant term.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Sequence, denominator: Sequence):
        num = _trim(Fraction(c) for c in numerator)
        den = _trim(Fraction(c) for c in denominator)
        if not den or den[0] == 0:
            raise ValueError("denominator must have a nonzero constant term")
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdivmod(num, g)[0]
            den = _pdivmod(den, g)[0]
        scale = lcm(*(c.denominator for c in num + den))
        num_i = [int(c * scale) for c in num]
        den_i = [int(c * scale) for c in den]
        content = gcd(*num_i, *den_i)
        if den_i[0] < 0:
            content = -content
        self.numerator = tuple(c // content for c in num_i) or (0,)
        self.denominator = tuple(c // content for c in den_i)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return (self.numerator, self.denominator) == (other.numerator, other.denominator)
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RationalFunction({list(self.numerator)}, {list(self.denominator)})"

    def series(self, order: int) -> PowerSeries:
        return ps_mul(PowerSeries(self.numerator, order), ps_inv(PowerSeries(self.denominator, order)))

    def to_json(self) -> dict:
        return {
            "numerator": [str(c) for c in self.numerator],
            "denominator": [str(c) for c in self.denominator],
        }


def rational_reconstruct(a: PowerSeries, max_num_deg: int, max_den_deg: int) -> RationalFunction | None:
    """Find ``P/Q`` with ``deg P <= max_num_deg``, ``deg Q <= max_den_deg``, ``Q(0) = 1``
    and ``Q*a = P`` through ``t^order``. Returns ``None`` when no such pair exists.

    The smallest admissible denominator degree wins.
    """
    T = a.order
    if T < max_num_deg + max_den_deg + 1:
        raise InsufficientPrecision(
            f"order {T} < {max_num_deg} + {max_den_deg} + 1 needed to certify a reconstruction"
        )
    ac = a.coeffs

    def coeff(i):
        return ac[i] if i >= 0 else Fraction(0)

    for dd in range(max_den_deg + 1):
        rows = [[coeff(j - i) for i in range(1, dd + 1)] for j in range(max_num_deg + 1, T + 1)]
        rhs = [-ac[j] for j in range(max_num_deg + 1, T + 1)]
        if dd == 0:
            if any(rhs):
                continue
            sol = []
        else:
            sol = solve_exact(rows, rhs)
            if sol is None:
                continue
        q = [Fraction(1)] + sol
        p = [sum((q[i] * coeff(n - i) for i in range(len(q))), Fraction(0)) for n in range(max_num_deg + 1)]
        return RationalFunction(p, q)
    return None


def require_rational(z: RationalFunction | None) -> RationalFunction:
    if z is None:
        raise NotRational("no rational function within the requested degree bounds")
    return z
