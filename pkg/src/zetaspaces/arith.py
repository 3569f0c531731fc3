"""Dirichlet arithmetic over Q and quadratic fields."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .errors import BadLocalFactor, InsufficientPrecision, InvalidDiscriminant
from .poset import Multiset, MultisetPoset
from .series import DirichletCoefficients, PowerSeries, cyclotomic_product

__all__ = [
    "kronecker",
    "is_fundamental_discriminant",
    "SplittingType",
    "QuadraticField",
    "PrimeIdeal",
    "Ideal",
    "ideal_poset",
    "factorize",
    "primes_up_to",
    "smallest_prime_factors",
    "mobius_classical",
    "log_floor",
    "euler_product",
    "riemann_coeffs",
    "mobius_coeffs",
    "dedekind_zeta_coeffs",
    "dedekind_mobius_coeffs",
]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a|n)`` for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 and (a & 7) in (3, 5):
        k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    # Jacobi symbol with n odd and positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


class SplittingType(enum.Enum):
    SPLIT = 1
    INERT = -1
    RAMIFIED = 0


@dataclass(frozen=True)
class QuadraticField:
    """``Q(sqrt D)`` given by its fundamental discriminant ``D``."""

    discriminant: int

    def __post_init__(self):
        if not is_fundamental_discriminant(self.discriminant):
            raise InvalidDiscriminant(f"{self.discriminant} is not a fundamental discriminant")

    def splitting(self, p: int) -> SplittingType:
        return SplittingType(kronecker(self.discriminant, p))

    def local_zeta(self, p: int, order: int) -> PowerSeries:
        """Local factor ``prod_i (1 - t^f_i)^-1`` over the primes above ``p``."""
        return cyclotomic_product(_LOCAL_EXPONENTS[self.splitting(p)], order)

    def local_mobius(self, p: int, order: int) -> PowerSeries:
        return cyclotomic_product({d: -e for d, e in _LOCAL_EXPONENTS[self.splitting(p)].items()}, order)

    def primes_above(self, p: int) -> list[PrimeIdeal]:
        kind = self.splitting(p)
        if kind is SplittingType.SPLIT:
            return [PrimeIdeal(p, 1, 1), PrimeIdeal(p, 2, 1)]
        if kind is SplittingType.INERT:
            return [PrimeIdeal(p, 1, 2)]
        return [PrimeIdeal(p, 1, 1)]

    def ideals_of_norm(self, n: int) -> list[Ideal]:
        """All nonzero ideals of norm ``n``, as multisets of prime ideals."""
        out = [Ideal()]
        for p, k in factorize(n).items():
            local = [Ideal(c) for c in _local_ideals(self.primes_above(p), k)]
            out = [a + b for a in out for b in local]
        return sorted(out)


_LOCAL_EXPONENTS = {
    SplittingType.SPLIT: {1: -2},
    SplittingType.INERT: {2: -1},
    SplittingType.RAMIFIED: {1: -1},
}


@dataclass(frozen=True, order=True)
class PrimeIdeal:
    """The ``index``-th prime above ``p``, with residue degree ``f``."""

    p: int
    index: int
    f: int

    @property
    def norm(self) -> int:
        return self.p**self.f

    def __repr__(self):
        return f"P({self.p},{self.index})" if self.f == 1 else f"P({self.p})"


class Ideal(Multiset):
    """A nonzero ideal by its prime factorisation."""

    __slots__ = ()

    @property
    def norm(self) -> int:
        out = 1
        for P, m in self.items():
            out *= P.norm**m
        return out


def _local_ideals(primes, k):
    # multisets over ``primes`` with total norm exponent k
    if not primes:
        if k == 0:
            yield ()
        return
    first, rest = primes[0], primes[1:]
    for m in range(k // first.f + 1):
        for tail in _local_ideals(rest, k - m * first.f):
            yield ((first, m),) + tail if m else tail


def ideal_poset(K: QuadraticField) -> MultisetPoset:
    """Ideals of ``O_K`` under divisibility, ``a | b`` iff ``b - a`` is effective."""
    return MultisetPoset(Ideal)


# --- elementary number theory -----------------------------------------------

def factorize(n: int) -> dict[int, int]:
    """Trial division."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def smallest_prime_factors(N: int) -> list[int]:
    spf = list(range(N + 1))
    i = 2
    while i * i <= N:
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    return spf


def primes_up_to(N: int) -> list[int]:
    spf = smallest_prime_factors(N)
    return [n for n in range(2, N + 1) if spf[n] == n]


def mobius_classical(n: int) -> int:
    fac = factorize(n)
    if any(k > 1 for k in fac.values()):
        return 0
    return (-1) ** len(fac)


def log_floor(N: int, p: int) -> int:
    """``floor(log_p N)`` in integer arithmetic."""
    k, pk = 0, p
    while pk <= N:
        k += 1
        pk *= p
    return k


def euler_product(local_factor: Callable[[int, int], PowerSeries], N: int,
                  primes: list[int] | None = None) -> DirichletCoefficients:
    """Coefficients ``c_1..c_N`` of ``prod_p F_p(p^-s)``.

    ``local_factor(p, order)`` returns the factor at ``p`` as a series in
    ``t = p^-s``; it is called for primes ``p <= N`` only, with
    ``order = floor(log_p N)``.
    """
    if N < 1:
        raise ValueError("bound must be >= 1")
    spf = smallest_prime_factors(N)
    if primes is None:
        primes = [n for n in range(2, N + 1) if spf[n] == n]
    factors = {}
    for p in primes:
        order = log_floor(N, p)
        f = local_factor(p, order)
        if f[0] != 1:
            raise BadLocalFactor(p, f[0])
        if f.order < order:
            raise InsufficientPrecision(f"local factor at {p} has order {f.order} < {order}")
        factors[p] = f
    coeffs = [1] * (N + 1)
    for n in range(2, N + 1):
        p = spf[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        # multiplicativity: c(n) = c(p^k) c(m) with p^k || n
        coeffs[n] = factors[p][k] * coeffs[m]
    return DirichletCoefficients(coeffs[1:])


def riemann_coeffs(N: int) -> DirichletCoefficients:
    return euler_product(lambda p, M: cyclotomic_product({1: -1}, M), N)


def mobius_coeffs(N: int) -> DirichletCoefficients:
    return euler_product(lambda p, M: cyclotomic_product({1: 1}, M), N)


def dedekind_zeta_coeffs(K: QuadraticField | int, N: int) -> DirichletCoefficients:
    """``c_n`` = number of ideals of norm ``n``."""
    K = K if isinstance(K, QuadraticField) else QuadraticField(K)
    return euler_product(K.local_zeta, N)


def dedekind_mobius_coeffs(K: QuadraticField | int, N: int) -> DirichletCoefficients:
    K = K if isinstance(K, QuadraticField) else QuadraticField(K)
    return euler_product(K.local_mobius, N)
