"""Finite fields F_{p^k} and polynomial arithmetic over the prime field.

An element of ``F_{p^k} = F_p[u]/(m(u))`` is encoded as the integer
``sum d_i p^i`` where ``d_0 + d_1 u + ... + d_{k-1} u^{k-1}`` is its reduced
representative. ``m`` is the monic irreducible of degree ``k`` with the
smallest encoding ``sum_{i<k} c_i p^i``, i.e. lexicographically smallest on
``(c_{k-1}, ..., c_0)``.
"""
from __future__ import annotations

import threading
from functools import lru_cache

from . import kernels

__all__ = ["FiniteField", "is_prime", "prime_power", "fp_count_roots", "fp_is_irreducible"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p^k``; raises ``ValueError`` if ``q`` is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p, ascending int lists ------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def fp_mod(a, m, p):
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def fp_powmod(base, e, m, p):
    result = [1]
    base = fp_mod(list(base), m, p)
    while e:
        if e & 1:
            result = fp_mod(fp_mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = fp_mod(fp_mul(base, base, p), m, p)
    return result


def fp_gcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def fp_is_irreducible(f, p) -> bool:
    """Rabin's test for a polynomial over F_p of degree >= 1."""
    f = _trim([x % p for x in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if fp_powmod(x, p**k, f, p) != fp_mod(x, f, p):
        return False
    for r in _prime_factors(k):
        h = fp_powmod(x, p ** (k // r), f, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(fp_gcd(f, _trim(h), p)) > 1:
            return False
    return True


def fp_count_roots(h, p, k) -> int:
    """Number of distinct roots in ``F_{p^k}`` of a nonzero ``h`` in ``F_p[y]``."""
    h = _trim([x % p for x in h])
    if not h:
        raise ValueError("zero polynomial has every element as a root")
    if len(h) == 1:
        return 0
    r = fp_powmod([0, 1], p**k, h, p)
    r = r + [0] * (2 - len(r))
    r[1] = (r[1] - 1) % p
    return len(fp_gcd(h, _trim(r), p)) - 1


@lru_cache(maxsize=None)
def _canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p**i) % p for i in range(k)]
        if low[0] == 0:
            continue
        f = low + [1]
        if fp_is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FiniteField:
    """The field with ``p^k`` elements."""

    _registry: dict = {}
    _registry_lock = threading.Lock()

    def __new__(cls, p: int, k: int = 1):
        with cls._registry_lock:
            key = (p, k)
            inst = cls._registry.get(key)
            if inst is None:
                if not is_prime(p):
                    raise ValueError(f"characteristic {p} is not prime")
                if k < 1:
                    raise ValueError("extension degree must be >= 1")
                inst = super().__new__(cls)
                inst.p = p
                inst.k = k
                inst.q = p**k
                inst.modulus = _canonical_modulus(p, k)
                inst._tables = None
                inst._tables_lock = threading.Lock()
                inst._generator = None
                cls._registry[key] = inst
            return inst

    @classmethod
    def of_order(cls, q: int) -> FiniteField:
        return cls(*prime_power(q))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.k})"

    def __reduce__(self):
        return (FiniteField, (self.p, self.k))

    # encoding
    def digits(self, a: int) -> list[int]:
        p = self.p
        return [(a // p**i) % p for i in range(self.k)]

    def from_digits(self, ds) -> int:
        p = self.p
        return sum((d % p) * p**i for i, d in enumerate(ds))

    def elements(self):
        return range(self.q)

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        prod = fp_mul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(fp_mod(prod, list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = fp_powmod(self.digits(a), e, list(self.modulus), self.p)
        return self.from_digits(r)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def multiplicative_order(self, a: int) -> int:
        n = self.q - 1
        for r in _prime_factors(self.q - 1):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    def primitive_element(self) -> int:
        if self._generator is None:
            self._generator = next(
                g for g in range(1, self.q) if self.multiplicative_order(g) == self.q - 1
            )
        return self._generator

    def tables(self):
        """``(exp, log, zech)`` arrays for a primitive element; built once per field."""
        with self._tables_lock:
            if self._tables is None:
                self._tables = kernels.build_tables(
                    self.p, self.k, list(self.modulus), self.primitive_element()
                )
            return self._tables
