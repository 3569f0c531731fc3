"""Incidence algebras of locally finite posets.

Elements of an incidence algebra are lazy functions on intervals ``[x, y]``.
A poset may supply :meth:`LocallyFinitePoset.classify`, a label that is
constant on isomorphism classes of intervals; elements flagged ``reduced``
are then memoised per label instead of per interval, which is what makes
the reduced incidence algebras of ``(N0, <=)`` and ``(N, |)`` cheap.
"""
from __future__ import annotations

import itertools
import threading
from abc import ABC, abstractmethod
from collections import deque
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping

from .errors import NonFiniteInterval, NonInvertibleOnDiagonal, NotComparable

__all__ = [
    "LocallyFinitePoset",
    "Chain",
    "Divisibility",
    "FinitePoset",
    "ProductPoset",
    "Multiset",
    "MultisetPoset",
    "IncidenceElement",
    "convolve",
    "zeta_el",
    "delta_el",
    "mobius",
    "mobius_el",
    "invert",
    "rota_invert",
    "divisors",
]


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


class LocallyFinitePoset(ABC):
    """Interface: ``leq``, ``interval`` in a linear-extension order, optional ``classify``."""

    def __init__(self):
        self._mobius_cache: dict = {}
        self._lock = threading.Lock()

    @abstractmethod
    def leq(self, x, y) -> bool: ...

    @abstractmethod
    def interval(self, x, y) -> list:
        """All ``z`` with ``x <= z <= y``, each listed after everything below it."""

    def classify(self, x, y) -> Hashable | None:
        return None

    @property
    def has_classifier(self) -> bool:
        return type(self).classify is not LocallyFinitePoset.classify

    def interval_key(self, x, y, reduced: bool = True):
        if reduced and self.has_classifier:
            return ("label", self.classify(x, y))
        return ("pair", x, y)

    def checked_interval(self, x, y) -> list:
        if not self.leq(x, y):
            raise NotComparable(x, y)
        result = self.interval(x, y)
        if result is None:
            raise NonFiniteInterval(f"[{x!r}, {y!r}] is not finite")
        return result


class Chain(LocallyFinitePoset):
    """``(N0, <=)``; intervals are labelled by their length ``y - x``."""

    def leq(self, x, y):
        return 0 <= x <= y

    def interval(self, x, y):
        return list(range(x, y + 1)) if self.leq(x, y) else []

    def classify(self, x, y):
        return y - x

    def __repr__(self):
        return "Chain()"


class Divisibility(LocallyFinitePoset):
    """``(N, |)``; the interval ``[x, y]`` is labelled by ``y // x``."""

    def leq(self, x, y):
        return x >= 1 and y >= 1 and y % x == 0

    def interval(self, x, y):
        if not self.leq(x, y):
            return []
        return [x * d for d in divisors(y // x)]

    def classify(self, x, y):
        return y // x

    def __repr__(self):
        return "Divisibility()"


class FinitePoset(LocallyFinitePoset):
    """A finite poset given by elements and covering (or any generating) relations ``a < b``."""

    def __init__(self, elements: Iterable, covers: Iterable[tuple[Any, Any]] = ()):
        super().__init__()
        self.elements = list(elements)
        index = {e: i for i, e in enumerate(self.elements)}
        if len(index) != len(self.elements):
            raise ValueError("duplicate poset elements")
        succ: dict = {e: [] for e in self.elements}
        indeg = {e: 0 for e in self.elements}
        for a, b in covers:
            if a not in index or b not in index:
                raise ValueError(f"relation {a!r} < {b!r} mentions an unknown element")
            if a == b:
                raise ValueError("covering relation must be strict")
            succ[a].append(b)
            indeg[b] += 1
        # Kahn's algorithm, ties broken by input order for determinism
        order = []
        ready = deque(e for e in self.elements if indeg[e] == 0)
        while ready:
            e = ready.popleft()
            order.append(e)
            for b in succ[e]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        if len(order) != len(self.elements):
            raise ValueError("relations contain a cycle")
        self.position = {e: i for i, e in enumerate(order)}
        self.up: dict = {}
        for e in reversed(order):
            above = {e}
            for b in succ[e]:
                above |= self.up[b]
            self.up[e] = above

    @classmethod
    def from_relation(cls, elements: Iterable, leq: Callable[[Any, Any], bool]) -> FinitePoset:
        elements = list(elements)
        covers = [(a, b) for a in elements for b in elements if a != b and leq(a, b)]
        return cls(elements, covers)

    @classmethod
    def from_json(cls, data: Mapping) -> FinitePoset:
        return cls(data["elements"], [tuple(c) for c in data.get("covers", [])])

    def to_json(self) -> dict:
        covers = []
        for a in self.elements:
            for b in self.elements:
                if a != b and self.leq(a, b):
                    if not any(c not in (a, b) and self.leq(a, c) and self.leq(c, b) for c in self.elements):
                        covers.append([a, b])
        return {"elements": list(self.elements), "covers": covers}

    def leq(self, x, y):
        return y in self.up.get(x, ())

    def interval(self, x, y):
        if not self.leq(x, y):
            return []
        return sorted((z for z in self.up[x] if self.leq(z, y)), key=self.position.__getitem__)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset({len(self.elements)} elements)"


def divisor_poset(n: int) -> FinitePoset:
    """Divisors of ``n`` ordered by divisibility."""
    ds = divisors(n)
    return FinitePoset.from_relation(ds, lambda a, b: b % a == 0)


class ProductPoset(LocallyFinitePoset):
    """Componentwise order on tuples; intervals enumerate lexicographically."""

    def __init__(self, *factors: LocallyFinitePoset):
        super().__init__()
        self.factors = factors

    def leq(self, x, y):
        return all(P.leq(a, b) for P, a, b in zip(self.factors, x, y))

    def interval(self, x, y):
        if not self.leq(x, y):
            return []
        return list(itertools.product(*(P.interval(a, b) for P, a, b in zip(self.factors, x, y))))

    @property
    def has_classifier(self):
        return all(P.has_classifier for P in self.factors)

    def classify(self, x, y):
        if not self.has_classifier:
            return None
        return tuple(P.classify(a, b) for P, a, b in zip(self.factors, x, y))


class Multiset:
    """Finitely supported map ``atom -> positive multiplicity`` (atoms must be orderable)."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Mapping | Iterable[tuple[Any, int]] = ()):
        if isinstance(items, Mapping):
            items = items.items()
        acc: dict = {}
        for atom, m in items:
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            if m:
                acc[atom] = acc.get(atom, 0) + m
        self._items = tuple(sorted(acc.items()))
        self._hash = hash(self._items)

    def items(self):
        return self._items

    def multiplicity(self, atom) -> int:
        for a, m in self._items:
            if a == atom:
                return m
        return 0

    @property
    def support(self):
        return tuple(a for a, _ in self._items)

    @property
    def size(self) -> int:
        return sum(m for _, m in self._items)

    def __bool__(self):
        return bool(self._items)

    def __eq__(self, other):
        if isinstance(other, Multiset):
            return self._items == other._items
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __le__(self, other):
        return all(m <= other.multiplicity(a) for a, m in self._items)

    def __lt__(self, other):
        return self._items < other._items

    def __add__(self, other):
        return type(self)(list(self._items) + list(other._items))

    def __sub__(self, other):
        if not other <= self:
            raise ValueError("difference would not be effective")
        out = dict(self._items)
        for a, m in other._items:
            out[a] -= m
        return type(self)(out)

    def __repr__(self):
        body = " + ".join(f"{m}*{a!r}" if m > 1 else repr(a) for a, m in self._items)
        return f"{type(self).__name__}({body or '0'})"


class MultisetPoset(LocallyFinitePoset):
    """Multisets under inclusion; the free commutative monoid on the atoms.

    Intervals are labelled by the difference ``y - x``.
    """

    def __init__(self, element_type: type = Multiset):
        super().__init__()
        self.element_type = element_type

    def leq(self, x, y):
        return x <= y

    def interval(self, x, y):
        if not x <= y:
            return []
        atoms = y.support
        ranges = [range(x.multiplicity(a), y.multiplicity(a) + 1) for a in atoms]
        make = self.element_type
        return [make(zip(atoms, ms)) for ms in itertools.product(*ranges)]

    def classify(self, x, y):
        return y - x


# --- incidence elements ------------------------------------------------------

class IncidenceElement:
    """A function on intervals. Call ``el.at(P, x, y)``, or ``el(x, y)`` when bound to a poset."""

    def __init__(self, func: Callable, reduced: bool = False, poset: LocallyFinitePoset | None = None,
                 name: str | None = None):
        self._func = func
        self.reduced = reduced
        self.poset = poset
        self.name = name
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def from_label(cls, fn: Callable[[Any], Any], poset: LocallyFinitePoset | None = None,
                   name: str | None = None) -> IncidenceElement:
        """Reduced element given as a function of the interval label."""
        return cls(lambda P, x, y: fn(P.classify(x, y)), reduced=True, poset=poset, name=name)

    def bind(self, P: LocallyFinitePoset) -> IncidenceElement:
        return IncidenceElement(self._func, self.reduced, P, self.name)

    def at(self, P: LocallyFinitePoset, x, y) -> Fraction:
        if self.poset is not None and P is not self.poset:
            raise ValueError("element is bound to a different poset")
        key = (id(P),) + P.interval_key(x, y, self.reduced)
        try:
            return self._cache[key]
        except KeyError:
            pass
        value = Fraction(self._func(P, x, y))
        with self._lock:
            self._cache.setdefault(key, value)
        return value

    def __call__(self, x, y) -> Fraction:
        if self.poset is None:
            raise TypeError("unbound element; use .at(P, x, y) or .bind(P)")
        return self.at(self.poset, x, y)

    def __repr__(self):
        return f"IncidenceElement({self.name or 'anonymous'}, reduced={self.reduced})"


def zeta_el(P: LocallyFinitePoset | None = None) -> IncidenceElement:
    return IncidenceElement(lambda P, x, y: 1, reduced=True, poset=P, name="zeta")


def delta_el(P: LocallyFinitePoset | None = None) -> IncidenceElement:
    return IncidenceElement(lambda P, x, y: 1 if x == y else 0, reduced=True, poset=P, name="delta")


def convolve(phi: IncidenceElement, psi: IncidenceElement, P: LocallyFinitePoset) -> IncidenceElement:
    """``(phi*psi)[x, y] = sum_{z in [x, y]} phi[x, z] psi[z, y]``."""

    def func(P, x, y):
        return sum(
            (phi.at(P, x, z) * psi.at(P, z, y) for z in P.checked_interval(x, y)),
            Fraction(0),
        )

    return IncidenceElement(func, reduced=phi.reduced and psi.reduced, poset=P,
                            name=f"({phi.name}*{psi.name})")


def mobius(P: LocallyFinitePoset, x, y) -> Fraction:
    """``mu[x, x] = 1`` and ``mu[x, y] = -sum_{x <= z < y} mu[x, z]``."""
    key = P.interval_key(x, y)
    cached = P._mobius_cache.get(key)
    if cached is not None:
        return cached
    chain = P.checked_interval(x, y)
    values: dict = {}
    for z in chain:
        zkey = P.interval_key(x, z)
        v = P._mobius_cache.get(zkey)
        if v is None:
            if z == x:
                v = Fraction(1)
            else:
                v = -sum((values[w] for w in values if w != z and P.leq(w, z)), Fraction(0))
            with P._lock:
                P._mobius_cache.setdefault(zkey, v)
        values[z] = v
    return values[y]


def mobius_el(P: LocallyFinitePoset) -> IncidenceElement:
    return IncidenceElement(lambda P, x, y: mobius(P, x, y), reduced=True, poset=P, name="mu")


def invert(phi: IncidenceElement, P: LocallyFinitePoset) -> IncidenceElement:
    """Two-sided convolution inverse via ``psi[x, y] = -phi[y, y]^{-1} sum_{x <= z < y} psi[x, z] phi[z, y]``."""
    inverse = IncidenceElement(None, reduced=phi.reduced, poset=P, name=f"{phi.name}^-1")

    def func(P, x, y):
        chain = P.checked_interval(x, y)
        values: dict = {}
        for z in chain:
            d = phi.at(P, z, z)
            if d == 0:
                raise NonInvertibleOnDiagonal(z)
            if z == x:
                v = 1 / d
            else:
                key = (id(P),) + P.interval_key(x, z, inverse.reduced)
                v = inverse._cache.get(key)
                if v is None:
                    s = sum((values[w] * phi.at(P, w, z) for w in values if P.leq(w, z)), Fraction(0))
                    v = -s / d
            values[z] = v
        return values[y]

    inverse._func = func
    return inverse


def rota_invert(f: IncidenceElement, P: LocallyFinitePoset) -> IncidenceElement:
    """Recover ``g`` from ``f = g*zeta`` as ``g = f*mu``."""
    return convolve(f, mobius_el(P), P)
