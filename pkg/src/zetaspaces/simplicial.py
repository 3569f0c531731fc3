"""Truncated simplicial sets, nerves, the decomposition-space condition and incidence (co)algebras.

A monotone map ``alpha: [m] -> [n]`` acts as ``alpha^*: K_n -> K_m``. Writing
``alpha = delta . sigma`` with ``sigma`` surjective and ``delta`` injective,
``alpha^* = sigma^* . delta^*`` where

* ``delta^* = d_{i_1} ... d_{i_r}`` for the values ``i_1 < ... < i_r`` missed
  by ``alpha`` (so ``d_{i_r}`` is applied first), and
* ``sigma^* = s_{j_t} ... s_{j_1}`` for the positions ``j_1 < ... < j_t`` with
  ``alpha(j) = alpha(j+1)`` (so ``s_{j_1}`` is applied first).

JSON format::

    {"levels": [[ids of K_0], [ids of K_1], ...],
     "faces": {"n,i": {src: dst, ...}, ...},          # d_i : K_n -> K_{n-1}
     "degeneracies": {"n,i": {src: dst, ...}, ...}}   # s_i : K_n -> K_{n+1}
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from ._linalg import gauss_jordan
from .errors import LevelTooShallow, NotInvertible, SimplicialIdentityError
from .poset import FinitePoset

__all__ = [
    "SimplexMap",
    "TruncatedSimplicialSet",
    "nerve",
    "standard_simplex",
    "boundary_simplex",
    "active_maps",
    "inert_maps",
    "pushout",
    "DecompositionResult",
    "check_decomposition",
    "comultiply",
    "convolve_functionals",
    "counit",
    "zeta_functional",
    "mobius_functional",
    "AlgebraViolation",
    "algebra_violation",
]

Functional = dict


@dataclass(frozen=True)
class SimplexMap:
    """An order-preserving map ``[source] -> [target]`` given by its value table."""

    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.source + 1:
            raise ValueError("value table must have source + 1 entries")
        if any(not 0 <= v <= self.target for v in self.values):
            raise ValueError("values out of range")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("map is not order-preserving")

    @classmethod
    def identity(cls, n: int) -> SimplexMap:
        return cls(n, n, tuple(range(n + 1)))

    @classmethod
    def coface(cls, n: int, i: int) -> SimplexMap:
        """``[n-1] -> [n]`` skipping ``i``."""
        return cls(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))

    @classmethod
    def codegeneracy(cls, n: int, i: int) -> SimplexMap:
        """``[n+1] -> [n]`` hitting ``i`` twice."""
        return cls(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2)))

    def __call__(self, i: int) -> int:
        return self.values[i]

    def compose(self, other: SimplexMap) -> SimplexMap:
        """``self . other`` (apply ``other`` first)."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return SimplexMap(other.source, self.target, tuple(self.values[v] for v in other.values))

    def is_active(self) -> bool:
        return self.values[0] == 0 and self.values[-1] == self.target

    def is_inert(self) -> bool:
        return all(b == a + 1 for a, b in zip(self.values, self.values[1:]))

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "values": list(self.values)}


def active_maps(n: int, l: int) -> Iterator[SimplexMap]:
    """Active maps ``[n] -> [l]`` in lexicographic order of their value tables."""
    if n == 0:
        if l == 0:
            yield SimplexMap(0, 0, (0,))
        return
    for inner in itertools.combinations_with_replacement(range(l + 1), n - 1):
        yield SimplexMap(n, l, (0,) + inner + (l,))


def inert_maps(n: int, m: int) -> Iterator[SimplexMap]:
    """Inert maps ``[n] -> [m]``, by offset ``o = f(0)`` ascending."""
    for o in range(m - n + 1):
        yield SimplexMap(n, m, tuple(range(o, o + n + 1)))


def pushout(f: SimplexMap, g: SimplexMap) -> tuple[SimplexMap, SimplexMap]:
    """Pushout of inert ``f: [n] -> [m]`` and active ``g: [n] -> [l]``.

    With ``o = f(0)`` and ``p = m + l - n`` this returns ``(g', f')`` where
    ``f': [l] -> [p]`` is the inert map ``j -> j + o`` and ``g': [m] -> [p]``
    is the active map that is the identity on ``[0, o]``, follows ``g``
    (shifted by ``o``) on the middle segment ``[o, o + n]`` and shifts the
    tail ``[o + n, m]`` by ``l - n``. Then ``g' f = f' g``.
    """
    n, m, l = f.source, f.target, g.target
    o = f.values[0]
    p = m + l - n
    f2 = SimplexMap(l, p, tuple(j + o for j in range(l + 1)))
    vals = []
    for i in range(m + 1):
        if i <= o:
            vals.append(i)
        elif i <= o + n:
            vals.append(g.values[i - o] + o)
        else:
            vals.append(i + l - n)
    return SimplexMap(m, p, tuple(vals)), f2


class TruncatedSimplicialSet:
    """Levels ``K_0..K_L`` with faces and degeneracies; identities are checked on construction."""

    def __init__(self, levels: Sequence[Iterable[Hashable]], faces: Mapping, degeneracies: Mapping,
                 validate: bool = True):
        self.levels = [list(level) for level in levels]
        self.L = len(self.levels) - 1
        if self.L < 0:
            raise SimplicialIdentityError("at least K_0 is required")
        self._members = [set(level) for level in self.levels]
        for n, level in enumerate(self.levels):
            if len(self._members[n]) != len(level):
                raise SimplicialIdentityError(f"duplicate simplices in K_{n}")
        self.faces = {tuple(k): dict(v) for k, v in faces.items()}
        self.degeneracies = {tuple(k): dict(v) for k, v in degeneracies.items()}
        self._index = [{x: i for i, x in enumerate(level)} for level in self.levels]
        self._action_cache: dict = {}
        self._fibers = None
        if validate:
            self.validate()

    # --- structure -----------------------------------------------------------
    def face(self, n: int, i: int, x):
        return self.faces[(n, i)][x]

    def degeneracy(self, n: int, i: int, x):
        return self.degeneracies[(n, i)][x]

    def is_degenerate_edge(self, f) -> bool:
        return self.degeneracies[(0, 0)].get(self.face(1, 0, f)) == f

    def validate(self) -> None:
        L = self.L

        def fail(msg):
            raise SimplicialIdentityError(msg)

        for n in range(1, L + 1):
            for i in range(n + 1):
                table = self.faces.get((n, i))
                if table is None:
                    fail(f"missing face map d_{i} on K_{n}")
                for x in self.levels[n]:
                    if table.get(x) not in self._members[n - 1]:
                        fail(f"d_{i} on K_{n} is not a map into K_{n - 1} at {x!r}")
        for n in range(L):
            for i in range(n + 1):
                table = self.degeneracies.get((n, i))
                if table is None:
                    fail(f"missing degeneracy map s_{i} on K_{n}")
                for x in self.levels[n]:
                    if table.get(x) not in self._members[n + 1]:
                        fail(f"s_{i} on K_{n} is not a map into K_{n + 1} at {x!r}")
        d, s = self.face, self.degeneracy
        for n in range(2, L + 1):
            for x in self.levels[n]:
                for j in range(n + 1):
                    for i in range(j):
                        if d(n - 1, i, d(n, j, x)) != d(n - 1, j - 1, d(n, i, x)):
                            fail(f"d_{i} d_{j} != d_{j - 1} d_{i} at {x!r}")
        for n in range(L - 1):
            for x in self.levels[n]:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if s(n + 1, i, s(n, j, x)) != s(n + 1, j + 1, s(n, i, x)):
                            fail(f"s_{i} s_{j} != s_{j + 1} s_{i} at {x!r}")
        for n in range(L):
            for x in self.levels[n]:
                for j in range(n + 1):
                    y = s(n, j, x)
                    for i in range(n + 2):
                        lhs = d(n + 1, i, y)
                        if i < j:
                            rhs = s(n - 1, j - 1, d(n, i, x))
                        elif i in (j, j + 1):
                            rhs = x
                        else:
                            rhs = s(n - 1, j, d(n, i - 1, x))
                        if lhs != rhs:
                            fail(f"d_{i} s_{j} identity fails at {x!r} in K_{n}")

    def act(self, alpha: SimplexMap, x):
        """``alpha^*(x)`` for ``x`` in ``K_{alpha.target}``."""
        vals = alpha.values
        image = set(vals)
        level = alpha.target
        for i in reversed([v for v in range(alpha.target + 1) if v not in image]):
            x = self.faces[(level, i)][x]
            level -= 1
        for j in [j for j in range(alpha.source) if vals[j] == vals[j + 1]]:
            x = self.degeneracies[(level, j)][x]
            level += 1
        return x

    def action(self, alpha: SimplexMap) -> dict:
        """``alpha^*`` as a table on ``K_{alpha.target}`` (cached)."""
        key = (alpha.source, alpha.target, alpha.values)
        table = self._action_cache.get(key)
        if table is None:
            table = {x: self.act(alpha, x) for x in self.levels[alpha.target]}
            self._action_cache[key] = table
        return table

    def order_key(self, n: int, x) -> int:
        return self._index[n][x]

    # --- serialization -------------------------------------------------------------
    def to_json(self) -> dict:
        sid = _id_str
        return {
            "levels": [[sid(x) for x in level] for level in self.levels],
            "faces": {f"{n},{i}": {sid(a): sid(b) for a, b in table.items()}
                      for (n, i), table in sorted(self.faces.items())},
            "degeneracies": {f"{n},{i}": {sid(a): sid(b) for a, b in table.items()}
                             for (n, i), table in sorted(self.degeneracies.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: Mapping) -> TruncatedSimplicialSet:
        def key(k):
            n, _, i = k.partition(",")
            return int(n), int(i)

        def conv(table):
            return {str(a): str(b) for a, b in table.items()}

        levels = [[str(x) for x in level] for level in data["levels"]]
        faces = {key(k): conv(v) for k, v in data.get("faces", {}).items()}
        degs = {key(k): conv(v) for k, v in data.get("degeneracies", {}).items()}
        return cls(levels, faces, degs)

    @classmethod
    def load(cls, path) -> TruncatedSimplicialSet:
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        return f"TruncatedSimplicialSet(sizes={[len(level) for level in self.levels]})"


def _id_str(x) -> str:
    if isinstance(x, tuple):
        return ",".join(str(v) for v in x)
    return str(x)


def nerve(P: FinitePoset, L: int, exclude: Iterable[Iterable] = ()) -> TruncatedSimplicialSet:
    """Nerve of a finite poset up to level ``L``: ``K_n`` = chains ``x_0 <= ... <= x_n`` as tuples.

    Chains whose set of elements contains one of the sets in ``exclude`` are
    dropped; this yields the simplicial subset generated by everything else.
    """
    forbidden = [frozenset(s) for s in exclude]

    def allowed(chain):
        support = set(chain)
        return not any(s <= support for s in forbidden)

    levels = [[(x,) for x in P.elements if allowed((x,))]]
    for _ in range(L):
        nxt = []
        for c in levels[-1]:
            for e in P.elements:
                if P.leq(c[-1], e) and allowed(c + (e,)):
                    nxt.append(c + (e,))
        levels.append(nxt)
    faces, degs = {}, {}
    for n in range(1, L + 1):
        for i in range(n + 1):
            faces[(n, i)] = {c: c[:i] + c[i + 1:] for c in levels[n]}
    for n in range(L):
        for i in range(n + 1):
            degs[(n, i)] = {c: c[:i + 1] + c[i:] for c in levels[n]}
    return TruncatedSimplicialSet(levels, faces, degs)


def _ordinal(n: int) -> FinitePoset:
    return FinitePoset(range(n + 1), [(i, i + 1) for i in range(n)])


def standard_simplex(n: int, L: int) -> TruncatedSimplicialSet:
    """``Delta^n`` truncated at level ``L`` (the nerve of ``[n]``)."""
    return nerve(_ordinal(n), L)


def boundary_simplex(n: int, L: int) -> TruncatedSimplicialSet:
    """``boundary Delta^n``: simplices of ``Delta^n`` that miss at least one vertex."""
    return nerve(_ordinal(n), L, exclude=[range(n + 1)])


# --- decomposition-space condition -----------------------------------------------

@dataclass
class DecompositionResult:
    """Outcome of :func:`check_decomposition`; valid only up to ``level``."""

    passed: bool
    level: int
    squares_checked: int
    witness: dict | None = None

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"verdict": "pass" if self.passed else "fail", "up_to_level": self.level,
               "squares_checked": self.squares_checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def squares(L: int) -> Iterator[tuple[SimplexMap, SimplexMap]]:
    """Inert/active pairs with pushout corner at most ``L``.

    Order: ``n``, then ``m``, then ``l`` ascending, then the offset of ``f``,
    then the value table of ``g`` lexicographically.
    """
    for n in range(L + 1):
        for m in range(n, L + 1):
            for l in range(n, L + 1 - (m - n)):
                for f in inert_maps(n, m):
                    for g in active_maps(n, l):
                        yield f, g


def _check_square(K: TruncatedSimplicialSet, f: SimplexMap, g: SimplexMap) -> dict | None:
    g2, f2 = pushout(f, g)
    fa, ga = K.action(f), K.action(g)
    to_m, to_l = K.action(g2), K.action(f2)
    preimages: dict = {}
    for x in K.levels[g2.target]:
        preimages.setdefault((to_m[x], to_l[x]), []).append(x)
    by_base: dict = {}
    for b in K.levels[g.target]:
        by_base.setdefault(ga[b], []).append(b)
    # the comparison map lands in the pullback by construction; check it hits each point once
    for a in K.levels[f.target]:
        for b in by_base.get(fa[a], ()):
            found = preimages.get((a, b), [])
            if len(found) != 1:
                return {
                    "f": f.to_json(),
                    "g": g.to_json(),
                    "pushout": {"p": g2.target, "g_prime": list(g2.values), "f_prime": list(f2.values)},
                    "fiber_element": [_id_str(a), _id_str(b)],
                    "preimages": [_id_str(x) for x in found],
                }
    return None


def check_decomposition(K: TruncatedSimplicialSet, L: int | None = None, threads: int = 1) -> DecompositionResult:
    """Check that every inert/active pushout with corner ``<= L`` goes to a pullback.

    The witness of a failure is the first failing square in :func:`squares`
    order, and within it the first pullback pair ``(a, b)`` in level order.
    """
    L = K.L if L is None else L
    if L < 2:
        raise LevelTooShallow(f"level {L} < 2 admits no nontrivial squares")
    if L > K.L:
        raise ValueError(f"simplicial set is only known up to level {K.L}")
    sq = list(squares(L))
    # warm the action cache sequentially so worker threads only read it
    for f, g in sq:
        g2, f2 = pushout(f, g)
        for alpha in (f, g, g2, f2):
            K.action(alpha)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda fg: _check_square(K, *fg), sq))
    else:
        results = [_check_square(K, f, g) for f, g in sq]
    for checked, witness in enumerate(results, 1):
        if witness is not None:
            return DecompositionResult(False, L, checked, witness)
    return DecompositionResult(True, L, len(sq))


# --- incidence coalgebra and algebra -----------------------------------------------

def _fibers(K: TruncatedSimplicialSet) -> dict:
    if K._fibers is None:
        if K.L < 2:
            raise LevelTooShallow("the incidence coalgebra needs K_2")
        fib: dict = {f: [] for f in K.levels[1]}
        for s in K.levels[2]:
            fib[K.face(2, 1, s)].append((K.face(2, 2, s), K.face(2, 0, s)))
        K._fibers = fib
    return K._fibers


def comultiply(K: TruncatedSimplicialSet, f) -> list[tuple[Any, Any]]:
    """``Gamma f = sum_{d_1 s = f} d_2 s (x) d_0 s`` as a list of pairs (with multiplicity)."""
    return list(_fibers(K)[f])


def convolve_functionals(phi: Mapping, psi: Mapping, K: TruncatedSimplicialSet) -> Functional:
    fib = _fibers(K)
    return {f: sum((Fraction(phi[a]) * psi[b] for a, b in fib[f]), Fraction(0)) for f in K.levels[1]}


def counit(K: TruncatedSimplicialSet) -> Functional:
    return {f: Fraction(1 if K.is_degenerate_edge(f) else 0) for f in K.levels[1]}


def zeta_functional(K: TruncatedSimplicialSet) -> Functional:
    return {f: Fraction(1) for f in K.levels[1]}


def mobius_functional(K: TruncatedSimplicialSet) -> Functional:
    """The two-sided convolution inverse of zeta on ``K_1``.

    Equations ``(mu * zeta)(f) = delta(f)`` are solved one unknown at a time
    while possible (for a nerve this is the usual interval recursion); the
    rest go to an exact linear solve.
    """
    fib = _fibers(K)
    edges = K.levels[1]
    eps = counit(K)
    mu: dict = {}
    changed = True
    while changed:
        changed = False
        for f in edges:
            unknown = Counter(a for a, _ in fib[f] if a not in mu)
            if len(unknown) == 1:
                (a, c), = unknown.items()
                known = sum((mu[b] for b, _ in fib[f] if b in mu), Fraction(0))
                mu[a] = (eps[f] - known) / c
                changed = True
    unknowns = [e for e in edges if e not in mu]
    if unknowns:
        col = {e: i for i, e in enumerate(unknowns)}
        rows, rhs = [], []
        for f in edges:
            row = [Fraction(0)] * len(unknowns)
            known = Fraction(0)
            for a, _ in fib[f]:
                if a in col:
                    row[col[a]] += 1
                else:
                    known += mu[a]
            rows.append(row)
            rhs.append(eps[f] - known)
        sol, rank = gauss_jordan(rows, rhs)
        if sol is None or rank < len(unknowns):
            raise NotInvertible(_id_str(unknowns[0]))
        mu.update(zip(unknowns, sol))
    result = {f: mu[f] for f in edges}
    zeta = zeta_functional(K)
    for side in (convolve_functionals(result, zeta, K), convolve_functionals(zeta, result, K)):
        for f in edges:
            if side[f] != eps[f]:
                raise NotInvertible(_id_str(f))
    return result


@dataclass
class AlgebraViolation:
    """A concrete failure of coassociativity or counitality at edge ``edge``."""

    law: str
    edge: Any
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"law": self.law, "edge": _id_str(self.edge), **self.detail}


def algebra_violation(K: TruncatedSimplicialSet) -> AlgebraViolation | None:
    """Search every edge for a failure of coassociativity or of the counit laws.

    By duality this decides associativity and unitality of the convolution
    algebra on all functionals. Returns ``None`` when both hold.
    """
    fib = _fibers(K)
    for f in K.levels[1]:
        left = Counter((a1, a2, b) for a, b in fib[f] for a1, a2 in fib[a])
        right = Counter((a, b1, b2) for a, b in fib[f] for b1, b2 in fib[b])
        if left != right:
            diff = sorted(((left - right) + (right - left)).keys(), key=lambda t: tuple(map(_id_str, t)))
            t = diff[0]
            return AlgebraViolation("coassociativity", f, {
                "triple": [_id_str(x) for x in t],
                "left_multiplicity": left[t],
                "right_multiplicity": right[t],
            })
    for f in K.levels[1]:
        lhs = Counter(b for a, b in fib[f] if K.is_degenerate_edge(a))
        rhs = Counter(a for a, b in fib[f] if K.is_degenerate_edge(b))
        for name, got in (("left counit", lhs), ("right counit", rhs)):
            if got != Counter({f: 1}):
                return AlgebraViolation(name, f, {
                    "terms": sorted([_id_str(x), c] for x, c in got.items()),
                })
    return None
