"""Zeta functions of arithmetic schemes as Euler products of mod-p Hasse-Weil factors.

``zeta_X(s) = prod_p Z(X_p, p^-s)``. A scheme is either an integer polynomial
system (reduced coefficientwise mod ``p``) or ``Spec O_K`` for a quadratic
field, whose local factors come from the splitting of ``p``: the reduction is
a disjoint union of ``Spec F_{p^f}``, one per prime above ``p``, so
``#X_p(F_{p^n}) = sum_i f_i [f_i | n]``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .arith import QuadraticField, SplittingType, euler_product, log_floor, primes_up_to
from .ffgeom import VarietySpec, hasse_weil_zeta, zeta_from_counts
from .polynomial import Polynomial, format_polynomial, parse_polynomial
from .series import DirichletCoefficients, PowerSeries, ds_mul

__all__ = [
    "ArithmeticScheme",
    "reduce_mod_p",
    "local_factor",
    "global_coeffs",
    "check_decomposition_identity",
]


@dataclass(frozen=True)
class ArithmeticScheme:
    """A scheme of finite type over Z, as integer equations or quadratic-field data."""

    ambient: str
    dim: int
    polynomials: tuple[Polynomial, ...] = ()
    name: str = ""
    number_field: QuadraticField | None = field(default=None, compare=False)

    def __post_init__(self):
        # validates arity and homogeneity
        self.variety()

    def variety(self) -> VarietySpec:
        return VarietySpec(self.ambient, self.dim, self.polynomials)

    @classmethod
    def spec_z(cls) -> ArithmeticScheme:
        return cls("affine", 0, (), "specz")

    @classmethod
    def affine_space(cls, n: int) -> ArithmeticScheme:
        return cls("affine", n, (), f"affine:{n}")

    @classmethod
    def projective_space(cls, n: int) -> ArithmeticScheme:
        return cls("projective", n, (), f"projective:{n}")

    @classmethod
    def spec_ok(cls, D: int) -> ArithmeticScheme:
        """``Spec O_K`` for ``K = Q(sqrt D)``; ``O_K = Z[x]/(f)`` with ``f`` the minimal polynomial of
        ``(1 + sqrt D)/2`` or ``sqrt(D/4)``."""
        K = QuadraticField(D)
        if D % 4 == 1:
            f = {(2,): 1, (1,): -1, (0,): (1 - D) // 4}
        else:
            f = {(2,): 1, (0,): -(D // 4)}
        return cls("affine", 1, (Polynomial(1, f),), f"specok:{D}", K)

    @classmethod
    def poly(cls, ambient: str, polys) -> ArithmeticScheme:
        X = VarietySpec.parse(ambient, polys)
        label = f"poly:{ambient}:" + ";".join(format_polynomial(f) for f in X.polynomials)
        return cls(X.ambient, X.dim, X.polynomials, label)

    @classmethod
    def parse(cls, text: str) -> ArithmeticScheme:
        """``specz``, ``affine:n``, ``projective:n``, ``specok:D`` or ``poly:<ambient>:<m>:<f1>;<f2>...``."""
        kind, _, rest = text.partition(":")
        if kind == "specz" and not rest:
            return cls.spec_z()
        if kind in ("affine", "projective") and rest.isdigit():
            n = int(rest)
            return cls.affine_space(n) if kind == "affine" else cls.projective_space(n)
        if kind == "specok":
            try:
                return cls.spec_ok(int(rest))
            except ValueError:
                pass
        if kind == "poly":
            amb, _, m_polys = rest.partition(":")
            m, _, polys = m_polys.partition(":")
            if amb in ("affine", "projective") and m.isdigit():
                return cls.poly(f"{amb}:{m}", [s for s in polys.split(";") if s.strip()])
        raise ValueError(f"cannot parse scheme {text!r}")

    def describe(self) -> dict:
        out = {"scheme": self.name or "custom"}
        out.update(self.variety().describe())
        return out


def reduce_mod_p(X: ArithmeticScheme, p: int) -> VarietySpec:
    return X.variety().reduce_mod(p)


def _splitting_counts(K: QuadraticField, p: int, order: int) -> list[int]:
    kind = K.splitting(p)
    degrees = {SplittingType.SPLIT: [1, 1], SplittingType.INERT: [2], SplittingType.RAMIFIED: [1]}[kind]
    return [sum(f for f in degrees if n % f == 0) for n in range(1, order + 1)]


def local_factor(X: ArithmeticScheme, p: int, order: int, budget: int | None = None) -> PowerSeries:
    """``Z(X_p, t)`` truncated at ``t^order``."""
    if order < 1:
        return PowerSeries.one(order)
    if X.number_field is not None:
        return zeta_from_counts(_splitting_counts(X.number_field, p, order))
    return hasse_weil_zeta(reduce_mod_p(X, p), p, order, budget)


def global_coeffs(X: ArithmeticScheme, N: int, threads: int = 1, budget: int | None = None) -> DirichletCoefficients:
    """Coefficients ``c_1..c_N`` of ``zeta_X(s)``; local factors run in parallel across primes."""
    primes = primes_up_to(N)

    def work(p):
        return local_factor(X, p, log_floor(N, p), budget)

    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            factors = dict(zip(primes, pool.map(work, primes)))
    else:
        factors = {p: work(p) for p in primes}
    return euler_product(lambda p, order: factors[p], N, primes)


def check_decomposition_identity(X: ArithmeticScheme, Z: ArithmeticScheme, U: ArithmeticScheme, N: int,
                                 threads: int = 1) -> bool:
    """``zeta_X = zeta_Z * zeta_U`` through ``n^-s``, ``n <= N``."""
    return global_coeffs(X, N, threads) == ds_mul(global_coeffs(Z, N, threads), global_coeffs(U, N, threads))
