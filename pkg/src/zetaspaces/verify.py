"""Built-in verification suites.

Each suite returns a JSON-ready report whose content depends only on the
suite definition, never on thread count or timing, so reports from runs
with different ``threads`` are byte-identical.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from math import isqrt
from typing import Callable

from . import fixture_path
from .arith import (
    dedekind_mobius_coeffs,
    dedekind_zeta_coeffs,
    euler_product,
    mobius_classical,
)
from .arithscheme import ArithmeticScheme, global_coeffs
from .errors import UnknownSuite
from .ffgeom import (
    VarietySpec,
    closed_point_counts,
    enumerate_0cycles,
    hasse_weil_zeta,
    mobius_series,
    point_counts,
    product_formula_series,
    weil_functional_check,
    zeta_from_counts,
)
from .poset import Chain, Divisibility, IncidenceElement, convolve, divisor_poset, mobius_el, zeta_el
from .series import (
    DirichletCoefficients,
    PowerSeries,
    RationalFunction,
    cyclotomic_product,
    ds_mul,
    ps_mul,
    rational_reconstruct,
)
from .simplicial import (
    TruncatedSimplicialSet,
    algebra_violation,
    check_decomposition,
    convolve_functionals,
    counit,
    nerve,
    zeta_functional,
)

__all__ = ["SUITES", "run_verify"]


def _s(x) -> str:
    return str(Fraction(x))


class _Report:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: list[dict] = []

    def check(self, name: str, checked: int, counterexample=None, **extra) -> None:
        entry = {"name": name, "passed": counterexample is None, "checked": str(checked)}
        entry.update(extra)
        if counterexample is not None:
            entry["counterexample"] = counterexample
        self.checks.append(entry)

    def to_json(self) -> dict:
        failures = sum(not c["passed"] for c in self.checks)
        return {"suite": self.suite, "passed": failures == 0, "failures": str(failures), "checks": self.checks}


def _first_mismatch(got, expected, index_base: int = 0):
    for i, (a, b) in enumerate(zip(got, expected)):
        if a != b:
            return {"index": str(i + index_base), "got": _s(a), "expected": _s(b)}
    if len(got) != len(expected):
        return {"length": str(len(got)), "expected_length": str(len(expected))}
    return None


# --- suites ---------------------------------------------------------------------------

def _suite_mobius(threads: int) -> dict:
    rep = _Report("mobius")
    D, C = Divisibility(), Chain()
    # one representative [1, n] per nontrivial label class n = 2..200
    mu = mobius_el(D)
    left, right = convolve(mu, zeta_el(), D), convolve(zeta_el(), mu, D)
    bad = None
    classes = 0
    for n in range(2, 201):
        classes += 1
        if left(1, n) != 0 or right(1, n) != 0:
            bad = bad or {"interval": ["1", str(n)], "left": _s(left(1, n)), "right": _s(right(1, n))}
    rep.check("divisibility_label_classes", classes, bad, intervals=str(classes))
    for name, P, lo in (("divisibility_all_intervals", D, 1), ("chain_all_intervals", C, 0)):
        mu = mobius_el(P)
        left, right = convolve(mu, zeta_el(), P), convolve(zeta_el(), mu, P)
        count, bad = 0, None
        for y in range(lo, 201):
            for x in range(lo, y + 1):
                if not P.leq(x, y):
                    continue
                count += 1
                d = 1 if x == y else 0
                if bad is None and (left(x, y) != d or right(x, y) != d):
                    bad = {"interval": [str(x), str(y)], "left": _s(left(x, y)), "right": _s(right(x, y))}
        rep.check(name, count, bad)
    return rep.to_json()


def _suite_euler(threads: int) -> dict:
    rep = _Report("euler")
    N = 100
    ones = euler_product(lambda p, M: cyclotomic_product({1: -1}, M), N)
    rep.check("zeta_factors_give_ones", N, _first_mismatch(list(ones), [1] * N, 1))
    mu = euler_product(lambda p, M: cyclotomic_product({1: 1}, M), N)
    rep.check("mobius_factors_give_mobius", N,
              _first_mismatch(list(mu), [mobius_classical(n) for n in range(1, N + 1)], 1))
    return rep.to_json()


def _two_squares(n: int) -> int:
    r = isqrt(n)
    return sum(1 for x in range(-r, r + 1) for y in range(-r, r + 1) if x * x + y * y == n)


def _suite_dedekind(threads: int) -> dict:
    rep = _Report("dedekind")
    N = 500
    z = dedekind_zeta_coeffs(-4, N)
    rep.check("gaussian_lattice_points", N,
              _first_mismatch(list(z), [_two_squares(n) // 4 for n in range(1, N + 1)], 1))
    prod = ds_mul(z, dedekind_mobius_coeffs(-4, N))
    rep.check("zeta_times_mobius_is_delta", N, _first_mismatch(list(prod), list(DirichletCoefficients.delta(N)), 1))
    return rep.to_json()


def _suite_hasseweil(threads: int) -> dict:
    rep = _Report("hasseweil")
    P1 = VarietySpec.projective(1)
    M = 20
    for q in (2, 3, 5):
        Z = hasse_weil_zeta(P1, q, M, threads=threads)
        expected = RationalFunction([1], [1, -(q + 1), q])
        rep.check(f"projective_line_q{q}_series", M + 1,
                  _first_mismatch(Z.coeffs, expected.series(M).coeffs))
        R = rational_reconstruct(Z, 0, 2)
        bad = None if R == expected else {"got": None if R is None else R.to_json(), "expected": expected.to_json()}
        rep.check(f"projective_line_q{q}_reconstruct", 1, bad)
        if q == 2:
            fe = weil_functional_check(R, q, 1, 2)
            bad = None if fe.holds and fe.epsilon == 1 else {"holds": fe.holds, "epsilon": fe.epsilon}
            rep.check("projective_line_functional_equation", 1, bad, epsilon="1" if fe.epsilon == 1 else None)
    M = 16
    for name, X in (("projective_line", P1), ("affine_curve_y2_y_x3", VarietySpec.affine(2, ["y^2+y-x^3"]))):
        N = point_counts(X, 2, M, threads=threads)
        a = closed_point_counts(N)
        prod = product_formula_series(a, M)
        bad = _first_mismatch(prod.coeffs, zeta_from_counts(N).coeffs)
        if bad is None and any(x < 0 for x in a):
            bad = {"negative_closed_point_count": [str(x) for x in a]}
        rep.check(f"product_formula_{name}", M, bad, closed_points=[str(x) for x in a])
    return rep.to_json()


def _suite_cycles(threads: int) -> dict:
    rep = _Report("cycles")
    P1 = VarietySpec.projective(1)
    for q in (2, 3):
        N = point_counts(P1, q, 16, threads=threads)
        a = closed_point_counts(N)
        closed = [(q ** (n + 1) - 1) // (q - 1) for n in range(11)]
        Z = zeta_from_counts(N)
        rep.check(f"coefficients_q{q}", 11, _first_mismatch(Z.coeffs[:11], closed))
        enumerated = [enumerate_0cycles(a, n) for n in range(11)]
        rep.check(f"enumeration_q{q}", 11, _first_mismatch(enumerated, closed))
        one = ps_mul(mobius_series(a, 16), Z)
        rep.check(f"mobius_inverts_zeta_q{q}", 17, _first_mismatch(one.coeffs, PowerSeries.one(16).coeffs))
    return rep.to_json()


def _sigma(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def _suite_arith(threads: int) -> dict:
    rep = _Report("arith")
    N = 100
    cases = [
        ("specz", ArithmeticScheme.spec_z(), [1] * N),
        ("affine_line", ArithmeticScheme.affine_space(1), list(range(1, N + 1))),
        ("projective_line", ArithmeticScheme.projective_space(1), [_sigma(n) for n in range(1, N + 1)]),
        ("specok_-4", ArithmeticScheme.spec_ok(-4), list(dedekind_zeta_coeffs(-4, N))),
    ]
    for name, X, expected in cases:
        rep.check(name, N, _first_mismatch(list(global_coeffs(X, N, threads)), expected, 1))
    return rep.to_json()


def _suite_decomp(threads: int) -> dict:
    rep = _Report("decomp")
    P = divisor_poset(60)
    K = nerve(P, 4)
    res = check_decomposition(K, 4, threads)
    rep.check("nerve_divisors_60_level_4", res.squares_checked, None if res else res.witness)
    B = TruncatedSimplicialSet.load(fixture_path("boundary_delta3.json"))
    res = check_decomposition(B, 3, threads)
    bad = {"unexpected": "boundary of the 3-simplex passed"} if res else None
    rep.check("boundary_delta3_expected_failure", res.squares_checked, bad,
              witness=None if res else res.witness)
    K2 = nerve(P, 2)
    v = algebra_violation(K2)
    rep.check("nerve_divisors_60_associative_unital", len(K2.levels[1]), None if v is None else v.to_json())
    rng = random.Random(60)
    phi = {f: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for f in K2.levels[1]}
    psi = {f: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for f in K2.levels[1]}
    conv = convolve_functionals(phi, psi, K2)
    a = IncidenceElement(lambda P, x, y: phi[(x, y)], poset=P)
    b = IncidenceElement(lambda P, x, y: psi[(x, y)], poset=P)
    ab = convolve(a, b, P)
    bad = None
    for _ in range(100):
        x, y = rng.choice(K2.levels[1])
        if conv[(x, y)] != ab(x, y):
            bad = bad or {"interval": [str(x), str(y)], "functional": _s(conv[(x, y)]), "poset": _s(ab(x, y))}
    rep.check("functional_matches_poset_convolution", 100, bad)
    chi = {f: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for f in K2.levels[1]}
    assoc = {}
    for name, u, v, w in (("phi", phi, psi, chi), ("zeta", zeta_functional(K2), phi, psi)):
        lhs = convolve_functionals(convolve_functionals(u, v, K2), w, K2)
        rhs = convolve_functionals(u, convolve_functionals(v, w, K2), K2)
        bad_edge = next((f for f in K2.levels[1] if lhs[f] != rhs[f]), None)
        if bad_edge is not None and not assoc:
            assoc = {"triple": name, "edge": [str(c) for c in bad_edge], "left": _s(lhs[bad_edge]),
                     "right": _s(rhs[bad_edge])}
    rep.check("functional_convolution_associative", 2 * len(K2.levels[1]), assoc or None)
    eps = counit(K2)
    unit_ok = convolve_functionals(eps, phi, K2) == phi == convolve_functionals(phi, eps, K2)
    rep.check("counit_is_two_sided_unit", len(K2.levels[1]), None if unit_ok else {"unit_law": "fails"})
    return rep.to_json()


SUITES: dict[str, Callable[[int], dict]] = {
    "mobius": _suite_mobius,
    "euler": _suite_euler,
    "dedekind": _suite_dedekind,
    "hasseweil": _suite_hasseweil,
    "cycles": _suite_cycles,
    "arith": _suite_arith,
    "decomp": _suite_decomp,
}


def run_verify(suite: str, threads: int = 1) -> dict:
    """Run one named suite, or ``all``; returns a JSON-ready report."""
    if suite == "all":
        reports = [SUITES[name](threads) for name in SUITES]
        failures = sum(int(r["failures"]) for r in reports)
        return {"suite": "all", "passed": failures == 0, "failures": str(failures), "suites": reports}
    try:
        fn = SUITES[suite]
    except KeyError:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all") from None
    return fn(threads)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2)
