import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zetaspaces.errors import NonInvertibleOnDiagonal, NotComparable
from zetaspaces.poset import (
    Chain,
    Divisibility,
    FinitePoset,
    IncidenceElement,
    Multiset,
    MultisetPoset,
    ProductPoset,
    convolve,
    delta_el,
    divisor_poset,
    divisors,
    invert,
    mobius,
    mobius_el,
    rota_invert,
    zeta_el,
)


def totient(n):
    from math import gcd

    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def classical_mobius(n):
    """Brute force: 0 unless squarefree, else (-1)^(number of prime factors)."""
    count, d = 0, 2
    while n > 1:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            count += 1
        d += 1
    return (-1) ** count


def random_element(rng, P=None):
    table = {}

    def f(P, x, y):
        key = (x, y)
        if key not in table:
            table[key] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        return table[key]

    return IncidenceElement(f, poset=P)


def test_divisor_convolution():
    D = Divisibility()
    assert convolve(zeta_el(), zeta_el(), D)(1, 12) == 6
    C = Chain()
    assert all(convolve(zeta_el(), zeta_el(), C)(0, n) == n + 1 for n in range(20))


def test_zeta_and_delta_values():
    D = Divisibility()
    assert zeta_el().at(D, 3, 9) == 1
    assert delta_el().at(D, 2, 2) == 1
    assert delta_el().at(D, 2, 4) == 0


def test_chain_mobius():
    C = Chain()
    assert [mobius(C, 0, n) for n in range(4)] == [1, -1, 0, 0]


def test_divisibility_mobius():
    D = Divisibility()
    assert mobius(D, 1, 6) == 1
    assert mobius(D, 1, 12) == 0
    assert all(mobius(D, 1, n) == classical_mobius(n) for n in range(1, 501))


def test_not_comparable():
    with pytest.raises(NotComparable):
        mobius(Divisibility(), 2, 9)
    with pytest.raises(NotComparable):
        convolve(zeta_el(), zeta_el(), Chain())(5, 3)


@pytest.mark.parametrize("P", [Divisibility(), Chain()], ids=["divides", "chain"])
def test_mobius_inverts_zeta_up_to_200(P):
    start = time.perf_counter()
    mu = mobius_el(P)
    left = convolve(mu, zeta_el(), P)
    right = convolve(zeta_el(), mu, P)
    lo = 1 if isinstance(P, Divisibility) else 0
    for y in range(lo, 201):
        for x in range(lo, y + 1):
            if P.leq(x, y):
                d = 1 if x == y else 0
                assert left(x, y) == d and right(x, y) == d
    assert time.perf_counter() - start < 5


def test_unit_law():
    rng = random.Random(1)
    D = Divisibility()
    phi = random_element(rng, D)
    for _ in range(30):
        y = rng.randint(1, 300)
        x = rng.choice(divisors(y))
        assert convolve(delta_el(), phi, D)(x, y) == phi(x, y)
        assert convolve(phi, delta_el(), D)(x, y) == phi(x, y)


def test_associativity_random_intervals():
    rng = random.Random(7)
    D = Divisibility()
    phi, psi, chi = (random_element(rng, D) for _ in range(3))
    left = convolve(convolve(phi, psi, D), chi, D)
    right = convolve(phi, convolve(psi, chi, D), D)
    for _ in range(100):
        y = rng.randint(1, 360)
        x = rng.choice(divisors(y))
        assert left(x, y) == right(x, y)


def test_invert_zeta_is_mobius():
    rng = random.Random(3)
    D = Divisibility()
    inv = invert(zeta_el(), D)
    for _ in range(50):
        y = rng.randint(1, 1000)
        x = rng.choice(divisors(y))
        assert inv(x, y) == mobius(D, x, y)


def test_invert_delta():
    C = Chain()
    inv = invert(delta_el(), C)
    assert all(inv(0, n) == (1 if n == 0 else 0) for n in range(10))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=12, max_size=12),
       st.fractions(min_value=1, max_value=3, max_denominator=3))
def test_double_inverse_on_chain(values, diag):
    C = Chain()
    vals = [diag] + values[1:]
    phi = IncidenceElement.from_label(lambda n: vals[n], poset=C)
    twice = invert(invert(phi, C), C)
    inv = invert(phi, C)
    for x in range(3):
        for y in range(x, 12):
            assert twice(x, y) == phi(x, y)
            assert convolve(phi, inv, C)(x, y) == (1 if x == y else 0)
            assert convolve(inv, phi, C)(x, y) == (1 if x == y else 0)


def test_non_invertible_reports_element():
    C = Chain()
    phi = IncidenceElement(lambda P, x, y: 0 if x == y == 2 else 1, poset=C)
    with pytest.raises(NonInvertibleOnDiagonal) as info:
        invert(phi, C)(0, 4)
    assert info.value.x == 2


def test_rota_totient():
    D = Divisibility()
    f = IncidenceElement.from_label(lambda n: n, poset=D)
    g = rota_invert(f, D)
    assert g(1, 12) == 4
    assert all(g(1, n) == totient(n) for n in range(1, 80))
    assert all(convolve(g, zeta_el(), D)(1, n) == n for n in range(1, 80))


def test_rota_differences_on_chain():
    C = Chain()
    g = rota_invert(IncidenceElement.from_label(lambda n: n * n, poset=C), C)
    assert all(g(0, n) == 2 * n - 1 for n in range(1, 30))
    assert rota_invert(zeta_el(C), C)(0, 0) == 1
    assert all(rota_invert(zeta_el(C), C)(0, n) == 0 for n in range(1, 10))


def test_product_poset_mobius_factorizes():
    primes = (2, 3, 5)
    P = ProductPoset(Chain(), Chain(), Chain())
    D = Divisibility()
    for a in range(4):
        for b in range(3):
            for c in range(3):
                top = (a, b, c)
                n = 2**a * 3**b * 5**c
                expected = mobius(Chain(), 0, a) * mobius(Chain(), 0, b) * mobius(Chain(), 0, c)
                assert mobius(P, (0, 0, 0), top) == expected == mobius(D, 1, n)


def test_reduced_soundness_labels():
    # intervals with the same label get the same Moebius value, computed independently
    for n in (1, 4, 6, 12, 30):
        values = {mobius(Divisibility(), x, x * n) for x in (1, 2, 7, 9)}
        assert len(values) == 1
    values = {mobius(Chain(), x, x + 3) for x in range(5)}
    assert values == {0}


def test_unreduced_element_on_reduced_poset():
    # an element that is not constant on labels must not be cached per label
    D = Divisibility()
    phi = IncidenceElement(lambda P, x, y: x, poset=D)
    assert phi(2, 4) == 2 and phi(3, 6) == 3


def test_finite_poset_from_json():
    data = {"elements": ["a", "b", "c", "d"], "covers": [["a", "b"], ["a", "c"], ["b", "d"], ["c", "d"]]}
    P = FinitePoset.from_json(data)
    assert P.interval("a", "d") in (["a", "b", "c", "d"], ["a", "c", "b", "d"])
    assert mobius(P, "a", "d") == 1
    assert not P.leq("b", "c")
    assert FinitePoset.from_json(P.to_json()).to_json() == P.to_json()
    with pytest.raises(ValueError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_divisor_poset_agrees_with_divisibility():
    P = divisor_poset(60)
    D = Divisibility()
    for y in divisors(60):
        for x in divisors(y):
            assert mobius(P, x, y) == mobius(D, x, y)


def test_multiset_poset():
    P = MultisetPoset()
    top = Multiset({"a": 2, "b": 1})
    assert len(P.interval(Multiset(), top)) == 6
    assert mobius(P, Multiset(), Multiset({"a": 1, "b": 1})) == 1
    assert mobius(P, Multiset(), top) == 0
    assert P.classify(Multiset({"a": 1}), top) == Multiset({"a": 1, "b": 1})
