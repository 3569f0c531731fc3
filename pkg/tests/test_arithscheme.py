import time
from math import gcd

import pytest

from zetaspaces.arith import dedekind_zeta_coeffs
from zetaspaces.arithscheme import (
    ArithmeticScheme,
    check_decomposition_identity,
    global_coeffs,
    local_factor,
    reduce_mod_p,
)
from zetaspaces.ffgeom import VarietySpec, hasse_weil_zeta
from zetaspaces.series import DirichletCoefficients, PowerSeries, ds_mul


def sigma(n, k=1):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def shifted_ones(N, n):
    """Coefficients of zeta(s - n): c_m = m^n."""
    return DirichletCoefficients([m**n for m in range(1, N + 1)])


def geometric(r, order):
    return PowerSeries([r**k for k in range(order + 1)], order)


def test_reductions():
    assert reduce_mod_p(ArithmeticScheme.spec_z(), 7) == VarietySpec.point()
    assert reduce_mod_p(ArithmeticScheme.affine_space(3), 5) == VarietySpec.affine(3)
    X = ArithmeticScheme.poly("affine:1", ["x^2+1"])
    assert reduce_mod_p(X, 2) == VarietySpec.affine(1, ["x^2+2*x+1"]).reduce_mod(2)
    Y = ArithmeticScheme.poly("affine:1", ["3*x+3"])
    assert reduce_mod_p(Y, 3).polynomials[0].is_zero()


def test_local_factors():
    assert local_factor(ArithmeticScheme.spec_z(), 11, 6) == geometric(1, 6)
    assert local_factor(ArithmeticScheme.affine_space(1), 3, 6) == geometric(3, 6)
    split = local_factor(ArithmeticScheme.spec_ok(-4), 5, 6)
    assert split == PowerSeries([k + 1 for k in range(7)], 6)


@pytest.mark.parametrize("D", [-4, -3, 5, 8, -7, 12])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_spec_ok_splitting_matches_polynomial_model(D, p):
    X = ArithmeticScheme.spec_ok(D)
    assert local_factor(X, p, 5) == hasse_weil_zeta(reduce_mod_p(X, p), p, 5)


def test_named_global_coefficients():
    start = time.perf_counter()
    N = 100
    assert global_coeffs(ArithmeticScheme.spec_z(), N) == DirichletCoefficients.ones(N)
    assert list(global_coeffs(ArithmeticScheme.affine_space(1), N)) == list(range(1, N + 1))
    assert list(global_coeffs(ArithmeticScheme.projective_space(1), N)) == [sigma(n) for n in range(1, N + 1)]
    assert global_coeffs(ArithmeticScheme.spec_ok(-4), N) == dedekind_zeta_coeffs(-4, N)
    assert time.perf_counter() - start < 30


@pytest.mark.parametrize("D", [-4, 5])
def test_spec_ok_equals_dedekind(D):
    assert global_coeffs(ArithmeticScheme.spec_ok(D), 100) == dedekind_zeta_coeffs(D, 100)


@pytest.mark.parametrize("n", [1, 2])
def test_projective_space_is_product_of_shifts(n):
    N = 60
    expected = DirichletCoefficients.ones(N)
    for k in range(1, n + 1):
        expected = ds_mul(expected, shifted_ones(N, k))
    assert global_coeffs(ArithmeticScheme.projective_space(n), N) == expected


def test_decomposition_identities():
    Z = ArithmeticScheme
    assert check_decomposition_identity(Z.projective_space(1), Z.affine_space(1), Z.spec_z(), 100)
    assert check_decomposition_identity(Z.projective_space(2), Z.affine_space(2), Z.projective_space(1), 100)
    assert not check_decomposition_identity(Z.spec_z(), Z.spec_z(), Z.spec_z(), 100)
    # the conic x^2 + y^2 = z^2 counts like a projective line at every p,
    # including p = 2 where it reduces to the double line (x + y + z)^2
    conic = Z.poly("projective:2", ["x^2+y^2-z^2"])
    assert check_decomposition_identity(conic, Z.affine_space(1), Z.spec_z(), 60)


@pytest.mark.parametrize("X", [
    ArithmeticScheme.spec_ok(-3),
    ArithmeticScheme.projective_space(2),
    ArithmeticScheme.poly("affine:2", ["y^2+y-x^3"]),
    ArithmeticScheme.poly("projective:2", ["y^2*z-x^3-x*z^2"]),
])
def test_global_coefficients_multiplicative(X):
    c = global_coeffs(X, 2500)
    for m in range(1, 51):
        for n in range(1, 51):
            if gcd(m, n) == 1:
                assert c[m * n] == c[m] * c[n]


def test_threads_do_not_change_coefficients():
    X = ArithmeticScheme.poly("affine:2", ["y^2+y-x^3"])
    assert global_coeffs(X, 200, threads=1) == global_coeffs(X, 200, threads=4)


@pytest.mark.parametrize("text", ["specz", "affine:2", "projective:1", "specok:-4", "poly:affine:2:y^2+y-x^3",
                                  "poly:projective:2:x*y-z^2;x+y"])
def test_parse_round_trip(text):
    X = ArithmeticScheme.parse(text)
    assert ArithmeticScheme.parse(X.name) == X


@pytest.mark.parametrize("text", ["", "spec", "affine:x", "specok:3", "poly:affine:y^2", "specz:1"])
def test_parse_rejects(text):
    with pytest.raises(Exception):
        ArithmeticScheme.parse(text)
