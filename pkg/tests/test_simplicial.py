import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zetaspaces import fixture_path
from zetaspaces.errors import LevelTooShallow, NotInvertible, SimplicialIdentityError
from zetaspaces.poset import FinitePoset, IncidenceElement, convolve, divisor_poset, divisors, mobius
from zetaspaces.simplicial import (
    SimplexMap,
    TruncatedSimplicialSet,
    active_maps,
    algebra_violation,
    boundary_simplex,
    check_decomposition,
    comultiply,
    convolve_functionals,
    counit,
    inert_maps,
    mobius_functional,
    nerve,
    pushout,
    squares,
    standard_simplex,
    zeta_functional,
)


def chain(n):
    return FinitePoset(range(n + 1), [(i, i + 1) for i in range(n)])


def monotone_maps(m, n):
    for vals in itertools.combinations_with_replacement(range(n + 1), m + 1):
        yield SimplexMap(m, n, vals)


def brute_pushout_ok(f, g, g2, f2):
    """The square commutes and [p] is covered by the two images (so it is the pushout in Delta)."""
    commutes = g2.compose(f) == f2.compose(g)
    covered = set(g2.values) | set(f2.values) == set(range(g2.target + 1))
    return commutes and covered and g2.is_active() and f2.is_inert()


# --- maps -------------------------------------------------------------------------

def test_active_inert_examples():
    assert SimplexMap.identity(3).is_active() and SimplexMap.identity(3).is_inert()
    d0 = SimplexMap(1, 2, (1, 2))
    assert d0.is_inert() and not d0.is_active()
    s0 = SimplexMap(2, 1, (0, 0, 1))
    assert s0.is_active() and not s0.is_inert()
    assert SimplexMap.coface(2, 0) == d0
    assert SimplexMap.codegeneracy(1, 0) == s0


def test_rejects_non_monotone():
    with pytest.raises(ValueError):
        SimplexMap(1, 1, (1, 0))


def test_composition_associative_and_unital():
    maps = list(monotone_maps(2, 2))
    for a, b, c in itertools.product(maps, repeat=3):
        assert a.compose(b).compose(c) == a.compose(b.compose(c))
    for a in maps:
        assert a.compose(SimplexMap.identity(2)) == a == SimplexMap.identity(2).compose(a)


def test_active_and_inert_enumeration():
    for n in range(4):
        for l in range(n, 5):
            expected = [g for g in monotone_maps(n, l) if g.is_active()]
            assert list(active_maps(n, l)) == expected
            assert list(inert_maps(n, l)) == [g for g in monotone_maps(n, l) if g.is_inert()]


def test_pushouts_are_pushouts():
    for f, g in squares(5):
        assert brute_pushout_ok(f, g, *pushout(f, g))


# --- simplicial sets ------------------------------------------------------------------

def test_nerve_sizes():
    K = nerve(chain(1), 3)
    assert [len(level) for level in K.levels] == [2, 3, 4, 5]
    assert sum(1 for f in K.levels[1] if not K.is_degenerate_edge(f)) == 1
    point = nerve(FinitePoset(["*"]), 4)
    assert [len(level) for level in point.levels] == [1] * 5
    D4 = nerve(divisor_poset(4), 2)
    assert sum(1 for s in D4.levels[2] if len(set(s)) == 3) == 1


@pytest.mark.parametrize("P,L", [(chain(2), 4), (divisor_poset(12), 3), (FinitePoset.from_json(
    json.loads(fixture_path("diamond.json").read_text())), 3)])
def test_action_matches_precomposition(P, L):
    K = nerve(P, L)
    for m in range(L + 1):
        for n in range(L + 1):
            for alpha in monotone_maps(m, n):
                for x in K.levels[n]:
                    assert K.act(alpha, x) == tuple(x[v] for v in alpha.values)


def test_identity_violation_detected():
    K = nerve(chain(1), 2)
    faces = dict(K.faces)
    bad = dict(faces[(2, 0)])
    bad[(0, 0, 1)] = (0, 0)
    faces[(2, 0)] = bad
    with pytest.raises(SimplicialIdentityError):
        TruncatedSimplicialSet(K.levels, faces, K.degeneracies)
    with pytest.raises(SimplicialIdentityError):
        TruncatedSimplicialSet(K.levels, {}, K.degeneracies)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**20))
def test_random_poset_nerves_satisfy_identities(size, seed):
    rng = random.Random(seed)
    elements = list(range(min(size, 7)))
    covers = [(a, b) for a in elements for b in elements if a < b and rng.random() < 0.4]
    K = nerve(FinitePoset(elements, covers), 3)
    K.validate()
    assert TruncatedSimplicialSet.from_json(json.loads(K.dumps())).to_json() == K.to_json()


def test_fixture_is_boundary_of_three_simplex():
    K = TruncatedSimplicialSet.load(fixture_path("boundary_delta3.json"))
    assert K.to_json() == boundary_simplex(3, 3).to_json()
    assert [len(level) for level in K.levels] == [4, 10, 20, 34]


# --- decomposition condition ------------------------------------------------------------

@pytest.mark.parametrize("P", [chain(0), chain(1), chain(3), divisor_poset(12), divisor_poset(60),
                               FinitePoset(["a", "b", "c"], [("a", "c"), ("b", "c")])])
def test_nerves_are_decomposition_spaces(P):
    for L in (2, 3, 4):
        result = check_decomposition(nerve(P, L), L)
        assert result and result.witness is None


def test_boundary_fails_with_witness():
    K = TruncatedSimplicialSet.load(fixture_path("boundary_delta3.json"))
    result = check_decomposition(K, 3)
    assert not result
    w = result.witness
    assert w["preimages"] == []
    a, b = w["fiber_element"]
    f = SimplexMap(w["f"]["source"], w["f"]["target"], w["f"]["values"])
    g = SimplexMap(w["g"]["source"], w["g"]["target"], w["g"]["values"])
    assert f.is_inert() and g.is_active()
    # the two simplices are compatible over K_n, and no 3-simplex restricts to them
    assert K.act(f, a) == K.act(g, b)
    g2, f2 = pushout(f, g)
    assert not any(K.act(g2, x) == a and K.act(f2, x) == b for x in K.levels[3])
    # same witness whatever the thread count
    assert check_decomposition(K, 3, threads=4).witness == w


def test_standard_simplex_passes_where_boundary_fails():
    assert check_decomposition(standard_simplex(3, 3), 3)
    assert check_decomposition(boundary_simplex(3, 2), 2)


def test_level_too_shallow():
    with pytest.raises(LevelTooShallow):
        check_decomposition(nerve(chain(2), 1), 1)


# --- incidence algebra -------------------------------------------------------------------

def test_comultiply_examples():
    K = nerve(chain(1), 2)
    assert sorted(comultiply(K, (0, 1))) == [((0, 0), (0, 1)), ((0, 1), (1, 1))]
    T = nerve(FinitePoset(["*"]), 2)
    assert comultiply(T, ("*", "*")) == [(("*", "*"), ("*", "*"))]
    K12 = nerve(divisor_poset(12), 2)
    pairs = comultiply(K12, (1, 12))
    assert sorted(pairs) == sorted(((1, d), (d, 12)) for d in divisors(12))


def test_zeta_squared_counts_divisors():
    K = nerve(divisor_poset(12), 2)
    z = zeta_functional(K)
    assert convolve_functionals(z, z, K)[(1, 12)] == 6


def test_counit_is_unit():
    K = nerve(chain(2), 2)
    rng = random.Random(0)
    phi = {f: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for f in K.levels[1]}
    d = counit(K)
    assert convolve_functionals(d, phi, K) == phi == convolve_functionals(phi, d, K)


def test_mobius_functional():
    K = nerve(divisor_poset(12), 2)
    mu = mobius_functional(K)
    assert mu[(1, 12)] == 0 and mu[(1, 6)] == 1
    assert all(mu[f] == 1 for f in K.levels[1] if K.is_degenerate_edge(f))
    assert mobius_functional(nerve(chain(1), 2))[(0, 1)] == -1
    for x, y in K.levels[1]:
        assert mu[(x, y)] == mobius(divisor_poset(12), x, y)


def test_mobius_functional_not_invertible():
    # nerve of the group Z/2 = {u, e}: a 2-simplex is a pair (g, h) with d_2 = g, d_1 = gh, d_0 = h
    levels = [["v"], ["u", "e"], ["uu", "ue", "eu", "ee2"]]
    faces = {(1, 0): {"u": "v", "e": "v"}, (1, 1): {"u": "v", "e": "v"},
             (2, 0): {"uu": "u", "ue": "e", "eu": "u", "ee2": "e"},
             (2, 1): {"uu": "u", "ue": "e", "eu": "e", "ee2": "u"},
             (2, 2): {"uu": "u", "ue": "u", "eu": "e", "ee2": "e"}}
    degs = {(0, 0): {"v": "u"}, (1, 0): {"u": "uu", "e": "ue"}, (1, 1): {"u": "uu", "e": "eu"}}
    K = TruncatedSimplicialSet(levels, faces, degs)
    # (mu * zeta)(u) = mu(u) + mu(e) must be 1 while (mu * zeta)(e) = mu(u) + mu(e) must be 0
    with pytest.raises(NotInvertible):
        mobius_functional(K)


def test_nerve_algebra_is_associative_and_unital():
    K = nerve(divisor_poset(60), 2)
    assert algebra_violation(K) is None


def test_boundary_algebra_agrees_with_simplex():
    # the convolution algebra only sees K_0, K_1 and K_2, where the two coincide
    B, S = boundary_simplex(3, 3), standard_simplex(3, 3)
    assert algebra_violation(B) is None
    assert B.levels[:3] == S.levels[:3]


def test_violation_found_when_a_triangle_is_missing():
    K = nerve(chain(3), 2, exclude=[(0, 1, 3)])
    v = algebra_violation(K)
    assert v is not None and v.law == "coassociativity" and v.edge == (0, 3)
    assert not check_decomposition(nerve(chain(3), 3, exclude=[(0, 1, 3)]), 3)


def test_random_functionals_associative_on_nerve():
    K = nerve(divisor_poset(60), 2)
    rng = random.Random(5)
    rand = lambda: {f: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for f in K.levels[1]}
    a, b, c = rand(), rand(), rand()
    conv = lambda x, y: convolve_functionals(x, y, K)
    assert conv(conv(a, b), c) == conv(a, conv(b, c))


def test_functional_convolution_matches_poset():
    P = divisor_poset(60)
    K = nerve(P, 2)
    rng = random.Random(11)
    phi = {f: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for f in K.levels[1]}
    psi = {f: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for f in K.levels[1]}
    a = IncidenceElement(lambda P, x, y: phi[(x, y)], poset=P)
    b = IncidenceElement(lambda P, x, y: psi[(x, y)], poset=P)
    ab = convolve(a, b, P)
    out = convolve_functionals(phi, psi, K)
    for _ in range(100):
        x, y = rng.choice(K.levels[1])
        assert out[(x, y)] == ab(x, y)
