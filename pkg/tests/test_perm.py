import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from roomgraph.errors import (
    ConfigParseError,
    DomainMismatchError,
    NoDerangementError,
    NotFactorableError,
    OddPermutationError,
    UnsupportedSizeError,
)
from roomgraph.perm import (
    Permutation,
    compose,
    even_to_two_ncycles,
    factor_into_derangements,
    make_derangement,
    product,
    transposition_to_two_derangements,
)


def P(cycles, n):
    return Permutation.from_cycles(cycles, range(1, n + 1))


def all_perms(n):
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation.from_images(images)


perms = st.integers(1, 9).flatmap(
    lambda n: st.permutations(list(range(1, n + 1))).map(Permutation.from_images)
)


def test_composition_is_right_to_left():
    p = P([(1, 2)], 3)
    q = P([(2, 3)], 3)
    # q first sends 2 -> 3, then p fixes 3
    assert compose(p, q)(2) == 3
    assert (p * q)(3) == 1


def test_compose_example():
    tau = P([(2, 4)], 4)
    sigma = P([(1, 2, 3, 4)], 4)
    assert compose(tau, sigma) == P([(1, 4), (2, 3)], 4)


@given(perms)
def test_group_identities(p):
    e = Permutation.identity(p.domain)
    assert compose(p, e) == p == compose(e, p)
    assert compose(p, p.inverse()) == e


@given(st.data())
def test_associativity_and_parity(data):
    n = data.draw(st.integers(1, 8))
    draw = lambda: Permutation.from_images(data.draw(st.permutations(list(range(1, n + 1)))))
    p, q, r = draw(), draw(), draw()
    assert compose(compose(p, q), r) == compose(p, compose(q, r))
    odd = lambda x: x.parity() == "odd"
    assert odd(compose(p, q)) == (odd(p) != odd(q))


def test_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        compose(Permutation.identity([1, 2]), Permutation.identity([1, 2, 3]))


def test_parity_and_derangement_examples():
    assert P([(1, 2, 3)], 3).parity() == "even"
    assert P([(1, 2, 3, 4)], 4).is_derangement()
    assert not P([(2, 3)], 3).is_derangement()


def test_parse_format():
    p = Permutation.parse("2,1,4,3")
    assert p == P([(1, 2), (3, 4)], 4)
    assert p.format() == "2,1,4,3"
    with pytest.raises(ConfigParseError):
        Permutation.parse("1,1,2")
    with pytest.raises(ConfigParseError):
        Permutation.parse("1,x")


def test_make_derangement():
    assert make_derangement({2, 3}) == Permutation({2: 3, 3: 2})
    assert make_derangement(range(1, 4), pin=(1, 2)) == P([(1, 2, 3)], 3)
    d = make_derangement(range(1, 6), pin=(4, 2))
    assert d(4) == 2 and d.is_derangement()
    with pytest.raises(NoDerangementError):
        make_derangement({5})
    with pytest.raises(NoDerangementError):
        make_derangement(range(1, 4), pin=(2, 2))


def test_even_to_two_ncycles_examples():
    c1, c2 = even_to_two_ncycles(Permutation.identity(range(1, 5)))
    assert (c1, c2) == (P([(1, 2, 3, 4)], 4), P([(1, 4, 3, 2)], 4))
    # (1 3 2) o (1 3 2) == (1 2 3), and it is the only factorization
    c = P([(1, 3, 2)], 3)
    assert compose(c, c) == P([(1, 2, 3)], 3)
    assert even_to_two_ncycles(P([(1, 2, 3)], 3)) == (c, c)
    p = P([(1, 2), (3, 4)], 4)
    c1, c2 = even_to_two_ncycles(p)
    assert c1.is_full_cycle() and c2.is_full_cycle() and compose(c1, c2) == p
    with pytest.raises(OddPermutationError):
        even_to_two_ncycles(P([(1, 2)], 4))
    with pytest.raises(UnsupportedSizeError):
        even_to_two_ncycles(Permutation.identity([1]))


@pytest.mark.parametrize("n", range(2, 7))
def test_even_to_two_ncycles_exhaustive(n):
    for p in all_perms(n):
        if p.parity() != "even":
            continue
        c1, c2 = even_to_two_ncycles(p)
        assert c1.is_full_cycle() and c2.is_full_cycle()
        assert compose(c1, c2) == p


def test_even_to_two_ncycles_sampled_large():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(7, 64)
        images = list(range(1, n + 1))
        rng.shuffle(images)
        p = Permutation.from_images(images)
        if p.parity() == "odd":
            p = compose(p, P([(1, 2)], n))
        c1, c2 = even_to_two_ncycles(p)
        assert c1.is_full_cycle() and c2.is_full_cycle() and compose(c1, c2) == p


def test_even_to_two_ncycles_is_deterministic():
    p = P([(1, 5, 2), (3, 6, 7)], 8)
    assert even_to_two_ncycles(p) == even_to_two_ncycles(p)


def test_transposition_example():
    d1, d2 = transposition_to_two_derangements(1, 3, 4)
    assert d1 == P([(1, 4), (2, 3)], 4)
    assert d2 == P([(1, 2, 3, 4)], 4).inverse()
    assert compose(d2, d1) == P([(1, 3)], 4)


@pytest.mark.parametrize("n", range(4, 9))
def test_every_transposition_is_two_derangements(n):
    for x, y in itertools.combinations(range(1, n + 1), 2):
        d1, d2 = transposition_to_two_derangements(x, y, n)
        assert d1.is_derangement() and d2.is_derangement()
        assert compose(d2, d1) == P([(x, y)], n)


def test_transposition_small_n_unsupported():
    with pytest.raises(UnsupportedSizeError):
        transposition_to_two_derangements(1, 2, 3)


def test_factor_examples():
    assert len(factor_into_derangements(Permutation.identity(range(1, 5)))) == 0
    p = P([(1, 2), (3, 4)], 4)
    assert factor_into_derangements(p).factors == (p,)
    fac = factor_into_derangements(P([(1, 3)], 4))
    assert len(fac) == 2 and fac.verify()
    with pytest.raises(NotFactorableError):
        factor_into_derangements(P([(1, 2)], 3))


@pytest.mark.parametrize("n", range(1, 7))
def test_factor_exhaustive(n):
    for p in all_perms(n):
        if n == 3 and p.parity() == "odd":
            with pytest.raises(NotFactorableError):
                factor_into_derangements(p)
            continue
        fac = factor_into_derangements(p)
        assert all(f.is_derangement() for f in fac.factors)
        assert product(fac.factors, p.domain) == p
        assert (len(fac) == 0) == p.is_identity()
        assert len(fac) <= 4
        if p.is_derangement():
            assert len(fac) <= 1
        if p.parity() == "even":
            assert len(fac) <= 2


def test_factor_on_nonstandard_domain():
    p = Permutation({2: 5, 5: 2, 7: 7, 9: 9})
    fac = factor_into_derangements(p)
    assert fac.verify() and len(fac) <= 4
