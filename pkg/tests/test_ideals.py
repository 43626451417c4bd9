import itertools
import math
import random

import pytest

from intdiff import ideals as il
from intdiff.algebra import AlgebraElement, is_in_ideal
from intdiff.automorphism import apply_aut, random_automorphism
from intdiff.errors import EmptySet, NotAntichain, NotProper, SlotOutOfRange, TooLarge
from intdiff.sampling import random_element


def brute_antichains(n):
    """All antichains of subsets of {1..n}, straight from the definition."""
    subsets = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(1, n + 1), r)]
    found = set()
    for mask in range(1 << len(subsets)):
        family = [s for k, s in enumerate(subsets) if mask >> k & 1]
        if all(not (a <= b or b <= a) for a, b in itertools.combinations(family, 2)):
            found.add(frozenset(family))
    return found


@pytest.mark.parametrize("n,count", [(1, 3), (2, 6), (3, 20), (4, 168)])
def test_enumeration_matches_brute_force(n, count):
    ideals = il.enumerate_ideals(n)
    assert len(ideals) == count
    assert {a.antichain for a in ideals} == brute_antichains(n)


def test_enumeration_n5_and_limit():
    assert sum(1 for _ in il.iter_antichains(5)) == 7581
    with pytest.raises(TooLarge):
        il.enumerate_ideals(6)


def test_enumeration_is_deterministic():
    assert [str(a) for a in il.enumerate_ideals(3)] == [str(a) for a in il.enumerate_ideals(3)]


def test_primes():
    p1, p2 = il.prime([1], 2), il.prime([2], 2)
    assert il.prime([1, 2], 2) == il.maximal_ideal(2)
    with pytest.raises(EmptySet):
        il.prime([], 2)
    for n in range(1, 5):
        primes = il.enumerate_primes(n)
        assert len(primes) == 2 ** n
    assert il.is_prime(il.maximal_ideal(2)) and il.height(il.maximal_ideal(2)) == 2
    assert not il.is_prime(p1 * p2)


def test_lattice_examples():
    p1, p2 = il.prime([1], 2), il.prime([2], 2)
    f2 = il.smallest_ideal(2)
    a2 = il.maximal_ideal(2)
    assert p1 + p2 == a2
    assert f2 + p1 == p1
    assert p1 + il.zero(2) == p1
    assert p1 * p2 == f2
    assert p1 * a2 == p1
    assert p1 * il.whole(2) == p1
    assert p1 * p1 == p1
    assert il.contains(p1, f2)
    assert not il.contains(p2, p1)
    assert il.contains(il.whole(2), p1)
    assert [m.antichain for m in il.min_primes(f2)] == [frozenset({frozenset({1})}), frozenset({frozenset({2})})]


def test_zero_and_whole():
    assert str(il.zero(3)) == "0" and str(il.whole(3)) == "1"
    assert il.zero(2) <= il.prime([1], 2) <= il.whole(2)
    assert il.is_prime(il.zero(2))
    assert il.parse_ideal("0", 2) == il.zero(2)
    assert il.parse_ideal("1", 2) == il.whole(2)


def test_parse_round_trip():
    for a in il.enumerate_ideals(3):
        assert il.parse_ideal(str(a), 3) == a
    with pytest.raises(NotAntichain):
        il.parse_ideal("min{ {1}, {1,2} }", 2)
    with pytest.raises(SlotOutOfRange):
        il.parse_ideal("min{ {3} }", 2)


def test_function_antichains():
    assert il.from_function_antichain([(0,)], 1) == il.smallest_ideal(1)
    assert il.from_function_antichain([], 2) == il.zero(2)
    assert il.from_function_antichain([(1, 1)], 2) == il.whole(2)
    for n in (1, 2, 3):
        for a in il.enumerate_ideals(n):
            assert il.from_function_antichain(il.to_function_antichain(a), n) == a


def test_unique_factorization():
    for n in (1, 2, 3):
        for a in il.enumerate_ideals(n):
            if not a.is_proper:
                continue
            product = il.whole(n)
            for p in il.min_primes(a):
                product = product * p
            assert product == a


def _monomial_with_slots(rng, slots, n):
    m = []
    for i in range(1, n + 1):
        if i in slots:
            m.append((1, rng.randrange(3), rng.randrange(3)))
        else:
            m.append((0, rng.randrange(2), rng.randint(-2, 2)))
    return AlgebraElement.monomial(m, rng.randint(1, 3))


def test_descriptors_agree_with_element_membership():
    rng = random.Random(1)
    for n in (1, 2):
        ideals = il.enumerate_ideals(n)
        for _ in range(200):
            x = random_element(rng, n, terms=2)
            a, b = rng.choice(ideals), rng.choice(ideals)
            assert is_in_ideal(x, a * b) == (is_in_ideal(x, a) and is_in_ideal(x, b))
            # monomial ideals: x lies in a + b iff each monomial lies in a or in b
            per_term = all(is_in_ideal(AlgebraElement(n, {m: c}), a) or is_in_ideal(AlgebraElement(n, {m: c}), b)
                           for m, c in x.terms.items())
            assert is_in_ideal(x, a + b) == per_term


def test_products_of_members_land_in_product():
    rng = random.Random(2)
    for n in (2, 3):
        ideals = [a for a in il.enumerate_ideals(n) if not a.is_zero]
        for _ in range(100):
            a, b = rng.choice(ideals), rng.choice(ideals)
            x = _monomial_with_slots(rng, set().union(*a.antichain) if a.antichain else set(), n)
            y = _monomial_with_slots(rng, set().union(*b.antichain) if b.antichain else set(), n)
            assert is_in_ideal(x, a) and is_in_ideal(y, b)
            assert is_in_ideal(x * y, a * b)


def test_stabilizers():
    for n in range(2, 6):
        st = il.stabilizer(il.prime([1], n))
        assert st.order == math.factorial(n - 1) and st.index == n
        assert il.stabilizer(il.maximal_ideal(n)).index == 1
    assert il.stabilizer(il.smallest_ideal(3)).index == 1
    with pytest.raises(NotProper):
        il.stabilizer(il.zero(2))


def test_orbit_stabilizer():
    for n in range(2, 5):
        for a in il.enumerate_ideals(n):
            if a.is_proper:
                assert il.stabilizer(a).index == len(il.orbit(a))


def test_generic_structure():
    a = il.prime([1], 3) * il.prime([2], 3)
    assert il.is_generic(a)
    assert il.generic_structure(a) == (1, ((1, 2),))
    assert il.stabilizer(a).order == 2
    assert not il.is_generic(il.prime([1, 2], 3) * il.prime([1, 3], 3))
    b = il.prime([1, 2], 2)
    assert il.generic_structure(b) == (0, ((2, 1),))
    assert il.stabilizer(b).order == 2


def test_generic_orders_exhaustive():
    for n in range(2, 6):
        for a in il.enumerate_ideals(n) if n < 5 else []:
            if a.is_proper and il.is_generic(a):
                m, parts = il.generic_structure(a)
                assert il.stabilizer(a).order == il.generic_stabilizer_order(m, parts)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_invariant_ideals(n):
    found = il.invariant_ideals(n)
    assert len(found) == n + 2
    brute = {a for a in il.enumerate_ideals(n) if not a.is_proper or il.stabilizer(a).index == 1}
    assert set(found) == brute


def test_invariant_ideals_small():
    assert [str(a) for a in il.invariant_ideals(1)] == ["0", "min{ {1} }", "1"]
    assert il.invariant_ideals(2)[1] == il.smallest_ideal(2)


def test_automorphisms_preserve_maximal_ideal_and_permute_primes():
    rng = random.Random(3)
    for _ in range(10):
        sigma = random_automorphism(rng, 2, factors=2)
        for slots in ({1}, {2}, {1, 2}):
            x = _monomial_with_slots(rng, slots, 2)
            y = apply_aut(sigma, x)
            assert is_in_ideal(y, il.maximal_ideal(2))
            image = {sigma.perm[i - 1] + 1 for i in slots}
            assert is_in_ideal(y, il.from_min_primes([[i] for i in image], 2))
