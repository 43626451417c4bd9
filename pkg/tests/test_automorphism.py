import itertools
import random
from fractions import Fraction

import pytest

from intdiff.algebra import D, H, I, e, e_multi, one
from intdiff.automorphism import (
    CanonicalAutomorphism, GeneratorImages, InnerUnit, apply_aut, compose, conjugator_from_inner,
    conjugator_inverse_from_inner, g1_generator, hat_star, idempotent_pq, invert, is_inner, perm_action,
    random_automorphism, random_inner_unit, recognize, same_action, star_images, torus_action,
)
from intdiff.errors import BadParameter, BadResidue, ConjugatorMismatch, NotInKernelXi, RelationViolation
from intdiff.module import DividedPolynomial, apply
from intdiff.quotient import b_aut_compose, fredholm_index, xi_image
from intdiff.sampling import random_element

half = Fraction(1, 2)
swap = (1, 0)


def inner(phi):
    return CanonicalAutomorphism.make(unit=InnerUnit.from_finite(phi))


def test_apply_examples():
    lam = (Fraction(3), Fraction(-2))
    t = CanonicalAutomorphism.make(lam=lam)
    assert apply_aut(t, D(1, 2)) == D(1, 2) * Fraction(1, 3)
    assert apply_aut(t, I(2, 2)) == -2 * I(2, 2)
    assert apply_aut(CanonicalAutomorphism.make(perm=swap), H(1, 2)) == H(2, 2)
    assert apply_aut(inner(1 + e(0, 0)), D()) == D() + e(0, 1)
    assert apply_aut(inner(1 + e(0, 0)), I()) == I() - half * e(1, 0)


def test_subgroup_actions_on_basis():
    lam = (Fraction(5),)
    assert torus_action(lam, e(2, 0)) == 25 * e(2, 0)
    assert torus_action((1, 1), D(1, 2) * I(2, 2)) == D(1, 2) * I(2, 2)
    assert perm_action(swap, D(1, 2) * I(2, 2)) == I(1, 2) * D(2, 2)


def test_torus_matches_conjugation_on_module():
    # t_lambda is conjugation by x^[k] -> lambda^k x^[k] on P_1
    lam = Fraction(2, 3)
    rng = random.Random(1)
    for _ in range(30):
        a = random_element(rng, 1)
        for k in range(6):
            lhs = apply(torus_action((lam,), a), DividedPolynomial.basis((k,)))
            inner_img = apply(a, DividedPolynomial.basis((k,)))
            rhs = DividedPolynomial(1, {b: c * lam ** (b[0] - k) for b, c in inner_img.terms.items()})
            assert lhs == rhs


def test_automorphisms_are_multiplicative():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.choice([1, 2])
        sigma = random_automorphism(rng, n)
        a, b = random_element(rng, n), random_element(rng, n)
        assert apply_aut(sigma, a * b) == apply_aut(sigma, a) * apply_aut(sigma, b)
        assert apply_aut(sigma, one(n)) == one(n)


def test_idempotents():
    assert idempotent_pq({1}, 2, 1) == e(0, 0) + e(1, 1)
    assert idempotent_pq(set(), 1, 1) == 1 - e(0, 0)
    total = sum((idempotent_pq(s, 2, 2) for r in range(3) for s in itertools.combinations([1, 2], r)),
                one(2) * 0)
    assert total == one(2)
    pieces = [idempotent_pq(s, 2, 2) for r in range(3) for s in itertools.combinations([1, 2], r)]
    for x, y in itertools.product(range(4), repeat=2):
        assert pieces[x] * pieces[y] == (pieces[x] if x == y else one(2) * 0)


def test_conjugator_examples():
    ident = GeneratorImages.identity(1)
    assert conjugator_from_inner(ident) == one(1)
    assert conjugator_inverse_from_inner(ident) == one(1)
    for phi in (1 + e(0, 0), 1 + e(0, 1), 1 + 3 * e(2, 0) + e(1, 1)):
        sigma = inner(phi)
        assert conjugator_from_inner(sigma.images()) == phi
        assert conjugator_inverse_from_inner(sigma.images()) == sigma.phi_inv
    assert conjugator_inverse_from_inner(inner(1 + e(0, 0)).images()) == 1 - half * e(0, 0)


def test_conjugator_requires_kernel_of_xi():
    images = CanonicalAutomorphism.make(lam=[2]).images()
    with pytest.raises(NotInKernelXi):
        conjugator_from_inner(images)


def test_conjugators_for_non_finite_units():
    # units of 1 + a_2 that are not in 1 + F_2
    rng = random.Random(3)
    for _ in range(15):
        unit = random_inner_unit(rng, 2)
        sigma = CanonicalAutomorphism.make(unit=unit)
        phi = conjugator_from_inner(sigma.images())
        assert phi == unit.phi
        assert phi * conjugator_inverse_from_inner(sigma.images()) == one(2)


def test_recognize_examples():
    t = CanonicalAutomorphism.make(lam=[Fraction(7, 2)])
    assert recognize(t.images()) == t
    w = inner(1 + e(0, 0))
    assert recognize(w.images()) == w
    with pytest.raises(BadResidue):
        recognize(GeneratorImages((I(),), (D(),), (H(),)))
    # right residues, wrong relations
    with pytest.raises(RelationViolation):
        recognize(GeneratorImages((D(),), (I() + e(0, 0),), (H(),)))


def test_recognize_bad_residue():
    with pytest.raises(BadResidue):
        recognize(GeneratorImages((I(),), (D(),), (-H(),)))
    with pytest.raises(BadResidue):
        recognize(GeneratorImages((2 * D(),), (I(),), (H() + 1,)))
    with pytest.raises(BadResidue):
        recognize(GeneratorImages((D() ** 2,), (I() ** 2,), (H(),)))


def test_recognize_rejects_inconsistent_images():
    # images of two different automorphisms mixed together
    a, b = inner(1 + e(0, 1)), inner(1 + e(1, 0))
    mixed = GeneratorImages(a.images().d, b.images().i, a.images().h)
    with pytest.raises((RelationViolation, ConjugatorMismatch)):
        recognize(mixed)


def test_round_trip_random():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.choice([1, 2])
        sigma = random_automorphism(rng, n)
        assert recognize(sigma.images()) == sigma
        assert same_action(compose(sigma, invert(sigma)), CanonicalAutomorphism.identity(n))
        assert invert(invert(sigma)) == sigma


def test_round_trip_three_variables():
    rng = random.Random(5)
    for _ in range(3):
        sigma = random_automorphism(rng, 3, factors=2, bound=2)
        assert recognize(sigma.images()) == sigma


def test_is_inner():
    assert is_inner(inner(1 + e(0, 0)).images())
    assert not is_inner(CanonicalAutomorphism.make(lam=[2]).images())
    assert is_inner(GeneratorImages.identity(2))


def test_compose_examples():
    lam, mu = (Fraction(2), Fraction(3)), (Fraction(5), Fraction(-1))
    t_lam, t_mu = CanonicalAutomorphism.make(lam=lam), CanonicalAutomorphism.make(lam=mu)
    assert compose(t_lam, t_mu) == CanonicalAutomorphism.make(lam=(10, -3))
    s = CanonicalAutomorphism.make(perm=swap)
    assert compose(s, t_lam) == CanonicalAutomorphism.make(perm=swap, lam=lam)
    assert compose(t_lam, s) == CanonicalAutomorphism.make(perm=swap, lam=(lam[1], lam[0]))
    rng = random.Random(6)
    sigma = random_automorphism(rng, 2)
    assert compose(sigma, CanonicalAutomorphism.identity(2)) == sigma


def test_compose_is_composition_and_associative():
    rng = random.Random(7)
    for _ in range(15):
        n = rng.choice([1, 2])
        a, b, c = (random_automorphism(rng, n, factors=2) for _ in range(3))
        x = random_element(rng, n)
        assert apply_aut(compose(a, b), x) == apply_aut(a, apply_aut(b, x))
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_inner_units_multiply():
    u, v = 1 + e(0, 1), 1 + 2 * e(1, 1)
    assert compose(inner(u), inner(v)) == inner(u * v)


def test_invert_examples():
    lam = (Fraction(2), Fraction(-3))
    assert invert(CanonicalAutomorphism.make(lam=lam)) == CanonicalAutomorphism.make(lam=(half, Fraction(-1, 3)))
    s = CanonicalAutomorphism.make(perm=swap)
    assert invert(s) == s
    assert invert(inner(1 + e(0, 0))) == inner(1 - half * e(0, 0))


def test_hat_star():
    t = CanonicalAutomorphism.make(lam=[Fraction(3)])
    assert hat_star(t) == CanonicalAutomorphism.make(lam=[Fraction(1, 3)])
    assert hat_star(CanonicalAutomorphism.identity(2)) == CanonicalAutomorphism.identity(2)
    rng = random.Random(8)
    for _ in range(5):
        sigma = random_automorphism(rng, rng.choice([1, 2]), factors=2)
        assert hat_star(hat_star(sigma)) == sigma
        assert star_images(sigma).n == sigma.n


def test_g1_generators():
    assert g1_generator("transvection", i=0, j=1, lam=1) == inner(1 + e(0, 1))
    assert g1_generator("torus", lam=3) == CanonicalAutomorphism.make(lam=[3])
    assert g1_generator("dilation", i=1, mu=2) == inner(1 + 2 * e(1, 1))
    with pytest.raises(BadParameter):
        g1_generator("dilation", mu=-1)
    with pytest.raises(BadParameter):
        g1_generator("torus", lam=0)
    with pytest.raises(BadParameter):
        g1_generator("transvection", i=1, j=1)


def test_rigidity_on_samples():
    rng = random.Random(9)
    zeros = (0, 0)
    for _ in range(20):
        sigma, tau = random_automorphism(rng, 2, factors=2), random_automorphism(rng, 2, factors=2)
        if same_action(sigma, tau):
            continue
        assert [apply_aut(sigma, D(i, 2)) for i in (1, 2)] != [apply_aut(tau, D(i, 2)) for i in (1, 2)]
        assert any(apply_aut(sigma, e_multi(a, zeros)) != apply_aut(tau, e_multi(a, zeros))
                   for a in itertools.product(range(4), repeat=2))


def test_centre_is_trivial_on_samples():
    rng = random.Random(10)
    transvections = [inner(1 + e_multi(a, b)) for a in itertools.product(range(3), repeat=2)
                     for b in itertools.product(range(3), repeat=2) if a != b]
    for _ in range(5):
        sigma = random_automorphism(rng, 2, factors=2)
        if same_action(sigma, CanonicalAutomorphism.identity(2)):
            continue
        assert any(not same_action(compose(sigma, t), compose(t, sigma)) for t in transvections)


def test_torus_fixes_euler_operators():
    t = CanonicalAutomorphism.make(lam=[Fraction(4), Fraction(-1, 2)])
    assert all(apply_aut(t, H(i, 2)) == H(i, 2) for i in (1, 2))
    w = inner(1 + e(0, 1))
    assert apply_aut(w, H()) != H()


def test_index_is_invariant():
    rng = random.Random(11)
    for _ in range(20):
        sigma = random_automorphism(rng, 1)
        a = D() ** 2 + 3 * I() * H() + e(1, 0)
        assert fredholm_index(apply_aut(sigma, a)) == fredholm_index(a)


def test_xi_is_homomorphism():
    rng = random.Random(12)
    for _ in range(15):
        n = rng.choice([1, 2, 3])
        sigma, tau = random_automorphism(rng, n, factors=1), random_automorphism(rng, n, factors=1)
        assert xi_image(compose(sigma, tau)) == b_aut_compose(xi_image(sigma), xi_image(tau))
    assert xi_image(inner(1 + e(0, 0))) == xi_image(CanonicalAutomorphism.identity(1))


def test_inner_unit_validation():
    with pytest.raises(BadParameter):
        InnerUnit(1 + e(0, 0), 1 + e(0, 0))
    with pytest.raises(BadParameter):
        InnerUnit(2 * one(1), half * one(1))
