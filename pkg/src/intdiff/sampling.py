"""Random elements with bounded supports, for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import BAND, MATRIX, AlgebraElement
from .module import DividedPolynomial
from .quotient import _clean, ln_prime_basis_vector


def random_scalar(rng: random.Random, nonzero: bool = True) -> Fraction:
    while True:
        c = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3]))
        if c or not nonzero:
            return c


def random_factor(rng: random.Random, hpow: int = 2, shift: int = 3, index: int = 4, matrix_prob: float = 0.35):
    if rng.random() < matrix_prob:
        return (MATRIX, rng.randrange(index), rng.randrange(index))
    return (BAND, rng.randint(0, hpow), rng.randint(-shift, shift))


def random_element(rng: random.Random, n: int, terms: int = 3, **bounds) -> AlgebraElement:
    out = {}
    for _ in range(rng.randint(1, terms)):
        m = tuple(random_factor(rng, **bounds) for _ in range(n))
        out[m] = out.get(m, 0) + random_scalar(rng)
    return AlgebraElement(n, out)


def random_band_element(rng: random.Random, terms: int = 3, hpow: int = 2, shift: int = 3) -> AlgebraElement:
    """An element of I_1 with at least one Band term (so its image in B_1 is nonzero)."""
    while True:
        a = random_element(rng, 1, terms, hpow=hpow, shift=shift)
        if any(m[0][0] == BAND for m in a.terms):
            return a


def random_polynomial(rng: random.Random, n: int, terms: int = 3, degree: int = 5) -> DividedPolynomial:
    out = {}
    for _ in range(rng.randint(1, terms)):
        alpha = tuple(rng.randint(0, degree) for _ in range(n))
        out[alpha] = random_scalar(rng)
    return DividedPolynomial(n, out)


def random_laurent(rng: random.Random, n: int, terms: int = 3, degree: int = 2) -> dict:
    out = {}
    for _ in range(rng.randint(1, terms)):
        beta = tuple(rng.randint(-degree, degree) for _ in range(n))
        out[beta] = random_scalar(rng)
    return out


def random_unimodular(rng: random.Random, n: int, steps: int = 4) -> list[list[int]]:
    """A product of elementary integer matrices and sign flips."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n > 1 and rng.random() < 0.7:
            i, j = rng.sample(range(n), 2)
            k = rng.choice([-2, -1, 1, 2])
            a[i] = [x + k * y for x, y in zip(a[i], a[j])]
        else:
            i = rng.randrange(n)
            a[i] = [-x for x in a[i]]
    return a


def random_ln_prime(rng: random.Random, n: int) -> list[dict]:
    """A vector in L_n': constants plus a few multiples of basis vectors ``b_alpha``."""
    p = [{(0,) * n: random_scalar(rng, nonzero=False)} for _ in range(n)]
    for _ in range(rng.randint(0, 3)):
        alpha = tuple(rng.randint(-2, 2) for _ in range(n))
        if not any(alpha):
            continue
        c = random_scalar(rng)
        for i, q in enumerate(ln_prime_basis_vector(alpha)):
            for beta, v in q.items():
                p[i][beta] = p[i].get(beta, 0) + c * v
    return [_clean(q) for q in p]
