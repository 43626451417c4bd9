"""Automorphisms of I_n in canonical form ``sigma = s t_lambda omega_phi``.

* ``s`` permutes slots: ``s(D_i) = D_s(i)`` and likewise for ``I_i``, ``H_i``;
* ``t_lambda`` scales: ``I_i -> lambda_i I_i``, ``D_i -> lambda_i^-1 D_i``, ``H_i -> H_i``;
* ``omega_phi(a) = phi a phi^-1`` with ``phi`` a unit congruent to 1 modulo a_n.

Permutations are stored 0-based in one-line notation (``perm[i] = s(i)``);
documents and CLI output use 1-based indices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    BAND, ONE_FACTOR, AlgebraElement, e, factor_degree, generator, in_maximal_ideal,
    involution, matrix_unit, max_matrix_index, one, slot_element, try_invert_finite_unit,
)
from .errors import (
    BadParameter, BadResidue, ConjugatorMismatch, DimensionMismatch, NotInKernelXi, RelationViolation,
)
from .quotient import BElement, quotient_image

# --- the subgroups ----------------------------------------------------------------------


def perm_action(perm: Sequence[int], a: AlgebraElement) -> AlgebraElement:
    """Move the slot-``i`` factor of every monomial to slot ``perm[i]``."""
    n = a.n
    if len(perm) != n:
        raise DimensionMismatch(f"permutation of {len(perm)} points acting on I_{n}")
    terms = {}
    for m, c in a.terms.items():
        new = [None] * n
        for i, f in enumerate(m):
            new[perm[i]] = f
        terms[tuple(new)] = c
    return AlgebraElement._trusted(n, terms)


def torus_action(lam: Sequence, a: AlgebraElement) -> AlgebraElement:
    """Scale each monomial by ``prod lambda_i^deg_i``."""
    if len(lam) != a.n:
        raise DimensionMismatch(f"torus of rank {len(lam)} acting on I_{a.n}")
    if all(x == 1 for x in lam):
        return a
    terms = {}
    for m, c in a.terms.items():
        k = Fraction(1)
        for x, f in zip(lam, m):
            d = factor_degree(f)
            if d:
                k *= Fraction(x) ** d
        terms[m] = c * k
    return AlgebraElement._trusted(a.n, terms)


def invert_perm(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def perm_compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p o q`` (apply ``q`` first)."""
    return tuple(p[q[i]] for i in range(len(q)))


def permute_vector(perm: Sequence[int], lam: Sequence) -> tuple:
    """``tau(lambda) = (lambda_{tau^-1(1)}, ..., lambda_{tau^-1(n)})``."""
    out = [None] * len(lam)
    for i, j in enumerate(perm):
        out[j] = lam[i]
    return tuple(out)


@dataclass(frozen=True)
class InnerUnit:
    """A unit ``phi`` of ``1 + a_n`` together with its inverse."""
    phi: AlgebraElement
    phi_inv: AlgebraElement

    def __post_init__(self):
        n = self.phi.n
        if self.phi * self.phi_inv != one(n) or self.phi_inv * self.phi != one(n):
            raise BadParameter("phi and phi_inv are not mutually inverse")
        if not (in_maximal_ideal(self.phi - 1) and in_maximal_ideal(self.phi_inv - 1)):
            raise BadParameter("phi must be congruent to 1 modulo the maximal ideal")

    @classmethod
    def identity(cls, n: int) -> InnerUnit:
        return cls(one(n), one(n))

    @classmethod
    def from_finite(cls, phi: AlgebraElement) -> InnerUnit:
        """Wrap a unit of ``1 + F_n``, inverting its finite block."""
        return cls(phi, try_invert_finite_unit(phi))

    def is_identity(self) -> bool:
        return self.phi == one(self.phi.n)

    def __mul__(self, other: InnerUnit) -> InnerUnit:
        return InnerUnit(self.phi * other.phi, other.phi_inv * self.phi_inv)


@dataclass(frozen=True)
class GeneratorImages:
    """Images of ``D_i``, ``I_i``, ``H_i`` (index ``i - 1`` in each tuple)."""
    d: tuple[AlgebraElement, ...]
    i: tuple[AlgebraElement, ...]
    h: tuple[AlgebraElement, ...]

    @property
    def n(self) -> int:
        return len(self.d)

    @classmethod
    def identity(cls, n: int) -> GeneratorImages:
        return cls(*(tuple(generator(k, i, n) for i in range(1, n + 1))
                     for k in ("deriv", "integ", "euler")))

    def map(self, fn) -> GeneratorImages:
        return GeneratorImages(tuple(map(fn, self.d)), tuple(map(fn, self.i)), tuple(map(fn, self.h)))

    def all(self):
        return self.d + self.i + self.h


@dataclass(frozen=True)
class CanonicalAutomorphism:
    perm: tuple[int, ...]
    lam: tuple[Fraction, ...]
    unit: InnerUnit

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise BadParameter(f"{self.perm} is not a permutation")
        if len(self.lam) != n or any(x == 0 for x in self.lam):
            raise BadParameter("torus vector must have n nonzero entries")
        if self.unit.phi.n != n:
            raise DimensionMismatch("inner unit lives in a different I_n")

    @classmethod
    def make(cls, perm=None, lam=None, unit: InnerUnit | None = None, n: int | None = None):
        if n is None:
            n = len(perm) if perm is not None else len(lam) if lam is not None else unit.phi.n
        perm = tuple(perm) if perm is not None else tuple(range(n))
        lam = tuple(Fraction(x) for x in lam) if lam is not None else (Fraction(1),) * n
        return cls(perm, lam, unit if unit is not None else InnerUnit.identity(n))

    @classmethod
    def identity(cls, n: int) -> CanonicalAutomorphism:
        return cls.make(n=n)

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def phi(self) -> AlgebraElement:
        return self.unit.phi

    @property
    def phi_inv(self) -> AlgebraElement:
        return self.unit.phi_inv

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return apply_aut(self, a)

    def images(self) -> GeneratorImages:
        return GeneratorImages.identity(self.n).map(self)


def apply_aut(sigma: CanonicalAutomorphism, a: AlgebraElement) -> AlgebraElement:
    """``s(t_lambda(phi a phi^-1))``."""
    if a.n != sigma.n:
        raise DimensionMismatch(f"automorphism of I_{sigma.n} applied to I_{a.n}")
    if not sigma.unit.is_identity():
        a = sigma.phi * a * sigma.phi_inv
    return perm_action(sigma.perm, torus_action(sigma.lam, a))


def compose(s1: CanonicalAutomorphism, s2: CanonicalAutomorphism) -> CanonicalAutomorphism:
    """Canonical form of ``s1 o s2``.

    ``s1 t1 w1 s2 t2 w2 = (s1 s2) t_{s2^-1(l1) * l2} w_{t2^-1 s2^-1(phi1) phi2}``.
    """
    if s1.n != s2.n:
        raise DimensionMismatch(f"G_{s1.n} vs G_{s2.n}")
    s2_inv = invert_perm(s2.perm)
    lam1 = permute_vector(s2_inv, s1.lam)
    lam = tuple(x * y for x, y in zip(lam1, s2.lam))
    lam2_inv = [1 / x for x in s2.lam]
    if s1.unit.is_identity():
        unit = s2.unit
    else:
        moved = InnerUnit.__new__(InnerUnit)
        object.__setattr__(moved, "phi", torus_action(lam2_inv, perm_action(s2_inv, s1.phi)))
        object.__setattr__(moved, "phi_inv", torus_action(lam2_inv, perm_action(s2_inv, s1.phi_inv)))
        unit = moved if s2.unit.is_identity() else moved * s2.unit
    result = CanonicalAutomorphism(perm_compose(s1.perm, s2.perm), lam, unit)
    if __debug__:
        for g in GeneratorImages.identity(s1.n).all():
            assert apply_aut(result, g) == apply_aut(s1, apply_aut(s2, g)), "compose closed form drifted"
    return result


def invert(sigma: CanonicalAutomorphism) -> CanonicalAutomorphism:
    """``sigma^-1 = s^-1 t_{s(lambda^-1)} omega_{s t_lambda(phi^-1)}``."""
    s, lam = sigma.perm, sigma.lam
    lam_inv = permute_vector(s, [1 / x for x in lam])
    if sigma.unit.is_identity():
        unit = sigma.unit
    else:
        unit = InnerUnit(perm_action(s, torus_action(lam, sigma.phi_inv)),
                         perm_action(s, torus_action(lam, sigma.phi)))
    return CanonicalAutomorphism(invert_perm(s), lam_inv, unit)


def same_action(s1: CanonicalAutomorphism, s2: CanonicalAutomorphism) -> bool:
    """Equality of actions on all generators (which determines the automorphism)."""
    return all(apply_aut(s1, g) == apply_aut(s2, g) for g in GeneratorImages.identity(s1.n).all())


# --- relation checks -------------------------------------------------------------------

def relation_violations(images: GeneratorImages) -> list[str]:
    """Defining relations of I_n that fail on ``images``."""
    n = images.n
    unit = one(n)
    bad = []
    for k in range(n):
        d, i, h = images.d[k], images.i[k], images.h[k]
        tag = k + 1
        if d * i != unit:
            bad.append(f"D_{tag} I_{tag} != 1")
        if h * i - i * h != i:
            bad.append(f"[H_{tag}, I_{tag}] != I_{tag}")
        if h * d - d * h != -d:
            bad.append(f"[H_{tag}, D_{tag}] != -D_{tag}")
        proj = unit - i * d
        if h * proj != proj or proj * h != proj:
            bad.append(f"H_{tag}(1 - I_{tag} D_{tag}) relation")
    for k, l in itertools.combinations(range(n), 2):
        for a in (images.d[k], images.i[k], images.h[k]):
            for b in (images.d[l], images.i[l], images.h[l]):
                if a * b != b * a:
                    bad.append(f"slots {k + 1} and {l + 1} do not commute")
                    break
            else:
                continue
            break
    return bad


def check_relations(images: GeneratorImages) -> None:
    bad = relation_violations(images)
    if bad:
        raise RelationViolation("; ".join(bad))


# --- conjugator formulas --------------------------------------------------------------

def idempotent_p(i: int, d: int, n: int) -> AlgebraElement:
    """``p(i, d) = sum_{j<d} e_jj(i)``, the projection onto ``x_i^[j]``, ``j < d``."""
    return slot_element([(matrix_unit(j, j), 1) for j in range(d)], i, n)


def idempotent_q(i: int, d: int, n: int) -> AlgebraElement:
    return one(n) - idempotent_p(i, d, n)


def idempotent_pq(subset, d: int, n: int) -> AlgebraElement:
    """``p(I, d) q(CI, d)`` for ``I`` a set of 1-based slots."""
    if d < 1:
        raise BadParameter("d must be at least 1")
    subset = set(subset)
    result = one(n)
    for i in range(1, n + 1):
        factor = idempotent_p(i, d, n) if i in subset else idempotent_q(i, d, n)
        result = result * factor
    return result


def _differences(images: GeneratorImages) -> list[AlgebraElement]:
    ident = GeneratorImages.identity(images.n)
    return [a - b for a, b in zip(images.all(), ident.all())]


def conjugator_bandwidth(images: GeneratorImages) -> int:
    """``d``: one more than the largest Matrix index in any ``sigma(g) - g``.

    Raises NotInKernelXi when some difference leaves the maximal ideal.
    """
    d = 0
    for diff in _differences(images):
        if not in_maximal_ideal(diff):
            raise NotInKernelXi("images are not congruent to the generators modulo a_n")
        d = max(d, max_matrix_index(diff) + 1)
    return max(d, 1)


def _subsets(n: int):
    for r in range(1, n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


class _Powers:
    def __init__(self, base: AlgebraElement):
        self.cache = [one(base.n), base]

    def __getitem__(self, k: int) -> AlgebraElement:
        while len(self.cache) <= k:
            self.cache.append(self.cache[-1] * self.cache[1])
        return self.cache[k]


def conjugator_from_inner(images: GeneratorImages) -> AlgebraElement:
    """The unique ``phi`` in ``(1 + a_n)^*`` with ``sigma = omega_phi``.

    ``phi = q({1..n}, d) + sum_{I != {}} sum_{alpha in C_d(I)}
    prod_{j in I} sigma(D_j)^(d - alpha_j) prod_{i in I} I_i^(d - alpha_i) e_{alpha alpha}(I) p(I,d) q(CI,d)``.
    """
    n = images.n
    d = conjugator_bandwidth(images)
    sd = [_Powers(x) for x in images.d]
    integ = [_Powers(generator("integ", i, n)) for i in range(1, n + 1)]
    phi = idempotent_pq((), d, n)
    for subset in _subsets(n):
        proj = idempotent_pq(subset, d, n)
        for alpha in itertools.product(range(d), repeat=len(subset)):
            left = one(n)
            for j, a in zip(subset, alpha):
                left = left * sd[j - 1][d - a]
            right = one(n)
            for i, a in zip(subset, alpha):
                right = right * integ[i - 1][d - a]
            for i, a in zip(subset, alpha):
                right = right * e(a, a, i, n)
            phi = phi + left * (right * proj)
    return phi


def conjugator_inverse_from_inner(images: GeneratorImages) -> AlgebraElement:
    """``phi^-1`` from the images of ``D_i`` and ``I_i``.

    Same shape as :func:`conjugator_from_inner` with the roles of ``D`` and
    ``sigma(I)`` swapped, and with ``e_jj(i)``, ``p``, ``q`` replaced by their
    images ``e'_jj(i) = sigma(I_i)^j sigma(D_i)^j - sigma(I_i)^(j+1) sigma(D_i)^(j+1)``.
    """
    n = images.n
    d = conjugator_bandwidth(images)
    si = [_Powers(x) for x in images.i]
    sd = [_Powers(x) for x in images.d]
    deriv = [_Powers(generator("deriv", i, n)) for i in range(1, n + 1)]
    # e'_jj(i) for j <= d
    e_img = [[si[i][j] * sd[i][j] - si[i][j + 1] * sd[i][j + 1] for j in range(d)] for i in range(n)]
    p_img = [sum(e_img[i], AlgebraElement(n)) for i in range(n)]
    q_img = [one(n) - p for p in p_img]

    def pq_img(subset) -> AlgebraElement:
        out = one(n)
        for i in range(1, n + 1):
            out = out * (p_img[i - 1] if i in subset else q_img[i - 1])
        return out

    phi_inv = pq_img(())
    for subset in _subsets(n):
        proj = pq_img(subset)
        for alpha in itertools.product(range(d), repeat=len(subset)):
            left = one(n)
            for j, a in zip(subset, alpha):
                left = left * deriv[j - 1][d - a]
            for i, a in zip(subset, alpha):
                left = left * si[i - 1][d - a]
            ealpha = one(n)
            for i, a in zip(subset, alpha):
                ealpha = ealpha * e_img[i - 1][a]
            phi_inv = phi_inv + left * ealpha * proj
    return phi_inv


# --- recognition ---------------------------------------------------------------------------

def read_residues(images: GeneratorImages) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """``(s, lambda)`` from ``sigma(D_i) = lambda_i^-1 D_s(i) mod a_n``, cross-checked on I and H."""
    n = images.n
    zero_exps = (0,) * n
    perm, lam = [], []
    for k, gd in enumerate(images.d):
        bar = quotient_image(gd)
        if len(bar.terms) != 1:
            raise BadResidue(f"image of D_{k + 1} is not lambda^-1 D_j modulo a_n")
        ((beta, poly),) = bar.terms.items()
        if set(poly) != {zero_exps} or sorted(beta) != [-1] + [0] * (n - 1):
            raise BadResidue(f"image of D_{k + 1} is {bar} modulo a_n, not a scaled D_j")
        perm.append(beta.index(-1))
        lam.append(1 / poly[zero_exps])
    if sorted(perm) != list(range(n)):
        raise BadResidue("residues of the D-images do not define a permutation")
    for k in range(n):
        j = perm[k] + 1
        if quotient_image(images.h[k]) != BElement.h(j, n):
            raise BadResidue(f"image of H_{k + 1} is not H_{j} modulo a_n")
        if quotient_image(images.i[k]) != BElement.z(j, n, 1, lam[k]):
            raise BadResidue(f"image of I_{k + 1} is not lambda I_{j} modulo a_n")
    return tuple(perm), tuple(lam)


def recognize(images: GeneratorImages) -> CanonicalAutomorphism:
    """Canonical form of the automorphism with the given generator images.

    Rejects rather than repairs: relation failures, bad residues and
    conjugators that do not reproduce the images are errors.
    """
    # residues first: a non-automorphism such as D -> I is named as such,
    # even though it also breaks the relations
    perm, lam = read_residues(images)
    check_relations(images)
    # (s t_lambda)^-1 = t_{lambda^-1} s^-1
    s_inv = invert_perm(perm)
    lam_inv = [1 / x for x in lam]
    reduced = images.map(lambda a: torus_action(lam_inv, perm_action(s_inv, a)))
    phi = conjugator_from_inner(reduced)
    phi_inv = conjugator_inverse_from_inner(reduced)
    try:
        unit = InnerUnit(phi, phi_inv)
    except BadParameter as exc:
        raise ConjugatorMismatch(f"conjugator formulas disagree: {exc}") from exc
    sigma = CanonicalAutomorphism(perm, lam, unit)
    for given, g in zip(images.all(), GeneratorImages.identity(images.n).all()):
        if apply_aut(sigma, g) != given:
            raise ConjugatorMismatch("recognized automorphism does not reproduce the images")
    return sigma


def is_inner(images: GeneratorImages) -> bool:
    """``sigma`` is inner iff every ``sigma(D_i) = D_i`` modulo a_n."""
    check_relations(images)
    return all(in_maximal_ideal(gd - generator("deriv", k + 1, images.n))
               for k, gd in enumerate(images.d))


def star_images(sigma: CanonicalAutomorphism) -> GeneratorImages:
    """Generator images of ``* o sigma o *``."""
    n = sigma.n
    return GeneratorImages(
        tuple(involution(apply_aut(sigma, generator("integ", i, n))) for i in range(1, n + 1)),
        tuple(involution(apply_aut(sigma, generator("deriv", i, n))) for i in range(1, n + 1)),
        tuple(involution(apply_aut(sigma, generator("euler", i, n))) for i in range(1, n + 1)),
    )


def hat_star(sigma: CanonicalAutomorphism) -> CanonicalAutomorphism:
    return recognize(star_images(sigma))


# --- generators of G_1 and random sampling ----------------------------------------------------

def g1_generator(kind: str, **params) -> CanonicalAutomorphism:
    """``t_lambda``, ``omega_{1 + lambda e_ij}`` (i != j) or ``omega_{1 + mu e_ii}`` (mu != -1) on I_1."""
    if kind == "torus":
        lam = Fraction(params.get("lam", 1))
        if lam == 0:
            raise BadParameter("lambda must be nonzero")
        return CanonicalAutomorphism.make(lam=[lam])
    if kind == "transvection":
        i, j = int(params["i"]), int(params["j"])
        lam = Fraction(params.get("lam", 1))
        if i == j or i < 0 or j < 0:
            raise BadParameter("a transvection needs distinct indices i, j >= 0")
        if lam == 0:
            raise BadParameter("lambda must be nonzero")
        u = e(i, j)
        return CanonicalAutomorphism.make(unit=InnerUnit(1 + lam * u, 1 - lam * u))
    if kind == "dilation":
        i = int(params.get("i", 1))
        mu = Fraction(params.get("mu", 1))
        if mu == -1 or mu == 0:
            raise BadParameter("mu must differ from -1 and 0")
        u = e(i, i)
        return CanonicalAutomorphism.make(unit=InnerUnit(1 + mu * u, 1 - mu / (1 + mu) * u))
    raise BadParameter(f"unknown generator kind {kind!r}")


def _random_scalar(rng: random.Random) -> Fraction:
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    return Fraction(num, rng.choice([1, 1, 2, 3]))


def random_inner_unit(rng: random.Random, n: int, factors: int = 4, bound: int = 3) -> InnerUnit:
    """Product of up to ``factors`` transvection-type units with matrix indices < ``bound``.

    Besides ``1 + c e_{alpha beta}`` (alpha != beta) in ``F_n``, for n > 1 the
    factors include ``1 + c e_ij(k) (x) m`` with ``m`` a generator monomial in the
    other slots, which lies in ``1 + a_n`` but not in ``1 + F_n``.
    """
    unit = InnerUnit.identity(n)
    for _ in range(rng.randint(1, factors)):
        c = _random_scalar(rng)
        if n > 1 and rng.random() < 0.4:
            k = rng.randrange(n)
            i, j = rng.sample(range(bound), 2)
            m = []
            for slot in range(n):
                if slot == k:
                    m.append(matrix_unit(i, j))
                else:
                    m.append(rng.choice([ONE_FACTOR, (BAND, 0, 1), (BAND, 0, -1), (BAND, 1, 0)]))
            u = AlgebraElement.monomial(m, c)
        else:
            while True:
                alpha = tuple(rng.randrange(bound) for _ in range(n))
                beta = tuple(rng.randrange(bound) for _ in range(n))
                if alpha != beta:
                    break
            u = AlgebraElement.monomial([matrix_unit(a, b) for a, b in zip(alpha, beta)], c)
        unit = unit * InnerUnit(1 + u, 1 - u)
    return unit


def random_automorphism(rng: random.Random, n: int, factors: int = 4, bound: int = 3) -> CanonicalAutomorphism:
    perm = list(range(n))
    rng.shuffle(perm)
    lam = [_random_scalar(rng) for _ in range(n)]
    unit = random_inner_unit(rng, n, factors, bound) if rng.random() < 0.9 else InnerUnit.identity(n)
    return CanonicalAutomorphism(tuple(perm), tuple(lam), unit)
