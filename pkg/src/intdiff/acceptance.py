"""The acceptance checks, shared by ``intdiff selftest`` and the test suite.

Each check returns a :class:`CheckResult`; none of them raise on a failed
property, so a report can list every outcome.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import ideals as il
from .algebra import D, H, I, e, e_multi, one, zero
from .automorphism import (
    CanonicalAutomorphism, GeneratorImages, apply_aut, compose, conjugator_from_inner,
    conjugator_inverse_from_inner, invert, perm_action, random_automorphism, recognize,
    relation_violations, same_action, torus_action, invert_perm,
)
from .errors import NotFredholm
from .module import apply
from .quotient import (
    BAutomorphism, b_aut_compose, b_aut_inverse, ln_prime_basis_vector, ln_prime_check,
    fredholm_index, xi_image, _clean,
)
from .sampling import (
    random_band_element, random_element, random_laurent, random_polynomial, random_scalar,
    random_ln_prime, random_unimodular,
)

SEED = 20240917


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _explicit_relations(n: int) -> list[str]:
    """Relations written out generator by generator."""
    bad = []
    u = one(n)
    for i in range(1, n + 1):
        d, s, h = D(i, n), I(i, n), H(i, n)
        if d * s != u:
            bad.append(f"D{i} I{i}")
        if h * s - s * h != s:
            bad.append(f"[H{i}, I{i}]")
        if h * d - d * h != -d:
            bad.append(f"[H{i}, D{i}]")
        if h * (u - s * d) != u - s * d or (u - s * d) * h != u - s * d:
            bad.append(f"H{i}(1 - I{i} D{i})")
        for a, b in itertools.product(range(4), repeat=2):
            if (s ** a) * (d ** b) - (s ** (a + 1)) * (d ** (b + 1)) != e(a, b, i, n):
                bad.append(f"e{i}[{a},{b}] definition")
    for i, j in itertools.permutations(range(1, n + 1), 2):
        for x in (D(i, n), I(i, n), H(i, n)):
            for y in (D(j, n), I(j, n), H(j, n)):
                if x * y != y * x:
                    bad.append(f"slots {i},{j} commute")
    return bad


def check_relations() -> CheckResult:
    bad = []
    for n in (1, 2, 3):
        bad += [f"n={n}: {b}" for b in _explicit_relations(n)]
        bad += [f"n={n}: {b}" for b in relation_violations(GeneratorImages.identity(n))]
    return CheckResult(1, "defining relations, n = 1, 2, 3", not bad,
                       "all hold exactly" if not bad else "; ".join(bad[:5]))


def check_matrix_units() -> CheckResult:
    failures = 0
    count = 0
    for i, j, k, l in itertools.product(range(6), repeat=4):
        expected = e(i, l) if j == k else zero(1)
        failures += e(i, j) * e(k, l) != expected
        count += 1
    idx = list(itertools.product(range(3), repeat=2))
    units = {(a, b): e_multi(a, b) for a in idx for b in idx}
    for (a, b), (c, d) in itertools.product(units, repeat=2):
        expected = units[(a, d)] if b == c else zero(2)
        failures += units[(a, b)] * units[(c, d)] != expected
        count += 1
    return CheckResult(2, "matrix units e_ij e_kl = delta_jk e_il", failures == 0,
                       f"{count} products, {failures} mismatches")


def check_module_action(samples: int = 10_000) -> CheckResult:
    rng = random.Random(SEED + 3)
    failures = 0
    for k in range(samples):
        n = 1 if k % 2 == 0 else 2
        a = random_element(rng, n, terms=3)
        b = random_element(rng, n, terms=3)
        p = random_polynomial(rng, n)
        failures += apply(a * b, p) != apply(a, apply(b, p))
    return CheckResult(3, "module action respects products", failures == 0,
                       f"{samples} random triples, {failures} mismatches")


def check_index(pairs: int = 1000, invariance: int = 100) -> CheckResult:
    rng = random.Random(SEED + 4)
    problems = []
    for i in range(11):
        if fredholm_index(D() ** i) != i:
            problems.append(f"ind(D^{i})")
        if fredholm_index(I() ** i) != -i:
            problems.append(f"ind(I^{i})")
    for f in (e(0, 0), e(2, 1) + 3 * e(0, 5), e(1, 1) - e(4, 0)):
        try:
            fredholm_index(f)
            problems.append(f"{f} reported Fredholm")
        except NotFredholm:
            pass
    for _ in range(pairs):
        a, b = random_band_element(rng), random_band_element(rng)
        if fredholm_index(a * b) != fredholm_index(a) + fredholm_index(b):
            problems.append(f"additivity for {a} and {b}")
    for _ in range(invariance):
        sigma = random_automorphism(rng, 1)
        a = random_band_element(rng)
        if fredholm_index(apply_aut(sigma, a)) != fredholm_index(a):
            problems.append(f"invariance for {a}")
    return CheckResult(4, "Fredholm index", not problems,
                       f"powers 0..10, {pairs} additivity pairs, {invariance} automorphisms"
                       if not problems else "; ".join(problems[:3]))


def antichain_oracle(n: int) -> int:
    """Count antichains of subsets of {1..n} by filtering all families."""
    subsets = list(range(1 << n))
    count = 0
    for family in range(1 << len(subsets)):
        members = [s for s in subsets if family >> s & 1]
        if all(a & b != a and a & b != b for a, b in itertools.combinations(members, 2)):
            count += 1
    return count


DEDEKIND = {1: 3, 2: 6, 3: 20, 4: 168}


def check_ideal_counts() -> CheckResult:
    problems = []
    for n, expected in DEDEKIND.items():
        got = len(il.enumerate_ideals(n))
        if got != expected or antichain_oracle(n) != expected:
            problems.append(f"n={n}: {got} ideals")
        primes = il.enumerate_primes(n)
        if len(primes) != 2 ** n or not all(il.is_prime(p) for p in primes):
            problems.append(f"n={n}: {len(primes)} primes")
    return CheckResult(5, "ideal and prime counts", not problems,
                       "3, 6, 20, 168 ideals; 2^n primes" if not problems else "; ".join(problems))


def upset(a: il.IdealDescriptor) -> frozenset:
    """Matrix-slot sets of the monomials lying in ``a``."""
    n = a.n
    out = set()
    for r in range(n + 1):
        for s in itertools.combinations(range(1, n + 1), r):
            s = frozenset(s)
            if all(s & p for p in a.antichain):
                out.add(s)
    return frozenset(out)


def check_lattice_laws() -> CheckResult:
    failures = []
    pairs = 0
    for n in (1, 2, 3):
        ideals = il.enumerate_ideals(n)
        ups = {a: upset(a) for a in ideals}
        for a in ideals:
            if a + a != a or a & a != a:
                failures.append(f"idempotence {a}")
        for a, b in itertools.product(ideals, repeat=2):
            pairs += 1
            s, m = a + b, a * b
            if s != b + a or m != b * a:
                failures.append(f"commutativity {a}, {b}")
            # a product of monomials carries the union of their Matrix-slot sets
            if m != il.ideal_intersect(a, b) or ups[m] != {x | y for x in ups[a] for y in ups[b]}:
                failures.append(f"product != intersection for {a}, {b}")
            if ups[s] != ups[a] | ups[b] or ups[m] != ups[a] & ups[b]:
                failures.append(f"oracle disagrees for {a}, {b}")
            if il.contains(a, b) != (ups[b] <= ups[a]):
                failures.append(f"containment {a}, {b}")
            for c in ideals:
                if a & (b + c) != (a & b) + (a & c) or a + (b & c) != (a + b) & (a + c):
                    failures.append(f"distributivity {a}, {b}, {c}")
    return CheckResult(6, "ideal lattice laws, n <= 3", not failures,
                       f"{pairs} pairs and all triples" if not failures else "; ".join(failures[:3]))


def _random_generic_ideal(rng: random.Random, n: int) -> il.IdealDescriptor:
    slots = list(range(1, n + 1))
    rng.shuffle(slots)
    blocks = []
    while slots and (not blocks or rng.random() < 0.75):
        h = rng.randint(1, len(slots))
        blocks.append(slots[:h])
        slots = slots[h:]
    return il.from_min_primes(blocks, n)


def check_stabilizers(samples: int = 20) -> CheckResult:
    rng = random.Random(SEED + 7)
    problems = []
    for n in range(2, 6):
        for i in range(1, n + 1):
            st = il.stabilizer(il.prime([i], n))
            if st.index != n:
                problems.append(f"[G:St(p_{i})] = {st.index} for n={n}")
    for n in range(1, 5):
        found = il.invariant_ideals(n)
        brute = [a for a in il.enumerate_ideals(n)
                 if not a.is_proper or il.stabilizer(a).index == 1]
        if len(found) != n + 2 or set(found) != set(brute):
            problems.append(f"{len(found)} invariant ideals for n={n}")
    for k in range(samples):
        n = 2 + k % 4
        a = _random_generic_ideal(rng, n)
        m, parts = il.generic_structure(a)
        if il.stabilizer(a).order != il.generic_stabilizer_order(m, parts):
            problems.append(f"stabilizer order of {a}")
    return CheckResult(7, "stabilizers of ideals", not problems,
                       f"St(p_i) for n = 2..5, invariant ideals n <= 4, {samples} generic ideals"
                       if not problems else "; ".join(problems[:3]))


def check_round_trip(samples: int = 500) -> CheckResult:
    rng = random.Random(SEED + 8)
    failures = []
    for k in range(samples):
        n = 1 + k % 2
        sigma = random_automorphism(rng, n)
        images = sigma.images()
        got = recognize(images)
        if got != sigma:
            failures.append(f"recognize #{k}")
        if not same_action(compose(sigma, invert(sigma)), CanonicalAutomorphism.identity(n)):
            failures.append(f"inverse #{k}")
        s_inv = invert_perm(sigma.perm)
        lam_inv = [1 / x for x in sigma.lam]
        reduced = images.map(lambda a: torus_action(lam_inv, perm_action(s_inv, a)))
        phi, phi_inv = conjugator_from_inner(reduced), conjugator_inverse_from_inner(reduced)
        if phi * phi_inv != one(n) or phi_inv * phi != one(n):
            failures.append(f"conjugators #{k}")
    return CheckResult(8, "automorphism round trip", not failures,
                       f"{samples} automorphisms, n <= 2" if not failures else "; ".join(failures[:3]))


def check_rigidity(samples: int = 100) -> CheckResult:
    rng = random.Random(SEED + 9)
    failures = []
    pairs = 0
    while pairs < samples:
        n = 1 + pairs % 2
        sigma, tau = random_automorphism(rng, n), random_automorphism(rng, n)
        if rng.random() < 0.3:
            # a close neighbour: same (s, lambda), different inner part
            tau = CanonicalAutomorphism(sigma.perm, sigma.lam, tau.unit)
        if same_action(sigma, tau):
            continue
        pairs += 1
        d_sigma = [apply_aut(sigma, D(i, n)) for i in range(1, n + 1)]
        d_tau = [apply_aut(tau, D(i, n)) for i in range(1, n + 1)]
        if d_sigma == d_tau:
            failures.append("equal D-images")
        alphas = list(itertools.product(range(4), repeat=n))
        zeros = (0,) * n
        if all(apply_aut(sigma, e_multi(a, zeros)) == apply_aut(tau, e_multi(a, zeros)) for a in alphas):
            failures.append("e_a0 images agree")
        twin = compose(sigma, CanonicalAutomorphism.identity(n))
        if any(apply_aut(sigma, e_multi(a, zeros)) != apply_aut(twin, e_multi(a, zeros)) for a in alphas):
            failures.append("e_a0 images of equal automorphisms differ")
    return CheckResult(9, "rigidity", not failures,
                       f"{samples} distinct pairs separated by D- and e_a0-images"
                       if not failures else "; ".join(failures[:3]))


def _same(g: BAutomorphism, h: BAutomorphism) -> bool:
    return g.images() == h.images()


def check_bn_group(samples: int = 100) -> CheckResult:
    rng = random.Random(SEED + 10)
    problems = []
    zeta = BAutomorphism.make([[-1]])
    for _ in range(samples // 4):
        lam = [random_scalar(rng)]
        p = [random_laurent(rng, 1)]
        t, s = BAutomorphism.torus(lam), BAutomorphism.shift(p)
        if not _same(b_aut_compose(zeta, b_aut_compose(t, b_aut_inverse(zeta))), b_aut_inverse(t)):
            problems.append("zeta t zeta^-1")
        minus_zeta_p = [{k: -v for k, v in zeta.torus_matrix_laurent(p[0]).items()}]
        if not _same(b_aut_compose(zeta, b_aut_compose(s, b_aut_inverse(zeta))), BAutomorphism.shift(minus_zeta_p)):
            problems.append("zeta s zeta^-1")
        if not _same(b_aut_compose(t, b_aut_compose(s, b_aut_inverse(t))),
                     BAutomorphism.shift([t.torus_matrix_laurent(p[0])])):
            problems.append("t s t^-1 (n=1)")
    for k in range(samples // 4):
        n = 2 + k % 2
        a = BAutomorphism.make(random_unimodular(rng, n))
        b = a.inverse_matrix()
        lam = [random_scalar(rng) for _ in range(n)]
        p = random_ln_prime(rng, n)
        t, s = BAutomorphism.torus(lam), BAutomorphism.shift(p)
        a_inv = b_aut_inverse(a)
        lam_b = [math.prod((lam[j] ** b[i][j] for j in range(n)), start=Fraction(1)) for i in range(n)]
        if not _same(b_aut_compose(a, b_aut_compose(t, a_inv)), BAutomorphism.torus(lam_b)):
            problems.append("a t a^-1")
        ap = [a.torus_matrix_laurent(q) for q in p]
        pa = []
        for i in range(n):
            acc = defaultdict(Fraction)
            for j in range(n):
                for beta, v in ap[j].items():
                    acc[beta] += v * a.matrix[j][i]
            pa.append(_clean(acc))
        if not _same(b_aut_compose(a, b_aut_compose(s, a_inv)), BAutomorphism.shift(pa)):
            problems.append("a s a^-1")
        if not _same(b_aut_compose(t, b_aut_compose(s, b_aut_inverse(t))),
                     BAutomorphism.shift([t.torus_matrix_laurent(q) for q in p])):
            problems.append("t s t^-1")
    vectors = 0
    for n in (1, 2, 3):
        for alpha in itertools.product(range(-2, 3), repeat=n):
            if any(alpha):
                vectors += 1
                if not ln_prime_check(ln_prime_basis_vector(alpha)):
                    problems.append(f"b_{alpha} fails the L_n' check")
    for k in range(samples):
        n = 1 + k % 3
        sigma, tau = random_automorphism(rng, n, factors=2), random_automorphism(rng, n, factors=2)
        if not _same(xi_image(compose(sigma, tau)), b_aut_compose(xi_image(sigma), xi_image(tau))):
            problems.append("xi is not multiplicative")
    return CheckResult(10, "automorphisms of the quotient", not problems,
                       f"conjugation relations on {samples // 2} samples, {vectors} basis vectors, "
                       f"{samples} homomorphism pairs" if not problems else "; ".join(problems[:3]))


CHECKS: list[Callable[[], CheckResult]] = [
    check_relations, check_matrix_units, check_module_action, check_index, check_ideal_counts,
    check_lattice_laws, check_stabilizers, check_round_trip, check_rigidity, check_bn_group,
]


def run_check(check: Callable[[], CheckResult]) -> CheckResult:
    start = time.perf_counter()
    result = check()
    result.seconds = time.perf_counter() - start
    return result


def run_all() -> list[CheckResult]:
    return [run_check(c) for c in CHECKS]
