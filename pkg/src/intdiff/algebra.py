"""Normal-form arithmetic in the algebra I_n of polynomial integro-differential operators.

I_n is the tensor product of n copies of I_1 = K<D, I, H> (D = d/dx,
I = integration, H = D x), with ``D I = 1``, ``[H, I] = I``, ``[H, D] = -D`` and
``H (1 - I D) = (1 - I D) H = 1 - I D``.  The canonical K-basis of one slot is

* ``Band(b, a) = H^b v_a`` with ``v_a = I^a`` (a > 0), ``D^-a`` (a < 0), ``1`` (a = 0);
* ``Matrix(i, j) = e_ij = I^i D^j - I^(i+1) D^(j+1)``.

A slot factor is a plain tuple ``(tag, x, y)`` with tag 0 for ``Band(b=x, shift=y)``
and tag 1 for ``Matrix(row=x, col=y)``, so monomials sort and hash cheaply.
A basis monomial is a tuple of n slot factors.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from . import _linalg
from .errors import DimensionMismatch, NotFiniteUnitShape, SingularBlock, SlotOutOfRange
from .ideals import IdealDescriptor, IdealDescriptor as _Ideal, ideal_sum, whole, zero as zero_ideal

BAND = 0
MATRIX = 1
ONE_FACTOR = (BAND, 0, 0)

Scalar = Union[int, Fraction]
Factor = tuple  # (tag, x, y)
Monomial = tuple  # tuple of Factor


def band(b: int, a: int) -> Factor:
    if b < 0:
        raise ValueError("H-power must be nonnegative")
    return (BAND, b, a)


def matrix_unit(i: int, j: int) -> Factor:
    if i < 0 or j < 0:
        raise ValueError("matrix indices must be nonnegative")
    return (MATRIX, i, j)


# --- single-slot products -----------------------------------------------------

def _h_poly(b: int, a: int, c: int) -> list[int]:
    """Coefficients of ``H^b (H - a)^c`` in increasing powers of H."""
    coeffs = [0] * (b + c + 1)
    for k in range(c + 1):
        coeffs[b + k] = comb(c, k) * (-a) ** (c - k)
    return coeffs


@lru_cache(maxsize=None)
def slot_mul(f: Factor, g: Factor) -> tuple[tuple[Factor, int], ...]:
    """Product of two slot basis factors as ``((factor, int_coeff), ...)``."""
    if f[0] == MATRIX and g[0] == MATRIX:
        return (((MATRIX, f[1], g[2]), 1),) if f[2] == g[1] else ()
    if f[0] == MATRIX:
        # e_kl H^b v_a = (l+1)^b e_{k, l-a}
        _, k, l = f
        _, b, a = g
        col = l - a
        return (((MATRIX, k, col), (l + 1) ** b),) if col >= 0 else ()
    if g[0] == MATRIX:
        # H^b v_a e_kl = (m+1)^b e_{m,l} with m = k + a
        _, b, a = f
        _, k, l = g
        row = k + a
        return (((MATRIX, row, l), (row + 1) ** b),) if row >= 0 else ()
    # H^b v_a H^c v_e = H^b (H-a)^c v_a v_e
    _, b, a = f
    _, c, e = g
    poly = _h_poly(b, a, c)
    out = [((BAND, k, a + e), coef) for k, coef in enumerate(poly) if coef]
    if a > 0 and e < 0:
        # I^a D^c = v_{a-c} - sum_{t=1}^{min(a,c)} e_{a-t, c-t}
        c_ = -e
        for t in range(1, min(a, c_) + 1):
            row, col = a - t, c_ - t
            value = sum(coef * (row + 1) ** k for k, coef in enumerate(poly))
            if value:
                out.append(((MATRIX, row, col), -value))
    return tuple(out)


@lru_cache(maxsize=None)
def slot_star(f: Factor) -> tuple[tuple[Factor, int], ...]:
    """Involution on a slot factor: ``(H^b v_a)* = (H + a)^b v_-a``, ``e_ij* = e_ji``."""
    if f[0] == MATRIX:
        return (((MATRIX, f[2], f[1]), 1),)
    _, b, a = f
    return tuple(((BAND, k, -a), coef) for k, coef in enumerate(_h_poly(0, -a, b)) if coef)


def factor_degree(f: Factor) -> int:
    return f[2] if f[0] == BAND else f[1] - f[2]


# --- elements -----------------------------------------------------------------

def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class AlgebraElement:
    """Sparse exact-rational combination of basis monomials of I_n.  Immutable."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.n = n
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != n:
                    raise DimensionMismatch(f"monomial {m} has {len(m)} slots, expected {n}")
                if c:
                    clean[m] = _as_fraction(c)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _trusted(cls, n: int, terms: dict) -> AlgebraElement:
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def scalar(cls, c: Scalar, n: int) -> AlgebraElement:
        return cls(n, {(ONE_FACTOR,) * n: c})

    @classmethod
    def monomial(cls, m: Sequence[Factor], c: Scalar = 1) -> AlgebraElement:
        m = tuple(m)
        return cls(len(m), {m: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraElement):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == AlgebraElement.scalar(other, self.n)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            if other.n != self.n:
                raise DimensionMismatch(f"I_{self.n} vs I_{other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraElement.scalar(other, self.n)
        return NotImplemented

    def __add__(self, other) -> AlgebraElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return AlgebraElement._trusted(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement._trusted(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> AlgebraElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> AlgebraElement:
        return (-self) + other

    def __mul__(self, other) -> AlgebraElement:
        if isinstance(other, (int, Fraction)):
            if not other:
                return AlgebraElement._trusted(self.n, {})
            return AlgebraElement._trusted(self.n, {m: c * other for m, c in self.terms.items()})
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other) -> AlgebraElement:
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int) -> AlgebraElement:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers exist in I_n")
        result = AlgebraElement.scalar(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items())

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"AlgebraElement(n={self.n}, {to_text(self)!r})"


def zero(n: int) -> AlgebraElement:
    return AlgebraElement(n)


def one(n: int) -> AlgebraElement:
    return AlgebraElement.scalar(1, n)


def slot_element(factor_terms: Iterable[tuple[Factor, Scalar]], slot: int, n: int) -> AlgebraElement:
    """Embed a combination of slot factors into slot ``slot`` (1-based) of I_n."""
    terms: dict = defaultdict(Fraction)
    for f, c in factor_terms:
        m = [ONE_FACTOR] * n
        m[slot - 1] = f
        terms[tuple(m)] += c
    return AlgebraElement(n, terms)


def e(i: int, j: int, slot: int = 1, n: int = 1) -> AlgebraElement:
    """The matrix unit ``e_ij`` in one slot."""
    return slot_element([(matrix_unit(i, j), 1)], slot, n)


def e_multi(alpha: Sequence[int], beta: Sequence[int]) -> AlgebraElement:
    """``e_{alpha beta}``, the product of the slot matrix units."""
    return AlgebraElement.monomial([matrix_unit(a, b) for a, b in zip(alpha, beta)])


GENERATOR_KINDS = ("deriv", "integ", "euler", "coord")


def generator(kind: str, i: int, n: int) -> AlgebraElement:
    """``D_i``, ``I_i``, ``H_i`` or ``x_i = I_i H_i`` in I_n (slots are 1-based)."""
    if not 1 <= i <= n:
        raise SlotOutOfRange(f"slot {i} not in 1..{n}")
    if kind == "deriv":
        f = band(0, -1)
    elif kind == "integ":
        f = band(0, 1)
    elif kind == "euler":
        f = band(1, 0)
    elif kind == "coord":
        return generator("integ", i, n) * generator("euler", i, n)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return slot_element([(f, 1)], i, n)


def D(i: int = 1, n: int = 1) -> AlgebraElement:
    return generator("deriv", i, n)


def I(i: int = 1, n: int = 1) -> AlgebraElement:  # noqa: E743
    return generator("integ", i, n)


def H(i: int = 1, n: int = 1) -> AlgebraElement:
    return generator("euler", i, n)


def X(i: int = 1, n: int = 1) -> AlgebraElement:
    return generator("coord", i, n)


def linear_combine(coeffs: Sequence[Scalar], elems: Sequence[AlgebraElement]) -> AlgebraElement:
    if len(coeffs) != len(elems):
        raise ValueError("coefficient and element counts differ")
    if not elems:
        raise ValueError("need at least one element to fix n")
    n = elems[0].n
    acc: dict = defaultdict(Fraction)
    for c, a in zip(coeffs, elems):
        if a.n != n:
            raise DimensionMismatch(f"I_{n} vs I_{a.n}")
        for m, v in a.terms.items():
            acc[m] += c * v
    return AlgebraElement(n, acc)


def _mul_monomials(ma: Monomial, mb: Monomial) -> list[tuple[Monomial, int]]:
    partial: list[tuple[tuple, int]] = [((), 1)]
    for fa, fb in zip(ma, mb):
        prod = slot_mul(fa, fb)
        if not prod:
            return []
        if len(prod) == 1:
            (f, k), = prod
            partial = [(m + (f,), c * k) for m, c in partial]
        else:
            partial = [(m + (f,), c * k) for m, c in partial for f, k in prod]
    return partial


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in I_n rewritten into the canonical basis."""
    if a.n != b.n:
        raise DimensionMismatch(f"I_{a.n} vs I_{b.n}")
    acc: dict = defaultdict(int)
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            c = ca * cb
            for m, k in _mul_monomials(ma, mb):
                acc[m] += c * k
    return AlgebraElement._trusted(a.n, {m: _as_fraction(c) for m, c in acc.items() if c})


def _slotwise(a: AlgebraElement, fn) -> AlgebraElement:
    acc: dict = defaultdict(int)
    for m, c in a.terms.items():
        for combo in product(*(fn(f) for f in m)):
            k = 1
            for _, v in combo:
                k *= v
            acc[tuple(f for f, _ in combo)] += c * k
    return AlgebraElement(a.n, acc)


def involution(a: AlgebraElement) -> AlgebraElement:
    """The anti-automorphism ``D_i <-> I_i``, ``H_i -> H_i``."""
    return _slotwise(a, slot_star)


def degree(m: Monomial) -> tuple[int, ...]:
    return tuple(factor_degree(f) for f in m)


def graded_components(a: AlgebraElement) -> dict[tuple[int, ...], AlgebraElement]:
    parts: dict = defaultdict(dict)
    for m, c in a.terms.items():
        parts[degree(m)][m] = c
    return {d: AlgebraElement(a.n, t) for d, t in sorted(parts.items())}


def matrix_slots(m: Monomial) -> frozenset:
    """1-based slots of ``m`` carrying a Matrix factor."""
    return frozenset(i + 1 for i, f in enumerate(m) if f[0] == MATRIX)


def is_in_ideal(a: AlgebraElement, ideal: IdealDescriptor) -> bool:
    """Membership via the monomial rule: every minimal prime must meet the Matrix slots."""
    if a.n != ideal.n:
        raise DimensionMismatch(f"I_{a.n} element vs ideal of I_{ideal.n}")
    return all(all(matrix_slots(m) & s for s in ideal.antichain) for m in a.terms)


def in_maximal_ideal(a: AlgebraElement) -> bool:
    return all(any(f[0] == MATRIX for f in m) for m in a.terms)


def generated_ideal(a: AlgebraElement) -> IdealDescriptor:
    """The two-sided ideal generated by ``a``."""
    result = zero_ideal(a.n)
    for m in a.terms:
        slots = matrix_slots(m)
        if not slots:
            return whole(a.n)
        result = ideal_sum(result, _Ideal(a.n, frozenset(frozenset([i]) for i in slots)))
    return result


def max_matrix_index(a: AlgebraElement) -> int:
    """Largest row/column index over all Matrix factors, -1 if there are none."""
    best = -1
    for m in a.terms:
        for f in m:
            if f[0] == MATRIX:
                best = max(best, f[1], f[2])
    return best


def try_invert_finite_unit(a: AlgebraElement) -> AlgebraElement:
    """Invert ``a = c (1 + f)`` with ``c`` a nonzero scalar and ``f`` in ``F_n``.

    ``1 + f`` acts as the identity outside the finite span of the rows and
    columns of ``f``, so only that block is inverted.
    """
    n = a.n
    identity = (ONE_FACTOR,) * n
    c = a.terms.get(identity)
    if not c:
        raise NotFiniteUnitShape("no nonzero scalar part")
    f_terms = {}
    for m, v in a.terms.items():
        if m == identity:
            continue
        if not all(fac[0] == MATRIX for fac in m):
            raise NotFiniteUnitShape(f"monomial {format_monomial(m)} is not in F_n")
        f_terms[m] = v / c
    index = sorted({tuple(fac[1] for fac in m) for m in f_terms}
                   | {tuple(fac[2] for fac in m) for m in f_terms})
    pos = {alpha: k for k, alpha in enumerate(index)}
    size = len(index)
    block = [[Fraction(int(r == s)) for s in range(size)] for r in range(size)]
    for m, v in f_terms.items():
        block[pos[tuple(fac[1] for fac in m)]][pos[tuple(fac[2] for fac in m)]] += v
    inv = _linalg.inverse(block)
    if inv is None:
        raise SingularBlock("the finite block of 1 + f is singular, so the element is not a unit")
    terms = {identity: 1 / c}
    for r, alpha in enumerate(index):
        for s, beta in enumerate(index):
            v = inv[r][s] - int(r == s)
            if v:
                terms[tuple(matrix_unit(x, y) for x, y in zip(alpha, beta))] = v / c
    return AlgebraElement(n, terms)


# --- text form ------------------------------------------------------------------

def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_factor(f: Factor) -> str:
    if f[0] == MATRIX:
        return f"e[{f[1]},{f[2]}]"
    _, b, a = f
    parts = []
    if b:
        parts.append("H" if b == 1 else f"H^{b}")
    if a:
        letter = "I" if a > 0 else "D"
        parts.append(letter if abs(a) == 1 else f"{letter}^{abs(a)}")
    return " ".join(parts) if parts else "1"


def format_monomial(m: Monomial) -> str:
    return "⊗".join(format_factor(f) for f in m)


def to_text(a: AlgebraElement) -> str:
    """Canonical text: ``"c * f1⊗f2 + ..."`` in monomial order."""
    if not a.terms:
        return "0"
    return " + ".join(f"{format_scalar(c)} * {format_monomial(m)}" for m, c in a.sorted_terms())
