"""The faithful simple module P_n in the divided-power basis ``x^[a] = x^a / a!``.

On this basis ``D x^[k] = x^[k-1]``, ``I x^[k] = x^[k+1]``, ``H x^[k] = (k+1) x^[k]``
and ``e_ij x^[s] = delta_js x^[i]``, so every operator in I_n acts by an integer
matrix.  Because the module is faithful, agreement on enough basis vectors is
the ground truth that the rest of the package is tested against.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import BAND, AlgebraElement, format_scalar
from .errors import DimensionMismatch, ParseError


class DividedPolynomial:
    """Finite rational combination of ``x^[alpha]``, ``alpha`` in N^n."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.n = n
        clean = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != n or any(k < 0 for k in alpha):
                raise ValueError(f"bad multi-index {alpha} for n={n}")
            if c:
                clean[alpha] = Fraction(c)
        self.terms: dict[tuple[int, ...], Fraction] = clean

    @classmethod
    def basis(cls, alpha) -> DividedPolynomial:
        alpha = tuple(alpha)
        return cls(len(alpha), {alpha: 1})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DividedPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: DividedPolynomial) -> DividedPolynomial:
        acc = defaultdict(Fraction, self.terms)
        for alpha, c in other.terms.items():
            acc[alpha] += c
        return DividedPolynomial(self.n, acc)

    def __rmul__(self, c) -> DividedPolynomial:
        return DividedPolynomial(self.n, {a: c * v for a, v in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{format_scalar(c)} * " + " ".join(f"x{i + 1}^[{k}]" for i, k in enumerate(alpha))
            for alpha, c in sorted(self.terms.items()))

    __repr__ = __str__


def _factor_on_index(f, k: int):
    """Slot factor applied to ``x^[k]``: ``(new_k, coefficient)`` or None."""
    if f[0] == BAND:
        _, b, a = f
        new = k + a
        if new < 0:
            return None
        return new, (new + 1) ** b
    _, i, j = f
    return (i, 1) if j == k else None


def apply_monomial(m, alpha):
    coef = 1
    out = []
    for f, k in zip(m, alpha):
        hit = _factor_on_index(f, k)
        if hit is None:
            return None
        out.append(hit[0])
        coef *= hit[1]
    return tuple(out), coef


def apply(a: AlgebraElement, p: DividedPolynomial) -> DividedPolynomial:
    """The action of ``a`` on ``p``."""
    if a.n != p.n:
        raise DimensionMismatch(f"I_{a.n} acting on P_{p.n}")
    acc: dict = defaultdict(Fraction)
    for alpha, c in p.terms.items():
        for m, v in a.terms.items():
            hit = apply_monomial(m, alpha)
            if hit is not None:
                acc[hit[0]] += c * v * hit[1]
    return DividedPolynomial(a.n, acc)


@dataclass(frozen=True)
class TruncatedMatrix:
    """Matrix of an operator on ``span{x^[alpha] : all alpha_i < bound}``.

    ``rows[r][c]`` is the coefficient of ``index[r]`` in the image of ``index[c]``.
    ``leaking`` lists the columns whose image has support outside the window.
    """
    bound: int
    index: tuple[tuple[int, ...], ...]
    rows: tuple[tuple[Fraction, ...], ...]
    leaking: frozenset

    def entry(self, row_alpha, col_alpha) -> Fraction:
        pos = {a: k for k, a in enumerate(self.index)}
        return self.rows[pos[tuple(row_alpha)]][pos[tuple(col_alpha)]]

    def transpose(self) -> TruncatedMatrix:
        return TruncatedMatrix(self.bound, self.index, tuple(zip(*self.rows)), frozenset())


def window(n: int, bound: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(bound), repeat=n))


def truncated_matrix(a: AlgebraElement, bound: int) -> TruncatedMatrix:
    if bound < 1:
        raise ValueError("window bound must be positive")
    index = window(a.n, bound)
    pos = {alpha: k for k, alpha in enumerate(index)}
    size = len(index)
    rows = [[Fraction(0)] * size for _ in range(size)]
    leaking = set()
    for col, alpha in enumerate(index):
        image = apply(a, DividedPolynomial.basis(alpha))
        for beta, c in image.terms.items():
            if beta in pos:
                rows[pos[beta]][col] = c
            else:
                leaking.add(col)
    return TruncatedMatrix(bound, tuple(index), tuple(map(tuple, rows)), frozenset(leaking))


def agree_on_window(a: AlgebraElement, b: AlgebraElement, bound: int) -> bool:
    """True iff ``a`` and ``b`` act identically on every ``x^[alpha]`` with ``alpha_i < bound``."""
    if a.n != b.n:
        raise DimensionMismatch(f"I_{a.n} vs I_{b.n}")
    return all(apply(a, DividedPolynomial.basis(alpha)) == apply(b, DividedPolynomial.basis(alpha))
               for alpha in window(a.n, bound))


def faithful_bound(a: AlgebraElement) -> int:
    """A window bound on which a nonzero ``a`` is guaranteed to act nontrivially.

    With H-degree < h, shifts |a| < s and Matrix indices < d, some ``alpha``
    with components < d + s + h + 1 is not killed.
    """
    h = s = d = 0
    for m in a.terms:
        for f in m:
            if f[0] == BAND:
                h = max(h, f[1] + 1)
                s = max(s, abs(f[2]) + 1)
            else:
                d = max(d, f[1] + 1, f[2] + 1)
    return d + s + h + 1


_POLY_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?)?\s*((?:x\d+\^\[\d+\]\s*)*)")


def parse_polynomial(text: str, n: int) -> DividedPolynomial:
    """Parse ``"c * x1^[a1] x2^[a2] + ..."``; omitted variables have index 0."""
    acc: dict = defaultdict(Fraction)
    s = text.strip()
    if s == "0":
        return DividedPolynomial(n)
    pos = 0
    first = True
    while pos < len(s):
        m = _POLY_TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError("cannot read polynomial term", pos)
        sign, coef, mono = m.groups()
        if not first and not sign:
            raise ParseError("expected '+' or '-' between terms", pos)
        if not coef and not mono.strip():
            raise ParseError("empty polynomial term", pos)
        first = False
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        alpha = [0] * n
        for var, k in re.findall(r"x(\d+)\^\[(\d+)\]", mono):
            i = int(var)
            if not 1 <= i <= n:
                raise ParseError(f"variable x{i} outside 1..{n}", pos)
            alpha[i - 1] += int(k)
        acc[tuple(alpha)] += c
        pos = m.end()
        # allow "+ -3 * ..." as printed by __str__
        rest = s[pos:].lstrip()
        if rest.startswith("+") and rest[1:].lstrip().startswith("-"):
            pos = len(s) - len(rest) + 1
    return DividedPolynomial(n, acc)
