"""Ideals of the integro-differential algebra as minimal-prime antichains.

Every ideal is the intersection (equivalently the product) of its minimal
primes, and the prime ``p_I`` for a nonempty ``I`` in {1..n} is the sum of the
height-one primes ``p_i``, i in I.  An ideal is therefore stored as the
antichain of index sets of its minimal primes.  Two degenerate antichains
cover the remaining cases: ``{{}}`` (the zero ideal, the prime ``p_{}``) and
``{}`` (the empty intersection, the whole algebra).  With that convention the
lattice operations need no special cases.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EmptySet, NotAntichain, NotProper, ParseError, SlotOutOfRange, TooLarge

MAX_ENUMERATE_N = 5


def _minimal(sets: Iterable[frozenset]) -> frozenset:
    sets = set(sets)
    return frozenset(s for s in sets if not any(t < s for t in sets))


@dataclass(frozen=True)
class IdealDescriptor:
    n: int
    antichain: frozenset  # frozenset of frozensets of 1-based slot indices

    @property
    def kind(self) -> str:
        if not self.antichain:
            return "whole"
        if frozenset() in self.antichain:
            return "zero"
        return "proper"

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_whole(self) -> bool:
        return self.kind == "whole"

    @property
    def is_proper(self) -> bool:
        return self.kind == "proper"

    def sorted_min(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(s)) for s in self.antichain), key=lambda t: (len(t), t))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.is_whole:
            return "1"
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.sorted_min())
        return "min{ " + body + " }"

    def __add__(self, other: IdealDescriptor) -> IdealDescriptor:
        return ideal_sum(self, other)

    def __mul__(self, other: IdealDescriptor) -> IdealDescriptor:
        return ideal_product(self, other)

    def __and__(self, other: IdealDescriptor) -> IdealDescriptor:
        return ideal_intersect(self, other)

    def __le__(self, other: IdealDescriptor) -> bool:
        return contains(other, self)


def zero(n: int) -> IdealDescriptor:
    return IdealDescriptor(n, frozenset([frozenset()]))


def whole(n: int) -> IdealDescriptor:
    return IdealDescriptor(n, frozenset())


def from_min_primes(sets: Iterable[Iterable[int]], n: int) -> IdealDescriptor:
    """Build a proper ideal from the index sets of its minimal primes."""
    members = {frozenset(s) for s in sets}
    if not members:
        raise NotAntichain("a proper ideal needs at least one minimal prime")
    for s in members:
        if not s:
            raise EmptySet("minimal primes are indexed by nonempty sets")
        if not all(1 <= i <= n for i in s):
            raise SlotOutOfRange(f"index set {sorted(s)} is not inside 1..{n}")
    for s, t in itertools.permutations(members, 2):
        if s < t:
            raise NotAntichain(f"{sorted(s)} is contained in {sorted(t)}")
    return IdealDescriptor(n, frozenset(members))


def prime(indices: Iterable[int], n: int) -> IdealDescriptor:
    """The prime ``p_I``; its height is ``|I|``."""
    s = frozenset(indices)
    if not s:
        raise EmptySet("p_I needs a nonempty index set")
    return from_min_primes([s], n)


def maximal_ideal(n: int) -> IdealDescriptor:
    return prime(range(1, n + 1), n)


def smallest_ideal(n: int) -> IdealDescriptor:
    """``F_n``, the intersection of all height-one primes."""
    return from_min_primes([[i] for i in range(1, n + 1)], n)


def _check_same_n(a: IdealDescriptor, b: IdealDescriptor) -> None:
    if a.n != b.n:
        from .errors import DimensionMismatch
        raise DimensionMismatch(f"ideals of I_{a.n} and I_{b.n}")


def ideal_sum(a: IdealDescriptor, b: IdealDescriptor) -> IdealDescriptor:
    _check_same_n(a, b)
    return IdealDescriptor(a.n, _minimal(i | j for i in a.antichain for j in b.antichain))


def ideal_intersect(a: IdealDescriptor, b: IdealDescriptor) -> IdealDescriptor:
    _check_same_n(a, b)
    return IdealDescriptor(a.n, _minimal(a.antichain | b.antichain))


# Products of ideals coincide with intersections in this algebra.
ideal_product = ideal_intersect


def contains(a: IdealDescriptor, b: IdealDescriptor) -> bool:
    """True iff ``b`` is a subset of ``a``."""
    return ideal_intersect(a, b) == b


def equals(a: IdealDescriptor, b: IdealDescriptor) -> bool:
    _check_same_n(a, b)
    return a.antichain == b.antichain


def min_primes(a: IdealDescriptor) -> list[IdealDescriptor]:
    if not a.is_proper:
        raise NotProper(f"{a} has no minimal primes in the proper sense")
    return [prime(s, a.n) for s in a.sorted_min()]


def is_prime(a: IdealDescriptor) -> bool:
    """Zero is prime (the algebra is prime); the whole algebra is not."""
    return len(a.antichain) == 1


def height(p: IdealDescriptor) -> int:
    if not is_prime(p):
        raise NotProper(f"{p} is not prime")
    (s,) = p.antichain
    return len(s)


def parse_ideal(text: str, n: int) -> IdealDescriptor:
    """Parse ``"0"``, ``"1"`` or ``"min{ {1}, {2,3} }"``."""
    stripped = text.strip()
    if stripped == "0":
        return zero(n)
    if stripped == "1":
        return whole(n)
    m = re.fullmatch(r"min\s*\{(.*)\}", stripped, re.S)
    if not m:
        raise ParseError("expected '0', '1' or 'min{ {..}, .. }'", 0)
    inner = m.group(1)
    groups = re.findall(r"\{([^{}]*)\}", inner)
    leftover = re.sub(r"\{[^{}]*\}", "", inner).replace(",", "").strip()
    if leftover or not groups:
        raise ParseError("malformed antichain", m.start(1))
    sets = []
    for g in groups:
        items = [x.strip() for x in g.split(",") if x.strip()]
        try:
            sets.append([int(x) for x in items])
        except ValueError as exc:
            raise ParseError(f"bad index in {{{g}}}", m.start(1)) from exc
    return from_min_primes(sets, n)


# --- function antichains: the I_C presentation -----------------------------

def _ideal_of_function(f: tuple[int, ...]) -> IdealDescriptor:
    """``I_f = I_{f(1)} (x) ... (x) I_{f(n)}`` with ``I_0 = F`` and ``I_1`` the whole factor."""
    n = len(f)
    zeros = [i + 1 for i, v in enumerate(f) if v == 0]
    if not zeros:
        return whole(n)
    return from_min_primes([[i] for i in zeros], n)


def from_function_antichain(functions: Iterable[Iterable[int]], n: int) -> IdealDescriptor:
    """``I_C``: the sum of the ideals ``I_f`` over an antichain ``C`` of 0/1-functions."""
    fs = {tuple(int(v) for v in f) for f in functions}
    for f in fs:
        if len(f) != n or any(v not in (0, 1) for v in f):
            raise NotAntichain(f"{f} is not a 0/1-function on 1..{n}")
    for f, g in itertools.combinations(fs, 2):
        if all(x <= y for x, y in zip(f, g)) or all(x >= y for x, y in zip(f, g)):
            raise NotAntichain(f"{f} and {g} are comparable")
    result = zero(n)
    for f in sorted(fs):
        result = ideal_sum(result, _ideal_of_function(f))
    return result


def to_function_antichain(a: IdealDescriptor) -> frozenset:
    """Inverse of :func:`from_function_antichain`.

    ``I_C`` contains the monomials whose Matrix-slot set meets every minimal
    prime; the maximal zero sets of the generating functions are exactly the
    complements of the minimal transversals of ``Min(a)``.
    """
    n = a.n
    if a.is_zero:
        return frozenset()
    candidates = []
    for bits in itertools.product((0, 1), repeat=n):
        zeros = frozenset(i + 1 for i, v in enumerate(bits) if v == 0)
        if all(zeros & s for s in a.antichain):
            candidates.append(bits)
    # keep functions with minimal zero set, i.e. maximal functions
    return frozenset(f for f in candidates
                     if not any(g != f and all(x >= y for x, y in zip(g, f)) for g in candidates))


# --- enumeration -------------------------------------------------------------

def _subset_order(n: int) -> list[int]:
    masks = list(range(1 << n))
    masks.sort(key=lambda m: (bin(m).count("1"), [i for i in range(n) if m >> i & 1]))
    return masks


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def iter_antichains(n: int) -> Iterator[tuple[int, ...]]:
    """All antichains of subsets of {1..n} as tuples of bitmasks, depth-first."""
    order = _subset_order(n)
    total = len(order)

    def rec(pos: int, chosen: list[int]) -> Iterator[tuple[int, ...]]:
        if pos == total:
            yield tuple(chosen)
            return
        yield from rec(pos + 1, chosen)
        m = order[pos]
        # subsets come in nondecreasing size, so only m ⊇ c can occur
        if all(c & m != c for c in chosen):
            chosen.append(m)
            yield from rec(pos + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def enumerate_ideals(n: int) -> list[IdealDescriptor]:
    """Every ideal of I_n exactly once, from 0 up to 1; their number is the Dedekind number."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ENUMERATE_N:
        raise TooLarge(f"enumeration is limited to n <= {MAX_ENUMERATE_N}")
    found = [IdealDescriptor(n, frozenset(_mask_to_set(m) for m in chain))
             for chain in iter_antichains(n)]
    found.reverse()
    return found


def enumerate_primes(n: int) -> list[IdealDescriptor]:
    return [zero(n)] + [prime(s, n) for r in range(1, n + 1)
                        for s in itertools.combinations(range(1, n + 1), r)]


# --- stabilizers in the automorphism group -------------------------------------

def permute_ideal(perm: tuple[int, ...], a: IdealDescriptor) -> IdealDescriptor:
    """Image of ``a`` under the slot permutation ``perm`` (0-based one-line notation)."""
    return IdealDescriptor(a.n, frozenset(frozenset(perm[i - 1] + 1 for i in s) for s in a.antichain))


@dataclass(frozen=True)
class StabilizerReport:
    permutations: tuple[tuple[int, ...], ...]  # 1-based one-line notation
    order: int
    index: int
    generic_structure: tuple | None  # (m, ((h_1, n_1), ...))

    def table(self) -> str:
        lines = [f"order: {self.order}", f"index: {self.index}"]
        if self.generic_structure is None:
            lines.append("generic: no")
        else:
            m, parts = self.generic_structure
            lines.append(f"generic: m={m} blocks=" + ",".join(f"({h},{k})" for h, k in parts))
        lines.append("permutations:")
        lines.extend("  " + " ".join(map(str, p)) for p in self.permutations)
        return "\n".join(lines)


def stabilizer(a: IdealDescriptor) -> StabilizerReport:
    """Brute-force scan of S_n for permutations fixing ``Min(a)`` setwise."""
    if not a.is_proper:
        raise NotProper(f"stabilizer is reported for proper nonzero ideals, got {a}")
    n = a.n
    perms = tuple(tuple(i + 1 for i in p) for p in itertools.permutations(range(n))
                  if permute_ideal(p, a) == a)
    order = len(perms)
    return StabilizerReport(perms, order, math.factorial(n) // order,
                            generic_structure(a) if is_generic(a) else None)


def orbit(a: IdealDescriptor) -> set[IdealDescriptor]:
    return {permute_ideal(p, a) for p in itertools.permutations(range(a.n))}


def is_generic(a: IdealDescriptor) -> bool:
    """Minimal primes have pairwise disjoint supports."""
    if not a.is_proper:
        raise NotProper(f"genericity is defined for proper nonzero ideals, got {a}")
    return all(not (s & t) for s, t in itertools.combinations(a.antichain, 2))


def generic_structure(a: IdealDescriptor) -> tuple[int, tuple[tuple[int, int], ...]]:
    """``(m, ((h_i, n_i), ...))``: ``n_i`` minimal primes of height ``h_i``, ``m`` uncovered slots."""
    if not is_generic(a):
        raise NotProper(f"{a} is not generic")
    heights = Counter(len(s) for s in a.antichain)
    parts = tuple(sorted(heights.items()))
    m = a.n - sum(h * k for h, k in parts)
    return m, parts


def generic_stabilizer_order(m: int, parts) -> int:
    """Order of ``S_m x prod(S_h wr S_k)``."""
    order = math.factorial(m)
    for h, k in parts:
        order *= math.factorial(h) ** k * math.factorial(k)
    return order


def invariant_ideals(n: int) -> list[IdealDescriptor]:
    """Zero, the whole algebra, and ``b_s`` (product of all ``p_I`` with ``|I| = s``)."""
    result = [zero(n)]
    for s in range(1, n + 1):
        b = whole(n)
        for subset in itertools.combinations(range(1, n + 1), s):
            b = ideal_product(b, prime(subset, n))
        if stabilizer(b).index != 1:
            raise AssertionError(f"b_{s} is not invariant")
        result.append(b)
    result.append(whole(n))
    return result
