"""The skew Laurent quotient B_n = I_n / a_n and its automorphisms.

B_n is ``K[H_1..H_n][z_1^±1..z_n^±1]`` with ``z_i H_j = (H_j - delta_ij) z_i``;
``z_i`` is the image of ``I_i`` and ``z_i^-1`` the image of ``D_i``.  Elements are
kept as ``sum c_beta(H) z^beta`` with every H-polynomial on the left.

Polynomials in H and Laurent polynomials in z are both plain dicts mapping an
exponent tuple to a Fraction.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from . import _linalg
from .algebra import BAND, AlgebraElement, format_scalar
from .errors import BadParameter, DimensionMismatch, NotFredholm, NotLnPrime, ZeroAlpha, ZeroElement

Poly = dict  # exponent tuple -> Fraction


def _clean(d: Mapping) -> dict:
    return {k: Fraction(v) for k, v in d.items() if v}


def poly_add(p: Poly, q: Poly, scale=1) -> Poly:
    out = dict(p)
    for k, v in q.items():
        w = out.get(k, 0) + scale * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    acc: dict = defaultdict(Fraction)
    for a, c in p.items():
        for b, d in q.items():
            acc[tuple(x + y for x, y in zip(a, b))] += c * d
    return _clean(acc)


def poly_shift(p: Poly, beta: Sequence[int]) -> Poly:
    """Substitute ``H_j -> H_j - beta_j``."""
    if not any(beta):
        return dict(p)
    acc: dict = defaultdict(Fraction)
    for exps, c in p.items():
        partial = [((), c)]
        for e, b in zip(exps, beta):
            partial = [(m + (k,), v * comb(e, k) * (-b) ** (e - k))
                       for m, v in partial for k in range(e + 1)]
        for m, v in partial:
            acc[m] += v
    return _clean(acc)


class BElement:
    """``sum_beta c_beta(H) z^beta`` in B_n.  Immutable."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Poly] | None = None):
        self.n = n
        clean = {}
        for beta, poly in (terms or {}).items():
            poly = _clean(poly)
            if poly:
                clean[tuple(beta)] = poly
        self.terms: dict[tuple[int, ...], Poly] = clean

    @classmethod
    def scalar(cls, c, n: int) -> BElement:
        return cls(n, {(0,) * n: {(0,) * n: c}})

    @classmethod
    def z(cls, i: int, n: int, power: int = 1, coeff=1) -> BElement:
        beta = [0] * n
        beta[i - 1] = power
        return cls(n, {tuple(beta): {(0,) * n: coeff}})

    @classmethod
    def h(cls, i: int, n: int) -> BElement:
        exps = [0] * n
        exps[i - 1] = 1
        return cls(n, {(0,) * n: {tuple(exps): 1}})

    @classmethod
    def laurent(cls, p: Poly, n: int) -> BElement:
        return cls(n, {beta: {(0,) * n: c} for beta, c in p.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, BElement):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == BElement.scalar(other, self.n)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, frozenset((b, frozenset(p.items())) for b, p in self.terms.items())))

    def _coerce(self, other) -> BElement:
        if isinstance(other, (int, Fraction)):
            return BElement.scalar(other, self.n)
        if other.n != self.n:
            raise DimensionMismatch(f"B_{self.n} vs B_{other.n}")
        return other

    def __add__(self, other) -> BElement:
        other = self._coerce(other)
        out = dict(self.terms)
        for beta, p in other.terms.items():
            q = poly_add(out.get(beta, {}), p)
            if q:
                out[beta] = q
            else:
                out.pop(beta, None)
        return BElement(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> BElement:
        return BElement(self.n, {b: {k: -v for k, v in p.items()} for b, p in self.terms.items()})

    def __sub__(self, other) -> BElement:
        return self + (-self._coerce(other))

    def __mul__(self, other) -> BElement:
        if isinstance(other, (int, Fraction)):
            return BElement(self.n, {b: {k: other * v for k, v in p.items()} for b, p in self.terms.items()})
        return b_multiply(self, other)

    def __rmul__(self, other) -> BElement:
        return self * other

    def __pow__(self, k: int) -> BElement:
        result = BElement.scalar(1, self.n)
        for _ in range(k):
            result = result * self
        return result

    def is_laurent(self) -> bool:
        """True iff the element lies in ``K[z^±1]`` (no H)."""
        zero = (0,) * self.n
        return all(set(p) == {zero} for p in self.terms.values())

    def as_laurent(self) -> Poly:
        zero = (0,) * self.n
        return {b: p[zero] for b, p in self.terms.items()}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for beta, p in sorted(self.terms.items()):
            z = " ".join(f"z{i + 1}^{b}" for i, b in enumerate(beta) if b)
            out.append(f"({format_hpoly(p)})" + (f" * {z}" if z else ""))
        return " + ".join(out)

    __repr__ = __str__


def format_hpoly(p: Poly) -> str:
    terms = []
    for exps, c in sorted(p.items()):
        mono = "*".join(f"H{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
        if not mono:
            terms.append(format_scalar(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{format_scalar(c)}*{mono}")
    return " + ".join(terms)


def b_multiply(u: BElement, v: BElement) -> BElement:
    """``c(H) z^b * d(H) z^g = c(H) d(H - b) z^(b+g)``."""
    if u.n != v.n:
        raise DimensionMismatch(f"B_{u.n} vs B_{v.n}")
    acc: dict = {}
    for b, c in u.terms.items():
        for g, d in v.terms.items():
            key = tuple(x + y for x, y in zip(b, g))
            acc[key] = poly_add(acc.get(key, {}), poly_mul(c, poly_shift(d, b)))
    return BElement(u.n, acc)


def quotient_image(a: AlgebraElement) -> BElement:
    """Image in B_n: Matrix monomials die, ``H^b v_a`` in slot i becomes ``H_i^b z_i^a``."""
    acc: dict = defaultdict(lambda: defaultdict(Fraction))
    for m, c in a.terms.items():
        if any(f[0] != BAND for f in m):
            continue
        acc[tuple(f[2] for f in m)][tuple(f[1] for f in m)] += c
    return BElement(a.n, acc)


def top_degree(u: BElement) -> int:
    if u.n != 1:
        raise DimensionMismatch("top_degree is defined for n = 1")
    if u.is_zero():
        raise ZeroElement("the zero element has no degree")
    return max(b[0] for b in u.terms)


def fredholm_index(a: AlgebraElement) -> int:
    """``dim ker - dim coker`` of ``a`` acting on K[x], equal to ``-deg_z`` of its image."""
    if a.n != 1:
        raise DimensionMismatch("the index is computed for n = 1")
    image = quotient_image(a)
    if image.is_zero():
        raise NotFredholm("elements of F are not Fredholm")
    return -top_degree(image)


# --- L_n' ---------------------------------------------------------------------------

def ln_prime_check(p: Sequence[Poly]) -> bool:
    """``z_i dp_j/dz_i == z_j dp_i/dz_j`` for all ``i != j``."""
    n = len(p)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = _clean({a: a[i] * c for a, c in p[j].items()})
            rhs = _clean({a: a[j] * c for a, c in p[i].items()})
            if lhs != rhs:
                return False
    return True


def ln_prime_basis_vector(alpha: Sequence[int]) -> tuple[Poly, ...]:
    """The basis vector ``b_alpha`` of ``L_n'`` for ``alpha != 0``."""
    alpha = tuple(alpha)
    support = [i for i, a in enumerate(alpha) if a]
    if not support:
        raise ZeroAlpha("b_alpha needs alpha != 0")
    lead = alpha[support[0]]
    return tuple({alpha: Fraction(alpha[i], lead)} if alpha[i] else {} for i in range(len(alpha)))


# --- automorphisms of B_n ---------------------------------------------------------------

def _int_matrix_inverse(a) -> tuple[tuple[int, ...], ...]:
    inv = _linalg.inverse(a)
    if inv is None or any(x.denominator != 1 for row in inv for x in row):
        raise BadParameter("matrix is not in GL_n(Z)")
    return tuple(tuple(int(x) for x in row) for row in inv)


def laurent_monomial_image(g: BAutomorphism, beta: Sequence[int]) -> tuple[Fraction, tuple[int, ...]]:
    """``g(z^beta) = c z^gamma`` for a torus-matrix automorphism part."""
    c = Fraction(1)
    gamma = [0] * g.n
    for i, b in enumerate(beta):
        c *= g.lam[i] ** b
        for j in range(g.n):
            gamma[j] += b * g.matrix[i][j]
    return c, tuple(gamma)


@dataclass(frozen=True)
class BAutomorphism:
    """``a t_lambda s_p``: ``z_i -> lambda_i prod z_j^a_ij``, ``H_i -> sum_j H_j b_ji + a t_lambda(p_i)``."""
    matrix: tuple[tuple[int, ...], ...]
    lam: tuple[Fraction, ...]
    p: tuple[tuple, ...]  # per i: sorted ((exponent tuple, Fraction), ...)

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix) or len(self.lam) != n or len(self.p) != n:
            raise DimensionMismatch("inconsistent BAutomorphism data")
        if abs(_linalg.determinant(self.matrix)) != 1:
            raise BadParameter("matrix must have determinant +-1")
        if any(x == 0 for x in self.lam):
            raise BadParameter("torus entries must be nonzero")
        if not ln_prime_check(self.shift_polys()):
            raise NotLnPrime("shift vector violates the L_n' condition")

    @classmethod
    def make(cls, matrix, lam=None, p=None) -> BAutomorphism:
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        n = len(matrix)
        lam = tuple(Fraction(x) for x in (lam if lam is not None else [1] * n))
        polys = p if p is not None else [{}] * n
        return cls(matrix, lam, tuple(tuple(sorted(_clean(q).items())) for q in polys))

    @classmethod
    def identity(cls, n: int) -> BAutomorphism:
        return cls.make([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def torus(cls, lam) -> BAutomorphism:
        n = len(lam)
        return cls.make([[int(i == j) for j in range(n)] for i in range(n)], lam)

    @classmethod
    def shift(cls, p) -> BAutomorphism:
        n = len(p)
        return cls.make([[int(i == j) for j in range(n)] for i in range(n)], None, p)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def shift_polys(self) -> list[Poly]:
        return [dict(q) for q in self.p]

    def inverse_matrix(self):
        return _int_matrix_inverse(self.matrix)

    def z_image(self, i: int, power: int = 1) -> BElement:
        """``g(z_i^power)`` (1-based ``i``)."""
        beta = [0] * self.n
        beta[i - 1] = power
        c, gamma = laurent_monomial_image(self, beta)
        return BElement(self.n, {gamma: {(0,) * self.n: c}})

    def torus_matrix_laurent(self, q: Poly) -> Poly:
        """``a t_lambda(q)`` for a Laurent polynomial ``q``."""
        acc: dict = defaultdict(Fraction)
        for beta, c in q.items():
            k, gamma = laurent_monomial_image(self, beta)
            acc[gamma] += c * k
        return _clean(acc)

    def h_image(self, i: int) -> BElement:
        b = self.inverse_matrix()
        n = self.n
        out = BElement.laurent(self.torus_matrix_laurent(dict(self.p[i - 1])), n)
        for j in range(n):
            if b[j][i - 1]:
                out = out + BElement.h(j + 1, n) * b[j][i - 1]
        return out

    def images(self) -> tuple[list[BElement], list[BElement]]:
        return ([self.z_image(i) for i in range(1, self.n + 1)],
                [self.h_image(i) for i in range(1, self.n + 1)])


def _apply_images(z_img, h_img, u: BElement) -> BElement:
    n = u.n
    out = BElement(n)
    zinv = [None] * n
    for beta, poly in u.terms.items():
        coef = BElement(n)
        for exps, c in poly.items():
            term = BElement.scalar(c, n)
            for i, e in enumerate(exps):
                if e:
                    term = term * h_img[i] ** e
            coef = coef + term
        zpart = BElement.scalar(1, n)
        for i, b in enumerate(beta):
            if b > 0:
                zpart = zpart * z_img[i] ** b
            elif b < 0:
                if zinv[i] is None:
                    ((gamma, p),) = z_img[i].terms.items()
                    zinv[i] = BElement(n, {tuple(-x for x in gamma): {(0,) * n: 1 / p[(0,) * n]}})
                zpart = zpart * zinv[i] ** (-b)
        out = out + coef * zpart
    return out


def b_aut_apply(g: BAutomorphism, u: BElement) -> BElement:
    if g.n != u.n:
        raise DimensionMismatch(f"automorphism of B_{g.n} applied to B_{u.n}")
    z_img, h_img = g.images()
    return _apply_images(z_img, h_img, u)


def b_aut_from_images(z_img: Sequence[BElement], h_img: Sequence[BElement]) -> BAutomorphism:
    """Recover the canonical triple from the images of the ``z_i`` and ``H_i``."""
    n = len(z_img)
    zero = (0,) * n
    matrix, lam = [], []
    for u in z_img:
        if len(u.terms) != 1:
            raise BadParameter(f"{u} is not a unit of B_n")
        ((gamma, p),) = u.terms.items()
        if set(p) != {zero}:
            raise BadParameter(f"{u} is not a unit of B_n")
        matrix.append(gamma)
        lam.append(p[zero])
    partial = BAutomorphism.make(matrix, lam)
    b = partial.inverse_matrix()
    # q_i = g(H_i) - sum_j H_j b_ji must be Laurent; p_i = (a t_lambda)^-1 (q_i)
    undo = b_aut_compose(BAutomorphism.torus([1 / x for x in lam]), BAutomorphism.make(b))
    ps = []
    for i in range(n):
        q = h_img[i]
        for j in range(n):
            if b[j][i]:
                q = q - BElement.h(j + 1, n) * b[j][i]
        if not q.is_laurent():
            raise BadParameter(f"H_{i + 1} image is not of the form H-linear + Laurent")
        ps.append(undo.torus_matrix_laurent(q.as_laurent()))
    return BAutomorphism.make(matrix, lam, ps)


def b_aut_compose(g: BAutomorphism, h: BAutomorphism) -> BAutomorphism:
    """The automorphism ``g o h`` (apply ``h`` first)."""
    if g.n != h.n:
        raise DimensionMismatch(f"B_{g.n} vs B_{h.n}")
    if all(not q for q in h.p) and all(not q for q in g.p):
        # torus-matrix parts compose without touching H
        z = [b_aut_apply(g, u) for u in h.images()[0]]
        n = g.n
        matrix, lam = [], []
        for u in z:
            ((gamma, p),) = u.terms.items()
            matrix.append(gamma)
            lam.append(p[(0,) * n])
        return BAutomorphism.make(matrix, lam)
    z_h, h_h = h.images()
    return b_aut_from_images([b_aut_apply(g, u) for u in z_h], [b_aut_apply(g, u) for u in h_h])


def b_aut_inverse(g: BAutomorphism) -> BAutomorphism:
    """``(a t_lambda s_p)^-1 = s_-p t_lambda^-1 a^-1``."""
    neg_p = [{k: -v for k, v in q.items()} for q in g.shift_polys()]
    torus_inv = BAutomorphism.torus([1 / x for x in g.lam])
    a_inv = BAutomorphism.make(g.inverse_matrix())
    return b_aut_compose(BAutomorphism.shift(neg_p), b_aut_compose(torus_inv, a_inv))


def xi_image(sigma) -> BAutomorphism:
    """The automorphism of B_n induced by ``sigma = s t_lambda omega_phi``.

    The inner part acts trivially modulo a_n, so only ``(s, lambda)`` matter:
    ``z_i -> lambda_i z_s(i)``.
    """
    n = len(sigma.perm)
    matrix = [[int(sigma.perm[i] == j) for j in range(n)] for i in range(n)]
    return BAutomorphism.make(matrix, sigma.lam)
