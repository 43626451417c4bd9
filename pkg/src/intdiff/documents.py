"""JSON documents for automorphisms and generator images.

Automorphism: ``{"n": 2, "perm": [2, 1], "lambda": ["1", "-1/2"], "phi": "...", "phiInv": "..."}``
with a 1-based permutation in one-line notation.  Images:
``{"n": 1, "d": ["..."], "i": ["..."], "h": ["..."]}``.  Elements are in the
text syntax of :mod:`intdiff.parser`.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import format_scalar, one
from .automorphism import CanonicalAutomorphism, GeneratorImages, InnerUnit
from .errors import BadParameter
from .parser import parse_element


def _field(doc: dict, key: str):
    if key not in doc:
        raise BadParameter(f"document is missing {key!r}")
    return doc[key]


def _dimension(doc: dict) -> int:
    n = _field(doc, "n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise BadParameter("'n' must be a positive integer")
    return n


def _element_list(doc: dict, key: str, n: int):
    items = _field(doc, key)
    if not isinstance(items, list) or len(items) != n:
        raise BadParameter(f"{key!r} must be a list of {n} element strings")
    return tuple(parse_element(str(s), n) for s in items)


def automorphism_to_doc(sigma: CanonicalAutomorphism) -> dict:
    return {
        "n": sigma.n,
        "perm": [i + 1 for i in sigma.perm],
        "lambda": [format_scalar(x) for x in sigma.lam],
        "phi": str(sigma.phi),
        "phiInv": str(sigma.phi_inv),
    }


def automorphism_from_doc(doc: dict) -> CanonicalAutomorphism:
    n = _dimension(doc)
    perm = _field(doc, "perm")
    if not isinstance(perm, list) or sorted(perm) != list(range(1, n + 1)):
        raise BadParameter(f"'perm' must list 1..{n} in some order")
    try:
        lam = [Fraction(str(x)) for x in _field(doc, "lambda")]
    except (ValueError, ZeroDivisionError) as exc:
        raise BadParameter(f"bad 'lambda' entry: {exc}") from exc
    phi = parse_element(str(doc.get("phi", "1")), n)
    if "phiInv" in doc:
        phi_inv = parse_element(str(doc["phiInv"]), n)
        unit = InnerUnit(phi, phi_inv)
    elif phi == one(n):
        unit = InnerUnit.identity(n)
    else:
        unit = InnerUnit.from_finite(phi)
    return CanonicalAutomorphism(tuple(i - 1 for i in perm), tuple(lam), unit)


def images_to_doc(images: GeneratorImages) -> dict:
    return {"n": images.n, "d": [str(x) for x in images.d],
            "i": [str(x) for x in images.i], "h": [str(x) for x in images.h]}


def images_from_doc(doc: dict) -> GeneratorImages:
    n = _dimension(doc)
    return GeneratorImages(_element_list(doc, "d", n), _element_list(doc, "i", n), _element_list(doc, "h", n))


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise BadParameter(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise BadParameter(f"{path}: expected a JSON object")
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2)
