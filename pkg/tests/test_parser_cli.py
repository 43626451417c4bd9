import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from intdiff.algebra import D, H, I, X, e, one, zero
from intdiff.automorphism import CanonicalAutomorphism, InnerUnit, random_automorphism
from intdiff.cli import main
from intdiff.documents import automorphism_from_doc, automorphism_to_doc, images_to_doc
from intdiff.errors import IndexOutOfRange, ParseError
from intdiff.parser import BinOp, parse, parse_element
from intdiff.sampling import random_element


def test_parse_tree():
    tree = parse("D1*I1", 1)
    assert isinstance(tree, BinOp) and tree.op == "*"


def test_evaluate_examples():
    assert parse_element("I1*D1 + e1[0,0]", 1) == one(1)
    assert parse_element("X1", 1) == X()
    assert parse_element("H1*(1 - I1*D1)", 1) == e(0, 0)
    assert parse_element("0", 2) == zero(2)


def test_precedence_and_associativity():
    assert parse_element("2 + 3 * D1^2", 1) == 2 + 3 * D() ** 2
    assert parse_element("-D1^2", 1) == -(D() ** 2)
    assert parse_element("D1 - I1 - H1", 1) == D() - I() - H()
    assert parse_element("(D1 + I1)^2", 1) == (D() + I()) * (D() + I())
    assert parse_element("D1^2^2", 1) == D() ** 4
    assert parse_element("I1 * D1", 1) != parse_element("D1 * I1", 1)
    assert parse_element("1/2 * e1[1,0]", 1) == Fraction(1, 2) * e(1, 0)


def test_unicode_aliases():
    assert parse_element("∂1 * ∫1", 1) == one(1)
    assert parse_element("H^2 I⊗e[0,1]", 2) == parse_element("H1^2 * I1 * e2[0,1]", 2)
    assert parse_element("D@1", 2) == D(1, 2)


@pytest.mark.parametrize("text,offset", [
    ("D1^(-1)", 4), ("D1 I1", 3), ("D1 +", 4), ("2/0", 2), ("D1^x", 3), ("(D1", 3), ("", 0),
])
def test_syntax_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse_element(text, 2)
    assert info.value.offset == offset
    assert isinstance(info.value, SyntaxError)


def test_byte_offsets_count_utf8():
    with pytest.raises(ParseError) as info:
        parse_element("∂1 $", 1)
    assert info.value.offset == len("∂1 ".encode())


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        parse_element("D3", 2)
    with pytest.raises(IndexOutOfRange):
        parse_element("e0[1,1]", 1)
    with pytest.raises(IndexOutOfRange):
        parse_element("D⊗I", 3)


def test_print_parse_fixpoint():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.choice([1, 2, 3])
        a = random_element(rng, n, terms=4)
        assert parse_element(str(a), n) == a


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_cli_index(capsys):
    assert run(capsys, "index", "D1^3")[:2] == (0, "3")
    code, _, err = run(capsys, "index", "e1[0,0]")
    assert code == 1 and "NotFredholm" in err


def test_cli_algebra_commands(capsys):
    assert run(capsys, "normalize", "I1*D1 + e1[0,0]")[:2] == (0, "1 * 1")
    assert run(capsys, "normalize", "-n", "2", "D1*I2")[:2] == (0, "1 * D⊗I")
    assert run(capsys, "mul", "D1", "I1", "H1")[:2] == (0, "1 * H")
    assert run(capsys, "star", "H1*I1")[:2] == (0, str(D() + H() * D()))
    assert run(capsys, "apply", "X1", "x1^[2]")[:2] == (0, "3 * x1^[3]")
    assert run(capsys, "apply", "-n", "2", "D2", "x1^[1] x2^[4]")[:2] == (0, "1 * x1^[1] x2^[3]")


def test_cli_usage_errors(capsys):
    assert run(capsys, "normalize", "D1^(-1)")[0] == 2
    assert run(capsys, "normalize", "-n", "0", "1")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2
    assert run(capsys, "recognize", "--images", "/nonexistent.json")[0] == 2


def test_cli_ideals(capsys):
    assert run(capsys, "ideals", "enumerate", "-n", "2", "--count-only")[:2] == (0, "6")
    code, out, _ = run(capsys, "ideals", "enumerate", "-n", "1")
    assert out.splitlines() == ["0", "min{ {1} }", "1"]
    code, out, _ = run(capsys, "ideals", "stabilizer", "-n", "3", "min{ {1} }")
    assert code == 0 and "index: 3" in out
    code, out, _ = run(capsys, "ideals", "invariant", "-n", "2")
    assert out.splitlines() == ["0", "min{ {1}, {2} }", "min{ {1,2} }", "1"]
    assert run(capsys, "ideals", "stabilizer", "-n", "2", "0")[0] == 1


def test_cli_automorphism_documents(capsys, tmp_path):
    rng = random.Random(2)
    sigma = random_automorphism(rng, 2, factors=2)
    images = tmp_path / "images.json"
    images.write_text(json.dumps(images_to_doc(sigma.images())), encoding="utf-8")
    code, out, _ = run(capsys, "recognize", "--images", str(images))
    assert code == 0
    assert automorphism_from_doc(json.loads(out)) == sigma

    aut = tmp_path / "aut.json"
    aut.write_text(out, encoding="utf-8")
    code, out, _ = run(capsys, "invert-aut", "--aut", str(aut))
    inverse = tmp_path / "inv.json"
    inverse.write_text(out, encoding="utf-8")
    code, out, _ = run(capsys, "compose-aut", str(aut), str(inverse))
    assert code == 0
    assert automorphism_from_doc(json.loads(out)) == CanonicalAutomorphism.identity(2)


def test_cli_recognize_rejects_non_automorphism(capsys, tmp_path):
    doc = {"n": 1, "d": ["I1"], "i": ["D1"], "h": ["H1"]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, _, err = run(capsys, "recognize", "--images", str(path))
    assert code == 1 and "BadResidue" in err


def test_documents_round_trip():
    sigma = CanonicalAutomorphism.make(perm=(1, 0), lam=[Fraction(-2, 3), 5],
                                       unit=InnerUnit.from_finite(1 + e(0, 1, 1, 2) * e(2, 0, 2, 2)))
    doc = automorphism_to_doc(sigma)
    assert doc["perm"] == [2, 1] and doc["lambda"] == ["-2/3", "5"]
    assert automorphism_from_doc(json.loads(json.dumps(doc))) == sigma
    del doc["phiInv"]
    assert automorphism_from_doc(doc) == sigma


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "intdiff", "normalize", "-n", "2", "(D1 + I2 + e1[1,0])^3"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and first.strip()
    assert parse_element(first.strip(), 2) == (D(1, 2) + I(2, 2) + e(1, 0, 1, 2)) ** 3
    assert H  # generators imported for the examples above
