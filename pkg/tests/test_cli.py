import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from equigenus.catalog import (
    DATA_DIR,
    ManifoldFileError,
    catalog,
    catalog_cpn,
    load_manifold,
    parse_manifold_file,
    serialize_manifold,
)
from equigenus.cli import InputError, parse_character, run_command
from equigenus.exact import LaurentPoly
from equigenus.genus import a_hat_genus

CP2_TEXT = json.dumps({
    "name": "cp2",
    "dimension": 4,
    "fixed_points": [{"weights": [1, 2]}, {"weights": [-1, 1]}, {"weights": [-2, -1]}],
    "pontryagin_numbers": {"[1]": "3"},
})


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def edit(**changes):
    obj = json.loads(CP2_TEXT)
    obj.update(changes)
    return json.dumps(obj)


class TestFileFormat:
    def test_parse_cp2(self):
        M = parse_manifold_file(CP2_TEXT)
        assert M.dim == 4 and len(M.fixed_points) == 3
        assert a_hat_genus(M.pontryagin) == Fraction(-1, 8)

    @pytest.mark.parametrize("text, field, message", [
        (edit(fixed_points=[{"weights": [0, 1]}]), "fixed_points[0].weights", "zero weight"),
        (edit(fixed_points=[{"weights": [1]}]), "fixed_points[0].weights", "weight-list length"),
        (edit(pontryagin_numbers={"[1]": "0.5"}), "pontryagin_numbers[[1]]", "malformed rational"),
        (edit(pontryagin_numbers={"[1]": 3}), "pontryagin_numbers[[1]]", "malformed rational"),
        (edit(pontryagin_numbers={"[1,2]": "1"}), "pontryagin_numbers[[1,2]]", "non-increasing"),
        (edit(pontryagin_numbers={"[2]": "1"}), "pontryagin_numbers[[2]]", "4*weight"),
        (edit(dimension=3), "dimension", "even"),
        (edit(name=""), "name", "non-empty"),
        (edit(extra=1), "extra", "unknown field"),
        (edit(fixed_points=[]), "fixed_points", "non-empty"),
        (edit(fixed_points=[{"weights": [1, 2], "sign": 2}]), "fixed_points[0].sign", "1 or -1"),
        ("{not json", "<root>", "invalid JSON"),
        ("[]", "<root>", "object"),
    ])
    def test_errors_name_the_field(self, text, field, message):
        with pytest.raises(ManifoldFileError, match=message) as exc:
            parse_manifold_file(text)
        assert exc.value.field == field

    @pytest.mark.parametrize("name", sorted(catalog()))
    def test_round_trip(self, name):
        M = catalog()[name]
        text = serialize_manifold(M)
        again = parse_manifold_file(text)
        assert again == M
        assert serialize_manifold(again) == text

    @pytest.mark.parametrize("name", sorted(catalog()))
    def test_shipped_files_are_canonical(self, name):
        text = (DATA_DIR / f"{name}.json").read_text(encoding="utf-8")
        assert text == serialize_manifold(catalog()[name])
        assert parse_manifold_file(serialize_manifold(parse_manifold_file(text))) == parse_manifold_file(text)

    def test_key_order_independent(self):
        obj = json.loads(CP2_TEXT)
        shuffled = json.dumps(dict(reversed(list(obj.items()))))
        assert serialize_manifold(parse_manifold_file(shuffled)) == serialize_manifold(parse_manifold_file(CP2_TEXT))

    def test_load_by_name_and_path(self, tmp_path):
        p = tmp_path / "mine.json"
        p.write_text(CP2_TEXT)
        assert load_manifold(p).name == "cp2"
        assert load_manifold("cp2_12.json").name == "cp2_12"
        assert load_manifold("cp3").dim == 6
        with pytest.raises(FileNotFoundError):
            load_manifold("nope.json")


class TestCatalogCPn:
    def test_s2(self):
        assert [fp.weights for fp in catalog_cpn((0, 1)).fixed_points] == [(1,), (-1,)]

    def test_cp2(self):
        assert [fp.weights for fp in catalog_cpn((0, 1, 2)).fixed_points] == [(1, 2), (-1, 1), (-2, -1)]

    def test_repeated(self):
        with pytest.raises(ValueError, match="repeated"):
            catalog_cpn((0, 1, 1))

    def test_pontryagin(self):
        assert catalog_cpn((0, 1, 2)).pontryagin.numbers == {(1,): 3}
        assert catalog_cpn((0, 1, 2, 3)).pontryagin.numbers == {}


class TestCharacterParsing:
    def test_terms(self):
        t = LaurentPoly.character
        assert parse_character("2 + 3*t^2 + 3*t^-2") == 2 + 3 * t(2) + 3 * t(-2)
        assert parse_character("t + t^-1 - 1/2") == t(1) + t(-1) - Fraction(1, 2)
        assert parse_character("-t^3") == -t(3)

    @pytest.mark.parametrize("bad", ["", "t^", "2**t", "x", "3 t t"])
    def test_bad(self, bad):
        with pytest.raises(InputError):
            parse_character(bad)


class TestCommands:
    def test_rigidity_cp2(self):
        code, out, _ = run("rigidity", "--manifold", "cp2_12.json", "--q-order", "1")
        assert code == 1
        assert out == "rigid_through 0; witness q^1: value 45 at lambda=2, 640/9 at lambda=3\n"

    def test_rigidity_cp3(self):
        code, out, _ = run("rigidity", "--manifold", "cp3", "--q-order", "2")
        assert code == 0 and out == "rigid_through 2; constants [0, 0, 0]\n"

    def test_r_series(self):
        code, out, _ = run("r-series", "--order", "2")
        assert code == 0
        assert out == "R0 = 1; R1 = 2*T; R2 = 2*Sym2(T) + 2*L2(T) + 2*T\n"

    def test_balanced_s2(self):
        code, out, _ = run("balanced", "--manifold", "s2.json")
        assert code == 0 and out == "balanced: true, parities [1,1], primitive: true\n"

    def test_balanced_cp2(self):
        code, out, _ = run("balanced", "--manifold", "cp2_12")
        assert code == 1 and "parities [1,0,1]" in out

    def test_balanced_nonprimitive(self):
        code, out, _ = run("balanced", "--manifold", "cp2_24")
        assert code == 0 and out == "balanced: true, parities [0,0,0], primitive: false (weight gcd 2)\n"

    def test_compute(self):
        assert run("compute", "--manifold", "cp2_12", "--genus", "a-hat")[1] == "A-hat(cp2_12) = -1/8\n"
        assert run("compute", "--manifold", "cp2_12", "--genus", "l")[1] == "L(cp2_12) = 1\n"
        code, out, _ = run("compute", "--manifold", "cp2_12", "--genus", "elliptic", "--q-order", "2", "--json")
        assert code == 0 and json.loads(out)["coefficients"] == ["1", "32", "256"]

    def test_lemma2(self):
        code, out, _ = run("lemma2", "--char-a", "2 + 3*t^2 + 3*t^-2", "--char-b", "3*t + 3*t^-1 + t^3 + t^-3")
        assert code == 0
        assert out == "symmetric: true, divisible: true, quotient: 1 - t^-3, parity_difference: 0\n"
        code, out, _ = run("lemma2", "--char-a", "t + t^-1", "--char-b", "t^3 + t^-3")
        assert code == 1 and "divisible: false" in out

    def test_lemma2_bad_character(self):
        code, _, err = run("lemma2", "--char-a", "t", "--char-b", "1")
        assert code == 2 and "t -> 1/t" in err

    def test_equivariant(self):
        code, out, _ = run("equivariant", "--manifold", "cp2_12", "--bundle", "R1", "--at", "3")
        assert code == 0 and out.endswith("at lambda=3: 640/9\n")
        code, out, _ = run("equivariant", "--manifold", "cp2_12", "--bundle", "trivial", "--json")
        assert json.loads(out)["function"] == "1"

    def test_equivariant_pole(self):
        code, _, err = run("equivariant", "--manifold", "cp2_12", "--bundle", "R1", "--at", "0")
        assert code == 2

    def test_usage_errors(self):
        assert run("rigidity", "--manifold", "s2", "--bogus")[0] == 2
        assert run("frobnicate")[0] == 2
        assert run("compute", "--manifold", "s2", "--genus", "witten")[0] == 2
        assert run("r-series", "--order", "-1")[0] == 2

    def test_input_errors(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(edit(fixed_points=[{"weights": [0, 1]}]))
        code, _, err = run("balanced", "--manifold", str(p))
        assert code == 2 and "zero weight" in err
        assert run("balanced", "--manifold", "missing.json")[0] == 2

    def test_deterministic(self):
        argv = ["rigidity", "--manifold", "cp4", "--q-order", "2", "--json"]
        assert run(*argv) == run(*argv)

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "equigenus", "r-series", "--order", "1"],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0 and proc.stdout == "R0 = 1; R1 = 2*T\n"
