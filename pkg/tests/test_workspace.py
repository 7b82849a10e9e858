"""
Tests for workspace.py

Tests the declarative text form, the JSON document, serialization round
trips, error locations, and the command dispatcher.
"""
import json
import os
import sys

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import DeformationMismatch, DegreeViolation, ParseError, UnknownCommand, ValidationError
from workspace import (
    Command, Workspace, dump_workspace, load_workspace, parse_command, parse_workspace,
    run_command, run_workspace, serialize_workspace, specialize_workspace, workspace_from_dict,
    workspace_to_dict,
)

SAMPLE = """rank 1;
algebra Fm = free(x:1);
algebra K = field();
algebra T = torus((1));
algebra S = sphere(even, (1));
cover ns on S = { 1 - z : 1/2, 1 + z : 1/2 };
morphism f : Fm -> T = { x -> x };
derivation E on T = { x -> x, xs -> -xs };
hderivation V on Fm over K = { x -> x };
note "first pass";
# commands run by run_workspace
normalize T "xs*x*xs";
xi-check Fm K --cap 1;
"""

PLANE = """theta [[0,1],[-1,0]];
algebra P = free(x:(1,0), y:(0,1));
"""


@pytest.fixture
def ws():
    return parse_workspace(SAMPLE)


class TestParseWorkspace:
    """Test the text form parser"""

    def test_objects(self, ws):
        assert ws.summary() == {
            "algebras": 4, "morphisms": 1, "covers": 1, "derivations": 1, "hderivations": 1,
        }
        assert ws.algebra("T").algebra.names == ["x", "xs"]
        assert ws.algebra("S").algebra.names == ["x", "xs", "z"]
        assert ws.algebra("T").name == "T"
        assert ws.notes == ["first pass"]

    def test_commands_are_kept_in_order(self, ws):
        assert ws.commands == [
            Command("normalize", ("T", "xs*x*xs")),
            Command("xi-check", ("Fm", "K", "--cap", "1")),
        ]
        assert ws.commands[1].line == 13

    def test_theta(self):
        ws = parse_workspace(PLANE)
        assert ws.deformation.theta == ((0, 1), (-1, 0))
        assert ws.algebra("P").generators[1].degree == (0, 1)

    def test_validate(self, ws):
        assert ws.validate()
        assert ws.kind_of("ns") == "covers"
        assert ws.kind_of("nothing") is None

    def test_inverse_image_is_derived(self):
        ws = parse_workspace("rank 1;\nalgebra C = circle(1);\nmorphism g : C -> C = { y -> 2*y };")
        c = ws.algebra("C")
        assert ws.morphism("g").image("y_inv") == c.element("1/2*y^-1")

    def test_inverse_image_needs_unit(self):
        with pytest.raises(ValidationError) as exc:
            parse_workspace("rank 1;\nalgebra C = circle(1);\nmorphism g : C -> C = { y -> 0 };")
        assert "not a unit" in str(exc.value)

    def test_localize_and_coproduct_forms(self, ws):
        parse_workspace("algebra U = localize(S, 1 - z, w);\nalgebra TF = coproduct(T, Fm);", ws)
        assert ws.algebra("U").algebra.names[-1] == "w"
        assert ws.algebra("TF").algebra.names == ["x", "xs", "x_2"]

    def test_counted_family(self):
        ws = parse_workspace("rank 1;\nalgebra T = torus(1, (1));")
        assert ws.algebra("T").ngens == 2
        with pytest.raises(ParseError):
            parse_workspace("rank 1;\nalgebra T = torus(2, (1));")

    def test_invertible_generator(self):
        ws = parse_workspace("rank 1;\nalgebra L = free(y:1^-1);")
        assert ws.algebra("L").algebra.names == ["y", "y_inv"]


class TestParseErrors:
    """Test that errors carry the object name and position"""

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_workspace("rank 1;\nalgebra F = free(x:1;\n")
        assert (exc.value.line, exc.value.column) == (2, 21)
        assert exc.value.exit_code == 2

    def test_unknown_algebra(self):
        text = "rank 1;\nalgebra Fm = free(x:1);\nalgebra T = torus((1));\nmorphism f : A -> T = { x -> x };"
        with pytest.raises(ValidationError) as exc:
            parse_workspace(text)
        assert "line 4, column 14" in str(exc.value)

    def test_invalid_morphism_is_located(self):
        text = "rank 1;\nalgebra Fm = free(x:1);\nalgebra T = torus((1));\nmorphism f : Fm -> T = { x -> xs };"
        with pytest.raises(DegreeViolation) as exc:
            parse_workspace(text)
        assert str(exc.value).startswith("f (line 4)")
        assert exc.value.name == "f"

    def test_missing_image(self):
        text = "rank 1;\nalgebra Fm = free(x:1);\nmorphism f : Fm -> Fm = { };"
        with pytest.raises(ValidationError) as exc:
            parse_workspace(text)
        assert "no image for generator 'x'" in str(exc.value)

    def test_unknown_generator_in_assignment(self):
        with pytest.raises(ParseError):
            parse_workspace("rank 1;\nalgebra Fm = free(x:1);\nderivation D on Fm = { z -> x };")

    def test_no_deformation(self):
        with pytest.raises(ValidationError) as exc:
            parse_workspace("algebra F = free(x:1);")
        assert "no deformation declared" in str(exc.value)

    def test_reserved_q(self):
        with pytest.raises(ParseError):
            parse_workspace("rank 1; algebra F = free(q:1);")

    def test_duplicate_name(self):
        with pytest.raises(ValidationError) as exc:
            parse_workspace("rank 1; algebra F = free(x:1); algebra F = field();")
        assert "already" in str(exc.value)

    def test_theta_is_fixed_once_used(self):
        with pytest.raises(DeformationMismatch):
            parse_workspace("rank 1; algebra F = free(x:1); rank 2;")

    def test_unknown_form(self):
        with pytest.raises(ParseError):
            parse_workspace("rank 1; algebra F = banana();")

    def test_bad_character(self):
        with pytest.raises(ParseError):
            parse_workspace("rank 1; algebra F = free(x:1) $")


class TestCommandParsing:
    """Test command statements"""

    def test_dashed_names_and_options(self):
        assert parse_command("xi-check Fm K --cap 1") == Command("xi-check", ("Fm", "K", "--cap", "1"))

    def test_negative_and_tuple_arguments(self):
        assert parse_command("basis T -1").args == ("T", "-1")
        assert parse_command("basis T (1,0)").args == ("T", "(1,0)")

    def test_render(self):
        assert str(Command("normalize", ("T", "xs*x*xs"))) == 'normalize T "xs*x*xs"'
        assert str(Command("te-aut", ("Fm", "K", "--cap", "2"))) == "te-aut Fm K --cap 2"

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_command("check ; check")


class TestDocuments:
    """Test text and JSON round trips"""

    def test_text_round_trip(self, ws):
        text = serialize_workspace(ws)
        assert text.startswith("theta [[0]];\n")
        assert "algebra T = free(x:(1), xs:(-1)) / {" in text
        assert parse_workspace(text) == ws

    def test_json_round_trip(self, ws):
        doc = json.loads(dump_workspace(ws, as_json=True))
        assert doc["version"] == 1
        assert doc["commands"][1] == ["xi-check", "Fm", "K", "--cap", "1"]
        assert workspace_from_dict(doc) == ws

    def test_load_detects_json(self, ws):
        assert load_workspace(dump_workspace(ws, as_json=True)) == ws
        assert load_workspace(dump_workspace(ws)) == ws

    def test_bad_json(self):
        with pytest.raises(ParseError):
            load_workspace("{ bad")

    def test_bad_version(self, ws):
        doc = workspace_to_dict(ws)
        doc["version"] = 7
        with pytest.raises(ValidationError):
            workspace_from_dict(doc)

    def test_empty_workspace(self):
        assert serialize_workspace(Workspace()) == "\n"

    def test_specialize(self):
        flat = specialize_workspace(parse_workspace(PLANE))
        assert flat.deformation.theta == ((0, 0), (0, 0))
        assert flat.algebra("P").name == "P"


class TestRunCommand:
    """Test the command dispatcher"""

    def test_check(self, ws):
        result = run_command(ws, "check")
        assert result.data["counts"]["covers"] == 1
        assert result.lines[0].startswith("workspace ok")

    def test_normalize(self, ws):
        result = run_command(ws, 'normalize T "xs*x*xs"')
        assert result.data["normal_form"] == "xs"
        assert result.cap is None

    def test_normalize_q1(self):
        ws = parse_workspace(PLANE)
        assert run_command(ws, 'normalize P "y*x"').data["normal_form"] == "q*x*y"
        result = run_command(ws, 'normalize P "y*x"', q1=True)
        assert result.data["normal_form"] == "x*y"
        assert result.data["q1"] is True

    def test_groebner(self, ws):
        assert len(run_command(ws, "groebner T").data["basis"]) == 1

    def test_basis_in_degree(self, ws):
        result = run_command(ws, "basis T 1 --cap 3")
        assert result.data["monomials"] == ["x"]
        assert result.cap == 3

    def test_hom_constraints(self, ws):
        result = run_command(ws, ["hom-constraints", "Fm", "T"], cap=3)
        assert len(result.data["unknowns"]) == 1
        assert result.data["constraints"] == []

    def test_cover_check_and_glue(self, ws):
        assert run_command(ws, "cover-check ns").data["size"] == 2
        assert run_command(ws, "glue ns 1 1 --cap 1").data["glued"] == "1"
        with pytest.raises(ValidationError):
            run_command(ws, "glue ns 1")

    def test_compose_stores_result(self, ws):
        parse_workspace("morphism h : T -> T = { x -> 2*x, xs -> 1/2*xs };", ws)
        result = run_command(ws, "compose h h --name h2")
        assert result.data["images"]["x"] == "4*x"
        assert ws.morphism("h2").image("xs") == ws.algebra("T").element("1/4*xs")

    def test_pullback_cover(self, ws):
        parse_workspace("morphism idS : S -> S = { x -> x, xs -> xs, z -> z };", ws)
        run_command(ws, "pullback-cover ns idS")
        assert ws.cover("ns_idS").elements == ws.cover("ns").elements

    def test_storing_commands_refuse_q1(self, ws):
        """Test nothing is stored from the q = 1 copy of the workspace"""
        parse_workspace("morphism h : T -> T = { x -> 2*x, xs -> 1/2*xs };", ws)
        before = ws.summary()
        notes = list(ws.notes)
        with pytest.raises(ValidationError) as exc:
            run_command(ws, "compose h h --name h2", q1=True)
        assert exc.value.name == "compose"
        with pytest.raises(ValidationError):
            run_command(ws, "pullback-cover ns f --q1")
        with pytest.raises(ValidationError):
            run_command(ws, "bracket E E --name EE --q1")
        assert ws.summary() == before
        assert ws.notes == notes
        assert run_command(ws, "bracket E E", q1=True).data["zero"]

    def test_te_aut_records_note(self, ws):
        result = run_command(ws, "te-aut T K --cap 2")
        assert result.data["dimension"] == 1
        assert ws.notes[-1] == "te-aut T K cap=2"

    def test_der_basis(self, ws):
        assert run_command(ws, "der-basis T --cap 1").data["dimension"] == 1
        assert run_command(ws, "der-basis T --cap 2 --degree 0").data["dimension"] == 1

    def test_bracket(self, ws):
        assert run_command(ws, "bracket E E").data["zero"]
        assert run_command(ws, "bracket V V").data["zero"]
        with pytest.raises(ValidationError):
            run_command(ws, "bracket E V")

    def test_inverse_check(self, ws):
        assert run_command(ws, "inverse-check V").data["checked"] == 1
        assert run_command(ws, "inverse-check Fm K --cap 1").data["checked"] == 1

    def test_xi_check(self, ws):
        result = run_command(ws, "xi-check Fm K --cap 1")
        assert result.ok
        assert result.data["bijective"]
        assert json.loads(result.to_json())["cap"] == 1

    def test_unknown_command(self, ws):
        with pytest.raises(UnknownCommand) as exc:
            run_command(ws, "frobnicate T")
        assert "known:" in str(exc.value)

    def test_bad_options(self, ws):
        with pytest.raises(ValidationError):
            run_command(ws, "basis T --cap -1")
        with pytest.raises(ValidationError):
            run_command(ws, "basis T --bogus")
        with pytest.raises(ValidationError):
            run_command(ws, "basis T --cap")

    def test_unknown_object(self, ws):
        with pytest.raises(ValidationError):
            run_command(ws, "groebner Nope")

    def test_run_workspace(self, ws):
        results = run_workspace(ws)
        assert [r.command for r in results] == ["normalize", "xi-check"]
        assert all(r.ok for r in results)
        assert ws.notes[-1] == "xi-check Fm K cap=1"
