import json
import subprocess
import sys
from fractions import Fraction as F

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divfree.algebra import AlgebraElement
from divfree.classify import search_witness
from divfree.cli import main
from divfree.errors import ArityError, ExpressionSyntaxError, NotInGamma
from divfree.expr import format_element, parse, parse_algebra, parse_witt
from divfree.lattice import GroupElement
from divfree.morphisms import AdditiveCharacter, make_derivation
from divfree.sampling import PROFILES, random_algebra_element, random_witt_element, rng_for
from divfree.serialize import (
    SCHEMAS,
    character_to_json,
    element_from_json,
    element_to_json,
    group_from_json,
    group_to_json,
    handle_to_json,
    lattice_from_json,
    lattice_to_json,
    schema,
    verdict_to_json,
    write_schemas,
)
from divfree.classify import structure_descriptor
from divfree.witt import WittElement

from conftest import make


def test_parse_examples():
    P = make(0, 0, 2)
    u = parse("x[1,0]*d2", P)
    assert isinstance(u, WittElement)
    assert u.terms == {((1, 0), (), 2): 1}
    Q = make(1, 0, 2)
    v = parse("3/2*t1^2*x[0,1]*d1 - t1*d2", Q)
    assert v.terms == {((0, 1), (2,), 1): F(3, 2), ((0, 0), (1,), 2): -1}
    assert isinstance(parse("t1*x[0,1] + 2", Q), AlgebraElement)
    with pytest.raises(NotInGamma):
        parse("x[1/3,0]*d1", P)


def test_parse_errors():
    P = make(0, 0, 2)
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("x[1,0]*d2 +\n  * d1", P)
    assert (info.value.line, info.value.column) == (2, 3)
    with pytest.raises(ExpressionSyntaxError):
        parse("x[1,0", P)
    with pytest.raises(ArityError):
        parse("x[1,0,0]*d1", P)
    with pytest.raises(ArityError):
        parse("t1*d1", P)
    with pytest.raises(ArityError):
        parse("x[1,0]*d3", P)
    with pytest.raises(ArityError):
        parse_algebra("x[1,0]*d1", P)
    with pytest.raises(ArityError):
        parse_witt("x[1,0]", P)


def test_print_examples():
    P = make(0, 0, 2)
    assert format_element(WittElement.zero(P)) == "0"
    assert format_element(parse("x[1,0]*d2", P)) == "x[1,0]*d2"
    assert format_element(parse("-1*x[1,0]*d2 + 1*d1", P)) == format_element(parse("d1 - x[1,0]*d2", P))
    assert "+ -" not in format_element(parse("d1 - x[1,0]*d2 - 2/4*d2", P))


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: p.name)
def test_round_trip_random(prof):
    P = prof.params()
    rng = rng_for(0, "grammar", prof.name)
    for _ in range(30):
        for u in (random_witt_element(P, rng), random_algebra_element(P, rng)):
            text = format_element(u)
            back = parse(text, P)
            assert back == u
            assert format_element(back) == text


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(0, 2), st.integers(1, 3),
                          st.fractions(max_denominator=5).filter(lambda x: x != 0)), max_size=5))
def test_printing_is_canonical(terms):
    P = make(1, 0, 2)
    a, b = {}, {}
    for x, y, i, p, c in terms:
        key = ((F(x), F(y)), (i,), p)
        a[key] = a.get(key, 0) + c
    for key in reversed(list(a)):
        b[key] = a[key]
    u = WittElement(P, a)
    v = WittElement(P, b)
    assert format_element(u) == format_element(v)
    assert parse(format_element(u), P) == u


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_bracket(capsys):
    code, out, _ = run_cli(["bracket", "x[1,0]*d2", "x[0,1]*d1", "--params", "0,0,2"], capsys)
    assert code == 0 and out.strip() == "x[1,1]*d1 - x[1,1]*d2"


def test_cli_div_of_dpq(capsys):
    code, out, _ = run_cli(["dpq", "1", "2", "x[1,2,0]", "--params", "0,0,3"], capsys)
    assert code == 0
    code, out, _ = run_cli(["div", out.strip(), "--params", "0,0,3"], capsys)
    assert code == 0 and out.strip() == "0"


def test_cli_in_s_exit_codes(capsys):
    assert run_cli(["in-s", "d1"], capsys)[0] == 0
    assert run_cli(["in-s", "x[1,0,0]*d1"], capsys)[0] == 1


def test_cli_iso_verify_identity(capsys):
    code, out, _ = run_cli(["iso-verify", "--params", "0,1,2"], capsys)
    assert code == 0 and out.strip() == "valid witness"


def test_cli_iso_search_exit_codes(capsys, tmp_path):
    assert run_cli(["iso-search", "--rho2", "1,0,0"], capsys)[0] == 1
    gens = tmp_path / "g.json"
    gens.write_text(json.dumps([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))
    code, out, _ = run_cli(["iso-search", "--gamma-gens2", str(gens), "--bound", "2", "--json"], capsys)
    assert code == 0
    jsonschema.validate(json.loads(out), schema("iso_verdict"))


def test_cli_witness_file(capsys, tmp_path):
    w = tmp_path / "w.json"
    # the action is alpha -> alpha C^-1, so C = diag(1/2, 1, 1) doubles the first axis
    w.write_text(json.dumps(group_to_json(GroupElement(0, 3, [], [], [["1/2", 0, 0], [0, 1, 0], [0, 0, 1]]))))
    gens = tmp_path / "g.json"
    gens.write_text(json.dumps({"generators": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    assert run_cli(["iso-verify", "--gamma-gens2", str(gens), "--witness", str(w)], capsys)[0] == 0
    assert run_cli(["iso-verify", "--witness", str(w)], capsys)[0] == 1


def test_cli_errors_are_structured(capsys):
    code, out, err = run_cli(["bracket", "x[1,0]*d2", "*", "--params", "0,0,2"], capsys)
    assert code == 3 and err.startswith("error: ExpressionSyntaxError") and "Traceback" not in err
    code, out, _ = run_cli(["bracket", "x[1/3,0]*d2", "d1", "--params", "0,0,2", "--json"], capsys)
    assert code == 3 and json.loads(out)["error"]["type"] == "NotInGamma"
    code, _, err = run_cli(["iso-verify", "--params", "0,0,2"], capsys)
    assert code == 3 and "HypothesisViolated" in err
    code, _, err = run_cli(["psi", "d1", "--shifts", "1,0"], capsys)
    assert code == 3 and "RequiresL1" in err
    code, _, err = run_cli(["no-such-command"], capsys)
    assert code == 3
    code, _, err = run_cli(["bracket", "d1", "d2", "--params", "0,0"], capsys)
    assert code == 3


def test_cli_other_commands(capsys):
    code, out, _ = run_cli(["grade", "x[1,0,0]*d2 + d1 + x[1,0,0]*d3"], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 2
    code, out, _ = run_cli(["lead", "t1*x[1,0]*d2 + x[1,0]*d1", "--params", "1,0,2", "--alpha", "1,0"], capsys)
    assert code == 0 and out.strip()
    code, out, _ = run_cli(["build-lead", "--params", "0,0,2", "--alpha", "1,0", "--d", "0,1"], capsys)
    assert code == 0 and out.strip() == "x[1,0]*d2"
    code, out, _ = run_cli(["psi", "t1*d1", "--params", "1,0,1", "--shifts", "1"], capsys)
    assert code == 0 and out.strip() == "t1*d1"
    code, out, _ = run_cli(["derive-check", "--kind", "inner", "--u", "x[1,0,0]*d2", "--pairs", "5"], capsys)
    assert code == 0
    code, out, _ = run_cli(["nilprobe", "d1", "t1*d2", "--params", "1,0,2"], capsys)
    assert code == 0 and out.splitlines()[0] == "nilpotent_at(2)"
    code, out, _ = run_cli(["descriptor", "--params", "1,0,2", "--rho", "1,0"], capsys)
    assert code == 0 and "rho" not in json.loads(out)


def test_cli_selftest_subset(capsys):
    code, out, _ = run_cli(["selftest", "--criteria", "5"], capsys)
    assert code == 0 and out.splitlines()[0].startswith("PASS")


def test_cli_determinism():
    argv = [sys.executable, "-m", "divfree.cli", "derive-check", "--kind", "inner", "--u", "x[1,0,0]*d2",
            "--pairs", "4", "--seed", "7", "--json"]
    runs = [subprocess.run(argv, capture_output=True, check=False).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]


def test_schemas_validate_outputs(tmp_path):
    paths = write_schemas(tmp_path)
    assert len(paths) == len(SCHEMAS)
    for name in SCHEMAS:
        jsonschema.Draft7Validator.check_schema(schema(name))
    P = make(0, 1, 2)
    rng = rng_for(0, "schemas")
    u = random_witt_element(P, rng)
    jsonschema.validate(element_to_json(u), schema("element"))
    assert element_from_json(json.loads(json.dumps(element_to_json(u))), P) == u
    f = random_algebra_element(P, rng)
    assert element_from_json(element_to_json(f), P) == f
    jsonschema.validate(lattice_to_json(P.gamma), schema("lattice"))
    assert lattice_from_json(lattice_to_json(P.gamma)) == P.gamma
    g = GroupElement(1, 2, [[1]], [[1], [0]], [[1, 1], [0, 1]])
    jsonschema.validate(group_to_json(g), schema("group_element"))
    assert group_from_json(group_to_json(g)) == g
    mu = AdditiveCharacter(P.gamma, (1, 0, F(1, 2)))
    jsonschema.validate(character_to_json(mu), schema("character"))
    h = make_derivation("combined", P, u=WittElement.zero(P), mu=mu)
    jsonschema.validate(handle_to_json(h), schema("derivation_handle"))
    jsonschema.validate(verdict_to_json(search_witness(P, P, 1)), schema("iso_verdict"))
    jsonschema.validate(structure_descriptor(P).to_json(), schema("descriptor"))


def test_shipped_schemas_are_current(tmp_path):
    from pathlib import Path

    shipped = Path(__file__).resolve().parent.parent / "docs" / "schemas"
    for path in write_schemas(tmp_path):
        assert (shipped / path.name).read_text() == path.read_text()
