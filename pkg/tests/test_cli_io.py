import json

import pytest

from isocap import INFINITE, BoundReport, InputError
from isocap.cli_io import (EXIT_BUDGET, EXIT_FAILED, EXIT_INPUT, EXIT_OK,
                           emit_graph, parse_family_spec, parse_graph,
                           run_command, to_json)
from isocap.infinite_families import t3_example

LINE5 = """# five-edge segment
v 0 1
v 1 1
v 2 1
v 3 1
v 4 1
v 5 1
e 0 1 1
e 1 2 1
e 2 3 1
e 3 4 1
e 4 5 1
omega 1 2 3 4
"""

T3 = None  # built lazily from the library example


def t3_text():
    global T3
    if T3 is None:
        g, dom = t3_example()
        T3 = emit_graph(g, dom.interior)
    return T3


@pytest.fixture
def line5(tmp_path):
    p = tmp_path / "line5.graph"
    p.write_text(LINE5)
    return str(p)


@pytest.fixture
def t3_file(tmp_path):
    p = tmp_path / "t3.graph"
    p.write_text(t3_text())
    return str(p)


def test_round_trip_identity():
    g, omega = parse_graph(LINE5)
    text = emit_graph(g, omega)
    g2, omega2 = parse_graph(text)
    assert g2 == g and tuple(omega2) == tuple(omega)
    assert emit_graph(g2, omega2) == text


@pytest.mark.parametrize("line,fragment", [
    ("v 0 0", "line 2"),
    ("v a 1\nv a 1", "line 3"),
    ("e a b 1", "line 2"),
    ("v a 1\ne a a 1", "line 3"),
    ("q what", "line 2"),
    ("v a 1\nomega a a", "line 3"),
    ("v a 1\nv b 1\nomega a\nomega b", "line 5"),
])
def test_parse_errors_carry_line_numbers(line, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_graph("# header\n" + line + "\n")


def test_parse_rejects_empty_and_weird_ids():
    with pytest.raises(InputError):
        parse_graph("# nothing\n")
    with pytest.raises(InputError):
        parse_graph("v 0 1\nv 1 1\ne 0 2 1\n")  # undeclared endpoint


def test_json_formatting():
    doc = {"a": 1.0 / 3.0, "b": INFINITE, "c": [1, 2.5, "x"],
           "d": {"nested": None}, "e": True}
    text = to_json(doc)
    parsed = json.loads(text)
    assert parsed["a"] == pytest.approx(1.0 / 3.0, rel=1e-16)
    assert parsed["b"] == "infinite"
    assert parsed["c"] == [1, 2.5, "x"]
    assert parsed["d"]["nested"] is None
    assert parsed["e"] is True
    assert list(parsed) == ["a", "b", "c", "d", "e"]
    assert "0.33333333333333331" in text


def test_family_spec_parsing():
    spec = parse_family_spec("lattice_box:3:quotient")
    assert spec.kind == "lattice_box" and spec.dim == 3 and spec.quotient
    spec2 = parse_family_spec("binary_tree:full")
    assert not spec2.quotient
    spec3 = parse_family_spec("lattice_box:2:quotient:summable")
    assert spec3.mass_rule is not None
    assert spec3.mass_rule((2, -3)) == pytest.approx(2.0**-3)
    with pytest.raises(InputError):
        parse_family_spec("binary_tree:summable")
    with pytest.raises(InputError):
        parse_family_spec("")


def run_json(capsys, argv):
    code = run_command(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_spectrum_command(capsys, line5):
    code, doc = run_json(capsys, ["spectrum", "steklov", line5])
    assert code == EXIT_OK
    assert doc["tool_version"]
    res = doc["results"][0]
    assert res["type"] == "spectrum"
    assert res["eigenvalues"][1] == pytest.approx(0.4, rel=1e-11)


def test_cap_command(capsys, line5):
    code, doc = run_json(capsys, ["cap", "-A", "2", line5])
    assert code == EXIT_OK
    res = doc["results"][0]
    assert res["value"] == pytest.approx(1.0 / 2.0 + 1.0 / 3.0, rel=1e-11)


def test_alpha_and_verify_commands(capsys, t3_file):
    code, doc = run_json(capsys, ["alpha", "s", t3_file])
    assert code == EXIT_OK
    assert doc["results"][0]["value"] == pytest.approx(1.0 / 6.0, rel=1e-11)
    code, doc = run_json(capsys, ["verify", "steklov_1", t3_file])
    assert code == EXIT_OK
    rep = doc["results"][0]
    assert rep["type"] == "bound"
    assert rep["lower_ok"] is True and rep["upper_ok"] is True
    assert rep["eigenvalue"] == pytest.approx(1.0 / 3.0, rel=1e-11)


def test_verify_k_in_name(capsys, t3_file):
    code, doc = run_json(capsys, ["verify", "higher_steklov_finite(2)", t3_file])
    assert code == EXIT_OK
    rep = doc["results"][0]
    assert rep["theorem"] == "higher_steklov_finite(2)"
    assert rep["upper_ok"] is True and "empirical_c" in rep
    code, doc = run_json(capsys,
                         ["verify", "higher_steklov_finite(2)", t3_file,
                          "-k", "3"])
    assert code == EXIT_INPUT
    assert "disagrees" in doc["error"]["message"]


def test_family_commands(capsys):
    code, doc = run_json(capsys, ["family", "binary_tree:quotient",
                                  "--steps", "1..6", "--emit", "cap"])
    assert code == EXIT_OK
    seq = doc["results"][0]
    assert seq["values"][0] == pytest.approx(2.0 / 3.0, rel=1e-11)
    assert seq["monotone"] is True
    code, doc = run_json(capsys, ["family", "binary_tree:quotient",
                                  "--steps", "1,3,5", "--emit", "sigma"])
    assert code == EXIT_OK
    code, doc = run_json(capsys, ["verify", "dtn_bottom",
                                  "--family", "binary_tree:quotient",
                                  "--steps", "1..6"])
    assert code == EXIT_OK
    assert doc["results"][0]["upper_ok"] is True


def test_coarea_command(capsys, line5):
    code, doc = run_json(capsys, ["coarea", line5, "--field",
                                  "0=0,1=1,2=2,3=1,4=0,5=0"])
    assert code == EXIT_OK
    res = doc["results"][0]
    assert res["holds"] is True
    assert res["value"] <= 2.0 * res["energy"] + 1e-12


def test_exit_codes(capsys, tmp_path, t3_file, monkeypatch):
    assert run_command(["spectrum", "steklov", str(tmp_path / "nope")]) == \
        EXIT_INPUT
    capsys.readouterr()
    bad = tmp_path / "bad.graph"
    bad.write_text("v 0 0\n")
    code, doc = run_json(capsys, ["spectrum", "steklov", str(bad)])
    assert code == EXIT_INPUT
    assert "line 1" in doc["error"]["message"]
    code, doc = run_json(capsys, ["alpha", "s", "--budget-pair", "1", t3_file])
    assert code == EXIT_BUDGET
    assert doc["error"]["kind"] == "budget"

    import isocap.cli_io as cli

    def failing_check(*a, **kw):
        return BoundReport("steklov_1", 1.0, 0.1, 0.0125, 0.2, True, False,
                           10.0, ())

    monkeypatch.setattr(cli, "check", failing_check)
    code, doc = run_json(capsys, ["verify", "steklov_1", t3_file])
    assert code == EXIT_FAILED
    assert doc["results"][0]["upper_ok"] is False


def test_usage_errors_return_input_code(capsys):
    assert run_command([]) == EXIT_INPUT
    capsys.readouterr()
    assert run_command(["alpha", "zzz", "x"]) == EXIT_INPUT
    capsys.readouterr()
    assert run_command(["--help"]) == EXIT_OK
    capsys.readouterr()


def test_output_is_deterministic(capsys, t3_file):
    argv = ["alpha", "s", "--seed", "5", t3_file]
    run_command(argv)
    first = capsys.readouterr().out
    run_command(argv)
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["instance"]["source"].endswith("t3.graph")
