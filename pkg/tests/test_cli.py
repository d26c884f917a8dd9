import json
import random

import pytest

import fi1.subsemigroup as sub
from fi1.cli import EXIT_ENGINE, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main
from fi1.core import Triple, eval_word, parse_word
from fi1.stephen import ProbeInstance
from conftest import FIXTURES, validate

X = str(FIXTURES / "x.json")
U = str(FIXTURES / "u123.json")
RAY = str(FIXTURES / "ray.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None)


def test_canon_example(capsys):
    code, obj = run_json(capsys, "canon", "x x'")
    assert code == EXIT_OK and obj["triple"] == "(0,0,1)"
    validate(obj, "triple_result")


def test_canon_rejects_foreign_letters(capsys):
    code, _, err = run(capsys, "canon", "x y")
    assert code == EXIT_USAGE and "fi1:" in err


@pytest.mark.parametrize("argv, triple", [
    (("mul", "(0,1,1)", "(-1,-1,0)"), "(0,0,1)"),
    (("inv", "(-1,2,3)"), "(-3,-2,1)"),
])
def test_arithmetic(capsys, argv, triple):
    code, obj = run_json(capsys, *argv)
    assert code == EXIT_OK and obj["triple"] == triple
    validate(obj, "triple_result")


def test_leq_exit_codes(capsys):
    code, obj = run_json(capsys, "leq", "(-1,0,1)", "(0,0,1)")
    assert code == EXIT_OK and obj == {"leq": True}
    validate(obj, "leq_result")
    code, obj = run_json(capsys, "leq", "(0,0,1)", "(-1,0,1)")
    assert code == EXIT_NEGATIVE and obj == {"leq": False}


def test_green(capsys):
    code, obj = run_json(capsys, "green", "(-1,2,3)")
    assert code == EXIT_OK and obj["dindex"] == 4
    validate(obj, "green_result")


def test_member_on_the_ray_example(capsys):
    code, obj = run_json(capsys, "member", RAY, "(0,0,1)")
    assert code == EXIT_NEGATIVE and obj == {"member": False}
    validate(obj, "member_result")
    code, obj = run_json(capsys, "member", RAY, "(-5,0,0)")
    assert code == EXIT_OK and obj == {"member": True}


def test_closure(capsys):
    code, obj = run_json(capsys, "closure", X, "--max-d", "2")
    assert code == EXIT_OK and obj["count"] == 13
    validate(obj, "closure_result")
    code, obj = run_json(capsys, "closure", U, "--max-d", "4")
    assert obj["count"] == 4


def test_params(capsys):
    code, obj = run_json(capsys, "params", U)
    assert code == EXIT_OK
    assert (obj["a_min"], obj["b_min"], obj["p"], obj["N"]) == (1, 1, 2, 6)
    validate(obj, "params_result")


def test_es_and_gens(capsys):
    code, obj = run_json(capsys, "es", X, "--box", "3")
    assert code == EXIT_OK
    validate(obj, "es_result")
    code, obj = run_json(capsys, "gens", X, "--box", "3")
    assert code == EXIT_OK and obj["T1"]
    validate(obj, "gens_result")
    code, obj = run_json(capsys, "gens", U)
    assert code == EXIT_OK


def test_fg_exit_codes(capsys):
    code, obj = run_json(capsys, "fg", RAY, "--box", "8")
    assert code == EXIT_NEGATIVE and obj["finitely_generated"] is False
    assert [0] == sorted({b for _, b in obj["witness"]["cells"]})
    validate(obj, "fg_result")
    code, obj = run_json(capsys, "fg", str(FIXTURES / "u123_idem11.json"), "--box", "12")
    assert code == EXIT_OK and obj["complement"] == ["(-1,0,1)"]
    validate(obj, "fg_result")


def test_certification_box_too_small_is_a_usage_error(capsys):
    code, _, err = run(capsys, "fg", RAY, "--box", "2")
    assert code == EXIT_USAGE and "box" in err


def test_stephen_json_and_dot(capsys):
    code, obj = run_json(capsys, "stephen", "x x' x", "--rounds", "3")
    assert code == EXIT_OK and obj["converged"] is True
    assert len(obj["graph"]["vertices"]) == 2
    validate(obj, "stephen_result")
    code, out, _ = run(capsys, "stephen", "x x' x", "--rounds", "3", "--dot")
    assert code == EXIT_OK and out.startswith("digraph") and "->" in out


def test_eq_verdicts(capsys):
    code, obj = run_json(capsys, "eq", "x x x'", "x", "--rounds", "4")
    assert code == EXIT_NEGATIVE and obj == {"verdict": "distinct"}
    validate(obj, "eq_result")
    code, obj = run_json(capsys, "eq", "x x' x", "x", "--rounds", "4")
    assert code == EXIT_OK and obj == {"verdict": "equal"}


def test_eq_with_a_presentation_file(capsys):
    pres = str(FIXTURES / "idempotent_pres.json")
    code, obj = run_json(capsys, "eq", "y y y", "y", "--pres", pres, "--rounds", "4")
    assert code == EXIT_OK and obj["verdict"] == "equal"
    # folding alone cannot see y y = y
    code, obj = run_json(capsys, "eq", "y y", "y", "--pres", pres, "--rounds", "0")
    assert code == EXIT_NEGATIVE and obj == {"verdict": "unknown"}


@pytest.mark.parametrize("kind", ["amalgam", "conj"])
def test_present(capsys, kind):
    code, obj = run_json(capsys, "present", kind, X, "--box", "2", "--report")
    assert code == EXIT_OK and "report" in obj
    validate(obj, "presentation")
    code, obj = run_json(capsys, "present", kind, str(FIXTURES / "u123_idem11.json"), "--box", "3",
                         "--sbar-pres", str(FIXTURES / "sbar_u123_free.json"))
    assert code == EXIT_OK and "a1b1" in obj["alphabet"]


def test_present_needs_an_sbar_presentation_for_richer_specs(capsys):
    code, _, err = run(capsys, "present", "amalgam", RAY, "--box", "2")
    assert code == EXIT_USAGE and "--sbar-pres" in err


def test_present_rejects_a_false_sbar_presentation(capsys):
    code, _, _ = run(capsys, "present", "amalgam", X, "--box", "2",
                     "--sbar-pres", str(FIXTURES / "idempotent_pres.json"))
    assert code == EXIT_USAGE


def test_probe_c(capsys):
    path = str(FIXTURES / "probe_c.json")
    ProbeInstance.from_json(json.loads(open(path).read()))
    code, obj = run_json(capsys, "probe-c", path, "--rounds", "4")
    assert code == EXIT_OK
    assert obj["g_label_seen"] is False and obj["all_labels_above_f"] is True
    validate(obj, "probe_result")


@pytest.mark.parametrize("argv", [
    (),
    ("nosuch",),
    ("mul", "(1,2)", "(0,0,1)"),
    ("mul", "(1,0,0)", "(0,0,1)"),
    ("closure", X, "--max-d", "-1"),
    ("es", X, "--box", "0"),
    ("stephen", "x", "--rounds", "two"),
    ("member", "/nonexistent.json", "(0,0,1)"),
    ("canon", "x ''"),
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and out == "" and err


def test_bad_json_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "params", str(bad))[0] == EXIT_USAGE
    bad.write_text('{"gens": [[0, 0, 0]]}')
    assert run(capsys, "params", str(bad))[0] == EXIT_USAGE


def test_engine_errors_exit_3(capsys, monkeypatch, tmp_path):
    spec = sub.SubsemigroupSpec((Triple.from_signed(-2, 2, 3), Triple.from_signed(-3, -3, 1)))
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_json()))
    real = sub.structure_params
    monkeypatch.setattr(sub, "structure_params", lambda s: real(s, cap=5))
    code, out, err = run(capsys, "params", str(path))
    assert code == EXIT_ENGINE and out == "" and "engine error" in err


def test_overflow_exits_3(capsys):
    big = f"({-(2**62)},{2**62},{2**62})"
    assert run(capsys, "mul", big, big)[0] == EXIT_ENGINE


def test_help_exits_0(capsys):
    assert main(["--help"]) == EXIT_OK


def test_canon_round_trip(capsys):
    rng = random.Random(2024)
    for _ in range(1000):
        n = rng.randint(1, 12)
        text = " ".join(rng.choice(["x", "x'"]) for _ in range(n))
        code, obj = run_json(capsys, "canon", text)
        assert code == EXIT_OK
        t = Triple.from_signed(*obj["components"])
        assert t == eval_word(parse_word(text))
        assert str(t) == obj["triple"]
