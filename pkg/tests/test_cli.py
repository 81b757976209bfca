import json

from coroutine_vm.cli import main
from coroutine_vm.debruijn import to_debruijn_gs
from coroutine_vm.parser import parse_ct, parse_gs
from coroutine_vm.safety import safe_db
from coroutine_vm.terms import NLam, NVar
from coroutine_vm.translate import down


def _corpus(corpus_dir, name):
    return str(corpus_dir / name)


def test_check_safe(corpus_dir, capsys):
    assert main(["check", _corpus(corpus_dir, "safe.ct")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("safe")
    assert "use-sets=True visibility=True indices=True" in out


def test_check_unsafe(corpus_dir, capsys):
    assert main(["check", _corpus(corpus_dir, "unsafe.ct")]) == 1
    assert capsys.readouterr().out.startswith("unsafe")


def test_check_identity(corpus_dir):
    assert main(["check", _corpus(corpus_dir, "id.ct")]) == 0


def test_check_lift_prints_source(corpus_dir, capsys):
    assert main(["check", "--lift", _corpus(corpus_dir, "safe.ct")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == r"\. get. \. set 0 #0"


def test_check_lift_on_unsafe_reports_path(corpus_dir, capsys):
    assert main(["check", "--lift", _corpus(corpus_dir, "unsafe.ct")]) == 1
    assert "lift failed" in capsys.readouterr().out


def test_check_gs_prints_index_form(corpus_dir, capsys):
    assert main(["check", _corpus(corpus_dir, "ctx.gs")]) == 0
    assert capsys.readouterr().out.strip() == r"\. get. \. set 0 #0"


def test_check_gs_visibility_error(corpus_dir, capsys):
    assert main(["check", _corpus(corpus_dir, "bad.gs")]) == 1
    err = capsys.readouterr().err
    assert "'y'" in err and "not visible" in err


def test_compile_mirror(corpus_dir, capsys):
    assert main(["compile", _corpus(corpus_dir, "ctx.gs")]) == 0
    assert capsys.readouterr().out.strip() == r"\. catch. \. throw 0 #1"


def test_compile_identity(corpus_dir, capsys):
    assert main(["compile", _corpus(corpus_dir, "id.gs")]) == 0
    assert capsys.readouterr().out.strip() == r"\. #0"


def test_compile_rejects_invisible_variable(corpus_dir):
    assert main(["compile", _corpus(corpus_dir, "bad.gs")]) == 1


def test_run_demo_gs(corpus_dir, capsys):
    assert main(["run", _corpus(corpus_dir, "ctx_demo.gs"), "--machine", "gs"]) == 0
    assert "final after 2 steps" in capsys.readouterr().out


def test_run_omega_exhausts_fuel(corpus_dir, capsys):
    assert main(["run", _corpus(corpus_dir, "omega.ct"), "--machine", "ct", "--max-steps", "50"]) == 3
    assert "fuel exhausted" in capsys.readouterr().out


def test_run_demo_it_trace(corpus_dir, capsys):
    assert main(["run", _corpus(corpus_dir, "ctx_demo.gs"), "--machine", "it", "--trace"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4  # two transitions + final event + summary
    assert lines[-1].startswith("final after 2 steps")


def test_run_json_trace_round_trips(corpus_dir, capsys):
    assert main(
        ["run", _corpus(corpus_dir, "ctx_demo.gs"), "--machine", "it", "--trace", "--format", "json"]
    ) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    events = [json.loads(line) for line in lines[:-1]]
    assert [e["rule"] for e in events] == ["catch_or_get", "throw_or_set", "final"]
    assert [e["step"] for e in events] == [0, 1, 2]
    assert set(events[0]) == {"step", "machine", "rule", "head", "stack_depth", "mu_count"}


def test_run_rejects_machine_calculus_mismatch(corpus_dir, capsys):
    assert main(["run", _corpus(corpus_dir, "ctx_demo.gs"), "--machine", "ct"]) == 1
    assert "does not run" in capsys.readouterr().err


def test_run_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "broken.ct"
    bad.write_text("\\x. (x", encoding="utf-8")
    assert main(["run", str(bad)]) == 1


def test_bisim_demo_composed(corpus_dir, capsys):
    assert main(["bisim", _corpus(corpus_dir, "ctx_demo.gs"), "--pair", "composed"]) == 0
    assert "both_halted" in capsys.readouterr().out


def test_bisim_identity_star(corpus_dir, capsys):
    assert main(["bisim", _corpus(corpus_dir, "id.gs"), "--pair", "star"]) == 0
    assert "steps=0" in capsys.readouterr().out


def test_bisim_omega_diamond_fuel(corpus_dir, capsys):
    assert main(["bisim", _corpus(corpus_dir, "omega.gs"), "--pair", "diamond", "--max-steps", "50"]) == 0
    assert "fuel_exhausted" in capsys.readouterr().out


def test_bisim_json(corpus_dir, capsys):
    assert main(["bisim", _corpus(corpus_dir, "ctx_demo.gs"), "--format", "json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {"file": "ctx_demo.gs", "outcome": "both_halted", "pair": "composed", "steps_checked": 2}


def test_bisim_all_directory(corpus_dir, capsys):
    assert main(["bisim", str(corpus_dir / "gen"), "--all", "--max-steps", "300"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 20


def test_bisim_all_needs_directory(corpus_dir, capsys):
    assert main(["bisim", _corpus(corpus_dir, "id.gs"), "--all"]) == 1


def test_parse_round_trip(corpus_dir, capsys):
    assert main(["parse", _corpus(corpus_dir, "safe.ct")]) == 0
    assert capsys.readouterr().out.strip() == r"\x. catch a. \y. throw a x"


def test_parse_error_has_position(tmp_path, capsys):
    bad = tmp_path / "nope.ct"
    bad.write_text("\\x. (", encoding="utf-8")
    assert main(["parse", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_extension_needs_calculus(tmp_path, capsys):
    f = tmp_path / "term.txt"
    f.write_text("\\x. x", encoding="utf-8")
    assert main(["parse", str(f)]) == 1
    assert main(["parse", str(f), "--calculus", "ct"]) == 0


def test_gen_size_one(capsys):
    assert main(["gen", "--seed", "1", "--size", "1"]) == 0
    term = parse_gs(capsys.readouterr().out.strip())
    assert isinstance(term, NLam) and isinstance(term.body, NVar)


def test_gen_stream_compiles_and_is_safe(capsys):
    assert main(["gen", "--seed", "42", "--count", "100", "--size", "20"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 100
    for line in lines:
        compiled = down(to_debruijn_gs(parse_gs(line)))
        assert safe_db(compiled)


def test_gen_unsafe_ok_reports_ratio(capsys):
    assert main(["gen", "--calculus", "ct", "--unsafe-ok", "--count", "60", "--seed", "3"]) == 0
    captured = capsys.readouterr()
    assert len(captured.out.strip().splitlines()) == 60
    assert "unsafe terms:" in captured.err
    for line in captured.out.strip().splitlines():
        parse_ct(line)  # closed, parseable


def test_gen_out_dir(tmp_path, capsys):
    assert main(["gen", "--seed", "5", "--count", "3", "--out-dir", str(tmp_path / "terms")]) == 0
    files = sorted((tmp_path / "terms").glob("*.gs"))
    assert len(files) == 3
    for f in files:
        to_debruijn_gs(parse_gs(f.read_text(encoding="utf-8")))


def test_gen_rejects_bad_flags(capsys):
    assert main(["gen", "--size", "0"]) == 1
    assert main(["gen", "--unsafe-ok", "--calculus", "gs"]) == 1
