"""End-to-end command-line tests driven through main()."""

import shutil
from pathlib import Path

import pytest

from iffkit.cli import main, render_diagnostic_sexp
from iffkit.checks import Diagnostic, ERROR

DATA = Path(__file__).parent / "data"

# ===== PART 1: parse and fmt =====


def test_parse_prints_canonical_form(capsys):
    assert main(["parse", str(DATA / "group.iff")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("(namespace grp (level 1)")
    assert "(forall ((group ?G))" in out


def test_parse_reports_position_on_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.iff"
    bad.write_text("(namespace x (level 1) (and P))", encoding="utf-8")
    assert main(["parse", str(bad)]) == 2
    err = capsys.readouterr().err
    assert err.startswith(f"{bad}:") and "1:25" in err
    assert "'and' takes at least two operands" in err


def test_parse_missing_file(capsys):
    assert main(["parse", str(DATA / "no_such.iff")]) == 2
    assert "no_such.iff" in capsys.readouterr().err


def test_fmt_is_idempotent(tmp_path, capsys):
    target = tmp_path / "group.iff"
    shutil.copy(DATA / "group.iff", target)
    assert main(["fmt", str(target)]) == 0
    once = target.read_text(encoding="utf-8")
    assert main(["fmt", str(target)]) == 0
    assert target.read_text(encoding="utf-8") == once
    # and the formatted file still parses to the same canonical text
    assert main(["parse", str(target)]) == 0
    assert capsys.readouterr().out == once


# ===== PART 2: check =====


def test_check_clean_corpus(capsys):
    assert main(["check", str(DATA / "example_code.iff")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == "0 error(s), 1 warning(s)"
    assert any("UNWARRANTED-TERM" in line for line in out)


def test_check_warrant_flag_adds_info_lines(capsys):
    assert main(["check", str(DATA / "example_code.iff")]) == 0
    quiet = capsys.readouterr().out.splitlines()
    assert main(["check", "--warrant", str(DATA / "example_code.iff")]) == 0
    loud = capsys.readouterr().out.splitlines()
    assert len(loud) > len(quiet)
    assert any("WARRANT-OK" in line for line in loud)
    assert not any("WARRANT-OK" in line for line in quiet)
    # the summary line is unchanged: info lines are display only
    assert loud[-1] == quiet[-1]


def test_check_sexp_format(capsys):
    path = str(DATA / "example_code.iff")
    code = main(["check", "--warrant", "--format", "sexp", path])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 9
    assert all(line.startswith("(diagnostic ") for line in lines)
    assert lines[1] == (
        f'(diagnostic warning UNWARRANTED-TERM "{path}" 21 12 '
        '"type.pred" "\'type.pred:membership\' has no reference from a lower level '
        'or a peripheral namespace")'
    )


def test_render_diagnostic_sexp_escapes_quotes():
    d = Diagnostic(ERROR, "X", 'bad "name"', file='a"b.iff', line=1, column=2)
    assert render_diagnostic_sexp(d) == (
        '(diagnostic error X "a\\"b.iff" 1 2 "-" "bad \\"name\\"")'
    )


def test_check_strict_atomic_exit_code(capsys):
    path = str(DATA / "natural_part.iff")
    code = main(["check", "--strict-atomic", path])
    assert code == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0] == (
        f"ERROR NONATOMIC {path}:7:3 [#n.set] "
        "negated atomic axiom in a namespace below the metashell"
    )
    assert out[-1] == "1 error(s), 0 warning(s)"
    # the same file is merely warned about without the flag
    assert main(["check", str(DATA / "natural_part.iff")]) == 0


def test_check_rejects_unparsable_file(tmp_path, capsys):
    bad = tmp_path / "bad.iff"
    bad.write_text("(namespace x (level 1)", encoding="utf-8")
    assert main(["check", str(bad)]) == 2
    assert capsys.readouterr().err.startswith(f"{bad}:")


# ===== PART 3: eval =====


def test_eval_group_against_z3(capsys):
    path = str(DATA / "group.iff")
    code = main(["eval", "--theory", path, "--interp", str(DATA / "z3.interp")])
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith(f"holds {path}:4:3 (forall ((group ?G))")
    assert out[-1] == "1/1 axioms hold"


def test_eval_corrupt_table_counterexample(capsys):
    path = str(DATA / "group.iff")
    code = main(
        ["eval", "--theory", path, "--interp", str(DATA / "z3_corrupt.interp")]
    )
    assert code == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith(f"FAILS {path}:4:3")
    assert out[1] == "  counterexample: ?G = {0 1 2}, ?a = 1"
    assert out[-1] == "0/1 axioms hold"


def test_eval_natural_part_model(capsys):
    code = main(
        [
            "eval",
            "--theory",
            str(DATA / "natural_part.iff"),
            "--interp",
            str(DATA / "natural.interp"),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out.splitlines()[-1] == "18/18 axioms hold"


def test_eval_missing_binding_is_a_usage_error(tmp_path, capsys):
    theory = tmp_path / "t.iff"
    theory.write_text("(namespace t (level 1)\n  (= ghost ghost))", encoding="utf-8")
    interp = tmp_path / "t.interp"
    interp.write_text("(interpretation (set d (a)))", encoding="utf-8")
    code = main(["eval", "--theory", str(theory), "--interp", str(interp)])
    assert code == 2
    assert "ghost" in capsys.readouterr().err


def test_eval_bad_interpretation_file(tmp_path, capsys):
    interp = tmp_path / "bad.interp"
    interp.write_text("(oops)", encoding="utf-8")
    code = main(
        ["eval", "--theory", str(DATA / "group.iff"), "--interp", str(interp)]
    )
    assert code == 2
    assert "bad.interp" in capsys.readouterr().err


# ===== PART 4: verification suites =====


def test_cantor_suite_frozen(capsys):
    assert main(["cantor", "--max-size", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "size 0: no surjection onto the power set (1 functions)",
        "size 1: no surjection onto the power set (2 functions)",
        "size 2: no surjection onto the power set (16 functions)",
        "size 1: every endofunction has a fixed point",
        "size 2: fixed-point-free endofunction (fn [e0 e1] [e1 e0])",
        "truth values: negation is fixed-point free",
    ]


def test_cantor_budget(capsys):
    assert main(["cantor", "--max-size", "9"]) == 2
    assert "budget" in capsys.readouterr().err


def test_topos_suite(capsys):
    assert main(["topos", "--max-size", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "classifier bijection (sizes <= 2): ok",
        "exponential bijection (sizes <= 2): ok",
        "classifier naturality (sizes <= 2): ok",
        "exponential naturality (sizes <= 2): ok",
    ]


def test_topos_budget(capsys):
    assert main(["topos", "--max-size", "5"]) == 2
    assert "budget" in capsys.readouterr().err


def test_metastack_report_frozen(capsys):
    code = main(["metastack", "--levels", "2", "--atoms", "2", "--breadth", "4"])
    assert code == 0
    assert capsys.readouterr().out.splitlines() == [
        "level 1: 4 sets",
        "level 2: 57 sets",
        "self-membership: ok (no level contains itself)",
        "growth chain: ok",
        "ascent: 1 level(s) verified, 0 beyond the breadth cap",
        "INFO ANALOG-TRUNCATED -:0:0 [power@2] "
        "power closure: 57 instance(s) beyond the truncation",
        "closure rows: ok (1 truncation notice(s))",
        "source/target chain: truncated "
        "(level 2 holds more than 50000 function graphs)",
    ]


def test_metastack_small_chain_verifies(capsys):
    code = main(["metastack", "--levels", "2", "--atoms", "1", "--breadth", "2"])
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert "source/target chain: ok" in out


def test_metastack_unbuildable_configuration(capsys):
    code = main(["metastack", "--levels", "3", "--atoms", "3", "--breadth", "4"])
    assert code == 2
    assert "4231141491" in capsys.readouterr().err


def test_metastack_rejects_degenerate_parameters(capsys):
    assert main(["metastack", "--levels", "0", "--atoms", "1", "--breadth", "1"]) == 2
    capsys.readouterr()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
