from __future__ import annotations

import pytest

from paramproc.cli import main
from paramproc.correspondence import NAMED_EXAMPLES

R1, R2, PQ = NAMED_EXAMPLES["R1"], NAMED_EXAMPLES["R2"], NAMED_EXAMPLES["PQ"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_prints_canonical_text(capsys):
    code, out, _ = run(capsys, "parse", "-e", "a<b>.0|b(x).x<a>.0")
    assert code == 0 and out.strip() == "a<b>.0 | b(x).x<a>.0"


def test_parse_error_is_usage_error(capsys):
    code, _, err = run(capsys, "parse", "-e", "a<b")
    assert code == 3 and "column 4" in err


def test_trace_follows_taus(capsys):
    code, out, _ = run(capsys, "trace", "--follow", "tau", "-e", PQ)
    lines = out.splitlines()
    assert code == 0
    assert [line.strip().split()[0] for line in lines[1:]] == ["--tau-->", "--tau-->"]
    assert lines[-1].strip().endswith("(nu c)(nu c1)0")


def test_trace_of_encoding_shows_reduced_forms(capsys):
    _, enc, _ = run(capsys, "encode", "-e", PQ)
    code, out, _ = run(capsys, "trace", "--calculus", "hopi", "--follow", "tau", "-e", enc.strip())
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    # the received abstraction has been applied; only prefix-guarded ones remain
    assert lines[1] == "--tau--> (nu c)((nu c1)c<lam(X).X@(c1)>.0 | c(X1).X1@(lam(x).0))"
    assert lines[2].strip() == "--tau--> (nu c)(nu c1)0"


def test_trace_of_nil_is_empty(capsys):
    code, out, _ = run(capsys, "trace", "-e", "0")
    assert code == 0 and out.splitlines() == ["0"]


def test_trace_depth(capsys):
    code, out, _ = run(capsys, "trace", "--depth", "1", "-e", "a(x).x<b>.0")
    assert code == 0 and len(out.splitlines()) == 1 + 3


def test_check_exit_codes(capsys):
    assert run(capsys, "check", "ground", "-e", R1, "-e", R2)[0] == 0
    assert run(capsys, "check", "ground", "-e", "a(x).0", "-e", "0")[0] == 1
    assert run(capsys, "check", "ground", "-e", PQ, "-e", PQ)[0] == 0
    code, out, _ = run(capsys, "--max-states", "5", "check", "ground",
                       "-e", "!a(x).a<x>.0 | a<b>.0", "-e", "!a(x).a<x>.0 | a<c>.0")
    assert code in (1, 2)


def test_check_normal_on_translations(capsys):
    code, out, _ = run(capsys, "--records", "check", "normal", "-e", R1, "-e", R2)
    lines = out.splitlines()
    assert code == 1 and lines[0] == "RESULT inequivalent"
    assert any(line.startswith("STEP left a(lam(Z).m<Z>.0)") for line in lines)
    assert lines[-1].startswith("BOUNDS hit=")


def test_check_context_and_local(capsys):
    assert run(capsys, "check", "context", "--image", "-e", "a<b>.0", "-e", "a<c>.0")[0] == 1
    assert run(capsys, "check", "context", "-e", "a<b>.0", "-e", "a<b>.0")[0] == 0
    code, out, _ = run(capsys, "check", "local", "-e", R1, "-e", R2)
    assert code == 0 and "bounded" in out


def test_check_usage_errors(capsys):
    assert run(capsys, "check", "ground", "-e", "0")[0] == 3
    assert run(capsys, "check", "ground", "--calculus", "hopi", "-e", "0", "-e", "0")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["check", "bogus", "-e", "0", "-e", "0"])
    assert exc.value.code == 3


def test_files_as_input(capsys, tmp_path):
    f1, f2 = tmp_path / "r1.pi", tmp_path / "r2.pi"
    f1.write_text(R1 + "\n")
    f2.write_text(R2 + "\n")
    assert run(capsys, "check", "ground", str(f1), str(f2))[0] == 0
    assert run(capsys, "check", "ground", str(f1), "-e", R2)[0] == 3
    assert run(capsys, "check", "ground", str(f1), str(tmp_path / "missing.pi"))[0] == 3


def test_factorize(capsys):
    code, out, _ = run(capsys, "--records", "factorize", "--verify", "-e", "X@(d)", "-e", "lam(x).x<b>")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "CLAUSE context=1 payload=3"
    assert lines[1].startswith("TERM (nu m)")
    assert "RESULT equivalent" in lines
    assert run(capsys, "factorize", "-m", "b", "-e", "X@(d)", "-e", "lam(x).x<b>")[0] == 3


def test_correspond(capsys):
    code, out, _ = run(capsys, "--records", "correspond", "-e", "a<b>.0", "-e", PQ)
    assert code == 0
    lines = out.splitlines()
    assert "CLAUSE forward 3 checked=1 passed=1 failed=0 unknown=0" in lines
    assert "CLAUSE backward 4 checked=1 passed=1 failed=0 unknown=0" in lines
    code, out, _ = run(capsys, "correspond", "--weak", "--depth", "0")
    assert code == 0 and "failed" in out


def test_repro(capsys):
    code, out, _ = run(capsys, "repro", "all")
    assert code == 0
    assert out.splitlines() == [f"{n}: pass" for n in ("sec31-trace", "sec33-counterexample",
                                                          "sec4-factorization")]
    code, out, _ = run(capsys, "--records", "repro", "sec4-factorization")
    assert out.splitlines()[0] == "REPRO sec4-factorization pass"


def test_corpus_seed_from_environment(capsys, monkeypatch):
    _, a, _ = run(capsys, "--records", "--seed", "1", "corpus", "--random", "5", "--depth", "2")
    _, b, _ = run(capsys, "--records", "--seed", "1", "corpus", "--random", "5", "--depth", "2")
    assert a == b and a.splitlines()[0].startswith("TERM 0 ")
    monkeypatch.setenv("HOPI_SEED", "2")
    _, c, _ = run(capsys, "--records", "--seed", "1", "corpus", "--random", "5", "--depth", "2")
    _, d, _ = run(capsys, "--records", "--seed", "2", "corpus", "--random", "5", "--depth", "2")
    assert c == d != a
    monkeypatch.setenv("HOPI_SEED", "x")
    assert run(capsys, "corpus")[0] == 3


def test_records_are_stable(capsys):
    argv = ["--records", "check", "ground", "-e", "a(x).x<b>.0", "-e", "a(x).b<x>.0"]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)
