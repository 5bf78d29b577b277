import io
import json
import subprocess
import sys

import jsonschema
import pytest

from qonsager import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_verify_json_schema():
    code, out, _ = run("verify", "--target", "onsager", "--check", "O_q.note.*,O_q.lemma-qcom.*", "--output", "json")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, cli.REPORT_SCHEMA)
    ids = [c["id"] for c in report["checks"]]
    assert ids == ["O_q.lemma-qcom.T0", "O_q.lemma-qcom.T1", "O_q.note.qdg-AB", "O_q.note.qdg-BA",
                   "O_q.note.qdg-BC", "O_q.note.qdg-CB"]
    assert report["convention"]["binding"] == cli.BINDING
    assert report["config"]["onsager"] == {"degree_bound": 8, "certificate_degree": 8}
    cb = report["checks"][-1]
    assert cb["status"] == cb["expected"] == "INCONCLUSIVE" and cb["witness_kind"] == "normal form"


def test_verify_text_marks_expected_inconclusive():
    code, out, _ = run("verify", "--target", "onsager", "--check", "O_q.note.qdg-CB")
    assert code == 0
    assert "INCONCLUSIVE-EXPECTED" in out
    assert out.startswith("# qonsager verify target=onsager")


def test_verify_unexpected_status_exits_1(monkeypatch):
    from qonsager import onsager

    real = onsager.note_checks

    def flipped(ctx):
        checks = real(ctx)
        for c in checks:
            if c.id == "O_q.note.qdg-CB":
                c.expected = "PROVED"
        return checks

    monkeypatch.setattr(onsager, "note_checks", flipped)
    code, out, _ = run("verify", "--target", "onsager", "--check", "O_q.note.qdg-CB")
    assert code == 1
    assert out.splitlines()[-1].endswith("1 with an unexpected status")


@pytest.mark.parametrize("argv", [
    ("verify", "--degree-bound", "3"),
    ("verify", "--target", "onsager", "--check", "nothing.*"),
    ("verify", "--jobs", "0"),
    ("verify", "--target", "nowhere"),
    ("reduce", "A*+"),
    ("reduce", "A*Z"),
    ("apply", "--word", "abd", "--to", "A"),
    ("apply", "--to", "A"),
    ("eliminate", "--which", "Wminus", "--k", "5"),
    ("basis", "--degree", "20"),
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(*argv)
    assert code == 2
    # argparse reports its own usage errors on the process stderr
    assert err or capsys.readouterr().err


def test_reduce_and_apply():
    assert run("reduce", "B*A")[1].strip() == "B*A"
    code, out, _ = run("apply", "--morphism", "S", "--to", "A*B")
    assert code == 0 and out.strip() == "B*A"
    assert run("apply", "--word", "bc", "--to", "A")[1].strip() == "A"
    assert run("apply", "--morphism", "Nope", "--to", "A")[0] == 2


def test_eliminate():
    code, out, _ = run("eliminate", "--which", "Wminus", "--k", "1")
    assert code == 0 and out.strip() == "Wp0 - [Gt0, Wm0]_q / (q^2-q^-2)^2"
    assert run("eliminate", "--which", "G", "--k", "0")[1].strip() == "Gt0 + (q+q^-1)*[Wp0, Wm0]"


def test_basis():
    code, out, _ = run("basis", "--degree", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# 14 irreducible words")
    assert "A*A*A*B" not in lines and "A*B*B*B" not in lines


def test_groups_target():
    code, out, _ = run("verify", "--target", "groups", "--check", "groups.translate.*", "--output", "json")
    assert code == 0
    assert json.loads(out)["checks"][0]["status"] == "PASS"


def test_jobs_preserve_order():
    args = ("verify", "--target", "onsager", "--check", "O_q.involution.*", "--output", "json")
    serial = json.loads(run(*args)[1])
    parallel = json.loads(run(*args, "--jobs", "2")[1])
    assert [c["id"] for c in serial["checks"]] == [c["id"] for c in parallel["checks"]]
    assert [c["status"] for c in parallel["checks"]] == ["PROVED"] * 6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qonsager", "eliminate", "--which", "Wplus", "--k", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "Wm0 - [Wp0, Gt0]_q / (q^2-q^-2)^2"
