import io
import subprocess
import sys

import pytest

from graphgen import FIXTURES
from poflow.cli import main
from poflow.formats import parse_network

COMPANY = str(FIXTURES / "company.net")
SALES_POLICY = str(FIXTURES / "company_sales.policy")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_labels_stats_block():
    code, out = run("labels", COMPANY)
    assert code == 0
    assert out.endswith("flow stats\nA1S: {A1S}\nA2S: {A1S,A2S}\nO: {A1S,O}\n")


@pytest.mark.parametrize(
    "src, dst, expected, code",
    [
        ("S1", "A1", "GRANT LabelIncluded\n", 0),
        ("A1", "A2", "DENY LabelNotIncluded\n", 1),
        ("S1", "nobody", "DENY UnknownEntity\n", 1),
    ],
)
def test_decide(src, dst, expected, code):
    assert run("decide", COMPANY, "sales", src, dst) == (code, expected)


def test_decide_unknown_flow():
    assert run("decide", COMPANY, "ghost", "S1", "P1") == (1, "DENY UnknownFlow\n")


def test_decide_writes_audit_log(tmp_path):
    log = tmp_path / "audit.log"
    run("decide", COMPANY, "sales", "S3", "A2", "--audit-log", str(log))
    run("decide", COMPANY, "stats", "A1S", "O", "--audit-log", str(log))
    assert log.read_text().splitlines() == [
        "seq=1 flow=sales src=S3 dst=A2 verdict=GRANT reason=LabelIncluded",
        "seq=1 flow=stats src=A1S dst=O verdict=GRANT reason=LabelIncluded",
    ]


def test_check(tmp_path):
    assert run("check", COMPANY, SALES_POLICY) == (0, "conforms: yes\n")
    bad = FIXTURES.joinpath("company.net").read_text().replace(
        "# rule 7: no channel between A1 and A2", "channel A1 A2"
    )
    code, out = run("check", write(tmp_path, "bad.net", bad), SALES_POLICY)
    assert code == 1
    assert "forbidden: A1 A2\n" in out
    other = write(tmp_path, "p", "flow nowhere\n")
    assert run("check", COMPANY, other)[0] == 2


def test_lattice_flags():
    code, out = run("lattice", COMPANY)
    assert code == 0 and "no join: {A1} {A2}" in out
    assert run("lattice", COMPANY, "--expect-lattice")[0] == 1
    code, out = run("lattice", COMPANY, "--complete")
    assert "void labels: 2" in out and "void labels: 1" in out


def test_lattice_expect_on_chain(tmp_path):
    chain = write(tmp_path, "c.net", "flow c\nentity a b c\nchannel a b\nchannel b c\n")
    assert run("lattice", chain, "--expect-lattice")[0] == 0


def test_merge(tmp_path):
    a = write(tmp_path, "a.net", "flow f\nentity a top\nchannel a top\n")
    b = write(tmp_path, "b.net", "flow f\nentity b top\nchannel b top\n")
    assert run("merge", a, b)[0] == 2
    code, out = run("merge", a, b, "--shared")
    assert code == 0
    assert out == "flow f\nentity a b top\nchannel a top\nchannel b top\n"


def test_extract():
    code, out = run("extract", COMPANY, "S1", "P1", "P2", "A1", "A1S")
    assert code == 0
    system = parse_network(out)
    assert system.network("sales").entities == {"S1", "P1", "P2", "A1"}
    assert system.split_groups == {frozenset({"A1", "A1S"})}
    assert run("extract", COMPANY, "Nope")[0] == 2


def test_dot_and_simulate():
    code, out = run("dot", COMPANY)
    assert code == 0 and out.startswith("digraph poflow {")
    assert run("simulate", COMPANY, "stats", "A1S") == (0, "{A1S,A2S,O}\n")
    assert run("simulate", COMPANY, "sales", "S3") == (0, "{A1,A2,P1,P2,P3,S3}\n")


def test_edit():
    code, out = run("edit", COMPANY, "--add", "A1", "A2", "--labels")
    assert code == 0
    assert "A2: {A1,A2,P1,P2,P3,S1,S2,S3,S4}\n" in out
    code, out = run("edit", COMPANY, "--remove", "P3", "P2", "--labels")
    assert "P1: {P1,P2,S1,S2}\n" in out
    code, out = run("edit", COMPANY, "--add", "A1", "A2")
    assert "channel A1 A2\n" in out
    assert run("edit", COMPANY, "--remove", "A1", "A2")[0] == 2


def test_missing_file_and_bad_syntax(tmp_path, capsys):
    assert run("labels", str(tmp_path / "missing.net"))[0] == 2
    bad = write(tmp_path, "bad.net", "flow f\nentity S1\nchannel S1 P9\n")
    assert run("labels", bad)[0] == 2
    assert "line 3" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "poflow.cli", "lattice", COMPANY, "--complete"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
