import hashlib
import json

import pytest

from assemblies import cli
from assemblies import workspace as WS


def code_of(argv):
    return cli.main(argv + ["--json"])


def out_json(capsys, argv):
    code = code_of(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("argv, code", [
    (["eval", "K", "S", "K"], 0),
    (["eval", "S (S K K) (S K K)", "S (S K K) (S K K)", "--fuel", "5"], 2),
    (["eval", "K"], 0),
    (["compile", "\\x y. y x"], 0),
    (["compile", "\\x. x", "--eta"], 0),
    (["pca-check", "--samples", "50"], 0),
    (["pca-check", "--pca", "num", "--samples", "50"], 0),
    (["asm", "track"], 0),
    (["asm", "limits", "f", "g"], 0),
    (["asm", "factorize", "f"], 0),
    (["sub", "meet", "R", "Q"], 0),
    (["sub", "join", "R", "Q"], 0),
    (["sub", "rleq", "R", "Q"], 0),
    (["sub", "rleq", "Q", "R"], 1),
    (["realize", "top"], 0),
    (["realize", "bot"], 1),
    (["realize", "p"], 0),
    (["realize", "q"], 0),
    (["axioms"], 0),
    (["axioms", "--situation", "doubled-F"], 1),
    (["axioms", "--situation", "broken-app"], 1),
    (["reconstruct"], 0),
])
def test_exit_codes(argv, code, capsys):
    assert code_of(argv) == code
    capsys.readouterr()


def test_usage_errors_exit_3(capsys):
    assert cli.main(["bogus"]) == 3
    assert cli.main(["eval", "K ("]) == 3
    assert cli.main(["realize", "forall x:Nope. top"]) == 3
    assert cli.main(["realize", "R(x)"]) == 3
    assert cli.main(["eval", "K", "--filter", "rel:K+Q"]) == 3
    assert cli.main(["sub", "meet", "R", "T"]) == 3
    capsys.readouterr()


def test_eval_json(capsys):
    code, rep = out_json(capsys, ["eval", "K", "S", "K"])
    assert code == 0 and rep["status"] == "pass"
    assert "S" in json.dumps(rep["checks"])
    assert rep["params"]["pca"] == "sk" and rep["params"]["seed"] == 0


def test_realize_reports_witness(capsys):
    code, rep = out_json(capsys, ["realize", "top"])
    assert rep["checks"][0]["detail"]["witness"] == "S K K"


def test_filter_flag_changes_params(capsys):
    _, rep = out_json(capsys, ["realize", "top", "--filter", "rel:K+S"])
    assert "K+S" in json.dumps(rep["params"])


def test_output_is_deterministic(capsys):
    digests = set()
    for _ in range(2):
        cli.main(["axioms", "--controls", "--json"])
        digests.add(hashlib.sha256(capsys.readouterr().out.encode()).hexdigest())
    assert len(digests) == 1


def test_summary_goes_to_stderr(capsys):
    cli.main(["eval", "K", "S", "K"])
    out, err = capsys.readouterr()
    json.loads(out)
    assert err.strip()


def test_workspace_file(tmp_path, capsys):
    path = tmp_path / "ws.txt"
    path.write_text(WS.DEMO + "formula r = forall x:X. Q(x)\n")
    assert cli.main(["realize", "r", "--workspace", str(path), "--json"]) == 0
    assert cli.main(["axioms", "--workspace", str(path), "--json"]) == 0
    capsys.readouterr()


def test_workspace_errors_have_line_numbers(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("pca sk\nobject Z = {0, 1}\nmap s : Z -> Q { 0: 0 }\n")
    assert cli.main(["asm", "track", "--workspace", str(path)]) == 3
    assert "line 3" in capsys.readouterr().err
    with pytest.raises(WS.WorkspaceError) as exc:
        WS.loads("bound x\n")
    assert exc.value.line == 1


def test_workspace_comments_and_atoms():
    ws = WS.loads("# header\nobject Z = {0}  # trailing\nassembly A on {0} { 0: [#a] }\n")
    assert list(ws.objects) == ["Z"]
    assert ws.ctx.show(next(iter(ws.assemblies["A"].rho(0)))) == "#a"


def test_workspace_settings_and_overrides():
    ws = WS.loads("pca num\nbound 4\n", {"bound": 6})
    assert ws.settings.pca == "num" and ws.settings.bound == 6
    with pytest.raises(WS.WorkspaceError):
        WS.loads("pca nope\n")


def test_untrackable_morphism_is_a_workspace_error():
    text = "assembly X on {a, b} { a: [K], b: [S] }\nmorphism w : X -> X map { a: b, b: a }\n"
    with pytest.raises(WS.WorkspaceError) as exc:
        WS.loads(text)
    assert exc.value.line == 2
