import io
import json
import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from cli import EXIT_LIMIT, EXIT_OK, EXIT_USAGE, parse_part, run  # noqa: E402
from errors import ParseError  # noqa: E402
from graphcore import Graph, family  # noqa: E402


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for name in ("ORBIT_LIMIT", "FORMAT", "ENUMERATION_LIMIT"):
        monkeypatch.delenv(f"GSLAB_{name}", raising=False)


def invoke(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def write_graph(tmp_path: Path, name: str, g: Graph) -> str:
    path = tmp_path / name
    path.write_text(g.to_json())
    return str(path)


def test_gen_json_and_dot(tmp_path):
    code, out, _ = invoke("gen", "biclique", "3", "3")
    assert code == EXIT_OK
    assert Graph.from_json(out) == family("biclique", 3, 3)

    code, out, _ = invoke("gen", "biclique", "3", "3", "--format", "dot")
    assert code == EXIT_OK and out.count("--") == 9

    target = tmp_path / "star.json"
    code, out, _ = invoke("gen", "star", "5", "--out", str(target))
    assert code == EXIT_OK and "5 vertices" in out
    assert Graph.from_json(target.read_text()) == family("star", 5)


def test_gen_rejects_bad_parameters():
    code, _, err = invoke("gen", "star", "1")
    assert code == EXIT_USAGE and "star" in err
    code, _, _ = invoke("gen", "tesseract", "3")
    assert code == EXIT_USAGE


def test_lc_equiv_outputs(tmp_path):
    star = write_graph(tmp_path, "star.json", family("star", 5))
    complete = write_graph(tmp_path, "complete.json", family("complete", 5))
    path = write_graph(tmp_path, "path.json", family("path", 5))
    code, out, _ = invoke("lc-equiv", star, complete)
    assert code == EXIT_OK and out.strip() == "[0]"
    code, out, _ = invoke("lc-equiv", star, path)
    assert code == EXIT_OK and out.strip() == "NOT-EQUIVALENT"


def test_lc_equiv_up_to_iso_prints_permutation(tmp_path):
    biclique = write_graph(tmp_path, "b.json", family("biclique", 3, 3))
    binary = write_graph(tmp_path, "s.json", family("binary-star", 6))
    code, out, _ = invoke("lc-equiv", biclique, binary, "--up-to-iso")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "[0, 3, 0]"
    assert out.splitlines()[1].startswith("permutation: ")


def test_lc_orbit_json(tmp_path):
    complete = write_graph(tmp_path, "k4.json", family("complete", 4))
    code, out, _ = invoke("--format", "json", "lc-orbit", complete, "--up-to-perm")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["size"] == 2 and data["up_to_perm"] is True
    assert data["members"][0]["steps"] == []


def test_state_commands(tmp_path):
    cycle = write_graph(tmp_path, "c5.json", family("cycle", 5))
    ghz = tmp_path / "ghz.txt"
    ghz.write_text("+XXX\n+ZZI\n+IZZ\n")
    assert invoke("msc", cycle)[:2] == (EXIT_OK, "true\n")
    assert invoke("msc", str(ghz))[:2] == (EXIT_OK, "false\n")
    assert invoke("distance", cycle)[:2] == (EXIT_OK, "3\n")
    assert invoke("distance", str(ghz))[:2] == (EXIT_OK, "2\n")
    assert invoke("schmidt-rank", cycle, "--part", "0,2")[:2] == (EXIT_OK, "2\n")
    assert invoke("pp", write_graph(tmp_path, "p6.json", family("path", 6)))[:2] == (EXIT_OK, "3\n")


def test_reduce_text_and_json(tmp_path):
    ghz = tmp_path / "ghz.txt"
    ghz.write_text("+XXX\n+ZZI\n+IZZ\n")
    code, out, _ = invoke("reduce", str(ghz))
    assert code == EXIT_OK
    assert out.count("# stage") == 4
    assert Graph.from_json(out.splitlines()[-1]) == family("star", 3)

    code, out, _ = invoke("--format", "json", "reduce", str(ghz))
    data = json.loads(out)
    assert data["r"] == 1
    assert data["local_cliffords"] == [[1, "H"], [2, "H"]]


def test_css_biclique_text():
    code, out, _ = invoke("css-biclique", "2", "2")
    assert code == EXIT_OK
    assert out.startswith("+XIXX\n+IXXX\n+ZZZI\n+ZZIZ\n")
    assert "distance: 2" in out and "holds" in out


def test_css_biclique_matrices():
    code, out, _ = invoke("css-biclique", "2", "2", "--matrices")
    assert code == EXIT_OK
    assert "# H(C)\n1011\n0111\n# H(C_perp)\n1110\n1101\n" in out
    code, out, _ = invoke("--format", "json", "css-biclique", "4", "1", "--matrices")
    data = json.loads(out)
    assert data["parity_check"][0] == [1, 0, 0, 0, 1]
    assert data["dual_parity_check"] == [[1, 1, 1, 1, 1]]
    assert data["branch"] == "dual"


def test_rank_relations_json(tmp_path):
    biclique = write_graph(tmp_path, "b.json", family("biclique", 2, 2))
    code, out, _ = invoke("--format", "json", "verify-rank-relations", biclique, "--part", "0,1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["w"] == 4 and data["bp"] == 1 and data["all_hold"] is True


def test_certify(tmp_path):
    small = write_graph(tmp_path, "k6.json", family("complete", 6))
    assert invoke("certify", small)[1].strip() == "Result 1"
    biclique = write_graph(tmp_path, "b55.json", family("biclique", 5, 5))
    code, out, _ = invoke("certify", biclique)
    assert code == EXIT_OK
    assert out.splitlines() == ["Result 5", "witness: [0, 5, 0]"]


def test_verify_subset_of_checks():
    code, out, _ = invoke("verify-paper", "--only", "12", "--config-dump")
    assert code == EXIT_OK
    assert '"orbit_limit": 12' in out
    assert "PASS" in out and "FAIL" not in out


def test_bad_input_exit_codes(tmp_path):
    assert invoke("distance", str(tmp_path / "missing.json"))[0] == EXIT_USAGE
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2, "edges": [[0, 5]]}')
    assert invoke("pp", str(broken))[0] == EXIT_USAGE
    code, _, err = invoke("lc-orbit")
    assert code == EXIT_USAGE and err.startswith("error:")
    code, _, _ = invoke("schmidt-rank", write_graph(tmp_path, "p.json", family("path", 3)), "--part", "0,1,2")
    assert code == EXIT_USAGE


def test_limit_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("GSLAB_ORBIT_LIMIT", "3")
    star = write_graph(tmp_path, "star.json", family("star", 5))
    code, _, err = invoke("lc-orbit", star)
    assert code == EXIT_LIMIT
    assert "orbit_limit" in err


def test_invalid_environment_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("GSLAB_ENUMERATION_LIMIT", "lots")
    assert invoke("css-biclique", "2", "2")[0] == EXIT_USAGE


def test_parse_part():
    assert parse_part("0, 2,5") == [0, 2, 5]
    with pytest.raises(ParseError):
        parse_part("0,a")
