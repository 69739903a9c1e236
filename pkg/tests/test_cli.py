import json
from pathlib import Path

import pytest

from gridham.cli import main

DATA = Path(__file__).parent / "data"


@pytest.fixture
def mask(tmp_path):
    def write(text, name="g.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_check_square(capsys, mask):
    code, res = run_json(capsys, "check", mask("##\n##\n"))
    assert code == 0
    assert res["payload"]["hamiltonian"] is True
    assert len(res["payload"]["cycle"]) == 4
    assert set(res) == {"command", "instance", "payload", "config", "timing", "version"}


def test_check_odd_block(capsys, mask):
    code, out, _ = run(capsys, "check", mask("###\n###\n###\n"))
    assert code == 1
    assert out.startswith("not hamiltonian")


def test_parse_error_exit_code(capsys, mask):
    code, out, err = run(capsys, "check", mask("##\n#?\n"))
    assert code == 2 and out == ""
    assert "line 2, column 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.txt"))
    assert code == 2 and "cannot read" in err


def test_chipped_aztec_fixture_is_hamiltonian(capsys, mask):
    _, text, _ = run(capsys, "gen", "chipped-aztec", "4", "3", "--seed", "1")
    code, _, _ = run(capsys, "check", mask(text))
    assert code == 0


def test_mincycles(capsys, mask):
    _, text, _ = run(capsys, "gen", "chipped-aztec", "3", "0")
    code, res = run_json(capsys, "mincycles", mask(text))
    assert code == 1 and res["payload"]["minimum"] == 3
    code, res = run_json(capsys, "mincycles", mask("####\n#..#\n#..#\n####\n"))
    assert code == 0 and res["payload"]["minimum"] == 1
    assert len(res["payload"]["components"]) == 1


def test_gen_rect(capsys):
    code, out, _ = run(capsys, "gen", "rect", "2", "4")
    assert code == 0 and out == "##\n##\n##\n##\n"


def test_gen_aztec_vertex_count(capsys):
    _, res = run_json(capsys, "gen", "aztec", "2")
    assert res["payload"]["vertices"] == 40
    assert res["payload"]["mask"].count("#") == 40


def test_gen_bad_params(capsys):
    code, _, err = run(capsys, "gen", "rect", "2")
    assert code == 2 and "width height" in err
    code, _, _ = run(capsys, "gen", "tower", "1")
    assert code == 2


def test_render_golden(capsys, mask):
    code, out, _ = run(capsys, "render", mask("##\n##\n"))
    assert code == 0 and out == (DATA / "render_2x2.txt").read_text()
    code, out, _ = run(capsys, "render", mask("##\n##\n"), "--svg")
    assert out == (DATA / "render_2x2.svg").read_text()


def test_render_given_cover(capsys, mask, tmp_path):
    g = mask("####\n####\n")
    _, res = run_json(capsys, "sample", g, "--seed", "1", "--steps", "3", "--burnin", "0")
    cover = tmp_path / "c.json"
    cover.write_text(json.dumps(res["payload"]["samples"][0]))
    code, out, _ = run(capsys, "render", g, "--cover", str(cover))
    assert code == 0 and "┌" in out


def test_oracle_count(capsys, mask):
    _, text, _ = run(capsys, "gen", "rect", "4", "4")
    code, res = run_json(capsys, "oracle", mask(text))
    p = res["payload"]
    assert (p["covers"], p["hamiltonian_cycles"], p["minimum"], p["components"]) == (18, 6, 1, 1)
    assert p["by_cycles"] == {"1": 6, "2": 7, "3": 4, "4": 1}


def test_oracle_cap(capsys, mask):
    _, text, _ = run(capsys, "gen", "rect", "6", "7")
    code, _, err = run(capsys, "oracle", mask(text))
    assert code == 2 and "cap" in err


def test_sample_is_repeatable(capsys, mask):
    g = mask("####\n####\n####\n####\n")
    a = run(capsys, "sample", g, "--seed", "7", "--steps", "300", "--format", "json")
    b = run(capsys, "sample", g, "--seed", "7", "--steps", "300", "--format", "json")
    assert a == b


def test_sample_hamiltonian(capsys, mask):
    code, res = run_json(capsys, "sample", mask("####\n####\n####\n####\n"), "--hamiltonian", "--seed", "3")
    assert code == 0 and res["payload"]["cover"]["p"] == 1
    code, _, err = run(capsys, "sample", mask("###\n###\n###\n"), "--hamiltonian")
    assert code == 2


def test_estimate_parallel_matches_serial(capsys, mask):
    g = mask("####\n####\n####\n####\n")
    args = ("estimate", g, "--seed", "5", "--steps", "2000", "--chains", "3")
    _, serial = run_json(capsys, *args)
    _, parallel = run_json(capsys, *args, "--jobs", "2")
    assert serial["payload"] == parallel["payload"]


def test_timing_is_opt_in(capsys, mask):
    _, res = run_json(capsys, "check", mask("##\n##\n"))
    assert res["timing"] is None
    _, res = run_json(capsys, "check", mask("##\n##\n"), "--timing")
    assert res["timing"]["seconds"] >= 0


def test_bad_component(capsys, mask):
    code, _, err = run(capsys, "sample", mask("##\n##\n"), "--component", "x")
    assert code == 2 and "signature" in err
