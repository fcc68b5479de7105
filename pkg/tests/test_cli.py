import io
import json

import pytest

from artinkernels.cli import (InputError, JobConfig, fixture_text, main,
                              parse_input, run, self_check, serialize_input)
from artinkernels.scalars import FieldSpec


SQUARE = fixture_text("square")


def test_parse_square_fixture():
    parsed = parse_input(SQUARE)
    assert parsed.graph.vertices == ("v1", "v2", "v3", "v4")
    assert len(parsed.graph.edge_list) == 4
    assert parsed.character.values == (1, 2, 1, 2)
    assert parsed.field == FieldSpec()


def test_parse_errors_carry_line_numbers():
    with pytest.raises(InputError) as err:
        parse_input("vertex a 1\nvertex b 1\nedge a b 3\n")
    assert err.value.line == 3 and "odd label" in str(err.value)

    with pytest.raises(InputError) as err:
        parse_input("vertex a 1\nedge a z 2\n")
    assert err.value.line == 2 and "unknown vertex" in str(err.value)

    with pytest.raises(InputError) as err:
        parse_input("# nothing\n")
    assert "empty graph" in str(err.value)

    with pytest.raises(InputError):
        parse_input("vertex a 1\nvertex a 2\n")


def test_roundtrip_on_fixtures():
    for name in ("dihedral4", "square", "square_diagonal", "square_diagonal_chi2"):
        text = fixture_text(name)
        parsed = parse_input(text)
        out = serialize_input(parsed.graph, parsed.character, parsed.field)
        again = parse_input(out)
        assert again.graph.vertices == parsed.graph.vertices
        assert again.graph.labels == parsed.graph.labels
        assert again.character.weights == parsed.character.weights
        assert again.field == parsed.field
        assert serialize_input(again.graph, again.character, again.field) == out


def test_run_square_report():
    rep = run(JobConfig(text=SQUARE))
    assert rep.ok
    data = rep.data
    assert data["input"]["normalization_divisor"] == 1
    assert data["classification"]["fc_type"] is True
    assert data["torsion_support"]["values"] == [2, 6]
    mods = {m["homology_degree"]: m for m in data["homology"]["modules"]}
    assert mods[1]["free_rank"] == 0
    assert mods[1]["invariant_factors"] == [
        "-1 + t", "-1 + t - t^3 + t^4", "-1 + t^2 - t^3 + t^5"]
    assert mods[1]["primary_parts"] == {"2": [1, 2], "6": [1, 1]}
    assert mods[2] == {**mods[2], "free_rank": 1, "invariant_factors": []}
    assert all(c["agree"] for c in data["cross_checks"])
    assert {m for c in data["cross_checks"] for m in c["methods"]} >= {
        "snf", "ss", "forest", "resonant"}


def test_run_normalizes_characters():
    doubled = SQUARE.replace("vertex v1 1", "vertex v1 2") \
                    .replace("vertex v2 2", "vertex v2 4") \
                    .replace("vertex v3 1", "vertex v3 2") \
                    .replace("vertex v4 2", "vertex v4 4")
    rep = run(JobConfig(text=doubled))
    assert rep.data["input"]["normalization_divisor"] == 2
    assert rep.data["homology"]["modules"][0]["invariant_factors"] == \
        run(JobConfig(text=SQUARE)).data["homology"]["modules"][0]["invariant_factors"]


def test_report_json_deterministic_without_timing():
    a = run(JobConfig(text=SQUARE, fmt="json"))
    b = run(JobConfig(text=SQUARE, fmt="json"))
    assert json.dumps(a.data, indent=2) == json.dumps(b.data, indent=2)


def test_field_override_and_methods_subset():
    rep = run(JobConfig(text=fixture_text("dihedral4"), field=FieldSpec(2),
                        methods=("snf", "resonant")))
    mods = rep.data["homology"]["modules"]
    assert mods[0]["free_rank"] == 1 and mods[0]["invariant_factors"] == []
    assert "ss" not in rep.data["methods"]
    assert rep.data["methods"]["resonant"]["h1_free_rank"] == 1


def test_ss_skipped_over_prime_fields_with_reason():
    rep = run(JobConfig(text=fixture_text("square_diagonal")))
    assert rep.data["methods"]["ss"]["ran"] is False
    assert "characteristic zero" in rep.data["methods"]["ss"]["reason"]


def test_forest_skipped_on_disconnected_input():
    text = "field q\nvertex a 1\nvertex b 1\n"
    rep = run(JobConfig(text=text))
    assert rep.data["methods"]["forest"]["ran"] is False
    assert "connected" in rep.data["methods"]["forest"]["reason"]
    # the componentwise degree-0 torsion split is still checked
    assert any("components" in c["subject"] for c in rep.data["cross_checks"])
    assert rep.ok


def test_dump_flags():
    rep = run(JobConfig(text=SQUARE, dump_pages=True, dump_matrices=True))
    assert "pages" in rep.data["methods"]["ss"]
    assert "2" in rep.data["methods"]["ss"]["pages"]
    assert "matrices" in rep.data


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "g.graph"
    good.write_text(SQUARE)
    assert main([str(good)]) == 0
    out = capsys.readouterr().out
    assert "status: ok" in out

    assert main([str(good), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"].startswith("artinkernels-report/")

    bad = tmp_path / "bad.graph"
    bad.write_text("vertex a 1\nedge a a 2\n")
    assert main([str(bad)]) == 2
    assert main(["--no-such-flag"]) == 1
    assert main([]) == 1
    assert main([str(good), "--methods", "bogus"]) == 1
    assert main([str(good), "--field", "p:4"]) == 1  # 4 is not prime


def test_main_missing_file_is_input_error(tmp_path):
    assert main([str(tmp_path / "nope.graph")]) == 2


def test_zero_character_is_input_error():
    with pytest.raises(InputError):
        run(JobConfig(text="vertex a 0\nvertex b 0\n"))


def test_self_check_passes():
    buf = io.StringIO()
    assert self_check(out=buf) == 0
    lines = buf.getvalue().strip().splitlines()
    assert len(lines) == 6 and all(line.startswith("[ok]") for line in lines)


def test_kmax_flag_caps_degrees():
    rep = run(JobConfig(text=fixture_text("square_diagonal"), k_max=0))
    assert [m["k"] for m in rep.data["homology"]["modules"]] == [0]


def test_single_vertex_graph_run():
    rep = run(JobConfig(text="vertex a 2\n"))
    assert rep.ok
    assert rep.data["input"]["normalization_divisor"] == 2
    mods = rep.data["homology"]["modules"]
    assert len(mods) == 1
    assert mods[0]["free_rank"] == 0 and mods[0]["invariant_factors"] == []
    assert rep.data["methods"]["resonant"]["h1_free_rank"] == 0


def test_disconnected_resonant_prime_field_run():
    text = ("field p 2\n"
            "vertex a 1\nvertex b -1\nvertex x 1\nvertex y 1\nvertex z 0\n"
            "edge a b 4\n"        # resonant edge over GF(2)
            "edge x y 2\nedge y z 2\n")
    rep = run(JobConfig(text=text))
    assert rep.ok, rep.data["cross_checks"]
    assert rep.data["classification"]["connected"] is False
    assert rep.data["resonance"]["edges"] == ["a-b"]
    assert rep.data["resonance"]["vertices"] == ["z"]
    assert rep.data["torsion_support"]["available"] is False
    assert any("components" in c["subject"] for c in rep.data["cross_checks"])


def test_larger_sparse_graph_stays_quick():
    import time
    lines = ["field q"] + [f"vertex w{i} {1 + (i % 3)}" for i in range(10)]
    lines += [f"edge w{i} w{i+1} {4 if i % 2 else 2}" for i in range(9)]
    lines += ["edge w0 w9 2", "edge w2 w7 6"]
    t0 = time.perf_counter()
    rep = run(JobConfig(text="\n".join(lines)))
    assert rep.ok
    assert time.perf_counter() - t0 < 20
    mods = rep.data["homology"]["modules"]
    assert mods[0]["free_rank"] == 0  # connected reduced graph


def test_forest_budget_env_var(monkeypatch):
    from artinkernels.spectral import FOREST_BUDGET_ENV
    monkeypatch.setenv(FOREST_BUDGET_ENV, "2")
    rep = run(JobConfig(text=SQUARE))
    assert rep.data["methods"]["forest"]["ran"] is False
    assert "budget" in rep.data["methods"]["forest"]["reason"].lower() or \
        "raise" in rep.data["methods"]["forest"]["reason"]


def test_main_exit_code_3_on_mismatch(tmp_path, monkeypatch, capsys):
    import artinkernels.cli as cli

    def fake_run(job):
        return cli.Report({
            "input": {"field": "Q", "normalization_divisor": 1},
            "classification": {"fc_type": True, "connected": True,
                               "clique_dimension": 0},
            "resonance": {"vertices": [], "edges": []},
            "torsion_support": {"available": True, "values": []},
            "homology": {"modules": []},
            "cross_checks": [{"subject": "synthetic", "methods": ["a", "b"],
                              "agree": False, "detail": ""}],
            "status": {"ok": False, "mismatches": 1},
        })

    monkeypatch.setattr(cli, "run", fake_run)
    path = tmp_path / "g.graph"
    path.write_text(SQUARE)
    assert cli.main([str(path)]) == 3
    assert "MISMATCH" in capsys.readouterr().out
    # ... but not when cross-checking is switched off
    monkeypatch.setattr(cli, "run", fake_run)
    assert cli.main([str(path), "--no-cross-check"]) == 0
