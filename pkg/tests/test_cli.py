import io
import json
import subprocess
import sys

import pytest

from toricomplex.cli import EXIT_CLAIM, EXIT_INVALID, EXIT_IO, EXIT_OK, run

P2_DOC = {
    "rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
    "max_cones": [[0, 1], [1, 2], [0, 2]],
    "boundary": ["1", "1", "1"],
}

BLP2_DOC = {
    "rank": 2, "rays": [[1, 0], [0, 1], [-1, -1], [1, 1]],
    "max_cones": [[0, 2], [0, 3], [1, 2], [1, 3]],
    "boundary": ["1", "1", "1", "1"],
}

A1_GERM_DOC = {
    "rank": 2, "rays": [[0, 1], [2, 1]], "max_cones": [[0, 1]],
    "v": [1, 1],
}

TORSION_GERM_DOC = {
    "rank": 2, "rays": [[1, 2], [1, -2]], "max_cones": [[0, 1]],
    "v": [1, 0],
}


def invoke(capsys, args, doc=None, monkeypatch=None):
    if doc is not None:
        assert monkeypatch is not None
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code = run(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def invoke_json(capsys, args, doc, monkeypatch):
    code, out, err = invoke(capsys, args + ["--format", "json"], doc,
                            monkeypatch)
    return code, (json.loads(out) if out else None), err


def write_doc(tmp_path, doc):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_reads_a_file(capsys, tmp_path):
    path = write_doc(tmp_path, P2_DOC)
    code, out, _ = invoke(capsys, ["validate", "--input", path])
    assert code == EXIT_OK
    assert "ok: true" in out
    assert "log_cy: true" in out


def test_validate_reads_stdin_by_default(capsys, monkeypatch):
    code, out, _ = invoke(capsys, ["validate"], P2_DOC, monkeypatch)
    assert code == EXIT_OK
    assert "rays: 3" in out


def test_exit_codes_by_failure_class(capsys, tmp_path, monkeypatch):
    # parse failure
    monkeypatch.setattr("sys.stdin", io.StringIO('{"rank":'))
    assert run(["validate"]) == EXIT_IO
    # missing file
    assert run(["validate", "--input", str(tmp_path / "no.json")]) == EXIT_IO
    capsys.readouterr()
    # malformed pair document
    bad = dict(P2_DOC, mode="affine")
    code, _, err = invoke(capsys, ["validate"], bad, monkeypatch)
    assert code == EXIT_INVALID and "invalid input" in err
    # usage problems never collide with the claim-failure code
    assert run(["frobnicate"]) == EXIT_INVALID
    assert run(["minimize", "--orbifold-cap", "0"]) == EXIT_INVALID
    assert run(["minimize", "--orbifold-cap", "65"]) == EXIT_INVALID
    assert run(["complexity", "--cone", "a,b"]) == EXIT_INVALID
    capsys.readouterr()


def test_json_output_is_deterministic(capsys, tmp_path):
    path = write_doc(tmp_path, P2_DOC)
    args = ["minimize", "--input", path, "--format", "json"]
    code, first, _ = invoke(capsys, args)
    assert code == EXIT_OK
    _, second, _ = invoke(capsys, args)
    assert first == second
    payload = json.loads(first)
    assert (payload["c"], payload["c_fine"], payload["c_orb"]) == \
        ("0", "0", "0")
    assert payload["nonnegative"] is True
    assert payload["cl_rank"] == 1


def test_classgroup_reports_torsion(capsys, monkeypatch):
    doc = {"rank": 2, "rays": [[1, 2], [1, -2]], "max_cones": [[0, 1]]}
    code, payload, _ = invoke_json(capsys, ["classgroup"], doc, monkeypatch)
    assert code == EXIT_OK
    assert payload["free_rank"] == 0
    assert payload["torsion"] == [4]
    assert [c["torsion"] for c in payload["ray_classes"]] == [[1], [3]]


def test_complexity_defaults_to_prime_decomposition(capsys, monkeypatch):
    explicit = dict(P2_DOC, decomposition=[
        {"b": "1", "support": {str(i): "1"}} for i in range(3)])
    code, a, _ = invoke_json(capsys, ["complexity"], P2_DOC, monkeypatch)
    assert code == EXIT_OK
    code, b, _ = invoke_json(capsys, ["complexity"], explicit, monkeypatch)
    assert code == EXIT_OK
    assert a == b
    assert a["c"] == "0" and a["norm"] == "3"


def test_complexity_with_orbifold_entries(capsys, monkeypatch):
    doc = dict(P2_DOC, orbifold={"0": 2}, decomposition=[
        {"b": "1/2", "support": {"0": "1"}},
        {"b": "1", "support": {"1": "1"}},
        {"b": "1", "support": {"2": "1"}},
    ])
    code, payload, _ = invoke_json(capsys, ["complexity"], doc, monkeypatch)
    assert code == EXIT_OK
    # plain and fine values are undefined once a multiplicity exceeds one
    assert payload["c"] is None and payload["c_fine"] is None
    assert payload["c_orb"] == "1/2"


def test_complexity_mode_override_builds_a_germ(capsys, monkeypatch):
    doc = {"rank": 2, "rays": [[0, 1], [2, 1]], "max_cones": [[0, 1]],
           "boundary": ["1", "1"]}
    args = ["complexity", "--mode", "local", "--cone", "0,1"]
    code, payload, _ = invoke_json(capsys, args, doc, monkeypatch)
    assert code == EXIT_OK
    assert payload["mode"] == "local"
    assert payload["c_orb"] == "0"
    # without the override the incomplete fan cannot be projective
    code, _, err = invoke(capsys, ["complexity"], doc, monkeypatch)
    assert code == EXIT_INVALID and "complete" in err


def test_adjoin_requires_the_wall_hypothesis(capsys, monkeypatch):
    # the prime over (-1,-1) shares no wall with the center (1,1)
    code, _, err = invoke(capsys, ["adjoin", "--ray", "3"], BLP2_DOC,
                          monkeypatch)
    assert code == EXIT_CLAIM and "claim failed" in err
    good = dict(BLP2_DOC, decomposition=[
        {"b": "1", "support": {"0": "1"}},
        {"b": "1", "support": {"1": "1"}},
        {"b": "1", "support": {"3": "1"}},
    ])
    code, payload, _ = invoke_json(capsys, ["adjoin", "--ray", "3"], good,
                                   monkeypatch)
    assert code == EXIT_OK
    assert payload["ok"] is True
    assert (payload["value_e"], payload["value_x"]) == ("0", "1")
    assert payload["sigma_is_boundary"] is True


def test_adjoin_rejects_out_of_range_ray(capsys, monkeypatch):
    code, _, err = invoke(capsys, ["adjoin", "--ray", "9"], BLP2_DOC,
                          monkeypatch)
    assert code == EXIT_INVALID and "out of range" in err


def test_cone_identifies_the_quadric_germ(capsys, monkeypatch):
    code, payload, _ = invoke_json(capsys, ["cone"], A1_GERM_DOC, monkeypatch)
    assert code == EXIT_OK
    assert payload["ok"] is True
    assert payload["e_fan"]["rank"] == 1
    assert sorted(payload["polarization"]) == ["0", "2"]
    assert sorted(payload["ray_map"]) == [0, 1]


def test_cone_rejects_boundary_vectors(capsys, monkeypatch):
    doc = dict(A1_GERM_DOC, v=[0, 1])
    code, _, err = invoke(capsys, ["cone"], doc, monkeypatch)
    assert code == EXIT_INVALID and "interior" in err


def test_hilbert_quadric_monoid(capsys, monkeypatch):
    code, payload, _ = invoke_json(capsys, ["hilbert"], A1_GERM_DOC,
                                   monkeypatch)
    assert code == EXIT_OK
    assert payload["generators"] == [[0, 2, 1], [1, 1, 1], [2, 0, 1]]
    assert payload["tau"] == [1, 1, 1]
    assert payload["cover_steps"] == []


def test_hilbert_torsion_needs_the_cover_flag(capsys, monkeypatch):
    code, _, err = invoke(capsys, ["hilbert"], TORSION_GERM_DOC, monkeypatch)
    assert code == EXIT_CLAIM and "--torsion-cover" in err
    code, payload, _ = invoke_json(capsys, ["hilbert", "--torsion-cover"],
                                   TORSION_GERM_DOC, monkeypatch)
    assert code == EXIT_OK
    assert payload["class_torsion"] == [2]
    assert len(payload["cover_steps"]) == 1
    assert payload["cover_steps"][0]["order"] == 2
    assert payload["tau"] == [1, 1, 1]


def test_check_contract_blowdown(capsys, monkeypatch):
    doc = {
        "pair": BLP2_DOC,
        "target": {"rays": P2_DOC["rays"], "max_cones": P2_DOC["max_cones"]},
        "ray": 3,
    }
    code, payload, _ = invoke_json(capsys, ["check", "contract"], doc,
                                   monkeypatch)
    assert code == EXIT_OK
    assert payload["ok"] is True
    assert payload["dropped_norm"] == "1"
    assert payload["equality_plain"] is True
    assert payload["values_target"]["c"] == "0"


def test_check_small_flop(capsys, monkeypatch):
    conifold = [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    doc = {
        "pair": {"rank": 3, "rays": conifold,
                 "max_cones": [[0, 1, 3], [0, 2, 3]],
                 "boundary": ["1"] * 4, "mode": "birational"},
        "target": {"rays": conifold, "max_cones": [[0, 1, 2], [1, 2, 3]]},
    }
    code, payload, _ = invoke_json(capsys, ["check", "small"], doc,
                                   monkeypatch)
    assert code == EXIT_OK
    assert payload["values_source"] == payload["values_target"]


def test_check_extract_accepts_lc_places_only(capsys, monkeypatch):
    good = {"pair": P2_DOC, "vectors": [[1, 1]]}
    code, payload, _ = invoke_json(capsys, ["check", "extract"], good,
                                   monkeypatch)
    assert code == EXIT_OK
    assert payload["discrepancies"] == ["0"]
    bad = {"pair": dict(P2_DOC, boundary=["1", "1", "0"]),
           "vectors": [[0, -1]]}
    code, _, err = invoke(capsys, ["check", "extract"], bad, monkeypatch)
    assert code == EXIT_CLAIM and "log discrepancy" in err


def test_check_suite_is_green_and_thread_invariant(capsys, monkeypatch):
    monkeypatch.setenv("TORICOMPLEX_THREADS", "1")
    code, serial, _ = invoke(capsys, ["check", "suite", "--format", "json"])
    assert code == EXIT_OK
    monkeypatch.setenv("TORICOMPLEX_THREADS", "4")
    code, parallel, _ = invoke(capsys,
                               ["check", "suite", "--format", "json"])
    assert code == EXIT_OK
    assert serial == parallel
    payload = json.loads(serial)
    assert payload["ok"] is True
    assert [row["fan"] for row in payload["fans"]] == \
        ["P1", "P2", "P3", "P1xP1", "BlP2", "F1", "F2"]
    assert all(row["ok"] for row in payload["fans"])


def test_module_entry_point_runs(tmp_path):
    path = write_doc(tmp_path, P2_DOC)
    proc = subprocess.run(
        [sys.executable, "-m", "toricomplex.cli", "validate",
         "--input", path],
        capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert "ok: true" in proc.stdout


def test_surgery_documents_are_validated(capsys, monkeypatch):
    code, _, err = invoke(capsys, ["check", "contract"], {"ray": 3},
                          monkeypatch)
    assert code == EXIT_INVALID and "pair" in err
    code, _, err = invoke(capsys, ["check", "contract"],
                          {"pair": BLP2_DOC, "ray": 3}, monkeypatch)
    assert code == EXIT_INVALID and "target" in err
    code, _, err = invoke(capsys, ["check", "extract"], {"pair": P2_DOC},
                          monkeypatch)
    assert code == EXIT_INVALID and "vectors" in err


@pytest.mark.parametrize("breakage, message", [
    ({"orbifold": {"0": 0}}, "positive integer"),
    ({"orbifold": {"7": 2}}, "out of range"),
    ({"decomposition": [{"support": {"0": "1"}}]}, '"b"'),
    ({"decomposition": [{"b": "1", "support": {"0": "x"}}]}, "rational"),
])
def test_bad_decomposition_documents(capsys, monkeypatch, breakage, message):
    doc = dict(P2_DOC, **breakage)
    code, _, err = invoke(capsys, ["complexity"], doc, monkeypatch)
    assert code == EXIT_INVALID
    assert message in err
