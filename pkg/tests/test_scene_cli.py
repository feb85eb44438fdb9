import json
from pathlib import Path

import pytest

from toriq.cli import main, render_text
from toriq.example import SCENE, builtin_scene_json
from toriq.scene import (
    SceneParseError,
    SceneValidationError,
    builtin_scene,
    load_scene,
    parse_integer,
    parse_rational,
)


# ---------------------------------------------------------------------------
# scene loading


def test_builtin_scene_matches_example_objects(ex):
    scene = builtin_scene()
    assert scene.lattices == {"N4": 4, "N3": 3}
    for name, cone in ex.cones.items():
        if name in scene.cones:
            assert scene.cones[name] == cone
    assert scene.fans["Delta"] == ex.source_fan
    assert scene.fans["C3"] == ex.target_fan
    assert scene.systems["Ytilde"] == ex.system
    assert scene.maps["P"] == ex.lattice_map
    assert scene.weights["action"] == ex.weight
    assert scene.points["t235"].coset.coords == (2, 3, 5)


def test_shipped_scene_file_matches_builtin():
    path = Path(__file__).resolve().parent.parent / "scenes" / "example.json"
    assert path.read_text().strip() == builtin_scene_json().strip()
    loaded = load_scene(path)
    assert loaded.systems["Ytilde"] == builtin_scene().systems["Ytilde"]


def test_shipped_punctured_plane_scene(capsys):
    path = Path(__file__).resolve().parent.parent / "scenes" / "punctured-plane.json"
    scene = load_scene(path)
    assert not scene.systems["DoubledLine"].separated
    code, out, _ = run_cli(capsys, "--scene", str(path), "identify", "--system", "DoubledLine")
    assert code == 0
    # duplicated chart cones get chart-qualified labels
    assert "~y_halfline#0 = ~y_halfline#1" in out
    code, out, _ = run_cli(capsys, "--scene", str(path), "verify-example")
    assert code == 0  # verify-example always runs on the built-in data


def test_empty_scene():
    scene = load_scene({})
    assert not scene.cones and not scene.fans and not scene.points


def test_big_integers_survive():
    big = 10**40
    scene = load_scene(
        {
            "lattices": {"N": 1},
            "cones": {"c": {"lattice": "N", "generators": [[str(big)]]}},
            "weights": {"w": [str(-big)]},
        }
    )
    assert scene.cones["c"].rays == ((1,),)  # primitive
    assert scene.weights["w"] == (-big,)


def test_float_rejected():
    with pytest.raises(SceneParseError):
        load_scene({"lattices": {"N": 1}, "weights": {"w": [1.5]}})


def test_rational_parsing():
    assert parse_rational("3/4") == 0.75
    assert parse_rational("-7") == -7
    assert parse_integer("12") == 12
    with pytest.raises(SceneParseError):
        parse_integer("1/2")
    with pytest.raises(SceneParseError):
        parse_rational("abc")


def test_invalid_fan_scene_reports_entity():
    doc = {
        "lattices": {"N": 2},
        "cones": {
            "quad": {"lattice": "N", "generators": [["1", "0"], ["0", "1"]]},
            "diag": {"lattice": "N", "generators": [["1", "1"]]},
        },
        "fans": {"bad": {"lattice": "N", "maximal_cones": ["quad", "diag"]}},
    }
    with pytest.raises(SceneValidationError) as err:
        load_scene(doc)
    assert err.value.entity == "bad"
    assert "face" in err.value.reason


def test_unknown_cone_reference():
    doc = {
        "lattices": {"N": 2},
        "fans": {"f": {"lattice": "N", "maximal_cones": ["missing"]}},
    }
    with pytest.raises(SceneValidationError):
        load_scene(doc)


def test_bad_matrix_shape():
    doc = dict(SCENE)
    doc = json.loads(json.dumps(SCENE))
    doc["maps"]["P"]["matrix"] = [["1", "0"], ["0", "1"]]
    with pytest.raises(SceneValidationError) as err:
        load_scene(doc)
    assert err.value.entity == "P"


def test_malformed_json():
    with pytest.raises(SceneParseError):
        load_scene("{not json")


def test_generator_rank_mismatch():
    doc = {
        "lattices": {"N": 2},
        "cones": {"c": {"lattice": "N", "generators": [["1", "0", "0"]]}},
    }
    with pytest.raises(SceneValidationError):
        load_scene(doc)


def test_fan_and_system_share_namespace():
    doc = {
        "lattices": {"N": 1},
        "cones": {
            "r": {"lattice": "N", "generators": [["1"]]},
            "z": {"lattice": "N", "generators": []},
        },
        "fans": {"X": {"lattice": "N", "maximal_cones": ["r"]}},
        "systems": {"X": {"lattice": "N", "charts": ["r"], "gluing": []}},
    }
    with pytest.raises(SceneValidationError):
        load_scene(doc)


# ---------------------------------------------------------------------------
# CLI


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_verify_example(capsys):
    code, out, _ = run_cli(capsys, "verify-example")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 8  # seven checks plus the overall line
    assert all(line.startswith("[PASS]") for line in lines[:7])
    assert lines[-1].startswith("overall: PASS")


def test_cli_limits_two_points(capsys):
    code, out, _ = run_cli(
        capsys, "limits", "--system", "Ytilde", "--v", "1,1,0", "--point", "torus:2,3,5"
    )
    assert code == 0
    assert "2 point(s)" in out
    assert "~y_tau1" in out and "~y_rho4" in out


def test_cli_dual(capsys):
    code, out, _ = run_cli(capsys, "dual", "--cone", "tau1")
    assert code == 0
    assert "(0, 1, 0); (1, 0, 0)" in out
    assert "(0, 0, 1)" in out


def test_cli_fibers(capsys):
    code, out, _ = run_cli(
        capsys, "fibers", "--morphism", "kappa", "--point", "tau1@2,3,5"
    )
    assert code == 0
    assert "2 piece(s)" in out


def test_cli_image_and_codim(capsys):
    code, out, _ = run_cli(capsys, "image", "--morphism", "pi")
    assert code == 0
    assert "complement codimension: 2" in out
    code, out, _ = run_cli(capsys, "codim", "--morphism", "pi")
    assert code == 0 and "2" in out


def test_cli_identify(capsys):
    code, out, _ = run_cli(capsys, "identify", "--system", "Ytilde")
    assert code == 0
    assert "~y_rho4 = ~y_tau1" in out or "~y_tau1 = ~y_rho4" in out


def test_cli_classify(capsys):
    code, out, _ = run_cli(capsys, "classify", "--cone", "delta", "--vec", "1,1,0")
    assert code == 0
    assert "on_face" in out


def test_cli_faces(capsys):
    code, out, _ = run_cli(capsys, "faces", "--cone", "delta")
    assert code == 0
    assert "faces of delta: 8" in out


def test_cli_limits_on_fan(capsys):
    code, out, _ = run_cli(
        capsys, "limits", "--fan", "C3", "--v", "1,1,0", "--point", "torus:2,3,5"
    )
    assert code == 0
    assert "1 point(s)" in out and "y_tau1" in out


def test_scene_point_with_chart_qualified_orbit():
    doc = json.loads(json.dumps(SCENE))
    doc["points"]["q"] = {
        "space": "Ytilde",
        "orbit": {"chart": "tau2", "face": "rho4"},
        "coset": ["2", "3", "5"],
    }
    scene = load_scene(doc)
    assert scene.points["q"].orbit.chart == 1


def test_cli_fan_check_valid(capsys):
    code, out, _ = run_cli(capsys, "fan-check", "--cones", "sigma1,sigma2")
    assert code == 0
    assert "valid fan with 7 cones" in out


def test_cli_fan_check_invalid(capsys):
    code, out, _ = run_cli(capsys, "fan-check", "--cones", "tau1,rho4")
    assert code == 1
    assert "not a fan" in out


def test_cli_invariance_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "invariance", "--map", "P", "--weight", "action")
    assert code == 0 and "invariant" in out
    code, out, _ = run_cli(capsys, "invariance", "--map", "P", "--weight", "1,0,0,0")
    assert code == 1 and "NOT invariant" in out


def test_cli_unknown_entity_exit_2(capsys):
    code, _, err = run_cli(capsys, "dual", "--cone", "nonexistent")
    assert code == 2
    assert "error" in err


def test_cli_named_point_and_chart_syntax(capsys):
    code, out, _ = run_cli(
        capsys, "limits", "--system", "Ytilde", "--v", "0,0,1", "--point", "tau2/rho4@2,3,5"
    )
    assert code == 0
    assert "~y_tau2" in out


def test_cli_scene_from_file(tmp_path, capsys):
    path = tmp_path / "scene.json"
    path.write_text(builtin_scene_json())
    code, out, _ = run_cli(capsys, "--scene", str(path), "codim", "--morphism", "pi")
    assert code == 0 and "2" in out


def test_cli_bad_scene_file_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{]")
    code, _, err = run_cli(capsys, "--scene", str(path), "verify-example")
    assert code == 2 and "error" in err


def test_cli_json_determinism(capsys):
    args = ["--format", "json", "identify", "--system", "Ytilde"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_cli_text_agrees_with_json(capsys):
    for args in (
        ["limits", "--system", "Ytilde", "--v", "1,1,0", "--point", "torus:2,3,5"],
        ["image", "--morphism", "pi"],
        ["identify", "--system", "Ytilde"],
        ["fibers", "--morphism", "kappa", "--point", "tau1@2,3,5"],
        ["verify-example"],
        ["dual", "--cone", "tau2"],
        ["faces", "--cone", "tau2"],
        ["classify", "--cone", "delta", "--vec", "1,1,0"],
        ["fan-check", "--cones", "sigma1,sigma2"],
        ["codim", "--morphism", "kappa"],
        ["invariance", "--map", "P", "--weight", "action"],
    ):
        _, text_out, _ = run_cli(capsys, *args)
        _, json_out, _ = run_cli(capsys, "--format", "json", *args)
        record = json.loads(json_out)
        assert render_text(record) + "\n" == text_out


def test_cli_verify_example_json_shape(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "verify-example")
    record = json.loads(out)
    assert code == 0
    assert record["result"]["passed"] is True
    assert len(record["result"]["checks"]) == 7
