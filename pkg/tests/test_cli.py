from __future__ import annotations

import json

import pytest

from boxtensor import cyclic, make_action_system
from boxtensor.cli import build_argparser, main
from boxtensor.io import dumps_structured, group_to_dict, system_to_dict


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


@pytest.fixture()
def c2_trivial_file(tmp_path):
    doc = system_to_dict(make_action_system(cyclic(2), cyclic(2)))
    path = tmp_path / "c2_trivial.json"
    path.write_text(dumps_structured(doc))
    return path


def test_tensor_box_on_the_order_eight_system(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "tensor", "--kind", "box",
                     str(fixtures_dir / "psi_ab.json"))
    assert rc == 0
    assert "order 8, identified as C4 x C2" in out
    assert "pairing" in out


def test_tensor_routes_agree(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "tensor", "--kind", "box", "--route", "via-eta",
                     str(fixtures_dir / "psi_ab.json"))
    assert rc == 0
    assert "order 8, identified as C4 x C2" in out


def test_tensor_on_the_rejected_systems(capsys, fixtures_dir):
    for name in ("psi_b.json", "psi_a.json"):
        rc, out, _ = run(capsys, "tensor", "--kind", "box",
                         str(fixtures_dir / name))
        assert rc == 0
        assert "order 4, identified as C2 x C2" in out


def test_check_compat_reports_the_exact_witness(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "check-compat", str(fixtures_dir / "psi_b.json"))
    assert rc == 0
    assert "fully compatible: NO" in out
    assert "witness fc1a: (a, a, a) gives a vs ab" in out

    rc, out, _ = run(capsys, "check-compat", str(fixtures_dir / "psi_a.json"))
    assert rc == 0
    assert "(b, b, b) gives b vs ab" in out

    rc, out, _ = run(capsys, "check-compat", str(fixtures_dir / "psi_ab.json"))
    assert rc == 0
    assert "fully compatible: YES" in out


def test_coset_limit_returns_inconclusive(capsys, fixtures_dir):
    rc, out, err = run(capsys, "tensor", "--kind", "box", "--max-cosets", "10",
                       str(fixtures_dir / "psi_ab.json"))
    assert rc == 3
    assert "peak live" in out + err


def test_validation_failures_exit_two(capsys, fixtures_dir, tmp_path):
    rc, _, err = run(capsys, "tensor", "--kind", "inassaridze",
                     str(fixtures_dir / "psi_ab.json"))
    assert rc == 2 and err

    rc, _, err = run(capsys, "tensor", "--kind", "box",
                     str(tmp_path / "missing.json"))
    assert rc == 2 and err

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"order": 3, "table": [[0, 1], [1, 0]]}))
    rc, _, err = run(capsys, "identify", str(bad))
    assert rc == 2
    assert "order" in err or "table" in err


def test_verify_thm42(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "verify", "--check", "thm42",
                     str(fixtures_dir / "psi_ab.json"))
    assert rc == 0
    assert "Thm 4.2" in out and "PASS" in out
    assert "eta_order: 128" in out


def test_verify_gates_exit_two_outside_their_regime(capsys, fixtures_dir):
    rc, _, err = run(capsys, "verify", "--check", "prop23",
                     str(fixtures_dir / "psi_b.json"))
    assert rc == 2
    assert "fully compatible" in err


def test_verify_remaining_checks_pass(capsys, fixtures_dir):
    path = str(fixtures_dir / "psi_ab.json")
    for check, anchor in (("prop23", "Prop 2.3"), ("prop24", "Prop 2.4"),
                          ("thm211", "Thm 2.11"), ("crossed-module", "Prop 2.8")):
        rc, out, _ = run(capsys, "verify", "--check", check, path)
        assert rc == 0, (check, out)
        assert anchor in out and "PASS" in out


def test_eta_command_reports_the_order(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "eta", str(fixtures_dir / "psi_ab.json"))
    assert rc == 0
    assert "order 128" in out


def test_homology_command(capsys, c2_trivial_file):
    rc, out, _ = run(capsys, "homology", str(c2_trivial_file))
    assert rc == 0
    assert "H0: order 2, identified as C2" in out
    assert "H1: order 2, identified as C2" in out


def test_identify_command(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "identify", str(fixtures_dir / "v4.json"))
    assert rc == 0
    assert "order 4, identified as C2 x C2" in out
    rc, out, _ = run(capsys, "identify", str(fixtures_dir / "c2.json"))
    assert rc == 0
    assert "identified as C2" in out


def test_sweep_equal_family_reproduces_the_three_products(capsys, fixtures_dir):
    v4 = str(fixtures_dir / "v4.json")
    rc, out, _ = run(capsys, "sweep", "--g", v4, "--h", v4, "--family", "equal")
    assert rc == 0
    assert "systems: 10" in out
    assert out.count("box=8:C4 x C2") == 3
    assert out.count("box=4:C2 x C2") == 6
    assert out.count("box=16:C2 x C2 x C2 x C2") == 1
    assert out.count("thm42=ok") == 4


def test_sweep_rejects_oversized_groups(capsys, tmp_path):
    big = tmp_path / "c17.json"
    big.write_text(json.dumps(group_to_dict(cyclic(17))))
    rc, _, err = run(capsys, "sweep", "--g", str(big), "--h", str(big))
    assert rc == 2 and err


def test_structured_output_is_sorted_json(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "tensor", "--kind", "box", "--output", "structured",
                     str(fixtures_dir / "psi_ab.json"))
    assert rc == 0
    doc = json.loads(out)
    assert doc["command"] == "tensor"
    assert doc["kind"] == "box"
    assert doc["identified"] == "C4 x C2"
    assert doc["group"]["order"] == 8
    keys = list(doc)
    assert keys == sorted(keys)


def test_structured_inconclusive_document(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "tensor", "--kind", "box", "--output", "structured",
                     "--max-cosets", "10", str(fixtures_dir / "psi_ab.json"))
    assert rc == 3
    doc = json.loads(out)
    assert doc["inconclusive"] is True
    assert doc["max_cosets"] == 10
    assert doc["peak_live"] >= 10


def test_seed_flag_is_accepted(capsys, fixtures_dir):
    rc, _, _ = run(capsys, "check-compat", "--seed", "7",
                   str(fixtures_dir / "psi_ab.json"))
    assert rc == 0


def test_argparser_rejects_unknown_choices():
    parser = build_argparser()
    with pytest.raises(SystemExit):
        parser.parse_args(["verify", "--check", "prop99", "x.json"])
    with pytest.raises(SystemExit):
        parser.parse_args(["tensor", "--kind", "wedge", "x.json"])
