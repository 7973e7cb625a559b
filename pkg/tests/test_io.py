from __future__ import annotations

import json

import pytest

from boxtensor import (
    Presentation,
    TensorSpec,
    ValidationError,
    compute_tensor,
    cyclic,
    is_isomorphic,
    symmetric,
)
from boxtensor.io import (
    dumps_structured,
    group_from_dict,
    group_to_dict,
    load_group,
    load_system,
    presentation_from_text,
    presentation_to_text,
    system_from_dict,
    system_to_dict,
    tensor_result_from_dict,
    tensor_result_to_dict,
)
from boxtensor.tensor_builders import check_defining_relations


def test_group_round_trip_keeps_labels():
    g = cyclic(3)
    doc = group_to_dict(g)
    back = group_from_dict(doc)
    assert back.order == 3
    assert back.labels == g.labels
    assert back.np.tolist() == g.np.tolist()


def test_group_from_dict_tolerates_comments_and_names_bad_keys():
    doc = {"order": 2, "table": [[0, 1], [1, 0]], "comment": "ignored"}
    assert group_from_dict(doc).order == 2
    with pytest.raises(ValidationError) as exc:
        group_from_dict({"table": [[0, 1], [1, 0]]})
    assert "order" in str(exc.value)
    with pytest.raises(ValidationError) as exc:
        group_from_dict({"order": 3, "table": [[0, 1], [1, 0]]})
    assert "order" in str(exc.value) or "table" in str(exc.value)


def test_system_round_trip_and_shorthands(psi_ab):
    doc = system_to_dict(psi_ab)
    back = system_from_dict(doc)
    assert back.rho_G == psi_ab.rho_G
    assert back.sigma_H == psi_ab.sigma_H
    short = {
        "G": group_to_dict(cyclic(2)),
        "H": group_to_dict(cyclic(3)),
        "rho_G": "conjugation",
        "rho_H": "conjugation",
        "sigma_G": "trivial",
        "sigma_H": "trivial",
    }
    sys = system_from_dict(short)
    assert sys.conjugation_self_actions


def test_system_errors_name_the_side():
    doc = {
        "G": {"order": 2},          # missing table
        "H": group_to_dict(cyclic(2)),
        "rho_G": "conjugation", "rho_H": "conjugation",
        "sigma_G": "trivial", "sigma_H": "trivial",
    }
    with pytest.raises(ValidationError) as exc:
        system_from_dict(doc)
    assert str(exc.value).startswith("G:")
    with pytest.raises(ValidationError) as exc:
        system_from_dict({"G": group_to_dict(cyclic(2))})
    assert "H" in str(exc.value)


def test_tensor_result_round_trip(psi_ab):
    t = compute_tensor(TensorSpec(kind="box", system=psi_ab, route="direct"))
    doc = tensor_result_to_dict(t)
    assert doc["kind"] == "box" and doc["route"] == "direct"
    back = tensor_result_from_dict(doc)
    assert back.group.order == t.group.order
    assert is_isomorphic(back.group, t.group)
    assert back.pairing == t.pairing
    check_defining_relations(back.system, back)
    with pytest.raises(ValidationError):
        tensor_result_from_dict({"kind": "box"})


def test_structured_dump_is_sorted_and_newline_terminated():
    s = dumps_structured({"b": 1, "a": {"z": 0, "y": 1}})
    assert s.endswith("\n")
    parsed = json.loads(s)
    assert parsed == {"b": 1, "a": {"z": 0, "y": 1}}
    assert s.index('"a"') < s.index('"b"')
    assert s.index('"y"') < s.index('"z"')


def test_presentation_text_round_trip():
    p = Presentation(("r", "s"), ((1, 1, 1, 1), (2, 2), (1, 2, 1, 2), (1, -1)))
    text = presentation_to_text(p)
    lines = text.strip().splitlines()
    assert lines[0] == "g0 g0 g0 g0"
    assert lines[1] == "g1 g1"
    assert len(lines) == 3          # the freely trivial relator is dropped
    back = presentation_from_text(text, gen_names=("r", "s"))
    assert back.relators == ((1, 1, 1, 1), (2, 2), (1, 2, 1, 2))
    conj = presentation_to_text(Presentation(("x", "y"), ((1, 2, -1),)))
    assert conj == "g0 g1 g0'\n"


def test_presentation_text_errors_carry_line_numbers():
    with pytest.raises(ValidationError) as exc:
        presentation_from_text("g0 g0\nh3 g0\n")
    assert "line 2" in str(exc.value)


def test_load_group_and_system_from_fixture_files(fixtures_dir):
    v4 = load_group(fixtures_dir / "v4.json")
    assert v4.order == 4 and v4.labels == ("e", "a", "b", "ab")
    sys = load_system(fixtures_dir / "psi_ab.json")
    assert sys.G.order == sys.H.order == 4
    t = compute_tensor(TensorSpec(kind="box", system=sys, route="direct"))
    assert t.group.order == 8
    with pytest.raises(ValidationError):
        load_group(fixtures_dir / "missing.json")


def test_load_rejects_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError):
        load_group(bad)


def test_symmetric_groups_serialize_without_labels():
    doc = group_to_dict(symmetric(3))
    assert "labels" not in doc or doc["labels"] is None
    assert group_from_dict(doc).order == 6
