"""JSON schemas for groups, action systems and computed tensors, plus the
text dump format for presentations.

Every schema error names the offending key so callers can surface it directly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from .actions import ActionSystem, make_action_system
from .fp_engine import Presentation
from .group_core import FiniteGroup, IsoFingerprint, ValidationError, fingerprint
from .tensor_builders import TensorResult, check_defining_relations


def group_to_dict(g: FiniteGroup, name: Optional[str] = None) -> dict:
    """Group schema: order, table, optional labels/name."""
    doc: dict[str, Any] = {"order": g.order,
                           "table": [list(row) for row in g.table]}
    if g.labels is not None:
        doc["labels"] = list(g.labels)
    if name is not None:
        doc["name"] = name
    return doc


def group_from_dict(doc) -> FiniteGroup:
    """Rebuild a group, re-deriving inverses and re-running every table check."""
    if not isinstance(doc, dict):
        raise ValidationError("group: expected an object with 'order' and 'table'")
    for key in ("order", "table"):
        if key not in doc:
            raise ValidationError("group: missing key %r" % key)
    g = FiniteGroup(doc["table"], labels=doc.get("labels"))
    if g.order != doc["order"]:
        raise ValidationError("order: declared %r but the table has %d rows"
                              % (doc["order"], g.order))
    return g


_ACTION_KEYS = ("rho_G", "rho_H", "sigma_G", "sigma_H")


def system_to_dict(sys: ActionSystem) -> dict:
    doc: dict[str, Any] = {"G": group_to_dict(sys.G), "H": group_to_dict(sys.H)}
    for key in _ACTION_KEYS:
        doc[key] = [list(p) for p in getattr(sys, key)]
    return doc


def system_from_dict(doc) -> ActionSystem:
    """Action-system schema: G, H, and the four action families.

    Each family is an array of permutations indexed by the acting element;
    the strings 'conjugation' and 'trivial' stand for those families.
    """
    if not isinstance(doc, dict):
        raise ValidationError("action system: expected an object")
    groups = {}
    for key in ("G", "H"):
        if key not in doc:
            raise ValidationError("action system: missing key %r" % key)
        try:
            groups[key] = group_from_dict(doc[key])
        except ValidationError as e:
            raise ValidationError("%s: %s" % (key, e)) from e
    fams = {}
    for key in _ACTION_KEYS:
        if key not in doc:
            raise ValidationError("action system: missing key %r" % key)
        fam = doc[key]
        if not isinstance(fam, str):
            fam = tuple(tuple(int(v) for v in p) for p in fam)
        fams[key] = fam
    return make_action_system(groups["G"], groups["H"], **fams)


def fingerprint_to_dict(fp: IsoFingerprint) -> dict:
    return {"order": fp.order,
            "order_histogram": [list(p) for p in fp.order_histogram],
            "abelian_invariants": list(fp.abelian_invariants),
            "center_order": fp.center_order,
            "derived_order": fp.derived_order}


def tensor_result_to_dict(t: TensorResult) -> dict:
    """Self-contained record: the system, the group, the pairing and stats."""
    return {"kind": t.kind,
            "route": t.route,
            "system": system_to_dict(t.system),
            "group": group_to_dict(t.group),
            "pairing": [list(row) for row in t.pairing],
            "stats": dict(t.stats),
            "fingerprint": fingerprint_to_dict(fingerprint(t.group))}


def tensor_result_from_dict(doc) -> TensorResult:
    """Rebuild a computed tensor and re-verify its defining relations."""
    if not isinstance(doc, dict):
        raise ValidationError("tensor result: expected an object")
    for key in ("kind", "route", "system", "group", "pairing", "stats"):
        if key not in doc:
            raise ValidationError("tensor result: missing key %r" % key)
    sys = system_from_dict(doc["system"])
    group = group_from_dict(doc["group"])
    pairing = tuple(tuple(int(x) for x in row) for row in doc["pairing"])
    if len(pairing) != sys.G.order or any(len(r) != sys.H.order for r in pairing):
        raise ValidationError("pairing: expected a %d x %d matrix"
                              % (sys.G.order, sys.H.order))
    t = TensorResult(kind=doc["kind"], route=doc["route"], system=sys,
                     group=group, pairing=pairing, stats=dict(doc["stats"]))
    check_defining_relations(sys, t)
    return t


def load_group(path) -> FiniteGroup:
    return group_from_dict(_load_json(path))


def load_system(path) -> ActionSystem:
    return system_from_dict(_load_json(path))


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise ValidationError("%s: cannot read (%s)" % (path, e)) from e
    except json.JSONDecodeError as e:
        raise ValidationError("%s: not valid JSON (%s)" % (path, e)) from e


def dumps_structured(doc: dict) -> str:
    """Single document with stable (sorted) key order."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def presentation_to_text(p: Presentation) -> str:
    """One relator per line; generator i prints as gi, inverses with a
    trailing apostrophe, letters separated by single spaces."""
    lines = []
    for rel in p.relators:
        if not rel:                       # freely reduced away; nothing to say
            continue
        lines.append(" ".join("g%d%s" % (abs(l) - 1, "" if l > 0 else "'")
                              for l in rel))
    return "".join(line + "\n" for line in lines)


def presentation_from_text(text: str,
                           gen_names: Optional[tuple[str, ...]] = None) -> Presentation:
    """Parse the dump format back; generator count is inferred when names are
    not supplied."""
    rels = []
    top = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        rel = []
        for tok in line.split():
            inv = tok.endswith("'")
            core = tok[:-1] if inv else tok
            if not core.startswith("g") or not core[1:].isdigit():
                raise ValidationError("line %d: bad letter %r" % (lineno, tok))
            idx = int(core[1:])
            top = max(top, idx + 1)
            rel.append(-(idx + 1) if inv else idx + 1)
        rels.append(tuple(rel))
    if gen_names is None:
        gen_names = tuple("g%d" % i for i in range(top))
    elif len(gen_names) < top:
        raise ValidationError("presentation: %d names for %d generators"
                              % (len(gen_names), top))
    return Presentation(gen_names=gen_names, relators=tuple(rels))
