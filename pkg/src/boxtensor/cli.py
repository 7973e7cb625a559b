"""Command-line front end: load group/action files, check compatibility,
compute products, verify the structural theorems, and print reports.

Exit statuses: 0 success, 2 validation error, 3 inconclusive enumeration,
4 theorem-check failure.
"""

from __future__ import annotations

import argparse
import sys as _sys
from dataclasses import dataclass
from typing import Optional

from .actions import (REGIME_COMPATIBLE, REGIME_FULLY, REGIME_HALF_131,
                      REGIME_HALF_132, check_full_compatibility, trivial_action)
from .derived_structures import (check_thm211, crossed_module_phi, homology,
                                 verify_prop23, verify_prop24)
from .fp_engine import EnumLimits, InconclusiveError, coset_group
from .group_core import CapabilityError, FiniteGroup, ValidationError, fingerprint
from .io import (dumps_structured, fingerprint_to_dict, load_group, load_system,
                 tensor_result_to_dict)
from .small_groups import identify
from .sweep import classify_pair, iter_systems
from .tensor_builders import (TensorSpec, compute_tensor, eta_presentation,
                              verify_thm42)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INCONCLUSIVE = 3
EXIT_CHECK_FAILED = 4

KINDS = {"box": "box", "bl": "brown_loday", "inassaridze": "inassaridze"}
ROUTES = {"direct": "direct", "via-eta": "via_eta"}
CHECKS = ("prop23", "prop24", "thm42", "thm211", "crossed-module")
DEFAULT_MAX_COSETS = 1_000_000

_HALFLIKE = (REGIME_COMPATIBLE, REGIME_HALF_131, REGIME_HALF_132)


@dataclass
class RunConfig:
    """Validated flags for a single run."""

    command: str
    input_path: Optional[str] = None
    kind: str = "box"
    route: str = "direct"
    check: Optional[str] = None
    g_path: Optional[str] = None
    h_path: Optional[str] = None
    family: str = "all"
    max_cosets: int = DEFAULT_MAX_COSETS
    output: str = "text"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS.values():
            raise ValidationError("kind: expected one of %s" % (sorted(KINDS),))
        if self.route not in ROUTES.values():
            raise ValidationError("route: expected one of %s" % (sorted(ROUTES),))
        if self.output not in ("text", "structured"):
            raise ValidationError("output: expected 'text' or 'structured'")
        if self.check is not None and self.check not in CHECKS:
            raise ValidationError("check: expected one of %s" % (CHECKS,))
        if self.max_cosets <= 0:
            raise ValidationError("max_cosets: must be positive")

    @property
    def limits(self) -> EnumLimits:
        return EnumLimits(max_cosets=self.max_cosets)


def _group_summary(g: FiniteGroup) -> dict:
    label = identify(g)
    return {"order": g.order,
            "identified": label,
            "fingerprint": fingerprint_to_dict(fingerprint(g))}


def _group_phrase(g: FiniteGroup) -> str:
    label = identify(g)
    if label is None:
        return "order %d, unidentified" % g.order
    return "order %d, identified as %s" % (g.order, label)


def _witness_dict(sys, w) -> dict:
    return {"condition": w.condition,
            "elements": [sys.label(x) for x in w.elements],
            "lhs": sys.label(w.lhs),
            "rhs": sys.label(w.rhs)}


def _cmd_check_compat(config: RunConfig, out) -> int:
    sys = load_system(config.input_path)
    rep = check_full_compatibility(sys)
    fully = rep.regime == REGIME_FULLY
    doc = {"command": "check-compat",
           "regime": rep.regime,
           "fully_compatible": fully,
           "conditions": {k: bool(v) for k, v in rep.per_condition.items()},
           "witnesses": {cid: _witness_dict(sys, w)
                         for cid, w in rep.witnesses.items()}}
    if config.output == "structured":
        out.write(dumps_structured(doc))
        return EXIT_OK
    out.write("regime: %s\n" % rep.regime)
    out.write("fully compatible: %s\n" % ("YES" if fully else "NO"))
    conds = " ".join("%s=%s" % (k, "ok" if v else "FAIL")
                     for k, v in sorted(rep.per_condition.items()))
    out.write("conditions: %s\n" % conds)
    w = rep.first_witness
    if w is not None:
        out.write("witness %s: (%s) gives %s vs %s\n"
                  % (w.condition, ", ".join(sys.label(x) for x in w.elements),
                     sys.label(w.lhs), sys.label(w.rhs)))
    return EXIT_OK


def _cmd_tensor(config: RunConfig, out) -> int:
    sys = load_system(config.input_path)
    t = compute_tensor(TensorSpec(kind=config.kind, system=sys,
                                  route=config.route), config.limits)
    if config.output == "structured":
        doc = tensor_result_to_dict(t)
        doc["command"] = "tensor"
        doc["identified"] = identify(t.group)
        out.write(dumps_structured(doc))
        return EXIT_OK
    out.write("kind: %s  route: %s\n" % (t.kind, t.route))
    out.write("%s\n" % _group_phrase(t.group))
    fp = fingerprint(t.group)
    out.write("fingerprint: invariants=%s center=%d derived=%d\n"
              % (list(fp.abelian_invariants), fp.center_order, fp.derived_order))
    for g in range(sys.G.order):
        row = " ".join(t.group.label(t.pair(g, h)) for h in range(sys.H.order))
        out.write("pairing %s: %s\n" % (sys.G.label(g), row))
    return EXIT_OK


def _cmd_eta(config: RunConfig, out) -> int:
    sys = load_system(config.input_path)
    cg = coset_group(eta_presentation(sys), config.limits)
    doc = {"command": "eta"}
    doc.update(_group_summary(cg.group))
    doc["stats"] = {"peak_live": cg.coset_table.peak_live,
                    "total_defined": cg.coset_table.total_defined}
    if config.output == "structured":
        out.write(dumps_structured(doc))
        return EXIT_OK
    out.write("eta: %s\n" % _group_phrase(cg.group))
    out.write("enumeration: peak live %d, total defined %d\n"
              % (cg.coset_table.peak_live, cg.coset_table.total_defined))
    return EXIT_OK


def _cmd_verify(config: RunConfig, out) -> int:
    sys = load_system(config.input_path)
    name = config.check
    details: dict = {}
    if name == "thm42":
        rep = verify_thm42(sys, config.limits)
        ok = rep.ok
        anchor = "Thm 4.2"
        details = {"eta_order": rep.eta_order, "box_order": rep.box_order,
                   "order_equation_ok": rep.order_equation_ok,
                   "tau_matches_box": rep.tau_matches_box,
                   "semidirect_matches_eta": rep.semidirect_matches_eta,
                   "messages": list(rep.messages)}
    elif name == "prop23":
        rep = verify_prop23(sys)
        ok, anchor = rep.ok, rep.anchor
        details = {s.side: {"deviational_order": s.deviational_order,
                            "center_order": s.center_order,
                            "containment_ok": s.containment_ok,
                            "factorization_ok": s.factorization_ok}
                   for s in rep.sides}
    elif name == "prop24":
        t = compute_tensor(TensorSpec(kind="box", system=sys), config.limits)
        rep = verify_prop24(sys, t)
        ok, anchor = rep.ok, rep.anchor
        details = {"inversion_ok": rep.inversion_ok,
                   "word_conjugation_ok": rep.word_conjugation_ok,
                   "families": [{"name": f.name, "anchor": f.anchor,
                                 "ok": f.ok, "tuple_count": f.tuple_count,
                                 "uniform_witnesses": [sys.H.label(v) if f.name in ("e243", "e245")
                                                       else sys.G.label(v)
                                                       for v in f.uniform_witnesses],
                                 "nontrivial_witness_used": f.nontrivial_witness_used}
                                for f in rep.families]}
    elif name == "thm211":
        t = compute_tensor(TensorSpec(kind="box", system=sys), config.limits)
        rep = check_thm211(sys, t)
        ok, anchor = rep.ok, rep.anchor
        details = {"dbar_order": rep.dbar_order, "dbar_cyclic": rep.dbar_cyclic,
                   "tensor_abelian": rep.tensor_abelian, "asserted": rep.asserted}
    else:
        t = compute_tensor(TensorSpec(kind="box", system=sys), config.limits)
        rep = crossed_module_phi(sys, t)
        ok, anchor = rep.ok, rep.anchor
        details = {"well_defined": rep.well_defined,
                   "action_well_defined": rep.action_well_defined,
                   "equivariance_ok": rep.equivariance_ok,
                   "peiffer_ok": rep.peiffer_ok,
                   "kernel_central": rep.kernel_central,
                   "messages": list(rep.messages)}
    doc = {"command": "verify", "check": name, "anchor": anchor,
           "ok": bool(ok), "details": details}
    if config.output == "structured":
        out.write(dumps_structured(doc))
    else:
        out.write("check %s (%s): %s\n" % (name, anchor, "PASS" if ok else "FAIL"))
        for key in sorted(details):
            out.write("  %s: %s\n" % (key, details[key]))
    if not ok:
        _sys.stderr.write("theorem check %s (%s) failed\n" % (name, anchor))
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_homology(config: RunConfig, out) -> int:
    sys = load_system(config.input_path)
    res = homology(sys, config.limits)
    doc = {"command": "homology", "anchor": res.anchor,
           "H0": _group_summary(res.H0), "H1": _group_summary(res.H1),
           "coefficient_quotient_order": res.coefficient_quotient.order,
           "aprime_order": res.aprime_order,
           "image_normalized": res.image_normalized}
    if config.output == "structured":
        out.write(dumps_structured(doc))
        return EXIT_OK
    out.write("H0: %s\n" % _group_phrase(res.H0))
    out.write("H1: %s\n" % _group_phrase(res.H1))
    out.write("coefficients: |A/A'| = %d (|A'| = %d)\n"
              % (res.coefficient_quotient.order, res.aprime_order))
    return EXIT_OK


def _cmd_identify(config: RunConfig, out) -> int:
    g = load_group(config.input_path)
    doc = {"command": "identify"}
    doc.update(_group_summary(g))
    if config.output == "structured":
        out.write(dumps_structured(doc))
        return EXIT_OK
    out.write("%s\n" % _group_phrase(g))
    fp = fingerprint(g)
    out.write("fingerprint: orders=%s invariants=%s center=%d derived=%d\n"
              % (list(fp.order_histogram), list(fp.abelian_invariants),
                 fp.center_order, fp.derived_order))
    return EXIT_OK


def _sweep_row(cls, quad, regime, limits) -> dict:
    sys = cls.system(quad)
    row: dict = {"quad": [int(x) for x in quad], "regime": regime}
    try:
        box = compute_tensor(TensorSpec(kind="box", system=sys), limits)
        row["box"] = _group_summary(box.group)
    except InconclusiveError as e:
        box = None
        row["box"] = {"inconclusive": True,
                      "peak_live": e.coset_table.peak_live,
                      "total_defined": e.coset_table.total_defined}
    if regime == REGIME_FULLY and box is not None:
        rep = verify_thm42(sys, limits, box=box)
        row["thm42"] = {"ok": rep.ok, "eta_order": rep.eta_order}
    if sys.conjugation_self_actions:
        covered = (sys.sigma_G == trivial_action(sys.G, sys.H)
                   or regime in _HALFLIKE)
        if covered:
            try:
                t = compute_tensor(TensorSpec(kind="inassaridze", system=sys),
                                   limits)
                row["inassaridze"] = _group_summary(t.group)
            except InconclusiveError as e:
                row["inassaridze"] = {"inconclusive": True,
                                      "peak_live": e.coset_table.peak_live,
                                      "total_defined": e.coset_table.total_defined}
    return row


def _fmt_product(entry: Optional[dict]) -> str:
    if entry is None:
        return "-"
    if entry.get("inconclusive"):
        return "inconclusive"
    label = entry["identified"] or "unidentified"
    return "%d:%s" % (entry["order"], label)


def _cmd_sweep(config: RunConfig, out) -> int:
    G = load_group(config.g_path)
    H = load_group(config.h_path)
    cls = classify_pair(G, H)
    rows = [_sweep_row(cls, quad, regime, config.limits)
            for quad, regime in iter_systems(cls, family=config.family)]
    if config.output == "structured":
        doc = {"command": "sweep", "family": config.family,
               "counts": {"rho_G": cls.rho_G.count, "rho_H": cls.rho_H.count,
                          "sigma_G": cls.sigma_G.count,
                          "sigma_H": cls.sigma_H.count},
               "rows": rows}
        out.write(dumps_structured(doc))
        return EXIT_OK
    out.write("systems: %d\n" % len(rows))
    for i, row in enumerate(rows):
        thm42 = row.get("thm42")
        summary = "-" if thm42 is None else ("ok" if thm42["ok"] else "FAIL")
        out.write("row %d quad=%s regime=%s box=%s inassaridze=%s thm42=%s\n"
                  % (i, tuple(row["quad"]), row["regime"],
                     _fmt_product(row.get("box")),
                     _fmt_product(row.get("inassaridze")), summary))
    return EXIT_OK


_COMMANDS = {
    "check-compat": _cmd_check_compat,
    "tensor": _cmd_tensor,
    "eta": _cmd_eta,
    "verify": _cmd_verify,
    "homology": _cmd_homology,
    "identify": _cmd_identify,
    "sweep": _cmd_sweep,
}


def run(config: RunConfig, out=None) -> int:
    """Execute one command; returns the documented exit status."""
    out = out if out is not None else _sys.stdout
    try:
        return _COMMANDS[config.command](config, out)
    except InconclusiveError as e:
        ct = e.coset_table
        doc = {"inconclusive": True, "peak_live": ct.peak_live,
               "total_defined": ct.total_defined, "max_cosets": config.max_cosets}
        if config.output == "structured":
            out.write(dumps_structured(doc))
        else:
            out.write("inconclusive: enumeration hit the coset limit "
                      "(peak live %d, total defined %d, limit %d)\n"
                      % (ct.peak_live, ct.total_defined, config.max_cosets))
        return EXIT_INCONCLUSIVE
    except (ValidationError, CapabilityError) as e:
        _sys.stderr.write("error: %s\n" % e)
        return EXIT_VALIDATION


def build_argparser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="boxtensor",
        description="Tensor products of finite groups with mutual actions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS,
                        help="live-coset bound for enumerations")
    common.add_argument("--output", choices=("text", "structured"),
                        default="text", help="report format")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for sampled checks (unused by exact checks)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check-compat", parents=[common],
                        help="classify the compatibility regime of a system")
    sp.add_argument("file", help="action-system JSON file")

    sp = sub.add_parser("tensor", parents=[common],
                        help="compute a tensor product")
    sp.add_argument("--kind", choices=sorted(KINDS), default="box")
    sp.add_argument("--route", choices=sorted(ROUTES), default="direct")
    sp.add_argument("file", help="action-system JSON file")

    sp = sub.add_parser("eta", parents=[common],
                        help="enumerate the eta group of a system")
    sp.add_argument("file", help="action-system JSON file")

    sp = sub.add_parser("verify", parents=[common],
                        help="run a theorem check")
    sp.add_argument("--check", choices=CHECKS, required=True)
    sp.add_argument("file", help="action-system JSON file")

    sp = sub.add_parser("homology", parents=[common],
                        help="H0 and H1 of the displacement map")
    sp.add_argument("file", help="action-system JSON file")

    sp = sub.add_parser("identify", parents=[common],
                        help="name a group against the built-in catalog")
    sp.add_argument("file", help="group JSON file")

    sp = sub.add_parser("sweep", parents=[common],
                        help="tabulate every action system on a pair")
    sp.add_argument("--g", required=True, help="group JSON file for G")
    sp.add_argument("--h", required=True, help="group JSON file for H")
    sp.add_argument("--family", choices=("all", "equal"), default="all")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=getattr(args, "file", None),
        kind=KINDS[args.kind] if hasattr(args, "kind") else "box",
        route=ROUTES[args.route] if hasattr(args, "route") else "direct",
        check=getattr(args, "check", None),
        g_path=getattr(args, "g", None),
        h_path=getattr(args, "h", None),
        family=getattr(args, "family", "all"),
        max_cosets=args.max_cosets,
        output=args.output,
        seed=args.seed,
    )


def main(argv: Optional[list[str]] = None) -> int:
    args = build_argparser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ValidationError as e:
        _sys.stderr.write("error: %s\n" % e)
        return EXIT_VALIDATION
    return run(config)


if __name__ == "__main__":
    _sys.exit(main())
