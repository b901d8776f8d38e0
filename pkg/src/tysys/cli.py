"""Command line front end.

Every command prints one JSON report to stdout with a "pass" flag, a
"violations" array, and an echo of its configuration.  Exit codes: 0 when all
checks pass, 1 when a check fails, 2 for usage or input errors.  All
randomness is derived from the single --seed value, so identical invocations
produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys as _sys

from . import acceptance, cartan, cluster, tsystem, ysystem
from .errors import TysysError
from .tsystem import SystemSpec, table_from_json


def derive_rng(seed: int, label: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def parse_window(text: str):
    lo, hi = text.split("..")
    return int(lo), int(hi)


def build_system(cm, level_text: str, mcap) -> SystemSpec:
    if level_text == "unrestricted":
        if mcap is None:
            raise ValueError("unrestricted systems need --mcap")
        return SystemSpec(cm, int(mcap), restricted=False)
    return SystemSpec(cm, int(level_text), restricted=True)


def _emit(report: dict) -> int:
    print(json.dumps(report, sort_keys=True, indent=1))
    return 0 if report.get("pass", True) else 1


def _config(args, **extra):
    keep = ("seed", "mode", "window", "level", "mcap", "retries", "steps",
            "free", "max_period")
    cfg = {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_cartan_check(args) -> int:
    try:
        cm = cartan.read_cartan_file(args.file)
    except (cartan.NotGeneralizedCartan, cartan.NotSymmetrizable) as err:
        return _emit({"pass": False, "violations": [{"relation": str(err)}],
                      "config": _config(args)})
    parity = cartan.bipartition(cm)
    report = {
        "pass": True,
        "violations": [],
        "config": _config(args),
        "rank": cm.r,
        "d": list(cm.d),
        "t": cm.t,
        "t_a": list(cm.t_a),
        "tamely_laced": cartan.is_tamely_laced(cm),
        "simply_laced": cartan.is_simply_laced(cm),
        "bipartition": list(parity) if parity else None,
    }
    return _emit(report)


def cmd_sys_gen(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    sys_ = build_system(cm, args.level, args.mcap)
    window = parse_window(args.window)
    if args.gen_kind == "T":
        rels = tsystem.enumerate_relations(sys_, window)
    else:
        rels = ysystem.enumerate_y_relations(sys_, window)
    payload = {
        "pass": True,
        "violations": [],
        "config": _config(args),
        "system": sys_.describe(),
        "relations": [rel.to_json() for rel in rels],
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
        payload.pop("relations")
        payload["written"] = args.out
    return _emit(payload)


def cmd_sys_solve(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    sys_ = build_system(cm, args.level, args.mcap)
    window = parse_window(args.window)
    policy = tsystem.SolvePolicy(max_retries=args.retries)
    if args.solve_kind == "T":
        rng = derive_rng(args.seed, "solve-t")
        table = tsystem.propagate_t(sys_, window, rng=rng, policy=policy)
        rels = tsystem.enumerate_relations(sys_, window)
        violations = tsystem.check_t_solution(table, rels, mode=args.mode,
                                              rng=derive_rng(args.seed, "check-t"))
    else:
        rng = derive_rng(args.seed, "solve-y")
        table = ysystem.propagate_y(sys_, window, rng=rng, policy=policy)
        rels = ysystem.enumerate_y_relations(sys_, window)
        violations = ysystem.check_y_solution(table, rels, mode=args.mode,
                                              rng=derive_rng(args.seed, "check-y"))
    if args.out:
        table.dump(args.out)
    return _emit({
        "pass": not violations,
        "violations": violations,
        "config": _config(args),
        "relations_checked": len(rels),
        "values": len(table.values),
        **({"written": args.out} if args.out else {}),
    })


def cmd_sys_t2y(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    sys_ = build_system(cm, args.level, args.mcap)
    with open(args.infile, "r", encoding="utf-8") as fh:
        t_table = table_from_json(json.load(fh), sys=sys_, kind="T")
    y_table, violations = ysystem.t_to_y(t_table)
    yrels = ysystem.enumerate_y_relations(sys_, y_table.window)
    yrels = [r for r in yrels if all(v in y_table.values for v in r.variables())]
    violations += ysystem.check_y_solution(y_table, yrels, mode=args.mode,
                                           rng=derive_rng(args.seed, "t2y"))
    if args.out:
        y_table.dump(args.out)
    return _emit({
        "pass": not violations,
        "violations": violations,
        "config": _config(args),
        "relations_checked": len(yrels),
        "values": len(y_table.values),
        **({"written": args.out} if args.out else {}),
    })


def cmd_sys_y2t(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    if args.level != "unrestricted":
        print("y2t: the reconstruction exists for unrestricted systems only; "
              "pass --level unrestricted --mcap N", file=_sys.stderr)
        return 2
    sys_ = build_system(cm, args.level, args.mcap)
    with open(args.infile, "r", encoding="utf-8") as fh:
        y_table = table_from_json(json.load(fh), sys=sys_, kind="Y")
    policy = ysystem.FreeChoicePolicy(kind=args.free, max_retries=args.retries)
    rng = derive_rng(args.seed, "y2t")
    if args.roundtrip:
        report, t_table = ysystem.roundtrip_check(y_table, rng=rng, policy=policy)
        violations = report["mismatches"] + report["claim_violations"]
        extra = {"compared": report["compared"]}
        passed = report["pass"]
    else:
        t_table = ysystem.y_to_t(y_table, rng=rng, policy=policy)
        violations = ysystem.claim_identities_check(t_table, y_table)
        extra = {}
        passed = not violations
    if args.out:
        t_table.dump(args.out)
    return _emit({
        "pass": passed,
        "violations": violations,
        "config": _config(args),
        "values": len(t_table.values),
        **extra,
        **({"written": args.out} if args.out else {}),
    })


def cmd_sys_identities(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    rng = derive_rng(args.seed, "identities")
    window = (-4, 26)
    violations = []
    for p in sorted(set(cm.d) | {1, 2, 3}):
        values = {(m, k): ysystem.random_nonzero_rational(rng)
                  for m in range(0, 5 * p + 3)
                  for k in range(window[0], window[1] + 1)}
        if not tsystem.identity_check_1(p, window, values):
            violations.append({"relation": f"first identity at p={p}"})
        values = {(m, k): ysystem.random_nonzero_rational(rng)
                  for m in range(0, 8)
                  for k in range(window[0], window[1] + 1)}
        if not tsystem.identity_check_2(p, window, values):
            violations.append({"relation": f"second identity at weight {p}"})
    return _emit({"pass": not violations, "violations": violations,
                  "config": _config(args)})


def cmd_cluster_run(args) -> int:
    em = cluster.read_exchange_file(args.file)
    mode = "numeric" if args.numeric else "auto"
    seq = cluster.run_sequence(em, (0, args.steps), mode=mode,
                               rng=derive_rng(args.seed, "cluster-run"))
    payload = seq.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
        payload = {"written": args.out, "mode": seq.mode}
    return _emit({"pass": True, "violations": [], "config": _config(args),
                  "sequence": payload})


def cmd_cluster_verify(args) -> int:
    em = cluster.read_exchange_file(args.file)
    mode = "numeric" if args.numeric else "auto"
    seq = cluster.run_sequence(em, (0, args.steps), mode=mode,
                               rng=derive_rng(args.seed, "cluster-verify"))
    violations = []
    violations += cluster.check_x_parity(seq)
    violations += cluster.check_y_parity(seq)
    violations += cluster.check_tb(seq)
    violations += cluster.check_yb(seq, 1)
    violations += cluster.check_yb(seq, -1)
    violations += cluster.laurent_check(seq)
    violations += cluster.t_to_y_b(seq.x, em, 1, seq.u_range)[1]
    violations += cluster.t_to_y_b(seq.x, em, -1, seq.u_range)[1]
    return _emit({"pass": not violations, "violations": violations,
                  "config": _config(args), "mode": seq.mode})


def cmd_cluster_correspond(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    report = cluster.correspondence_check(cm, int(args.level),
                                          rng=derive_rng(args.seed, "correspond"))
    report["config"] = _config(args)
    return _emit(report)


def cmd_period_scan(args) -> int:
    cm = cartan.read_cartan_file(args.file)
    sys_ = build_system(cm, args.level, args.mcap)
    window = parse_window(args.window)
    table = ysystem.propagate_y(sys_, window,
                                rng=derive_rng(args.seed, "period"))
    period = ysystem.detect_period(table, args.max_period)
    return _emit({
        "pass": period is not None,
        "violations": [] if period is not None else
        [{"relation": f"no period up to {args.max_period}"}],
        "config": _config(args),
        "period": period,
    })


def cmd_verify_all(args) -> int:
    results = acceptance.run_all(seed=args.seed,
                                 echo=lambda line: print(line, file=_sys.stderr))
    report = {
        "pass": all(r["pass"] for r in results),
        "violations": [{"relation": f"criterion {r['id']}: {f}"}
                       for r in results for f in r["failures"]],
        "config": _config(args),
        "criteria": [{"id": r["id"], "name": r["name"], "pass": r["pass"]}
                     for r in results],
    }
    return _emit(report)


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _common(p, window_default=None, level=True):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--retries", type=int, default=16)
    if level:
        p.add_argument("--level", default=None, required=True,
                       help="restriction level (integer >= 2) or 'unrestricted'")
        p.add_argument("--mcap", type=int, default=None,
                       help="level cap for unrestricted windows")
    if window_default is not None:
        p.add_argument("--window", default=window_default,
                       help="slice range, e.g. 0..24")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="tysys", description=__doc__)
    sub = top.add_subparsers(dest="group", required=True)

    p = sub.add_parser("cartan").add_subparsers(dest="action", required=True) \
        .add_parser("check")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_cartan_check)

    sysgrp = sub.add_parser("sys").add_subparsers(dest="action", required=True)
    for kind, name in (("T", "gen-t"), ("Y", "gen-y")):
        p = sysgrp.add_parser(name)
        p.add_argument("file")
        p.add_argument("--out")
        _common(p, window_default="0..12")
        p.set_defaults(handler=cmd_sys_gen, gen_kind=kind)
    for kind, name in (("T", "solve-t"), ("Y", "solve-y")):
        p = sysgrp.add_parser(name)
        p.add_argument("file")
        p.add_argument("--out")
        _common(p, window_default="0..12")
        p.set_defaults(handler=cmd_sys_solve, solve_kind=kind)
    p = sysgrp.add_parser("t2y")
    p.add_argument("file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    _common(p)
    p.set_defaults(handler=cmd_sys_t2y)
    p = sysgrp.add_parser("y2t")
    p.add_argument("file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--free", choices=("random", "unit"), default="random")
    p.add_argument("--roundtrip", action="store_true")
    _common(p)
    p.set_defaults(handler=cmd_sys_y2t)
    p = sysgrp.add_parser("identities")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_sys_identities)

    clgrp = sub.add_parser("cluster").add_subparsers(dest="action", required=True)
    p = clgrp.add_parser("run")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_cluster_run)
    p = clgrp.add_parser("verify")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_cluster_verify)
    p = clgrp.add_parser("correspond")
    p.add_argument("file")
    p.add_argument("--level", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_cluster_correspond)

    p = sub.add_parser("period").add_subparsers(dest="action", required=True) \
        .add_parser("scan")
    p.add_argument("file")
    p.add_argument("--max-period", type=int, default=24)
    _common(p, window_default="0..30")
    p.set_defaults(handler=cmd_period_scan)

    p = sub.add_parser("verify").add_subparsers(dest="action", required=True) \
        .add_parser("all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_verify_all)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (TysysError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"tysys: {err}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    _sys.exit(main())
