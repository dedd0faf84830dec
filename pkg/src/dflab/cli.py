"""Command line front end: configuration, scenario execution, reports.

Exit codes: 0 all scenarios pass; 1 some scenario mismatched; 2 bad
configuration; 3 a budget was exceeded (partial report written).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .scenarios import SCENARIOS, ConfigError, ScenarioConfig, run_predictions

SCHEMA_VERSION = 1

CHECK_NAMES = {"schur", "ez", "koszul", "cauchy", "gamma", "l31"}
ALL_ORDER = [
    "gk",
    "cross2",
    "cross3",
    "tor-powers",
    "predict",
    "check-schur",
    "check-l31",
    "check-koszul",
    "check-ez",
    "check-cauchy",
    "check-gamma",
]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=97, help="coefficient field modulus")
    common.add_argument(
        "--rationals", action="store_true", help="use rational coefficients instead of F_p"
    )
    common.add_argument("--vars", default="x,y", help="comma-separated ring variables")
    common.add_argument(
        "--seq", default=None, help="comma-separated regular sequence (default: the variables)"
    )
    common.add_argument("--nmax", type=int, default=7, help="simplicial truncation degree")
    common.add_argument("--tmax", type=int, default=12, help="internal degree bound")
    common.add_argument(
        "--engine", choices=["graded", "groebner", "both"], default="graded"
    )
    common.add_argument("--out", default=None, help="write the report to this path")
    common.add_argument("--format", choices=["json", "markdown"], default="json")
    common.add_argument("--jobs", type=int, default=1, help="parallel scenarios for 'all'")
    common.add_argument(
        "--budget-seconds", type=float, default=None, help="per-scenario time budget"
    )
    common.add_argument(
        "--no-timing",
        action="store_true",
        help="zero the millis fields for byte-stable reports",
    )
    common.add_argument(
        "--config", default=None, help="JSON file of flag defaults (explicit flags win)"
    )
    ap = argparse.ArgumentParser(
        prog="dflab",
        description="exact derived-functor rank tables and structure checks",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    gk = sub.add_parser("gk", parents=[common], help="derived-functor table of the cube pipeline")
    gk.add_argument("--route", choices=["a", "b", "both"], default="a")
    sub.add_parser("cross2", parents=[common], help="second cross-effect tables")
    sub.add_parser("cross3", parents=[common], help="third cross-effect table")
    sub.add_parser(
        "tor-powers", parents=[common], help="homology of tensor powers of the resolution"
    )
    pred = sub.add_parser("predict", parents=[common], help="predicted tables at conormal rank d")
    pred.add_argument("--d", type=int, default=2)
    chk = sub.add_parser("check", parents=[common], help="structure check suites")
    chk.add_argument("suite", choices=sorted(CHECK_NAMES))
    allp = sub.add_parser("all", parents=[common], help="every scenario")
    allp.add_argument("--route", choices=["a", "b", "both"], default="a")
    return ap


def _config_from_args(args) -> ScenarioConfig:
    variables = tuple(v for v in args.vars.split(",") if v)
    sequence = None
    if args.seq is not None:
        sequence = tuple(s for s in args.seq.split(",") if s)
    return ScenarioConfig(
        prime=args.prime,
        rationals=args.rationals,
        variables=variables,
        sequence=sequence,
        n_max=args.nmax,
        t_max=args.tmax,
        engine=args.engine,
        route=getattr(args, "route", "a"),
        budget_s=args.budget_seconds,
    )


def _run_named(name: str, cfg_kwargs: dict, extra: dict):
    cfg = ScenarioConfig(**cfg_kwargs)
    if name == "predict":
        return run_predictions(cfg, d=extra.get("d", 2)).to_dict()
    return SCENARIOS[name](cfg).to_dict()


def _render_markdown(doc: dict) -> str:
    lines = ["# dflab report", ""]
    ring = doc["ring"]
    lines.append(
        f"ring: {ring['field']}[{', '.join(ring['vars'])}], sequence ({', '.join(ring['seq'])})"
    )
    lines.append("")
    lines.append("| scenario | pass | expected | computed | millis |")
    lines.append("|---|---|---|---|---|")
    for s in doc["scenarios"]:
        lines.append(
            "| {name} | {p} | {e} | {c} | {ms} |".format(
                name=s["name"],
                p="yes" if s["pass"] else "NO",
                e=json.dumps(s["expected"], sort_keys=True),
                c=json.dumps({k: v for k, v in s["computed"].items() if not isinstance(v, dict)}, sort_keys=True),
                ms=s["millis"],
            )
        )
    lines.append("")
    lines.append(f"overall: {'pass' if doc['pass'] else 'FAIL'}")
    lines.append("")
    return "\n".join(lines)


_CONFIG_FLAGS = {
    "prime": "--prime",
    "rationals": "--rationals",
    "vars": "--vars",
    "seq": "--seq",
    "nmax": "--nmax",
    "tmax": "--tmax",
    "engine": "--engine",
    "out": "--out",
    "format": "--format",
    "jobs": "--jobs",
    "budget_seconds": "--budget-seconds",
    "no_timing": "--no-timing",
    "route": "--route",
    "d": "--d",
}


def _apply_config_file(args, argv):
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        values = json.load(fh)
    tokens = set(argv if argv is not None else sys.argv[1:])
    for key, val in values.items():
        flag = _CONFIG_FLAGS.get(key)
        if flag is None:
            raise SystemExit(f"unknown config key {key!r}")
        if flag in tokens or any(t.startswith(flag + "=") for t in tokens):
            continue  # explicit flags win
        if hasattr(args, key):
            setattr(args, key, val)
    return args


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args = _apply_config_file(args, argv)
    try:
        cfg = _config_from_args(args)
        ring_echo = cfg.ring().describe()
    except (ConfigError, ValueError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    if args.command == "check":
        names = [f"check-{args.suite}"]
    elif args.command == "all":
        names = list(ALL_ORDER)
    else:
        names = [args.command]

    extra = {"d": getattr(args, "d", 2)}
    cfg_kwargs = dict(cfg.__dict__)
    results = []
    try:
        if args.command == "all" and args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                futs = [pool.submit(_run_named, n, cfg_kwargs, extra) for n in names]
                results = [f.result() for f in futs]
        else:
            for n in names:
                results.append(_run_named(n, cfg_kwargs, extra))
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    if args.no_timing:
        for r in results:
            r["millis"] = 0
    doc = {
        "schema_version": SCHEMA_VERSION,
        "ring": ring_echo,
        "scenarios": results,
        "pass": all(r["pass"] for r in results),
    }
    text = (
        json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if args.format == "json"
        else _render_markdown(doc)
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for r in results:
        status = "PASS" if r["pass"] else ("PARTIAL" if r.get("partial") else "FAIL")
        print(f"[{status}] {r['name']} ({r['millis']} ms)", file=sys.stderr)
    if any(r.get("partial") for r in results):
        return 3
    return 0 if doc["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
