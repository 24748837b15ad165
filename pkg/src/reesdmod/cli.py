"""Command line: ``rees-dmod analyze | bfunction | corpus``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .analysis import ALL_ORACLES, DEFAULT_ORACLES, RunConfig, bfunction_only, effective_jobs, emit_report, report_dict, run_analyze
from .gb_comm import DataViolation
from .parser import ParseError, parse_polynomial, read_ideal_file
from .rees import analyze_input, random_hb_ideal


def parse_random_spec(text: str) -> dict:
    """``mu=1,d=7,seed=3,bound=9`` -> dict (bound defaults to 9)."""
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ValueError(f"random spec entries look like key=value, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        if k not in ("mu", "d", "seed", "bound"):
            raise ValueError(f"unknown random spec key {k!r}")
        out[k] = int(v)
    missing = {"mu", "d", "seed"} - set(out)
    if missing:
        raise ValueError(f"random spec misses {sorted(missing)}")
    out.setdefault("bound", 9)
    return out


def parse_oracles(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [n for n in names if n not in ALL_ORACLES]
    if bad:
        raise ValueError(f"unknown oracles {bad}; choose from {','.join(ALL_ORACLES)}")
    return names


def parse_p_range(text: str) -> tuple[int, int]:
    """``5`` or ``2..5``."""
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if not 2 <= lo <= hi <= 64:
        raise ValueError("p must lie within [2, 64]")
    return lo, hi


def _load_ideal(source: str) -> list:
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    return read_ideal_file(text)


def _ideal_from_args(args) -> tuple[list | None, dict | None]:
    if args.ideal is not None:
        return _load_ideal(args.ideal), None
    if args.inline is not None:
        parts = [s for s in args.inline.split(";") if s.strip()]
        if len(parts) != 3:
            raise ValueError("--inline expects three polynomials separated by ';'")
        return [parse_polynomial(s) for s in parts], None
    if args.random is not None:
        return None, parse_random_spec(args.random)
    raise ValueError("one of --ideal, --inline or --random is required")


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ideal", help="file with three polynomials, or - for stdin")
    g.add_argument("--inline", help="three polynomials separated by ';'")
    g.add_argument("--random", help="mu=<int>,d=<int>,seed=<int>,bound=<int>")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rees-dmod", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full pipeline with cross-checks")
    _add_source(a)
    a.add_argument("--pmax", type=int, default=None, help="largest T-degree (default d)")
    a.add_argument("--oracles", default=",".join(DEFAULT_ORACLES),
                   help=f"comma list from {','.join(ALL_ORACLES)}")
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--bcap", type=int, default=None, help="b-function degree cap (default 4(d+p))")
    a.add_argument("--derham-budget", type=int, default=60000,
                   help="largest truncated space (in words) for the de Rham check")
    a.add_argument("--jobs", type=int, default=1)
    a.add_argument("-o", "--output", help="write the report here instead of stdout")

    b = sub.add_parser("bfunction", help="factored b-functions b_M(s) for T-degrees p")
    _add_source(b)
    b.add_argument("-p", required=True, help="T-degree p, or a range like 2..5")
    b.add_argument("--bcap", type=int, default=None)
    b.add_argument("--format", choices=("json", "text"), default="text")

    c = sub.add_parser("corpus", help="run a JSON list of configurations")
    c.add_argument("--spec", required=True, help="JSON corpus file")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("-o", "--output")
    return ap


def _write(data: bytes, target: str | None) -> None:
    if target:
        Path(target).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_analyze(args) -> int:
    ideal, rnd = _ideal_from_args(args)
    cfg = RunConfig(ideal=ideal, random=rnd, p_max=args.pmax, oracles=parse_oracles(args.oracles),
                    bcap=args.bcap, derham_budget=args.derham_budget, jobs=args.jobs)
    res = run_analyze(cfg)
    _write(emit_report(res, args.format), args.output)
    if res.hb is None:
        for e in res.errors:
            print(e, file=sys.stderr)
    return 0 if res.ok else 1


def cmd_bfunction(args) -> int:
    ideal, rnd = _ideal_from_args(args)
    if rnd is not None:
        ideal = list(random_hb_ideal(rnd["mu"], rnd["d"], rnd["seed"], rnd["bound"]).f)
    hb = analyze_input(*ideal)
    lo, hi = parse_p_range(args.p)
    results = [bfunction_only(hb, p, args.bcap) for p in range(lo, hi + 1)]
    if args.format == "text":
        out = "".join(r.factored + "\n" for r in results)
    else:
        from .analysis import _coeff_strs
        out = json.dumps({str(r.p): {"factored": r.factored, "coeffs": _coeff_strs(r.b)} for r in results},
                         indent=2) + "\n"
    _write(out.encode(), None)
    return 0


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def config_from_entry(entry: dict) -> RunConfig:
    """Corpus entries: {"ideal": [f1, f2, f3]} or {"random": {...}}, plus optional
    "pmax", "oracles" (list), "bcap", "label"."""
    ideal = rnd = None
    if "ideal" in entry:
        ideal = [parse_polynomial(s) for s in entry["ideal"]]
    if "random" in entry:
        r = entry["random"]
        rnd = parse_random_spec(r) if isinstance(r, str) else {"bound": 9, **r}
    oracles = tuple(entry.get("oracles", DEFAULT_ORACLES))
    return RunConfig(ideal=ideal, random=rnd, p_max=entry.get("pmax"), oracles=oracles,
                     bcap=entry.get("bcap"), derham_budget=entry.get("derham_budget", 60000),
                     label=entry.get("label", ""))


def _run_entry(entry: dict) -> dict:
    label = entry.get("label") or json.dumps(entry.get("ideal") or entry.get("random"))
    try:
        res = run_analyze(config_from_entry(entry))
    except (ValueError, ParseError) as exc:
        return {"label": label, "ok": False, "checks": {}, "errors": [str(exc)]}
    rep = report_dict(res)
    return {"label": label, "ok": rep["ok"], "checks": rep["checks"], "errors": rep["errors"],
            "bfunctions": {p: v["factored"] for p, v in rep["bfunctions"].items()},
            "min_gens": rep["min_gens"]}


def corpus_runner(entries: list[dict], jobs: int = 1) -> dict:
    if not entries:
        raise ValueError("empty corpus")
    jobs = effective_jobs(jobs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_run_entry, entries))
    else:
        runs = [_run_entry(e) for e in entries]
    per_check: dict[str, dict[str, int]] = {}
    for r in runs:
        for k, v in r["checks"].items():
            ok = bool(v.get("verified", False)) if isinstance(v, dict) else bool(v)
            slot = per_check.setdefault(k, {"pass": 0, "fail": 0})
            slot["pass" if ok else "fail"] += 1
    return {"runs": runs, "summary": {"total": len(runs), "passed": sum(r["ok"] for r in runs),
                                      "per_check": dict(sorted(per_check.items()))}}


def cmd_corpus(args) -> int:
    entries = json.loads(Path(args.spec).read_text())
    if isinstance(entries, dict):
        entries = entries.get("configs", [])
    summary = corpus_runner(entries, args.jobs)
    _write((json.dumps(summary, indent=2) + "\n").encode(), args.output)
    return 0 if summary["summary"]["passed"] == summary["summary"]["total"] else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "bfunction":
            return cmd_bfunction(args)
        return cmd_corpus(args)
    except (ParseError, DataViolation, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
