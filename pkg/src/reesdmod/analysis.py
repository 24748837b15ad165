"""End-to-end analysis of one ideal and report emission (JSON or text)."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from . import univariate as uv
from .bfun import (
    BFunctionResult,
    corollary_divisibility,
    holonomicity_check,
    module_bfunction,
    restriction_matrices,
    verify_theorem_b,
)
from .gb_comm import DataViolation, GBBudgetExceeded, groebner_basis
from .oracles import (
    InfiniteLength,
    TruncationBudgetExceeded,
    derham_schedule,
    dual_module_graded_dims,
    local_cohomology_solution_dim,
    polynomial_solution_dim,
)
from .parser import format_xy
from .poly_core import rational_str
from .rees import (
    PRNG_LABEL,
    BigradedTable,
    HilbertBurchData,
    analyze_input,
    corollary_bounds_hold,
    k_table,
    random_hb_ideal,
    rees_ideal,
    same_ideal,
)

ALL_ORACLES = ("thA", "thB", "thC", "thD", "duality")
DEFAULT_ORACLES = ("thA", "thB", "thD", "duality")


@dataclass
class RunConfig:
    ideal: list | None = None  # three CommPoly
    random: dict | None = None  # mu, d, seed, bound
    p_min: int = 2
    p_max: int | None = None
    oracles: tuple[str, ...] = DEFAULT_ORACLES
    bcap: int | None = None
    derham_budget: int = 60000
    jobs: int = 1
    label: str = ""

    def __post_init__(self):
        if (self.ideal is None) == (self.random is None):
            raise ValueError("give exactly one of an explicit ideal or a random spec")
        bad = set(self.oracles) - set(ALL_ORACLES)
        if bad:
            raise ValueError(f"unknown oracles: {sorted(bad)}")
        if self.p_max is not None and not 2 <= self.p_min <= self.p_max <= 64:
            raise ValueError("p range must lie within [2, 64]")
        if self.bcap is not None and self.bcap <= 0:
            raise ValueError("the b-function cap must be positive")
        if self.derham_budget <= 0 or self.jobs <= 0:
            raise ValueError("budgets and job counts must be positive")


@dataclass
class ReesAnalysis:
    config: RunConfig
    hb: HilbertBurchData | None = None
    table: BigradedTable | None = None
    req_generators: list = field(default_factory=list)
    bfunctions: dict = field(default_factory=dict)  # p -> BFunctionResult
    oracles: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    random_info: dict | None = None

    @property
    def ok(self) -> bool:
        if self.errors or self.hb is None:
            return False
        return all(_flag_ok(v) for v in self.checks.values())


def _flag_ok(v) -> bool:
    if isinstance(v, dict):
        return bool(v.get("verified", v.get("ok", False)))
    return bool(v)


def effective_jobs(requested: int) -> int:
    env = os.environ.get("REES_DMOD_JOBS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"REES_DMOD_JOBS must be an integer, got {env!r}") from None
        if n > 0:
            return n
    return max(1, requested)


# ---------------------------------------------------------------------------
# per-p work (picklable, runs in worker processes)
# ---------------------------------------------------------------------------

def _per_p(hb: HilbertBurchData, p: int, oracles: tuple, bcap, derham_budget, kdims: dict) -> dict:
    out: dict = {"p": p, "timings": {}, "errors": []}
    t = time.perf_counter()
    sys = restriction_matrices(hb, p)
    try:
        out["bfunction"] = module_bfunction(sys, cap=bcap)
    except Exception as exc:  # cap or budget, reported under Theorem B
        out["errors"].append(f"thB p={p}: {exc}")
    out["timings"]["bfunction"] = time.perf_counter() - t
    t = time.perf_counter()
    out["holonomic"] = holonomicity_check(sys)
    out["timings"]["holonomic"] = time.perf_counter() - t
    d = hb.d
    qs = range(0, d - 1)
    if "thD" in oracles:
        t = time.perf_counter()
        out["thD"] = {q: local_cohomology_solution_dim(hb, p, q) for q in qs}
        out["timings"]["thD"] = time.perf_counter() - t
    if "thA" in oracles:
        t = time.perf_counter()
        out["thA"] = {q: polynomial_solution_dim(sys, k=d - 2 - q) for q in qs}
        out["timings"]["thA"] = time.perf_counter() - t
    if "duality" in oracles:
        t = time.perf_counter()
        try:
            dm = dual_module_graded_dims(sys)
            out["duality"] = {"dims": {q: dm.dims[d - 2 - q] for q in qs}, "end": dm.end,
                              "fourier_ok": dm.fourier_ok,
                              "beyond": sum(v for k, v in dm.dims.dims.items() if k > d - 2)}
        except InfiniteLength as exc:
            out["errors"].append(f"duality p={p}: {exc}")
        out["timings"]["duality"] = time.perf_counter() - t
    if "thC" in oracles:
        t = time.perf_counter()
        target = sum(kdims.get((p, q), 0) for q in qs)
        try:
            res = derham_schedule(sys, hb, target, size_budget=derham_budget)
            out["thC"] = {"dim": res.dim, "stabilized": res.stabilized, "N": res.N,
                          "target": target, "verified": res.verified,
                          "trace": [list(x) for x in res.trace]}
        except (TruncationBudgetExceeded, GBBudgetExceeded) as exc:
            trace = getattr(exc, "trace", [])
            last = trace[-1] if trace else (None, None)
            out["thC"] = {"dim": last[1], "stabilized": False, "N": last[0], "target": target,
                          "verified": False, "trace": [list(x) for x in trace], "error": str(exc)}
        out["timings"]["thC"] = time.perf_counter() - t
    return out


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def run_analyze(cfg: RunConfig) -> ReesAnalysis:
    res = ReesAnalysis(cfg)
    t0 = time.perf_counter()
    if cfg.random is not None:
        r = cfg.random
        try:
            inst = random_hb_ideal(r["mu"], r["d"], r["seed"], r.get("bound", 9))
        except Exception as exc:
            res.errors.append(f"input: {exc}")
            return res
        polys = list(inst.f)
        res.random_info = {**r, "prng": PRNG_LABEL, "rejections": inst.rejections}
    else:
        polys = list(cfg.ideal)
    try:
        hb = analyze_input(*polys)
    except DataViolation as exc:
        res.errors.append(f"input: {exc}")
        return res
    res.hb = hb
    res.timings["presentation"] = time.perf_counter() - t0

    t = time.perf_counter()
    req = rees_ideal(hb, "saturation")
    req_elim = rees_ideal(hb, "elimination")
    res.checks["req_routes_agree"] = same_ideal(req, req_elim)
    res.req_generators = [format_xy(g) for g in req.generators]
    res.timings["rees_ideal"] = time.perf_counter() - t

    p_max = cfg.p_max if cfg.p_max is not None else hb.d
    t = time.perf_counter()
    table = k_table(hb, req, p_max, cfg.p_min)
    res.table = table
    sym = groebner_basis([hb.g1, hb.g2])
    res.checks["vanishing_bounds"] = corollary_bounds_hold(table, sym, req)
    gens = table.min_gens
    lin = sorted([(1, hb.mu), (1, hb.d - hb.mu)])
    res.checks["min_gens_contain_syzygies"] = (
        sorted(g for g in gens if g[0] == 1) == lin and all(g[0] >= 2 for g in gens if g[0] != 1))
    res.timings["k_table"] = time.perf_counter() - t

    ps = list(range(cfg.p_min, p_max + 1))
    jobs = effective_jobs(cfg.jobs)
    args = [(hb, p, tuple(cfg.oracles), cfg.bcap, cfg.derham_budget, table.dims) for p in ps]
    t = time.perf_counter()
    if jobs > 1 and len(ps) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(ps))) as pool:
            outs = list(pool.map(_per_p, *zip(*args)))
    else:
        outs = [_per_p(*a) for a in args]
    res.timings["per_p"] = time.perf_counter() - t
    _assemble(res, sorted(outs, key=lambda o: o["p"]))
    res.timings["total"] = time.perf_counter() - t0
    return res


def _assemble(res: ReesAnalysis, outs: list[dict]) -> None:
    hb, table, cfg = res.hb, res.table, res.config
    d = hb.d
    qs = range(0, d - 1)
    hol, thb, thd, tha, dual, thc, divides = {}, {}, {}, {}, {}, {}, {}
    for o in outs:
        p = o["p"]
        res.errors.extend(o["errors"])
        for k, v in o["timings"].items():
            res.timings[f"p{p}.{k}"] = v
        hol[p] = o["holonomic"][0]
        b: BFunctionResult | None = o.get("bfunction")
        if b is not None:
            res.bfunctions[p] = b
        kd = {q: table.dims[(p, q)] for q in qs}
        if "thB" in cfg.oracles and b is not None:
            v = verify_theorem_b(table, b, p)
            thb[p] = v.passed
            if not v.passed:
                res.errors.append(f"thB p={p}: {v.detail}")
            sup = table.support(p)
            if sup:
                divides[p] = corollary_divisibility(b, min(sup), d)
        elif "thB" in cfg.oracles:
            thb[p] = False
        if "thD" in o:
            thd[p] = o["thD"] == kd
        if "thA" in o:
            tha[p] = o["thA"] == kd
        if "duality" in o:
            du = o["duality"]
            ok = du["dims"] == kd and du["fourier_ok"] and du["beyond"] == 0
            if b is not None and du["end"] is not None:
                ok = ok and uv._trim(b.b) == uv.product_of_shifts(range(du["end"] + 1))
            dual[p] = ok
        elif "duality" in cfg.oracles:
            dual[p] = False
        if "thC" in o:
            thc[p] = o["thC"]
    res.checks["holonomic"] = all(hol.values())
    res.oracles["holonomic"] = hol
    if "thB" in cfg.oracles:
        res.checks["thB"] = all(thb.values())
        res.checks["support_divides"] = all(divides.values())
        res.oracles["thB"] = thb
    for name, flags in (("thD", thd), ("thA", tha), ("duality", dual)):
        if name in cfg.oracles:
            res.checks[name] = bool(flags) and all(flags.values())
            res.oracles[name] = flags
    if "thC" in cfg.oracles:
        res.checks["thC"] = bool(thc) and all(v["verified"] for v in thc.values())
        res.oracles["thC"] = thc


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _coeff_strs(b) -> list[str]:
    return [rational_str(c) for c in uv._trim(b)]


def report_dict(res: ReesAnalysis) -> dict:
    cfg = res.config
    out: dict = {}
    hb = res.hb
    if hb is not None:
        out["input"] = {"f": [format_xy(f) for f in hb.f], "d": hb.d, "mu": hb.mu}
        out["phi"] = [[format_xy(e) for e in row] for row in hb.phi]
        out["g"] = [format_xy(hb.g1), format_xy(hb.g2)]
        out["L"] = [str(hb.L1), str(hb.L2)]
    else:
        out["input"] = {"f": [format_xy(f) for f in cfg.ideal] if cfg.ideal else [], "d": None, "mu": None}
        out["phi"] = []
        out["g"] = []
        out["L"] = []
    if res.random_info is not None:
        out["random"] = res.random_info
    t = res.table
    out["table"] = {f"{p},{q}": v for (p, q), v in sorted(t.dims.items())} if t else {}
    out["min_gens"] = [list(g) for g in t.min_gens] if t else []
    out["rees_ideal"] = res.req_generators
    out["bfunctions"] = {
        str(p): {"factored": b.factored, "coeffs": _coeff_strs(b.b),
                 "components": [{"factored": uv.format_factored(c), "coeffs": _coeff_strs(c)}
                                for c in b.components]}
        for p, b in sorted(res.bfunctions.items())}
    orc: dict = {}
    for name in ("thA", "thB", "thD", "duality"):
        if name in res.checks:
            orc[name] = res.checks[name]
    if "thC" in res.oracles:
        orc["thC"] = {str(p): v for p, v in sorted(res.oracles["thC"].items())}
        orc["thC_note"] = "truncation schedule N = d + p, doubling; stabilization certificate is heuristic"
    out["oracles"] = orc
    out["checks"] = dict(res.checks)
    out["ok"] = res.ok
    out["errors"] = list(res.errors)
    out["timings"] = {k: round(v, 4) for k, v in res.timings.items()}
    out["version"] = __version__
    return out


def emit_report(res: ReesAnalysis, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report_dict(res), indent=2) + "\n").encode()
    if fmt == "text":
        return text_report(res).encode()
    raise ValueError(f"unknown format {fmt!r}")


def text_report(res: ReesAnalysis) -> str:
    lines = []
    hb = res.hb
    if hb is None:
        lines.append("input rejected")
        lines.extend(res.errors)
        return "\n".join(lines) + "\n"
    lines.append("I = (" + ", ".join(format_xy(f) for f in hb.f) + ")")
    lines.append(f"d = {hb.d}, mu = {hb.mu}")
    lines.append(f"g1 = {format_xy(hb.g1)}")
    lines.append(f"g2 = {format_xy(hb.g2)}")
    lines.append(f"L1 = {hb.L1}")
    lines.append(f"L2 = {hb.L2}")
    lines.append("REQ = (" + ", ".join(res.req_generators) + ")")
    lines.append("")
    t = res.table
    lines.append("dim K_{p,q}")
    head = "p\\q " + " ".join(f"{q:>5}" for q in range(hb.d - 1))
    lines.append(head)
    lo, hi = t.p_range
    for p in range(lo, hi + 1):
        lines.append(f"{p:>3} " + " ".join(f"{v:>5}" for v in t.row(p)))
    lines.append("minimal generator bidegrees: " + " ".join(f"({p},{q})" for p, q in t.min_gens))
    lines.append("")
    lines.append("b-functions, p = " + ", ".join(str(p) for p in sorted(res.bfunctions)))
    for p in sorted(res.bfunctions):
        lines.append(res.bfunctions[p].factored)
    lines.append("")
    lines.append("checks")
    width = max((len(k) for k in res.checks), default=0)
    for k, v in res.checks.items():
        lines.append(f"  {k:<{width}}  {'pass' if _flag_ok(v) else 'FAIL'}")
    if "thC" in res.oracles:
        for p, v in sorted(res.oracles["thC"].items()):
            lines.append(f"  thC p={p}: dim {v['dim']} target {v['target']} stabilized at N = {v['N']}"
                         " (truncation heuristic)")
    for e in res.errors:
        lines.append(f"error: {e}")
    return "\n".join(lines) + "\n"


def bfunction_only(hb: HilbertBurchData, p: int, cap: int | None = None) -> BFunctionResult:
    return module_bfunction(restriction_matrices(hb, p), cap=cap)

