"""Operation handlers shared by the FastAPI endpoints and the CLI.

Each handler maps a request model to a deterministic report envelope:

    {"tool": "stablekit", "version": ..., "subcommand": ...,
     "config": {...},  # every knob, seed and tolerance, verbatim
     "result": {...}}

Identical requests produce byte-identical reports (no timestamps, sorted
keys at serialization time).
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Callable

from .. import __version__
from ..aztec import aztec_coeffs, compare_report, report_csv
from ..graphs import forest_polynomial, matching_polynomial
from ..lattice import CouplingProblem, coupling_check
from ..permbounds import (
    bmv_coeffs,
    bregman_bound,
    capacity,
    gurvits_bound,
    mmcpt_poly,
    permanent_ryser,
    product_poly,
)
from ..realroot import newton_ulc_check, pf_check, polya_schur_refute
from ..srmeasure import (
    exclusion_evolve,
    exclusion_oracle,
    exclusion_trotter_thetas,
    genpoly,
    determinantal,
    random_closure_chain,
    rank_sequence,
    sr_consequence_battery,
    tv_distance,
)
from ..stability import cone_membership, hyperbolicity_refute, refute_stability
from ..unipoly import is_real_rooted
from . import schemas as sch


def envelope(subcommand: str, config: dict, result: dict) -> dict:
    return {
        "tool": "stablekit",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "result": result,
    }


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run_stability(req: sch.StabilityRequest) -> dict:
    p = req.polynomial.to_poly()
    verdict = refute_stability(p, trials=req.trials, seed=req.seed, box=req.box)
    return envelope(
        "stability",
        {"trials": req.trials, "seed": req.seed, "box": req.box},
        {"verdict": verdict.to_json()},
    )


def run_hyperbolicity(req: sch.HyperbolicityRequest) -> dict:
    p = req.polynomial.to_poly()
    direction = [Fraction(s) for s in req.direction]
    verdict = hyperbolicity_refute(
        p, direction, trials=req.trials, seed=req.seed, box=req.box
    )
    return envelope(
        "hyperbolicity",
        {
            "trials": req.trials,
            "seed": req.seed,
            "box": req.box,
            "direction": req.direction,
        },
        {"verdict": verdict.to_json()},
    )


def run_cone(req: sch.ConeRequest) -> dict:
    p = req.polynomial.to_poly()
    member = cone_membership(
        p, [Fraction(s) for s in req.xi], [Fraction(s) for s in req.x]
    )
    return envelope(
        "cone", {"xi": req.xi, "x": req.x}, {"member": bool(member)}
    )


def run_newton(req: sch.NewtonRequest) -> dict:
    report = newton_ulc_check([Fraction(s) for s in req.coeffs])
    return envelope("newton", {}, report.to_json())


def run_pf(req: sch.PFRequest) -> dict:
    ok = pf_check([Fraction(s) for s in req.coeffs], req.max_minor)
    return envelope("pf", {"max_minor": req.max_minor}, {"pf": bool(ok)})


def run_multiplier(req: sch.MultiplierRequest) -> dict:
    out = polya_schur_refute([Fraction(s) for s in req.lam], req.n_max)
    return envelope("multiplier", {"n_max": req.n_max}, out.to_json())


def run_matchings(req: sch.MatchingsRequest) -> dict:
    counts, q = matching_polynomial(req.weights.to_matrix())
    ulc = newton_ulc_check(counts)
    return envelope(
        "matchings",
        {},
        {
            "counts": [str(c) for c in counts],
            "q": q.to_json(),
            "ulc": ulc.to_json(),
        },
    )


def run_forests(req: sch.ForestsRequest) -> dict:
    f = forest_polynomial(req.graph.to_graph())
    positive_part = [c for c in f.coeffs if c]
    return envelope(
        "forests",
        {},
        {
            "polynomial": f.to_json(),
            "real_rooted": bool(is_real_rooted(f)),
            "ulc": newton_ulc_check(positive_part).to_json(),
        },
    )


def run_sr_audit(req: sch.SrAuditRequest) -> dict:
    mu = req.measure.to_measure()
    battery = sr_consequence_battery(mu)
    battery["rank_sequence"] = [str(c) for c in rank_sequence(mu)]
    return envelope("sr-audit", {}, battery)


def run_sr_closure(req: sch.SrClosureRequest) -> dict:
    mu = req.measure.to_measure()
    rng = random.Random(req.seed)
    chain, out = random_closure_chain(rng, mu, req.length)
    verdict = refute_stability(genpoly(out), trials=req.trials, seed=req.seed)
    result = {
        "chain": chain,
        "measure": out.to_json(),
        "verdict": verdict.to_json(),
    }
    if out.d <= 6:
        result["battery"] = sr_consequence_battery(out)
    return envelope(
        "sr-closure",
        {"seed": req.seed, "length": req.length, "trials": req.trials},
        result,
    )


def run_exclusion(req: sch.ExclusionRequest) -> dict:
    mu = req.measure.to_measure()
    rates = req.rates.to_matrix().rows
    t = Fraction(req.t)
    evolved = exclusion_evolve(mu, rates, t, steps=req.steps)
    thetas = exclusion_trotter_thetas(rates, t, req.steps, mu.d)
    result = {
        "measure": evolved.to_json(),
        # rationalized swap probabilities, recorded for reproducibility
        "thetas": {f"{i},{j}": str(th) for (i, j), th in sorted(thetas.items())},
    }
    if mu.d <= 10:
        oracle = exclusion_oracle(mu, rates, t)
        result["oracle_tv"] = tv_distance(evolved, oracle)
    return envelope(
        "exclusion", {"t": req.t, "steps": req.steps}, result
    )


def run_detmeasure(req: sch.DetMeasureRequest) -> dict:
    mu = determinantal(req.kernel.to_matrix())
    return envelope("detmeasure", {}, {"measure": mu.to_json()})


def run_coupling(req: sch.CouplingRequest) -> dict:
    problem = CouplingProblem(
        req.source.to_measure(), req.target.to_measure(), req.relation
    )
    res = coupling_check(problem)
    return envelope("coupling", {"relation": req.relation}, res.to_json())


def run_permanent(req: sch.PermanentRequest) -> dict:
    per = permanent_ryser(req.matrix.to_matrix())
    return envelope(
        "permanent", {}, {"per": str(per), "per_float": float(per)}
    )


def run_capacity(req: sch.CapacityRequest) -> dict:
    res = capacity(req.polynomial.to_poly(), tol=req.tol)
    return envelope("capacity", {"tol": req.tol}, res.to_json())


def run_gurvits(req: sch.GurvitsRequest) -> dict:
    report = gurvits_bound(req.matrix.to_matrix(), tol=req.tol)
    return envelope("gurvits", {"tol": req.tol}, report)


def run_bregman(req: sch.BregmanRequest) -> dict:
    return envelope("bregman", {}, bregman_bound(req.matrix.to_matrix()))


def run_mmcpt(req: sch.MmcptRequest) -> dict:
    report = mmcpt_poly(req.matrix.to_matrix(), trials=req.trials, seed=req.seed)
    return envelope(
        "mmcpt", {"trials": req.trials, "seed": req.seed}, report
    )


def run_bmv(req: sch.BmvRequest) -> dict:
    coeffs, nonneg = bmv_coeffs(req.a.to_matrix(), req.b.to_matrix(), req.n)
    return envelope(
        "bmv",
        {"n": req.n},
        {"coeffs": [str(c) for c in coeffs], "all_nonnegative": bool(nonneg)},
    )


def run_aztec(req: sch.AztecRequest) -> dict:
    table = aztec_coeffs(req.t_max)
    result: dict = {"t_max": req.t_max}
    if req.rays:
        t_list = req.t_list or [t for t in (41, 81, 121) if t <= req.t_max]
        rep = compare_report(req.rays, t_list, table=table)
        result["comparison"] = rep
        result["csv"] = report_csv(rep)
    else:
        center = [
            {"t": t, "value": str(table.value(0, 0, t))}
            for t in range(1, req.t_max + 1, 2)
        ]
        result["center_column"] = center
        lines = ["t,r,s,exact,float,limit,abs_error"]
        from ..aztec import arctan_limit

        for t in range(1, req.t_max + 1, 2):
            v = table.value(0, 0, t)
            lim = arctan_limit(0, 0, t)
            lines.append(
                f"{t},0,0,{v},{float(v)!r},{lim!r},{abs(float(v) - lim)!r}"
            )
        result["csv"] = "\n".join(lines) + "\n"
    return envelope(
        "aztec",
        {"t_max": req.t_max, "rays": req.rays, "t_list": req.t_list},
        result,
    )


HANDLERS: dict[str, tuple[type, Callable]] = {
    "stability": (sch.StabilityRequest, run_stability),
    "hyperbolicity": (sch.HyperbolicityRequest, run_hyperbolicity),
    "cone": (sch.ConeRequest, run_cone),
    "newton": (sch.NewtonRequest, run_newton),
    "pf": (sch.PFRequest, run_pf),
    "multiplier": (sch.MultiplierRequest, run_multiplier),
    "matchings": (sch.MatchingsRequest, run_matchings),
    "forests": (sch.ForestsRequest, run_forests),
    "sr-audit": (sch.SrAuditRequest, run_sr_audit),
    "sr-closure": (sch.SrClosureRequest, run_sr_closure),
    "exclusion": (sch.ExclusionRequest, run_exclusion),
    "detmeasure": (sch.DetMeasureRequest, run_detmeasure),
    "coupling": (sch.CouplingRequest, run_coupling),
    "permanent": (sch.PermanentRequest, run_permanent),
    "capacity": (sch.CapacityRequest, run_capacity),
    "gurvits": (sch.GurvitsRequest, run_gurvits),
    "bregman": (sch.BregmanRequest, run_bregman),
    "mmcpt": (sch.MmcptRequest, run_mmcpt),
    "bmv": (sch.BmvRequest, run_bmv),
    "aztec": (sch.AztecRequest, run_aztec),
}
