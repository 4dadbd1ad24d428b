"""Command-line driver: configuration ingestion, suite orchestration, reports.

``dbk run spec.json`` executes the verification tasks named in the
document against one model and emits a structured JSON report (plus
optional CSV spectra). Reports are byte-deterministic: the document seed
fixes every randomized grid and all floats are rendered with 17
significant digits in lowercase scientific notation.

Exit codes: 0 success, 1 at least one task failed (the failing residual
is in the report), 2 schema violation (path-precise message, nothing
executed).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import re
import sys

import numpy as np

from . import (RealEntireFunction, canonical_product, check_gauge_identities,
               check_lemma_inner, check_lemma_orthogonality, gauge_check,
               theorem43_consistency, uniqueness_check, verify_generating,
               verify_rank_one, zero_free_membership)
from .errors import DBKError
from .models import CATALOG, describe_model, resolve_model
from .space import DBSpaceModel, Numerics

_PI = math.pi

TASK_NAMES = ("spectrum", "verify-rank-one", "verify-generating", "verify-lemmas",
              "zero-free", "theorem43", "uniqueness", "gauge")

_BETA_RE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?pi\s*(?:/\s*(\d+))?\s*$")


class SchemaError(Exception):
    """Document rejected before any computation; carries a JSON path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def parse_beta(value, path="beta"):
    """Radians as a number, or an exact pi fraction like 'pi/2' or '2pi/3'."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        m = _BETA_RE.match(value)
        if m:
            num = int(m.group(1) or 1)
            den = int(m.group(2) or 1)
            return num * _PI / den
        try:
            return float(value)
        except ValueError:
            pass
    raise SchemaError(path, f"cannot parse angle {value!r} (use radians or 'pi/2' style)")


# ----------------------------------------------------------------------
# document validation


def _require(cond, path, msg):
    if not cond:
        raise SchemaError(path, msg)


def validate_document(doc):
    """Normalize and validate a document; raises SchemaError on any defect."""
    _require(isinstance(doc, dict), "$", "document must be a JSON object")
    unknown = set(doc) - {"model", "numerics", "tasks"}
    _require(not unknown, "$", f"unknown keys {sorted(unknown)}")
    _require("model" in doc, "$.model", "required")
    _require(isinstance(doc["model"], (str, dict)), "$.model",
             "must be a catalog name or an inline object")
    _require("tasks" in doc and isinstance(doc["tasks"], list) and doc["tasks"],
             "$.tasks", "required nonempty list")

    numerics = doc.get("numerics", {})
    _require(isinstance(numerics, dict), "$.numerics", "must be an object")
    known = {"window", "truncation", "tol", "beta_grid", "seed"}
    unknown = set(numerics) - known
    _require(not unknown, "$.numerics", f"unknown keys {sorted(unknown)}")
    if "window" in numerics:
        w = numerics["window"]
        _require(isinstance(w, list) and len(w) == 2
                 and all(isinstance(x, (int, float)) for x in w) and w[0] < w[1],
                 "$.numerics.window", "must be [lo, hi] with lo < hi")
    if "truncation" in numerics:
        _require(isinstance(numerics["truncation"], int) and numerics["truncation"] > 0,
                 "$.numerics.truncation", "must be a positive integer")
    if "tol" in numerics:
        _require(isinstance(numerics["tol"], (int, float)) and numerics["tol"] > 0,
                 "$.numerics.tol", "must be positive")
    if "seed" in numerics:
        _require(isinstance(numerics["seed"], int), "$.numerics.seed", "must be an integer")
    beta_grid = numerics.get("beta_grid", 25)
    if isinstance(beta_grid, int):
        _require(beta_grid >= 2, "$.numerics.beta_grid", "count must be >= 2")
    elif isinstance(beta_grid, list):
        beta_grid = [parse_beta(b, f"$.numerics.beta_grid[{i}]")
                     for i, b in enumerate(beta_grid)]
    else:
        raise SchemaError("$.numerics.beta_grid", "must be a count or a list of angles")

    tasks = []
    for i, item in enumerate(doc["tasks"]):
        path = f"$.tasks[{i}]"
        if isinstance(item, str):
            item = {"task": item}
        _require(isinstance(item, dict), path, "must be a task name or object")
        name = item.get("task")
        _require(name in TASK_NAMES, path,
                 f"unknown task {name!r}; known: {', '.join(TASK_NAMES)}")
        spec = dict(item)
        for key in ("beta", "beta1", "beta2"):
            if key in spec:
                spec[key] = parse_beta(spec[key], f"{path}.{key}")
        if "betas" in spec:
            _require(isinstance(spec["betas"], list) and len(spec["betas"]) >= 2,
                     f"{path}.betas", "must be a list of >= 2 angles")
            spec["betas"] = [parse_beta(b, f"{path}.betas[{k}]")
                             for k, b in enumerate(spec["betas"])]
        for key in ("draws", "points", "N"):
            if key in spec:
                _require(isinstance(spec[key], int) and spec[key] > 0,
                         f"{path}.{key}", "must be a positive integer")
        tasks.append(spec)

    return {"model": doc["model"], "numerics": dict(numerics, beta_grid=beta_grid),
            "tasks": tasks}


def _build_space(model_spec, numerics):
    space = resolve_model(model_spec)
    overrides = {}
    if "window" in numerics:
        overrides["window"] = tuple(float(x) for x in numerics["window"])
    if "truncation" in numerics:
        overrides["truncation"] = int(numerics["truncation"])
    if "tol" in numerics:
        overrides["tol"] = float(numerics["tol"])
    if overrides:
        space = DBSpaceModel(space.s0, space.s_half, dim=space.dim,
                             numerics=dataclasses.replace(space.numerics, **overrides),
                             provenance=space.provenance, jacobi=space.jacobi)
    return space


def _beta_grid(numerics):
    g = numerics["beta_grid"]
    if isinstance(g, int):
        return list(np.linspace(0.01 + _PI * 0.0, _PI - 0.01, g))
    return list(g)


def _default_thm43_betas():
    # five values clustering geometrically toward pi/2 (finite surrogate for
    # the accumulation-point hypothesis)
    return [_PI / 2.0 - (_PI / 4.0) * 0.5**k for k in range(5)]


# ----------------------------------------------------------------------
# task runners


def _run_spectrum(space, spec, rng):
    beta = spec.get("beta", _PI / 2.0)
    data = space.spectrum(beta)
    return {
        "passed": True,
        "beta": beta,
        "points": [float(x) for x in data.points],
        "derivs": [float(x) for x in data.derivs],
        "kernel_diag": [float(x) for x in data.diag],
        "jumps": [float(x) for x in data.jumps] if data.jumps is not None else None,
        "relation_case": data.relation_case,
        "complete": data.complete,
        "window": list(data.window),
        "provenance": "sign-scan + Brent + Newton polish; count vs eigensolver oracle",
    }, data


def _run_verify_rank_one(space, spec, rng, betas):
    betas = [spec["beta"]] if "beta" in spec else betas
    worst = None
    results = []
    for b in betas:
        rep = verify_rank_one(space, b, N=spec.get("N"))
        results.append({"beta": b, "passed": rep.passed, "residual": rep.residual,
                        "tolerance": rep.tolerance})
        if worst is None or rep.residual > worst["residual"]:
            worst = results[-1]
    return {
        "passed": all(r["passed"] for r in results),
        "n_betas": len(betas),
        "worst": worst,
        "per_beta": results,
        "provenance": "eig(rank-one matrix) vs root scan of s_beta",
    }, None


def _run_verify_generating(space, spec, rng, betas):
    betas = [spec["beta"]] if "beta" in spec else betas
    results = []
    for b in betas:
        rep = verify_generating(space, b)
        results.append({"beta": b, "passed": rep.passed,
                        "singular_value_ratio": rep.detail.get("singular_value_ratio"),
                        "min_projection": rep.detail.get("min_projection")})
    relation = verify_generating(space, 0.0)
    return {
        "passed": all(r["passed"] for r in results) and not relation.passed,
        "per_beta": results,
        "relation_case_not_generating": not relation.passed,
        "provenance": "eigenspace projections + resolvent Gram rank",
    }, None


def _random_poly(rng, max_degree):
    if max_degree < 0:
        return RealEntireFunction.const(0.0)
    return RealEntireFunction.poly(rng.standard_normal(max_degree + 1))


def _run_verify_lemmas(space, spec, rng):
    draws = spec.get("draws", 100)
    dim = space.dim if space.dim is not None else space.numerics.truncation
    worst_orth = worst_inner = 0.0
    n_pass = 0
    for _ in range(draws):
        beta = float(rng.uniform(0.05, _PI - 0.05))
        f = _random_poly(rng, dim - 1)
        h = _random_poly(rng, dim - 2)
        w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        rep_o = check_lemma_orthogonality(space, beta, h)
        rep_i = check_lemma_inner(space, beta, f, w)
        worst_orth = max(worst_orth, rep_o.residual)
        worst_inner = max(worst_inner, rep_i.residual / rep_i.tolerance * 1e-8)
        n_pass += int(rep_o.passed and rep_i.passed)
    return {
        "passed": n_pass == draws,
        "draws": draws,
        "worst_orthogonality_residual": worst_orth,
        "worst_inner_residual_scaled": worst_inner,
        "provenance": "quadrature + Parseval routes vs closed forms",
    }, None


def _run_zero_free(space, spec, rng):
    beta = spec.get("beta", _PI / 2.0)
    cand = zero_free_membership(space, beta)
    out = {
        "passed": cand.verdict == "in-space",
        "beta": beta,
        "verdict": cand.verdict,
        "stat": cand.stat,
        "tail_estimate": cand.tail.estimate,
        "residues": [float(c) for c in cand.residues],
    }
    if cand.g is not None:
        out["norm_sq"] = cand.norm_sq
        out["checks"] = dict(cand.checks)
    out["provenance"] = "summability criterion; sampling reconstruction; norm identity"
    return out, None


def _run_theorem43(space, spec, rng):
    betas = spec.get("betas") or _default_thm43_betas()
    j0 = canonical_product(space, 0.0)
    rep = theorem43_consistency(space, betas, j0)
    return {
        "passed": rep.passed,
        "betas": betas,
        "cross_beta_deviation": rep.detail["cross_beta_deviation"],
        "direct_ratio_deviation": rep.detail["direct_ratio_deviation"],
        "l2_masses": rep.detail["l2_masses"],
        "note": rep.detail["note"],
        "provenance": "U_beta reconstructions vs direct s0/j0 ratio",
    }, None


def _run_uniqueness(space, spec, rng):
    beta1 = spec.get("beta1", _PI / 2.0)
    beta2 = spec.get("beta2", _PI / 4.0)
    rep = uniqueness_check(space, beta1, beta2)
    return {
        "passed": rep.passed,
        "beta_pair": [beta1, beta2],
        "residual": rep.residual,
        "ratio": rep.detail["ratio"],
        "provenance": "ratio of sampling-reconstructed zero-free candidates",
    }, None


def _run_gauge(space, spec, rng):
    beta = spec.get("beta", _PI / 2.0)
    n_pts = spec.get("points", 20)
    cand = zero_free_membership(space, beta)
    if cand.verdict != "in-space":
        return {"passed": False, "beta": beta, "verdict": cand.verdict,
                "provenance": "gauge criterion needs an in-space zero-free function"}, None
    grid = [complex(x, y) for x, y in
            zip(rng.uniform(-2, 2, n_pts), rng.uniform(-2, 2, n_pts))]
    rep = gauge_check(space, cand.g, grid)
    ident = check_gauge_identities(space)
    return {
        "passed": rep.passed and ident.passed,
        "beta": beta,
        "gauge_margin": rep.residual,
        "identity_residual": ident.residual,
        "n_points": n_pts,
        "provenance": "kernel-component criterion + multiplication identities",
    }, None


def run_document(doc):
    """Execute a validated document; returns (report dict, spectra for CSV)."""
    seed = doc["numerics"].get("seed", 0)
    env_seed = os.environ.get("DBK_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    rng = np.random.default_rng(seed)
    space = _build_space(doc["model"], doc["numerics"])
    betas = _beta_grid(doc["numerics"])

    results = []
    spectra = []
    for i, task in enumerate(doc["tasks"]):
        name = task["task"]
        entry = {"task": name, "inputs": {k: v for k, v in task.items() if k != "task"}}
        try:
            if name == "spectrum":
                out, data = _run_spectrum(space, task, rng)
            elif name == "verify-rank-one":
                out, data = _run_verify_rank_one(space, task, rng, betas)
            elif name == "verify-generating":
                out, data = _run_verify_generating(space, task, rng, betas)
            elif name == "verify-lemmas":
                out, data = _run_verify_lemmas(space, task, rng)
            elif name == "zero-free":
                out, data = _run_zero_free(space, task, rng)
            elif name == "theorem43":
                out, data = _run_theorem43(space, task, rng)
            elif name == "uniqueness":
                out, data = _run_uniqueness(space, task, rng)
            else:
                out, data = _run_gauge(space, task, rng)
        except DBKError as err:
            out, data = {"passed": False, "error": err.code, "message": str(err)}, None
        entry.update(out)
        results.append(entry)
        spectra.append(data)

    report = {
        "model": doc["model"],
        "seed": seed,
        "numerics": {k: v for k, v in doc["numerics"].items()},
        "results": results,
        "passed": all(r.get("passed") for r in results),
    }
    return report, spectra


# ----------------------------------------------------------------------
# deterministic rendering


def format_float(x):
    """17 significant digits, lowercase scientific."""
    return f"{float(x):.16e}"


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return {"re": format_float(c.real), "im": format_float(c.imag)}
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return jsonable(dataclasses.asdict(obj))
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def render_report(report):
    return json.dumps(jsonable(report), indent=2) + "\n"


def write_csv(spectra, tasks, directory):
    os.makedirs(directory, exist_ok=True)
    written = []
    for i, (data, task) in enumerate(zip(spectra, tasks)):
        if data is None:
            continue
        path = os.path.join(directory, f"spectrum_{i:02d}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x_k,s_beta_prime,k_diag,jump\n")
            jumps = data.jumps if data.jumps is not None else [math.nan] * len(data.points)
            for x, d, kd, j in zip(data.points, data.derivs, data.diag, jumps):
                fh.write(",".join(format_float(v) for v in (x, d, kd, j)) + "\n")
        written.append(path)
    return written


# ----------------------------------------------------------------------
# entry points


def cmd_run(args):
    try:
        with open(args.document, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        print(f"error: no such document: {args.document}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as err:
        print(f"error: {args.document}:{err.lineno}:{err.colno}: {err.msg}", file=sys.stderr)
        return 2
    try:
        doc = validate_document(raw)
    except SchemaError as err:
        print(f"error: {args.document}: {err}", file=sys.stderr)
        return 2

    report, spectra = run_document(doc)
    text = render_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        write_csv(spectra, doc["tasks"], args.csv)
    if not report["passed"]:
        failing = [r for r in report["results"] if not r.get("passed")]
        print(f"FAIL: {len(failing)} task(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_catalog(args):
    for name, desc in CATALOG.items():
        print(f"{name:18s} {desc}")
    return 0


def cmd_describe(args):
    try:
        info = describe_model(args.model)
    except (KeyError, ValueError, DBKError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    sys.stdout.write(render_report(info))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dbk",
        description="Verification suites for de Branges model spaces with "
                    "nondensely defined multiplication operator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a verification document")
    p_run.add_argument("document", help="path to the JSON document")
    p_run.add_argument("--out", help="write the report here instead of stdout")
    p_run.add_argument("--csv", help="directory for spectrum CSV tables")
    p_run.set_defaults(fn=cmd_run)

    p_cat = sub.add_parser("catalog", help="list the model catalog")
    p_cat.set_defaults(fn=cmd_catalog)

    p_desc = sub.add_parser("describe", help="summarize one model")
    p_desc.add_argument("model")
    p_desc.set_defaults(fn=cmd_describe)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
