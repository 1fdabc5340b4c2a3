"""Command-line driver.

Every run is described by one document (a JSON object): field specs, solver
knobs, and output paths all live there, and the few convenience flags fold
into it before dispatch, so the merged document doubles as the experiment
record.  Outputs are deterministic: the same document yields byte-identical
CSV grids and JSON reports.

Set FRACSURF_THREADS to cap the BLAS thread count; it is applied to the
usual OMP/OpenBLAS/MKL variables before numpy loads, so it only works when
this module is imported first (the ``fracsurf`` console script does).
"""

from __future__ import annotations

import os

_threads = os.environ.get("FRACSURF_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import approx as approx_mod
from . import boxdim, fif, specio
from .errors import FracsurfError, SpecError
from .field import Domain2D, Field2D, sample, seeded_trig_field2

SUBCOMMANDS = ("surface", "bernstein", "dim", "approx", "mvcheck", "selftest")

__all__ = ["RunConfig", "parse_spec", "run", "main"]


@dataclass(frozen=True)
class RunConfig:
    """A validated run: the subcommand plus its merged document."""

    subcommand: str
    document: dict

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise SpecError(f"unknown subcommand {self.subcommand!r}",
                            key="subcommand")
        if not isinstance(self.document, dict):
            raise SpecError("run document must be a JSON object",
                            key="document")


def parse_spec(text: str):
    """Parse a JSON document into a field or a run configuration.

    A document carrying a "subcommand" key is a run configuration; any
    other object is treated as a field spec.  Diagnostics name the
    offending key.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"not valid JSON: {exc}", key="document")
    if not isinstance(doc, dict):
        raise SpecError("spec document must be a JSON object", key="document")
    if "subcommand" in doc:
        sub = doc["subcommand"]
        body = {k: v for k, v in doc.items() if k != "subcommand"}
        return RunConfig(subcommand=sub, document=body)
    return specio.field_from_spec(doc)


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}", key="document")
    if not isinstance(doc, dict):
        raise SpecError(f"{path} must hold a JSON object", key="document")
    return doc


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _camel(key):
    head, *rest = key.split("_")
    return head + "".join(part.title() for part in rest)


def _need_key(doc, key, sub):
    if key not in doc or doc[key] is None:
        raise SpecError(f"{sub} needs {key!r}", key=key)
    return doc[key]


def _field2_from_doc(doc, key, sub):
    field = specio.field_from_spec(_need_key(doc, key, sub))
    if not isinstance(field, Field2D):
        raise SpecError(f"{sub} {key!r} must describe a 2d field", key=key)
    return field


def _run_surface(doc):
    out = _need_key(doc, "out", "surface")
    sspec = specio.surface_spec_from_document(
        doc, refinement=doc.get("refinement"), tol=doc.get("tol"))
    surface = fif.solve_fractal_surface(sspec)
    specio.write_grid_csv(surface.values, out)
    print(f"wrote {out} ({surface.values.nx}x{surface.values.ny} grid, "
          f"residual {surface.residual:.3e})")
    meta_path = doc.get("meta")
    if meta_path:
        meta = {
            "iterations": surface.iterations,
            "residual": surface.residual,
            "alphaSup": surface.alpha_sup,
            "net": {
                "cellsX": sspec.net.cells_x,
                "cellsY": sspec.net.cells_y,
                "knotsX": list(sspec.net.knots_x),
                "knotsY": list(sspec.net.knots_y),
            },
            "refinement": sspec.refinement,
        }
        _write_text(meta_path, specio.dump_json(meta))
        print(f"wrote {meta_path}")
    return 0


def _run_dim(doc):
    out = _need_key(doc, "out", "dim")
    has_field = doc.get("field") is not None
    has_grid = doc.get("grid") is not None
    if has_field == has_grid:
        raise SpecError("dim needs exactly one of 'field' and 'grid'",
                        key="field")
    if has_field:
        field = specio.field_from_spec(doc["field"])
        resolution = doc.get("resolution")
        est = boxdim.dim_graph(
            field, resolution=None if resolution is None else int(resolution))
    else:
        est = boxdim.dim_sample(specio.read_grid_csv(doc["grid"]))
    report = {
        "scales": list(est.scales),
        "counts": list(est.counts),
        "slope": est.slope,
        "intercept": est.intercept,
        "r2": est.r2,
        "ci": est.ci_half_width,
    }
    _write_text(out, specio.dump_json(report))
    print(f"wrote {out} (slope {est.slope:.4f}, r2 {est.r2:.5f})")
    return 0


def _run_bernstein(doc):
    from .bernstein import bernstein_apply
    out = _need_key(doc, "out", "bernstein")
    field = _field2_from_doc(doc, "field", "bernstein")
    m = int(_need_key(doc, "m", "bernstein"))
    n = int(_need_key(doc, "n", "bernstein"))
    resolution = int(doc.get("resolution", 257))
    image = bernstein_apply(field, (m, n))
    grid = sample(image, resolution, resolution)
    specio.write_grid_csv(grid, out)
    print(f"wrote {out} (degree ({m}, {n}) image on {resolution}^2 grid)")
    return 0


def _sampled_error(target, built, resolution):
    f = sample(target, resolution, resolution).values
    g = sample(built, resolution, resolution).values
    return float(np.max(np.abs(f - g)))


def _run_approx(doc):
    mode = _need_key(doc, "mode", "approx")
    out = _need_key(doc, "out", "approx")
    if mode == "lp":
        target = _field2_from_doc(doc, "target", "approx")
        basis_specs = _need_key(doc, "basis", "approx")
        if not isinstance(basis_specs, (list, tuple)) or not basis_specs:
            raise SpecError("approx basis must be a nonempty list of specs",
                            key="basis")
        fields = [specio.field_from_spec(s) for s in basis_specs]
        for g in fields:
            if not isinstance(g, Field2D):
                raise SpecError("approx basis entries must be 2d fields",
                                key="basis")
        basis = approx_mod.make_basis(
            fields, resolution=int(doc.get("basisResolution", 129)))
        sol = approx_mod.best_one_sided_below(
            target, basis,
            grid_res=int(doc.get("gridRes", approx_mod.LP_GRID_RES)),
            feas_tol=float(doc.get("feasTol", approx_mod.LP_FEAS_TOL)))
        report = {
            "mode": "lp",
            "coefficients": list(sol.coefficients),
            "objective": sol.objective,
            "gridResolution": sol.grid_resolution,
            "maxViolation": sol.max_violation,
            "feasTol": sol.feas_tol,
        }
        _write_text(out, specio.dump_json(report))
        print(f"wrote {out} (objective {sol.objective:.9f})")
        return 0

    constructors = {
        "dense": approx_mod.dense_approximant,
        "nonneg": approx_mod.nonnegative_approximant,
        "below": approx_mod.lower_approximant,
    }
    target = _field2_from_doc(doc, "target", "approx")
    seed = _field2_from_doc(doc, "seed", "approx")
    epsilon = float(_need_key(doc, "epsilon", "approx"))
    schedule = doc.get("schedule")
    schedule = (approx_mod.DEGREE_SCHEDULE if schedule is None
                else tuple(int(d) for d in schedule))
    resolution = int(doc.get("resolution", 257))
    if mode in constructors:
        req = approx_mod.ApproxRequest(target, epsilon, seed, schedule)
        built = constructors[mode](req)
    elif mode == "convex":
        deriv = _field2_from_doc(doc, "mixedDerivative", "approx")
        orders = _need_key(doc, "orders", "approx")
        try:
            m, n = int(orders[0]), int(orders[1])
        except (TypeError, IndexError):
            raise SpecError("approx orders must be [m, n]", key="orders")
        built = approx_mod.convex_approximant(
            target, deriv, m, n, epsilon, seed, degree_schedule=schedule)
    else:
        raise SpecError(f"unknown approx mode {mode!r}", key="mode")
    specio.write_grid_csv(sample(built, resolution, resolution), out)
    print(f"wrote {out}")
    report_path = doc.get("report")
    if report_path:
        report = {"mode": mode, "resolution": resolution,
                  "sampledError": _sampled_error(target, built, 1025)}
        for key, value in built.build_info.items():
            report[_camel(str(key))] = (
                list(value) if isinstance(value, tuple) else value)
        _write_text(report_path, specio.dump_json(report))
        print(f"wrote {report_path}")
    return 0


def _run_mvcheck(doc):
    from . import mvops
    prop = _need_key(doc, "property", "mvcheck")
    out = _need_key(doc, "out", "mvcheck")
    seed = int(doc.get("seed", 0))
    dom_spec = doc.get("domain", [0.0, 1.0, 0.0, 1.0])
    try:
        domain = Domain2D(*(float(v) for v in dom_spec))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"mvcheck domain invalid: {exc}", key="domain")
    q = float(doc.get("q", 0.5))
    sel = mvops.FamilySelector(
        vary=doc.get("vary", "degree"), domain=domain, q=q,
        refinement=int(doc.get("refinement", 32)),
        tol=float(doc.get("tol", 1e-10)))
    f = seeded_trig_field2(domain, seed)
    g = seeded_trig_field2(domain, seed + 1)
    w = seeded_trig_field2(domain, seed + 2, amplitude=0.5)
    if prop == "process":
        lambdas = tuple(float(v) for v in doc.get("lambdas", (0.5, 2.0, 7.0)))
        rep = mvops.check_process(sel, f, lambdas)
    elif prop == "lipschitz":
        rep = mvops.check_lipschitz(sel, f, g)
    elif prop == "norm":
        net = fif.make_net(domain, sel.fixed_net, sel.fixed_net)
        rep = mvops.norm_bound_check(net, sel.fixed_degree, q, [f, g, w],
                                     refinement=sel.refinement, tol=sel.tol)
    elif prop == "continuity":
        rep = mvops.continuity_probe(sel, f, w,
                                     count=int(doc.get("count", 8)))
    else:
        raise SpecError(f"unknown mvcheck property {prop!r}", key="property")
    report = {
        "property": rep.property_name,
        "passed": rep.passed,
        "probes": rep.probes,
        "worstMargin": rep.worst_margin,
        "numTol": rep.num_tol,
        "note": rep.note,
        "seed": seed,
        "records": [{_camel(k): v for k, v in r.items()}
                    for r in rep.records],
    }
    _write_text(out, specio.dump_json(report))
    verdict = "passed" if rep.passed else "FAILED"
    print(f"wrote {out} ({rep.property_name} {verdict}, "
          f"worst margin {rep.worst_margin:.3e})")
    return 0 if rep.passed else 1


def _run_selftest(doc):
    from . import selftest
    out = doc.get("out", "selftest_report.json")
    report = selftest.run_selftest()
    _write_text(out, specio.dump_json(report))
    for check in report["checks"]:
        print(f"{'PASS' if check['passed'] else 'FAIL'}  {check['name']}")
    print(f"wrote {out}")
    return 0 if report["passed"] else 1


_HANDLERS = {
    "surface": _run_surface,
    "dim": _run_dim,
    "bernstein": _run_bernstein,
    "approx": _run_approx,
    "mvcheck": _run_mvcheck,
    "selftest": _run_selftest,
}


def run(config: RunConfig) -> int:
    """Execute a validated run configuration."""
    return _HANDLERS[config.subcommand](config.document)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fracsurf",
        description="fractal surfaces, graph dimensions, and "
                    "dimension-aware approximation")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("surface", help="solve a fractal surface to CSV")
    p.add_argument("--config", required=True, help="fractal-surface document")
    p.add_argument("--out", required=True, help="output grid CSV")
    p.add_argument("--meta", help="optional solver metadata JSON")
    p.add_argument("--refinement", type=int, help="override samples per cell")
    p.add_argument("--tol", type=float, help="override solver tolerance")

    p = subs.add_parser("dim", help="estimate a graph's box dimension")
    p.add_argument("--field", help="field spec JSON")
    p.add_argument("--grid", help="grid CSV produced by surface")
    p.add_argument("--out", required=True, help="output report JSON")
    p.add_argument("--resolution", type=int,
                   help="sampling resolution for --field")

    p = subs.add_parser("bernstein", help="tensor Bernstein image to CSV")
    p.add_argument("--field", required=True, help="field spec JSON")
    p.add_argument("-m", type=int, required=True, help="degree in x")
    p.add_argument("-n", type=int, required=True, help="degree in y")
    p.add_argument("--out", required=True, help="output grid CSV")
    p.add_argument("--resolution", type=int, help="output grid resolution")

    p = subs.add_parser("approx", help="dimension-aware approximants")
    p.add_argument("--mode", required=True,
                   choices=("dense", "nonneg", "below", "convex", "lp"))
    p.add_argument("--config", required=True,
                   help="approximation document (target, seed, epsilon, ...)")
    p.add_argument("--out", required=True,
                   help="output grid CSV (lp mode: report JSON)")
    p.add_argument("--report", help="optional build report JSON")
    p.add_argument("--epsilon", type=float, help="override accuracy budget")
    p.add_argument("--resolution", type=int, help="override output resolution")

    p = subs.add_parser("mvcheck", help="finite-section property checks")
    p.add_argument("--property", required=True,
                   choices=("process", "lipschitz", "norm", "continuity"))
    p.add_argument("--seed", type=int, default=0, help="probe field seed")
    p.add_argument("--out", required=True, help="output report JSON")
    p.add_argument("--config", help="optional check document")
    p.add_argument("--q", type=float, help="override the scale cap")

    p = subs.add_parser("selftest", help="run the packaged invariant suite")
    p.add_argument("--out", default="selftest_report.json",
                   help="report path (default selftest_report.json)")
    return parser


def _merge(args) -> RunConfig:
    doc = {}
    if getattr(args, "config", None):
        doc.update(_load_json(args.config))
    sub = args.subcommand
    if sub == "surface":
        doc["out"] = args.out
        if args.meta is not None:
            doc["meta"] = args.meta
        if args.refinement is not None:
            doc["refinement"] = args.refinement
        if args.tol is not None:
            doc["tol"] = args.tol
    elif sub == "dim":
        doc["out"] = args.out
        if args.field is not None:
            doc["field"] = _load_json(args.field)
        if args.grid is not None:
            doc["grid"] = args.grid
        if args.resolution is not None:
            doc["resolution"] = args.resolution
    elif sub == "bernstein":
        doc["field"] = _load_json(args.field)
        doc["m"] = args.m
        doc["n"] = args.n
        doc["out"] = args.out
        if args.resolution is not None:
            doc["resolution"] = args.resolution
    elif sub == "approx":
        doc["mode"] = args.mode
        doc["out"] = args.out
        if args.report is not None:
            doc["report"] = args.report
        if args.epsilon is not None:
            doc["epsilon"] = args.epsilon
        if args.resolution is not None:
            doc["resolution"] = args.resolution
    elif sub == "mvcheck":
        doc["property"] = args.property
        doc["seed"] = args.seed
        doc["out"] = args.out
        if args.q is not None:
            doc["q"] = args.q
    elif sub == "selftest":
        doc["out"] = args.out
    return RunConfig(subcommand=sub, document=doc)


def _emit_error(exc):
    report = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(specio.dump_json(report))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _merge(args)
        return run(config)
    except (SpecError, ValueError) as exc:
        _emit_error(exc)
        return 2
    except FracsurfError as exc:
        _emit_error(exc)
        return 1
    except OSError as exc:
        _emit_error(exc)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
