"""Field-spec documents, deterministic JSON, and the grid CSV format.

A field spec is a JSON-shaped dict: {"kind": "...", "domain": [...], ...}.
The kind set matches the field catalog plus the two evaluated kinds
(bernstein-image and fractal-surface), which parse into grid-backed fields.
All real numbers serialize with 17 significant digits so parse(format(x))
round-trips doubles exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import SpecError
from . import field as F

__all__ = [
    "format_real",
    "dump_json",
    "field_from_spec",
    "field_to_spec",
    "surface_spec_from_document",
    "grid_to_csv",
    "grid_from_csv",
    "write_grid_csv",
    "read_grid_csv",
]


def format_real(x) -> str:
    """17-significant-digit decimal form; round-trips any finite double."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return "%.16e" % x


def _emit(obj, indent, out):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for pos, k in enumerate(keys):
            if not isinstance(k, str):
                raise ValueError("JSON object keys must be strings")
            out.append(pad + "  " + json.dumps(k) + ": ")
            _emit(obj[k], indent + 1, out)
            out.append(",\n" if pos < len(keys) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[\n")
        for pos, v in enumerate(obj):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if pos < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_real(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), indent, out)
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__}")


def dump_json(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed float format, 2-space indent."""
    out = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


# --------------------------------------------------------------------------
# Field specs

def _need(spec, key, kind):
    if key not in spec:
        raise SpecError(f"{kind} spec is missing {key!r}", key=key)
    return spec[key]


def _real(spec, key, kind, lo=None, hi=None, lo_open=False, hi_open=False):
    v = _need(spec, key, kind)
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise SpecError(f"{kind} parameter {key!r} must be a number", key=key)
    if not math.isfinite(v):
        raise SpecError(f"{kind} parameter {key!r} must be finite", key=key)
    if lo is not None and (v < lo or (lo_open and v == lo)):
        raise SpecError(
            f"{kind} parameter {key!r}={v:g} below the allowed range", key=key
        )
    if hi is not None and (v > hi or (hi_open and v == hi)):
        raise SpecError(
            f"{kind} parameter {key!r}={v:g} above the allowed range", key=key
        )
    return v


def _domain1(spec, kind):
    d = _need(spec, "domain", kind)
    if not (isinstance(d, (list, tuple)) and len(d) == 2):
        raise SpecError(f"{kind} domain must be [a, b]", key="domain")
    try:
        return F.Domain1D(float(d[0]), float(d[1]))
    except ValueError as exc:
        raise SpecError(f"{kind} domain invalid: {exc}", key="domain")


def _domain2(spec, kind):
    d = _need(spec, "domain", kind)
    if not (isinstance(d, (list, tuple)) and len(d) == 4):
        raise SpecError(f"{kind} domain must be [a, b, c, d]", key="domain")
    try:
        return F.Domain2D(*(float(v) for v in d))
    except ValueError as exc:
        raise SpecError(f"{kind} domain invalid: {exc}", key="domain")


def _spec_dimension(spec):
    """2 for rectangle fields, 1 for interval fields, judged by kind/domain."""
    kind = spec.get("kind")
    if kind in ("weierstrass-shen", "weierstrass-mw"):
        return 1
    if kind in ("lift-sum", "cumulative-integral", "iterated-integral",
                "bernstein-image", "fractal-surface", "sampled-grid"):
        return 2
    d = spec.get("domain")
    if isinstance(d, (list, tuple)) and len(d) == 2:
        return 1
    if isinstance(d, (list, tuple)) and len(d) == 4:
        return 2
    # wrapper kinds inherit the wrapped field's dimension
    if kind == "constant-shift" and isinstance(spec.get("base"), dict):
        return _spec_dimension(spec["base"])
    if kind == "affine-combination":
        inner = spec.get("fields")
        if (isinstance(inner, (list, tuple)) and inner
                and isinstance(inner[0], dict)):
            return _spec_dimension(inner[0])
    if kind in ("constant", "polynomial", "trig", "affine-combination",
                "constant-shift", "seeded-trig"):
        raise SpecError(f"{kind} spec needs a domain of 2 or 4 endpoints",
                        key="domain")
    raise SpecError(f"unknown field kind {spec.get('kind')!r}", key="kind")


def field_from_spec(spec):
    """Build a field from a spec dict (1D or 2D, judged from kind and domain).

    Raises
    ------
    SpecError
        Unknown kind, missing key, or out-of-range parameter; ``key`` names
        the offending parameter.
    """
    if not isinstance(spec, dict):
        raise SpecError("field spec must be a JSON object", key=None)
    if _spec_dimension(spec) == 1:
        return _field1_from_spec(spec)
    return _field2_from_spec(spec)


def _field1_from_spec(spec):
    kind = spec.get("kind")
    if kind == "constant":
        dom = _domain1(spec, kind)
        return F.Constant1(dom, _real(spec, "value", kind))
    if kind == "polynomial":
        dom = _domain1(spec, kind)
        coeffs = _need(spec, "coeffs", kind)
        try:
            arr = np.asarray(coeffs, dtype=float)
        except (TypeError, ValueError):
            raise SpecError("polynomial coeffs must be numbers", key="coeffs")
        if arr.ndim != 1 or arr.size == 0:
            raise SpecError("1D polynomial coeffs must be a flat nonempty list",
                            key="coeffs")
        return F.Polynomial1(dom, arr)
    if kind == "trig":
        dom = _domain1(spec, kind)
        terms = _need(spec, "terms", kind)
        try:
            parsed = [(float(a), float(k), float(p)) for a, k, p in terms]
        except (TypeError, ValueError):
            raise SpecError("trig terms must be [amp, k, phase] triples",
                            key="terms")
        if not parsed:
            raise SpecError("trig field needs at least one term", key="terms")
        return F.Trig1(dom, parsed)
    if kind == "weierstrass-shen":
        dom = _domain1(spec, kind)
        lam = _real(spec, "lambda", kind, lo=0.0, hi=1.0, lo_open=True, hi_open=True)
        b = _need(spec, "b", kind)
        if not isinstance(b, (int, np.integer)) or isinstance(b, bool) or b < 2:
            raise SpecError("weierstrass-shen parameter 'b' must be an integer >= 2",
                            key="b")
        phi = spec.get("phi", "cos")
        if phi not in F.BASE_WAVES:
            raise SpecError(f"unknown base wave {phi!r}", key="phi")
        tol = float(spec.get("tol", 1e-10))
        if not tol > 0:
            raise SpecError("tol must be positive", key="tol")
        return F.ShenSeries1(dom, lam, int(b), phi, tol)
    if kind == "weierstrass-mw":
        dom = _domain1(spec, kind)
        alpha_exp = _real(spec, "alphaExp", kind, lo=0.0, hi=1.0,
                          lo_open=True, hi_open=True)
        b = _real(spec, "b", kind, lo=1.0, lo_open=True)
        phi = spec.get("phi", "cos")
        if phi not in F.BASE_WAVES:
            raise SpecError(f"unknown base wave {phi!r}", key="phi")
        theta = spec.get("theta", "zero")
        if theta not in ("zero", "random"):
            raise SpecError("theta must be 'zero' or 'random'", key="theta")
        tol = float(spec.get("tol", 1e-10))
        if not tol > 0:
            raise SpecError("tol must be positive", key="tol")
        return F.MWSeries1(dom, alpha_exp, b, phi, theta,
                           int(spec.get("seed", 0)), tol)
    if kind == "affine-combination":
        fields = [_field1_from_spec(s) for s in _need(spec, "fields", kind)]
        coeffs = _need(spec, "coeffs", kind)
        try:
            return F.AffineCombination1(fields, [float(c) for c in coeffs],
                                        float(spec.get("offset", 0.0)))
        except ValueError as exc:
            raise SpecError(str(exc), key="coeffs")
    if kind == "constant-shift":
        base = _field1_from_spec(_need(spec, "base", kind))
        return F.Shifted1(base, _real(spec, "shift", kind))
    if kind == "seeded-trig":
        dom = _domain1(spec, kind)
        return F.seeded_trig_field1(
            dom, int(_need(spec, "seed", kind)),
            int(spec.get("terms", 3)), float(spec.get("amplitude", 1.0)))
    raise SpecError(f"unknown field kind {kind!r}", key="kind")


def _field2_from_spec(spec):
    kind = spec.get("kind")
    if kind == "constant":
        dom = _domain2(spec, kind)
        return F.Constant2(dom, _real(spec, "value", kind))
    if kind == "polynomial":
        dom = _domain2(spec, kind)
        coeffs = _need(spec, "coeffs", kind)
        try:
            arr = np.asarray(coeffs, dtype=float)
        except (TypeError, ValueError):
            raise SpecError("polynomial coeffs must be numbers", key="coeffs")
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.size == 0:
            raise SpecError("2D polynomial coeffs must be a nonempty matrix",
                            key="coeffs")
        return F.Polynomial2(dom, arr)
    if kind == "trig":
        dom = _domain2(spec, kind)
        terms = _need(spec, "terms", kind)
        try:
            parsed = [(float(a), float(kx), float(ky), float(px), float(py))
                      for a, kx, ky, px, py in terms]
        except (TypeError, ValueError):
            raise SpecError(
                "trig terms must be [amp, kx, ky, phasex, phasey] tuples",
                key="terms")
        if not parsed:
            raise SpecError("trig field needs at least one term", key="terms")
        return F.Trig2(dom, parsed)
    if kind == "lift-sum":
        w = _field1_from_spec(_need(spec, "w", kind))
        dy = _need(spec, "domainY", kind)
        if not (isinstance(dy, (list, tuple)) and len(dy) == 2):
            raise SpecError("lift-sum domainY must be [c, d]", key="domainY")
        try:
            dom_j = F.Domain1D(float(dy[0]), float(dy[1]))
        except ValueError as exc:
            raise SpecError(f"lift-sum domainY invalid: {exc}", key="domainY")
        return F.lift_sum(w, dom_j)
    if kind == "cumulative-integral":
        g = _field2_from_spec(_need(spec, "g", kind))
        res = int(spec.get("resolution", F.QUADRATURE_RESOLUTION))
        if res < 2:
            raise SpecError("resolution must be >= 2", key="resolution")
        return F.cumulative_integral2(g, res)
    if kind == "iterated-integral":
        h = _field2_from_spec(_need(spec, "h", kind))
        m = int(_need(spec, "m", kind))
        n = int(_need(spec, "n", kind))
        if m < 1 or n < 1:
            raise SpecError("iterated-integral needs m, n >= 1", key="m")
        res = int(spec.get("resolution", F.QUADRATURE_RESOLUTION))
        if res < 2:
            raise SpecError("resolution must be >= 2", key="resolution")
        return F.iterated_integral(h, m, n, res)
    if kind == "sampled-grid":
        if "path" in spec:
            return F.SampledGrid2(read_grid_csv(spec["path"]))
        dom = _domain2(spec, kind)
        values = _need(spec, "values", kind)
        try:
            arr = np.asarray(values, dtype=float)
        except (TypeError, ValueError):
            raise SpecError("sampled-grid values must be numbers", key="values")
        if arr.ndim != 2:
            raise SpecError("sampled-grid values must be a matrix", key="values")
        ny, nx = arr.shape
        return F.SampledGrid2(F.GridSample(dom, nx, ny, arr))
    if kind == "affine-combination":
        fields = [_field2_from_spec(s) for s in _need(spec, "fields", kind)]
        coeffs = _need(spec, "coeffs", kind)
        try:
            return F.AffineCombination2(fields, [float(c) for c in coeffs],
                                        float(spec.get("offset", 0.0)))
        except ValueError as exc:
            raise SpecError(str(exc), key="coeffs")
    if kind == "constant-shift":
        base = _field2_from_spec(_need(spec, "base", kind))
        return F.Shifted2(base, _real(spec, "shift", kind))
    if kind == "seeded-trig":
        dom = _domain2(spec, kind)
        return F.seeded_trig_field2(
            dom, int(_need(spec, "seed", kind)),
            int(spec.get("terms", 3)), float(spec.get("amplitude", 1.0)))
    if kind == "bernstein-image":
        from .bernstein import bernstein_apply
        base = _field2_from_spec(_need(spec, "field", kind))
        m = int(_need(spec, "m", kind))
        n = int(_need(spec, "n", kind))
        if m < 1 or n < 1:
            raise SpecError("bernstein-image needs m, n >= 1", key="m")
        return bernstein_apply(base, (m, n))
    if kind == "fractal-surface":
        from . import fif
        surface = fif.solve_fractal_surface(surface_spec_from_document(spec))
        return F.SampledGrid2(surface.values)
    raise SpecError(f"unknown field kind {kind!r}", key="kind")


def surface_spec_from_document(spec, refinement=None, tol=None):
    """Solver input from a 'fractal-surface' document (the 'kind' key may be
    omitted when the context already implies it).  refinement and tol
    arguments override the document's values when given."""
    from . import fif
    from .bernstein import bernstein_apply
    kind = spec.get("kind", "fractal-surface")
    if kind != "fractal-surface":
        raise SpecError(f"expected a fractal-surface document, got {kind!r}",
                        key="kind")
    germ = _field2_from_spec(_need(spec, "germ", kind))
    net_spec = _need(spec, "net", kind)
    try:
        nn = int(net_spec["N"])
        mm = int(net_spec["M"])
    except (TypeError, KeyError):
        raise SpecError("fractal-surface net must give N and M", key="net")
    knots_x = net_spec.get("knotsX")
    knots_y = net_spec.get("knotsY")
    try:
        net = fif.make_net(germ.domain, nn, mm, knots_x, knots_y)
    except ValueError as exc:
        raise SpecError(f"fractal-surface net invalid: {exc}", key="net")
    alpha_spec = _need(spec, "alpha", kind)
    if isinstance(alpha_spec, (int, float)) and not isinstance(alpha_spec, bool):
        alpha = F.Constant2(germ.domain, float(alpha_spec))
    else:
        alpha = _field2_from_spec(alpha_spec)
    if refinement is None:
        refinement = spec.get("refinement", 64)
    refinement = int(refinement)
    if tol is None:
        tol = spec.get("tol", 1e-10)
    tol = float(tol)
    if not tol > 0:
        raise SpecError("tol must be positive", key="tol")
    if "base" in spec:
        base = _field2_from_spec(spec["base"])
    else:
        deg = spec.get("degrees", [8, 8])
        try:
            deg = (int(deg[0]), int(deg[1]))
        except (TypeError, IndexError):
            raise SpecError("fractal-surface degrees must be [m, n]",
                            key="degrees")
        base = bernstein_apply(germ, deg)
    return fif.FractalSurfaceSpec(germ=germ, base=base, alpha=alpha, net=net,
                                  refinement=refinement, tol=tol)


def field_to_spec(field) -> dict:
    """Spec dict for a catalog field; inverse of field_from_spec where defined."""
    if isinstance(field, F.Field1D):
        dom = [field.domain.a, field.domain.b]
    else:
        d = field.domain
        dom = [d.a, d.b, d.c, d.d]
    if isinstance(field, (F.Constant1, F.Constant2)):
        return {"kind": "constant", "domain": dom, "value": field.value}
    if isinstance(field, F.Polynomial1):
        return {"kind": "polynomial", "domain": dom,
                "coeffs": field.coeffs.tolist()}
    if isinstance(field, F.Polynomial2):
        return {"kind": "polynomial", "domain": dom,
                "coeffs": field.coeffs.tolist()}
    if isinstance(field, (F.Trig1, F.Trig2)):
        return {"kind": "trig", "domain": dom,
                "terms": [list(t) for t in field.terms]}
    if isinstance(field, F.ShenSeries1):
        return {"kind": "weierstrass-shen", "domain": dom, "lambda": field.lam,
                "b": field.b, "phi": field.phi_name, "tol": field.tol}
    if isinstance(field, F.MWSeries1):
        return {"kind": "weierstrass-mw", "domain": dom,
                "alphaExp": field.alpha_exp, "b": field.b,
                "phi": field.phi_name, "theta": field.theta_mode,
                "seed": field.seed, "tol": field.tol}
    if isinstance(field, F.Lifted2):
        return {"kind": "lift-sum", "w": field_to_spec(field.w),
                "domainY": [field.domain.c, field.domain.d]}
    if isinstance(field, (F.AffineCombination1, F.AffineCombination2)):
        return {"kind": "affine-combination",
                "fields": [field_to_spec(f) for f in field.fields],
                "coeffs": list(field.coeffs), "offset": field.offset}
    if isinstance(field, (F.Shifted1, F.Shifted2)):
        return {"kind": "constant-shift", "base": field_to_spec(field.base),
                "shift": field.shift}
    if isinstance(field, F.SampledGrid2):
        return {"kind": "sampled-grid", "domain": dom,
                "values": field.grid.values.tolist()}
    raise ValueError(f"no spec form for {type(field).__name__}")


# --------------------------------------------------------------------------
# Grid CSV

def grid_to_csv(grid: F.GridSample) -> str:
    """Render a GridSample in the grid CSV format.

    Two comment header lines ("# domain a b c d", "# shape nx ny"), then ny
    rows of nx comma-separated values, all reals with 17 significant digits.
    """
    d = grid.domain
    lines = [
        "# domain %s %s %s %s" % tuple(format_real(v) for v in (d.a, d.b, d.c, d.d)),
        f"# shape {grid.nx} {grid.ny}",
    ]
    for row in grid.values:
        lines.append(",".join(format_real(v) for v in row))
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str) -> F.GridSample:
    """Parse the grid CSV format back into a GridSample (exact values)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("# domain") \
            or not lines[1].startswith("# shape"):
        raise SpecError("grid CSV must start with '# domain' and '# shape' lines",
                        key="header")
    try:
        a, b, c, d = (float(tok) for tok in lines[0].split()[2:6])
        dom = F.Domain2D(a, b, c, d)
    except ValueError as exc:
        raise SpecError(f"bad domain header: {exc}", key="domain")
    try:
        nx, ny = (int(tok) for tok in lines[1].split()[2:4])
    except ValueError as exc:
        raise SpecError(f"bad shape header: {exc}", key="shape")
    rows = lines[2:]
    if len(rows) != ny:
        raise SpecError(f"expected {ny} data rows, found {len(rows)}", key="shape")
    try:
        values = np.array([[float(tok) for tok in row.split(",")] for row in rows])
    except ValueError as exc:
        raise SpecError(f"bad data value: {exc}", key="values")
    if values.shape != (ny, nx):
        raise SpecError(
            f"data shape {values.shape} does not match header ({ny}, {nx})",
            key="shape")
    return F.GridSample(dom, nx, ny, values)


def write_grid_csv(grid: F.GridSample, path) -> None:
    with open(path, "w") as fh:
        fh.write(grid_to_csv(grid))


def read_grid_csv(path) -> F.GridSample:
    try:
        with open(path) as fh:
            return grid_from_csv(fh.read())
    except OSError as exc:
        raise SpecError(f"cannot read grid CSV {path}: {exc}", key="path")
