"""Command-line interface.

    cuspforge <check|rigidity|slice-coords|classify|lift|cusp-gen|report> [options] <input>

Exit status: 0 on success, 1 when a mathematical check fails, 2 on usage or
input errors.  ``<input>`` is a JSON file or the name of a bundled example
(figure8, 5_2, 6_3).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import mpmath

from .cohomology import Cocycle, CohomologyError, h1, rigidity_verdict
from .fpgroup import torus_presentation
from .inputs import InputError, ManifoldInput, load_input
from .linalg import DEFAULT_RANK_TOL, LinalgError, is_float_scalar
from .numfield import FieldElem, fe_to_mpf, format_rational
from .pairing import (
    PairingError,
    ReframeNeeded,
    auto_reframe,
    classify_types,
    generic_class,
    involution_pm_basis,
    slice_coordinates,
    translemma_check,
    type1_criterion,
    _combo,
)
from .rep import NormalFormError, Representation, ValidationError, normalize_peripheral
from .slice import CuspKind, cusp_group_element, sample_leaf, horosphere_value

TYPE1_SYMMETRY = "type-1 achievable via symmetry criterion"


class MathFailure(RuntimeError):
    """A mathematical check failed (exit status 1)."""


# ---------------------------------------------------------------------------
# formatting


def precision_bits() -> int:
    raw = os.environ.get("CUSPFORGE_PRECISION_BITS", "53")
    try:
        bits = int(raw)
    except ValueError:
        raise InputError(f"CUSPFORGE_PRECISION_BITS must be an integer, got {raw!r}") from None
    if bits < 10:
        raise InputError("CUSPFORGE_PRECISION_BITS must be at least 10")
    return bits


def num_str(x) -> str:
    """Decimal string of an exact or float scalar at the configured precision."""
    bits = precision_bits()
    digits = max(6, int(bits * 0.30103) - 1)
    if is_float_scalar(x):
        return f"{float(x):.{min(digits, 15)}g}"
    with mpmath.workprec(bits + 10):
        return mpmath.nstr(fe_to_mpf(x, bits), digits)


def exact_json(x):
    if isinstance(x, FieldElem):
        return {"coeffs": x.to_json()}
    if is_float_scalar(x):
        return None
    return format_rational(x)


def scalar_json(x) -> dict:
    out = {"value": num_str(x), "mode": "float" if is_float_scalar(x) else "exact"}
    if not is_float_scalar(x):
        out["exact"] = exact_json(x)
    return out


# ---------------------------------------------------------------------------
# pipeline stages


@dataclass
class Options:
    float_mode: bool = False
    rank_tol: float = DEFAULT_RANK_TOL


def _rep(m: ManifoldInput, opts: Options) -> Representation:
    return m.rep.to_float() if opts.float_mode else m.rep


def _tol(opts: Options):
    return opts.rank_tol if opts.float_mode else None


def stage_check(m: ManifoldInput, opts: Options) -> dict:
    out = {
        "name": m.name,
        "mode": "float" if opts.float_mode else "exact",
        "generators": list(m.presentation.generators),
        "relators": len(m.presentation.relators),
        "cusps": len(m.presentation.peripherals),
        "field_degree": m.field.degree,
        "holonomy_form": m.raw["holonomy"].get("form", "SO31"),
        "relators_verified": "exact",
        "cusp_shapes": [],
    }
    for c in range(len(m.presentation.peripherals)):
        _, _, shape = normalize_peripheral(_rep(m, opts), c, _tol(opts))
        out["cusp_shapes"].append(
            {"u": scalar_json(shape.u), "v": scalar_json(shape.v), "argument_ok": shape.argument_ok()}
        )
    return out


def _dims(rep, pres, tol) -> dict:
    out = {}
    for mod in ("v", "so31", "g"):
        s = h1(pres, rep, mod, tol)
        out[mod] = {"jacobian_rank": s.jacobian_rank, "Z1": s.z1_dim, "B1": s.b1_dim, "H1": s.h1_dim}
    per = []
    for c in range(len(pres.peripherals)):
        trep = rep.restrict(c)
        d = {}
        for mod in ("g", "so31", "v"):
            s = h1(torus_presentation(), trep, mod, tol)
            d[mod] = {"Z1": s.z1_dim, "B1": s.b1_dim, "H1": s.h1_dim}
        per.append(d)
    out["peripheral"] = per
    return out


def stage_rigidity(m: ManifoldInput, opts: Options) -> dict:
    rep = _rep(m, opts)
    verdict = rigidity_verdict(m.presentation, rep, _tol(opts))
    out = {
        "verdict": verdict.label(),
        "path": verdict.path,
        "mode": "float" if opts.float_mode else "exact",
        "cusps": verdict.cusps,
        "restriction_kernel_dim": verdict.kernel_dim,
        "dimensions": _dims(rep, m.presentation, _tol(opts)),
    }
    if opts.float_mode:
        exact = _dims(m.rep, m.presentation, None)
        if exact != out["dimensions"]:
            raise MathFailure(
                f"float and exact dimensions disagree: float {out['dimensions']} exact {exact}"
            )
        out["exact_agreement"] = True
    return out


def _h1_generator(m: ManifoldInput, rep, tol) -> Cocycle:
    s = h1(m.presentation, rep, "v", tol)
    return generic_class(s.h1, rep, "v", tol)


def stage_slice_coords(m: ManifoldInput, opts: Options) -> dict:
    rep = _rep(m, opts)
    tol = _tol(opts)
    z = _h1_generator(m, rep, tol)
    cusps = []
    for c in range(len(m.presentation.peripherals)):
        entry = {"cusp": c}
        work = rep
        try:
            sc = slice_coordinates(z, [c], tol)[0]
        except ReframeNeeded:
            work, n = auto_reframe(rep, c, tol)
            zc = Cocycle(work, z.mod, z.values)
            sc = slice_coordinates(zc, [c], tol)[0]
            entry["reframed_longitude"] = m.presentation.show(_combo(
                m.presentation.peripherals[c].meridian, m.presentation.peripherals[c].longitude, n, 1
            ))
        entry.update(
            {
                "shape": {"u": scalar_json(sc.shape.u), "v": scalar_json(sc.shape.v)},
                "argument_ok": True,
                "c_a": scalar_json(sc.c_a),
                "c_b": scalar_json(sc.c_b),
                "direction": [round(t, 12) for t in sc.direction()],
            }
        )
        entry["_coords"] = sc
        cusps.append(entry)
    return {"mode": "float" if opts.float_mode else "exact", "cusps": cusps, "_z": z}


def stage_classify(m: ManifoldInput, opts: Options) -> dict:
    sc = stage_slice_coords(m, opts)
    verdicts = classify_types([e["_coords"] for e in sc["cusps"]])
    for e, v in zip(sc["cusps"], verdicts):
        e["verdict"] = v
        e["slice_verdict"] = v
    if m.symmetry is not None:
        rep = _rep(m, opts)
        gp, _ = involution_pm_basis(m.symmetry)
        z = sc["_z"]
        for e in sc["cusps"]:
            p = m.presentation.peripherals[e["cusp"]]
            word = _combo(p.meridian, p.longitude, *gp)
            ok = type1_criterion(rep, z, word, _tol(opts))
            e["p_curve"] = m.presentation.show(word)
            e["type1_criterion"] = ok
            if ok:
                e["verdict"] = TYPE1_SYMMETRY
    return sc


def stage_translemma(m: ManifoldInput, opts: Options) -> dict:
    r = translemma_check(_rep(m, opts), _tol(opts))
    return {
        "dim_V_sigma": r.dim_v_sigma,
        "dim_res_so31": r.dim_res,
        "dim_intersection": r.dim_intersection,
        "dim_span": r.dim_span,
        "ok": r.ok,
        "skipped": r.skipped,
    }


def stage_lift(m: ManifoldInput, opts: Options) -> dict:
    rep = m.rep
    doc = {k: v for k, v in m.raw.items() if k != "holonomy"}
    doc["holonomy"] = {
        "form": "SO31",
        "matrices": {
            g: [[exact_json(x)["coeffs"] if isinstance(x, FieldElem) else exact_json(x) for x in row] for row in img.tolist()]
            for g, img in zip(m.presentation.generators, rep.images)
        },
    }
    return doc


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# text rendering


def render_check(d: dict) -> str:
    lines = [
        f"{d['name']}: {len(d['generators'])} generators, {d['relators']} relators, {d['cusps']} cusp(s)",
        f"field degree {d['field_degree']}; holonomy form {d['holonomy_form']}; relators verified ({d['relators_verified']})",
    ]
    for i, s in enumerate(d["cusp_shapes"]):
        lines.append(
            f"cusp {i}: shape {s['u']['value']} + {s['v']['value']} i ({s['u']['mode']}); "
            f"argument condition {'ok' if s['argument_ok'] else 'FAILS'}"
        )
    return "\n".join(lines)


def render_rigidity(d: dict) -> str:
    lines = [f"{d['verdict']} ({d['path']} path, {d['mode']} mode, {d['cusps']} cusp(s))"]
    for mod in ("v", "so31", "g"):
        x = d["dimensions"][mod]
        lines.append(
            f"  {mod:5s} rank(Fox)={x['jacobian_rank']:3d}  Z1={x['Z1']:3d}  B1={x['B1']:3d}  H1={x['H1']:3d}"
        )
    for i, p in enumerate(d["dimensions"]["peripheral"]):
        lines.append(
            f"  cusp {i}: H1(Delta, g)={p['g']['H1']}  H1(Delta, so31)={p['so31']['H1']}  H1(Delta, v)={p['v']['H1']}"
        )
    if d.get("exact_agreement"):
        lines.append("  float dimensions agree with exact mode")
    return "\n".join(lines)


def render_slice(d: dict) -> str:
    lines = [f"slice coordinates ({d['mode']} mode)"]
    for e in d["cusps"]:
        line = (
            f"  cusp {e['cusp']}: shape {e['shape']['u']['value']} + {e['shape']['v']['value']} i; "
            f"c_a = {e['c_a']['value']}, c_b = {e['c_b']['value']}"
            f" (direction {e['direction'][0]:.10f}, {e['direction'][1]:.10f})"
        )
        if "reframed_longitude" in e:
            line += f" (longitude reframed to {e['reframed_longitude']})"
        lines.append(line)
        if "verdict" in e:
            lines.append(f"    verdict: {e['verdict']}")
        if e.get("slice_verdict", e.get("verdict")) != e.get("verdict"):
            lines.append(f"    slice verdict: {e['slice_verdict']}")
        if "type1_criterion" in e:
            lines.append(f"    type-1 criterion on p-curve {e['p_curve']}: {e['type1_criterion']}")
    return "\n".join(lines)


def render_translemma(d: dict) -> str:
    if d["skipped"]:
        return f"transversality decomposition skipped: {d['skipped']}"
    return (
        f"transversality decomposition: dim V_Sigma={d['dim_V_sigma']}, dim res(H1 so31)={d['dim_res_so31']}, "
        f"intersection={d['dim_intersection']}, span={d['dim_span']} -> {'ok' if d['ok'] else 'FAILED'}"
    )


# ---------------------------------------------------------------------------
# commands


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(_strip(data), indent=2, sort_keys=True))
    else:
        print(text)


def _opts(args) -> Options:
    return Options(float_mode=args.float, rank_tol=args.rank_tol)


def cmd_check(args) -> int:
    m = load_input(args.input)
    d = stage_check(m, _opts(args))
    _emit(args, d, render_check(d))
    return 0


def cmd_rigidity(args) -> int:
    m = load_input(args.input)
    d = stage_rigidity(m, _opts(args))
    _emit(args, d, render_rigidity(d))
    return 0 if d["verdict"] == "RIGID" else 1


def cmd_slice_coords(args) -> int:
    m = load_input(args.input)
    d = stage_slice_coords(m, _opts(args))
    _emit(args, d, render_slice(d))
    return 0


def cmd_classify(args) -> int:
    m = load_input(args.input)
    d = stage_classify(m, _opts(args))
    _emit(args, d, render_slice(d))
    return 0


def cmd_lift(args) -> int:
    m = load_input(args.input)
    doc = stage_lift(m, _opts(args))
    text = json.dumps(doc, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_report(args) -> int:
    m = load_input(args.input)
    opts = _opts(args)
    d = {
        "check": stage_check(m, opts),
        "rigidity": stage_rigidity(m, opts),
    }
    failed = d["rigidity"]["verdict"] != "RIGID"
    if not failed:
        d["classify"] = stage_classify(m, opts)
        d["translemma"] = stage_translemma(m, opts)
        failed = not d["translemma"]["ok"]
    parts = [render_check(d["check"]), render_rigidity(d["rigidity"])]
    if "classify" in d:
        parts += [render_slice(d["classify"]), render_translemma(d["translemma"])]
    _emit(args, d, "\n".join(parts))
    return 1 if failed else 0


def cmd_cusp_gen(args) -> int:
    kind = CuspKind(args.type)
    params = tuple(args.params)
    need = {CuspKind.TYPE0: 0, CuspKind.TYPE1: 1, CuspKind.TYPE2: 2}[kind]
    if len(params) != need:
        raise InputError(f"type {kind.value} takes {need} parameter(s), got {len(params)}")
    if any(p == 0 for p in params):
        raise InputError("cusp parameters must be nonzero")
    lines = [f"generators of the type {kind.value} group" + (f" with parameters {params}" if params else "")]
    gens = []
    for label, (x, y) in (("x-generator", (1.0, 0.0)), ("y-generator", (0.0, 1.0))):
        if kind is CuspKind.TYPE0:
            g = cusp_group_element(kind, x, y, 0.0)
        elif kind is CuspKind.TYPE1:
            g = cusp_group_element(kind, params[0] * x, y, -x / params[0])
        else:
            g = cusp_group_element(kind, params[0] * x, params[1] * y, -x / params[0] - y / params[1])
        gens.append(g)
        lines.append(f"{label}:")
        lines += ["  " + "  ".join(f"{v:12.6g}" for v in g.row(i)) for i in range(4)]
    csv_text = ""
    if args.samples:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "c", "s"])
        n = args.samples
        for k in range(n):
            s_val = 0.5 + k
            coords = [(0.5 + 0.25 * j, -1.0 + 0.5 * j) for j in range(4)]
            if kind is CuspKind.TYPE2:
                coords = [(0.5 + 0.25 * j, 0.75 + 0.5 * j) for j in range(4)]
            for pt in sample_leaf(kind, params, s_val, coords):
                w.writerow([f"{pt[0]:.12g}", f"{pt[1]:.12g}", f"{pt[2]:.12g}", f"{horosphere_value(kind, params, pt):.12g}"])
        csv_text = buf.getvalue()
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(csv_text)
    if args.json:
        print(json.dumps({"type": kind.value, "params": list(params), "generators": [g.tolist() for g in gens], "samples_csv": csv_text}, indent=2))
    else:
        print("\n".join(lines))
        if csv_text and not args.csv:
            print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuspforge", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--float", action="store_true", help="run the pipeline in floating point")
    common.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL, help="relative rank tolerance for float mode")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (
        ("check", cmd_check, "validate an input file and print cusp shapes"),
        ("rigidity", cmd_rigidity, "cohomology dimensions and the rigidity verdict"),
        ("slice-coords", cmd_slice_coords, "slice coordinates of the H1(Gamma, v) class"),
        ("classify", cmd_classify, "cusp-type verdicts"),
        ("report", cmd_report, "full report"),
    ):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("input")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("lift", parents=[common], help="write the SO(3,1) holonomy as a new input file")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_lift)
    sp = sub.add_parser("cusp-gen", parents=[common], help="generalized cusp group generators and leaf samples")
    sp.add_argument("type", type=int, choices=[0, 1, 2])
    sp.add_argument("params", type=float, nargs="*")
    sp.add_argument("--samples", type=int, default=0, help="number of foliation leaves to sample")
    sp.add_argument("--csv", help="write samples to this CSV file")
    sp.set_defaults(func=cmd_cusp_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, NormalFormError, MathFailure, PairingError, CohomologyError, LinalgError) as exc:
        print(f"{args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
