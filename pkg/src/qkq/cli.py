"""Batch front end: classification, sampling, verification, reports.

Every subcommand reads plain flags (optionally seeded from a JSON config
file, flags winning), writes deterministic JSON or CSV, and exits with

    0  all requested checks passed
    1  a numerical threshold failed
    2  unusable input
    3  the requested case is analytically empty or degenerate

Grid sweeps respect the QKQ_THREADS environment variable; output files
are ordered by grid index regardless of worker scheduling, and repeated
runs with the same config are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import curvature, hnum, hyperfun, moments, orbits, serialize, slices

EXIT_PASS = 0
EXIT_THRESHOLD = 1
EXIT_INPUT = 2
EXIT_EMPTY = 3


class InputProblem(Exception):
    """Unusable flags, files, or parameters (exit 2)."""


class EmptyCase(Exception):
    """Analytically empty or degenerate configuration (exit 3)."""


def _numbers(text, typ=float):
    try:
        vals = tuple(typ(v) for v in str(text).replace(" ", "").split(",") if v)
    except ValueError as exc:
        raise InputProblem(f"could not parse number list {text!r}: {exc}") from None
    if not vals:
        raise InputProblem(f"empty number list {text!r}")
    return vals


def _grid_axes(text, n_axes):
    parts = [p for p in str(text).split(",") if p]
    if len(parts) != n_axes:
        raise InputProblem(f"grid needs {n_axes} axes lo:hi:count, got {text!r}")
    axes = []
    for part in parts:
        bits = part.split(":")
        if len(bits) != 3:
            raise InputProblem(f"grid axis {part!r} is not lo:hi:count")
        try:
            axes.append((float(bits[0]), float(bits[1]), int(bits[2])))
        except ValueError as exc:
            raise InputProblem(f"grid axis {part!r}: {exc}") from None
        if axes[-1][2] < 1:
            raise InputProblem("grid counts must be >= 1")
    return axes


def _json_arg(text):
    """JSON from a literal string or a file path."""
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputProblem(f"malformed JSON: {exc}") from None


def _merged(args, keys):
    """Flag values over config-file values, as a plain dict."""
    cfg = {}
    if getattr(args, "config", None):
        loaded = _json_arg(args.config)
        if not isinstance(loaded, dict):
            raise InputProblem("config file must hold a JSON object")
        cfg.update(loaded)
    out = {}
    for key, default in keys.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in cfg:
            out[key] = cfg[key]
        else:
            out[key] = default
    return out


_NO_ECHO = ("out", "format", "no_plot", "config")


def _echo_config(command, merged):
    """Scientific parameters only, so reruns to different paths compare equal."""
    echo = {"command": command}
    for k, v in merged.items():
        if v is None or k in _NO_ECHO:
            continue
        echo[k] = list(v) if isinstance(v, tuple) else v
    return echo


def _family_params(merged, int_weights=("Diagonal", "PL", "PL_unequal",
                                        "PL_equalWeights", "Bergman")):
    family = merged.get("family")
    if not family:
        raise InputProblem("a --family is required")
    raw = merged.get("weights") if merged.get("weights") is not None \
        else merged.get("params")
    if raw is None:
        if family == "Bergman":
            return family, ()
        raise InputProblem(f"family {family} needs --weights or --params")
    if isinstance(raw, str):
        params = _numbers(raw, int if family in int_weights else float)
    else:
        typ = int if family in int_weights else float
        params = tuple(typ(v) for v in raw)
    return family, params


def _slice_family(family, params):
    """Map a CLI family to the slice chart family."""
    if family == "PL":
        if len(params) != 3:
            raise InputProblem("PL takes three weights")
        return "PL_equalWeights" if params[1] == params[2] else "PL_unequal"
    if family == "Diagonal":
        raise InputProblem("use family PL for diagonal-weight charts")
    if family in slices.SLICE_FAMILIES:
        return family
    raise InputProblem(f"unknown chart family {family!r}")


def _check_nonempty(family, params):
    """Raise EmptyCase with the analytic criterion when the set is empty."""
    if family in ("PL", "PL_unequal", "PL_equalWeights"):
        if not moments.family_nonempty("Diagonal", params):
            p0 = params[0]
            raise EmptyCase(
                f"zero set empty: weights {tuple(params)} have "
                f"max(|p1/p0|, |p2/p0|) <= 1")
        hi, lo = max(params[1], params[2]), min(params[1], params[2])
        if not moments.action_free((params[0], hi, lo)):
            raise EmptyCase(
                f"degenerate: circle action on weights {tuple(params)} "
                f"is not free (orbifold points)")
    elif family == "HeightOne":
        if not moments.family_nonempty("HeightOne", params):
            p, q = params
            raise EmptyCase(f"zero set empty: p >= |q| at (p, q) = ({p}, {q})")


def _write(out, fmt, payload, csv_fields=None, csv_rows=None):
    if out is None:
        return
    if fmt == "csv":
        if csv_fields is None:
            raise InputProblem("this subcommand has no CSV form")
        serialize.write_csv(out, csv_fields, csv_rows)
    else:
        serialize.write_json(out, payload)


def _maybe_plot(merged, render):
    if merged.get("out") and not merged.get("no_plot"):
        try:
            from . import plots
        except ImportError:
            return None
        return render(plots)
    return None


# -- classify ---------------------------------------------------------------

_FORM_ARITY = {"T0Diag": (3, False), "T0Split": (3, True),
               "T1": (3, True), "T2": (2, True)}


def _parse_form_literal(text):
    text = text.strip()
    if "(" not in text or not text.endswith(")"):
        raise InputProblem(f"form literal {text!r} is not name(a,b,...)")
    name, rest = text.split("(", 1)
    name = name.strip()
    if name not in _FORM_ARITY:
        raise InputProblem(f"unknown normal form {name!r}")
    vals = _numbers(rest[:-1])
    arity, has_lam = _FORM_ARITY[name]
    if len(vals) != arity:
        raise InputProblem(f"{name} literal takes {arity} numbers")
    if has_lam:
        return orbits.GeneratorForm(name, vals[0], vals[1:])
    return orbits.GeneratorForm(name, None, vals)


def _form_label(form):
    nums = []
    if form.family != "T0Diag":
        nums.append("?" if form.lam is None else f"{form.lam:g}")
    nums.extend(f"{p:g}" for p in form.params)
    return f"{form.family}({','.join(nums)})"


def _case_label(case_id):
    if case_id.startswith("Case"):
        return f"Bryant Case {case_id[4:]}"
    return case_id


def _fmt_root(z):
    z = complex(z)
    re = z.real + 0.0 if z.real != 0.0 else 0.0
    im = z.imag + 0.0 if z.imag != 0.0 else 0.0
    if im == 0.0:
        return f"{re:g}"
    return f"{re:g}{im:+g}i"


def cmd_classify(args):
    merged = _merged(args, {"matrix": None, "form": None, "basis": "standard",
                            "out": None, "format": "json"})
    if merged["matrix"] is not None:
        data = _json_arg(merged["matrix"])
        Y = np.asarray(data, dtype=float)
        if Y.shape != (3, 3, 4):
            raise InputProblem(
                f"matrix literal must be 3x3x4 reals, got shape {Y.shape}")
        try:
            hnum.sp_check(Y, basis=merged["basis"], tol=1e-10)
        except ValueError as exc:
            raise InputProblem(str(exc)) from None
        form = orbits.classify(Y, basis=merged["basis"])
        _, _, height = orbits.decompose(Y, basis=merged["basis"])
    elif merged["form"] is not None:
        form = _parse_form_literal(merged["form"])
        _, _, height = orbits.decompose(orbits.make_normal_form(form))
    else:
        raise InputProblem("classify needs --matrix or --form")
    case = orbits.bryant_case(form)
    line = f"{_form_label(form)}, height {height}, {_case_label(case.case_id)}"
    print(line)
    print("Pc roots:", ", ".join(_fmt_root(r) for r in case.pc_roots))
    print("Pm roots:", ", ".join(_fmt_root(r) for r in case.pm_roots))

    payload = {
        "normalForm": _form_label(form),
        "family": form.family,
        "lam": form.lam,
        "params": list(form.params),
        "height": int(height),
        "bryantCase": case.case_id,
        "pcRoots": [[complex(r).real, complex(r).imag] for r in case.pc_roots],
        "pmRoots": [[complex(r).real, complex(r).imag] for r in case.pm_roots],
    }
    _write(merged["out"], merged["format"], payload)
    return EXIT_PASS


# -- moment ------------------------------------------------------------------

def cmd_moment(args):
    merged = _merged(args, {"family": None, "weights": None, "params": None,
                            "seed": 0, "samples": 8, "out": None,
                            "format": "json"})
    family, params = _family_params(merged)
    if family not in moments.FAMILIES:
        raise InputProblem(f"unknown moment family {family!r}")
    report = {"family": family, "params": list(params)}
    report["zerosetNonempty"] = moments.family_nonempty(family, params)
    if family == "Diagonal":
        hi, lo = max(params[1], params[2]), min(params[1], params[2])
        report["actionFree"] = (bool(moments.action_free((params[0], hi, lo)))
                                if report["zerosetNonempty"] else None)
        verdict = moments.bergman_smooth(params)
        report["bergman"] = {"smooth": verdict.smooth,
                             "witnessCircle": verdict.witness_circle,
                             "witnessOrder": verdict.witness_order}
    rows = []
    if report["zerosetNonempty"]:
        pts = moments.zeroset_sample(family, params, seed=int(merged["seed"]),
                                     keep=int(merged["samples"]))
        for u in pts:
            val = moments.f_inhomog(family, params,
                                    _chart_coords(family, u)).value
            rows.append({"residual": float(np.linalg.norm(val[1:])),
                         "components": u.components.tolist()})
    report["samples"] = rows
    payload = {"config": _echo_config("moment", merged), "report": report}
    csv_rows = [{"index": i, "residual": r["residual"]}
                for i, r in enumerate(rows)]
    _write(merged["out"], merged["format"], payload,
           csv_fields=("index", "residual"), csv_rows=csv_rows)
    print(f"{family}{tuple(params)}: nonempty={report['zerosetNonempty']} "
          f"samples={len(rows)}")
    return EXIT_PASS


def _chart_coords(family, u):
    if family == "Diagonal":
        return hnum.to_chart(1, 2, u.components, beta=0)
    return u.components[1:]


# -- slice -------------------------------------------------------------------

def cmd_slice(args):
    merged = _merged(args, {"family": None, "weights": None, "params": None,
                            "grid": None, "tol": 1e-8, "out": None,
                            "format": "json"})
    family, params = _family_params(merged)
    _check_nonempty(family, params)
    chart = slices.quotient_chart(_slice_family(family, params), params)
    if merged["grid"] is None:
        raise InputProblem("slice needs a --grid with four axes")
    axes = _grid_axes(merged["grid"], 4)
    pts = curvature._grid_points(axes)
    rows = []
    worst = 0.0
    for i, xi in enumerate(pts):
        if not chart.domain(xi):
            rows.append({"index": i, "inDomain": False,
                         "momentResidual": None, "transversality": None})
            continue
        resid = float(chart.moment_residual(xi))
        trans = float(slices.transversality(chart, xi))
        worst = max(worst, resid)
        rows.append({"index": i, "inDomain": True, "momentResidual": resid,
                     "transversality": trans})
    payload = {"config": _echo_config("slice", merged),
               "maxMomentResidual": worst, "points": rows}
    csv_rows = [{"index": r["index"], "inDomain": r["inDomain"],
                 "momentResidual": ("" if r["momentResidual"] is None
                                    else r["momentResidual"]),
                 "transversality": ("" if r["transversality"] is None
                                    else r["transversality"])}
                for r in rows]
    _write(merged["out"], merged["format"], payload,
           csv_fields=("index", "inDomain", "momentResidual", "transversality"),
           csv_rows=csv_rows)
    n_in = sum(1 for r in rows if r["inDomain"])
    print(f"slice {family}{tuple(params)}: {n_in}/{len(rows)} in-domain, "
          f"max residual {worst:.3e}")
    return EXIT_PASS if worst < float(merged["tol"]) else EXIT_THRESHOLD


# -- verify-sde ----------------------------------------------------------------

def cmd_verify_sde(args):
    merged = _merged(args, {"family": None, "weights": None, "params": None,
                            "grid": None, "h": 1e-3, "tol": 1e-4,
                            "out": None, "format": "json", "no_plot": False})
    family, params = _family_params(merged)
    _check_nonempty(family, params)
    chart = slices.quotient_chart(_slice_family(family, params), params)
    if merged["grid"] is None:
        raise InputProblem("verify-sde needs a --grid with four axes")
    axes = _grid_axes(merged["grid"], 4)
    reports, skipped = curvature.curvature_grid(chart, axes,
                                                h=float(merged["h"]))
    done = [r for r in reports if r is not None]
    if not done:
        raise EmptyCase("no grid point admitted a curvature stencil")

    tol = float(merged["tol"])
    max_ein = max(r.einstein_residual for r in done)
    scalars = [r.scalar for r in done]
    verdicts = sorted({r.verdict for r in done})
    ok = max_ein < tol and "Failed" not in verdicts
    summary = {
        "maxEinsteinResidual": max_ein,
        "scalarRange": [min(scalars), max(scalars)],
        "verdicts": verdicts,
        "computed": len(done),
        "skipped": len(skipped),
        "pass": bool(ok),
    }
    payload = {
        "config": _echo_config("verify-sde", merged),
        "summary": summary,
        "points": [r.to_dict() for r in done],
        "skippedPoints": [{"index": i, "reason": msg} for i, msg in skipped],
    }
    fields = ("xi0", "xi1", "xi2", "xi3", "scalar", "einsteinResidual",
              "weylSDnorm", "weylASDnorm")
    csv_rows = [dict(zip(fields, r.to_row())) for r in done]
    _write(merged["out"], merged["format"], payload,
           csv_fields=fields, csv_rows=csv_rows)
    _maybe_plot(merged,
                lambda plots: plots.plot_verify_sde(reports, merged["out"]))
    print(f"verify {family}{tuple(params)}: verdicts={verdicts} "
          f"maxEinstein={max_ein:.3e} scalar=[{min(scalars):.6f}, "
          f"{max(scalars):.6f}] skipped={len(skipped)}")
    return EXIT_PASS if ok else EXIT_THRESHOLD


# -- eigen ---------------------------------------------------------------------

def _poles_from_spec(data):
    if not isinstance(data, dict):
        raise InputProblem("pole spec must be a JSON object")
    try:
        return hyperfun.PoleSet(
            real_poles=tuple(tuple(p) for p in data.get("realPoles", ())),
            complex_pair=(tuple(data["complexPair"])
                          if data.get("complexPair") else None),
            dipole=data.get("dipoleCoeff", 0.0),
            tripole=data.get("tripoleCoeff", 0.0))
    except (ValueError, TypeError) as exc:
        raise InputProblem(f"bad pole spec: {exc}") from None


def cmd_eigen(args):
    merged = _merged(args, {"family": None, "weights": None, "params": None,
                            "poles": None, "grid": None, "tol": 1e-8,
                            "out": None, "format": "csv", "no_plot": False})
    if merged["poles"] is not None:
        poles = _poles_from_spec(_json_arg(merged["poles"]))
        label = "poles"
    else:
        family, params = _family_params(merged)
        try:
            poles = hyperfun.eigenfunction_of_quotient(family, params)
        except ValueError as exc:
            raise InputProblem(str(exc)) from None
        label = f"{family}{tuple(params)}"
    if merged["grid"] is None:
        raise InputProblem("eigen needs a --grid with two axes (rho, eta)")
    axes = _grid_axes(merged["grid"], 2)
    (rlo, rhi, rn), (elo, ehi, en) = axes
    if rlo <= 0.0:
        raise InputProblem("rho axis must stay positive")

    rows, skipped = [], 0
    for rho in np.linspace(rlo, rhi, rn):
        for eta in np.linspace(elo, ehi, en):
            pt = hyperfun.HalfPlanePoint(float(rho), float(eta))
            with warnings.catch_warnings():
                warnings.simplefilter("error", hyperfun.BranchProximityWarning)
                try:
                    rows.append({
                        "rho": pt.rho, "eta": pt.eta,
                        "F": hyperfun.eval_F(poles, pt),
                        "laplace_residual": hyperfun.laplace_check(poles, pt),
                    })
                except (hyperfun.BranchProximityWarning, ValueError):
                    skipped += 1
    if not rows:
        raise EmptyCase("every grid point fell on the singular locus")
    worst = max(r["laplace_residual"] for r in rows)
    payload = {"config": _echo_config("eigen", merged),
               "poles": poles.to_dict(),
               "maxResidual": worst, "skipped": skipped, "points": rows}
    _write(merged["out"], merged["format"], payload,
           csv_fields=("rho", "eta", "F", "laplace_residual"), csv_rows=rows)
    _maybe_plot(merged, lambda plots: plots.plot_eigen(rows, merged["out"]))
    print(f"eigen {label}: {len(rows)} points, skipped {skipped}, "
          f"max residual {worst:.3e}")
    return EXIT_PASS if worst < float(merged["tol"]) else EXIT_THRESHOLD


# -- pullback --------------------------------------------------------------------

def cmd_pullback(args):
    merged = _merged(args, {"family": None, "weights": None, "params": None,
                            "seed": 0, "samples": 50, "tol": 1e-6,
                            "out": None, "format": "json", "no_plot": False})
    family, params = _family_params(merged, int_weights=("Diagonal",))
    if family not in hyperfun.MOMENT_FAMILIES:
        raise InputProblem(
            f"pullback families are {hyperfun.MOMENT_FAMILIES}, got {family!r}")
    n = int(merged["samples"])
    try:
        samples = moments.zeroset_sample(
            family, params, seed=int(merged["seed"]),
            n_starts=max(200, 4 * n), keep=n)
    except moments.EmptyZeroSetError as exc:
        raise EmptyCase(str(exc)) from None
    result = hyperfun.pullback_check(family, params, samples)
    payload = {
        "config": _echo_config("pullback", merged),
        "poles": result.poles.to_dict(),
        "constant": result.constant,
        "maxRelDev": result.max_rel_dev,
        "nUsed": result.n_used,
        "ratios": list(result.ratios),
    }
    csv_rows = [{"index": i, "ratio": r} for i, r in enumerate(result.ratios)]
    _write(merged["out"], merged["format"], payload,
           csv_fields=("index", "ratio"), csv_rows=csv_rows)
    _maybe_plot(merged, lambda plots: plots.plot_pullback(
        result.ratios, result.constant, merged["out"]))
    print(f"pullback {family}{tuple(params)}: constant={result.constant:.12f} "
          f"maxRelDev={result.max_rel_dev:.3e} n={result.n_used}")
    return EXIT_PASS if result.max_rel_dev < float(merged["tol"]) \
        else EXIT_THRESHOLD


# -- bergman ---------------------------------------------------------------------

def cmd_bergman(args):
    merged = _merged(args, {"pmax": 5, "out": None, "format": "json"})
    pmax = int(merged["pmax"])
    if pmax < 1:
        raise InputProblem("pmax must be >= 1")
    rows = []
    non_primitive = 0
    for p0 in range(1, pmax + 1):
        for p1 in range(1, pmax + 1):
            for p2 in range(1, pmax + 1):
                if math.gcd(math.gcd(p0, p1), p2) != 1:
                    non_primitive += 1
                    continue
                v = moments.bergman_smooth((p0, p1, p2))
                rows.append({"p0": p0, "p1": p1, "p2": p2,
                             "smooth": v.smooth,
                             "witnessCircle": v.witness_circle or "",
                             "witnessOrder": v.witness_order or 0})
    smooth = [(r["p0"], r["p1"], r["p2"]) for r in rows if r["smooth"]]
    payload = {"config": _echo_config("bergman", merged),
               "smoothTriples": [list(t) for t in smooth],
               "nonPrimitiveSkipped": non_primitive, "table": rows}
    _write(merged["out"], merged["format"], payload,
           csv_fields=("p0", "p1", "p2", "smooth", "witnessCircle",
                       "witnessOrder"),
           csv_rows=rows)
    print(f"bergman sweep 1..{pmax}: smooth triples {smooth}")
    return EXIT_PASS


# -- driver ----------------------------------------------------------------------

def _add_common(sp, *names):
    if "family" in names:
        sp.add_argument("--family", help="chart or moment family name")
        sp.add_argument("--weights", help="comma list of integer weights")
        sp.add_argument("--params",
                        help="comma list of reals; write --params=-1,0.5 "
                             "when the first is negative")
    if "grid" in names:
        sp.add_argument("--grid")
    if "h" in names:
        sp.add_argument("--h", type=float)
    if "seed" in names:
        sp.add_argument("--seed", type=int)
    if "tol" in names:
        sp.add_argument("--tol", type=float)
    if "samples" in names:
        sp.add_argument("--samples", type=int)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("json", "csv"))
    sp.add_argument("--config")
    if "plot" in names:
        sp.add_argument("--no-plot", dest="no_plot", action="store_true",
                        default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qkq",
        description="Toric self-dual Einstein quotient toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="normal form and cohomogeneity case")
    sp.add_argument("--matrix", help="3x3x4 JSON literal or file")
    sp.add_argument("--form", help="normal form literal, e.g. T0Diag(1,2,3)")
    sp.add_argument("--basis", choices=("standard", "split"))
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("json", "csv"))
    sp.add_argument("--config")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("moment", help="existence and freeness report")
    _add_common(sp, "family", "seed", "samples")
    sp.set_defaults(fn=cmd_moment)

    sp = sub.add_parser("slice", help="slice residuals over a grid")
    _add_common(sp, "family", "grid", "tol")
    sp.set_defaults(fn=cmd_slice)

    sp = sub.add_parser("verify-sde", help="curvature verification sweep")
    _add_common(sp, "family", "grid", "h", "tol", "plot")
    sp.set_defaults(fn=cmd_verify_sde)

    sp = sub.add_parser("eigen", help="eigenfunction field and residuals")
    _add_common(sp, "family", "grid", "tol", "plot")
    sp.add_argument("--poles", help="PoleSet JSON literal or file")
    sp.set_defaults(fn=cmd_eigen)

    sp = sub.add_parser("pullback", help="pullback constancy check")
    _add_common(sp, "family", "seed", "tol", "samples", "plot")
    sp.set_defaults(fn=cmd_pullback)

    sp = sub.add_parser("bergman", help="mirror-signature smoothness sweep")
    sp.add_argument("--pmax", type=int)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("json", "csv"))
    sp.add_argument("--config")
    sp.set_defaults(fn=cmd_bergman)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EmptyCase as exc:
        print(f"empty: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (moments.EmptyZeroSetError,) as exc:
        print(f"empty: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ValueError, slices.DomainError, curvature.IllConditionedError,
            moments.SearchFailedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
