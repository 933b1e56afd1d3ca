"""Command-line front end.

Exit codes: 0 success, 1 a verification or bound check failed, 2 bad input.
Every input is a JSON or TOML file (or an inline JSON string); shipped
fixtures can be named directly, e.g. ``--field sqrt5``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np

from . import thresholds as th
from .congruence import GroupSpec, spec_from_json
from .cusps import Cusp, canonical_depth_bound, depth_report
from .errors import RMTorsionError
from .hyperbolic import TestCurve, curve_volume_in_horoball, geodesic_volume
from .numberfield import FractionalIdeal, field_from_json, ideal_norm, make_field
from .toroidal import Fan, check_fan, cusp_resolution_fan
from .verify import (SUITES, SuiteContext, load_json_or_toml, report_json, run_suites,
                     shipped_curves, shipped_field)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    field: str | None = None
    level: str | None = None
    seed: int = 0
    precision: int = 15
    format: str = "text"
    out: str | None = None
    options: dict = dc_field(default_factory=dict)


def _load(spec):
    """A path to JSON/TOML, or inline JSON."""
    if isinstance(spec, (dict, list)):
        return spec
    s = str(spec).strip()
    if s[:1] in "{[":
        return json.loads(s)
    return load_json_or_toml(s)


def load_field(spec):
    if spec is None:
        raise RMTorsionError("--field is required")
    if isinstance(spec, str) and not os.path.exists(spec) and spec[:1] not in "{[":
        if spec.startswith("sqrt") and spec[4:].isdigit():
            try:
                return shipped_field(spec)
            except FileNotFoundError:
                return make_field([-int(spec[4:]), 0, 1])
        try:
            return shipped_field(spec)
        except FileNotFoundError:
            raise RMTorsionError(f"no field file or fixture named {spec!r}") from None
    return field_from_json(_load(spec))


def load_spec(F, spec, default_flavor="gamma1"):
    if spec is None:
        return GroupSpec.make(F)
    data = _load(spec)
    if isinstance(data, dict) and ({"level", "flavor", "a"} & set(data)):
        return spec_from_json(F, data)
    return GroupSpec.make(F, level=FractionalIdeal.from_json(F, data), flavor=default_flavor)


def _fmt(x, digits):
    return mpmath.nstr(mpmath.mpf(x), digits)


# -- commands -------------------------------------------------------------------
def cmd_field_info(cfg: RunConfig):
    F = load_field(cfg.field)
    digits = cfg.precision
    basis = F.basis_elements()
    with mpmath.workdps(digits + 5):
        emb = [[_fmt(v.mid, digits) for v in e.embed(Fraction(1, 10 ** (digits + 3)))] for e in basis]
    units = F.units
    rep = {"label": F.label, "degree": F.degree, "min_poly": list(F.min_poly),
           "discriminant": int(F.discriminant),
           "basis_embeddings": emb,
           "fundamental_units": [[str(c) for c in u.coords] for u in units.fundamental_units],
           "totally_positive_units": [[str(c) for c in u.coords] for u in units.totally_positive_generators],
           "unit_embeddings": [[_fmt(v, digits) for v in u.approx()] for u in units.fundamental_units]}
    return rep, EXIT_OK


def cmd_depth(cfg: RunConfig):
    F = load_field(cfg.field)
    spec = load_spec(F, cfg.level)
    cusps = cfg.options.get("cusps")
    if cusps is None:
        xi1, xi2 = Cusp(F.one, F.zero), Cusp(F.zero, F.one)
    else:
        data = _load(cusps)
        if isinstance(data, dict):
            data = [data["cusp1"], data["cusp2"]]
        xi1, xi2 = (Cusp.from_json(F, c) for c in data)
    r = depth_report(xi1, xi2, spec)
    rep = r.to_json()
    rep["cusps"] = [xi1.to_json(), xi2.to_json()]
    rep["flavor"] = spec.flavor
    rep["canonical_depth_bound"] = _fmt(canonical_depth_bound(spec).mid, cfg.precision)
    return rep, EXIT_OK if r.passed else EXIT_FAIL


def cmd_resolve(cfg: RunConfig):
    F = load_field(cfg.field)
    fan_file = cfg.options.get("fan")
    if fan_file is not None:
        fan = Fan.from_json(F, _load(fan_file))
    else:
        lat = cfg.options.get("lattice")
        lam = FractionalIdeal.unit(F) if lat is None else FractionalIdeal.from_json(F, _load(lat))
        fan = cusp_resolution_fan(lam)
    c = check_fan(fan)
    rep = {"fan": fan.to_json(), "cycle": list(fan.cycle),
           "checks": {"smooth": c.smooth, "cycle_relation": c.cycle_relation,
                      "unit_invariant": c.unit_invariant, "cycle_at_least_two": c.cycle_at_least_two},
           "passed": c.passed}
    return rep, EXIT_OK if c.passed else EXIT_FAIL


def cmd_thresholds(cfg: RunConfig):
    opts = cfg.options
    n, nm = opts.get("n"), opts.get("nm")
    if cfg.field is not None:
        F = load_field(cfg.field)
        n = n or F.degree
        if nm is None and cfg.level is not None:
            nm = ideal_norm(load_spec(F, cfg.level).level)
    if n is None or nm is None:
        raise RMTorsionError("need --n and --nm (or --field with --level)")
    reports = th.evaluate_level(int(n), nm, opts.get("lam"), opts.get("variant") or "torsion")
    return {"reports": [r.to_json(cfg.precision) for r in reports]}, EXIT_OK


def cmd_verify(cfg: RunConfig):
    opts = cfg.options
    # fixtures are loaded inside the suites so a broken file fails its suite by name
    fields = None
    if cfg.field is not None:
        fields = [cfg.field if os.path.exists(str(cfg.field)) else load_field(cfg.field)]
    curves = opts.get("curves") or None
    ctx = SuiteContext(seed=cfg.seed, fields=fields, curves=curves, scale=float(opts.get("scale") or 1.0))
    names = []
    for s in opts.get("suite") or []:
        names += [x for x in s.split(",") if x]
    rep = run_suites(names or None, ctx)
    return rep, EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_volume(cfg: RunConfig):
    opts = cfg.options
    curves = [TestCurve.from_json(_load(p)) for p in opts["curves"]] if opts.get("curves") else shipped_curves()
    ss = np.logspace(np.log10(opts.get("s_min") or 0.1), np.log10(opts.get("s_max") or 10.0),
                     int(opts.get("points") or 50))
    rows = []
    for c in curves:
        for s in ss:
            v = curve_volume_in_horoball(c, s)
            row = {"curve": c.name, "s": float(s), "volume": v.value, "error": v.error,
                   "ratio": v.value * float(s) ** (-1.0 / c.n)}
            if c.is_geodesic:
                row["closed_form"] = geodesic_volume(c, s)
            rows.append(row)
    return {"rows": rows}, EXIT_OK


COMMANDS = {"field-info": cmd_field_info, "depth": cmd_depth, "resolve": cmd_resolve,
            "thresholds": cmd_thresholds, "verify": cmd_verify, "volume": cmd_volume}


# -- rendering ------------------------------------------------------------------
def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, sort_keys=True)}")
    return lines


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, dict) for x in items) and len(json.dumps(v)) < 100


def _csv(rep):
    rows = rep.get("rows") or rep.get("reports")
    if rows is None:
        raise RMTorsionError("csv output is available for volume and thresholds only")
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
    return buf.getvalue()


def render(rep, fmt):
    if fmt == "json":
        return report_json(rep)
    if fmt == "csv":
        return _csv(rep)
    return "\n".join(_text(rep)) + "\n"


# -- argument parsing -----------------------------------------------------------
def _seed(s):
    v = int(s, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON/TOML file with default options")
    common.add_argument("--field", help="field file, inline JSON, or fixture name such as sqrt5")
    common.add_argument("--level", help="level ideal or group spec (JSON/TOML)")
    common.add_argument("--seed", type=_seed, default=None)
    common.add_argument("--precision", type=int, default=None, help="significant digits in reports")
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--out", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="rmtorsion", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("field-info", parents=[common], help="degree, discriminant, embeddings, units")
    d = sub.add_parser("depth", parents=[common], help="stabilizer lattices of a cusp pair and the depth bound")
    d.add_argument("--cusps", help="two cusps [[alpha, beta], [alpha, beta]] as coordinate lists")
    r = sub.add_parser("resolve", parents=[common], help="cusp resolution fan of a lattice")
    r.add_argument("--lattice", help="translation lattice as an ideal (default O_F)")
    r.add_argument("--fan", help="validate a user-supplied fan instead")
    t = sub.add_parser("thresholds", parents=[common], help="effective norm thresholds")
    t.add_argument("--n", type=int)
    t.add_argument("--nm", help="level norm (integer or fraction)")
    t.add_argument("--lambda", dest="lam", help="ample slope parameter")
    t.add_argument("--variant", choices=th.VARIANTS)
    v = sub.add_parser("verify", parents=[common], help="run property suites")
    v.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)} (repeatable)")
    v.add_argument("--curves", nargs="+", help="curve fixture files (default: shipped)")
    v.add_argument("--scale", type=float, help="multiply every sample count")
    vol = sub.add_parser("volume", parents=[common], help="curve volumes in horoballs over a depth grid")
    vol.add_argument("--curves", nargs="+")
    vol.add_argument("--s-min", type=float)
    vol.add_argument("--s-max", type=float)
    vol.add_argument("--points", type=int)
    return p


def config_from_args(args) -> RunConfig:
    base = {}
    if args.config:
        base = dict(_load(args.config))
    skip = {"command", "config", "field", "level", "seed", "precision", "format", "out"}
    opts = dict(base.get("options", {}))
    for k, val in vars(args).items():
        if k not in skip and val is not None:
            opts[k] = val

    def pick(name, default):
        val = getattr(args, name, None)
        return val if val is not None else base.get(name, default)

    seed = pick("seed", 0)
    if not isinstance(seed, int):
        seed = _seed(str(seed))
    return RunConfig(field=pick("field", None), level=pick("level", None), seed=seed,
                     precision=int(pick("precision", 15)), format=pick("format", "text"),
                     out=pick("out", None), options=opts)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        rep, code = COMMANDS[args.command](cfg)
        text = render(rep, cfg.format)
    except (ValueError, OSError, KeyError, argparse.ArgumentTypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
