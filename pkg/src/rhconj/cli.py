"""Command line entry point: ``python -m rhconj <command> ...``.

Exit codes: 0 success (or conjugate), 1 not conjugate, 2 undecided at the
configured scale, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cayley import build_ball
from .coned import ConedBall, penetration_trace, project, relative_geodesic
from .constants import (
    MANIFOLD_CITATIONS, ConstantSet, ManifoldParams, estimate_bcp, manifold_constants, stability_N,
)
from .engine import (
    CONJUGATE, NOT_CONJUGATE, Context, decide_conjugate, partition_Hd,
)
from .errors import BcpTableExceeded, CensusOverflow, RadiusExceeded, RhconjError
from .groups import BUNDLED, bundled, load_group_spec
from .oracle import brute_force_conjugate
from .words import format_word, parse_word

JSON_SCHEMA = 1
EXIT_OK, EXIT_NOT, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3

__all__ = ["RunConfig", "load_group_spec", "main", "run"]


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    params: dict = field(default_factory=dict)
    output_format: str = "text"
    max_radius: int | None = None
    max_census: int | None = None
    time_budget: float | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("max_radius", "max_census", "time_budget"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InputError(f"{name} must be positive")


def _spec(config):
    if config.group is None:
        raise InputError("--group is required for this command")
    if not Path(config.group).exists() and config.group in BUNDLED:
        return bundled(config.group)
    try:
        return load_group_spec(config.group)
    except FileNotFoundError:
        raise InputError(f"group file not found: {config.group}") from None


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


def _trace_doc(trace, spec):
    return [
        {
            "parabolic": spec.parabolics[r.parabolic].name,
            "coset": format_word(r.coset, spec),
            "entry": format_word(r.entry, spec),
            "exit": format_word(r.exit, spec),
            "gamma_travel": r.gamma_travel,
        }
        for r in trace
    ]


# -- commands ----------------------------------------------------------------

def _decide(config):
    spec = _spec(config)
    p = config.params
    u, v = parse_word(p["u"], spec), parse_word(p["v"], spec)
    ctx = Context(spec, search_radius=p.get("search_radius") or 6,
                  census_budget=config.max_census, max_radius=config.max_radius)
    cert = decide_conjugate(u, v, ctx)
    doc = {
        "verdict": cert.verdict,
        "conjugator": None if cert.conjugator is None else format_word(cert.conjugator, spec),
        "method": cert.method,
        "bound_used": cert.search_bound_used,
        "theoretical_bound": None if cert.theoretical_bound is None else str(cert.theoretical_bound),
        "theoretical_bound_exact": cert.theoretical_bound_exact,
        "reason": cert.reason,
        "stats": {
            "ball_radius": cert.stats.get("ball_radius"),
            "pairs_enumerated": cert.stats.get("pairs_enumerated", 0),
            "wall_ms": cert.stats.get("wall_ms"),
        },
    }
    code = {CONJUGATE: EXIT_OK, NOT_CONJUGATE: EXIT_NOT}.get(cert.verdict, EXIT_UNDECIDED)
    text = f"{cert.verdict}" + (f" conjugator={doc['conjugator'] or '1'}" if cert.conjugate else "")
    return code, doc, text


def _relgeo(config):
    spec = _spec(config)
    x = parse_word(config.params["word"], spec)
    coned = ConedBall(spec)
    rep = relative_geodesic(x, coned)
    path = project(rep, coned)
    doc = {
        "input": config.params["word"],
        "representative": format_word(rep, spec),
        "relative_length_halves": path.length_halves,
        "gamma_length": len(rep),
        "trace": _trace_doc(penetration_trace(path), spec),
    }
    return EXIT_OK, doc, f"{doc['representative'] or '1'} (relative length {path.relative_length})"


def _parse_manifold(text):
    values = {}
    for part in text.split(","):
        if "=" not in part:
            raise InputError(f"expected name=value in --manifold, got {part!r}")
        name, value = part.split("=", 1)
        try:
            values[name.strip()] = float(value)
        except ValueError:
            raise InputError(f"bad number for {name!r}") from None
    missing = {"a", "delta", "lambda"} - set(values)
    if missing:
        raise InputError(f"--manifold needs {', '.join(sorted(missing))}")
    return values


def _constants(config):
    p = config.params
    if p.get("manifold"):
        m = _parse_manifold(p["manifold"])
        mp = ManifoldParams(m["a"], m.get("b", m["a"]), m["delta"], m["lambda"], float(p.get("p") or 1))
        base = {"e": math.e, "2": 2.0, "10": 10.0}[p.get("log_base") or "e"]
        values = manifold_constants(mp, base)
        doc = {
            "params": {"a": mp.a, "b": mp.b, "delta": mp.delta, "lambda": mp.lam, "P": mp.P},
            "log_base": p.get("log_base") or "e",
            "values": {
                k: {"value": values[k], "formula": MANIFOLD_CITATIONS[k], "provenance": "closed-form manifold bound"}
                for k in ("V_S", "K", "L", "D", "E", "cP")
            },
        }
        text = "\n".join(f"{k} = {v['value']:.9g}" for k, v in doc["values"].items())
        return EXIT_OK, doc, text
    spec = _spec(config)
    cs = ConstantSet.from_spec(spec)
    P = Fraction(p.get("p") or 1)
    doc = {
        "group": spec.name,
        "delta": {"value": _num(cs.delta), "provenance": "table"},
        "bcp_table": [[_num(k), c] for k, c in cs.bcp_table],
        "bcp_tail": cs.bcp_tail,
        "c(P)": {"P": _num(P), "value": cs.bcp_constant(P), "provenance": "table"},
        "N(P)": {"P": _num(P), "value": _num(stability_N(cs, P)), "provenance": "formula default"},
    }
    text = f"delta = {cs.delta}; c({P}) = {cs.bcp_constant(P)}; N({P}) = {stability_N(cs, P)}"
    return EXIT_OK, doc, text


def _estimate_bcp(config):
    spec = _spec(config)
    p = config.params
    radius = int(p.get("radius") or 6)
    P = Fraction(p.get("p") or 1)
    est = estimate_bcp(ConedBall(spec, radius), P, radius)
    doc = {"p": _num(P), "radius": radius, "c_hat": est.value, "pairs_checked": est.pairs_checked,
           "provenance": f"estimated@{radius}"}
    return EXIT_OK, doc, f"c_hat({P}) = {est.value} at radius {radius} ({est.pairs_checked} pairs)"


def _partition(config):
    spec = _spec(config)
    d = int(config.params.get("d") or 0)
    part = partition_Hd(d, Context(spec, max_radius=config.max_radius))
    classes = [[format_word(h, spec) for h in cl] for cl in part.classes]
    doc = {"d": d, "radius": part.radius, "classes": classes,
           "witnesses": [[format_word(x, spec) for x in w] for w in part.witnesses]}
    text = "\n".join("{" + ", ".join(w or "1" for w in cl) + "}" for cl in classes)
    return EXIT_OK, doc, text


def _ball(config):
    spec = _spec(config)
    radius = int(config.params.get("radius") or 2)
    ball = build_ball(spec, radius)
    names = [format_word(w, spec) for w in ball.elements]
    edges = []
    for i, row in enumerate(ball.adjacency):
        for x, j in enumerate(row):
            if j >= 0 and x % 2 == 0:
                edges.append((names[i], spec.generators[x >> 1], names[j]))
    if config.output_format == "dot":
        lines = [f'digraph "{spec.name}" {{']
        lines += [f'  "{n}";' for n in names]
        lines += [f'  "{a}" -> "{b}" [label="{g}"];' for a, g, b in edges]
        lines.append("}")
        return EXIT_OK, None, "\n".join(lines)
    doc = {"radius": radius, "vertices": names,
           "edges": [{"from": a, "label": g, "to": b} for a, g, b in edges]}
    return EXIT_OK, doc, f"{len(names)} elements, {len(edges)} edges"


def _oracle(config):
    spec = _spec(config)
    p = config.params
    u, v = parse_word(p["u"], spec), parse_word(p["v"], spec)
    radius = int(p.get("radius") or 6)
    res = brute_force_conjugate(u, v, radius, spec)
    doc = {"conjugate": res.conjugate,
           "minimal_conjugator": None if res.minimal_conjugator is None else format_word(res.minimal_conjugator, spec),
           "radius_searched": res.radius_searched, "exhaustive_up_to": res.exhaustive_up_to}
    text = ("conjugate, minimal conjugator " + (doc["minimal_conjugator"] or "1")) if res.conjugate \
        else f"no conjugator of length <= {radius}"
    return (EXIT_OK if res.conjugate else EXIT_NOT), doc, text


COMMANDS = {
    "decide": _decide, "relgeo": _relgeo, "constants": _constants, "estimate-bcp": _estimate_bcp,
    "partition-hd": _partition, "ball": _ball, "oracle": _oracle,
}


def run(config):
    """Execute one command; returns ``(exit code, emitted text)``."""
    try:
        code, doc, text = COMMANDS[config.command](config)
    except (InputError, RhconjError, ValueError, KeyError) as exc:
        if isinstance(exc, (RadiusExceeded, BcpTableExceeded, CensusOverflow)):
            code, doc, text = EXIT_UNDECIDED, {"error": type(exc).__name__, "message": str(exc)}, f"undecided: {exc}"
        else:
            code, doc, text = EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}, f"error: {exc}"
    if config.output_format == "json" and doc is not None:
        doc = {"schema": JSON_SCHEMA, "command": config.command, **doc}
        text = json.dumps(doc, sort_keys=True, default=_num)
    return code, text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser():
    parser = _Parser(prog="rhconj", description="Conjugacy in relatively hyperbolic groups.")
    parser.add_argument("--version", action="version", version=f"rhconj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--group", help="group spec JSON file or bundled name")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--max-radius", type=int)
        p.add_argument("--seed", type=int, default=0)
        return p

    d = common(sub.add_parser("decide"))
    d.add_argument("--u", required=True)
    d.add_argument("--v", required=True)
    d.add_argument("--search-radius", type=int)
    r = common(sub.add_parser("relgeo"))
    r.add_argument("--word", required=True)
    c = common(sub.add_parser("constants"))
    c.add_argument("--manifold")
    c.add_argument("--p")
    c.add_argument("--log-base", choices=["e", "2", "10"])
    e = common(sub.add_parser("estimate-bcp"))
    e.add_argument("--p")
    e.add_argument("--radius", type=int)
    h = common(sub.add_parser("partition-hd"))
    h.add_argument("--d", type=int, default=0)
    b = common(sub.add_parser("ball"))
    b.add_argument("--radius", type=int, default=2)
    b.add_argument("--format", choices=["dot", "json", "text"], default=None)
    o = common(sub.add_parser("oracle"))
    o.add_argument("--u", required=True)
    o.add_argument("--v", required=True)
    o.add_argument("--radius", type=int, default=6)
    return parser


def config_from_args(argv):
    ns = build_parser().parse_args(argv)
    fmt = getattr(ns, "format", None) or ("json" if ns.json else "text")
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "group", "json", "max_radius", "seed", "format")}
    budget = os.environ.get("RHCONJ_MAX_MEM")
    return RunConfig(ns.command, ns.group, params, fmt, ns.max_radius,
                     int(budget) if budget else None, None, ns.seed)


def main(argv=None):
    try:
        config = config_from_args(sys.argv[1:] if argv is None else argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, text = run(config)
    print(text)
    return code
