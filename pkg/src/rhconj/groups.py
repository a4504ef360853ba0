"""Group spec files: JSON loading, validation diagnostics and bundled fixtures."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .errors import MalformedExponent, ParseError, UnknownGenerator, ValidationError
from .words import GroupSpec, ParabolicSpec, format_word, parse_word

SCHEMA_VERSION = 1
BUNDLED = ("f2", "f2_rel_a", "z2_star_z3")

_KNOWN = {
    "schema", "name", "generators", "relators", "parabolics", "word_problem",
    "max_ball_radius", "parabolic_radius", "bcp_table", "bcp_tail", "delta", "stability",
}


def spec_from_dict(doc):
    """Build a validated GroupSpec; field problems raise ParseError."""
    if not isinstance(doc, dict):
        raise ParseError("group spec must be a JSON object")
    unknown = set(doc) - _KNOWN
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(sorted(unknown))}")
    for name in ("name", "generators"):
        if name not in doc:
            raise ParseError(f"missing field {name!r}")
    gens = doc["generators"]
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise ParseError("field 'generators' must be a list of strings")
    bare = GroupSpec(doc["name"], tuple(gens))
    relators = []
    for n, text in enumerate(doc.get("relators", [])):
        try:
            relators.append(parse_word(text, bare))
        except (UnknownGenerator, MalformedExponent) as exc:
            raise ValidationError(f"relators[{n}]: {exc}") from None
    index = {g: i for i, g in enumerate(gens)}
    parabolics = []
    for n, p in enumerate(doc.get("parabolics", [])):
        try:
            names = p["generators"]
            pname = p.get("name", f"H{n}")
        except (TypeError, KeyError):
            raise ParseError(f"parabolics[{n}]: expected {{name, generators}}") from None
        missing = [g for g in names if g not in index]
        if missing:
            raise ValidationError(f"parabolics[{n}]: unknown generator(s) {', '.join(missing)}")
        parabolics.append(ParabolicSpec(pname, tuple(index[g] for g in names)))
    try:
        table = {Fraction(str(p)): int(c) for p, c in doc.get("bcp_table", [])}
        delta = Fraction(str(doc.get("delta", 0)))
    except (TypeError, ValueError):
        raise ParseError("bcp_table must be [P, c] pairs and delta a rational") from None
    return GroupSpec(
        name=doc["name"],
        generators=tuple(gens),
        relators=tuple(relators),
        parabolics=tuple(parabolics),
        word_problem_backend=doc.get("word_problem", "ball-search"),
        max_ball_radius=int(doc.get("max_ball_radius", 10)),
        bcp_table=tuple(table.items()),
        bcp_tail=doc.get("bcp_tail"),
        delta=delta,
        stability=doc.get("stability"),
        parabolic_radius=int(doc.get("parabolic_radius", 8)),
    )


def spec_to_dict(spec):
    return {
        "schema": SCHEMA_VERSION,
        "name": spec.name,
        "generators": list(spec.generators),
        "relators": [format_word(r, spec) for r in spec.relators],
        "parabolics": [
            {"name": p.name, "generators": [spec.generators[i] for i in p.generator_indices]}
            for p in spec.parabolics
        ],
        "word_problem": spec.word_problem_backend,
        "max_ball_radius": spec.max_ball_radius,
        "parabolic_radius": spec.parabolic_radius,
        "bcp_table": [[str(p), c] for p, c in spec.bcp_table],
        "bcp_tail": spec.bcp_tail,
        "delta": str(spec.delta),
        "stability": spec.stability,
    }


def load_group_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return spec_from_dict(doc)


def bundled_path(name):
    return resources.files("rhconj") / "data" / f"{name}.json"


def bundled(name):
    """One of the fixtures shipped with the package, by name."""
    if name not in BUNDLED:
        raise ValueError(f"no bundled group {name!r}")
    return spec_from_dict(json.loads(bundled_path(name).read_text(encoding="utf-8")))
