"""Words over a group's generating alphabet and the group specification.

A word is a plain tuple of integer letter codes.  Generator ``i`` is coded
``2*i`` and its inverse ``2*i + 1``, so the natural integer order on codes is
the shortlex letter order ``a < a^-1 < b < b^-1 < ...`` and inversion of a
letter is ``code ^ 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import MalformedExponent, UnknownGenerator, ValidationError

Word = tuple  # tuple[int, ...]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(.*))?\Z")
_EXPONENT = re.compile(r"[+-]?[0-9]+\Z")


class Letter(NamedTuple):
    generator_index: int
    sign: int

    @property
    def code(self):
        return 2 * self.generator_index + (0 if self.sign > 0 else 1)

    @classmethod
    def from_code(cls, code):
        return cls(code >> 1, -1 if code & 1 else 1)


def inverse_letter(code):
    return code ^ 1


def letters(w):
    return [Letter.from_code(c) for c in w]


def invert(w):
    return tuple(c ^ 1 for c in reversed(w))


def free_reduce(w):
    out = []
    for c in w:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def is_reduced(w):
    return all(w[i + 1] != w[i] ^ 1 for i in range(len(w) - 1))


def is_cyclically_reduced(w):
    return is_reduced(w) and (len(w) < 2 or w[0] != w[-1] ^ 1)


def cyclic_reduce(w):
    """Return ``(core, conjugator)`` with ``w = conjugator . core . conjugator^-1``.

    The identity holds in the free group on the letters, hence in every quotient.
    """
    r = free_reduce(w)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == r[j - 1] ^ 1:
        i += 1
        j -= 1
    return r[i:j], r[:i]


def conjugate_by_letter(x, c):
    """Freely reduced ``x . c . x^-1`` for a freely reduced word ``c``."""
    y = x ^ 1
    c2 = c[1:] if c and c[0] == y else (x,) + c
    if c2 and c2[-1] == x:
        return c2[:-1]
    return c2 + (y,)


def cyclic_permutations(w):
    return [w[i:] + w[:i] for i in range(max(len(w), 1))]


def shortlex_key(w):
    return (len(w), w)


# -- group specification ----------------------------------------------------

WORD_PROBLEM_BACKENDS = ("ball-search", "dehn-rewriting")


@dataclass(frozen=True)
class ParabolicSpec:
    name: str
    generator_indices: tuple

    def __post_init__(self):
        if not self.generator_indices:
            raise ValidationError(f"parabolic {self.name!r} has no generators")

    def letter_codes(self):
        return frozenset(c for i in self.generator_indices for c in (2 * i, 2 * i + 1))


@dataclass(frozen=True)
class GroupSpec:
    """Presentation, parabolic structure and configured constants of a group.

    ``bcp_table`` maps a quasi-geodesic parameter ``P`` to the constant
    ``c(P)``; ``bcp_tail`` (when not None) is the value used for ``P`` beyond
    the last table key.  ``stability`` optionally overrides the default
    stability function, see :mod:`rhconj.constants`.
    """

    name: str
    generators: tuple
    relators: tuple = ()
    parabolics: tuple = ()
    word_problem_backend: str = "ball-search"
    max_ball_radius: int = 10
    bcp_table: tuple = ()
    bcp_tail: int | None = None
    delta: Fraction = Fraction(0)
    stability: dict | None = field(default=None, hash=False, compare=False)
    parabolic_radius: int = 8

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValidationError("a group needs at least one generator")
        for g in gens:
            if not _NAME.match(g):
                raise ValidationError(f"invalid generator name {g!r}")
        if len(set(gens)) != len(gens):
            raise ValidationError("duplicate generator names")
        n = len(gens)
        for r in self.relators:
            if any(not 0 <= (c >> 1) < n for c in r):
                raise ValidationError("relator uses an unknown generator")
        seen = set()
        for p in self.parabolics:
            for i in p.generator_indices:
                if not 0 <= i < n:
                    raise ValidationError(f"parabolic {p.name!r} uses an unknown generator")
                if i in seen:
                    raise ValidationError("parabolic generator sets must be pairwise disjoint")
                seen.add(i)
        if self.word_problem_backend not in WORD_PROBLEM_BACKENDS:
            raise ValidationError(f"unknown word problem backend {self.word_problem_backend!r}")
        if self.max_ball_radius < 0:
            raise ValidationError("max_ball_radius must be non-negative")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        object.__setattr__(self, "parabolics", tuple(self.parabolics))
        object.__setattr__(self, "bcp_table", tuple(sorted((Fraction(p), int(c)) for p, c in dict(self.bcp_table).items())))
        object.__setattr__(self, "delta", Fraction(self.delta))

    @property
    def n_letters(self):
        return 2 * len(self.generators)

    def parabolic_of_letter(self, code):
        """Index of the parabolic containing the letter, or -1."""
        for k, p in enumerate(self.parabolics):
            if (code >> 1) in p.generator_indices:
                return k
        return -1

    def parse(self, text):
        return parse_word(text, self)

    def format(self, w):
        return format_word(w, self)


def parse_word(text, spec):
    """Parse ``"a^3.b.a^-1"`` style text.  No reduction is applied."""
    index = {g: i for i, g in enumerate(spec.generators)}
    out = []
    for token in re.split(r"[.\s]+", text.strip()):
        if not token:
            continue
        m = _TOKEN.match(token)
        if not m:
            raise UnknownGenerator(f"cannot read token {token!r}")
        name, exp = m.groups()
        if name not in index:
            raise UnknownGenerator(f"unknown generator {name!r}")
        if exp is None:
            k = 1
        else:
            if not _EXPONENT.match(exp) or int(exp) == 0:
                raise MalformedExponent(f"bad exponent in {token!r}")
            k = int(exp)
        code = 2 * index[name] + (1 if k < 0 else 0)
        out.extend([code] * abs(k))
    return tuple(out)


def format_word(w, spec):
    """Inverse of :func:`parse_word`; runs of a letter become powers."""
    if not w:
        return ""
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = spec.generators[w[i] >> 1]
        k = (j - i) * (-1 if w[i] & 1 else 1)
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return ".".join(parts)
