"""Brute-force ground truth for conjugacy and ball sizes.

Nothing here looks at the coned-off graph or at any constant: conjugators
are found by listing every element of a Cayley ball and testing it.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import replace
from typing import NamedTuple

from .cayley import Group, build_ball
from .words import conjugate_by_letter, cyclic_reduce, free_reduce, invert


class OracleResult(NamedTuple):
    conjugate: bool
    minimal_conjugator: tuple | None
    radius_searched: int
    exhaustive_up_to: int


_groups = {}
_orbits = OrderedDict()
_ORBIT_CACHE = 4


def _group(spec, need):
    """A group context whose keys reach Γ-length ``need``."""
    if not any(free_reduce(r) for r in spec.relators):
        need = 0
    key = (spec, need)
    if key not in _groups:
        s = spec if need <= spec.max_ball_radius else replace(spec, max_ball_radius=need)
        _groups[key] = Group(s)
    return _groups[key]


def _free_orbit(v, radius, L):
    first = {v: ()}
    prev = {(): v}
    for depth in range(1, radius + 1):
        cur = {}
        for g0, c0 in prev.items():
            for x in range(L):
                if g0 and g0[0] == x ^ 1:
                    continue
                g = (x,) + g0
                c = conjugate_by_letter(x, c0)
                cur[g] = c
                old = first.get(c)
                if old is None or (len(old) == depth and g < old):
                    first[c] = g
        prev = cur
    return first


def conjugation_orbit(spec, v, radius):
    """Map from each ``g v g^-1`` with ``l(g) <= radius`` to its least ``g``.

    The least conjugator is shortlex-least among those of minimal length.
    """
    group = _group(spec, 2 * radius + len(v))
    v = group.key(tuple(v))
    key = (spec, v, radius)
    if key in _orbits:
        _orbits.move_to_end(key)
        return _orbits[key]
    if group.free:
        orbit = _free_orbit(v, radius, group.L)
    else:
        orbit = {}
        for g in _group(spec, radius).ball(radius).elements:
            c = group.key(g + v + invert(g))
            if c not in orbit:
                orbit[c] = g
    _orbits[key] = orbit
    if len(_orbits) > _ORBIT_CACHE:
        _orbits.popitem(last=False)
    return orbit


def brute_force_conjugate(u, v, radius, spec):
    """Search every ``g`` of Γ-length <= radius for ``u = g v g^-1``."""
    group = _group(spec, 2 * radius + max(len(u), len(v)))
    orbit = conjugation_orbit(spec, v, radius)
    g = orbit.get(group.key(tuple(u)))
    if g is not None:
        assert group.is_trivial(tuple(u) + g + invert(tuple(v)) + invert(g))
    return OracleResult(g is not None, g, radius, radius)


def free_group_conjugate(u, v):
    """Cyclic reductions are rotations of one another."""
    cu, _ = cyclic_reduce(tuple(u))
    cv, _ = cyclic_reduce(tuple(v))
    if len(cu) != len(cv):
        return False
    return not cu or any(cu == cv[i:] + cv[:i] for i in range(len(cv)))


def ball_census(spec, radius):
    return len(build_ball(_group(spec, radius), radius))
