"""The coned-off graph over a group, projections and relative geodesics.

Lengths in the coned-off graph are kept in integer half-units: a Cayley
edge costs 2, each edge to a cone vertex costs 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .cayley import CosetTable, Group
from .errors import RadiusExceeded
from .words import invert


@dataclass(frozen=True)
class Edge:
    start: tuple
    letter: int
    end: tuple


@dataclass(frozen=True)
class Detour:
    """A visit to the cone vertex of ``entry . H_parabolic``."""

    parabolic: int
    coset: tuple
    entry: tuple
    exit: tuple
    label: tuple
    travel: int

    @property
    def coset_id(self):
        return (self.parabolic, self.coset)


@dataclass(frozen=True)
class HatPath:
    start: tuple
    steps: tuple

    @property
    def end(self):
        if not self.steps:
            return self.start
        s = self.steps[-1]
        return s.end if isinstance(s, Edge) else s.exit

    @property
    def length_halves(self):
        return 2 * len(self.steps)

    @property
    def relative_length(self):
        return len(self.steps)

    def detours(self):
        return [s for s in self.steps if isinstance(s, Detour)]

    def vertices(self):
        """Γ̂-vertices with their arc position in halves.

        Group elements appear as ``("g", key)``; cone vertices as
        ``("cone", parabolic, coset)``.
        """
        out = [(("g", self.start), 0)]
        pos = 0
        for s in self.steps:
            if isinstance(s, Edge):
                pos += 2
                out.append((("g", s.end), pos))
            else:
                out.append((("cone", s.parabolic, s.coset), pos + 1))
                pos += 2
                out.append((("g", s.exit), pos))
        return out

    def label(self):
        out = ()
        for s in self.steps:
            out += (s.letter,) if isinstance(s, Edge) else s.label
        return out


@dataclass(frozen=True)
class PenetrationRecord:
    parabolic: int
    coset: tuple
    entry: tuple
    exit: tuple
    gamma_travel: int

    @property
    def coset_id(self):
        return (self.parabolic, self.coset)


class ConedBall:
    """Coned-off graph Γ̂ of a group with respect to its parabolics.

    Two views are offered.  The finite one is a Cayley ball of ``radius``
    with one cone vertex per (parabolic, coset table entry); Γ̂-distances in
    it come from a shortest-path search.  The element-wise one computes
    relative geodesics directly from the word problem and is valid for any
    element whose key is available.
    """

    def __init__(self, group, radius=None, constants=None):
        self.group = group if isinstance(group, Group) else Group(group)
        self.spec = self.group.spec
        self.radius = self.group.radius if radius is None else radius
        self.constants = constants
        self._ball = None
        self._tables = None
        self._cones = None
        self._from_identity = None
        self._relgeo = {}
        self._coset = {}
        self._parabolic_codes = [p.letter_codes() for p in self.spec.parabolics]
        self._free_letters = [x for x in range(self.group.L) if self.spec.parabolic_of_letter(x) < 0]

    # -- finite coned ball ---------------------------------------------------

    @property
    def ball(self):
        if self._ball is None:
            self._ball = self.group.ball(self.radius)
        return self._ball

    @property
    def coset_tables(self):
        if self._tables is None:
            self._tables = [CosetTable(self.ball, i) for i in range(len(self.spec.parabolics))]
        return self._tables

    @property
    def cone_vertices(self):
        """List of ``(parabolic, coset id)``, one per cone vertex."""
        if self._cones is None:
            cones = []
            for i, t in enumerate(self.coset_tables):
                cones.extend((i, cid) for cid in sorted(set(t.coset_of)))
            self._cones = cones
        return self._cones

    def _cone_index(self):
        n = len(self.ball)
        return {c: n + k for k, c in enumerate(self.cone_vertices)}

    def distances_from(self, w=()):
        """Γ̂-distances in halves from ``w`` to every node of the coned ball.

        Nodes ``0..len(ball)-1`` are elements, the rest cone vertices in the
        order of :attr:`cone_vertices`.
        """
        ball = self.ball
        n = len(ball)
        cone_of = self._cone_index()
        members = {}
        for (i, cid), node in cone_of.items():
            members[node] = []
        for i, t in enumerate(self.coset_tables):
            for v, cid in enumerate(t.coset_of):
                members[cone_of[(i, cid)]].append(v)
        src = ball.locate(w)
        dist = {src: 0}
        heap = [(0, src)]
        while heap:
            d, v = heapq.heappop(heap)
            if d > dist.get(v, d):
                continue
            if v < n:
                nbrs = [(t, 2) for t in ball.adjacency[v] if t >= 0]
                nbrs += [(cone_of[(i, t.coset_of[v])], 1) for i, t in enumerate(self.coset_tables)]
            else:
                nbrs = [(t, 1) for t in members[v]]
            for t, wgt in nbrs:
                nd = d + wgt
                if nd < dist.get(t, nd + 1):
                    dist[t] = nd
                    heapq.heappush(heap, (nd, t))
        return dist

    # -- element-wise geometry -------------------------------------------------

    def c(self, P):
        from .constants import ConstantSet

        if self.constants is None:
            self.constants = ConstantSet.from_spec(self.spec)
        return self.constants.bcp_constant(P)

    def coset_key(self, g, i):
        """Shortlex-least member of the left coset ``g H_i``."""
        g = self.group.key(tuple(g))
        memo = self._coset.get((g, i))
        if memo is not None:
            return memo
        best = g
        for _, hw in self.group.parabolic_elements(i, min(2 * len(g), self.spec.parabolic_radius)):
            try:
                m = self.group.key(g + hw)
            except RadiusExceeded:
                continue
            if (len(m), m) < (len(best), best):
                best = m
        self._coset[(g, i)] = best
        return best

    def same_coset(self, g, h, i):
        return self.coset_key(g, i) == self.coset_key(h, i)

    def relative_geodesic(self, x):
        x = self.group.key(tuple(x))
        memo = self._relgeo.get(x)
        if memo is None:
            memo = self._search_relative_geodesic(x)
            self._relgeo[x] = memo
        return memo

    def candidate_bound(self, n):
        """Γ-length cap on relative geodesic candidates for an element of length n."""
        return n * (2 * self.c(n) + 1)

    def _search_relative_geodesic(self, target):
        group = self.group
        n = len(target)
        if n == 0:
            return ()
        bound = self.candidate_bound(n)
        blocks = [
            [(hw, len(hw)) for hk, hw in group.parabolic_elements(i, min(bound, self.spec.parabolic_radius)) if hw]
            for i in range(len(self.spec.parabolics))
        ]
        inv_target = invert(target)

        def remaining(y):
            return group.length(invert(y) + target) if y != target else 0

        heap = [(0, 0, (), (), -1)]
        done = set()
        while heap:
            steps, glen, word, y, last = heapq.heappop(heap)
            if (y, last) in done:
                continue
            done.add((y, last))
            if y == target:
                return word
            moves = [((x,), 1, -1) for x in self._free_letters]
            for i, bl in enumerate(blocks):
                if i != last:
                    moves.extend((hw, k, i) for hw, k in bl)
            for label, k, tag in moves:
                if glen + k > bound:
                    continue
                try:
                    y2 = group.key(y + label)
                    rest = remaining(y2)
                except RadiusExceeded:
                    continue
                if glen + k + rest > bound or (y2, tag) in done:
                    continue
                heapq.heappush(heap, (steps + 1, glen + k, word + label, y2, tag))
        del inv_target
        raise RadiusExceeded("no relative geodesic found within the candidate bound")

    def relative_length(self, x):
        return project(self.relative_geodesic(x), self).relative_length

    def max_travel(self, x):
        """Largest Γ-distance the relative geodesic of ``x`` travels in a coset."""
        return max((d.travel for d in project(self.relative_geodesic(x), self).detours()), default=0)


# -- operations --------------------------------------------------------------

def project(w, coned):
    """Replace each maximal parabolic subword of the path ``w`` by a cone detour."""
    group = coned.group
    spec = coned.spec
    w = tuple(w)
    steps = []
    pos = ()
    i = 0
    while i < len(w):
        k = spec.parabolic_of_letter(w[i])
        if k < 0:
            nxt = group.key(pos + (w[i],))
            steps.append(Edge(pos, w[i], nxt))
            pos = nxt
            i += 1
            continue
        j = i
        codes = coned._parabolic_codes[k]
        while j < len(w) and w[j] in codes:
            j += 1
        label = w[i:j]
        nxt = group.key(pos + label)
        steps.append(Detour(k, coned.coset_key(pos, k), pos, nxt, label, group.length(label)))
        pos = nxt
        i = j
    return HatPath((), tuple(steps))


def gamma_path(w, coned):
    """The Γ-path of ``w`` embedded in Γ̂ edge by edge, without cone shortcuts."""
    group = coned.group
    steps = []
    pos = ()
    for x in w:
        nxt = group.key(pos + (x,))
        steps.append(Edge(pos, x, nxt))
        pos = nxt
    return HatPath((), tuple(steps))


def relative_distance(coned, g, h=None):
    """Γ̂-distance in halves from 1 (or ``h``) to ``g``.

    The metric is left-invariant, so ``d(h, g)`` is read off as ``d(1, h^-1 g)``
    from a single search rooted at the identity.
    """
    if coned._from_identity is None:
        coned._from_identity = coned.distances_from(())
    x = coned.group.key(tuple(g) if h is None else invert(tuple(h)) + tuple(g))
    if len(x) > coned.ball.radius:
        raise RadiusExceeded(f"element of length {len(x)} lies outside the coned ball")
    node = coned.ball.locate(x)
    if node not in coned._from_identity:
        raise RadiusExceeded("element unreachable inside the coned ball")
    return coned._from_identity[node]


def relative_geodesic(x, coned, constants=None):
    """Shortlex-least word of minimal Γ-length among relative geodesics for ``x``."""
    if constants is not None:
        coned.constants = constants
    return coned.relative_geodesic(x)


def penetration_trace(p):
    return [PenetrationRecord(d.parabolic, d.coset, d.entry, d.exit, d.travel) for d in p.detours()]


def backtracks(p):
    seen = set()
    for d in p.detours():
        if d.coset_id in seen:
            return True
        seen.add(d.coset_id)
    return False


def has_self_intersection(p):
    verts = [v for v, _ in p.vertices()]
    return len(set(verts)) != len(verts)


def is_relative_quasigeodesic(p, P, coned):
    """Two-sided quasi-geodesic inequality on every pair of element vertices.

    Paths with a repeated Γ̂-vertex (cone vertices included) are rejected.
    """
    if has_self_intersection(p):
        return False
    P = Fraction(P)
    group = coned.group
    pts = [(v[1], pos) for v, pos in p.vertices() if v[0] == "g"]
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            (x, px), (y, py) = pts[a], pts[b]
            arc = py - px
            d = 2 * coned.relative_length(group.key(invert(x) + y))
            if not (d <= P * arc and arc <= P * d):
                return False
    return True


def closed_path_backtracks_to(w_cycle, coset):
    """Whether a closed path backtracks to ``coset`` (a ``(parabolic, key)`` pair).

    False iff the cycle splits at two vertices into an arc that penetrates
    the coset without backtracking and a complementary arc avoiding it.
    A coset the cycle never penetrates is not backtracked to.
    """
    steps = list(w_cycle.steps)
    n = len(steps)
    if not any(isinstance(s, Detour) and s.coset_id == coset for s in steps):
        return False
    for i in range(n):
        for length in range(1, n + 1):
            arc = [steps[(i + k) % n] for k in range(length)]
            rest = [steps[(i + k) % n] for k in range(length, n)]
            arc_cosets = [s.coset_id for s in arc if isinstance(s, Detour)]
            if coset not in arc_cosets or len(set(arc_cosets)) != len(arc_cosets):
                continue
            if any(isinstance(s, Detour) and s.coset_id == coset for s in rest):
                continue
            return False
    return True
