"""Finite pieces of the Cayley graph and the word problem behind them.

Elements are identified by their canonical representative: the
shortlex-least geodesic word.  For relator-free specs this is the freely
reduced word.  Otherwise the Cayley graph is folded out of the tree of words
by coset enumeration (Hopcroft style scan-and-fill with the depth of defined
vertices capped), and canonical words are read off a breadth-first search of
the folded graph.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .errors import BackendFailure, RadiusExceeded
from .words import cyclic_permutations, cyclic_reduce, free_reduce, invert, is_cyclically_reduced


# -- Dehn rewriting ---------------------------------------------------------

def _cyclic_relators(relators):
    out = set()
    for r in relators:
        core, _ = cyclic_reduce(r)
        if not core:
            continue
        for c in (core, invert(core)):
            out.update(cyclic_permutations(c))
    return sorted(out, key=lambda r: (len(r), r))


def dehn_reduce(w, relators):
    """Greedy Dehn algorithm.

    Repeatedly replaces a subword that is more than half of a cyclic
    conjugate of a relator by the inverse of the complementary part.  The
    output is trivial in the group iff it is empty, provided the presentation
    is a Dehn presentation.
    """
    rels = _cyclic_relators(relators)
    w = list(free_reduce(w))
    changed = True
    while changed:
        changed = False
        for r in rels:
            n = len(r)
            k = n // 2 + 1
            piece, rest = r[:k], r[k:]
            for i in range(len(w) - k + 1):
                if tuple(w[i:i + k]) == piece:
                    w[i:i + k] = list(invert(rest))
                    w = list(free_reduce(w))
                    changed = True
                    break
            if changed:
                break
    return tuple(w)


# -- folding ----------------------------------------------------------------

class FoldedGraph:
    """Cayley graph of a finitely presented group, folded up to a depth cap.

    Every identification made is a consequence of the relators, so distinct
    canonical words may only fail to be merged near the depth cap.
    """

    def __init__(self, n_letters, relators, depth_cap, max_vertices=2_000_000):
        self.L = n_letters
        self.N = depth_cap
        self.max_vertices = max_vertices
        self.rels = _cyclic_relators(relators)
        self.table = [[-1] * n_letters]
        self.depth = [0]
        self.parent = [0]
        self._enumerate()
        self._settle()
        self._index()
        # definition depth can exceed true distance; refill until every
        # vertex closer than the cap has all its edges
        while any(d < self.N and -1 in self.table[v] for v, d in self.dist.items()):
            for v, d in self.dist.items():
                self.depth[v] = d
            self._enumerate()
            self._settle()
            self._index()

    def find(self, v):
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def _define(self, v, x):
        if len(self.table) >= self.max_vertices:
            raise RadiusExceeded("folded Cayley graph exceeds the vertex budget")
        w = len(self.table)
        self.table.append([-1] * self.L)
        self.depth.append(self.depth[v] + 1)
        self.parent.append(w)
        self.table[v][x] = w
        self.table[w][x ^ 1] = v

    def _coincidence(self, a, b):
        table, find = self.table, self.find
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            self.parent[b] = a
            self.depth[a] = min(self.depth[a], self.depth[b])
            for x in range(self.L):
                w = table[b][x]
                if w < 0:
                    continue
                w = find(w)
                ta = table[a][x]
                if ta < 0:
                    table[a][x] = w
                else:
                    ta = find(ta)
                    if ta != w:
                        queue.append((ta, w))

    def _scan(self, v, r, fill):
        """Scan relator ``r`` at ``v``; returns True if the graph changed."""
        table, find = self.table, self.find
        n = len(r)
        changed = False
        while True:
            v = find(v)
            f, i = v, 0
            while i < n:
                t = table[f][r[i]]
                if t < 0:
                    break
                f = find(t)
                i += 1
            if i == n:
                if f != v:
                    self._coincidence(f, v)
                    return True
                return changed
            b, j = v, n - 1
            while j >= i:
                t = table[b][r[j] ^ 1]
                if t < 0:
                    break
                b = find(t)
                j -= 1
            if j < i:
                if f != b:
                    self._coincidence(f, b)
                    return True
                return changed
            if j == i:
                table[f][r[i]] = b
                table[b][r[i] ^ 1] = f
                return True
            if not fill or self.depth[f] >= self.N:
                return changed
            self._define(f, r[i])
            changed = True

    def _enumerate(self):
        v = 0
        while v < len(self.table):
            if self.find(v) == v:
                for r in self.rels:
                    self._scan(v, r, True)
                    if self.find(v) != v:
                        break
                if self.find(v) == v and self.depth[v] < self.N:
                    for x in range(self.L):
                        if self.table[v][x] < 0:
                            self._define(v, x)
            v += 1

    def _settle(self):
        changed = True
        while changed:
            changed = False
            for v in range(len(self.table)):
                if self.find(v) != v:
                    continue
                for r in self.rels:
                    if self._scan(v, r, False):
                        changed = True
                    if self.find(v) != v:
                        break

    def _index(self):
        """Breadth-first search from the identity in shortlex order."""
        root = self.find(0)
        self.dist = {root: 0}
        self.rep = {root: ()}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for x in range(self.L):
                t = self.table[v][x]
                if t < 0:
                    continue
                t = self.find(t)
                if t not in self.dist:
                    self.dist[t] = self.dist[v] + 1
                    self.rep[t] = self.rep[v] + (x,)
                    queue.append(t)
        self.root = root

    def trace(self, w):
        v = self.root
        for x in w:
            t = self.table[v][x]
            if t < 0:
                return None
            v = self.find(t)
        return v


# -- group context ----------------------------------------------------------

class Group:
    """Runtime context for a :class:`GroupSpec`: element keys and lengths.

    ``key(w)`` is the canonical word of the element ``w`` represents.  Keys
    are hashable tuples, so elements can be stored in sets and dicts.
    """

    def __init__(self, spec, margin=None):
        self.spec = spec
        self.L = spec.n_letters
        self.free = not any(free_reduce(r) for r in spec.relators)
        self._balls = {}
        self._graph = None
        if not self.free:
            if margin is None:
                margin = max(len(r) for r in spec.relators)
            self._graph = FoldedGraph(self.L, spec.relators, spec.max_ball_radius + margin)
        self.key = lru_cache(maxsize=1 << 18)(self._key)

    @property
    def radius(self):
        """Largest radius at which keys are available."""
        return self.spec.max_ball_radius

    def _key(self, w):
        w = free_reduce(w)
        if self.free:
            return w
        if self.spec.word_problem_backend == "dehn-rewriting":
            w = dehn_reduce(w, self.spec.relators)
        g = self._graph
        v = g.trace(w)
        if v is None or g.dist.get(v, self.radius + 1) > self.radius:
            raise RadiusExceeded(f"word of length {len(w)} leaves the ball of radius {self.radius}")
        return g.rep[v]

    def canonical(self, w):
        return self.key(tuple(w))

    def length(self, w):
        return len(self.key(tuple(w)))

    def mul(self, *words):
        out = ()
        for w in words:
            out += tuple(w)
        return self.key(out)

    def is_trivial(self, w):
        w = tuple(w)
        if self.free:
            return not free_reduce(w)
        if self.spec.word_problem_backend == "dehn-rewriting":
            return not dehn_reduce(w, self.spec.relators)
        return self.key(w) == ()

    def equal(self, u, v):
        return self.is_trivial(tuple(u) + invert(v))

    def is_involution_letter(self, code):
        return self.key((code,)) == self.key((code ^ 1,))

    def ball(self, radius):
        if radius not in self._balls:
            self._balls[radius] = build_ball(self, radius)
        return self._balls[radius]

    def parabolic_elements(self, index, radius):
        """Elements of the ``index``-th parabolic with subgroup length <= radius.

        Returns ``[(key, subgroup_geodesic_word), ...]`` in shortlex order of
        the subgroup words; each element appears once.
        """
        return _parabolic_elements(self, index, radius)


@lru_cache(maxsize=None)
def _parabolic_elements_cached(group, index, radius):
    codes = sorted(group.spec.parabolics[index].letter_codes())
    seen = {(): ()}
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for h in frontier:
            for x in codes:
                w = h + (x,)
                try:
                    k = group.key(w)
                except RadiusExceeded:
                    continue
                if k not in seen:
                    seen[k] = w
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    return [(k, w) for k, w in sorted(seen.items(), key=lambda kv: (len(kv[1]), kv[1]))]


def _parabolic_elements(group, index, radius):
    return _parabolic_elements_cached(group, index, radius)


# -- balls ------------------------------------------------------------------

class Ball:
    """All elements of Γ-length <= radius with their Cayley-graph edges.

    ``elements`` lists canonical words in shortlex order; ``adjacency[i][x]``
    is the index of ``elements[i] . x`` or -1 when that lies outside.
    """

    def __init__(self, group, radius, elements):
        self.group = group
        self.spec = group.spec
        self.radius = radius
        self.elements = elements
        self.index = {w: i for i, w in enumerate(elements)}
        L = group.L
        adjacency = []
        for w in elements:
            row = []
            for x in range(L):
                if group.free:
                    nb = w[:-1] if w and w[-1] == x ^ 1 else w + (x,)
                    row.append(self.index.get(nb, -1))
                else:
                    try:
                        row.append(self.index.get(group.key(w + (x,)), -1))
                    except RadiusExceeded:
                        row.append(-1)
            adjacency.append(row)
        self.adjacency = adjacency
        self.certified = group.free or group.spec.word_problem_backend == "dehn-rewriting"

    def __len__(self):
        return len(self.elements)

    def depth(self, i):
        return len(self.elements[i])

    def locate(self, w):
        """Index of the element ``w`` represents."""
        try:
            k = self.group.key(tuple(w))
        except RadiusExceeded:
            k = None
        if k is None or k not in self.index:
            raise RadiusExceeded(f"element is outside the ball of radius {self.radius}")
        return self.index[k]

    def contains(self, w):
        try:
            self.locate(w)
        except RadiusExceeded:
            return False
        return True


def build_ball(spec_or_group, radius):
    group = spec_or_group if isinstance(spec_or_group, Group) else Group(spec_or_group)
    if radius > group.spec.max_ball_radius:
        raise RadiusExceeded(f"radius {radius} exceeds max_ball_radius {group.spec.max_ball_radius}")
    if group.free:
        elements = [()]
        layer = [()]
        for _ in range(radius):
            nxt = []
            for w in layer:
                for x in range(group.L):
                    if not w or w[-1] != x ^ 1:
                        nxt.append(w + (x,))
            elements.extend(nxt)
            layer = nxt
    else:
        g = group._graph
        reps = [g.rep[v] for v in g.rep if g.dist[v] <= radius]
        elements = sorted(reps, key=lambda w: (len(w), w))
    return Ball(group, radius, elements)


def ball_size(ball):
    return len(ball)


def gamma_distance_certified(ball, g, h):
    """Distance in Γ restricted to the ball, and whether it is the true d_Γ."""
    a, b = ball.locate(g), ball.locate(h)
    if a == b:
        return 0, True
    dist = {a: 0}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for t in ball.adjacency[v]:
            if t >= 0 and t not in dist:
                dist[t] = dist[v] + 1
                if t == b:
                    d = dist[t]
                    return d, min(ball.depth(a), ball.depth(b)) + d <= ball.radius
                queue.append(t)
    raise RadiusExceeded("endpoints are not connected inside the ball")


def gamma_distance(ball, g, h):
    return gamma_distance_certified(ball, g, h)[0]


def enumerate_geodesics(ball, g):
    """All Γ-geodesic words from 1 to ``g`` in shortlex order.

    The inverse letter of an involutive generator labels the same edge as the
    generator itself, so only the generator letter is reported for it.
    """
    target = ball.locate(g)
    group = ball.group
    skip = {x for x in range(group.L) if x & 1 and group.is_involution_letter(x)}
    adjacency = ball.adjacency

    @lru_cache(maxsize=None)
    def words_to(v):
        d = ball.depth(v)
        if d == 0:
            return [()]
        out = []
        for x in range(group.L):
            if x in skip:
                continue
            u = adjacency[v][x ^ 1]
            if u >= 0 and ball.depth(u) == d - 1 and adjacency[u][x] == v:
                out.extend(p + (x,) for p in words_to(u))
        return out

    return sorted(set(words_to(target)))


class CosetTable:
    """Left cosets of one parabolic, as seen inside a ball.

    Two ball elements share a coset id iff they are joined inside the ball by
    a path of parabolic-generator edges.  ``boundary[cid]`` flags cosets with
    a member on the sphere of the ball, where the identification may be
    incomplete.
    """

    def __init__(self, ball, parabolic_index):
        self.ball = ball
        self.parabolic_index = parabolic_index
        self.parabolic = ball.spec.parabolics[parabolic_index]
        codes = sorted(self.parabolic.letter_codes())
        n = len(ball)
        coset_of = [-1] * n
        boundary = {}
        for start in range(n):
            if coset_of[start] >= 0:
                continue
            cid = start
            coset_of[start] = cid
            queue = deque([start])
            touches = False
            while queue:
                v = queue.popleft()
                if ball.depth(v) == ball.radius:
                    touches = True
                for x in codes:
                    t = ball.adjacency[v][x]
                    if t >= 0 and coset_of[t] < 0:
                        coset_of[t] = cid
                        queue.append(t)
            boundary[cid] = touches
        self.coset_of = coset_of
        self.boundary = boundary

    def coset_rep(self, cid):
        return self.ball.elements[cid]

    def members(self, cid):
        return [i for i, c in enumerate(self.coset_of) if c == cid]


def coset_id(table, g):
    return table.coset_of[table.ball.locate(g)]


def is_geodesic_word(group, w):
    return len(w) == group.length(w)


__all__ = [
    "Ball", "BackendFailure", "CosetTable", "FoldedGraph", "Group", "build_ball", "coset_id",
    "dehn_reduce", "enumerate_geodesics", "gamma_distance", "gamma_distance_certified",
    "is_cyclically_reduced", "is_geodesic_word",
]
