"""Decision procedure for conjugacy relative to parabolic subgroups.

Convention throughout: a conjugator ``g`` for the pair ``(u, v)`` satisfies
``u = g v g^-1`` in the group.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .cayley import Group
from .coned import ConedBall, project
from .constants import ConstantSet, census_function, conjugator_bound_lower
from .errors import BcpTableExceeded, RadiusExceeded
from .words import conjugate_by_letter, invert, shortlex_key

CONJUGATE = "conjugate"
NOT_CONJUGATE = "not_conjugate"
UNDECIDED = "undecided"

PARABOLIC_ORACLE = "parabolic_oracle"
VIA_PARABOLIC_CLASS = "via_parabolic_class"
BOUNDED_SEARCH = "bounded_search"


@dataclass
class ConjugacyCertificate:
    verdict: str
    u: tuple
    v: tuple
    conjugator: tuple | None = None
    method: str | None = None
    search_bound_used: int | None = None
    reduction_chain: list = field(default_factory=list)
    theoretical_bound: int | None = None
    theoretical_bound_exact: bool = True
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def conjugate(self):
        return self.verdict == CONJUGATE


class BruteForceParabolicOracle:
    """Conjugacy inside a parabolic, by search over its own word ball."""

    def __init__(self, group, radius=None):
        self.group = group
        self.radius = group.spec.parabolic_radius if radius is None else radius

    def conjugator(self, i, h1, h2):
        """Some ``k`` in ``H_i`` with ``h1 = k h2 k^-1``, else None."""
        key = self.group.key
        target = key(tuple(h1))
        h2 = tuple(h2)
        for _, kw in self.group.parabolic_elements(i, self.radius):
            try:
                if key(kw + h2 + invert(kw)) == target:
                    return kw
            except RadiusExceeded:
                continue
        return None


class Context:
    """Group, coned-off geometry, constants and search budgets for one group.

    ``search_radius`` is the conjugator length the state-closure search is
    guaranteed to exhaust on cyclically reduced representatives.
    ``max_radius`` caps the Γ-length of every element the procedure may
    touch; going past it makes a query undecided.
    """

    def __init__(self, spec, constants=None, search_radius=6, census_budget=None,
                 parabolic_oracle=None, partition_radius=None, hd_radius=None, max_radius=None,
                 minimize_radius=4):
        self.spec = spec
        self.minimize_radius = minimize_radius
        self.max_radius = max_radius
        self.group = Group(spec)
        self.constants = constants or ConstantSet.from_spec(spec)
        self.coned = ConedBall(self.group, constants=self.constants)
        self.search_radius = search_radius
        self.census = census_function(self.group, census_budget)
        self.parabolic_oracle = parabolic_oracle or BruteForceParabolicOracle(self.group)
        self.partition_radius = partition_radius
        self.hd_radius = hd_radius
        self._normal = {}
        self._membership = {}
        self._into = {}
        self._closures = {}
        self._partitions = {}
        self._bounds = {}

    @property
    def n_parabolics(self):
        return len(self.spec.parabolics)

    def key(self, w):
        k = self.group.key(tuple(w))
        if self.max_radius is not None and len(k) > self.max_radius:
            raise RadiusExceeded(f"element of length {len(k)} exceeds the budget {self.max_radius}")
        return k

    @property
    def word_radius(self):
        """Largest Γ-length the word problem answers for, None if unbounded."""
        r = None if self.group.free else self.group.radius
        if self.max_radius is not None:
            r = self.max_radius if r is None else min(r, self.max_radius)
        return r

    def verify(self, u, v, g):
        return self.group.is_trivial(tuple(u) + tuple(g) + invert(tuple(v)) + invert(tuple(g)))

    def relative_length(self, w):
        return self.coned.relative_length(w)

    def bound(self, u, v):
        """``(B, exact)`` for the pair; a lower bound when the census overflows."""
        Q = max(self.group.length(u), self.group.length(v))
        Qhat = max(self.relative_length(u), self.relative_length(v))
        if (Q, Qhat) not in self._bounds:
            cs = self.constants.with_lengths(Q, Qhat, 2 * Qhat)
            self._bounds[(Q, Qhat)] = conjugator_bound_lower(cs, self.census)
        return self._bounds[(Q, Qhat)]

    def lhg(self, u, v):
        Q = max(self.group.length(u), self.group.length(v))
        return self.constants.with_lengths(Q, 0).lHg


def _parabolic_index(which, ctx):
    if isinstance(which, int):
        return which
    return list(ctx.spec.parabolics).index(which)


def parabolic_of(u, ctx):
    """Index ``i`` with ``u`` in ``H_i``; -1 for the identity; None otherwise."""
    k = ctx.key(u)
    if k in ctx._membership:
        return ctx._membership[k]
    rg = ctx.coned.relative_geodesic(k)
    if not rg:
        out = -1
    else:
        i = ctx.spec.parabolic_of_letter(rg[0])
        codes = ctx.spec.parabolics[i].letter_codes() if i >= 0 else ()
        out = i if i >= 0 and all(x in codes for x in rg) else None
    ctx._membership[k] = out
    return out


def in_parabolic(u, which, ctx):
    """Whether ``u`` lies in the given parabolic (index or ParabolicSpec)."""
    i = parabolic_of(u, ctx)
    return i == -1 or i == _parabolic_index(which, ctx)


def cyclic_normal_form(u, ctx):
    """``(core, c)`` with ``u = c core c^-1`` and core of least relative length.

    Alternates rotation of the relative geodesic label with recomputation of
    the relative geodesic until no rotation lowers (relative length,
    Γ-length, shortlex).
    """
    k = ctx.key(u)
    if k in ctx._normal:
        return ctx._normal[k]
    coned = ctx.coned

    def score(w):
        return (coned.relative_length(w), len(w), w)

    w = coned.relative_geodesic(k)
    conj = ()
    while True:
        best, shift = score(w), None
        for i in range(1, len(w)):
            cand = coned.relative_geodesic(w[i:] + w[:i])
            s = score(cand)
            if s < best:
                best, shift = s, i
        if shift is None:
            break
        conj = conj + w[:shift]
        w = best[2]
    ctx._normal[k] = (w, conj)
    return w, conj


# -- searches ----------------------------------------------------------------

def bounded_conjugator_search(u, v, B, ctx):
    """Shortlex-least ``g`` with ``l(g) <= B`` and ``u = g v g^-1``, else None.

    Enumerates the Cayley ball of radius ``B`` literally.
    """
    if B > ctx.group.radius:
        raise RadiusExceeded(f"search bound {B} exceeds the buildable ball")
    key = ctx.key
    target = key(u)
    v = tuple(v)
    for g in ctx.group.ball(B).elements:
        try:
            if key(g + v + invert(g)) == target:
                return g
        except RadiusExceeded:
            if ctx.verify(u, v, g):
                return g
    return None


@dataclass
class Closure:
    """Conjugates ``g v g^-1`` reachable through conjugates of length <= cap."""

    v: tuple
    cap: int
    conjugators: dict
    complete: bool

    @property
    def exhausted_radius(self):
        """Every conjugator of length <= this value is covered."""
        return max(0, (self.cap - len(self.v)) // 2)


def conjugacy_closure(v, cap, ctx):
    v = ctx.key(v)
    if (v, cap) in ctx._closures:
        return ctx._closures[(v, cap)]
    key = ctx.key
    seen = {v: ()}
    queue = deque([v])
    complete = True
    free = ctx.group.free
    while queue:
        x = queue.popleft()
        g = seen[x]
        for y in range(ctx.group.L):
            try:
                x2 = conjugate_by_letter(y, x) if free else key((y,) + x + (y ^ 1,))
            except RadiusExceeded:
                complete = False
                continue
            if len(x2) <= cap and x2 not in seen:
                seen[x2] = (y,) + g
                queue.append(x2)
    out = Closure(v, cap, seen, complete)
    ctx._closures[(v, cap)] = out
    return out


def closure_search(u, v, radius, ctx):
    """Conjugator for ``(u, v)`` found inside the closure of ``v``.

    Returns ``(g or None, exhausted_radius)``; the search covers every
    conjugator of Γ-length <= ``radius``.
    """
    v = ctx.key(v)
    c = conjugacy_closure(v, len(v) + 2 * radius, ctx)
    if not c.complete:
        raise RadiusExceeded("conjugacy closure reached the edge of the word problem")
    g = c.conjugators.get(ctx.key(u))
    return (None if g is None else ctx.key(g)), c.exhausted_radius


def _closure_radius(v, ctx, radius=None):
    """Closure radius for ``v``; raises if the word problem cannot support it."""
    r = ctx.search_radius if radius is None else radius
    limit = ctx.word_radius
    if limit is not None and len(ctx.key(v)) + 2 * r + 2 > limit:
        raise RadiusExceeded(f"a conjugacy search of radius {r} needs word lengths beyond {limit}")
    return r


# -- parabolic reductions ----------------------------------------------------

def conjugate_into_parabolic(u, ctx):
    """``(k, g)`` with ``k`` in some parabolic and ``u = g k g^-1``, or None.

    After cyclic normalization a core already in a parabolic is returned
    directly.  Otherwise nontrivial parabolic elements of Γ-length at most
    ``C0`` are tried against the core by closure search.
    """
    k0 = ctx.key(u)
    if k0 in ctx._into:
        return ctx._into[k0][0]
    core, c = cyclic_normal_form(k0, ctx)
    if parabolic_of(core, ctx) is not None:
        out, radius = (core, c), 0
    else:
        out = None
        C0 = ctx.constants.with_lengths(len(core), ctx.relative_length(core)).C0
        radius = _closure_radius(core, ctx)
        for i in range(ctx.n_parabolics):
            for kk, _ in ctx.group.parabolic_elements(i, ctx.spec.parabolic_radius):
                if not kk or len(kk) > C0:
                    continue
                g, _ = closure_search(core, kk, radius, ctx)
                if g is not None:
                    out = (kk, ctx.key(c + g))
                    break
            if out:
                break
    ctx._into[k0] = (out, radius)
    return out


@dataclass
class HdPartition:
    d: int
    classes: list
    witnesses: list
    radius: int
    _edges: dict = field(default_factory=dict, repr=False)

    def class_of(self, h):
        for n, cl in enumerate(self.classes):
            if h in cl:
                return n
        return None

    def members(self):
        return sorted((h for cl in self.classes for h in cl), key=shortlex_key)

    def link(self, a, b):
        """``g`` with ``b = g a g^-1`` composed along merge witnesses."""
        prev = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for y, g in self._edges.get(x, ()):
                if y not in prev:
                    prev[y] = (x, g)
                    queue.append(y)
        if b not in prev:
            return None
        out = ()
        x = b
        while prev[x] is not None:
            x, g = prev[x]
            out = out + g
        return out


def partition_Hd(d, ctx, radius=None):
    """Partition of ``H_d`` (parabolic elements of Γ-length <= d) into G-classes.

    Starts from conjugacy classes inside each parabolic and merges classes
    linked by ``g k g^-1 = k'`` with ``k, k'`` in ``H_d`` and ``g`` outside
    the parabolics, ``l(g) <= radius``, until nothing changes.
    """
    if radius is None:
        radius = ctx.partition_radius
    if radius is None:
        radius = min(ctx.search_radius, ctx.group.radius // 2)
    cache = (d, radius)
    if cache in ctx._partitions:
        return ctx._partitions[cache]
    group, key = ctx.group, ctx.key
    members = {(): -1}
    for i in range(ctx.n_parabolics):
        for kk, _ in group.parabolic_elements(i, ctx.spec.parabolic_radius):
            if kk and len(kk) <= d:
                members[kk] = i
    order = sorted(members, key=shortlex_key)
    edges = {h: [] for h in order}
    witnesses = []

    def link(a, g, b):
        edges[a].append((b, g))
        edges[b].append((a, invert(g)))

    for a in order:
        for b in order:
            if shortlex_key(a) < shortlex_key(b) and members[a] == members[b] >= 0:
                k = ctx.parabolic_oracle.conjugator(members[a], b, a)
                if k is not None:
                    link(a, k, b)
    for a in order:
        for g in group.ball(radius).elements:
            if parabolic_of(g, ctx) is not None:
                continue
            try:
                b = key(g + a + invert(g))
            except RadiusExceeded:
                continue
            if b in members and b != a:
                link(a, g, b)
                witnesses.append((a, g, b))
    classes, seen = [], set()
    for h in order:
        if h in seen:
            continue
        comp, queue = [], deque([h])
        seen.add(h)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y, _ in edges[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        classes.append(tuple(sorted(comp, key=shortlex_key)))
    out = HdPartition(d, classes, witnesses, radius, edges)
    ctx._partitions[cache] = out
    return out


def _hd_radius(ctx):
    if ctx.hd_radius is not None:
        return ctx.hd_radius
    return ctx.constants.bcp_constant(2)


def parabolic_conjugator_in_G(hu, hv, ctx):
    """``(g, chain)`` with ``hu = g hv g^-1`` for parabolic elements, or None."""
    i, j = parabolic_of(hu, ctx), parabolic_of(hv, ctx)
    if i is None or j is None:
        raise ValueError("both elements must lie in a parabolic")
    if i == -1 or j == -1:
        return ((), []) if i == j else None
    if i != j:
        return None
    k = ctx.parabolic_oracle.conjugator(i, hu, hv)
    if k is not None:
        return k, [("parabolic", ctx.key(hv), k)]
    part = partition_Hd(_hd_radius(ctx), ctx)
    oracle = ctx.parabolic_oracle
    reps_u = [(h, oracle.conjugator(i, h, hu)) for h in part.members() if h and parabolic_of(h, ctx) == i]
    reps_v = [(h, oracle.conjugator(i, h, hv)) for h in part.members() if h and parabolic_of(h, ctx) == i]
    for ku, x in reps_u:
        if x is None:
            continue
        for kv, y in reps_v:
            if y is None or part.class_of(ku) != part.class_of(kv):
                continue
            z = part.link(kv, ku)
            g = ctx.key(invert(x) + z + y)
            return g, [("parabolic", ctx.key(hv), y), ("partition", kv, z), ("parabolic", ku, invert(x))]
    return None


def parabolic_conjugate_in_G(hu, hv, ctx):
    return parabolic_conjugator_in_G(hu, hv, ctx) is not None


# -- decision ----------------------------------------------------------------

def decide_conjugate(u, v, ctx):
    """Certificate for whether ``u`` and ``v`` are conjugate.

    Scale limits surface as the ``undecided`` verdict, never as a wrong one.
    """
    t0 = time.perf_counter()
    u, v = tuple(u), tuple(v)
    cert = ConjugacyCertificate(UNDECIDED, u, v)
    try:
        _decide(u, v, ctx, cert)
    except (RadiusExceeded, BcpTableExceeded) as exc:
        cert.verdict, cert.conjugator, cert.reason = UNDECIDED, None, str(exc)
    if cert.verdict == CONJUGATE:
        try:
            ok = ctx.verify(u, v, cert.conjugator)
        except RadiusExceeded:
            ok = False
        if not ok:
            cert.verdict, cert.reason = UNDECIDED, "conjugator failed verification"
            cert.conjugator = None
        else:
            cert.conjugator = _shortest_conjugator(u, v, cert.conjugator, ctx)
    cert.stats["wall_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    cert.stats["ball_radius"] = ctx.group.radius
    return cert


def _shortest_conjugator(u, v, g, ctx):
    """Replace a short verified conjugator by the shortlex-least minimal one."""
    n = len(g)
    if n == 0 or n > ctx.minimize_radius or n > ctx.group.radius:
        return g
    try:
        best = bounded_conjugator_search(u, v, n, ctx)
    except RadiusExceeded:
        return g
    return g if best is None else best


def _decide(u, v, ctx, cert):
    key = ctx.key
    if key(u) == key(v):
        cert.verdict, cert.conjugator, cert.method, cert.search_bound_used = CONJUGATE, (), BOUNDED_SEARCH, 0
        return
    iu, iv = parabolic_of(u, ctx), parabolic_of(v, ctx)

    def finish_parabolic(hu, gu, hv, gv, method):
        # u = gu hu gu^-1, v = gv hv gv^-1
        r = parabolic_conjugator_in_G(hu, hv, ctx)
        cert.method = method
        cert.search_bound_used = ctx.parabolic_oracle.radius
        if r is None:
            cert.verdict = NOT_CONJUGATE
            return
        g, chain = r
        cert.reduction_chain.extend(chain)
        cert.verdict = CONJUGATE
        cert.conjugator = key(gu + g + invert(gv))

    if iu is not None and iv is not None:
        return finish_parabolic(key(u), (), key(v), (), PARABOLIC_ORACLE)
    ru = conjugate_into_parabolic(u, ctx) if iu is None else (key(u), ())
    rv = conjugate_into_parabolic(v, ctx) if iv is None else (key(v), ())
    if ru is not None and rv is not None:
        (ku, gu), (kv, gv) = ru, rv
        cert.reduction_chain.append(("into_parabolic", ku, gu))
        cert.reduction_chain.append(("into_parabolic", kv, gv))
        return finish_parabolic(ku, gu, kv, gv, VIA_PARABOLIC_CLASS)
    if ru is not None or rv is not None:
        cert.verdict, cert.method = NOT_CONJUGATE, VIA_PARABOLIC_CLASS
        other = u if ru is None else v
        cert.search_bound_used = ctx._into[key(other)][1]
        return
    uc, cu = cyclic_normal_form(u, ctx)
    vc, cv = cyclic_normal_form(v, ctx)
    cert.reduction_chain.append(("cyclic", uc, cu))
    cert.reduction_chain.append(("cyclic", vc, cv))
    B, exact = ctx.bound(uc, vc)
    cert.theoretical_bound, cert.theoretical_bound_exact = B, exact
    # the core search reaches conjugators hidden behind long cyclic prefixes;
    # the search on the pair itself certifies the radius reported for (u, v)
    radius = _closure_radius(vc, ctx)
    g, exhausted = closure_search(uc, vc, radius, ctx)
    cert.method = BOUNDED_SEARCH
    cert.stats["core_search_radius"] = exhausted
    cert.stats["pairs_enumerated"] = len(conjugacy_closure(vc, len(key(vc)) + 2 * radius, ctx).conjugators)
    if g is not None:
        cert.verdict = CONJUGATE
        cert.conjugator = key(cu + g + invert(cv))
        cert.search_bound_used = exhausted
        return
    shift = ctx.group.length(cu) + ctx.group.length(cv)
    covered = exhausted - shift
    if shift:
        try:
            g, direct = closure_search(key(u), key(v), _closure_radius(key(v), ctx), ctx)
        except RadiusExceeded:
            g, direct = None, 0
        if g is not None:
            cert.verdict, cert.conjugator, cert.search_bound_used = CONJUGATE, g, direct
            return
        covered = max(covered, direct)
    cert.verdict = NOT_CONJUGATE
    cert.search_bound_used = max(0, covered)


def penetration_violations(u, v, g, ctx):
    """Coset visits of the conjugator's relative geodesic exceeding ``lHg``."""
    limit = ctx.lhg(u, v)
    p = project(ctx.coned.relative_geodesic(g), ctx.coned)
    return [d for d in p.detours() if d.travel > limit]


# -- cascades ----------------------------------------------------------------

@dataclass
class CascadeReport:
    n: int
    h_words: list
    k_words: list
    c_words: list
    floors: list
    bound: Fraction | None = None
    bound_ok: bool | None = None


def detect_cascade(p_trace, q_trace, group=None, constants=None):
    """Longest run where ``p``'s i-th visit and ``q``'s (i+1)-th share a coset.

    Diagnostic only.  When a group is given the gluing words are computed,
    and with constants the growth bound on the visited H-subwords is checked.
    """
    best = (0, 0)
    for j in range(len(p_trace)):
        n = 0
        while j + n < len(p_trace) and j + n + 1 < len(q_trace) and \
                p_trace[j + n].coset_id == q_trace[j + n + 1].coset_id:
            n += 1
        if n > best[0]:
            best = (n, j)
    n, j = best
    if n < 1:
        return None
    ps = p_trace[j:j + n]
    qs = q_trace[j + 1:j + n + 1]

    def word(a, b):
        return group.key(invert(a) + b) if group is not None else None

    h_words = [word(r.entry, r.exit) for r in ps] + [word(qs[-1].entry, qs[-1].exit)]
    k_words = [word(a.entry, b.entry) for a, b in zip(ps, qs)]
    c_words = [word(a.exit, b.exit) for a, b in zip(ps, qs)]
    floors = []
    for i, r in enumerate(ps):
        floors.append(("H", r.coset_id))
        if i < n - 1:
            floors.append(("G", (r.exit, ps[i + 1].entry)))
    report = CascadeReport(n, h_words, k_words, c_words, floors)
    if constants is not None:
        travels = [r.gamma_travel for r in ps] + [qs[-1].gamma_travel]
        report.bound = travels[0] + 2 * constants.C0 + 2 * constants.bcp_constant(2)
        report.bound_ok = all(t <= report.bound for t in travels)
    return report
