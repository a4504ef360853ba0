"""Constant algebra: BCP constants, stability, derived bounds, manifold formulas.

Every constant used by the decision procedure is a deterministic function of
a :class:`ConstantSet`.  Estimators return lower-bound probes together with
the scope they were measured on; they never claim global validity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import BcpTableExceeded, CensusOverflow, RadiusExceeded, ValidationError
from .words import invert

DEFAULT_STABILITY = {"alpha": 1, "beta": 1, "gamma": 0}


def _ceil(x):
    return math.ceil(Fraction(x))


@dataclass(frozen=True)
class ConstantSet:
    """δ, the c(P) table and the word lengths the derived bounds depend on.

    ``Q`` is the larger Γ-length of the two inputs, ``Qhat`` the larger
    relative length and ``L_rel`` the relative length of the closed path
    built from them.  The stability function is
    ``N(P) = alpha * P^2 * (8 delta + 2) + beta * P + gamma``.
    """

    delta: Fraction = Fraction(0)
    bcp_table: tuple = ()
    bcp_tail: int | None = None
    stability: dict = field(default_factory=lambda: dict(DEFAULT_STABILITY), hash=False, compare=False)
    Q: int = 0
    Qhat: int = 0
    L_rel: int = 0
    provenance: str = "table"

    def __post_init__(self):
        table = tuple(sorted((Fraction(p), int(c)) for p, c in dict(self.bcp_table).items()))
        for (_, c1), (_, c2) in zip(table, table[1:]):
            if c2 < c1:
                raise ValidationError("bcp_table must be nondecreasing in P")
        if self.delta < 0:
            raise ValidationError("delta must be non-negative")
        stab = dict(DEFAULT_STABILITY)
        stab.update(self.stability or {})
        object.__setattr__(self, "bcp_table", table)
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "stability", {k: Fraction(v) for k, v in stab.items()})

    @classmethod
    def from_spec(cls, spec, **lengths):
        return cls(spec.delta, spec.bcp_table, spec.bcp_tail, spec.stability or {}, **lengths)

    def with_lengths(self, Q, Qhat, L_rel=0):
        return replace(self, Q=Q, Qhat=Qhat, L_rel=L_rel, stability=dict(self.stability))

    # accessors mirror the module-level functions
    def bcp_constant(self, P):
        return bcp_constant(self, P)

    def N(self, P):
        return stability_N(self, P)

    @property
    def C(self):
        return bcp_constant(self, self.L_rel)

    @property
    def C0(self):
        return bcp_constant(self, 7 * self.Q)

    @property
    def D(self):
        return bcp_constant(self, 8 * self.Q)

    @property
    def K(self):
        return K_bound(self)

    @property
    def l0(self):
        return 3 * self.Qhat + 2 * self.delta

    @property
    def m(self):
        return self.l0 + 2 * self.K

    @property
    def lHg(self):
        return lHg_bound(self)


def bcp_constant(cs, P):
    """c(P): value at the least table key >= P, else the tail value."""
    P = Fraction(P)
    for key, c in cs.bcp_table:
        if key >= P:
            return c
    if cs.bcp_tail is not None:
        return max([cs.bcp_tail] + [c for _, c in cs.bcp_table])
    raise BcpTableExceeded(f"no BCP constant configured for P = {P}")


def stability_N(cs, P):
    s = cs.stability
    P = Fraction(P)
    return s["alpha"] * P * P * (8 * cs.delta + 2) + s["beta"] * P + s["gamma"]


def K_bound(cs):
    return max(Fraction(2 * cs.Qhat), stability_N(cs, 2 * cs.Qhat + 1))


def lHg_bound(cs):
    return 2 * cs.Q + 10 * bcp_constant(cs, 8 * cs.Q)


class BoundBreakdown(NamedTuple):
    K: Fraction
    m: Fraction
    lHg: int
    G_max: int
    census: int
    B_rel: int
    B: int


def conjugator_bound_breakdown(cs, ball_census):
    K = K_bound(cs)
    l0 = 3 * cs.Qhat + 2 * cs.delta
    m = l0 + 2 * K
    lHg = lHg_bound(cs)
    G_max = _ceil((3 * cs.Qhat + 2 * cs.delta + 2 * K) * max(1, 2 * lHg + 3 * bcp_constant(cs, 8 * m)))
    census = ball_census(G_max)
    B_rel = _ceil(2 * cs.Qhat + 2 * cs.delta + 6 * m + census)
    return BoundBreakdown(K, m, lHg, G_max, census, B_rel, B_rel * max(1, lHg))


def conjugator_bound(cs, ball_census):
    """Upper bound B on the Γ-length of a shortest conjugator.

    ``ball_census(r)`` must return the number of elements of Γ-length <= r
    or raise :class:`CensusOverflow`.
    """
    return conjugator_bound_breakdown(cs, ball_census).B


def free_census(rank, r):
    """|ball(r)| in a free group of the given rank."""
    if rank == 0 or r == 0:
        return 1
    if rank == 1:
        return 2 * r + 1
    q = 2 * rank - 1
    return 1 + 2 * rank * (q ** r - 1) // (q - 1)


def census_function(group, budget=None):
    """A census callable for :func:`conjugator_bound` over ``group``.

    Relator-free groups use the closed form.  Otherwise the census is read
    from Cayley balls up to the buildable radius; beyond it the callable
    raises :class:`CensusOverflow` carrying a lower bound for the census.
    """
    spec = group.spec

    def census(r):
        if not spec.relators:
            value = free_census(len(spec.generators), r)
        elif r <= group.radius:
            value = len(group.ball(r))
        else:
            known = len(group.ball(group.radius))
            raise CensusOverflow(f"census at radius {r} exceeds desk scale", known + (r - group.radius))
        if budget is not None and value > budget:
            raise CensusOverflow(f"census at radius {r} exceeds the budget {budget}", budget)
        return value

    return census


def conjugator_bound_lower(cs, ball_census):
    """``(value, exact)``: B, or a lower bound for B when the census overflows."""
    try:
        return conjugator_bound(cs, ball_census), True
    except CensusOverflow as exc:
        lb = exc.lower_bound or 0
        return conjugator_bound(cs, lambda r: lb), False


# -- manifold formulas -------------------------------------------------------

@dataclass(frozen=True)
class ManifoldParams:
    a: float
    b: float
    delta: float
    lam: float
    P: float = 1.0

    def __post_init__(self):
        if not (0 < self.a <= self.b):
            raise ValidationError("need 0 < a <= b")
        if self.delta < 0 or self.lam < 0 or self.P <= 0:
            raise ValidationError("delta, lambda must be non-negative and P positive")


def manifold_constants(mp, log_base=math.e):
    log = (lambda x: math.log(x)) if log_base == math.e else (lambda x: math.log(x, log_base))
    V_S = 2 / mp.a + 2 * mp.delta + log(16)
    K = log(2 * mp.P * (V_S + 1)) / mp.a
    L = 4 * mp.P * K * (2 + V_S) + 8 * mp.P * mp.delta
    D = 1 + V_S
    E = 3 * mp.P * (1 + V_S) * (K + L)
    return {"V_S": V_S, "K": K, "L": L, "D": D, "E": E, "cP": mp.lam * E}


MANIFOLD_CITATIONS = {
    "V_S": "V_S = 2/a + 2 delta + log 16",
    "K": "K = (1/a) log(2 P (V_S + 1))",
    "L": "L = 4 P K (2 + V_S) + 8 P delta",
    "D": "D = 1 + V_S",
    "E": "E = 3 P (1 + V_S)(K + L)",
    "cP": "c(P) <= lambda E",
}


# -- estimators --------------------------------------------------------------

class Estimate(NamedTuple):
    value: object
    radius: int
    pairs_checked: int


def candidate_paths(coned, radius):
    """Projected Γ-paths from 1 of length <= radius, grouped by endpoint.

    A path is a freely reduced word whose maximal parabolic subwords are
    H-geodesic, so that its projection is well defined.
    """
    from .coned import project

    group = coned.group
    spec = coned.spec
    by_end = {}
    stack = [()]
    while stack:
        w = stack.pop()
        p = project(w, coned)
        by_end.setdefault(p.end, []).append(p)
        if len(w) == radius:
            continue
        for x in range(group.L):
            if w and w[-1] == x ^ 1:
                continue
            w2 = w + (x,)
            k = spec.parabolic_of_letter(x)
            if k >= 0:
                j = len(w2)
                while j > 0 and spec.parabolic_of_letter(w2[j - 1]) == k:
                    j -= 1
                run = w2[j:]
                if group.length(run) != len(run):
                    continue
            stack.append(w2)
    return by_end


def bcp_pair_quantities(p, q, group):
    """Largest BCP quantity (coset travel or entry/exit gap) witnessed by (p, q)."""
    worst = 0
    q_cosets = {d.coset_id: d for d in q.detours()}
    for d in p.detours():
        e = q_cosets.get(d.coset_id)
        if e is None:
            worst = max(worst, d.travel)
        else:
            worst = max(
                worst,
                group.length(invert(d.entry) + e.entry),
                group.length(invert(d.exit) + e.exit),
            )
    return worst


def admissible_paths(coned, P, radius):
    from .coned import backtracks, is_relative_quasigeodesic

    out = {}
    for end, paths in candidate_paths(coned, radius).items():
        ok = [p for p in paths if not backtracks(p) and is_relative_quasigeodesic(p, P, coned)]
        if ok:
            out[end] = ok
    return out


def estimate_bcp(coned, P, radius):
    """Largest BCP quantity over admissible path pairs inside ``radius``."""
    if radius > coned.group.radius:
        raise RadiusExceeded("enumeration radius exceeds the buildable ball")
    group = coned.group
    value = 0
    pairs = 0
    for paths in admissible_paths(coned, P, radius).values():
        for p in paths:
            for q in paths:
                pairs += 1
                value = max(value, bcp_pair_quantities(p, q, group))
    return Estimate(value, radius, pairs)


def estimate_delta(coned, radius=None):
    """Four-point hyperbolicity defect of Γ̂ on the coned ball, base point 1.

    Distances are taken inside the finite coned ball, so the value is a
    probe of the truncated graph, reported in units (halves / 2).
    """
    if radius is not None and radius != coned.radius:
        from .coned import ConedBall

        coned = ConedBall(coned.group, radius, coned.constants)
    ball = coned.ball
    n = len(ball)
    if n <= 1:
        return Estimate(Fraction(0), coned.radius, 0)
    D = np.zeros((n, n), dtype=np.int64)
    for i, w in enumerate(ball.elements):
        dist = coned.distances_from(w)
        D[i] = [dist[j] for j in range(n)]
    base = ball.locate(())
    G = (D[:, [base]] + D[[base], :] - D)  # twice the Gromov product, in halves
    worst = 0
    for z in range(n):
        M = np.minimum.outer(G[:, z], G[:, z]) - G
        worst = max(worst, int(M.max()))
    # G is 2 * product in halves, so units = worst / 4
    return Estimate(Fraction(worst, 4), coned.radius, n ** 3)
