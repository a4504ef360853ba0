"""
Parabolic classes in Z2 * Z3
============================

With both free factors parabolic, conjugacy splits into cases: elements
conjugate into a factor are compared through the factor, the rest by a
bounded search.  The manifold constants close the tour.
"""

from rhconj import Context, bundled, decide_conjugate
from rhconj.constants import ManifoldParams, manifold_constants
from rhconj.engine import conjugate_into_parabolic, partition_Hd

spec = bundled("z2_star_z3")
ctx = Context(spec)
P = spec.parse

# t s t^-1 is conjugate into <s>; the reduction is recorded in the chain
k, g = conjugate_into_parabolic(P("t.s.t^-1"), ctx)
print("t s t^-1 =", spec.format(g), ".", spec.format(k), ". inverse")

# parabolic elements of length <= 1, grouped by conjugacy in the whole group
part = partition_Hd(1, ctx)
print("classes:", [[spec.format(h) or "1" for h in c] for c in part.classes])

# t and t^-1 live in different classes, so they are not conjugate
for u, v in [("t.s.t^-1", "s"), ("t", "t^-1"), ("s.t", "t.s")]:
    cert = decide_conjugate(P(u), P(v), ctx)
    print(f"{u} ~ {v}: {cert.verdict} ({cert.method})")

# the manifold chain at unit parameters, then its growth in P
for p in (1, 2, 4):
    c = manifold_constants(ManifoldParams(1, 1, 1, 1, p))
    print(f"P={p}: V_S={c['V_S']:.4f} K={c['K']:.4f} L={c['L']:.3f} E={c['E']:.2f}")
