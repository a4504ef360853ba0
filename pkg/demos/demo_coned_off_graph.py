"""
The coned-off graph of F(a, b) relative to <a>
==============================================

Each coset of <a> gets a cone vertex.  A word projects to a path that
jumps through the cone for every maximal run of a's, so long a-runs cost
one step.
"""

import numpy as np

from rhconj import Context, bundled
from rhconj.coned import penetration_trace, project, relative_distance
from rhconj.constants import estimate_bcp, estimate_delta
from rhconj.words import format_word

spec = bundled("f2_rel_a")
ctx = Context(spec)
coned = ctx.coned
P = spec.parse

# a^5 b is six Cayley edges but only two steps in the coned-off graph
x = P("a^5.b")
path = project(x, coned)
print("Γ-length", len(x), "relative length", path.relative_length)
for rec in penetration_trace(path):
    print("  visits coset of", format_word(rec.coset, spec) or "1", "travel", rec.gamma_travel)

# distances are stored in half-units: a cone edge costs one half
print("d(1, a^5 b) =", relative_distance(coned, x) / 2)

# Γ-length against relative length over the ball of radius 4
ball = ctx.group.ball(4)
gamma = np.array([len(w) for w in ball.elements])
rel = np.array([relative_distance(coned, w) / 2 for w in ball.elements])
for n in range(5):
    sel = gamma == n
    print(f"Γ-length {n}: {sel.sum():3d} elements, mean relative length {rel[sel].mean():.2f}")

# the relative geodesic picked for a word is shortlex-least among the shortest
print("relative geodesic of a b a^-1 b^2:", spec.format(coned.relative_geodesic(P("a.b.a^-1.b^2"))))

# empirical constants on a small ball; both vanish for this free product
print("BCP estimate at P=1, radius 6:", estimate_bcp(coned, 1, 6).value)
small = type(coned)(ctx.group, 3)
print("four-point delta on the radius 3 ball:", estimate_delta(small).value)
