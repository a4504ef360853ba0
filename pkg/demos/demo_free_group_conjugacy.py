"""
Conjugacy in a free group
=========================

Decide conjugacy in F(a, b), read the certificate, and compare with the
classical rotation criterion for cyclically reduced words.
"""

import random

from rhconj import Context, bundled, decide_conjugate
from rhconj.oracle import brute_force_conjugate, free_group_conjugate
from rhconj.words import cyclic_reduce, free_reduce

spec = bundled("f2")
ctx = Context(spec)
P = spec.parse

# ab and ba differ by a rotation, so they are conjugate
cert = decide_conjugate(P("a.b"), P("b.a"), ctx)
print(cert.verdict, "by", spec.format(cert.conjugator), "via", cert.method)

# the conjugator is checked against the word problem before it is returned
assert ctx.verify(P("a.b"), P("b.a"), cert.conjugator)

# a refusal records how far the search was exhaustive
cert = decide_conjugate(P("a.b"), P("a.b^-1"), ctx)
print(cert.verdict, "- no conjugator of length <=", cert.search_bound_used)
print("theoretical bound has", len(str(cert.theoretical_bound)), "digits")

# cyclic reduction strips a conjugating prefix
core, prefix = cyclic_reduce(P("b.a.b.a^-1.b^-1"))
print("core", spec.format(core), "prefix", spec.format(prefix))

# the oracle lists a Cayley ball and finds the shortlex-least conjugator
truth = brute_force_conjugate(P("a.b.a^-1"), P("b"), 4, spec)
print("oracle:", truth.conjugate, spec.format(truth.minimal_conjugator))

# agreement with the rotation criterion on random words
rng = random.Random(1)
agree = 0
for _ in range(300):
    u = free_reduce(tuple(rng.randrange(4) for _ in range(6)))
    v = free_reduce(tuple(rng.randrange(4) for _ in range(6)))
    agree += decide_conjugate(u, v, ctx).conjugate == free_group_conjugate(u, v)
print(agree, "of 300 random pairs agree with the rotation criterion")
