from hypothesis import given, settings, strategies as st

from rhconj.coned import project, relative_distance
from rhconj.engine import CONJUGATE, Context, decide_conjugate
from rhconj.groups import bundled
from rhconj.oracle import brute_force_conjugate, free_group_conjugate
from rhconj.words import (
    conjugate_by_letter, cyclic_reduce, format_word, free_reduce, invert, is_cyclically_reduced, is_reduced,
    parse_word,
)

F2 = bundled("f2")
F2A = bundled("f2_rel_a")
Z23 = bundled("z2_star_z3")
CTX = {s.name: Context(s) for s in (F2, F2A, Z23)}

raw = st.lists(st.integers(0, 3), max_size=12).map(tuple)
short = st.lists(st.integers(0, 3), max_size=4).map(lambda w: free_reduce(tuple(w)))
specs = st.sampled_from([F2, F2A, Z23])


@given(raw)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert is_reduced(r) and free_reduce(r) == r
    assert free_reduce(w + invert(w)) == ()


@given(raw)
def test_invert_involution(w):
    assert invert(invert(w)) == w
    assert free_reduce(invert(w)) == invert(free_reduce(w))


@given(raw)
def test_cyclic_reduce_round_trip(w):
    core, c = cyclic_reduce(w)
    assert is_cyclically_reduced(core)
    assert free_reduce(c + core + invert(c)) == free_reduce(w)


@given(raw, st.integers(0, 3))
def test_conjugate_by_letter(w, x):
    c = free_reduce(w)
    assert conjugate_by_letter(x, c) == free_reduce((x,) + c + (x ^ 1,))


@given(raw)
def test_parse_format_round_trip(w):
    w = free_reduce(w)
    assert parse_word(format_word(w, F2), F2) == w


@settings(deadline=None)
@given(short, short)
def test_relative_distance_symmetric(g, h):
    coned = CTX["f2_rel_a"].coned
    assert relative_distance(coned, g, h) == relative_distance(coned, h, g)


@settings(deadline=None)
@given(short)
def test_projection_no_longer_than_word(w):
    coned = CTX["f2_rel_a"].coned
    path = project(w, coned)
    assert 2 * path.relative_length <= 2 * len(w) or path.length_halves <= 2 * len(w)
    assert path.relative_length <= len(w)


@settings(max_examples=60, deadline=None)
@given(specs, short, short)
def test_decide_matches_oracle(spec, u, v):
    ctx = CTX[spec.name]
    cert = decide_conjugate(u, v, ctx)
    truth = brute_force_conjugate(u, v, 6, spec).conjugate
    if spec is F2:
        assert truth == free_group_conjugate(u, v)
    assert cert.conjugate == truth
    if cert.conjugate:
        assert ctx.verify(u, v, cert.conjugator)


@settings(max_examples=40, deadline=None)
@given(specs, short, short)
def test_decide_conjugation_invariant(spec, u, g):
    ctx = CTX[spec.name]
    w = g + u + invert(g)
    cert = decide_conjugate(w, u, ctx)
    assert cert.verdict == CONJUGATE and ctx.verify(w, u, cert.conjugator)
