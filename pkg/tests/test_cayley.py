import random

import pytest

from rhconj.cayley import (
    CosetTable, Group, build_ball, coset_id, dehn_reduce, enumerate_geodesics, gamma_distance,
    gamma_distance_certified,
)
from rhconj.errors import RadiusExceeded
from rhconj.words import GroupSpec, invert


def z2_star_z3_sphere(n):
    # alternating normal forms s / t^{+-1}: starting with s, or with a t-power
    if n == 0:
        return 1
    return 2 ** (n // 2) + 2 ** ((n + 1) // 2)


def test_free_census_closed_form(f2):
    for r in range(7):
        assert len(build_ball(f2, r)) == 2 * 3 ** r - 1


def test_free_product_census_matches_normal_forms(z23):
    for r in range(8):
        assert len(build_ball(z23, r)) == sum(z2_star_z3_sphere(n) for n in range(r + 1))


def test_examples(f2, z23):
    assert len(build_ball(f2, 2)) == 17
    assert [z23.format(w) for w in build_ball(z23, 1).elements] == ["", "s", "t", "t^-1"]
    assert len(build_ball(z23, 0)) == 1


def test_radius_budget(f2):
    with pytest.raises(RadiusExceeded):
        build_ball(f2, f2.max_ball_radius + 1)


def test_ball_invariants(z23):
    ball = build_ball(z23, 5)
    group = ball.group
    for i, w in enumerate(ball.elements):
        assert group.length(w) == len(w) == ball.depth(i)
        for x, j in enumerate(ball.adjacency[i]):
            if j >= 0:
                assert ball.adjacency[j][x ^ 1] == i


def test_gamma_distance(f2):
    ball = build_ball(f2, 4)
    P = f2.parse
    assert gamma_distance(ball, P("a.b"), P("a")) == 1
    assert gamma_distance(ball, (), P("a.b.a.b")) == 4
    assert gamma_distance(ball, P("b"), P("b")) == 0
    assert gamma_distance_certified(ball, (), P("a.b"))[1]
    with pytest.raises(RadiusExceeded):
        gamma_distance(ball, (), P("a^5"))


def test_gamma_distance_metric_axioms(z23):
    ball = build_ball(z23, 4)
    rng = random.Random(3)
    els = ball.elements
    for _ in range(200):
        x, y, z = rng.choice(els), rng.choice(els), rng.choice(els)
        assert gamma_distance(ball, x, y) == gamma_distance(ball, y, x)
        assert gamma_distance(ball, x, z) <= gamma_distance(ball, x, y) + gamma_distance(ball, y, z)


def test_enumerate_geodesics(f2, z23):
    assert enumerate_geodesics(build_ball(f2, 3), f2.parse("a.b")) == [(0, 2)]
    assert enumerate_geodesics(build_ball(f2, 3), ()) == [()]
    ball = build_ball(z23, 4)
    assert enumerate_geodesics(ball, z23.parse("s")) == [z23.parse("s")]
    group = ball.group
    for g in ball.elements:
        for w in enumerate_geodesics(ball, g):
            assert len(w) == gamma_distance(ball, (), g)
            assert group.key(w) == g


def test_coset_table(f2a):
    ball = build_ball(f2a, 4)
    table = CosetTable(ball, 0)
    P = f2a.parse
    assert coset_id(table, P("a^3")) == coset_id(table, ())
    cid = coset_id(table, P("a^3.b"))
    assert cid != coset_id(table, ())
    assert table.coset_rep(cid) == P("a^3.b")
    assert table.coset_rep(coset_id(table, ())) == ()
    assert table.boundary[coset_id(table, ())]


def test_folded_word_problem_agrees_with_dehn(z23):
    # s^2 and t^3 form a Dehn presentation of the free product
    group = Group(z23)
    rng = random.Random(11)
    for _ in range(300):
        w = tuple(rng.randrange(4) for _ in range(rng.randint(0, 9)))
        assert group.is_trivial(w) == (dehn_reduce(w, z23.relators) == ())


def test_keys_are_group_invariant(z23):
    group = Group(z23)
    P = z23.parse
    assert group.key(P("s^-1")) == P("s")
    assert group.key(P("t.t")) == P("t^-1")
    assert group.key(P("t^3")) == ()
    w = P("s.t.s.t^-1")
    assert group.is_trivial(w + invert(w))


def test_dehn_backend(z23):
    spec = GroupSpec("z", z23.generators, z23.relators, z23.parabolics, word_problem_backend="dehn-rewriting")
    group = Group(spec)
    assert group.is_trivial(spec.parse("s.t^3.s"))
    assert group.key(spec.parse("t.t.s.s")) == spec.parse("t^-1")
