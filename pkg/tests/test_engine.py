import random

from rhconj.coned import penetration_trace, project
from rhconj.engine import (
    BOUNDED_SEARCH, CONJUGATE, NOT_CONJUGATE, PARABOLIC_ORACLE, UNDECIDED, VIA_PARABOLIC_CLASS, Context,
    bounded_conjugator_search, conjugate_into_parabolic, cyclic_normal_form, decide_conjugate, detect_cascade,
    in_parabolic, parabolic_conjugate_in_G, partition_Hd, penetration_violations,
)
from rhconj.oracle import brute_force_conjugate
from rhconj.words import free_reduce, invert


def test_in_parabolic(f2a, ctx_f2a):
    P = f2a.parse
    H = f2a.parabolics[0]
    assert in_parabolic(P("a^5"), H, ctx_f2a)
    assert not in_parabolic(P("a.b"), H, ctx_f2a)
    assert not in_parabolic(P("b.a^3.b^-1"), 0, ctx_f2a)
    assert in_parabolic((), 0, ctx_f2a)


def test_conjugate_into_parabolic(f2a, ctx_f2a):
    P = f2a.parse
    assert conjugate_into_parabolic(P("b.a^2.b^-1"), ctx_f2a) == (P("a^2"), P("b"))
    assert conjugate_into_parabolic(P("a.b"), ctx_f2a) is None
    assert conjugate_into_parabolic(P("b"), ctx_f2a) is None


def test_cyclic_normal_form(f2a, ctx_f2a):
    P = f2a.parse
    for text in ["a.b.a", "b.a^3.b^-1", "a^2.b.a^-1", "b.a.b^-1.a"]:
        u = P(text)
        core, c = cyclic_normal_form(u, ctx_f2a)
        assert ctx_f2a.group.key(c + core + invert(c)) == ctx_f2a.group.key(u)
    assert cyclic_normal_form(P("a.b.a"), ctx_f2a)[0] == P("a^2.b")


def test_partition_free_group(f2a, ctx_f2a):
    part = partition_Hd(3, ctx_f2a)
    assert len(part.classes) == 7 and all(len(c) == 1 for c in part.classes)
    assert partition_Hd(0, ctx_f2a).classes == [((),)]


def test_partition_free_product_matches_oracle(z23, ctx_z23):
    part = partition_Hd(1, ctx_z23)
    P = z23.parse
    assert part.classes == [((),), (P("s"),), (P("t"),), (P("t^-1"),)]
    members = part.members()
    for x in members:
        for y in members:
            same = part.class_of(x) == part.class_of(y)
            assert same == brute_force_conjugate(x, y, 8, z23).conjugate


def test_partition_idempotent_and_coarsening(ctx_z23):
    a = partition_Hd(1, ctx_z23)
    assert partition_Hd(1, ctx_z23, radius=a.radius).classes == a.classes
    fine, coarse = partition_Hd(1, ctx_z23), partition_Hd(2, ctx_z23)
    for cl in fine.classes:
        assert len({coarse.class_of(h) for h in cl}) == 1


def test_partition_merges_across_G():
    # in Z2 * Z3 with the whole group as one parabolic, every element is in H;
    # a generated subgroup that is not malnormal exercises the G-merge step
    from rhconj.words import GroupSpec, ParabolicSpec

    spec = GroupSpec("z2xz2", ("x", "y"), relators=((0, 0), (2, 2), (0, 2, 0, 2)),
                     parabolics=(ParabolicSpec("X", (0,)),), max_ball_radius=8, bcp_tail=0)
    ctx = Context(spec)
    part = partition_Hd(1, ctx)
    assert part.classes == [((),), ((0,),)]


def test_parabolic_conjugate_in_G(f2a, ctx_f2a):
    P = f2a.parse
    assert parabolic_conjugate_in_G(P("a^2"), P("a^2"), ctx_f2a)
    for x, y in [("a^2", "a^-2"), ("a^2", "a^3")]:
        assert not parabolic_conjugate_in_G(P(x), P(y), ctx_f2a)
        assert not brute_force_conjugate(P(x), P(y), 6, f2a).conjugate


def test_bounded_conjugator_search(f2, ctx_f2):
    P = f2.parse
    assert bounded_conjugator_search(P("a.b"), P("b.a"), 3, ctx_f2) == P("a")
    assert bounded_conjugator_search(P("a.b.a.b"), P("b.a.b.a"), 3, ctx_f2) == P("a")
    assert bounded_conjugator_search(P("a.b"), P("a.b^-1"), 6, ctx_f2) is None


def test_decide_examples(f2a, ctx_f2a):
    P = f2a.parse
    c = decide_conjugate(P("a.b"), P("a.b"), ctx_f2a)
    assert c.verdict == CONJUGATE and c.conjugator == ()
    c = decide_conjugate(P("b.a^2.b^-1"), P("a^2"), ctx_f2a)
    assert c.verdict == CONJUGATE and c.method == VIA_PARABOLIC_CLASS
    assert ("into_parabolic", P("a^2"), P("b")) in c.reduction_chain
    c = decide_conjugate(P("a.b"), P("a.b^-1"), ctx_f2a)
    assert c.verdict == NOT_CONJUGATE and c.method == BOUNDED_SEARCH
    assert c.search_bound_used >= 1 and c.theoretical_bound is not None
    c = decide_conjugate(P("a^2"), P("a^3"), ctx_f2a)
    assert c.verdict == NOT_CONJUGATE and c.method == PARABOLIC_ORACLE


def test_decide_multi_parabolic(z23, ctx_z23):
    P = z23.parse
    assert decide_conjugate(P("t.s.t^-1"), P("s"), ctx_z23).verdict == CONJUGATE
    assert decide_conjugate(P("s"), P("t"), ctx_z23).verdict == NOT_CONJUGATE
    assert decide_conjugate(P("t"), P("t^-1"), ctx_z23).verdict == NOT_CONJUGATE
    c = decide_conjugate(P("s.t.s.t^-1"), P("t^-1.s.t.s"), ctx_z23)
    assert c.verdict == CONJUGATE and ctx_z23.verify(P("s.t.s.t^-1"), P("t^-1.s.t.s"), c.conjugator)


def test_undecided_at_scale(f2):
    ctx = Context(f2, max_radius=1)
    P = f2.parse
    c = decide_conjugate(P("a.b"), P("b.a"), ctx)
    assert c.verdict == UNDECIDED and c.conjugator is None and c.reason


def test_symmetry_and_conjugation_invariance(f2a, z23):
    rng = random.Random(7)
    for spec in (f2a, z23):
        ctx = Context(spec)
        for _ in range(60):
            u = free_reduce(tuple(rng.randrange(4) for _ in range(rng.randint(0, 4))))
            v = free_reduce(tuple(rng.randrange(4) for _ in range(rng.randint(0, 4))))
            g = free_reduce(tuple(rng.randrange(4) for _ in range(rng.randint(0, 3))))
            assert decide_conjugate(u, v, ctx).verdict == decide_conjugate(v, u, ctx).verdict
            c = decide_conjugate(g + u + invert(g), u, ctx)
            assert c.verdict == CONJUGATE and ctx.verify(g + u + invert(g), u, c.conjugator)


def test_penetration_violations_empty(f2a, ctx_f2a):
    P = f2a.parse
    c = decide_conjugate(P("a.b.a^2"), P("b.a^3"), ctx_f2a)
    assert c.conjugate
    assert penetration_violations(P("a.b.a^2"), P("b.a^3"), c.conjugator, ctx_f2a) == []


def test_detect_cascade(f2a, ctx_f2a):
    P = f2a.parse
    coned, group = ctx_f2a.coned, ctx_f2a.group
    g = P("a.b.a.b.a.b")
    q = penetration_trace(project(g, coned))
    p = penetration_trace(project(P("a.b") + g, coned))[1:]
    report = detect_cascade(p, q, group, ctx_f2a.constants.with_lengths(2, 2))
    assert report.n == 2
    assert [f[0] for f in report.floors] == ["H", "G", "H"]
    assert report.h_words == [P("a")] * 3
    assert report.bound_ok
    assert detect_cascade(q, q) is None
    one = penetration_trace(project(P("a"), coned))
    assert detect_cascade(one, one) is None
    far = penetration_trace(project(P("b^2.a"), coned))
    assert detect_cascade(far, q) is None
