import pytest

from bweyl import VerificationError
from bweyl.roots import levi_root_subset
from bweyl.sperm import SignedPermutation
from bweyl.supplement import (
    SupplementContext,
    build_supplement,
    build_twist,
    check_frobenius_conventions,
    verify_extmap_hypotheses,
)
from bweyl.tits import (
    ExtendedWeylGroup,
    GeneratedSubgroup,
    root_character_eval,
    torsion_two_subgroup_fixed_rank,
)

SWEEP_SMALL = [
    (1, 1, 0), (1, 1, 1), (1, 2, 0), (1, 2, 1), (3, 1, 0), (3, 1, 1),
]


def test_build_twist_examples():
    g = ExtendedWeylGroup(2)
    v = build_twist(g, 2, 4)
    assert v.weyl.images == (2, -1)
    v1 = build_twist(g, 2, 1)
    assert v1.weyl.is_identity()
    with pytest.raises(ValueError):
        build_twist(g, 2, 3)


@pytest.mark.parametrize("l,d", [(2, 1), (2, 2), (6, 3), (6, 6), (4, 2)])
def test_twist_power_central(l, d):
    # v_l^{d0} commutes with every generator of the rank-l extended group
    ctx = SupplementContext(l, d, 0)
    g = ctx.group
    central = g.power(ctx.v_l, ctx.d0)
    for i in range(1, l + 1):
        m = g.simple_lift(i)
        assert g.mul(central, m) == g.mul(m, central)


def test_h_elements_l2():
    ctx = SupplementContext(2, 2, 0)
    g = ctx.group
    assert ctx.h0 == g.h_short(1, 2)
    assert ctx.h[1].torus == (1, 0)
    assert ctx.h[2].torus == (1, 2)
    assert g.mul(ctx.h[1], ctx.h[1]) == ctx.h0
    # d0 = 1 odd: h_1 has an odd coordinate, the product h_1 h_2 does not
    assert not g.in_torsion_two(ctx.h[1])
    assert g.in_torsion_two(g.mul(ctx.h[1], ctx.h[2]))


def test_fixed_torsion_is_h0_times_h1h2():
    ctx = SupplementContext(2, 2, 0)
    g = ctx.group
    gens = [g.torus((2, 0)), g.torus((0, 2))]
    sub = GeneratedSubgroup.generate(g, gens)
    from bweyl.tits import fixed_subgroup

    fixed = set(fixed_subgroup(sub, 3, ctx.v_l).elements)
    h1h2 = g.mul(ctx.h[1], ctx.h[2])
    expected = set(
        GeneratedSubgroup.generate(g, [ctx.h0, h1h2]).elements
    )
    assert fixed == expected and len(fixed) == 4


@pytest.mark.parametrize("d0,t_l", [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (3, 1), (5, 1), (3, 2)])
@pytest.mark.parametrize("parity", [1, 2])
def test_hl_rank_is_a_l(d0, t_l, parity):
    l = 2 * d0 * t_l
    if l > 10:
        pytest.skip("covered by the acceptance sweep")
    ctx = SupplementContext(l, parity * d0, 0)
    rank, count = torsion_two_subgroup_fixed_rank(ctx.group, l, ctx.q, ctx.v_l)
    assert rank == ctx.a_l
    assert count == 2**ctx.a_l


def test_p_square_small():
    ctx = SupplementContext(2, 2, 0)
    g = ctx.group
    p1 = ctx.p[1]
    assert g.mul(p1, p1) == g.prod([ctx.h[1], ctx.h[2], ctx.h0])


def test_iota1_sends_simple_to_p():
    ctx = SupplementContext(4, 1, 0)
    assert ctx.iota1(ctx.group.simple_lift(2)) == ctx.p[1]
    ctx = SupplementContext(6, 3, 0)
    assert ctx.iota1(ctx.group.simple_lift(2)) == ctx.p[1]


def test_g_factors_small():
    # t_l = 1: the first interleaver is empty, the second is p_1
    ctx = SupplementContext(2, 1, 0)
    g1, g2 = ctx.g1_g2()
    assert g1 == ctx.group.identity
    assert g2 == ctx.p[1]
    # t_l = 2, d0 = 1: the displayed Weyl images
    ctx = SupplementContext(4, 1, 0)
    g1, g2 = ctx.g1_g2()
    assert g1.weyl == SignedPermutation.from_mapping(4, {2: 3, 3: 2})
    assert g2.weyl == SignedPermutation.from_mapping(4, {1: 2, 2: 4, 4: 1})


def test_displayed_g_image_formula():
    # rho(g_1) composes the i-th transposition packets, i ascending applied
    # last; same for rho(g_2) with the even targets
    for (d0, t_l) in [(1, 2), (1, 3), (3, 2)]:
        l = 2 * d0 * t_l
        ctx = SupplementContext(l, d0, 0)
        a_l = ctx.a_l
        g1, g2 = ctx.g1_g2()
        expected1 = SignedPermutation.identity(ctx.n)
        expected2 = SignedPermutation.identity(ctx.n)
        for i in range(1, t_l + 1):
            pack1, pack2 = {}, {}
            for k in range(d0):
                off = k * a_l
                if i != 2 * i - 1:
                    pack1[off + i] = off + 2 * i - 1
                    pack1[off + 2 * i - 1] = off + i
                pack2[off + i] = off + 2 * i
                pack2[off + 2 * i] = off + i
            expected1 = expected1 * SignedPermutation.from_mapping(ctx.n, pack1)
            expected2 = expected2 * SignedPermutation.from_mapping(ctx.n, pack2)
        assert g1.weyl == expected1
        assert g2.weyl == expected2


@pytest.mark.parametrize("d0,t_l,m", SWEEP_SMALL)
@pytest.mark.parametrize("parity", [1, 2])
def test_build_supplement_sweep_small(d0, t_l, m, parity):
    l = 2 * d0 * t_l
    data = build_supplement(l, parity * d0, m)
    import math

    assert data.v_prime_order == 2 * (2 * d0) ** t_l * 2 ** (t_l - 1) * math.factorial(t_l)
    assert len(data.h_prime.elements) == 2**t_l
    assert len(data.c_closure) == 2 * (2 * d0) ** t_l


def test_supplement_examples():
    data = build_supplement(2, 1, 0)
    assert data.v_prime_order == 4
    assert len(data.c_closure) == 4
    assert len(data.p_closure.elements) == 1
    data = build_supplement(4, 1, 0)
    assert data.v_prime_order == 32  # 2 * (2 d0)^t * 2^(t-1) * t!
    g = data.ctx.group
    # (c_i')^{2 d0} == h_0 at d0 = 3
    data = build_supplement(6, 3, 0)
    g = data.ctx.group
    assert g.power(data.c_primes[0], 2 * 3) == data.ctx.h0


def test_c1_properties_examples():
    ctx = SupplementContext(2, 2, 0)
    assert ctx.cbar1.images == (-1, 2)
    assert ctx.is_frob_fixed(ctx.c1)
    g = ctx.group
    assert g.power(ctx.c1, 2) in (g.identity, ctx.h0)


def test_no_fixed_lift_error_payload():
    # sabotage: demand a lift of a cycle that is not twist-centralized
    ctx = SupplementContext(4, 2, 0)
    bad = SignedPermutation.from_mapping(ctx.n, {1: 2, 2: 1})
    ctx.cbar1 = bad
    with pytest.raises(VerificationError):
        ctx._find_c1()


def test_h_parity_centrality_in_levi():
    # h_i h_{i+1} pairs trivially with every Levi root exactly when i is odd
    for (d0, t_l, m) in [(1, 2, 1), (3, 1, 1), (1, 3, 0)]:
        l = 2 * d0 * t_l
        ctx = SupplementContext(l, d0, m)
        levi = levi_root_subset(ctx.n, m, d0, t_l)
        g = ctx.group
        for i in range(1, ctx.a_l):
            h = g.mul(ctx.h[i], ctx.h[i + 1])
            central = all(root_character_eval(a, h) == 0 for a in levi.roots)
            assert central == (i % 2 == 1), (d0, t_l, m, i)


def test_h_prime_central_in_levi():
    data = build_supplement(4, 1, 1)
    ctx = data.ctx
    levi = levi_root_subset(ctx.n, ctx.m, ctx.d0, ctx.t_l)
    for h in data.h_prime.elements:
        assert all(root_character_eval(a, h) == 0 for a in levi.roots)


def test_extmap_hypotheses():
    report = verify_extmap_hypotheses(2, 1, 1)
    assert report["h_prime_central_in_levi"]
    assert report["v_prime_order"] // report["h_prime_order"] == report["relative_weyl_order"]
    report = verify_extmap_hypotheses(4, 2, 1)
    assert report["relative_weyl_order"] == 8


def test_frobenius_conventions_report():
    conv = check_frobenius_conventions(SupplementContext(6, 3, 0))
    assert conv["both_pass"]
    assert conv["conjugate_by_twist"] == conv["expected_rank"]


def test_rejects_even_d0():
    with pytest.raises(ValueError):
        build_supplement(4, 4, 0)  # d = 4 gives d0 = 2
