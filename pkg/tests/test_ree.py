import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from twistgroup import group_lab, ree
from twistgroup.errors import NonUnit, NotFormPreserving, NotInLieAlgebra, NotMember, WrongCharacteristic
from twistgroup.linalg import Mat, rank
from twistgroup.rings import GF, ring_from_tag
from twistgroup.ree import (
    IDX, LABELS, QUOTIENT_SIGNS, ROOTS, ReeGroup, adjoint_action, bilinear_gram, chevalley_basis,
    chevalley_basis_int, g2_check_forms, g2_mu_image, g2_xroot, is_long, law_exponent, law_sign, ree_bruhat,
    ree_h, ree_identities, ree_member, ree_relation_suite, ree_w0, ree_xminus, ree_xplus, sigma,
    trilinear_value,
)

ALPHA, BETA = (1, 0), (0, 1)


def rand(R, rng, nonzero=False):
    return R.elem(R.random_payload(rng, 1, nonzero=nonzero))


def unit_matrix(R, entries):
    """I plus the listed (row label, column label, value) entries."""
    m = Mat.identity(R, 7)
    d = {(IDX[a], IDX[b]): v for a, b, v in entries}
    return Mat.from_dict(R, 7, d, base=m)


def random_member(G, rng, length=3):
    R = G.ring
    g = G.identity()
    for _ in range(length):
        g = g @ rng.choice([
            lambda: G.xplus(rand(R, rng), rand(R, rng), rand(R, rng)),
            lambda: G.xminus(rand(R, rng), rand(R, rng), rand(R, rng)),
            lambda: G.h(rand(R, rng, nonzero=True)),
            lambda: G.w0(),
        ])()
    return g


def random_root_product(R, rng, length=4):
    g = Mat.identity(R, 7)
    for _ in range(length):
        g = g @ g2_xroot(rng.choice(ROOTS), rand(R, rng))
    return g


def int_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(7)) for j in range(7)] for i in range(7)]


def int_bracket(a, b):
    ab, ba = int_mul(a, b), int_mul(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(7)] for i in range(7)]


# Chevalley basis -----------------------------------------------------------------

def test_e_beta_matches_display():
    e_beta = chevalley_basis_int()[ree.BASIS_NAMES.index(BETA)]
    want = [[0] * 7 for _ in range(7)]
    want[IDX[2]][IDX[3]] = 1
    want[IDX[-3]][IDX[-2]] = -1
    assert e_beta == want


def test_cartan_elements():
    basis = chevalley_basis_int()
    names = ree.BASIS_NAMES
    ha = int_bracket(basis[names.index(ALPHA)], basis[names.index((-1, 0))])
    hb = int_bracket(basis[names.index(BETA)], basis[names.index((0, -1))])
    assert [ha[i][i] for i in range(7)] == [1, -1, 2, 0, -2, 1, -1]
    assert [hb[i][i] for i in range(7)] == [0, 1, -1, 0, 1, -1, 0]
    assert all(ha[i][j] == 0 == hb[i][j] for i in range(7) for j in range(7) if i != j)


def test_negative_roots_are_minus_peridentity_conjugates():
    basis = chevalley_basis_int()
    names = ree.BASIS_NAMES
    for r in ree.POSITIVE_ROOTS:
        pos, neg = basis[names.index(r)], basis[names.index((-r[0], -r[1]))]
        assert all(neg[i][j] == -pos[6 - i][6 - j] for i in range(7) for j in range(7))


def test_basis_annihilates_both_forms():
    gram = [[0] * 7 for _ in range(7)]
    for i, v in enumerate([1, 1, 1, 2, 1, 1, 1]):
        gram[i][6 - i] = v
    for e in chevalley_basis_int()[:12]:
        et = [list(r) for r in zip(*e)]
        lhs = int_mul(et, gram)
        rhs = int_mul(gram, e)
        assert all(lhs[i][j] + rhs[i][j] == 0 for i in range(7) for j in range(7))
        for i, j, k in itertools.product(range(7), repeat=3):
            total = sum(
                e[a][i] * trilinear_value(a, j, k) + e[a][j] * trilinear_value(i, a, k)
                + e[a][k] * trilinear_value(i, j, a)
                for a in range(7)
            )
            assert total == 0


def test_trilinear_form_values():
    assert trilinear_value(IDX[0], IDX[1], IDX[-1]) == 1
    assert trilinear_value(IDX[1], IDX[0], IDX[-1]) == -1
    assert trilinear_value(IDX[1], IDX[-2], IDX[-3]) == 1
    assert trilinear_value(IDX[1], IDX[2], IDX[3]) == 0
    nonzero = sum(1 for t in itertools.product(range(7), repeat=3) if trilinear_value(*t))
    assert nonzero == 5 * 6


def test_basis_independent_mod_three():
    R = GF(3)
    flat = Mat.raw(R, tuple(tuple(x for row in m.e for x in row) for m in chevalley_basis(R)))
    assert rank(flat) == 14


def test_bilinear_gram():
    R = GF(27)
    assert bilinear_gram(R) == Mat.antidiag(R, [1, 1, 1, 2, 1, 1, 1])


# elementary generators -------------------------------------------------------------

@pytest.mark.parametrize("root", ROOTS)
def test_xroot_at_zero(root):
    assert g2_xroot(root, GF(27)(0)).is_identity()


def test_x_beta_is_linear():
    R = GF(27)
    for v in range(27):
        xi = R.elem(v)
        assert g2_xroot(BETA, xi) == unit_matrix(R, [(2, 3, xi), (-3, -2, -xi)])


def test_x_alpha_divided_square():
    R = GF(27)
    for v in range(27):
        xi = R.elem(v)
        want = unit_matrix(R, [(1, 2, xi), (3, 0, -2 * xi), (0, -3, xi), (-2, -1, -xi), (3, -3, -xi * xi)])
        assert g2_xroot(ALPHA, xi) == want


@pytest.mark.parametrize("tag", ["gf3", "gf27", "gf5", "f3t"])
def test_generators_preserve_forms(tag):
    R = ring_from_tag(tag)
    rng = random.Random(tag)
    for root in ROOTS:
        for _ in range(3):
            assert g2_check_forms(g2_xroot(root, rand(R, rng)))


def test_forms_check_rejects_scaling():
    R = GF(27)
    two = R(2)
    assert g2_check_forms(Mat.identity(R, 7))
    assert not g2_check_forms(Mat.diag(R, [two, 1, 1, 1, 1, 1, two.inverse()]))


# adjoint action and the mu image -------------------------------------------------------

def test_adjoint_of_identity():
    assert adjoint_action(Mat.identity(GF(27), 7)).is_identity()


def test_adjoint_of_unipotent_fixes_its_generator():
    R = GF(27)
    ad = adjoint_action(g2_xroot(BETA, R(1)))
    j = ree.BASIS_NAMES.index(BETA)
    assert [ad[i, j] for i in range(14)] == [R(1) if i == j else R(0) for i in range(14)]


def test_adjoint_of_torus_is_root_character():
    R = GF(27)
    rng = random.Random(7)
    ha, hb = [1, -1, 2, 0, -2, 1, -1], [0, 1, -1, 0, 1, -1, 0]
    for _ in range(10):
        e, d = rand(R, rng, nonzero=True), rand(R, rng, nonzero=True)
        diag = [e ** a * d ** b for a, b in zip(ha, hb)]
        h = Mat.diag(R, diag)
        assert g2_check_forms(h)
        ad = adjoint_action(h)
        assert ad.is_diagonal()
        for k, name in enumerate(ree.BASIS_NAMES[:12]):
            i, j = next(iter(ree.ROOT_VECTORS[name]))
            assert ad[k, k] == diag[i] / diag[j]
        assert ad[12, 12] == R(1) and ad[13, 13] == R(1)


def test_adjoint_rejects_non_g2_matrix():
    R = GF(27)
    g = Mat.from_dict(R, 7, {(0, 1): R(1)}, base=Mat.identity(R, 7))
    with pytest.raises(NotInLieAlgebra):
        adjoint_action(g)


def test_mu_image_needs_char_three():
    with pytest.raises(WrongCharacteristic):
        g2_mu_image(Mat.identity(GF(8), 7))


def test_mu_image_identity():
    assert g2_mu_image(Mat.identity(GF(27), 7)).is_identity()


@pytest.mark.parametrize("root", ROOTS)
def test_mu_law_signs_over_gf3(root):
    R = GF(3)
    sign = -1 if (root[0] + root[1]) % 2 == 0 else 1
    assert law_sign(root) == sign
    assert law_exponent(root) == (1 if is_long(root) else 3)
    assert g2_mu_image(g2_xroot(root, R(1))) == g2_xroot(sigma(root), R(sign))


def test_mu_law_random_gf27():
    R = GF(27)
    rng = random.Random(8)
    for root in ROOTS:
        for _ in range(5):
            xi = rand(R, rng)
            image = xi ** law_exponent(root) * law_sign(root)
            assert g2_mu_image(g2_xroot(root, xi)) == g2_xroot(sigma(root), image)


def test_quotient_signs_unique_up_to_overall_sign():
    R = GF(3)
    good = []
    for signs in itertools.product([1, -1], repeat=7):
        if all(g2_mu_image(g2_xroot(r, R(1)), signs) == g2_xroot(sigma(r), R(law_sign(r))) for r in ROOTS):
            good.append(list(signs))
    assert sorted(good) == [[-1] * 7, [1] * 7]
    assert QUOTIENT_SIGNS == [1] * 7


def test_mu_image_multiplicative_and_squares_to_frobenius():
    R = GF(27)
    rng = random.Random(9)
    for _ in range(1000):
        g, h = random_root_product(R, rng), random_root_product(R, rng)
        mg = g2_mu_image(g)
        assert g2_mu_image(g @ h) == mg @ g2_mu_image(h)
        assert g2_mu_image(mg) == g.frobenius()


# membership and generators ----------------------------------------------------------------

def test_identity_member():
    assert ree_member(Mat.identity(GF(27), 7)).m.is_identity()


def test_x_alpha_alone_not_member():
    R = GF(3)
    with pytest.raises(NotMember) as info:
        ree_member(g2_xroot(ALPHA, R(1)))
    assert info.value.entry is not None


def test_non_g2_matrix_rejected_before_mu():
    R = GF(27)
    with pytest.raises(NotFormPreserving):
        ree_member(Mat.diag(R, [R(2), 1, 1, 1, 1, 1, R(2)]))


def test_ree_needs_char_three():
    with pytest.raises(WrongCharacteristic):
        ReeGroup(GF(8))


def test_xplus_members_and_zero():
    R = GF(27)
    rng = random.Random(10)
    assert ree_xplus(R(0), R(0), R(0)).m.is_identity()
    for _ in range(30):
        g = ree_xplus(rand(R, rng), rand(R, rng), rand(R, rng))
        assert ree_member(g.m) == g
        assert g.m.is_unitriangular()
        assert ree_xminus(rand(R, rng), rand(R, rng), rand(R, rng)).m.T.is_unitriangular()


def test_x1_factorization():
    R = GF(27)
    G = ReeGroup(R)
    t = G.tau
    rng = random.Random(11)
    for _ in range(10):
        a = rand(R, rng)
        want = (g2_xroot((1, 0), a) @ g2_xroot((0, 1), t(a)) @ g2_xroot((1, 1), -(a * t(a)))
                @ g2_xroot((2, 1), a * a * t(a)))
        assert G.x1(a) == want
        assert G.is_member(want)


def test_h_minus_one():
    R = GF(27)
    assert ree_h(R(-1)).m == Mat.diag(R, [-1, 1, -1, 1, -1, 1, -1])


def test_h_entries_and_unit():
    R = GF(27)
    G = ReeGroup(R)
    e = R.elem(R.generator)
    te = G.tau(e)
    assert G.h(e).m == Mat.diag(R, [e, te / e, e * e / te, 1, te / (e * e), e / te, e.inverse()])
    with pytest.raises(NonUnit):
        ree_h(R(0))


def test_w0():
    R = GF(27)
    assert ree_w0(R).m == Mat.antidiag(R, [-1] * 7)


def test_w0h_from_unipotents():
    R = GF(27)
    G = ReeGroup(R)
    xp, xm = G.xplus_mat, G.xminus_mat
    for v in range(1, 27):
        eta = R.elem(v)
        lhs = G.w0_mat() @ G.h_mat(G.tp(eta, 1, 1))
        assert lhs == xp(0, eta.inverse(), 0) @ xm(0, eta, 0) @ xp(0, eta.inverse(), 0)


def test_closure_gf27():
    G = ReeGroup(GF(27))
    rng = random.Random(12)
    members = [random_member(G, rng) for _ in range(30)]
    for _ in range(1000):
        g, h = rng.choice(members), rng.choice(members)
        prod = g @ h
        # the carried mu-image must agree with a fresh computation
        assert G.certify(prod.m).mu == prod.mu
    for g in members:
        assert G.is_member(g.inv().m)


@pytest.mark.parametrize("tag", ["gf3", "gf27"])
def test_torus_membership_only_if(tag):
    """h_alpha(e1) h_beta(e2) is a member exactly when e2 = e1^tau."""
    R = ring_from_tag(tag)
    G = ReeGroup(R)
    ha, hb = [1, -1, 2, 0, -2, 1, -1], [0, 1, -1, 0, 1, -1, 0]
    for v1 in range(1, R.q):
        e1 = R.elem(v1)
        for v2 in range(1, R.q):
            e2 = R.elem(v2)
            d = Mat.diag(R, [e1 ** a * e2 ** b for a, b in zip(ha, hb)])
            assert G.is_member(d) == (e2 == G.tau(e1))


# Bruhat ----------------------------------------------------------------------------------

def test_bruhat_identity_and_w0():
    R = GF(27)
    G = ReeGroup(R)
    parts = ree_bruhat(G.identity())
    assert not parts.big_cell and parts.reassemble().is_identity()
    parts = ree_bruhat(ree_w0(R))
    assert parts.big_cell and parts.eps == R(1) and parts.u.m.is_identity() and parts.v.m.is_identity()


def test_bruhat_random_gf27():
    G = ReeGroup(GF(27))
    rng = random.Random(13)
    for _ in range(50):
        g = random_member(G, rng)
        parts = G.bruhat(g)
        assert parts.reassemble() == g.m
        assert G.xplus_mat(*parts.v_params) == parts.v.m


def test_bruhat_over_gf3_exhaustive():
    G, gens = group_lab.lab_group("ree3")
    table = group_lab.bfs_closure(gens)
    assert table.order == 1512
    cells = {True: 0, False: 0}
    for m in table.mats():
        parts = ree_bruhat(m, G.tau)
        assert parts.reassemble() == m
        cells[parts.big_cell] += 1
    # |B| = |H||U| = 2 * 27 and |U w0 H U| = 27 * 2 * 27
    assert cells == {False: 54, True: 1458}


# relations ------------------------------------------------------------------------------

@pytest.mark.parametrize("tag", ["gf27", "gf243"])
def test_relation_suite_passes(tag):
    checks = ree_relation_suite(ring_from_tag(tag), samples=10, seed=0)
    assert all(c.ok for c in checks), [c.to_json() for c in checks if not c.ok]


def test_relation_suite_over_gf3_reports_every_identity():
    checks = ree_relation_suite(GF(3), samples=5, seed=0)
    assert len(checks) == len(ree_identities(ReeGroup(GF(3))))
    assert all(c.ok for c in checks)


def test_degenerate_parameters():
    R = GF(27)
    G = ReeGroup(R)
    for ident in ree_identities(G):
        if ident.degenerate is not None:
            assert ident.predicate(**{k: R(v) for k, v in ident.degenerate.items()})


def test_inverse_formula():
    R = GF(27)
    G = ReeGroup(R)
    t = G.tau
    rng = random.Random(14)
    for _ in range(20):
        a, b, c = rand(R, rng), rand(R, rng), rand(R, rng)
        inv = G.xplus_mat(-a, -b + a * t(a), -c + a * b + a * a * t(a))
        assert G.xplus_mat(a, b, c).inv() == inv


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 26), st.integers(0, 26), st.integers(0, 26), st.integers(1, 26))
def test_torus_conjugation_property(a, b, c, e):
    R = GF(27)
    G = ReeGroup(R)
    a, b, c, e = (R.elem(x) for x in (a, b, c, e))
    h = G.h_mat(e)
    want = G.xplus_mat(G.tp(e, 2, -1) * a, G.tp(e, -1, 1) * b, e * c)
    assert h @ G.xplus_mat(a, b, c) @ h.inv() == want


def test_labels():
    assert LABELS == [1, 2, 3, 0, -3, -2, -1]
