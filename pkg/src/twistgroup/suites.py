"""Check batteries shared by the command line and the acceptance tests.

Every battery returns a list of ``Check`` records in a fixed order and draws
its randomness from generators seeded by (seed, check name), so reports are
reproducible and independent of which batteries run.
"""

from __future__ import annotations

import random

from . import group_lab, isogeny, mixed, ree, suzuki
from .linalg import Mat, rank
from .report import Check, run_identity
from .rings import GF, ring_from_tag

SUZUKI_RINGS = ("gf8", "gf32")
REE_RINGS = ("gf27", "gf243")
ISOGENY_RINGS = ("gf2", "gf4", "f2t")

# the displayed Chevalley basis of g(G2): (row, column, coefficient) on the
# labels 1, 2, 3, 0, -3, -2, -1
DISPLAYED_G2_BASIS = {
    (1, 0): [(1, 2, 1), (3, 0, -2), (0, -3, 1), (-2, -1, -1)],
    (0, 1): [(2, 3, 1), (-3, -2, -1)],
    (1, 1): [(1, 3, 1), (2, 0, 2), (0, -2, -1), (-3, -1, -1)],
    (2, 1): [(1, 0, 2), (2, -3, -1), (3, -2, 1), (0, -1, -1)],
    (3, 1): [(1, -3, -1), (3, -1, 1)],
    (3, 2): [(1, -2, -1), (2, -1, 1)],
}
DISPLAYED_H_ALPHA = [1, -1, 2, 0, -2, 1, -1]
DISPLAYED_H_BETA = [0, 1, -1, 0, 1, -1, 0]


def _rng(seed, *parts) -> random.Random:
    return random.Random(":".join(str(p) for p in (seed, *parts)))


def _elem(R, rng, nonzero=False):
    return R.elem(R.random_payload(rng, 1, nonzero=nonzero))


# relation suites ---------------------------------------------------------------------

def relation_checks(samples: int = 500, seed=0) -> list[Check]:
    checks = []
    for tag in SUZUKI_RINGS:
        checks += suzuki.suzuki_relation_suite(ring_from_tag(tag), samples=samples, seed=seed)
    for tag in REE_RINGS:
        checks += ree.ree_relation_suite(ring_from_tag(tag), samples=samples, seed=seed)
    return checks


# membership / generator coherence -------------------------------------------------------

def _group(kind, ring):
    return suzuki.SuzukiGroup(ring) if kind == "suzuki" else ree.ReeGroup(ring)


def membership_check(kind: str, tag: str, trials: int = 1000, seed=0) -> list[Check]:
    """Generators certify as members; random words in them and their inverses stay members."""
    R = ring_from_tag(tag)
    G = _group(kind, R)
    rng = _rng(seed, "membership", kind, tag)
    params = {"group": kind, "ring": tag, "seed": seed}

    def gen():
        c = rng.randrange(4)
        if c == 0:
            return "xplus", G.xplus_mat(*[_elem(R, rng) for _ in range(G.nparams)])
        if c == 1:
            return "xminus", G.xminus_mat(*[_elem(R, rng) for _ in range(G.nparams)])
        if c == 2:
            return "h", G.h_mat(_elem(R, rng, nonzero=True))
        return "w0", G.w0_mat()

    gens = [{"name": n, "g": m} for n, m in (gen() for _ in range(4 * trials // 10 or 1))]
    gen_check = run_identity("generators_are_members", dict(params, trials=len(gens)), gens,
                             lambda name, g: G.is_member(g))

    words = []
    for _ in range(trials):
        g = Mat.identity(R, G.dim)
        for _ in range(rng.randrange(1, 5)):
            _, m = gen()
            g = g @ (m.inv() if rng.random() < 0.5 else m)
        words.append({"g": g})
    word_check = run_identity("products_are_members", dict(params, trials=trials), words,
                              lambda g: G.is_member(g))
    return [gen_check, word_check]


# mu-laws ------------------------------------------------------------------------------

def suzuki_law(root, xi):
    return suzuki.c2_xroot(suzuki.sigma(root), xi if suzuki.is_long(root) else xi * xi)


def ree_law(root, xi):
    return ree.g2_xroot(ree.sigma(root), (xi ** ree.law_exponent(root)) * ree.law_sign(root))


def mu_law_checks(kind: str, tag: str, per_root: int = 50, products: int = 100, seed=0) -> list[Check]:
    R = ring_from_tag(tag)
    if kind == "suzuki":
        roots, xroot, mu, law = suzuki.ROOTS, suzuki.c2_xroot, suzuki.mu_image, suzuki_law
    else:
        roots, xroot, mu, law = ree.ROOTS, ree.g2_xroot, ree.g2_mu_image, ree_law
    rng = _rng(seed, "mu-law", kind, tag)
    params = {"group": kind, "ring": tag, "seed": seed}
    cases = [{"root": r, "xi": _elem(R, rng)} for r in roots for _ in range(per_root)]
    law_check = run_identity("mu_generator_law", dict(params, per_root=per_root), cases,
                             lambda root, xi: mu(xroot(root, xi)) == law(root, xi))

    rng = _rng(seed, "mu-square", kind, tag)
    words = []
    for _ in range(products):
        g = Mat.identity(R, 4 if kind == "suzuki" else 7)
        for _ in range(rng.randrange(1, 6)):
            g = g @ xroot(rng.choice(roots), _elem(R, rng))
        words.append({"g": g})
    sq_check = run_identity("mu_squared_is_frobenius", dict(params, products=products), words,
                            lambda g: mu(mu(g)) == g.frobenius())
    return [law_check, sq_check]


# G2 foundations -------------------------------------------------------------------------

def g2_foundation_checks() -> list[Check]:
    checks = []
    ok = all(ree.ROOT_VECTORS[r] == {(ree.IDX[a], ree.IDX[b]): c for a, b, c in entries}
             for r, entries in DISPLAYED_G2_BASIS.items())
    # negative root vectors are -P e P
    for r in ree.POSITIVE_ROOTS:
        neg = {(6 - i, 6 - j): -v for (i, j), v in ree.ROOT_VECTORS[r].items()}
        ok = ok and ree.ROOT_VECTORS[(-r[0], -r[1])] == neg
    checks.append(Check("g2_basis_matches_display", {}, "pass" if ok else "fail"))

    def diag(vals):
        return {(i, i): v for i, v in enumerate(vals) if v}

    ha = ree._ibracket(ree.ROOT_VECTORS[(1, 0)], ree.ROOT_VECTORS[(-1, 0)])
    hb = ree._ibracket(ree.ROOT_VECTORS[(0, 1)], ree.ROOT_VECTORS[(0, -1)])
    ok = ha == diag(DISPLAYED_H_ALPHA) and hb == diag(DISPLAYED_H_BETA)
    checks.append(Check("g2_cartan_brackets", {"ring": "Z"}, "pass" if ok else "fail"))

    for tag in ("gf3", "gf27"):
        R = ring_from_tag(tag)
        rng = _rng(0, "g2-forms", tag)
        cases = [{"root": r, "xi": _elem(R, rng)} for r in ree.ROOTS for _ in range(3)]
        checks.append(run_identity("g2_generators_preserve_forms", {"ring": tag}, cases,
                                   lambda root, xi: ree.g2_check_forms(ree.g2_xroot(root, xi))))

    R = GF(3)
    flat = Mat.raw(R, tuple(tuple(x for row in m.e for x in row) for m in ree.chevalley_basis(R)))
    r = rank(flat)
    checks.append(Check("g2_basis_rank_mod3", {"rank": r}, "pass" if r == 14 else "fail"))
    return checks


# isogenies and mixed groups --------------------------------------------------------------

def isogeny_checks(seed=0, ranks=(2, 3), tags=ISOGENY_RINGS, trials: int = 100) -> list[Check]:
    checks = []
    for tag in tags:
        R = ring_from_tag(tag)
        for n in ranks:
            checks += isogeny.isogeny_suite(n, R, trials, seed)
    for n in ranks:
        checks.append(isogeny.laplace_check(n, GF(2), 10, seed))
    return checks


def mixed_checks(seed=0) -> list[Check]:
    checks = []
    pair = mixed.ring_pair("f2t2-f2t")
    F = pair.F
    for kind in "BC":
        longs, shorts = mixed.default_pair_params(pair, kind)
        gens = mixed.mixed_elementary_gens(f"{kind}2", pair, longs, shorts)
        checks.append(run_identity(f"mixed_{kind}2_generators_are_members", {"pair": pair.name},
                                   [{"g": g} for g in gens],
                                   lambda g: mixed.mixed_member("bc", g, pair).member))
    t = F.elem(F.parse("t"))
    outsider = isogeny.bn_xroot((1, 0), t, 2)
    verdict = mixed.mixed_member_bc(outsider, pair)
    status = "pass" if not verdict.member and verdict.entry is not None else "fail"
    checks.append(Check("mixed_B2_nonmember_rejected", {"pair": pair.name}, status, verdict.witness()))

    rng = _rng(seed, "mixed-closure")
    longs, shorts = mixed.default_pair_params(pair, "B")
    gens = mixed.mixed_elementary_gens("B2", pair, longs, shorts)
    words = []
    for _ in range(20):
        g = Mat.identity(F, 5)
        for _ in range(rng.randrange(1, 5)):
            g = g @ rng.choice(gens)
        words.append({"g": g})
    checks.append(run_identity("mixed_B2_products_are_members", {"pair": pair.name, "seed": seed}, words,
                               lambda g: mixed.mixed_member_bc(g, pair).member))

    g2pair = mixed.ring_pair("gf3-gf27")
    longs, shorts = mixed.default_pair_params(g2pair, "G")
    gens = mixed.mixed_elementary_gens("G2", g2pair, longs, shorts)
    checks.append(run_identity("mixed_G2_generators_are_members", {"pair": g2pair.name},
                               [{"g": g} for g in gens],
                               lambda g: mixed.mixed_member_g2(g, g2pair).member))
    z = g2pair.F.elem(g2pair.F.generator)
    verdict = mixed.mixed_member_g2(ree.g2_xroot((1, 0), z), g2pair)
    status = "pass" if not verdict.member else "fail"
    checks.append(Check("mixed_G2_nonmember_rejected", {"pair": g2pair.name}, status, verdict.witness()))
    return checks


# group lab ----------------------------------------------------------------------------------

def lab_report(name: str, order=True, derived=False, simple: int = 0, census=False,
               threads: int = 1, seed=0, allow_large=False, cache=None):
    """Enumerate a named group and run the requested checks; returns (checks, result)."""
    G, gens = group_lab.lab_group(name)
    limit = group_lab.LARGE_LIMIT if allow_large else group_lab.DEFAULT_LIMIT
    t = group_lab.bfs_closure(gens, limit, threads)
    if cache:
        group_lab.save_table(t, cache)
    result = {"order": t.order}
    checks = []
    if order:
        expected = group_lab.closed_form_order(name)
        checks.append(Check("order", {"group": name, "order": t.order, "closed_form": expected},
                            "pass" if t.order == expected else "fail"))
    if derived or simple:
        d = group_lab.commutator_subgroup(t, threads=threads)
        result["derived_order"] = d.order
        if derived:
            checks.append(Check("derived_subgroup", {"group": name, "order": d.order},
                                "pass" if t.order % d.order == 0 else "fail"))
        if simple:
            # a non-perfect group is not simple; test its derived subgroup instead
            target = t if d.order == t.order else d
            c = group_lab.simplicity_check(target, simple, seed)
            c.params["group"] = name if target is t else f"[{name},{name}]"
            checks.append(c)
    if census:
        c = group_lab.bruhat_census(t, G.bruhat, G.w0_mat())
        c.params["group"] = name
        checks.append(c)
    return checks, result


def lab_checks(name: str, **kwargs) -> list[Check]:
    return lab_report(name, **kwargs)[0]


def verify_all(seed=0, samples: int = 500, threads: int = 1) -> list[Check]:
    checks = relation_checks(samples, seed)
    for kind, tags in (("suzuki", SUZUKI_RINGS), ("ree", REE_RINGS)):
        for tag in tags:
            checks += membership_check(kind, tag, 1000 if tag in ("gf8", "gf27") else 200, seed)
            checks += mu_law_checks(kind, tag, seed=seed)
    checks += lab_checks("sz2", derived=True, census=True, threads=threads, seed=seed)
    checks += lab_checks("ree3", derived=True, simple=20, census=True, threads=threads, seed=seed)
    checks += lab_checks("sz8", derived=True, simple=20, census=True, threads=threads, seed=seed)
    checks += g2_foundation_checks()
    checks += isogeny_checks(seed)
    checks += mixed_checks(seed)
    return checks
