import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import gf2_mul, gf2_pow, gf3_mul, gf3_pow
from twistgroup.errors import NoTitsEndo, NonUnit, NotAPthPower, RingMismatch
from twistgroup.rings import (
    GF, PolyRing, RatFunc, RingElem, field_arith, frobenius, p_th_root, ring_from_tag, sample,
    tits_apply, tits_endomorphism,
)

RING_TAGS = ["gf2", "gf4", "gf8", "gf32", "gf3", "gf27", "gf243", "f2[t]", "f3[t]", "f2t", "f3t"]

# Conway moduli as bit masks / digit lists for the oracles
GF8_MASK = 0b1011       # x^3 + x + 1
GF32_MASK = 0b100101    # x^5 + x^2 + 1
GF27_MOD = [1, 2, 0, 1]  # x^3 + 2x + 1


def rand(R, rng, nonzero=False):
    return R.elem(R.random_payload(rng, 2, nonzero=nonzero))


# moduli and construction ---------------------------------------------------

def test_conway_moduli():
    assert GF(8).modulus == (1, 1, 0, 1)
    assert GF(32).modulus == (1, 0, 1, 0, 0, 1)
    assert GF(27).modulus == (1, 2, 0, 1)
    assert GF(243).modulus == (1, 2, 0, 0, 0, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        GF(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2


def test_rings_are_singletons():
    assert GF(8) is GF(8)
    assert RatFunc(2) is ring_from_tag("f2t")
    assert PolyRing(2) is ring_from_tag("f2[t]")


def test_gf8_multiplication_matches_oracle():
    F = GF(8)
    for a in range(8):
        for b in range(8):
            assert F.mul(a, b) == gf2_mul(a, b, GF8_MASK)


def test_gf32_multiplication_matches_oracle():
    F = GF(32)
    for a in range(32):
        for b in range(32):
            assert F.mul(a, b) == gf2_mul(a, b, GF32_MASK)


def test_gf27_multiplication_matches_oracle():
    F = GF(27)
    for a in range(27):
        for b in range(27):
            assert F.mul(a, b) == gf3_mul(a, b, GF27_MOD)


# field_arith ------------------------------------------------------------------

def test_inverse_of_x_in_gf8():
    F = GF(8)
    x = F.elem(F.parse("x"))
    inv = field_arith("inv", x)
    assert F.format(inv.v) == "x^2+1"
    # derived: x * (x^2 + 1) = x^3 + x = 1 mod x^3 + x + 1
    assert gf2_mul(0b010, 0b101, GF8_MASK) == 1


def test_one_plus_one_in_char_two():
    for tag in ("gf2", "gf8", "f2t", "f2[t]"):
        R = ring_from_tag(tag)
        assert field_arith("add", R(1), R(1)) == R(0)


def test_inverse_of_t():
    R = RatFunc(2)
    t = R.elem(R.parse("t"))
    assert R.format(field_arith("inv", t).v) == "1/t"


def test_nonunit_inverse_raises():
    with pytest.raises(NonUnit):
        field_arith("inv", GF(8)(0))
    P = PolyRing(2)
    with pytest.raises(NonUnit):
        field_arith("inv", P.elem(P.parse("t")))
    with pytest.raises(NonUnit):
        field_arith("inv", RatFunc(2)(0))


def test_polynomial_units_invert():
    P = PolyRing(3)
    assert field_arith("inv", P(2)) == P(2)


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        field_arith("add", GF(8)(1), GF(32)(1))
    with pytest.raises(RingMismatch):
        GF(8)(1) + GF(4)(1)


# frobenius / tits / roots -------------------------------------------------------------

def test_frobenius_examples():
    F = GF(8)
    for a in range(8):
        assert frobenius(F.elem(a)).v == gf2_mul(a, a, GF8_MASK)
    R = RatFunc(2)
    assert R.format(frobenius(R.elem(R.parse("t+1"))).v) == "t^2+1"
    G = GF(27)
    g = G.elem(G.generator)
    assert frobenius(g) == g ** 3


def test_tits_on_gf8():
    F = GF(8)
    tau = tits_endomorphism(F)
    assert tau.exponent == 4
    x = F.elem(F.parse("x"))
    assert F.format(tits_apply(tau, x).v) == "x^2+x"
    for a in range(8):
        assert tau.apply(a) == gf2_pow(a, 4, GF8_MASK)


def test_tits_trivial_cases():
    assert tits_apply(tits_endomorphism(GF(2)), GF(2)(1)) == GF(2)(1)
    assert tits_apply(tits_endomorphism(GF(2)), GF(2)(0)) == GF(2)(0)
    assert tits_apply(tits_endomorphism(GF(27)), GF(27)(1)) == GF(27)(1)


def test_tits_on_gf27_matches_oracle():
    F = GF(27)
    tau = tits_endomorphism(F)
    assert tau.exponent == 9
    for a in range(27):
        assert tau.apply(a) == gf3_pow(a, 9, GF27_MOD)


@pytest.mark.parametrize("tag", ["gf8", "gf32", "gf27", "gf243"])
def test_tits_squares_to_frobenius(tag):
    F = ring_from_tag(tag)
    tau = tits_endomorphism(F)
    for a in range(F.q):
        assert tau.apply(tau.apply(a)) == F.frob(a)


@pytest.mark.parametrize("tag", ["gf4", "gf9", "f2t", "f2[t]"])
def test_no_tits_endomorphism(tag):
    with pytest.raises(NoTitsEndo):
        tits_endomorphism(ring_from_tag(tag))


def test_pth_root_examples():
    R = RatFunc(2)
    assert R.format(p_th_root(R.elem(R.parse("t^2+1"))).v) == "t+1"
    with pytest.raises(NotAPthPower):
        p_th_root(R.elem(R.parse("t")))
    F = GF(8)
    for a in range(8):
        assert p_th_root(F.elem(a)).v == gf2_pow(a, 4, GF8_MASK)


def test_pth_root_of_fraction_needs_both_parts():
    R = RatFunc(2)
    assert R.format(p_th_root(R.elem(R.parse("t^2/(t^4+1)"))).v) == "t/(t^2+1)"
    with pytest.raises(NotAPthPower):
        p_th_root(R.elem(R.parse("t^2/(t^3+1)")))


# sampling and formatting ---------------------------------------------------------

def test_sample_is_deterministic():
    assert sample(GF(8), 0) == sample(GF(8), 0)
    assert all(sample(GF(2), s).v in (0, 1) for s in range(20))


def test_sample_respects_degree_bound():
    R = RatFunc(2)
    for s in range(50):
        num, den = sample(R, s, degree=2).v
        assert R.K.deg(num) <= 2 and R.K.deg(den) <= 2


@pytest.mark.parametrize("tag", RING_TAGS)
def test_format_parse_round_trip(tag):
    R = ring_from_tag(tag)
    rng = random.Random(tag)
    for _ in range(200):
        x = R.random_payload(rng, 3)
        assert R.parse(R.format(x)) == x


def test_ratfunc_canonical_form():
    R = RatFunc(2)
    a = R.elem(R.parse("(t^2+1)/(t+1)"))
    assert R.format(a.v) == "t+1"
    num, den = R.parse("1/(t+1)")
    assert R.K.lead(den) == 1


# ring axioms --------------------------------------------------------------------------

@pytest.mark.parametrize("tag", RING_TAGS)
def test_ring_axioms(tag):
    R = ring_from_tag(tag)
    rng = random.Random(f"axioms:{tag}")
    n = 10 ** 4 if R.is_field and hasattr(R, "q") else 2000
    for _ in range(n):
        a, b, c = rand(R, rng), rand(R, rng), rand(R, rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == R(0)


@pytest.mark.parametrize("tag", RING_TAGS)
def test_frobenius_is_endomorphism(tag):
    R = ring_from_tag(tag)
    rng = random.Random(f"frob:{tag}")
    for _ in range(1000):
        a, b = rand(R, rng), rand(R, rng)
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert a.frobenius() == a ** R.p


@pytest.mark.parametrize("tag", RING_TAGS)
def test_pth_root_inverts_frobenius(tag):
    R = ring_from_tag(tag)
    rng = random.Random(f"root:{tag}")
    for _ in range(1000):
        a = rand(R, rng)
        assert p_th_root(a.frobenius()) == a
        try:
            r = p_th_root(a)
        except NotAPthPower:
            continue
        assert r.frobenius() == a


def test_ratfunc_axioms_with_small_ratfunc_triples():
    R = RatFunc(3)
    rng = random.Random(3)
    for _ in range(300):
        a, b = rand(R, rng), rand(R, rng, nonzero=True)
        assert (a / b) * b == a


# hypothesis properties --------------------------------------------------------------------

gf32 = st.integers(0, 31).map(lambda v: RingElem(GF(32), v))
gf243 = st.integers(0, 242).map(lambda v: RingElem(GF(243), v))


@given(gf32, gf32)
def test_tits_is_additive_and_multiplicative_gf32(a, b):
    tau = tits_endomorphism(GF(32))
    assert tau(a + b) == tau(a) + tau(b)
    assert tau(a * b) == tau(a) * tau(b)


@given(gf243, gf243)
def test_tits_is_additive_and_multiplicative_gf243(a, b):
    tau = tits_endomorphism(GF(243))
    assert tau(a + b) == tau(a) + tau(b)
    assert tau(a * b) == tau(a) * tau(b)
    assert tau(tau(a)) == a.frobenius()


@settings(max_examples=200)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=6), st.lists(st.integers(0, 1), min_size=1, max_size=6))
def test_ratfunc_inverse(num, den):
    R = RatFunc(2)
    P = R.base
    n, d = P.K.from_coeffs(num), P.K.from_coeffs(den)
    if P.K.is_zero(n) or P.K.is_zero(d):
        return
    x = R.elem(R.make(n, d))
    assert x * x.inverse() == R(1)
