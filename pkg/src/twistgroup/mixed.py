"""Mixed groups: long and short root parameters from different rings.

For a pair E <= F of characteristic p the elementary mixed groups are

* B_n: long parameters in F^p & E, short parameters in E (this is the
  intersection of G(B_n, E) with theta(G(C_n, F)));
* C_n: long parameters in E^p, short parameters in F^p (the rho-image of
  the B_n group above);
* G_2: long parameters in F^3 & E, short parameters in E (the intersection
  of G(G_2, E) with the mu-image of G(G_2, F)).

The ambient groups are tested by pulling back along the polynomial maps
whose composite is the Frobenius: take an entrywise p-th root in F and check
that the map sends it back onto g.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import isogeny, ree
from .errors import NotAPthPower, ParamNotInSubring, WrongCharacteristic
from .linalg import Mat
from .rings import RatFunc, Ring, RingElem, ring_from_tag


@dataclass(frozen=True)
class RingPair:
    """A subring E of F given by a membership predicate on F-payloads."""

    name: str
    F: Ring
    in_E: object = field(compare=False)

    @property
    def p(self) -> int:
        return self.F.p

    def contains(self, x) -> bool:
        x = self.F(x)
        return bool(self.in_E(x.v))

    def is_pth_power(self, x) -> bool:
        x = self.F(x)
        try:
            self.F.pth_root(x.v)
        except NotAPthPower:
            return False
        return True

    def frobenius_inside(self, samples: int = 200, seed=0) -> bool:
        """phi(F) <= E on random samples of F."""
        rng = random.Random(f"{seed}:{self.name}:frobenius-inside")
        F = self.F
        return all(self.in_E(F.frob(F.random_payload(rng))) for _ in range(samples))


def _is_square_class(F: Ring):
    def member(v) -> bool:
        try:
            F.pth_root(v)
        except NotAPthPower:
            return False
        return True
    return member


def _subfield(F: Ring, d: int):
    return lambda v: F.contains_subfield_element(v, d)


def ring_pair(name: str) -> RingPair:
    """``f2t2-f2t`` (E = F_2(t^2) in F_2(t)), ``gf3-gf27``, or a single ring tag (E = F)."""
    key = name.strip().lower()
    if key == "f2t2-f2t":
        F = RatFunc(2)
        return RingPair(key, F, _is_square_class(F))
    if key.startswith("gf") and "-" in key:
        small, big = key.split("-", 1)
        F = ring_from_tag(big)
        E = ring_from_tag(small)
        if E.p != F.p or F.k % E.k:
            raise ValueError(f"{small} is not a subfield of {big}")
        return RingPair(key, F, _subfield(F, E.k))
    F = ring_from_tag(key)
    return RingPair(key, F, lambda v: True)


@dataclass
class MixedMembership:
    member: bool
    preimage: Mat | None = None
    reason: str = ""
    entry: tuple | None = None

    def witness(self) -> dict:
        if self.member:
            return {"preimage": self.preimage.to_json()}
        out = {"reason": self.reason}
        if self.entry is not None:
            out["entry"] = list(self.entry)
        return out


# elementary generators ---------------------------------------------------------

def _parse_type(phi: str):
    phi = phi.strip().upper()
    kind, rank = phi[0], phi[1:]
    if kind not in "BCG" or not rank.isdigit():
        raise ValueError(f"unknown root system {phi!r}")
    n = int(rank)
    if kind == "G" and n != 2:
        raise ValueError("only G2 is supported")
    if kind in "BC" and n < 2:
        raise ValueError("rank must be at least 2")
    return kind, n


def _require(ok: bool, what: str, xi: RingElem):
    if not ok:
        raise ParamNotInSubring(f"{what} parameter {xi} is outside its subring")


def mixed_elementary_gens(phi: str, pair: RingPair, long_params, short_params) -> list[Mat]:
    """x_a(xi) for every root a and every parameter of matching length."""
    kind, n = _parse_type(phi)
    F = pair.F
    longs = [F(x) for x in long_params]
    shorts = [F(x) for x in short_params]
    if kind in "BC" and pair.p != 2:
        raise WrongCharacteristic("mixed B_n / C_n groups need characteristic 2")
    if kind == "G" and pair.p != 3:
        raise WrongCharacteristic("mixed G2 groups need characteristic 3")

    def in_p_power_of_E(x):
        if not pair.is_pth_power(x):
            return False
        return pair.contains(F.elem(F.pth_root(x.v)))

    gens = []
    if kind == "B":
        for x in longs:
            _require(pair.contains(x) and pair.is_pth_power(x), "long", x)
        for x in shorts:
            _require(pair.contains(x), "short", x)
        for r in isogeny.b_roots(n):
            for x in shorts if isogeny.is_b_short(r) else longs:
                gens.append(isogeny.bn_xroot(r, x, n))
    elif kind == "C":
        for x in longs:
            _require(in_p_power_of_E(x), "long", x)
        for x in shorts:
            _require(pair.is_pth_power(x), "short", x)
        for r in isogeny.c_roots(n):
            for x in longs if isogeny.is_c_long(r) else shorts:
                gens.append(isogeny.cn_xroot(r, x, n))
    else:
        for x in longs:
            _require(pair.contains(x) and pair.is_pth_power(x), "long", x)
        for x in shorts:
            _require(pair.contains(x), "short", x)
        for r in ree.ROOTS:
            for x in longs if ree.is_long(r) else shorts:
                gens.append(ree.g2_xroot(r, x))
    return gens


# ambient membership ----------------------------------------------------------------

def _outside_E(g: Mat, pair: RingPair):
    for i, row in enumerate(g.e):
        for j, v in enumerate(row):
            if not pair.in_E(v):
                return (i, j)
    return None


def _entrywise_root(m: Mat):
    """(root matrix, None) or (None, failing entry)."""
    R = m.ring
    rows = []
    for i, row in enumerate(m.e):
        out = []
        for j, v in enumerate(row):
            try:
                out.append(R.pth_root(v))
            except NotAPthPower:
                return None, (i, j)
        rows.append(tuple(out))
    return Mat.raw(R, tuple(rows)), None


def mixed_member_bc(g: Mat, pair: RingPair) -> MixedMembership:
    """g in G(B_n, E) & theta(G(C_n, F)); the preimage is sqrt(rho(g)) in Sp_2n(F)."""
    if g.ring is not pair.F:
        return MixedMembership(False, reason=f"matrix is over {g.ring.tag}, not {pair.F.tag}")
    if pair.p != 2:
        raise WrongCharacteristic("mixed B_n membership needs characteristic 2")
    bad = _outside_E(g, pair)
    if bad is not None:
        return MixedMembership(False, reason="entry outside E", entry=bad)
    if not isogeny.is_orthogonal(g):
        return MixedMembership(False, reason="matrix does not preserve the quadratic form")
    try:
        r = isogeny.rho(g)
    except Exception as exc:
        return MixedMembership(False, reason=str(exc))
    h, bad = _entrywise_root(r)
    if h is None:
        return MixedMembership(False, reason="rho(g) entry has no square root in F", entry=bad)
    image = isogeny.spin_to_vector(isogeny.theta(h))
    bad = image.first_difference(g)
    if bad is not None:
        return MixedMembership(False, reason="theta(sqrt(rho(g))) differs from g", entry=bad)
    return MixedMembership(True, preimage=h)


def mixed_member_c(g: Mat, pair: RingPair) -> MixedMembership:
    """g in rho(G(B_n, F^2, E)); the preimage is the B_n element theta(sqrt(g))."""
    if g.ring is not pair.F:
        return MixedMembership(False, reason=f"matrix is over {g.ring.tag}, not {pair.F.tag}")
    if not isogeny.is_symplectic(g):
        return MixedMembership(False, reason="matrix is not symplectic")
    h, bad = _entrywise_root(g)
    if h is None:
        return MixedMembership(False, reason="entry has no square root in F", entry=bad)
    b = isogeny.spin_to_vector(isogeny.theta(h))
    bad = _outside_E(b, pair)
    if bad is not None:
        return MixedMembership(False, reason="B_n preimage has an entry outside E", entry=bad)
    bad = isogeny.rho(b).first_difference(g)
    if bad is not None:
        return MixedMembership(False, reason="rho of the preimage differs from g", entry=bad)
    return MixedMembership(True, preimage=b)


def mixed_member_g2(g: Mat, pair: RingPair) -> MixedMembership:
    """g in G(G_2, E) & mu(G(G_2, F)); the preimage is the cube root of mu(g)."""
    if g.ring is not pair.F:
        return MixedMembership(False, reason=f"matrix is over {g.ring.tag}, not {pair.F.tag}")
    if pair.p != 3:
        raise WrongCharacteristic("mixed G2 membership needs characteristic 3")
    if g.shape != (7, 7):
        return MixedMembership(False, reason="expected a 7x7 matrix")
    bad = _outside_E(g, pair)
    if bad is not None:
        return MixedMembership(False, reason="entry outside E", entry=bad)
    if not ree.g2_check_forms(g):
        return MixedMembership(False, reason="matrix does not preserve the G2 forms")
    try:
        mu = ree.g2_mu_image(g)
    except Exception as exc:
        return MixedMembership(False, reason=str(exc))
    h, bad = _entrywise_root(mu)
    if h is None:
        return MixedMembership(False, reason="mu(g) entry has no cube root in F", entry=bad)
    if not ree.g2_check_forms(h):
        return MixedMembership(False, reason="cube root of mu(g) does not preserve the G2 forms")
    bad = ree.g2_mu_image(h).first_difference(g)
    if bad is not None:
        return MixedMembership(False, reason="mu of the preimage differs from g", entry=bad)
    return MixedMembership(True, preimage=h)


def mixed_member(kind: str, g: Mat, pair: RingPair) -> MixedMembership:
    kind = kind.lower()
    if kind == "bc":
        # B_n matrices are odd-sized, C_n matrices even-sized
        return mixed_member_bc(g, pair) if g.rows % 2 else mixed_member_c(g, pair)
    if kind == "g2":
        return mixed_member_g2(g, pair)
    raise ValueError(f"unknown mixed type {kind!r}")


def default_pair_params(pair: RingPair, kind: str):
    """Long and short parameter lists used by the CLI and the acceptance run."""
    F = pair.F
    if pair.name == "f2t2-f2t":
        t2 = F.elem(F.parse("t^2"))
        t4 = F.elem(F.parse("t^4"))
        if kind == "B":
            return [t2, F(1) + t2, t2.inverse()], [t2, F(1) + t4, t4 / (F(1) + t2)]
        # C: long in E^2, short in F^2
        t = F.elem(F.parse("t"))
        return [t4, F(1) + t4], [t2, F(1) + t2, (t * t) / (F(1) + t2)]
    # finite pairs: use every element of E
    elems = [F.elem(v) for v in F.elements() if pair.in_E(v) and v != F.zero]
    longs = [x for x in elems if pair.is_pth_power(x)]
    return longs, elems


__all__ = [
    "MixedMembership", "RingPair", "default_pair_params", "mixed_elementary_gens",
    "mixed_member", "mixed_member_bc", "mixed_member_c", "mixed_member_g2", "ring_pair",
]
