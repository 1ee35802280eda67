"""Machinery shared by the Suzuki (C2) and small Ree (G2) groups.

A twisted group is cut out of the Chevalley group by the condition that
applying tau entrywise to g in the minimal representation gives the matrix of
g in the companion representation (the "mu-image"). Both concrete groups have
rank one: U is parametrized by a tuple of ring elements, H by one unit, and
the Weyl group representatives are {1, w0}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import NonUnit, NotFormPreserving, NotMember
from .linalg import Mat
from .report import Check, run_identity
from .rings import Ring, RingElem, TitsEndo, tits_endomorphism


@dataclass(frozen=True)
class TwistedElement:
    """A group element with its mu-image; ``mu`` equals tau applied to ``m``."""

    m: Mat
    mu: Mat
    tau: TitsEndo

    def __matmul__(self, other: "TwistedElement") -> "TwistedElement":
        return TwistedElement(self.m @ other.m, self.mu @ other.mu, self.tau)

    def inv(self) -> "TwistedElement":
        return TwistedElement(self.m.inv(), self.mu.inv(), self.tau)

    def __eq__(self, other):
        if not isinstance(other, TwistedElement):
            return NotImplemented
        return self.m == other.m

    def __hash__(self):
        return hash(self.m)


@dataclass(frozen=True)
class BruhatParts:
    """g = u h w v; ``w`` is None for the identity Weyl element."""

    u: TwistedElement
    h: TwistedElement
    w: TwistedElement | None
    v: TwistedElement
    u_params: tuple
    eps: RingElem
    v_params: tuple

    @property
    def big_cell(self) -> bool:
        return self.w is not None

    def reassemble(self) -> Mat:
        g = self.u.m @ self.h.m
        if self.w is not None:
            g = g @ self.w.m
        return g @ self.v.m


def tpow(x: RingElem, tau: TitsEndo, i: int, j: int) -> RingElem:
    """x^i * tau(x)^j (negative exponents need x to be a unit)."""
    return (x ** i) * (tau(x) ** j)


def tau_map(m: Mat, tau: TitsEndo) -> Mat:
    return m.map(tau.apply)


class TwistedGroup:
    """Common interface; subclasses supply the representation-specific parts."""

    char: int
    dim: int
    nparams: int
    name: str

    def __init__(self, ring: Ring, tau: TitsEndo | None = None):
        self.ring = ring
        self.tau = tau or tits_endomorphism(ring)
        if self.tau.ring is not ring:
            raise ValueError("tau lives on a different ring")
        self._w0 = None
        self._param_steps = None
        # U elements by parameter payloads; only kept for finite fields, where
        # the Bruhat census revisits the same parameters many times
        q = getattr(ring, "q", None)
        self._u_cache = {} if q and q ** self.nparams <= 10 ** 6 else None

    # to be provided ------------------------------------------------------
    def mu_image(self, m: Mat) -> Mat:
        raise NotImplementedError

    def check_forms(self, m: Mat) -> bool:
        raise NotImplementedError

    def xplus_mat(self, *params) -> Mat:
        raise NotImplementedError

    def h_mat(self, eps) -> Mat:
        raise NotImplementedError

    def w0_mat(self) -> Mat:
        raise NotImplementedError

    # shared -----------------------------------------------------------------
    def r(self, x) -> RingElem:
        return self.ring(x)

    def tp(self, x, i, j) -> RingElem:
        return tpow(self.r(x), self.tau, i, j)

    def xminus_mat(self, *params) -> Mat:
        w = self.w0_mat()
        return w @ self.xplus_mat(*params) @ w.inv()

    def certify(self, m: Mat) -> TwistedElement:
        """Membership test; returns the certified element or raises NotMember."""
        if m.ring is not self.ring or m.shape != (self.dim, self.dim):
            raise NotMember(f"expected a {self.dim}x{self.dim} matrix over {self.ring.tag}")
        if not self.check_forms(m):
            raise NotFormPreserving("matrix does not preserve the defining forms")
        mu = self.mu_image(m)
        tm = tau_map(m, self.tau)
        bad = tm.first_difference(mu)
        if bad is not None:
            i, j = bad
            raise NotMember(
                f"tau(g) and mu(g) differ at {bad}: {self.ring.format(tm.e[i][j])} vs {self.ring.format(mu.e[i][j])}",
                entry=bad,
            )
        return TwistedElement(m, mu, self.tau)

    def is_member(self, m: Mat) -> bool:
        try:
            self.certify(m)
        except NotMember:
            return False
        return True

    def _trusted(self, m: Mat) -> TwistedElement:
        # elements built from the parametrizations; tests certify them separately
        return TwistedElement(m, tau_map(m, self.tau), self.tau)

    def xplus(self, *params) -> TwistedElement:
        return self.certify(self.xplus_mat(*params))

    def xminus(self, *params) -> TwistedElement:
        return self.certify(self.xminus_mat(*params))

    def h(self, eps) -> TwistedElement:
        e = self.r(eps)
        if not e.is_unit():
            raise NonUnit(f"{e} is not a unit")
        return self.certify(self.h_mat(e))

    def w0(self) -> TwistedElement:
        return self.certify(self.w0_mat())

    def identity(self) -> TwistedElement:
        i = Mat.identity(self.ring, self.dim)
        return TwistedElement(i, i, self.tau)

    # Bruhat ---------------------------------------------------------------
    def _steps(self):
        """Column and unit-coefficient used to read off each U parameter.

        Row 0 of xplus(p_1..p_k) has p_k entering column c_k linearly with
        coefficient d_k once p_1..p_{k-1} are fixed; we locate (c_k, d_k) from
        the matrices themselves and verify every extraction by reassembly.
        """
        if self._param_steps is None:
            R = self.ring
            zero = [R(0)] * self.nparams
            base = self.xplus_mat(*zero)
            steps = []
            for k in range(self.nparams):
                ps = list(zero)
                ps[k] = R(1)
                row = self.xplus_mat(*ps).e[0]
                col = next(c for c in range(1, self.dim) if row[c] != base.e[0][c])
                steps.append((col, R.sub(row[col], base.e[0][col])))
            self._param_steps = steps
        return self._param_steps

    def _u(self, *params) -> Mat:
        if self._u_cache is None:
            return self.xplus_mat(*params)
        key = tuple(self.r(x).v for x in params)
        m = self._u_cache.get(key)
        if m is None:
            m = self._u_cache[key] = self.xplus_mat(*params)
        return m

    def params_from_row(self, row) -> tuple:
        """U parameters of the element of U whose first row is ``row``."""
        R = self.ring
        params = [R(0)] * self.nparams
        for k, (col, d) in enumerate(self._steps()):
            partial = self._u(*params).e[0][col]
            params[k] = RingElem(R, R.mul(R.sub(row[col], partial), R.inv(d)))
        return tuple(params)

    def uparams(self, u: Mat) -> tuple:
        """Parameters of an element of U; raises NotMember if u is not in U."""
        params = self.params_from_row(u.e[0])
        if self._u(*params) != u:
            raise NotMember("not an element of U")
        return params

    def corner_eps(self, c: RingElem) -> RingElem:
        """epsilon from the bottom-left entry of g = u h(eps) w0 v."""
        w = self.w0_mat()
        sign = w[self.dim - 1, 0]
        # row n-1 of h(eps) w0 v starts with eps^-1 * sign
        return sign / c

    def bruhat(self, g) -> BruhatParts:
        m = g.m if isinstance(g, TwistedElement) else g
        R, n = self.ring, self.dim
        if not R.is_field:
            raise ValueError("Bruhat decomposition needs a field")
        ident = self.identity()
        if m.is_upper_triangular():
            eps = m[0, 0]
            h = self._trusted(self.h_mat(eps))
            u = m @ h.m.inv()
            up = self.uparams(u)
            zero = tuple(R(0) for _ in range(self.nparams))
            parts = BruhatParts(self._trusted(u), h, None, ident, up, eps, zero)
        else:
            c = m[n - 1, 0]
            if not c:
                raise NotMember("neither in B nor in the big cell")
            eps = self.corner_eps(c)
            # row n-1 of g is c * (row 0 of v)
            row = [R.mul(x, R.inv(c.v)) for x in m.e[n - 1]]
            vp = self.params_from_row(row)
            v = self._u(*vp)
            h = self._trusted(self.h_mat(eps))
            w = self._trusted(self.w0_mat())
            u = m @ v.inv() @ w.m.inv() @ h.m.inv()
            up = self.uparams(u)
            parts = BruhatParts(self._trusted(u), h, w, self._trusted(v), up, eps, vp)
        if parts.reassemble() != m:
            raise NotMember("Bruhat reassembly failed")
        return parts


# relation suites -------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    """A displayed relation, checked on random arguments.

    ``elems`` names arguments drawn from the whole ring (one letter each);
    ``units`` maps further argument names to a filter on nonzero elements.
    ``degenerate`` is an extra argument dict evaluated first (or None).
    """

    name: str
    elems: str
    units: dict
    predicate: object
    degenerate: dict | None = field(default=None)


def any_unit(e: RingElem) -> bool:
    return True


def _draw_unit(R: Ring, rng: random.Random, ok, tries: int = 1000):
    for _ in range(tries):
        e = R.elem(R.random_payload(rng, nonzero=True))
        if ok(e):
            return e
    return None


def relation_suite(G: TwistedGroup, identities, samples: int, seed=0, degenerate=True) -> list[Check]:
    """Evaluate each identity on ``samples`` random argument tuples.

    Arguments come from a generator seeded by (seed, group, ring, identity
    name), so a report does not depend on evaluation order. When a unit
    filter admits nothing in the ring (e.g. eps != 1 over GF(2)) the identity
    is reported with zero evaluations.
    """
    R = G.ring
    checks = []
    for ident in identities:
        rng = random.Random(f"{seed}:{G.name}:{R.tag}:{ident.name}")
        params = {"ring": R.tag, "samples": samples, "seed": seed}
        trials = []
        if degenerate and ident.degenerate is not None:
            trials.append({k: R(v) for k, v in ident.degenerate.items()})
        for _ in range(samples):
            args = {n: R.elem(R.random_payload(rng)) for n in ident.elems}
            for name, ok in ident.units.items():
                args[name] = _draw_unit(R, rng, ok)
            if any(v is None for v in args.values()):
                break
            trials.append(args)
        checks.append(run_identity(ident.name, params, trials, ident.predicate))
    return checks
