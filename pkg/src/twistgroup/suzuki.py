"""The Suzuki groups: Sp4 in characteristic 2 twisted by a Tits endomorphism.

Sp4 acts on V with ordered basis e1, e2, e-2, e-1 (indices 0..3) and
symplectic Gram matrix antidiag(1, 1, -1, -1). Roots are written as pairs
(i, j) meaning i*alpha + j*beta, with alpha short and beta long.

The companion representation is the 4-dimensional subquotient of the
second exterior power: the kernel of the contraction with the form, modulo
the invariant vector e1^e-1 + e2^e-2. On the basis e1^e2, e1^e-2, e2^e-1,
e-2^e-1 (identified in this order with e1, e2, e-2, e-1) its matrix is the
table of 2x2 minors, and the generator law x_g(s) -> x_{sigma g}(s or s^2)
holds with no extra scaling.
"""

from __future__ import annotations

from .errors import WrongCharacteristic
from .linalg import Mat, commutator
from .report import Check
from .rings import Ring, RingElem, TitsEndo
from .twisted import BruhatParts, Identity, TwistedElement, TwistedGroup, any_unit, relation_suite

ALPHA, BETA, ALPHA_BETA, TWO_ALPHA_BETA = (1, 0), (0, 1), (1, 1), (2, 1)
POSITIVE_ROOTS = [ALPHA, BETA, ALPHA_BETA, TWO_ALPHA_BETA]
ROOTS = POSITIVE_ROOTS + [(-i, -j) for i, j in POSITIVE_ROOTS]
LONG_ROOTS = {BETA, TWO_ALPHA_BETA, (0, -1), (-2, -1)}

# integer root vectors X_g with x_g(s) = I + s X_g, as (row, col, coefficient)
_ROOT_VECTORS = {
    (1, 0): [(0, 1, 1), (2, 3, -1)],
    (0, 1): [(1, 2, 1)],
    (1, 1): [(0, 2, 1), (1, 3, 1)],
    (2, 1): [(0, 3, 1)],
    (-1, 0): [(1, 0, 1), (3, 2, -1)],
    (0, -1): [(2, 1, 1)],
    (-1, -1): [(2, 0, 1), (3, 1, 1)],
    (-2, -1): [(3, 0, 1)],
}

_SIGMA = {ALPHA: BETA, BETA: ALPHA, ALPHA_BETA: TWO_ALPHA_BETA, TWO_ALPHA_BETA: ALPHA_BETA}

# positions (i, j) of the wedge basis vectors that survive in the subquotient
WEDGE_BASIS = [(0, 1), (0, 2), (1, 3), (2, 3)]


def sigma(root):
    """The length-swapping symmetry of the C2 root system."""
    i, j = root
    if (i, j) in _SIGMA:
        return _SIGMA[(i, j)]
    a, b = _SIGMA[(-i, -j)]
    return (-a, -b)


def is_long(root) -> bool:
    return tuple(root) in LONG_ROOTS


def height(root) -> int:
    return root[0] + root[1]


def symplectic_gram(ring: Ring) -> Mat:
    return Mat.antidiag(ring, [1, 1, -1, -1])


def is_symplectic(m: Mat) -> bool:
    om = symplectic_gram(m.ring)
    return m.T @ om @ m == om


def c2_xroot(root, xi) -> Mat:
    """The elementary unipotent x_root(xi) acting on e1, e2, e-2, e-1."""
    R = xi.ring
    grid = [[R.one if i == j else R.zero for j in range(4)] for i in range(4)]
    for i, j, c in _ROOT_VECTORS[tuple(root)]:
        grid[i][j] = R.mul(R.from_int(c), xi.v)
    return Mat.raw(R, tuple(tuple(r) for r in grid))


def mu_image(g: Mat) -> Mat:
    """Matrix of g on the 4-dimensional companion module (characteristic 2)."""
    R = g.ring
    if R.p != 2:
        raise WrongCharacteristic("the C2 companion module needs characteristic 2")
    e = g.e
    mul, sub = R.mul, R.sub
    rows = []
    for b0, b1 in WEDGE_BASIS:
        gb0, gb1 = e[b0], e[b1]
        rows.append(tuple(sub(mul(gb0[a0], gb1[a1]), mul(gb0[a1], gb1[a0])) for a0, a1 in WEDGE_BASIS))
    return Mat.raw(R, tuple(rows))


class SuzukiGroup(TwistedGroup):
    char = 2
    dim = 4
    nparams = 2
    name = "suzuki"

    def __init__(self, ring: Ring, tau: TitsEndo | None = None):
        if ring.p != 2:
            raise WrongCharacteristic("Suzuki groups live in characteristic 2")
        super().__init__(ring, tau)

    def mu_image(self, m):
        return mu_image(m)

    def check_forms(self, m):
        return is_symplectic(m)

    def xplus_mat(self, a, b) -> Mat:
        """x_alpha(a) x_beta(a^t) x_{alpha+beta}(b) x_{2alpha+beta}(a^(t+2) + b^t)."""
        a, b = self.r(a), self.r(b)
        tau = self.tau
        return (
            c2_xroot(ALPHA, a)
            @ c2_xroot(BETA, tau(a))
            @ c2_xroot(ALPHA_BETA, b)
            @ c2_xroot(TWO_ALPHA_BETA, self.tp(a, 2, 1) + tau(b))
        )

    def h_mat(self, eps) -> Mat:
        e = self.r(eps)
        te = self.tau(e)
        return Mat.diag(self.ring, [e, te / e, e / te, e.inverse()])

    def w0_mat(self) -> Mat:
        if self._w0 is None:
            self._w0 = Mat.antidiag(self.ring, [1, 1, 1, 1])
        return self._w0


def suzuki_member(g: Mat, tau: TitsEndo | None = None) -> TwistedElement:
    return SuzukiGroup(g.ring, tau).certify(g)


def suzuki_xplus(a: RingElem, b: RingElem, tau=None) -> TwistedElement:
    return SuzukiGroup(a.ring, tau).xplus(a, b)


def suzuki_xminus(a: RingElem, b: RingElem, tau=None) -> TwistedElement:
    return SuzukiGroup(a.ring, tau).xminus(a, b)


def suzuki_h(eps: RingElem, tau=None) -> TwistedElement:
    return SuzukiGroup(eps.ring, tau).h(eps)


def suzuki_w0(ring: Ring, tau=None) -> TwistedElement:
    return SuzukiGroup(ring, tau).w0()


def suzuki_bruhat(g, tau=None) -> BruhatParts:
    m = g.m if isinstance(g, TwistedElement) else g
    return SuzukiGroup(m.ring, tau).bruhat(g)


def right_conjugate(y: Mat, x: Mat) -> Mat:
    """y^x = x^-1 y x."""
    return x.inv() @ y @ x


# relation suite ------------------------------------------------------------

def suzuki_identities(G: SuzukiGroup):
    xp, xm, h, w0 = G.xplus_mat, G.xminus_mat, G.h_mat, G.w0_mat
    tp, tau = G.tp, G.tau

    def product(a, b, c, d):
        return xp(a, b) @ xp(c, d) == xp(a + c, b + d + tau(a) * c)

    def torus(a, b, eps):
        hm = h(eps)
        return hm @ xp(a, b) @ hm.inv() == xp(tp(eps, 2, -1) * a, tau(eps) * b)

    def comm_b(b, eps):
        return commutator(h(eps), xp(0, b)) == xp(0, b + tau(eps) * b)

    def comm_a(a, eps):
        # the first coordinate is a + eps^(2-t) a; see the decisions ledger
        k = tp(eps, 2, -1)
        return commutator(h(eps), xp(a, 0)) == xp(a + k * a, tp(a, 1, 1) * (tp(eps, -2, 2) + 1))

    def w0h(eps):
        # the conjugate lands on w0 h(eps^t), not w0 h(eps); see the decisions ledger
        return w0() @ h(tau(eps)) == right_conjugate(xm(0, eps), xp(tp(eps, 1, -1), 0))

    def perfect_b(b, eps):
        return commutator(h(eps), xp(0, b / (tau(eps) + 1))) == xp(0, b)

    def perfect_a(a, eps):
        k = tp(eps, 2, -1) + 1
        return commutator(h(eps), xp(a / k, 0)) == xp(a, tp(a, 1, 1) / k)

    unit = {"eps": any_unit}
    not_one = {"eps": lambda e: e != 1}
    return [
        Identity("product", "abcd", {}, product, {"a": 0, "b": 0, "c": 0, "d": 0}),
        Identity("torus_conjugation", "ab", unit, torus, {"a": 0, "b": 0, "eps": 1}),
        Identity("commutator_h_x(0,b)", "b", unit, comm_b, {"b": 0, "eps": 1}),
        Identity("commutator_h_x(a,0)", "a", unit, comm_a, {"a": 0, "eps": 1}),
        Identity("w0h_as_conjugate", "", unit, w0h, {"eps": 1}),
        Identity("perfectness_x(0,b)", "b", not_one, perfect_b, None),
        Identity("perfectness_x(a,0)", "a", not_one, perfect_a, None),
    ]


def suzuki_relation_suite(ring: Ring, tau: TitsEndo | None = None, samples: int = 100, seed=0) -> list[Check]:
    G = SuzukiGroup(ring, tau)
    return relation_suite(G, suzuki_identities(G), samples, seed)
