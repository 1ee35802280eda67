"""Exact dense linear algebra over the rings in :mod:`twistgroup.rings`.

Matrices are immutable and store ring payloads row-major. Elimination over
F_p(t) clears denominators first and runs fraction-free over F_p[t], so all
intermediate values stay polynomial.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import DimMismatch, NotAField, NotInSpan, RingMismatch, Singular
from .rings import RationalFunctionField, Ring, RingElem, ring_from_tag


class Mat:
    """An immutable rows x cols matrix over ``ring``."""

    __slots__ = ("ring", "rows", "cols", "e", "_hash")

    def __init__(self, ring: Ring, entries):
        self.ring = ring
        self.e = tuple(tuple(ring.coerce(x) for x in row) for row in entries)
        self.rows = len(self.e)
        self.cols = len(self.e[0]) if self.e else 0
        if any(len(r) != self.cols for r in self.e):
            raise DimMismatch("ragged matrix")
        self._hash = None

    @classmethod
    def raw(cls, ring: Ring, e) -> "Mat":
        """Wrap a tuple-of-tuples of payloads without coercion."""
        m = object.__new__(cls)
        m.ring = ring
        m.e = e
        m.rows = len(e)
        m.cols = len(e[0]) if e else 0
        m._hash = None
        return m

    # constructors ----------------------------------------------------------
    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls.raw(ring, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, ring, rows, cols=None):
        cols = rows if cols is None else cols
        return cls.raw(ring, tuple((ring.zero,) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, ring, values):
        vals = [ring.coerce(v) for v in values]
        n = len(vals)
        return cls.raw(ring, tuple(tuple(vals[i] if i == j else ring.zero for j in range(n)) for i in range(n)))

    @classmethod
    def antidiag(cls, ring, values):
        vals = [ring.coerce(v) for v in values]
        n = len(vals)
        return cls.raw(ring, tuple(tuple(vals[i] if i + j == n - 1 else ring.zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_ints(cls, ring, rows):
        return cls.raw(ring, tuple(tuple(ring.from_int(int(x)) for x in row) for row in rows))

    @classmethod
    def from_dict(cls, ring, n, entries: dict, base=None):
        """``base`` (identity when None) plus ``{(i, j): value}`` overrides."""
        grid = [list(r) for r in (base or cls.identity(ring, n)).e]
        for (i, j), v in entries.items():
            grid[i][j] = ring.coerce(v)
        return cls.raw(ring, tuple(tuple(r) for r in grid))

    # access ----------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> RingElem:
        i, j = ij
        return RingElem(self.ring, self.e[i][j])

    def row(self, i):
        return tuple(RingElem(self.ring, v) for v in self.e[i])

    def col(self, j):
        return tuple(RingElem(self.ring, r[j]) for r in self.e)

    def tolist(self):
        return [[RingElem(self.ring, v) for v in r] for r in self.e]

    def submatrix(self, rows, cols):
        e = self.e
        return Mat.raw(self.ring, tuple(tuple(e[i][j] for j in cols) for i in rows))

    # algebra ---------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if other.ring is not self.ring:
            raise RingMismatch(f"{self.ring.tag} vs {other.ring.tag}")
        return other

    def __matmul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.cols != other.rows:
            raise DimMismatch(f"{self.shape} @ {other.shape}")
        dot = self.ring.dot
        cols = tuple(zip(*other.e))
        return Mat.raw(self.ring, tuple(tuple(dot(r, c) for c in cols) for r in self.e))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.shape != other.shape:
            raise DimMismatch(f"{self.shape} + {other.shape}")
        add = self.ring.add
        return Mat.raw(self.ring, tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.e, other.e)))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.shape != other.shape:
            raise DimMismatch(f"{self.shape} - {other.shape}")
        sub = self.ring.sub
        return Mat.raw(self.ring, tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.e, other.e)))

    def __neg__(self):
        return self.map(self.ring.neg)

    def scale(self, c) -> "Mat":
        c = self.ring.coerce(c)
        mul = self.ring.mul
        return self.map(lambda a: mul(c, a))

    def __pow__(self, n: int):
        if self.rows != self.cols:
            raise DimMismatch("power of a non-square matrix")
        base = self if n >= 0 else self.inv()
        out = Mat.identity(self.ring, self.rows)
        for _ in range(abs(n)):
            out = out @ base
        return out

    @property
    def T(self) -> "Mat":
        return Mat.raw(self.ring, tuple(zip(*self.e)))

    def map(self, fn) -> "Mat":
        """Entrywise image under a payload function."""
        return Mat.raw(self.ring, tuple(tuple(fn(a) for a in r) for r in self.e))

    def frobenius(self) -> "Mat":
        return self.map(self.ring.frob)

    def inv(self) -> "Mat":
        return mat_inv(self)

    def det(self) -> RingElem:
        return RingElem(self.ring, _det(self.ring, [list(r) for r in self.e]))

    # predicates / hashing --------------------------------------------------
    def is_identity(self) -> bool:
        o, z = self.ring.one, self.ring.zero
        return self.rows == self.cols and all(
            v == (o if i == j else z) for i, r in enumerate(self.e) for j, v in enumerate(r)
        )

    def is_upper_triangular(self) -> bool:
        z = self.ring.zero
        return all(self.e[i][j] == z for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_unitriangular(self) -> bool:
        return self.is_upper_triangular() and all(self.e[i][i] == self.ring.one for i in range(self.rows))

    def is_diagonal(self) -> bool:
        z = self.ring.zero
        return all(v == z for i, r in enumerate(self.e) for j, v in enumerate(r) if i != j)

    def first_difference(self, other: "Mat"):
        """``(i, j)`` of the first unequal entry, or None."""
        for i, (r, s) in enumerate(zip(self.e, other.e)):
            for j, (a, b) in enumerate(zip(r, s)):
                if a != b:
                    return (i, j)
        return None

    def key(self) -> bytes:
        """Canonical byte encoding (row-major payload concatenation)."""
        enc = self.ring.encode
        return b"".join(enc(a) for r in self.e for a in r)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ring is other.ring and self.e == other.e

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.tag, self.e))
        return self._hash

    def __repr__(self):
        fmt = self.ring.format
        body = "; ".join(", ".join(fmt(a) for a in r) for r in self.e)
        return f"Mat<{self.ring.tag}>[{body}]"

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        fmt = self.ring.format
        return {
            "ring": self.ring.tag,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[fmt(a) for a in r] for r in self.e],
        }

    @classmethod
    def from_json(cls, data) -> "Mat":
        if isinstance(data, str):
            data = json.loads(data)
        ring = ring_from_tag(data["ring"])
        m = cls.raw(ring, tuple(tuple(ring.parse(s) for s in r) for r in data["entries"]))
        if m.shape != (data["rows"], data["cols"]):
            raise DimMismatch("declared shape does not match entries")
        return m


def mat_mul(a: Mat, b: Mat) -> Mat:
    return a @ b


def commutator(x: Mat, y: Mat) -> Mat:
    """[x, y] = x y x^-1 y^-1."""
    return x @ y @ x.inv() @ y.inv()


def conjugate(x: Mat, g: Mat) -> Mat:
    """The left conjugate g x g^-1."""
    return g @ x @ g.inv()


# determinants and inverses -------------------------------------------------

def _det(R: Ring, a) -> object:
    n = len(a)
    if n == 0:
        return R.one
    if any(len(r) != n for r in a):
        raise DimMismatch("determinant of a non-square matrix")
    mul, sub, add = R.mul, R.sub, R.add
    if n == 1:
        return a[0][0]
    if n == 2:
        return sub(mul(a[0][0], a[1][1]), mul(a[0][1], a[1][0]))
    if n == 3:
        t1 = mul(a[0][0], sub(mul(a[1][1], a[2][2]), mul(a[1][2], a[2][1])))
        t2 = mul(a[0][1], sub(mul(a[1][0], a[2][2]), mul(a[1][2], a[2][0])))
        t3 = mul(a[0][2], sub(mul(a[1][0], a[2][1]), mul(a[1][1], a[2][0])))
        return add(sub(t1, t2), t3)
    if R.is_field and not isinstance(R, RationalFunctionField):
        return _det_field(R, [list(r) for r in a])
    base = R.base if isinstance(R, RationalFunctionField) else R
    if base is R:
        return _bareiss_det(R, [list(r) for r in a])
    # F_p(t): clear denominators row by row, then work in F_p[t]
    K = R.K
    rows, scale = [], K.one
    for r in a:
        d = _lcm_dens(K, r)
        scale = K.mul(scale, d)
        rows.append([K.mul(num, K.divmod(d, den)[0]) for num, den in r])
    return R.make(_bareiss_det(base, rows), scale)


def _det_field(R, a):
    n = len(a)
    det = R.one
    for k in range(n):
        piv = next((r for r in range(k, n) if not R.is_zero(a[r][k])), None)
        if piv is None:
            return R.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = R.neg(det)
        pk = a[k][k]
        det = R.mul(det, pk)
        inv = R.inv(pk)
        for i in range(k + 1, n):
            if not R.is_zero(a[i][k]):
                f = R.mul(a[i][k], inv)
                a[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(a[i], a[k])]
    return det


def _bareiss_det(R, a):
    n = len(a)
    prev, sign = R.one, False
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if not R.is_zero(a[r][k])), None)
        if piv is None:
            return R.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = not sign
        pk = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = R.exact_div(R.sub(R.mul(pk, a[i][j]), R.mul(a[i][k], a[k][j])), prev)
        prev = pk
    d = a[n - 1][n - 1]
    return R.neg(d) if sign else d


def _lcm_dens(K, row):
    out = K.one
    for _, den in row:
        if den != K.one:
            out = K.divmod(K.mul(out, den), K.gcd(out, den))[0]
    return out


def _ff_gauss_jordan(R, M, n):
    """Fraction-free Gauss-Jordan on an n x m polynomial matrix (in place).

    Afterwards the left n x n block is d * I with d = +-det, and the rest of
    each row is scaled by d as well.
    """
    prev = R.one
    for k in range(n):
        piv = next((r for r in range(k, n) if not R.is_zero(M[r][k])), None)
        if piv is None:
            raise Singular("matrix is singular")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        pk = M[k][k]
        rowk = M[k]
        for i in range(n):
            if i == k:
                continue
            mik = M[i][k]
            M[i] = [R.exact_div(R.sub(R.mul(pk, x), R.mul(mik, y)), prev) for x, y in zip(M[i], rowk)]
        prev = pk
    return prev


def mat_inv(a: Mat) -> Mat:
    """Exact two-sided inverse; raises :class:`Singular`."""
    if a.rows != a.cols:
        raise DimMismatch("inverse of a non-square matrix")
    R, n = a.ring, a.rows
    if isinstance(R, RationalFunctionField):
        K, base = R.K, R.base
        dens = [_lcm_dens(K, r) for r in a.e]
        M = [[K.mul(num, K.divmod(d, den)[0]) for num, den in r] + [K.one if i == j else K.zero for j in range(n)]
             for i, (r, d) in enumerate(zip(a.e, dens))]
        d = _ff_gauss_jordan(base, M, n)
        # (D A)^-1 = M_right / d and A^-1 = (D A)^-1 D
        return Mat.raw(R, tuple(tuple(R.make(K.mul(M[i][n + j], dens[j]), d) for j in range(n)) for i in range(n)))
    if not R.is_field:
        M = [list(r) + [R.one if i == j else R.zero for j in range(n)] for i, r in enumerate(a.e)]
        d = _ff_gauss_jordan(R, M, n)
        if not R.is_unit(d):
            raise Singular("determinant is not a unit")
        dinv = R.inv(d)
        return Mat.raw(R, tuple(tuple(R.mul(M[i][n + j], dinv) for j in range(n)) for i in range(n)))
    M = [list(r) + [R.one if i == j else R.zero for j in range(n)] for i, r in enumerate(a.e)]
    for k in range(n):
        piv = next((r for r in range(k, n) if not R.is_zero(M[r][k])), None)
        if piv is None:
            raise Singular("matrix is singular")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        inv = R.inv(M[k][k])
        M[k] = [R.mul(inv, x) for x in M[k]]
        rowk = M[k]
        for i in range(n):
            if i != k and not R.is_zero(M[i][k]):
                f = M[i][k]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], rowk)]
    return Mat.raw(R, tuple(tuple(r[n:]) for r in M))


# subsets of {1..n, -n..-1} -------------------------------------------------

def label_position(label: int, n: int) -> int:
    """Position of e_label in the order e_1, ..., e_n, e_-n, ..., e_-1."""
    if 1 <= label <= n:
        return label - 1
    if -n <= label <= -1:
        return 2 * n + label
    raise ValueError(f"label {label} out of range for n={n}")


def position_label(pos: int, n: int) -> int:
    return pos + 1 if pos < n else pos - 2 * n


@dataclass(frozen=True)
class SubsetIndex:
    """A subset A of {1..n, -n..-1}, sorted by 1 < ... < n < -n < ... < -1."""

    n: int
    members: tuple

    def __post_init__(self):
        pos = sorted({label_position(a, self.n) for a in self.members})
        if len(pos) != len(self.members):
            raise ValueError("repeated labels")
        object.__setattr__(self, "members", tuple(position_label(p, self.n) for p in pos))

    @classmethod
    def of(cls, n, *labels):
        return cls(n, tuple(labels))

    @classmethod
    def from_positions(cls, n, positions):
        return cls(n, tuple(position_label(p, n) for p in positions))

    @property
    def positions(self) -> tuple:
        return tuple(label_position(a, self.n) for a in self.members)

    def S(self) -> frozenset:
        """A & -A."""
        s = set(self.members)
        return frozenset(a for a in s if -a in s)

    def neg(self) -> "SubsetIndex":
        return SubsetIndex(self.n, tuple(-a for a in self.members))

    def complement(self) -> "SubsetIndex":
        have = set(self.members)
        return SubsetIndex(self.n, tuple(a for a in all_labels(self.n) if a not in have))

    def replace(self, remove, add) -> "SubsetIndex":
        rest = [a for a in self.members if a not in set(remove)]
        return SubsetIndex(self.n, tuple(rest) + tuple(add))

    def __contains__(self, a):
        return a in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __str__(self):
        return "{" + ",".join(str(a) for a in self.members) + "}"


def all_labels(n: int) -> list[int]:
    return list(range(1, n + 1)) + list(range(-n, 0))


def subsets(n: int, k: int) -> list[SubsetIndex]:
    """All k-subsets, ordered lexicographically by position."""
    return [SubsetIndex.from_positions(n, c) for c in itertools.combinations(range(2 * n), k)]


def _positions(ix):
    return ix.positions if isinstance(ix, SubsetIndex) else tuple(ix)


def minor(g: Mat, rows, cols) -> RingElem:
    """Determinant of the rows x cols submatrix (SubsetIndex or positions)."""
    r, c = _positions(rows), _positions(cols)
    if len(r) != len(c):
        raise DimMismatch("minor needs as many rows as columns")
    if any(i >= g.rows for i in r) or any(j >= g.cols for j in c):
        raise DimMismatch("minor index out of range")
    e = g.e
    return RingElem(g.ring, _det(g.ring, [[e[i][j] for j in c] for i in r]))


def exterior_power(g: Mat, k: int, index=None) -> Mat:
    """The matrix of the k-th exterior power, entries [B][A] = minor(g, B, A).

    ``index`` is a list of position tuples (default: all k-subsets in
    lexicographic order).
    """
    if index is None:
        index = list(itertools.combinations(range(g.cols), k))
    else:
        index = [_positions(ix) for ix in index]
    R, e = g.ring, g.e
    return Mat.raw(R, tuple(
        tuple(_det(R, [[e[i][j] for j in a] for i in b]) for a in index) for b in index
    ))


# elimination over fields ---------------------------------------------------

def _require_field(R):
    if not R.is_field:
        raise NotAField(f"{R.tag} is not a field")


def _rref(R, rows):
    """Reduced row echelon form of payload rows; returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if not R.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = R.inv(M[r][c])
        M[r] = [R.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and not R.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(m: Mat) -> int:
    _require_field(m.ring)
    return len(_rref(m.ring, m.e)[1])


def kernel_basis(m: Mat) -> list[tuple]:
    """Basis of {v : m v = 0}, one vector per free column in increasing order."""
    R = m.ring
    _require_field(R)
    rows, pivots = _rref(R, m.e)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [R.zero] * m.cols
        v[f] = R.one
        for row, pc in zip(rows, pivots):
            v[pc] = R.neg(row[f])
        out.append(tuple(RingElem(R, x) for x in v))
    return out


def _flatten(x):
    if isinstance(x, Mat):
        return [a for r in x.e for a in r]
    return [a.v if isinstance(a, RingElem) else a for a in x]


class SpanSolver:
    """Coordinates of targets in the span of a fixed list of matrices/vectors.

    The basis is echelonized once; each solve is a single reduction pass.
    """

    def __init__(self, basis, ring: Ring | None = None):
        if not basis:
            raise ValueError("empty basis")
        R = ring or basis[0].ring
        _require_field(R)
        self.ring = R
        self.size = len(basis)
        vecs = [_flatten(b) for b in basis]
        self.length = len(vecs[0])
        if any(len(v) != self.length for v in vecs):
            raise DimMismatch("basis elements differ in shape")
        aug = [v + [R.one if i == j else R.zero for j in range(self.size)] for i, v in enumerate(vecs)]
        rows, pivots = self._echelon(R, aug, self.length)
        self._rows = rows
        self._pivots = pivots

    @staticmethod
    def _echelon(R, M, width):
        pivots = []
        r = 0
        for c in range(width):
            piv = next((i for i in range(r, len(M)) if not R.is_zero(M[i][c])), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            inv = R.inv(M[r][c])
            M[r] = [R.mul(inv, x) for x in M[r]]
            for i in range(len(M)):
                if i != r and not R.is_zero(M[i][c]):
                    f = M[i][c]
                    M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[r])]
            pivots.append(c)
            r += 1
        # sparse copies for fast reduction
        rows = [[(j, x) for j, x in enumerate(row) if not R.is_zero(x)] for row in M[:r]]
        return rows, pivots

    def solve_payload(self, target) -> list:
        R = self.ring
        t = _flatten(target)
        if len(t) != self.length:
            raise DimMismatch("target shape differs from basis")
        t = list(t) + [R.zero] * self.size
        for row, pc in zip(self._rows, self._pivots):
            c = t[pc]
            if R.is_zero(c):
                continue
            for j, x in row:
                t[j] = R.sub(t[j], R.mul(c, x))
        if any(not R.is_zero(x) for x in t[: self.length]):
            raise NotInSpan("target is not in the span")
        # t[length:] now holds -coefficients
        return [R.neg(x) for x in t[self.length:]]

    def solve(self, target) -> list[RingElem]:
        return [RingElem(self.ring, x) for x in self.solve_payload(target)]


def solve_in_span(target, basis) -> list[RingElem]:
    """Coefficients c with sum c_i basis_i = target, or raise :class:`NotInSpan`."""
    return SpanSolver(basis).solve(target)


def combine(coeffs, basis) -> Mat:
    """sum c_i basis_i."""
    out = Mat.zeros(basis[0].ring, basis[0].rows, basis[0].cols)
    for c, b in zip(coeffs, basis):
        out = out + b.scale(c)
    return out
