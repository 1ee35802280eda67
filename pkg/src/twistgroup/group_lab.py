"""Brute-force computations in finite matrix groups over GF(q).

Elements are stored as a numpy uint8 array of shape (N, d, d) holding field
payloads; products use the field's multiplication and addition tables, so a
whole BFS frontier is multiplied by a generator in one vectorized step. The
hash key of an element is the row-major byte string of its payloads.
"""

from __future__ import annotations

import random
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ElementNotInGroup, LimitExceeded
from .linalg import Mat
from .report import Check
from .rings import GF, FiniteField, ring_from_tag

DEFAULT_LIMIT = 10 ** 5
LARGE_LIMIT = 5 * 10 ** 7
CACHE_MAGIC = b"TWGT"
CACHE_VERSION = 1


class FieldTables:
    """Payload multiplication / addition tables of GF(q) as numpy arrays."""

    _cache: dict = {}

    def __init__(self, ring: FiniteField):
        if not isinstance(ring, FiniteField) or ring.q > 256:
            raise ValueError("group_lab works over finite fields with at most 256 elements")
        q = ring.q
        self.ring = ring
        self.mul = np.array([[ring.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.uint8)
        self.add = np.array([[ring.add(a, b) for b in range(q)] for a in range(q)], dtype=np.uint8)
        self.frob = np.array([ring.frob(a) for a in range(q)], dtype=np.uint8)
        self.xor = ring.p == 2

    @classmethod
    def of(cls, ring):
        if ring not in cls._cache:
            cls._cache[ring] = cls(ring)
        return cls._cache[ring]

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Broadcast product of (..., d, d) payload arrays."""
        prod = self.mul[a[..., :, :, None], b[..., None, :, :]]  # [..., i, k, j]
        if self.xor:
            return np.bitwise_xor.reduce(prod, axis=-2)
        acc = prod[..., 0, :]
        for k in range(1, prod.shape[-2]):
            acc = self.add[acc, prod[..., k, :]]
        return acc


def to_array(m: Mat) -> np.ndarray:
    return np.array(m.e, dtype=np.uint8)


def to_mat(ring, a: np.ndarray) -> Mat:
    return Mat.raw(ring, tuple(tuple(int(x) for x in row) for row in a))


@dataclass
class GroupTable:
    """An enumerated matrix group: elements in BFS order and a key index."""

    ring: FiniteField
    dim: int
    gens: list
    elements: np.ndarray
    index: dict = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def key_set(self) -> set:
        return set(self.index)

    def __contains__(self, m) -> bool:
        a = to_array(m) if isinstance(m, Mat) else m
        return a.tobytes() in self.index

    def mat(self, i: int) -> Mat:
        return to_mat(self.ring, self.elements[i])

    def mats(self):
        for a in self.elements:
            yield to_mat(self.ring, a)


def _check_gens(gens):
    if not gens:
        raise ValueError("need at least one generator")
    ring, shape = gens[0].ring, gens[0].shape
    for g in gens:
        if g.ring is not ring or g.shape != shape:
            raise ValueError("generators must share ring and shape")
    return ring, shape[0]


def _closure(ring, dim, gen_arrays, start, limit, threads=1, grown=None):
    """BFS under right multiplication by the generators.

    ``grown`` = (elements, index, new_gens) extends an already closed set
    after appending ``new_gens``: the first round multiplies every known
    element by the new generators only.
    """
    tables = FieldTables.of(ring)
    gens = np.array(gen_arrays, dtype=np.uint8)
    if grown is None:
        elems = list(start)
        index = {a.tobytes(): i for i, a in enumerate(elems)}
        frontier = np.array(elems, dtype=np.uint8).reshape(-1, dim, dim)
        step = gens
    else:
        old, index, new_gens = grown
        elems = list(old)
        index = dict(index)
        frontier = old
        step = np.array(new_gens, dtype=np.uint8)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while len(frontier):
            if pool is not None and len(frontier) > 256:
                chunks = np.array_split(frontier, threads)
                parts = list(pool.map(lambda c, g=step: tables.matmul(c[:, None], g[None]), chunks))
                prods = np.concatenate(parts)
            else:
                prods = tables.matmul(frontier[:, None], step[None])  # (N, G, d, d)
            prods = prods.reshape(-1, dim, dim)
            fresh = []
            for a in prods:
                k = a.tobytes()
                if k not in index:
                    index[k] = len(elems)
                    elems.append(a)
                    fresh.append(a)
                    if len(elems) > limit:
                        partial = np.array(elems[:limit], dtype=np.uint8)
                        raise LimitExceeded(f"more than {limit} elements", partial=partial)
            frontier = np.array(fresh, dtype=np.uint8).reshape(-1, dim, dim)
            step = gens
    finally:
        if pool is not None:
            pool.shutdown()
    return np.array(elems, dtype=np.uint8).reshape(-1, dim, dim), index


def bfs_closure(gens, limit: int = DEFAULT_LIMIT, threads: int = 1) -> GroupTable:
    """The subgroup generated by ``gens`` (finite, so products of generators suffice)."""
    ring, dim = _check_gens(gens)
    ident = to_array(Mat.identity(ring, dim))
    elements, index = _closure(ring, dim, [to_array(g) for g in gens], [ident], limit, threads)
    return GroupTable(ring, dim, list(gens), elements, index)


def _conj(tables, s, x, s_inv):
    return tables.matmul(tables.matmul(s, x), s_inv)


def normal_closure(g, t: GroupTable, limit: int = DEFAULT_LIMIT, threads: int = 1) -> GroupTable:
    """Smallest normal subgroup of t containing g (a Mat or a list of Mats)."""
    seeds = g if isinstance(g, list) else [g]
    for x in seeds:
        if x not in t:
            raise ElementNotInGroup("element is not in the table")
    tables = FieldTables.of(t.ring)
    conj = [(to_array(s), to_array(s.inv())) for s in t.gens]
    ident = to_array(Mat.identity(t.ring, t.dim))
    gens = [to_array(x) for x in seeds if not to_array(x).tobytes() == ident.tobytes()]
    if not gens:
        gens = [ident]
    elements, index = _closure(t.ring, t.dim, gens, [ident], limit, threads)
    while True:
        # N is normal iff conjugating its generators by those of t stays in N
        new = []
        for s, s_inv in conj:
            for x in gens:
                y = _conj(tables, s, x, s_inv)
                if y.tobytes() not in index and all(y.tobytes() != z.tobytes() for z in new):
                    new.append(y)
        if not new:
            break
        gens = gens + new
        elements, index = _closure(t.ring, t.dim, gens, None, limit, threads, grown=(elements, index, new))
    return GroupTable(t.ring, t.dim, [to_mat(t.ring, a) for a in gens], elements, index)


def commutator_subgroup(t: GroupTable, limit: int = DEFAULT_LIMIT, threads: int = 1) -> GroupTable:
    """Normal closure of the commutators of pairs of generators."""
    comms = []
    for i, a in enumerate(t.gens):
        ai = a.inv()
        for b in t.gens[i + 1:]:
            comms.append(a @ b @ ai @ b.inv())
    if not comms:
        comms = [Mat.identity(t.ring, t.dim)]
    return normal_closure(comms, t, limit, threads)


def is_perfect(t: GroupTable) -> bool:
    return commutator_subgroup(t).order == t.order


def simplicity_check(t: GroupTable, samples: int, seed=0) -> Check:
    """Normal closures of ``samples`` random nontrivial elements are all of t."""
    rng = random.Random(f"{seed}:simplicity:{t.ring.tag}:{t.order}")
    picks = []
    ident = to_array(Mat.identity(t.ring, t.dim)).tobytes()
    while len(picks) < samples and t.order > 1:
        i = rng.randrange(t.order)
        if t.elements[i].tobytes() != ident:
            picks.append(i)
    params = {"order": t.order, "samples": samples, "seed": seed}
    for count, i in enumerate(picks, 1):
        n = normal_closure(t.mat(i), t)
        if n.order != t.order:
            return Check("simplicity", dict(params, evaluated=count), "fail",
                         {"element": t.mat(i).to_json(), "closure_order": n.order})
    return Check("simplicity", dict(params, evaluated=len(picks)), "pass")


def bruhat_census(t: GroupTable, decomposer, w0: Mat) -> Check:
    """Decompose every element, check reassembly and the Weyl component; report cell sizes."""
    cells = {"1": 0, "w0": 0}
    for m in t.mats():
        try:
            parts = decomposer(m)
        except Exception as exc:
            return Check("bruhat_census", {"order": t.order, **cells}, "fail",
                         {"element": m.to_json(), "error": f"{type(exc).__name__}: {exc}"})
        if parts.reassemble() != m:
            return Check("bruhat_census", {"order": t.order, **cells}, "fail", {"element": m.to_json()})
        # the Weyl component is forced: B-cell elements are upper triangular, big-cell ones are not
        if parts.w is None:
            ok = m.is_upper_triangular()
            cells["1"] += 1
        else:
            ok = parts.w.m == w0 and not m.is_upper_triangular()
            cells["w0"] += 1
        if not ok:
            return Check("bruhat_census", {"order": t.order, **cells}, "fail",
                         {"element": m.to_json(), "reason": "Weyl component not unique"})
    return Check("bruhat_census", {"order": t.order, "cells": cells}, "pass")


def frobenius_map_table(t: GroupTable) -> GroupTable:
    """Entrywise Frobenius image of every element."""
    tables = FieldTables.of(t.ring)
    elements = tables.frob[t.elements]
    index = {a.tobytes(): i for i, a in enumerate(elements)}
    return GroupTable(t.ring, t.dim, [g.frobenius() for g in t.gens], elements, index)


# named groups ---------------------------------------------------------------------

def _field_basis(ring):
    """1, z, z^2, ... spanning GF(q) over GF(p)."""
    return [ring.elem(ring.generator) ** i for i in range(ring.k)] if ring.k > 1 else [ring(1)]


def lab_group(name: str):
    """(twisted group object, generators) for sz2, sz8, sz32 or ree3."""
    from .ree import ReeGroup
    from .suzuki import SuzukiGroup
    name = name.lower()
    if name.startswith("sz"):
        ring = GF(int(name[2:]))
        G = SuzukiGroup(ring)
        basis = _field_basis(ring)
        zero = ring(0)
        gens = []
        for make in (G.xplus_mat, G.xminus_mat):
            gens += [make(a, zero) for a in basis] + [make(zero, a) for a in basis]
        return G, gens
    if name.startswith("ree"):
        ring = GF(int(name[3:]))
        G = ReeGroup(ring)
        basis = _field_basis(ring)
        zero = ring(0)
        gens = []
        for make in (G.xplus_mat, G.xminus_mat):
            for slot in range(3):
                for a in basis:
                    ps = [zero] * 3
                    ps[slot] = a
                    gens.append(make(*ps))
        return G, gens
    raise ValueError(f"unknown group {name!r}")


def closed_form_order(name: str) -> int:
    """q^2(q^2+1)(q-1) for Sz(q), q^3(q^3+1)(q-1) for the small Ree groups."""
    name = name.lower()
    if name.startswith("sz"):
        q = int(name[2:])
        return q * q * (q * q + 1) * (q - 1)
    q = int(name[3:])
    return q ** 3 * (q ** 3 + 1) * (q - 1)


def enumerate_group(name: str, limit: int | None = None, threads: int = 1, allow_large: bool = False) -> GroupTable:
    if name.lower() == "sz32" and not allow_large:
        raise LimitExceeded("Sz(32) enumeration is opt-in (allow_large=True)", partial=None)
    if limit is None:
        limit = LARGE_LIMIT if allow_large else DEFAULT_LIMIT
    _, gens = lab_group(name)
    return bfs_closure(gens, limit, threads)


# cache file ---------------------------------------------------------------------------

def save_table(t: GroupTable, path) -> None:
    """Header: magic, version, ring tag, dim, count; then the payload bytes."""
    tag = t.ring.tag.encode()
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<HH", CACHE_VERSION, len(tag)))
        fh.write(tag)
        fh.write(struct.pack("<HQ", t.dim, t.order))
        fh.write(np.ascontiguousarray(t.elements).tobytes())


def load_table(path, gens=None) -> GroupTable:
    with open(path, "rb") as fh:
        if fh.read(4) != CACHE_MAGIC:
            raise ValueError("not a group table cache")
        version, tlen = struct.unpack("<HH", fh.read(4))
        if version != CACHE_VERSION:
            raise ValueError(f"unsupported cache version {version}")
        ring = ring_from_tag(fh.read(tlen).decode())
        dim, count = struct.unpack("<HQ", fh.read(10))
        data = np.frombuffer(fh.read(), dtype=np.uint8)
    if data.size != count * dim * dim:
        raise ValueError("truncated cache file")
    elements = data.reshape(count, dim, dim).copy()
    index = {a.tobytes(): i for i, a in enumerate(elements)}
    return GroupTable(ring, dim, list(gens or []), elements, index)


__all__ = [
    "GroupTable", "bfs_closure", "bruhat_census", "closed_form_order", "commutator_subgroup",
    "enumerate_group", "frobenius_map_table", "is_perfect", "lab_group", "load_table",
    "normal_closure", "save_table", "simplicity_check",
]
