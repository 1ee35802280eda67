import random

import numpy as np
import pytest

from twistgroup import group_lab
from twistgroup.errors import ElementNotInGroup, LimitExceeded
from twistgroup.group_lab import (
    bfs_closure, bruhat_census, closed_form_order, commutator_subgroup, enumerate_group, frobenius_map_table,
    is_perfect, lab_group, load_table, normal_closure, save_table, simplicity_check, to_array, to_mat,
)
from twistgroup.linalg import Mat
from twistgroup.rings import GF
from twistgroup.suzuki import SuzukiGroup


@pytest.fixture(scope="module")
def sz8():
    return enumerate_group("sz8")


@pytest.fixture(scope="module")
def ree3():
    return enumerate_group("ree3")


@pytest.fixture(scope="module")
def ree3_derived(ree3):
    return commutator_subgroup(ree3)


# closure ---------------------------------------------------------------------------

def test_trivial_group():
    t = bfs_closure([Mat.identity(GF(8), 4)])
    assert t.order == 1


def test_sz2_from_four_generators():
    R = GF(2)
    G = SuzukiGroup(R)
    one, zero = R(1), R(0)
    gens = [G.xplus_mat(one, zero), G.xplus_mat(zero, one), G.xminus_mat(one, zero), G.xminus_mat(zero, one)]
    t = bfs_closure(gens)
    assert t.order == 20 == closed_form_order("sz2")


def test_sz8_order(sz8):
    assert sz8.order == 29120 == 8 ** 2 * (8 ** 2 + 1) * 7


def test_ree3_order(ree3):
    assert ree3.order == 1512 == closed_form_order("ree3")


def test_elements_are_members(sz8, ree3):
    for name, t in (("sz8", sz8), ("ree3", ree3)):
        G, _ = lab_group(name)
        rng = random.Random(name)
        for i in rng.sample(range(t.order), 200):
            assert G.is_member(t.mat(i))


def test_closure_independent_of_generator_order_and_threads():
    _, gens = lab_group("sz8")
    base = bfs_closure(gens)
    shuffled = list(gens)
    random.Random(0).shuffle(shuffled)
    assert bfs_closure(shuffled).key_set() == base.key_set()
    threaded = bfs_closure(gens, threads=4)
    assert threaded.key_set() == base.key_set()
    assert threaded.elements.tobytes() == base.elements.tobytes()


def test_limit_exceeded_carries_partial():
    _, gens = lab_group("sz8")
    with pytest.raises(LimitExceeded) as info:
        bfs_closure(gens, limit=100)
    assert info.value.partial is not None and len(info.value.partial) == 100


def test_sz32_is_opt_in():
    with pytest.raises(LimitExceeded):
        enumerate_group("sz32")


def test_mismatched_generators():
    with pytest.raises(ValueError):
        bfs_closure([Mat.identity(GF(8), 4), Mat.identity(GF(8), 3)])
    with pytest.raises(ValueError):
        bfs_closure([])


def test_array_round_trip():
    R = GF(8)
    m = SuzukiGroup(R).xplus_mat(R.elem(3), R.elem(5))
    assert to_mat(R, to_array(m)) == m


# commutator subgroups and normal closures ----------------------------------------------------

def test_abelian_group_has_trivial_commutator():
    R = GF(2)
    G = SuzukiGroup(R)
    t = bfs_closure([G.xplus_mat(R(1), R(0))])
    assert t.order == 4
    assert commutator_subgroup(t).order == 1


def test_sz2_derived_subgroup():
    t = enumerate_group("sz2")
    d = commutator_subgroup(t)
    assert d.order == 5
    assert not is_perfect(t)


def test_sz8_is_perfect(sz8):
    assert commutator_subgroup(sz8).order == 29120


def test_ree3_derived_order(ree3, ree3_derived):
    assert ree3_derived.order == 504
    assert ree3.order % ree3_derived.order == 0
    assert ree3_derived.key_set() <= ree3.key_set()


def test_ree3_derived_is_simple(ree3_derived):
    check = simplicity_check(ree3_derived, samples=10, seed=0)
    assert check.ok, check.to_json()


def test_sz8_is_simple(sz8):
    check = simplicity_check(sz8, samples=20, seed=0)
    assert check.ok and check.params["evaluated"] == 20


def test_ree3_is_not_simple(ree3):
    check = simplicity_check(ree3, samples=20, seed=0)
    assert not check.ok
    assert 1 < check.witness["closure_order"] < 1512


def test_normal_closure_of_identity(sz8):
    assert normal_closure(Mat.identity(GF(8), 4), sz8).order == 1


def test_normal_closure_rejects_outsider(sz8):
    R = GF(8)
    outsider = Mat.diag(R, [R.elem(2), R(1), R(1), R.elem(2).inverse()])
    with pytest.raises(ElementNotInGroup):
        normal_closure(outsider, sz8)


# census and Frobenius ----------------------------------------------------------------------

@pytest.mark.parametrize("name,cells", [("sz2", (4, 16)), ("ree3", (54, 1458))])
def test_bruhat_census_small(name, cells):
    G, gens = lab_group(name)
    t = bfs_closure(gens)
    check = bruhat_census(t, G.bruhat, G.w0_mat())
    assert check.ok
    assert check.params["cells"] == {"1": cells[0], "w0": cells[1]}


def test_bruhat_census_sz8(sz8):
    G, _ = lab_group("sz8")
    check = bruhat_census(sz8, G.bruhat, G.w0_mat())
    assert check.params["cells"] == {"1": 448, "w0": 28672}


def test_frobenius_table_gf2():
    t = enumerate_group("sz2")
    f = frobenius_map_table(t)
    assert np.array_equal(f.elements, t.elements)


def test_frobenius_table_preserves_groups(sz8, ree3):
    for t in (sz8, ree3):
        f = frobenius_map_table(t)
        assert f.order == t.order
        assert f.key_set() == t.key_set()


# cache --------------------------------------------------------------------------------------

def test_cache_round_trip(tmp_path, ree3):
    path = tmp_path / "ree3.twgt"
    save_table(ree3, path)
    back = load_table(path)
    assert back.order == ree3.order and back.ring is ree3.ring and back.dim == 7
    assert np.array_equal(back.elements, ree3.elements)
    assert back.mat(5) in ree3


def test_cache_rejects_bad_files(tmp_path, ree3):
    bad = tmp_path / "bad"
    bad.write_bytes(b"nope")
    with pytest.raises(ValueError):
        load_table(bad)
    path = tmp_path / "short"
    save_table(ree3, path)
    path.write_bytes(path.read_bytes()[:-7])
    with pytest.raises(ValueError):
        load_table(path)
    assert group_lab.CACHE_VERSION == 1
