import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from loosebimod import fincore as fc
from loosebimod import serialization as ser
from loosebimod import simplexkit as sk
from loosebimod import sketchlab as sl
from generators import MONOIDS, random_barrel, random_bimodule, random_category
import oracles

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def phantom(X, level=2):
    """X with one extra element at ``level`` copying the last one; the base
    must have no maps into ``level`` from above."""
    sets = [list(s) for s in X.sets]
    last = len(sets[level]) - 1
    sets[level].append(("phantom", sets[level][last]))
    maps = []
    for f in range(X.base.n_mor):
        m = list(X.maps[f])
        if f == X.base.identity[level]:
            m.append(last + 1)
        elif X.base.src[f] == level:
            m.append(m[last])
        maps.append(m)
    return fc.SetFunctor(X.base, sets, maps)


def magma_nerve(table, unit=0, trunc=3):
    """Tuples over a unital magma with faces by left-nested products: a
    simplicial set exactly when the magma is associative."""
    T = sk.truncated_delta_op(trunc)

    def prod(xs):
        acc = unit
        for x in xs:
            acc = table[acc][x]
        return acc

    def on_map(m, xs):
        v = T.maps[m].values
        return tuple(prod(xs[v[i]:v[i + 1]]) for i in range(len(v) - 1))

    import itertools
    return fc.SetFunctor.from_function(T.category, lambda k: list(itertools.product(range(len(table)), repeat=k)),
                                       on_map)


# the sketch for categories

def test_categories_sketch_cones():
    S = sl.categories_sketch(3)
    assert [S.carrier.objects[a] for a in S.apexes()] == [2, 3]
    assert sl.validate_sketch(S) == []
    c2 = next(c for c in S.cones if S.carrier.objects[c.apex] == 2)
    targets = sorted(S.carrier.objects[c2.diagram.obj_map[j]] for j in range(c2.shape.n_obj))
    assert targets == [0, 0, 0, 1, 1]
    assert len(sl.categories_sketch(2).cones) == 1
    with pytest.raises(ValueError):
        sl.categories_sketch(1)


def test_nerve_of_walking_arrow_is_model():
    N = sl.nerve(fc.walking_arrow(), 3)
    assert N.sizes()[:3] == (2, 3, 4)
    assert len(oracles.composable_chains(2, [0, 1, 0], [0, 1, 1], 2)) == 4
    assert sl.is_set_model(N, sl.categories_sketch(3)) == (True, [])


def test_phantom_fails_at_cone_2():
    X = phantom(sl.nerve(fc.walking_arrow(), 2))
    ok, rep = sl.is_set_model(X, sl.categories_sketch(2))
    assert not ok
    assert [(v.law, v.witness) for v in rep] == [("cone", (0, 2))]
    with pytest.raises(sl.SegalError) as err:
        sl.segal_to_category(X)
    assert err.value.report == rep


def test_shipped_corrupt_nerve_fails_at_cone_2():
    X = ser.load(os.path.join(FIXTURES, "nerve_corrupt.json"))
    ok, rep = sl.is_set_model(X, sl.categories_sketch(2))
    assert not ok and rep[0].witness == (0, 2)


def test_constant_singleton_is_model():
    S = sl.categories_sketch(3)
    assert sl.is_set_model(sl.constant_model(S), S)[0]


@pytest.mark.parametrize("C,size", [(fc.terminal_category(), 1), (fc.discrete_category("ab"), 2)])
def test_nerve_of_trivial_categories(C, size):
    assert sl.nerve(C, 3).sizes() == (size,) * 4


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_monoid_round_trip(name):
    C = fc.monoid_category(MONOIDS[name])
    X = sl.nerve(C, 3)
    C2 = sl.segal_to_category(X)
    F = sl.category_roundtrip_iso(C, C2)
    assert fc.relabel_check(F)
    assert fc.validate_category(C2) == []


def test_magma_nerve_agrees_with_monoid_nerve():
    X = magma_nerve(MONOIDS["Z3"])
    assert sl.is_set_model(X, sl.categories_sketch(3))[0]
    C = sl.segal_to_category(X)
    assert (C.n_obj, C.n_mor) == (1, 3)


def test_nonassociative_data_rejected():
    # unital but a(ab) != (aa)b
    table = [[0, 1, 2], [1, 2, 0], [2, 2, 1]]
    assert any(table[table[a][b]][c] != table[a][table[b][c]] for a in range(3) for b in range(3) for c in range(3))
    X = magma_nerve(table)
    ok, rep = sl.is_set_model(X, sl.categories_sketch(3))
    assert not ok and {v.law for v in rep} == {"composition"}
    # d1 d1 = d2 d1 : [1] -> [3] in Δ, but the two routes differ on X
    D = X.base
    d1 = X.maps[D.mor((1, 2, (0, 2)))]
    via_d1 = [d1[y] for y in X.maps[D.mor((2, 3, (0, 2, 3)))]]
    via_d2 = [d1[y] for y in X.maps[D.mor((2, 3, (0, 1, 3)))]]
    assert via_d1 != via_d2
    with pytest.raises(sl.SegalError):
        sl.segal_to_category(X)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_nerve_segal_round_trip(seed, t):
    C = random_category(random.Random(seed))
    X = sl.nerve(C, t)
    assert sl.is_set_model(X, sl.categories_sketch(t))[0]
    for k in range(t + 1):
        assert X.size(k) == len(oracles.composable_chains(C.n_obj, C.src, C.tgt, k))
    C2 = sl.segal_to_category(X)
    assert fc.relabel_check(sl.category_roundtrip_iso(C, C2))
    N, comps = sl.nerve_comparison(X, C2)
    assert sl.check_set_nat_iso(X, N, comps) == []


# bimodules and barrels

def test_hom_bimodule_barrel():
    A = fc.walking_arrow()
    M = sl.hom_bimodule(A)
    assert M.n_het == A.n_mor
    B = sl.bimodule_to_barrel(M)
    assert B.total.n_obj == 4
    assert sum(1 for f in range(B.total.n_mor) if B.labelling.mor_map[f] == 2) == 3
    N = sl.barrel_to_bimodule(sl.hom_barrel(A))
    assert N.n_het == A.n_mor


def test_empty_fibre_over_1():
    C = fc.walking_arrow()
    M = sl.barrel_to_bimodule(sl.Barrel.from_labels(C, [0, 0]))
    assert M.target.n_obj == 0 and M.n_het == 0


def test_walking_heteromorphism():
    M = sl.barrel_to_bimodule(sl.Barrel.from_labels(fc.walking_arrow(), [0, 1]))
    assert (M.source.n_obj, M.target.n_obj, M.n_het) == (1, 1, 1)
    assert M.left == {(0, 0): 0} and M.right == {(0, 0): 0}


def test_trivial_bimodule_barrel_is_sum():
    C, D = fc.walking_arrow(), fc.terminal_category()
    B = sl.bimodule_to_barrel(sl.empty_bimodule(C, D))
    assert (B.total.n_obj, B.total.n_mor) == (3, 4)
    assert sl.validate_barrel(B) == []


def test_barrel_rejects_backward_morphism():
    with pytest.raises(ValueError):
        sl.Barrel.from_labels(fc.walking_arrow(), [1, 0])


def test_inconsistent_actions_rejected():
    M = sl.hom_bimodule(fc.walking_arrow())
    M.left[(0, 2)] = 0  # a . id0 becomes id0
    with pytest.raises(sl.BimoduleError) as err:
        sl.bimodule_to_barrel(M)
    assert err.value.report[0].witness == (0, 2)


def test_generated_2x2_bimodule_round_trip():
    rng = random.Random(11)
    while True:
        M = random_bimodule(rng)
        if (M.source.n_obj, M.target.n_obj, M.n_het) == (2, 2, 3):
            break
    N, Fs, Ft, h = sl.bimodule_roundtrip_maps(M)
    assert sl.bimodule_iso(M, N, Fs, Ft, h) == []


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_bimodule_round_trips(seed):
    M = random_bimodule(random.Random(seed))
    assert sl.validate_bimodule(M) == []
    N, Fs, Ft, h = sl.bimodule_roundtrip_maps(M)
    assert sl.bimodule_iso(M, N, Fs, Ft, h) == []


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_barrel_round_trips_and_path_sets(seed):
    B = random_barrel(random.Random(seed))
    B2, F = sl.barrel_roundtrip_iso(B)
    assert sl.barrel_iso_over_arrow(B, B2, F)
    M = sl.barrel_to_bimodule(B)
    P = sl.path_set_model(B)
    Q = sl.bimodule_chain_model(M)
    assert sl.is_set_model(P, sl.bimodule_sketch(3))[0]
    assert sl.check_set_nat_iso(Q, P, sl.chain_model_comparison(M, P, Q)) == []


# the elements sketch and the slice theorem

def test_elements_sketch_is_bimodule_sketch():
    T = sk.truncated_delta_op(3)
    ES = sl.elements_sketch(sl.categories_sketch(3), sk.corepresentable_at_1(T))
    BS = sl.bimodule_sketch(3)
    assert len(BS.cones) == 14 - 5
    F = sl.slice_elements_iso(ES.carrier, BS.carrier)
    assert sl.sketches_isomorphic_via(ES, BS, F)


def test_bimodule_sketch_cones():
    BS = sl.bimodule_sketch(3)
    C = BS.carrier
    cone = next(c for c in BS.cones if C.objects[c.apex] == (0, 0, 1, 1))
    ends = {C.objects[cone.diagram.obj_map[j]] for j in range(cone.shape.n_obj)}
    assert ends <= {(0,), (1,), (0, 0), (0, 1), (1, 1)}
    zero = next(c for c in BS.cones if C.objects[c.apex] == (0, 0, 0))
    S = sl.categories_sketch(3)
    base = next(c for c in S.cones if S.carrier.objects[c.apex] == 2)
    proj = BS.slice.projection
    assert zero.image(proj).signature() == base.signature()


def test_elements_sketch_trivial_cases():
    S = sl.categories_sketch(2)
    ES = sl.elements_sketch(S, sl.constant_model(S))
    assert sl.sketches_isomorphic_via(ES, S, ES.projection)
    S0 = sl.LimitSketch(fc.walking_arrow(), [])
    assert sl.elements_sketch(S0, sl.constant_model(S0)).cones == ()


def test_slice_equivalence_trivial_monoid():
    S = sl.LimitSketch(fc.terminal_category(), [])
    r = sl.verify_slice_equivalence(S, sl.constant_model(S), 2)
    # sets of size 0, 1, 2
    assert r.ok and r.left_count == r.right_count == 3


def test_slice_equivalence_over_terminal_counts_categories():
    S = sl.categories_sketch(2)
    r = sl.verify_slice_equivalence(S, sl.constant_model(S), 2)
    assert r.ok and r.bijection and r.round_trips
    assert r.left_count == r.right_count == oracles.count_small_categories(2, 2)


def test_slice_equivalence_at_corepresentable():
    T = sk.truncated_delta_op(3)
    r = sl.verify_slice_equivalence(sl.categories_sketch(3), sk.corepresentable_at_1(T), 2)
    assert r.ok and r.bijection and r.round_trips
    assert r.left_count == r.right_count == oracles.count_small_categories(2, 2, labelled=True)


def test_slice_equivalence_rejects_non_model():
    S = sl.categories_sketch(2)
    r = sl.verify_slice_equivalence(S, phantom(sl.nerve(fc.walking_arrow(), 2)), 2)
    assert not r.ok and "not a model" in r.detail
