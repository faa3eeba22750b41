import random

import pytest
from hypothesis import given, settings, strategies as st

from loosebimod import fincore as fc
from generators import preorder, random_category
import oracles


def idempotent_chain():
    """0 -f-> 1 -g-> 2 with an idempotent e on 1."""
    words = {"id0": (0, 0), "id1": (1, 1), "id2": (2, 2), "f": (0, 1), "g": (1, 2), "e": (1, 1),
             "ef": (0, 1), "ge": (1, 2), "gf": (0, 2), "gef": (0, 2)}

    def letters(lab):
        return [] if lab.startswith("id") else list(reversed(lab))

    def comp(g, f):
        w = []
        for c in letters(f) + letters(g):
            if not (c == "e" and w and w[-1] == "e"):
                w.append(c)
        return "".join(reversed(w)) if w else "id%d" % words[f][0]

    return fc.FinCategory.build([0, 1, 2], [(k, s, t) for k, (s, t) in words.items()], lambda o: "id%d" % o, comp)


def mutated(C, key, value):
    return fc.FinCategory(C.objects, list(zip(C.mor_labels, C.src, C.tgt)), C.identity, {**C.compose, key: value})


# validate_category

def test_walking_arrow_valid():
    A = fc.walking_arrow()
    assert (A.n_obj, A.n_mor) == (2, 3)
    assert fc.validate_category(A) == []


def test_non_composable_entry_reported():
    A = fc.walking_arrow()
    a = A.mor("a")
    v = fc.validate_category(mutated(A, (a, a), A.identity[0]))
    assert [x.law for x in v] == ["not-composable"]
    assert v[0].witness == (a, a)


def test_one_corrupted_triple():
    C = idempotent_chain()
    assert fc.validate_category(C) == []
    g, e, f = C.mor("g"), C.mor("e"), C.mor("f")
    D = mutated(C, (g, e), g)
    v = fc.validate_category(D)
    assert oracles.associativity_failures(D.n_obj, D.src, D.tgt, D.compose) == [(g, e, f)]
    assert [(x.law, x.witness) for x in v] == [("associativity", (g, e, f))]


def test_missing_composite_and_unit():
    A = fc.walking_arrow()
    comp = dict(A.compose)
    del comp[(1, 2)]
    v = fc.validate_category(fc.FinCategory(A.objects, list(zip(A.mor_labels, A.src, A.tgt)), A.identity, comp))
    assert [x.law for x in v] == ["missing-composite"]
    v = fc.validate_category(mutated(A, (2, 0), 0))
    assert v and v[0].law == "composite-type"


def test_bad_indices_reported_not_raised():
    C = fc.FinCategory([0], [("x", 0, 5)], [0], {})
    v = fc.validate_category(C)
    assert v and v[0].law == "index"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_generated_categories_are_associative(seed):
    C = random_category(random.Random(seed))
    assert fc.validate_category(C) == []
    assert oracles.associativity_failures(C.n_obj, C.src, C.tgt, C.compose) == []


def test_dense_and_plain_associativity_agree():
    # big enough to take the numpy route
    C = fc.product_category(fc.poset_category(4, lambda i, j: i <= j), fc.poset_category(4, lambda i, j: i <= j))
    C = fc.product_category(C, fc.monoid_category([[0, 1, 2], [1, 1, 1], [2, 2, 2]]))
    assert 300 <= C.n_mor <= fc.DENSE_ASSOC_LIMIT
    f = next(x for x in C.non_identity() if C.src[x] != C.tgt[x])
    g = next(x for x in C.out_of(C.tgt[f]) if not C.is_identity(x))
    alt = [h for h in C.hom(C.src[f], C.tgt[g]) if h != C.compose[(g, f)]]
    D = mutated(C, (g, f), alt[0]) if alt else C
    assert sorted(x.witness for x in fc.validate_category(D)) == \
        sorted(oracles.associativity_failures(D.n_obj, D.src, D.tgt, D.compose))


# functors

def test_identity_and_constant_functors():
    C = preorder(random.Random(3), 4)
    assert fc.validate_functor(fc.FinFunctor.identity(C)) == []
    T = fc.terminal_category()
    assert fc.validate_functor(fc.FinFunctor.constant(C, T, 0)) == []


def test_swapping_objects_reports_endpoints():
    A = fc.walking_arrow()
    F = fc.FinFunctor(A, A, [1, 0], range(3))
    laws = {x.law for x in fc.validate_functor(F)}
    assert "endpoints" in laws


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_functor_composites_are_functors(seed):
    rng = random.Random(seed)
    C, D, E = (random_category(rng, max_obj=3, max_mor=6) for _ in range(3))
    FS = fc.enumerate_functors(C, D)
    GS = fc.enumerate_functors(D, E)
    F, G = rng.choice(FS), rng.choice(GS)
    assert fc.validate_functor(F.then(G)) == []


# pullbacks

def test_pullback_over_point_is_product():
    f = fc.FinSetMap("ab", "*", "**")
    g = fc.FinSetMap("xyz", "*", "***")
    apex, p1, p2 = fc.pullback_finset(f, g)
    assert len(apex) == 6
    assert apex == sorted(apex)


def test_pullback_along_identity_and_empty():
    Z = (0, 1, 2)
    g = fc.FinSetMap("pqrs", Z, (0, 2, 2, 1))
    apex, p1, p2 = fc.pullback_finset(fc.FinSetMap(Z, Z, Z), g)
    assert sorted(p2.images) == sorted(g.dom)
    apex, _, _ = fc.pullback_finset(fc.FinSetMap((), Z, ()), g)
    assert apex == []
    with pytest.raises(ValueError):
        fc.pullback_finset(fc.FinSetMap("a", (0,), (0,)), g)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=3), st.lists(st.integers(0, 2), max_size=3), st.integers(0, 2))
def test_pullback_universal_property(fv, gv, k):
    f = fc.FinSetMap(range(len(fv)), (0, 1, 2), fv)
    g = fc.FinSetMap(range(len(gv)), (0, 1, 2), gv)
    apex, p1, p2 = fc.pullback_finset(f, g)
    assert apex == oracles.brute_pullback_pairs(fv, gv)
    assert all(n == 1 for n in oracles.mediating_maps(apex, fv, gv, k))


# enumeration

def test_enumerate_functors_counts():
    A, T = fc.walking_arrow(), fc.terminal_category()
    C = preorder(random.Random(1), 4)
    assert len(fc.enumerate_functors(T, C)) == C.n_obj
    assert len(fc.enumerate_functors(A, A)) == 3
    assert len(fc.enumerate_functors(fc.discrete_category("xy"), T)) == 1
    Fs = fc.enumerate_functors(A, A)
    assert len(set(Fs)) == len(Fs)
    assert all(fc.validate_functor(F) == [] for F in Fs)


def test_enumerate_functors_cap():
    C = fc.discrete_category(range(6))
    with pytest.raises(fc.SearchSpaceTooLarge) as err:
        fc.enumerate_functors(C, C, cap=100)
    assert err.value.bound == 6 ** 6


def test_max_cells_environment(monkeypatch):
    monkeypatch.setenv("LOOSEBIMOD_MAX_CELLS", "17")
    assert fc.max_cells() == 17
    C = fc.discrete_category(range(3))
    with pytest.raises(fc.SearchSpaceTooLarge):
        fc.enumerate_functors(C, C)


# elements and opfibrations

def test_elements_of_constant_singleton():
    C = preorder(random.Random(5), 3)
    El, pi = fc.category_of_elements(fc.constant_set_functor(C))
    assert fc.is_isomorphism(pi) and fc.validate_functor(pi) == []


def test_elements_walking_arrow_example():
    A = fc.walking_arrow()
    P = fc.SetFunctor(A, ["xy", "z"], [(0, 1), (0,), (0, 0)])
    El, pi = fc.category_of_elements(P)
    assert El.n_obj == 3
    assert len(El.non_identity()) == 2
    assert oracles.elements_counts(A.src, A.tgt, P.sets, P.maps) == (El.n_obj, El.n_mor)


def test_elements_of_empty_functor():
    A = fc.walking_arrow()
    El, _ = fc.category_of_elements(fc.SetFunctor(A, [(), ()], [(), (), ()]))
    assert (El.n_obj, El.n_mor) == (0, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_elements_projection_is_discrete_opfibration(seed):
    rng = random.Random(seed)
    C = random_category(rng, max_obj=4, max_mor=8)
    P = random_set_functor(rng, C)
    El, pi = fc.category_of_elements(P)
    assert fc.validate_category(El) == []
    assert fc.is_discrete_opfibration(pi) == (True, None)


def random_set_functor(rng, C, size=2):
    """A set functor through a random functor to a preorder-by-maps: the
    composite with some functor into a category of small sets is hard to
    draw directly, so take a corepresentable-like sum of homs."""
    reps = [rng.randrange(C.n_obj) for _ in range(rng.randint(0, size))] if C.n_obj else []
    sets = [[(i, f) for i, c in enumerate(reps) for f in C.hom(c, a)] for a in range(C.n_obj)]
    pos = [{x: k for k, x in enumerate(s)} for s in sets]
    maps = [tuple(pos[C.tgt[u]][(i, C.compose[(u, f)])] for i, f in sets[C.src[u]]) for u in range(C.n_mor)]
    return fc.SetFunctor(C, sets, maps)


def test_identity_is_discrete_opfibration():
    C = preorder(random.Random(2), 3)
    assert fc.is_discrete_opfibration(fc.FinFunctor.identity(C))[0]


def test_walking_arrow_to_terminal_not_discrete():
    A = fc.walking_arrow()
    p = fc.FinFunctor.constant(A, fc.terminal_category(), 0)
    ok, (e, u, lifts) = fc.is_discrete_opfibration(p)
    assert not ok
    assert e == 0 and len(lifts) == 2  # the identity and a


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_discrete_opfibrations_compose_and_cancel(seed):
    rng = random.Random(seed)
    C = random_category(rng, max_obj=3, max_mor=6)
    P = random_set_functor(rng, C)
    E1, p = fc.category_of_elements(P)
    Q = random_set_functor(rng, E1, size=1)
    E2, q = fc.category_of_elements(Q)
    pq = q.then(p)
    assert fc.is_discrete_opfibration(pq)[0]
    # left cancellation: p and pq discrete, so q is
    assert fc.is_discrete_opfibration(p)[0] and fc.is_discrete_opfibration(q)[0]


# equivalence

def test_equivalence_examples():
    C = preorder(random.Random(4), 3)
    assert fc.check_equivalence(fc.FinFunctor.identity(C))[0]
    D = fc.discrete_category("ab")
    S, inc = fc.full_subcategory(D, lambda a: a == 0)
    ok, rep = fc.check_equivalence(inc)
    assert not ok and [x.law for x in rep] == ["essentially-surjective"]


def test_equivalence_with_duplicate_object():
    # 0 <-> 0' isomorphic duplicates over the walking arrow: objects 0, 0', 1
    C = fc.poset_category(3, lambda i, j: i == j or (i, j) in {(0, 1), (1, 0), (0, 2), (1, 2)})
    assert fc.validate_category(C) == []
    S, inc = fc.full_subcategory(C, lambda a: a != 1)
    assert fc.find_isomorphism(S, fc.walking_arrow()) is not None
    assert fc.check_equivalence(inc) == (True, [])
    # collapsing the duplicate is also an equivalence
    q = fc.FinFunctor(C, S, [0, 0, 1], [_collapse(S, C, f) for f in range(C.n_mor)])
    assert fc.validate_functor(q) == []
    assert fc.check_equivalence(q)[0]


def _collapse(S, C, f):
    o = {0: 0, 1: 0, 2: 2}
    i, j = C.mor_labels[f]
    return S.mor((o[i], o[j]))
