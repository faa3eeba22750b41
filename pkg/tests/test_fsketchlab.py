import random

import pytest
from hypothesis import given, settings, strategies as st

from loosebimod import doublecat as dc
from loosebimod import fincore as fc
from loosebimod import fsketchlab as fs
from loosebimod import looseuniv as lu
from loosebimod import simplexkit as sk
from loosebimod import sketchlab as sl
from generators import random_category
from test_fincore import random_set_functor
from test_sketchlab import phantom

T2 = sk.truncated_delta_op(2)


def segal2():
    return fs.FSketch(T2.category, T2.inert, [sl.segal_cone(T2, 2)], T2)


def arrow_sketch():
    A = fc.walking_arrow()
    return fs.FSketch(A, range(A.n_mor), [])


def poset(n):
    return fc.poset_category(n, lambda i, j: i <= j)


def over_arrow(V0, V1, F):
    A = fc.walking_arrow()
    acts = {"id0": fc.FinFunctor.identity(V0), "id1": fc.FinFunctor.identity(V1), "a": F}
    return fs.strict_pseudo_functor(A, range(A.n_mor), [V0, V1], [acts[l] for l in A.mor_labels])


def empty_cone(L, apex):
    J = fc.discrete_category([])
    return sl.MarkedCone(apex, J, fc.FinFunctor(J, L, [], []), ())


def drop_object(P, a, x):
    """P with object ``x`` removed from the value at ``a``; actions and
    compositors are restricted, so they must avoid ``x``."""
    keep = [fc.full_subcategory(V, (lambda k: k != x) if i == a else (lambda k: True)) for i, V in enumerate(P.values)]
    B = P.base
    back = []
    for S, inc in keep:
        back.append(({o: i for i, o in enumerate(inc.obj_map)}, {m: i for i, m in enumerate(inc.mor_map)}))
    actions = []
    for u, F in enumerate(P.actions):
        s, t = B.src[u], B.tgt[u]
        inc = keep[s][1]
        bo, bm = back[t]
        actions.append(fc.FinFunctor(keep[s][0], keep[t][0], [bo[F.obj_map[o]] for o in inc.obj_map],
                                     [bm[F.mor_map[m]] for m in inc.mor_map]))
    comps = {}
    for (g, f), row in P.compositors.items():
        inc = keep[B.src[f]][1]
        comps[(g, f)] = tuple(back[B.tgt[g]][1][row[o]] for o in inc.obj_map)
    return fs.PseudoFunctorData(B, P.inert, [k[0] for k in keep], actions, comps, P.factorization)


def barrel_over(Bar, T):
    """The pseudo-model of a double barrel as a model over the
    corepresentable at [1]: objects are labelled by their vertex labels."""
    P = dc.double_to_pseudo_model(Bar.total, T)
    M = sk.corepresentable_at_1(T)
    B = T.category
    labels = []
    for n in range(T.n + 1):
        pos = {s: i for i, s in enumerate(M.sets[n])}
        row = []
        for x in range(P.values[n].n_obj):
            verts = [P.actions[B.mor((0, n, (i,)))].obj_map[x] for i in range(n + 1)]
            row.append(pos[tuple(Bar.obj_label[v] for v in verts)])
        labels.append(row)
    return fs.PseudoModelOver(P, M, labels)


# the two F-sketches

def test_double_cat_fsketch():
    S = fs.double_cat_fsketch()
    assert [S.carrier.objects[c.apex] for c in S.cones] == [2, 3, 4]
    T = sk.truncated_delta_op(4)
    assert all(T.classify(l) == "inert" for c in S.cones for l in c.legs)
    assert fs.validate_fsketch(S) == []
    c2 = sl.categories_sketch(4).cones[0]
    assert S.cones[0].signature() == c2.signature()


def test_pseudo_bimodule_fsketch():
    S = fs.pseudo_bimodule_fsketch()
    assert S.carrier.n_obj == 2 + 3 + 4 + 5 + 6
    assert len(sk.slice_delta_over_1(4).elementary()) == 5
    assert fs.validate_fsketch(S) == []
    D = fs.double_cat_fsketch()
    L = S.carrier
    zero = {L.objects[c.apex]: c for c in S.cones if set(L.objects[c.apex]) == {0}}
    proj = S.factorization.projection
    for c in D.cones:
        k = D.carrier.objects[c.apex]
        assert zero[(0,) * (k + 1)].image(proj).signature() == c.signature()


def test_validate_fsketch_flags_non_inert_leg():
    S = segal2()
    bad = fs.FSketch(S.carrier, S.inert - {S.cones[0].legs[0]}, S.cones)
    assert "cone-leg" in {v.law for v in fs.validate_fsketch(bad)}


# pseudo-functors and pseudo-models

def test_strict_functor_is_valid():
    V0, V1 = poset(2), poset(3)
    F = fc.FinFunctor(V0, V1, [0, 2], [V1.mor((0, 0)), V1.mor((0, 2)), V1.mor((2, 2))])
    P = over_arrow(V0, V1, F)
    assert fs.check_pseudo_F_functor(P).ok


def test_span_fragment_model_is_valid():
    P = dc.double_to_pseudo_model(lu.span_fragment_bounded(1, 1), T2)
    assert fs.check_pseudo_F_functor(P).ok
    assert fs.check_pseudo_model(P, segal2()).ok


def test_cocycle_model_has_compositors():
    T3 = sk.truncated_delta_op(3)
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T3)
    S = fs.FSketch(T3.category, T3.inert, [sl.segal_cone(T3, n) for n in (2, 3)], T3)
    assert P.compositors
    assert fs.check_pseudo_model(P, S).ok


def test_one_compositor_at_inert_pair_reported():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    B = T2.category
    s, d = B.mor((1, 0, (0, 0))), B.mor((0, 1, (0,)))
    assert s not in T2.inert and d in T2.inert
    sd = B.compose[(s, d)]
    V = P.values[B.tgt[s]]
    row = [P.component(s, d, x) for x in range(P.values[B.src[d]].n_obj)]
    x, loop = next((x, m) for x in range(len(row)) for m in V.out_of(V.tgt[row[x]])
                   if V.tgt[m] == V.tgt[row[x]] and not V.is_identity(m))
    row[x] = V.compose[(loop, row[x])]
    Q = fs.PseudoFunctorData(B, P.inert, P.values, P.actions, {**P.compositors, (s, d): tuple(row)}, T2)
    rep = fs.check_pseudo_F_functor(Q)
    assert not rep.ok
    assert len(rep.violations) == 1
    assert rep.violations[0].law == "strict-on-inerts"
    assert sd != B.identity[B.src[d]]


def test_proper_subcategory_at_2_fails_cone():
    C = poset(3)
    P = dc.double_to_pseudo_model(dc.loose_double(C), T2)
    S = segal2()
    assert fs.check_pseudo_model(P, S).ok
    V = P.values[2]
    x = next(o for o in range(V.n_obj) if _nondegenerate(P, o))
    Q = drop_object(P, 2, x)
    assert fs.check_pseudo_F_functor(Q).ok
    rep = fs.check_pseudo_model(Q, S)
    assert not rep.ok
    assert [(v.law, v.witness[1]) for v in rep.violations] == [("cone", 2)]


def _nondegenerate(P, o):
    B = T2.category
    for m in range(B.n_mor):
        if B.tgt[m] == 2 and not B.is_identity(m) and o in P.actions[m].obj_map:
            return False
    return True


def test_constant_terminal_model():
    S = fs.double_cat_fsketch(3)
    P = fs.constant_pseudo_functor(S, fc.terminal_category())
    assert fs.check_pseudo_model(P, S).ok


# Grothendieck construction

def test_grothendieck_of_discrete_is_elements():
    rng = random.Random(7)
    C = random_category(rng, max_obj=4, max_mor=8)
    M = random_set_functor(rng, C, size=3)
    G = fs.grothendieck(fs.discrete_pseudo_functor(M, range(C.n_mor)))
    El, _ = fc.category_of_elements(M)
    assert fc.find_isomorphism(G.total, El) is not None


def test_grothendieck_constant_over_point():
    T = fc.terminal_category()
    S = fs.FSketch(T, [0], [])
    G = fs.grothendieck(fs.constant_pseudo_functor(S, fc.walking_arrow()))
    assert fc.find_isomorphism(G.total, fc.walking_arrow()) is not None


@pytest.mark.parametrize("nx,ny", [(1, 2), (2, 3), (3, 1)])
def test_grothendieck_over_arrow_object_count(nx, ny):
    V0, V1 = poset(nx), poset(ny)
    F = fc.FinFunctor.constant(V0, V1, 0)
    P = over_arrow(V0, V1, F)
    G = fs.grothendieck(P)
    assert G.total.n_obj == nx + ny
    # morphisms over a: x -> F(x) -> y, one per (x, y) with 0 <= y
    assert G.total.n_mor == V0.n_mor + V1.n_mor + nx * ny
    assert fc.validate_category(G.total) == []


def test_grothendieck_cap():
    S = arrow_sketch()
    with pytest.raises(fc.CapExceeded):
        fs.grothendieck(fs.constant_pseudo_functor(S, poset(3)), cap=5)


# F-opfibrations

def test_grothendieck_output_is_F_opfibration():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    rep = fs.check_F_opfibration(fs.grothendieck(P).cleavage)
    assert rep.ok and not rep.discrete


def test_slice_projection_is_discrete_F_opfibration():
    S = sk.slice_delta_over_1(3)
    c = fs.discrete_cleavage(S.projection, S.base.inert)
    rep = fs.check_F_opfibration(c)
    assert rep.ok and rep.discrete


def test_non_opcartesian_lift_reported():
    S = arrow_sketch()
    A = S.carrier
    G = fs.grothendieck(fs.constant_pseudo_functor(S, A))
    a = A.mor("a")
    e = G.obj_id[(0, 0)]
    lift = dict(G.cleavage.lift)
    lift[(e, a)] = G.mor_id[(a, 0, a)]
    c = fs.Cleavage(G.projection, lift, G.cleavage.base_inert)
    rep = fs.check_F_opfibration(c)
    assert not rep.ok
    assert [(v.law, v.witness[1]) for v in rep.violations] == [("opcartesian", "a")]


def test_lift_of_identity_must_be_identity():
    S = arrow_sketch()
    A = S.carrier
    G = fs.grothendieck(fs.constant_pseudo_functor(S, A))
    e = G.obj_id[(0, 0)]
    lift = dict(G.cleavage.lift)
    lift[(e, A.identity[0])] = G.mor_id[(A.identity[0], 0, A.mor("a"))]
    rep = fs.check_F_opfibration(fs.Cleavage(G.projection, lift, G.cleavage.base_inert))
    assert {v.law for v in rep.violations} >= {"identity-lift"}


def test_compose_with_identity_cleavage():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    c = fs.grothendieck(P).cleavage
    cq = fs.identity_cleavage(c.total, c.inert())
    cc = fs.compose_cleavages(c, cq)
    assert cc.lift == c.lift and cc.p == c.p


def test_compose_discrete_cleavages():
    rng = random.Random(3)
    C = random_category(rng, max_obj=3, max_mor=6)
    E1, p = fc.category_of_elements(random_set_functor(rng, C))
    E2, q = fc.category_of_elements(random_set_functor(rng, E1, size=2))
    cp = fs.discrete_cleavage(p, range(C.n_mor))
    cq = fs.discrete_cleavage(q, range(E1.n_mor))
    rep = fs.check_F_opfibration(fs.compose_cleavages(cp, cq))
    assert rep.ok and rep.discrete


def test_stacked_grothendieck_cleavages():
    # a model over El(M) stacked on the discrete projection to the base
    S = segal2()
    M = sk.corepresentable_at_1(T2)
    ES = fs.elements_fsketch(S, M)
    Q = fs.constant_pseudo_functor(ES, fc.walking_arrow())
    assert fs.check_pseudo_model(Q, ES).ok
    G = fs.grothendieck(Q)
    cpi = fs.discrete_cleavage(ES.projection, S.inert)
    cc = fs.compose_cleavages(cpi, G.cleavage)
    assert fs.check_F_opfibration(cc).ok
    assert fs.is_model_opfibration(G.cleavage, ES)
    assert fs.is_model_opfibration(cpi, S)
    assert fs.is_model_opfibration(cc, S)


# cone lifting

def test_cone_lifting_on_model_both_routes():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    c = fs.grothendieck(P).cleavage
    for cone in segal2().cones:
        assert fs.check_cone_lifting(c, cone) == []
        assert fs.check_cone_lifting_fillers(c, cone) == []


def test_cone_lifting_fails_on_non_model():
    X = phantom(sl.nerve(fc.walking_arrow(), 2))
    P = fs.discrete_pseudo_functor(X, T2.inert)
    assert fs.check_pseudo_F_functor(P).ok
    rep = fs.check_pseudo_model(P, segal2())
    assert [v.law for v in rep.violations] == ["cone"]
    c = fs.grothendieck(P).cleavage
    cone = segal2().cones[0]
    v1 = fs.check_cone_lifting(c, cone)
    v2 = fs.check_cone_lifting_fillers(c, cone)
    assert v1 and v2
    assert v1[0].witness[0] == v2[0].witness[0] == 2
    assert "2 fillers" in v2[0].detail
    assert not fs.is_model_opfibration(c, segal2())


def test_cone_lifting_fillers_cap():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    c = fs.grothendieck(P).cleavage
    v = fs.check_cone_lifting_fillers(c, segal2().cones[0], cap=0)
    assert [x.law for x in v] == ["cap"]


@pytest.mark.parametrize("size", [0, 1, 2])
def test_empty_cone_needs_singleton_fibre(size):
    T = fc.terminal_category()
    S = fs.FSketch(T, [0], [])
    P = fs.constant_pseudo_functor(S, fc.discrete_category(range(size)))
    c = fs.grothendieck(P).cleavage
    cone = empty_cone(T, 0)
    expect = size == 1
    assert (fs.check_cone_lifting(c, cone) == []) == expect
    assert (fs.check_cone_lifting_fillers(c, cone) == []) == expect


def test_empty_cone_rejects_non_discrete_singleton_fibre():
    T = fc.terminal_category()
    P = fs.constant_pseudo_functor(fs.FSketch(T, [0], []), fc.monoid_category([[0, 1], [1, 0]]))
    c = fs.grothendieck(P).cleavage
    assert fs.check_cone_lifting(c, empty_cone(T, 0))
    assert fs.check_cone_lifting_fillers(c, empty_cone(T, 0))


def test_model_opfibrations_compose():
    # non-discrete model opfibration over a non-discrete one
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    S = segal2()
    G = fs.grothendieck(P)
    c = G.cleavage
    assert fs.is_model_opfibration(c, S)
    LS = fs.lifted_fsketch(c, S)
    assert fs.validate_fsketch(LS) == []
    P2 = fs.pullback_pseudo_functor(P, G.projection, c.inert())
    G2 = fs.grothendieck(P2)
    assert fs.is_model_opfibration(G2.cleavage, LS)
    cc = fs.compose_cleavages(c, G2.cleavage)
    assert fs.is_model_opfibration(cc, S)


# indexing

def test_indexing_round_trip():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    Q, isos = fs.indexing_roundtrip_isos(P)
    assert fs.check_pseudo_iso(P, Q, isos) == []


def test_pseudo_iso_detects_changed_action():
    P = dc.double_to_pseudo_model(dc.loose_double(poset(3)), T2)
    Q, isos = fs.indexing_roundtrip_isos(P)
    B = T2.category
    u = B.mor((0, 1, (0,)))
    actions = list(Q.actions)
    actions[u] = fc.FinFunctor.constant(Q.values[1], Q.values[0], 0)
    wrong = fs.PseudoFunctorData(Q.base, Q.inert, Q.values, actions, Q.compositors)
    v = fs.check_pseudo_iso(P, wrong, isos)
    assert [x.witness for x in v if x.law == "action"] == [(B.mor_labels[u],)]
    # compositors through the changed action no longer match either
    assert all(B.mor_labels[u] in x.witness for x in v if x.law == "compositor")


def test_grothendieck_comparison_is_iso_over_base():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    c = fs.grothendieck(P).cleavage
    G, F = fs.grothendieck_comparison(c)
    assert fc.validate_functor(F) == [] and fc.is_isomorphism(F)
    assert F.then(c.p) == G.projection


def test_indexing_of_discrete_cleavage_is_discrete():
    rng = random.Random(9)
    C = random_category(rng, max_obj=3, max_mor=6)
    _, p = fc.category_of_elements(random_set_functor(rng, C, size=3))
    Q = fs.indexing_pseudofunctor(fs.discrete_cleavage(p, range(C.n_mor)))
    assert all(V.n_mor == V.n_obj for V in Q.values)
    assert Q.compositors == {}


def test_slice_projection_indexes_to_corepresentable():
    T = sk.truncated_delta_op(3)
    S = sk.slice_delta_over_1(3)
    Q = fs.indexing_pseudofunctor(fs.discrete_cleavage(S.projection, S.base.inert))
    M = sk.corepresentable_at_1(T)
    B = T.category
    for a in range(B.n_obj):
        assert sorted(Q.values[a].objects) == sorted(M.sets[a])
        assert Q.values[a].n_mor == Q.values[a].n_obj
    for u in range(B.n_mor):
        V, W = Q.values[B.src[u]], Q.values[B.tgt[u]]
        for x, s in enumerate(V.objects):
            got = W.objects[Q.actions[u].obj_map[x]]
            assert got == M.sets[B.tgt[u]][M.maps[u][M.sets[B.src[u]].index(s)]]


# pseudo-models over a discrete model

def test_elements_fsketch_is_pseudo_bimodule_fsketch():
    T = sk.truncated_delta_op(4)
    ES = fs.elements_fsketch(fs.double_cat_fsketch(), sk.corepresentable_at_1(T))
    PB = fs.pseudo_bimodule_fsketch()
    F = sl.slice_elements_iso(ES.carrier, PB.carrier)
    assert fs.fsketch_isomorphic_via(ES, PB, F)


def test_pseudo_slice_on_blow_ups():
    S = segal2()
    M = sk.corepresentable_at_1(T2)
    P0 = fs.discrete_pseudo_functor(M, S.inert, S.factorization)
    insts = []
    for seed in range(3):
        P = fs.blow_up(P0, 2, random.Random(seed))
        insts.append(fs.PseudoModelOver(P, M, [[x // 2 for x in range(V.n_obj)] for V in P.values]))
    ok, details = fs.verify_pseudo_slice_equivalence(S, M, insts)
    assert ok, details
    assert [d[1] for d in details] == ["ok"] * 3


def test_pseudo_slice_on_double_barrel():
    S = segal2()
    PO = barrel_over(dc.hom_double_barrel(dc.walking_loose_arrow()), T2)
    assert fs.validate_over(PO) == []
    ok, details = fs.verify_pseudo_slice_equivalence(S, PO.M, [PO])
    assert ok, details


def test_pseudo_slice_over_terminal():
    S = segal2()
    M = sl.constant_model(S)
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    PO = fs.PseudoModelOver(P, M, [[0] * V.n_obj for V in P.values])
    ES = fs.elements_fsketch(S, M)
    assert fc.is_isomorphism(ES.projection)
    ok, details = fs.verify_pseudo_slice_equivalence(S, M, [PO])
    assert ok, details


def test_pseudo_slice_rejects_bad_labels():
    S = segal2()
    M = sk.corepresentable_at_1(T2)
    PO = barrel_over(dc.hom_double_barrel(dc.walking_loose_arrow()), T2)
    labels = [list(r) for r in PO.labels]
    labels[0] = [1 - l for l in labels[0]]
    bad = fs.PseudoModelOver(PO.P, M, labels)
    assert fs.validate_over(bad)
    ok, details = fs.verify_pseudo_slice_equivalence(S, M, [bad])
    assert not ok and "not a pseudo-model over M" in details[0][1]


# transformations

def test_identity_transformation_and_modification():
    P = dc.double_to_pseudo_model(dc.cocycle_double(), T2)
    Phi = fs.PseudoFTransformation(P, P, [fc.FinFunctor.identity(V) for V in P.values])
    assert fs.check_pseudo_F_transformation(Phi) == []
    G = fs.Modification(Phi, Phi, [[V.identity[x] for x in range(V.n_obj)] for V in P.values])
    assert fs.check_modification(G) == []


def test_transformation_cell_at_inert_rejected():
    S = arrow_sketch()
    Z2 = fc.monoid_category([[0, 1], [1, 0]])
    P = fs.constant_pseudo_functor(S, Z2)
    a = S.carrier.mor("a")
    Phi = fs.PseudoFTransformation(P, P, [fc.FinFunctor.identity(Z2)] * 2, {a: (1,)})
    assert [v.law for v in fs.check_pseudo_F_transformation(Phi)] == ["strict-on-inerts"]
    S2 = fs.FSketch(S.carrier, [m for m in range(3) if m != a], [])
    P2 = fs.constant_pseudo_functor(S2, Z2)
    Phi2 = fs.PseudoFTransformation(P2, P2, [fc.FinFunctor.identity(Z2)] * 2, {a: (1,)})
    assert fs.check_pseudo_F_transformation(Phi2) == []


# invariants

@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_grothendieck_of_blow_up_is_F_opfibration(seed):
    rng = random.Random(seed)
    M = sk.corepresentable_at_1(T2)
    P = fs.blow_up(fs.discrete_pseudo_functor(M, T2.inert, T2), rng.randint(1, 3), rng)
    assert fs.check_pseudo_model(P, segal2()).ok
    G = fs.grothendieck(P)
    c = G.cleavage
    assert fs.check_F_opfibration(c).ok
    assert all(fs.inert_coslice_check(c, e) for e in range(G.total.n_obj))
    Q, isos = fs.indexing_roundtrip_isos(P, G)
    assert fs.check_pseudo_iso(P, Q, isos) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_discrete_codomain_lifting(seed):
    rng = random.Random(seed)
    C = random_category(rng, max_obj=3, max_mor=6)
    E1, q = fc.category_of_elements(random_set_functor(rng, C))
    # f : E -> E1 from a random strict functor on E1 with poset values
    n = rng.randint(1, 2)
    V = poset(n)
    consts = [fc.FinFunctor.constant(V, V, rng.randrange(n)) if not E1.is_identity(m) else fc.FinFunctor.identity(V)
              for m in range(E1.n_mor)]
    P = fs.strict_pseudo_functor(E1, range(E1.n_mor), [V] * E1.n_obj, consts)
    if fs.check_pseudo_F_functor(P).ok:
        f = fs.grothendieck(P).projection
        assert fs.check_discrete_codomain_lifting(f, q) == []
        assert fs.count_opcartesian(f.then(q)) <= fs.count_opcartesian(f)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_composition_preserves_F_opfibration(seed):
    rng = random.Random(seed)
    S = segal2()
    M = sk.corepresentable_at_1(T2)
    ES = fs.elements_fsketch(S, M)
    Q = fs.blow_up(fs.constant_pseudo_functor(ES, poset(rng.randint(1, 2))), 2, rng)
    assert fs.check_pseudo_model(Q, ES).ok
    G = fs.grothendieck(Q)
    cc = fs.compose_cleavages(fs.discrete_cleavage(ES.projection, S.inert), G.cleavage)
    assert fs.check_F_opfibration(cc).ok
    assert fs.is_model_opfibration(cc, S)
