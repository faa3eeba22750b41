import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from loosebimod import doublecat as dc
from loosebimod import fincore as fc
from loosebimod import fsketchlab as fs
from loosebimod import instances as ins
from loosebimod import looseuniv as lu
from loosebimod import simplexkit as sk
from generators import random_category

T3 = sk.truncated_delta_op(3)
S3 = fs.double_cat_fsketch(3)


def poset(n):
    return fc.poset_category(n, lambda i, j: i <= j)


def delta(t):
    return lambda x, y, z: 1 if (x, y, z) == t else 0


def pentagon_failures(n, omega):
    """Quadruples where the associator exponents do not satisfy the
    3-cocycle identity of Z/n."""
    out = []
    for m, a, p, q in itertools.product(range(n), repeat=4):
        lhs = omega(m, a, (p + q) % n) + omega((m + a) % n, p, q)
        rhs = omega(a, p, q) + omega(m, (a + p) % n, q) + omega(m, a, p)
        if (lhs - rhs) % n:
            out.append((m, a, p, q))
    return out


def shift_functor(A, E, i):
    """WalkingLoose into tight(poset 2) x WalkingLoose at the i-th copy."""
    return dc.relabel_double_functor(A, E, lambda o: (i, o), lambda f: ((i, i), f), lambda m: (("U", i), m),
                                     lambda s: (("U", (i, i)), s))


def empty_double():
    return dc.full_double_sub(dc.walking_loose_arrow(), lambda a: False)


def from_empty(D):
    return dc.DoubleFunctorData(empty_double(), D, [], [], [], [])


# validation

def test_walking_loose_arrow():
    W = dc.walking_loose_arrow()
    assert (W.n_obj, W.tight.n_mor, W.n_loose, W.n_sq) == (2, 2, 3, 3)
    assert all(W.top[s] == W.bot[s] and W.vid[W.top[s]] == s for s in range(W.n_sq))
    assert dc.validate_double_category(W) == []
    assert W.is_strict()
    ell = W.loose("ell")
    assert W.h(ell, W.unit[1]) == ell and W.h(W.unit[0], ell) == ell


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tight_and_loose_doubles_are_valid(seed):
    C = random_category(random.Random(seed), max_obj=4, max_mor=8)
    assert dc.validate_double_category(dc.tight_double(C)) == []
    assert dc.validate_double_category(dc.loose_double(C)) == []


@pytest.mark.parametrize("n", [2, 3])
def test_cocycle_is_valid(n):
    D = dc.cocycle_double(n)
    assert not D.is_strict()
    assert dc.validate_double_category(D) == []


@pytest.mark.parametrize("n,t", [(2, (0, 1, 1)), (2, (1, 1, 0)), (3, (1, 1, 1))])
def test_wrong_associator_locates_pentagons(n, t):
    D = dc.cocycle_double(n, delta(t))
    v = dc.validate_double_category(D)
    assert {x.law for x in v} == {"pentagon"}
    assert sorted(x.witness for x in v) == pentagon_failures(n, delta(t))


def test_unit_in_the_middle_breaks_triangle():
    D = dc.cocycle_double(2, delta((1, 0, 1)))
    assert "triangle" in {x.law for x in dc.validate_double_category(D)}


def test_span_fragment_is_valid():
    D = lu.span_fragment()
    assert (D.n_obj, D.n_loose, D.n_sq) == (1, 2, 4)
    assert not D.is_strict()
    assert dc.validate_double_category(D) == []


def test_broken_square_boundary_reported():
    W = dc.walking_loose_arrow()
    top = list(W.top)
    top[W.vid[W.loose("ell")]] = W.loose("0")
    D = dc.FinDoubleCategory(W.tight, zip(W.loose_labels, W.lsrc, W.ltgt),
                             zip(W.sq_labels, top, W.bot, W.left, W.right), W.vcomp, W.vid, W.unit, W.tight_sq,
                             W.hcomp, W.hcomp_sq)
    v = dc.validate_double_category(D)
    assert v and v[0].law == "square-boundary"


# barrels and carriers

def test_hom_barrel_fibres_and_carrier():
    C = dc.loose_double(poset(2))
    assert C.n_loose == 3
    B = dc.hom_double_barrel(C)
    assert dc.validate_double_barrel(B) == []
    for Fib in dc.barrel_fibres(B):
        assert (Fib.n_obj, Fib.n_loose, Fib.n_sq) == (C.n_obj, C.n_loose, C.n_sq)
        assert dc.validate_double_category(Fib) == []
    Car = dc.carrier(B)
    assert len(B.heteromorphisms()) == C.n_loose == Car.n_obj
    assert fc.find_isomorphism(Car, C.vertical()) is not None


@pytest.mark.parametrize("name", ["walking-loose", "cocycle", "tight-p2", "span-fragment"])
def test_carrier_objects_are_loose_arrows(name):
    C = ins.double(name)
    Car = dc.carrier(dc.hom_double_barrel(C))
    assert sorted(o[0] for o in Car.objects) == sorted(C.loose_labels)
    assert fc.find_isomorphism(Car, C.vertical()) is not None


def test_hom_barrel_of_terminal_is_walking_loose():
    B = dc.hom_double_barrel(dc.terminal_double())
    W = dc.walking_loose_arrow()
    D = B.total
    assert (D.n_obj, D.tight.n_mor, D.n_loose, D.n_sq) == (W.n_obj, W.tight.n_mor, W.n_loose, W.n_sq)
    F = dc.relabel_double_functor(W, D, lambda o: (D.tight.objects[0][0], o),
                                  lambda f: (D.tight.mor_labels[0][0], f), lambda m: ("U", m), lambda s: ("id", s))
    assert dc.check_double_iso(F) == []


def test_walking_loose_over_itself():
    W = dc.walking_loose_arrow()
    B = dc.identity_barrel(W, [0, 1])
    assert dc.validate_double_barrel(B) == []
    Car = dc.carrier(B)
    assert (Car.n_obj, Car.n_mor) == (1, 1)


def test_all_zero_barrel():
    C = dc.cocycle_double()
    B = dc.identity_barrel(C, [0] * C.n_obj)
    D0, D1 = dc.barrel_fibres(B)
    assert D0.n_obj == C.n_obj and (D1.n_obj, D1.n_loose) == (0, 0)
    assert dc.carrier(B).n_obj == 0


def test_barrel_label_violation():
    W = dc.walking_loose_arrow()
    B = dc.DoubleBarrel(W, [0, 1], [dc.WL_U0, dc.WL_U0, dc.WL_U1])
    assert [v.law for v in dc.validate_double_barrel(B)] == ["label-loose"]


# restriction

@pytest.mark.parametrize("name,along", [("walking-loose", "id"), ("walking-loose", "point"),
                                        ("cocycle", "id"), ("cocycle", "point-point"),
                                        ("span-small", "point"), ("tight-p2", "point")])
def test_restriction_carrier_is_limit(name, along):
    B, F0, F1 = ins.restriction_setup(name, along)
    R = dc.restriction(B, F0, F1)
    assert dc.validate_double_barrel(R.barrel) == []
    assert dc.validate_double_functor(R.projection) == []
    L, Car, G = dc.carrier_limit_comparison(R.barrel, B, F0, F1)
    assert fc.validate_functor(G) == [] and fc.is_isomorphism(G)
    assert dc.projection_faithful(R.barrel, R.projection) is None


@pytest.mark.parametrize("name", ["walking-loose", "cocycle", "tight-p2"])
def test_restriction_along_identities(name):
    B, F0, F1 = ins.restriction_setup(name, "id")
    R = dc.restriction(B, F0, F1)
    D, RD = B.total, R.barrel.total
    assert (RD.n_obj, RD.tight.n_mor, RD.n_loose, RD.n_sq) == (D.n_obj, D.tight.n_mor, D.n_loose, D.n_sq)
    assert fc.find_isomorphism(dc.carrier(R.barrel), dc.carrier(B)) is not None
    # Π is bijective on every kind of cell
    P = R.projection
    assert sorted(P.lmap) == list(range(D.n_loose)) and sorted(P.smap) == list(range(D.n_sq))


def test_restriction_from_empty_domains():
    B = dc.hom_double_barrel(dc.walking_loose_arrow())
    D0, D1 = dc.barrel_fibres(B)
    R = dc.restriction(B, from_empty(D0), from_empty(D1))
    assert dc.carrier(R.barrel).n_obj == 0
    assert all(F.n_obj == 0 for F in dc.barrel_fibres(R.barrel))
    R1 = dc.restriction(B, from_empty(D0), dc.identity_double_functor(D1))
    N0, N1 = dc.barrel_fibres(R1.barrel)
    assert N0.n_obj == 0 and N1.n_obj == D1.n_obj
    assert dc.carrier(R1.barrel).n_obj == 0


def test_restriction_rejects_other_codomain():
    B = dc.hom_double_barrel(dc.walking_loose_arrow())
    W = dc.walking_loose_arrow()
    with pytest.raises(ValueError):
        dc.restriction(B, dc.identity_double_functor(dc.cocycle_double()), dc.identity_double_functor(W))


def test_restriction_point_ids_count():
    # pointing the 0-side at one object keeps the heteromorphisms out of it
    B, F0, F1 = ins.restriction_setup("tight-p2", "point")
    R = dc.restriction(B, F0, F1)
    D = B.total
    a = F0.obj[0]
    src_obj = dc.barrel_fibres(B)[0].tight.objects[a]
    expect = sum(1 for m in B.heteromorphisms() if D.tight.objects[D.lsrc[m]] == src_obj)
    assert dc.carrier(R.barrel).n_obj == expect


@pytest.mark.parametrize("name,along", [("walking-loose", "id"), ("walking-loose", "point"),
                                        ("cocycle", "point"), ("span-small", "point"),
                                        ("span-small", "id")])
def test_restriction_universal_property(name, along):
    B, F0, F1 = ins.restriction_setup(name, along)
    R = dc.restriction(B, F0, F1)
    G0, G1 = ins.strip_functors(R, F0, F1)
    r = dc.check_restriction_universal_property(B, F0, F1, R.barrel, G0, G1, restricted=R)
    assert r.ok, r
    assert r.left_count == r.right_count >= 1
    assert r.left_count <= 50
    assert r.reading == "labelling-only"


def test_restriction_universal_property_wrong_target():
    B, F0, F1 = ins.restriction_setup("walking-loose", "point")
    R = dc.restriction(B, F0, F1)
    G0, G1 = ins.strip_functors(R, F0, F1)
    D0, D1 = dc.barrel_fibres(B)
    # the cells are compared against the restriction along another F0
    other = dc.restriction(B, dc.point_functor(D0, 1), F1)
    r = dc.check_restriction_universal_property(B, F0, F1, R.barrel, G0, G1, restricted=other)
    assert not r.ok and r.witness is not None


# converters

def test_walking_loose_model_is_corepresentable():
    P = dc.double_to_pseudo_model(dc.walking_loose_arrow(), T3)
    assert P.compositors == {}
    M = sk.corepresentable_at_1(T3)
    assert all(V.n_mor == V.n_obj for V in P.values)
    assert [V.n_obj for V in P.values] == [len(s) for s in M.sets]
    # each chain goes to its vertex sequence: a bijection natural in [n]
    B = T3.category
    W = dc.walking_loose_arrow()

    def seq(n, x):
        return tuple(P.actions[B.mor((0, n, (i,)))].obj_map[x] if n else x for i in range(n + 1))

    for n in range(4):
        assert sorted(seq(n, x) for x in range(P.values[n].n_obj)) == sorted(M.sets[n])
    for u in range(B.n_mor):
        a, b = B.src[u], B.tgt[u]
        for x in range(P.values[a].n_obj):
            s = seq(a, x)
            assert seq(b, P.actions[u].obj_map[x]) == M.sets[b][M.maps[u][M.sets[a].index(s)]]
    assert W.n_obj == 2


@pytest.mark.parametrize("name", ["walking-loose", "terminal", "tight-p2", "loose-p2"])
def test_strict_doubles_have_strict_models(name):
    P = dc.double_to_pseudo_model(ins.double(name), T3)
    assert P.compositors == {}
    assert fs.check_pseudo_model(P, S3).ok


@pytest.mark.parametrize("name", ["walking-loose", "terminal", "cocycle", "span-fragment", "span-small", "loose-p2"])
def test_double_round_trip(name):
    D = ins.double(name)
    F, P, E = dc.double_roundtrip_functor(D, T3)
    assert fs.check_pseudo_model(P, S3).ok
    assert dc.validate_double_category(E) == []
    assert dc.check_double_iso(F) == []


@pytest.mark.parametrize("name", ["walking-loose", "cocycle", "span-small"])
def test_model_round_trip(name):
    P = dc.double_to_pseudo_model(ins.double(name), T3)
    P2, isos, D = dc.model_roundtrip_isos(P, T3)
    assert fs.check_pseudo_iso(P, P2, isos) == []


def test_cocycle_round_trip_keeps_associator():
    D = dc.cocycle_double()
    F, P, E = dc.double_roundtrip_functor(D, T3)
    assert P.compositors
    assert not E.is_strict()
    nontrivial = [t for t in itertools.product(range(2), repeat=3) if D.a(*t) != D.vid[D.bot[D.a(*t)]]]
    assert nontrivial
    for t in nontrivial:
        assert F.smap[D.a(*t)] == E.a(*(F.lmap[x] for x in t))


def test_constant_terminal_model_gives_terminal_double():
    P = fs.constant_pseudo_functor(S3, fc.terminal_category())
    D = dc.pseudo_model_to_double(P, T3)
    assert (D.n_obj, D.tight.n_mor, D.n_loose, D.n_sq) == (1, 1, 1, 1)
    assert dc.validate_double_category(D) == []


def test_converter_needs_truncation_3():
    P = dc.double_to_pseudo_model(dc.walking_loose_arrow(), sk.truncated_delta_op(2))
    with pytest.raises(ValueError):
        dc.pseudo_model_to_double(P, sk.truncated_delta_op(2))


def test_validation_agrees_with_model_check():
    # pentagons live at [4], so the comparison is made at truncation 4
    T4 = sk.truncated_delta_op(4)
    S4 = fs.double_cat_fsketch(4)
    for D in (dc.cocycle_double(2), dc.cocycle_double(2, delta((0, 1, 1)))):
        valid = dc.validate_double_category(D) == []
        assert fs.check_pseudo_model(dc.double_to_pseudo_model(D, T4), S4).ok == valid


# transformations

def test_identity_correspondence():
    D = dc.cocycle_double()
    F = dc.identity_double_functor(D)
    ctx = dc.correspondence_context(F, F, T3)
    assert fs.check_pseudo_F_transformation(ctx.Phi) == []
    F2 = dc.correspond_transformations(ctx.Phi, ctx)
    assert (F2.obj, F2.tmap, F2.lmap, F2.smap) == (F.obj, F.tmap, F.lmap, F.smap)
    assert F2.comp == F.comp
    als = dc.enumerate_tight_transformations(F, F)
    mods = dc.enumerate_modifications(ctx.Phi, ctx.Psi, T3)
    assert len(als) == len(mods) >= 1
    for al in als:
        G = dc.correspond_transformations(al, ctx)
        assert fs.check_modification(G) == []
        al2 = dc.correspond_transformations(G, ctx)
        assert (al2.obj, al2.loose) == (al.obj, al.loose)


@pytest.mark.parametrize("i,j", [(0, 1), (1, 0), (0, 0)])
def test_tight_transformations_match_modifications(i, j):
    A = dc.walking_loose_arrow()
    E = dc.product_double(dc.tight_double(poset(2)), A)
    F, G = shift_functor(A, E, i), shift_functor(A, E, j)
    ctx = dc.correspondence_context(F, G, T3)
    als = dc.enumerate_tight_transformations(F, G)
    mods = dc.enumerate_modifications(ctx.Phi, ctx.Psi, T3)
    assert len(als) == len(mods) == (1 if i <= j else 0)
    images = {tuple(map(tuple, dc.correspond_transformations(al, ctx).components)) for al in als}
    assert images == {tuple(map(tuple, g.components)) for g in mods}


def test_correspondence_rejects_mismatch():
    D = dc.cocycle_double()
    F = dc.identity_double_functor(D)
    ctx = dc.correspondence_context(F, F, T3)
    with pytest.raises(ValueError):
        dc.correspond_transformations(dc.identity_double_functor(dc.walking_loose_arrow()), ctx)
    with pytest.raises(ValueError):
        dc.correspond_transformations(dc.TightTransformationData(F, F, [], []), ctx)


def test_non_identity_cell_at_inert_rejected():
    D = dc.cocycle_double()
    F = dc.identity_double_functor(D)
    ctx = dc.correspondence_context(F, F, T3)
    Phi = ctx.Phi
    B = T3.category
    u = B.mor((1, 2, (0, 1)))
    assert u in T3.inert
    W = Phi.target.values[B.tgt[u]]
    n = Phi.source.values[B.src[u]].n_obj
    cells = [Phi.cell(u, x) for x in range(n)]
    loop = next(m for m in W.out_of(W.tgt[cells[0]]) if W.tgt[m] == W.tgt[cells[0]] and not W.is_identity(m))
    cells[0] = W.compose[(loop, cells[0])]
    bad = fs.PseudoFTransformation(Phi.source, Phi.target, Phi.components, {**Phi.cells, u: tuple(cells)})
    v = fs.check_pseudo_F_transformation(bad)
    assert [(x.law, x.witness) for x in v] == [("strict-on-inerts", (B.mor_labels[u],))]


def coboundary_failures(n, c):
    """Triples where the 2-cochain ``c`` of Z/n has non-zero coboundary."""
    return [(m, a, p) for m, a, p in itertools.product(range(n), repeat=3)
            if (c(a, p) - c((m + a) % n, p) + c(m, (a + p) % n) - c(m, a)) % n]


def twisted_identity(D, n, pair):
    k = D.h(*pair)
    auto = next(s for s in range(D.n_sq) if D.top[s] == k and D.bot[s] == k and D.sq_labels[s][1] == 1)
    F = dc.identity_double_functor(D)
    return dc.DoubleFunctorData(D, D, F.obj, F.tmap, F.lmap, F.smap, {pair: auto})


def test_two_cocycle_compositor_is_a_valid_functor():
    D = dc.cocycle_double(2)
    assert coboundary_failures(2, lambda x, y: 1 if (x, y) == (1, 1) else 0) == []
    assert dc.validate_double_functor(twisted_identity(D, 2, (1, 1))) == []


def test_compositor_hexagon_located():
    D = dc.cocycle_double(3)
    G = twisted_identity(D, 3, (1, 1))
    v = dc.validate_double_functor(G)
    assert {x.law for x in v} == {"hexagon"}
    assert sorted(x.witness for x in v) == coboundary_failures(3, lambda x, y: 1 if (x, y) == (1, 1) else 0)
