"""A short walk through the library: one small result from each module."""
from loosebimod import doublecat as dc
from loosebimod import fincore as fc
from loosebimod import fsketchlab as fs
from loosebimod import looseuniv as lu
from loosebimod import simplexkit as sk
from loosebimod import sketchlab as sl


def main():
    A = fc.walking_arrow()
    X = sl.nerve(A, 3)
    print("nerve of the walking arrow:", X.sizes())
    C = sl.segal_to_category(X)
    print("recovered category: %d objects, %d morphisms" % (C.n_obj, C.n_mor))

    T = sk.truncated_delta_op(3)
    r = sl.verify_slice_equivalence(sl.categories_sketch(3), sk.corepresentable_at_1(T), 2)
    print("slice equivalence at the corepresentable: %d = %d, ok=%s" % (r.left_count, r.right_count, r.ok))

    D = dc.cocycle_double()
    F, P, E = dc.double_roundtrip_functor(D, T)
    print("cocycle double category: %d compositors in its model, round trip iso: %s"
          % (len(P.compositors), dc.check_double_iso(F) == []))
    G = fs.grothendieck(P)
    print("its Grothendieck construction: %d objects, F-opfibration: %s"
          % (G.total.n_obj, fs.check_F_opfibration(G.cleavage).ok))

    S = lu.span_double(2, 16)
    print("span coherence up to apex 2:", lu.coherence_report(S, 2)["verdict"])
    print("0 loose terminal in spans:", lu.check_loose_terminal(lu.span_double(2, 2), 0)["verdict"])
    print("diagonal -| coproduct:", lu.check_loose_adjunction(lu.delta_plus_witness(2, 2))["verdict"])
    eta = lu.pushout_cocone(1, 2, 1, (0, 0), (0, 0))
    for b in (3, 4):
        print("pushout 1 <- 2 -> 1 at apex bound %d:" % b, lu.check_van_kampen(eta, b, target_bound=1)["verdict"])


if __name__ == "__main__":
    main()
