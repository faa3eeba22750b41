"""Regenerate the JSON fixtures shipped in fixtures/."""
import os
import sys

from loosebimod import doublecat as dc
from loosebimod import fincore as fc
from loosebimod import simplexkit as sk
from loosebimod import sketchlab as sl
from loosebimod import serialization as ser
from loosebimod import looseuniv as lu

HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def corrupt_nerve(C, n=2):
    """The nerve with one 2-simplex duplicated: the Segal cone at [2]
    stops being injective."""
    X = sl.nerve(C, n)
    sets = [list(s) for s in X.sets]
    dup = sets[2][-1]
    sets[2].append(("dup", dup))
    last = len(X.sets[2]) - 1
    maps = []
    for f in range(X.base.n_mor):
        m = list(X.maps[f])
        if f == X.base.identity[2]:
            m.append(last + 1)
        elif X.base.src[f] == 2:
            m.append(m[last])
        maps.append(m)
    return fc.SetFunctor(X.base, sets, maps)


def _unicode_compose(g, f):
    if g.startswith("id_"):
        return f
    if f.startswith("id_"):
        return g
    return "g∘f"


def fixtures():
    A = fc.walking_arrow()
    T2 = sk.truncated_delta_op(2)
    corep = sk.corepresentable_at_1(T2)
    El, pi = fc.category_of_elements(corep)
    objs = ["α", "β", "日本"]
    mors = [("id_" + o, o, o) for o in objs] + [("f→", "α", "β"), ("g·", "β", "日本"), ("g∘f", "α", "日本")]
    uni = fc.FinCategory.build(objs, mors, lambda a: "id_" + a, _unicode_compose)
    return {
        "walking_arrow.json": A,
        "unicode_category.json": uni,
        "composable_pair.json": fc.poset_category(3, lambda i, j: i <= j),
        "nerve_walking_arrow.json": sl.nerve(A, 3),
        "nerve_corrupt.json": corrupt_nerve(fc.poset_category(3, lambda i, j: i <= j)),
        "barrel_walking_arrow.json": sl.bimodule_to_barrel(sl.hom_bimodule(A)),
        "corepresentable_1.json": corep,
        "elements_projection.json": pi,
        "walking_loose.json": dc.walking_loose_arrow(),
        "cocycle.json": dc.cocycle_double(),
        "hom_barrel_walking_loose.json": dc.hom_double_barrel(dc.walking_loose_arrow()),
        "model_walking_loose.json": dc.double_to_pseudo_model(dc.walking_loose_arrow(), sk.truncated_delta_op(3)),
        "pushout_cocone.json": lu.pushout_cocone(1, 2, 1, (0, 0), (0, 0)),
        "coproduct_cocone.json": lu.coproduct_cocone(1, 2),
    }


def main(out=HERE):
    os.makedirs(out, exist_ok=True)
    for name, obj in sorted(fixtures().items()):
        ser.save(obj, os.path.join(out, name))
        print(name)


if __name__ == "__main__":
    main(*sys.argv[1:])
