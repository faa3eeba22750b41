"""Limit sketches with Set-valued models.

Covers the Segal sketch for categories, nerves and their inverse, the
sketch for bimodules on the slice over [1], barrels and bimodules, the
elements sketch of a model and a bounded check of the slice equivalence.
"""
import itertools
from collections import namedtuple

from .fincore import (CapExceeded, FinCategory, FinFunctor, SetFunctor, Violation,
                      category_of_elements, finset_limit, full_subcategory, max_cells,
                      validate_category, validate_functor, validate_set_functor, walking_arrow)
from .simplexkit import (MonotoneMap, SliceDelta, TruncatedDelta, restrict_sequence,
                         slice_delta_over_1, truncated_delta_op)


class MarkedCone:
    __slots__ = ("apex", "shape", "diagram", "legs")

    def __init__(self, apex, shape, diagram, legs):
        self.apex = apex
        self.shape = shape
        self.diagram = diagram
        self.legs = tuple(legs)

    def signature(self, L=None):
        """Label based description used to compare cones across carriers."""
        L = L or self.diagram.cod
        J = self.shape
        objs = frozenset((L.objects[self.diagram.obj_map[j]], L.mor_labels[self.legs[j]])
                         for j in range(J.n_obj))
        mors = frozenset((L.mor_labels[self.diagram.mor_map[u]], L.mor_labels[self.legs[J.src[u]]],
                          L.mor_labels[self.legs[J.tgt[u]]])
                         for u in range(J.n_mor) if not J.is_identity(u))
        return (L.objects[self.apex], objs, mors)

    def image(self, F):
        """Push the cone forward along a functor of carriers."""
        return MarkedCone(F.obj_map[self.apex], self.shape, self.diagram.then(F),
                          [F.mor_map[l] for l in self.legs])


class LimitSketch:
    __slots__ = ("carrier", "cones")

    def __init__(self, carrier, cones):
        self.carrier = carrier
        self.cones = tuple(cones)

    def apexes(self):
        return sorted({c.apex for c in self.cones})

    def elementary(self):
        ap = set(self.apexes())
        return [a for a in range(self.carrier.n_obj) if a not in ap]


def validate_sketch(S):
    L = S.carrier
    v = list(validate_category(L))
    for k, c in enumerate(S.cones):
        for u in range(c.shape.n_mor):
            s, t = c.shape.src[u], c.shape.tgt[u]
            if L.compose.get((c.diagram.mor_map[u], c.legs[s])) != c.legs[t]:
                v.append(Violation("cone", (k, u), "leg does not commute with the diagram"))
        for j, leg in enumerate(c.legs):
            if L.src[leg] != c.apex or L.tgt[leg] != c.diagram.obj_map[j]:
                v.append(Violation("cone", (k, j), "leg has wrong endpoints"))
    return v


def sketch_cone_signatures(S, F=None):
    """Sorted list of cone signatures, optionally after pushing along ``F``."""
    cones = S.cones if F is None else [c.image(F) for c in S.cones]
    L = S.carrier if F is None else F.cod
    return sorted((c.signature(L) for c in cones), key=repr)


def sketches_isomorphic_via(S1, S2, F):
    """True when ``F`` is an isomorphism of carriers sending cones onto cones."""
    from .fincore import is_isomorphism
    if validate_functor(F) or not is_isomorphism(F):
        return False
    return sketch_cone_signatures(S1, F) == sketch_cone_signatures(S2)


# the Segal sketch

def segal_cone(T, n):
    """The cone at [n]: legs are the vertex and edge inclusions."""
    D = T.category
    verts = [MonotoneMap(0, n, (j,)) for j in range(n + 1)]
    edges = [MonotoneMap(1, n, (j, j + 1)) for j in range(n)]
    objs = [f.label for f in verts + edges]
    mors = [(("id", o), o, o) for o in objs]
    for j, e in enumerate(edges):
        mors.append(((e.label, verts[j].label), e.label, verts[j].label))
        mors.append(((e.label, verts[j + 1].label), e.label, verts[j + 1].label))
    shape = FinCategory.build(objs, mors, lambda o: ("id", o),
                              lambda g, f: f if g[0] == "id" else g)
    d_src = D.mor((0, 1, (0,)))
    d_tgt = D.mor((0, 1, (1,)))
    omap = [0] * len(verts) + [1] * len(edges)
    mmap = [D.identity[omap[i]] for i in range(len(objs))]
    for j in range(n):
        mmap.append(d_src)
        mmap.append(d_tgt)
    diagram = FinFunctor(shape, D, omap, mmap)
    legs = [T.mor_of(f) for f in verts + edges]
    return MarkedCone(D.obj(n), shape, diagram, legs)


class CategoriesSketch(LimitSketch):
    __slots__ = ("delta",)

    def __init__(self, delta, cones):
        super().__init__(delta.category, cones)
        self.delta = delta


def categories_sketch(trunc=3):
    if trunc not in (2, 3, 4):
        raise ValueError("truncation must be 2, 3 or 4")
    T = truncated_delta_op(trunc)
    return CategoriesSketch(T, [segal_cone(T, n) for n in range(2, trunc + 1)])


# models

def cone_comparison(M, cone):
    """``(limit families, comparison list)`` for a cone under model M."""
    J = cone.shape
    sets = [M.sets[cone.diagram.obj_map[j]] for j in range(J.n_obj)]
    maps = [M.maps[cone.diagram.mor_map[u]] for u in range(J.n_mor)]
    fams = finset_limit(J, sets, maps)
    legs = [M.maps[l] for l in cone.legs]
    comp = [tuple(leg[x] for leg in legs) for x in range(len(M.sets[cone.apex]))]
    return fams, comp


def is_set_model(M, S):
    """``(ok, report)``.  Functoriality is checked first; then every marked
    cone must be sent to a limit cone (comparison is a bijection)."""
    report = list(validate_set_functor(M))
    if report:
        return False, report
    L = S.carrier
    for k, cone in enumerate(S.cones):
        fams, comp = cone_comparison(M, cone)
        fam_set = set(fams)
        seen = {}
        bad = None
        for x, fam in enumerate(comp):
            if fam in seen:
                bad = Violation("cone", (k, L.objects[cone.apex]),
                                "not injective: elements %r and %r" % (M.sets[cone.apex][seen[fam]], M.sets[cone.apex][x]))
                break
            seen[fam] = x
        if bad is None:
            missing = [f for f in fams if f not in seen]
            if missing:
                bad = Violation("cone", (k, L.objects[cone.apex]),
                                "not surjective: family %r has no preimage" % (missing[0],))
        if bad is not None:
            report.append(bad)
    return not report, report


def constant_model(S, elements=("*",)):
    from .fincore import constant_set_functor
    return constant_set_functor(S.carrier, elements)


# nerves

def _segment(C, start_obj, mors):
    if not mors:
        return C.identity[start_obj]
    h = mors[0]
    for m in mors[1:]:
        h = C.compose[(m, h)]
    return h


def nerve(C, trunc=3, delta=None):
    """The nerve restricted to Δ≤trunc^op.  Elements at [k] are
    ``(object labels, morphism labels)`` of composable k-chains."""
    T = delta or truncated_delta_op(trunc)
    chains = []
    for k in range(T.n + 1):
        level = []
        prefixes = [((a,), ()) for a in range(C.n_obj)]
        for _ in range(k):
            nxt = []
            for objs, mors in prefixes:
                for f in C.out_of(objs[-1]):
                    nxt.append((objs + (C.tgt[f],), mors + (f,)))
            prefixes = nxt
        level.extend(prefixes)
        chains.append(level)
    lab = [[(tuple(C.objects[a] for a in o), tuple(C.mor_labels[f] for f in m)) for o, m in lev] for lev in chains]
    pos = [{ch: i for i, ch in enumerate(lev)} for lev in chains]
    D = T.category
    maps = []
    for m in range(D.n_mor):
        g = T.maps[m]
        src, tgt = D.src[m], D.tgt[m]
        table = []
        for objs, mors in chains[src]:
            v = g.values
            nobjs = tuple(objs[i] for i in v)
            nmors = tuple(_segment(C, objs[v[i]], mors[v[i]:v[i + 1]]) for i in range(len(v) - 1))
            table.append(pos[tgt][(nobjs, nmors)])
        maps.append(tuple(table))
    return SetFunctor(D, lab, maps)


class SegalError(ValueError):
    def __init__(self, report):
        super().__init__("not a model of the Segal sketch: %s" % (report[0],))
        self.report = report


def segal_to_category(X, sketch=None):
    """Read off a category from a model of the Segal sketch at truncation 3
    (or any truncation >= 2 carried by ``sketch``)."""
    S = sketch or categories_sketch(X.base.n_obj - 1)
    ok, report = is_set_model(X, S)
    if not ok:
        raise SegalError(report)
    D = X.base
    X0, X1, X2 = X.sets[D.obj(0)], X.sets[D.obj(1)], X.sets[D.obj(2)]
    d_src = X.maps[D.mor((0, 1, (0,)))]
    d_tgt = X.maps[D.mor((0, 1, (1,)))]
    s0 = X.maps[D.mor((1, 0, (0, 0)))]
    e01 = X.maps[D.mor((1, 2, (0, 1)))]
    e12 = X.maps[D.mor((1, 2, (1, 2)))]
    e02 = X.maps[D.mor((1, 2, (0, 2)))]
    by_edges = {}
    for z in range(len(X2)):
        by_edges[(e12[z], e01[z])] = z
    mors = [(X1[f], d_src[f], d_tgt[f]) for f in range(len(X1))]
    comp = {(g, f): e02[by_edges[(g, f)]] for (g, f) in by_edges}
    return FinCategory(X0, mors, list(s0), comp)


def nerve_comparison(X, C):
    """Componentwise map ``X -> nerve(C)`` for ``C = segal_to_category(X)``.

    Returns ``(N, components)``; each component maps an element to its
    chain of vertices and edges."""
    D = X.base
    T = truncated_delta_op(D.n_obj - 1)
    N = nerve(C, delta=T)
    comps = []
    for k in range(D.n_obj):
        vert = [X.maps[D.mor((0, k, (j,)))] for j in range(k + 1)]
        edge = [X.maps[D.mor((1, k, (j, j + 1)))] for j in range(k)]
        table = []
        for x in range(len(X.sets[k])):
            ch = (tuple(C.objects[v[x]] for v in vert), tuple(C.mor_labels[e[x]] for e in edge))
            table.append(N.pos(k, ch))
        comps.append(tuple(table))
    return N, comps


def check_set_nat_iso(P, Q, comps):
    """List of problems with ``comps`` as a natural isomorphism ``P -> Q``."""
    v = []
    C = P.base
    for a in range(C.n_obj):
        if sorted(comps[a]) != list(range(len(Q.sets[a]))) or len(comps[a]) != len(P.sets[a]):
            v.append(Violation("bijection", (a,), "component is not a bijection"))
    if v:
        return v
    for f in range(C.n_mor):
        s, t = C.src[f], C.tgt[f]
        pf, qf = P.maps[f], Q.maps[f]
        for x in range(len(P.sets[s])):
            if comps[t][pf[x]] != qf[comps[s][x]]:
                v.append(Violation("naturality", (f, x), "square does not commute"))
                break
    return v


def check_set_nat_trans(P, Q, comps):
    v = []
    C = P.base
    for f in range(C.n_mor):
        s, t = C.src[f], C.tgt[f]
        pf, qf = P.maps[f], Q.maps[f]
        for x in range(len(P.sets[s])):
            if comps[t][pf[x]] != qf[comps[s][x]]:
                v.append(Violation("naturality", (f, x), "square does not commute"))
                break
    return v


def category_roundtrip_iso(C, C2):
    """The identity-on-labels functor ``C -> segal_to_category(nerve(C))``."""
    omap = [C2.obj(((o,), ())) for o in C.objects]
    mmap = [C2.mor(((C.objects[C.src[f]], C.objects[C.tgt[f]]), (C.mor_labels[f],))) for f in range(C.n_mor)]
    return FinFunctor(C, C2, omap, mmap)


# the bimodule sketch

def bimodule_sketch(trunc=3):
    """Cones on the slice over [1]: one for each sequence of length >= 3,
    namely the Segal cone of its shape lifted to the slice."""
    if trunc not in (3, 4):
        raise ValueError("truncation must be 3 or 4")
    Sl = slice_delta_over_1(trunc)
    T = Sl.base
    C = Sl.category
    cones = []
    for s in C.objects:
        k = len(s) - 1
        if k < 2:
            continue
        base = segal_cone(T, k)
        J = base.shape
        omap = []
        for j in range(J.n_obj):
            g = T.maps[base.legs[j]]
            omap.append(C.obj(restrict_sequence(s, g)))
        mmap = []
        for u in range(J.n_mor):
            src_seq = C.objects[omap[J.src[u]]]
            mmap.append(C.mor((src_seq, T.category.mor_labels[base.diagram.mor_map[u]])))
        legs = [C.mor((s, T.category.mor_labels[l])) for l in base.legs]
        cones.append(MarkedCone(C.obj(s), J, FinFunctor(J, C, omap, mmap), legs))
    sk = LimitSketch(C, cones)
    sk_slice = Sl
    return BimoduleSketch(sk_slice, cones)


class BimoduleSketch(LimitSketch):
    __slots__ = ("slice",)

    def __init__(self, Sl, cones):
        super().__init__(Sl.category, cones)
        self.slice = Sl


def elements_sketch(S, M):
    """The sketch on El(M) whose cones are all lifts of cones of S.

    Lifts of a cone are indexed by the elements of M at its apex."""
    El, pi = category_of_elements(M)
    L = S.carrier
    obj_id = {}
    k = 0
    for c in range(L.n_obj):
        for i in range(len(M.sets[c])):
            obj_id[(c, i)] = k
            k += 1
    mor_id = {}
    k = 0
    for f in range(L.n_mor):
        for i in range(len(M.sets[L.src[f]])):
            mor_id[(f, i)] = k
            k += 1
    cones = []
    for cone in S.cones:
        J = cone.shape
        for x in range(len(M.sets[cone.apex])):
            at = [M.maps[l][x] for l in cone.legs]
            omap = [obj_id[(cone.diagram.obj_map[j], at[j])] for j in range(J.n_obj)]
            mmap = [mor_id[(cone.diagram.mor_map[u], at[J.src[u]])] for u in range(J.n_mor)]
            legs = [mor_id[(l, x)] for l in cone.legs]
            cones.append(MarkedCone(obj_id[(cone.apex, x)], J, FinFunctor(J, El, omap, mmap), legs))
    return ElementsSketch(El, cones, pi, M)


class ElementsSketch(LimitSketch):
    __slots__ = ("projection", "model")

    def __init__(self, El, cones, pi, M):
        super().__init__(El, cones)
        self.projection = pi
        self.model = M


def slice_elements_iso(El, slice_cat):
    """Relabelling ``El(Δ(-,[1])) -> slice``: ``(k, s) -> s`` on objects and
    ``(f, s) -> (s, f)`` on morphisms."""
    omap = [slice_cat.obj(x) for _, x in El.objects]
    mmap = [slice_cat.mor((s, f)) for f, s in El.mor_labels]
    return FinFunctor(El, slice_cat, omap, mmap)


# bimodules and barrels

class SetBimodule:
    """Heteromorphisms ``x : c -> d`` from source objects to target objects.

    ``left[(f, x)]`` is ``x . f`` for a source morphism ``f`` into ``c`` and
    ``right[(x, g)]`` is ``g . x`` for a target morphism ``g`` out of ``d``.
    """
    __slots__ = ("source", "target", "het", "het_src", "het_tgt", "left", "right")

    def __init__(self, source, target, het, het_src, het_tgt, left, right):
        self.source = source
        self.target = target
        self.het = tuple(het)
        self.het_src = tuple(het_src)
        self.het_tgt = tuple(het_tgt)
        self.left = dict(left)
        self.right = dict(right)

    @property
    def n_het(self):
        return len(self.het)


def validate_bimodule(M):
    v = []
    C, D = M.source, M.target
    for x in range(M.n_het):
        c, d = M.het_src[x], M.het_tgt[x]
        for f in C.into(c):
            y = M.left.get((f, x))
            if y is None:
                v.append(Violation("left-total", (f, x), "missing left action"))
            elif M.het_src[y] != C.src[f] or M.het_tgt[y] != d:
                v.append(Violation("left-endpoints", (f, x), "left action has wrong endpoints"))
        for g in D.out_of(d):
            y = M.right.get((x, g))
            if y is None:
                v.append(Violation("right-total", (x, g), "missing right action"))
            elif M.het_src[y] != c or M.het_tgt[y] != D.tgt[g]:
                v.append(Violation("right-endpoints", (x, g), "right action has wrong endpoints"))
    if v:
        return v
    for x in range(M.n_het):
        c, d = M.het_src[x], M.het_tgt[x]
        if M.left[(C.identity[c], x)] != x:
            v.append(Violation("left-unit", (x,), "identity does not act trivially"))
        if M.right[(x, D.identity[d])] != x:
            v.append(Violation("right-unit", (x,), "identity does not act trivially"))
        for f in C.into(c):
            xf = M.left[(f, x)]
            for f2 in C.into(C.src[f]):
                if M.left[(f2, xf)] != M.left[(C.compose[(f, f2)], x)]:
                    v.append(Violation("left-assoc", (f2, f, x), "(x f) f' != x (f f')"))
            for g in D.out_of(d):
                if M.right[(xf, g)] != M.left[(f, M.right[(x, g)])]:
                    v.append(Violation("commute", (f, x, g), "actions do not commute"))
        for g in D.out_of(d):
            gx = M.right[(x, g)]
            for g2 in D.out_of(D.tgt[g]):
                if M.right[(gx, g2)] != M.right[(x, D.compose[(g2, g)])]:
                    v.append(Violation("right-assoc", (x, g, g2), "g' (g x) != (g' g) x"))
    return v


def hom_bimodule(C):
    het = list(C.mor_labels)
    left = {(f, x): C.compose[(x, f)] for x in range(C.n_mor) for f in C.into(C.src[x])}
    right = {(x, g): C.compose[(g, x)] for x in range(C.n_mor) for g in C.out_of(C.tgt[x])}
    return SetBimodule(C, C, het, C.src, C.tgt, left, right)


def bimodule_from_functors(F, G, keep=None):
    """Heteromorphisms ``F(c) -> G(d)`` in the common codomain; ``keep``
    optionally selects a subset of them (must be closed under the actions)."""
    E = F.cod
    het, hs, ht = [], [], []
    for c in range(F.dom.n_obj):
        for d in range(G.dom.n_obj):
            for e in E.hom(F.obj_map[c], G.obj_map[d]):
                if keep is None or (c, d, e) in keep:
                    het.append((E.objects[F.obj_map[c]], E.mor_labels[e], c, d))
                    hs.append(c)
                    ht.append(d)
    idx = {(h[2], h[3], E.mor(h[1])): i for i, h in enumerate(het)}
    het = [(F.dom.objects[h[2]], G.dom.objects[h[3]], h[1]) for h in het]
    left, right = {}, {}
    for (c, d, e), x in idx.items():
        for f in F.dom.into(c):
            left[(f, x)] = idx.get((F.dom.src[f], d, E.compose[(e, F.mor_map[f])]))
        for g in G.dom.out_of(d):
            right[(x, g)] = idx.get((c, G.dom.tgt[g], E.compose[(G.mor_map[g], e)]))
    left = {k: v for k, v in left.items() if v is not None}
    right = {k: v for k, v in right.items() if v is not None}
    return SetBimodule(F.dom, G.dom, het, hs, ht, left, right)


def empty_bimodule(C, D):
    return SetBimodule(C, D, [], [], [], {}, {})


class Barrel:
    """A category over the walking arrow 0 -> 1."""
    __slots__ = ("total", "labelling")

    def __init__(self, total, labelling):
        self.total = total
        self.labelling = labelling

    @classmethod
    def from_labels(cls, total, labels):
        """``labels[a]`` in {0, 1} for each object id; morphism labels are
        derived and a morphism from a 1 to a 0 is rejected."""
        labels = list(labels)
        A = walking_arrow()
        mmap = []
        for f in range(total.n_mor):
            s, t = labels[total.src[f]], labels[total.tgt[f]]
            if s == t:
                mmap.append(A.identity[s])
            elif s == 0 and t == 1:
                mmap.append(2)
            else:
                raise ValueError("morphism %r goes from the 1-fibre to the 0-fibre" % (total.mor_labels[f],))
        return cls(total, FinFunctor(total, A, labels, mmap))

    @property
    def labels(self):
        return self.labelling.obj_map

    def fibre(self, i):
        return full_subcategory(self.total, lambda a: self.labelling.obj_map[a] == i)


def validate_barrel(B):
    v = list(validate_category(B.total))
    if v:
        return v
    if B.labelling.cod.n_obj != 2:
        return [Violation("labelling", (), "codomain is not the walking arrow")]
    return list(validate_functor(B.labelling))


def barrel_to_bimodule(B):
    C, inc0 = B.fibre(0)
    D, inc1 = B.fibre(1)
    E = B.total
    lab = B.labelling.obj_map
    back0 = {a: i for i, a in enumerate(inc0.obj_map)}
    back1 = {a: i for i, a in enumerate(inc1.obj_map)}
    m0 = {f: i for i, f in enumerate(inc0.mor_map)}
    m1 = {f: i for i, f in enumerate(inc1.mor_map)}
    hets = [f for f in range(E.n_mor) if lab[E.src[f]] == 0 and lab[E.tgt[f]] == 1]
    hidx = {f: i for i, f in enumerate(hets)}
    left, right = {}, {}
    for x in hets:
        for f in E.into(E.src[x]):
            if f in m0:
                left[(m0[f], hidx[x])] = hidx[E.compose[(x, f)]]
        for g in E.out_of(E.tgt[x]):
            if g in m1:
                right[(hidx[x], m1[g])] = hidx[E.compose[(g, x)]]
    return SetBimodule(C, D, [E.mor_labels[f] for f in hets],
                       [back0[E.src[f]] for f in hets], [back1[E.tgt[f]] for f in hets], left, right)


class BimoduleError(ValueError):
    def __init__(self, report):
        super().__init__("invalid bimodule: %s" % (report[0],))
        self.report = report


def bimodule_to_barrel(M):
    """The collage of M, labelled by provenance."""
    report = validate_bimodule(M)
    if report:
        raise BimoduleError(report)
    C, D = M.source, M.target
    nC, mC, mH = C.n_obj, C.n_mor, M.n_het
    objs = [("0", o) for o in C.objects] + [("1", o) for o in D.objects]
    mors = [(("0", C.mor_labels[f]), C.src[f], C.tgt[f]) for f in range(mC)]
    mors += [(("h", M.het[x]), M.het_src[x], nC + M.het_tgt[x]) for x in range(mH)]
    mors += [(("1", D.mor_labels[g]), nC + D.src[g], nC + D.tgt[g]) for g in range(D.n_mor)]
    H = mC
    G = mC + mH
    comp = {}
    for (g, f), h in C.compose.items():
        comp[(g, f)] = h
    for (g, f), h in D.compose.items():
        comp[(G + g, G + f)] = G + h
    for (f, x), y in M.left.items():
        comp[(H + x, f)] = H + y
    for (x, g), y in M.right.items():
        comp[(G + g, H + x)] = H + y
    ids = list(C.identity) + [G + i for i in D.identity]
    total = FinCategory(objs, mors, ids, comp)
    return Barrel.from_labels(total, [0] * nC + [1] * D.n_obj)


def bimodule_iso(M, N, Fs, Ft, het_map):
    """Problems with ``(Fs, Ft, het_map)`` as an isomorphism of bimodules."""
    from .fincore import is_isomorphism
    v = []
    for F in (Fs, Ft):
        if validate_functor(F) or not is_isomorphism(F):
            v.append(Violation("functor", (), "boundary map is not an isomorphism"))
    if sorted(het_map) != list(range(N.n_het)) or len(het_map) != M.n_het:
        v.append(Violation("bijection", (), "heteromorphism map is not a bijection"))
    if v:
        return v
    for x in range(M.n_het):
        if N.het_src[het_map[x]] != Fs.obj_map[M.het_src[x]] or N.het_tgt[het_map[x]] != Ft.obj_map[M.het_tgt[x]]:
            v.append(Violation("endpoints", (x,), "heteromorphism endpoints not preserved"))
    for (f, x), y in M.left.items():
        if N.left.get((Fs.mor_map[f], het_map[x])) != het_map[y]:
            v.append(Violation("left", (f, x), "left action not preserved"))
    for (x, g), y in M.right.items():
        if N.right.get((het_map[x], Ft.mor_map[g])) != het_map[y]:
            v.append(Violation("right", (x, g), "right action not preserved"))
    return v


def bimodule_roundtrip_maps(M):
    """The canonical comparison ``M -> barrel_to_bimodule(bimodule_to_barrel(M))``."""
    N = barrel_to_bimodule(bimodule_to_barrel(M))
    Fs = FinFunctor(M.source, N.source, [N.source.obj(("0", o)) for o in M.source.objects],
                    [N.source.mor(("0", l)) for l in M.source.mor_labels])
    Ft = FinFunctor(M.target, N.target, [N.target.obj(("1", o)) for o in M.target.objects],
                    [N.target.mor(("1", l)) for l in M.target.mor_labels])
    hidx = {h: i for i, h in enumerate(N.het)}
    return N, Fs, Ft, [hidx[("h", x)] for x in M.het]


def barrel_roundtrip_iso(B):
    """The comparison functor ``B.total -> collage(barrel_to_bimodule(B))``
    and the rebuilt barrel."""
    M = barrel_to_bimodule(B)
    B2 = bimodule_to_barrel(M)
    E, E2 = B.total, B2.total
    lab = B.labelling.obj_map
    omap = [E2.obj((str(lab[a]), E.objects[a])) for a in range(E.n_obj)]
    mmap = []
    for f in range(E.n_mor):
        s, t = lab[E.src[f]], lab[E.tgt[f]]
        tag = "h" if s != t else str(s)
        mmap.append(E2.mor((tag, E.mor_labels[f])))
    return B2, FinFunctor(E, E2, omap, mmap)


def barrel_iso_over_arrow(B, B2, F):
    """True when F is an isomorphism of totals commuting with labellings."""
    from .fincore import is_isomorphism
    if validate_functor(F) or not is_isomorphism(F):
        return False
    return all(B2.labelling.obj_map[F.obj_map[a]] == B.labelling.obj_map[a] for a in range(B.total.n_obj))


def hom_barrel(C):
    """``C x (0 -> 1)`` labelled by the second projection."""
    from .fincore import product_category
    A = walking_arrow()
    P = product_category(C, A)
    return Barrel.from_labels(P, [P.objects[i][1] for i in range(P.n_obj)])


def path_set_model(B, trunc=3):
    """The functor on the slice over [1] sending a 0/1 sequence to the
    chains in the total category whose objects carry those labels."""
    Sl = slice_delta_over_1(trunc)
    N = nerve(B.total, trunc)
    E = B.total
    lab = {E.objects[a]: B.labelling.obj_map[a] for a in range(E.n_obj)}
    T = Sl.base
    SC = Sl.category
    sets = []
    for s in SC.objects:
        level = N.sets[len(s) - 1]
        sets.append(tuple(ch for ch in level if tuple(lab[o] for o in ch[0]) == s))

    def on_map(m, ch):
        s, g = SC.mor_labels[m]
        base_m = T.category.mor(g)
        return N.apply(base_m, ch)

    return SetFunctor.from_function(SC, lambda i: sets[i], on_map)


def bimodule_chain_model(M, trunc=3):
    """Same functor built from a bimodule: an element over ``0^a 1^b`` is a
    source chain, a heteromorphism (when a, b > 0) and a target chain."""
    Sl = slice_delta_over_1(trunc)
    SC = Sl.category
    C, D = M.source, M.target

    def chains(K, n):
        out = [((a,), ()) for a in range(K.n_obj)]
        for _ in range(n):
            out = [(o + (K.tgt[f],), m + (f,)) for o, m in out for f in K.out_of(o[-1])]
        return out

    def elements(i):
        s = SC.objects[i]
        a = s.count(0)
        b = len(s) - a
        if b == 0:
            return [("C", o, m) for o, m in chains(C, a - 1)]
        if a == 0:
            return [("D", o, m) for o, m in chains(D, b - 1)]
        res = []
        for x in range(M.n_het):
            for co, cm in chains(C, a - 1):
                if co[-1] != M.het_src[x]:
                    continue
                for do, dm in chains(D, b - 1):
                    if do[0] == M.het_tgt[x]:
                        res.append(("H", co, cm, x, do, dm))
        return res

    def steps(el):
        """Positions with kinds, as ``(objs, steps)`` where objs are
        ``(side, id)`` and steps ``(kind, id)``."""
        if el[0] == "C":
            return [(0, o) for o in el[1]], [("C", f) for f in el[2]]
        if el[0] == "D":
            return [(1, o) for o in el[1]], [("D", f) for f in el[2]]
        _, co, cm, x, do, dm = el
        return ([(0, o) for o in co] + [(1, o) for o in do],
                [("C", f) for f in cm] + [("H", x)] + [("D", f) for f in dm])

    def compose_steps(objs, st):
        if not st:
            side, o = objs[0]
            K = C if side == 0 else D
            return ("C" if side == 0 else "D", K.identity[o])
        kind, h = st[0]
        for k2, m in st[1:]:
            if kind == "C" and k2 == "C":
                h = C.compose[(m, h)]
            elif kind == "C" and k2 == "H":
                h = M.left[(h, m)]
                kind = "H"
            elif kind == "H" and k2 == "D":
                h = M.right[(h, m)]
            elif kind == "D" and k2 == "D":
                h = D.compose[(m, h)]
            else:
                raise AssertionError("ill-typed chain")
        return kind, h

    def on_map(m, el):
        s, g = SC.mor_labels[m]
        v = g[2]
        objs, st = steps(el)
        nobjs = [objs[i] for i in v]
        nsteps = [compose_steps(objs[v[i]:v[i + 1] + 1], st[v[i]:v[i + 1]]) for i in range(len(v) - 1)]
        sides = [o[0] for o in nobjs]
        if all(x == 0 for x in sides):
            return ("C", tuple(o for _, o in nobjs), tuple(h for _, h in nsteps))
        if all(x == 1 for x in sides):
            return ("D", tuple(o for _, o in nobjs), tuple(h for _, h in nsteps))
        a = sides.count(0)
        return ("H", tuple(o for _, o in nobjs[:a]), tuple(h for _, h in nsteps[:a - 1]),
                nsteps[a - 1][1], tuple(o for _, o in nobjs[a:]), tuple(h for _, h in nsteps[a:]))

    return SetFunctor.from_function(SC, elements, on_map)


def chain_model_comparison(M, P, Q):
    """Components ``Q -> P`` where ``M = barrel_to_bimodule(B)``, ``P`` is
    the path-set model of B and ``Q`` the chain model of M.  Labels of M
    are total labels, so translation is relabelling."""
    C, D = M.source, M.target
    comps = []
    for i in range(P.base.n_obj):
        table = []
        for el in Q.sets[i]:
            if el[0] == "C":
                ch = (tuple(C.objects[o] for o in el[1]), tuple(C.mor_labels[f] for f in el[2]))
            elif el[0] == "D":
                ch = (tuple(D.objects[o] for o in el[1]), tuple(D.mor_labels[f] for f in el[2]))
            else:
                _, co, cm, x, do, dm = el
                ch = (tuple(C.objects[o] for o in co) + tuple(D.objects[o] for o in do),
                      tuple(C.mor_labels[f] for f in cm) + (M.het[x],) + tuple(D.mor_labels[f] for f in dm))
            table.append(P.pos(i, ch))
        comps.append(tuple(table))
    return comps


# bounded enumeration of models in limit form

class _Solver:
    """Assigns the entries of unknown maps of a set-valued functor on L.

    ``sizes`` gives every value set; ``known[u]`` is a full table or None.
    ``apex_info[b] = (component morphism lists, family index)`` lets a map
    into an apex be read off from its legs.
    """

    def __init__(self, L, sizes, known, apex_legs, fam_index, free_order):
        self.L = L
        self.sizes = sizes
        self.val = [list(known[u]) if known[u] is not None else [-1] * sizes[L.src[u]] for u in range(L.n_mor)]
        self.n_unknown = sum(v.count(-1) for v in self.val)
        self.apex_legs = apex_legs
        self.fam_index = fam_index
        self.free_order = free_order
        self.by_f = [[] for _ in range(L.n_mor)]
        self.by_g = [[] for _ in range(L.n_mor)]
        self.by_h = [[] for _ in range(L.n_mor)]
        for (g, f), h in L.compose.items():
            self.by_f[f].append((g, h))
            self.by_g[g].append((f, h))
            self.by_h[h].append((g, f))
        # component morphisms: w into an apex b is determined by leg_j . w
        self.comp_of = [None] * L.n_mor
        self.users = [[] for _ in range(L.n_mor)]
        for w in range(L.n_mor):
            b = L.tgt[w]
            if b in apex_legs:
                cs = tuple(L.compose[(leg, w)] for leg in apex_legs[b])
                self.comp_of[w] = cs
                for c in set(cs):
                    self.users[c].append(w)

    def set(self, u, x, y, trail):
        stack = [(u, x, y)]
        val = self.val
        while stack:
            u, x, y = stack.pop()
            cur = val[u][x]
            if cur != -1:
                if cur != y:
                    return False
                continue
            if not 0 <= y < self.sizes[self.L.tgt[u]]:
                return False
            val[u][x] = y
            trail.append((u, x))
            for g, h in self.by_f[u]:
                z = val[g][y]
                if z != -1:
                    stack.append((h, x, z))
            for f, h in self.by_g[u]:
                vf = val[f]
                for x2 in range(len(vf)):
                    if vf[x2] == x:
                        stack.append((h, x2, y))
            for g, f in self.by_h[u]:
                z = val[f][x]
                if z != -1:
                    w = val[g][z]
                    if w != -1 and w != y:
                        return False
            for w in self.users[u]:
                if val[w][x] == -1:
                    fam = []
                    for c in self.comp_of[w]:
                        e = val[c][x]
                        if e == -1:
                            break
                        fam.append(e)
                    else:
                        idx = self.fam_index[self.L.tgt[w]].get(tuple(fam))
                        if idx is None:
                            return False
                        stack.append((w, x, idx))
        return True

    def undo(self, trail):
        for u, x in trail:
            self.val[u][x] = -1

    def solve(self, limit=None):
        out = []
        trail0 = []
        # propagate the known part once
        for u in range(self.L.n_mor):
            row = self.val[u]
            for x, y in enumerate(row):
                if y != -1:
                    row[x] = -1
                    if not self.set(u, x, y, trail0):
                        return out
        self._rec(out, limit)
        return out

    def _next_var(self):
        for u in self.free_order:
            row = self.val[u]
            for x in range(len(row)):
                if row[x] == -1:
                    return u, x
        for u in range(self.L.n_mor):
            row = self.val[u]
            for x in range(len(row)):
                if row[x] == -1:
                    return u, x
        return None

    def _rec(self, out, limit):
        var = self._next_var()
        if var is None:
            out.append([tuple(r) for r in self.val])
            if limit is not None and len(out) > limit:
                raise CapExceeded("more than %d models" % limit)
            return
        u, x = var
        for y in range(self.sizes[self.L.tgt[u]]):
            trail = []
            if self.set(u, x, y, trail):
                self._rec(out, limit)
            self.undo(trail)


def _cone_by_apex(S):
    by = {}
    for c in S.cones:
        if c.apex in by:
            raise ValueError("more than one cone at an apex is not supported by the enumerator")
        by[c.apex] = c
    return by


def _check_limit_form(S):
    by = _cone_by_apex(S)
    for a, c in by.items():
        for j in range(c.shape.n_obj):
            if c.diagram.obj_map[j] in by:
                raise ValueError("cone diagrams must land in non-apex objects")
    return by


def enumerate_limit_models(S, size_vectors, cap=None):
    """All models of S whose non-apex values have the given sizes, with
    apex values the canonical limits (families of leg values).

    ``size_vectors`` is an iterable of dicts ``{elementary object: size}``.
    Yields SetFunctors with integer element labels at elementary objects
    and family tuples at apexes.
    """
    cap = cap or max_cells()
    L = S.carrier
    by = _check_limit_form(S)
    elem = [a for a in range(L.n_obj) if a not in by]
    elem_set = set(elem)
    Lsub, inc = full_subcategory(L, lambda a: a in elem_set)
    out = []
    for sizes in size_vectors:
        sub_sizes = [sizes[a] for a in inc.obj_map]
        known = [None] * Lsub.n_mor
        for a in range(Lsub.n_obj):
            known[Lsub.identity[a]] = tuple(range(sub_sizes[a]))
        sol = _Solver(Lsub, sub_sizes, known, {}, {}, [])
        for sub_vals in sol.solve(limit=cap):
            out.extend(_complete_from_elementary(S, by, elem, inc, sizes, sub_vals, cap))
            if len(out) > cap:
                raise CapExceeded("more than %d models" % cap)
    return out


def _complete_from_elementary(S, by, elem, inc, sizes, sub_vals, cap):
    L = S.carrier
    sizes_full = [0] * L.n_obj
    for a in elem:
        sizes_full[a] = sizes[a]
    known = [None] * L.n_mor
    for i, m in enumerate(inc.mor_map):
        known[m] = sub_vals[i]
    fams = {}
    fam_index = {}
    apex_legs = {}
    for a, cone in by.items():
        J = cone.shape
        sets = [sizes[cone.diagram.obj_map[j]] for j in range(J.n_obj)]
        maps = [known[cone.diagram.mor_map[u]] for u in range(J.n_mor)]
        fl = finset_limit(J, sets, maps)
        fams[a] = fl
        fam_index[a] = {f: i for i, f in enumerate(fl)}
        sizes_full[a] = len(fl)
        apex_legs[a] = cone.legs
        for j, leg in enumerate(cone.legs):
            known[leg] = tuple(f[j] for f in fl)
        known[L.identity[a]] = tuple(range(len(fl)))
    free_order = [u for u in range(L.n_mor) if known[u] is None and L.src[u] in by and L.tgt[u] not in by]
    sol = _Solver(L, sizes_full, known, apex_legs, fam_index, free_order)
    res = []
    for vals in sol.solve(limit=cap):
        sets = []
        for a in range(L.n_obj):
            if a in by:
                sets.append(tuple(fams[a]))
            else:
                sets.append(tuple(range(sizes[a])))
        res.append(SetFunctor(L, sets, vals))
    return res


def limit_form_code(S, N, alpha=None, elem=None):
    """Canonical code of a model (and optional map ``alpha`` into a fixed
    model): two models have equal codes iff they are isomorphic (over the
    fixed model when alpha is given).  Apex elements are read as families
    of leg values, so N only needs to be a model."""
    L = S.carrier
    by = _cone_by_apex(S)
    if elem is None:
        elem = [a for a in range(L.n_obj) if a not in by]
    key = {}
    for a in by:
        legs = [N.maps[l] for l in by[a].legs]
        key[a] = [tuple(leg[x] for leg in legs) for x in range(len(N.sets[a]))]
    mors = [u for u in range(L.n_mor) if L.tgt[u] not in by and not L.is_identity(u)]
    sizes = [len(N.sets[a]) for a in elem]
    perms = [list(itertools.permutations(range(n))) for n in sizes]
    pos = {a: i for i, a in enumerate(elem)}
    best = None
    count = 1
    for p in perms:
        count *= len(p)
    if count > max_cells():
        raise CapExceeded("too many relabellings")
    for choice in itertools.product(*perms):
        sig = {a: choice[pos[a]] for a in elem}
        tables = []
        for u in mors:
            s, t = L.src[u], L.tgt[u]
            row = N.maps[u]
            if s in by:
                cone = by[s]
                fam_objs = [cone.diagram.obj_map[j] for j in range(cone.shape.n_obj)]
                entries = sorted((tuple(sig[fam_objs[j]][v] for j, v in enumerate(key[s][x])), sig[t][row[x]])
                                 for x in range(len(row)))
                tables.append(tuple(entries))
            else:
                inv = [0] * len(row)
                for x in range(len(row)):
                    inv[sig[s][x]] = x
                tables.append(tuple(sig[t][row[inv[i]]] for i in range(len(row))))
        if alpha is not None:
            for a in elem:
                inv = [0] * len(alpha[a])
                for x in range(len(alpha[a])):
                    inv[sig[a][x]] = x
                tables.append(tuple(alpha[a][inv[i]] for i in range(len(inv))))
        code = (tuple(sizes), tuple(tables))
        if best is None or code < best:
            best = code
    return best


SliceReport = namedtuple("SliceReport", ["ok", "left_count", "right_count", "bijection", "round_trips", "detail"])


def _size_vectors(elems, bound):
    for combo in itertools.product(range(bound + 1), repeat=len(elems)):
        yield dict(zip(elems, combo))


def _fibre_size_vectors(El, pi, elems, bound):
    """Size vectors on El's non-apex objects with the sum over each base
    fibre at most ``bound``."""
    groups = {}
    for a in elems:
        groups.setdefault(pi.obj_map[a], []).append(a)
    parts = []
    for c in sorted(groups):
        objs = groups[c]
        opts = [combo for combo in itertools.product(range(bound + 1), repeat=len(objs)) if sum(combo) <= bound]
        parts.append([dict(zip(objs, combo)) for combo in opts])
    for pick in itertools.product(*parts):
        d = {}
        for p in pick:
            d.update(p)
        yield d


def _maps_into_model(S, N, M, elem):
    """All natural maps N -> M (M a model) given by their elementary parts."""
    L = S.carrier
    by = _cone_by_apex(S)
    elem_set = set(elem)
    choices = [list(itertools.product(range(len(M.sets[a])), repeat=len(N.sets[a]))) for a in elem]
    res = []
    Mfam = {}
    for a, cone in by.items():
        legs = [M.maps[l] for l in cone.legs]
        Mfam[a] = {tuple(leg[x] for leg in legs): x for x in range(len(M.sets[a]))}
    inner = [u for u in range(L.n_mor) if L.src[u] in elem_set and L.tgt[u] in elem_set]
    for pick in itertools.product(*choices):
        alpha = [None] * L.n_obj
        for a, p in zip(elem, pick):
            alpha[a] = p
        if any(alpha[L.tgt[u]][N.maps[u][x]] != M.maps[u][alpha[L.src[u]][x]]
               for u in inner for x in range(len(N.sets[L.src[u]]))):
            continue
        ok = True
        for a, cone in by.items():
            comp = []
            for x in range(len(N.sets[a])):
                fam = tuple(alpha[cone.diagram.obj_map[j]][N.maps[l][x]] for j, l in enumerate(cone.legs))
                y = Mfam[a].get(fam)
                if y is None:
                    ok = False
                    break
                comp.append(y)
            if not ok:
                break
            alpha[a] = tuple(comp)
        if not ok:
            continue
        if check_set_nat_trans(N, M, alpha):
            continue
        res.append((tuple(alpha[a] for a in elem), tuple(alpha)))
    return res


def transport_to_elements(ES, N, alpha):
    """Q(c, x) = fibre of alpha over x, as a model of the elements sketch."""
    El = ES.carrier
    M = ES.model
    L = M.base
    sets = []
    for c in range(L.n_obj):
        for x in range(len(M.sets[c])):
            sets.append(tuple(n for n in range(len(N.sets[c])) if alpha[c][n] == x))
    pos = [{n: i for i, n in enumerate(s)} for s in sets]
    maps = []
    for f in range(L.n_mor):
        s, t = L.src[f], L.tgt[f]
        for x in range(len(M.sets[s])):
            src_obj = El.src[len(maps)]
            tgt_obj = El.tgt[len(maps)]
            maps.append(tuple(pos[tgt_obj][N.maps[f][n]] for n in sets[src_obj]))
    return SetFunctor(El, [tuple(N.sets[L.obj(El.objects[i][0])][n] for n in s) for i, s in enumerate(sets)], maps)


def transport_from_elements(ES, Q):
    """N(c) = disjoint union of Q(c, x) over x, with alpha the projection."""
    El = ES.carrier
    M = ES.model
    L = M.base
    pi = ES.projection
    start = {}
    k = 0
    for c in range(L.n_obj):
        for x in range(len(M.sets[c])):
            start[(c, x)] = k
            k += 1
    sets, alpha = [], []
    for c in range(L.n_obj):
        elems, al = [], []
        for x in range(len(M.sets[c])):
            for q in Q.sets[start[(c, x)]]:
                elems.append((M.sets[c][x], q))
                al.append(x)
        sets.append(tuple(elems))
        alpha.append(tuple(al))
    pos = [{e: i for i, e in enumerate(s)} for s in sets]
    maps = []
    m = 0
    for f in range(L.n_mor):
        s, t = L.src[f], L.tgt[f]
        table = [None] * len(sets[s])
        for x in range(len(M.sets[s])):
            e_src = start[(s, x)]
            e_tgt = El.tgt[m]
            for i, q in enumerate(Q.sets[e_src]):
                img = Q.sets[e_tgt][Q.maps[m][i]]
                table[pos[s][(M.sets[s][x], q)]] = pos[t][(M.sets[t][M.maps[f][x]], img)]
            m += 1
        maps.append(tuple(table))
    return SetFunctor(L, sets, maps), tuple(alpha)


def verify_slice_equivalence(S, M, size_bound=2, cap=None):
    """Bounded check that models over M correspond to models of El(M).

    Non-apex values are bounded by ``size_bound`` (on the elements side the
    sum over each base fibre is bounded).  Returns a SliceReport."""
    ok_model, rep = is_set_model(M, S)
    if not ok_model:
        return SliceReport(False, 0, 0, False, False, "M is not a model: %s" % (rep[0],))
    L = S.carrier
    by = _check_limit_form(S)
    elem = [a for a in range(L.n_obj) if a not in by]
    # left side: pairs (N, alpha) up to isomorphism over M
    left = {}
    for N in enumerate_limit_models(S, _size_vectors(elem, size_bound), cap=cap):
        for alpha_e, alpha in _maps_into_model(S, N, M, elem):
            code = limit_form_code(S, N, alpha_e, elem)
            if code not in left:
                left[code] = (N, alpha)
    ES = elements_sketch(S, M)
    El = ES.carrier
    by_el = _check_limit_form(ES)
    elem_el = [a for a in range(El.n_obj) if a not in by_el]
    right = {}
    for Q in enumerate_limit_models(ES, _fibre_size_vectors(El, ES.projection, elem_el, size_bound), cap=cap):
        code = limit_form_code(ES, Q, None, elem_el)
        if code not in right:
            right[code] = Q
    detail = []
    image = {}
    round_ok = True
    for code, (N, alpha) in left.items():
        Q = transport_to_elements(ES, N, alpha)
        okQ, repQ = is_set_model(Q, ES)
        if not okQ:
            detail.append("transport of a left model is not a model: %s" % (repQ[0],))
            round_ok = False
            continue
        qc = limit_form_code(ES, Q, None, elem_el)
        image.setdefault(qc, []).append(code)
        N2, alpha2 = transport_from_elements(ES, Q)
        iso = []
        for c in range(L.n_obj):
            p = {e: i for i, e in enumerate(N2.sets[c])}
            iso.append(tuple(p[(M.sets[c][alpha[c][n]], N.sets[c][n])] for n in range(len(N.sets[c]))))
        if check_set_nat_iso(N, N2, iso) or any(alpha2[c][iso[c][n]] != alpha[c][n]
                                                 for c in range(L.n_obj) for n in range(len(N.sets[c]))):
            detail.append("round trip on the left is not an isomorphism over M")
            round_ok = False
    for code, Q in right.items():
        N, alpha = transport_from_elements(ES, Q)
        okN, repN = is_set_model(N, S)
        if not okN or check_set_nat_trans(N, M, alpha):
            detail.append("transport of a right model is not a model over M")
            round_ok = False
            continue
        Q2 = transport_to_elements(ES, N, alpha)
        if limit_form_code(ES, Q2, None, elem_el) != code:
            detail.append("round trip on the right changes the class")
            round_ok = False
        lc = limit_form_code(S, N, tuple(alpha[a] for a in elem), elem)
        if lc not in left:
            detail.append("right model transports outside the enumerated left classes")
            round_ok = False
    bij = set(image) == set(right) and all(len(v) == 1 for v in image.values())
    ok = bij and round_ok and len(left) == len(right)
    return SliceReport(ok, len(left), len(right), bij, round_ok, detail)
