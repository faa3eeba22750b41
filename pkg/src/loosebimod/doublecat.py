"""Finite pseudo double categories in biased form, double barrels over the
walking loose arrow, restriction of double barrels, and the translation
between double categories and pseudo-models on Δ^op.

Loose composition ``m ⊙ n`` is written in diagrammatic order: ``m : a ↛ b``
then ``n : b ↛ c``.  A square has a top and bottom loose arrow and a left
and right tight arrow; vertical pasting ``v(β, α)`` puts ``β`` below ``α``.
Witnesses are sparse: ``assoc[(m, n, p)] : (m⊙n)⊙p ⇒ m⊙(n⊙p)``,
``lunit[m] : U⊙m ⇒ m``, ``runit[m] : m⊙U ⇒ m``; a missing entry means an
identity square (allowed only where both sides agree).
"""
import itertools
from collections import namedtuple

from .fincore import (FinCategory, FinFunctor, Violation, enumerate_functors,
                      full_subcategory, limit_of_categories, product_category,
                      terminal_category, validate_category, validate_functor)


class FinDoubleCategory:
    __slots__ = ("tight", "loose_labels", "lsrc", "ltgt", "sq_labels", "top", "bot", "left", "right",
                 "vcomp", "vid", "unit", "tight_sq", "hcomp", "hcomp_sq", "assoc", "lunit", "runit",
                 "_vert", "_lidx", "_sidx", "_inv")

    def __init__(self, tight, loose, squares, vcomp, vid, unit, tight_sq, hcomp, hcomp_sq,
                 assoc=None, lunit=None, runit=None):
        self.tight = tight
        loose = list(loose)
        squares = list(squares)
        self.loose_labels = tuple(l[0] for l in loose)
        self.lsrc = tuple(l[1] for l in loose)
        self.ltgt = tuple(l[2] for l in loose)
        self.sq_labels = tuple(s[0] for s in squares)
        self.top = tuple(s[1] for s in squares)
        self.bot = tuple(s[2] for s in squares)
        self.left = tuple(s[3] for s in squares)
        self.right = tuple(s[4] for s in squares)
        self.vcomp = dict(vcomp)
        self.vid = tuple(vid)
        self.unit = tuple(unit)
        self.tight_sq = tuple(tight_sq)
        self.hcomp = dict(hcomp)
        self.hcomp_sq = dict(hcomp_sq)
        self.assoc = dict(assoc or {})
        self.lunit = dict(lunit or {})
        self.runit = dict(runit or {})
        self._vert = None
        self._lidx = None
        self._sidx = None
        self._inv = {}

    @classmethod
    def from_labels(cls, tight, loose, squares, vcomp, vid, unit, tight_sq, hcomp, hcomp_sq,
                    assoc=None, lunit=None, runit=None):
        """Build from labels.  ``loose`` lists ``(label, src, tgt)`` with
        object labels, ``squares`` lists ``(label, top, bot, left, right)``
        by labels; the remaining arguments are callables on labels.  The
        witness callables may return None for an identity."""
        lidx = {l[0]: i for i, l in enumerate(loose)}
        sidx = {s[0]: i for i, s in enumerate(squares)}
        L = [(l[0], tight.obj(l[1]), tight.obj(l[2])) for l in loose]
        S = [(s[0], lidx[s[1]], lidx[s[2]], tight.mor(s[3]), tight.mor(s[4])) for s in squares]
        vc = {}
        by_top = {}
        for j, s in enumerate(S):
            by_top.setdefault(s[1], []).append(j)
        for i, s in enumerate(S):
            for j in by_top.get(s[2], ()):
                vc[(j, i)] = sidx[vcomp(S[j][0], s[0])]
        out_l = {}
        for i, l in enumerate(L):
            out_l.setdefault(l[1], []).append(i)
        hc = {}
        for i, l in enumerate(L):
            for j in out_l.get(l[2], ()):
                hc[(i, j)] = lidx[hcomp(l[0], L[j][0])]
        by_left = {}
        for j, s in enumerate(S):
            by_left.setdefault(s[3], []).append(j)
        hs = {}
        for i, s in enumerate(S):
            for j in by_left.get(s[4], ()):
                hs[(i, j)] = sidx[hcomp_sq(s[0], S[j][0])]
        a, lu, ru = {}, {}, {}
        if assoc:
            for (i, j) in hc:
                for k in out_l.get(L[j][2], ()):
                    w = assoc(L[i][0], L[j][0], L[k][0])
                    if w is not None:
                        a[(i, j, k)] = sidx[w]
        for i in range(len(L)):
            if lunit:
                w = lunit(L[i][0])
                if w is not None:
                    lu[i] = sidx[w]
            if runit:
                w = runit(L[i][0])
                if w is not None:
                    ru[i] = sidx[w]
        return cls(tight, L, S, vc, [sidx[vid(l[0])] for l in L], [lidx[unit(o)] for o in tight.objects],
                   [sidx[tight_sq(f)] for f in tight.mor_labels], hc, hs, a, lu, ru)

    @property
    def n_obj(self):
        return self.tight.n_obj

    @property
    def n_loose(self):
        return len(self.loose_labels)

    @property
    def n_sq(self):
        return len(self.sq_labels)

    def loose(self, label):
        if self._lidx is None:
            self._lidx = {l: i for i, l in enumerate(self.loose_labels)}
        return self._lidx[label]

    def square(self, label):
        if self._sidx is None:
            self._sidx = {l: i for i, l in enumerate(self.sq_labels)}
        return self._sidx[label]

    # structure as operations (shared with computed instances)
    def h(self, m, n):
        return self.hcomp[(m, n)]

    def hs(self, s, t):
        return self.hcomp_sq[(s, t)]

    def v(self, b, a):
        return self.vcomp[(b, a)]

    def vid_of(self, m):
        return self.vid[m]

    def unit_of(self, a):
        return self.unit[a]

    def src(self, m):
        return self.lsrc[m]

    def tgt(self, m):
        return self.ltgt[m]

    def a(self, m, n, p):
        w = self.assoc.get((m, n, p))
        return self.vid[self.h(self.h(m, n), p)] if w is None else w

    def l(self, m):
        w = self.lunit.get(m)
        return self.vid[m] if w is None else w

    def r(self, m):
        w = self.runit.get(m)
        return self.vid[m] if w is None else w

    def vertical(self):
        """The category of loose arrows and squares under vertical pasting."""
        if self._vert is None:
            self._vert = FinCategory(self.loose_labels,
                                     [(self.sq_labels[s], self.top[s], self.bot[s]) for s in range(self.n_sq)],
                                     self.vid, self.vcomp)
        return self._vert

    def inv(self, s):
        r = self._inv.get(s, -2)
        if r == -2:
            r = self.vertical().inverse(s)
            self._inv[s] = r
        return r

    def is_globular(self, s):
        T = self.tight
        return T.is_identity(self.left[s]) and T.is_identity(self.right[s])

    def is_strict(self):
        return all(self._trivial(w, self.bot[w]) for w in
                   list(self.assoc.values()) + list(self.lunit.values()) + list(self.runit.values()))

    def _trivial(self, w, m):
        return self.top[w] == self.bot[w] and self.vid[self.top[w]] == w

    def __repr__(self):
        return "FinDoubleCategory(%d objects, %d tight, %d loose, %d squares)" % (
            self.n_obj, self.tight.n_mor, self.n_loose, self.n_sq)


def _lab(D, m):
    return D.loose_labels[m]


def validate_double_category(D):
    """Every violated law, with the offending tuple of labels."""
    v = list(validate_category(D.tight))
    if v:
        return v
    T = D.tight
    nl, ns = D.n_loose, D.n_sq
    for m in range(nl):
        if not (0 <= D.lsrc[m] < T.n_obj and 0 <= D.ltgt[m] < T.n_obj):
            v.append(Violation("index", ("loose", _lab(D, m)), "endpoint out of range"))
    for s in range(ns):
        t, b, l, r = D.top[s], D.bot[s], D.left[s], D.right[s]
        if not (0 <= t < nl and 0 <= b < nl and 0 <= l < T.n_mor and 0 <= r < T.n_mor):
            v.append(Violation("index", ("square", D.sq_labels[s]), "boundary out of range"))
            continue
        if (T.src[l], T.tgt[l], T.src[r], T.tgt[r]) != (D.lsrc[t], D.lsrc[b], D.ltgt[t], D.ltgt[b]):
            v.append(Violation("square-boundary", (D.sq_labels[s],), "sides do not match the loose edges"))
    if v:
        return v
    vv = validate_category(D.vertical())
    v += [Violation("vertical-" + x.law, x.witness, x.detail) for x in vv]
    if v:
        return v
    for (b, a), c in D.vcomp.items():
        if D.left[c] != T.compose[(D.left[b], D.left[a])] or D.right[c] != T.compose[(D.right[b], D.right[a])]:
            v.append(Violation("vcomp-boundary", (D.sq_labels[b], D.sq_labels[a]), "sides of a pasting are not composites"))
    for m in range(nl):
        s = D.vid[m]
        if not D.is_globular(s):
            v.append(Violation("vid-boundary", (_lab(D, m),), "identity square has non-identity sides"))
    for a in range(T.n_obj):
        u = D.unit[a]
        if D.lsrc[u] != a or D.ltgt[u] != a:
            v.append(Violation("unit-type", (T.objects[a],), "loose unit has wrong endpoints"))
    for f in range(T.n_mor):
        s = D.tight_sq[f]
        if (D.top[s], D.bot[s], D.left[s], D.right[s]) != (D.unit[T.src[f]], D.unit[T.tgt[f]], f, f):
            v.append(Violation("unit-square", (T.mor_labels[f],), "unit square has wrong boundary"))
    if v:
        return v
    for a in range(T.n_obj):
        if D.tight_sq[T.identity[a]] != D.vid[D.unit[a]]:
            v.append(Violation("unit-square", (T.objects[a],), "unit square of an identity is not an identity"))
    for (g, f), h in T.compose.items():
        if D.tight_sq[h] != D.vcomp[(D.tight_sq[g], D.tight_sq[f])]:
            v.append(Violation("unit-square", (T.mor_labels[g], T.mor_labels[f]), "unit squares do not compose"))
    # loose composition
    for m in range(nl):
        for n in range(nl):
            key = (m, n)
            if D.ltgt[m] == D.lsrc[n]:
                k = D.hcomp.get(key)
                if k is None:
                    v.append(Violation("hcomp-missing", (_lab(D, m), _lab(D, n)), "composable pair has no composite"))
                elif D.lsrc[k] != D.lsrc[m] or D.ltgt[k] != D.ltgt[n]:
                    v.append(Violation("hcomp-type", (_lab(D, m), _lab(D, n)), "composite has wrong endpoints"))
    if v:
        return v
    by_left = {}
    for t in range(ns):
        by_left.setdefault(D.left[t], []).append(t)
    for s in range(ns):
        for t in by_left.get(D.right[s], ()):
            k = D.hcomp_sq.get((s, t))
            if k is None:
                v.append(Violation("hcomp-missing", (D.sq_labels[s], D.sq_labels[t]), "composable squares have no composite"))
                continue
            exp = (D.hcomp[(D.top[s], D.top[t])], D.hcomp[(D.bot[s], D.bot[t])], D.left[s], D.right[t])
            if (D.top[k], D.bot[k], D.left[k], D.right[k]) != exp:
                v.append(Violation("hcomp-square-boundary", (D.sq_labels[s], D.sq_labels[t]), "composite square has wrong boundary"))
    if v:
        return v
    for (m, n), k in D.hcomp.items():
        if D.hcomp_sq[(D.vid[m], D.vid[n])] != D.vid[k]:
            v.append(Violation("hcomp-functor", (_lab(D, m), _lab(D, n)), "identity squares do not compose to an identity"))
    for (s, t), k in D.hcomp_sq.items():
        for s2 in D.vertical().out_of(D.bot[s]):
            for t2 in D.vertical().out_of(D.bot[t]):
                if D.left[t2] != D.right[s2]:
                    continue
                lhs = D.vcomp[(D.hcomp_sq[(s2, t2)], k)]
                rhs = D.hcomp_sq[(D.vcomp[(s2, s)], D.vcomp[(t2, t)])]
                if lhs != rhs:
                    v.append(Violation("interchange", (D.sq_labels[s2], D.sq_labels[t2], D.sq_labels[s], D.sq_labels[t]),
                                       "vertical and horizontal pasting do not interchange"))
    if v:
        return v
    v += _check_witnesses(D)
    return v


def _loose_triples(D):
    out_l = {}
    for m in range(D.n_loose):
        out_l.setdefault(D.lsrc[m], []).append(m)
    for (m, n) in sorted(D.hcomp):
        for p in out_l.get(D.ltgt[n], ()):
            yield m, n, p


def _check_witnesses(D):
    v = []
    T = D.tight
    H = D.h
    for (m, n, p) in _loose_triples(D):
        w = D.a(m, n, p)
        src, dst = H(H(m, n), p), H(m, H(n, p))
        if D.top[w] != src or D.bot[w] != dst:
            v.append(Violation("witness-type", ("assoc", _lab(D, m), _lab(D, n), _lab(D, p)), "associator has wrong boundary"))
        elif not D.is_globular(w):
            v.append(Violation("witness-globular", ("assoc", _lab(D, m), _lab(D, n), _lab(D, p)), "associator is not globular"))
        elif D.inv(w) is None:
            v.append(Violation("witness-invertible", ("assoc", _lab(D, m), _lab(D, n), _lab(D, p)), "associator is not invertible"))
    for m in range(D.n_loose):
        for kind, w, src in (("lunit", D.l(m), H(D.unit[D.lsrc[m]], m)), ("runit", D.r(m), H(m, D.unit[D.ltgt[m]]))):
            if D.top[w] != src or D.bot[w] != m:
                v.append(Violation("witness-type", (kind, _lab(D, m)), "unitor has wrong boundary"))
            elif not D.is_globular(w):
                v.append(Violation("witness-globular", (kind, _lab(D, m)), "unitor is not globular"))
            elif D.inv(w) is None:
                v.append(Violation("witness-invertible", (kind, _lab(D, m)), "unitor is not invertible"))
    if v:
        return v
    HS, V = D.hs, D.v
    # naturality
    by_left = {}
    for t in range(D.n_sq):
        by_left.setdefault(D.left[t], []).append(t)
    for s in range(D.n_sq):
        for t in by_left.get(D.right[s], ()):
            for u in by_left.get(D.right[t], ()):
                lhs = V(D.a(D.bot[s], D.bot[t], D.bot[u]), HS(HS(s, t), u))
                rhs = V(HS(s, HS(t, u)), D.a(D.top[s], D.top[t], D.top[u]))
                if lhs != rhs:
                    v.append(Violation("assoc-naturality", (D.sq_labels[s], D.sq_labels[t], D.sq_labels[u]),
                                       "associator is not natural"))
    for s in range(D.n_sq):
        lhs = V(D.l(D.bot[s]), HS(D.tight_sq[D.left[s]], s))
        if lhs != V(s, D.l(D.top[s])):
            v.append(Violation("unit-naturality", ("lunit", D.sq_labels[s]), "left unitor is not natural"))
        lhs = V(D.r(D.bot[s]), HS(s, D.tight_sq[D.right[s]]))
        if lhs != V(s, D.r(D.top[s])):
            v.append(Violation("unit-naturality", ("runit", D.sq_labels[s]), "right unitor is not natural"))
    v += check_pentagons(D, _loose_quadruples(D))
    v += check_triangles(D, sorted(D.hcomp))
    return v


def _loose_quadruples(D):
    out_l = {}
    for m in range(D.n_loose):
        out_l.setdefault(D.lsrc[m], []).append(m)
    for (m, n, p) in _loose_triples(D):
        for q in out_l.get(D.tgt(p), ()):
            yield m, n, p, q


def check_pentagons(D, quadruples, label=None):
    """Pentagon, pasted left to right:
    ``a(m,n,p⊙q) . a(m⊙n,p,q) = (1⊙a(n,p,q)) . a(m,n⊙p,q) . (a(m,n,p)⊙1)``."""
    v = []
    H, HS, V, a = D.h, D.hs, D.v, D.a
    label = label or (lambda m: _lab(D, m))
    for (m, n, p, q) in quadruples:
        lhs = V(a(m, n, H(p, q)), a(H(m, n), p, q))
        rhs = V(HS(D.vid_of(m), a(n, p, q)), V(a(m, H(n, p), q), HS(a(m, n, p), D.vid_of(q))))
        if lhs != rhs:
            v.append(Violation("pentagon", tuple(label(x) for x in (m, n, p, q)), "the two pasted associators differ"))
    return v


def check_triangles(D, pairs, label=None):
    """``(1_m ⊙ λ_n) . a(m, U, n) = ρ_m ⊙ 1_n``."""
    v = []
    label = label or (lambda m: _lab(D, m))
    for (m, n) in pairs:
        U = D.unit_of(D.tgt(m))
        lhs = D.v(D.hs(D.vid_of(m), D.l(n)), D.a(m, U, n))
        if lhs != D.hs(D.r(m), D.vid_of(n)):
            v.append(Violation("triangle", (label(m), label(n)), "unitors and associator do not match"))
    return v


# instances

def walking_loose_arrow():
    """Objects 0, 1; one non-identity loose arrow ``ell : 0 ↛ 1``; only identity squares."""
    T = FinCategory([0, 1], [("id0", 0, 0), ("id1", 1, 1)], [0, 1], {(0, 0): 0, (1, 1): 1})
    loose = [("0", 0, 0), ("ell", 0, 1), ("1", 1, 1)]
    squares = [(("id", m), m, m, "id%d" % s, "id%d" % t) for m, s, t in loose]
    tab = {("0", "0"): "0", ("0", "ell"): "ell", ("ell", "1"): "ell", ("1", "1"): "1"}
    return FinDoubleCategory.from_labels(
        T, loose, squares, lambda b, a: a, lambda m: ("id", m), lambda o: str(o),
        lambda f: ("id", f[-1]), lambda m, n: tab[(m, n)], lambda s, t: ("id", tab[(s[1], t[1])]))


WL_U0, WL_ELL, WL_U1 = 0, 1, 2


def terminal_double():
    T = terminal_category()
    o = T.objects[0]
    f = T.mor_labels[0]
    return FinDoubleCategory.from_labels(
        T, [("U", o, o)], [("id", "U", "U", f, f)], lambda b, a: "id", lambda m: "id", lambda x: "U",
        lambda g: "id", lambda m, n: "U", lambda s, t: "id")


def tight_double(C):
    """C as a double category with only identity loose arrows."""
    loose = [(("U", o), o, o) for o in C.objects]
    squares = [(("U", f), ("U", C.objects[C.src[i]]), ("U", C.objects[C.tgt[i]]), f, f)
               for i, f in enumerate(C.mor_labels)]

    def vc(b, a):
        return ("U", C.mor_labels[C.compose[(C.mor(b[1]), C.mor(a[1]))]])

    return FinDoubleCategory.from_labels(
        C, loose, squares, vc, lambda m: ("U", C.mor_labels[C.identity[C.obj(m[1])]]),
        lambda o: ("U", o), lambda f: ("U", f), lambda m, n: m, lambda s, t: s)


def loose_double(C):
    """C as a strict double category with loose arrows the morphisms of C,
    trivial tight part and identity squares only.  ``f ⊙ g = g . f``."""
    T = FinCategory(C.objects, [(("id", o), i, i) for i, o in enumerate(C.objects)],
                    range(C.n_obj), {(i, i): i for i in range(C.n_obj)})
    loose = [(f, C.objects[C.src[i]], C.objects[C.tgt[i]]) for i, f in enumerate(C.mor_labels)]
    squares = [(("sq", f), f, f, ("id", s), ("id", t)) for f, s, t in loose]

    def hc(m, n):
        return C.mor_labels[C.compose[(C.mor(n), C.mor(m))]]

    return FinDoubleCategory.from_labels(
        T, loose, squares, lambda b, a: a, lambda m: ("sq", m),
        lambda o: C.mor_labels[C.identity[C.obj(o)]], lambda f: ("sq", C.mor_labels[C.identity[C.obj(f[1])]]),
        hc, lambda s, t: ("sq", hc(s[1], t[1])))


def cocycle_double(n=2, omega=None):
    """One object, loose arrows Z/n, each with automorphism group Z/n;
    the associator of ``(x, y, z)`` is the automorphism ``omega(x, y, z)``."""
    if omega is None:
        def omega(x, y, z):
            # the standard nontrivial 3-cocycle of Z/n with Z/n coefficients
            return (x * ((y + z) - (y + z) % n) // n) % n
    T = terminal_category()
    o, f = T.objects[0], T.mor_labels[0]
    loose = [(x, o, o) for x in range(n)]
    squares = [((x, k), x, x, f, f) for x in range(n) for k in range(n)]
    return FinDoubleCategory.from_labels(
        T, loose, squares, lambda b, a: (a[0], (a[1] + b[1]) % n), lambda x: (x, 0), lambda _: 0,
        lambda _: (0, 0), lambda x, y: (x + y) % n, lambda s, t: ((s[0] + t[0]) % n, (s[1] + t[1]) % n),
        assoc=lambda x, y, z: ((x + y + z) % n, omega(x, y, z)) if omega(x, y, z) else None)


def product_double(C, D):
    """Componentwise product; labels are pairs."""
    T = product_category(C.tight, D.tight)
    loose = [((C.loose_labels[m], D.loose_labels[n]), (C.tight.objects[C.lsrc[m]], D.tight.objects[D.lsrc[n]]),
              (C.tight.objects[C.ltgt[m]], D.tight.objects[D.ltgt[n]]))
             for m in range(C.n_loose) for n in range(D.n_loose)]
    squares = [((C.sq_labels[s], D.sq_labels[t]), (C.loose_labels[C.top[s]], D.loose_labels[D.top[t]]),
                (C.loose_labels[C.bot[s]], D.loose_labels[D.bot[t]]),
                (C.tight.mor_labels[C.left[s]], D.tight.mor_labels[D.left[t]]),
                (C.tight.mor_labels[C.right[s]], D.tight.mor_labels[D.right[t]]))
               for s in range(C.n_sq) for t in range(D.n_sq)]

    def pair(fc, fd):
        return lambda *args: (fc(*[x[0] for x in args]), fd(*[x[1] for x in args]))

    cl, dl = C.loose, D.loose
    cs, ds = C.square, D.square

    def lift_sq(E, fn):
        return lambda *labels: E.sq_labels[fn(*[E.loose(l) for l in labels])]

    non_strict = not (C.is_strict() and D.is_strict())
    return FinDoubleCategory.from_labels(
        T, loose, squares,
        pair(lambda b, a: C.sq_labels[C.v(cs(b), cs(a))], lambda b, a: D.sq_labels[D.v(ds(b), ds(a))]),
        pair(lambda m: C.sq_labels[C.vid[cl(m)]], lambda m: D.sq_labels[D.vid[dl(m)]]),
        pair(lambda o: C.loose_labels[C.unit[C.tight.obj(o)]], lambda o: D.loose_labels[D.unit[D.tight.obj(o)]]),
        pair(lambda f: C.sq_labels[C.tight_sq[C.tight.mor(f)]], lambda f: D.sq_labels[D.tight_sq[D.tight.mor(f)]]),
        pair(lambda m, n: C.loose_labels[C.h(cl(m), cl(n))], lambda m, n: D.loose_labels[D.h(dl(m), dl(n))]),
        pair(lambda s, t: C.sq_labels[C.hs(cs(s), cs(t))], lambda s, t: D.sq_labels[D.hs(ds(s), ds(t))]),
        assoc=pair(lift_sq(C, C.a), lift_sq(D, D.a)) if non_strict else None,
        lunit=pair(lift_sq(C, C.l), lift_sq(D, D.l)) if non_strict else None,
        runit=pair(lift_sq(C, C.r), lift_sq(D, D.r)) if non_strict else None)


def full_double_sub(D, keep):
    """Full sub double category on objects satisfying ``keep`` (object ids)."""
    T, _ = full_subcategory(D.tight, keep)
    ok = {a for a in range(D.n_obj) if keep(a)}
    loose = [m for m in range(D.n_loose) if D.lsrc[m] in ok and D.ltgt[m] in ok]
    lk = set(loose)
    sqs = [s for s in range(D.n_sq) if D.top[s] in lk and D.bot[s] in lk]
    nl = {m: i for i, m in enumerate(loose)}
    ns = {s: i for i, s in enumerate(sqs)}
    T_newm = {f: T.mor(D.tight.mor_labels[f]) for f in range(D.tight.n_mor) if D.tight.src[f] in ok and D.tight.tgt[f] in ok}
    T_newo = {a: T.obj(D.tight.objects[a]) for a in ok}
    E = FinDoubleCategory(
        T, [(D.loose_labels[m], T_newo[D.lsrc[m]], T_newo[D.ltgt[m]]) for m in loose],
        [(D.sq_labels[s], nl[D.top[s]], nl[D.bot[s]], T_newm[D.left[s]], T_newm[D.right[s]]) for s in sqs],
        {(ns[b], ns[a]): ns[c] for (b, a), c in D.vcomp.items() if b in ns and a in ns},
        [ns[D.vid[m]] for m in loose], [nl[D.unit[a]] for a in sorted(ok)],
        [ns[D.tight_sq[f]] for f in sorted(T_newm, key=lambda f: T_newm[f])],
        {(nl[m], nl[n]): nl[k] for (m, n), k in D.hcomp.items() if m in nl and n in nl},
        {(ns[s], ns[t]): ns[k] for (s, t), k in D.hcomp_sq.items() if s in ns and t in ns},
        {(nl[m], nl[n], nl[p]): ns[w] for (m, n, p), w in D.assoc.items() if m in nl and n in nl and p in nl},
        {nl[m]: ns[w] for m, w in D.lunit.items() if m in nl},
        {nl[m]: ns[w] for m, w in D.runit.items() if m in nl})
    return E


# barrels

class DoubleBarrel:
    """A strict double functor into the walking loose arrow, stored as the
    object labels (0/1) and loose labels (WL_U0, WL_ELL, WL_U1)."""
    __slots__ = ("total", "obj_label", "loose_label")

    def __init__(self, total, obj_label, loose_label):
        self.total = total
        self.obj_label = tuple(obj_label)
        self.loose_label = tuple(loose_label)

    def heteromorphisms(self):
        return [m for m in range(self.total.n_loose) if self.loose_label[m] == WL_ELL]


def validate_double_barrel(B):
    D = B.total
    v = list(validate_double_category(D))
    lab = B.obj_label
    T = D.tight
    for f in range(T.n_mor):
        if lab[T.src[f]] != lab[T.tgt[f]]:
            v.append(Violation("label-tight", (T.mor_labels[f],), "tight arrow crosses the labels"))
    expect = {(0, 0): WL_U0, (0, 1): WL_ELL, (1, 1): WL_U1}
    for m in range(D.n_loose):
        if expect.get((lab[D.lsrc[m]], lab[D.ltgt[m]])) != B.loose_label[m]:
            v.append(Violation("label-loose", (D.loose_labels[m],), "loose label does not fit its endpoints"))
    for s in range(D.n_sq):
        if B.loose_label[D.top[s]] != B.loose_label[D.bot[s]]:
            v.append(Violation("label-square", (D.sq_labels[s],), "square joins different labels"))
    return v


def barrel_fibres(B):
    D = B.total
    return (full_double_sub(D, lambda a: B.obj_label[a] == 0), full_double_sub(D, lambda a: B.obj_label[a] == 1))


def carrier(B):
    """Heteromorphisms and heterocells under vertical pasting."""
    D = B.total
    het = B.heteromorphisms()
    hk = {m: i for i, m in enumerate(het)}
    cells = [s for s in range(D.n_sq) if D.top[s] in hk]
    ck = {s: i for i, s in enumerate(cells)}
    return FinCategory([D.loose_labels[m] for m in het],
                       [(D.sq_labels[s], hk[D.top[s]], hk[D.bot[s]]) for s in cells],
                       [ck[D.vid[m]] for m in het],
                       {(ck[b], ck[a]): ck[c] for (b, a), c in D.vcomp.items() if a in ck and b in ck})


def hom_double_barrel(C):
    """``C x WalkingLoose`` labelled by the second projection."""
    W = walking_loose_arrow()
    P = product_double(C, W)
    return DoubleBarrel(P, [W.tight.obj(o[1]) for o in P.tight.objects],
                        [W.loose(m[1]) for m in P.loose_labels])


def identity_barrel(D, labels):
    """A double category that is already over the walking loose arrow,
    given object labels (loose labels follow)."""
    expect = {(0, 0): WL_U0, (0, 1): WL_ELL, (1, 1): WL_U1}
    return DoubleBarrel(D, labels, [expect.get((labels[D.lsrc[m]], labels[D.ltgt[m]]), -1)
                                    for m in range(D.n_loose)])


# double functors

class DoubleFunctorData:
    """A pseudo double functor, strict on tight structure and units.

    ``comp[(m, n)]`` is a globular square ``F(m)⊙F(n) ⇒ F(m⊙n)`` in the
    codomain; absent entries are identities."""
    __slots__ = ("dom", "cod", "obj", "tmap", "lmap", "smap", "comp")

    def __init__(self, dom, cod, obj, tmap, lmap, smap, comp=None):
        self.dom, self.cod = dom, cod
        self.obj, self.tmap, self.lmap, self.smap = tuple(obj), tuple(tmap), tuple(lmap), tuple(smap)
        self.comp = dict(comp or {})

    def c(self, m, n):
        w = self.comp.get((m, n))
        return self.cod.vid[self.lmap[self.dom.h(m, n)]] if w is None else w

    def tight_functor(self):
        return FinFunctor(self.dom.tight, self.cod.tight, self.obj, self.tmap)

    def then(self, G):
        """``G . F`` with compositor ``G(φ^F) . φ^G``."""
        E = G.cod
        comp = {}
        for (m, n) in self.dom.hcomp:
            Fm, Fn = self.lmap[m], self.lmap[n]
            w = E.v(G.smap[self.c(m, n)], G.c(Fm, Fn))
            if w != E.vid[G.lmap[self.lmap[self.dom.h(m, n)]]] or E.top[w] != E.bot[w]:
                comp[(m, n)] = w
        return DoubleFunctorData(self.dom, E, [G.obj[x] for x in self.obj], [G.tmap[x] for x in self.tmap],
                                 [G.lmap[x] for x in self.lmap], [G.smap[x] for x in self.smap], comp)


def identity_double_functor(D):
    return DoubleFunctorData(D, D, range(D.n_obj), range(D.tight.n_mor), range(D.n_loose), range(D.n_sq))


def point_functor(D, a):
    """The strict functor from the terminal double category picking ``a``
    (needs ``U_a ⊙ U_a = U_a``; otherwise the compositor is the unitor)."""
    P = terminal_double()
    U = D.unit[a]
    comp = {}
    if D.h(U, U) != U:
        comp[(0, 0)] = D.l(U)
    return DoubleFunctorData(P, D, [a], [D.tight.identity[a]], [U], [D.vid[U]], comp)


def unit_inclusion(D):
    """``tight_double(D.tight) -> D``: objects, tight arrows, units and unit
    squares, with compositor ``λ_U : U⊙U ⇒ U`` where needed."""
    C = tight_double(D.tight)
    comp = {}
    for (m, n) in C.hcomp:
        U = D.unit[C.lsrc[m]]
        if D.h(U, U) != U or D.l(U) != D.vid[U]:
            comp[(m, n)] = D.l(U)
    return DoubleFunctorData(C, D, range(D.n_obj), range(D.tight.n_mor), [D.unit[C.lsrc[m]] for m in range(C.n_loose)],
                             [D.tight_sq[D.tight.mor(C.sq_labels[s][1])] for s in range(C.n_sq)], comp)


def validate_double_functor(F):
    A, B = F.dom, F.cod
    v = list(validate_functor(F.tight_functor()))
    if v:
        return v
    for m in range(A.n_loose):
        k = F.lmap[m]
        if (B.lsrc[k], B.ltgt[k]) != (F.obj[A.lsrc[m]], F.obj[A.ltgt[m]]):
            v.append(Violation("loose-type", (_lab(A, m),), "image has wrong endpoints"))
    for s in range(A.n_sq):
        k = F.smap[s]
        if (B.top[k], B.bot[k], B.left[k], B.right[k]) != (F.lmap[A.top[s]], F.lmap[A.bot[s]], F.tmap[A.left[s]], F.tmap[A.right[s]]):
            v.append(Violation("square-type", (A.sq_labels[s],), "image square has wrong boundary"))
    if v:
        return v
    for (b, a), c in A.vcomp.items():
        if F.smap[c] != B.v(F.smap[b], F.smap[a]):
            v.append(Violation("vcomp", (A.sq_labels[b], A.sq_labels[a]), "vertical pasting not preserved"))
    for m in range(A.n_loose):
        if F.smap[A.vid[m]] != B.vid[F.lmap[m]]:
            v.append(Violation("vid", (_lab(A, m),), "identity square not preserved"))
    for x in range(A.n_obj):
        if F.lmap[A.unit[x]] != B.unit[F.obj[x]]:
            v.append(Violation("unit", (A.tight.objects[x],), "loose unit not preserved"))
    for f in range(A.tight.n_mor):
        if F.smap[A.tight_sq[f]] != B.tight_sq[F.tmap[f]]:
            v.append(Violation("unit-square", (A.tight.mor_labels[f],), "unit square not preserved"))
    if v:
        return v
    for (m, n), k in A.hcomp.items():
        w = F.c(m, n)
        if B.top[w] != B.h(F.lmap[m], F.lmap[n]) or B.bot[w] != F.lmap[k] or not B.is_globular(w) or B.inv(w) is None:
            v.append(Violation("compositor-type", (_lab(A, m), _lab(A, n)), "compositor is not a globular iso of the right type"))
    if v:
        return v
    for (s, t), k in A.hcomp_sq.items():
        lhs = B.v(F.c(A.bot[s], A.bot[t]), B.hs(F.smap[s], F.smap[t]))
        if lhs != B.v(F.smap[k], F.c(A.top[s], A.top[t])):
            v.append(Violation("compositor-naturality", (A.sq_labels[s], A.sq_labels[t]), "compositor is not natural"))
    H, HS, V = B.h, B.hs, B.v
    for (m, n, p) in _loose_triples(A):
        Fm, Fn, Fp = F.lmap[m], F.lmap[n], F.lmap[p]
        lhs = V(F.smap[A.a(m, n, p)], V(F.c(A.h(m, n), p), HS(F.c(m, n), B.vid[Fp])))
        rhs = V(F.c(m, A.h(n, p)), V(HS(B.vid[Fm], F.c(n, p)), B.a(Fm, Fn, Fp)))
        if lhs != rhs:
            v.append(Violation("hexagon", (_lab(A, m), _lab(A, n), _lab(A, p)), "compositors do not respect associators"))
    for m in range(A.n_loose):
        Fm = F.lmap[m]
        Ua, Ub = A.unit[A.lsrc[m]], A.unit[A.ltgt[m]]
        if V(F.smap[A.l(m)], F.c(Ua, m)) != B.l(Fm):
            v.append(Violation("unit-coherence", ("lunit", _lab(A, m)), "compositor does not respect the left unitor"))
        if V(F.smap[A.r(m)], F.c(m, Ub)) != B.r(Fm):
            v.append(Violation("unit-coherence", ("runit", _lab(A, m)), "compositor does not respect the right unitor"))
    return v


def check_double_iso(F):
    """Problems with F as an isomorphism of double categories (bijective on
    every kind of cell, witnesses and compositors trivial)."""
    v = validate_double_functor(F)
    if v:
        return v
    A, B = F.dom, F.cod
    for name, mp, n in (("objects", F.obj, B.n_obj), ("tight", F.tmap, B.tight.n_mor),
                        ("loose", F.lmap, B.n_loose), ("squares", F.smap, B.n_sq)):
        if sorted(mp) != list(range(n)):
            v.append(Violation("bijective", (name,), "not bijective on %s" % name))
    for (m, n) in A.hcomp:
        if F.c(m, n) != B.vid[F.lmap[A.h(m, n)]] or F.lmap[A.h(m, n)] != B.h(F.lmap[m], F.lmap[n]):
            v.append(Violation("strict", (_lab(A, m), _lab(A, n)), "not strict on composition"))
    for (m, n, p) in _loose_triples(A):
        if F.smap[A.a(m, n, p)] != B.a(F.lmap[m], F.lmap[n], F.lmap[p]):
            v.append(Violation("witness", ("assoc", _lab(A, m), _lab(A, n), _lab(A, p)), "associators differ"))
    for m in range(A.n_loose):
        if F.smap[A.l(m)] != B.l(F.lmap[m]) or F.smap[A.r(m)] != B.r(F.lmap[m]):
            v.append(Violation("witness", ("unit", _lab(A, m)), "unitors differ"))
    return v


def relabel_double_functor(A, B, obj, tight, loose, sq):
    """Strict double functor from label translations (callables)."""
    return DoubleFunctorData(A, B, [B.tight.obj(obj(o)) for o in A.tight.objects],
                             [B.tight.mor(tight(f)) for f in A.tight.mor_labels],
                             [B.loose(loose(m)) for m in A.loose_labels],
                             [B.square(sq(s)) for s in A.sq_labels])


# restriction

Restriction = namedtuple("Restriction", ["barrel", "projection"])


def restriction(B, F0, F1):
    """The barrel ``B(F0, F1)``: fibres the domains of ``F0`` and ``F1``,
    heteromorphisms ``(e0, e1, m)`` with ``m : F0 e0 ↛ F1 e1`` in B and
    heterocells ``(f0, f1, σ)``.  Returns ``Restriction(barrel, Π)``."""
    D = B.total
    D0, D1 = barrel_fibres(B)
    if F0.cod.loose_labels != D0.loose_labels or F1.cod.loose_labels != D1.loose_labels:
        raise ValueError("restricting functors must land in the fibres of the barrel")
    A0, A1 = F0.dom, F1.dom
    # everything in the fibres has the same labels as in the total
    def tot_obj(F, x):
        return D.tight.obj(F.cod.tight.objects[F.obj[x]])

    def tot_t(F, f):
        return D.tight.mor(F.cod.tight.mor_labels[F.tmap[f]])

    def tot_l(F, m):
        return D.loose(F.cod.loose_labels[F.lmap[m]])

    def tot_s(F, s):
        return D.square(F.cod.sq_labels[s])

    het = B.heteromorphisms()
    objs = [("0", o) for o in A0.tight.objects] + [("1", o) for o in A1.tight.objects]
    tmors = ([(("0", f), ("0", A0.tight.objects[A0.tight.src[i]]), ("0", A0.tight.objects[A0.tight.tgt[i]]))
              for i, f in enumerate(A0.tight.mor_labels)]
             + [(("1", f), ("1", A1.tight.objects[A1.tight.src[i]]), ("1", A1.tight.objects[A1.tight.tgt[i]]))
                for i, f in enumerate(A1.tight.mor_labels)])

    def tcomp(g, f):
        A = A0 if g[0] == "0" else A1
        return (g[0], A.tight.mor_labels[A.tight.compose[(A.tight.mor(g[1]), A.tight.mor(f[1]))]])

    T = FinCategory.build(objs, tmors, lambda o: (o[0], (A0 if o[0] == "0" else A1).tight.mor_labels[
        (A0 if o[0] == "0" else A1).tight.identity[(A0 if o[0] == "0" else A1).tight.obj(o[1])]]), tcomp)
    loose = ([(("0", A0.loose_labels[m]), ("0", A0.tight.objects[A0.lsrc[m]]), ("0", A0.tight.objects[A0.ltgt[m]]))
              for m in range(A0.n_loose)]
             + [(("1", A1.loose_labels[m]), ("1", A1.tight.objects[A1.lsrc[m]]), ("1", A1.tight.objects[A1.ltgt[m]]))
                for m in range(A1.n_loose)])
    by_ends = {}
    for m in het:
        by_ends.setdefault((D.lsrc[m], D.ltgt[m]), []).append(m)
    for e0 in range(A0.n_obj):
        for e1 in range(A1.n_obj):
            for m in by_ends.get((tot_obj(F0, e0), tot_obj(F1, e1)), ()):
                loose.append((("h", A0.tight.objects[e0], A1.tight.objects[e1], D.loose_labels[m]),
                              ("0", A0.tight.objects[e0]), ("1", A1.tight.objects[e1])))
    squares = ([(("0", A0.sq_labels[s]), ("0", A0.loose_labels[A0.top[s]]), ("0", A0.loose_labels[A0.bot[s]]),
                 ("0", A0.tight.mor_labels[A0.left[s]]), ("0", A0.tight.mor_labels[A0.right[s]])) for s in range(A0.n_sq)]
               + [(("1", A1.sq_labels[s]), ("1", A1.loose_labels[A1.top[s]]), ("1", A1.loose_labels[A1.bot[s]]),
                   ("1", A1.tight.mor_labels[A1.left[s]]), ("1", A1.tight.mor_labels[A1.right[s]])) for s in range(A1.n_sq)])
    by_bound = {}
    for s in range(D.n_sq):
        if D.top[s] in set(het):
            by_bound.setdefault((D.top[s], D.bot[s], D.left[s], D.right[s]), []).append(s)
    hlo = [l for l in loose if l[0][0] == "h"]
    for top in hlo:
        _, e0l, e1l, ml = top[0]
        e0, e1 = A0.tight.obj(e0l), A1.tight.obj(e1l)
        for bot in hlo:
            _, e0l2, e1l2, ml2 = bot[0]
            e02, e12 = A0.tight.obj(e0l2), A1.tight.obj(e1l2)
            for f0 in A0.tight.hom(e0, e02):
                for f1 in A1.tight.hom(e1, e12):
                    for s in by_bound.get((D.loose(ml), D.loose(ml2), tot_t(F0, f0), tot_t(F1, f1)), ()):
                        squares.append((("h", A0.tight.mor_labels[f0], A1.tight.mor_labels[f1], D.sq_labels[s]),
                                        top[0], bot[0], ("0", A0.tight.mor_labels[f0]), ("1", A1.tight.mor_labels[f1])))

    def side(lab):
        return A0 if lab[0] == "0" else A1

    def F_of(lab):
        return F0 if lab[0] == "0" else F1

    def vc(b, a):
        if b[0] != "h":
            A = side(b)
            return (b[0], A.sq_labels[A.v(A.square(b[1]), A.square(a[1]))])
        f0 = A0.tight.mor_labels[A0.tight.compose[(A0.tight.mor(b[1]), A0.tight.mor(a[1]))]]
        f1 = A1.tight.mor_labels[A1.tight.compose[(A1.tight.mor(b[2]), A1.tight.mor(a[2]))]]
        return ("h", f0, f1, D.sq_labels[D.v(D.square(b[3]), D.square(a[3]))])

    def vid(m):
        if m[0] != "h":
            A = side(m)
            return (m[0], A.sq_labels[A.vid[A.loose(m[1])]])
        e0, e1 = A0.tight.obj(m[1]), A1.tight.obj(m[2])
        return ("h", A0.tight.mor_labels[A0.tight.identity[e0]], A1.tight.mor_labels[A1.tight.identity[e1]],
                D.sq_labels[D.vid[D.loose(m[3])]])

    def unit(o):
        A = side(o)
        return (o[0], A.loose_labels[A.unit[A.tight.obj(o[1])]])

    def tsq(f):
        A = side(f)
        return (f[0], A.sq_labels[A.tight_sq[A.tight.mor(f[1])]])

    def hc(m, n):
        if m[0] == n[0] and m[0] != "h":
            A = side(m)
            return (m[0], A.loose_labels[A.h(A.loose(m[1]), A.loose(n[1]))])
        if m[0] == "0":          # n0 ⊙ h
            k = D.h(tot_l(F0, A0.loose(m[1])), D.loose(n[3]))
            return ("h", A0.tight.objects[A0.lsrc[A0.loose(m[1])]], n[2], D.loose_labels[k])
        k = D.h(D.loose(m[3]), tot_l(F1, A1.loose(n[1])))
        return ("h", m[1], A1.tight.objects[A1.ltgt[A1.loose(n[1])]], D.loose_labels[k])

    def hsq(s, t):
        if s[0] == t[0] and s[0] != "h":
            A = side(s)
            return (s[0], A.sq_labels[A.hs(A.square(s[1]), A.square(t[1]))])
        if s[0] == "0":
            i = A0.square(s[1])
            k = D.hs(tot_s(F0, F0.smap[i]), D.square(t[3]))
            return ("h", A0.tight.mor_labels[A0.left[i]], t[2], D.sq_labels[k])
        i = A1.square(t[1])
        k = D.hs(D.square(s[3]), tot_s(F1, F1.smap[i]))
        return ("h", s[1], A1.tight.mor_labels[A1.right[i]], D.sq_labels[k])

    def het_cell(m_lab_top, sq):
        # a globular heterocell over identities at the endpoints of m_lab_top
        e0, e1 = A0.tight.obj(m_lab_top[1]), A1.tight.obj(m_lab_top[2])
        return ("h", A0.tight.mor_labels[A0.tight.identity[e0]], A1.tight.mor_labels[A1.tight.identity[e1]],
                D.sq_labels[sq])

    def assoc(x, y, z):
        kinds = (x[0], y[0], z[0])
        if kinds in (("0", "0", "0"), ("1", "1", "1")):
            A = side(x)
            w = A.assoc.get((A.loose(x[1]), A.loose(y[1]), A.loose(z[1])))
            return None if w is None else (x[0], A.sq_labels[w])
        if kinds == ("0", "0", "h"):
            n0, n0p = A0.loose(x[1]), A0.loose(y[1])
            Fn, Fnp, m = tot_l(F0, n0), tot_l(F0, n0p), D.loose(z[3])
            phi = tot_s(F0, F0.c(n0, n0p))
            w = D.v(D.a(Fn, Fnp, m), D.hs(D.inv(phi), D.vid[m]))
            top = hc(hc(x, y), z)
        elif kinds == ("0", "h", "1"):
            w = D.a(tot_l(F0, A0.loose(x[1])), D.loose(y[3]), tot_l(F1, A1.loose(z[1])))
            top = hc(hc(x, y), z)
        else:       # (h, 1, 1)
            n1, n1p = A1.loose(y[1]), A1.loose(z[1])
            Fn, Fnp, m = tot_l(F1, n1), tot_l(F1, n1p), D.loose(x[3])
            phi = tot_s(F1, F1.c(n1, n1p))
            w = D.v(D.hs(D.vid[m], phi), D.a(m, Fn, Fnp))
            top = hc(hc(x, y), z)
        return het_cell(top, w)

    def lunit(m):
        if m[0] != "h":
            A = side(m)
            w = A.lunit.get(A.loose(m[1]))
            return None if w is None else (m[0], A.sq_labels[w])
        return het_cell(m, D.l(D.loose(m[3])))

    def runit(m):
        if m[0] != "h":
            A = side(m)
            w = A.runit.get(A.loose(m[1]))
            return None if w is None else (m[0], A.sq_labels[w])
        return het_cell(m, D.r(D.loose(m[3])))

    R = FinDoubleCategory.from_labels(T, loose, squares, vc, vid, unit, tsq, hc, hsq, assoc, lunit, runit)
    RB = DoubleBarrel(R, [0 if o[0] == "0" else 1 for o in R.tight.objects],
                      [WL_U0 if m[0] == "0" else (WL_U1 if m[0] == "1" else WL_ELL) for m in R.loose_labels])
    # the projection Π
    def pobj(o):
        F = F_of(o)
        return D.tight.objects[tot_obj(F, side(o).tight.obj(o[1]))]

    def ptight(f):
        F = F_of(f)
        return D.tight.mor_labels[tot_t(F, side(f).tight.mor(f[1]))]

    def ploose(m):
        if m[0] == "h":
            return m[3]
        return D.loose_labels[tot_l(F_of(m), side(m).loose(m[1]))]

    def psq(s):
        if s[0] == "h":
            return s[3]
        F = F_of(s)
        return D.sq_labels[tot_s(F, F.smap[side(s).square(s[1])])]

    Pi = relabel_double_functor(R, D, pobj, ptight, ploose, psq)
    comp = {}
    for (m, n) in R.hcomp:
        x, y = R.loose_labels[m], R.loose_labels[n]
        if x[0] == y[0] and x[0] != "h":
            F = F_of(x)
            A = side(x)
            w = F.comp.get((A.loose(x[1]), A.loose(y[1])))
            if w is not None:
                comp[(m, n)] = D.square(F.cod.sq_labels[w])
    Pi.comp.update(comp)
    return Restriction(RB, Pi)


def restriction_carrier_limit(B, F0, F1):
    """The carrier of ``B(F0, F1)`` built as a limit of categories:
    ``tight(A0) -> tight(D0) <- carrier(B) -> tight(D1) <- tight(A1)``."""
    D = B.total
    D0, D1 = barrel_fibres(B)
    Car = carrier(B)
    J = FinCategory(range(5), [("id%d" % i, i, i) for i in range(5)]
                    + [("f0", 0, 1), ("s", 2, 1), ("t", 2, 3), ("f1", 4, 3)],
                    range(5), {**{(i, i): i for i in range(5)}, **{(1, 5): 5, (5, 0): 5, (1, 6): 6, (6, 2): 6,
                                                                       (3, 7): 7, (7, 2): 7, (3, 8): 8, (8, 4): 8}})
    s_obj = [D0.tight.obj(D.tight.objects[D.lsrc[D.loose(m)]]) for m in Car.objects]
    s_mor = [D0.tight.mor(D.tight.mor_labels[D.left[D.square(s)]]) for s in Car.mor_labels]
    t_obj = [D1.tight.obj(D.tight.objects[D.ltgt[D.loose(m)]]) for m in Car.objects]
    t_mor = [D1.tight.mor(D.tight.mor_labels[D.right[D.square(s)]]) for s in Car.mor_labels]
    vals = [F0.dom.tight, D0.tight, Car, D1.tight, F1.dom.tight]
    funs = [FinFunctor.identity(V) for V in vals] + [
        F0.tight_functor(), FinFunctor(Car, D0.tight, s_obj, s_mor),
        FinFunctor(Car, D1.tight, t_obj, t_mor), F1.tight_functor()]
    L, _ = limit_of_categories(J, vals, funs)
    return L


def carrier_limit_comparison(RB, B, F0, F1):
    """The functor ``limit -> carrier(restriction)`` on labels; returns
    ``(Lim, Car, F)``."""
    L = restriction_carrier_limit(B, F0, F1)
    Car = carrier(RB)
    A0, A1 = F0.dom, F1.dom
    Cb = carrier(B)
    omap = [Car.obj(("h", A0.tight.objects[fam[0]], A1.tight.objects[fam[4]], Cb.objects[fam[2]])) for fam in L.objects]
    mmap = [Car.mor(("h", A0.tight.mor_labels[fam[0]], A1.tight.mor_labels[fam[4]], Cb.mor_labels[fam[2]]))
            for fam in L.mor_labels]
    return L, Car, FinFunctor(L, Car, omap, mmap)


def projection_faithful(RB, Pi):
    """Distinct parallel heterocells have distinct images (witness or None)."""
    R = RB.total
    seen = {}
    for s in range(R.n_sq):
        if RB.loose_label[R.top[s]] != WL_ELL:
            continue
        key = (R.top[s], R.bot[s], R.left[s], R.right[s], Pi.smap[s])
        if key in seen:
            return (R.sq_labels[seen[key]], R.sq_labels[s])
        seen[key] = s
    return None


def _boundary_functor(B, side):
    D = B.total
    Car = carrier(B)
    if side == 0:
        return [D.lsrc[D.loose(m)] for m in Car.objects], [D.left[D.square(s)] for s in Car.mor_labels]
    return [D.ltgt[D.loose(m)] for m in Car.objects], [D.right[D.square(s)] for s in Car.mor_labels]


def enumerate_cells(N, B, H0, H1, cap=None):
    """Cells ``N -> B`` with boundary ``(H0, H1)``: functors of carriers
    compatible with the boundary maps (tight parts, as label translations
    ``obj -> obj`` and ``tight -> tight`` into the total of B).  This is the
    labelling-only reading of cells between loose bimodules."""
    CN, CB = carrier(N), carrier(B)
    DN, DB = N.total, B.total
    sN0, sN0m = _boundary_functor(N, 0)
    tN1, tN1m = _boundary_functor(N, 1)
    sB0, sB0m = _boundary_functor(B, 0)
    tB1, tB1m = _boundary_functor(B, 1)
    by_obj = {}
    for y in range(CB.n_obj):
        by_obj.setdefault((sB0[y], tB1[y]), []).append(y)
    by_mor = {}
    for g in range(CB.n_mor):
        by_mor.setdefault((sB0m[g], tB1m[g]), []).append(g)

    def obj_allowed(x):
        return by_obj.get((H0[0](sN0[x]), H1[0](tN1[x])), [])

    def mor_allowed(f):
        return by_mor.get((H0[1](sN0m[f]), H1[1](tN1m[f])), [])

    return list(enumerate_functors(CN, CB, cap=cap, obj_allowed=obj_allowed, mor_allowed=mor_allowed))


RestrictionUPReport = namedtuple("RestrictionUPReport", ["ok", "left_count", "right_count", "witness", "reading"])


def _tot_maps(F, D):
    """Boundary maps of a fibre functor as maps into the total D (ids)."""
    return (lambda x: D.tight.obj(F.cod.tight.objects[F.obj[x]]),
            lambda f: D.tight.mor(F.cod.tight.mor_labels[F.tmap[f]]))


def _fibre_id_maps(N, side):
    """Object/tight ids of the N total -> ids in the fibre category."""
    Fib = barrel_fibres(N)[side]
    D = N.total
    return (lambda x: Fib.tight.obj(D.tight.objects[x]), lambda f: Fib.tight.mor(D.tight.mor_labels[f]))


def check_restriction_universal_property(B, F0, F1, N, G0, G1, restricted=None, cap=None):
    """Cells ``N -> B`` over ``(F0 G0, F1 G1)`` against cells
    ``N -> B(F0,F1)`` over ``(G0, G1)``, matched by composing with Π."""
    R, Pi = restricted if restricted is not None else restriction(B, F0, F1)
    D, RD = B.total, R.total
    n0, n1 = _fibre_id_maps(N, 0), _fibre_id_maps(N, 1)
    f0, f1 = _tot_maps(F0, D), _tot_maps(F1, D)
    H0 = (lambda x: f0[0](G0.obj[n0[0](x)]), lambda f: f0[1](G0.tmap[n0[1](f)]))
    H1 = (lambda x: f1[0](G1.obj[n1[0](x)]), lambda f: f1[1](G1.tmap[n1[1](f)]))
    left = enumerate_cells(N, B, H0, H1, cap)
    # G-boundary into the restriction's total
    g0 = (lambda x: RD.tight.obj(("0", G0.cod.tight.objects[G0.obj[n0[0](x)]])),
          lambda f: RD.tight.mor(("0", G0.cod.tight.mor_labels[G0.tmap[n0[1](f)]])))
    g1 = (lambda x: RD.tight.obj(("1", G1.cod.tight.objects[G1.obj[n1[0](x)]])),
          lambda f: RD.tight.mor(("1", G1.cod.tight.mor_labels[G1.tmap[n1[1](f)]])))
    try:
        right = enumerate_cells(N, R, g0, g1, cap)
    except KeyError as exc:
        return RestrictionUPReport(False, len(left), 0, ("boundary", repr(exc)), "labelling-only")
    CR, CB = carrier(R), carrier(B)
    pio = [CB.obj(D.loose_labels[Pi.lmap[RD.loose(m)]]) for m in CR.objects]
    pim = [CB.mor(D.sq_labels[Pi.smap[RD.square(s)]]) for s in CR.mor_labels]
    image = [(tuple(pio[x] for x in c.obj_map), tuple(pim[f] for f in c.mor_map)) for c in right]
    lset = {(c.obj_map, c.mor_map) for c in left}
    if len(set(image)) != len(image):
        return RestrictionUPReport(False, len(left), len(right), ("not injective",), "labelling-only")
    missing = sorted(lset - set(image))
    extra = sorted(set(image) - lset)
    if missing or extra:
        wit = ("missing", missing[0]) if missing else ("extra", extra[0])
        return RestrictionUPReport(False, len(left), len(right), wit, "labelling-only")
    return RestrictionUPReport(True, len(left), len(right), None, "labelling-only")


# unit and associativity normalization

class _Normalizer:
    """Canonical globular isos between bracketings of a loose word.

    Trees are ``("l", m)``, ``("u", a)`` or ``("n", L, R)``.  The normal
    form of a non-empty word is left nested; of an empty word at ``a`` it
    is ``U_a``.  ``normalize(t)`` returns ``(square, letters, a)`` with the
    square going from the value of ``t`` to the normal form."""

    def __init__(self, D):
        self.D = D
        self.memo = {}
        self.inv_memo = {}

    def value(self, t):
        D = self.D
        if t[0] == "l":
            return t[1]
        if t[0] == "u":
            return D.unit_of(t[1])
        return D.h(self.value(t[1]), self.value(t[2]))

    def normal_value(self, letters, a):
        D = self.D
        if not letters:
            return D.unit_of(a)
        x = letters[0]
        for m in letters[1:]:
            x = D.h(x, m)
        return x

    def _inv(self, s):
        r = self.inv_memo.get(s)
        if r is None:
            r = self.D.inv(s)
            self.inv_memo[s] = r
        return r

    def merge(self, NL, a, NR, b):
        """Square from value(NL)⊙value(NR) to the normal form of NL+NR."""
        D = self.D
        key = ("m", NL, a, NR, b)
        r = self.memo.get(key)
        if r is not None:
            return r
        L = self.normal_value(NL, a)
        if not NR:
            r = D.r(L)
        elif not NL:
            r = D.l(self.normal_value(NR, b))
        elif len(NR) == 1:
            r = D.vid_of(D.h(L, NR[0]))
        else:
            rest, m = NR[:-1], NR[-1]
            ainv = self._inv(D.a(L, self.normal_value(rest, b), m))
            r = D.v(D.hs(self.merge(NL, a, rest, b), D.vid_of(m)), ainv)
        self.memo[key] = r
        return r

    def normalize(self, t):
        r = self.memo.get(t)
        if r is not None:
            return r
        D = self.D
        if t[0] == "l":
            r = (D.vid_of(t[1]), (t[1],), D.src(t[1]))
        elif t[0] == "u":
            r = (D.vid_of(D.unit_of(t[1])), (), t[1])
        else:
            sL, NL, a = self.normalize(t[1])
            sR, NR, b = self.normalize(t[2])
            s = D.hs(sL, sR)
            r = (D.v(self.merge(NL, a, NR, b), s), NL + NR, a if NL else b)
        self.memo[t] = r
        return r


def _left_tree(letters, a):
    if not letters:
        return ("u", a)
    t = ("l", letters[0])
    for m in letters[1:]:
        t = ("n", t, ("l", m))
    return t


# double category -> pseudo-model on Δ≤n^op

def chain_category(D, n):
    """Composable chains of ``n`` loose arrows and of squares."""
    if n == 0:
        return D.tight
    chains = [(m,) for m in range(D.n_loose)]
    for _ in range(n - 1):
        chains = [c + (m,) for c in chains for m in range(D.n_loose) if D.lsrc[m] == D.ltgt[c[-1]]]
    cidx = {c: i for i, c in enumerate(chains)}
    schains = [(s,) for s in range(D.n_sq)]
    for _ in range(n - 1):
        schains = [c + (s,) for c in schains for s in range(D.n_sq) if D.left[s] == D.right[c[-1]]]
    mors = [(tuple(D.sq_labels[s] for s in c), cidx[tuple(D.top[s] for s in c)], cidx[tuple(D.bot[s] for s in c)])
            for c in schains]
    sidx = {c: i for i, c in enumerate(schains)}
    ids = [sidx[tuple(D.vid[m] for m in c)] for c in chains]
    by_top = {}
    for i, c in enumerate(schains):
        by_top.setdefault(mors[i][1], []).append(i)
    comp = {}
    for i, c in enumerate(schains):
        for j in by_top.get(mors[i][2], ()):
            comp[(j, i)] = sidx[tuple(D.v(b, a) for b, a in zip(schains[j], c))]
    C = FinCategory([tuple(D.loose_labels[m] for m in c) for c in chains], mors, ids, comp)
    return C, chains, schains


def double_to_pseudo_model(D, T):
    """The pseudo-model of the Segal F-sketch on ``T`` (a TruncatedDelta)
    whose value at [n] is the category of n-chains; actives act by
    left-nested loose composition, compositors are canonical isos."""
    from .fsketchlab import PseudoFunctorData
    B = T.category
    N = _Normalizer(D)
    values, chains, schains = [], [None], [None]
    for n in range(T.n + 1):
        if n == 0:
            values.append(D.tight)
        else:
            C, ch, sch = chain_category(D, n)
            values.append(C)
            chains.append(ch)
            schains.append(sch)
    Tt = D.tight

    def vertices(n, x):
        if n == 0:
            return [x]
        c = chains[n][x]
        return [D.lsrc[c[0]]] + [D.ltgt[m] for m in c]

    def sq_vertices(n, f):
        if n == 0:
            return [f]
        c = schains[n][f]
        return [D.left[c[0]]] + [D.right[s] for s in c]

    cidx = [None] + [{c: i for i, c in enumerate(chains[n])} for n in range(1, T.n + 1)]
    sidx = [None] + [{c: i for i, c in enumerate(schains[n])} for n in range(1, T.n + 1)]
    actions = []
    for u in range(B.n_mor):
        f = T.maps[u]          # [k] -> [l], acts P(l) -> P(k)
        k, l = f.dom, f.cod
        Vl, Vk = values[l], values[k]
        omap, mmap = [], []
        for x in range(Vl.n_obj):
            vs = vertices(l, x)
            if k == 0:
                omap.append(vs[f.values[0]])
                continue
            c = chains[l][x] if l else ()
            out = tuple(N.normal_value(tuple(c[f.values[j - 1]:f.values[j]]), vs[f.values[j]])
                        for j in range(1, k + 1))
            omap.append(cidx[k][out])
        for g in range(Vl.n_mor):
            vs = sq_vertices(l, g)
            if k == 0:
                mmap.append(vs[f.values[0]])
                continue
            c = schains[l][g] if l else ()
            out = []
            for j in range(1, k + 1):
                blk = c[f.values[j - 1]:f.values[j]]
                if not blk:
                    out.append(D.tight_sq[vs[f.values[j]]])
                else:
                    s = blk[0]
                    for t in blk[1:]:
                        s = D.hs(s, t)
                    out.append(s)
            mmap.append(sidx[k][tuple(out)])
        actions.append(FinFunctor(Vl, Vk, omap, mmap))
    comps = {}
    for (v, u), vu in B.compose.items():
        f, g = T.maps[u], T.maps[v]              # f : [k] -> [l], g : [j] -> [k]
        j, k, l = g.dom, f.dom, f.cod
        if j == 0:
            continue
        # edges of P(v)P(u)x as trees over the letters of x
        pattern = []
        for i in range(1, j + 1):
            blocks = [(f.values[e - 1], f.values[e]) for e in range(g.values[i - 1] + 1, g.values[i] + 1)]
            pattern.append((blocks, f.values[g.values[i]]))
        if all(len(b) == 1 for b, _ in pattern):
            continue
        row = []
        nontriv = False
        Vl = values[l]
        for x in range(Vl.n_obj):
            vs = vertices(l, x)
            c = chains[l][x] if l else ()
            comp_edges = []
            for blocks, end in pattern:
                if not blocks:
                    tree = ("u", vs[end])
                else:
                    subs = [_left_tree(tuple(c[a:b]), vs[b]) for a, b in blocks]
                    tree = subs[0]
                    for s in subs[1:]:
                        tree = ("n", tree, s)
                sq, _, _ = N.normalize(tree)
                comp_edges.append(sq)
            w = sidx[j][tuple(comp_edges)]
            row.append(w)
            if not values[j].is_identity(w):
                nontriv = True
        if nontriv:
            comps[(v, u)] = tuple(row)
    return PseudoFunctorData(B, T.inert, values, actions, comps, T)


def _inert_ids(T):
    B = T.category
    return {
        "d_src": B.mor((0, 1, (0,))), "d_tgt": B.mor((0, 1, (1,))), "s": B.mor((1, 0, (0, 0))),
        "e01": B.mor((1, 2, (0, 1))), "e12": B.mor((1, 2, (1, 2))), "a2": B.mor((1, 2, (0, 2))),
    }


def model_edges(P, T, n, x, on="obj"):
    """Edge images of an object (or morphism) of ``P([n])`` in ``P([1])``."""
    B = T.category
    out = []
    for i in range(n):
        u = B.mor((1, n, (i, i + 1)))
        F = P.actions[u]
        out.append(F.obj_map[x] if on == "obj" else F.mor_map[x])
    return tuple(out)


def pseudo_model_to_double(P, T):
    """The double category of a pseudo-model on ``T`` (truncation ≥ 3):
    ⊙ is the active map [1] -> [2] after the Segal inverse, witnesses are
    read off from compositors."""
    if T.n < 3:
        raise ValueError("need truncation at least 3 for associators")
    B = T.category
    ids = _inert_ids(T)
    V0, V1, V2, V3 = P.values[0], P.values[1], P.values[2], P.values[3]
    dsrc, dtgt, s_ = P.actions[ids["d_src"]], P.actions[ids["d_tgt"]], P.actions[ids["s"]]
    theta_o = {model_edges(P, T, 2, y): y for y in range(V2.n_obj)}
    theta_m = {model_edges(P, T, 2, y, "mor"): y for y in range(V2.n_mor)}
    theta3 = {model_edges(P, T, 3, y): y for y in range(V3.n_obj)}
    a2 = P.actions[ids["a2"]]
    loose = [(V1.objects[m], V0.objects[dsrc.obj_map[m]], V0.objects[dtgt.obj_map[m]]) for m in range(V1.n_obj)]
    squares = [(V1.mor_labels[s], V1.objects[V1.src[s]], V1.objects[V1.tgt[s]],
                V0.mor_labels[dsrc.mor_map[s]], V0.mor_labels[dtgt.mor_map[s]]) for s in range(V1.n_mor)]
    sigma = B.mor((2, 3, (0, 2, 3)))
    tau = B.mor((2, 3, (0, 1, 3)))
    s0 = B.mor((2, 1, (0, 0, 1)))
    s1 = B.mor((2, 1, (0, 1, 1)))
    ia2 = ids["a2"]

    def hc(m, n):
        return V1.objects[a2.obj_map[theta_o[(V1.obj(m), V1.obj(n))]]]

    def hsq(s, t):
        return V1.mor_labels[a2.mor_map[theta_m[(V1.mor(s), V1.mor(t))]]]

    def assoc(m, n, p):
        x = theta3.get((V1.obj(m), V1.obj(n), V1.obj(p)))
        ps = P.component(ia2, sigma, x)
        pt = P.component(ia2, tau, x)
        w = V1.compose[(V1.inverse(pt), ps)]
        return None if V1.is_identity(w) else V1.mor_labels[w]

    def lunit(m):
        w = P.component(ia2, s0, V1.obj(m))
        return None if V1.is_identity(w) else V1.mor_labels[w]

    def runit(m):
        w = P.component(ia2, s1, V1.obj(m))
        return None if V1.is_identity(w) else V1.mor_labels[w]

    return FinDoubleCategory.from_labels(
        V0, loose, squares, lambda b, a: V1.mor_labels[V1.compose[(V1.mor(b), V1.mor(a))]],
        lambda m: V1.mor_labels[V1.identity[V1.obj(m)]],
        lambda o: V1.objects[s_.obj_map[V0.obj(o)]], lambda f: V1.mor_labels[s_.mor_map[V0.mor(f)]],
        hc, hsq, assoc, lunit, runit)


def double_roundtrip_functor(D, T):
    """``D -> pseudo_model_to_double(double_to_pseudo_model(D))`` on labels."""
    P = double_to_pseudo_model(D, T)
    E = pseudo_model_to_double(P, T)
    return relabel_double_functor(D, E, lambda o: o, lambda f: f, lambda m: (m,), lambda s: (s,)), P, E


def model_roundtrip_isos(P, T):
    """Value isomorphisms ``P([n]) -> P'([n])`` for
    ``P' = double_to_pseudo_model(pseudo_model_to_double(P))``: an object
    goes to the chain of its edges."""
    D = pseudo_model_to_double(P, T)
    P2 = double_to_pseudo_model(D, T)
    isos = []
    V1 = P.values[1]
    for n in range(T.n + 1):
        V, W = P.values[n], P2.values[n]
        if n == 0:
            isos.append(FinFunctor(V, W, [W.obj(o) for o in V.objects], [W.mor(f) for f in V.mor_labels]))
            continue
        omap = [W.obj(tuple(V1.objects[e] for e in model_edges(P, T, n, x))) for x in range(V.n_obj)]
        mmap = [W.mor(tuple(V1.mor_labels[e] for e in model_edges(P, T, n, f, "mor"))) for f in range(V.n_mor)]
        isos.append(FinFunctor(V, W, omap, mmap))
    return P2, isos, D


# tight transformations and the correspondence with modifications

class TightTransformationData:
    """``alpha : F ⇒ G``: a tight arrow per object and a square per loose arrow."""
    __slots__ = ("source", "target", "obj", "loose")

    def __init__(self, source, target, obj, loose):
        self.source, self.target = source, target
        self.obj, self.loose = tuple(obj), tuple(loose)


def validate_tight_transformation(al):
    F, G = al.source, al.target
    A, E = F.dom, F.cod
    T = E.tight
    v = []
    for x in range(A.n_obj):
        f = al.obj[x]
        if T.src[f] != F.obj[x] or T.tgt[f] != G.obj[x]:
            v.append(Violation("component-type", (A.tight.objects[x],), "component has wrong endpoints"))
    for m in range(A.n_loose):
        s = al.loose[m]
        if (E.top[s], E.bot[s], E.left[s], E.right[s]) != (F.lmap[m], G.lmap[m], al.obj[A.lsrc[m]], al.obj[A.ltgt[m]]):
            v.append(Violation("component-type", (_lab(A, m),), "loose component has wrong boundary"))
    if v:
        return v
    for f in range(A.tight.n_mor):
        a, b = A.tight.src[f], A.tight.tgt[f]
        if T.compose[(G.tmap[f], al.obj[a])] != T.compose[(al.obj[b], F.tmap[f])]:
            v.append(Violation("tight-naturality", (A.tight.mor_labels[f],), "not natural in tight arrows"))
    for s in range(A.n_sq):
        if E.v(G.smap[s], al.loose[A.top[s]]) != E.v(al.loose[A.bot[s]], F.smap[s]):
            v.append(Violation("square-naturality", (A.sq_labels[s],), "not natural in squares"))
    for (m, n), k in A.hcomp.items():
        if E.v(al.loose[k], F.c(m, n)) != E.v(G.c(m, n), E.hs(al.loose[m], al.loose[n])):
            v.append(Violation("external-functoriality", (_lab(A, m), _lab(A, n)), "does not respect composition"))
    for x in range(A.n_obj):
        if al.loose[A.unit[x]] != E.tight_sq[al.obj[x]]:
            v.append(Violation("external-functoriality", (A.tight.objects[x],), "does not respect units"))
    return v


def enumerate_tight_transformations(F, G):
    A, E = F.dom, F.cod
    T = E.tight
    obj_choices = [T.hom(F.obj[x], G.obj[x]) for x in range(A.n_obj)]
    by_bound = {}
    for s in range(E.n_sq):
        by_bound.setdefault((E.top[s], E.bot[s], E.left[s], E.right[s]), []).append(s)
    out = []
    for comps in itertools.product(*obj_choices):
        choices = [by_bound.get((F.lmap[m], G.lmap[m], comps[A.lsrc[m]], comps[A.ltgt[m]]), [])
                   for m in range(A.n_loose)]
        for ls in itertools.product(*choices):
            al = TightTransformationData(F, G, comps, ls)
            if not validate_tight_transformation(al):
                out.append(al)
    return out


def comparison_chain(F, letters):
    """Square ``F(m1)⊙...⊙F(mr) ⇒ F(m1⊙...⊙mr)`` (both left nested)."""
    E, A = F.cod, F.dom
    x = letters[0]
    s = E.vid[F.lmap[x]]
    for m in letters[1:]:
        s = E.v(F.c(x, m), E.hs(s, E.vid[F.lmap[m]]))
        x = A.h(x, m)
    return s


def double_functor_to_transformation(F, PA, PE, T):
    """F-transformation between the chain models of ``dom F`` and ``cod F``:
    chainwise application, with naturality cells from the compositors."""
    from .fsketchlab import PseudoFTransformation
    A, E = F.dom, F.cod
    B = T.category
    comps = []
    for n in range(T.n + 1):
        V, W = PA.values[n], PE.values[n]
        if n == 0:
            comps.append(FinFunctor(V, W, F.obj, F.tmap))
            continue
        omap = [W.obj(tuple(E.loose_labels[F.lmap[A.loose(m)]] for m in c)) for c in V.objects]
        mmap = [W.mor(tuple(E.sq_labels[F.smap[A.square(s)]] for s in c)) for c in V.mor_labels]
        comps.append(FinFunctor(V, W, omap, mmap))
    nat = {}
    for u in range(B.n_mor):
        f = T.maps[u]
        k, l = f.dom, f.cod
        if k == 0 or all(f.values[j] - f.values[j - 1] == 1 for j in range(1, k + 1)):
            continue
        row = []
        nontriv = False
        V, Wk = PA.values[l], PE.values[k]
        for x in range(V.n_obj):
            if l == 0:
                # every block is empty: units are preserved on the nose
                row.append(Wk.identity[comps[k].obj_map[PA.actions[u].obj_map[x]]])
                continue
            c = tuple(A.loose(m) for m in V.objects[x])
            vs = [A.lsrc[c[0]]] + [A.ltgt[m] for m in c]
            edges = []
            for j in range(1, k + 1):
                blk = c[f.values[j - 1]:f.values[j]]
                if not blk:
                    edges.append(E.vid[E.unit[F.obj[vs[f.values[j]]]]])
                else:
                    edges.append(comparison_chain(F, blk))
            w = Wk.mor(tuple(E.sq_labels[s] for s in edges))
            row.append(w)
            if not Wk.is_identity(w):
                nontriv = True
        if nontriv:
            nat[u] = tuple(row)
    return PseudoFTransformation(PA, PE, comps, nat)


def transformation_to_double_functor(Phi, A, E, T):
    """Restrict to [0] and [1]; the compositor is the naturality cell of
    the active map [1] -> [2] at the chain ``(m, n)``."""
    ids = _inert_ids(T)
    P0, P1 = Phi.components[0], Phi.components[1]
    V1 = Phi.source.values[1]
    W1 = Phi.target.values[1]
    V2 = Phi.source.values[2]
    lmap = [E.loose(W1.objects[P1.obj_map[V1.obj((m,))]][0]) for m in A.loose_labels]
    smap = [E.square(W1.mor_labels[P1.mor_map[V1.mor((s,))]][0]) for s in A.sq_labels]
    comp = {}
    for (m, n) in A.hcomp:
        y = V2.obj((A.loose_labels[m], A.loose_labels[n]))
        w = Phi.cell(ids["a2"], y)
        sq = E.square(W1.mor_labels[w][0])
        if not (E.top[sq] == E.bot[sq] and E.vid[E.top[sq]] == sq):
            comp[(m, n)] = sq
    return DoubleFunctorData(A, E, P0.obj_map, P0.mor_map, lmap, smap, comp)


def tight_to_modification(al, Phi, Psi, T):
    """Components of the modification at [0] and [1], extended chainwise."""
    from .fsketchlab import Modification
    A, E = al.source.dom, al.source.cod
    Q = Phi.target
    comps = []
    for n in range(T.n + 1):
        V, W = Phi.source.values[n], Q.values[n]
        if n == 0:
            comps.append(tuple(al.obj))
            continue
        row = []
        for c in V.objects:
            row.append(W.mor(tuple(E.sq_labels[al.loose[A.loose(m)]] for m in c)))
        comps.append(tuple(row))
    return Modification(Phi, Psi, comps)


def modification_to_tight(G, F, Gd, A, E):
    """Read a tight transformation off the components at [0] and [1]."""
    V1 = G.source.source.values[1]
    W1 = G.source.target.values[1]
    loose = [E.square(W1.mor_labels[G.components[1][V1.obj((m,))]][0]) for m in A.loose_labels]
    return TightTransformationData(F, Gd, G.components[0], loose)


def enumerate_modifications(Phi, Psi, T):
    """Brute force: choose components at [0] and [1], extend by edges, keep
    those satisfying every modification law."""
    from .fsketchlab import Modification, check_modification
    P, Q = Phi.source, Phi.target
    V0, V1 = P.values[0], P.values[1]
    W0, W1 = Q.values[0], Q.values[1]
    c0 = [W0.hom(Phi.components[0].obj_map[x], Psi.components[0].obj_map[x]) for x in range(V0.n_obj)]
    c1 = [W1.hom(Phi.components[1].obj_map[x], Psi.components[1].obj_map[x]) for x in range(V1.n_obj)]
    edge_idx = []
    for n in range(2, T.n + 1):
        W = Q.values[n]
        edge_idx.append({model_edges(Q, T, n, f, "mor"): f for f in range(W.n_mor)})
    out = []
    for g0 in itertools.product(*c0):
        for g1 in itertools.product(*c1):
            comps = [tuple(g0), tuple(g1)]
            ok = True
            for n in range(2, T.n + 1):
                V = P.values[n]
                row = []
                for x in range(V.n_obj):
                    es = tuple(g1[e] for e in model_edges(P, T, n, x))
                    f = edge_idx[n - 2].get(es)
                    if f is None:
                        ok = False
                        break
                    row.append(f)
                if not ok:
                    break
                comps.append(tuple(row))
            if ok:
                G = Modification(Phi, Psi, comps)
                if not check_modification(G):
                    out.append(G)
    return out


Correspondence = namedtuple("Correspondence", ["F", "G", "PA", "PE", "Phi", "Psi", "T"])
"""Data fixing both sides of the translation: double functors ``F, G :
A -> E``, the chain models of A and E and the induced transformations."""


def correspondence_context(F, G, T):
    PA = double_to_pseudo_model(F.dom, T)
    PE = double_to_pseudo_model(F.cod, T)
    return Correspondence(F, G, PA, PE, double_functor_to_transformation(F, PA, PE, T),
                          double_functor_to_transformation(G, PA, PE, T), T)


def correspond_transformations(x, ctx):
    """Translate across the model/double-category correspondence.

    A pseudo F-transformation between the chain models goes to a double
    functor and back; a tight transformation ``F ⇒ G`` goes to a
    modification between the induced transformations and back."""
    from .fsketchlab import Modification, PseudoFTransformation
    A, E = ctx.F.dom, ctx.F.cod
    if isinstance(x, DoubleFunctorData):
        if x.dom is not A or x.cod is not E:
            raise ValueError("component mismatch: double functor has other endpoints")
        return double_functor_to_transformation(x, ctx.PA, ctx.PE, ctx.T)
    if isinstance(x, PseudoFTransformation):
        if x.source is not ctx.PA or x.target is not ctx.PE:
            raise ValueError("component mismatch: transformation between other models")
        return transformation_to_double_functor(x, A, E, ctx.T)
    if isinstance(x, TightTransformationData):
        if len(x.obj) != A.n_obj or len(x.loose) != A.n_loose:
            raise ValueError("component mismatch: tight transformation has the wrong shape")
        return tight_to_modification(x, ctx.Phi, ctx.Psi, ctx.T)
    if isinstance(x, Modification):
        if x.source is not ctx.Phi or x.target is not ctx.Psi:
            raise ValueError("component mismatch: modification between other transformations")
        return modification_to_tight(x, ctx.F, ctx.G, A, E)
    raise TypeError("nothing to translate for %s" % type(x).__name__)
