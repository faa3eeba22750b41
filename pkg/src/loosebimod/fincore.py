"""Finite categories, functors, natural transformations and finite sets.

Everything is index based: objects and morphisms of a category are the
integers ``0..n-1``, with labels kept on the side for printing and
serialization.  Composition is a fully materialized dict keyed by
``(g, f)`` meaning ``g after f``.
"""
import itertools
import os
from collections import namedtuple

Violation = namedtuple("Violation", ["law", "witness", "detail"])


class CapExceeded(ValueError):
    pass


class SearchSpaceTooLarge(CapExceeded):
    def __init__(self, bound, cap):
        super().__init__("search space too large: bound %d exceeds cap %d" % (bound, cap))
        self.bound = bound
        self.cap = cap


def max_cells(default=10_000_000):
    """Global enumeration cap, overridable with LOOSEBIMOD_MAX_CELLS."""
    raw = os.environ.get("LOOSEBIMOD_MAX_CELLS")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


MAX_OBJECTS = 10_000


class FinCategory:
    """Explicit finite category.

    ``morphisms`` is a list of ``(label, src, tgt)`` with integer endpoints,
    ``identity[a]`` the identity morphism of ``a`` and ``compose[(g, f)]``
    the composite ``g . f``.  Nothing is checked here; use
    :func:`validate_category`.
    """

    __slots__ = ("objects", "mor_labels", "src", "tgt", "identity", "compose",
                 "_obj_index", "_mor_index", "_hom", "_out", "_in", "_id_set")

    def __init__(self, objects, morphisms, identity, compose):
        self.objects = tuple(objects)
        morphisms = list(morphisms)
        self.mor_labels = tuple(m[0] for m in morphisms)
        self.src = tuple(m[1] for m in morphisms)
        self.tgt = tuple(m[2] for m in morphisms)
        self.identity = tuple(identity)
        self.compose = dict(compose)
        self._obj_index = None
        self._mor_index = None
        self._hom = None
        self._out = None
        self._in = None
        self._id_set = None

    @classmethod
    def build(cls, objects, morphisms, identity, compose):
        """Build from labels.

        ``morphisms`` is an iterable of ``(label, src_label, tgt_label)``;
        ``identity`` maps an object label to a morphism label (dict or
        callable); ``compose`` is a callable ``(g_label, f_label) -> label``
        evaluated on every composable pair.
        """
        objects = list(objects)
        if len(objects) > MAX_OBJECTS:
            raise CapExceeded("object count %d exceeds cap %d" % (len(objects), MAX_OBJECTS))
        oidx = {o: i for i, o in enumerate(objects)}
        mors = [(lab, oidx[s], oidx[t]) for lab, s, t in morphisms]
        midx = {m[0]: i for i, m in enumerate(mors)}
        if len(midx) != len(mors):
            raise ValueError("duplicate morphism labels")
        if len(oidx) != len(objects):
            raise ValueError("duplicate object labels")
        idf = identity.__getitem__ if isinstance(identity, dict) else identity
        ids = [midx[idf(o)] for o in objects]
        out = [[] for _ in objects]
        for i, (_, s, _) in enumerate(mors):
            out[s].append(i)
        comp = {}
        for f, (flab, _, ft) in enumerate(mors):
            for g in out[ft]:
                comp[(g, f)] = midx[compose(mors[g][0], flab)]
        C = cls(objects, mors, ids, comp)
        C._obj_index = oidx
        C._mor_index = midx
        return C

    # sizes and lookups
    @property
    def n_obj(self):
        return len(self.objects)

    @property
    def n_mor(self):
        return len(self.mor_labels)

    def obj(self, label):
        if self._obj_index is None:
            self._obj_index = {o: i for i, o in enumerate(self.objects)}
        return self._obj_index[label]

    def mor(self, label):
        if self._mor_index is None:
            self._mor_index = {m: i for i, m in enumerate(self.mor_labels)}
        return self._mor_index[label]

    def has_obj(self, label):
        try:
            self.obj(label)
            return True
        except KeyError:
            return False

    def has_mor(self, label):
        try:
            self.mor(label)
            return True
        except KeyError:
            return False

    def _index(self):
        n = self.n_obj
        out = [[] for _ in range(n)]
        inc = [[] for _ in range(n)]
        hom = {}
        for i in range(self.n_mor):
            s, t = self.src[i], self.tgt[i]
            if 0 <= s < n and 0 <= t < n:
                out[s].append(i)
                inc[t].append(i)
                hom.setdefault((s, t), []).append(i)
        self._out = [tuple(x) for x in out]
        self._in = [tuple(x) for x in inc]
        self._hom = {k: tuple(v) for k, v in hom.items()}

    def hom(self, a, b):
        if self._hom is None:
            self._index()
        return self._hom.get((a, b), ())

    def out_of(self, a):
        if self._out is None:
            self._index()
        return self._out[a]

    def into(self, b):
        if self._in is None:
            self._index()
        return self._in[b]

    def is_identity(self, f):
        if self._id_set is None:
            self._id_set = frozenset(self.identity)
        return f in self._id_set

    def comp(self, g, f):
        return self.compose[(g, f)]

    def comp_path(self, *fs):
        """Compose a path given in diagrammatic order (first map first)."""
        h = fs[0]
        for g in fs[1:]:
            h = self.compose[(g, h)]
        return h

    def inverse(self, f):
        """Two-sided inverse of ``f`` or None."""
        s, t = self.src[f], self.tgt[f]
        for g in self.hom(t, s):
            if self.compose[(g, f)] == self.identity[s] and self.compose[(f, g)] == self.identity[t]:
                return g
        return None

    def composable_pairs(self):
        for f in range(self.n_mor):
            for g in self.out_of(self.tgt[f]):
                yield g, f

    def non_identity(self):
        return [f for f in range(self.n_mor) if not self.is_identity(f)]

    def opposite(self):
        mors = [(lab, t, s) for lab, s, t in zip(self.mor_labels, self.src, self.tgt)]
        comp = {(f, g): h for (g, f), h in self.compose.items()}
        return FinCategory(self.objects, mors, self.identity, comp)

    def __repr__(self):
        return "FinCategory(%d objects, %d morphisms)" % (self.n_obj, self.n_mor)

    def same_as(self, other):
        return (self.objects == other.objects and self.mor_labels == other.mor_labels
                and self.src == other.src and self.tgt == other.tgt
                and self.identity == other.identity and self.compose == other.compose)


# a few standard categories

def terminal_category():
    return FinCategory(["*"], [("id", 0, 0)], [0], {(0, 0): 0})


def empty_category():
    return FinCategory([], [], [], {})


def discrete_category(labels):
    labels = list(labels)
    mors = [(("id", o), i, i) for i, o in enumerate(labels)]
    return FinCategory(labels, mors, range(len(labels)), {(i, i): i for i in range(len(labels))})


def walking_arrow():
    """0 -> 1 with morphisms id0, id1, a."""
    mors = [("id0", 0, 0), ("id1", 1, 1), ("a", 0, 1)]
    comp = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}
    return FinCategory([0, 1], mors, [0, 1], comp)


def monoid_category(table, unit=0, name="*"):
    """One-object category from a multiplication table ``table[g][f] = g*f``."""
    n = len(table)
    mors = [(i, 0, 0) for i in range(n)]
    comp = {(g, f): table[g][f] for g in range(n) for f in range(n)}
    return FinCategory([name], mors, [unit], comp)


def poset_category(n, leq):
    """Thin category on ``0..n-1`` for a reflexive transitive relation."""
    mors = [((i, j), i, j) for i in range(n) for j in range(n) if leq(i, j)]
    return FinCategory.build(range(n), mors, lambda i: (i, i),
                             lambda g, f: (f[0], g[1]))


def product_category(C, D):
    objs = [(a, b) for a in C.objects for b in D.objects]
    mors = []
    for f in range(C.n_mor):
        for g in range(D.n_mor):
            mors.append(((C.mor_labels[f], D.mor_labels[g]),
                         (C.objects[C.src[f]], D.objects[D.src[g]]),
                         (C.objects[C.tgt[f]], D.objects[D.tgt[g]])))
    return FinCategory.build(
        objs, mors,
        lambda o: (C.mor_labels[C.identity[C.obj(o[0])]], D.mor_labels[D.identity[D.obj(o[1])]]),
        lambda g, f: (C.mor_labels[C.compose[(C.mor(g[0]), C.mor(f[0]))]],
                      D.mor_labels[D.compose[(D.mor(g[1]), D.mor(f[1]))]]))


def coproduct_category(C, D, tags=(0, 1)):
    objs = [(tags[0], o) for o in C.objects] + [(tags[1], o) for o in D.objects]
    n = C.n_obj
    mors = [((tags[0], C.mor_labels[f]), C.src[f], C.tgt[f]) for f in range(C.n_mor)]
    mors += [((tags[1], D.mor_labels[f]), n + D.src[f], n + D.tgt[f]) for f in range(D.n_mor)]
    m = C.n_mor
    comp = dict(C.compose)
    comp.update({(g + m, f + m): h + m for (g, f), h in D.compose.items()})
    ids = list(C.identity) + [i + m for i in D.identity]
    return FinCategory(objs, mors, ids, comp)


def validate_category(C):
    """List every violated category law; never raises."""
    v = []
    n, m = C.n_obj, C.n_mor
    for f in range(m):
        if not (0 <= C.src[f] < n and 0 <= C.tgt[f] < n):
            v.append(Violation("index", ("morphism", f), "endpoint out of range"))
    if len(C.identity) != n:
        v.append(Violation("index", ("identity",), "identity table has wrong length"))
        return v
    for a in range(n):
        i = C.identity[a]
        if not 0 <= i < m:
            v.append(Violation("index", ("identity", a), "identity out of range"))
        elif C.src[i] != a or C.tgt[i] != a:
            v.append(Violation("identity-type", (a,), "identity has wrong endpoints"))
    if v:
        return v
    for (g, f), h in sorted(C.compose.items()):
        if not (0 <= g < m and 0 <= f < m and 0 <= h < m):
            v.append(Violation("index", (g, f), "composite out of range"))
            continue
        if C.tgt[f] != C.src[g]:
            v.append(Violation("not-composable", (g, f), "entry for a pair that is not composable"))
            continue
        if C.src[h] != C.src[f] or C.tgt[h] != C.tgt[g]:
            v.append(Violation("composite-type", (g, f), "composite has wrong endpoints"))
    if v:
        return v
    for g, f in C.composable_pairs():
        if (g, f) not in C.compose:
            v.append(Violation("missing-composite", (g, f), "composable pair has no entry"))
    if v:
        return v
    for f in range(m):
        if C.compose[(C.identity[C.tgt[f]], f)] != f:
            v.append(Violation("left-unit", (f,), "id . f != f"))
        if C.compose[(f, C.identity[C.src[f]])] != f:
            v.append(Violation("right-unit", (f,), "f . id != f"))
    if 300 <= m <= DENSE_ASSOC_LIMIT:
        return v + _associativity_dense(C)
    comp = C.compose
    for f in range(m):
        for g in C.out_of(C.tgt[f]):
            gf = comp[(g, f)]
            for h in C.out_of(C.tgt[g]):
                if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                    v.append(Violation("associativity", (h, g, f), "h(gf) != (hg)f"))
    return v


DENSE_ASSOC_LIMIT = 4000


def _associativity_dense(C, chunk=2_000_000):
    # same triples and order as the plain loop, checked with numpy
    import numpy as np
    m = C.n_mor
    T = np.full((m, m), -1, dtype=np.int32)
    for (g, f), h in C.compose.items():
        T[g, f] = h
    out = [np.array(C.out_of(a), dtype=np.int64) for a in range(C.n_obj)]
    cnt = np.array([len(o) for o in out], dtype=np.int64)
    flat = np.concatenate(out) if out else np.zeros(0, dtype=np.int64)
    start = np.concatenate([[0], np.cumsum(cnt)[:-1]]) if len(cnt) else cnt
    pf, pg = [], []
    for f in range(m):
        o = out[C.tgt[f]]
        pf.append(np.full(len(o), f, dtype=np.int64))
        pg.append(o)
    pf = np.concatenate(pf)
    pg = np.concatenate(pg)
    tg = np.array(C.tgt, dtype=np.int64)[pg]
    reps = cnt[tg]
    v = []
    ends = np.cumsum(reps)
    lo = 0
    while lo < len(pf):
        hi = int(np.searchsorted(ends, ends[lo] - reps[lo] + chunk, side="right"))
        hi = max(hi, lo + 1)
        r = reps[lo:hi]
        ff = np.repeat(pf[lo:hi], r)
        gg = np.repeat(pg[lo:hi], r)
        base = np.repeat(start[tg[lo:hi]], r)
        offs = np.arange(int(r.sum())) - np.repeat(np.cumsum(r) - r, r)
        hh = flat[base + offs]
        bad = T[hh, T[gg, ff]] != T[T[hh, gg], ff]
        for i in np.flatnonzero(bad):
            v.append(Violation("associativity", (int(hh[i]), int(gg[i]), int(ff[i])), "h(gf) != (hg)f"))
        lo = hi
    return v


class FinFunctor:
    __slots__ = ("dom", "cod", "obj_map", "mor_map")

    def __init__(self, dom, cod, obj_map, mor_map):
        self.dom = dom
        self.cod = cod
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)

    @classmethod
    def identity(cls, C):
        return cls(C, C, range(C.n_obj), range(C.n_mor))

    @classmethod
    def constant(cls, C, D, d):
        return cls(C, D, [d] * C.n_obj, [D.identity[d]] * C.n_mor)

    def then(self, other):
        """Composite ``other . self``."""
        return FinFunctor(self.dom, other.cod,
                          [other.obj_map[x] for x in self.obj_map],
                          [other.mor_map[f] for f in self.mor_map])

    def __eq__(self, other):
        return (isinstance(other, FinFunctor) and self.obj_map == other.obj_map
                and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash((self.obj_map, self.mor_map))

    def __repr__(self):
        return "FinFunctor(%r -> %r)" % (self.dom, self.cod)


def validate_functor(F):
    v = []
    C, D = F.dom, F.cod
    if len(F.obj_map) != C.n_obj or len(F.mor_map) != C.n_mor:
        return [Violation("index", (), "map tables have wrong length")]
    for x, y in enumerate(F.obj_map):
        if not 0 <= y < D.n_obj:
            v.append(Violation("index", ("object", x), "image out of range"))
    for f, g in enumerate(F.mor_map):
        if not 0 <= g < D.n_mor:
            v.append(Violation("index", ("morphism", f), "image out of range"))
    if v:
        return v
    for f, g in enumerate(F.mor_map):
        if D.src[g] != F.obj_map[C.src[f]] or D.tgt[g] != F.obj_map[C.tgt[f]]:
            v.append(Violation("endpoints", (f,), "F(f) has the wrong source or target"))
    for a in range(C.n_obj):
        if F.mor_map[C.identity[a]] != D.identity[F.obj_map[a]]:
            v.append(Violation("identity", (a,), "F(id) is not an identity"))
    if v:
        return v
    for (g, f), h in C.compose.items():
        if D.compose.get((F.mor_map[g], F.mor_map[f])) != F.mor_map[h]:
            v.append(Violation("composition", (g, f), "F(g f) != F(g) F(f)"))
    return v


def is_isomorphism(F):
    return (len(set(F.obj_map)) == F.cod.n_obj == F.dom.n_obj
            and len(set(F.mor_map)) == F.cod.n_mor == F.dom.n_mor)


class FinNatTrans:
    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = tuple(components)

    @classmethod
    def identity(cls, F):
        return cls(F, F, [F.cod.identity[F.obj_map[x]] for x in range(F.dom.n_obj)])


def validate_nat_trans(alpha):
    F, G = alpha.source, alpha.target
    C, D = F.dom, F.cod
    v = []
    for x in range(C.n_obj):
        c = alpha.components[x]
        if D.src[c] != F.obj_map[x] or D.tgt[c] != G.obj_map[x]:
            v.append(Violation("component-type", (x,), "component has wrong endpoints"))
    if v:
        return v
    for f in range(C.n_mor):
        s, t = C.src[f], C.tgt[f]
        if D.compose[(alpha.components[t], F.mor_map[f])] != D.compose[(G.mor_map[f], alpha.components[s])]:
            v.append(Violation("naturality", (f,), "naturality square fails"))
    return v


# finite sets

class FinSetMap:
    """A function between finite sets given as tuples of elements."""
    __slots__ = ("dom", "cod", "images", "_idx")

    def __init__(self, dom, cod, images):
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.images = tuple(images)
        self._idx = None
        if len(self.images) != len(self.dom):
            raise ValueError("map is not total")

    @classmethod
    def from_function(cls, dom, cod, fn):
        dom = tuple(dom)
        return cls(dom, cod, [fn(x) for x in dom])

    def __call__(self, x):
        if self._idx is None:
            self._idx = {e: i for i, e in enumerate(self.dom)}
        return self.images[self._idx[x]]

    def valid(self):
        cod = set(self.cod)
        return all(y in cod for y in self.images)

    def then(self, other):
        return FinSetMap(self.dom, other.cod, [other(y) for y in self.images])


def pullback_finset(f, g):
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``.

    The apex is the list of pairs ``(x, y)`` with ``f(x) == g(y)`` in
    lexicographic order of positions.
    """
    if f.cod != g.cod:
        raise ValueError("codomain mismatch")
    by_value = {}
    for y, gy in zip(g.dom, g.images):
        by_value.setdefault(gy, []).append(y)
    apex = [(x, y) for x, fx in zip(f.dom, f.images) for y in by_value.get(fx, ())]
    p1 = FinSetMap(apex, f.dom, [p[0] for p in apex])
    p2 = FinSetMap(apex, g.dom, [p[1] for p in apex])
    return apex, p1, p2


class SetFunctor:
    """A functor from a finite category into finite sets.

    ``sets[a]`` is a tuple of element labels and ``maps[f]`` a tuple of
    indices: ``maps[f][i]`` is the position of the image of element ``i``.
    """
    __slots__ = ("base", "sets", "maps", "_pos")

    def __init__(self, base, sets, maps):
        self.base = base
        self.sets = tuple(tuple(s) for s in sets)
        self.maps = tuple(tuple(m) for m in maps)
        self._pos = None

    @classmethod
    def from_function(cls, base, set_fn, map_fn):
        """``set_fn(a)`` lists elements, ``map_fn(f, x)`` gives the image label."""
        sets = [tuple(set_fn(a)) for a in range(base.n_obj)]
        pos = [{x: i for i, x in enumerate(s)} for s in sets]
        maps = []
        for f in range(base.n_mor):
            t = base.tgt[f]
            maps.append(tuple(pos[t][map_fn(f, x)] for x in sets[base.src[f]]))
        F = cls(base, sets, maps)
        F._pos = pos
        return F

    def pos(self, a, x):
        if self._pos is None:
            self._pos = [{x: i for i, x in enumerate(s)} for s in self.sets]
        return self._pos[a][x]

    def size(self, a):
        return len(self.sets[a])

    def sizes(self):
        return tuple(len(s) for s in self.sets)

    def apply(self, f, x):
        """Image label of element label ``x`` under ``f``."""
        t = self.base.tgt[f]
        return self.sets[t][self.maps[f][self.pos(self.base.src[f], x)]]

    def restrict_along(self, F):
        """Precomposite with a functor ``F`` into ``base``."""
        return SetFunctor(F.dom, [self.sets[F.obj_map[a]] for a in range(F.dom.n_obj)],
                          [self.maps[F.mor_map[f]] for f in range(F.dom.n_mor)])

    def same_as(self, other):
        return self.sets == other.sets and self.maps == other.maps


def constant_set_functor(base, elements=("*",)):
    elements = tuple(elements)
    return SetFunctor(base, [elements] * base.n_obj, [tuple(range(len(elements)))] * base.n_mor)


def validate_set_functor(P):
    C = P.base
    v = []
    if len(P.sets) != C.n_obj or len(P.maps) != C.n_mor:
        return [Violation("index", (), "tables have wrong length")]
    for f in range(C.n_mor):
        m = P.maps[f]
        if len(m) != len(P.sets[C.src[f]]) or any(not 0 <= y < len(P.sets[C.tgt[f]]) for y in m):
            v.append(Violation("map", (f,), "map is not a function between the right sets"))
    if v:
        return v
    for a in range(C.n_obj):
        if P.maps[C.identity[a]] != tuple(range(len(P.sets[a]))):
            v.append(Violation("identity", (a,), "identity does not act as identity"))
    for (g, f), h in sorted(C.compose.items()):
        mg, mf = P.maps[g], P.maps[f]
        if tuple(mg[y] for y in mf) != P.maps[h]:
            v.append(Violation("composition", (g, f), "P(g f) != P(g) P(f)"))
    return v


# limits

def compatible_families(sizes, edges, limit=None):
    """All families ``x`` with ``x[j] < sizes[j]`` and ``m[x[i]] == x[j]``
    for every edge ``(i, j, m)``.  Families are returned sorted.
    """
    n = len(sizes)
    incoming = [[] for _ in range(n)]
    outgoing = [[] for _ in range(n)]
    for i, j, m in edges:
        outgoing[i].append((j, m))
        incoming[j].append((i, m))
    order, placed = [], set()
    while len(order) < n:
        best, best_key = None, None
        for j in range(n):
            if j in placed:
                continue
            det = any(i in placed for i, _ in incoming[j])
            links = sum(1 for k, _ in outgoing[j] if k in placed) + sum(1 for i, _ in incoming[j] if i in placed)
            key = (det, links, -sizes[j], -j)
            if best_key is None or key > best_key:
                best, best_key = j, key
        order.append(best)
        placed.add(best)
    rank = {j: r for r, j in enumerate(order)}
    plan = []
    for r, j in enumerate(order):
        determiner = None
        checks = []
        for i, m in incoming[j]:
            if rank[i] < r:
                if determiner is None:
                    determiner = (i, m)
                else:
                    checks.append(("in", i, m))
        for k, m in outgoing[j]:
            if rank[k] < r:
                checks.append(("out", k, m))
            elif k == j:
                checks.append(("self", j, m))
        pre = None
        if determiner is None:
            outs = [(k, m) for kind, k, m in checks if kind == "out"]
            if outs:
                k, m = outs[0]
                pre = (k, m, _preimages(m, sizes[j]))
        plan.append((j, determiner, checks, pre))
    if any(s == 0 for s in sizes):
        return []
    results = []
    x = [None] * n

    def candidates(step):
        j, det, checks, pre = plan[step]
        if det is not None:
            i, m = det
            cand = (m[x[i]],)
        elif pre is not None:
            k, m, idx = pre
            cand = idx.get(x[k], ())
        else:
            cand = range(sizes[j])
        for c in cand:
            ok = True
            for kind, k, m in checks:
                if kind == "in":
                    if m[x[k]] != c:
                        ok = False
                        break
                elif kind == "out":
                    if m[c] != x[k]:
                        ok = False
                        break
                else:
                    if m[c] != c:
                        ok = False
                        break
            if ok:
                yield c

    def rec(step):
        if step == n:
            results.append(tuple(x))
            if limit is not None and len(results) > limit:
                raise CapExceeded("limit has more than %d elements" % limit)
            return
        j = plan[step][0]
        for c in candidates(step):
            x[j] = c
            rec(step + 1)
        x[j] = None

    if n == 0:
        return [()]
    rec(0)
    results.sort()
    return results


def _preimages(m, size):
    idx = {}
    for a in range(size):
        idx.setdefault(m[a], []).append(a)
    return idx


def finset_limit(shape, sets, maps):
    """Limit of a diagram ``shape -> FinSet``.

    ``sets[j]`` is the size (or a sequence) at shape object ``j`` and
    ``maps[u]`` the index map of shape morphism ``u``.  Returns the sorted
    list of compatible families of indices.
    """
    sizes = [s if isinstance(s, int) else len(s) for s in sets]
    edges = [(shape.src[u], shape.tgt[u], maps[u]) for u in range(shape.n_mor)
             if not shape.is_identity(u)]
    return compatible_families(sizes, edges)


def limit_of_categories(shape, values, functors, cap=None):
    """Limit of a strict diagram of finite categories.

    ``values[j]`` is a FinCategory and ``functors[u]`` a FinFunctor for each
    shape morphism.  Returns ``(L, projections)``; objects and morphisms of
    ``L`` are compatible families, labelled by index tuples.
    """
    nonid = [u for u in range(shape.n_mor) if not shape.is_identity(u)]
    osz = [V.n_obj for V in values]
    msz = [V.n_mor for V in values]
    objs = compatible_families(osz, [(shape.src[u], shape.tgt[u], functors[u].obj_map) for u in nonid],
                               limit=cap)
    mors = compatible_families(msz, [(shape.src[u], shape.tgt[u], functors[u].mor_map) for u in nonid],
                               limit=cap)
    oidx = {o: i for i, o in enumerate(objs)}
    midx = {m: i for i, m in enumerate(mors)}
    J = range(shape.n_obj)
    mlist = []
    for fam in mors:
        s = tuple(values[j].src[fam[j]] for j in J)
        t = tuple(values[j].tgt[fam[j]] for j in J)
        mlist.append((fam, oidx[s], oidx[t]))
    ids = [midx[tuple(values[j].identity[o[j]] for j in J)] for o in objs]
    out = [[] for _ in objs]
    for i, (_, s, _) in enumerate(mlist):
        out[s].append(i)
    comp = {}
    for f, (ff, _, t) in enumerate(mlist):
        for g in out[t]:
            gg = mlist[g][0]
            comp[(g, f)] = midx[tuple(values[j].compose[(gg[j], ff[j])] for j in J)]
    L = FinCategory(objs, mlist, ids, comp)
    projections = [FinFunctor(L, values[j], [o[j] for o in objs], [m[j] for m in mors]) for j in J]
    return L, projections


def comparison_into_limit(apex_value, legs, L):
    """The functor from ``apex_value`` into a limit built by
    :func:`limit_of_categories`, given leg functors out of the apex.
    Returns None when some family is missing (legs not a cone)."""
    J = range(len(legs))
    omap, mmap = [], []
    for x in range(apex_value.n_obj):
        fam = tuple(legs[j].obj_map[x] for j in J)
        try:
            omap.append(L.obj(fam))
        except KeyError:
            return None
    for f in range(apex_value.n_mor):
        fam = tuple(legs[j].mor_map[f] for j in J)
        try:
            mmap.append(L.mor(fam))
        except KeyError:
            return None
    return FinFunctor(apex_value, L, omap, mmap)


# functor enumeration

def generating_morphisms(C):
    """A generating set of non-identity morphisms with derivations.

    Returns ``(gens, derivations)`` where each derivation ``(h, g, f)`` says
    ``h = g . f`` with ``g, f`` available earlier.  Together they reach every
    morphism.
    """
    nonid = C.non_identity()
    decomposable = set()
    for (g, f), h in C.compose.items():
        if not C.is_identity(g) and not C.is_identity(f):
            decomposable.add(h)
    order = [f for f in nonid if f not in decomposable] + [f for f in nonid if f in decomposable]
    known = set(C.identity)
    gens, derivs = [], []

    def close():
        changed = True
        while changed:
            changed = False
            for (g, f), h in C.compose.items():
                if h not in known and g in known and f in known:
                    known.add(h)
                    derivs.append((h, g, f))
                    changed = True

    for f in order:
        if f not in known:
            gens.append(f)
            known.add(f)
            close()
    return gens, derivs


def enumerate_functors(C, D, cap=None, obj_allowed=None, mor_allowed=None, injective=False):
    """All functors ``C -> D``, in a deterministic order.

    ``obj_allowed(x)`` / ``mor_allowed(f)`` optionally restrict the images
    (return an iterable of allowed ids).  Raises SearchSpaceTooLarge when
    the product of choice spaces exceeds ``cap``.
    """
    if cap is None:
        cap = max_cells()
    gens, derivs = generating_morphisms(C)
    ocand = [tuple(obj_allowed(x)) if obj_allowed else tuple(range(D.n_obj)) for x in range(C.n_obj)]
    if D._hom is None:
        D._index()
    maxhom = max((len(v) for v in D._hom.values()), default=0)
    bound = 1
    for c in ocand:
        bound *= max(len(c), 1)
    for f in gens:
        if mor_allowed:
            bound *= max(len(tuple(mor_allowed(f))), 1)
        else:
            bound *= max(maxhom, 1)
    if bound > cap:
        raise SearchSpaceTooLarge(bound, cap)
    mcand = {f: (frozenset(mor_allowed(f)) if mor_allowed else None) for f in gens}
    # constraints touching each morphism
    touching = [[] for _ in range(C.n_mor)]
    for (g, f), h in C.compose.items():
        touching[g].append((g, f, h))
        touching[f].append((g, f, h))
        if h != g and h != f:
            touching[h].append((g, f, h))
    results = []
    omap = [None] * C.n_obj
    mmap = [None] * C.n_mor

    def assign(f, y, trail):
        """Set mmap[f] = y and propagate; return False on conflict."""
        stack = [(f, y)]
        while stack:
            f, y = stack.pop()
            cur = mmap[f]
            if cur is not None:
                if cur != y:
                    return False
                continue
            if D.src[y] != omap[C.src[f]] or D.tgt[y] != omap[C.tgt[f]]:
                return False
            mmap[f] = y
            trail.append(f)
            for g, ff, h in touching[f]:
                a, b, c = mmap[g], mmap[ff], mmap[h]
                if a is not None and b is not None:
                    val = D.compose.get((a, b))
                    if val is None:
                        return False
                    if c is None:
                        stack.append((h, val))
                    elif c != val:
                        return False
        return True

    def undo(trail):
        for f in trail:
            mmap[f] = None

    def rec_obj(i):
        if i == C.n_obj:
            trail = []
            ok = all(assign(C.identity[a], D.identity[omap[a]], trail) for a in range(C.n_obj))
            if ok:
                rec_mor(0)
            undo(trail)
            return
        used = set(omap[:i]) if injective else ()
        for y in ocand[i]:
            if injective and y in used:
                continue
            omap[i] = y
            rec_obj(i + 1)
        omap[i] = None

    def rec_mor(k):
        if k == len(gens):
            if any(m is None for m in mmap):
                return
            if injective and len(set(mmap)) != len(mmap):
                return
            results.append(FinFunctor(C, D, list(omap), list(mmap)))
            return
        f = gens[k]
        if mmap[f] is not None:
            rec_mor(k + 1)
            return
        allowed = mcand[f]
        for y in D.hom(omap[C.src[f]], omap[C.tgt[f]]):
            if allowed is not None and y not in allowed:
                continue
            trail = []
            if assign(f, y, trail):
                rec_mor(k + 1)
            undo(trail)

    rec_obj(0)
    return results


def find_isomorphism(C, D, cap=None):
    """Some isomorphism of categories ``C -> D`` or None."""
    if C.n_obj != D.n_obj or C.n_mor != D.n_mor:
        return None
    for F in enumerate_functors(C, D, cap=cap, injective=True):
        if is_isomorphism(F):
            return F
    return None


# elements and opfibrations

def category_of_elements(P):
    """``(El, pi)`` for a set-valued functor ``P``.

    Objects are ``(c, x)`` and morphisms ``(f, x)`` from ``(c, x)`` to
    ``(c', P(f)(x))``, labelled with the base labels.
    """
    C = P.base
    objs, obj_id = [], {}
    for c in range(C.n_obj):
        for i, x in enumerate(P.sets[c]):
            obj_id[(c, i)] = len(objs)
            objs.append((C.objects[c], x))
    mors, mor_id, pi_m = [], {}, []
    for f in range(C.n_mor):
        s, t = C.src[f], C.tgt[f]
        for i, x in enumerate(P.sets[s]):
            mor_id[(f, i)] = len(mors)
            mors.append(((C.mor_labels[f], x), obj_id[(s, i)], obj_id[(t, P.maps[f][i])]))
            pi_m.append(f)
    ids = [mor_id[(C.identity[c], i)] for c in range(C.n_obj) for i in range(len(P.sets[c]))]
    comp = {}
    for (g, f), h in C.compose.items():
        mf = P.maps[f]
        for i in range(len(P.sets[C.src[f]])):
            comp[(mor_id[(g, mf[i])], mor_id[(f, i)])] = mor_id[(h, i)]
    El = FinCategory(objs, mors, ids, comp)
    pi_o = [c for c in range(C.n_obj) for _ in P.sets[c]]
    return El, FinFunctor(El, C, pi_o, pi_m)


def is_discrete_opfibration(p):
    """``(True, None)`` or ``(False, (e, u, lifts))`` for the first pair
    ``(e, u)`` whose lifts with domain ``e`` are not unique."""
    E, B = p.dom, p.cod
    for e in range(E.n_obj):
        by_image = {}
        for f in E.out_of(e):
            by_image.setdefault(p.mor_map[f], []).append(f)
        for u in B.out_of(p.obj_map[e]):
            lifts = by_image.get(u, [])
            if len(lifts) != 1:
                return False, (e, u, tuple(lifts))
    return True, None


def check_equivalence(F):
    """Fully faithful and essentially surjective test.

    Returns ``(ok, report)``; the report lists the first failures found.
    """
    C, D = F.dom, F.cod
    report = []
    for a in range(C.n_obj):
        for b in range(C.n_obj):
            src = C.hom(a, b)
            imgs = [F.mor_map[f] for f in src]
            tgt = D.hom(F.obj_map[a], F.obj_map[b])
            if len(set(imgs)) != len(imgs):
                report.append(Violation("faithful", (a, b), "two morphisms share an image"))
            elif len(imgs) != len(tgt):
                report.append(Violation("full", (a, b), "hom-set map is not surjective"))
    image = set(F.obj_map)
    for d in range(D.n_obj):
        if d in image:
            continue
        found = False
        for c in image:
            for f in D.hom(c, d):
                if D.inverse(f) is not None:
                    found = True
                    break
            if found:
                break
        if not found:
            report.append(Violation("essentially-surjective", (d,), "object not isomorphic to an image"))
    return not report, report


def full_subcategory(C, keep):
    """Full subcategory on the objects satisfying ``keep`` (a predicate on
    object ids).  Returns ``(S, inclusion)``."""
    objs = [a for a in range(C.n_obj) if keep(a)]
    onew = {a: i for i, a in enumerate(objs)}
    mors = [f for f in range(C.n_mor) if C.src[f] in onew and C.tgt[f] in onew]
    mnew = {f: i for i, f in enumerate(mors)}
    S = FinCategory([C.objects[a] for a in objs],
                    [(C.mor_labels[f], onew[C.src[f]], onew[C.tgt[f]]) for f in mors],
                    [mnew[C.identity[a]] for a in objs],
                    {(mnew[g], mnew[f]): mnew[h] for (g, f), h in C.compose.items()
                     if g in mnew and f in mnew})
    return S, FinFunctor(S, C, objs, mors)


def relabel_check(F):
    """True when ``F`` is an isomorphism of categories that is also a
    functor (convenience for round-trip tests)."""
    return not validate_functor(F) and is_isomorphism(F)
