"""The simplex category: monotone maps, the active/inert factorization,
truncations of its opposite and the slice over [1]."""
import itertools
from dataclasses import dataclass
from math import comb

from .fincore import CapExceeded, FinCategory, FinFunctor, SetFunctor

MAX_TRUNCATION = 4


@dataclass(frozen=True)
class MonotoneMap:
    """A monotone map ``[dom] -> [cod]`` stored by its full value list."""
    dom: int
    cod: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.dom < 0 or self.cod < 0:
            raise ValueError("negative simplex")
        if len(self.values) != self.dom + 1:
            raise ValueError("value list has the wrong length")
        if any(not 0 <= v <= self.cod for v in self.values):
            raise ValueError("value out of range")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values are not monotone")

    @property
    def label(self):
        return (self.dom, self.cod, self.values)

    @classmethod
    def from_label(cls, label):
        return cls(label[0], label[1], label[2])

    def __call__(self, i):
        return self.values[i]

    def to_json(self):
        return {"dom": self.dom, "cod": self.cod, "values": list(self.values)}

    @classmethod
    def from_json(cls, d):
        return cls(d["dom"], d["cod"], d["values"])


def identity_map(n):
    return MonotoneMap(n, n, range(n + 1))


def face(n, i):
    """d_i : [n-1] -> [n], skipping i."""
    return MonotoneMap(n - 1, n, [j if j < i else j + 1 for j in range(n)])


def degeneracy(n, i):
    """s_i : [n+1] -> [n], repeating i."""
    return MonotoneMap(n + 1, n, [j if j <= i else j - 1 for j in range(n + 2)])


def active_map(n):
    """a_n : [1] -> [n], the endpoint inclusion."""
    return MonotoneMap(1, n, (0, n))


def inert_inclusion(k, n, start):
    """The inert map [k] -> [n] with image {start, ..., start + k}."""
    return MonotoneMap(k, n, range(start, start + k + 1))


def compose_monotone(g, f):
    """``g . f`` (apply f first)."""
    if f.cod != g.dom:
        raise ValueError("boundary mismatch: cod(f)=%d, dom(g)=%d" % (f.cod, g.dom))
    return MonotoneMap(f.dom, g.cod, [g.values[v] for v in f.values])


def _compose_labels(g, f):
    """``compose_monotone`` on labels of maps already known to be valid."""
    if f[1] != g[0]:
        raise ValueError("boundary mismatch: cod(f)=%d, dom(g)=%d" % (f[1], g[0]))
    gv = g[2]
    return (f[0], g[1], tuple(gv[v] for v in f[2]))


def is_inert(f):
    v = f.values
    return all(b == a + 1 for a, b in zip(v, v[1:]))


def is_active(f):
    return f.values[0] == 0 and f.values[-1] == f.cod


def active_inert_factorize(f):
    """``(a, i)`` with ``f = i . a``, ``a`` active and ``i`` inert."""
    lo, hi = f.values[0], f.values[-1]
    a = MonotoneMap(f.dom, hi - lo, [v - lo for v in f.values])
    i = MonotoneMap(hi - lo, f.cod, range(lo, hi + 1))
    return a, i


def monotone_maps(k, l):
    """All monotone maps [k] -> [l], in lexicographic order of values."""
    return [MonotoneMap(k, l, c) for c in itertools.combinations_with_replacement(range(l + 1), k + 1)]


def count_monotone(k, l):
    return comb(k + l + 1, k + 1)


def classify(f):
    if is_inert(f):
        return "inert"
    if is_active(f):
        return "active"
    return "mixed"


class TruncatedDelta:
    """The category Δ≤n^op together with its inert/active marking.

    Objects are the integers ``0..n``; the morphism labelled
    ``(k, l, values)`` is the opposite of the monotone map ``[k] -> [l]``
    and so goes from ``l`` to ``k``.
    """

    def __init__(self, n, cap=MAX_TRUNCATION):
        if n < 0:
            raise ValueError("negative truncation")
        if n > cap:
            raise CapExceeded("truncation %d exceeds cap %d" % (n, cap))
        self.n = n
        maps = [f for l in range(n + 1) for k in range(n + 1) for f in monotone_maps(k, l)]
        self.maps = tuple(maps)
        morphisms = [(f.label, f.cod, f.dom) for f in maps]
        # an op composite g_op . f_op is the Δ composite f . g
        self.category = FinCategory.build(
            range(n + 1), morphisms, lambda k: identity_map(k).label,
            lambda g, f: _compose_labels(f, g))
        self.tags = tuple("inert" if is_inert(f) else ("active" if is_active(f) else "mixed") for f in maps)
        self.inert = frozenset(i for i, f in enumerate(maps) if is_inert(f))
        self.active = frozenset(i for i, f in enumerate(maps) if is_active(f))

    def delta_map(self, m):
        """The monotone map underlying morphism id ``m``."""
        return self.maps[m]

    def mor_of(self, f):
        return self.category.mor(f.label)

    def classify(self, m):
        return self.tags[m]

    def factor(self, m):
        """Ids ``(alpha, iota)`` of the active and inert parts of ``m``.

        In Δ^op the morphism ``m`` equals ``alpha . iota`` (inert first)."""
        a, i = active_inert_factorize(self.maps[m])
        return self.mor_of(a), self.mor_of(i)


def truncated_delta_op(n, cap=MAX_TRUNCATION):
    return TruncatedDelta(n, cap)


def zero_one_sequences(k):
    """Non-decreasing 0/1 sequences of length k+1."""
    return [tuple([0] * (k + 1 - j) + [1] * j) for j in range(k + 2)]


def restrict_sequence(s, g):
    """``s . g`` for a sequence ``s`` and a monotone map ``g`` into it."""
    return tuple(s[v] for v in g.values)


class SliceDelta:
    """The category (Δ≤n ↓ [1])^op with created inerts and its projection.

    Objects are 0/1 sequences.  The morphism labelled ``(s, g)`` with
    ``g : [k] -> [len(s) - 1]`` goes from ``s`` to ``s . g``.
    """

    def __init__(self, n, cap=MAX_TRUNCATION):
        self.base = truncated_delta_op(n, cap)
        self.n = n
        objects = [s for k in range(n + 1) for s in zero_one_sequences(k)]
        morphisms = []
        for s in objects:
            l = len(s) - 1
            for k in range(n + 1):
                for g in monotone_maps(k, l):
                    morphisms.append(((s, g.label), s, restrict_sequence(s, g)))
        # (t, h) . (s, g) with t = s.g is (s, g.h)
        self.category = FinCategory.build(
            objects, morphisms, lambda s: (s, identity_map(len(s) - 1).label),
            lambda g, f: (f[0], _compose_labels(f[1], g[1])))
        C, B = self.category, self.base.category
        self.projection = FinFunctor(C, B, [len(s) - 1 for s in C.objects],
                                     [B.mor(lab[1]) for lab in C.mor_labels])
        self.inert = frozenset(m for m in range(C.n_mor) if self.projection.mor_map[m] in self.base.inert)
        self.active = frozenset(m for m in range(C.n_mor) if self.projection.mor_map[m] in self.base.active)

    def factor(self, m):
        """Ids ``(alpha, iota)`` with ``m = alpha . iota`` lifted from the base."""
        s, g = self.category.mor_labels[m]
        a, i = active_inert_factorize(MonotoneMap.from_label(g))
        iota = self.category.mor((s, i.label))
        alpha = self.category.mor((restrict_sequence(s, i), a.label))
        return alpha, iota

    def elementary(self):
        """Object ids lying over [0] and [1]."""
        return [i for i, s in enumerate(self.category.objects) if len(s) <= 2]


def slice_delta_over_1(n, cap=MAX_TRUNCATION):
    return SliceDelta(n, cap)


def corepresentable_at_1(trunc):
    """The set-valued functor Δ(-, [1]) on Δ≤n^op, elements as 0/1 sequences."""
    D = trunc.category

    def on_map(m, s):
        return restrict_sequence(s, trunc.maps[m])

    return SetFunctor.from_function(D, lambda k: zero_one_sequences(D.objects[k]), on_map)


def corepresentable(trunc, target):
    """Δ(-, [target]) as a set-valued functor on Δ≤n^op; elements are value tuples."""
    D = trunc.category

    def elements(k):
        return [f.values for f in monotone_maps(D.objects[k], target)]

    def on_map(m, vals):
        return tuple(vals[v] for v in trunc.maps[m].values)

    return SetFunctor.from_function(D, elements, on_map)
