"""Deterministic JSON for the library's finite structures.

Labels may be nested tuples, strings, numbers or a few registered named
tuples; they are written with small tags so that ``loads(dumps(x))``
gives back equal labels.  Output is sorted, compact and UTF-8 (unicode
names are kept as is).
"""
import json

from .doublecat import DoubleBarrel, FinDoubleCategory, WL_ELL, WL_U0, WL_U1
from .fincore import FinCategory, FinFunctor, FinSetMap, SetFunctor, Violation
from .fsketchlab import FSketch, PseudoFunctorData
from .looseuniv import LooseCocone, Relation, RelSquare, Span, SpanSquare
from .sketchlab import Barrel, LimitSketch, MarkedCone

FORMAT_VERSION = 1

_NAMED = {t.__name__: t for t in (Span, SpanSquare, Relation, RelSquare, Violation)}


class FormatError(ValueError):
    """Input that does not match a serialization format; ``path`` says where."""

    def __init__(self, msg, path=""):
        super().__init__("%s%s" % (msg, " at %s" % path if path else ""))
        self.path = path


# labels

def enc(x):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    name = type(x).__name__
    if isinstance(x, tuple) and name in _NAMED and type(x) is _NAMED[name]:
        return {"nt": name, "v": [enc(v) for v in x]}
    if isinstance(x, tuple):
        return {"t": [enc(v) for v in x]}
    if isinstance(x, list):
        return {"l": [enc(v) for v in x]}
    if isinstance(x, frozenset):
        items = [enc(v) for v in x]
        return {"fs": sorted(items, key=lambda v: json.dumps(v, sort_keys=True, ensure_ascii=False))}
    raise TypeError("cannot serialize label of type %s" % name)


def dec(x, path="label"):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict) and len(x) == 1:
        (k, v), = x.items()
        if k == "t":
            return tuple(dec(y, path) for y in v)
        if k == "l":
            return [dec(y, path) for y in v]
        if k == "fs":
            return frozenset(dec(y, path) for y in v)
    if isinstance(x, dict) and set(x) == {"nt", "v"}:
        if x["nt"] not in _NAMED:
            raise FormatError("unknown named label %r" % x["nt"], path)
        return _NAMED[x["nt"]](*(dec(y, path) for y in x["v"]))
    raise FormatError("malformed label %r" % (x,), path)


def _req(d, key, path):
    if not isinstance(d, dict) or key not in d:
        raise FormatError("missing field %r" % key, path)
    return d[key]


# fincore

def category_to_json(C):
    return {
        "objects": [enc(o) for o in C.objects],
        "morphisms": [{"id": enc(C.mor_labels[f]), "src": C.src[f], "tgt": C.tgt[f]} for f in range(C.n_mor)],
        "identity": {str(a): C.identity[a] for a in range(C.n_obj)},
        "compose": sorted([g, f, h] for (g, f), h in C.compose.items()),
    }


def category_from_json(d, path="category"):
    objs = [dec(o, path + ".objects") for o in _req(d, "objects", path)]
    mors = []
    for k, m in enumerate(_req(d, "morphisms", path)):
        p = "%s.morphisms[%d]" % (path, k)
        mors.append((dec(_req(m, "id", p), p), int(_req(m, "src", p)), int(_req(m, "tgt", p))))
    ident = _req(d, "identity", path)
    try:
        identity = [int(ident[str(a)]) for a in range(len(objs))]
    except KeyError as e:
        raise FormatError("identity missing for object %s" % e, path + ".identity")
    comp = {}
    for k, t in enumerate(_req(d, "compose", path)):
        if len(t) != 3:
            raise FormatError("compose entry needs three ids", "%s.compose[%d]" % (path, k))
        comp[(int(t[0]), int(t[1]))] = int(t[2])
    return FinCategory(objs, mors, identity, comp)


def _fmap(F):
    return {"obj_map": list(F.obj_map), "mor_map": list(F.mor_map)}


def functor_to_json(F):
    return dict(_fmap(F), dom=category_to_json(F.dom), cod=category_to_json(F.cod))


def functor_from_json(d, path="functor", dom=None, cod=None):
    dom = dom if dom is not None else category_from_json(_req(d, "dom", path), path + ".dom")
    cod = cod if cod is not None else category_from_json(_req(d, "cod", path), path + ".cod")
    return FinFunctor(dom, cod, _req(d, "obj_map", path), _req(d, "mor_map", path))


def setmap_to_json(f):
    return {"dom": [enc(x) for x in f.dom], "cod": [enc(x) for x in f.cod], "images": [enc(x) for x in f.images]}


def setmap_from_json(d, path="map"):
    return FinSetMap([dec(x, path) for x in _req(d, "dom", path)], [dec(x, path) for x in _req(d, "cod", path)],
                     [dec(x, path) for x in _req(d, "images", path)])


def set_functor_to_json(P):
    return {"base": category_to_json(P.base), "sets": [[enc(x) for x in s] for s in P.sets],
            "maps": [list(m) for m in P.maps]}


def set_functor_from_json(d, path="set_functor", base=None):
    base = base if base is not None else category_from_json(_req(d, "base", path), path + ".base")
    return SetFunctor(base, [[dec(x, path) for x in s] for s in _req(d, "sets", path)], _req(d, "maps", path))


# sketches and barrels

def _cones_to_json(S):
    return [{"apex": c.apex, "shape": category_to_json(c.shape), "diagram": _fmap(c.diagram), "legs": list(c.legs)}
            for c in S.cones]


def _cones_from_json(L, cones, path):
    out = []
    for k, c in enumerate(cones):
        p = "%s.cones[%d]" % (path, k)
        J = category_from_json(_req(c, "shape", p), p + ".shape")
        dg = _req(c, "diagram", p)
        out.append(MarkedCone(int(_req(c, "apex", p)), J, FinFunctor(J, L, _req(dg, "obj_map", p), _req(dg, "mor_map", p)),
                              _req(c, "legs", p)))
    return out


def sketch_to_json(S):
    d = {"carrier": category_to_json(S.carrier), "cones": _cones_to_json(S)}
    if isinstance(S, FSketch):
        d["inert"] = sorted(S.inert)
    return d


def sketch_from_json(d, path="sketch", factorization=None):
    L = category_from_json(_req(d, "carrier", path), path + ".carrier")
    cones = _cones_from_json(L, _req(d, "cones", path), path)
    if "inert" in d:
        return FSketch(L, d["inert"], cones, factorization)
    return LimitSketch(L, cones)


def barrel_to_json(B):
    return {"total": category_to_json(B.total), "label": {str(a): B.labels[a] for a in range(B.total.n_obj)}}


def barrel_from_json(d, path="barrel"):
    T = category_from_json(_req(d, "total", path), path + ".total")
    lab = _req(d, "label", path)
    try:
        return Barrel.from_labels(T, [int(lab[str(a)]) for a in range(T.n_obj)])
    except KeyError as e:
        raise FormatError("label missing for object %s" % e, path + ".label")


def pseudo_functor_to_json(P):
    return {
        "base": category_to_json(P.base),
        "inert": sorted(P.inert),
        "values": [category_to_json(V) for V in P.values],
        "actions": [_fmap(F) for F in P.actions],
        "compositors": sorted(([v, u, list(c)] for (v, u), c in P.compositors.items()), key=lambda t: (t[0], t[1])),
    }


def pseudo_functor_from_json(d, path="pseudo_functor", factorization=None):
    B = category_from_json(_req(d, "base", path), path + ".base")
    vals = [category_from_json(v, "%s.values[%d]" % (path, k)) for k, v in enumerate(_req(d, "values", path))]
    if len(vals) != B.n_obj:
        raise FormatError("one value per base object expected", path + ".values")
    acts = []
    for k, a in enumerate(_req(d, "actions", path)):
        acts.append(FinFunctor(vals[B.src[k]], vals[B.tgt[k]], _req(a, "obj_map", path), _req(a, "mor_map", path)))
    comp = {(int(v), int(u)): tuple(c) for v, u, c in _req(d, "compositors", path)}
    return PseudoFunctorData(B, _req(d, "inert", path), vals, acts, comp, factorization)


# double categories

def double_to_json(D):
    return {
        "tight": category_to_json(D.tight),
        "loose": [{"id": enc(D.loose_labels[m]), "src": D.lsrc[m], "tgt": D.ltgt[m]} for m in range(D.n_loose)],
        "squares": [{"id": enc(D.sq_labels[s]), "top": D.top[s], "bottom": D.bot[s], "left": D.left[s],
                     "right": D.right[s]} for s in range(D.n_sq)],
        "vcomp": sorted([b, a, c] for (b, a), c in D.vcomp.items()),
        "vid": list(D.vid),
        "unit": list(D.unit),
        "tight_sq": list(D.tight_sq),
        "hcomp": sorted([m, n, k] for (m, n), k in D.hcomp.items()),
        "hcomp_sq": sorted([s, t, u] for (s, t), u in D.hcomp_sq.items()),
        "assoc": sorted([m, n, p, s] for (m, n, p), s in D.assoc.items()),
        "lunit": sorted([m, s] for m, s in D.lunit.items()),
        "runit": sorted([m, s] for m, s in D.runit.items()),
    }


def double_from_json(d, path="double"):
    T = category_from_json(_req(d, "tight", path), path + ".tight")
    L = [(dec(_req(l, "id", path), path), int(l["src"]), int(l["tgt"])) for l in _req(d, "loose", path)]
    S = [(dec(_req(s, "id", path), path), int(s["top"]), int(s["bottom"]), int(s["left"]), int(s["right"]))
         for s in _req(d, "squares", path)]

    def table(key, k):
        return {tuple(int(x) for x in row[:k]): int(row[k]) for row in _req(d, key, path)}

    return FinDoubleCategory(T, L, S, table("vcomp", 2), _req(d, "vid", path), _req(d, "unit", path),
                             _req(d, "tight_sq", path), table("hcomp", 2), table("hcomp_sq", 2),
                             table("assoc", 3), {r[0]: r[1] for r in _req(d, "lunit", path)},
                             {r[0]: r[1] for r in _req(d, "runit", path)})


_WL_NAMES = {WL_U0: "0", WL_ELL: "ell", WL_U1: "1"}
_WL_IDS = {v: k for k, v in _WL_NAMES.items()}


def double_barrel_to_json(B):
    d = double_to_json(B.total)
    d["label"] = {"objects": {str(a): B.obj_label[a] for a in range(B.total.n_obj)},
                  "loose": {str(m): _WL_NAMES[B.loose_label[m]] for m in range(B.total.n_loose)}}
    return d


def double_barrel_from_json(d, path="double_barrel"):
    D = double_from_json(d, path)
    lab = _req(d, "label", path)
    try:
        obj = [int(lab["objects"][str(a)]) for a in range(D.n_obj)]
        loose = [_WL_IDS[lab["loose"][str(m)]] for m in range(D.n_loose)]
    except KeyError as e:
        raise FormatError("bad or missing label %s" % e, path + ".label")
    return DoubleBarrel(D, obj, loose)


def cocone_to_json(eta):
    return {"shape": category_to_json(eta.shape), "sizes": list(eta.sizes),
            "maps": [list(eta.maps[u]) for u in range(eta.shape.n_mor)], "apex": eta.apex,
            "legs": [list(l) for l in eta.legs]}


def cocone_from_json(d, path="cocone"):
    J = category_from_json(_req(d, "shape", path), path + ".shape")
    maps = _req(d, "maps", path)
    if len(maps) != J.n_mor:
        raise FormatError("one map per shape morphism expected", path + ".maps")
    return LooseCocone(J, tuple(_req(d, "sizes", path)), {u: tuple(m) for u, m in enumerate(maps)},
                       int(_req(d, "apex", path)), tuple(tuple(l) for l in _req(d, "legs", path)))


# documents

_KINDS = [
    ("double_barrel", DoubleBarrel, double_barrel_to_json, double_barrel_from_json),
    ("double", FinDoubleCategory, double_to_json, double_from_json),
    ("pseudo_functor", PseudoFunctorData, pseudo_functor_to_json, pseudo_functor_from_json),
    ("fsketch", FSketch, sketch_to_json, sketch_from_json),
    ("sketch", LimitSketch, sketch_to_json, sketch_from_json),
    ("barrel", Barrel, barrel_to_json, barrel_from_json),
    ("set_functor", SetFunctor, set_functor_to_json, set_functor_from_json),
    ("functor", FinFunctor, functor_to_json, functor_from_json),
    ("set_map", FinSetMap, setmap_to_json, setmap_from_json),
    ("category", FinCategory, category_to_json, category_from_json),
    ("cocone", LooseCocone, cocone_to_json, cocone_from_json),
]


def to_document(obj):
    for kind, cls, to, _ in _KINDS:
        if isinstance(obj, cls):
            d = to(obj)
            d["kind"] = kind
            d["format"] = FORMAT_VERSION
            return d
    raise TypeError("no serialization for %s" % type(obj).__name__)


def from_document(d):
    kind = _req(d, "kind", "document")
    if d.get("format") != FORMAT_VERSION:
        raise FormatError("unsupported format %r (expected %d)" % (d.get("format"), FORMAT_VERSION), "document.format")
    for k, _, _, fr in _KINDS:
        if k == kind:
            return fr(d, kind)
    raise FormatError("unknown kind %r" % kind, "document.kind")


def dump_json(d):
    return json.dumps(d, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def dumps(obj):
    return dump_json(to_document(obj))


def loads(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError("invalid JSON: %s" % e.msg, "line %d column %d" % (e.lineno, e.colno))
    return from_document(d)


def save(obj, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(obj))
        f.write("\n")


def load(path):
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


def first_mismatch(a, b):
    """Index of the first differing character, or None."""
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return None if len(a) == len(b) else min(len(a), len(b))
