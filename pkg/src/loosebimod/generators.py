"""Random small instances for property tests and the acceptance suite.

Everything takes a ``random.Random`` so that runs are reproducible.
"""
import itertools
import random

from .fincore import (FinCategory, FinFunctor, coproduct_category, full_subcategory,
                      monoid_category, poset_category, product_category, validate_category)


def _cyclic(n):
    return [[(g + f) % n for f in range(n)] for g in range(n)]


def _capped_sum(n):
    # {0..n-1} under addition capped at n-1
    return [[min(g + f, n - 1) for f in range(n)] for g in range(n)]


def _left_zero_with_unit(n):
    # unit 0, every other element x satisfies x * y = x
    return [[f if g == 0 else g for f in range(n)] for g in range(n)]


def _min_monoid(n):
    # {0..n-1} under max with unit 0
    return [[max(g, f) for f in range(n)] for g in range(n)]


MONOIDS = (_cyclic, _capped_sum, _left_zero_with_unit, _min_monoid)


def random_monoid(rng, max_size=4):
    n = rng.randint(1, max_size)
    return monoid_category(rng.choice(MONOIDS)(n))


def random_poset(rng, max_obj=5, p=0.4):
    n = rng.randint(1, max_obj)
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                rel.add((i, j))
    # transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return poset_category(n, lambda i, j: (i, j) in rel)


def random_free_dag(rng, max_obj=4, max_edges=4, max_mor=12):
    """Free category on a random acyclic graph (morphisms are paths)."""
    n = rng.randint(1, max_obj)
    edges = []
    for _ in range(rng.randint(0, max_edges)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i < j:
            edges.append((i, j))
    paths = [((i,), ()) for i in range(n)]
    frontier = list(paths)
    while frontier:
        nxt = []
        for objs, es in frontier:
            for k, (a, b) in enumerate(edges):
                if a == objs[-1]:
                    nxt.append((objs + (b,), es + (k,)))
        paths.extend(nxt)
        frontier = nxt
        if len(paths) > max_mor:
            return None
    mors = [((p[0][0], p[1]), p[0][0], p[0][-1]) for p in paths]
    return FinCategory.build(range(n), mors, lambda a: (a, ()),
                             lambda g, f: (f[0], f[1] + g[1]))


def random_category(rng, max_obj=5, max_mor=12):
    """A valid random finite category within the given size limits."""
    for _ in range(200):
        kind = rng.choice(["poset", "dag", "monoid", "coproduct", "product"])
        if kind == "poset":
            C = random_poset(rng, max_obj)
        elif kind == "dag":
            C = random_free_dag(rng, min(max_obj, 4), max_mor=max_mor)
        elif kind == "monoid":
            C = random_monoid(rng)
        elif kind == "coproduct":
            C = coproduct_category(random_monoid(rng, 3), random_poset(rng, 2))
        else:
            C = product_category(random_poset(rng, 2), random_monoid(rng, 2))
        if C is not None and C.n_obj <= max_obj and C.n_mor <= max_mor:
            return C
    raise RuntimeError("could not generate a category")


def random_subbimodule_keep(rng, F, G, p=0.5):
    """A random set of heteromorphisms ``F(c) -> G(d)`` closed under both actions."""
    E = F.cod
    het = [(c, d, e) for c in range(F.dom.n_obj) for d in range(G.dom.n_obj)
           for e in E.hom(F.obj_map[c], G.obj_map[d])]
    keep = {h for h in het if rng.random() < p}
    changed = True
    while changed:
        changed = False
        for c, d, e in list(keep):
            for f in F.dom.into(c):
                h = (F.dom.src[f], d, E.compose[(e, F.mor_map[f])])
                if h not in keep:
                    keep.add(h)
                    changed = True
            for g in G.dom.out_of(d):
                h = (c, G.dom.tgt[g], E.compose[(G.mor_map[g], e)])
                if h not in keep:
                    keep.add(h)
                    changed = True
    return keep


def random_bimodule(rng, max_obj=6, max_het=10):
    """A random bimodule built from two full subcategories of a random
    category, restricted to a sub-bimodule generated by closure."""
    from .sketchlab import bimodule_from_functors
    for _ in range(200):
        E = random_category(rng, max_obj=4, max_mor=10)
        objs = list(range(E.n_obj))
        cs = [a for a in objs if rng.random() < 0.6] or [objs[0]]
        ds = [a for a in objs if rng.random() < 0.6] or [objs[-1]]
        if len(cs) + len(ds) > max_obj:
            continue
        C, F = full_subcategory(E, lambda a: a in cs)
        D, G = full_subcategory(E, lambda a: a in ds)
        keep = random_subbimodule_keep(rng, F, G, rng.choice([0.3, 0.6, 1.0]))
        M = bimodule_from_functors(F, G, keep)
        if M.n_het <= max_het:
            return M
    raise RuntimeError("could not generate a bimodule")


def random_barrel(rng, max_obj=6, max_het=10):
    """Either the collage of a random bimodule or a random poset cut by an
    upward closed set of objects."""
    from .sketchlab import Barrel, barrel_to_bimodule, bimodule_to_barrel
    for _ in range(200):
        if rng.random() < 0.5:
            B = bimodule_to_barrel(random_bimodule(rng, max_obj, max_het))
        else:
            P = random_poset(rng, max_obj)
            up = set()
            for a in range(P.n_obj):
                if rng.random() < 0.5:
                    up |= {P.tgt[f] for f in P.out_of(a)}
            B = Barrel.from_labels(P, [1 if a in up else 0 for a in range(P.n_obj)])
        if B.total.n_obj <= max_obj and barrel_to_bimodule(B).n_het <= max_het:
            return B
    raise RuntimeError("could not generate a barrel")


def permute_category(rng, C):
    """An isomorphic copy of C with objects and morphisms shuffled (labels kept)."""
    po = list(range(C.n_obj))
    pm = list(range(C.n_mor))
    rng.shuffle(po)
    rng.shuffle(pm)
    inv_o = {a: i for i, a in enumerate(po)}
    inv_m = {f: i for i, f in enumerate(pm)}
    mors = [(C.mor_labels[f], inv_o[C.src[f]], inv_o[C.tgt[f]]) for f in pm]
    comp = {(inv_m[g], inv_m[f]): inv_m[h] for (g, f), h in C.compose.items()}
    D = FinCategory([C.objects[a] for a in po], mors, [inv_m[C.identity[a]] for a in po], comp)
    return D, FinFunctor(C, D, [inv_o[a] for a in range(C.n_obj)], [inv_m[f] for f in range(C.n_mor)])
