"""Independent brute-force oracles.  Nothing here imports loosebimod."""
import itertools


def _functions(k, n):
    return list(itertools.product(range(n), repeat=k))


def _raw_spans(a, b, bound):
    out = []
    for k in range(bound + 1):
        for left in _functions(k, a):
            for right in _functions(k, b):
                out.append((left, right))
    return out


def _pullback(f, left, right):
    """Elements (x, y) with f(x) = left(y), in any fixed order."""
    return [(x, y) for x in range(len(f)) for y in range(len(left)) if f[x] == left[y]]


def _is_cartesian(f, src_left, tgt_left, psi, src_size):
    pairs = sorted((src_left[x], psi[x]) for x in range(len(psi)))
    target = sorted((a, y) for a in range(src_size) for y in range(len(tgt_left)) if f[a] == tgt_left[y])
    return pairs == target


def raw_protransformations(sizes, arrows, composites, d, bound):
    """Every protransformation into the constant diagram at d, as raw data.

    ``arrows`` lists ``(src, tgt, map)`` for the non-identity shape arrows;
    ``composites`` lists index triples ``(g, f, h)`` with ``h = g . f``."""
    comps = [_raw_spans(s, d, bound) for s in sizes]
    for parts in itertools.product(*comps):
        options = []
        for s, t, f in arrows:
            ls, rs = parts[s]
            lt, rt = parts[t]
            opts = []
            for psi in _functions(len(ls), len(lt)):
                if all(lt[psi[x]] == f[ls[x]] and rt[psi[x]] == rs[x] for x in range(len(ls))) \
                        and _is_cartesian(f, ls, lt, psi, sizes[s]):
                    opts.append(psi)
            options.append(opts)
        for psis in itertools.product(*options):
            if all(tuple(psis[g][y] for y in psis[f]) == psis[h] for g, f, h in composites):
                yield parts, psis


def _induced(sizes, arrows, legs, Y):
    left, right = Y
    parts, pairs = [], []
    for i in range(len(sizes)):
        pb = _pullback(legs[i], left, right)
        pairs.append(pb)
        parts.append((tuple(x for x, _ in pb), tuple(right[y] for _, y in pb)))
    psis = []
    for s, t, f in arrows:
        where = {p: k for k, p in enumerate(pairs[t])}
        psis.append(tuple(where[(f[x], y)] for x, y in pairs[s]))
    return tuple(parts), tuple(psis), pairs


def _isomorphic(arrows, A, B):
    (pa, sa), (pb, sb) = A, B
    if [len(l) for l, _ in pa] != [len(l) for l, _ in pb]:
        return False
    perms = [list(itertools.permutations(range(len(l)))) for l, _ in pa]
    for fam in itertools.product(*perms):
        ok = all(pb[i][0][fam[i][x]] == pa[i][0][x] and pb[i][1][fam[i][x]] == pa[i][1][x]
                 for i in range(len(pa)) for x in range(len(pa[i][0])))
        if ok and all(sb[k][fam[s][x]] == fam[t][sa[k][x]]
                      for k, (s, t, _) in enumerate(arrows) for x in range(len(pa[s][0]))):
            return True
    return False


def _families(arrows, A, B):
    (pa, sa), (pb, sb) = A, B
    fns = [[g for g in _functions(len(pa[i][0]), len(pb[i][0]))
            if all(pb[i][0][g[x]] == pa[i][0][x] and pb[i][1][g[x]] == pa[i][1][x] for x in range(len(g)))]
           for i in range(len(pa))]
    out = []
    for fam in itertools.product(*fns):
        if all(sb[k][fam[s][x]] == fam[t][sa[k][x]] for k, (s, t, _) in enumerate(arrows) for x in range(len(pa[s][0]))):
            out.append(fam)
    return out


def van_kampen_oracle(sizes, arrows, composites, apex, legs, bound, target_bound):
    """"fail" or "pass-up-to-bound" by exhaustive search over raw spans."""
    for d in range(target_bound + 1):
        # a protransformation with components ≤ bound can only come from a
        # span whose apex is covered by those components
        induced = []
        for Y in _raw_spans(apex, d, max(1, len(sizes)) * bound):
            parts, psis, pairs = _induced(sizes, arrows, legs, Y)
            if all(len(l) <= bound for l, _ in parts):
                induced.append((Y, (parts, psis), pairs))
        for X in raw_protransformations(sizes, arrows, composites, d, bound):
            if not any(_isomorphic(arrows, X, I) for _, I, _ in induced):
                return "fail"
        small = [t for t in induced if len(t[0][0]) <= bound]
        for Y, IY, PY in small:
            for Y2, IY2, PY2 in small:
                hs = [h for h in _functions(len(Y[0]), len(Y2[0]))
                      if all(Y2[0][h[y]] == Y[0][y] and Y2[1][h[y]] == Y[1][y] for y in range(len(h)))]
                images = set()
                for h in hs:
                    fam = []
                    for i in range(len(sizes)):
                        where = {p: k for k, p in enumerate(PY2[i])}
                        fam.append(tuple(where[(x, h[y])] for x, y in PY[i]))
                    images.add(tuple(fam))
                if len(images) != len(hs) or images != set(_families(arrows, IY, IY2)):
                    return "fail"
    return "pass-up-to-bound"


def brute_pullback_pairs(m_right, n_left):
    return [(i, j) for i in range(len(m_right)) for j in range(len(n_left)) if m_right[i] == n_left[j]]


def count_spans_up_to_iso(a, b, bound):
    """Isomorphism classes of spans a ↛ b with apex ≤ bound: multisets of
    leg pairs, counted by stars and bars."""
    from math import comb
    n = a * b
    return sum(comb(n + k - 1, k) if n else (1 if k == 0 else 0) for k in range(bound + 1))


def raw_category(C):
    """Plain tuples from any object with the usual table attributes."""
    return len(C.objects), list(C.src), list(C.tgt), list(C.identity), dict(C.compose)


def associativity_failures(n, src, tgt, compose):
    """Triples (h, g, f) with h(gf) != (hg)f, by direct search."""
    m = len(src)
    bad = []
    for f in range(m):
        for g in range(m):
            if tgt[f] != src[g]:
                continue
            for h in range(m):
                if tgt[g] != src[h]:
                    continue
                if compose[(h, compose[(g, f)])] != compose[(compose[(h, g)], f)]:
                    bad.append((h, g, f))
    return bad


def monotone_maps_brute(k, l):
    return [v for v in itertools.product(range(l + 1), repeat=k + 1)
            if all(v[i] <= v[i + 1] for i in range(k))]


def composable_chains(n, src, tgt, length):
    """Composable chains of the given length, as tuples in diagrammatic order."""
    if length == 0:
        return [(o,) for o in range(n)]
    chains = [(f,) for f in range(len(src))]
    for _ in range(length - 1):
        chains = [c + (g,) for c in chains for g in range(len(src)) if src[g] == tgt[c[-1]]]
    return chains


def mediating_maps(apex, f, g, cone_size):
    """For every cone (a, b) of size cone_size over f and g, the number of
    maps into ``apex`` (a list of pairs) commuting with the projections."""
    counts = []
    for a in itertools.product(range(len(f)), repeat=cone_size):
        for b in itertools.product(range(len(g)), repeat=cone_size):
            if any(f[a[i]] != g[b[i]] for i in range(cone_size)):
                continue
            n = 0
            for h in itertools.product(range(len(apex)), repeat=cone_size):
                if all(apex[h[i]] == (a[i], b[i]) for i in range(cone_size)):
                    n += 1
            counts.append(n)
    return counts


def elements_counts(base_src, base_tgt, sets, maps):
    """Objects and morphisms of the category of elements."""
    return sum(len(s) for s in sets), sum(len(sets[base_src[f]]) for f in range(len(base_src)))


def _small_categories(n, k):
    """All categories on objects 0..n-1 with k non-identity morphisms
    n..n+k-1 (identity of object a is morphism a), as (src, tgt, comp)."""
    m = n + k
    out = []
    for ends in itertools.product(range(n), repeat=2 * k):
        src = list(range(n)) + list(ends[0::2])
        tgt = list(range(n)) + list(ends[1::2])
        pairs = [(g, f) for f in range(n, m) for g in range(n, m) if tgt[f] == src[g]]
        options = [[h for h in range(m) if src[h] == src[f] and tgt[h] == tgt[g]] for g, f in pairs]
        for choice in itertools.product(*options):
            comp = {}
            for f in range(m):
                comp[(tgt[f], f)] = f
                comp[(f, src[f])] = f
            comp.update(zip(pairs, choice))
            ok = all(comp[(h, comp[(g, f)])] == comp[(comp[(h, g)], f)]
                     for f in range(m) for g in range(m) for h in range(m)
                     if tgt[f] == src[g] and tgt[g] == src[h])
            if ok:
                out.append((src, tgt, comp))
    return out


def count_small_categories(max_obj, max_mor, labelled=False):
    """Isomorphism classes of categories with at most ``max_obj`` objects
    and ``max_mor`` morphisms; with ``labelled`` also a functor to the
    walking arrow (object labels, no morphism from a 1 to a 0)."""
    seen = set()
    for n in range(max_obj + 1):
        for k in range(max_mor - n + 1):
            for src, tgt, comp in _small_categories(n, k):
                labs = list(itertools.product((0, 1), repeat=n)) if labelled else [(0,) * n]
                for lab in labs:
                    if any(lab[src[f]] > lab[tgt[f]] for f in range(n + k)):
                        continue
                    best = None
                    for po in itertools.permutations(range(n)):
                        for pm in itertools.permutations(range(n, n + k)):
                            mp = list(po) + list(pm)
                            inv = {mp[i]: i for i in range(n + k)}
                            key = (tuple(lab[inv[a]] for a in range(n)),
                                   tuple((po[src[inv[f]]], po[tgt[inv[f]]]) for f in range(n + k)),
                                   tuple(sorted((mp[g], mp[f], mp[h]) for (g, f), h in comp.items())))
                            if best is None or key < best:
                                best = key
                    seen.add((n, k, best))
    return len(seen)
