"""Sketches with a wide subcategory of inert maps, Cat-valued pseudo-models,
the Grothendieck construction and checkers for cloven opfibrations.

Conventions.  A pseudo-functor ``P`` on a base category assigns a finite
category to every object and a functor to every morphism.  The compositor
``comp[(v, u)]`` is the tuple of components ``P(v)P(u)x -> P(vu)x`` indexed
by the objects ``x`` of ``P(src u)``; an absent entry means identity.
"""
import itertools
import random
from collections import namedtuple

import numpy as np

from .fincore import (CapExceeded, FinCategory, FinFunctor, Violation, comparison_into_limit,
                      is_discrete_opfibration, is_isomorphism, limit_of_categories, max_cells,
                      validate_category, validate_functor)
from .sketchlab import LimitSketch, MarkedCone, bimodule_sketch, elements_sketch, segal_cone, validate_sketch
from .simplexkit import truncated_delta_op

MAX_TOTAL_OBJECTS = 10_000


class FSketch(LimitSketch):
    """A limit sketch with a wide subcategory of inert morphisms.

    ``factorization`` (optional) provides ``active`` and ``factor(m)``
    returning ``(alpha, iota)`` with ``m = alpha . iota``; it enables the
    reduced coherence check.
    """
    __slots__ = ("inert", "factorization")

    def __init__(self, carrier, inert, cones, factorization=None):
        super().__init__(carrier, cones)
        self.inert = frozenset(inert)
        self.factorization = factorization


def validate_fsketch(S):
    v = validate_sketch(S)
    L = S.carrier
    for a in range(L.n_obj):
        if L.identity[a] not in S.inert:
            v.append(Violation("inert-identity", (a,), "identity is not inert"))
    for (g, f), h in L.compose.items():
        if g in S.inert and f in S.inert and h not in S.inert:
            v.append(Violation("inert-closure", (g, f), "composite of inerts is not inert"))
    for k, c in enumerate(S.cones):
        for j, leg in enumerate(c.legs):
            if leg not in S.inert:
                v.append(Violation("cone-leg", (k, j), "cone leg is not inert"))
    return v


def double_cat_fsketch(trunc=4):
    T = truncated_delta_op(trunc)
    return FSketch(T.category, T.inert, [segal_cone(T, n) for n in range(2, trunc + 1)], T)


def pseudo_bimodule_fsketch(trunc=4):
    B = bimodule_sketch(trunc)
    return FSketch(B.carrier, B.slice.inert, B.cones, B.slice)


class _LiftedFactorization:
    """Active/inert factorization on El(M) lifted from the base."""

    def __init__(self, base_fact, El, pi, M):
        self.base = base_fact
        self.El = El
        self.pi = pi
        self.M = M
        self.active = frozenset(m for m in range(El.n_mor) if pi.mor_map[m] in base_fact.active)
        self._start = {}
        k = 0
        L = M.base
        for f in range(L.n_mor):
            self._start[f] = k
            k += len(M.sets[L.src[f]])

    def _mor(self, f, i):
        return self._start[f] + i

    def factor(self, m):
        f = self.pi.mor_map[m]
        i = m - self._start[f]
        alpha, iota = self.base.factor(f)
        return self._mor(alpha, self.M.maps[iota][i]), self._mor(iota, i)


def elements_fsketch(S, M):
    """The F-sketch on El(M) for a discrete model M: inerts are the
    morphisms over inerts, cones are all lifts of cones."""
    ES = elements_sketch(S, M)
    pi = ES.projection
    inert = [m for m in range(ES.carrier.n_mor) if pi.mor_map[m] in S.inert]
    fact = _LiftedFactorization(S.factorization, ES.carrier, pi, M) if S.factorization else None
    FS = FSketch(ES.carrier, inert, ES.cones, fact)
    FS_proj = pi
    return ElementsFSketch(FS, FS_proj, M)


class ElementsFSketch(FSketch):
    __slots__ = ("projection", "model")

    def __init__(self, FS, pi, M):
        super().__init__(FS.carrier, FS.inert, FS.cones, FS.factorization)
        self.projection = pi
        self.model = M


def fsketch_isomorphic_via(S1, S2, F):
    """Carrier isomorphism matching inerts and cone sets exactly."""
    from .sketchlab import sketches_isomorphic_via
    if not sketches_isomorphic_via(S1, S2, F):
        return False
    return {F.mor_map[m] for m in S1.inert} == set(S2.inert)


# pseudo-functors

class PseudoFunctorData:
    __slots__ = ("base", "inert", "values", "actions", "compositors", "factorization")

    def __init__(self, base, inert, values, actions, compositors, factorization=None):
        self.base = base
        self.inert = frozenset(inert)
        self.values = tuple(values)
        self.actions = tuple(actions)
        self.compositors = dict(compositors)
        self.factorization = factorization

    def component(self, v, u, x):
        c = self.compositors.get((v, u))
        if c is not None:
            return c[x]
        V = self.values[self.base.tgt[v]]
        return V.identity[self.actions[v].obj_map[self.actions[u].obj_map[x]]]


def strict_pseudo_functor(base, inert, values, actions, factorization=None):
    return PseudoFunctorData(base, inert, values, actions, {}, factorization)


def constant_pseudo_functor(S, value):
    L = S.carrier
    I = FinFunctor.identity(value)
    return PseudoFunctorData(L, S.inert, [value] * L.n_obj, [I] * L.n_mor, {}, S.factorization)


class _Dense:
    """numpy tables of a pseudo-functor for vectorized checks."""

    def __init__(self, P):
        B = P.base
        self.P = P
        self.K = max([V.n_obj for V in P.values] + [1])
        self.KM = max([V.n_mor for V in P.values] + [1])
        n = B.n_mor
        self.OBJ = np.full((n, self.K), -1, dtype=np.int64)
        self.MOR = np.full((n, self.KM), -1, dtype=np.int64)
        for u, F in enumerate(P.actions):
            self.OBJ[u, :len(F.obj_map)] = F.obj_map
            self.MOR[u, :len(F.mor_map)] = F.mor_map
        self.nobj = np.array([V.n_obj for V in P.values], dtype=np.int64)
        self.nmor = np.array([V.n_mor for V in P.values], dtype=np.int64)
        self.COMP, self.IDV, self.SRC, self.TGT, self.ISO = [], [], [], [], []
        for V in P.values:
            m = V.n_mor
            C = np.full((m + 1, m + 1), -1, dtype=np.int64)
            for (g, f), h in V.compose.items():
                C[g, f] = h
            self.COMP.append(C)
            self.IDV.append(np.array(list(V.identity) + [-1], dtype=np.int64))
            self.SRC.append(np.array(list(V.src) + [-1], dtype=np.int64))
            self.TGT.append(np.array(list(V.tgt) + [-1], dtype=np.int64))
            iso = np.zeros(m + 1, dtype=bool)
            for f in range(m):
                iso[f] = V.inverse(f) is not None
            self.ISO.append(iso)
        pairs = sorted(B.compose.keys(), key=lambda p: (p[1], p[0]))
        self.pairs = pairs
        self.pv = np.array([p[0] for p in pairs], dtype=np.int64)
        self.pu = np.array([p[1] for p in pairs], dtype=np.int64)
        self.pvu = np.array([B.compose[p] for p in pairs], dtype=np.int64)
        self.pc = np.array([B.tgt[p[0]] for p in pairs], dtype=np.int64)
        self.pa = np.array([B.src[p[1]] for p in pairs], dtype=np.int64)
        self.PIDX = np.full((n, n), -1, dtype=np.int64)
        for i, p in enumerate(pairs):
            self.PIDX[p[0], p[1]] = i
        np_ = len(pairs)
        self.PHI = np.full((np_, self.K), -1, dtype=np.int64)
        xs = np.arange(self.K)
        for i, (v, u) in enumerate(pairs):
            a = B.src[u]
            size = P.values[a].n_obj
            c = P.compositors.get((v, u))
            if c is not None:
                self.PHI[i, :len(c)] = c
            else:
                tgt_obj = self.OBJ[v, self.OBJ[u, :size]]
                self.PHI[i, :size] = self.IDV[B.tgt[v]][tgt_obj]
        self.xmask = xs[None, :] < self.nobj[self.pa][:, None]


PseudoReport = namedtuple("PseudoReport", ["ok", "violations", "mode"])


def _violation_list(bad_pairs, law, detail, B, D, seen):
    out = []
    for i in np.flatnonzero(bad_pairs):
        if i in seen:
            continue
        seen.add(int(i))
        v, u = D.pairs[i]
        out.append(Violation(law, (B.mor_labels[v], B.mor_labels[u]), detail))
    return out


def _triple_count(B):
    total = 0
    for (g, f) in B.compose:
        total += len(B.out_of(B.tgt[g]))
    return total


def check_pseudo_F_functor(P, mode="auto", sample=2000, seed=0, exhaustive_limit=3_000_000):
    """Check the pseudo-functor laws.  Returns PseudoReport.

    ``mode`` is "exhaustive", "reduced" or "auto".  The reduced mode needs
    an active/inert factorization on the base: every compositor must be
    the one obtained from the active-active part by the two reduction
    rules, strictness is checked on pairs with an inert member, naturality
    and invertibility on active pairs, left whiskering by inerts on active
    pairs, and coherence on active triples plus a random sample of all
    triples.  Violations at a pair suppress triple-level reports that
    involve that pair.
    """
    B = P.base
    vio = []
    if len(P.values) != B.n_obj or len(P.actions) != B.n_mor:
        return PseudoReport(False, [Violation("index", (), "tables have wrong length")], mode)
    for u, F in enumerate(P.actions):
        if F.dom is not P.values[B.src[u]] and not F.dom.same_as(P.values[B.src[u]]):
            vio.append(Violation("action-domain", (B.mor_labels[u],), "action has the wrong domain"))
            continue
        if F.cod is not P.values[B.tgt[u]] and not F.cod.same_as(P.values[B.tgt[u]]):
            vio.append(Violation("action-codomain", (B.mor_labels[u],), "action has the wrong codomain"))
            continue
        if validate_functor(F):
            vio.append(Violation("action-functor", (B.mor_labels[u],), "action is not a functor"))
    for a in range(B.n_obj):
        F = P.actions[B.identity[a]]
        if F.obj_map != tuple(range(P.values[a].n_obj)) or F.mor_map != tuple(range(P.values[a].n_mor)):
            vio.append(Violation("unit", (B.objects[a],), "identity does not act as the identity"))
    if vio:
        return PseudoReport(False, vio, mode)
    if mode == "auto":
        if _triple_count(B) * max([V.n_obj for V in P.values] + [1]) <= exhaustive_limit:
            mode = "exhaustive"
        elif P.factorization is not None:
            mode = "reduced"
        else:
            mode = "exhaustive"
    if mode == "reduced" and P.factorization is None:
        raise ValueError("reduced mode needs an active/inert factorization")
    D = _Dense(P)
    seen = set()
    K = D.K
    xs = np.arange(K)
    mask = D.xmask
    # typing of components
    bad = np.zeros(len(D.pairs), dtype=bool)
    for c in range(B.n_obj):
        sel = D.pc == c
        if not sel.any():
            continue
        idx = np.flatnonzero(sel)
        phi = D.PHI[idx]
        m = mask[idx]
        src_expect = np.take_along_axis(D.OBJ[D.pv[idx]], np.where(D.OBJ[D.pu[idx]] < 0, 0, D.OBJ[D.pu[idx]]), axis=1)
        tgt_expect = D.OBJ[D.pvu[idx]]
        ok = (phi >= 0) & (phi < D.nmor[c])
        phic = np.where(ok, phi, -1)
        ok &= (D.SRC[c][phic] == src_expect) & (D.TGT[c][phic] == tgt_expect)
        bad[idx] |= (~ok & m).any(axis=1)
    vio += _violation_list(bad, "compositor-type", "component has the wrong boundary", B, D, seen)
    # strictness on pairs with an inert member
    inert = np.zeros(B.n_mor, dtype=bool)
    inert[list(P.inert)] = True
    has_inert = inert[D.pv] | inert[D.pu]
    bad = np.zeros(len(D.pairs), dtype=bool)
    for c in range(B.n_obj):
        idx = np.flatnonzero((D.pc == c) & has_inert)
        if not len(idx):
            continue
        ident = D.IDV[c][np.where(D.OBJ[D.pvu[idx]] < 0, -1, D.OBJ[D.pvu[idx]])]
        bad_phi = ((D.PHI[idx] != ident) & mask[idx]).any(axis=1)
        mu = D.MOR[D.pu[idx]]
        comp_mor = np.take_along_axis(D.MOR[D.pv[idx]], np.where(mu < 0, 0, mu), axis=1)
        mm = np.arange(D.KM)[None, :] < D.nmor[D.pa[idx]][:, None]
        bad_fun = ((comp_mor != D.MOR[D.pvu[idx]]) & mm).any(axis=1)
        bad[idx] = bad_phi | bad_fun
    vio += _violation_list(bad, "strict-on-inerts", "compositor is not an identity at a pair with an inert", B, D, seen)
    if mode == "reduced":
        fact = P.factorization
        alpha = np.zeros(B.n_mor, dtype=np.int64)
        iota = np.zeros(B.n_mor, dtype=np.int64)
        for m in range(B.n_mor):
            alpha[m], iota[m] = fact.factor(m)
        active = np.zeros(B.n_mor, dtype=bool)
        active[list(fact.active)] = True
        # derived compositor: phi_{alpha_v, alpha_w} at P(iota_w)x with w = iota_v u
        w = D.PIDX[iota[D.pv], D.pu]
        w_mor = D.pvu[w]
        q = D.PIDX[alpha[D.pv], alpha[w_mor]]
        ox = D.OBJ[iota[w_mor]]
        derived = np.take_along_axis(D.PHI[q], np.where(ox < 0, 0, ox), axis=1)
        bad = ((derived != D.PHI) & mask).any(axis=1)
        vio += _violation_list(bad, "reduction", "compositor differs from the one forced by the factorization", B, D, seen)
        act_pair = active[D.pv] & active[D.pu]
        pair_sel = np.flatnonzero(act_pair)
    else:
        pair_sel = np.arange(len(D.pairs))
    # invertibility and naturality
    bad = np.zeros(len(D.pairs), dtype=bool)
    for c in range(B.n_obj):
        idx = pair_sel[D.pc[pair_sel] == c]
        if not len(idx):
            continue
        phi = D.PHI[idx]
        bad[idx] |= (~D.ISO[c][phi] & mask[idx]).any(axis=1)
        a_srcs = D.pa[idx]
        for a in np.unique(a_srcs):
            V = P.values[a]
            if V.n_mor == 0:
                continue
            ms = np.arange(V.n_mor)
            msrc = np.array(V.src)
            mtgt = np.array(V.tgt)
            for sub in _chunks(idx[a_srcs == a], D.KM):
                img = D.MOR[D.pv[sub]][np.arange(len(sub))[:, None], D.MOR[D.pu[sub]][:, ms]]
                lhs = D.COMP[c][D.PHI[sub][:, mtgt], img]
                rhs = D.COMP[c][D.MOR[D.pvu[sub]][:, ms], D.PHI[sub][:, msrc]]
                bad[sub] |= ((lhs != rhs) | (lhs < 0)).any(axis=1)
    vio += _violation_list(bad, "naturality", "compositor is not a natural isomorphism", B, D, seen)
    if mode == "reduced":
        # left whiskering by inerts of active-active compositors
        bad = np.zeros(len(D.pairs), dtype=bool)
        rows = []
        for i in pair_sel:
            v = D.pv[i]
            for io in B.out_of(B.tgt[v]):
                if inert[io] and not B.is_identity(io):
                    rows.append((i, io))
        if rows:
            rows = np.array(rows, dtype=np.int64)
            ip, io = rows[:, 0], rows[:, 1]
            iv = D.pvu[D.PIDX[io, D.pv[ip]]]
            q = D.PIDX[iv, D.pu[ip]]
            phi = D.PHI[ip]
            lhs = np.take_along_axis(D.MOR[io], np.where(phi < 0, 0, phi), axis=1)
            rhs = D.PHI[q]
            badrow = ((lhs != rhs) & mask[ip]).any(axis=1)
            if seen:
                badrow &= ~np.isin(q, np.array(sorted(seen), dtype=np.int64))
            for i in np.unique(ip[badrow]):
                bad[i] = True
        vio += _violation_list(bad, "inert-whiskering", "inert image of a compositor differs from the composite compositor", B, D, seen)
    # coherence on triples
    if mode == "exhaustive":
        triples = [(h, g, f) for (g, f) in D.pairs for h in B.out_of(B.tgt[g])]
    else:
        act = P.factorization.active
        triples = []
        for (g, f) in D.pairs:
            if g in act and f in act:
                for h in B.out_of(B.tgt[g]):
                    if h in act:
                        triples.append((h, g, f))
        rng = random.Random(seed)
        for _ in range(sample):
            f = rng.randrange(B.n_mor)
            outs = B.out_of(B.tgt[f])
            g = outs[rng.randrange(len(outs))]
            outs = B.out_of(B.tgt[g])
            h = outs[rng.randrange(len(outs))]
            triples.append((h, g, f))
    vio += _coherence(P, D, triples, seen)
    return PseudoReport(not vio, vio, mode)


def _coherence(P, D, triples, seen_pairs):
    if not triples:
        return []
    B = P.base
    T = np.array(triples, dtype=np.int64)
    w, v, u = T[:, 0], T[:, 1], T[:, 2]
    p_vu = D.PIDX[v, u]
    vu = D.pvu[p_vu]
    p_wv = D.PIDX[w, v]
    wv = D.pvu[p_wv]
    pairs = (p_vu, D.PIDX[w, vu], p_wv, D.PIDX[wv, u])
    skip = np.zeros(len(T), dtype=bool)
    if seen_pairs:
        sp = np.array(sorted(seen_pairs), dtype=np.int64)
        for arr in pairs:
            skip |= np.isin(arr, sp)
    out = []
    d = np.array([B.tgt[x] for x in w], dtype=np.int64)
    usrc = np.array([B.src[x] for x in u], dtype=np.int64)
    for obj in np.unique(d):
        for sel in _chunks(np.flatnonzero((d == obj) & ~skip), D.KM):
            out += _coherence_rows(D, B, T[sel], D.COMP[obj], usrc[sel], [p[sel] for p in pairs])
    out.sort(key=lambda x: repr(x.witness))
    return out


def _chunks(idx, width, budget=4_000_000):
    """Split row indices so one gathered block stays under ``budget`` cells."""
    step = max(1, budget // max(width, 1))
    return [idx[i:i + step] for i in range(0, len(idx), step)]


def _coherence_rows(D, B, T, C, usrc, pairs):
    p_vu, p_w_vu, p_wv, p_wv_u = pairs
    w, u = T[:, 0], T[:, 2]
    m = np.arange(D.K)[None, :] < D.nobj[usrc][:, None]
    phi_vu = D.PHI[p_vu]
    whisk = np.take_along_axis(D.MOR[w], np.where(phi_vu < 0, 0, phi_vu), axis=1)
    lhs = C[D.PHI[p_w_vu], whisk]
    ox = D.OBJ[u]
    inner = np.take_along_axis(D.PHI[p_wv], np.where(ox < 0, 0, ox), axis=1)
    rhs = C[D.PHI[p_wv_u], inner]
    bad = ((lhs != rhs) | (lhs < 0)) & m
    out, done = [], set()
    for r in np.flatnonzero(bad.any(axis=1)):
        t = tuple(int(x) for x in T[r])
        if t not in done:
            done.add(t)
            out.append(Violation("coherence", tuple(B.mor_labels[x] for x in t), "the two pasted compositors differ"))
    return out


def check_pseudo_model(P, S, mode="auto", **kw):
    """Pseudo-functor laws plus: every marked cone goes to a limit cone of
    categories (comparison functor bijective on objects and morphisms)."""
    rep = check_pseudo_F_functor(P, mode=mode, **kw)
    vio = list(rep.violations)
    if vio:
        return PseudoReport(False, vio, rep.mode)
    L = S.carrier
    for k, cone in enumerate(S.cones):
        J = cone.shape
        vals = [P.values[cone.diagram.obj_map[j]] for j in range(J.n_obj)]
        funs = [P.actions[cone.diagram.mor_map[u]] for u in range(J.n_mor)]
        Lim, _ = limit_of_categories(J, vals, funs)
        legs = [P.actions[l] for l in cone.legs]
        F = comparison_into_limit(P.values[cone.apex], legs, Lim)
        if F is None:
            vio.append(Violation("cone", (k, L.objects[cone.apex]), "legs do not form a cone"))
        elif not is_isomorphism(F):
            vio.append(Violation("cone", (k, L.objects[cone.apex]),
                                 "comparison into the limit is not an isomorphism (%d/%d objects, %d/%d morphisms)"
                                 % (len(set(F.obj_map)), Lim.n_obj, len(set(F.mor_map)), Lim.n_mor)))
    return PseudoReport(not vio, vio, rep.mode)


# Grothendieck construction and cleavages

class Cleavage:
    """Chosen lifts ``lift[(e, u)]`` for ``p : E -> B`` and every base
    morphism ``u`` out of ``p(e)``; ``base_inert`` marks the inerts of B."""
    __slots__ = ("p", "lift", "base_inert")

    def __init__(self, p, lift, base_inert):
        self.p = p
        self.lift = dict(lift)
        self.base_inert = frozenset(base_inert)

    @property
    def total(self):
        return self.p.dom

    @property
    def base(self):
        return self.p.cod

    def inert(self):
        """Inerts of the total category: chosen lifts of inerts."""
        return frozenset(m for (e, u), m in self.lift.items() if u in self.base_inert)


def identity_cleavage(B, inert):
    I = FinFunctor.identity(B)
    return Cleavage(I, {(b, u): u for b in range(B.n_obj) for u in B.out_of(b)}, inert)


def discrete_cleavage(p, inert):
    """Cleavage of a discrete opfibration: the unique lifts."""
    E = p.dom
    lift = {}
    for e in range(E.n_obj):
        for f in E.out_of(e):
            lift[(e, p.mor_map[f])] = f
    return Cleavage(p, lift, inert)


class Grothendieck(namedtuple("Grothendieck", ["total", "projection", "cleavage", "obj_id", "mor_id"])):
    pass


def grothendieck(P, cap=MAX_TOTAL_OBJECTS):
    """Objects ``(a, x)``; morphisms ``(u, x, f)`` with ``f : P(u)x -> y``.

    Composite ``(v, y, g) . (u, x, f) = (vu, x, g . P(v)(f) . phi_{v,u,x}^-1)``.
    The chosen lift of ``u`` at ``(a, x)`` is ``(u, x, id)``.
    """
    B = P.base
    n_obj = sum(V.n_obj for V in P.values)
    if n_obj > cap:
        raise CapExceeded("total category would have %d objects (cap %d)" % (n_obj, cap))
    objs, obj_id = [], {}
    for a in range(B.n_obj):
        V = P.values[a]
        for x in range(V.n_obj):
            obj_id[(a, x)] = len(objs)
            objs.append((B.objects[a], V.objects[x]))
    mors, mor_id = [], {}
    for u in range(B.n_mor):
        a, b = B.src[u], B.tgt[u]
        Va, Vb = P.values[a], P.values[b]
        F = P.actions[u]
        for x in range(Va.n_obj):
            for f in Vb.out_of(F.obj_map[x]):
                mor_id[(u, x, f)] = len(mors)
                mors.append(((B.mor_labels[u], Va.objects[x], Vb.mor_labels[f]),
                             obj_id[(a, x)], obj_id[(b, Vb.tgt[f])]))
    if len(mors) > max_cells():
        raise CapExceeded("total category would have %d morphisms" % len(mors))
    keys = list(mor_id.keys())
    ids = [mor_id[(B.identity[a], x, P.values[a].identity[x])] for a in range(B.n_obj)
           for x in range(P.values[a].n_obj)]
    inv_cache = {}

    def inv(c, m):
        k = (c, m)
        r = inv_cache.get(k)
        if r is None:
            r = P.values[c].inverse(m)
            inv_cache[k] = r
        return r

    out_by_obj = {}
    for k, (u, x, f) in enumerate(keys):
        out_by_obj.setdefault((B.src[u], x), []).append(k)
    comp = {}
    for k1, (u, x, f) in enumerate(keys):
        b = B.tgt[u]
        y = P.values[b].tgt[f]
        for k2 in out_by_obj.get((b, y), ()):
            v, _, g = keys[k2]
            c = B.tgt[v]
            Vc = P.values[c]
            vu = B.compose[(v, u)]
            phi = P.component(v, u, x)
            pinv = inv(c, phi)
            if pinv is None:
                raise ValueError("compositor component is not invertible")
            h = Vc.compose[(g, Vc.compose[(P.actions[v].mor_map[f], pinv)])]
            comp[(k2, k1)] = mor_id[(vu, x, h)]
    E = FinCategory(objs, mors, ids, comp)
    p = FinFunctor(E, B, [a for a in range(B.n_obj) for _ in range(P.values[a].n_obj)],
                   [u for (u, _, _) in keys])
    lift = {}
    for a in range(B.n_obj):
        for x in range(P.values[a].n_obj):
            for u in B.out_of(a):
                Vb = P.values[B.tgt[u]]
                lift[(obj_id[(a, x)], u)] = mor_id[(u, x, Vb.identity[P.actions[u].obj_map[x]])]
    return Grothendieck(E, p, Cleavage(p, lift, P.inert), obj_id, mor_id)


def _factor_counts(B):
    cnt = {}
    for (w, u), h in B.compose.items():
        cnt[(u, h)] = cnt.get((u, h), 0) + 1
    return cnt


def is_opcartesian(p, phi, counts=None):
    """Every ``psi`` out of ``src(phi)`` and ``w`` with ``w p(phi) = p(psi)``
    factor uniquely as ``psi = chi phi`` with ``p(chi) = w``."""
    E, B = p.dom, p.cod
    counts = counts if counts is not None else _factor_counts(B)
    u = p.mor_map[phi]
    keys = set()
    for chi in E.out_of(E.tgt[phi]):
        key = (p.mor_map[chi], E.compose[(chi, phi)])
        if key in keys:
            return False
        keys.add(key)
    expected = sum(counts.get((u, p.mor_map[psi]), 0) for psi in E.out_of(E.src[phi]))
    return expected == len(keys)


FibrationReport = namedtuple("FibrationReport", ["ok", "violations", "discrete"])


def check_F_opfibration(c):
    p = c.p
    E, B = p.dom, p.cod
    vio = []
    v = validate_functor(p)
    if v:
        return FibrationReport(False, v, False)
    counts = _factor_counts(B)
    for e in range(E.n_obj):
        for u in B.out_of(p.obj_map[e]):
            m = c.lift.get((e, u))
            if m is None or E.src[m] != e or p.mor_map[m] != u:
                vio.append(Violation("lift", (E.objects[e], B.mor_labels[u]), "missing or ill-typed lift"))
                continue
            if not is_opcartesian(p, m, counts):
                vio.append(Violation("opcartesian", (E.objects[e], B.mor_labels[u]), "chosen lift is not opcartesian"))
        m = c.lift.get((e, B.identity[p.obj_map[e]]))
        if m is not None and m != E.identity[e]:
            vio.append(Violation("identity-lift", (E.objects[e],), "lift of an identity is not the identity"))
    if vio:
        return FibrationReport(False, vio, False)
    for e in range(E.n_obj):
        for u in B.out_of(p.obj_map[e]):
            lu = c.lift[(e, u)]
            e2 = E.tgt[lu]
            for w in B.out_of(B.tgt[u]):
                if u not in c.base_inert and w not in c.base_inert:
                    continue
                if c.lift[(e, B.compose[(w, u)])] != E.compose[(c.lift[(e2, w)], lu)]:
                    vio.append(Violation("inert-composite", (E.objects[e], B.mor_labels[u], B.mor_labels[w]),
                                         "lift of a composite with an inert is not the composite of lifts"))
    disc, _ = is_discrete_opfibration(p)
    return FibrationReport(not vio, vio, disc)


def compose_cleavages(cp, cq):
    """Cleavage of ``p . q`` from ``q : F -> E`` and ``p : E -> B``."""
    q, p = cq.p, cp.p
    pq = q.then(p)
    lift = {}
    for z in range(q.dom.n_obj):
        for u in p.cod.out_of(pq.obj_map[z]):
            lift[(z, u)] = cq.lift[(z, cp.lift[(q.obj_map[z], u)])]
    return Cleavage(pq, lift, cp.base_inert)


def fibre(c, a):
    """The fibre over base object ``a``: objects over a, vertical morphisms.
    Returns ``(F, inclusion)``."""
    p = c.p
    E, B = p.dom, p.cod
    ida = B.identity[a]
    objs = [e for e in range(E.n_obj) if p.obj_map[e] == a]
    oi = {e: i for i, e in enumerate(objs)}
    mors = [m for m in range(E.n_mor) if p.mor_map[m] == ida]
    mi = {m: i for i, m in enumerate(mors)}
    Fc = FinCategory([E.objects[e] for e in objs], [(E.mor_labels[m], oi[E.src[m]], oi[E.tgt[m]]) for m in mors],
                     [mi[E.identity[e]] for e in objs],
                     {(mi[g], mi[f]): mi[h] for (g, f), h in E.compose.items() if g in mi and f in mi})
    return Fc, FinFunctor(Fc, E, objs, mors)


def pushforward(c, u, fibres=None):
    """The functor between fibres induced by the chosen lifts of ``u``."""
    p = c.p
    E, B = p.dom, p.cod
    a, b = B.src[u], B.tgt[u]
    Fa, ia = fibres[a] if fibres else fibre(c, a)
    Fb, ib = fibres[b] if fibres else fibre(c, b)
    back_o = {e: i for i, e in enumerate(ib.obj_map)}
    back_m = {m: i for i, m in enumerate(ib.mor_map)}
    omap = [back_o[E.tgt[c.lift[(e, u)]]] for e in ia.obj_map]
    mmap = []
    idb = B.identity[b]
    for m in ia.mor_map:
        e, e2 = E.src[m], E.tgt[m]
        l1, l2 = c.lift[(e, u)], c.lift[(e2, u)]
        target = E.compose[(l2, m)]
        found = [k for k in E.hom(E.tgt[l1], E.tgt[l2]) if p.mor_map[k] == idb and E.compose[(k, l1)] == target]
        if len(found) != 1:
            raise ValueError("no unique vertical factorization: lift is not opcartesian")
        mmap.append(back_m[found[0]])
    return FinFunctor(Fa, Fb, omap, mmap)


def indexing_pseudofunctor(c, factorization=None):
    """Fibres, pushforwards and comparison cells of a cloven opfibration."""
    p = c.p
    E, B = p.dom, p.cod
    fibres = [fibre(c, a) for a in range(B.n_obj)]
    values = [f[0] for f in fibres]
    actions = [pushforward(c, u, fibres) for u in range(B.n_mor)]
    comps = {}
    for (v, u), vu in B.compose.items():
        a = B.src[u]
        Fa, ia = fibres[a]
        Fc, ic = fibres[B.tgt[v]]
        back_m = {m: i for i, m in enumerate(ic.mor_map)}
        idc = B.identity[B.tgt[v]]
        row = []
        trivial = True
        for x, e in enumerate(ia.obj_map):
            l1 = c.lift[(e, u)]
            l2 = c.lift[(E.tgt[l1], v)]
            l12 = E.compose[(l2, l1)]
            lvu = c.lift[(e, vu)]
            found = [k for k in E.hom(E.tgt[l12], E.tgt[lvu]) if p.mor_map[k] == idc and E.compose[(k, l12)] == lvu]
            if len(found) != 1:
                raise ValueError("comparison cell is not unique")
            k = back_m[found[0]]
            row.append(k)
            if k != Fc.identity[Fc.src[k]] or Fc.src[k] != Fc.tgt[k]:
                trivial = False
        if not trivial:
            comps[(v, u)] = tuple(row)
    return PseudoFunctorData(B, c.base_inert, values, actions, comps, factorization)


def check_pseudo_iso(P, Q, isos):
    """Problems with ``isos[a] : P(a) -> Q(a)`` as an isomorphism of
    pseudo-functors (actions and compositors preserved on the nose)."""
    B = P.base
    v = []
    for a, F in enumerate(isos):
        if validate_functor(F) or not is_isomorphism(F):
            v.append(Violation("value-iso", (B.objects[a],), "component is not an isomorphism"))
    if v:
        return v
    for u in range(B.n_mor):
        a, b = B.src[u], B.tgt[u]
        lhs = P.actions[u].then(isos[b])
        rhs = isos[a].then(Q.actions[u])
        if lhs != rhs:
            v.append(Violation("action", (B.mor_labels[u],), "actions differ under the isomorphism"))
    for (g, f) in B.compose:
        a, c = B.src[f], B.tgt[g]
        for x in range(P.values[a].n_obj):
            if isos[c].mor_map[P.component(g, f, x)] != Q.component(g, f, isos[a].obj_map[x]):
                v.append(Violation("compositor", (B.mor_labels[g], B.mor_labels[f]), "compositors differ"))
                break
    return v


def indexing_roundtrip_isos(P, G=None):
    """Value isomorphisms ``P(a) -> indexing(grothendieck(P))(a)``."""
    G = G or grothendieck(P)
    Q = indexing_pseudofunctor(G.cleavage, P.factorization)
    B = P.base
    E = G.total
    isos = []
    for a in range(B.n_obj):
        V, W = P.values[a], Q.values[a]
        ob = {lab: i for i, lab in enumerate(W.objects)}
        mb = {lab: i for i, lab in enumerate(W.mor_labels)}
        omap = [ob[E.objects[G.obj_id[(a, x)]]] for x in range(V.n_obj)]
        mmap = [mb[E.mor_labels[G.mor_id[(B.identity[a], V.src[f], f)]]] for f in range(V.n_mor)]
        isos.append(FinFunctor(V, W, omap, mmap))
    return Q, isos


def grothendieck_comparison(c):
    """The functor ``grothendieck(indexing(c)) -> total`` over the base:
    ``(u, x, f) -> f . lift(x, u)``."""
    Q = indexing_pseudofunctor(c)
    G = grothendieck(Q)
    p = c.p
    E, B = p.dom, p.cod
    fib_incl = [fibre(c, a)[1] for a in range(B.n_obj)]
    omap = [None] * G.total.n_obj
    for (a, x), k in G.obj_id.items():
        omap[k] = fib_incl[a].obj_map[x]
    mmap = [None] * G.total.n_mor
    for (u, x, f), k in G.mor_id.items():
        e = fib_incl[B.src[u]].obj_map[x]
        fm = fib_incl[B.tgt[u]].mor_map[f]
        mmap[k] = E.compose[(fm, c.lift[(e, u)])]
    F = FinFunctor(G.total, E, omap, mmap)
    return G, F


def check_cone_lifting(c, cone):
    """The fibre over the apex is the limit of the fibres over the cone
    diagram, with pushforwards along the legs as projections."""
    B = c.base
    fibres = [fibre(c, a) for a in range(B.n_obj)]
    J = cone.shape
    try:
        vals = [fibres[cone.diagram.obj_map[j]][0] for j in range(J.n_obj)]
        funs = [pushforward(c, cone.diagram.mor_map[u], fibres) for u in range(J.n_mor)]
        legs = [pushforward(c, l, fibres) for l in cone.legs]
    except ValueError as exc:
        return [Violation("cone-lifting", (B.objects[cone.apex],), str(exc))]
    Lim, _ = limit_of_categories(J, vals, funs)
    F = comparison_into_limit(fibres[cone.apex][0], legs, Lim)
    if F is None:
        return [Violation("cone-lifting", (B.objects[cone.apex],), "pushforwards along legs do not form a cone")]
    if not is_isomorphism(F):
        return [Violation("cone-lifting", (B.objects[cone.apex],),
                          "apex fibre is not the limit of the diagram fibres")]
    return []


def is_model_opfibration(c, S):
    rep = check_F_opfibration(c)
    if not rep.ok:
        return False
    return all(not check_cone_lifting(c, cone) for cone in S.cones)


def inert_coslice_check(c, e):
    """The projection from the inert coslice under ``e`` to the inert
    coslice under ``p(e)`` is bijective on objects and morphisms."""
    p = c.p
    E, B = p.dom, p.cod
    Ein = c.inert()
    Bin = c.base_inert
    a = p.obj_map[e]
    eo = [m for m in E.out_of(e) if m in Ein]
    bo = [u for u in B.out_of(a) if u in Bin]
    img = [p.mor_map[m] for m in eo]
    if sorted(img) != sorted(bo) or len(set(img)) != len(img):
        return False
    # morphisms: inert chi with chi . m1 = m2
    emor = set()
    for m1 in eo:
        for chi in E.out_of(E.tgt[m1]):
            if chi in Ein:
                emor.add((p.mor_map[m1], p.mor_map[chi], p.mor_map[E.compose[(chi, m1)]]))
    bmor = set()
    ecount = 0
    for m1 in eo:
        ecount += sum(1 for chi in E.out_of(E.tgt[m1]) if chi in Ein)
    for u1 in bo:
        for w in B.out_of(B.tgt[u1]):
            if w in Bin:
                bmor.add((u1, w, B.compose[(w, u1)]))
    return emor == bmor and ecount == len(bmor)


# pseudo-models over a discrete model and the fibred slice transport

class PseudoModelOver:
    """A pseudo-functor P with a map into a discrete model M:
    ``labels[a][x]`` is the element of ``M(a)`` under object x of ``P(a)``."""
    __slots__ = ("P", "M", "labels")

    def __init__(self, P, M, labels):
        self.P = P
        self.M = M
        self.labels = tuple(tuple(l) for l in labels)


def validate_over(PO):
    P, M = PO.P, PO.M
    B = P.base
    v = []
    for a in range(B.n_obj):
        V = P.values[a]
        lab = PO.labels[a]
        for f in range(V.n_mor):
            if lab[V.src[f]] != lab[V.tgt[f]]:
                v.append(Violation("label", (B.objects[a], V.mor_labels[f]), "morphism joins different labels"))
    for u in range(B.n_mor):
        a, b = B.src[u], B.tgt[u]
        for x in range(P.values[a].n_obj):
            if PO.labels[b][P.actions[u].obj_map[x]] != M.maps[u][PO.labels[a][x]]:
                v.append(Violation("label-naturality", (B.mor_labels[u],), "labels not natural"))
                break
    return v


def label_functor(PO, G, El):
    """``f : ∫P -> El(M)`` sending ``(a, x)`` to ``(a, label x)``."""
    P, M = PO.P, PO.M
    B = P.base
    start_o, start_m = {}, {}
    k = 0
    for a in range(B.n_obj):
        start_o[a] = k
        k += len(M.sets[a])
    k = 0
    for u in range(B.n_mor):
        start_m[u] = k
        k += len(M.sets[B.src[u]])
    omap = [None] * G.total.n_obj
    for (a, x), i in G.obj_id.items():
        omap[i] = start_o[a] + PO.labels[a][x]
    mmap = [None] * G.total.n_mor
    for (u, x, f), i in G.mor_id.items():
        mmap[i] = start_m[u] + PO.labels[B.src[u]][x]
    return FinFunctor(G.total, El, omap, mmap)


SliceTransport = namedtuple("SliceTransport", ["ok", "detail", "Q", "P_back"])


def transport_over_to_elements(PO, ES):
    """Pseudo-functor on El(M) from a pseudo-model over M, by the fibred
    route: ∫P factors through El(M) and we take its indexing."""
    G = grothendieck(PO.P)
    f = label_functor(PO, G, ES.carrier)
    lift = {}
    for e in range(G.total.n_obj):
        for m in ES.carrier.out_of(f.obj_map[e]):
            lift[(e, m)] = G.cleavage.lift[(e, ES.projection.mor_map[m])]
    cf = Cleavage(f, lift, ES.inert)
    rep = check_F_opfibration(cf)
    if not rep.ok:
        raise ValueError("labelling functor is not an F-opfibration: %s" % (rep.violations[0],))
    return indexing_pseudofunctor(cf, ES.factorization), cf


def transport_from_elements(Q, ES, base_inert, factorization=None):
    """Pseudo-model over M from a pseudo-functor on El(M): compose the
    Grothendieck cleavage with the discrete projection and index."""
    G = grothendieck(Q)
    cpi = discrete_cleavage(ES.projection, base_inert)
    comp = compose_cleavages(cpi, G.cleavage)
    P2 = indexing_pseudofunctor(comp, factorization)
    M = ES.model
    B = P2.base
    El = ES.carrier
    labels = []
    El_obj = {}
    k = 0
    for a in range(B.n_obj):
        for z in range(len(M.sets[a])):
            El_obj[El.objects[k]] = z
            k += 1
    for a in range(B.n_obj):
        lab = []
        for (el_label, _) in P2.values[a].objects:
            lab.append(El_obj[el_label])
        labels.append(lab)
    return PseudoModelOver(P2, M, labels), comp


def verify_pseudo_slice_equivalence(S, M, instances, mode="auto"):
    """For each pseudo-model over M: transport to El(M), check it is a
    pseudo-model of the elements F-sketch, transport back and compare with
    the original by an explicit isomorphism over M."""
    ES = elements_fsketch(S, M)
    details = []
    ok = True
    for n, PO in enumerate(instances):
        rep = check_pseudo_model(PO.P, S, mode=mode)
        if not rep.ok or validate_over(PO):
            details.append((n, "input is not a pseudo-model over M"))
            ok = False
            continue
        Q, _ = transport_over_to_elements(PO, ES)
        rq = check_pseudo_model(Q, ES, mode=mode)
        if not rq.ok:
            details.append((n, "transport is not a pseudo-model: %s" % (rq.violations[0],)))
            ok = False
            continue
        PO2, _ = transport_from_elements(Q, ES, S.inert, S.factorization)
        isos = _over_isos(PO, PO2, ES)
        v = check_pseudo_iso(PO.P, PO2.P, isos)
        if v or any(PO2.labels[a][isos[a].obj_map[x]] != PO.labels[a][x]
                    for a in range(len(isos)) for x in range(PO.P.values[a].n_obj)):
            details.append((n, "round trip is not isomorphic over M"))
            ok = False
            continue
        details.append((n, "ok"))
    return ok, details


def _over_isos(PO, PO2, ES):
    P, P2 = PO.P, PO2.P
    B = P.base
    M = PO.M
    El = ES.carrier
    start = {}
    k = 0
    for a in range(B.n_obj):
        start[a] = k
        k += len(M.sets[a])
    isos = []
    for a in range(B.n_obj):
        V, W = P.values[a], P2.values[a]
        ob = {lab: i for i, lab in enumerate(W.objects)}
        mb = {lab: i for i, lab in enumerate(W.mor_labels)}
        omap, mmap = [], []
        for x in range(V.n_obj):
            el = El.objects[start[a] + PO.labels[a][x]]
            omap.append(ob[(el, (B.objects[a], V.objects[x]))])
        for f in range(V.n_mor):
            x = V.src[f]
            el_id = El.mor_labels[El.identity[start[a] + PO.labels[a][x]]]
            inner = (B.mor_labels[B.identity[a]], V.objects[x], V.mor_labels[f])
            mmap.append(mb[(el_id, (B.objects[a], V.objects[x]), inner)])
        isos.append(FinFunctor(V, W, omap, mmap))
    return isos


# random pseudo-functors

def blow_up(P, K, rng, shift_prob=0.7):
    """Replace every value by ``value x indiscrete(K)`` and twist the
    actions of non-inert morphisms by permutations of the copies.

    Permutations are constant on the classes generated by ``u ~ v.u`` and
    ``v ~ v.u`` for inert partners, and trivial on classes with an inert,
    so the result stays strict on inerts.  Compositors are the unique
    indiscrete comparison cells.
    """
    B = P.base
    parent = list(range(B.n_mor))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for (g, f), h in B.compose.items():
        if g in P.inert:
            union(f, h)
        if f in P.inert:
            union(g, h)
    has_inert = {find(m) for m in P.inert}
    perm = {}
    for m in range(B.n_mor):
        r = find(m)
        if r not in perm:
            if r in has_inert or rng.random() > shift_prob:
                perm[r] = tuple(range(K))
            else:
                p = list(range(K))
                rng.shuffle(p)
                perm[r] = tuple(p)
    kappa = [perm[find(m)] for m in range(B.n_mor)]
    values = []
    for V in P.values:
        objs = [(o, i) for o in V.objects for i in range(K)]
        mors = []
        for f in range(V.n_mor):
            for i in range(K):
                for j in range(K):
                    mors.append(((V.mor_labels[f], i, j), V.src[f] * K + i, V.tgt[f] * K + j))
        comp = {}
        for (g, f), h in V.compose.items():
            for i in range(K):
                for j in range(K):
                    for l in range(K):
                        comp[((g * K + j) * K + l, (f * K + i) * K + j)] = (h * K + i) * K + l
        ids = [(V.identity[a] * K + i) * K + i for a in range(V.n_obj) for i in range(K)]
        values.append(FinCategory(objs, mors, ids, comp))
    actions = []
    for u, F in enumerate(P.actions):
        k = kappa[u]
        omap = [F.obj_map[x // K] * K + k[x % K] for x in range(len(F.obj_map) * K)]
        mmap = []
        for f in range(len(F.mor_map)):
            for i in range(K):
                for j in range(K):
                    mmap.append((F.mor_map[f] * K + k[i]) * K + k[j])
        actions.append(FinFunctor(values[B.src[u]], values[B.tgt[u]], omap, mmap))
    comps = {}
    for (v, u), vu in B.compose.items():
        twisted = kappa[vu] != tuple(kappa[v][kappa[u][i]] for i in range(K))
        if not twisted and (v, u) not in P.compositors:
            continue
        a = B.src[u]
        row = []
        for x in range(values[a].n_obj):
            base_x, i = divmod(x, K)
            phi = P.component(v, u, base_x)
            row.append((phi * K + kappa[v][kappa[u][i]]) * K + kappa[vu][i])
        comps[(v, u)] = tuple(row)
    return PseudoFunctorData(B, P.inert, values, actions, comps, P.factorization)


def corepresentable_pseudo_functor(base, inert, b, factorization=None):
    """The strict functor ``B(b, -)`` with discrete values."""
    from .fincore import discrete_category
    B = base
    sets = [tuple(B.hom(b, a)) for a in range(B.n_obj)]
    pos = [{f: i for i, f in enumerate(s)} for s in sets]
    maps = [tuple(pos[B.tgt[u]][B.compose[(u, f)]] for f in sets[B.src[u]]) for u in range(B.n_mor)]
    values = [discrete_category(range(len(s))) for s in sets]
    actions = [FinFunctor(values[B.src[u]], values[B.tgt[u]], maps[u], maps[u]) for u in range(B.n_mor)]
    return PseudoFunctorData(B, inert, values, actions, {}, factorization)


def discrete_pseudo_functor(M, inert, factorization=None):
    """A set-valued functor viewed as a strict pseudo-functor with discrete values."""
    from .fincore import discrete_category
    B = M.base
    values = [discrete_category(range(len(s))) for s in M.sets]
    actions = [FinFunctor(values[B.src[u]], values[B.tgt[u]], M.maps[u], M.maps[u]) for u in range(B.n_mor)]
    return PseudoFunctorData(B, inert, values, actions, {}, factorization)


# transformations between pseudo-functors

class PseudoFTransformation:
    """``Phi : P => Q``: functors ``P(a) -> Q(a)`` and, for each base
    morphism ``u : l -> k``, a cell ``Q(u) Phi_l => Phi_k P(u)`` stored
    sparsely as a tuple of components over the objects of ``P(l)``."""
    __slots__ = ("source", "target", "components", "cells")

    def __init__(self, source, target, components, cells=None):
        self.source, self.target = source, target
        self.components = tuple(components)
        self.cells = dict(cells or {})

    def cell(self, u, x):
        c = self.cells.get(u)
        if c is not None:
            return c[x]
        B = self.source.base
        W = self.target.values[B.tgt[u]]
        return W.identity[self.components[B.tgt[u]].obj_map[self.source.actions[u].obj_map[x]]]


def check_pseudo_F_transformation(Phi):
    """Violations of the transformation laws; cells at inerts must be identities."""
    P, Q = Phi.source, Phi.target
    B = P.base
    v = []
    for a in range(B.n_obj):
        F = Phi.components[a]
        if validate_functor(F) or F.dom.n_obj != P.values[a].n_obj or F.cod.n_obj != Q.values[a].n_obj:
            v.append(Violation("component-functor", (B.objects[a],), "component is not a functor between the values"))
    if v:
        return v
    for u in range(B.n_mor):
        l, k = B.src[u], B.tgt[u]
        V, W = P.values[l], Q.values[k]
        Fl, Fk, Pu, Qu = Phi.components[l], Phi.components[k], P.actions[u], Q.actions[u]
        bad = None
        for x in range(V.n_obj):
            c = Phi.cell(u, x)
            if W.src[c] != Qu.obj_map[Fl.obj_map[x]] or W.tgt[c] != Fk.obj_map[Pu.obj_map[x]]:
                bad = ("cell-type", "cell has the wrong boundary")
                break
            if (u in P.inert or B.is_identity(u)) and not W.is_identity(c):
                bad = ("strict-on-inerts", "cell at an inert is not an identity")
                break
        if bad is None:
            for f in range(V.n_mor):
                x, y = V.src[f], V.tgt[f]
                lhs = W.compose[(Fk.mor_map[Pu.mor_map[f]], Phi.cell(u, x))]
                rhs = W.compose[(Phi.cell(u, y), Qu.mor_map[Fl.mor_map[f]])]
                if lhs != rhs:
                    bad = ("cell-naturality", "cell is not natural")
                    break
        if bad:
            v.append(Violation(bad[0], (B.mor_labels[u],), bad[1]))
    if v:
        return v
    for (vv, u), vu in B.compose.items():
        l, j = B.src[u], B.tgt[vv]
        V, W = P.values[l], Q.values[j]
        Fj = Phi.components[j]
        Fl = Phi.components[l]
        for x in range(V.n_obj):
            lhs = W.compose[(Phi.cell(vu, x), Q.component(vv, u, Fl.obj_map[x]))]
            rhs = W.compose[(Fj.mor_map[P.component(vv, u, x)],
                             W.compose[(Phi.cell(vv, P.actions[u].obj_map[x]), Q.actions[vv].mor_map[Phi.cell(u, x)])])]
            if lhs != rhs:
                v.append(Violation("compositor-compatibility", (B.mor_labels[vv], B.mor_labels[u]),
                                   "cells do not respect the compositors"))
                break
    return v


class Modification:
    """``Gamma : Phi => Psi``: a morphism ``Phi_a x -> Psi_a x`` of ``Q(a)``
    for every object ``x`` of every ``P(a)``."""
    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components):
        self.source, self.target = source, target
        self.components = tuple(tuple(c) for c in components)


def check_modification(G):
    Phi, Psi = G.source, G.target
    P, Q = Phi.source, Phi.target
    B = P.base
    v = []
    for a in range(B.n_obj):
        V, W = P.values[a], Q.values[a]
        F1, F2, g = Phi.components[a], Psi.components[a], G.components[a]
        if len(g) != V.n_obj or any(W.src[g[x]] != F1.obj_map[x] or W.tgt[g[x]] != F2.obj_map[x] for x in range(V.n_obj)):
            v.append(Violation("component-type", (B.objects[a],), "component has the wrong boundary"))
            continue
        for f in range(V.n_mor):
            if W.compose[(F2.mor_map[f], g[V.src[f]])] != W.compose[(g[V.tgt[f]], F1.mor_map[f])]:
                v.append(Violation("naturality", (B.objects[a], V.mor_labels[f]), "component is not natural"))
                break
    if v:
        return v
    for u in range(B.n_mor):
        l, k = B.src[u], B.tgt[u]
        W = Q.values[k]
        Pu, Qu = P.actions[u], Q.actions[u]
        for x in range(P.values[l].n_obj):
            lhs = W.compose[(G.components[k][Pu.obj_map[x]], Phi.cell(u, x))]
            rhs = W.compose[(Psi.cell(u, x), Qu.mor_map[G.components[l][x]])]
            if lhs != rhs:
                v.append(Violation("cell-compatibility", (B.mor_labels[u],), "components do not respect the cells"))
                break
    return v


# cone lifting read directly in the total category

def _diagram_lifts(c, cone, cap=None):
    """Lifts of the cone diagram whose morphisms are chosen lifts; each is
    a tuple of total-category objects indexed by the shape."""
    p = c.p
    E = p.dom
    J, Dg = cone.shape, cone.diagram
    cap = cap if cap is not None else max_cells()
    over = {}
    for e in range(E.n_obj):
        over.setdefault(p.obj_map[e], []).append(e)
    nonid = [u for u in range(J.n_mor) if not J.is_identity(u)]
    targets = {J.tgt[u] for u in nonid}
    free = [j for j in range(J.n_obj) if j not in targets]
    space = 1
    for j in free:
        space *= max(len(over.get(Dg.obj_map[j], ())), 1)
    if space > cap:
        raise CapExceeded("diagram lift enumeration of size %d exceeds cap %d" % (space, cap))
    out = []
    for choice in itertools.product(*[over.get(Dg.obj_map[j], []) for j in free]):
        L = [None] * J.n_obj
        for j, e in zip(free, choice):
            L[j] = e
        ok = True
        changed = True
        while changed and ok:
            changed = False
            for u in nonid:
                s, t = J.src[u], J.tgt[u]
                if L[s] is None:
                    continue
                e2 = E.tgt[c.lift[(L[s], Dg.mor_map[u])]]
                if L[t] is None:
                    L[t] = e2
                    changed = True
                elif L[t] != e2:
                    ok = False
                    break
        if ok and None not in L:
            out.append(tuple(L))
    return out


def check_cone_lifting_fillers(c, cone, cap=None):
    """Cone lifting in the total category: every diagram lift has exactly
    one filler over the apex, and vertical morphisms between fillers are in
    bijection with compatible families of vertical morphisms between the
    diagram lifts."""
    p = c.p
    E, B = p.dom, p.cod
    J, Dg = cone.shape, cone.diagram
    a = cone.apex
    try:
        lifts = _diagram_lifts(c, cone, cap)
    except CapExceeded as exc:
        return [Violation("cap", (B.objects[a],), str(exc))]
    apex_objs = [e for e in range(E.n_obj) if p.obj_map[e] == a]

    def family(e):
        return tuple(E.tgt[c.lift[(e, l)]] for l in cone.legs)

    fill = {}
    for e in apex_objs:
        fill.setdefault(family(e), []).append(e)
    lset = set(lifts)
    for L in lifts:
        n = len(fill.get(L, ()))
        if n != 1:
            return [Violation("cone-lifting", (B.objects[a], tuple(E.objects[x] for x in L)),
                              "diagram lift has %d fillers" % n)]
    for fam in fill:
        if fam not in lset:
            return [Violation("cone-lifting", (B.objects[a], tuple(E.objects[x] for x in fam)),
                              "legs of an apex object do not form a diagram lift")]
    ida = B.identity[a]
    nonid = [u for u in range(J.n_mor) if not J.is_identity(u)]
    for e in apex_objs:
        for e2 in apex_objs:
            L, L2 = family(e), family(e2)
            vert = [k for k in E.hom(e, e2) if p.mor_map[k] == ida]
            images = set()
            for k in vert:
                comps = []
                for j, l in enumerate(cone.legs):
                    target = E.compose[(c.lift[(e2, l)], k)]
                    idj = B.identity[Dg.obj_map[j]]
                    found = [m for m in E.hom(L[j], L2[j]) if p.mor_map[m] == idj
                             and E.compose[(m, c.lift[(e, l)])] == target]
                    if len(found) != 1:
                        return [Violation("cone-lifting", (B.objects[a],), "no unique vertical component along a leg")]
                    comps.append(found[0])
                images.add(tuple(comps))
            fams = 0
            choices = [[m for m in E.hom(L[j], L2[j]) if p.mor_map[m] == B.identity[Dg.obj_map[j]]]
                       for j in range(J.n_obj)]
            for ks in itertools.product(*choices):
                good = True
                for u in nonid:
                    s, t = J.src[u], J.tgt[u]
                    du = Dg.mor_map[u]
                    if E.compose[(ks[t], c.lift[(L[s], du)])] != E.compose[(c.lift[(L2[s], du)], ks[s])]:
                        good = False
                        break
                if good:
                    fams += 1
                    if ks not in images:
                        return [Violation("cone-lifting", (B.objects[a], E.objects[e], E.objects[e2]),
                                          "compatible family does not extend to the apex")]
            if len(images) != len(vert) or fams != len(images):
                return [Violation("cone-lifting", (B.objects[a], E.objects[e], E.objects[e2]),
                                  "vertical morphisms at the apex do not match compatible families")]
    return []


def lifted_fsketch(c, S):
    """The F-sketch on the total category of ``c``: inerts are the chosen
    lifts of inerts and the cones at ``e`` are the chosen lifts of the cones
    at ``p(e)``."""
    p = c.p
    E = p.dom
    cones = []
    for cone in S.cones:
        J, Dg = cone.shape, cone.diagram
        for e in range(E.n_obj):
            if p.obj_map[e] != cone.apex:
                continue
            legs = [c.lift[(e, l)] for l in cone.legs]
            objs = [E.tgt[m] for m in legs]
            mors = [E.identity[objs[J.src[u]]] if J.is_identity(u) else c.lift[(objs[J.src[u]], Dg.mor_map[u])]
                    for u in range(J.n_mor)]
            cones.append(MarkedCone(e, J, FinFunctor(J, E, objs, mors), tuple(legs)))
    return FSketch(E, c.inert(), cones)


def pullback_pseudo_functor(P, p, inert=None):
    """``P . p`` for a functor ``p`` into the base of ``P``."""
    E = p.dom
    comps = {}
    for (g, f) in E.compose:
        key = (p.mor_map[g], p.mor_map[f])
        if key in P.compositors:
            comps[(g, f)] = P.compositors[key]
    inert = P.inert if inert is None else inert
    return PseudoFunctorData(E, inert, [P.values[p.obj_map[e]] for e in range(E.n_obj)],
                             [P.actions[p.mor_map[m]] for m in range(E.n_mor)], comps)


def check_discrete_codomain_lifting(f, q):
    """For ``p = q . f`` with ``q`` a discrete opfibration: every
    p-opcartesian morphism is f-opcartesian.  Returns violations."""
    p = f.then(q)
    E = f.dom
    cp = _factor_counts(p.cod)
    cf = _factor_counts(f.cod)
    v = []
    for phi in range(E.n_mor):
        if is_opcartesian(p, phi, cp) and not is_opcartesian(f, phi, cf):
            v.append(Violation("discrete-codomain", (E.mor_labels[phi],), "p-opcartesian but not f-opcartesian"))
    return v


def count_opcartesian(p):
    counts = _factor_counts(p.cod)
    return sum(1 for phi in range(p.dom.n_mor) if is_opcartesian(p, phi, counts))
