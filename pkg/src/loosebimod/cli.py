"""Command line front end.

Every subcommand prints one report and exits 0 on pass (or pass up to
the bound), 1 on fail and 2 on bad input.  JSON reports are sorted and
byte-stable across runs.
"""
import argparse
import sys
import time

from . import doublecat as dc
from . import fincore as fc
from . import fsketchlab as fs
from . import instances
from . import looseuniv as lu
from . import serialization as ser
from . import simplexkit as sk
from . import sketchlab as sl

APEX_BOUND = 4
PROPERTIES = {"validate": "category-laws", "nerve": "segal", "segal": "segal", "barrel2bimod": "bimodule-laws",
              "bimod2barrel": "barrel-laws", "elements": "discrete-opfibration", "slice-equiv": "slice-equivalence",
              "fcheck": "pseudo-model", "grothendieck": "F-opfibration", "opfib": "F-opfibration",
              "model-opfib": "model-opfibration", "dbl-validate": "double-laws", "restrict": "restriction",
              "restrict-up": "restriction-universal", "convert-model": "double-model-roundtrip",
              "adjunction": "loose-adjunction", "terminal": "loose-terminal", "vankampen": "van-kampen"}
SIZE_BOUND = 3


class InputError(Exception):
    pass


def _plain(x):
    """JSON-friendly deterministic form of report contents."""
    if isinstance(x, fc.Violation):
        return {"law": x.law, "witness": _plain(list(x.witness)), "detail": x.detail}
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_plain(v) for v in x), key=repr)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return repr(x)


def _report(command, violations=(), counts=None, witness=None, verdict=None, bound=None, **extra):
    vs = sorted((_plain(v) for v in violations), key=lambda v: ser.dump_json(v))
    if verdict is None:
        verdict = "fail" if vs else "pass"
    rep = {"command": command, "property": PROPERTIES.get(command, command), "verdict": verdict, "violations": vs, "counts": _plain(counts or {})}
    if witness is None and vs:
        witness = vs[0]
    rep["witness"] = _plain(witness)
    if bound is not None:
        rep["bound"] = bound
    rep.update({k: _plain(v) for k, v in extra.items()})
    return rep


def _load(args, kinds):
    if not args.input:
        raise InputError("--input is required")
    try:
        obj = ser.load(args.input)
    except OSError as e:
        raise InputError("cannot read %s: %s" % (args.input, e.strerror))
    except ser.FormatError as e:
        raise InputError("%s: %s" % (args.input, e))
    if not isinstance(obj, kinds):
        raise InputError("%s: expected %s, got %s" % (args.input, " or ".join(k.__name__ for k in kinds),
                                                     type(obj).__name__))
    return obj


def _write(args, obj):
    if getattr(args, "output", None):
        ser.save(obj, args.output)


def _delta_base(P):
    """The truncation n with P's base equal to Δ≤n^op, or None."""
    B = P.base if hasattr(P, "base") else P
    n = B.n_obj - 1
    if 0 <= n <= sk.MAX_TRUNCATION:
        T = sk.truncated_delta_op(n)
        if T.category.same_as(B):
            return T
    return None


def _sketch_for(P):
    """The F-sketch whose carrier is P's base, with its factorization."""
    T = _delta_base(P)
    if T is not None:
        return fs.double_cat_fsketch(T.n)
    for n in range(sk.MAX_TRUNCATION + 1):
        S = fs.pseudo_bimodule_fsketch(n)
        if S.carrier.n_obj == P.base.n_obj and S.carrier.same_as(P.base):
            return S
    return None


def _attach(P):
    S = _sketch_for(P)
    if S is None:
        raise InputError("base category is neither a truncated simplex category nor its slice over [1]")
    P.factorization = S.factorization
    if set(P.inert) != set(S.inert):
        raise InputError("inert morphisms do not match the sketch")
    return P, S


# commands

def cmd_validate(args):
    C = _load(args, (fc.FinCategory,))
    return _report("validate", fc.validate_category(C), {"objects": C.n_obj, "morphisms": C.n_mor})


def cmd_nerve(args):
    C = _load(args, (fc.FinCategory,))
    n = args.bound if args.bound is not None else SIZE_BOUND
    X = sl.nerve(C, n)
    ok, rep = sl.is_set_model(X, sl.categories_sketch(n))
    _write(args, X)
    return _report("nerve", [] if ok else rep, {"simplices": list(X.sizes())}, bound=n)


def cmd_segal(args):
    X = _load(args, (fc.SetFunctor,))
    T = _delta_base(X)
    if T is None:
        raise InputError("base is not a truncated simplex category")
    ok, rep = sl.is_set_model(X, sl.categories_sketch(T.n))
    counts = {"simplices": list(X.sizes())}
    if ok:
        C = sl.segal_to_category(X)
        counts.update(objects=C.n_obj, morphisms=C.n_mor)
    return _report("segal", [] if ok else rep, counts, bound=T.n)


def cmd_barrel2bimod(args):
    B = _load(args, (sl.Barrel,))
    v = sl.validate_barrel(B)
    if v:
        return _report("barrel2bimod", v)
    M = sl.barrel_to_bimodule(B)
    return _report("barrel2bimod", sl.validate_bimodule(M),
                   {"source_objects": M.source.n_obj, "target_objects": M.target.n_obj, "heteromorphisms": M.n_het})


def cmd_bimod2barrel(args):
    X = _load(args, (fc.FinCategory, sl.Barrel))
    if isinstance(X, fc.FinCategory):
        M = sl.hom_bimodule(X)
        B = sl.bimodule_to_barrel(M)
        _write(args, B)
        return _report("bimod2barrel", sl.validate_barrel(B), {"total_objects": B.total.n_obj,
                                                              "total_morphisms": B.total.n_mor, "heteromorphisms": M.n_het})
    M = sl.barrel_to_bimodule(X)
    B = sl.bimodule_to_barrel(M)
    _, G = sl.barrel_roundtrip_iso(X)
    v = [] if fc.is_isomorphism(G) else [fc.Violation("round-trip", (), "barrel is not recovered from its bimodule")]
    return _report("bimod2barrel", v, {"total_objects": B.total.n_obj, "heteromorphisms": M.n_het})


def cmd_elements(args):
    P = _load(args, (fc.SetFunctor,))
    v = fc.validate_set_functor(P)
    if v:
        return _report("elements", v)
    El, pi = fc.category_of_elements(P)
    _write(args, El)
    disc, w = fc.is_discrete_opfibration(pi)
    return _report("elements", [] if disc else [fc.Violation("discrete-opfibration", w, "lifts are not unique")],
                   {"objects": El.n_obj, "morphisms": El.n_mor})


def cmd_slice_equiv(args):
    n = args.size if args.size is not None else SIZE_BOUND
    b = args.bound if args.bound is not None else 2
    T = sk.truncated_delta_op(n)
    r = sl.verify_slice_equivalence(sl.categories_sketch(n), sk.corepresentable_at_1(T), b)
    v = [] if r.ok else [fc.Violation("slice-equivalence", (), r.detail or "classes do not correspond")]
    return _report("slice-equiv", v, {"left": r.left_count, "right": r.right_count, "bijection": r.bijection,
                                      "round_trips": r.round_trips}, bound=b, truncation=n)


def cmd_fcheck(args):
    P, S = _attach(_load(args, (fs.PseudoFunctorData,)))
    r = fs.check_pseudo_model(P, S)
    return _report("fcheck", r.violations, {"base_morphisms": P.base.n_mor, "compositors": len(P.compositors)}, mode=r.mode)


def cmd_grothendieck(args):
    P, S = _attach(_load(args, (fs.PseudoFunctorData,)))
    G = fs.grothendieck(P)
    _write(args, G.total)
    r = fs.check_F_opfibration(G.cleavage)
    return _report("grothendieck", r.violations, {"objects": G.total.n_obj, "morphisms": G.total.n_mor,
                                                  "discrete": r.discrete})


def cmd_opfib(args):
    p = _load(args, (fc.FinFunctor,))
    v = fc.validate_functor(p)
    if v:
        return _report("opfib", v)
    T = _delta_base(p.cod)
    inert = T.inert if T is not None else {p.cod.identity[a] for a in range(p.cod.n_obj)}
    disc, w = fc.is_discrete_opfibration(p)
    if not disc:
        return _report("opfib", [fc.Violation("discrete-opfibration", w, "lifts are not unique")],
                       {"objects": p.dom.n_obj, "morphisms": p.dom.n_mor})
    r = fs.check_F_opfibration(fs.discrete_cleavage(p, inert))
    return _report("opfib", r.violations, {"objects": p.dom.n_obj, "morphisms": p.dom.n_mor, "discrete": r.discrete})


def cmd_model_opfib(args):
    P, S = _attach(_load(args, (fs.PseudoFunctorData,)))
    G = fs.grothendieck(P)
    r = fs.check_F_opfibration(G.cleavage)
    if not r.ok:
        return _report("model-opfib", r.violations)
    v, fillers = [], []
    for k, cone in enumerate(S.cones):
        a = fs.check_cone_lifting(G.cleavage, cone)
        b = fs.check_cone_lifting_fillers(G.cleavage, cone)
        if bool(a) != bool(b):
            v.append(fc.Violation("routes-disagree", (k,), "limit and filler routes differ"))
        v.extend(a)
        fillers.extend(b)
    return _report("model-opfib", v, {"cones": len(S.cones), "objects": G.total.n_obj, "morphisms": G.total.n_mor})


def _double_input(args):
    if args.instance:
        return instances.double(args.instance)
    return _load(args, (dc.FinDoubleCategory, dc.DoubleBarrel))


def cmd_dbl_validate(args):
    D = _double_input(args)
    if isinstance(D, dc.DoubleBarrel):
        return _report("dbl-validate", dc.validate_double_barrel(D), {"loose": D.total.n_loose, "squares": D.total.n_sq})
    return _report("dbl-validate", dc.validate_double_category(D), {"objects": D.n_obj, "loose": D.n_loose,
                                                                   "squares": D.n_sq, "strict": D.is_strict()})


def _restriction_input(args):
    if not args.instance:
        raise InputError("--instance is required")
    return instances.restriction_setup(args.instance, args.along)


def cmd_restrict(args):
    B, F0, F1 = _restriction_input(args)
    R = dc.restriction(B, F0, F1)
    v = list(dc.validate_double_barrel(R.barrel)) + list(dc.validate_double_functor(R.projection))
    L, Car, G = dc.carrier_limit_comparison(R.barrel, B, F0, F1)
    if not fc.is_isomorphism(G):
        v.append(fc.Violation("carrier-limit", (), "carrier is not the limit"))
    w = dc.projection_faithful(R.barrel, R.projection)
    if w is not None:
        v.append(fc.Violation("projection-faithful", _plain(w), "parallel cells share an image"))
    _write(args, R.barrel)
    return _report("restrict", v, {"carrier_objects": Car.n_obj, "carrier_morphisms": Car.n_mor})


def cmd_restrict_up(args):
    B, F0, F1 = _restriction_input(args)
    R = dc.restriction(B, F0, F1)
    G0, G1 = instances.strip_functors(R, F0, F1)
    r = dc.check_restriction_universal_property(B, F0, F1, R.barrel, G0, G1, restricted=R)
    v = [] if r.ok else [fc.Violation("restriction-universal", _plain(r.witness), "cell sets differ")]
    return _report("restrict-up", v, {"left": r.left_count, "right": r.right_count}, reading=r.reading)


def cmd_convert_model(args):
    D = _double_input(args)
    if isinstance(D, dc.DoubleBarrel):
        D = D.total
    n = args.size if args.size is not None else SIZE_BOUND
    T = sk.truncated_delta_op(n)
    F, P, E = dc.double_roundtrip_functor(D, T)
    v = list(fs.check_pseudo_model(P, fs.double_cat_fsketch(n)).violations) + list(dc.check_double_iso(F))
    _write(args, P)
    return _report("convert-model", v, {"compositors": len(P.compositors),
                                        "chains": [V.n_obj for V in P.values]}, truncation=n)


_ADJ = {
    ("span", "diag", "coprod"): lambda a: lu.delta_plus_witness(a.size if a.size is not None else 2, _bound(a, 2),
                                                                 a.perm_seed),
    ("span", "bang", "empty"): lambda a: lu.bang_empty_witness(a.size if a.size is not None else 2, _bound(a, 2)),
    ("rel", "times", "times"): lambda a: lu.rel_closure_witness(a.size if a.size is not None else 2, a.factor),
}


def _bound(args, default=APEX_BOUND):
    return args.bound if args.bound is not None else default


def cmd_adjunction(args):
    key = (args.instance, args.left, args.right)
    if key not in _ADJ:
        raise InputError("unknown adjunction %s: %s -| %s (choose from %s)" % (
            key[0], key[1], key[2], "; ".join("%s: %s -| %s" % k for k in sorted(_ADJ))))
    w = _ADJ[key](args)
    r = lu.check_loose_adjunction(w, sample_rate=args.sample_rate, seed=args.seed)
    return _report("adjunction", [], r["counts"], r["witness"], r["verdict"], r["bound"], instance=r["instance"])


def cmd_terminal(args):
    n = args.size if args.size is not None else SIZE_BOUND
    if args.instance == "span":
        D = lu.span_double(n, _bound(args, 2))
    elif args.instance == "rel":
        D = lu.rel_double(n)
    else:
        raise InputError("terminal needs --instance span or rel")
    if not 0 <= args.object <= n:
        raise InputError("object %d is outside 0..%d" % (args.object, n))
    r = lu.check_loose_terminal(D, args.object)
    return _report("terminal", [], {"cells": r.get("cells_checked", 0)}, r["witness"], r["verdict"], r.get("bound"),
                   object=args.object)


def cmd_vankampen(args):
    if args.instance:
        eta = instances.cocone(args.instance)
    else:
        eta = _load(args, (lu.LooseCocone,))
    b = _bound(args)
    tb = args.size if args.size is not None else 2
    try:
        r = lu.check_van_kampen(eta, b, tb)
    except lu.NotColimitError as e:
        raise InputError("cocone is not a colimit: %s" % e)
    return _report("vankampen", [], {"protransformations": r["protransformations"], "cell_pairs": r["cell_pairs"]},
                   r["witness"], r["verdict"], b, target_bound=tb)


COMMANDS = {
    "validate": (cmd_validate, "validate a finite category"),
    "nerve": (cmd_nerve, "nerve of a category up to truncation --bound"),
    "segal": (cmd_segal, "Segal condition for a simplicial set"),
    "barrel2bimod": (cmd_barrel2bimod, "bimodule of a barrel"),
    "bimod2barrel": (cmd_bimod2barrel, "barrel of a hom bimodule, or barrel round trip"),
    "elements": (cmd_elements, "category of elements of a set-valued functor"),
    "slice-equiv": (cmd_slice_equiv, "bounded slice equivalence at the corepresentable"),
    "fcheck": (cmd_fcheck, "pseudo-model check"),
    "grothendieck": (cmd_grothendieck, "Grothendieck construction and its cleavage"),
    "opfib": (cmd_opfib, "F-opfibration check of a discrete opfibration"),
    "model-opfib": (cmd_model_opfib, "model opfibration check by two routes"),
    "dbl-validate": (cmd_dbl_validate, "validate a double category or double barrel"),
    "restrict": (cmd_restrict, "restriction of a hom double barrel"),
    "restrict-up": (cmd_restrict_up, "universal property of a restriction"),
    "convert-model": (cmd_convert_model, "double category to pseudo-model and back"),
    "adjunction": (cmd_adjunction, "bounded loose adjunction check"),
    "terminal": (cmd_terminal, "bounded loose terminal check"),
    "vankampen": (cmd_vankampen, "bounded van Kampen check"),
}


def build_parser():
    p = argparse.ArgumentParser(prog="loosebimod", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, hlp) in COMMANDS.items():
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--input", help="instance file (JSON)")
        s.add_argument("--output", help="write the constructed object here (JSON)")
        s.add_argument("--bound", type=int, help="apex or value bound (default %d where it applies)" % APEX_BOUND)
        s.add_argument("--size", type=int, help="size or truncation bound (default %d where it applies)" % SIZE_BOUND)
        s.add_argument("--format", choices=["json", "text"], default="text")
        s.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        s.add_argument("--timing", action="store_true", help="add wall-clock time to the report")
        if name in ("dbl-validate", "restrict", "restrict-up", "convert-model", "adjunction", "terminal", "vankampen"):
            s.add_argument("--instance", help="named instance instead of --input")
        if name in ("restrict", "restrict-up"):
            s.add_argument("--along", default="id", help="id, point or point-point")
        if name == "adjunction":
            s.add_argument("--left", default="diag")
            s.add_argument("--right", default="coprod")
            s.add_argument("--factor", type=int, default=2, help="the fixed set x for Rel")
            s.add_argument("--perm-seed", type=int, default=None, help="rename elements of sums")
            s.add_argument("--sample-rate", type=float, default=0.05)
        if name == "terminal":
            s.add_argument("--object", type=int, default=0)
    return p


def format_text(rep):
    lines = ["%s: %s" % (rep["command"], rep["verdict"])]
    for k in sorted(rep):
        if k in ("command", "property", "verdict", "violations"):
            continue
        lines.append("  %s: %s" % (k, ser.dump_json(rep[k])))
    for v in rep["violations"]:
        lines.append("  - %s" % ser.dump_json(v))
    return "\n".join(lines)


def exit_code(rep):
    return 1 if rep["verdict"] == "fail" else 0


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    t = time.perf_counter()
    try:
        rep = COMMANDS[args.command][0](args)
    except (InputError, ser.FormatError, fc.CapExceeded, lu.ApexBoundError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    if args.timing:
        rep["seconds"] = round(time.perf_counter() - t, 3)
    if args.format == "json":
        out.write(ser.dump_json(rep) + "\n")
    else:
        out.write(format_text(rep) + "\n")
    return exit_code(rep)


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
