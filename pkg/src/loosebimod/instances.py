"""Named instances shared by the command line, the demos and the tests."""
from .doublecat import (barrel_fibres, cocycle_double, hom_double_barrel, identity_double_functor,
                        loose_double, point_functor, product_double, relabel_double_functor,
                        terminal_double, tight_double, walking_loose_arrow)
from .fincore import poset_category
from .looseuniv import coproduct_cocone, empty_cocone, pushout_cocone, span_fragment, span_fragment_bounded, terminal_cocone


def _p2():
    return poset_category(2, lambda i, j: i <= j)


DOUBLES = {
    "walking-loose": walking_loose_arrow,
    "terminal": terminal_double,
    "cocycle": cocycle_double,
    "tight-p2": lambda: tight_double(_p2()),
    "loose-p2": lambda: loose_double(_p2()),
    "cocycle-x-wl": lambda: product_double(cocycle_double(), walking_loose_arrow()),
    "span-fragment": span_fragment,
    "span-small": lambda: span_fragment_bounded(1, 1),
}


def double(name):
    try:
        return DOUBLES[name]()
    except KeyError:
        raise ValueError("unknown double category %r (choose from %s)" % (name, ", ".join(sorted(DOUBLES))))


def along(name, D0, D1):
    """Double functors ``(F0, F1)`` into the fibres of a hom barrel."""
    if name == "id":
        return identity_double_functor(D0), identity_double_functor(D1)
    if name == "point":
        return point_functor(D0, 0), identity_double_functor(D1)
    if name == "point-point":
        return point_functor(D0, 0), point_functor(D1, 0)
    raise ValueError("unknown functor pair %r (choose from id, point, point-point)" % name)


def restriction_setup(name, along_name):
    """Hom barrel of the named instance and the functors to restrict along."""
    B = hom_double_barrel(double(name))
    D0, D1 = barrel_fibres(B)
    F0, F1 = along(along_name, D0, D1)
    return B, F0, F1


def strip_functors(R, F0, F1):
    """Label strips from the fibres of a restriction back to the domains
    of ``F0`` and ``F1``: the canonical boundary of the restriction."""
    N0, N1 = barrel_fibres(R.barrel)

    def strip(Nf, A):
        return relabel_double_functor(Nf, A, lambda o: o[1], lambda f: f[1], lambda m: m[1], lambda s: s[1])

    return strip(N0, F0.dom), strip(N1, F1.dom)


def cocone(desc):
    """``coproduct:a,b``, ``pushout:l,m,r`` (both maps constant at 0),
    ``terminal:a`` or ``empty``."""
    kind, _, args = desc.partition(":")
    nums = [int(x) for x in args.split(",") if x] if args else []
    if kind == "coproduct" and len(nums) == 2:
        return coproduct_cocone(*nums)
    if kind == "pushout" and len(nums) == 3:
        l, m, r = nums
        if (m and not l) or (m and not r):
            raise ValueError("pushout legs need non-empty targets")
        return pushout_cocone(l, m, r, (0,) * m, (0,) * m)
    if kind == "terminal" and len(nums) == 1:
        return terminal_cocone(nums[0])
    if kind == "empty":
        return empty_cocone()
    raise ValueError("unknown cocone %r" % desc)
