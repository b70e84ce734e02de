"""Hull systems, hull-determining sets, monads, dyads, and divisibility.

A hull system assigns to every element e a map eta_e in the exocenter
with eta_0 = 0, eta_e(e) = e, and eta_{eta_e f} = eta_e o eta_f =
eta_e ^ eta_f.  The relation e ~ f iff eta_e = eta_f behaves like a
dimension equivalence when the system is divisible.
"""

import itertools
from dataclasses import dataclass

from . import core
from .errors import InternalInvariant, MapNotInExocenter, NotHullDetermining


class HullSystem:
    """A fully materialized family of hull maps, one per element."""

    __slots__ = ("E", "exoset", "maps")

    def __init__(self, E, exoset, maps):
        self.E = E
        self.exoset = exoset
        self.maps = tuple(maps)
        if len(self.maps) != E.n:
            raise ValueError("need one map per element")

    def eta(self, e):
        return self.maps[e]

    @property
    def theta(self):
        """The set of distinct hull maps (the eta-exocenter)."""
        return tuple(sorted(set(self.maps)))

    def __eq__(self, other):
        return isinstance(other, HullSystem) and self.maps == other.maps

    def __hash__(self):
        return hash(self.maps)

    def __repr__(self):
        return f"HullSystem({[m.image.tolist() for m in self.maps]})"


def check_hull_system(E, S, maps):
    """Verify HS1-HS3 for a candidate family; returns (ok, witness)."""
    maps = tuple(maps)
    for m in maps:
        if m not in S:
            raise MapNotInExocenter(f"{m!r}")
    if not maps[0].is_zero:
        return False, "HS1: map at zero is not the zero map"
    for e in range(E.n):
        if maps[e](e) != e:
            return False, f"HS2: map at {E.names[e]} does not fix it"
    for e in range(E.n):
        for f in range(E.n):
            lhs = maps[maps[e](f)]
            m1 = [maps[e](maps[f](x)) for x in range(E.n)]
            m2 = [maps[f](maps[e](x)) for x in range(E.n)]
            if m1 != m2 or lhs.image.tolist() != m1:
                return False, f"HS3 fails at ({E.names[e]}, {E.names[f]})"
    return True, None


def hull_system(E, S, maps):
    ok, witness = check_hull_system(E, S, maps)
    if not ok:
        raise InternalInvariant(f"not a hull system: {witness}")
    return HullSystem(E, S, maps)


def hull_from_hd(E, S, theta):
    """Hull system determined by a hull-determining subset of the exocenter.

    HD1: for each element some smallest member fixes it; HD2: the set is
    closed under theta ^ xi'.  The resulting family is verified to be a
    hull system.
    """
    theta = list(theta)
    for m in theta:
        if m not in S:
            raise MapNotInExocenter(f"{m!r}")
    members = set(theta)
    for t in theta:
        for x in theta:
            if S.meet(t, S.complement(x)) not in members:
                raise NotHullDetermining(
                    "HD2", f"{t!r} ^ {x!r}' is missing from the set"
                )
    maps = []
    for e in range(E.n):
        fixing = [t for t in theta if t(e) == e]
        smallest = [t for t in fixing if all(S.leq(t, u) for u in fixing)]
        if not smallest:
            raise NotHullDetermining(
                "HD1", f"no smallest map fixing {E.names[e]}"
            )
        maps.append(smallest[0])
    return hull_system(E, S, maps)


def gamma_hull(E, S):
    """The exocentral cover system: smallest exocenter map fixing each element."""
    from .exocenter import exocentral_cover

    return hull_system(E, S, [exocentral_cover(E, S, e) for e in range(E.n)])


def indiscrete_hull(E, S):
    """eta_e = identity for nonzero e, zero map at zero."""
    maps = [S.zero] + [S.one] * (E.n - 1)
    return hull_system(E, S, maps)


def enumerate_hull_systems(E, S):
    """All hull systems on the model, deterministically ordered.

    Backtracks over assignments in a linear extension of the order so the
    HS3 constraint eta_{eta_e f} = eta_e ^ eta_f only ever references maps
    that are already placed.
    """
    n = E.n
    order = sorted(range(n), key=lambda e: (int(E.leq[:, e].sum()), e))
    assert order[0] == 0
    fixing = {e: [m for m in S if m(e) == e] for e in range(n)}
    maps = [None] * n
    maps[0] = S.zero
    found = []

    def consistent(upto):
        done = order[: upto + 1]
        for e in done:
            for f in done:
                g = maps[e](f)
                if maps[g] is None:
                    continue
                meet = S.meet(maps[e], maps[f])
                if maps[g] != meet:
                    return False
                comp = [maps[e](maps[f](x)) for x in range(n)]
                if comp != meet.image.tolist():
                    return False
        return True

    def rec(k):
        if k == n:
            found.append(HullSystem(E, S, list(maps)))
            return
        e = order[k]
        for cand in fixing[e]:
            maps[e] = cand
            if consistent(k):
                rec(k + 1)
        maps[e] = None

    rec(1)
    found.sort(key=lambda h: tuple(m._key for m in h.maps))
    return tuple(found)


# ---------------------------------------------------------------------------
# the relation eta_e = eta_f and its classification
# ---------------------------------------------------------------------------

def sim_eta(H, e, f):
    return H.eta(e) == H.eta(f)


@dataclass(frozen=True)
class EtaFlags:
    monad: bool
    dyad: bool
    faithful: bool


def classify_eta(H, p):
    E = H.E
    monad = all(e == p for e in E.below(p) if sim_eta(H, e, p))
    dyad = any(
        E.sum_of(e, f) == p and sim_eta(H, e, f)
        for e in E.below(p)
        for f in E.below(p)
    )
    return EtaFlags(monad=monad, dyad=dyad, faithful=H.eta(p).is_identity)


@dataclass(frozen=True)
class DivisibilityReport:
    divisible: bool
    witness: object
    dyad_criterion_agrees: bool


def is_divisible(E, H):
    """Direct search for the defining splittings, cross-checked per triple
    against the equivalent dyad criterion (the meet-image of the target
    must be a dyad)."""
    S = H.exoset
    witness = None
    divisible = True
    for p in range(E.n):
        for s in range(E.n):
            for t in range(E.n):
                if E.sum_of(s, t) is None:
                    continue
                if not sim_eta_elements(H, p, E.sum_of(s, t)):
                    continue
                direct = any(
                    E.sum_of(e, f) == p
                    and H.eta(e) == H.eta(s)
                    and H.eta(f) == H.eta(t)
                    for e in E.below(p)
                    for f in E.below(p)
                )
                target = S.meet(H.eta(s), H.eta(t))(p)
                via_dyad = classify_eta(H, target).dyad
                if direct != via_dyad:
                    raise InternalInvariant(
                        f"divisibility checks disagree at "
                        f"({E.names[p]}, {E.names[s]}, {E.names[t]})"
                    )
                if not direct and divisible:
                    divisible = False
                    witness = (p, s, t)
    return DivisibilityReport(divisible, witness, True)


def sim_eta_elements(H, e, f):
    return H.eta(e) == H.eta(f)


# ---------------------------------------------------------------------------
# type-determining subsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TdReport:
    closure: frozenset  # orthosums of eta-orthogonal families in T
    image: frozenset  # {eta_e t}
    eta_td: bool
    eta_std: bool
    t_star: object  # element index or None


def td_sets(E, H, T):
    T = sorted(set(int(x) for x in T))
    S = H.exoset
    closure = {0}
    nonzero = [t for t in T if t != 0]
    for r in range(1, len(nonzero) + 1):
        for pick in itertools.combinations(nonzero, r):
            if all(
                S.disjoint(H.eta(a), H.eta(b))
                for a, b in itertools.combinations(pick, 2)
            ):
                v = core.orthosum_family(E, pick)
                if v is None:
                    raise InternalInvariant(
                        f"eta-orthogonal family {pick} is not orthosummable"
                    )
                closure.add(v)
    image = {H.eta(e)(t) for e in range(E.n) for t in T}
    ts = set(T)
    eta_td = ts == closure == image
    order_ideal = all(x in ts for t in T for x in E.below(t))
    eta_std = order_ideal and ts == closure
    t_star = None
    if eta_td:
        best = [t for t in T if all(S.leq(H.eta(u), H.eta(t)) for u in T)]
        if not best:
            raise InternalInvariant("type-determining set has no largest hull map")
        t_star = best[0]
    if eta_std and not eta_td:
        raise InternalInvariant("strongly type-determining set is not type-determining")
    return TdReport(frozenset(closure), frozenset(image), eta_td, eta_std, t_star)


def sk3e_split_eta(E, H, e, f, s, t):
    """Split e + f = s + t into a 2x2 grid matched by hull equivalence.

    Existence is guaranteed for every hull system, so a fruitless search
    flags a bug.  Returns (e1, e2, f1, f2) with e = e1 + e2, f = f1 + f2,
    e1 + f1 ~ s and e2 + f2 ~ t under the hull relation, found in
    lexicographic order.
    """
    if E.sum_of(e, f) is None or E.sum_of(e, f) != E.sum_of(s, t):
        raise ValueError("need e + f = s + t defined")
    for e1 in E.below(e):
        e2 = E.sub(e, e1)
        for f1 in E.below(f):
            f2 = E.sub(f, f1)
            a = E.sum_of(e1, f1)
            b = E.sum_of(e2, f2)
            if a is None or b is None:
                continue
            if H.eta(a) == H.eta(s) and H.eta(b) == H.eta(t):
                return (e1, e2, f1, f2)
    raise InternalInvariant(
        f"no hull-matched refinement for {E.names[e]}+{E.names[f]}="
        f"{E.names[s]}+{E.names[t]}"
    )


def eta_partition(E, H):
    """Partition of the elements by equal hull maps (the relation classes)."""
    groups = {}
    for e in range(E.n):
        groups.setdefault(H.eta(e)._key, []).append(e)
    return sorted(groups.values())
