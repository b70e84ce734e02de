"""Equivalence relations on a model: congruence axioms, splitting maps,
the induced hull system, pair decomposition, and comparability.

The congruence axioms are the Sherstnev-Kalinin conditions SK1-SK4b; a
relation additionally satisfying SK4a' (unrelated elements are separated
by a splitting map) is a dimension equivalence relation (DER).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, hull as hull_mod
from .errors import (
    InternalInvariant,
    NotDer,
    NotSkCongruence,
    OverlappingClasses,
    UnknownElement,
)

AXES = ("SK1", "SK2", "SK3d", "SK3e", "SK4a", "SK4b")


class EquivRel:
    """A partition of the elements; class ids are dense, zero's class first."""

    __slots__ = ("E", "class_of", "classes", "_cache")

    def __init__(self, E, class_of):
        self.E = E
        arr = np.asarray(class_of, dtype=np.int8).copy()
        groups = {}
        for e in range(E.n):
            groups.setdefault(int(arr[e]), []).append(e)
        ordered = sorted(groups.values())
        relabeled = np.zeros(E.n, dtype=np.int8)
        for cid, members in enumerate(ordered):
            for e in members:
                relabeled[e] = cid
        relabeled.flags.writeable = False
        self.class_of = relabeled
        self.classes = tuple(tuple(m) for m in ordered)
        self._cache = {}

    def sim(self, e, f):
        return self.class_of[e] == self.class_of[f]

    @property
    def sk(self):
        """Verified congruence status: True/False once checked, else None."""
        rep = self._cache.get("der_report") or self._cache.get("sk_report")
        return None if rep is None else rep.sk

    @property
    def der(self):
        """Verified dimension-relation status, None until check_der runs."""
        rep = self._cache.get("der_report")
        if rep is not None:
            return rep.der
        base = self._cache.get("sk_report")
        if base is not None and not base.sk:
            return False
        return None

    def __eq__(self, other):
        return isinstance(other, EquivRel) and self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)

    def __getstate__(self):
        return {"classes": self.classes, "E": self.E}

    def __setstate__(self, state):
        # rebuilt without the derived cache; recomputed on demand
        E = state["E"]
        arr = np.zeros(E.n, dtype=np.int8)
        for cid, members in enumerate(state["classes"]):
            for e in members:
                arr[e] = cid
        self.__init__(E, arr)

    def __repr__(self):
        named = [[self.E.names[e] for e in c] for c in self.classes]
        return f"EquivRel({named})"


def build_equiv(E, classes):
    """Partition from explicit classes; unlisted elements become singletons."""
    seen = set()
    for cls in classes:
        for x in cls:
            i = x if isinstance(x, int) else None
            if i is None:
                if x not in E.names:
                    raise UnknownElement(f"{x!r}")
                i = E.index(x)
            if i < 0 or i >= E.n:
                raise UnknownElement(f"index {i}")
            if i in seen:
                raise OverlappingClasses(f"element {E.names[i]} listed twice")
            seen.add(i)
    class_of = list(range(E.n))
    nxt = E.n
    for cls in classes:
        ids = [x if isinstance(x, int) else E.index(x) for x in cls]
        for i in ids:
            class_of[i] = nxt
        nxt += 1
    return EquivRel(E, _dense(class_of))


def _dense(ids):
    remap = {}
    out = []
    for c in ids:
        if c not in remap:
            remap[c] = len(remap)
        out.append(remap[c])
    return out


def equality_relation(E):
    return EquivRel(E, list(range(E.n)))


# ---------------------------------------------------------------------------
# axiom reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple = None


@dataclass(frozen=True)
class SkReport:
    sk1: Verdict
    sk2: Verdict
    sk3d: Verdict
    sk3e: Verdict
    sk4a: Verdict
    sk4b: Verdict
    sk4a_prime: Verdict = None

    @property
    def sk(self):
        return all(
            v.ok for v in (self.sk1, self.sk2, self.sk3d, self.sk3e, self.sk4a, self.sk4b)
        )

    @property
    def der(self):
        return self.sk and self.sk4a_prime is not None and self.sk4a_prime.ok

    def first_failure(self):
        """(axiom name, witness) of the first failing axiom, or None."""
        pairs = zip(
            AXES + ("SK4a'",),
            (self.sk1, self.sk2, self.sk3d, self.sk3e, self.sk4a, self.sk4b,
             self.sk4a_prime),
        )
        for name, v in pairs:
            if v is not None and not v.ok:
                return name, v.witness
        return None


def check_sk(E, R):
    """Exhaustive verification of SK1-SK4b with lex-least witnesses.

    SK2 is checked as finite additivity over orthogonal pairs, which by
    induction covers every finite family a desk-scale model can carry.
    """
    if "sk_report" in R._cache:
        return R._cache["sk_report"]
    rows = _kernels.sk_witnesses(E.sum, E.diff, E.leq, R.class_of)
    verdicts = []
    widths = (1, 4, 3, 4, 2, 2)
    for k in range(6):
        bad = bool(rows[k, 0])
        witness = tuple(int(x) for x in rows[k, 1 : 1 + widths[k]]) if bad else None
        verdicts.append(Verdict(not bad, witness))
    report = SkReport(*verdicts)
    R._cache["sk_report"] = report
    return report


def related(E, R, e, f):
    """Nonzero equivalent subelements exist below e and f respectively."""
    return any(
        R.sim(e1, f1)
        for e1 in E.below(e)
        if e1 != 0
        for f1 in E.below(f)
        if f1 != 0
    )


def subequiv(E, R, e, f):
    """e is equivalent to some subelement of f."""
    return any(R.sim(e, f1) for f1 in E.below(f))


def is_hereditary(E, R, S):
    """Order ideal closed under taking sub-equivalent elements."""
    S = frozenset(int(x) for x in S)
    return all(
        (e in S) for h in S for e in range(E.n) if subequiv(E, R, e, h)
    ) and all(t in S for h in S for t in E.below(h))


def is_descendent(E, R, d, e):
    return all(related(E, R, x, e) for x in E.below(d) if x != 0)


@dataclass(frozen=True)
class RelationQueries:
    subequiv: object
    related: object
    is_hereditary: object
    is_descendent: object


def relation_queries(E, R):
    return RelationQueries(
        subequiv=lambda e, f: subequiv(E, R, e, f),
        related=lambda e, f: related(E, R, e, f),
        is_hereditary=lambda S: is_hereditary(E, R, S),
        is_descendent=lambda d, e: is_descendent(E, R, d, e),
    )


# ---------------------------------------------------------------------------
# splitting maps and the induced hull system
# ---------------------------------------------------------------------------

def splits(E, R, pi):
    """No nonzero equivalent pair straddles the summand and its complement."""
    comp = [e for e in range(E.n) if pi(e) == 0]
    return not any(
        R.sim(e, f) and (e, f) != (0, 0)
        for e in pi.summand
        for f in comp
    )


def sigma_sim(E, R, S, verify=None):
    """The splitting members of the exocenter, as a boolean subalgebra.

    When the relation is a verified congruence (``verify`` defaults to its
    cached status), the four equivalent characterizations of splitting are
    evaluated per map and asserted to agree, and the result is checked to
    be a boolean subalgebra containing 0 and 1.
    """
    if verify is None:
        rep = R._cache.get("sk_report")
        verify = rep.sk if rep is not None else False
    chosen = []
    for pi in S:
        a = splits(E, R, pi)
        if verify:
            summand = set(pi.summand)
            b = all(
                f in summand
                for e in summand
                for f in range(E.n)
                if R.sim(f, e)
            )
            c = is_hereditary(E, R, summand)
            comp = [e for e in range(E.n) if pi(e) == 0]
            d = all(not related(E, R, e, f) for e in summand for f in comp)
            if not (a == b == c == d):
                raise InternalInvariant(
                    f"splitting characterizations disagree for {pi!r}"
                )
        if a:
            chosen.append(pi)
    from .exocenter import ExoSet

    sigma = ExoSet(E, chosen)
    if verify:
        if sigma.zero not in sigma or sigma.one not in sigma:
            raise InternalInvariant("splitting algebra misses 0 or 1")
        for p in sigma:
            if sigma.complement(p) not in sigma:
                raise InternalInvariant("splitting algebra not complement-closed")
            for q in sigma:
                if sigma.meet(p, q) not in sigma or sigma.join(p, q) not in sigma:
                    raise InternalInvariant("splitting algebra not lattice-closed")
    return sigma


def induced_hull(E, R, sigma):
    """Hull system eta_e = meet of splitting maps fixing e, validated."""
    key = ("induced_hull", sigma.maps)
    if key in R._cache:
        return R._cache[key]
    maps = []
    for e in range(E.n):
        fixing = [pi for pi in sigma if pi(e) == e]
        if not fixing:
            raise InternalInvariant(f"no splitting map fixes {E.names[e]}")
        maps.append(sigma.meet_all(fixing))
    H = hull_mod.hull_system(E, sigma, maps)
    theta = set(H.maps)
    if not theta <= set(sigma.maps):
        raise InternalInvariant("hull maps escape the splitting algebra")
    for pi in sigma:
        for e in range(E.n):
            if (pi(e) == 0) != sigma.meet(pi, H.eta(e)).is_zero:
                raise InternalInvariant("kill/disjointness equivalence fails")
    R._cache[key] = H
    return H


def check_der(E, R, sigma):
    """Augment a congruence report with the separation axiom SK4a'.

    Separation by a splitting map is computed directly and through the
    equivalent hull-meet form; the two must agree pairwise.
    """
    base = check_sk(E, R)
    if not base.sk:
        raise NotSkCongruence(str(base.first_failure()))
    if "der_report" in R._cache:
        return R._cache["der_report"]
    H = induced_hull(E, R, sigma)
    ok = True
    witness = None
    for e in range(E.n):
        for f in range(E.n):
            if related(E, R, e, f):
                continue
            direct = any(pi(e) == e and pi(f) == 0 for pi in sigma)
            via_hull = sigma.meet(H.eta(e), H.eta(f)).is_zero
            if direct != via_hull:
                raise InternalInvariant(
                    "separation and hull-meet forms disagree at "
                    f"({E.names[e]}, {E.names[f]})"
                )
            if not direct and ok:
                ok = False
                witness = (e, f)
    report = SkReport(
        base.sk1, base.sk2, base.sk3d, base.sk3e, base.sk4a, base.sk4b,
        sk4a_prime=Verdict(ok, witness),
    )
    R._cache["der_report"] = report
    return report


# ---------------------------------------------------------------------------
# pair decomposition and comparability
# ---------------------------------------------------------------------------

def decompose_pair(E, R, p, q):
    """Split p and q into an equivalent part and an unrelated remainder.

    Greedily accumulates a maximal family of equivalent orthogonal pairs
    inside the two intervals (deterministically, in element order); the
    running sums stay equivalent by finite additivity.  Returns
    (p1, p2, q1, q2) with p = p1 + p2, q = q1 + q2, p1 ~ q1 and p2
    unrelated to q2.
    """
    a, b = 0, 0
    grown = True
    while grown:
        grown = False
        for x in range(1, E.n):
            ax = E.sum_of(a, x)
            if ax is None or not E.leq[ax, p]:
                continue
            for y in range(1, E.n):
                if not R.sim(x, y):
                    continue
                by = E.sum_of(b, y)
                if by is None or not E.leq[by, q]:
                    continue
                a, b = ax, by
                grown = True
                break
            if grown:
                break
    p1, q1 = a, b
    p2, q2 = E.sub(p, p1), E.sub(q, q1)
    if not R.sim(p1, q1) or related(E, R, p2, q2):
        raise InternalInvariant(
            f"pair decomposition contract fails for ({E.names[p]}, {E.names[q]})"
        )
    return p1, p2, q1, q2


def comparability(E, R, sigma, e, f):
    """A splitting direction d with eta_d e below-equivalent to eta_d f
    and the complement the other way around."""
    rep = R._cache.get("der_report")
    if rep is None or not rep.der:
        raise NotDer("comparability needs a verified dimension relation")
    H = induced_hull(E, R, sigma)
    e1, e2, f1, f2 = decompose_pair(E, R, e, f)
    d = f2
    pi = H.eta(d)
    pic = sigma.complement(pi)
    if not subequiv(E, R, pi(e), pi(f)) or not subequiv(E, R, pic(f), pic(e)):
        raise InternalInvariant("comparability contract fails")
    return d
