"""The exocenter: idempotent decreasing endomorphisms, and the center.

The exocenter of a model is computed by enumerating complementary ideal
pairs (every direct-sum decomposition E = H + K induces the coordinate
projection onto H and vice versa); the brute-force filter of all n**n
self-maps by the four defining conditions is kept as an independent
oracle and must agree.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels, core
from .errors import InternalInvariant, NotInExocenter


class ExoMap:
    """A decreasing idempotent endomorphism, stored as its image vector."""

    __slots__ = ("image", "n", "_key")

    def __init__(self, image):
        arr = np.asarray(image, dtype=np.int8).copy()
        arr.flags.writeable = False
        self.image = arr
        self.n = len(arr)
        self._key = arr.tobytes()

    def __call__(self, e):
        return int(self.image[e])

    @property
    def summand(self):
        """The direct summand pi(E), i.e. the fixed points."""
        return tuple(e for e in range(self.n) if self.image[e] == e)

    @property
    def is_zero(self):
        return not self.image.any()

    @property
    def is_identity(self):
        return all(self.image[e] == e for e in range(self.n))

    def __eq__(self, other):
        return isinstance(other, ExoMap) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ExoMap({self.image.tolist()})"


class ExoSet:
    """A finite set of exocenter maps with the induced boolean operations.

    Order: pi <= xi iff pi o xi = pi.  Meet is composition, complement is
    pointwise difference, join is by De Morgan.  Operations assert that
    their results stay inside the set (they do for the full exocenter and
    for any boolean subalgebra of it).
    """

    def __init__(self, E, maps):
        self.E = E
        self.maps = tuple(sorted(set(maps)))
        self._pos = {m._key: i for i, m in enumerate(self.maps)}
        self.zero = ExoMap(np.zeros(E.n, dtype=np.int8))
        self.one = ExoMap(np.arange(E.n, dtype=np.int8))

    def __iter__(self):
        return iter(self.maps)

    def __len__(self):
        return len(self.maps)

    def __contains__(self, m):
        return isinstance(m, ExoMap) and m._key in self._pos

    def __eq__(self, other):
        return isinstance(other, ExoSet) and self.maps == other.maps

    def __hash__(self):
        return hash(self.maps)

    def require(self, m):
        if m not in self:
            raise NotInExocenter(f"{m!r} is not a member")

    def _member(self, image):
        m = ExoMap(image)
        if m not in self:
            raise InternalInvariant(f"operation left the set: {m!r}")
        return m

    def complement(self, p):
        E = self.E
        img = [E.sub(e, p(e)) for e in range(E.n)]
        return self._member(img)

    def meet(self, p, q):
        a = [p(q(e)) for e in range(self.E.n)]
        b = [q(p(e)) for e in range(self.E.n)]
        if a != b:
            raise InternalInvariant("composition of exocenter maps is not commutative")
        return self._member(a)

    def join(self, p, q):
        return self.complement(self.meet(self.complement(p), self.complement(q)))

    def leq(self, p, q):
        return all(p(q(e)) == p(e) for e in range(self.E.n))

    def disjoint(self, p, q):
        return self.meet(p, q).is_zero

    def meet_all(self, maps):
        out = self.one
        for m in maps:
            out = self.meet(out, m)
        return out

    def join_all(self, maps):
        out = self.zero
        for m in maps:
            out = self.join(out, m)
        return out


def exocenter(E):
    """GEX(E) via complementary ideal pairs.  Cached per table."""
    if "exocenter" in E._cache:
        return E._cache["exocenter"]
    ideals = core.all_ideals(E)
    seen = {}
    for H in ideals:
        for K in ideals:
            pi = _projection(E, H, K)
            if pi is not None:
                seen[pi._key] = pi
    out = ExoSet(E, seen.values())
    if out.zero not in out or out.one not in out:
        raise InternalInvariant("exocenter is missing zero or identity")
    E._cache["exocenter"] = out
    return out


def _projection(E, H, K):
    """Coordinate projection onto H when E = H + K, else None."""
    if H & K != {0}:
        return None
    img = np.full(E.n, -1, dtype=np.int8)
    for h in H:
        for k in K:
            v = E.sum_of(h, k)
            if v is None:
                return None
            if img[v] >= 0:
                return None  # decomposition not unique
            img[v] = h
    if (img < 0).any():
        return None
    return ExoMap(img)


def brute_force_exomaps(E):
    """Oracle: filter all n**n self-maps by EXC1-EXC4."""
    rows = _kernels.brute_exomaps(E.sum, E.leq)
    if rows.shape[0] == 0 and E.n >= 1:
        raise InternalInvariant("brute-force exocenter filter overflowed or found nothing")
    return ExoSet(E, (ExoMap(r) for r in rows))


@dataclass(frozen=True)
class BooleanOps:
    complement: ExoMap
    meet: ExoMap
    join: ExoMap
    leq: bool
    disjoint: bool


def exo_boolean_ops(S, p, q):
    S.require(p)
    S.require(q)
    return BooleanOps(
        complement=S.complement(p),
        meet=S.meet(p, q),
        join=S.join(p, q),
        leq=S.leq(p, q),
        disjoint=S.disjoint(p, q),
    )


def center(E, S=None):
    """Central elements with their projections, cross-validated.

    An element is central iff its interval is a direct summand; this is
    recomputed from the three-condition characterization (unique bounded/
    orthogonal decomposition, principality, orthogonality closure) and the
    two answers must agree.
    """
    S = S if S is not None else exocenter(E)
    via_gex = {}
    for pi in S:
        M = set(pi.summand)
        tops = [c for c in M if all(E.leq[m, c] for m in M)]
        if tops and M == set(E.below(tops[0])):
            via_gex[tops[0]] = pi
    via_def = set()
    for c in range(E.n):
        if _central_by_definition(E, c):
            via_def.add(c)
    if set(via_gex) != via_def:
        raise InternalInvariant(
            f"central-element characterizations disagree: "
            f"{sorted(via_gex)} vs {sorted(via_def)}"
        )
    return [(c, via_gex[c]) for c in sorted(via_gex)]


def _central_by_definition(E, c):
    if not core.is_principal(E, c):
        return False
    for e in range(E.n):
        decomps = [
            (e1, e2)
            for e1 in E.below(c)
            for e2 in range(E.n)
            if E.perp(e2, c) and E.sum_of(e1, e2) == e
        ]
        if len(decomps) != 1:
            return False
    for p in range(E.n):
        for q in range(E.n):
            if E.perp(p, q) and E.perp(p, c) and E.perp(q, c):
                s = E.sum_of(p, q)
                if not E.perp(s, c):
                    return False
    return True


def exocentral_cover(E, S, e):
    """The smallest map in S fixing e."""
    fixing = [pi for pi in S if pi(e) == e]
    if not fixing:
        raise InternalInvariant(f"no exocenter map fixes element {e}")
    cover = S.meet_all(fixing)
    if cover(e) != e:
        raise InternalInvariant("cover does not fix its element")
    return cover


def gex_orthogonal_subsets(E, S):
    """Subsets of nonzero elements whose exocentral covers are disjoint.

    A family with a repeated nonzero element can never be GEX-orthogonal,
    so subsets (plus irrelevant zeros) capture all GEX-orthogonal families
    of a finite model.
    """
    covers = {e: exocentral_cover(E, S, e) for e in range(1, E.n)}
    out = []
    for r in range(0, E.n):
        for pick in itertools.combinations(range(1, E.n), r):
            if all(
                S.disjoint(covers[a], covers[b])
                for a, b in itertools.combinations(pick, 2)
            ):
                out.append(pick)
    return out


@dataclass(frozen=True)
class CogeaReport:
    co1: bool
    co2: bool
    gex_complete_boolean: bool
    witness: object


def cogea_check(E, S):
    """Central orthocompleteness (CO1, CO2) and boolean completeness.

    Finite models must pass all three; a failure flags a bug, but the
    verdicts are computed honestly by exhaustion rather than assumed.
    """
    co1, co2, witness = True, True, None
    for pick in gex_orthogonal_subsets(E, S):
        total = core.orthosum_family(E, pick)
        if total is None:
            co1, witness = False, ("CO1", pick)
            continue
        for f in range(E.n):
            if all(E.perp(f, a) for a in pick) and not E.perp(f, total):
                co2 = co2 and False
                witness = witness or ("CO2", pick, f)
    boolean = _is_boolean_algebra(S)
    return CogeaReport(co1, co2, boolean, witness)


def _is_boolean_algebra(S):
    if S.zero not in S or S.one not in S:
        return False
    try:
        for p in S:
            c = S.complement(p)
            if not S.meet(p, c).is_zero or not S.join(p, c).is_identity:
                return False
            for q in S:
                S.meet(p, q)
                S.join(p, q)
        for p in S:
            for q in S:
                for r in S:
                    lhs = S.meet(p, S.join(q, r))
                    rhs = S.join(S.meet(p, q), S.meet(p, r))
                    if lhs != rhs:
                        return False
    except InternalInvariant:
        return False
    return True
