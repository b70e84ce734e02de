"""The verification suite: every structural fact the toolkit relies on,
checked exhaustively over the cataloged models.

Each property is registered under a content-describing name with a scope:

* ``model``    -- evaluated once per cataloged model;
* ``relation`` -- once per (model, congruence) pair that passes the
                  congruence axioms;
* ``der``      -- once per (model, relation) pair whose relation is a
                  verified dimension relation.

A property returns a list of witness strings (empty when it holds).
Internal-invariant failures raised by the library's own cross-checks are
converted into violations, so a broken construction surfaces here rather
than aborting the run.  ``invert`` flips a single property's verdict per
instance, as a sanity control that the harness can actually fail.
"""

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from multiprocessing import get_context

from . import catalog, congruence as cg, core, dimension as dm, hull as hull_mod
from .errors import InternalInvariant, UnknownPredicate
from .exocenter import brute_force_exomaps, center, cogea_check, exocenter
from .exocenter import _is_boolean_algebra

REGISTRY = {}


@dataclass(frozen=True)
class Property:
    name: str
    scope: str  # "model" | "relation" | "der"
    fn: object
    review_only: bool = False


def prop(name, scope, review_only=False):
    def register(fn):
        REGISTRY[name] = Property(name, scope, fn, review_only)
        return fn

    return register


# ---------------------------------------------------------------------------
# evaluation contexts
# ---------------------------------------------------------------------------

class ModelCtx:
    def __init__(self, entry):
        self.entry = entry
        self.E = entry.table

    @cached_property
    def gex(self):
        return exocenter(self.E)

    @cached_property
    def hulls(self):
        return hull_mod.enumerate_hull_systems(self.E, self.gex)

    @cached_property
    def structure(self):
        return core.structure_predicates(self.E)


class RelCtx:
    def __init__(self, model, rec):
        self.model = model
        self.E = model.E
        self.rec = rec
        self.R = rec.rel
        # reports are re-derived here because worker processes receive the
        # relation without its cached verdicts
        self.report = cg.check_sk(self.E, self.R)

    @cached_property
    def sigma(self):
        s = cg.sigma_sim(self.E, self.R, self.model.gex)
        if self.report.sk:
            cg.check_der(self.E, self.R, s)
        return s

    @cached_property
    def hull(self):
        return cg.induced_hull(self.E, self.R, self.sigma)

    @cached_property
    def dgea(self):
        return dm.Dgea(self.E, self.R)

    @cached_property
    def decomposition(self):
        return dm.decompose_types(self.E, self.R)


def _names(E, xs):
    return "(" + ", ".join(E.names[int(x)] for x in xs) + ")"


# ---------------------------------------------------------------------------
# model-scope properties
# ---------------------------------------------------------------------------

@prop("core-order-laws", "model")
def _core_order_laws(ctx):
    E = ctx.E
    out = []
    for e in range(E.n):
        for f in range(E.n):
            if E.leq[e, f] and E.sum_of(e, E.sub(f, e)) != f:
                out.append(f"difference law fails at {_names(E, (e, f))}")
    for d in range(E.n):
        for e in range(E.n):
            for f in range(E.n):
                de, df = E.sum_of(d, e), E.sum_of(d, f)
                if de is not None and df is not None and E.leq[de, df]:
                    if not E.leq[e, f]:
                        out.append(f"order cancellation fails at {_names(E, (d, e, f))}")
    for p in range(E.n):
        flags = core.element_predicates(E, p)
        if flags.principal and not flags.sharp:
            out.append(f"principal but not sharp: {E.names[p]}")
    s = ctx.structure
    if not (s.archimedean and s.dedekind_orthocomplete and s.orthocomplete):
        out.append("finite model fails an orthocompleteness flag")
    top = E.greatest()
    if top is not None:
        iv = core.interval_ea(E, top)
        if iv.table.sum.tolist() != E.sum.tolist():
            out.append("interval at the greatest element differs from the model")
    return out


@prop("exocenter-oracle", "model")
def _exocenter_oracle(ctx):
    fast = ctx.gex
    brute = brute_force_exomaps(ctx.E)
    if fast != brute:
        return ["ideal-pair exocenter differs from brute-force filter"]
    return []


@prop("exocenter-summand-bijection", "model")
def _exo_summand_bijection(ctx):
    E, S = ctx.E, ctx.gex
    out = []
    summands = {}
    for pi in S:
        key = pi.summand
        if key in summands:
            out.append(f"two maps share summand {key}")
        summands[key] = pi
    ideals = set(map(frozenset, core.all_ideals(E)))
    direct = set()
    for H in ideals:
        for K in ideals:
            from .exocenter import _projection

            if _projection(E, H, K) is not None:
                direct.add(tuple(sorted(H)))
    if direct != set(summands):
        out.append("direct summands and map images differ")
    for p in S:
        for q in S:
            if S.leq(p, q) != (set(p.summand) <= set(q.summand)):
                out.append("map order disagrees with summand inclusion")
    return out


@prop("exocenter-boolean-laws", "model")
def _exo_boolean_laws(ctx):
    E, S = ctx.E, ctx.gex
    out = []
    if not _is_boolean_algebra(S):
        out.append("exocenter is not a boolean algebra")
    for p in S:
        for q in S:
            m, j = S.meet(p, q), S.join(p, q)
            for e in range(E.n):
                pm = E.meet(p(e), q(e))
                pj = E.join(p(e), q(e))
                if pm is None or m(e) != pm:
                    out.append(f"pointwise meet fails at element {E.names[e]}")
                if pj is None or j(e) != pj:
                    out.append(f"pointwise join fails at element {E.names[e]}")
    return out


@prop("center-characterizations", "model")
def _center_checks(ctx):
    E, S = ctx.E, ctx.gex
    out = []
    try:
        pairs = center(E, S)
    except InternalInvariant as exc:
        return [str(exc)]
    top = E.greatest()
    if top is not None:
        if len(pairs) != len(S):
            out.append("unit model: center and exocenter sizes differ")
        for c, pi in pairs:
            if pi(top) != c:
                out.append(f"central element {E.names[c]} is not its map's top image")
    return out


@prop("cogea-conditions", "model")
def _cogea(ctx):
    rep = cogea_check(ctx.E, ctx.gex)
    if rep.co1 and rep.co2 and rep.gex_complete_boolean:
        return []
    return [f"central orthocompleteness fails: {rep.witness}"]


@prop("hull-roundtrip", "model")
def _hull_roundtrip(ctx):
    E, S = ctx.E, ctx.gex
    out = []
    for H in ctx.hulls:
        try:
            again = hull_mod.hull_from_hd(E, S, H.theta)
        except Exception as exc:
            out.append(f"hull family is not hull-determining: {exc}")
            continue
        if again != H:
            out.append("hull family does not re-determine itself")
    return out


@prop("hull-meet-projections", "model")
def _hull_meet_projections(ctx):
    E, S = ctx.E, ctx.gex
    out = []
    for H in ctx.hulls:
        for e in range(E.n):
            for f in range(E.n):
                e1 = H.eta(f)(e)
                f1 = H.eta(e)(f)
                if H.eta(e1) != H.eta(f1):
                    out.append(f"projected pair differs in hull at {_names(E, (e, f))}")
                nonzero = e1 != 0 and f1 != 0
                if nonzero != (not S.meet(H.eta(e), H.eta(f)).is_zero):
                    out.append(f"nonzero-meet criterion fails at {_names(E, (e, f))}")
                if not E.perp(e, f) and not nonzero:
                    out.append(f"non-orthogonal pair projects to zero at {_names(E, (e, f))}")
    return out


@prop("divisibility-dyad-criterion", "model")
def _divisibility(ctx):
    out = []
    for H in ctx.hulls:
        try:
            rep = hull_mod.is_divisible(ctx.E, H)
        except InternalInvariant as exc:
            out.append(str(exc))
            continue
        if not rep.dyad_criterion_agrees:
            out.append("dyad criterion disagrees with direct divisibility")
    return out


@prop("no-monads-implies-divisible", "model")
def _no_monads_divisible(ctx):
    E = ctx.E
    out = []
    for H in ctx.hulls:
        monads = [e for e in range(1, E.n) if hull_mod.classify_eta(H, e).monad]
        if not monads and not hull_mod.is_divisible(E, H).divisible:
            out.append("monad-free hull system is not divisible")
    return out


@prop("hull-grid-refinement", "model")
def _hull_grid(ctx):
    E = ctx.E
    out = []
    for H in ctx.hulls:
        for e in range(E.n):
            for f in range(E.n):
                v = E.sum_of(e, f)
                if v is None:
                    continue
                for s in range(E.n):
                    for t in range(E.n):
                        if E.sum_of(s, t) != v:
                            continue
                        try:
                            hull_mod.sk3e_split_eta(E, H, e, f, s, t)
                        except InternalInvariant:
                            out.append(
                                f"no hull-matched grid for {_names(E, (e, f, s, t))}"
                            )
    return out


@prop("td-largest-map", "model")
def _td_largest(ctx):
    E = ctx.E
    out = []
    for H in ctx.hulls:
        for r in range(E.n + 1):
            for T in itertools.combinations(range(E.n), r):
                try:
                    rep = hull_mod.td_sets(E, H, T)
                except InternalInvariant as exc:
                    out.append(f"{exc} for T={_names(E, T)}")
                    continue
                if rep.eta_std and not rep.eta_td:
                    out.append(f"strongly determining but not determining: {_names(E, T)}")
    return out


@prop("eta-orthosum-supremum", "model")
def _eta_orthosum_sup(ctx):
    E, S = ctx.E, ctx.gex
    out = []
    for H in ctx.hulls:
        for r in range(E.n):
            for pick in itertools.combinations(range(1, E.n), r):
                if not all(
                    S.disjoint(H.eta(a), H.eta(b))
                    for a, b in itertools.combinations(pick, 2)
                ):
                    continue
                total = core.orthosum_family(E, pick)
                if total is None:
                    out.append(f"hull-orthogonal family not summable: {_names(E, pick)}")
                    continue
                if core._sup_of(E, pick or (0,)) != total:
                    out.append(f"orthosum is not the supremum for {_names(E, pick)}")
    return out


@prop("eta-relation-congruence-iff-divisible", "model")
def _eta_rel_sk(ctx):
    E = ctx.E
    if not ctx.structure.orthogonally_ordered:
        return []
    out = []
    for H in ctx.hulls:
        classes = hull_mod.eta_partition(E, H)
        R = cg.build_equiv(E, [c for c in classes if len(c) > 1])
        sk = cg.check_sk(E, R).sk
        divisible = hull_mod.is_divisible(E, H).divisible
        if sk != divisible:
            out.append("hull relation congruence status differs from divisibility")
        if sk:
            for e in range(E.n):
                for f in range(E.n):
                    rel = cg.related(E, R, e, f)
                    meets = not ctx.gex.meet(H.eta(e), H.eta(f)).is_zero
                    if rel != meets:
                        out.append(f"relatedness vs hull meet fails at {_names(E, (e, f))}")
    return out


@prop("eta-splitting-roundtrip", "model")
def _eta_sigma_roundtrip(ctx):
    E, S = ctx.E, ctx.gex
    if not ctx.structure.orthogonally_ordered:
        return []
    out = []
    for H in ctx.hulls:
        if not hull_mod.is_divisible(E, H).divisible:
            continue
        classes = hull_mod.eta_partition(E, H)
        R = cg.build_equiv(E, [c for c in classes if len(c) > 1])
        if not cg.check_sk(E, R).sk:
            continue  # covered by the previous property
        sigma = cg.sigma_sim(E, R, S)
        try:
            again = hull_mod.hull_from_hd(E, S, sigma.maps)
        except Exception as exc:
            out.append(f"splitting algebra is not hull-determining: {exc}")
            continue
        if again != H:
            out.append("splitting algebra does not re-determine the hull system")
    return out


# ---------------------------------------------------------------------------
# relation-scope properties (congruence verified)
# ---------------------------------------------------------------------------

@prop("splitting-algebra", "relation")
def _splitting_algebra(ctx):
    try:
        cg.sigma_sim(ctx.E, ctx.R, ctx.model.gex, verify=True)
    except InternalInvariant as exc:
        return [str(exc)]
    return []


@prop("splitting-coordinatewise", "relation")
def _split_coordinatewise(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for pi in ctx.sigma:
        pic = ctx.sigma.complement(pi)
        for e in range(E.n):
            for f in range(E.n):
                lhs = R.sim(e, f)
                rhs = R.sim(pi(e), pi(f)) and R.sim(pic(e), pic(f))
                if lhs != rhs:
                    out.append(f"coordinatewise equivalence fails at {_names(E, (e, f))}")
    return out


@prop("induced-hull-contract", "relation")
def _induced_hull_contract(ctx):
    try:
        ctx.hull
    except InternalInvariant as exc:
        return [str(exc)]
    return []


@prop("splitting-preserves-subequiv", "relation")
def _split_subequiv(ctx):
    E, R = ctx.E, ctx.R
    H = ctx.hull
    out = []
    for e in range(E.n):
        for f in range(E.n):
            if cg.subequiv(E, R, e, f):
                if not ctx.sigma.leq(H.eta(e), H.eta(f)):
                    out.append(f"hull order misses sub-equivalence at {_names(E, (e, f))}")
                for pi in ctx.sigma:
                    if not cg.subequiv(E, R, pi(e), pi(f)):
                        out.append(f"projection breaks sub-equivalence at {_names(E, (e, f))}")
            lhs = ctx.sigma.leq(H.eta(e), H.eta(f))
            rhs = any(H.eta(e) == H.eta(f1) for f1 in E.below(f))
            if lhs != rhs:
                out.append(f"hull order vs hull-equivalent subelement at {_names(E, (e, f))}")
            if R.sim(e, f) and H.eta(e) != H.eta(f):
                out.append(f"equivalent pair has different hull maps {_names(E, (e, f))}")
    return out


@prop("equivalent-sum-cancellation", "relation")
def _equiv_sum_cancel(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for e in range(E.n):
        for f in range(E.n):
            ef = E.sum_of(e, f)
            if ef is None:
                continue
            for d in range(E.n):
                efd = E.sum_of(ef, d)
                if efd is None:
                    continue
                if R.sim(e, efd) and not R.sim(e, ef):
                    out.append(f"sum cancellation fails at {_names(E, (e, f, d))}")
    return out


@prop("subequiv-preorder-csb", "relation")
def _preorder_csb(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for e in range(E.n):
        if not cg.subequiv(E, R, e, e):
            out.append(f"sub-equivalence not reflexive at {E.names[e]}")
    for e in range(E.n):
        for f in range(E.n):
            for d in range(E.n):
                if (
                    cg.subequiv(E, R, e, f)
                    and cg.subequiv(E, R, f, d)
                    and not cg.subequiv(E, R, e, d)
                ):
                    out.append(f"sub-equivalence not transitive at {_names(E, (e, f, d))}")
            if cg.subequiv(E, R, e, f) and cg.subequiv(E, R, f, e):
                if not R.sim(e, f):
                    out.append(f"mutual sub-equivalence without equivalence {_names(E, (e, f))}")
    return out


@prop("subequiv-additivity", "relation")
def _subequiv_additive(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for e1 in range(E.n):
        for e2 in range(E.n):
            s = E.sum_of(e1, e2)
            if s is None:
                continue
            for f1 in range(E.n):
                for f2 in range(E.n):
                    t = E.sum_of(f1, f2)
                    if t is None:
                        continue
                    if (
                        cg.subequiv(E, R, e1, f1)
                        and cg.subequiv(E, R, e2, f2)
                        and not cg.subequiv(E, R, s, t)
                    ):
                        out.append(
                            f"additivity of sub-equivalence fails at "
                            f"{_names(E, (e1, e2, f1, f2))}"
                        )
    return out


@prop("pair-decomposition", "relation")
def _pair_decomposition(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for p in range(E.n):
        for q in range(E.n):
            try:
                cg.decompose_pair(E, R, p, q)
            except InternalInvariant as exc:
                out.append(str(exc))
    return out


@prop("hereditary-interval-disjointness", "relation")
def _hered_interval_disjoint(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for c in range(E.n):
        if not cg.is_hereditary(E, R, E.below(c)):
            continue
        for d in range(E.n):
            common = [x for x in range(1, E.n) if E.leq[x, d] and E.leq[x, c]]
            if not common and not E.perp(d, c):
                out.append(f"disjoint element not orthogonal at {_names(E, (c, d))}")
    return out


def _invariance_four_way(E, R, c):
    a = all(
        not (E.leq[c1, c] and R.sim(c1, f) and E.perp(f, c) and (c1 != 0 or f != 0))
        for c1 in range(E.n)
        for f in range(E.n)
    )
    sharp = core.is_sharp(E, c)
    b = sharp and cg.is_hereditary(E, R, E.below(c))
    cc = sharp and all(E.leq[e, c] for e in range(E.n) if R.sim(e, c))
    dd = sharp and cg.is_hereditary(E, R, [f for f in range(E.n) if E.perp(f, c)])
    return a, b, cc, dd


@prop("invariance-characterizations", "relation")
def _invariance(ctx):
    E, R = ctx.E, ctx.R
    out = []
    centrals = dict(dm._center_pairs(E))
    for c in range(E.n):
        a, b, cc, dd = _invariance_four_way(E, R, c)
        if not (a == b == cc == dd):
            out.append(f"unboundedness characterizations disagree at {E.names[c]}")
        decomposable = all(
            any(
                E.sum_of(e1, e2) == e
                for e1 in E.below(c)
                for e2 in range(E.n)
                if E.perp(e2, c)
            )
            for e in range(E.n)
        )
        if a and decomposable and c not in centrals:
            out.append(f"decomposable invariant candidate not central: {E.names[c]}")
        principal = core.is_principal(E, c)
        lhs = principal and cg.is_hereditary(E, R, E.below(c))
        rhs = c in centrals and cg.splits(E, R, centrals[c])
        if lhs != rhs:
            out.append(f"principal-hereditary vs central-splitting at {E.names[c]}")
        if a and ctx.model.structure.directed and c not in centrals:
            out.append(f"directed model: invariant candidate not central {E.names[c]}")
        if a and ctx.model.structure.orthogonally_ordered and not principal:
            out.append(f"orthogonally ordered: candidate not principal {E.names[c]}")
    try:
        dm.invariant_sets(E, R, ctx.sigma, ctx.hull)
    except InternalInvariant as exc:
        out.append(str(exc))
    return out


@prop("invariant-lattice", "relation")
def _invariant_lattice(ctx):
    E, R = ctx.E, ctx.R
    out = []
    inv = dm.invariant_sets(E, R, ctx.sigma, ctx.hull)
    H = ctx.hull
    centrals = dict(dm._center_pairs(E))
    ge = inv.gamma_eta
    if not set(ge) <= set(centrals):
        out.append("invariant elements are not all central")
    for r in range(1, len(ge) + 1):
        for fam in itertools.combinations(ge, r):
            i = core._inf_of(E, fam)
            if i is None or i not in ge:
                out.append(f"infimum missing or not invariant for {_names(E, fam)}")
            elif ctx.sigma.meet_all([H.eta(c) for c in fam]) != H.eta(i):
                out.append(f"hull map of infimum is not the meet for {_names(E, fam)}")
            if any(all(E.leq[c, u] for c in fam) for u in range(E.n)):
                s = core._sup_of(E, fam)
                if s is None or s not in ge:
                    out.append(f"supremum missing or not invariant for {_names(E, fam)}")
                elif ctx.sigma.join_all([H.eta(c) for c in fam]) != H.eta(s):
                    out.append(f"hull map of supremum is not the join for {_names(E, fam)}")
    return out


# ---------------------------------------------------------------------------
# dimension-relation properties
# ---------------------------------------------------------------------------

@prop("unrelated-five-way", "der")
def _unrelated_five_way(ctx):
    E, R = ctx.E, ctx.R
    S, H = ctx.sigma, ctx.hull
    out = []
    for e in range(E.n):
        for f in range(E.n):
            c1 = not cg.related(E, R, e, f)
            c2 = any(pi(e) == e and pi(f) == 0 for pi in S)
            c3 = S.meet(H.eta(e), H.eta(f)).is_zero
            c4 = H.eta(e)(f) == 0
            c5 = not cg.related(E, R, H.eta(f)(e), H.eta(e)(f))
            if not (c1 == c2 == c3 == c4 == c5):
                out.append(f"unrelatedness conditions disagree at {_names(E, (e, f))}")
    return out


@prop("descendent-summand-split", "der")
def _descendent_summand(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for e in range(E.n):
        eta = ctx.hull.eta(e)
        desc = {d for d in range(E.n) if cg.is_descendent(E, R, d, e)}
        if set(eta.summand) != desc:
            out.append(f"hull summand is not the descendent set of {E.names[e]}")
        unrel = {f for f in range(E.n) if not cg.related(E, R, f, e)}
        if set(ctx.sigma.complement(eta).summand) != unrel:
            out.append(f"complement summand is not the unrelated set of {E.names[e]}")
    return out


@prop("unrelated-to-orthosum", "der")
def _unrelated_orthosum(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for ms, total in core.orthogonal_multisets(E):
        for f in range(E.n):
            if all(not cg.related(E, R, f, e) for e in set(ms)):
                if cg.related(E, R, f, total):
                    out.append(f"{E.names[f]} related to orthosum of {_names(E, ms)}")
    return out


@prop("hereditary-ideal-supremum", "der")
def _hereditary_sup_prop(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for S in core.all_ideals(E):
        if not cg.is_hereditary(E, R, S):
            continue
        if not any(all(E.leq[h, u] for h in S) for u in range(E.n)):
            continue
        try:
            rep = dm.hereditary_sup(E, R, S)
        except InternalInvariant as exc:
            out.append(str(exc))
            continue
        if not (rep.sharp and rep.interval_hereditary):
            out.append(f"supremum of {sorted(S)} fails sharp/hereditary")
        if rep.central_if_directed is False:
            out.append(f"supremum of {sorted(S)} not invariant under directedness")
    return out


@prop("general-comparability", "der")
def _comparability(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for e in range(E.n):
        for f in range(E.n):
            try:
                cg.comparability(E, R, ctx.sigma, e, f)
            except InternalInvariant as exc:
                out.append(str(exc))
    return out


@prop("factor-characterizations", "der")
def _factor(ctx):
    try:
        dm.is_factor(ctx.E, ctx.R, ctx.sigma)
    except InternalInvariant as exc:
        return [str(exc)]
    return []


def _kf_sets(ctx):
    d = ctx.dgea
    return {"simple": d.simple, "finite": d.finite}


@prop("hereditary-std-largest", "der")
def _hereditary_std_largest(ctx):
    E, R = ctx.E, ctx.R
    S, H = ctx.sigma, ctx.hull
    out = []
    for label, hset in _kf_sets(ctx).items():
        td = hull_mod.td_sets(E, H, hset)
        if not td.eta_std:
            out.append(f"{label} set is not strongly type-determining")
            continue
        star = td.t_star
        estar = H.eta(star)
        if S.join_all([H.eta(h) for h in hset]) != estar:
            out.append(f"{label} set: largest map is not the join")
        if not set(hset) <= set(estar.summand):
            out.append(f"{label} set escapes its own summand")
        for h in hset:
            for e in range(E.n):
                he = H.eta(h)(e)
                if he != 0 and not any(
                    x != 0 and E.leq[x, he] for x in hset
                ):
                    out.append(f"{label} set misses a nonzero piece under {_names(E, (h, e))}")
        has_faithful = any(H.eta(h).is_identity for h in hset)
        if has_faithful != estar.is_identity:
            out.append(f"{label} set: faithful member test disagrees")
        if not core.is_orthodense(E, set(hset), set(estar.summand)):
            out.append(f"{label} set is not orthodense in its summand")
        for pi in ctx.model.gex:
            lhs = set(hset) & set(pi.summand)
            rhs = {pi(h) for h in hset}
            if lhs != rhs:
                out.append(f"{label} set does not project onto its trace")
    return out


@prop("summand-meets-hereditary", "der")
def _summand_meets_hereditary(ctx):
    E = ctx.E
    S, H = ctx.sigma, ctx.hull
    out = []
    for label, hset in _kf_sets(ctx).items():
        star = hull_mod.td_sets(E, H, hset).t_star
        for pi in S:
            a = set(hset) & set(pi.summand) == {0}
            b = all(pi(h) == 0 for h in hset)
            c = S.meet(pi, H.eta(star)).is_zero
            d = all(S.meet(pi, H.eta(h)).is_zero for h in hset)
            if not (a == b == c == d):
                out.append(f"{label} set: avoidance conditions disagree for {pi!r}")
    return out


@prop("summand-star-projection", "der")
def _summand_star_projection(ctx):
    E = ctx.E
    S, H = ctx.sigma, ctx.hull
    out = []
    for label, hset in _kf_sets(ctx).items():
        star = hull_mod.td_sets(E, H, hset).t_star
        for pi in set(H.maps):
            hsharp = pi(star)
            if hsharp not in hset or pi(hsharp) != hsharp:
                out.append(f"{label}: projected star escapes the set under {pi!r}")
            if H.eta(hsharp) != S.meet(H.eta(star), pi):
                out.append(f"{label}: hull of projected star is not the meet under {pi!r}")
            for h in hset:
                if pi(h) != h:
                    continue
                lhs = S.meet(H.eta(h), pi)
                rhs = S.meet(H.eta(hsharp), pi)
                if S.meet(lhs, rhs) != lhs:
                    out.append(f"{label}: projected star is not largest under {pi!r}")
            if not core.is_orthodense(
                E,
                set(hset) & set(pi.summand),
                set(S.meet(H.eta(star), pi).summand),
            ):
                out.append(f"{label}: trace not orthodense under {pi!r}")
    return out


@prop("faithful-in-summand", "der")
def _faithful_in_summand(ctx):
    E = ctx.E
    S, H = ctx.sigma, ctx.hull
    out = []
    for pi in S:
        for p in pi.summand:
            a = all(H.eta(p)(x) == x for x in pi.summand)
            b = S.leq(pi, H.eta(p))
            c = pi == H.eta(p)
            if not (a == b == c):
                out.append(f"faithfulness conditions disagree at {E.names[p]} in {pi!r}")
    return out


@prop("faithful-restriction", "der")
def _faithful_restriction(ctx):
    E = ctx.E
    S, H = ctx.sigma, ctx.hull
    out = []
    for label, hset in _kf_sets(ctx).items():
        star = hull_mod.td_sets(E, H, hset).t_star
        for pi in set(H.maps):
            hsharp = pi(star)
            a = any(H.eta(h) == pi for h in hset)
            b = S.leq(pi, H.eta(star))
            c = pi == H.eta(hsharp)
            d = any(
                pi == H.eta(h) for h in hset if pi(h) == h
            )
            if not (a == b == c == d):
                out.append(f"{label}: faithful-restriction conditions disagree for {pi!r}")
            if a and not core.is_orthodense(
                E, set(hset) & set(pi.summand), set(pi.summand)
            ):
                out.append(f"{label}: trace not orthodense in summand for {pi!r}")
    return out


@prop("summand-restriction-contract", "der")
def _summand_restriction(ctx):
    E, R = ctx.E, ctx.R
    out = []
    for pi in ctx.sigma:
        try:
            dm.restrict_summand(E, R, pi, sigma=ctx.sigma, verify=True)
        except InternalInvariant as exc:
            out.append(f"{exc} for {pi!r}")
    return out


@prop("simple-element-criteria", "der")
def _simple_criteria(ctx):
    E, R = ctx.E, ctx.R
    S, H = ctx.sigma, ctx.hull
    out = []
    try:
        K = ctx.dgea.simple
    except InternalInvariant as exc:
        return [str(exc)]
    for k in range(E.n):
        splits_ok = all(
            S.meet(H.eta(k1), H.eta(E.sub(k, k1))).is_zero for k1 in E.below(k)
        )
        iv = core.interval_ea(E, k)
        pairs_ok = all(
            S.meet(H.eta(iv.embed[a]), H.eta(iv.embed[b])).is_zero
            for a in range(iv.table.n)
            for b in range(iv.table.n)
            if iv.table.perp(a, b)
            and (iv.embed[a] != 0 or iv.embed[b] != 0)
        )
        direct = k in K
        if not (direct == splits_ok == pairs_ok):
            out.append(f"simple-element conditions disagree at {E.names[k]}")
    return out


@prop("simple-subequiv-hull", "der")
def _simple_subequiv(ctx):
    E, R = ctx.E, ctx.R
    S, H = ctx.sigma, ctx.hull
    out = []
    K = ctx.dgea.simple
    for q in K:
        for k in K:
            if S.leq(H.eta(q), H.eta(k)) != cg.subequiv(E, R, q, k):
                out.append(f"hull order vs sub-equivalence on simples {_names(E, (q, k))}")
            if (H.eta(q) == H.eta(k)) != R.sim(q, k):
                out.append(f"hull equality vs equivalence on simples {_names(E, (q, k))}")
    return out


@prop("simple-implies-finite", "der")
def _simple_finite(ctx):
    K, F = ctx.dgea.simple, ctx.dgea.finite
    S, H = ctx.sigma, ctx.hull
    out = []
    if not set(K) <= set(F):
        out.append("a simple element is not finite")
    ek = S.join_all([H.eta(k) for k in K])
    ef = S.join_all([H.eta(f) for f in F])
    if S.meet(ek, ef) != ek:
        out.append("simple-set map is not below the finite-set map")
    return out


@prop("finite-subtraction", "der")
def _finite_subtraction(ctx):
    E, R = ctx.E, ctx.R
    F = ctx.dgea.finite
    out = []
    for f in F:
        for e in E.below(f):
            if e not in F:
                out.append(f"finite set is not an order ideal at {E.names[e]}")
    for e in F:
        for f in F:
            if not R.sim(e, f):
                continue
            for e1 in E.below(e):
                e2 = E.sub(e, e1)
                for f1 in E.below(f):
                    f2 = E.sub(f, f1)
                    if R.sim(e1, f1) and not R.sim(e2, f2):
                        out.append(
                            f"subtraction property fails at {_names(E, (e, f, e1, f1))}"
                        )
    return out


@prop("kf-std-sets", "der")
def _kf_std(ctx):
    E, R = ctx.E, ctx.R
    H = ctx.hull
    out = []
    d = ctx.dgea
    for label, hset in (("simple", d.simple), ("finite", d.finite)):
        if not cg.is_hereditary(E, R, hset):
            out.append(f"{label} set is not hereditary")
        if not hull_mod.td_sets(E, H, hset).eta_std:
            out.append(f"{label} set is not strongly type-determining")
    if not core._ideal_flags(E, frozenset(d.finite)):
        out.append("finite set is not an ideal")
    ft, ftset = d.finite_invariant
    if not hull_mod.td_sets(E, H, ftset).eta_td:
        out.append("finite invariant set is not type-determining")
    return out


@prop("kf-orthodense", "der")
def _kf_orthodense(ctx):
    E = ctx.E
    S, H = ctx.sigma, ctx.hull
    out = []
    theta = set(H.maps)
    for label, hset in _kf_sets(ctx).items():
        join = S.join_all([H.eta(h) for h in hset])
        if join not in theta:
            out.append(f"{label}-set map is not a hull map")
        if not set(hset) <= set(join.summand):
            out.append(f"{label} set escapes its summand")
        if not core.is_orthodense(E, set(hset), set(join.summand)):
            out.append(f"{label} set not orthodense in its summand")
        if (set(hset) == {0}) != join.is_zero:
            out.append(f"{label} set triviality disagrees with its map")
    return out


@prop("finite-invariant-largest", "der")
def _finite_invariant_largest(ctx):
    E = ctx.E
    out = []
    try:
        ft, ftset = ctx.dgea.finite_invariant
    except InternalInvariant as exc:
        return [str(exc)]
    F = set(ctx.dgea.finite)
    below = set(E.below(ft))
    if not set(ftset) <= below:
        out.append("finite invariant set escapes the interval of its largest member")
    if not below <= F:
        out.append("interval of the largest finite invariant element leaves the finite set")
    return out


@prop("finite-invariant-faithful", "der")
def _finite_invariant_faithful(ctx):
    E = ctx.E
    H = ctx.hull
    out = []
    ft, ftset = ctx.dgea.finite_invariant
    a = any(H.eta(f).is_identity for f in ftset)
    b = H.eta(ft).is_identity
    c = set(E.below(ft)) == set(range(E.n))
    if not (a == b == c):
        out.append("finite-type characterizations disagree")
    if b:
        if E.greatest() != ft:
            out.append("finite-type model is not an effect algebra with that unit")
        if set(ctx.dgea.finite) != set(range(E.n)):
            out.append("finite-type model has non-finite elements")
    return out


@prop("type-criteria-global", "der")
def _type_criteria_global(ctx):
    E, R = ctx.E, ctx.R
    out = []
    dec = ctx.decomposition
    flags = dm.summand_type_flags(E, R, ctx.sigma.one, ctx.sigma)
    if flags.type_i != dec.eta_k.is_identity:
        out.append("global type-I criterion disagrees")
    if flags.type_i and not core.is_orthodense(E, set(ctx.dgea.simple), set(range(E.n))):
        out.append("type-I model whose simples are not orthodense")
    if flags.type_ii != (dec.eta_f.is_identity and dec.eta_k.is_zero):
        out.append("global type-II criterion disagrees")
    if flags.type_ii and not core.is_orthodense(E, set(ctx.dgea.finite), set(range(E.n))):
        out.append("type-II model whose finite elements are not orthodense")
    if flags.type_iii != dec.eta_f.is_zero:
        out.append("global type-III criterion disagrees")
    if flags.finite_type != dec.eta_ftilde.is_identity:
        out.append("global finite-type criterion disagrees")
    if flags.properly_non_finite != (dec.f_tilde == 0):
        out.append("global properly-non-finite criterion disagrees")
    return out


@prop("type-criteria-summands", "der")
def _type_criteria_summands(ctx):
    E, R = ctx.E, ctx.R
    S = ctx.sigma
    out = []
    dec = ctx.decomposition
    theta = set(ctx.hull.maps)
    comp = S.complement
    for pi in S:
        flags = dm.summand_type_flags(E, R, pi, S)
        in_theta = pi in theta
        if flags.type_i != (in_theta and S.leq(pi, dec.eta_k)):
            out.append(f"summand type-I criterion disagrees for {pi!r}")
        if flags.type_ii != (
            in_theta and S.leq(pi, S.meet(dec.eta_f, comp(dec.eta_k)))
        ):
            out.append(f"summand type-II criterion disagrees for {pi!r}")
        if flags.type_iii != S.leq(pi, comp(dec.eta_f)):
            out.append(f"summand type-III criterion disagrees for {pi!r}")
        if flags.finite_type != (in_theta and S.leq(pi, dec.eta_ftilde)):
            out.append(f"summand finite-type criterion disagrees for {pi!r}")
        if flags.properly_non_finite != S.disjoint(pi, dec.eta_ftilde):
            out.append(f"summand properly-non-finite criterion disagrees for {pi!r}")
    return out


@prop("type-decomposition", "der")
def _type_decomposition(ctx):
    try:
        ctx.decomposition
    except InternalInvariant as exc:
        return [str(exc)]
    return []


@prop("all-finite-models-type-one", "der", review_only=True)
def _all_type_one(ctx):
    dec = ctx.decomposition
    if dec.type_verdict != "I":
        return [
            f"finite model of type {dec.type_verdict}; "
            "contradicts the atom argument, review needed"
        ]
    return []


# ---------------------------------------------------------------------------
# the runner
# ---------------------------------------------------------------------------

@dataclass
class PropertyResult:
    instances: int = 0
    violations: list = field(default_factory=list)


@dataclass
class SuiteReport:
    max_n: int
    theorems: object
    invert: object
    models: int
    relations: int
    results: dict  # name -> PropertyResult
    review: list

    @property
    def violation_count(self):
        return sum(
            len(r.violations)
            for name, r in self.results.items()
            if not REGISTRY[name].review_only
        )

    @property
    def status(self):
        if self.violation_count:
            return "violations"
        if self.review:
            return "review"
        return "ok"

    def to_json_obj(self):
        props = {}
        for name in sorted(self.results):
            r = self.results[name]
            props[name] = {
                "instances": r.instances,
                "violations": r.violations,
            }
        witnesses = [
            v
            for name in sorted(self.results)
            for v in self.results[name].violations
        ]
        return {
            "max_size": self.max_n,
            "theorems": sorted(self.theorems) if self.theorems else "all",
            "invert": self.invert,
            "models": self.models,
            "relations": self.relations,
            "properties": props,
            "review": self.review,
            "status": self.status,
            "witnesses": witnesses,
        }

    def to_text(self):
        lines = [
            f"theorem suite over models up to size {self.max_n}: "
            f"{self.models} models, {self.relations} congruences"
        ]
        for name in sorted(self.results):
            r = self.results[name]
            mark = "ok" if not r.violations else f"{len(r.violations)} VIOLATIONS"
            lines.append(f"  {name}: {r.instances} instances, {mark}")
            for v in r.violations[:10]:
                lines.append(f"    - {v['model']} (n={v['n']}): {v['detail']}")
        for v in self.review:
            lines.append(f"  REVIEW: {v['model']}: {v['detail']}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines)


def _evaluate_entry(args):
    entry, names, invert = args
    mctx = ModelCtx(entry)
    out = {}
    review = []
    for name in names:
        p = REGISTRY[name]
        instances = 0
        violations = []
        if p.scope == "model":
            ctxs = [mctx]
        elif p.scope == "relation":
            ctxs = [RelCtx(mctx, rec) for rec in entry.relations if rec.sk]
        else:
            ctxs = [RelCtx(mctx, rec) for rec in entry.relations if rec.der]
        for ctx in ctxs:
            instances += 1
            try:
                details = p.fn(ctx)
            except InternalInvariant as exc:
                details = [str(exc)]
            if invert == name:
                details = [] if details else ["inverted-check: property held"]
            rel = (
                None
                if p.scope == "model"
                else [[entry.table.names[e] for e in c] for c in ctx.R.classes]
            )
            for d in details:
                rec = {
                    "model": entry.key,
                    "n": entry.n,
                    "relation": rel,
                    "detail": d,
                    "property": name,
                }
                if p.review_only:
                    review.append(rec)
                else:
                    violations.append(rec)
        out[name] = (instances, violations)
    return entry.key, out, review


def run_theorem_suite(max_n, theorems=None, jobs=1, invert=None):
    """Evaluate the registered properties over the catalog; deterministic
    regardless of worker count."""
    if theorems:
        unknown = [t for t in theorems if t not in REGISTRY]
        if unknown:
            raise UnknownPredicate(
                f"unknown theorems: {', '.join(unknown)}"
            )
        names = tuple(t for t in REGISTRY if t in set(theorems))
    else:
        names = tuple(REGISTRY)
    if invert is not None and invert not in REGISTRY:
        raise UnknownPredicate(f"unknown theorem: {invert}")
    entries = catalog.cached_entries(max_n)
    args = [(entry, names, invert) for entry in entries]
    if jobs > 1 and len(entries) > 1:
        ctx = get_context("fork")
        with ctx.Pool(jobs) as pool:
            raw = pool.map(_evaluate_entry, args)
        raw.sort(key=lambda item: (len(bytes.fromhex(item[0])), item[0]))
    else:
        raw = [_evaluate_entry(a) for a in args]
    results = {name: PropertyResult() for name in names}
    review = []
    for _, per_prop, rev in raw:
        for name, (instances, violations) in per_prop.items():
            results[name].instances += instances
            results[name].violations.extend(violations)
        review.extend(rev)
    return SuiteReport(
        max_n=max_n,
        theorems=theorems,
        invert=invert,
        models=len(entries),
        relations=sum(1 for e in entries for r in e.relations if r.sk),
        results=results,
        review=review,
    )
