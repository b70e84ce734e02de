"""Exhaustive model catalogs: enumeration, relations, persistence, search.

Models are enumerated by backtracking over partial sum tables; a labeled
table is kept exactly when it is its own canonical representative, so
each isomorphism class appears once, the stream is independent of how the
work is partitioned, and re-runs are bit-identical.
"""

import itertools
import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import get_context

import numpy as np

from . import _kernels, congruence as cg, core, dimension as dm
from .errors import LimitExceeded, UnknownPredicate

FORMAT_VERSION = 1
GENERATOR_VERSION = "0.1.0"
DEFAULT_MAX_N = 6
HARD_MAX_N = 8


@dataclass
class RelationRecord:
    classes: tuple  # tuple of tuples of element indices
    rel: object
    report: object
    sk: bool
    der: object  # bool once computed, None when sk fails
    decomposition: object  # summary dict or None

    def summary(self, names):
        rec = {
            "classes": [[names[e] for e in c] for c in self.classes],
            "sk": self.sk,
            "der": self.der,
        }
        fail = self.report.first_failure()
        rec["first_failure"] = (
            None if fail is None else {
                "axiom": fail[0],
                "witness": [names[w] for w in fail[1]],
            }
        )
        rec["decomposition"] = self.decomposition
        return rec


@dataclass
class CatalogEntry:
    key: str
    n: int
    table: object
    flags: dict
    relations: tuple
    timing: float = field(default=None, compare=False)

    def record(self):
        """Persistable form; excludes timing so records are bit-exact."""
        return {
            "key": self.key,
            "n": self.n,
            "sum_table": [[int(v) for v in row] for row in self.table.sum],
            "flags": self.flags,
            "relations": [r.summary(self.table.names) for r in self.relations],
        }


def _canonical_tables(n, jobs=1):
    """Flattened canonical sum tables for size n, sorted."""
    if jobs > 1 and n >= 4:
        prefixes = _branch_prefixes(n)
        ctx = get_context("fork")
        with ctx.Pool(jobs) as pool:
            chunks = pool.starmap(_canonical_from_prefix, [(n, p) for p in prefixes])
        found = sorted(set(t for chunk in chunks for t in chunk))
    else:
        found = sorted(
            set(_canonical_from_prefix(n, np.empty(0, dtype=np.int8)))
        )
    return found


def _branch_prefixes(n):
    """Assignments of the first table cell, one DFS branch per worker task."""
    out = []
    for v in [-1] + [v for v in range(1, n) if v != 1]:
        out.append(np.array([v], dtype=np.int8))
    return out


def _canonical_from_prefix(n, prefix):
    tables = _kernels.enumerate_tables(n, prefix)
    keep = []
    for flat in tables:
        E = core.GeaTable([str(i) for i in range(n)], flat.reshape(n, n),
                          _validated=True)
        if core.is_canonical_table(E):
            keep.append(flat.tobytes())
    return keep


def enumerate_geas(max_n, limit=DEFAULT_MAX_N, jobs=1):
    """Stream of catalog entries for all models up to isomorphism,
    ordered by (size, canonical key)."""
    if max_n > limit or max_n > HARD_MAX_N:
        raise LimitExceeded(f"max_n={max_n} exceeds the configured limit")
    for n in range(1, max_n + 1):
        for flat in _canonical_tables(n, jobs=jobs):
            yield build_entry(n, flat)


@lru_cache(maxsize=None)
def cached_entries(max_n):
    """Materialized catalog for reuse across suite runs in one process."""
    return tuple(enumerate_geas(max_n))


def build_entry(n, flat_bytes):
    from .errors import InternalInvariant

    t0 = time.perf_counter()
    flat = np.frombuffer(flat_bytes, dtype=np.int8)
    E = core.GeaTable([str(i) for i in range(n)], flat.reshape(n, n),
                      _validated=True)
    key = core.canonical_form(E).hex()
    if key != (bytes([n]) + flat_bytes).hex():
        raise InternalInvariant("non-canonical table reached the catalog")
    flags = _structure_flags(E)
    relations = tuple(enumerate_relations(E))
    return CatalogEntry(
        key=key,
        n=n,
        table=E,
        flags=flags,
        relations=relations,
        timing=time.perf_counter() - t0,
    )


def _structure_flags(E):
    from .exocenter import exocenter

    s = core.structure_predicates(E)
    gex = exocenter(E)
    cen = dm._center_pairs(E)
    return {
        "directed": s.directed,
        "orthogonally_ordered": s.orthogonally_ordered,
        "is_ea": None if s.is_ea is None else E.names[s.is_ea],
        "lattice": s.lattice,
        "archimedean": s.archimedean,
        "dedekind_orthocomplete": s.dedekind_orthocomplete,
        "orthocomplete": s.orthocomplete,
        "gex_size": len(gex),
        "center": [E.names[c] for c, _ in cen],
        "atoms": [E.names[a] for a in E.atoms],
        "chain_height": E.chain_height,
    }


def partitions_with_zero_singleton(n):
    """Partitions of 1..n-1 as restricted growth strings, zero kept alone."""
    if n == 1:
        yield [0]
        return
    rgs = [0] * (n - 1)

    def rec(i, maxid):
        if i == len(rgs):
            yield list(rgs)
            return
        for c in range(maxid + 2):
            rgs[i] = c
            yield from rec(i + 1, max(maxid, c))

    for assign in rec(0, -1):
        yield [0] + [c + 1 for c in assign]


def enumerate_relations(E):
    """Every partition with zero alone, with its axiom report.

    Relations that pass the congruence axioms get the separation check and,
    when it passes, a decomposition summary.
    """
    for class_of in partitions_with_zero_singleton(E.n):
        R = cg.EquivRel(E, class_of)
        report = cg.check_sk(E, R)
        der = None
        summary = None
        if report.sk:
            sigma = cg.sigma_sim(E, R, _exocenter(E))
            report = cg.check_der(E, R, sigma)
            der = report.der
            if der:
                summary = _decomposition_summary(E, R)
        yield RelationRecord(
            classes=R.classes,
            rel=R,
            report=report,
            sk=report.sk,
            der=der,
            decomposition=summary,
        )


def _exocenter(E):
    from .exocenter import exocenter

    return exocenter(E)


def _decomposition_summary(E, R):
    dec = dm.decompose_types(E, R)
    out = {
        "type": dec.type_verdict,
        "finite_type": dec.finite_type,
        "properly_non_finite": dec.properly_non_finite,
        "unit": None if dec.unit is None else E.names[dec.unit],
        "f_tilde": E.names[dec.f_tilde],
    }
    for name in ("I", "II", "III"):
        out[f"summand_{name}"] = [E.names[e] for e in dec.summands[name]]
    return out


# ---------------------------------------------------------------------------
# persistence: line-delimited records with a parameter header
# ---------------------------------------------------------------------------

def _dump(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_catalog(path, max_n, jobs=1, resume=False):
    """Write (or resume) the catalog file; returns the number of entries."""
    header = {
        "format_version": FORMAT_VERSION,
        "max_n": max_n,
        "generator_version": GENERATOR_VERSION,
    }
    existing = []
    if resume:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
            if lines and json.loads(lines[0]) != header:
                raise LimitExceeded("existing catalog has different parameters")
            existing = [json.loads(x)["key"] for x in lines[1:] if x]
        except FileNotFoundError:
            pass
    count = 0
    mode = "a" if (resume and existing) else "w"
    with open(path, mode, encoding="utf-8") as fh:
        if mode == "w":
            fh.write(_dump(header) + "\n")
        for i, entry in enumerate(enumerate_geas(max_n, limit=max_n, jobs=jobs)):
            count += 1
            if i < len(existing):
                if existing[i] != entry.key:
                    raise LimitExceeded(
                        "existing catalog is not a prefix of this enumeration"
                    )
                continue
            fh.write(_dump(entry.record()) + "\n")
    return count


def read_catalog(path):
    """Entries from a catalog file; returns (header, records)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [x for x in fh.read().splitlines() if x]
    header = json.loads(lines[0])
    return header, [json.loads(x) for x in lines[1:]]


# ---------------------------------------------------------------------------
# counterexample search
# ---------------------------------------------------------------------------

def _search_sk_not_der(entry):
    for rec in entry.relations:
        if rec.sk and rec.der is False:
            return {"relation": [list(c) for c in rec.classes]}
    return None


def _search_non_type_i(entry):
    for rec in entry.relations:
        if rec.der and rec.decomposition["type"] != "I":
            return {
                "relation": [list(c) for c in rec.classes],
                "type": rec.decomposition["type"],
            }
    return None


def _search_divisible_with_monads(entry):
    from . import hull as hull_mod
    from .exocenter import exocenter

    E = entry.table
    S = exocenter(E)
    for H in hull_mod.enumerate_hull_systems(E, S):
        if not hull_mod.is_divisible(E, H).divisible:
            continue
        monads = [
            e for e in range(1, E.n) if hull_mod.classify_eta(H, e).monad
        ]
        if monads:
            return {
                "hull": [m.image.tolist() for m in H.maps],
                "monads": [E.names[e] for e in monads],
            }
    return None


def _search_never(entry):
    return None


SEARCH_PREDICATES = {
    "sk-and-not-der": _search_sk_not_der,
    "non-type-i-dgea": _search_non_type_i,
    "divisible-hull-with-monads": _search_divisible_with_monads,
    "trivially-false": _search_never,
}


def search_counterexample(name, max_n):
    """First witness in canonical order, or None when the search exhausts."""
    if name not in SEARCH_PREDICATES:
        raise UnknownPredicate(
            f"{name!r}; known: {', '.join(sorted(SEARCH_PREDICATES))}"
        )
    pred = SEARCH_PREDICATES[name]
    for entry in cached_entries(max_n):
        hit = pred(entry)
        if hit is not None:
            return {"key": entry.key, "n": entry.n, "witness": hit}
    return None


def naive_class_count(n):
    """Oracle for small sizes: filter every possible table, then deduplicate.

    Enumerates all assignments of the nonzero cells with no pruning at all,
    keeps those passing the axiom check, and counts orbits under all
    zero-fixing permutations.  Independent of the production enumerator's
    pruning and of the color-refined canonical form.
    """
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]
    perms = [
        (0,) + rest for rest in itertools.permutations(range(1, n))
    ]
    keys = set()
    for choice in itertools.product(range(-1, n), repeat=len(cells)):
        table = np.full((n, n), -1, dtype=np.int8)
        for e in range(n):
            table[e, 0] = e
            table[0, e] = e
        for (i, j), v in zip(cells, choice):
            table[i, j] = v
            table[j, i] = v
        if _kernels.axiom_violation(table)[0] != _kernels.OK:
            continue
        orbit_min = None
        for p in perms:
            relab = [[-1] * n for _ in range(n)]
            for a in range(n):
                for b in range(n):
                    v = int(table[a, b])
                    relab[p[a]][p[b]] = -1 if v < 0 else p[v]
            key = bytes(x + 1 for row in relab for x in row)
            if orbit_min is None or key < orbit_min:
                orbit_min = key
        keys.add(orbit_min)
    return len(keys)
