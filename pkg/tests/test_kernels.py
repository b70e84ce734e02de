"""The JIT and pure-Python kernel paths must agree bit for bit."""

import itertools

import numpy as np
import pytest

from geadim import _kernels as K
from geadim import catalog, core

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


def _all_small_tables():
    tables = []
    for n in (2, 3, 4):
        for flat in K.enumerate_tables_py(n, np.empty(0, dtype=np.int8)):
            tables.append(flat.reshape(n, n).copy())
    return tables


@needs_numba
def test_axiom_violation_paths_agree():
    bad = np.full((3, 3), -1, dtype=np.int8)
    for e in range(3):
        bad[e, 0] = e
        bad[0, e] = e
    cases = _all_small_tables() + [bad]
    bad2 = bad.copy()
    bad2[1, 1] = 1  # cancellation failure
    cases.append(bad2)
    for t in cases:
        assert K.axiom_violation_py(t).tolist() == K.axiom_violation_jit(t).tolist()


@needs_numba
def test_enumerate_tables_paths_agree():
    for n in (2, 3, 4, 5):
        a = K.enumerate_tables_py(n, np.empty(0, dtype=np.int8))
        b = K.enumerate_tables_jit(n, np.empty(0, dtype=np.int8))
        assert a.tolist() == b.tolist()
    prefix = np.array([-1, 3], dtype=np.int8)
    a = K.enumerate_tables_py(4, prefix)
    b = K.enumerate_tables_jit(4, prefix)
    assert a.tolist() == b.tolist()


@needs_numba
def test_prefix_partition_is_exact():
    # branches by first-cell value partition the full enumeration
    n = 4
    full = K.enumerate_tables_py(n, np.empty(0, dtype=np.int8)).tolist()
    pieces = []
    for v in [-1, 2, 3]:
        pieces += K.enumerate_tables_jit(n, np.array([v], dtype=np.int8)).tolist()
    assert sorted(map(tuple, full)) == sorted(map(tuple, pieces))


@needs_numba
def test_brute_exomaps_paths_agree():
    for t in _all_small_tables():
        E = core.GeaTable([str(i) for i in range(t.shape[0])], t, _validated=True)
        a = K.brute_exomaps_py(E.sum, E.leq)
        b = K.brute_exomaps_jit(E.sum, E.leq)
        assert a.tolist() == b.tolist()


@needs_numba
def test_sk_witnesses_paths_agree():
    for t in _all_small_tables():
        n = t.shape[0]
        E = core.GeaTable([str(i) for i in range(n)], t, _validated=True)
        for class_of in catalog.partitions_with_zero_singleton(n):
            cls = np.array(class_of, dtype=np.int8)
            a = K.sk_witnesses_py(E.sum, E.diff, E.leq, cls)
            b = K.sk_witnesses_jit(E.sum, E.diff, E.leq, cls)
            assert a.tolist() == b.tolist()


@needs_numba
def test_relabel_paths_agree():
    for t in _all_small_tables():
        n = t.shape[0]
        E = core.GeaTable([str(i) for i in range(n)], t, _validated=True)
        perms = core._candidate_perms(E)
        flat = np.ascontiguousarray(E.sum.reshape(n * n))
        assert (
            K.min_relabel_py(flat, n, perms).tolist()
            == K.min_relabel_jit(flat, n, perms).tolist()
        )
        assert K.is_min_relabel_py(flat, n, perms) == K.is_min_relabel_jit(
            flat, n, perms
        )


def test_canonical_key_stable_under_full_relabeling():
    # the candidate-permutation pruning must not change the canonical key
    for t in _all_small_tables():
        n = t.shape[0]
        if n > 4:
            continue
        E = core.GeaTable([str(i) for i in range(n)], t, _validated=True)
        key = core.canonical_form(E)
        for perm in itertools.permutations(range(1, n)):
            other = E.relabel([0, *perm])
            assert core.canonical_form(other) == key
