"""Finite-model computation and verification for generalized effect
algebras equipped with dimension equivalence relations."""

from .core import (
    GeaTable,
    b4,
    build_gea,
    c3,
    canonical_form,
    direct_sum_check,
    element_predicates,
    interval_ea,
    is_orthodense,
    order_queries,
    orthosum_family,
    structure_predicates,
    subset_predicates,
    t3,
)
from .exocenter import ExoMap, ExoSet, center, cogea_check, exo_boolean_ops, exocenter, exocentral_cover
from .hull import (
    HullSystem,
    check_hull_system,
    classify_eta,
    hull_from_hd,
    is_divisible,
    sim_eta,
    sk3e_split_eta,
    td_sets,
)
from .congruence import (
    EquivRel,
    SkReport,
    build_equiv,
    check_der,
    check_sk,
    comparability,
    decompose_pair,
    induced_hull,
    relation_queries,
    sigma_sim,
)
from .dimension import (
    Decomposition,
    decompose_types,
    f_tilde,
    finite_elements,
    hereditary_sup,
    invariant_sets,
    is_factor,
    restrict_summand,
    simple_elements,
)
from .catalog import enumerate_geas, enumerate_relations, search_counterexample
from .theorems import run_theorem_suite

__version__ = "0.1.0"
