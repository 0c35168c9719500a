"""Exact decision procedures for ordered semigroups of lower semicontinuous step functions,
their pullbacks, and a catalog of examples built from interval and graph algebras."""
from .core import (DEFAULT_DEPTH, FALSE, TRUE, AxiomReport, CuSemigroup, FormalSup,
                   LimitPresentation, ThreeValued, canonical_approximants, check_cu_axioms,
                   limit_leq, limit_way_below, sup_increasing)
from .scalars import (INF, NBAR, Compact, DirectSum, ExtNat, Scaled, Soft, Supernatural, Uhf,
                      interpolate, product, scalar_from_name, uhf_leq, uhf_membership,
                      uhf_way_below)
from .spaces import CellMap, CellSet, Layout, Piece, Space
from .lsc import (Lsc, PiecewiseCharPresentation, StepFunction, add_step, char_action,
                  chi_approx, constant, directed_join, eval_at, from_presentation, glue,
                  leq_step, make_step, parse_step, precompose, restrict, to_presentation,
                  way_below_step)
from .pullback import (Pullback, PullbackElement, make_pair, pb_add, pb_canonical_approximants,
                       pb_leq, pb_sup, pb_way_below)
from .catalog import (compact_elements, dimension_drop, graph_algebra, graph_iso_check,
                      interval_algebra, mapping_torus, member, nccw1, resolve, rsh_chain)

__all__ = [
    "DEFAULT_DEPTH", "FALSE", "TRUE", "AxiomReport", "CuSemigroup", "FormalSup",
    "LimitPresentation", "ThreeValued", "canonical_approximants", "check_cu_axioms",
    "limit_leq", "limit_way_below", "sup_increasing", "INF", "NBAR", "Compact", "DirectSum",
    "ExtNat", "Scaled", "Soft", "Supernatural", "Uhf", "interpolate", "product",
    "scalar_from_name", "uhf_leq", "uhf_membership", "uhf_way_below", "CellMap", "CellSet",
    "Layout", "Piece", "Space", "Lsc", "PiecewiseCharPresentation", "StepFunction",
    "add_step", "char_action", "chi_approx", "constant", "directed_join", "eval_at",
    "from_presentation", "glue", "leq_step", "make_step", "parse_step", "precompose",
    "restrict", "to_presentation", "way_below_step", "Pullback", "PullbackElement",
    "make_pair", "pb_add", "pb_canonical_approximants", "pb_leq", "pb_sup", "pb_way_below",
    "compact_elements", "dimension_drop", "graph_algebra", "graph_iso_check",
    "interval_algebra", "mapping_torus", "member", "nccw1", "resolve", "rsh_chain",
]

__version__ = "0.1.0"
