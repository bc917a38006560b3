"""Certified density of real zeros of the random-cluster Tutte polynomial."""

from .algebra import Bracket, Interval, RatFn, UniPoly, isolate_real_roots, parse_rational, refine_bracket
from .errors import (
    NoSignChange,
    NotInteriorPoint,
    NotStarredRegion,
    PoleAt,
    SearchExhausted,
    TutteZerosError,
    UnsupportedRegion,
)
from .forge import ComplementaryPair, SearchBudget, complementary_pair
from .graphs import Edge, Multigraph, Opaque, Parallel, Series, parse_term, realize
from .regions import Region, classify_region, dual_point, v_diamond
from .tutte import z_del_con, z_poly_q, z_split, z_subset
from .weights import GadgetType, effective_weight, effective_weight_at
from .zeros import ZeroCertificate, find_zero, find_zero_dual, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "Bracket", "Interval", "RatFn", "UniPoly", "isolate_real_roots", "parse_rational", "refine_bracket",
    "NoSignChange", "NotInteriorPoint", "NotStarredRegion", "PoleAt", "SearchExhausted",
    "TutteZerosError", "UnsupportedRegion",
    "ComplementaryPair", "SearchBudget", "complementary_pair",
    "Edge", "Multigraph", "Opaque", "Parallel", "Series", "parse_term", "realize",
    "Region", "classify_region", "dual_point", "v_diamond",
    "z_del_con", "z_poly_q", "z_split", "z_subset",
    "GadgetType", "effective_weight", "effective_weight_at",
    "ZeroCertificate", "find_zero", "find_zero_dual", "verify_certificate",
]
