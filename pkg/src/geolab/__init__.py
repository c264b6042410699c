"""Exact Chern invariants of cyclic root covers over elliptic arrangements on the dual Hesse surface."""
from .errors import DomainError, InconsistencyError, SearchExhausted
from .families import (
    FamilyReport,
    NodeCensus,
    SlopeInversion,
    TargetResult,
    arrangement_on_h,
    arrangement_on_y,
    build_family,
    fiber_genus,
    genus_base_change,
    invert_slope,
    limit_slope,
    node_census,
    target_slope,
)
from .hesse import DivClass, check_root_divisibility, check_spin_parity, lattice_report, named_class
from .logchern import ArrangementSummary, CurveFamily, SingularityClass, blow_up_class, log_chern_numbers
from .numtheory import (
    Rational,
    c_coeff,
    dedekind_sum,
    hj_expand,
    hj_length,
    is_prime,
    next_prime,
    node_q,
    resolve_cqs,
)
from .params import NONSPIN, SPIN, FamilyParams
from .rootcover import BranchSummary, SurfaceInvariants, chern_of_cover, necessary_condition_report

__version__ = "0.1.0"
