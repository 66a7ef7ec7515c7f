//! Normal cones of sublevel sets and domains of suprema of convex and
//! quasi-convex functions.

pub mod cc;
pub mod family;
pub mod qc;
pub mod sublevel;

pub use cc::{cc_condition_check, CcInput, CcVerdict};
pub use family::{active_index_set, Member, SGrid, SupFamily, DEFAULT_GRID};
pub use qc::{
    ball_lattice, frechet_outer_cone, lemnos_inclusion_check, qc_sublevel_normal_cone, Cc3Evidence, GeneratorCheck,
    LemnosOutcome, LemnosReport, Monotonicity, OuterCone, QcEvaluator, QcMember, SkippedSample, SmoothQCMember,
    SublevelOracleQC,
};
pub use sublevel::{
    continuity_point_in_strict_sublevel, dom_sup_normal_cone, rho_weight, singleton_sublevel_normal_cone,
    strict_sublevel_normal_cone, sublevel_normal_cone_formula, sublevel_normal_cone_formula_with,
    sublevel_normal_cone_intersection, sublevel_normal_cone_uncertified, AlphaPolicy, Contribution,
    ContributionKind, Exactness, FormulaResult, IntersectionResult, Mode,
};
