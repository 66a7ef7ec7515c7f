//! Exact polyhedral geometry over the rationals.

pub mod cone;
pub mod dd;
pub mod lp;
pub mod polyhedron;

pub use cone::{cone_contains, cone_equal, cone_of, ConeGen};
pub use dd::{DdConfig, DEFAULT_MAX_ROWS};
pub use lp::{LinearProgram, LpOutcome, Relation};
pub use polyhedron::{
    closed_conv_hull_union, h_to_v, h_to_v_with, lp_solve, minkowski_sum, recession_cone, v_to_h,
    v_to_h_with, GeneratorSet, HalfSpace, LpStatus, PolyhedronH,
};
