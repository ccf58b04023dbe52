//! Exact homotopy and chromatic-height cardinalities of π-finite spaces.
//!
//! The crate evaluates `|X|_0` (the rational homotopy cardinality) and the
//! height-n cardinalities `|X|_n = |Map(BZ_p^n, X)|_0` of spaces built from
//! finite sets, classifying spaces of finite groups and Eilenberg–MacLane
//! spaces, and implements the p-derivation `δ` on their images in `Z_p`,
//! including the elements that separate one height from the next.

pub mod arith;
pub mod cli;
pub mod delta;
pub mod error;
pub mod group;
pub mod parse;
pub mod quadratic;
pub mod space;

pub use arith::{binom_ext, vp, ExactRational, Prime, Valuation};
pub use delta::{
    alpha_splitter, beta_element, delta, delta_iter, height_profile, pk_relation_check, verify_wreath_identity,
    HeightProfile, LayerClass, R1Element, WreathSign,
};
pub use error::{Error, Result};
pub use group::{build_group, FiniteGroup, GroupDescriptor};
pub use parse::{parse_group, parse_space};
pub use quadratic::{amenability_failure_report, count_null_square_two_forms, cup_square_fiber_cardinality};
pub use space::{AbelianGroup, HeightStrategy, NormalForm, SpaceExpr};
