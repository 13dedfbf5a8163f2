//! Nested Steiner quadruple systems and nested 2-designs.
//!
//! * [`field`]: GF(2^m) and GF(p) arithmetic.
//! * [`design`]: nested blocks, the exhaustive t-design verifier, and the
//!   pair-multiplicity classification.
//! * [`format`]: the `.nsqs` text format and verification reports.
//! * [`boolean`]: the affine-orbit construction on the Boolean SQS(2^m).
//! * [`catalog`]: the explicit small designs (orders 8, 10, 14, 16, 44, 50)
//!   and the existence registry.
//! * [`fr`]: fractional repetition codes and skip-cost repair planning.

pub mod boolean;
pub mod catalog;
pub mod design;
pub mod field;
pub mod format;
pub mod fr;

pub use boolean::{
    affine_orbit_decomposition, boolean_blocks, nested_boolean_sqs, nested_orbit, parallel_class,
    partition_lambda1, to_rotational, AffineOrbit, BooleanError, NestedOrbit,
};
pub use design::{
    assemble_nested_sqs, check_resolution, check_t_design, classify, Block, ClassificationReport, NestedBlock,
    NestedDesign, Point, UniformityClass,
};
pub use field::{FieldError, Gf2mField, GfpField};
pub use format::{parse_nsqs, verify, write_nsqs, VerificationReport};
pub use fr::{node_count_ratio, plan_repair, skip_cost, to_fr_code, verify_zero_skip, FrCode, RepairPlan};
