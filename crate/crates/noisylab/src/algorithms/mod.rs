//! Constructive recovery policies: the nonadaptive cell encoder, adaptive
//! cover bisection, per-coordinate interval refinement, noise correction for
//! a single functional, and closed forms plus measurement allocation for
//! diagonal operators.

pub mod bisection;
pub mod diagonal;
pub mod quantizer;
pub mod refine;

pub use bisection::{BisectState, CoverBisection};
pub use diagonal::{
    allocate, composite_policy, l2_noise_hat, l2_noise_sandwich, truncation_error, write_plan_csv,
    AllocationPlan, DiagTruncation,
};
pub use quantizer::{decode_level, exact_decode_bits, quantizer_bits, quantizer_levels, CellEncoder};
pub use refine::{noise_correct, CoordinateRefinement, NoiseCorrection};
