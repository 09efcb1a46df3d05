//! Inequality and shape checks producing signed-margin records with a
//! holds / fails / inconclusive verdict.

mod checks;
mod proof_stage;
mod record;
mod scan;
mod shape;

pub use checks::{check_binomial, check_ml, check_ml_with, BinomialKind, MlKind};
pub use proof_stage::{
    cad_sides, check_proof_stage, cosine_sum_closed, cosine_sum_direct, final_goal_expr, goal3_lhs, sine_quotient,
    CadLattice, ProofStageKind, ProofStageParams, COSINE_SUM_TOL,
};
pub use record::{shrink_margin, CheckId, InequalityRecord, Params, Verdict, DEFAULT_ATOL};
pub use scan::{scan, GridSpec, PointError, ScanCheck, ScanItem, ScanOutput, ScanSummary};
pub use shape::{
    check_cm_probe, check_log_shape, check_logderiv_monotone, cm_quadrature, log_e4_second_derivative, CmTarget,
    CM_MAX_ORDER, CM_STEP, SHAPE_STEP,
};
