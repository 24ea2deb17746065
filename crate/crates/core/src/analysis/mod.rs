//! Numerical checks of the convergence argument and the experiment pipelines.

mod gradcheck;
mod lemma1;
mod suite;
mod theorem1;

pub use gradcheck::{
    check_gradients, check_model, random_case, relative_error, GradCheckReport, FD_STEP,
    REL_ERROR_FLOOR,
};
pub use lemma1::{check_lemma1, contraction_norm, Lemma1Report};
pub use theorem1::{
    check_theorem1, check_theorem1_suite, close_pair_dataset, default_theorem1_cases,
    ContractionTrace, Theorem1Case, Theorem1Report, DELTA_FRACTION, GAP_TOLERANCE,
};
pub use suite::{
    median, run_preservation_suite, run_suite_with, score_embedding, SuiteReport, Summary,
    DEFAULT_RUNS,
};
