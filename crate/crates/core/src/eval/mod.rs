//! Macro-F1, the claim-usefulness delta, snippet ablation and the
//! preprocessing x emotion-mode experiment matrix.
//!
//! Every experiment trains two models that differ only in whether they
//! see the claim. Test-split macro-F1 of both feeds the report; the dev
//! split is used for model selection only.

mod experiment;
mod metrics;
mod report;

pub use experiment::{
    ablation_sweep, experiment_matrix, run_experiment, run_experiment_full, ExperimentResult,
    ExperimentRun, NamedDataset,
};
pub use metrics::{delta, f1_macro, ConfusionMatrix};
pub use report::{Report, ReportRow, REPORT_HEADER};
