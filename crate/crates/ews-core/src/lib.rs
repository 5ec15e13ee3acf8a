//! Core pipeline for benchmarking grade-prediction methods on per-student
//! course data: cohort model and synthetic generator, cumulative stage/feature
//! staging, Gaussian-mixture engagement clustering, eight regression learners,
//! and a fixed-fold cross-validation harness.
//!
//! The crate is `no_std`-compatible (requires `alloc`); everything touching
//! the filesystem, threads, or the clock lives in the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod fingerprint;
pub mod generate;
pub mod harness;
pub mod learners;
pub mod linalg;
pub mod metrics;
pub mod mixture;
pub mod record;
pub mod rng;
pub mod schedule;
pub mod staging;

pub use generate::{generate_cohort, CohortGenConfig, SignalSpec};
pub use harness::{
    assign_folds, detect_optimal_stage, run_cv, sweep, CellKey, CellOutcome, EvaluationReport,
    FoldAssignment, SweepOptions,
};
pub use learners::{FittedModel, LearnerConfig, Method};
pub use metrics::{clamp_grade, mae, r_squared};
pub use mixture::{
    fit_em, memberships_at_stage, select_model, ClusterInput, CovarianceFamily, MixtureModel,
};
pub use record::{validate_record, DayClass, StudentRecord};
pub use schedule::{default_schedule, CaItem, CourseSchedule, FolderKind};
pub use staging::{build_matrix, one_hot, stage_schedule, FeatureSet, Stage, StageFeatureMatrix};
