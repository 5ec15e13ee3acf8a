//! placeholder
pub struct FoldAssignment;
pub struct EvaluationReport;
pub struct CellKey;
pub struct CellOutcome;
pub struct SweepOptions;
pub fn assign_folds() {}
pub fn run_cv() {}
pub fn sweep() {}
pub fn detect_optimal_stage() {}
