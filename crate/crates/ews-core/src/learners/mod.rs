//! placeholder
pub struct FittedModel;
pub struct LearnerConfig;
pub struct Method;
