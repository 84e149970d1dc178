//! Satisfiability, finite model search and the containment decision.

mod containment;
mod finite;
mod tableau;

use thiserror::Error;

use crate::dl::{DlError, DlFragment, Interpretation};
use crate::translation::TranslationError;

pub use containment::{
    decide_containment, extract_counterexample, find_counterexample, subsumes, ContainmentOptions,
    ContainmentVerdict, Counterexample, Entailment, Guarantee, Provenance, DEFAULT_BOUND,
};
pub use finite::{bounded_model_search, model_of_size, SearchRestriction};
pub use tableau::{tableau_sat, TableauConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasonerError {
    #[error("the tableau handles ALCOQ only; this input is {0}")]
    FragmentTooLarge(&'static str),
    #[error("tableau gave up after {0} rule applications")]
    BudgetExhausted(u64),
    #[error("unknown shape {0}")]
    UnknownShape(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error(transparent)]
    Translation(#[from] TranslationError),
}

impl ReasonerError {
    fn fragment(f: DlFragment) -> ReasonerError {
        ReasonerError::FragmentTooLarge(f.label())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SatStats {
    pub rule_applications: u64,
    pub branches: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Satisfiable,
    Unsatisfiable,
}

/// `model` is present exactly when the status is satisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub model: Option<Interpretation>,
    pub stats: SatStats,
}

impl SatResult {
    pub fn status(&self) -> SatStatus {
        if self.model.is_some() {
            SatStatus::Satisfiable
        } else {
            SatStatus::Unsatisfiable
        }
    }

    pub fn is_sat(&self) -> bool {
        self.model.is_some()
    }
}
