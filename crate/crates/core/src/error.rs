use thiserror::Error;

use crate::logic::LogicError;
use crate::ordinal::{Ord2, OrdinalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("rankings are over different vocabularies")]
    VocabularyMismatch,
    #[error("ranking has {got} values but the vocabulary has {want} states")]
    WrongLength { got: usize, want: usize },
    #[error("`{0}` is not a conditional function: no state has value 0")]
    NotCf(String),
    #[error("level {0} is empty")]
    EmptyLevel(u64),
    #[error("normalized addition is not defined: {}", describe_offenders(.0))]
    NotDefined(Vec<Offender>),
    #[error("antecedent is not nearly counterfactual: state {0} at degree 0 satisfies it")]
    NotNearlyCounterfactual(String),
    #[error("observation is not a strengthening of the target formula")]
    NotStrengthening,
    #[error("ranking has an infinite value at state {0}")]
    InfiniteValues(String),
    #[error("formula `{0}` has no models")]
    Unsatisfiable(String),
    #[error("strength must be at least 1")]
    ZeroStrength,
    #[error("universe too large: {0}")]
    UniverseTooLarge(String),
    #[error("ranking rules: {0}")]
    RankingSyntax(String),
}

/// A state at which normalized addition needs an undefined subtraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offender {
    pub state: String,
    pub sum: Ord2,
    pub minimum: Ord2,
}

fn describe_offenders(offenders: &[Offender]) -> String {
    offenders
        .iter()
        .map(|o| format!("{} needs {} - {}", o.state, o.sum, o.minimum))
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
