use thiserror::Error;

/// Exit codes used by the command-line front end.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const NOT_SOME_PRIMITIVE_COMPONENTS: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const BUDGET: i32 = 5;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("not of some primitive components: {0}")]
    NotSomePrimitiveComponents(String),

    #[error("level {level} out of range 1..={levels}")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("word {word:?} is not in the language of level {level}")]
    WordNotInLevelLanguage { word: String, level: usize },

    #[error("level {level} carries a counting measure; cylinder values are not evaluated")]
    MeasureTypeCounting { level: usize },

    #[error("the maximal block eigenvalue is 1; Perron-Frobenius vectors are undefined")]
    LambdaNotDominant,

    #[error("the block eigenvalue of level {level} equals 1")]
    ThetaNotAboveOne { level: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expansion budget exceeded: need {needed} symbols, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => exit::PARSE,
            Error::NotSomePrimitiveComponents(_) => exit::NOT_SOME_PRIMITIVE_COMPONENTS,
            Error::BudgetExceeded { .. } => exit::BUDGET,
            _ => exit::DOMAIN,
        }
    }

    /// Short machine-readable tag, mirrored into JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Argument(_) => "argument",
            Error::NotSomePrimitiveComponents(_) => "not_some_primitive_components",
            Error::LevelOutOfRange { .. } => "level_out_of_range",
            Error::WordNotInLevelLanguage { .. } => "word_not_in_level_language",
            Error::MeasureTypeCounting { .. } => "measure_type_counting",
            Error::LambdaNotDominant => "lambda_not_dominant",
            Error::ThetaNotAboveOne { .. } => "theta_not_above_one",
            Error::Precondition(_) => "precondition",
            Error::BudgetExceeded { .. } => "budget_exceeded",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
