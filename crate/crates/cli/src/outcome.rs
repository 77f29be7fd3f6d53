//! Error-to-exit-code mapping.

use betti_core::alexander::AlexanderError;
use betti_core::exactla::ExactlaError;
use betti_core::fpgroup::FpGroupError;
use betti_core::io::DocError;
use betti_core::iwasawa::IwasawaError;
use betti_core::tower::TowerError;

pub const EXIT_VERDICT: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: malformed documents, failed validation, missing flags.
    Input(String),
    /// A verdict came out negative (or an internal self-check tripped).
    Verdict(String),
    /// A configured resource cap was exceeded.
    Budget(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Verdict(_) => EXIT_VERDICT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Verdict(m) | CliError::Budget(m) | CliError::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExactlaError> for CliError {
    fn from(e: ExactlaError) -> Self {
        match e {
            ExactlaError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            ExactlaError::FieldTooSmall { .. } => CliError::Input(e.to_string()),
        }
    }
}

impl From<FpGroupError> for CliError {
    fn from(e: FpGroupError) -> Self {
        match e {
            FpGroupError::ElementCapExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<IwasawaError> for CliError {
    fn from(e: IwasawaError) -> Self {
        match e {
            IwasawaError::Exactla(inner) => inner.into(),
            IwasawaError::NegativeResidual { .. } => CliError::Verdict(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        if e.is_budget() {
            return CliError::Budget(e.to_string());
        }
        match e {
            TowerError::MonotonicityViolated { .. } | TowerError::SelfCheckFailed { .. } => {
                CliError::Verdict(e.to_string())
            }
            TowerError::FpGroup(inner) => inner.into(),
            TowerError::Exactla(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AlexanderError> for CliError {
    fn from(e: AlexanderError) -> Self {
        match e {
            AlexanderError::Exactla(inner) => inner.into(),
            AlexanderError::FpGroup(inner) => inner.into(),
            AlexanderError::Tower(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}
