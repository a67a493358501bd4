use raag_core::cover::CoverError;
use raag_core::gradients::GradientError;
use raag_core::graph::GraphError;
use raag_core::hierarchy::HierarchyError;
use raag_core::quotients::QuotientError;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_CAP: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub exit: u8,
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn new(exit: u8, code: &str, message: impl Into<String>) -> Self {
        CliError {
            exit,
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(EXIT_USAGE, "usage", message)
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::new(EXIT_PARSE, e.code(), e.to_string())
    }
}

impl From<HierarchyError> for CliError {
    fn from(e: HierarchyError) -> Self {
        CliError::new(EXIT_DOMAIN, e.code(), e.to_string())
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        let exit = if e.is_resource_cap() { EXIT_CAP } else { EXIT_DOMAIN };
        CliError::new(exit, e.code(), e.to_string())
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        CliError::new(EXIT_DOMAIN, e.code(), e.to_string())
    }
}

impl From<GradientError> for CliError {
    fn from(e: GradientError) -> Self {
        CliError::new(EXIT_DOMAIN, e.code(), e.to_string())
    }
}
