use crate::automaton::Diagnostic;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("automaton violates {} standing assumption(s): {}", .0.len(), join(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("DFA required: state {state} has several out-edges labeled {letter}")]
    NotDeterministic { state: u32, letter: u32 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("empty string")]
    EmptyString,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
