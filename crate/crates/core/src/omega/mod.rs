//! Level-1 automata: ω-words and acceptors over them.

mod acceptor;
mod analysis;
mod complement;
mod lasso;
mod ops;
mod reduce;

pub use acceptor::{Acceptance, OmegaAcceptor, State, StateSet};
pub use lasso::LassoWord;
pub use ops::{AcceptanceKind, DEFAULT_FAMILY_CAP};

#[cfg(test)]
mod tests;
