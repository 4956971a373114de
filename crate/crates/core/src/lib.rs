//! Automata on words of length ω^n, hierarchical normal forms for regular
//! ω^n-languages, and ω^n-automatic structures with a first-order decision
//! procedure.

pub mod alphabet;
pub mod budget;
pub mod document;
pub mod error;
pub mod graph;
pub mod hier;
pub mod omega;
pub mod ordinal;
pub mod structures;
#[cfg(any(test, feature = "testing"))]
pub mod testing;
pub mod tree;
pub mod word;

pub use alphabet::{Alphabet, Letter, LetterMap, TupleAlphabet};
pub use budget::Budget;
pub use error::{Error, Result};
pub use hier::HnfAcceptor;
pub use ordinal::OrdinalAutomaton;
pub use word::HierWord;
