//! Avoidance of formulas with reversal.
//!
//! The library decides whether a formula with reversal occurs in a finite
//! word, proves small unavoidability results by exhaustive backtracking,
//! builds families of avoiding words by morphic and cyclic constructions, and
//! checks the run-length ("bad factor") characterization that ties cyclic
//! words to the formula family `phi_k = x y1 ... yk x . y1^R . ... . yk^R`.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --example encounter
//! cargo run --example cyclic_lemma
//! cargo run --example constructions
//! cargo run --example backtracking
//! ```

pub mod constructions;
pub mod cyclic;
pub mod encounter;
pub mod formula;
pub mod prover;
pub mod word;

pub mod cli;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("alphabet of size {0} is not supported")]
    AlphabetTooLarge(usize),
    #[error("duplicate letter '{0}' in alphabet")]
    DuplicateLetter(char),
    #[error("letter id {0} out of range for alphabet of size {1}")]
    LetterOutOfRange(u8, usize),
    #[error("letter '{0}' is not in the alphabet")]
    UnknownLetter(char),
    #[error("words are drawn from different alphabets")]
    AlphabetMismatch,
    #[error("image of '{0}' must be nonempty")]
    EmptyImage(String),
    #[error("no morphism rule for letter '{0}'")]
    MissingRule(char),
    #[error("morphism does not expand its seed")]
    NonExpanding,
    #[error("empty fragment at position {0}")]
    EmptyFragment(usize),
    #[error("formula must have at least one fragment")]
    EmptyFormula,
    #[error("bad symbol '{token}' at position {pos}")]
    BadSymbol { token: String, pos: usize },
    #[error("no image assigned to variable '{0}'")]
    MissingVariable(String),
    #[error("exponent {0} exceeds the allowed bound {1}")]
    ExponentOutOfBounds(u32, u32),
    #[error("exponents must be positive")]
    NonPositiveExponent,
    #[error("cyclic construction needs m >= {1}, got {0}")]
    CyclicTooFew(usize, usize),
    #[error("construction verification failed: {0}")]
    VerificationFailed(String),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
