//! One-dimensional quasicrystal potentials built from measures, and the
//! spectral diagnostics of the associated Schrödinger operators −u″ + uμ = Eu.
//!
//! The crate is organized around a small calculus of *pieces* — signed
//! measures on a finite interval carrying point masses and a piecewise
//! constant density — which are laid out end to end over a substitution
//! sequence (a "suspension") to produce aperiodic potentials such as
//! Kronig–Penney combs on a Fibonacci lattice:
//!
//! - [`measures`]: pieces, concatenation, restriction, total variation and
//!   the uniform local norm `sup_a |μ|((a, a+1])`.
//! - [`subshifts`]: substitution rules, factor complexity, primitivity and
//!   cube (triple repetition) detection on symbolic words.
//! - [`suspension`]: the potential stream over a two-sided word, window
//!   extraction and the three-block window test behind condition (K).
//! - [`fdp`]: the (simple) finite decomposition property checker and the
//!   at-most-one-Lebesgue-multiple sufficient criterion.
//! - [`transfer`]: 2×2 unimodular transfer matrices across pieces, with
//!   δ-kick factors, and the Gordon three-block lower bound.
//! - [`spectral`]: Floquet discriminants and band spectra of periodic
//!   approximants, finite-scale Lyapunov exponents, and the integrated
//!   density of states by oscillation counting.
//!
//! The core is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature when building without `std`. All types are immutable after
//! construction and safe to share across threads.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("qc1d-core needs either the `std` or the `libm` feature for float math");

extern crate alloc;

use alloc::string::String;
use core::fmt;

pub mod fdp;
mod math;
pub mod measures;
pub mod spectral;
pub mod subshifts;
pub mod suspension;
pub mod transfer;

/// Default absolute comparison tolerance for positions, lengths and weights.
///
/// Piece data may involve irrational lengths (e.g. the golden ratio), stored
/// as `f64`; exact comparison (`tol = 0`) is reserved for dyadic-rational
/// data where all arithmetic is exact.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Error type shared by all modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `concatenate` was called with no pieces.
    EmptyConcatenation,
    /// A restriction or window was requested over an empty interval.
    EmptyInterval,
    /// Piece data violates an invariant (described in the payload).
    InvalidPiece(String),
    /// Substitution rules violate an invariant.
    InvalidSubstitution(String),
    /// A symbol without an alphabet entry was encountered.
    UnknownSymbol(char),
    /// Factor length exceeds the word length.
    ComplexityRange { n: usize, len: usize },
    /// Cube frequency sample shorter than one cube (3q symbols).
    SampleTooShort { sample_length: usize, q: usize },
    /// A window reaches beyond the generated symbols; extend the word first.
    ExtendWord,
    /// The factor cutoff cannot contain any factor of suspension length ℓ.
    CutoffTooSmall { cutoff: usize, ell: f64 },
    /// No three-block structure at scale p (Gordon precondition).
    NoThreeBlock { p: f64 },
    /// A solution state must not be identically zero.
    TrivialState,
    /// Miscellaneous invalid argument.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyConcatenation => write!(f, "empty concatenation"),
            Error::EmptyInterval => write!(f, "empty interval"),
            Error::InvalidPiece(msg) => write!(f, "invalid piece: {msg}"),
            Error::InvalidSubstitution(msg) => write!(f, "invalid substitution: {msg}"),
            Error::UnknownSymbol(c) => write!(f, "symbol {c:?} has no alphabet entry"),
            Error::ComplexityRange { n, len } => {
                write!(f, "factor length {n} exceeds word length {len}")
            }
            Error::SampleTooShort { sample_length, q } => {
                write!(f, "sample length {sample_length} is shorter than one cube of block length {q}")
            }
            Error::ExtendWord => write!(f, "window exceeds generated symbols; extend word first"),
            Error::CutoffTooSmall { cutoff, ell } => {
                write!(f, "cutoff {cutoff} cannot contain any factor of suspension length {ell}")
            }
            Error::NoThreeBlock { p } => write!(f, "no three-block structure at p = {p}"),
            Error::TrivialState => write!(f, "solution state must be nonzero"),
            Error::InvalidArgument(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
