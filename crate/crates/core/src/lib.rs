//! Exact combinatorics of Latin-square transversals: permanents and
//! determinants over the integers, diagonal and transversal counts refined
//! by permutation parity, counts over deleted rows/columns, and a registry
//! of congruence claims that can be verified over exhaustive or sampled
//! corpora of squares.

pub mod algebra;
pub mod claims;
pub mod error;
pub mod fixtures;
pub mod latin;
pub mod search;
pub mod spectrum;

pub use error::{Error, Result};
pub use latin::{
    parse_square, Cells, Diagonal, Intercalate, LatinArray, LatinSquare, Parsed, RowLatinSquare,
    SquareParities, SymbolGrid, TransversalParities, S3,
};

pub use algebra::IntMatrix;
pub use claims::{ClaimKind, ClaimReport, Outcome, Subject, SuiteReport};
pub use search::Corpus;
pub use spectrum::{AnalysisReport, DiagonalSpectrum, ParityTypeCounts, RSequence};
