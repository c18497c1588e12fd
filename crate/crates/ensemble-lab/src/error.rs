use crate::rational::{fmt_rat, Rat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative weight {} for symbol `{symbol}`", fmt_rat(weight))]
    NegativeWeight { symbol: String, weight: Rat },
    #[error("weights sum to {}, deficit {}", fmt_rat(sum), fmt_rat(deficit))]
    SumNotOne { sum: Rat, deficit: Rat },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("conditioning event has probability zero")]
    ZeroConditionEvent,
    #[error("too many events for subcollection check: {0} > 20")]
    TooManyEvents(usize),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` contains the reserved separator `|`")]
    ReservedSeparator(String),
    #[error("stream starved after scanning {scanned} symbols")]
    Starved { scanned: u64 },
    #[error("selection rule undefined on a prefix of length {0}")]
    Stalled(usize),
    #[error("shuffle index function not injective: index {0} repeats")]
    NotInjective(u64),
    #[error("empty string not allowed in test level")]
    EmptyStringInLevel,
    #[error("level is not prefix-free: `{0}` is a prefix of `{1}`")]
    NotPrefixFreeLevel(String, String),
    #[error("oracle level for section `{section}` uncertified: measure {} >= 2^-{index}", fmt_rat(measure))]
    UncertifiedOracleLevel {
        section: String,
        index: u32,
        measure: Rat,
    },
    #[error("epsilon out of range: need 0 < eps <= P(0)P(1) = {}", fmt_rat(limit))]
    EpsilonOutOfRange { limit: Rat },
    #[error("degenerate space: need 0 < P(1) < 1")]
    DegenerateQ,
    #[error("empty prefix")]
    EmptyPrefix,
    #[error("prefix too short for compression proxy: {0} < 1024")]
    Inconclusive(usize),
    #[error("prefix lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("space has non-dyadic weight {} for `{symbol}`", fmt_rat(weight))]
    NotDyadic { symbol: String, weight: Rat },
    #[error("bits not parsable by code at offset {0}")]
    UnparsableBits(u64),
    #[error("{0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
