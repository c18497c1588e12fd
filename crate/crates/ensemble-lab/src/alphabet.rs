//! Alphabets and interned symbols.
//!
//! Symbols are arbitrary strings (not single characters) so that product
//! alphabets and message/ciphertext spaces share one representation. Tuple
//! symbols are rendered with the reserved separator `|`, which is forbidden
//! in user symbols.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub const TUPLE_SEP: char = '|';

/// Index of a symbol within its alphabet.
pub type Sym = u32;

#[derive(Debug)]
struct Inner {
    symbols: Vec<String>,
    index: HashMap<String, Sym>,
}

/// Ordered finite set of distinct symbol tokens. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Alphabet(Arc<Inner>);

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Parse("empty symbol token".into()));
            }
            if index.insert(s.clone(), i as Sym).is_some() {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet(Arc::new(Inner { symbols, index })))
    }

    /// Alphabet whose symbols must not contain the tuple separator;
    /// used for user-facing spaces so product alphabets stay unambiguous.
    pub fn new_user<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let a = Self::new(symbols)?;
        for s in a.symbols() {
            if s.contains(TUPLE_SEP) {
                return Err(Error::ReservedSeparator(s.clone()));
            }
        }
        Ok(a)
    }

    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[String] {
        &self.0.symbols
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.0.symbols[s as usize]
    }

    pub fn lookup(&self, name: &str) -> Result<Sym> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.index.contains_key(name)
    }

    pub fn ids(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.len() as Sym).into_iter()
    }

    /// Two alphabets are the same if they list the same symbols in order.
    pub fn same_as(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }

    /// Product alphabet: tuples rendered `a|b|c` in row-major order
    /// (last component varies fastest).
    pub fn product(parts: &[Alphabet]) -> Result<Self> {
        assert!(!parts.is_empty());
        let mut tuples: Vec<String> = vec![String::new()];
        for (i, part) in parts.iter().enumerate() {
            let mut next = Vec::with_capacity(tuples.len() * part.len());
            for t in &tuples {
                for s in part.symbols() {
                    if i == 0 {
                        next.push(s.clone());
                    } else {
                        next.push(format!("{t}{TUPLE_SEP}{s}"));
                    }
                }
            }
            tuples = next;
        }
        Alphabet::new(tuples)
    }

    /// Split a tuple symbol back into its components.
    pub fn split_tuple(name: &str) -> Vec<&str> {
        name.split(TUPLE_SEP).collect()
    }

    /// Render a string of symbol ids. Single-character symbols concatenate
    /// directly; otherwise components are joined with `.`.
    pub fn render(&self, word: &[Sym]) -> String {
        if self.symbols().iter().all(|s| s.chars().count() == 1) {
            word.iter().map(|&s| self.name(s)).collect()
        } else {
            word.iter()
                .map(|&s| self.name(s))
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Parse a rendered string token. If every symbol is one character the
    /// token is read character-by-character, otherwise it is split on `.`.
    pub fn parse_word(&self, token: &str) -> Result<Vec<Sym>> {
        if token.is_empty() {
            return Ok(Vec::new());
        }
        if self.symbols().iter().all(|s| s.chars().count() == 1) && !token.contains('.') {
            token
                .chars()
                .map(|c| self.lookup(&c.to_string()))
                .collect()
        } else {
            token.split('.').map(|t| self.lookup(t)).collect()
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols().join(", "))
    }
}
