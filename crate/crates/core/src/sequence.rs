//! Nucleotide sequences.
//!
//! Positions are 1-based throughout the public API: `seq.slice(6, 25)` is the
//! inclusive range usually written `S(6:25)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DnaBase {
    A,
    C,
    G,
    T,
}

impl DnaBase {
    pub const ALL: [DnaBase; 4] = [DnaBase::A, DnaBase::C, DnaBase::G, DnaBase::T];

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(DnaBase::A),
            'C' => Some(DnaBase::C),
            'G' => Some(DnaBase::G),
            'T' => Some(DnaBase::T),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            DnaBase::A => 'A',
            DnaBase::C => 'C',
            DnaBase::G => 'G',
            DnaBase::T => 'T',
        }
    }

    /// Row of this base in the code tables, which list bases as A, G, C, T.
    pub(crate) fn table_index(self) -> usize {
        match self {
            DnaBase::A => 0,
            DnaBase::G => 1,
            DnaBase::C => 2,
            DnaBase::T => 3,
        }
    }
}

impl fmt::Display for DnaBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A non-empty DNA string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DnaSequence {
    bases: Vec<DnaBase>,
}

impl DnaSequence {
    pub fn new(bases: Vec<DnaBase>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { bases })
    }

    /// Draws `len` IID uniform bases.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Result<Self> {
        let bases = (0..len)
            .map(|_| DnaBase::ALL[rng.random_range(0..4)])
            .collect();
        Self::new(bases)
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[DnaBase] {
        &self.bases
    }

    /// Base at 1-based `pos`.
    pub fn get(&self, pos: usize) -> Option<DnaBase> {
        pos.checked_sub(1).and_then(|i| self.bases.get(i).copied())
    }

    /// Inclusive 1-based slice `[start, end]`.
    pub fn slice(&self, start: usize, end: usize) -> Option<DnaSequence> {
        if start == 0 || end < start || end > self.len() {
            return None;
        }
        Some(DnaSequence {
            bases: self.bases[start - 1..end].to_vec(),
        })
    }

    pub fn reversed(&self) -> DnaSequence {
        let mut bases = self.bases.clone();
        bases.reverse();
        DnaSequence { bases }
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for DnaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sequence(s)
    }
}

/// Parses a case-insensitive ACGT string, ignoring whitespace.
///
/// Error positions count non-whitespace characters, starting at 1.
pub fn parse_sequence(text: &str) -> Result<DnaSequence> {
    let mut bases = Vec::with_capacity(text.len());
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        match DnaBase::from_char(c) {
            Some(b) => bases.push(b),
            None => {
                return Err(Error::InvalidBase {
                    position: bases.len() + 1,
                    character: c,
                })
            }
        }
    }
    DnaSequence::new(bases)
}
