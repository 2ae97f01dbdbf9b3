//! Spatial code words for DNA bases.
//!
//! Four code sets are supported. Types I and II code one base per 4-slot
//! word; types III and IV code overlapped base pairs, so word `i` carries
//! `(seq[i], seq[i + 1])` and consecutive words share a base.
//!
//! | scheme | word | unit | non-dark slots per word |
//! |--------|------|------|-------------------------|
//! | I      | 4    | base | 1 (bright)              |
//! | II     | 4    | base | 2 (H or V)              |
//! | III    | 8    | pair | 1 (H or V)              |
//! | IV     | 16   | pair | 1 (bright)              |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{DnaBase, DnaSequence};

/// State of one slot of a code word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SlotState {
    #[default]
    Dark,
    Bright,
    /// Horizontally polarized light.
    H,
    /// Vertically polarized light.
    V,
}

impl SlotState {
    pub fn is_dark(self) -> bool {
        self == SlotState::Dark
    }
}

/// Intensity transmitted where two slots overlap.
///
/// Light passes only where both slots carry the same state; any dark operand
/// or crossed polarizations extinguish it.
#[inline]
pub fn slot_product(a: SlotState, b: SlotState) -> u32 {
    u32::from(a == b && a != SlotState::Dark)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    IntensityOrPolarization,
    IntensityAndPolarization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodingScheme {
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
}

impl CodingScheme {
    pub const ALL: [CodingScheme; 4] = [
        CodingScheme::TypeI,
        CodingScheme::TypeII,
        CodingScheme::TypeIII,
        CodingScheme::TypeIV,
    ];

    /// Slots per code word.
    pub fn word_length(self) -> usize {
        match self {
            CodingScheme::TypeI | CodingScheme::TypeII => 4,
            CodingScheme::TypeIII => 8,
            CodingScheme::TypeIV => 16,
        }
    }

    /// Bases covered by one word.
    pub fn unit_span(self) -> usize {
        if self.is_pair_coded() {
            2
        } else {
            1
        }
    }

    pub fn is_pair_coded(self) -> bool {
        matches!(self, CodingScheme::TypeIII | CodingScheme::TypeIV)
    }

    /// Intensity of a word overlapped with itself.
    pub fn signal_level(self) -> u32 {
        match self {
            CodingScheme::TypeII => 2,
            _ => 1,
        }
    }

    pub fn modulation(self) -> Modulation {
        match self {
            CodingScheme::TypeI | CodingScheme::TypeIV => Modulation::IntensityOrPolarization,
            CodingScheme::TypeII | CodingScheme::TypeIII => Modulation::IntensityAndPolarization,
        }
    }

    /// Number of words needed to code `bases` bases.
    pub fn word_count(self, bases: usize) -> usize {
        bases.saturating_sub(self.unit_span() - 1)
    }

    /// Scheme from its table number, 1 through 4.
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(CodingScheme::TypeI),
            2 => Some(CodingScheme::TypeII),
            3 => Some(CodingScheme::TypeIII),
            4 => Some(CodingScheme::TypeIV),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            CodingScheme::TypeI => 1,
            CodingScheme::TypeII => 2,
            CodingScheme::TypeIII => 3,
            CodingScheme::TypeIV => 4,
        }
    }

    pub fn roman(self) -> &'static str {
        match self {
            CodingScheme::TypeI => "I",
            CodingScheme::TypeII => "II",
            CodingScheme::TypeIII => "III",
            CodingScheme::TypeIV => "IV",
        }
    }
}

impl fmt::Display for CodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type {}", self.roman())
    }
}

impl FromStr for CodingScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        let t = t
            .strip_prefix("Type")
            .or_else(|| t.strip_prefix("type"))
            .unwrap_or(t)
            .trim();
        match t {
            "1" | "I" | "i" => Ok(CodingScheme::TypeI),
            "2" | "II" | "ii" => Ok(CodingScheme::TypeII),
            "3" | "III" | "iii" => Ok(CodingScheme::TypeIII),
            "4" | "IV" | "iv" => Ok(CodingScheme::TypeIV),
            _ => Err(format!("unknown coding scheme {s:?}")),
        }
    }
}

/// The thing a single word encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeUnit {
    Base(DnaBase),
    Pair(DnaBase, DnaBase),
}

/// A row of slots made of whole code words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotRow {
    slots: Vec<SlotState>,
    word_length: usize,
}

impl SlotRow {
    pub(crate) fn from_words(words: Vec<SlotState>, word_length: usize) -> Self {
        debug_assert_eq!(words.len() % word_length, 0);
        Self {
            slots: words,
            word_length,
        }
    }

    pub fn slots(&self) -> &[SlotState] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn word_count(&self) -> usize {
        self.slots.len() / self.word_length
    }

    pub fn words(&self) -> std::slice::ChunksExact<'_, SlotState> {
        self.slots.chunks_exact(self.word_length)
    }

    pub fn into_slots(self) -> Vec<SlotState> {
        self.slots
    }
}

const TYPE_II_WORDS: [[SlotState; 4]; 4] = {
    use SlotState::{Dark as O, H, V};
    [
        [H, O, O, H], // A
        [V, O, V, O], // G
        [O, V, O, V], // C
        [O, H, H, O], // T
    ]
};

/// Single-base word from the type I or II code table.
pub fn encode_symbol(base: DnaBase, scheme: CodingScheme) -> Result<SlotRow> {
    let idx = base.table_index();
    let slots = match scheme {
        CodingScheme::TypeI => {
            let mut w = vec![SlotState::Dark; 4];
            w[idx] = SlotState::Bright;
            w
        }
        CodingScheme::TypeII => TYPE_II_WORDS[idx].to_vec(),
        other => return Err(Error::WrongScheme(other)),
    };
    Ok(SlotRow::from_words(slots, 4))
}

/// Pair word from the type III or IV code table.
///
/// The table labels its sixteen rows `AA, GA, CA, TA, AG, GG, ...`; the label
/// is read as `first` then `second`, so `("GA")` is row 1.
pub fn encode_pair(first: DnaBase, second: DnaBase, scheme: CodingScheme) -> Result<SlotRow> {
    let row = 4 * second.table_index() + first.table_index();
    let slots = match scheme {
        CodingScheme::TypeIII => {
            let mut w = vec![SlotState::Dark; 8];
            if row < 8 {
                w[row] = SlotState::H;
            } else {
                w[row - 8] = SlotState::V;
            }
            w
        }
        CodingScheme::TypeIV => {
            let mut w = vec![SlotState::Dark; 16];
            w[row] = SlotState::Bright;
            w
        }
        other => return Err(Error::WrongScheme(other)),
    };
    Ok(SlotRow::from_words(slots, scheme.word_length()))
}

pub fn encode_unit(unit: CodeUnit, scheme: CodingScheme) -> Result<SlotRow> {
    match unit {
        CodeUnit::Base(b) => encode_symbol(b, scheme),
        CodeUnit::Pair(a, b) => encode_pair(a, b, scheme),
    }
}

/// The unit stream a scheme codes for `bases`: one unit per base, or one per
/// overlapped pair.
pub fn code_units(bases: &[DnaBase], scheme: CodingScheme) -> Vec<CodeUnit> {
    if scheme.is_pair_coded() {
        bases
            .windows(2)
            .map(|w| CodeUnit::Pair(w[0], w[1]))
            .collect()
    } else {
        bases.iter().map(|&b| CodeUnit::Base(b)).collect()
    }
}

pub(crate) fn encode_bases(bases: &[DnaBase], scheme: CodingScheme) -> Result<SlotRow> {
    let min = scheme.unit_span();
    if bases.len() < min {
        return Err(Error::TooShort {
            scheme,
            len: bases.len(),
            min,
        });
    }
    let units = code_units(bases, scheme);
    let mut slots = Vec::with_capacity(units.len() * scheme.word_length());
    for unit in units {
        slots.extend_from_slice(encode_unit(unit, scheme)?.slots());
    }
    Ok(SlotRow::from_words(slots, scheme.word_length()))
}

/// Concatenated code words for a whole sequence.
pub fn encode_sequence(seq: &DnaSequence, scheme: CodingScheme) -> Result<SlotRow> {
    encode_bases(seq.bases(), scheme)
}

/// Total intensity when the words for `x` and `y` are overlapped.
pub fn word_correlation(x: CodeUnit, y: CodeUnit, scheme: CodingScheme) -> Result<u32> {
    let a = encode_unit(x, scheme)?;
    let b = encode_unit(y, scheme)?;
    Ok(a.slots()
        .iter()
        .zip(b.slots())
        .map(|(&p, &q)| slot_product(p, q))
        .sum())
}

/// Bases compared per run for a row of `pixels` slots.
pub fn processing_gain(pixels: usize, scheme: CodingScheme) -> Result<usize> {
    let word_length = scheme.word_length();
    if pixels == 0 || !pixels.is_multiple_of(word_length) {
        return Err(Error::NotAligned {
            pixels,
            word_length,
        });
    }
    Ok(pixels / word_length)
}
