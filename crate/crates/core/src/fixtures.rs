//! Reference strings for the worked alignment example.
//!
//! `EXACT_QUERY` occurs in `REFERENCE` at offset 6. `INDEL_QUERY` is
//! `EXACT_QUERY` with `AG` inserted after its sixth base and its fourteenth
//! and fifteenth bases (`GG`) removed.

use crate::sequence::{parse_sequence, DnaSequence};

pub const REFERENCE: &str = "TCCGTACGTATCCGTACAGGTCGAATGCGTACATCGACCT";
pub const EXACT_QUERY: &str = "ACGTATCCGTACAGGTCGAA";
pub const INDEL_QUERY: &str = "ACGTATAGCCGTACATCGAA";

pub fn reference() -> DnaSequence {
    parse_sequence(REFERENCE).expect("fixture is valid DNA")
}

pub fn exact_query() -> DnaSequence {
    parse_sequence(EXACT_QUERY).expect("fixture is valid DNA")
}

pub fn indel_query() -> DnaSequence {
    parse_sequence(INDEL_QUERY).expect("fixture is valid DNA")
}
