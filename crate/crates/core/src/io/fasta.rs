use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sequence::{parse_sequence, DnaSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub sequence: DnaSequence,
}

pub fn read_fasta(path: impl AsRef<Path>) -> Result<Vec<FastaRecord>> {
    parse_fasta(&fs::read_to_string(path)?)
}

/// Parses FASTA text. The identifier is the first word of the header line.
pub fn parse_fasta(text: &str) -> Result<Vec<FastaRecord>> {
    let mut records = Vec::new();
    let mut current: Option<(String, String, usize)> = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim_end_matches('\r');
        if let Some(header) = line.strip_prefix('>') {
            if let Some(rec) = current.take() {
                records.push(finish(rec)?);
            }
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            if id.is_empty() {
                return Err(Error::MalformedFasta {
                    line: lineno,
                    reason: "empty identifier".into(),
                });
            }
            current = Some((id, String::new(), lineno));
        } else if line.trim().is_empty() || line.starts_with(';') {
            continue;
        } else {
            match current.as_mut() {
                Some((_, seq, _)) => seq.push_str(line.trim()),
                None => {
                    return Err(Error::MalformedFasta {
                        line: lineno,
                        reason: "sequence data before first header".into(),
                    })
                }
            }
        }
    }
    if let Some(rec) = current {
        records.push(finish(rec)?);
    }
    if records.is_empty() {
        return Err(Error::MalformedFasta {
            line: 1,
            reason: "no records".into(),
        });
    }
    Ok(records)
}

fn finish((id, seq, header_line): (String, String, usize)) -> Result<FastaRecord> {
    match parse_sequence(&seq) {
        Ok(sequence) => Ok(FastaRecord { id, sequence }),
        Err(Error::InvalidBase {
            position,
            character,
        }) => Err(Error::InvalidRecordBase {
            record: id,
            position,
            character,
        }),
        Err(Error::EmptySequence) => Err(Error::MalformedFasta {
            line: header_line,
            reason: format!("record {id} has no sequence"),
        }),
        Err(e) => Err(e),
    }
}
