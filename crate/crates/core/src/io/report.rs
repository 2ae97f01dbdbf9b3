//! JSON alignment reports and CSV projection profiles.
//!
//! Report keys are emitted in a fixed order and SNR is printed with four
//! decimals, so a report is byte-identical whenever its inputs are.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::value::RawValue;

use crate::align::{chain_events, AlignmentReport, Block, EventKind, SnrBasis};
use crate::codec::CodingScheme;
use crate::error::Result;
use crate::projection::ProjectionProfile;

#[derive(Serialize)]
struct SegmentOut {
    row: usize,
    word_start: usize,
    word_end: usize,
}

#[derive(Serialize)]
struct EventOut {
    query_position: usize,
    kind: EventKind,
    length: usize,
}

#[derive(Serialize)]
struct ChainOut {
    segments: Vec<SegmentOut>,
    events: Vec<EventOut>,
}

#[derive(Serialize)]
struct ReportOut {
    index_base: u8,
    scheme: Option<String>,
    exact_match_offsets: Vec<usize>,
    segments: Vec<SegmentOut>,
    events: Vec<EventOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snr_db: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snr_basis: Option<SnrBasis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snr_row: Option<usize>,
    ambiguous: bool,
    alternatives: Vec<ChainOut>,
}

fn chain_out(chain: &[Block], scheme: Option<CodingScheme>) -> ChainOut {
    ChainOut {
        segments: segments_out(chain, scheme),
        events: events_out(&chain_events(chain)),
    }
}

fn segments_out(chain: &[Block], scheme: Option<CodingScheme>) -> Vec<SegmentOut> {
    chain
        .iter()
        .map(|b| {
            let s = b.to_segment(scheme);
            SegmentOut {
                row: s.row,
                word_start: s.word_start,
                word_end: s.word_end,
            }
        })
        .collect()
}

fn events_out(events: &[crate::align::IndelEvent]) -> Vec<EventOut> {
    events
        .iter()
        .map(|e| EventOut {
            query_position: e.query_position,
            kind: e.kind,
            length: e.length,
        })
        .collect()
}

/// Fixed-precision SNR literal; `+inf` is a string since JSON has no
/// infinity.
pub fn snr_literal(db: Option<f64>) -> String {
    match db {
        Some(v) if v.is_finite() => format!("{v:.4}"),
        _ => "\"+inf\"".to_string(),
    }
}

pub fn report_json(report: &AlignmentReport) -> Result<String> {
    let snr_db = match &report.snr {
        Some(s) => Some(RawValue::from_string(snr_literal(s.db))?),
        None => None,
    };
    let out = ReportOut {
        index_base: 1,
        scheme: report.scheme.map(|s| s.to_string()),
        exact_match_offsets: report.exact_match_offsets().to_vec(),
        segments: segments_out(&report.alignment.chain, report.scheme),
        events: events_out(report.events()),
        snr_db,
        snr_basis: report.snr.map(|s| s.basis),
        snr_row: report.snr.map(|s| s.row),
        ambiguous: report.is_ambiguous(),
        alternatives: report
            .alignment
            .alternatives
            .iter()
            .map(|c| chain_out(c, report.scheme))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    Ok(text)
}

pub fn write_report(report: &AlignmentReport, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, report_json(report)?)?;
    Ok(())
}

pub fn profile_csv(profile: &ProjectionProfile) -> String {
    let mut out = String::from("row,intensity\n");
    for (i, v) in profile.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, v));
    }
    out
}

pub fn write_profile_csv(profile: &ProjectionProfile, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, profile_csv(profile))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{AlignParams, Alignment, SnrValue};
    use crate::fixtures;
    use crate::pipeline::align_sequences;
    use serde_json::Value;

    fn fixture_report(query: &crate::sequence::DnaSequence) -> AlignmentReport {
        align_sequences(
            &fixtures::reference(),
            query,
            CodingScheme::TypeI,
            &AlignParams::default(),
        )
        .unwrap()
        .report
    }

    #[test]
    fn exact_report_keys_in_order() {
        let text = report_json(&fixture_report(&fixtures::exact_query())).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["index_base"], 1);
        assert_eq!(v["exact_match_offsets"], serde_json::json!([6]));
        assert_eq!(v["events"], serde_json::json!([]));
        assert_eq!(v["snr_basis"], "match_row");
        let keys = [
            "\"index_base\"",
            "\"scheme\"",
            "\"exact_match_offsets\"",
            "\"segments\"",
            "\"events\"",
            "\"snr_db\"",
            "\"ambiguous\"",
        ];
        let at: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(at.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn snr_has_four_decimals() {
        let text = report_json(&fixture_report(&fixtures::exact_query())).unwrap();
        let line = text.lines().find(|l| l.contains("snr_db")).unwrap();
        let num = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
        assert_eq!(num.split('.').nth(1).unwrap().len(), 4);
    }

    #[test]
    fn indel_report_has_two_events() {
        let v: Value =
            serde_json::from_str(&report_json(&fixture_report(&fixtures::indel_query())).unwrap())
                .unwrap();
        let ev = v["events"].as_array().unwrap();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0]["kind"], "insertion");
        assert_eq!(ev[1]["kind"], "deletion");
    }

    #[test]
    fn empty_report_omits_snr() {
        let r = AlignmentReport {
            scheme: Some(CodingScheme::TypeI),
            alignment: Alignment::default(),
            snr: None,
        };
        let v: Value = serde_json::from_str(&report_json(&r).unwrap()).unwrap();
        assert!(v.get("snr_db").is_none());
        for k in ["exact_match_offsets", "segments", "events", "alternatives"] {
            assert!(v[k].as_array().unwrap().is_empty(), "{k}");
        }
    }

    #[test]
    fn infinite_snr_sentinel() {
        let r = AlignmentReport {
            scheme: None,
            alignment: Alignment::default(),
            snr: Some(SnrValue {
                db: None,
                basis: SnrBasis::MatchRow,
                row: 1,
            }),
        };
        let v: Value = serde_json::from_str(&report_json(&r).unwrap()).unwrap();
        assert_eq!(v["snr_db"], "+inf");
    }

    #[test]
    fn csv_profile() {
        let p = ProjectionProfile {
            values: vec![3, 0, 20],
            rows: 3,
            cols: 80,
            full_value: 20,
        };
        assert_eq!(profile_csv(&p), "row,intensity\n1,3\n2,0\n3,20\n");
    }
}
