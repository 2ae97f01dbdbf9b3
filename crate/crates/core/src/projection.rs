//! Row projection of an overlap image and the coarse-to-fine aligner built on
//! it.
//!
//! Summing each row to a single value is what a cylindrical lens does to the
//! overlap pattern: a bright line collapses to a bright point. Rows whose
//! point is bright enough become candidates, and only those rows (plus a
//! margin for nearby indel steps) are searched in 2D.

use std::collections::BTreeSet;

use crate::align::{infer_alignment, AlignParams, AlignmentReport};
use crate::bar::{detect_segments_in_rows, OverlapImage};
use crate::codec::CodingScheme;
use crate::error::{Error, Result};
use crate::pipeline::{correlate, report_snr};
use crate::sequence::DnaSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionProfile {
    pub values: Vec<u64>,
    pub rows: usize,
    pub cols: usize,
    /// Value of a row at full correlation.
    pub full_value: u64,
}

pub fn project_rows(img: &OverlapImage) -> ProjectionProfile {
    let values = img
        .data()
        .chunks(img.cols().max(1))
        .take(img.rows())
        .map(|row| row.iter().map(|&v| u64::from(v)).sum())
        .collect();
    ProjectionProfile {
        values,
        rows: img.rows(),
        cols: img.cols(),
        full_value: img.full_row_value(),
    }
}

/// 1-based rows reaching `threshold` of the full-match value, brightest
/// first (ties by row).
pub fn detect_candidates(profile: &ProjectionProfile, threshold: f64) -> Vec<usize> {
    let cut = threshold * profile.full_value as f64;
    let mut rows: Vec<usize> = profile
        .values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v as f64 >= cut)
        .map(|(i, _)| i + 1)
        .collect();
    rows.sort_by_key(|&r| (std::cmp::Reverse(profile.values[r - 1]), r));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStageParams {
    pub align: AlignParams,
    pub threshold: f64,
    /// Rows searched on each side of a candidate.
    pub max_event_gap: usize,
}

impl Default for TwoStageParams {
    fn default() -> Self {
        Self {
            align: AlignParams::default(),
            threshold: 0.25,
            max_event_gap: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TwoStageResult {
    pub profile: ProjectionProfile,
    pub candidates: Vec<usize>,
    /// Candidate rows widened by `max_event_gap`, ascending.
    pub searched_rows: Vec<usize>,
    pub report: AlignmentReport,
}

/// Rows within `gap` of any candidate, clipped to `1..=rows`.
pub fn dilate_rows(candidates: &[usize], gap: usize, rows: usize) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for &c in candidates {
        let lo = c.saturating_sub(gap).max(1);
        let hi = (c + gap).min(rows);
        set.extend(lo..=hi);
    }
    set.into_iter().collect()
}

pub fn two_stage_align(
    reference: &DnaSequence,
    query: &DnaSequence,
    scheme: CodingScheme,
    params: &TwoStageParams,
) -> Result<TwoStageResult> {
    if !(0.0..=1.0).contains(&params.threshold) {
        return Err(Error::InvalidThreshold(params.threshold));
    }
    let (_, _, img) = correlate(reference, query, scheme)?;
    let profile = project_rows(&img);
    let candidates = detect_candidates(&profile, params.threshold);
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let searched_rows = dilate_rows(&candidates, params.max_event_gap, img.rows());
    let keep: BTreeSet<usize> = searched_rows.iter().copied().collect();
    let segments = detect_segments_in_rows(&img, params.align.min_run, |r| keep.contains(&r));
    let mut report = infer_alignment(&segments, query.len(), scheme, &params.align);
    report.snr = report_snr(&img, report.exact_match_offsets());
    Ok(TwoStageResult {
        profile,
        candidates,
        searched_rows,
        report,
    })
}
