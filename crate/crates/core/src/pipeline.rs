//! End-to-end bar alignment: stack, overlap, segments, chain, SNR.

use crate::align::{infer_alignment, AlignParams, AlignmentReport, SnrBasis, SnrValue};
use crate::bar::{
    best_row, build_query_pattern, build_shift_stack, detect_segments, overlap, row_intensity,
    snr_from_intensities, OverlapImage, PatternImage,
};
use crate::codec::CodingScheme;
use crate::error::{Error, Result};
use crate::sequence::DnaSequence;

/// Everything the bar pipeline produces for one reference/query pair.
#[derive(Debug, Clone)]
pub struct BarAlignment {
    pub stack: PatternImage,
    pub query: PatternImage,
    pub overlap: OverlapImage,
    pub report: AlignmentReport,
}

/// Images for every shift of `query` along `reference`.
pub fn correlate(
    reference: &DnaSequence,
    query: &DnaSequence,
    scheme: CodingScheme,
) -> Result<(PatternImage, PatternImage, OverlapImage)> {
    let (n, m) = (reference.len(), query.len());
    if m > n {
        return Err(Error::WindowTooLarge {
            window: m,
            shifts: 1,
            reference: n,
        });
    }
    let shifts = n - m + 1;
    let stack = build_shift_stack(reference, m, scheme, shifts)?;
    let q = build_query_pattern(query, scheme, shifts)?;
    let img = overlap(&stack, &q)?;
    Ok((stack, q, img))
}

/// SNR at the exact-match row, or at the brightest row when nothing matches
/// exactly.
pub fn report_snr(img: &OverlapImage, exact_offsets: &[usize]) -> Option<SnrValue> {
    let rows = row_intensity(img);
    if rows.len() < 2 {
        return None;
    }
    let (row, basis) = match exact_offsets.first() {
        Some(&r) => (r, SnrBasis::MatchRow),
        None => (best_row(&rows)?, SnrBasis::BestRow),
    };
    Some(SnrValue {
        db: snr_from_intensities(&rows, row).ok(),
        basis,
        row,
    })
}

/// Full 2D pipeline: every row of the overlap is searched for segments.
pub fn align_sequences(
    reference: &DnaSequence,
    query: &DnaSequence,
    scheme: CodingScheme,
    params: &AlignParams,
) -> Result<BarAlignment> {
    let (stack, q, img) = correlate(reference, query, scheme)?;
    let segments = detect_segments(&img, params.min_run);
    let mut report = infer_alignment(&segments, query.len(), scheme, params);
    report.snr = report_snr(&img, report.exact_match_offsets());
    Ok(BarAlignment {
        stack,
        query: q,
        overlap: img,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::EventKind;
    use crate::fixtures;

    #[test]
    fn exact_fixture() {
        let out = align_sequences(
            &fixtures::reference(),
            &fixtures::exact_query(),
            CodingScheme::TypeI,
            &AlignParams::default(),
        )
        .unwrap();
        assert_eq!(out.report.exact_match_offsets(), &[6]);
        assert!(out.report.events().is_empty());
        let snr = out.report.snr.unwrap();
        assert_eq!(snr.basis, SnrBasis::MatchRow);
        assert_eq!(snr.row, 6);
        assert!(snr.db.unwrap() > 6.0);
    }

    #[test]
    fn indel_fixture_every_scheme() {
        for scheme in CodingScheme::ALL {
            let out = align_sequences(
                &fixtures::reference(),
                &fixtures::indel_query(),
                scheme,
                &AlignParams::default(),
            )
            .unwrap();
            let ev: Vec<_> = out
                .report
                .events()
                .iter()
                .map(|e| (e.query_position, e.kind, e.length))
                .collect();
            assert_eq!(
                ev,
                vec![(7, EventKind::Insertion, 2), (16, EventKind::Deletion, 2)],
                "{scheme}"
            );
            assert_eq!(out.report.snr.unwrap().basis, SnrBasis::BestRow);
        }
    }

    #[test]
    fn query_longer_than_reference() {
        let r = align_sequences(
            &fixtures::exact_query(),
            &fixtures::reference(),
            CodingScheme::TypeI,
            &AlignParams::default(),
        );
        assert!(matches!(r, Err(Error::WindowTooLarge { .. })));
    }
}
