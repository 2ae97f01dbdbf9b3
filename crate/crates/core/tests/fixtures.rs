//! Worked examples checked against a direct window comparison that never
//! builds a slot image.

use moire_core::bar::{build_query_pattern, build_shift_stack, detect_segments, overlap};
use moire_core::oracle::{brute_force_find, brute_force_segment_align};
use moire_core::projection::{detect_candidates, project_rows, two_stage_align, TwoStageParams};
use moire_core::{
    align_sequences, fixtures, row_intensity, AlignParams, CodingScheme, DnaSequence, EventKind,
};

/// Row intensities from comparing the query with every reference window.
fn window_oracle(reference: &str, query: &str, scheme: CodingScheme) -> Vec<u64> {
    let (r, q) = (reference.as_bytes(), query.as_bytes());
    let span = scheme.unit_span();
    let level = u64::from(scheme.signal_level());
    (0..=r.len() - q.len())
        .map(|off| {
            let w = &r[off..off + q.len()];
            (0..=q.len() - span)
                .filter(|&i| w[i..i + span] == q[i..i + span])
                .count() as u64
                * level
        })
        .collect()
}

/// Maximal runs of matching units per row, as (row, first, last) in words.
fn run_oracle(
    reference: &str,
    query: &str,
    scheme: CodingScheme,
    min_run: usize,
) -> Vec<(usize, usize, usize)> {
    let (r, q) = (reference.as_bytes(), query.as_bytes());
    let span = scheme.unit_span();
    let units = q.len() + 1 - span;
    let mut out = Vec::new();
    for off in 0..=r.len() - q.len() {
        let hit = |i: usize| r[off + i..off + i + span] == q[i..i + span];
        let mut i = 0;
        while i < units {
            if !hit(i) {
                i += 1;
                continue;
            }
            let start = i;
            while i < units && hit(i) {
                i += 1;
            }
            if i - start >= min_run {
                out.push((off + 1, start + 1, i));
            }
        }
    }
    out.sort_by_key(|&(row, ws, _)| (ws, row));
    out
}

fn seq(s: &str) -> DnaSequence {
    s.parse().unwrap()
}

#[test]
fn row_intensities_agree_with_window_oracle() {
    let r = fixtures::REFERENCE;
    for q in [fixtures::EXACT_QUERY, fixtures::INDEL_QUERY] {
        for scheme in CodingScheme::ALL {
            let stack = build_shift_stack(&seq(r), q.len(), scheme, r.len() - q.len() + 1).unwrap();
            let pat = build_query_pattern(&seq(q), scheme, stack.rows()).unwrap();
            let img = overlap(&stack, &pat).unwrap();
            assert_eq!(
                row_intensity(&img),
                window_oracle(r, q, scheme),
                "{scheme} {q}"
            );
        }
    }
}

#[test]
fn exact_fixture_is_row_six() {
    let rows = window_oracle(
        fixtures::REFERENCE,
        fixtures::EXACT_QUERY,
        CodingScheme::TypeI,
    );
    assert_eq!(rows[5], 20);
    assert_eq!(
        window_oracle(
            fixtures::REFERENCE,
            fixtures::EXACT_QUERY,
            CodingScheme::TypeII
        )[5],
        40
    );
    assert_eq!(
        brute_force_find(&fixtures::reference(), &fixtures::exact_query()),
        vec![6]
    );
    let out = align_sequences(
        &fixtures::reference(),
        &fixtures::exact_query(),
        CodingScheme::TypeI,
        &AlignParams::default(),
    )
    .unwrap();
    assert_eq!(out.report.exact_match_offsets(), &[6]);
    assert!(out.report.events().is_empty());
}

#[test]
fn reversed_query_absent() {
    assert!(
        brute_force_find(&fixtures::reference(), &fixtures::exact_query().reversed()).is_empty()
    );
}

#[test]
fn indel_fixture_segments() {
    for scheme in CodingScheme::ALL {
        let stack = build_shift_stack(&fixtures::reference(), 20, scheme, 21).unwrap();
        let pat = build_query_pattern(&fixtures::indel_query(), scheme, 21).unwrap();
        let found: Vec<_> = detect_segments(&overlap(&stack, &pat).unwrap(), 3)
            .iter()
            .map(|s| (s.row, s.word_start, s.word_end))
            .collect();
        let expected = run_oracle(fixtures::REFERENCE, fixtures::INDEL_QUERY, scheme, 3);
        assert_eq!(found, expected, "{scheme}");
    }
    // The three segments forming the alignment are among them.
    let t1 = run_oracle(
        fixtures::REFERENCE,
        fixtures::INDEL_QUERY,
        CodingScheme::TypeI,
        3,
    );
    for seg in [(6, 1, 6), (4, 9, 15), (6, 16, 20)] {
        assert!(t1.contains(&seg), "{seg:?}");
    }
}

#[test]
fn indel_fixture_matches_segment_oracle() {
    let oracle =
        brute_force_segment_align(&fixtures::reference(), &fixtures::indel_query(), 3, 3).unwrap();
    let out = align_sequences(
        &fixtures::reference(),
        &fixtures::indel_query(),
        CodingScheme::TypeI,
        &AlignParams::default(),
    )
    .unwrap();
    assert_eq!(out.report.alignment, oracle.alignment);
    let kinds: Vec<_> = out
        .report
        .events()
        .iter()
        .map(|e| (e.kind, e.length))
        .collect();
    assert_eq!(
        kinds,
        vec![(EventKind::Insertion, 2), (EventKind::Deletion, 2)]
    );
    assert!(!out.report.is_ambiguous());
}

#[test]
fn indel_projection_profile() {
    let stack = build_shift_stack(&fixtures::reference(), 20, CodingScheme::TypeI, 21).unwrap();
    let pat = build_query_pattern(&fixtures::indel_query(), CodingScheme::TypeI, 21).unwrap();
    let profile = project_rows(&overlap(&stack, &pat).unwrap());
    let rows = window_oracle(
        fixtures::REFERENCE,
        fixtures::INDEL_QUERY,
        CodingScheme::TypeI,
    );
    assert_eq!(profile.values, rows);
    let c = detect_candidates(&profile, 0.25);
    assert_eq!(c[0], 6);
    assert!(c.contains(&4));

    let two = two_stage_align(
        &fixtures::reference(),
        &fixtures::indel_query(),
        CodingScheme::TypeI,
        &TwoStageParams::default(),
    )
    .unwrap();
    assert_eq!(two.report.events().len(), 2);
}
