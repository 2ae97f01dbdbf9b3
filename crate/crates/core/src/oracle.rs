//! Direct ground truth for exact matching and indel-segmented alignment.
//!
//! Nothing here looks at code words or overlap images. The segmented aligner
//! enumerates every block placement by comparing characters, so it can be
//! used to check the optical pipeline end to end.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::align::{Alignment, AlignmentReport, Block, EventKind, MAX_TIED_CHAINS};
use crate::error::{Error, Result};
use crate::sequence::{DnaBase, DnaSequence};

/// Longest insertion or deletion the enumeration considers.
pub const MAX_EVENT_LEN: usize = 8;

/// Every 1-based offset where `query` occurs verbatim in `reference`.
pub fn brute_force_find(reference: &DnaSequence, query: &DnaSequence) -> Vec<usize> {
    let (r, q) = (reference.bases(), query.bases());
    if q.len() > r.len() {
        return Vec::new();
    }
    (0..=r.len() - q.len())
        .filter(|&k| r[k..k + q.len()] == *q)
        .map(|k| k + 1)
        .collect()
}

type RunKey = Vec<(usize, usize)>;

#[derive(Clone)]
struct Best {
    score: usize,
    chains: Vec<(RunKey, Vec<Block>)>,
}

struct Enumerator<'a> {
    reference: &'a [DnaBase],
    query: &'a [DnaBase],
    shifts: usize,
    min_seg: usize,
    max_events: usize,
    memo: HashMap<(usize, usize, usize), Best>,
}

impl Enumerator<'_> {
    /// Query base `pos` against the reference under shift `row` (both 1-based).
    fn hit(&self, row: usize, pos: usize) -> bool {
        self.query[pos - 1] == self.reference[pos + row - 2]
    }

    fn run_start(&self, row: usize, mut pos: usize) -> usize {
        while pos > 1 && self.hit(row, pos - 1) {
            pos -= 1;
        }
        pos
    }

    /// All blocks on `row` starting at `start`, with the best continuation of
    /// each, appended to `out`.
    fn blocks_from(
        &mut self,
        row: usize,
        start: usize,
        used: usize,
        out: &mut Vec<(usize, RunKey, Vec<Block>)>,
    ) {
        let m = self.query.len();
        let key = (row, self.run_start(row, start));
        let mut end = start;
        while end <= m && self.hit(row, end) {
            let len = end + 1 - start;
            if len >= self.min_seg {
                let block = Block {
                    query_start: start,
                    query_end: end,
                    row,
                };
                let rest = self.after(end, row, used);
                for (k, c) in rest.chains {
                    let mut keys = vec![key];
                    keys.extend(k);
                    let mut chain = vec![block];
                    chain.extend(c);
                    out.push((len + rest.score, keys, chain));
                }
            }
            end += 1;
        }
    }

    /// Best continuation after a block ending at `end` on `row`, having used
    /// `used` events so far. Stopping is always allowed.
    fn after(&mut self, end: usize, row: usize, used: usize) -> Best {
        if let Some(b) = self.memo.get(&(end, row, used)) {
            return b.clone();
        }
        let mut options = vec![(0, Vec::new(), Vec::new())];
        if used < self.max_events {
            let lo = row.saturating_sub(MAX_EVENT_LEN).max(1);
            let hi = (row + MAX_EVENT_LEN).min(self.shifts);
            for next in lo..=hi {
                if next == row {
                    continue;
                }
                // An insertion leaves its bases unmatched in the query.
                let first = end + 1 + row.saturating_sub(next);
                for start in first..=self.query.len() {
                    if self.hit(next, start) {
                        self.blocks_from(next, start, used + 1, &mut options);
                    }
                }
            }
        }
        let best = keep_best(options);
        self.memo.insert((end, row, used), best.clone());
        best
    }
}

fn keep_best(options: Vec<(usize, RunKey, Vec<Block>)>) -> Best {
    let score = options.iter().map(|o| o.0).max().unwrap_or(0);
    let mut picked: Vec<(RunKey, Vec<Block>)> = Vec::new();
    for (s, key, chain) in options {
        if s != score {
            continue;
        }
        if let Some(slot) = picked.iter_mut().find(|(k, _)| *k == key) {
            let old: Vec<usize> = slot.1.iter().map(|b| b.query_end).collect();
            let new: Vec<usize> = chain.iter().map(|b| b.query_end).collect();
            if new > old {
                slot.1 = chain;
            }
        } else {
            picked.push((key, chain));
        }
    }
    picked.sort_by(|a, b| a.1.cmp(&b.1));
    picked.truncate(MAX_TIED_CHAINS);
    Best {
        score,
        chains: picked,
    }
}

/// Exhaustive indel-segmented alignment of `query` against the shifts of
/// `reference`.
///
/// Every placement of up to `max_events` insertions or deletions (each at
/// most [`MAX_EVENT_LEN`] bases) is scored by total matched bases; each block
/// must match contiguously and span at least `min_seg` bases.
pub fn brute_force_segment_align(
    reference: &DnaSequence,
    query: &DnaSequence,
    max_events: usize,
    min_seg: usize,
) -> Result<AlignmentReport> {
    let (n, m) = (reference.len(), query.len());
    if m > n {
        return Err(Error::WindowTooLarge {
            window: m,
            shifts: 1,
            reference: n,
        });
    }
    let mut en = Enumerator {
        reference: reference.bases(),
        query: query.bases(),
        shifts: n - m + 1,
        min_seg: min_seg.max(1),
        max_events,
        memo: HashMap::new(),
    };
    let mut options = Vec::new();
    for row in 1..=en.shifts {
        for start in 1..=m {
            if en.hit(row, start) {
                en.blocks_from(row, start, 0, &mut options);
            }
        }
    }
    let best = keep_best(options);
    if best.chains.is_empty() {
        return Err(Error::NoAlignment);
    }
    Ok(AlignmentReport {
        scheme: None,
        alignment: Alignment::from_tied_chains(
            best.chains.into_iter().map(|(_, c)| c).collect(),
            m,
            brute_force_find(reference, query),
        ),
        snr: None,
    })
}

/// A random reference with a query cut from it and edited by known events.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub reference: DnaSequence,
    pub query: DnaSequence,
    /// The planted blocks, with break points slid right where the sequence
    /// content allows while every block keeps `min_block` bases; `None` when
    /// coincidental matches make that impossible. See
    /// [`PlantedInstance::truth_for`] for an aligner's own minimum.
    pub truth: Option<AlignmentReport>,
    /// Blocks exactly as planted.
    pub planted: Vec<Block>,
    pub rng_seed: u64,
}

impl PlantedInstance {
    /// The planted truth in the canonical form an aligner that accepts
    /// blocks of `min_seg` bases reports: break points slid as far right as
    /// the shorter minimum allows.
    pub fn truth_for(&self, min_seg: usize) -> Option<AlignmentReport> {
        canonical_truth(&self.reference, &self.query, &self.planted, min_seg.max(1))
    }
}

/// Builds an instance from `seed`.
///
/// The reference has `ref_len` IID bases and the query ends up `query_len`
/// bases long. `events` are applied left to right; every block between them
/// spans at least `min_block` query bases.
pub fn plant_instance(
    seed: u64,
    ref_len: usize,
    query_len: usize,
    events: &[(EventKind, usize)],
    min_block: usize,
) -> Result<PlantedInstance> {
    let bad = |msg: String| Err(Error::InconsistentSpec(msg));
    if query_len == 0 || query_len > ref_len {
        return bad(format!(
            "query of {query_len} bases against reference of {ref_len}"
        ));
    }
    if let Some((kind, _)) = events.iter().find(|e| e.1 == 0) {
        return bad(format!("{kind} of length 0"));
    }
    let inserted: usize = events
        .iter()
        .filter(|e| e.0 == EventKind::Insertion)
        .map(|e| e.1)
        .sum();
    let blocks = events.len() + 1;
    let min_block = min_block.max(1);
    let matched = match query_len.checked_sub(inserted) {
        Some(v) if v >= blocks * min_block => v,
        _ => {
            return bad(format!(
                "{query_len} query bases cannot hold {blocks} blocks of {min_block} plus {inserted} inserted"
            ))
        }
    };

    // Row offsets relative to the first block.
    let mut offsets = vec![0isize];
    for &(kind, len) in events {
        let last = *offsets.last().unwrap();
        offsets.push(match kind {
            EventKind::Insertion => last - len as isize,
            EventKind::Deletion => last + len as isize,
        });
    }
    let lo = *offsets.iter().min().unwrap();
    let hi = *offsets.iter().max().unwrap();
    let shifts = (ref_len - query_len + 1) as isize;
    if hi - lo > shifts - 1 {
        return bad(format!(
            "events span {} shifts but only {shifts} fit the reference",
            hi - lo + 1
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = DnaSequence::random(&mut rng, ref_len)?;
    let first_row = rng.random_range((1 - lo) as i64..=(shifts - hi) as i64) as isize;

    let extra = matched - blocks * min_block;
    let mut cuts: Vec<usize> = (0..blocks - 1)
        .map(|_| rng.random_range(0..=extra))
        .collect();
    cuts.sort_unstable();
    let mut lens = Vec::with_capacity(blocks);
    let mut prev = 0;
    for &c in cuts.iter().chain(std::iter::once(&extra)) {
        lens.push(min_block + c - prev);
        prev = c;
    }

    let rb = reference.bases();
    let mut query = Vec::with_capacity(query_len);
    let mut planted = Vec::with_capacity(blocks);
    for (b, &len) in lens.iter().enumerate() {
        let row = (first_row + offsets[b]) as usize;
        let start = query.len() + 1;
        query.extend_from_slice(&rb[start + row - 2..start + row - 2 + len]);
        planted.push(Block {
            query_start: start,
            query_end: start + len - 1,
            row,
        });
        if let Some(&(EventKind::Insertion, k)) = events.get(b) {
            for _ in 0..k {
                query.push(DnaBase::ALL[rng.random_range(0..4)]);
            }
        }
    }
    debug_assert_eq!(query.len(), query_len);
    let query = DnaSequence::new(query)?;
    let truth = canonical_truth(&reference, &query, &planted, min_block);
    Ok(PlantedInstance {
        reference,
        query,
        truth,
        planted,
        rng_seed: seed,
    })
}

/// Slides planted break points to their right-most equivalent positions.
fn canonical_truth(
    reference: &DnaSequence,
    query: &DnaSequence,
    planted: &[Block],
    min_len: usize,
) -> Option<AlignmentReport> {
    let (r, q) = (reference.bases(), query.bases());
    let m = q.len();
    let hit = |row: usize, pos: usize| q[pos - 1] == r[pos + row - 2];
    let runs: Vec<(usize, usize)> = planted
        .iter()
        .map(|b| {
            let (mut s, mut e) = (b.query_start, b.query_end);
            while s > 1 && hit(b.row, s - 1) {
                s -= 1;
            }
            while e < m && hit(b.row, e + 1) {
                e += 1;
            }
            (s, e)
        })
        .collect();
    let k = planted.len();
    let gap = |b: usize| planted[b].row.saturating_sub(planted[b + 1].row);
    let mut ends = vec![0isize; k];
    ends[k - 1] = runs[k - 1].1 as isize;
    for b in (0..k - 1).rev() {
        ends[b] = (runs[b].1 as isize).min(ends[b + 1] - (min_len + gap(b)) as isize);
    }
    let mut chain = Vec::with_capacity(k);
    let mut start = runs[0].0 as isize;
    for b in 0..k {
        if b > 0 {
            start = (runs[b].0 as isize).max(ends[b - 1] + 1 + gap(b - 1) as isize);
        }
        if ends[b] - start + 1 < min_len as isize {
            return None;
        }
        chain.push(Block {
            query_start: start as usize,
            query_end: ends[b] as usize,
            row: planted[b].row,
        });
    }
    let exact = brute_force_find(reference, query);
    if k > 1 && !exact.is_empty() {
        // The edited query also occurs verbatim somewhere.
        return None;
    }
    Some(AlignmentReport {
        scheme: None,
        alignment: Alignment::from_tied_chains(vec![chain], m, exact),
        snr: None,
    })
}
