//! Turning bright-line segments into an alignment.
//!
//! Each segment is a run of matched bases on one reference shift. A chain of
//! segments in query order explains the query as contiguous reference blocks;
//! when the chain steps from row `r1` to row `r2`, the query carries an
//! insertion of `r1 - r2` bases (`r2 < r1`) or a deletion of `r2 - r1` bases
//! (`r2 > r1`).
//!
//! The chosen chain maximizes the number of matched query bases. Where a
//! break point can slide without changing the score, earlier blocks are
//! extended as far right as possible. Chains that reach the best score with a
//! different sequence of runs are reported together and flagged ambiguous.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bar::BrightSegment;
use crate::codec::CodingScheme;

/// Upper bound on tied chains carried through the search.
pub(crate) const MAX_TIED_CHAINS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignParams {
    /// Shortest segment, in words, that may join a chain.
    pub min_run: usize,
    pub max_events: usize,
    /// Longest single insertion or deletion, in bases.
    pub max_event_len: usize,
}

impl Default for AlignParams {
    fn default() -> Self {
        Self {
            min_run: 3,
            max_events: 3,
            max_event_len: 8,
        }
    }
}

/// A run of matched query bases on one reference shift, in base coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub query_start: usize,
    pub query_end: usize,
    pub row: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.query_end + 1 - self.query_start
    }

    pub fn is_empty(&self) -> bool {
        self.query_end < self.query_start
    }

    /// The block as a word-unit segment for `scheme`.
    pub fn to_segment(&self, scheme: Option<CodingScheme>) -> BrightSegment {
        let span = scheme.map_or(1, CodingScheme::unit_span);
        let level = scheme.map_or(1, CodingScheme::signal_level);
        let word_end = self.query_end + 1 - span;
        BrightSegment {
            row: self.row,
            word_start: self.query_start,
            word_end,
            intensity: u64::from(level) * (word_end + 1 - self.query_start) as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Insertion,
    Deletion,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Insertion => "insertion",
            EventKind::Deletion => "deletion",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndelEvent {
    /// First query base after the preceding block (1-based).
    pub query_position: usize,
    pub kind: EventKind,
    pub length: usize,
}

/// Events implied by consecutive blocks of a chain.
pub fn chain_events(chain: &[Block]) -> Vec<IndelEvent> {
    chain
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (kind, length) = if b.row < a.row {
                (EventKind::Insertion, a.row - b.row)
            } else {
                (EventKind::Deletion, b.row - a.row)
            };
            IndelEvent {
                query_position: a.query_end + 1,
                kind,
                length,
            }
        })
        .collect()
}

/// The scheme-independent part of an alignment result.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alignment {
    pub exact_match_offsets: Vec<usize>,
    pub chain: Vec<Block>,
    pub events: Vec<IndelEvent>,
    pub ambiguous: bool,
    /// Other chains tied with `chain` at the best score.
    pub alternatives: Vec<Vec<Block>>,
}

impl Alignment {
    /// Assembles a result from every best-scoring chain. `exact` lists the
    /// rows where the whole query matches; they are found separately so the
    /// cap on tied chains cannot drop them.
    pub(crate) fn from_tied_chains(
        mut chains: Vec<Vec<Block>>,
        query_len: usize,
        mut exact: Vec<usize>,
    ) -> Self {
        chains.sort();
        chains.dedup();
        exact.sort_unstable();
        exact.dedup();
        let is_exact =
            |c: &Vec<Block>| c.len() == 1 && c[0].query_start == 1 && c[0].query_end == query_len;
        if let Some(&row) = exact.first() {
            let chain = vec![Block {
                query_start: 1,
                query_end: query_len,
                row,
            }];
            let ambiguous = chains.iter().any(|c| !is_exact(c));
            chains.retain(|c| *c != chain);
            return Alignment {
                exact_match_offsets: exact,
                chain,
                events: Vec::new(),
                ambiguous,
                alternatives: chains,
            };
        }
        if chains.is_empty() {
            return Alignment::default();
        }
        let chain = chains.remove(0);
        Alignment {
            exact_match_offsets: Vec::new(),
            events: chain_events(&chain),
            chain,
            ambiguous: !chains.is_empty(),
            alternatives: chains,
        }
    }

    pub fn matched_bases(&self) -> usize {
        self.chain.iter().map(Block::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrBasis {
    /// Computed at the exact-match row.
    MatchRow,
    /// No exact match; computed at the brightest row.
    BestRow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrValue {
    /// `None` when every other row is dark.
    pub db: Option<f64>,
    pub basis: SnrBasis,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    /// `None` for reports computed directly on sequences.
    pub scheme: Option<CodingScheme>,
    pub alignment: Alignment,
    pub snr: Option<SnrValue>,
}

impl AlignmentReport {
    pub fn segments(&self) -> Vec<BrightSegment> {
        self.alignment
            .chain
            .iter()
            .map(|b| b.to_segment(self.scheme))
            .collect()
    }

    pub fn events(&self) -> &[IndelEvent] {
        &self.alignment.events
    }

    pub fn exact_match_offsets(&self) -> &[usize] {
        &self.alignment.exact_match_offsets
    }

    pub fn is_ambiguous(&self) -> bool {
        self.alignment.ambiguous
    }
}

/// A segment converted to base coordinates.
#[derive(Debug, Clone, Copy)]
struct Run {
    row: usize,
    start: usize,
    end: usize,
}

type ClassKey = Vec<(usize, usize)>;

#[derive(Debug, Clone)]
struct Suffix {
    score: usize,
    options: Vec<(ClassKey, Vec<Block>)>,
}

struct ChainSearch<'a> {
    runs: &'a [Run],
    min_len: usize,
    params: AlignParams,
    memo: HashMap<(usize, usize, usize), Suffix>,
}

impl ChainSearch<'_> {
    /// Best chains whose first block lies in run `i` and starts at `start`.
    fn solve(&mut self, i: usize, start: usize, used: usize) -> Suffix {
        if let Some(hit) = self.memo.get(&(i, start, used)) {
            return hit.clone();
        }
        let run = self.runs[i];
        let mut cands: Vec<(usize, ClassKey, Vec<Block>)> = Vec::new();
        for end in start + self.min_len - 1..=run.end {
            let block = Block {
                query_start: start,
                query_end: end,
                row: run.row,
            };
            let len = block.len();
            cands.push((len, vec![(run.row, run.start)], vec![block]));
            if used >= self.params.max_events {
                continue;
            }
            for j in 0..self.runs.len() {
                let next = self.runs[j];
                if next.row == run.row || next.row.abs_diff(run.row) > self.params.max_event_len {
                    continue;
                }
                let inserted = run.row.saturating_sub(next.row);
                let next_start = next.start.max(end + 1 + inserted);
                if next_start + self.min_len - 1 > next.end {
                    continue;
                }
                let sub = self.solve(j, next_start, used + 1);
                for (key, chain) in sub.options {
                    let mut k = vec![(run.row, run.start)];
                    k.extend(key);
                    let mut c = vec![block];
                    c.extend(chain);
                    cands.push((len + sub.score, k, c));
                }
            }
        }
        let out = reduce_candidates(cands);
        self.memo.insert((i, start, used), out.clone());
        out
    }
}

fn ends(chain: &[Block]) -> Vec<usize> {
    chain.iter().map(|b| b.query_end).collect()
}

/// Keeps the best score, one right-most representative per run sequence.
fn reduce_candidates(cands: Vec<(usize, ClassKey, Vec<Block>)>) -> Suffix {
    let score = cands.iter().map(|c| c.0).max().unwrap_or(0);
    let mut by_class: HashMap<ClassKey, Vec<Block>> = HashMap::new();
    for (s, key, chain) in cands {
        if s != score {
            continue;
        }
        match by_class.get_mut(&key) {
            Some(existing) if ends(existing) >= ends(&chain) => {}
            Some(existing) => *existing = chain,
            None => {
                by_class.insert(key, chain);
            }
        }
    }
    let mut options: Vec<(ClassKey, Vec<Block>)> = by_class.into_iter().collect();
    options.sort_by(|a, b| a.1.cmp(&b.1));
    options.truncate(MAX_TIED_CHAINS);
    Suffix { score, options }
}

/// Chains `segments` (from [`crate::bar::detect_segments`]) into an alignment
/// for a query of `query_len` bases coded with `scheme`.
pub fn infer_alignment(
    segments: &[BrightSegment],
    query_len: usize,
    scheme: CodingScheme,
    params: &AlignParams,
) -> AlignmentReport {
    let span = scheme.unit_span();
    let min_run = params.min_run.max(1);
    let runs: Vec<Run> = segments
        .iter()
        .filter(|s| s.words() >= min_run)
        .map(|s| Run {
            row: s.row,
            start: s.word_start,
            end: s.word_end + span - 1,
        })
        .collect();
    let mut search = ChainSearch {
        runs: &runs,
        min_len: min_run + span - 1,
        params: *params,
        memo: HashMap::new(),
    };
    let mut tops = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let sub = search.solve(i, run.start, 0);
        tops.extend(sub.options.into_iter().map(|(k, c)| (sub.score, k, c)));
    }
    let best = reduce_candidates(tops);
    let exact = segments
        .iter()
        .filter(|s| s.word_start == 1 && s.word_end + span - 1 == query_len)
        .map(|s| s.row)
        .collect();
    AlignmentReport {
        scheme: Some(scheme),
        alignment: Alignment::from_tied_chains(
            best.options.into_iter().map(|(_, c)| c).collect(),
            query_len,
            exact,
        ),
        snr: None,
    }
}
