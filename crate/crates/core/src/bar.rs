//! Bar-pattern correlation: a stack of shifted reference windows overlapped
//! with a replicated query, one row per shift.
//!
//! Row indices are 1-based and equal the reference shift they encode: row `r`
//! holds `reference(r : r + m - 1)`.

use crate::codec::{encode_bases, encode_sequence, slot_product, CodingScheme, SlotState};
use crate::error::{Error, Result};
use crate::sequence::DnaSequence;

/// A grid of slot states, one code-word row per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternImage {
    rows: usize,
    cols: usize,
    slots: Vec<SlotState>,
    scheme: CodingScheme,
    origin_shift: usize,
}

impl PatternImage {
    pub fn from_rows(rows: Vec<Vec<SlotState>>, scheme: CodingScheme) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                left: (1, cols),
                right: (1, bad.len()),
            });
        }
        if !cols.is_multiple_of(scheme.word_length()) {
            return Err(Error::NotAligned {
                pixels: cols,
                word_length: scheme.word_length(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            slots: rows.into_iter().flatten().collect(),
            scheme,
            origin_shift: 1,
        })
    }

    /// Raster grids whose width need not be whole words.
    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<SlotState>>, scheme: CodingScheme) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self {
            rows: rows.len(),
            cols,
            slots: rows.into_iter().flatten().collect(),
            scheme,
            origin_shift: 1,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scheme(&self) -> CodingScheme {
        self.scheme
    }

    /// Reference shift encoded by row 1.
    pub fn origin_shift(&self) -> usize {
        self.origin_shift
    }

    pub fn words_per_row(&self) -> usize {
        self.cols / self.scheme.word_length()
    }

    /// Slots of 0-based row `r`.
    pub fn row(&self, r: usize) -> &[SlotState] {
        &self.slots[r * self.cols..(r + 1) * self.cols]
    }

    pub fn slots(&self) -> &[SlotState] {
        &self.slots
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// Per-slot intensities after overlapping two patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapImage {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    scheme: CodingScheme,
}

impl OverlapImage {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>, scheme: CodingScheme) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "overlap data does not fill {rows}x{cols}"
        );
        Self {
            rows,
            cols,
            data,
            scheme,
        }
    }

    pub fn zeros(rows: usize, cols: usize, scheme: CodingScheme) -> Self {
        Self::new(rows, cols, vec![0; rows * cols], scheme)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scheme(&self) -> CodingScheme {
        self.scheme
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn words_per_row(&self) -> usize {
        self.cols / self.scheme.word_length()
    }

    /// Intensity at full correlation across a whole row.
    pub fn full_row_value(&self) -> u64 {
        self.words_per_row() as u64 * u64::from(self.scheme.signal_level())
    }

    /// Summed intensity of each word of 0-based row `r`.
    pub fn word_intensities(&self, r: usize) -> impl Iterator<Item = u32> + '_ {
        self.row(r)
            .chunks_exact(self.scheme.word_length())
            .map(|w| w.iter().sum())
    }

    pub fn total(&self) -> u64 {
        self.data.iter().map(|&v| u64::from(v)).sum()
    }
}

/// Stack of `shifts` reference windows of `window` bases each.
pub fn build_shift_stack(
    reference: &DnaSequence,
    window: usize,
    scheme: CodingScheme,
    shifts: usize,
) -> Result<PatternImage> {
    let n = reference.len();
    let too_large = || Error::WindowTooLarge {
        window,
        shifts,
        reference: n,
    };
    if window == 0 || window > n || shifts == 0 || shifts > n - window + 1 {
        return Err(too_large());
    }
    if window < scheme.unit_span() {
        return Err(Error::TooShort {
            scheme,
            len: window,
            min: scheme.unit_span(),
        });
    }
    let bases = reference.bases();
    let rows = (0..shifts)
        .map(|r| encode_bases(&bases[r..r + window], scheme).map(|row| row.into_slots()))
        .collect::<Result<Vec<_>>>()?;
    PatternImage::from_rows(rows, scheme)
}

/// The query's code row repeated on every line.
pub fn build_query_pattern(
    query: &DnaSequence,
    scheme: CodingScheme,
    rows: usize,
) -> Result<PatternImage> {
    let row = encode_sequence(query, scheme)?.into_slots();
    PatternImage::from_rows(vec![row; rows.max(1)], scheme)
}

pub fn overlap(stack: &PatternImage, query: &PatternImage) -> Result<OverlapImage> {
    if stack.dims() != query.dims() || stack.scheme() != query.scheme() {
        return Err(Error::DimensionMismatch {
            left: stack.dims(),
            right: query.dims(),
        });
    }
    let data = stack
        .slots()
        .iter()
        .zip(query.slots())
        .map(|(&a, &b)| slot_product(a, b))
        .collect();
    Ok(OverlapImage::new(
        stack.rows(),
        stack.cols(),
        data,
        stack.scheme(),
    ))
}

pub fn row_intensity(img: &OverlapImage) -> Vec<u64> {
    (0..img.rows())
        .map(|r| img.row(r).iter().map(|&v| u64::from(v)).sum())
        .collect()
}

/// First 1-based row with the largest intensity.
pub fn best_row(intensities: &[u64]) -> Option<usize> {
    let max = *intensities.iter().max()?;
    intensities.iter().position(|&v| v == max).map(|i| i + 1)
}

/// Ratio, in dB, of row `match_row` (1-based) to the mean of all other rows.
pub fn snr_db(img: &OverlapImage, match_row: usize) -> Result<f64> {
    snr_from_intensities(&row_intensity(img), match_row)
}

pub fn snr_from_intensities(rows: &[u64], match_row: usize) -> Result<f64> {
    if rows.len() < 2 || match_row == 0 || match_row > rows.len() {
        return Err(Error::UndefinedSnr);
    }
    let signal = rows[match_row - 1] as f64;
    let others: u64 = rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != match_row - 1)
        .map(|(_, &v)| v)
        .sum();
    if others == 0 {
        return Err(Error::UndefinedSnr);
    }
    let noise = others as f64 / (rows.len() - 1) as f64;
    Ok(10.0 * (signal / noise).log10())
}

/// A maximal run of fully correlated words on one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrightSegment {
    /// 1-based row (reference shift).
    pub row: usize,
    /// 1-based first word.
    pub word_start: usize,
    /// 1-based last word, inclusive.
    pub word_end: usize,
    pub intensity: u64,
}

impl BrightSegment {
    pub fn words(&self) -> usize {
        self.word_end - self.word_start + 1
    }
}

/// Maximal runs of at least `min_run` full-intensity words, sorted by
/// `(word_start, row)`.
pub fn detect_segments(img: &OverlapImage, min_run: usize) -> Vec<BrightSegment> {
    detect_segments_in_rows(img, min_run, |_| true)
}

pub(crate) fn detect_segments_in_rows(
    img: &OverlapImage,
    min_run: usize,
    keep_row: impl Fn(usize) -> bool,
) -> Vec<BrightSegment> {
    let min_run = min_run.max(1);
    let full = img.scheme().signal_level();
    let mut out = Vec::new();
    for r in 0..img.rows() {
        if !keep_row(r + 1) {
            continue;
        }
        let mut start = None;
        let words: Vec<u32> = img.word_intensities(r).collect();
        for (w, &v) in words.iter().chain(std::iter::once(&0)).enumerate() {
            match (v == full, start) {
                (true, None) => start = Some(w),
                (false, Some(s)) => {
                    if w - s >= min_run {
                        out.push(BrightSegment {
                            row: r + 1,
                            word_start: s + 1,
                            word_end: w,
                            intensity: u64::from(full) * (w - s) as u64,
                        });
                    }
                    start = None;
                }
                _ => {}
            }
        }
    }
    out.sort_by_key(|s| (s.word_start, s.row));
    out
}
