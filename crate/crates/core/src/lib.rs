//! Moiré-pattern DNA string alignment simulated on pixel grids.
//!
//! Sequences are coded as rows of slot words ([`codec`]), a reference is laid
//! out as a stack of shifted windows ([`bar`]), and the overlap with the
//! query shows matches as bright lines. Segments of those lines are chained
//! into indel events ([`align`]). [`circular`] renders the same stack as
//! equal-area rings and [`projection`] collapses the overlap to a row
//! profile. [`oracle`] answers the same questions by direct comparison.
//!
//! All positions, rows and offsets are 1-based.

pub mod align;
pub mod bar;
pub mod circular;
pub mod codec;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod projection;
pub mod sequence;

pub use align::{
    infer_alignment, AlignParams, Alignment, AlignmentReport, Block, EventKind, IndelEvent,
    SnrBasis, SnrValue,
};
pub use bar::{
    build_query_pattern, build_shift_stack, detect_segments, overlap, row_intensity, snr_db,
    BrightSegment, OverlapImage, PatternImage,
};
pub use circular::{
    circular_align, CircularAlignment, CircularGeometry, PolarOverlap, PolarPattern, RasterSpec,
};
pub use codec::{encode_sequence, processing_gain, slot_product, CodingScheme, SlotRow, SlotState};
pub use error::{Error, Result};
pub use experiment::{run_snr_experiment, SnrExperimentConfig, SnrSummary};
pub use pipeline::{align_sequences, BarAlignment};
pub use projection::{project_rows, two_stage_align, ProjectionProfile, TwoStageParams};
pub use sequence::{parse_sequence, DnaBase, DnaSequence};
