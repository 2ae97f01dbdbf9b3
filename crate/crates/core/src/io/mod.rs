//! File formats: FASTA in; PGM/PNG, JSON and CSV out.

pub mod config;
pub mod fasta;
pub mod image;
pub mod report;

pub use config::{CircularParams, ImageFormat, RunConfig};
pub use fasta::{parse_fasta, read_fasta, FastaRecord};
pub use image::{decode_pgm, encode_pgm, encode_png, gray_to_slots, write_image, GrayImage};
pub use report::{profile_csv, report_json, write_profile_csv, write_report};
