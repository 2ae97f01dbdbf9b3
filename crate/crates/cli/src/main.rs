//! `moire`: command-line front end for the moiré alignment simulator.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 no alignment.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use moire_core::bar::build_query_pattern;
use moire_core::circular::{circular_align, detect_ring, RasterSpec};
use moire_core::codec::processing_gain;
use moire_core::experiment::{run_snr_experiment, SnrExperimentConfig};
use moire_core::io::{
    profile_csv, read_fasta, report_json, write_image, CircularParams, GrayImage, ImageFormat,
    RunConfig,
};
use moire_core::pipeline::align_sequences;
use moire_core::projection::{two_stage_align, TwoStageParams};
use moire_core::{AlignParams, CodingScheme, DnaSequence, Error};

#[derive(Parser)]
#[command(
    name = "moire",
    version,
    about = "Moiré-pattern DNA string alignment simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Code a sequence as a pattern image.
    Encode {
        #[command(flatten)]
        common: Common,
        /// FASTA file; the first record is used.
        #[arg(long, conflicts_with = "seq")]
        input: Option<PathBuf>,
        /// Sequence given inline.
        #[arg(long)]
        seq: Option<String>,
        /// Copies of the coded row stacked vertically.
        #[arg(long, default_value_t = 1)]
        rows: usize,
    },
    /// Align a query against every shift of a reference.
    Align {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PairInput,
    },
    /// Run the equal-area ring version of the alignment.
    Circular {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PairInput,
        #[arg(long, default_value_t = 64.0)]
        r0: f64,
        #[arg(long, default_value_t = 16.0)]
        dr0: f64,
        /// Raster edge length in pixels.
        #[arg(long, default_value_t = 1024)]
        size: usize,
        /// Rotation applied to both patterns, radians.
        #[arg(long, default_value_t = 0.0)]
        rotation: f64,
        #[arg(long, default_value_t = 1)]
        supersample: u32,
    },
    /// Project the overlap onto rows and align only near bright rows.
    Project {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PairInput,
        /// Rows searched on each side of a candidate row.
        #[arg(long, default_value_t = 4)]
        max_event_gap: usize,
    },
    /// Monte Carlo SNR of every coding scheme.
    Snr {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 48)]
        reference_len: usize,
        #[arg(long, default_value_t = 24)]
        window_len: usize,
    },
    /// Bases comparable per pattern row of a given width.
    Gain {
        #[arg(long)]
        pixels: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Coding scheme, 1 to 4.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    scheme: u8,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "pgm", value_parser = parse_format)]
    format: ImageFormat,
    /// Output directory; nothing is written when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shortest bright segment, in words.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    min_run: u64,
    /// Fraction of the full-match intensity a row or ring must reach.
    #[arg(long, default_value_t = 0.25, value_parser = parse_fraction)]
    threshold: f64,
}

#[derive(Args)]
struct PairInput {
    /// Reference FASTA; the first record is used.
    #[arg(long, conflicts_with = "reference_seq")]
    reference: Option<PathBuf>,
    #[arg(long)]
    reference_seq: Option<String>,
    /// Query FASTA; the first record is used.
    #[arg(long, conflicts_with = "query_seq")]
    query: Option<PathBuf>,
    #[arg(long)]
    query_seq: Option<String>,
}

fn parse_format(s: &str) -> std::result::Result<ImageFormat, String> {
    s.parse()
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

/// Failure that should exit with a specific code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Exit(1, msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::NoAlignment | Error::NoCandidates) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

impl Common {
    fn scheme(&self) -> CodingScheme {
        CodingScheme::from_number(self.scheme).expect("range checked by clap")
    }

    fn align_params(&self) -> AlignParams {
        AlignParams {
            min_run: self.min_run as usize,
            ..AlignParams::default()
        }
    }

    fn config(&self, command: &str) -> RunConfig {
        let mut cfg = RunConfig::new(command);
        cfg.scheme = self.scheme();
        cfg.seed = self.seed;
        cfg.min_run = self.min_run as usize;
        cfg.threshold = self.threshold;
        cfg.image_format = self.format;
        cfg.output_dir = self.out.clone().unwrap_or_default();
        cfg
    }

    /// Creates the output directory and writes `config.json` into it.
    fn prepare_out(&self, cfg: &RunConfig) -> Result<Option<&Path>> {
        let Some(dir) = self.out.as_deref() else {
            return Ok(None);
        };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        cfg.write(dir.join("config.json"))?;
        Ok(Some(dir))
    }
}

fn load(path: Option<&Path>, literal: Option<&str>, what: &str) -> Result<DnaSequence> {
    match (path, literal) {
        (Some(p), _) => {
            let records = read_fasta(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(records
                .into_iter()
                .next()
                .expect("parser rejects empty files")
                .sequence)
        }
        (None, Some(s)) => s.parse().with_context(|| format!("parsing {what}")),
        (None, None) => Err(usage(format!(
            "no {what} given (use --{what} or --{what}-seq)"
        ))),
    }
}

impl PairInput {
    fn load(&self) -> Result<(DnaSequence, DnaSequence)> {
        Ok((
            load(
                self.reference.as_deref(),
                self.reference_seq.as_deref(),
                "reference",
            )?,
            load(self.query.as_deref(), self.query_seq.as_deref(), "query")?,
        ))
    }
}

fn save_image(dir: Option<&Path>, name: &str, img: &GrayImage, format: ImageFormat) -> Result<()> {
    if let Some(dir) = dir {
        let path = dir.join(format!("{name}.{}", format.extension()));
        write_image(img, format, &path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn save_text(dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    if let Some(dir) = dir {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Encode {
            common,
            input,
            seq,
            rows,
        } => {
            if rows == 0 {
                return Err(usage("--rows must be at least 1"));
            }
            let seq = load(input.as_deref(), seq.as_deref(), "seq")?;
            let scheme = common.scheme();
            let pattern = build_query_pattern(&seq, scheme, rows)?;
            let mut cfg = common.config("encode");
            cfg.window_length = Some(seq.len());
            cfg.shift_count = Some(rows);
            let dir = common.prepare_out(&cfg)?;
            save_image(
                dir,
                "pattern",
                &GrayImage::from_pattern(&pattern),
                common.format,
            )?;
            println!(
                "{}: {} bases -> {} words, {}x{} slots",
                scheme,
                seq.len(),
                pattern.words_per_row(),
                pattern.cols(),
                pattern.rows()
            );
        }
        Command::Align { common, input } => {
            let (reference, query) = input.load()?;
            let scheme = common.scheme();
            let out = align_sequences(&reference, &query, scheme, &common.align_params())?;
            let mut cfg = common.config("align");
            cfg.window_length = Some(query.len());
            cfg.shift_count = Some(out.stack.rows());
            let dir = common.prepare_out(&cfg)?;
            let report = report_json(&out.report)?;
            save_text(dir, "report.json", &report)?;
            save_image(
                dir,
                "stack",
                &GrayImage::from_pattern(&out.stack),
                common.format,
            )?;
            save_image(
                dir,
                "query",
                &GrayImage::from_pattern(&out.query),
                common.format,
            )?;
            save_image(
                dir,
                "overlap",
                &GrayImage::from_overlap(&out.overlap),
                common.format,
            )?;
            print!("{report}");
            if out.report.alignment.is_empty() {
                return Err(Error::NoAlignment.into());
            }
        }
        Command::Circular {
            common,
            input,
            r0,
            dr0,
            size,
            rotation,
            supersample,
        } => {
            let (reference, query) = input.load()?;
            let scheme = common.scheme();
            let raster = RasterSpec {
                width: size,
                height: size,
                rotation,
                supersample: supersample.max(1),
            };
            let out = circular_align(&reference, &query, scheme, r0, dr0, &raster)?;
            let mut cfg = common.config("circular");
            cfg.window_length = Some(query.len());
            cfg.shift_count = Some(out.energies.len());
            cfg.circular = CircularParams {
                r0,
                dr0,
                raster_size: size,
                rotation,
                supersample: raster.supersample,
            };
            let dir = common.prepare_out(&cfg)?;
            let rings = detect_ring(&out.overlap, common.threshold);
            let energies: Vec<String> = out.energies.iter().map(|e| format!("{e:.4}")).collect();
            let mut csv = String::from("ring,energy\n");
            for (i, e) in energies.iter().enumerate() {
                csv.push_str(&format!("{i},{e}\n"));
            }
            let summary = serde_json::to_string_pretty(&json!({
                "index_base": 1,
                "scheme": scheme.to_string(),
                "best_ring": out.best_ring,
                "matched_row": out.best_ring + 1,
                "rings_above_threshold": rings,
            }))? + "\n";
            save_text(dir, "rings.csv", &csv)?;
            save_text(dir, "circular.json", &summary)?;
            save_image(
                dir,
                "circular_stack",
                &GrayImage::from_polar(&out.stack),
                common.format,
            )?;
            save_image(
                dir,
                "circular_query",
                &GrayImage::from_polar(&out.query),
                common.format,
            )?;
            save_image(
                dir,
                "circular_overlap",
                &GrayImage::from_overlap(&out.overlap.image),
                common.format,
            )?;
            print!("{summary}");
            if rings.is_empty() {
                return Err(Error::NoAlignment.into());
            }
        }
        Command::Project {
            common,
            input,
            max_event_gap,
        } => {
            let (reference, query) = input.load()?;
            let scheme = common.scheme();
            let params = TwoStageParams {
                align: common.align_params(),
                threshold: common.threshold,
                max_event_gap,
            };
            let mut cfg = common.config("project");
            cfg.window_length = Some(query.len());
            cfg.max_event_gap = max_event_gap;
            let out = two_stage_align(&reference, &query, scheme, &params)?;
            cfg.shift_count = Some(out.profile.rows);
            let dir = common.prepare_out(&cfg)?;
            let report = report_json(&out.report)?;
            save_text(dir, "profile.csv", &profile_csv(&out.profile))?;
            save_text(dir, "report.json", &report)?;
            print!("{report}");
            if out.report.alignment.is_empty() {
                return Err(Error::NoAlignment.into());
            }
        }
        Command::Snr {
            common,
            trials,
            reference_len,
            window_len,
        } => {
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            if window_len == 0 || window_len > reference_len {
                bail!(Exit(
                    1,
                    "--window-len must be in 1..=--reference-len".into()
                ));
            }
            let exp = SnrExperimentConfig {
                seed: common.seed,
                trials,
                reference_len,
                window_len,
            };
            let table = run_snr_experiment(&exp)?;
            let mut cfg = common.config("snr");
            cfg.trials = Some(trials);
            cfg.window_length = Some(window_len);
            cfg.shift_count = Some(exp.shifts());
            let dir = common.prepare_out(&cfg)?;
            let mut csv = String::from("scheme,mean_db,std_db,n_trials,n_infinite\n");
            for row in &table {
                csv.push_str(&format!(
                    "{},{:.4},{:.4},{},{}\n",
                    row.scheme.number(),
                    row.mean_db,
                    row.std_db,
                    row.n_trials,
                    row.n_infinite
                ));
            }
            save_text(dir, "snr.csv", &csv)?;
            print!("{csv}");
        }
        Command::Gain { pixels } => {
            let mut out = String::from("scheme,gain\n");
            for scheme in CodingScheme::ALL {
                let g = processing_gain(pixels, scheme).map_err(|e| usage(e.to_string()))?;
                out.push_str(&format!("{},{}\n", scheme.number(), g));
            }
            print!("{out}");
        }
    }
    Ok(())
}
