use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codec::CodingScheme;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    #[default]
    Pgm,
    Png,
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Pgm => "pgm",
            ImageFormat::Png => "png",
        }
    }
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for ImageFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "pgm" => Ok(ImageFormat::Pgm),
            "png" => Ok(ImageFormat::Png),
            _ => Err(format!("unknown image format {s:?} (expected pgm or png)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularParams {
    pub r0: f64,
    pub dr0: f64,
    pub raster_size: usize,
    pub rotation: f64,
    pub supersample: u32,
}

impl Default for CircularParams {
    fn default() -> Self {
        Self {
            r0: 64.0,
            dr0: 16.0,
            raster_size: 1024,
            rotation: 0.0,
            supersample: 1,
        }
    }
}

/// Resolved settings of one run, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub scheme: CodingScheme,
    pub window_length: Option<usize>,
    pub shift_count: Option<usize>,
    pub min_run: usize,
    pub threshold: f64,
    pub max_event_gap: usize,
    pub circular: CircularParams,
    pub seed: u64,
    pub trials: Option<usize>,
    pub output_dir: PathBuf,
    pub image_format: ImageFormat,
}

impl RunConfig {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            scheme: CodingScheme::TypeI,
            window_length: None,
            shift_count: None,
            min_run: 3,
            threshold: 0.25,
            max_event_gap: 4,
            circular: CircularParams::default(),
            seed: 42,
            trials: None,
            output_dir: PathBuf::from("out"),
            image_format: ImageFormat::Pgm,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        serde_json::from_str(&fs::read_to_string(path)?).map_err(Error::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        let mut cfg = RunConfig::new("align");
        cfg.scheme = CodingScheme::TypeIII;
        cfg.window_length = Some(20);
        cfg.image_format = ImageFormat::Png;
        cfg.write(&path).unwrap();
        assert_eq!(RunConfig::read(&path).unwrap(), cfg);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("PNG".parse::<ImageFormat>().unwrap(), ImageFormat::Png);
        assert!("jpg".parse::<ImageFormat>().is_err());
        assert_eq!(ImageFormat::Pgm.to_string(), "pgm");
    }
}
