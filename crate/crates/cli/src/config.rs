use std::path::PathBuf;

use kakeya_core::Caps;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub caps: Caps,
    /// Deepest trace level; each command has its own default.
    pub r_max: Option<u32>,
    /// Where reports and figures are written. Nothing is written when unset,
    /// except by `render`, which falls back to the working directory.
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
    /// Worker threads; `None` leaves the choice to rayon.
    pub jobs: Option<usize>,
    /// Precursors whose coupled line family index exceeds this are built at
    /// this index instead. `None` keeps every precursor coupled.
    pub k_cap: Option<u64>,
    /// Lift the desk-scale presets.
    pub big: bool,
    /// Record wall-clock timings. Off makes output byte-identical across runs.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            caps: Caps::default(),
            r_max: None,
            out_dir: None,
            formats: vec![Format::Json, Format::Csv, Format::Svg],
            jobs: None,
            k_cap: Some(8),
            big: false,
            timings: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let caps = &self.caps;
        if caps.max_block_len == 0 || caps.max_lines == 0 || caps.max_vertices == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        if self.formats.is_empty() {
            return Err(CliError::Usage("at least one output format is required".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn r_max_or(&self, default: u32) -> u32 {
        self.r_max.unwrap_or(default)
    }

    /// The clamp applied to precursor line families, lifted by `--big`.
    pub fn effective_k_cap(&self) -> Option<u64> {
        if self.big {
            None
        } else {
            self.k_cap
        }
    }
}
