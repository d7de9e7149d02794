use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kakeya_cli::commands::{lemma2, lemma4, martingale_check, render, seq, success_trend, theorem1};
use kakeya_cli::{CliError, Format, Report, RunConfig};
use kakeya_core::Caps;

/// Exact-arithmetic experiments on a Kakeya-type line set and its martingales.
///
/// Exit codes: 0 all asserted checks pass, 1 an asserted check failed,
/// 2 work refused by a cap, 3 usage or precondition error.
#[derive(Parser, Debug)]
#[command(name = "kakeya-lab", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Deepest dyadic level for traces and exhaustive checks.
    #[arg(long, global = true)]
    r_max: Option<u32>,
    /// Directory for reports, tables and figures.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output formats written under --out.
    #[arg(long, global = true, value_enum, value_delimiter = ',', default_value = "json,csv,svg")]
    format: Vec<Format>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Lift the desk-scale presets and the line family clamp.
    #[arg(long, global = true)]
    big: bool,
    /// Build precursors whose line family index exceeds this at this index.
    #[arg(long, global = true, default_value_t = 8)]
    k_cap: u64,
    /// Omit wall-clock timings so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Largest line family per precursor.
    #[arg(long, global = true, default_value_t = Caps::default().max_lines)]
    max_lines: u64,
    /// Largest total vertex count per area computation.
    #[arg(long, global = true, default_value_t = Caps::default().max_vertices)]
    max_vertices: usize,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the first sequence blocks and check the block-index bound.
    Seq {
        #[arg(long, default_value_t = 10)]
        m_hi: u32,
    },
    /// Exact precursor areas, bounds and containment sampling.
    Lemma2 {
        #[arg(long, conflicts_with = "grid")]
        m: Option<u32>,
        #[arg(long, conflicts_with = "grid", allow_hyphen_values = true)]
        xhat: Option<String>,
        /// Use this line family index instead of the one coupled to xhat.
        #[arg(long, conflicts_with = "grid")]
        k_override: Option<u64>,
        /// Run the preset grid and the decoupled trend grid.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = 6)]
        slope_bits: u32,
        #[arg(long, default_value_t = 16)]
        x_samples: u32,
    },
    /// Open set martingale trace settling at 1/lambda(E) or 0.
    Theorem1 {
        /// rect:x0,y0,x1,y1 or piece:m,xhat,j
        #[arg(long, default_value = theorem1::DEFAULT_REGION, allow_hyphen_values = true)]
        region: String,
        #[arg(long, default_value = theorem1::DEFAULT_POINT, allow_hyphen_values = true)]
        point: String,
    },
    /// Averaged martingale threshold 2^(m-2) along a point of F.
    Lemma4 {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "0")]
        slope: String,
        #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        i: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
    },
    /// Truncated master sums along a point of F for several truncation levels.
    SuccessTrend {
        #[arg(long, default_value = "0")]
        slope: String,
        #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        m_max: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        t: u32,
    },
    /// Exhaustive averaging identity and growth bound.
    MartingaleCheck {
        /// open:x0,y0,x1,y1, averaged:m,i,j or master:m_max; repeatable.
        #[arg(long = "spec", allow_hyphen_values = true)]
        specs: Vec<String>,
    },
    /// Write figure1, figure2 or a precursor region as SVG.
    Render {
        #[arg(value_enum)]
        target: render::Target,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        xhat: Option<String>,
        #[arg(long)]
        k_override: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
    },
}

impl GlobalArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            caps: Caps { max_lines: self.max_lines, max_vertices: self.max_vertices, ..Caps::default() },
            r_max: self.r_max,
            out_dir: self.out.clone(),
            formats: self.format.clone(),
            jobs: self.jobs,
            k_cap: Some(self.k_cap),
            big: self.big,
            timings: !self.no_timings,
        }
    }
}

fn dispatch(command: Command, cfg: &mut RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Seq { m_hi } => seq::run(m_hi, cfg),
        Command::Lemma2 { m, xhat, k_override, grid, slope_bits, x_samples } => {
            lemma2::run(&lemma2::Lemma2Args { m, xhat, k_override, grid, slope_bits, x_samples }, cfg)
        }
        Command::Theorem1 { region, point } => theorem1::run(&region, &point, cfg),
        Command::Lemma4 { m, slope, x, i, j } => lemma4::run(&lemma4::Lemma4Args { m, slope, x, i, j }, cfg),
        Command::SuccessTrend { slope, x, m_max, t } => {
            success_trend::run(&success_trend::TrendArgs { slope, x, m_max, t }, cfg)
        }
        Command::MartingaleCheck { specs } => martingale_check::run(&specs, cfg),
        Command::Render { target, m, xhat, k_override, j } => {
            if cfg.out_dir.is_none() {
                cfg.out_dir = Some(PathBuf::from("."));
            }
            render::run(&render::RenderArgs { target, m, xhat, k_override, j }, cfg)
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut cfg = cli.global.config();
    cfg.validate()?;
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let report = dispatch(cli.command, &mut cfg)?;
    let text = if cli.global.json { report.to_json()? } else { report.to_text() };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if let Some(dir) = &cfg.out_dir {
        for path in report.write_to(dir, &cfg)? {
            if !cli.global.json {
                writeln!(out, "wrote {path}")?;
            }
        }
    }
    Ok(report.outcome().exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
