//! `fogsim` command-line front end.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod table;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;
pub use error::CliError;
use table::{Record, Table};

#[derive(Debug, Parser)]
#[command(
    name = "fogsim",
    version,
    about = "Fiber-optic gyroscope sensitivity simulator"
)]
pub struct Cli {
    /// Config file of `key = value` lines, applied before flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sensitivity-ratio table, closed form against the numeric optimizers.
    Table1(Flags),
    /// Data behind one figure.
    Figure {
        /// 3a, 3b, 5, 6 or 7.
        #[arg(long)]
        id: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Estimator variance at one operating point.
    Variance(Flags),
    /// Optimal length, optimal M at fixed length (--fix-length), or optimal
    /// energy split (--energy).
    Optimize(Flags),
    /// Sensitivity ratios against the classical baseline.
    Ratio(Flags),
    /// Run the Gaussian circuit and compare with the closed forms.
    Simulate(Flags),
    /// List configuration keys with their defaults.
    Keys,
}

#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long = "n-v")]
    pub n_v: Option<String>,
    #[arg(long = "squeeze-db")]
    pub squeeze_db: Option<String>,
    #[arg(long = "n-s")]
    pub n_s: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    /// Total fiber length (km).
    #[arg(long = "length")]
    pub length_km: Option<String>,
    /// Fiber loss (dB/km).
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long = "fix-length")]
    pub fix_length: Option<String>,
    #[arg(long)]
    pub energy: Option<String>,
    #[arg(long = "m-max")]
    pub m_max: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long = "wavelength-nm")]
    pub wavelength_nm: Option<String>,
    /// Coil radius (m).
    #[arg(long = "radius")]
    pub radius_m: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub output: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
    /// Any configuration key, e.g. `--set fig6_m_max=24`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Flags {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        let named = [
            ("design", &self.design),
            ("m", &self.m),
            ("n_v", &self.n_v),
            ("squeeze_db", &self.squeeze_db),
            ("n_s", &self.n_s),
            ("eta", &self.eta),
            ("t", &self.t),
            ("length_km", &self.length_km),
            ("b", &self.b),
            ("phi", &self.phi),
            ("fix_length", &self.fix_length),
            ("energy", &self.energy),
            ("m_max", &self.m_max),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("wavelength_nm", &self.wavelength_nm),
            ("radius_m", &self.radius_m),
            ("output", &self.output),
            ("out", &self.out),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for pair in &self.set {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{pair}'")))?;
            cfg.set(k, v)?;
        }
        Ok(())
    }
}

enum Output {
    Table(Table),
    Record(Record),
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

fn format(cfg: &RunConfig, default: Format) -> Result<Format, CliError> {
    match cfg.raw("output").to_ascii_lowercase().as_str() {
        "" => Ok(default),
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Config(format!(
            "output: expected csv or json, got '{other}'"
        ))),
    }
}

fn render(out: &Output, cfg: &RunConfig) -> Result<String, CliError> {
    let (fmt, json) = match out {
        Output::Table(t) => (format(cfg, Format::Csv)?, t.to_json()),
        Output::Record(r) => (format(cfg, Format::Json)?, r.to_json()),
    };
    if fmt == Format::Json {
        let mut s = serde_json::to_string_pretty(&json).expect("JSON values always serialize");
        s.push('\n');
        return Ok(s);
    }
    Ok(match out {
        Output::Table(t) => t.to_csv(&cfg.summary()),
        Output::Record(r) => r.to_table().to_csv(&cfg.summary()),
    })
}

fn keys_table() -> Table {
    let mut t = Table::new(&["key", "default", "description"]);
    for (k, d, desc) in config::KEYS {
        t.push(vec![
            (*k).into(),
            (*d).into(),
            desc.replace(',', ";").into(),
        ]);
    }
    t
}

/// Resolves the configuration, runs the command and writes the result to
/// `out`, or to the configured `out` file.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        cfg.apply_text(&text)?;
    }
    let flags = match &cli.command {
        Command::Table1(f)
        | Command::Variance(f)
        | Command::Optimize(f)
        | Command::Ratio(f)
        | Command::Simulate(f)
        | Command::Figure { flags: f, .. } => f.clone(),
        Command::Keys => Flags::default(),
    };
    flags.apply(&mut cfg)?;
    log::info!("config: {}", cfg.summary());

    let result = match &cli.command {
        Command::Table1(_) => Output::Table(commands::table1(&cfg)?),
        Command::Figure { id, .. } => Output::Table(figures::figure(id.trim(), &cfg)?),
        Command::Variance(_) => Output::Record(commands::variance(&cfg)?),
        Command::Optimize(_) => Output::Record(commands::optimize(&cfg)?),
        Command::Ratio(_) => Output::Record(commands::ratio(&cfg)?),
        Command::Simulate(_) => Output::Record(commands::simulate(&cfg)?),
        Command::Keys => Output::Table(keys_table()),
    };
    let text = render(&result, &cfg)?;
    if cfg.is_set("out") {
        fs::write(cfg.raw("out"), text)?;
    } else {
        out.write_all(text.as_bytes())?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs. Help and version
/// requests print to `out` and succeed.
pub fn run_args<I, S>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out),
        Err(e) if !e.use_stderr() => {
            write!(out, "{}", e.render())?;
            Ok(())
        }
        Err(e) => Err(CliError::Usage(
            e.render().to_string().trim_end().to_string(),
        )),
    }
}
