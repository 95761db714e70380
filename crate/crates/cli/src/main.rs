use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use gbnystrom_cli::config::{parse_config, parse_list};
use gbnystrom_cli::{
    emit_figure, emit_outputs, write_report, Harness, OutputFormat, Overrides, ReferenceCache,
    ReferencePolicy, Registry, CACHE_DIR_ENV,
};

#[derive(Parser, Debug)]
#[command(
    name = "gbnystrom",
    version,
    about = "Error tables and figures for the GB Nyström solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// `key = value` file with defaults for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Comma-separated degrees m.
    #[arg(long, global = true)]
    m_list: Option<String>,

    /// ℓ, or a comma-separated ℓ list for `ell-sweep` and `figure`.
    #[arg(long, global = true)]
    ell: Option<String>,

    /// Comma-separated evaluation points in [0, 1].
    #[arg(long, global = true)]
    s_list: Option<String>,

    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true, value_enum)]
    reference: Option<Reference>,

    /// Add EOC columns.
    #[arg(long, global = true)]
    eoc: bool,

    /// Directory for cached reference runs.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Errors (and cond∞) by m at fixed ℓ.
    Table { id: String },
    /// Errors by ℓ at fixed m.
    EllSweep { id: String },
    /// Discrete-operator errors by m.
    Quadrature { id: String },
    /// Figure data plus a plotting script.
    Figure { id: String },
    /// Registered problems.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reference {
    ClosedForm,
    Auto,
    #[value(name = "reference-run")]
    Run,
}

struct Settings {
    m_list: Option<Vec<usize>>,
    ell: Option<Vec<usize>>,
    s_list: Option<Vec<f64>>,
    out_dir: PathBuf,
    format: OutputFormat,
    reference: ReferencePolicy,
    eoc: bool,
}

fn settings(cli: &Cli) -> anyhow::Result<Settings> {
    let file = match &cli.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    const KNOWN: [&str; 7] = ["m-list", "ell", "s-list", "out-dir", "format", "reference", "eoc"];
    if let Some(k) = file.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        bail!("unknown config key `{k}` (known: {})", KNOWN.join(", "));
    }
    let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());

    let format = match cli.format {
        Some(f) => f,
        None => match file.get("format") {
            Some(v) => Format::from_str(v, true).map_err(anyhow::Error::msg)?,
            None => Format::Csv,
        },
    };
    let reference = match cli.reference {
        Some(r) => r,
        None => match file.get("reference") {
            Some(v) => Reference::from_str(v, true).map_err(anyhow::Error::msg)?,
            None => Reference::Auto,
        },
    };
    let eoc = cli.eoc || file.get("eoc").is_some_and(|v| v == "true");
    Ok(Settings {
        m_list: pick(&cli.m_list, "m-list")
            .map(|v| parse_list("m-list", &v))
            .transpose()?,
        ell: pick(&cli.ell, "ell").map(|v| parse_list("ell", &v)).transpose()?,
        s_list: pick(&cli.s_list, "s-list")
            .map(|v| parse_list("s-list", &v))
            .transpose()?,
        out_dir: cli
            .out_dir
            .clone()
            .or_else(|| file.get("out-dir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("gbnystrom-out")),
        format: match format {
            Format::Csv => OutputFormat::Csv,
            Format::Tsv => OutputFormat::Tsv,
        },
        reference: match reference {
            Reference::ClosedForm => ReferencePolicy::ClosedForm,
            Reference::Auto => ReferencePolicy::Auto,
            Reference::Run => ReferencePolicy::ReferenceRun,
        },
        eoc,
    })
}

fn single(what: &str, list: &Option<Vec<usize>>) -> anyhow::Result<Option<usize>> {
    match list.as_deref() {
        None => Ok(None),
        Some([v]) => Ok(Some(*v)),
        Some(_) => bail!("{what} takes a single value here"),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let set = settings(&cli)?;
    let cache = match &cli.cache_dir {
        Some(dir) => ReferenceCache::new(dir),
        None => ReferenceCache::from_env(),
    };
    let harness = Harness::new(Registry::builtin(), cache);
    let mut ov = Overrides {
        s_list: set.s_list.clone(),
        reference: set.reference,
        eoc: set.eoc.then_some(true),
        ..Overrides::default()
    };

    let report = match &cli.command {
        Command::List => {
            for e in harness.registry().entries() {
                println!(
                    "{:<6} [{}] {}\n       mirrors: {}",
                    e.id,
                    e.reference_mode(),
                    e.description,
                    e.mirrors
                );
            }
            return Ok(());
        }
        Command::Figure { id } => {
            ov.m_list = set.m_list.clone();
            ov.sweep_m = single("--m-list", &set.m_list).unwrap_or(None);
            ov.ell_list = set.ell.clone();
            ov.ell = single("--ell", &set.ell).unwrap_or(None);
            let fig = harness.figure(id, &ov)?;
            for path in emit_figure(&fig, &set.out_dir, set.format)? {
                eprintln!("wrote {}", path.display());
            }
            return Ok(());
        }
        Command::Table { id } => {
            ov.m_list = set.m_list.clone();
            ov.ell = single("--ell", &set.ell)?;
            harness.run_table(id, &ov)?
        }
        Command::Quadrature { id } => {
            ov.m_list = set.m_list.clone();
            ov.ell = single("--ell", &set.ell)?;
            harness.quadrature_error_sweep(id, &ov)?
        }
        Command::EllSweep { id } => {
            ov.sweep_m = single("--m-list", &set.m_list)?;
            ov.ell_list = set.ell.clone();
            harness.run_ell_sweep(id, &ov)?
        }
    };
    write_report(&report, std::io::stdout().lock(), set.format)?;
    for path in emit_outputs(&report, &set.out_dir, set.format)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
