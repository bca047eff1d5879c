use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dynsamp::hardy::VerdictOptions;
use dynsamp::io::{
    read_json, read_matrix, to_json_string, write_atomic, FactorizationFile, SchemeFile, SequenceSource, VectorFile,
};
use dynsamp::report::{self, Summary, ToleranceOverrides};
use dynsamp::PlacementMethod;

#[derive(Parser)]
#[command(
    name = "dynsamp",
    version,
    about = "Space-time sampling analysis for linear dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rank threshold relative to the largest singular value (default scales with the dimension).
    #[arg(long, global = true)]
    tol_rank: Option<f64>,

    /// Eigenvalue clustering tolerance.
    #[arg(long, global = true)]
    tol_cluster: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a sampling scheme determines every signal.
    Analyze {
        matrix: PathBuf,
        scheme: PathBuf,
        /// Use a supplied factorization `{"B": ..., "J": ...}`.
        #[arg(long)]
        factorization: Option<PathBuf>,
    },
    /// Least-squares recovery from a samples file.
    Reconstruct { matrix: PathBuf, samples: PathBuf },
    /// Generate (optionally noisy) samples of a signal.
    Sample {
        matrix: PathBuf,
        scheme: PathBuf,
        signal: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find a small set of sites that determines every signal.
    #[command(group(ArgGroup::new("method").args(["exhaustive", "greedy"])))]
    Place {
        matrix: PathBuf,
        #[arg(long)]
        factorization: Option<PathBuf>,
        /// Smallest set by exhaustive search (default).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        greedy: bool,
    },
    /// Smallest uniform budget that suffices for the given sites.
    MinimalL {
        matrix: PathBuf,
        /// Comma-separated 1-based sites.
        #[arg(long, value_delimiter = ',', required = true)]
        omega: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        l_max: usize,
        #[arg(long)]
        factorization: Option<PathBuf>,
    },
    /// Carleson products, Gramian spectra and frame verdicts per truncation.
    Carleson {
        sequence: PathBuf,
        /// Comma-separated ascending truncation levels.
        #[arg(long = "K", value_delimiter = ',')]
        k: Option<Vec<usize>>,
        /// Carleson infimum threshold.
        #[arg(long)]
        delta: Option<f64>,
        /// Directory for `products.csv` and `levels.csv`.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Extreme eigenvalues of truncated kernel Gramians.
    Gramian {
        sequence: PathBuf,
        #[arg(long = "K", value_delimiter = ',')]
        k: Option<Vec<usize>>,
    },
    /// Run the built-in fixtures.
    Demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("DYNSAMP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("DYNSAMP_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        bail!("DYNSAMP_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn factorization(path: &Option<PathBuf>) -> anyhow::Result<Option<FactorizationFile>> {
    Ok(path.as_deref().map(read_json).transpose()?)
}

fn emit<T: Serialize + Summary>(cli: &Cli, value: &T) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Json => to_json_string(value)?,
        Format::Text => value.summary(),
    };
    match &cli.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_csv(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
    write_atomic(&dir.join(name), contents.as_bytes())?;
    Ok(())
}

fn verdict(ok: bool) -> u8 {
    if ok {
        0
    } else {
        2
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    configure_threads()?;
    let tol = ToleranceOverrides {
        rank: cli.tol_rank,
        cluster: cli.tol_cluster,
    };
    match &cli.command {
        Command::Analyze {
            matrix,
            scheme,
            factorization: f,
        } => {
            let a = read_matrix(matrix)?;
            let scheme = read_json::<SchemeFile>(scheme)?.into_scheme()?;
            let r = report::run_analyze(&a, &scheme, factorization(f)?, &tol)?;
            emit(cli, &r)?;
            Ok(verdict(r.feasibility.feasible))
        }
        Command::Reconstruct { matrix, samples } => {
            let a = read_matrix(matrix)?;
            let r = report::run_reconstruct(&a, read_json(samples)?, &tol)?;
            emit(cli, &r)?;
            Ok(verdict(!r.underdetermined))
        }
        Command::Sample {
            matrix,
            scheme,
            signal,
            sigma,
            seed,
        } => {
            let a = read_matrix(matrix)?;
            let scheme = read_json::<SchemeFile>(scheme)?.into_scheme()?;
            let f = read_json::<VectorFile>(signal)?.into_values();
            emit(cli, &report::run_sample(&a, &scheme, &f, *sigma, *seed)?)?;
            Ok(0)
        }
        Command::Place {
            matrix,
            factorization: f,
            greedy,
            ..
        } => {
            let a = read_matrix(matrix)?;
            let method = if *greedy {
                PlacementMethod::Greedy
            } else {
                PlacementMethod::Exhaustive
            };
            let r = report::run_place(&a, factorization(f)?, method, &tol)?;
            emit(cli, &r)?;
            Ok(verdict(r.found))
        }
        Command::MinimalL {
            matrix,
            omega,
            l_max,
            factorization: f,
        } => {
            let a = read_matrix(matrix)?;
            if omega.contains(&0) {
                bail!("site indices are 1-based");
            }
            let omega: Vec<usize> = omega.iter().map(|i| i - 1).collect();
            let r = report::run_minimal_l(&a, &omega, *l_max, factorization(f)?, &tol)?;
            emit(cli, &r)?;
            Ok(verdict(r.minimal_l.is_some()))
        }
        Command::Carleson {
            sequence,
            k,
            delta,
            csv_dir,
        } => {
            let input = report::resolve_sequence(read_json::<SequenceSource>(sequence)?, k.clone())?;
            let mut opts = VerdictOptions::default();
            if let Some(d) = delta {
                opts.delta_tol = *d;
            }
            let r = report::run_carleson(&input, &opts)?;
            if let Some(dir) = csv_dir {
                write_csv(dir, "products.csv", &r.products_csv())?;
                write_csv(dir, "levels.csv", &r.levels_csv())?;
            }
            emit(cli, &r)?;
            Ok(verdict(r.overall))
        }
        Command::Gramian { sequence, k } => {
            let input = report::resolve_sequence(read_json::<SequenceSource>(sequence)?, k.clone())?;
            emit(cli, &report::run_gramian(&input)?)?;
            Ok(0)
        }
        Command::Demo { seed } => {
            emit(cli, &report::run_demo(&tol, *seed)?)?;
            Ok(0)
        }
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
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
