use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skc::{execute, Cache, CliError, CliResult, Command, Format, JobManifest, Lookup, Params};

#[derive(Parser)]
#[command(name = "skc", version, about = "Saito-Kurokawa lifts, genus-2 Siegel spaces and L-value valuations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when absent. The resolved manifest is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cache directory; overrides SKC_CACHE.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Saito-Kurokawa lifts of every newform of weight 2k-2.
    Lift {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        prec: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the Maass relation on Siegel records.
    MaassCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        bound: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// The monomial basis of M_k and its decomposition.
    Basis {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        prec: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// T(2) images of Siegel records, with the eigenvalue when there is one.
    Hecke {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// T(2) eigenforms of the cusp space.
    Eigen {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        prec: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Lift/non-lift congruences at every prime ideal above l in (min-prime, scan-primes].
    Congruence {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        scan_primes: u64,
        #[arg(long)]
        min_prime: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        prec: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// A critical value L(s, f x chi) of a level-one newform of weight w.
    Lvalue {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        index: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Valuations of the script-L value at the primes in (min-prime, max-prime].
    #[command(name = "scriptL")]
    ScriptL {
        #[arg(long)]
        weight: u32,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long)]
        min_prime: Option<u64>,
        #[arg(long)]
        max_prime: Option<u64>,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        index: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Runs a job manifest.
    Run {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn manifest(command: Command, params: Params, input: Option<PathBuf>, common: &Common) -> JobManifest {
    let params = Params { format: common.format, ..params };
    JobManifest { command, params, input, output: common.out.clone(), cache: common.cache.clone() }
}

fn to_manifest(cmd: Cmd) -> CliResult<JobManifest> {
    let p = Params::default();
    Ok(match cmd {
        Cmd::Lift { weight, prec, common } => {
            manifest(Command::Lift, Params { weight: Some(weight), prec, ..p }, None, &common)
        }
        Cmd::MaassCheck { input, bound, common } => manifest(Command::MaassCheck, Params { bound, ..p }, Some(input), &common),
        Cmd::Basis { weight, prec, common } => manifest(Command::Basis, Params { weight: Some(weight), prec, ..p }, None, &common),
        Cmd::Hecke { input, common } => manifest(Command::Hecke, p, Some(input), &common),
        Cmd::Eigen { weight, prec, common } => manifest(Command::Eigen, Params { weight: Some(weight), prec, ..p }, None, &common),
        Cmd::Congruence { weight, scan_primes, min_prime, bound, prec, common } => manifest(
            Command::Congruence,
            Params { weight: Some(weight), max_prime: Some(scan_primes), min_prime, bound, prec, ..p },
            None,
            &common,
        ),
        Cmd::Lvalue { weight, s, chi, bits, index, common } => {
            manifest(Command::Lvalue, Params { weight: Some(weight), s: Some(s), chi, bits, index, ..p }, None, &common)
        }
        Cmd::ScriptL { weight, disc, chi, min_prime, max_prime, bits, index, common } => manifest(
            Command::ScriptL,
            Params { weight: Some(weight), disc: Some(disc), chi: Some(chi), min_prime, max_prime, bits, index, ..p },
            None,
            &common,
        ),
        Cmd::Run { manifest: path, common } => {
            let text = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
            let text = String::from_utf8(text).map_err(|_| CliError::Input("manifest is not UTF-8".into()))?;
            let mut m = JobManifest::parse(&text)?;
            m.output = common.out.or(m.output);
            m.cache = common.cache.or(m.cache);
            if common.format.is_some() {
                m.params.format = common.format;
            }
            m
        }
    })
}

fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let m = to_manifest(cli.command)?.resolved()?;
    let cache_dir = m.cache.clone().or_else(|| std::env::var_os("SKC_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from));
    let cache = cache_dir.map(Cache::new).transpose()?;
    let out = execute(&m, cache.as_ref())?;
    for (file, lookup) in &out.cache_log {
        let what = match lookup {
            Lookup::Hit => "hit",
            Lookup::Miss => "miss",
            Lookup::Poisoned => "poisoned, recomputed",
        };
        eprintln!("cache {what}: {file}");
    }
    match &m.output {
        Some(path) => {
            write_atomic(path, &out.text)?;
            let mut side = path.clone().into_os_string();
            side.push(".manifest.json");
            write_atomic(Path::new(&side), &m.to_json())?;
        }
        None => std::io::stdout().write_all(out.text.as_bytes()).map_err(|e| CliError::io("stdout", e))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
