//! Argument parsing and dispatch for `gcx`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cache::{BasisCache, BasisStore};
use crate::checks::{self, Scan};
use crate::conventions::SignFixture;
use crate::error::CheckError;
use crate::flavor::{ComplexSpec, Flavor};
use crate::homology::Engine;
use crate::matrix::{Field, DEFAULT_PRIME};
use crate::report::{report_emit, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "gcx", version, about = "Exact computations in graph complexes and graph operads")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand, Clone, PartialEq, Eq)]
pub enum Command {
    /// Count basis graphs per (V, E, L) bucket.
    Basis,
    /// Shapes and ranks of the differential matrices.
    Diff,
    /// Cohomology dimensions per (betti, degree) cell.
    Cohomology,
    /// Check that the differential squares to zero.
    VerifyD2,
    /// Compare the oriented complex for n with the connected complex for n-1.
    VerifyTheorem1,
    /// Check the hairy map is a chain map and the corolla cochain is closed.
    VerifyProp32,
    /// Which wheels give cohomology classes.
    Wheels,
    /// Solve and check the four-vertex cocycle.
    Shoikhet,
    /// Build the Maurer-Cartan element and the obstruction table.
    Mc,
    /// Differential, composition and generator checks in an operad.
    OperadCheck,
    /// Inspect, clear or re-verify the basis cache.
    Cache {
        #[arg(value_parser = ["stat", "purge", "verify"])]
        action: String,
    },
    /// Print the solved sign conventions as JSON.
    Conventions,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Options {
    /// Complex or operad: fGC, fcGC, GC, dfGC, fGCor, fcGCor, GCor, hGCor, Graphs, Graphsor.
    #[arg(long, global = true)]
    pub flavor: Option<Flavor>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Largest vertex count (internal vertices for operads; target for `mc`).
    #[arg(long, global = true)]
    pub max_v: Option<usize>,
    #[arg(long, global = true)]
    pub max_e: Option<usize>,
    #[arg(long, global = true)]
    pub max_legs: Option<usize>,
    /// Largest number of external vertices (operads).
    #[arg(long, global = true)]
    pub max_ext: Option<usize>,
    #[arg(long, global = true)]
    pub max_b: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub degree: Option<i64>,
    #[arg(long, global = true)]
    pub betti: Option<i64>,
    /// `Q`, a prime above 10^4, or a comma-separated list of them.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Cache root; defaults to $GC_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// `tsv` or `json`.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub flavor: Flavor,
    /// `None` where a command covers several values by default.
    pub n: Option<i64>,
    pub scan: Scan,
    pub fields: Vec<Field>,
    pub betti: Option<i64>,
    pub degree: Option<i64>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

fn config_err(msg: impl Into<String>) -> CheckError {
    CheckError::Config(msg.into())
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig, CheckError> {
        let o = &cli.opts;
        let command = cli.command.clone();
        for (name, value) in [
            ("--max-v", o.max_v),
            ("--max-e", o.max_e),
            ("--max-legs", o.max_legs),
            ("--max-ext", o.max_ext),
            ("--max-b", o.max_b),
        ] {
            if value == Some(0) {
                return Err(config_err(format!("{name} must be positive")));
            }
        }
        let operad = command == Command::OperadCheck;
        let flavor = o.flavor.unwrap_or(if operad { Flavor::GraphsOr } else { Flavor::GCor });
        if operad != flavor.is_operad() && matches!(command, Command::OperadCheck) {
            return Err(config_err(format!("operad-check needs an operad flavor, not {flavor}")));
        }
        let n = match (&command, o.n) {
            (_, Some(n)) => Some(n),
            (Command::VerifyTheorem1 | Command::VerifyProp32, None) => None,
            (Command::OperadCheck, None) => Some(3),
            _ => Some(2),
        };
        if let Some(n) = n {
            if !(1..=64).contains(&n) {
                return Err(config_err(format!("--n must be between 1 and 64, got {n}")));
            }
        }
        let default = Scan::default();
        let max_v = o.max_v.unwrap_or(match command {
            Command::VerifyTheorem1 | Command::Mc => 7,
            Command::OperadCheck => 3,
            _ => default.max_v,
        });
        if command == Command::Mc && max_v < 7 {
            return Err(config_err("mc needs --max-v of at least 7"));
        }
        let max_b = o.max_b.unwrap_or(default.max_b);
        let max_e = o.max_e.unwrap_or(if operad { 6 } else { max_v + max_b });
        let scan = Scan {
            max_ext: o.max_ext.unwrap_or(default.max_ext),
            max_v,
            max_e,
            max_legs: o.max_legs.unwrap_or(default.max_legs),
            max_b,
        };
        let fields = match &o.field {
            None => Vec::new(),
            Some(list) => {
                list.split(',').map(|f| f.trim().parse::<Field>().map_err(config_err)).collect::<Result<Vec<_>, _>>()?
            }
        };
        Ok(RunConfig {
            command,
            flavor,
            n,
            scan,
            fields,
            betti: o.betti,
            degree: o.degree,
            cache_dir: o.cache_dir.clone(),
            format: o.format.unwrap_or_default(),
            jobs: o.jobs.unwrap_or(0),
            out: o.out.clone(),
        })
    }

    fn spec(&self) -> ComplexSpec {
        ComplexSpec::new(self.flavor, self.n.unwrap_or(2))
    }

    fn cache(&self) -> Result<Option<BasisCache>, CheckError> {
        Ok(match &self.cache_dir {
            Some(dir) => Some(BasisCache::new(dir)?),
            None => BasisCache::from_env()?,
        })
    }

    pub fn engine(&self) -> Result<Engine, CheckError> {
        Ok(Engine::new(BasisStore::new(self.scan.bounds(), self.cache()?)))
    }
}

/// What a command produced.
#[derive(Debug)]
pub enum Output {
    Report(Report),
    Text(String),
}

impl Output {
    pub fn ok(&self) -> bool {
        match self {
            Output::Report(r) => r.ok(),
            Output::Text(_) => true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Report(r) => r.render(format),
            Output::Text(t) => t.clone(),
        }
    }
}

fn merge(reports: Vec<Report>) -> Report {
    let mut it = reports.into_iter();
    let mut first = it.next().expect("at least one report");
    for r in it {
        first.absorb(r);
    }
    first
}

/// Execute a validated configuration.
pub fn run(config: &RunConfig) -> Result<Output, CheckError> {
    let scan = &config.scan;
    let jobs = config.jobs;
    let spec = config.spec();
    let report = match &config.command {
        Command::Basis => checks::basis_report(&config.engine()?, &spec, scan, jobs)?,
        Command::Diff => {
            let field = config.fields.first().copied().unwrap_or(Field::Prime(DEFAULT_PRIME));
            checks::diff_report(&config.engine()?, &spec, scan, field, jobs)?
        }
        Command::Cohomology => checks::cohomology_report(
            &config.engine()?,
            &spec,
            scan,
            &config.fields,
            config.betti,
            config.degree,
            jobs,
        )?,
        Command::VerifyD2 => checks::verify_d2_report(&config.engine()?, &spec, scan, jobs)?,
        Command::VerifyTheorem1 => {
            let engine = config.engine()?;
            let ns = config.n.map_or(vec![2, 3], |n| vec![n]);
            merge(ns.iter().map(|&n| checks::comparison_report(&engine, n, scan, jobs)).collect::<Result<_, _>>()?)
        }
        Command::VerifyProp32 => {
            let ns = config.n.map_or(vec![2, 3], |n| vec![n]);
            checks::hairy_report(&ns, scan, scan.max_legs.max(8), jobs)?
        }
        Command::Wheels => checks::wheels_report(&config.engine()?)?,
        Command::Shoikhet => checks::shoikhet_report(&config.engine()?)?,
        Command::Mc => checks::mc_report(&config.engine()?, scan.max_v, scan.max_b as i64)?,
        Command::OperadCheck => checks::operad_report(&spec, scan, jobs)?,
        Command::Cache { action } => {
            let cache = config
                .cache()?
                .ok_or_else(|| config_err("no cache directory: pass --cache-dir or set GC_CACHE_DIR"))?;
            checks::cache_report(&cache, action)?
        }
        Command::Conventions => return Ok(Output::Text(SignFixture::solved()?.to_json())),
    };
    Ok(Output::Report(report))
}

/// Parse `args`, run, write the output; returns the process exit code
/// (0 success, 1 failed verification, 2 configuration or runtime error).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("gcx: {e}");
            return 2;
        }
    };
    let output = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("gcx: {e}");
            return 2;
        }
    };
    let written = match &output {
        Output::Report(r) => report_emit(r, config.format, config.out.as_deref()).map_err(|e| e.to_string()),
        Output::Text(text) => match &config.out {
            Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        },
    };
    if let Err(e) = written {
        eprintln!("gcx: {e}");
        return 2;
    }
    if let Output::Report(r) = &output {
        for f in r.failures() {
            eprintln!("FAILED {f}");
        }
    }
    if output.ok() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<RunConfig, CheckError> {
        let cli = Cli::try_parse_from(std::iter::once("gcx").chain(args.iter().copied()))
            .map_err(|e| config_err(e.to_string()))?;
        RunConfig::from_cli(&cli)
    }

    #[test]
    fn parses_and_validates() {
        let c = config(&["verify-d2", "--flavor", "GCor", "--n", "2", "--max-v", "6"]).unwrap();
        assert_eq!((c.flavor, c.n, c.scan.max_v), (Flavor::GCor, Some(2), 6));
        assert!(config(&["verify-d2", "--max-v", "0"]).is_err());
        assert!(config(&["cohomology", "--field", "7"]).is_err());
        assert!(config(&["cohomology", "--bogus"]).is_err());
        let c = config(&["cohomology", "--field", "32003,q"]).unwrap();
        assert_eq!(c.fields, vec![Field::Prime(32003), Field::Rational]);
        assert!(config(&["operad-check", "--flavor", "GC"]).is_err());
        assert_eq!(config(&["verify-theorem1"]).unwrap().n, None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["gcx", "basis", "--nope"]), 2);
        assert_eq!(main_with_args(["gcx", "basis", "--max-e", "0"]), 2);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("b.tsv");
        let out = out.to_str().unwrap();
        assert_eq!(main_with_args(["gcx", "basis", "--flavor", "GC", "--max-v", "4", "--out", out]), 0);
        assert_eq!(
            main_with_args(["gcx", "cache", "stat", "--cache-dir", dir.path().to_str().unwrap(), "--out", out]),
            0
        );
    }
}
