//! Job configuration from flags and an optional TOML file; flags win.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use cocycles::exec::Execution;
use cocycles::solver::{Mode, Target};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyDiv,
    SolveCocycles,
    VerifyMsz,
    N1Cocycles,
    EsTrace,
    EsUniqueness,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Parser, Debug, Default)]
#[command(name = "cocycles", version, about = "Verify and solve for degree-zero 1-cocycles on derivation Lie algebras")]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Number of generators (for the symplectic commands: half the number).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub target: Option<Target>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random pairs for property checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Disable data parallelism.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub command: Option<Command>,
    pub n: Option<usize>,
    pub mode: Option<Mode>,
    pub target: Option<Target>,
    #[serde(alias = "max_degree")]
    pub max_degree: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub sequential: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JobConfig {
    pub command: Command,
    pub n: usize,
    pub mode: Mode,
    pub target: Target,
    pub max_degree: usize,
    pub seed: u64,
    pub samples: usize,
    pub execution: Execution,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl FileConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(format!("{origin}: {e}")))
    }
}

struct Defaults {
    n: usize,
    max_degree: usize,
    samples: usize,
}

fn defaults(command: Command) -> Defaults {
    let (n, max_degree, samples) = match command {
        Command::VerifyDiv => (3, 4, 200),
        Command::SolveCocycles => (3, 3, 100),
        Command::VerifyMsz => (2, 2, 0),
        Command::N1Cocycles => (1, 6, 100),
        Command::EsTrace => (2, 1, 50),
        Command::EsUniqueness => (2, 4, 50),
    };
    Defaults { n, max_degree, samples }
}

pub fn resolve(cli: Cli) -> Result<JobConfig, ConfigError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
            FileConfig::parse(&text, &path.display().to_string())?
        }
        None => FileConfig::default(),
    };
    let command = cli
        .command
        .or(file.command)
        .ok_or_else(|| ConfigError("missing command (use --command or `command = ...` in the config file)".into()))?;
    let d = defaults(command);
    let mut job = JobConfig {
        command,
        n: cli.n.or(file.n).unwrap_or(d.n),
        mode: cli.mode.or(file.mode).unwrap_or(Mode::Equivariant),
        target: cli.target.or(file.target).unwrap_or(Target::Bicyclic),
        max_degree: cli.max_degree.or(file.max_degree).unwrap_or(d.max_degree),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        samples: cli.samples.or(file.samples).unwrap_or(d.samples),
        execution: if cli.sequential || file.sequential == Some(true) {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        out: cli.out.or(file.out),
        format: cli.format.or(file.format).unwrap_or_default(),
    };
    if command == Command::N1Cocycles {
        job.mode = Mode::Full;
        job.target = Target::Bicyclic;
    }
    validate(&job)?;
    Ok(job)
}

fn validate(job: &JobConfig) -> Result<(), ConfigError> {
    let fail = |msg: String| Err(ConfigError(msg));
    if job.n == 0 {
        return fail("n must be at least 1".into());
    }
    match job.command {
        Command::N1Cocycles if job.n != 1 => fail(format!("n1-cocycles runs with n = 1, got n = {}", job.n)),
        Command::EsTrace | Command::EsUniqueness if job.n < 2 => {
            fail(format!("{:?} needs n >= 2, got n = {}", job.command, job.n))
        }
        Command::EsUniqueness if job.max_degree == 0 => fail("es-uniqueness needs max_degree >= 1".into()),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("cocycles-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("job.toml");
        std::fs::write(&path, "command = \"solve-cocycles\"\nn = 2\nmax-degree = 2\nseed = 4\n").unwrap();
        let cli = Cli {
            n: Some(3),
            config: Some(path),
            ..Cli::default()
        };
        let job = resolve(cli).unwrap();
        assert_eq!(job.command, Command::SolveCocycles);
        assert_eq!((job.n, job.max_degree, job.seed), (3, 2, 4));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn file_errors_carry_position() {
        let err = FileConfig::parse("n = 3\nmax-degree = \"x\"\n", "job.toml").unwrap_err();
        assert!(err.0.contains("line 2"), "{}", err.0);
        let err = FileConfig::parse("colour = 1\n", "job.toml").unwrap_err();
        assert!(err.0.contains("colour"), "{}", err.0);
    }

    #[test]
    fn validation() {
        let cli = Cli {
            command: Some(Command::N1Cocycles),
            n: Some(2),
            ..Cli::default()
        };
        assert!(resolve(cli).is_err());
        assert!(resolve(Cli::default()).is_err());
    }
}
