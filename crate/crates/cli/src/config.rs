use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_ALPHA: f64 = 0.75;
pub const DEFAULT_NX: usize = 100;
pub const DEFAULT_HORIZON: f64 = 1.0;
/// Horizon used by `timeerr` when none is given; the blow-up lives near `t = 0`.
pub const DEFAULT_TIMEERR_HORIZON: f64 = 1e-2;
pub const DEFAULT_GAMMA: f64 = 0.1;
pub const DEFAULT_REF_REFINE: usize = 4;
pub const DEFAULT_FIT_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// March one problem and write the final frame.
    Solve,
    /// Three-mesh spatial order study.
    Order,
    /// Error-versus-time study with power-law fit.
    Timeerr,
    /// Run the oracle suites.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Order => "order",
            Command::Timeerr => "timeerr",
            Command::Selftest => "selftest",
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub problem: Option<String>,
    pub alpha: f64,
    /// Number of elements of the (coarsest) mesh.
    pub nx: usize,
    /// Time step; derived from the step rule when absent.
    pub dt: Option<f64>,
    pub gamma: f64,
    /// Final time; command dependent default when absent.
    pub horizon: Option<f64>,
    pub ref_refine: usize,
    /// CSV target; standard output when absent.
    pub out_path: Option<PathBuf>,
    pub fit_points: usize,
    /// Frame stride for full-history dumps of `solve`.
    pub frames: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            problem: None,
            alpha: DEFAULT_ALPHA,
            nx: DEFAULT_NX,
            dt: None,
            gamma: DEFAULT_GAMMA,
            horizon: None,
            ref_refine: DEFAULT_REF_REFINE,
            out_path: None,
            fit_points: DEFAULT_FIT_POINTS,
            frames: None,
        }
    }

    pub fn effective_horizon(&self) -> f64 {
        self.horizon.unwrap_or(match self.command {
            Command::Timeerr => DEFAULT_TIMEERR_HORIZON,
            _ => DEFAULT_HORIZON,
        })
    }

    pub fn h(&self) -> f64 {
        1.0 / self.nx as f64
    }

    fn validate(self) -> Result<Self, ConfigError> {
        let field = |name: &'static str, reason: String| Err(ConfigError::Field { name, reason });
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return field("alpha", format!("{} outside (0, 1)", self.alpha));
        }
        if self.nx < 2 {
            return field("nx", format!("{} is below 2", self.nx));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return field("dt", format!("{dt} is not a positive number"));
            }
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return field("gamma", format!("{} outside (0, 1]", self.gamma));
        }
        if let Some(t) = self.horizon {
            if !(t > 0.0 && t.is_finite()) {
                return field("T", format!("{t} is not a positive number"));
            }
        }
        if ![2, 4, 8].contains(&self.ref_refine) {
            return field("ref_refine", format!("{} not in {{2, 4, 8}}", self.ref_refine));
        }
        if self.fit_points < 2 {
            return field("fit_points", format!("{} is below 2", self.fit_points));
        }
        if self.frames == Some(0) {
            return field("frames", "stride must be at least 1".to_string());
        }
        if self.command != Command::Selftest && self.problem.is_none() {
            return field("problem", format!("required by {}", self.command.name()));
        }
        Ok(self)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Help or version text requested on the command line.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid {name}: {reason}")]
    Field { name: &'static str, reason: String },
    #[error("config file {path}: {reason}")]
    File { path: String, reason: String },
}

impl ConfigError {
    /// True for help and version requests, which are not failures.
    pub fn is_informational(&self) -> bool {
        matches!(self, ConfigError::Info(_))
    }
}

#[derive(Debug, Parser)]
#[command(name = "subdiff", version, about = "Subdiffusion solver and verification studies")]
struct Cli {
    /// Subcommand; may also be given as `command` in the config file.
    #[arg(value_enum)]
    command: Option<Command>,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "T", alias = "horizon")]
    horizon: Option<f64>,
    #[arg(long)]
    ref_refine: Option<usize>,
    #[arg(long = "out")]
    out_path: Option<PathBuf>,
    #[arg(long)]
    fit_points: Option<usize>,
    #[arg(long)]
    frames: Option<usize>,
}

/// File form of [`RunConfig`]; every key optional.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    problem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ref_refine: Option<usize>,
    #[serde(rename = "out", skip_serializing_if = "Option::is_none")]
    out_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frames: Option<usize>,
}

fn parse_file(text: &str, origin: &str) -> Result<FileConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::File {
        path: origin.to_string(),
        reason: e.message().to_string(),
    })
}

fn parse_cli<I, S>(argv: I) -> Result<Cli, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("subdiff")).chain(argv.into_iter().map(Into::into));
    Cli::try_parse_from(args).map_err(|e| {
        let text = e.render().to_string().trim_end().to_string();
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ConfigError::Info(text),
            _ => ConfigError::Usage(text),
        }
    })
}

fn merge(cli: Cli, file: FileConfig) -> Result<RunConfig, ConfigError> {
    let command = cli.command.or(file.command).ok_or_else(|| {
        ConfigError::Usage("a command is required: solve, order, timeerr or selftest".to_string())
    })?;
    let d = RunConfig::new(command);
    RunConfig {
        command,
        problem: cli.problem.or(file.problem),
        alpha: cli.alpha.or(file.alpha).unwrap_or(d.alpha),
        nx: cli.nx.or(file.nx).unwrap_or(d.nx),
        dt: cli.dt.or(file.dt),
        gamma: cli.gamma.or(file.gamma).unwrap_or(d.gamma),
        horizon: cli.horizon.or(file.horizon),
        ref_refine: cli.ref_refine.or(file.ref_refine).unwrap_or(d.ref_refine),
        out_path: cli.out_path.or(file.out_path),
        fit_points: cli.fit_points.or(file.fit_points).unwrap_or(d.fit_points),
        frames: cli.frames.or(file.frames),
    }
    .validate()
}

/// Resolves a configuration from arguments (without the program name) and
/// optional config-file text. Flags override the file, which overrides the
/// defaults.
pub fn parse_config<I, S>(argv: I, file: Option<&str>) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = parse_cli(argv)?;
    let file = match file {
        Some(text) => parse_file(text, "<inline>")?,
        None => FileConfig::default(),
    };
    merge(cli, file)
}

/// Like [`parse_config`], reading the file named by `--config` if present.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = parse_cli(argv)?;
    let file = match &cli.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };
    merge(cli, file)
}

fn read_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
        path: shown.clone(),
        reason: e.to_string(),
    })?;
    parse_file(&text, &shown)
}

/// Config-file form of `config`; [`parse_config`] reads it back unchanged.
pub fn render(config: &RunConfig) -> String {
    let file = FileConfig {
        command: Some(config.command),
        problem: config.problem.clone(),
        alpha: Some(config.alpha),
        nx: Some(config.nx),
        dt: config.dt,
        gamma: Some(config.gamma),
        horizon: config.horizon,
        ref_refine: Some(config.ref_refine),
        out_path: config.out_path.clone(),
        fit_points: Some(config.fit_points),
        frames: config.frames,
    };
    toml::to_string(&file).expect("flat scalar table always serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NONE: [&str; 0] = [];

    #[test]
    fn table_one_configuration() {
        let c = parse_config(
            ["order", "--problem", "order1", "--alpha", "0.5", "--nx", "100", "--dt", "2e-3"],
            None,
        )
        .unwrap();
        assert_eq!(c.command, Command::Order);
        assert_eq!(c.problem.as_deref(), Some("order1"));
        assert_eq!((c.alpha, c.nx, c.dt), (0.5, 100, Some(2e-3)));
        assert_eq!(c.effective_horizon(), 1.0);
        assert_eq!((c.gamma, c.ref_refine, c.fit_points), (0.1, 4, 100));
    }

    #[test]
    fn missing_command_is_a_usage_error() {
        assert!(matches!(parse_config(NONE, None), Err(ConfigError::Usage(_))));
    }

    #[test]
    fn out_of_range_values_name_the_field() {
        let err = parse_config(["solve", "--problem", "order1", "--alpha", "1.0"], None).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");
        let err = parse_config(["solve", "--problem", "order1", "--nx", "1"], None).unwrap_err();
        assert!(err.to_string().contains("nx"));
        let err = parse_config(["timeerr", "--problem", "errtime1", "--ref-refine", "3"], None).unwrap_err();
        assert!(err.to_string().contains("ref_refine"));
        let err = parse_config(["solve"], None).unwrap_err();
        assert!(err.to_string().contains("problem"));
        let err = parse_config(["solve", "--problem", "x", "--fit-points", "1"], None).unwrap_err();
        assert!(err.to_string().contains("fit_points"));
    }

    #[test]
    fn unknown_flag_and_unknown_key_rejected() {
        assert!(matches!(parse_config(["solve", "--bogus", "1"], None), Err(ConfigError::Usage(_))));
        let err = parse_config(["solve"], Some("bogus = 1\n")).unwrap_err();
        assert!(matches!(err, ConfigError::File { .. }));
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = "command = \"timeerr\"\nproblem = \"errtime4\"\nalpha = 0.5\nnx = 50\n";
        let c = parse_config(["--nx", "200"], Some(file)).unwrap();
        assert_eq!(c.command, Command::Timeerr);
        assert_eq!((c.alpha, c.nx), (0.5, 200));
        assert_eq!(c.effective_horizon(), DEFAULT_TIMEERR_HORIZON);
        let c = parse_config(["solve"], Some(file)).unwrap();
        assert_eq!(c.command, Command::Solve);
    }

    #[test]
    fn unreadable_file_named() {
        let err = parse_args(["selftest", "--config", "/nonexistent/run.toml"]).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/run.toml"));
    }

    fn command() -> impl Strategy<Value = Command> {
        prop_oneof![
            Just(Command::Solve),
            Just(Command::Order),
            Just(Command::Timeerr),
            Just(Command::Selftest)
        ]
    }

    prop_compose! {
        fn valid_config()(
            command in command(),
            problem in "[a-z][a-z0-9_]{0,12}",
            alpha in 1e-6f64..0.999_999,
            nx in 2usize..100_000,
            dt in proptest::option::of(1e-9f64..1.0),
            gamma in 1e-6f64..=1.0,
            horizon in proptest::option::of(1e-6f64..100.0),
            ref_refine in prop_oneof![Just(2usize), Just(4), Just(8)],
            out in proptest::option::of("[a-z]{1,8}\\.csv"),
            fit_points in 2usize..10_000,
            frames in proptest::option::of(1usize..1000),
        ) -> RunConfig {
            RunConfig {
                command,
                problem: Some(problem),
                alpha,
                nx,
                dt,
                gamma,
                horizon,
                ref_refine,
                out_path: out.map(PathBuf::from),
                fit_points,
                frames,
            }
        }
    }

    proptest! {
        #[test]
        fn render_round_trips(c in valid_config()) {
            let back = parse_config(NONE, Some(&render(&c))).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
