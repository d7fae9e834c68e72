//! Command-line front end.
//!
//! Scenario resolution order: built-in defaults, then a `key = value` config
//! file, then explicit flags.  Every subcommand emits CSV (or a validation
//! report) to `--out` or stdout, and identical configurations produce
//! byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::gaussian::Prep;
use crate::model::{thermal_wavelength, SimParams};
use crate::{Error, Result};

mod commands;
mod validate;

pub use commands::{cmd_fig1, cmd_fig2, cmd_scan, ScanQuantity};
pub use validate::{cmd_validate, Check, ValidateSettings, ValidationReport};

/// Every CSV column header this crate emits, paired with the tag embedded in
/// it.  The `_eq…` suffixes are part of the external data contract: consumers
/// select columns by suffix, so the pairing is frozen here and cross-checked
/// by tests.
///
/// ```
/// for (header, tag) in qbm::cli::COLUMN_MANIFEST {
///     assert!(tag.is_empty() || header.ends_with(tag));
/// }
/// ```
pub const COLUMN_MANIFEST: &[(&str, &str)] = &[
    ("gamma_t", ""),
    ("x2_eq2.6", "eq2.6"),
    ("xxdot_eq2.6", "eq2.6"),
    ("xdot2_eq2.6", "eq2.6"),
    ("A11_eq3.5", "eq3.5"),
    ("A12_eq3.5", "eq3.5"),
    ("A22_eq3.5", "eq3.5"),
    ("A11_eq3.16", "eq3.16"),
    ("A12_eq3.16", "eq3.16"),
    ("A22_eq3.16", "eq3.16"),
    ("A0_scaled_eq4.5", "eq4.5"),
    ("AT_scaled_eq4.15", "eq4.15"),
    ("A_scaled_eq4.5", "eq4.5"),
    ("A_scaled_eq4.15", "eq4.15"),
    ("attenuation_eq4.12", "eq4.12"),
    ("attenuation_eq4.17", "eq4.17"),
    ("purity_eq5.9", "eq5.9"),
    ("witness_eq5.13", "eq5.13"),
];

/// Tag registered for a header, if the header is part of the contract.
pub fn header_tag(header: &str) -> Option<&'static str> {
    COLUMN_MANIFEST
        .iter()
        .find(|(h, _)| *h == header)
        .map(|(_, tag)| *tag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Gaussian,
    Cat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Fully resolved scenario shared by every subcommand.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub params: SimParams,
    pub kind: StateKind,
    pub x0: f64,
    pub d: f64,
    pub sigma: f64,
    pub prep: Prep,
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
    pub spacing: Spacing,
    pub out: Option<PathBuf>,
}

/// Flags shared by every subcommand.  Unset flags fall back to the config
/// file, then to defaults that encode the standard parameter point: m, gamma,
/// kT and hbar all 1 except kT = 5, sigma a quarter thermal wavelength, d ten
/// thermal wavelengths.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonOpts {
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "kT")]
    pub k_t: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    /// Initial preparation: zero | bath.
    #[arg(long)]
    pub prep: Option<String>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    /// Number of time points (at least 2).
    #[arg(long)]
    pub n: Option<usize>,
    /// Time spacing: linear | log.
    #[arg(long)]
    pub spacing: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Config file with `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "qbm", version, about = "Free-particle quantum Brownian motion tables")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interference attenuation for both preparations, scaled by lambda^2/d^2.
    Fig1(CommonOpts),
    /// Purity of a single packet against gamma*t.
    Fig2(CommonOpts),
    /// Tabulate one quantity over a time grid.
    Scan(ScanOpts),
    /// Cross-validate closed forms against the numerical oracles.
    Validate(ValidateOpts),
}

#[derive(Debug, Args)]
struct ScanOpts {
    /// moments | second-moments | interference | attenuation | purity | witness
    quantity: String,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Debug, Args)]
struct ValidateOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Skip checks whose name starts with this prefix; repeatable.
    #[arg(long)]
    skip: Vec<String>,
    /// Grid size of the distribution-evolution check.
    #[arg(long, default_value_t = 256)]
    fp_nq: usize,
    #[arg(long, default_value_t = 256)]
    fp_np: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fig1,
    Fig2,
    Scan,
    Validate,
}

impl CommandKind {
    /// Default time grid (t0, t1 in units of 1/gamma, n).
    fn grid_defaults(self) -> (f64, f64, usize) {
        match self {
            CommandKind::Fig1 => (0.0, 3.0, 200),
            CommandKind::Fig2 => (0.0, 0.5, 400),
            CommandKind::Scan | CommandKind::Validate => (0.0, 2.0, 201),
        }
    }

    fn state_kind(self) -> StateKind {
        match self {
            CommandKind::Fig1 => StateKind::Cat,
            _ => StateKind::Gaussian,
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "m", "gamma", "kT", "hbar", "sigma", "d", "x0", "prep", "t0", "t1", "n", "spacing", "out",
];

/// Parses a config file: one `key = value` per line, `#` starts a comment,
/// blank lines ignored.  Unknown keys are rejected.
fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                idx + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Config(format!(
                "{}:{}: unknown key `{key}`",
                path.display(),
                idx + 1
            )));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

fn file_f64(file: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    match file.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Error::Config(format!("key `{key}`: `{raw}` is not a number"))),
    }
}

fn parse_prep(raw: &str) -> Result<Prep> {
    match raw {
        "zero" => Ok(Prep::ZeroTemp),
        "bath" => Ok(Prep::BathTemp),
        other => Err(Error::Config(format!(
            "prep must be `zero` or `bath`, got `{other}`"
        ))),
    }
}

fn parse_spacing(raw: &str) -> Result<Spacing> {
    match raw {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        other => Err(Error::Config(format!(
            "spacing must be `linear` or `log`, got `{other}`"
        ))),
    }
}

impl ScenarioConfig {
    /// Resolves flags, config file and defaults into a checked scenario.
    pub fn resolve(opts: &CommonOpts, kind: CommandKind) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let pick = |flag: Option<f64>, key: &str| -> Result<Option<f64>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file_f64(&file, key),
            }
        };

        let m = pick(opts.m, "m")?.unwrap_or(1.0);
        let gamma = pick(opts.gamma, "gamma")?.unwrap_or(1.0);
        let k_t = pick(opts.k_t, "kT")?.unwrap_or(5.0);
        let hbar = pick(opts.hbar, "hbar")?.unwrap_or(1.0);
        let params = SimParams::new(m, gamma, k_t, hbar)?;
        let lam = thermal_wavelength(&params);

        let sigma = pick(opts.sigma, "sigma")?.unwrap_or(lam / 4.0);
        let d = pick(opts.d, "d")?.unwrap_or(10.0 * lam);
        let x0 = pick(opts.x0, "x0")?.unwrap_or(0.0);

        let prep = match opts.prep.as_deref().or(file.get("prep").map(String::as_str)) {
            Some(raw) => parse_prep(raw)?,
            None => Prep::ZeroTemp,
        };
        let spacing = match opts
            .spacing
            .as_deref()
            .or(file.get("spacing").map(String::as_str))
        {
            Some(raw) => parse_spacing(raw)?,
            None => Spacing::Linear,
        };

        let (t0_default, t1_scaled, n_default) = kind.grid_defaults();
        let t0 = pick(opts.t0, "t0")?.unwrap_or(t0_default);
        let t1 = pick(opts.t1, "t1")?.unwrap_or(t1_scaled / params.gamma);
        let n = match opts.n {
            Some(v) => v,
            None => match file.get("n") {
                Some(raw) => raw
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("key `n`: `{raw}` is not an integer")))?,
                None => n_default,
            },
        };
        let out = opts
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from));

        if n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {n}")));
        }
        if !t0.is_finite() || t0 < 0.0 {
            return Err(Error::Config(format!("t0 must be finite and >= 0, got {t0}")));
        }
        if !t1.is_finite() || t1 <= t0 {
            return Err(Error::Config(format!("t1 must exceed t0, got t1 = {t1}")));
        }
        if spacing == Spacing::Log && t0 <= 0.0 {
            return Err(Error::Config("log spacing needs t0 > 0".into()));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
        }
        if !d.is_finite() || d < 0.0 {
            return Err(Error::Config(format!("d must be nonnegative, got {d}")));
        }
        if !x0.is_finite() {
            return Err(Error::Config(format!("x0 must be finite, got {x0}")));
        }

        Ok(ScenarioConfig {
            params,
            kind: kind.state_kind(),
            x0,
            d,
            sigma,
            prep,
            t0,
            t1,
            n,
            spacing,
            out,
        })
    }
}

/// Ascending time grid with the configured spacing.
pub fn time_grid(cfg: &ScenarioConfig) -> Vec<f64> {
    let n = cfg.n;
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| match cfg.spacing {
            Spacing::Linear => cfg.t0 + (cfg.t1 - cfg.t0) * k as f64 / last,
            Spacing::Log => cfg.t0 * (cfg.t1 / cfg.t0).powf(k as f64 / last),
        })
        .collect()
}

/// Renders header and rows; floats use the shortest representation that
/// round-trips, so equal configurations yield byte-identical files.
pub fn render_csv(headers: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(rows.len() * 32 + 64);
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn emit(cfg: &ScenarioConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Fig1(opts) => {
            let cfg = ScenarioConfig::resolve(&opts, CommandKind::Fig1)?;
            emit(&cfg, &cmd_fig1(&cfg)?)?;
            Ok(0)
        }
        Command::Fig2(opts) => {
            let cfg = ScenarioConfig::resolve(&opts, CommandKind::Fig2)?;
            emit(&cfg, &cmd_fig2(&cfg)?)?;
            Ok(0)
        }
        Command::Scan(scan) => {
            let quantity: ScanQuantity = scan.quantity.parse()?;
            let cfg = ScenarioConfig::resolve(&scan.common, CommandKind::Scan)?;
            emit(&cfg, &cmd_scan(&cfg, quantity)?)?;
            Ok(0)
        }
        Command::Validate(v) => {
            let cfg = ScenarioConfig::resolve(&v.common, CommandKind::Validate)?;
            let settings = ValidateSettings {
                skip: v.skip,
                fp_nq: v.fp_nq,
                fp_np: v.fp_np,
            };
            let report = cmd_validate(&cfg, &settings)?;
            emit(&cfg, &report.render())?;
            Ok(if report.all_passed() { 0 } else { 2 })
        }
    }
}

/// Entry point for the binary; returns the process exit code.
///
/// Usage and configuration problems exit 1, numerical failures exit 2.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn opts() -> CommonOpts {
        CommonOpts::default()
    }

    #[test]
    fn defaults_encode_standard_point() {
        let cfg = ScenarioConfig::resolve(&opts(), CommandKind::Fig1).unwrap();
        assert_eq!(cfg.params.m, 1.0);
        assert_eq!(cfg.params.gamma, 1.0);
        assert_eq!(cfg.params.kt, 5.0);
        assert_eq!(cfg.params.hbar, 1.0);
        let lam = thermal_wavelength(&cfg.params);
        assert_eq!(cfg.sigma, lam / 4.0);
        assert_eq!(cfg.d, 10.0 * lam);
        assert_eq!(cfg.n, 200);
        assert_eq!(cfg.t1, 3.0);
        assert_eq!(cfg.kind, StateKind::Cat);
    }

    #[test]
    fn flags_override_config_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# scenario").unwrap();
        writeln!(file, "m = 2.0").unwrap();
        writeln!(file, "gamma = 0.5   # trailing comment").unwrap();
        writeln!(file, "prep = bath").unwrap();
        file.flush().unwrap();

        let mut o = opts();
        o.config = Some(file.path().to_path_buf());
        let cfg = ScenarioConfig::resolve(&o, CommandKind::Scan).unwrap();
        assert_eq!(cfg.params.m, 2.0);
        assert_eq!(cfg.params.gamma, 0.5);
        assert_eq!(cfg.prep, Prep::BathTemp);
        assert_eq!(cfg.t1, 2.0 / 0.5);

        o.m = Some(3.0);
        o.prep = Some("zero".into());
        let cfg = ScenarioConfig::resolve(&o, CommandKind::Scan).unwrap();
        assert_eq!(cfg.params.m, 3.0);
        assert_eq!(cfg.prep, Prep::ZeroTemp);
        assert_eq!(cfg.params.gamma, 0.5);
    }

    #[test]
    fn config_file_rejects_unknown_keys_and_bad_lines() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "mass = 2.0").unwrap();
        file.flush().unwrap();
        let mut o = opts();
        o.config = Some(file.path().to_path_buf());
        let err = ScenarioConfig::resolve(&o, CommandKind::Scan).unwrap_err();
        assert_eq!(err.exit_code(), 1);

        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "just words").unwrap();
        file.flush().unwrap();
        o.config = Some(file.path().to_path_buf());
        assert!(ScenarioConfig::resolve(&o, CommandKind::Scan).is_err());
    }

    #[test]
    fn grid_invariants_are_enforced() {
        let mut o = opts();
        o.n = Some(1);
        assert!(ScenarioConfig::resolve(&o, CommandKind::Scan).is_err());

        let mut o = opts();
        o.t0 = Some(2.0);
        o.t1 = Some(1.0);
        assert!(ScenarioConfig::resolve(&o, CommandKind::Scan).is_err());

        let mut o = opts();
        o.t0 = Some(-0.5);
        assert!(ScenarioConfig::resolve(&o, CommandKind::Scan).is_err());

        let mut o = opts();
        o.spacing = Some("log".into());
        assert!(ScenarioConfig::resolve(&o, CommandKind::Scan).is_err());
        o.t0 = Some(0.01);
        assert!(ScenarioConfig::resolve(&o, CommandKind::Scan).is_ok());
    }

    #[test]
    fn time_grid_covers_both_spacings() {
        let mut o = opts();
        o.t0 = Some(0.5);
        o.t1 = Some(2.0);
        o.n = Some(4);
        let cfg = ScenarioConfig::resolve(&o, CommandKind::Scan).unwrap();
        let grid = time_grid(&cfg);
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[0], 0.5);
        assert!((grid[3] - 2.0).abs() < 1e-15);
        assert!((grid[1] - 1.0).abs() < 1e-15);

        o.spacing = Some("log".into());
        let cfg = ScenarioConfig::resolve(&o, CommandKind::Scan).unwrap();
        let grid = time_grid(&cfg);
        assert_eq!(grid[0], 0.5);
        assert!((grid[3] - 2.0).abs() < 1e-12);
        assert!((grid[1] / grid[0] - grid[2] / grid[1]).abs() < 1e-12);
    }

    #[test]
    fn csv_uses_shortest_roundtrip_floats() {
        let text = render_csv(&["a", "b"], &[vec![0.5, 0.1], vec![1.0, -0.0]]);
        assert_eq!(text, "a,b\n0.5,0.1\n1,-0\n");
    }

    #[test]
    fn manifest_headers_carry_their_tags() {
        for (header, tag) in COLUMN_MANIFEST {
            if !tag.is_empty() {
                assert!(header.ends_with(tag), "{header} lacks {tag}");
            }
        }
        assert_eq!(header_tag("purity_eq5.9"), Some("eq5.9"));
        assert_eq!(header_tag("gamma_t"), Some(""));
        assert_eq!(header_tag("nope"), None);
    }

    #[test]
    fn emitted_headers_are_registered() {
        let mut o = opts();
        o.n = Some(3);
        o.t1 = Some(0.5);

        let fig1 = ScenarioConfig::resolve(&o, CommandKind::Fig1).unwrap();
        let fig2 = ScenarioConfig::resolve(&o, CommandKind::Fig2).unwrap();
        let mut outputs = vec![cmd_fig1(&fig1).unwrap(), cmd_fig2(&fig2).unwrap()];

        for quantity in [
            ScanQuantity::Moments,
            ScanQuantity::SecondMoments,
            ScanQuantity::Interference,
            ScanQuantity::Attenuation,
            ScanQuantity::Purity,
            ScanQuantity::Witness,
        ] {
            for prep in ["zero", "bath"] {
                let mut o = o.clone();
                o.prep = Some(prep.into());
                let cfg = ScenarioConfig::resolve(&o, CommandKind::Scan).unwrap();
                outputs.push(cmd_scan(&cfg, quantity).unwrap());
            }
        }

        for csv in outputs {
            let header = csv.lines().next().unwrap();
            for column in header.split(',') {
                assert!(
                    header_tag(column).is_some(),
                    "unregistered column {column}"
                );
            }
        }
    }

    #[test]
    fn unknown_scan_quantity_is_a_usage_error() {
        let err = "entropy".parse::<ScanQuantity>().unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
