//! Command-line surface: argument and config parsing, verb dispatch and CSV
//! output.
//!
//! Verbs are `state`, `sweep`, `figure`, `peak` and `check`. A config file
//! holds flat `key = value` lines using the long flag names as keys; flags
//! override config values, which override built-in defaults.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::detector::{accel_to_q, validity_check, DetectorParams, Q_CONSISTENCY_TOL};
use crate::error::{Error, Result};
use crate::measures::ORACLE_TOL;
use crate::sweep::{
    evaluate_point, figure_preset, find_qfe_peak, oracle_grid_check, run_sweep, CrossCheck, Figure,
    OracleGrid, PeakDiagnostic, SweepRecord, SweepSpec, SweepVariable, Q_MAX_DEFAULT,
};

pub const CSV_HEADER: &str = "q,theta,nu,mu,upsilon,eta,concurrence,entropy,qfe,ratio";
pub const PEAK_HEADER: &str = "variable,location,value,bracket_lo,bracket_hi";
pub const CHECK_HEADER: &str = "points,max_concurrence_deviation,max_spectrum_deviation";

/// Tolerance of the `check` verb on the spectrum of `rho rho~`.
pub const SPECTRUM_TOL: f64 = 1e-10;

const DEFAULT_THETA: f64 = FRAC_PI_4;
const DEFAULT_NU: f64 = 0.05;
const DEFAULT_Q: f64 = 0.0;
const DEFAULT_STEPS: usize = 101;

const CONFIG_KEYS: &[&str] = &[
    "theta", "nu", "q", "omega", "accel", "variable", "min", "max", "steps", "which", "output",
    "oracle",
];

#[derive(Debug, Parser)]
#[command(
    name = "unruh-qfe",
    version,
    about = "Entanglement and its fluctuation for two Unruh-DeWitt detectors, one accelerated"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Weights and measures at a single parameter point
    State {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Uniform sweep over q or theta
    Sweep {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        steps: Option<String>,
        /// Cross-check every point against the numeric concurrence
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Data series of a figure preset (fig1, fig2, fig3)
    Figure {
        #[arg(long)]
        which: Option<String>,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Location and value of the QFE maximum
    Peak {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Compare analytic and numeric concurrence over the standard grid
    Check {
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Initial-state angle in radians; accepts pi, pi/N
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    /// Acceleration parameter exp(-2 pi omega / a), in [0, 1)
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    accel: Option<String>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long)]
    variable: Option<String>,
    #[arg(long)]
    min: Option<String>,
    #[arg(long)]
    max: Option<String>,
}

#[derive(Debug, Args)]
struct IoArgs {
    #[arg(long)]
    output: Option<PathBuf>,
    /// Flat `key = value` file with the same keys as the long flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    State {
        params: DetectorParams,
        output: Option<PathBuf>,
    },
    Sweep {
        spec: SweepSpec,
        check: CrossCheck,
        output: Option<PathBuf>,
    },
    Figure {
        which: Figure,
        check: CrossCheck,
        output: Option<PathBuf>,
    },
    Peak {
        params: DetectorParams,
        variable: SweepVariable,
        bracket: (f64, f64),
        output: Option<PathBuf>,
    },
    Check {
        output: Option<PathBuf>,
    },
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!("config line {}: expected 'key = value'", n + 1))
        })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Usage(format!(
                "config line {}: unknown key '{key}'",
                n + 1
            )));
        }
        let value = value.trim().trim_matches('"').to_string();
        map.insert(key.to_string(), value);
    }
    Ok(map)
}

/// Plain decimal, or the literals `pi` and `pi/N`.
fn parse_angle(name: &'static str, text: &str) -> Result<f64> {
    let t = text.trim();
    if t == "pi" {
        return Ok(PI);
    }
    if let Some(den) = t.strip_prefix("pi/") {
        if let Ok(d) = den.parse::<u32>() {
            if d > 0 {
                return Ok(PI / d as f64);
            }
        }
    }
    parse_number(name, t)
}

fn parse_number(name: &'static str, text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("--{name}: '{text}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Usage(format!("--{name}: '{text}' is not finite")));
    }
    Ok(v)
}

struct Settings {
    config: HashMap<String, String>,
}

impl Settings {
    fn get(&self, key: &str, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.config.get(key).cloned())
    }

    fn number(&self, key: &'static str, flag: &Option<String>) -> Result<Option<f64>> {
        self.get(key, flag)
            .map(|s| parse_number(key, &s))
            .transpose()
    }

    fn angle(&self, key: &'static str, flag: &Option<String>) -> Result<Option<f64>> {
        self.get(key, flag)
            .map(|s| parse_angle(key, &s))
            .transpose()
    }

    fn output(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone()
            .or_else(|| self.config.get("output").map(PathBuf::from))
    }

    fn oracle(&self, flag: bool) -> Result<CrossCheck> {
        let on = if flag {
            true
        } else {
            match self.config.get("oracle").map(String::as_str) {
                None | Some("false") => false,
                Some("true") => true,
                Some(other) => {
                    return Err(Error::Usage(format!(
                        "oracle: expected true or false, got '{other}'"
                    )))
                }
            }
        };
        Ok(if on {
            CrossCheck::Numeric
        } else {
            CrossCheck::Off
        })
    }

    fn params(&self, p: &PointArgs) -> Result<DetectorParams> {
        let theta = self.angle("theta", &p.theta)?.unwrap_or(DEFAULT_THETA);
        let nu = self.number("nu", &p.nu)?.unwrap_or(DEFAULT_NU);
        let q = self.number("q", &p.q)?;
        let omega = self.number("omega", &p.omega)?;
        let accel = self.number("accel", &p.accel)?;
        match (omega, accel) {
            (Some(omega), Some(accel)) => {
                let implied = accel_to_q(omega, accel)?;
                if let Some(q) = q {
                    if (q - implied).abs() > Q_CONSISTENCY_TOL {
                        return Err(Error::InconsistentAcceleration { q, implied });
                    }
                }
                DetectorParams::from_acceleration(theta, nu, omega, accel)
            }
            (None, Some(_)) => Err(Error::Usage("--accel requires --omega".into())),
            (Some(omega), None) => {
                DetectorParams::new(theta, nu, q.unwrap_or(DEFAULT_Q))?.with_gap(omega)
            }
            (None, None) => DetectorParams::new(theta, nu, q.unwrap_or(DEFAULT_Q)),
        }
    }

    fn variable(&self, r: &RangeArgs) -> Result<SweepVariable> {
        self.get("variable", &r.variable)
            .map(|s| s.parse())
            .transpose()
            .map(|v| v.unwrap_or(SweepVariable::Q))
    }

    fn bound(
        &self,
        key: &'static str,
        flag: &Option<String>,
        variable: SweepVariable,
    ) -> Result<Option<f64>> {
        match variable {
            SweepVariable::Q => self.number(key, flag),
            SweepVariable::Theta => self.angle(key, flag),
        }
    }
}

fn clap_usage(err: clap::Error) -> Error {
    let rendered = err.to_string();
    let first = rendered.lines().next().unwrap_or("invalid arguments");
    Error::Usage(first.trim_start_matches("error: ").to_string())
}

/// Builds a [`Command`] from arguments (without the program name) and an
/// optional config text. When `config` is `None` and `--config` is given,
/// the file is read.
pub fn parse_args<S: AsRef<str>>(argv: &[S], config: Option<&str>) -> Result<Command> {
    let cli =
        Cli::try_parse_from(std::iter::once("unruh-qfe").chain(argv.iter().map(AsRef::as_ref)))
            .map_err(clap_usage)?;
    command_from(cli, config)
}

fn command_from(cli: Cli, config: Option<&str>) -> Result<Command> {
    let io = match &cli.verb {
        Verb::State { io, .. }
        | Verb::Sweep { io, .. }
        | Verb::Figure { io, .. }
        | Verb::Peak { io, .. }
        | Verb::Check { io } => io,
    };
    let text = match (config, &io.config) {
        (Some(text), _) => Some(text.to_string()),
        (None, Some(path)) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?,
        ),
        (None, None) => None,
    };
    let settings = Settings {
        config: text
            .as_deref()
            .map(parse_config)
            .transpose()?
            .unwrap_or_default(),
    };

    match cli.verb {
        Verb::State { point, io } => Ok(Command::State {
            params: settings.params(&point)?,
            output: settings.output(&io.output),
        }),
        Verb::Sweep {
            point,
            range,
            steps,
            oracle,
            io,
        } => {
            let variable = settings.variable(&range)?;
            let min = settings.bound("min", &range.min, variable)?;
            let max = settings.bound("max", &range.max, variable)?;
            let (Some(min), Some(max)) = (min, max) else {
                return Err(Error::Usage("sweep requires --min and --max".into()));
            };
            let steps = match settings.get("steps", &steps) {
                Some(s) => s.trim().parse::<usize>().map_err(|_| {
                    Error::Usage(format!("--steps: '{s}' is not a positive integer"))
                })?,
                None => DEFAULT_STEPS,
            };
            Ok(Command::Sweep {
                spec: SweepSpec::new(variable, min, max, steps, settings.params(&point)?)?,
                check: settings.oracle(oracle)?,
                output: settings.output(&io.output),
            })
        }
        Verb::Figure { which, oracle, io } => {
            let which = settings.get("which", &which).ok_or_else(|| {
                Error::Usage("figure requires --which (fig1, fig2 or fig3)".into())
            })?;
            Ok(Command::Figure {
                which: which.parse()?,
                check: settings.oracle(oracle)?,
                output: settings.output(&io.output),
            })
        }
        Verb::Peak { point, range, io } => {
            let variable = settings.variable(&range)?;
            let default_hi = match variable {
                SweepVariable::Q => Q_MAX_DEFAULT,
                SweepVariable::Theta => FRAC_PI_2,
            };
            let lo = settings.bound("min", &range.min, variable)?.unwrap_or(0.0);
            let hi = settings
                .bound("max", &range.max, variable)?
                .unwrap_or(default_hi);
            Ok(Command::Peak {
                params: settings.params(&point)?,
                variable,
                bracket: (lo, hi),
                output: settings.output(&io.output),
            })
        }
        Verb::Check { io } => Ok(Command::Check {
            output: settings.output(&io.output),
        }),
    }
}

/// Nine significant digits, fixed notation for moderate magnitudes and
/// scientific otherwise.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let split = (exp + 1) as usize;
        if split >= digits.len() {
            digits.clone()
        } else {
            format!("{}.{}", &digits[..split], &digits[split..])
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

pub fn format_record(r: &SweepRecord) -> String {
    let mut fields: Vec<String> = [
        r.q,
        r.theta,
        r.nu,
        r.mu,
        r.upsilon,
        r.eta,
        r.concurrence,
        r.entropy,
        r.qfe,
    ]
    .iter()
    .map(|&v| format_value(v))
    .collect();
    fields.push(r.ratio.map(format_value).unwrap_or_default());
    fields.join(",")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", format_record(r))?;
    }
    out.flush()
}

fn emit(
    output: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<()> {
    match output {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
            })?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn warn(params: &DetectorParams, stderr: &mut dyn Write) -> io::Result<()> {
    for w in validity_check(params) {
        writeln!(stderr, "warning: {w}")?;
    }
    Ok(())
}

/// Executes a command. Data goes to `stdout` or the output file; warnings go
/// to `stderr`.
pub fn run_command(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::State { params, output } => {
            warn(params, stderr)?;
            let record = evaluate_point(params, CrossCheck::Numeric)?;
            emit(output, stdout, |w| write_csv(&[record], w))
        }
        Command::Sweep {
            spec,
            check,
            output,
        } => {
            warn(spec.fixed(), stderr)?;
            let records = run_sweep(spec, *check)?;
            emit(output, stdout, |w| write_csv(&records, w))
        }
        Command::Figure {
            which,
            check,
            output,
        } => {
            let mut records = Vec::new();
            for spec in figure_preset(*which) {
                records.extend(run_sweep(&spec, *check)?);
            }
            emit(output, stdout, |w| write_csv(&records, w))
        }
        Command::Peak {
            params,
            variable,
            bracket,
            output,
        } => {
            warn(params, stderr)?;
            let peak = find_qfe_peak(params, *variable, *bracket)?;
            if let Some(PeakDiagnostic::NotUnimodal {
                other_location,
                other_value,
            }) = peak.diagnostic
            {
                writeln!(
                    stderr,
                    "warning: profile is not unimodal; another local maximum {} at {variable} = {}",
                    format_value(other_value),
                    format_value(other_location)
                )?;
            }
            emit(output, stdout, |w| {
                writeln!(w, "{PEAK_HEADER}")?;
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    peak.variable,
                    format_value(peak.location),
                    format_value(peak.value),
                    format_value(peak.bracket.0),
                    format_value(peak.bracket.1)
                )
            })
        }
        Command::Check { output } => {
            let report = oracle_grid_check(&OracleGrid::default())?;
            emit(output, stdout, |w| {
                writeln!(w, "{CHECK_HEADER}")?;
                writeln!(
                    w,
                    "{},{:e},{:e}",
                    report.points, report.max_concurrence_deviation, report.max_spectrum_deviation
                )
            })?;
            if report.max_concurrence_deviation > ORACLE_TOL {
                return Err(Error::OracleDeviation {
                    deviation: report.max_concurrence_deviation,
                    tolerance: ORACLE_TOL,
                });
            }
            if report.max_spectrum_deviation > SPECTRUM_TOL {
                return Err(Error::OracleDeviation {
                    deviation: report.max_spectrum_deviation,
                    tolerance: SPECTRUM_TOL,
                });
            }
            Ok(())
        }
    }
}

/// Entry point shared by the binary: parses, runs, and maps every failure to
/// a one-line diagnostic and exit status 1. `--help` and `--version` exit 0.
pub fn main_with<S: AsRef<str>>(argv: &[S], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let parsed =
        Cli::try_parse_from(std::iter::once("unruh-qfe").chain(argv.iter().map(AsRef::as_ref)));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", clap_usage(e));
            return 1;
        }
    };
    let result = command_from(cli, None).and_then(|cmd| run_command(&cmd, stdout, stderr));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}
