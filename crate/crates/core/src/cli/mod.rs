//! Command-line front end.
//!
//! Exit codes: 0 on success (including a null recovery answer), 2 for usage
//! and parse errors, 3 when a resource budget is exceeded.

pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::channel::{ChannelVector, Snr};
use crate::codec::{simulate_equation_error, NestedLatticeCode, SimOptions};
use crate::error::Error;
use crate::field::{build_q, recovery_matrix, PrimeField};
use crate::gaussian::{CoefficientVector, GaussInt};
use crate::outage::{sweep_mimo, sweep_twoway, MimoConfig, TwoWayConfig};
use crate::rates::comp_rate;
use crate::search::rate_profile;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Failure of a command together with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() { EXIT_BUDGET } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "compute-forward", version, about = "Compute-and-forward rates, equation search, recovery and outage simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Computation rate and MMSE scaling of one equation.
    Rate {
        /// Channel gains, e.g. "-1.1744+2.1496j,1.2512-1.6335j".
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// Gaussian-integer coefficients, e.g. "1,-1".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
    },
    /// Highest-rate equations as CSV.
    Profile {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix that extracts one message from a set of equations.
    Recover {
        #[arg(long)]
        p: u64,
        /// JSON list of equations, each a list of [re, im] pairs; inline or a file path.
        #[arg(long)]
        coeffs_json: String,
        /// Message index, starting at 1.
        #[arg(long)]
        target: usize,
    },
    /// Equation error rate of the lattice pipeline.
    Codec {
        #[arg(long)]
        p: u64,
        /// Message length per transmitter; a single value applies to all.
        #[arg(long)]
        k: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Remove channel noise.
        #[arg(long)]
        noiseless: bool,
        /// Write the code description as JSON.
        #[arg(long)]
        code_out: Option<PathBuf>,
    },
    /// Outage-rate curve over an SNR grid.
    Outage(OutageArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Network {
    Mimo,
    Twoway,
}

#[derive(Debug, Args)]
struct OutageArgs {
    network: Network,
    /// "start:stop:step" in dB (inclusive) or a comma-separated list.
    #[arg(long, default_value = "0:30:1", allow_hyphen_values = true)]
    grid: String,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bit-pipe rate (mimo).
    #[arg(long)]
    c: Option<f64>,
    /// Broadcast SNR as a multiple of the uplink SNR (twoway).
    #[arg(long)]
    bc_factor: Option<f64>,
    /// JSON file with the sweep configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn channel(flag: &str, text: &str) -> CliResult<ChannelVector> {
    let h = parse::parse_complex_list(flag, text).map_err(CliError::usage)?;
    Ok(ChannelVector::new(h)?)
}

fn coefficients(flag: &str, text: &str) -> CliResult<CoefficientVector> {
    parse::parse_coefficients(flag, text).map_err(CliError::usage)
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_rate(out: &mut dyn Write, h: &str, a: &str, snr_db: f64) -> CliResult<()> {
    let h = channel("--h", h)?;
    let a = coefficients("--a", a)?;
    let r = comp_rate(&h, &a, Snr::from_db(snr_db)?)?;
    writeln!(out, "rate={:.6}", r.rate_bits)?;
    writeln!(out, "alpha_re={}", r.alpha.re)?;
    writeln!(out, "alpha_im={}", r.alpha.im)?;
    Ok(())
}

fn profile_csv(h: &ChannelVector, snr: Snr, top: usize) -> CliResult<String> {
    if top == 0 {
        return Err(CliError::usage("--top must be at least 1"));
    }
    let profile = rate_profile(h, snr, top)?;
    let l = h.len();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header: Vec<String> = (1..=l).map(|i| format!("a_re_{i}")).collect();
    header.extend((1..=l).map(|i| format!("a_im_{i}")));
    header.push("rate_bits".into());
    w.write_record(&header).map_err(|e| CliError::usage(e.to_string()))?;
    for (a, rate) in &profile.rows {
        let mut rec: Vec<String> = a.entries().iter().map(|x| x.re.to_string()).collect();
        rec.extend(a.entries().iter().map(|x| x.im.to_string()));
        rec.push(rate.to_string());
        w.write_record(&rec).map_err(|e| CliError::usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

fn read_inline_or_file(text: &str) -> CliResult<String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        Ok(text.to_string())
    } else {
        Ok(std::fs::read_to_string(text)?)
    }
}

fn cmd_recover(out: &mut dyn Write, p: u64, coeffs_json: &str, target: usize) -> CliResult<()> {
    let field = PrimeField::new(p)?;
    let text = read_inline_or_file(coeffs_json)?;
    let raw: Vec<Vec<[i64; 2]>> =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("--coeffs-json: {e}")))?;
    let rows: Vec<CoefficientVector> = raw
        .iter()
        .map(|r| CoefficientVector::new(r.iter().map(|&[re, im]| GaussInt::new(re, im)).collect()))
        .collect();
    let Some(l) = rows.first().map(|r| r.len()) else {
        return Err(CliError::usage("--coeffs-json: need at least one equation"));
    };
    if l == 0 {
        return Err(CliError::usage("--coeffs-json: equations must be nonempty"));
    }
    if target == 0 || target > l {
        return Err(CliError::usage(format!("--target must lie in 1..={l}")));
    }
    let q = build_q(&rows, field, l)?;
    let phi = recovery_matrix(&q, target - 1, l)?;
    if let Some(phi) = &phi {
        let check = phi.mul(&q)?;
        let want = crate::field::recovery_target(field, target - 1, l);
        if check != want {
            return Err(CliError { code: 1, message: "internal error: recovery matrix failed verification".into() });
        }
    }
    let doc = json!({
        "p": p,
        "target": target,
        "phi": phi.map(|m| m.to_rows()),
    });
    writeln!(out, "{doc}")?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_codec(
    out: &mut dyn Write,
    p: u64,
    k: &str,
    n: usize,
    h: &str,
    a: &str,
    snr_db: f64,
    trials: u64,
    seed: u64,
    noiseless: bool,
    code_out: Option<&PathBuf>,
) -> CliResult<()> {
    let h = channel("--h", h)?;
    let a = coefficients("--a", a)?;
    let mut k_list = parse::parse_usize_list("--k", k).map_err(CliError::usage)?;
    if k_list.len() == 1 {
        k_list = vec![k_list[0]; h.len()];
    }
    if k_list.len() != h.len() {
        return Err(CliError::usage(format!("--k: expected 1 or {} values, got {}", h.len(), k_list.len())));
    }
    let snr = Snr::from_db(snr_db)?;
    let code = NestedLatticeCode::build(p, &k_list, n, seed, snr)?;
    if let Some(path) = code_out {
        std::fs::write(path, code.to_json() + "\n")?;
    }
    let opts = SimOptions { noiseless, alpha: None };
    let r = simulate_equation_error(&code, &h, &a, snr, trials, seed, opts)?;
    writeln!(out, "trials,errors,error_rate")?;
    writeln!(out, "{},{},{}", r.trials, r.errors, r.error_rate)?;
    Ok(())
}

fn read_config(path: &PathBuf) -> CliResult<serde_json::Map<String, serde_json::Value>> {
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("--config: {e}")))?;
    match v {
        serde_json::Value::Object(m) => Ok(m),
        _ => Err(CliError::usage("--config: expected a JSON object")),
    }
}

fn merge_config<T: serde::de::DeserializeOwned>(
    base: serde_json::Map<String, serde_json::Value>,
    overrides: &[(&str, Option<serde_json::Value>)],
) -> CliResult<T> {
    let mut m = base;
    for (key, val) in overrides {
        if let Some(v) = val {
            m.insert((*key).to_string(), v.clone());
        }
    }
    if !m.contains_key("seed") {
        return Err(CliError::usage("a seed is required: pass --seed or set it in --config"));
    }
    serde_json::from_value(serde_json::Value::Object(m)).map_err(|e| CliError::usage(format!("configuration: {e}")))
}

fn cmd_outage(out: &mut dyn Write, args: &OutageArgs) -> CliResult<()> {
    let grid = parse::parse_grid(&args.grid).map_err(CliError::usage)?;
    let mut base = match &args.config {
        Some(p) => read_config(p)?,
        None => serde_json::Map::new(),
    };
    let (default_rho, extra_key, extra_default, extra_flag) = match args.network {
        Network::Mimo => (0.25, "c", 2.0, args.c),
        Network::Twoway => (1.0 / 3.0, "bc_factor", 2.0, args.bc_factor),
    };
    base.entry("rho").or_insert(json!(default_rho));
    base.entry("trials").or_insert(json!(10_000));
    base.entry(extra_key).or_insert(json!(extra_default));
    let overrides = [
        ("rho", args.rho.map(|v| json!(v))),
        ("trials", args.trials.map(|v| json!(v))),
        ("seed", args.seed.map(|v| json!(v))),
        (extra_key, extra_flag.map(|v| json!(v))),
    ];
    let curve = match args.network {
        Network::Mimo => {
            if args.bc_factor.is_some() {
                return Err(CliError::usage("--bc-factor applies to the twoway network"));
            }
            let cfg: MimoConfig = merge_config(base, &overrides)?;
            sweep_mimo(&cfg, &grid)?
        }
        Network::Twoway => {
            if args.c.is_some() {
                return Err(CliError::usage("--c applies to the mimo network"));
            }
            let cfg: TwoWayConfig = merge_config(base, &overrides)?;
            sweep_twoway(&cfg, &grid)?
        }
    };
    emit(out, args.out.as_ref(), &curve.to_csv())
}

/// Parses `args` (program name first) and runs the command, writing results to `out`.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(out, "{}", e.render())?;
                    Ok(())
                }
                _ => Err(CliError::usage(e.render().to_string())),
            };
        }
    };
    match &cli.command {
        Command::Rate { h, a, snr_db } => cmd_rate(out, h, a, *snr_db),
        Command::Profile { h, snr_db, top, out: path } => {
            let h = channel("--h", h)?;
            let csv = profile_csv(&h, Snr::from_db(*snr_db)?, *top)?;
            emit(out, path.as_ref(), &csv)
        }
        Command::Recover { p, coeffs_json, target } => cmd_recover(out, *p, coeffs_json, *target),
        Command::Codec { p, k, n, h, a, snr_db, trials, seed, noiseless, code_out } => {
            cmd_codec(out, *p, k, *n, h, a, *snr_db, *trials, *seed, *noiseless, code_out.as_ref())
        }
        Command::Outage(args) => cmd_outage(out, args),
    }
}
