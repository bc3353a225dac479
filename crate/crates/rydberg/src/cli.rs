//! Command-line driver: argument parsing, command dispatch, outputs and
//! exit codes (0 ok, 1 usage, 2 numerical failure).

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rydberg_core::{find_isotope, PotentialParams, StateLabel};
use thiserror::Error;

use crate::config::{builtin_params, load_params, ConfigError};
use crate::output::{RunManifest, Table};
use crate::pipeline::{self, Failure, SolveOptions};

#[derive(Debug, Parser)]
#[command(
    name = "rydberg",
    version,
    about = "Rydberg-state spectra, quantum defects, wavefunctions and hyperfine constants"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Potential parameter file (TOML); defaults to the embedded rubidium set.
    #[arg(long, global = true, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Highest Chebyshev index; defaults to 700 n / 15.
    #[arg(long, global = true, value_name = "K")]
    pub kmax: Option<usize>,
    /// Outer radius as a multiple of the outer turning point.
    #[arg(long, global = true, default_value_t = 1.5, value_name = "F")]
    pub rmax_factor: f64,
    /// Tail tolerance of the physicality filter.
    #[arg(long, global = true, default_value_t = 1e-6, value_name = "TAU")]
    pub tail_tol: f64,
    /// Also write tables as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Output directory.
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum defects, numerical and quasiclassical, with fine splittings.
    Defects {
        /// Principal quantum number.
        #[arg(long, conflicts_with = "n_range")]
        n: Option<u32>,
        /// Inclusive range `a..b`.
        #[arg(long, value_parser = parse_range)]
        n_range: Option<(u32, u32)>,
        /// Orbital momenta: `2`, `0..4` or `0,1,3`.
        #[arg(long, default_value = "0..4", value_parser = parse_l_list)]
        l: LSet,
        /// `1/2`-style total angular momentum or `both`.
        #[arg(long, default_value = "both", value_parser = parse_j)]
        j: JSelect,
    },
    /// Numerical, Langer and Fock radial wavefunctions of one state.
    Wavefunction {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        /// Defaults to `l + 1/2`.
        #[arg(long, value_parser = parse_j)]
        j: Option<JSelect>,
        /// Equidistant rows in (0, r_max); defaults to the grid nodes.
        #[arg(long)]
        points: Option<usize>,
        /// Absolute outer radius in a_B, overriding --rmax-factor.
        #[arg(long, value_name = "R")]
        rmax: Option<f64>,
        /// Request the Fock column (s states only; on by default for l = 0).
        #[arg(long)]
        fock: bool,
        /// Ignore an inner classical region in the Langer construction.
        #[arg(long)]
        force_two_turning_points: bool,
    },
    /// Contact hyperfine constants of s states.
    Hyperfine {
        #[arg(long, default_value = "87Rb")]
        isotope: String,
        #[arg(long, default_value = "20..33", value_parser = parse_range)]
        n_range: (u32, u32),
        /// Drop the d delta / dn term of the origin density.
        #[arg(long)]
        zero_slope: bool,
    },
    /// Hydrogen validation suite.
    Validate,
}

/// Sorted, deduplicated orbital momenta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSet(pub Vec<u32>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JSelect {
    Both,
    /// Twice the total angular momentum.
    Twice(u32),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<Failure> for CliError {
    fn from(f: Failure) -> Self {
        match f {
            Failure::Usage(m) => CliError::Usage(m),
            Failure::Numerical(m) => CliError::Numerical(m),
        }
    }
}

/// `a..b`, `a-b` (inclusive) or a single value.
pub fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = (num(a)?, num(b)?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

pub fn parse_l_list(s: &str) -> Result<LSet, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let (a, b) = parse_range(part)?;
        out.extend(a..=b);
    }
    out.sort_unstable();
    out.dedup();
    Ok(LSet(out))
}

pub fn parse_j(s: &str) -> Result<JSelect, String> {
    if s == "both" {
        return Ok(JSelect::Both);
    }
    let twice = match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<u32>().map_err(|e| format!("`{s}`: {e}"))?,
        _ => return Err(format!("`{s}`: expected a half-integer like 3/2, or `both`")),
    };
    if twice % 2 == 0 {
        return Err(format!("`{s}`: j must be half-integer"));
    }
    Ok(JSelect::Twice(twice))
}

fn resolve_params(global: &GlobalArgs) -> Result<(PotentialParams, String), CliError> {
    match &global.params {
        Some(p) => Ok((load_params(p)?, p.display().to_string())),
        None => Ok((
            builtin_params("Rb").expect("embedded rubidium set"),
            "builtin:Rb".into(),
        )),
    }
}

fn state_name(s: &StateLabel) -> String {
    format!("n{}_l{}_j{}-2", s.n, s.l, s.twice_j)
}

/// What a command leaves behind for the manifest.
#[derive(Default)]
struct Outcome {
    states: Vec<String>,
    outputs: Vec<PathBuf>,
    summary: Option<serde_json::Value>,
    /// Failure detected after the outputs were written.
    error: Option<CliError>,
}

fn write_table(table: &Table, out: &Path, stem: &str, json: bool, outcome: &mut Outcome) -> Result<(), CliError> {
    let csv = out.join(format!("{stem}.csv"));
    table.write_csv(&csv)?;
    outcome.outputs.push(csv);
    if json {
        let p = out.join(format!("{stem}.json"));
        table.write_json(&p)?;
        outcome.outputs.push(p);
    }
    Ok(())
}

fn solve_options(global: &GlobalArgs) -> Result<SolveOptions, CliError> {
    if !(global.rmax_factor > 1.0 && global.rmax_factor.is_finite()) {
        return Err(CliError::Usage("--rmax-factor must exceed 1".into()));
    }
    if !(global.tail_tol > 0.0 && global.tail_tol < 1.0) {
        return Err(CliError::Usage("--tail-tol must lie in (0, 1)".into()));
    }
    if global.kmax.is_some_and(|k| k < 4) {
        return Err(CliError::Usage("--kmax must be at least 4".into()));
    }
    Ok(SolveOptions {
        k_max: global.kmax,
        r_max_factor: global.rmax_factor,
        tail_tol: global.tail_tol,
        ..SolveOptions::default()
    })
}

fn run_command(cli: &Cli, params: &PotentialParams, outcome: &mut Outcome) -> Result<(), CliError> {
    let g = &cli.global;
    let opts = solve_options(g)?;
    match &cli.command {
        Command::Defects { n, n_range, l, j } => {
            let ns: Vec<u32> = match (n, n_range) {
                (Some(n), None) => vec![*n],
                (None, Some((a, b))) => (*a..=*b).collect(),
                _ => return Err(CliError::Usage("give --n or --n-range".into())),
            };
            if ns.contains(&0) {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let twice_j = match j {
                JSelect::Both => None,
                JSelect::Twice(t) => Some(*t),
            };
            let states = pipeline::expand_states(&ns, &l.0, twice_j)?;
            outcome.states = states.iter().map(state_name).collect();
            let rows = pipeline::compute_defects(&states, params, &opts);
            let table = pipeline::defects_table(&rows);
            print!("{}", table.render());
            write_table(&table, &g.out, "defects", g.json, outcome)?;
            let failed: Vec<String> = rows
                .iter()
                .filter(|r| r.delta_numeric.is_none() || r.delta_quasiclassical.is_none())
                .map(|r| {
                    format!(
                        "n={} l={} j={}/2: {}",
                        r.n,
                        r.l,
                        r.twice_j,
                        r.error.as_deref().unwrap_or("")
                    )
                })
                .collect();
            if !failed.is_empty() {
                outcome.error = Some(CliError::Numerical(failed.join("; ")));
            }
        }
        Command::Wavefunction {
            n,
            l,
            j,
            points,
            rmax,
            fock,
            force_two_turning_points,
        } => {
            let twice_j = match j {
                None => 2 * l + 1,
                Some(JSelect::Twice(t)) => *t,
                Some(JSelect::Both) => return Err(CliError::Usage("wavefunction needs a single j".into())),
            };
            let state = StateLabel::new(*n, *l, twice_j).map_err(|e| CliError::Usage(e.to_string()))?;
            outcome.states = vec![state_name(&state)];
            if let Some(r) = rmax {
                if !(*r > 0.0 && r.is_finite()) {
                    return Err(CliError::Usage("--rmax must be positive".into()));
                }
            }
            let opts = SolveOptions {
                r_max: *rmax,
                force_two_turning_points: *force_two_turning_points,
                ..opts
            };
            let report = pipeline::wavefunction_report(&state, params, &opts, *points, *fock)?;
            print!("{}", report.table.render());
            write_table(
                &report.table,
                &g.out,
                &format!("wavefunction_{}", state_name(&state)),
                g.json,
                outcome,
            )?;
            outcome.summary = Some(serde_json::json!({
                "energy_ry": report.state.energy,
                "quantum_defect": report.state.quantum_defect,
                "max_abs_err_langer_r_gt_1_bohr": report.max_langer_error,
                "max_abs_err_fock_r_lt_3_bohr": report.max_fock_error,
            }));
        }
        Command::Hyperfine {
            isotope,
            n_range,
            zero_slope,
        } => {
            let iso = find_isotope(isotope).ok_or_else(|| {
                let known: Vec<&str> = rydberg_core::builtin_isotopes().iter().map(|i| i.label).collect();
                CliError::Usage(format!("unknown isotope `{isotope}`; known: {}", known.join(", ")))
            })?;
            if n_range.0 == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let ns: Vec<u32> = (n_range.0..=n_range.1).collect();
            outcome.states = ns.iter().map(|n| format!("n{n}_l0_j1-2")).collect();
            let (rows, summary) = pipeline::hyperfine_rows(iso, &ns, params, &opts, *zero_slope)?;
            let table = pipeline::hyperfine_table(&rows);
            print!("{}", table.render());
            println!(
                "mean scaled constant {:.6} GHz, spread {:.3e} ({})",
                summary.mean_scaled_ghz, summary.spread, summary.isotope
            );
            write_table(&table, &g.out, "hyperfine", g.json, outcome)?;
            outcome.summary = Some(serde_json::to_value(&summary).expect("summary serializes"));
        }
        Command::Validate => {
            let checks = pipeline::validate_hydrogen(g.kmax.unwrap_or(600));
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.message);
            }
            let table = pipeline::checks_table(&checks);
            write_table(&table, &g.out, "validate", g.json, outcome)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            outcome.summary = Some(serde_json::json!({ "checks": checks.len(), "failed": failed }));
            if failed > 0 {
                outcome.error = Some(CliError::Numerical(format!(
                    "{failed} of {} checks failed",
                    checks.len()
                )));
            }
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Defects { .. } => "defects",
        Command::Wavefunction { .. } => "wavefunction",
        Command::Hyperfine { .. } => "hyperfine",
        Command::Validate => "validate",
    }
}

/// Runs a parsed invocation and writes its manifest; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let start = Instant::now();
    let g = &cli.global;
    if let Err(e) = std::fs::create_dir_all(&g.out) {
        eprintln!("error: cannot create {}: {e}", g.out.display());
        return 2;
    }
    let mut outcome = Outcome::default();
    let (result, params_name) = match resolve_params(g) {
        Ok((params, name)) => (run_command(cli, &params, &mut outcome), name),
        Err(e) => (
            Err(e),
            g.params
                .as_ref()
                .map_or("builtin:Rb".into(), |p| p.display().to_string()),
        ),
    };
    let error = result.err().or(outcome.error.take());
    let mut manifest = RunManifest {
        command: command_name(&cli.command).into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        params: params_name,
        k_max: g.kmax,
        r_max_factor: g.rmax_factor,
        states: outcome.states,
        wall_clock_s: 0.0,
        outputs: Vec::new(),
        status: if error.is_some() { "error" } else { "ok" }.into(),
        error: error.as_ref().map(ToString::to_string),
        summary: outcome.summary,
    };
    let mut outputs = outcome.outputs;
    outputs.push(RunManifest::path(&g.out, &manifest.command));
    manifest.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
    manifest.wall_clock_s = start.elapsed().as_secs_f64();
    if let Err(e) = manifest.write(&g.out) {
        eprintln!("error: cannot write manifest: {e}");
        return 2;
    }
    match error {
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}

/// Parses `args` (program name first) and runs; clap help and version exit 0.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("20..33"), Ok((20, 33)));
        assert_eq!(parse_range("20..=33"), Ok((20, 33)));
        assert_eq!(parse_range("3-5"), Ok((3, 5)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..3").is_err());
        assert_eq!(parse_l_list("0..2,4").unwrap().0, [0, 1, 2, 4]);
    }

    #[test]
    fn j_values() {
        assert_eq!(parse_j("both"), Ok(JSelect::Both));
        assert_eq!(parse_j("5/2"), Ok(JSelect::Twice(5)));
        assert!(parse_j("1").is_err());
        assert!(parse_j("2/2").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 2);
        assert_eq!(main_with_args(["rydberg", "--help"]), 0);
        assert_eq!(main_with_args(["rydberg", "defects", "--bogus"]), 1);
    }
}
