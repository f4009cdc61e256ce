//! The `polyboole` command line.
//!
//! Exit codes: 0 solved or optimal, 20 unsatisfiable or infeasible,
//! 30 unknown (limits hit), 2 usage or input errors.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;

use crate::algebra::{parse_int, PolySystem, Ring};
use crate::encode::{full_reduce, BooleanSystem, LiftMode, ReduceOptions, Repr};
use crate::error::{Error, Result};
use crate::optimize::{qfp_opt, OptResult, OptStatus, StandardProblem};
use crate::problems::{
    self, binlp_build, cvp_build, linear_system, lswn_system, ntru_attack_system, ntru_keygen, ntru_min_weight_system,
    parse_matrix, pswn_build, qubo_build, sis_build, smallest_solution_build, solve_feasibility, svp_build,
    svp_coeff_bound, Feasibility, LatticeInstance, NtruKey, NtruParams, NtruParamsJson,
};
use crate::solver::{export_opb, opb_string, solve, Backend, BackendConfig, SolveOutcome};

pub const DEFAULT_SEED: u64 = 20_240_607;

#[derive(Parser, Debug)]
#[command(name = "polyboole", version, about = "Reduce finite-field systems and bounded integer programs to Boolean polynomial systems and solve them")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Command,
}

/// Options shared by every command.
#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Boolean solver backend
    #[arg(long, value_enum, global = true, default_value_t = BackendArg::Backtracking)]
    backend: BackendArg,
    /// Largest variable count the exhaustive backend accepts
    #[arg(long, global = true, default_value_t = 30)]
    var_limit: usize,
    /// Per-query time limit in seconds
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    /// Seed for fixture generation and the backend
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// External solver command; `{}` is replaced by the OPB path
    #[arg(long, global = true, allow_hyphen_values = true)]
    solver_cmd: Option<String>,
    /// Counter range rule for modular lifts
    #[arg(long, value_enum, global = true, default_value_t = LiftArg::CoeffSum)]
    lift_mode: LiftArg,
    /// Write the optimizer trace as JSON lines to this file
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Write the main output here instead of stdout
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Print results as JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exhaustive,
    Backtracking,
    External,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LiftArg {
    TermCount,
    CoeffSum,
    SignedRange,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Opb,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomial system JSON to a Boolean system (JSON or OPB)
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        /// Use centered representatives for 𝔽_p values
        #[arg(long)]
        centered: bool,
        /// Also write the OPB variable map here (with --emit opb)
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Solve a polynomial system over a finite ring and print the decoded values
    Solve {
        input: PathBuf,
        #[arg(long)]
        centered: bool,
    },
    /// Minimize a standard problem given as JSON
    Optimize { input: PathBuf },
    /// Fewest violated equations: system JSON, or {"p", "A", "b"} for a linear system
    Pswn { input: PathBuf },
    /// Short nonzero solution with ‖x‖² ≤ NORM_SQ: system JSON or {"p", "A"}
    Sis {
        input: PathBuf,
        #[arg(long)]
        norm_sq: String,
    },
    /// Smallest nonzero centered solution: system JSON or {"p", "A"}
    Minsol { input: PathBuf },
    /// Shortest nonzero vector of the lattice spanned by the matrix columns
    Svp {
        input: PathBuf,
        #[arg(long)]
        coeff_bound: Option<String>,
    },
    /// Closest lattice vector to a target
    Cvp {
        input: PathBuf,
        #[arg(long)]
        coeff_bound: Option<String>,
        /// Whitespace-separated target; overrides the file's target
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// min yᵀQy over Boolean y; input is the matrix Q
    Qubo { input: PathBuf },
    /// min c·y subject to A y ≤ h over Boolean y; input {"c", "A", "h"}
    Binlp { input: PathBuf },
    /// NTRU fixtures and key recovery
    Ntru {
        #[command(subcommand)]
        cmd: NtruCmd,
    },
}

#[derive(Subcommand, Debug)]
enum NtruCmd {
    /// Generate a keypair; writes {N, p, q, df, dg, h, f, g}
    Gen {
        #[arg(long = "n")]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        df: usize,
        #[arg(long)]
        dg: usize,
        /// Leave out the private key
        #[arg(long)]
        public_only: bool,
    },
    /// Build the key-recovery system from the public parameters
    Attack {
        input: PathBuf,
        /// Emit the system instead of solving it
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        /// Minimize d_f + d_g instead of fixing them
        #[arg(long)]
        min_weight: bool,
    },
    /// Check that the stored private key satisfies the attack system
    Check { input: PathBuf },
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn backend_config(a: &RunArgs) -> Result<BackendConfig> {
    let backend = match a.backend {
        BackendArg::Exhaustive => Backend::Exhaustive,
        BackendArg::Backtracking => Backend::Backtracking,
        BackendArg::External => Backend::External,
    };
    let command: Vec<String> = a.solver_cmd.as_deref().unwrap_or("").split_whitespace().map(String::from).collect();
    if backend == Backend::External && command.is_empty() {
        return Err(Error::Invalid("--backend external needs --solver-cmd".into()));
    }
    let time_limit = match a.time_limit {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(Error::Invalid(format!("bad time limit {t}"))),
        t => t.map(Duration::from_secs_f64),
    };
    Ok(BackendConfig { backend, var_limit: a.var_limit, time_limit, seed: a.seed, command, epsilon: None })
}

fn lift_mode(a: &RunArgs) -> LiftMode {
    match a.lift_mode {
        LiftArg::TermCount => LiftMode::TermCount,
        LiftArg::CoeffSum => LiftMode::CoeffSum,
        LiftArg::SignedRange => LiftMode::SignedRange,
    }
}

/// Everything printed goes through here so `--output` applies uniformly.
struct Sink<'a> {
    out: &'a mut dyn Write,
    file: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Sink<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        self.buf.extend_from_slice(s.as_ref().as_bytes());
        self.buf.push(b'\n');
    }

    fn raw(&mut self, s: &str) {
        self.buf.extend_from_slice(s.as_bytes());
    }

    fn flush(self) -> Result<()> {
        match self.file {
            Some(p) => std::fs::write(p, &self.buf)?,
            None => self.out.write_all(&self.buf)?,
        }
        Ok(())
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let a = &cli.run;
    let mut sink = Sink { out, file: a.output.clone(), buf: Vec::new() };
    let code = match &cli.cmd {
        Command::Reduce { input, emit, centered, sidecar } => {
            let sys = PolySystem::parse(&read_input(input)?)?;
            let repr = if *centered { Repr::Centered } else { Repr::Standard };
            let b = full_reduce(&sys, ReduceOptions { lift_mode: lift_mode(a), repr })?;
            match emit {
                Emit::Json => sink.raw(&(b.to_json_string() + "\n")),
                Emit::Opb => {
                    let mut text = Vec::new();
                    let side = export_opb(&b, &mut text)?;
                    sink.raw(&String::from_utf8(text).expect("ascii"));
                    if let Some(p) = sidecar {
                        std::fs::write(p, serde_json::to_string_pretty(&side)? + "\n")?;
                    }
                }
            }
            0
        }
        Command::Solve { input, centered } => {
            let sys = PolySystem::parse(&read_input(input)?)?;
            let repr = if *centered { Repr::Centered } else { Repr::Standard };
            let b = full_reduce(&sys, ReduceOptions { lift_mode: lift_mode(a), repr })?;
            match solve(&b, &backend_config(a)?)? {
                SolveOutcome::Sat(asg) => {
                    let sol = b.decode(&asg)?;
                    let vals = b.field_values(&sol);
                    check_root(&sys, &vals)?;
                    if a.json {
                        let m: std::collections::BTreeMap<_, _> = vals.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
                        sink.line(serde_json::to_string(&serde_json::json!({"status": "sat", "solution": m}))?);
                    } else {
                        sink.line("sat");
                        for (k, v) in &vals {
                            sink.line(format!("{k} = {v}"));
                        }
                    }
                    0
                }
                SolveOutcome::Unsat => {
                    sink.line("unsat");
                    20
                }
                SolveOutcome::Unknown(r) => {
                    sink.line(format!("unknown: {r}"));
                    30
                }
            }
        }
        Command::Optimize { input } => {
            let prob = StandardProblem::parse(&read_input(input)?)?;
            optimize(a, &prob, None, &mut sink)?
        }
        Command::Pswn { input } => {
            let text = read_input(input)?;
            let sys = match serde_json::from_str::<LinearJson>(&text) {
                Ok(l) if l.a.is_some() => {
                    let p = problems_int(&l.p)?;
                    let am = matrix_of(l.a.as_ref().unwrap())?;
                    let b = l.b.as_ref().ok_or_else(|| Error::Invalid("linear input needs \"b\"".into()))?;
                    lswn_system(&am, &b.iter().map(problems_int).collect::<Result<Vec<_>>>()?, &p)?
                }
                _ => PolySystem::parse(&text)?,
            };
            optimize(a, &pswn_build(&sys)?, None, &mut sink)?
        }
        Command::Sis { input, norm_sq } => {
            let sys = field_system(&read_input(input)?)?;
            let b = sis_build(&sys, &parse_int(norm_sq)?)?;
            feasibility(a, &b, &mut sink)?
        }
        Command::Minsol { input } => {
            let sys = field_system(&read_input(input)?)?;
            optimize(a, &smallest_solution_build(&sys)?, None, &mut sink)?
        }
        Command::Svp { input, coeff_bound } => {
            let mut l = LatticeInstance::parse(&read_input(input)?)?;
            if let Some(c) = coeff_bound {
                l = LatticeInstance::new(l.basis, l.target, Some(parse_int(c)?))?;
            }
            if l.full_rank() && !a.json {
                sink.line(format!("coefficient bound (closed form): {}", svp_coeff_bound(&l.basis)));
            }
            optimize(a, &svp_build(&l)?, None, &mut sink)?
        }
        Command::Cvp { input, coeff_bound, target } => {
            let l = LatticeInstance::parse(&read_input(input)?)?;
            let t = match target {
                Some(t) => Some(t.split_whitespace().map(parse_int).collect::<Result<Vec<_>>>()?),
                None => l.target.clone(),
            };
            let cb = coeff_bound.as_deref().map(parse_int).transpose()?.or(l.coeff_bound.clone());
            let l = LatticeInstance::new(l.basis, t, cb)?;
            optimize(a, &cvp_build(&l)?, None, &mut sink)?
        }
        Command::Qubo { input } => {
            let s = qubo_build(&parse_matrix(&read_input(input)?)?)?;
            optimize(a, &s.problem, Some(&s.shift), &mut sink)?
        }
        Command::Binlp { input } => {
            let j: BinlpJson = serde_json::from_str(&read_input(input)?)?;
            let c = j.c.iter().map(problems_int).collect::<Result<Vec<_>>>()?;
            let h = j.h.iter().map(problems_int).collect::<Result<Vec<_>>>()?;
            let s = binlp_build(&c, &matrix_of(&j.a)?, &h)?;
            optimize(a, &s.problem, Some(&s.shift), &mut sink)?
        }
        Command::Ntru { cmd } => ntru(a, cmd, &mut sink)?,
    };
    sink.flush()?;
    Ok(code)
}

#[derive(Deserialize)]
struct LinearJson {
    p: serde_json::Value,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<serde_json::Value>>>,
    b: Option<Vec<serde_json::Value>>,
}

#[derive(Deserialize)]
struct BinlpJson {
    c: Vec<serde_json::Value>,
    #[serde(rename = "A")]
    a: Vec<Vec<serde_json::Value>>,
    h: Vec<serde_json::Value>,
}

fn problems_int(v: &serde_json::Value) -> Result<BigInt> {
    problems::json_int(v)
}

fn matrix_of(rows: &[Vec<serde_json::Value>]) -> Result<problems::Matrix> {
    rows.iter().map(|r| r.iter().map(problems_int).collect()).collect()
}

/// A polynomial system JSON, or {"p", "A"} for A x = 0.
fn field_system(text: &str) -> Result<PolySystem> {
    match serde_json::from_str::<LinearJson>(text) {
        Ok(l) if l.a.is_some() => {
            let am = matrix_of(l.a.as_ref().unwrap())?;
            let n = am.first().map_or(0, |r| r.len());
            linear_system(&am, &problems_int(&l.p)?, n)
        }
        _ => PolySystem::parse(text),
    }
}

fn check_root(sys: &PolySystem, vals: &std::collections::BTreeMap<String, crate::algebra::Elem>) -> Result<()> {
    let by_id: Vec<crate::algebra::Elem> = sys.vars.iter().map(|n| vals[n].clone()).collect();
    let ring: &Ring = &sys.ring;
    for f in &sys.polys {
        let v = f.evaluate(|v| by_id[v as usize].clone())?;
        if !ring.is_zero(&v) {
            return Err(Error::NotAWitness("decoded point is not a root".into()));
        }
    }
    Ok(())
}

fn feasibility(a: &RunArgs, sys: &BooleanSystem, sink: &mut Sink) -> Result<i32> {
    let r = solve_feasibility(sys, &backend_config(a)?)?;
    match &r {
        Feasibility::Sat { values, .. } => {
            if a.json {
                let m: std::collections::BTreeMap<_, _> = values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
                sink.line(serde_json::to_string(&serde_json::json!({"status": "sat", "solution": m}))?);
            } else {
                sink.line("sat");
                for (k, v) in values {
                    sink.line(format!("{k} = {v}"));
                }
            }
        }
        Feasibility::Unsat => sink.line("unsat"),
        Feasibility::Unknown(why) => sink.line(format!("unknown: {why}")),
    }
    Ok(r.exit_code())
}

fn optimize(a: &RunArgs, prob: &StandardProblem, shift: Option<&BigInt>, sink: &mut Sink) -> Result<i32> {
    let r: OptResult = qfp_opt(prob, &backend_config(a)?)?;
    if let OptStatus::Optimal { values, .. } = &r.status {
        if !prob.feasible_at(values) {
            return Err(Error::NotAWitness("optimizer returned an infeasible point".into()));
        }
    }
    if let Some(p) = &a.trace {
        std::fs::write(p, r.trace_lines())?;
    }
    if a.json {
        sink.line(serde_json::to_string(&r.to_json())?);
        return Ok(r.exit_code());
    }
    match &r.status {
        OptStatus::Optimal { value, .. } => {
            sink.line("optimal");
            match shift {
                Some(s) => sink.line(format!("value = {} (shifted objective {value})", value - s)),
                None => sink.line(format!("value = {value}")),
            }
            for (k, v) in r.named() {
                sink.line(format!("{k} = {v}"));
            }
        }
        OptStatus::Infeasible => sink.line("infeasible"),
        OptStatus::Unknown { reason, alpha, mu } => sink.line(format!("unknown: {reason} (optimum in [{alpha}, {mu}))")),
    }
    sink.line(format!("iterations = {}", r.iterations()));
    Ok(r.exit_code())
}

fn ntru(a: &RunArgs, cmd: &NtruCmd, sink: &mut Sink) -> Result<i32> {
    match cmd {
        NtruCmd::Gen { n, p, q, df, dg, public_only } => {
            let prm = NtruParams::new(*n, *p, *q, *df, *dg)?;
            let key = ntru_keygen(&prm, &mut ChaCha20Rng::seed_from_u64(a.seed), 10_000)?;
            let prm = prm.with_h(key.h.clone())?;
            let mut j = prm.to_json();
            if !public_only {
                j.f = Some(key.f.clone());
                j.g = Some(key.g.clone());
            }
            sink.line(serde_json::to_string(&j)?);
            Ok(0)
        }
        NtruCmd::Attack { input, emit, min_weight } => {
            let prm = NtruParams::from_json(&serde_json::from_str(&read_input(input)?)?)?;
            if *min_weight {
                let prob = ntru_min_weight_system(&prm)?;
                return match emit {
                    Some(Emit::Json) => {
                        sink.line(prob.to_json_string());
                        Ok(0)
                    }
                    Some(Emit::Opb) => Err(Error::Invalid("--min-weight emits the problem as JSON only".into())),
                    None => optimize(a, &prob, None, sink),
                };
            }
            let atk = ntru_attack_system(&prm)?;
            match emit {
                Some(Emit::Json) => {
                    sink.raw(&(atk.system.to_json_string() + "\n"));
                    Ok(0)
                }
                Some(Emit::Opb) => {
                    sink.raw(&opb_string(&atk.system));
                    Ok(0)
                }
                None => match solve(&atk.system, &backend_config(a)?)? {
                    SolveOutcome::Sat(asg) => {
                        let (f, g) = atk.decode_key(&asg)?;
                        let ok = prm.recovers(&f)?;
                        sink.line("sat");
                        sink.line(format!("f = {f:?}"));
                        sink.line(format!("g = {g:?}"));
                        sink.line(format!("h*f in L_g: {ok}"));
                        Ok(0)
                    }
                    SolveOutcome::Unsat => {
                        sink.line("unsat");
                        Ok(20)
                    }
                    SolveOutcome::Unknown(r) => {
                        sink.line(format!("unknown: {r}"));
                        Ok(30)
                    }
                },
            }
        }
        NtruCmd::Check { input } => {
            let j: NtruParamsJson = serde_json::from_str(&read_input(input)?)?;
            let prm = NtruParams::from_json(&j)?;
            let (Some(f), Some(g)) = (j.f.clone(), j.g.clone()) else {
                return Err(Error::Invalid("the file holds no private key (f, g)".into()));
            };
            let key = NtruKey::from_parts(&prm, f, g)?;
            if prm.h.as_ref() != Some(&key.h) {
                sink.line("stored h does not match g/f");
                return Ok(20);
            }
            let atk = ntru_attack_system(&prm)?;
            let w = match atk.witness(&key) {
                Ok(w) => w,
                Err(Error::NotAWitness(why)) => {
                    sink.line(format!("key is outside the attack system: {why}"));
                    return Ok(20);
                }
                Err(e) => return Err(e),
            };
            let bad = crate::solver::evaluate(&atk.system, &w)?.iter().filter(|r| !num_traits::Zero::is_zero(*r)).count();
            if bad == 0 {
                sink.line("witness satisfies F_NTRU");
                Ok(0)
            } else {
                sink.line(format!("witness violates {bad} equations of F_NTRU"));
                Ok(20)
            }
        }
    }
}
