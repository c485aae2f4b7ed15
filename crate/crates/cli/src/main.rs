//! `faultpool` command-line driver.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification mismatch,
//! 3 search budget exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use faultpool::extensions::{self, Mode, TwoPoolParams};
use faultpool::oracle::{self, SearchBudget, DEFAULT_MAX_STATES};
use faultpool::solver::{self, PInstance};
use faultpool::{game, survival, Adversary, Error, ExactGameValue, GameParams, Schedule};

#[derive(Parser, Debug)]
#[command(name = "faultpool", version, about = "Worst-case survival of redundant processor schedules")]
struct Cli {
    /// Seed for commands that draw random instances; always echoed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format for single-result commands. Sweeps always emit CSV.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    /// Pool size N.
    #[arg(long = "N")]
    pool: usize,
    /// Processors in operation n.
    #[arg(long = "n")]
    set_size: usize,
    /// Tolerated faults f.
    #[arg(long = "f")]
    faults: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<GameParams, Failure> {
        Ok(GameParams::new(self.pool, self.set_size, self.faults)?)
    }
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct InstanceSource {
    /// Schedule JSON file.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// P-instance JSON file (as written by `reduce`).
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate h_{n,f}(k).
    HEval {
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "f")]
        f: usize,
        #[arg(long = "k")]
        k: usize,
    },
    /// Optimum survival time h_{n,f}(N) and the a priori bound N - n + f + 1.
    Opt(ParamArgs),
    /// Write the optimal batch schedule as JSON.
    GenTrivial {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Survival time of a schedule against a given adversary.
    Eval {
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        adversary: PathBuf,
    },
    /// Minimal survival time and a minimal adversary for a schedule.
    SolveAdversary {
        #[arg(long)]
        schedule: PathBuf,
        /// Where to write the adversary JSON; printed to stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check membership in P (degree n, every time graph matching below f).
    CheckP(InstanceSource),
    /// Apply one reduction step to a P-member and check its invariants.
    Reduce {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force T_opt against h_{n,f}(N) on every (N, n, f) with N <= max-N.
    VerifyTheorem {
        #[arg(long = "max-N")]
        max_pool: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        budget: u64,
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Lower bound for two disjoint pools of processor types.
    TwoPool {
        #[arg(long = "N1")]
        pool1: usize,
        #[arg(long = "N2")]
        pool2: usize,
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "g1")]
        g1: usize,
        #[arg(long = "g2")]
        g2: usize,
        /// Also compute the exact optimum by brute force (tiny pools only).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        budget: u64,
    },
    /// Value of the game against an on-line adversary.
    OnlineValue {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// CSV sweeps: h table, batch-schedule check, or random schedules.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepKind::H)]
        kind: SweepKind,
        #[arg(long = "n")]
        n: Option<usize>,
        #[arg(long = "f")]
        f: Option<usize>,
        #[arg(long = "k-max", default_value_t = 30)]
        k_max: usize,
        #[arg(long = "max-N", default_value_t = 12)]
        max_pool: usize,
        #[arg(long = "max-n", default_value_t = 4)]
        max_set: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Deterministic,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// k,h for k = 0..=k-max.
    H,
    /// Minimal survival of the batch schedule against h over a grid.
    Trivial,
    /// Matching solver against brute force on random schedules.
    Random,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

/// What a command printed and the exit code it asks for.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn render(format: Format, plain: String, value: serde_json::Value) -> String {
    match format {
        Format::Json => value.to_string(),
        Format::Plain | Format::Csv => plain,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        invalid(format!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string(value).map_err(|e| invalid(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_instance(src: &InstanceSource) -> Result<PInstance, Failure> {
    match (&src.schedule, &src.instance) {
        (Some(path), _) => Ok(PInstance::from_schedule(&read_json::<Schedule>(path)?)),
        (None, Some(path)) => read_json(path),
        (None, None) => Err(invalid("one of --schedule or --instance is required")),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::HEval { n, f, k } => {
            let h = survival::h_eval(*n, *f, *k)?;
            Ok(Outcome::ok(render(fmt, h.to_string(), json!({"n": n, "f": f, "k": k, "h": h}))))
        }
        Command::Opt(args) => {
            let p = args.params()?;
            let t_opt = survival::optimum_survival_time(&p);
            let bound = survival::apriori_upper_bound(&p);
            Ok(Outcome::ok(render(
                fmt,
                format!("{t_opt}\napriori_bound={bound}"),
                json!({"T_opt": t_opt, "apriori_bound": bound}),
            )))
        }
        Command::GenTrivial { params, out } => {
            let p = params.params()?;
            let s = game::trivial_schedule(&p);
            write_json(out, &s)?;
            let len = survival::optimum_survival_time(&p);
            Ok(Outcome::ok(render(fmt, len.to_string(), json!({"meaningful_length": len}))))
        }
        Command::Eval { schedule, adversary } => {
            let s: Schedule = read_json(schedule)?;
            let a: Adversary = read_json(adversary)?;
            let t = game::survival_time(&s, &a)?;
            Ok(Outcome::ok(render(fmt, t.to_string(), json!({"T": t}))))
        }
        Command::SolveAdversary { schedule, out } => {
            let s: Schedule = read_json(schedule)?;
            let report = solver::solve(&s);
            let fatal = report.fatal_time.map_or("none".to_string(), |t| t.to_string());
            let mut plain = format!("T={}\nt*={fatal}", report.survival);
            match out {
                Some(path) => write_json(path, &report.adversary)?,
                None => {
                    let _ = write!(plain, "\n{}", serde_json::to_string(&report.adversary).unwrap());
                }
            }
            Ok(Outcome::ok(render(
                fmt,
                plain,
                json!({"T": report.survival, "t_star": report.fatal_time, "adversary": report.adversary}),
            )))
        }
        Command::CheckP(src) => {
            let inst = load_instance(src)?;
            let (l, r) = (inst.left_size(), inst.right_size());
            match solver::membership_in_p(&inst) {
                Ok(()) => Ok(Outcome::ok(render(
                    fmt,
                    format!("ok L={l} R={r}"),
                    json!({"member": true, "L": l, "R": r}),
                ))),
                Err(v) => Ok(Outcome {
                    text: render(
                        fmt,
                        format!("violation at t={}: {v}", v.index()),
                        json!({"member": false, "violating_t": v.index(), "reason": v.to_string()}),
                    ),
                    code: 2,
                }),
            }
        }
        Command::Reduce { source, out } => {
            let inst = load_instance(source)?;
            let red = solver::reduce_instance(&inst)?;
            let after = &red.instance;
            let member = solver::membership_in_p(after).is_ok();
            let h_ok = solver::reduction_respects_h(&inst, after);
            let h = |k| survival::HArgs { n: inst.set_size(), f: inst.faults(), k }.eval();
            if let Some(path) = out {
                write_json(path, after)?;
            }
            let plain = format!(
                "L={} R={} -> L'={} R'={}\nC={:?}\nremoved_left={:?}\nh(R)={} h(R')={}\nmember={member} h_inequality={h_ok}",
                inst.left_size(),
                inst.right_size(),
                after.left_size(),
                after.right_size(),
                red.witness,
                red.removed_left,
                h(inst.right_size()),
                h(after.right_size()),
            );
            let value = json!({
                "L": inst.left_size(), "R": inst.right_size(),
                "L_prime": after.left_size(), "R_prime": after.right_size(),
                "C": red.witness, "removed_left": red.removed_left,
                "member": member, "h_inequality": h_ok,
                "instance": after,
            });
            Ok(Outcome {
                text: render(fmt, plain, value),
                code: if member && h_ok { 0 } else { 2 },
            })
        }
        Command::VerifyTheorem {
            max_pool,
            budget,
            no_symmetry,
        } => {
            let budget = SearchBudget::new(*budget, !no_symmetry)?;
            Ok(verify_theorem(*max_pool, &budget))
        }
        Command::TwoPool {
            pool1,
            pool2,
            n,
            g1,
            g2,
            exact,
            budget,
        } => {
            let tp = TwoPoolParams::new(*pool1, *pool2, *n, *g1, *g2)?;
            let bound = extensions::two_pool_lower_bound(&tp);
            let split = bound
                .split
                .map_or("none".to_string(), |(a, b)| format!("({a},{b})"));
            let mut plain = format!("bound={} split={split}", bound.value);
            let mut value = json!({"bound": bound.value, "split": bound.split});
            if *exact {
                let budget = SearchBudget::new(*budget, false)?;
                let t = extensions::two_pool_brute_optimum(&tp, &budget)?;
                let _ = write!(plain, "\nexact={t}");
                value["exact"] = json!(t);
            }
            Ok(Outcome::ok(render(fmt, plain, value)))
        }
        Command::OnlineValue { params, mode } => {
            let p = params.params()?;
            let mode = match mode {
                ModeArg::Deterministic => Mode::Deterministic,
                ModeArg::Randomized => Mode::Randomized,
            };
            let v: ExactGameValue = extensions::online_game_value(&p, mode)?;
            let mut plain = format!("value={}", v.value);
            for (s, prob) in &v.support {
                let _ = write!(plain, "\n{prob} {:?}", s.sets());
            }
            let support: Vec<_> = v
                .support
                .iter()
                .map(|(s, prob)| json!({"probability": prob.to_string(), "schedule": s}))
                .collect();
            Ok(Outcome::ok(render(
                fmt,
                plain,
                json!({"value": v.value.to_string(), "mode": v.mode, "support": support}),
            )))
        }
        Command::Sweep {
            kind,
            n,
            f,
            k_max,
            max_pool,
            max_set,
            count,
        } => match kind {
            SweepKind::H => {
                let (n, f) = n.zip(*f).ok_or_else(|| invalid("--kind h needs --n and --f"))?;
                survival::h_eval(n, f, 0)?;
                let mut csv = String::from("k,h\n");
                for k in 0..=*k_max {
                    let _ = writeln!(csv, "{k},{}", survival::h_eval(n, f, k)?);
                }
                Ok(Outcome::ok(csv.trim_end().to_string()))
            }
            SweepKind::Trivial => Ok(sweep_trivial(*max_pool, *max_set)),
            SweepKind::Random => sweep_random(*max_pool, *max_set, *count, cli.seed),
        },
    }
}

fn verify_theorem(max_pool: usize, budget: &SearchBudget) -> Outcome {
    let mut csv = String::from("N,n,f,h,brute_T_opt,match\n");
    let (mut mismatch, mut skipped) = (false, false);
    for pool in 2..=max_pool {
        for n in 2..=pool {
            for f in 1..n {
                let p = GameParams::new(pool, n, f).expect("grid respects bounds");
                let h = survival::optimum_survival_time(&p);
                let (brute, verdict) = match oracle::brute_optimum(&p, budget) {
                    Ok(b) if b == h => (b.to_string(), "true"),
                    Ok(b) => {
                        mismatch = true;
                        (b.to_string(), "false")
                    }
                    Err(_) => {
                        skipped = true;
                        (String::new(), "skipped")
                    }
                };
                let _ = writeln!(csv, "{pool},{n},{f},{h},{brute},{verdict}");
            }
        }
    }
    let code = if mismatch {
        2
    } else if skipped {
        3
    } else {
        0
    };
    Outcome {
        text: csv.trim_end().to_string(),
        code,
    }
}

fn sweep_trivial(max_pool: usize, max_set: usize) -> Outcome {
    let mut csv = String::from("N,n,f,h,T_trivial,match\n");
    let mut mismatch = false;
    for pool in 2..=max_pool {
        for n in 2..=pool.min(max_set) {
            for f in 1..n {
                let p = GameParams::new(pool, n, f).expect("grid respects bounds");
                let h = survival::optimum_survival_time(&p);
                let t = solver::minimal_survival_time(&game::trivial_schedule(&p));
                mismatch |= t != h;
                let _ = writeln!(csv, "{pool},{n},{f},{h},{t},{}", t == h);
            }
        }
    }
    Outcome {
        text: csv.trim_end().to_string(),
        code: if mismatch { 2 } else { 0 },
    }
}

fn sweep_random(max_pool: usize, max_set: usize, count: usize, seed: u64) -> Result<Outcome, Failure> {
    if max_pool < 2 || max_set < 2 {
        return Err(invalid("random sweep needs --max-N >= 2 and --max-n >= 2"));
    }
    let mut csv = String::from("index,N,n,f,length,T_matching,T_brute,match\n");
    let mut mismatch = false;
    let mut rng = StdRng::seed_from_u64(seed);
    for index in 0..count {
        let pool = rng.gen_range(2..=max_pool);
        let n = rng.gen_range(2..=pool.min(max_set));
        let f = rng.gen_range(1..n);
        let length = rng.gen_range(1..=pool);
        let p = GameParams::new(pool, n, f)?;
        let s = oracle::random_schedule_from(&p, length, &mut rng)?;
        let t = solver::minimal_survival_time(&s);
        let brute = oracle::brute_adversary_min(&s)?;
        mismatch |= t != brute;
        let _ = writeln!(csv, "{index},{pool},{n},{f},{length},{t},{brute},{}", t == brute);
    }
    Ok(Outcome {
        text: csv.trim_end().to_string(),
        code: if mismatch { 2 } else { 0 },
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    eprintln!("seed={}", cli.seed);
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.text);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
