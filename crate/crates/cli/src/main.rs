//! `dtlab` — command-line front end: field inspection, character-sum and
//! Stepanov verification, exact tuple maxima and sweeps, decomposition
//! search, sieve-constant tables, and golden-table comparison.
//!
//! Exit codes: 0 success, 1 usage error, 2 a falsified bound or identity.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use dtlab_core::field::FieldCtx;
use dtlab_core::{charsum, decomp, golden, inttuple, report, sieve, stepanov, tuples};
use dtlab_core::{DtError, FieldElement};
use rand::{Rng, SeedableRng};
use std::io::Write;
use std::path::PathBuf;

const EXIT_USAGE: i32 = 1;
const EXIT_VIOLATION: i32 = 2;

#[derive(Parser)]
#[command(name = "dtlab", version, about = "Diophantine-tuple workbench", disable_help_subcommand = true)]
struct Cli {
    #[command(flatten)]
    run: RunOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Seed for randomized audits (reproducible runs).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (DTLAB_THREADS env as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value config file supplying defaults for seed/threads/out/tolerances.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Absolute tolerance override for exact identities.
    #[arg(long, global = true)]
    tol_exact: Option<f64>,
    /// Relative tolerance override for magnitude claims.
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
}

#[derive(Clone)]
struct RunConfig {
    seed: u64,
    out: Option<PathBuf>,
    tol_exact: f64,
    tol_rel: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical construction data of F_{p^r}.
    FieldInfo {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Run the character-sum identity and bound checks over F_q.
    CharsumVerify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Build and verify an auxiliary-polynomial certificate (JSON).
    StepanovVerify {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        lambda: u64,
        /// Element-index list, comma separated; pass twice for A then B.
        #[arg(long = "set", action = clap::ArgAction::Append, required = true)]
        sets: Vec<String>,
        /// auto | product | restricted
        #[arg(long, default_value = "auto")]
        variant: String,
    },
    /// Exact MD/MSD value with bound rows (CSV).
    TupleMax {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        strong: bool,
    },
    /// Bound sweep over all prime powers q ≤ q-max (CSV).
    TupleSweep {
        #[arg(long)]
        q_max: u64,
    },
    /// Complete multiplicative-decomposition search (JSON).
    Decompose {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        ternary: bool,
    },
    /// Sieve constants table (CSV: k,phi_k,eta_k,mu_k,nu_k,m_k,three_phi_k).
    SieveTable {
        #[arg(long, default_value_t = 2)]
        k_min: u64,
        #[arg(long)]
        k_max: u64,
    },
    /// Figure data: same schema, k = 2..k-max.
    FigureData {
        #[arg(long, default_value_t = 1000)]
        k_max: u64,
    },
    /// Print η_k, μ_k, ν_k at four decimals.
    Eta {
        #[arg(long)]
        k: u64,
    },
    /// Evaluate the larger-sieve bound for an integer set.
    Gallagher {
        /// File with one integer per line.
        #[arg(long)]
        set: PathBuf,
        /// a,k — use primes ≡ a (mod k); omit for all primes.
        #[arg(long)]
        primes_mod: Option<String>,
        #[arg(long)]
        q: u64,
        /// Ceiling N (defaults to max of the set).
        #[arg(long)]
        n: Option<u64>,
    },
    /// Integer-side tuple search (JSON).
    IntTuple {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        n_max: u64,
        #[arg(long)]
        strong: bool,
    },
    /// Compare recomputed tables against the transcribed golden data.
    GoldenCheck {
        /// appendix | table1..table6
        #[arg(long)]
        table: String,
        #[arg(long)]
        k_max: Option<u64>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let config = match build_config(&cli.run) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_USAGE);
        }
    };

    if let Some(threads) = resolve_threads(&cli.run) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    match run(cli.command, &config) {
        Ok(Outcome::Clean) => {}
        Ok(Outcome::Violation) => std::process::exit(EXIT_VIOLATION),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_USAGE);
        }
    }
}

enum Outcome {
    Clean,
    Violation,
}

fn build_config(opts: &RunOpts) -> Result<RunConfig, String> {
    let mut seed = dtlab_core::DEFAULT_SEED;
    let mut out = opts.out.clone();
    let mut tol_exact = dtlab_core::TOL_EXACT_IDENTITY;
    let mut tol_rel = dtlab_core::TOL_MAGNITUDE_REL;
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            let parse_err = |e| format!("{}:{}: {e}", path.display(), lineno + 1);
            match key.trim() {
                "seed" => seed = value.trim().parse().map_err(|e| parse_err(format!("{e}")))?,
                "out" => out = Some(PathBuf::from(value.trim())),
                "tol_exact" => {
                    tol_exact = value.trim().parse().map_err(|e| parse_err(format!("{e}")))?
                }
                "tol_rel" => {
                    tol_rel = value.trim().parse().map_err(|e| parse_err(format!("{e}")))?
                }
                "threads" => { /* consumed by resolve_threads */ }
                other => return Err(format!("unknown config key: {other}")),
            }
        }
    }
    if let Some(s) = opts.seed {
        seed = s;
    }
    if opts.out.is_some() {
        out = opts.out.clone();
    }
    if let Some(t) = opts.tol_exact {
        tol_exact = t;
    }
    if let Some(t) = opts.tol_rel {
        tol_rel = t;
    }
    Ok(RunConfig {
        seed,
        out,
        tol_exact,
        tol_rel,
    })
}

fn resolve_threads(opts: &RunOpts) -> Option<usize> {
    if let Some(t) = opts.threads {
        return Some(t);
    }
    if let Ok(v) = std::env::var("DTLAB_THREADS") {
        return v.parse().ok();
    }
    if let Some(path) = &opts.config {
        if let Ok(text) = std::fs::read_to_string(path) {
            for line in text.lines() {
                if let Some((k, v)) = line.split_once('=') {
                    if k.trim() == "threads" {
                        return v.trim().parse().ok();
                    }
                }
            }
        }
    }
    None
}

fn emit(config: &RunConfig, content: &str) -> dtlab_core::Result<()> {
    match &config.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(content.as_bytes())?;
        }
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
        }
    }
    Ok(())
}

fn parse_set(ctx: &FieldCtx, spec: &str) -> dtlab_core::Result<Vec<FieldElement>> {
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|e| DtError::BadSet(format!("{tok:?}: {e}")))
                .and_then(|idx| ctx.element(idx))
        })
        .collect()
}

fn run(command: Command, config: &RunConfig) -> dtlab_core::Result<Outcome> {
    match command {
        Command::FieldInfo { p, r } => {
            let ctx = FieldCtx::new(p, r)?;
            let modulus = ctx
                .modulus
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let text = format!(
                "p={}\nr={}\nq={}\nmodulus={}\ngenerator={}\n",
                ctx.p,
                ctx.r,
                ctx.q,
                modulus,
                ctx.generator.idx()
            );
            emit(config, &text)?;
            Ok(Outcome::Clean)
        }
        Command::CharsumVerify { q, d, trials } => charsum_verify(config, q, d, trials),
        Command::StepanovVerify {
            p,
            r,
            d,
            lambda,
            sets,
            variant,
        } => {
            let ctx = FieldCtx::new(p, r)?;
            let a = parse_set(&ctx, &sets[0])?;
            let b = if sets.len() > 1 {
                parse_set(&ctx, &sets[1])?
            } else {
                a.clone()
            };
            let lambda = ctx.element(lambda)?;
            let cert = match variant.as_str() {
                "auto" => stepanov::verify_stepanov(&ctx, &a, &b, lambda, d)?,
                "product" => stepanov::verify_stepanov(&ctx, &a, &b, lambda, d)?,
                "restricted" => stepanov::verify_restricted(&ctx, &a, lambda, d)?,
                other => {
                    return Err(DtError::Domain(format!("unknown variant: {other}")));
                }
            };
            let json = serde_json::to_string_pretty(&cert).expect("serialize");
            emit(config, &format!("{json}\n"))?;
            Ok(if cert.bound_holds {
                Outcome::Clean
            } else {
                Outcome::Violation
            })
        }
        Command::TupleMax {
            p,
            r,
            d,
            lambda,
            strong,
        } => {
            let ctx = FieldCtx::new(p, r)?;
            let lambda = ctx.element(lambda)?;
            let rep = if strong {
                tuples::msd(&ctx, d, lambda)?
            } else {
                tuples::md(&ctx, d, lambda)?
            };
            let rows = bound_report_rows(&ctx, &rep);
            emit(config, &report::csv_to_string(SWEEP_HEADER, &rows))?;
            Ok(if rep.all_hold() {
                Outcome::Clean
            } else {
                Outcome::Violation
            })
        }
        Command::TupleSweep { q_max } => {
            let rows = tuples::sweep(q_max)?;
            let table: Vec<Vec<String>> = rows.iter().map(sweep_row_fields).collect();
            emit(config, &report::csv_to_string(SWEEP_HEADER, &table))?;
            Ok(if rows.iter().all(|r| r.holds) {
                Outcome::Clean
            } else {
                Outcome::Violation
            })
        }
        Command::Decompose {
            p,
            r,
            d,
            lambda,
            ternary,
        } => {
            let ctx = FieldCtx::new(p, r)?;
            let lambda = ctx.element(lambda)?;
            let target = decomp::build_target(&ctx, d, lambda)?;
            let binary = decomp::find_binary(&target);
            let ternary_result = if ternary {
                Some(decomp::find_ternary(&target)?)
            } else {
                None
            };
            #[derive(serde::Serialize)]
            struct Output {
                q: u64,
                d: u64,
                lambda: u64,
                target_size: usize,
                contains_zero_shift: bool,
                binary: decomp::DecompositionResult,
                #[serde(skip_serializing_if = "Option::is_none")]
                ternary: Option<decomp::TernaryResult>,
            }
            let out = Output {
                q: ctx.q,
                d,
                lambda: lambda.idx(),
                target_size: target.len(),
                contains_zero_shift: target.contains_zero_shift,
                binary,
                ternary: ternary_result,
            };
            let json = serde_json::to_string_pretty(&out).expect("serialize");
            emit(config, &format!("{json}\n"))?;
            Ok(Outcome::Clean)
        }
        Command::SieveTable { k_min, k_max } => {
            let rows = sieve::table_rows(k_min, k_max)?;
            emit(config, &report::csv_to_string(TABLE_HEADER, &table_fields(&rows)))?;
            Ok(Outcome::Clean)
        }
        Command::FigureData { k_max } => {
            let rows = sieve::table_rows(2, k_max)?;
            emit(config, &report::csv_to_string(TABLE_HEADER, &table_fields(&rows)))?;
            Ok(Outcome::Clean)
        }
        Command::Eta { k } => {
            let rec = sieve::eta_k(k)?;
            let text = format!(
                "k={}\neta={}\nmu={}\nnu={}\n",
                k,
                report::format_4dp(rec.eta),
                report::format_4dp(rec.mu),
                report::format_4dp(rec.nu)
            );
            emit(config, &text)?;
            Ok(Outcome::Clean)
        }
        Command::Gallagher {
            set,
            primes_mod,
            q,
            n,
        } => {
            let text = std::fs::read_to_string(&set)?;
            let a: Vec<u64> = text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|e| DtError::BadSet(format!("{tok:?}: {e}")))
                })
                .collect::<dtlab_core::Result<_>>()?;
            let n_ceiling = n.unwrap_or_else(|| a.iter().copied().max().unwrap_or(1));
            let primes: Vec<u64> = match primes_mod {
                Some(spec) => {
                    let (a_str, k_str) = spec
                        .split_once(',')
                        .ok_or_else(|| DtError::BadSet("expected a,k".into()))?;
                    let (am, km): (u64, u64) = (
                        a_str.trim().parse().map_err(|_| DtError::BadSet(spec.clone()))?,
                        k_str.trim().parse().map_err(|_| DtError::BadSet(spec.clone()))?,
                    );
                    tuples::primes_up_to(q)
                        .into_iter()
                        .filter(|&p| p % km == am % km)
                        .collect()
                }
                None => tuples::primes_up_to(q),
            };
            let g = sieve::gallagher_bound(&a, &primes, q, n_ceiling)?;
            let json = serde_json::to_string_pretty(&g).expect("serialize");
            emit(config, &format!("{json}\n"))?;
            Ok(if g.holds {
                Outcome::Clean
            } else {
                Outcome::Violation
            })
        }
        Command::IntTuple { k, n, n_max, strong } => {
            let query = inttuple::IntegerTupleQuery {
                k,
                n,
                n_max,
                strong,
            };
            let res = inttuple::search_max_tuple(&query)?;
            let json = serde_json::to_string_pretty(&res).expect("serialize");
            emit(config, &format!("{json}\n"))?;
            Ok(Outcome::Clean)
        }
        Command::GoldenCheck { table, k_max } => {
            let rep = golden::golden_check(&table, k_max)?;
            let json = serde_json::to_string_pretty(&rep).expect("serialize");
            emit(config, &format!("{json}\n"))?;
            Ok(if rep.passed() {
                Outcome::Clean
            } else {
                Outcome::Violation
            })
        }
    }
}

const SWEEP_HEADER: &[&str] = &[
    "q",
    "p",
    "r",
    "d",
    "lambda_idx",
    "strong",
    "value",
    "witness",
    "bound_name",
    "bound_value",
    "holds",
    "exact_expected",
    "exact_matched",
];

fn sweep_row_fields(row: &tuples::SweepRow) -> Vec<String> {
    vec![
        row.q.to_string(),
        row.p.to_string(),
        row.r.to_string(),
        row.d.to_string(),
        row.lambda_idx.to_string(),
        row.strong.to_string(),
        row.value.to_string(),
        row.witness
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join("|"),
        row.bound_name.clone(),
        format!("{:.6}", row.bound_value),
        row.holds.to_string(),
        row.exact_expected.map_or(String::new(), |v| v.to_string()),
        row.exact_matched.map_or(String::new(), |v| v.to_string()),
    ]
}

fn bound_report_rows(ctx: &FieldCtx, rep: &tuples::BoundReport) -> Vec<Vec<String>> {
    rep.bounds
        .iter()
        .filter(|b| b.applicable)
        .map(|b| {
            sweep_row_fields(&tuples::SweepRow {
                q: ctx.q,
                p: ctx.p,
                r: ctx.r,
                d: rep.d,
                lambda_idx: rep.lambda,
                strong: rep.strong,
                value: rep.value,
                witness: rep.witness.clone(),
                bound_name: b.name.to_string(),
                bound_value: b.value,
                holds: b.holds,
                exact_expected: rep.exact_expected,
                exact_matched: rep.exact_matched,
            })
        })
        .collect()
}

const TABLE_HEADER: &[&str] = &[
    "k",
    "phi_k",
    "eta_k",
    "mu_k",
    "nu_k",
    "m_k",
    "three_phi_k",
];

fn table_fields(rows: &[sieve::TableRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.phi_k.to_string(),
                report::format_4dp(r.eta_k),
                report::format_4dp(r.mu_k),
                report::format_4dp(r.nu_k),
                report::format_4dp(r.m_k),
                r.three_phi_k.to_string(),
            ]
        })
        .collect()
}

/// One CSV row per executed check: check_name,q,d,lhs,rhs,bound,holds.
fn charsum_verify(config: &RunConfig, q: u64, d: u64, trials: usize) -> dtlab_core::Result<Outcome> {
    let (p, r) = tuples::prime_power(q)
        .ok_or_else(|| DtError::Domain(format!("q = {q} is not a prime power")))?;
    let ctx = FieldCtx::new(p, r)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut all_hold = true;
    let mut push = |name: String, lhs: f64, rhs: f64, bound: f64, holds: bool, ok: &mut bool| {
        *ok &= holds;
        rows.push(vec![
            name,
            q.to_string(),
            d.to_string(),
            format!("{lhs:.9}"),
            format!("{rhs:.9}"),
            format!("{bound:.9}"),
            holds.to_string(),
        ]);
    };

    let random_subset = |rng: &mut rand_chacha::ChaCha8Rng, max_len: usize| {
        let mut pool: Vec<FieldElement> = ctx.nonzero_elements().collect();
        let len = rng.gen_range(1..=max_len.min(pool.len()));
        for i in 0..len {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(len);
        pool
    };

    for chi in charsum::Character::all_of_order(&ctx, d)? {
        let tag = format!("[m={}]", chi.twist);
        if !chi.is_trivial() {
            let g = chi.gauss_sum().norm();
            let target = (q as f64).sqrt();
            push(
                format!("gauss_magnitude{tag}"),
                g,
                target,
                config.tol_rel * target,
                (g - target).abs() <= config.tol_rel * target,
                &mut all_hold,
            );

            let mut max_err: f64 = 0.0;
            for a in ctx.elements() {
                max_err = max_err.max(charsum::char_inversion_error(&chi, a));
            }
            push(
                format!("char_inversion{tag}"),
                max_err,
                0.0,
                config.tol_rel,
                max_err <= config.tol_rel,
                &mut all_hold,
            );
        }

        for t in 0..trials {
            let a_set = random_subset(&mut rng, 10);
            let tw = charsum::twist_identity(&chi, &a_set)?;
            push(
                format!("twist_identity{tag}[{t}]"),
                tw.lhs,
                tw.rhs,
                config.tol_exact,
                tw.abs_error <= config.tol_exact,
                &mut all_hold,
            );

            if !chi.is_trivial() {
                let b_set = random_subset(&mut rng, 10);
                let lambda = FieldElement(rng.gen_range(1..q) as u32);
                let sb = charsum::symmetric_bound(&chi, &a_set, &b_set, lambda)?;
                push(
                    format!("symmetric_bound{tag}[{t}]"),
                    sb.sum_abs,
                    sb.bound,
                    config.tol_exact,
                    sb.sum_abs <= sb.bound + config.tol_exact,
                    &mut all_hold,
                );

                let k_len = rng.gen_range(1..=3usize);
                let mut shifts: Vec<FieldElement> = ctx.elements().collect();
                for i in 0..k_len {
                    let j = rng.gen_range(i..shifts.len());
                    shifts.swap(i, j);
                }
                shifts.truncate(k_len);
                let eps: Vec<u64> = (0..k_len).map(|_| rng.gen_range(0..d)).collect();
                let cs = charsum::counting_solutions(&chi, &shifts, &eps)?;
                push(
                    format!("counting_solutions{tag}[{t}]"),
                    cs.deviation,
                    q as f64 / (d as f64).powi(k_len as i32),
                    cs.bound,
                    cs.holds,
                    &mut all_hold,
                );
            }
        }
    }

    let header = ["check_name", "q", "d", "lhs", "rhs", "bound", "holds"];
    emit(config, &report::csv_to_string(&header, &rows))?;
    Ok(if all_hold {
        Outcome::Clean
    } else {
        Outcome::Violation
    })
}
