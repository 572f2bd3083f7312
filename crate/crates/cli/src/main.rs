//! `dihedral-forge`: decompositions, dihedral codes, duality audits and
//! random-code experiments from the command line.
//!
//! Exit status: 0 on success, 1 for bad input, 2 when an internal invariant
//! or a duality audit fails.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dihedral_forge::cyclic::primitive_idempotents;
use dihedral_forge::dihedral::{right_translate_code, sample_unit, BlockCase, DecompositionCache};
use dihedral_forge::ensemble::{
    audit_duality, base_code, run_ensemble_with, trend_experiment, trend_to_csv, CodeKind,
    EnsembleConfig,
};
use dihedral_forge::gf::{make_field, parse_order, FieldSpec};
use dihedral_forge::lincode::{
    duality_flags, min_weight, read_generator, write_generator, MinWeight, DEFAULT_BUDGET,
};
use dihedral_forge::ntheory::{self, AdmissibleKind};
use dihedral_forge::{selftest, Error, Result};

#[derive(Parser)]
#[command(
    name = "dihedral-forge",
    version,
    about = "Dihedral group codes over finite fields"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Odd length n of the rotation subgroup; codes have length 2n.
    #[arg(long)]
    n: u64,
    /// Field order, as `q` or `p^e`.
    #[arg(long)]
    q: String,
}

#[derive(Subcommand)]
enum Command {
    /// Primitive idempotents of F[X]/(X^n - 1).
    Idempotents {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
    /// Block decomposition of the dihedral group algebra.
    Decompose {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
    /// Write the generator matrix of C beta or hat C beta.
    BuildCode {
        #[command(flatten)]
        field: FieldArgs,
        /// `C` or `hatC`.
        #[arg(long)]
        kind: CodeKind,
        /// Seed for the unit beta.
        #[arg(long)]
        beta_seed: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum weight of a code read from a generator-matrix file.
    MinWeight {
        #[arg(long = "in")]
        input: PathBuf,
        /// Exhaustive search only up to this many codewords.
        #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Duality flags of a code file, or a seeded audit of translates.
    AuditDuality {
        /// Generator-matrix file; if given, only its flags are printed.
        #[arg(long = "in", conflicts_with_all = ["n", "q", "kind", "trials", "seed"])]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        kind: Option<CodeKind>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo ensemble of translates with weights and audits.
    Ensemble {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        kind: CodeKind,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
        budget: u64,
        /// Per-trial CSV output file.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Ensembles over a sequence of admissible lengths.
    Trend {
        #[arg(long)]
        q: String,
        #[arg(long)]
        kind: CodeKind,
        /// `ord-odd` or `minus-one`.
        #[arg(long, default_value = "ord-odd")]
        family: AdmissibleKind,
        #[arg(long)]
        delta: f64,
        /// Number of lengths.
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
        budget: u64,
        #[arg(long, default_value_t = ntheory::DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
        /// CSV output file (default: stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Prime counts by order of q, over primes up to t.
    Sieve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form bounds on Pr(Delta <= delta).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Prime lengths for which the duality theorems apply.
    Admissible {
        /// `ord-odd` or `minus-one`.
        #[arg(long)]
        kind: AdmissibleKind,
        #[arg(long)]
        q: String,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = ntheory::DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suites.
    Selftest {
        /// Run only these suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

struct Ctx {
    cache: DecompositionCache,
}

fn field_of(q: &str) -> Result<Arc<FieldSpec>> {
    let (p, e) = parse_order(q)?;
    make_field(p, e)
}

fn q_value(q: &str) -> Result<u64> {
    let (p, e) = parse_order(q)?;
    p.checked_pow(e)
        .ok_or_else(|| Error::DomainError(format!("q = {q} is too large")))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct IdempotentRow {
    index: usize,
    coset: Vec<usize>,
    factor: Vec<String>,
    idempotent: Vec<String>,
    bar: usize,
    dim: usize,
}

fn idempotents(field: &FieldArgs, json: bool) -> Result<()> {
    let f = field_of(&field.q)?;
    let dec = primitive_idempotents(field.n, &f)?;
    let fmt = |xs: &[u32]| xs.iter().map(|&c| f.format(c)).collect::<Vec<_>>();
    let rows: Vec<IdempotentRow> = (0..dec.len())
        .map(|j| IdempotentRow {
            index: j,
            coset: dec.cosets[j].clone(),
            factor: fmt(dec.factors[j].coeffs()),
            idempotent: fmt(&dec.idempotents[j].coeffs),
            bar: dec.bar_pairing[j],
            dim: dec.dims[j],
        })
        .collect();
    if json {
        return print_json(&rows);
    }
    println!("# n = {}, q = {}", field.n, f.q());
    for r in rows {
        println!(
            "e_{}  dim {}  bar -> e_{}  coset {:?}",
            r.index, r.dim, r.bar, r.coset
        );
        println!("    factor (low degree first): {}", r.factor.join(" "));
        println!("    idempotent: {}", r.idempotent.join(" "));
    }
    Ok(())
}

#[derive(Serialize)]
struct BlockRow {
    t: usize,
    case: BlockCase,
    k: usize,
    cyclic: (usize, usize),
    dim_a: usize,
    dim_z: usize,
    dim_k: usize,
    dim_c: usize,
}

#[derive(Serialize)]
struct DecomposeOut {
    n: u64,
    q: u32,
    lambda: u64,
    m: usize,
    blocks: Vec<BlockRow>,
}

fn decompose(ctx: &Ctx, field: &FieldArgs, json: bool) -> Result<()> {
    let f = field_of(&field.q)?;
    let d = ctx.cache.get(field.n, &f)?;
    let out = DecomposeOut {
        n: field.n,
        q: f.q(),
        lambda: d.lambda,
        m: d.m(),
        blocks: d
            .blocks
            .iter()
            .map(|b| BlockRow {
                t: b.index,
                case: b.case,
                k: b.k,
                cyclic: b.cyclic,
                dim_a: b.basis_a.len(),
                dim_z: b.basis_z.len(),
                dim_k: b.basis_k.len(),
                dim_c: b.basis_c.len(),
            })
            .collect(),
    };
    if json {
        return print_json(&out);
    }
    println!(
        "# n = {}, q = {}, lambda = {}, m = {}",
        out.n, out.q, out.lambda, out.m
    );
    println!("t\tcase\tk\te\tdim_A\tdim_Z\tdim_K\tdim_C");
    for b in &out.blocks {
        let case = match b.case {
            BlockCase::Split => "split",
            BlockCase::Stable => "stable",
        };
        println!(
            "{}\t{}\t{}\t{},{}\t{}\t{}\t{}\t{}",
            b.t, case, b.k, b.cyclic.0, b.cyclic.1, b.dim_a, b.dim_z, b.dim_k, b.dim_c
        );
    }
    Ok(())
}

fn build_code(
    ctx: &Ctx,
    field: &FieldArgs,
    kind: CodeKind,
    seed: u64,
    out: Option<&PathBuf>,
) -> Result<()> {
    let f = field_of(&field.q)?;
    let d = ctx.cache.get(field.n, &f)?;
    let base = base_code(&d, kind)?;
    let beta = sample_unit(&d, seed);
    let code = right_translate_code(&base, &beta, &d)?;
    write_out(out, &write_generator(&code))
}

fn min_weight_cmd(input: &PathBuf, budget: u64, json: bool) -> Result<()> {
    let text = fs::read_to_string(input)?;
    let code = read_generator(&text, None)?;
    let mw = min_weight(&code, budget as u128)?;
    if json {
        return print_json(&mw);
    }
    match &mw {
        MinWeight::Exact { weight, .. } => println!("min weight {weight} (exact)"),
        MinWeight::Estimate {
            lower_bound,
            best_found,
            ..
        } => println!("min weight in [{lower_bound}, {best_found}] (sampled)"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn audit_cmd(
    ctx: &Ctx,
    input: Option<&PathBuf>,
    n: Option<u64>,
    q: Option<&str>,
    kind: Option<CodeKind>,
    trials: usize,
    seed: Option<u64>,
    json: bool,
) -> Result<()> {
    if let Some(path) = input {
        let code = read_generator(&fs::read_to_string(path)?, None)?;
        let flags = duality_flags(&code);
        if json {
            return print_json(&flags);
        }
        println!(
            "[{}, {}] hull {}  self-orthogonal {}  self-dual {}  LCD {}  maximal {}",
            code.length(),
            code.dim(),
            flags.hull_dim,
            flags.self_orthogonal,
            flags.self_dual,
            flags.lcd,
            flags
                .maximal_self_orthogonal
                .map_or("n/a".to_string(), |m| m.to_string())
        );
        return Ok(());
    }
    let missing = |what: &str| Error::Parse(format!("audit-duality needs --in or --{what}"));
    let n = n.ok_or_else(|| missing("n"))?;
    let q = q.ok_or_else(|| missing("q"))?;
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;
    let f = field_of(q)?;
    let d = ctx.cache.get(n, &f)?;
    let audit = audit_duality(&d, kind, trials, seed)?;
    if json {
        print_json(&audit)?;
    } else {
        println!(
            "n = {n}, q = {}, kind {kind}: regime {:?}, {}/{} trials pass",
            f.q(),
            audit.regime,
            audit.passed,
            audit.trials
        );
    }
    if !audit.all_passed() {
        return Err(Error::AuditFailure(format!(
            "{} of {} translates violate {:?}",
            audit.trials - audit.passed,
            audit.trials,
            audit.regime
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn ensemble_cmd(
    ctx: &Ctx,
    field: &FieldArgs,
    kind: CodeKind,
    delta: f64,
    trials: usize,
    seed: u64,
    budget: u64,
    csv: Option<&PathBuf>,
    json: bool,
) -> Result<()> {
    let (p, e) = parse_order(&field.q)?;
    let cfg = EnsembleConfig {
        n: field.n,
        p,
        e,
        kind,
        delta,
        trials,
        seed,
        min_weight_budget: budget,
    };
    let rep = run_ensemble_with(&cfg, &ctx.cache)?;
    if let Some(path) = csv {
        fs::write(path, rep.to_csv())?;
    }
    if json {
        return print_json(&rep);
    }
    println!(
        "n = {}, q = {}, kind {kind}, delta = {delta}, {} trials, regime {:?}",
        cfg.n,
        cfg.q(),
        cfg.trials,
        rep.regime
    );
    println!("lambda(n) = {}, margin = {}", rep.lambda, rep.margin);
    println!(
        "empirical Pr(Delta <= delta) = {} ({} of {} weights exact)",
        rep.empirical_pr_le_delta, rep.exact_trials, cfg.trials
    );
    println!(
        "bound = {} (log_q {}){}",
        rep.theoretical_bound.value,
        rep.theoretical_bound.log_q,
        if rep.theoretical_bound.vacuous {
            ", vacuous"
        } else {
            ""
        }
    );
    if !rep.x_count_distribution.is_empty() {
        let hist: Vec<String> = rep
            .x_count_distribution
            .iter()
            .map(|(x, c)| format!("{x}:{c}"))
            .collect();
        println!("X histogram {}", hist.join(" "));
    }
    Ok(())
}

fn print_sieve(r: &ntheory::SieveReport, csv: bool, json: bool) -> Result<()> {
    if json {
        return print_json(r);
    }
    if csv {
        println!("t,pi_t,g_count,o_count,obar_count,g_density,o_density,obar_density");
        println!(
            "{},{},{},{},{},{},{},{}",
            r.t,
            r.pi_t,
            r.g_count,
            r.o_count,
            r.obar_count,
            r.g_density,
            r.o_density,
            r.obar_density
        );
        return Ok(());
    }
    println!("q = {}, t = {}, pi(t) = {}", r.q, r.t, r.pi_t);
    println!("G_t (large order): {} ({})", r.g_count, r.g_density);
    println!("O_t (odd order):   {} ({})", r.o_count, r.o_density);
    println!("even order:        {} ({})", r.obar_count, r.obar_density);
    Ok(())
}

#[derive(Serialize)]
struct BoundsOut {
    n: u64,
    q: u64,
    delta: f64,
    lambda: u64,
    margin: f64,
    margin_positive: bool,
    bound_rate_half_minus: dihedral_forge::Bound,
    bound_rate_half: dihedral_forge::Bound,
}

fn bounds_cmd(n: u64, q: &str, delta: f64, json: bool) -> Result<()> {
    let q = q_value(q)?;
    let out = BoundsOut {
        n,
        q,
        delta,
        lambda: ntheory::lambda_n(n, q)?,
        margin: ntheory::margin(n, q, delta)?,
        margin_positive: ntheory::margin(n, q, delta)? > 0.0,
        bound_rate_half_minus: ntheory::bound_rate_half_minus(n, q, delta)?,
        bound_rate_half: ntheory::bound_rate_half(n, q, delta)?,
    };
    if json {
        return print_json(&out);
    }
    println!(
        "n = {n}, q = {q}, delta = {delta}, lambda(n) = {}",
        out.lambda
    );
    println!("margin = {}", out.margin);
    for (name, b) in [
        ("rate 1/2 - 1/(2n)", &out.bound_rate_half_minus),
        ("rate 1/2", &out.bound_rate_half),
    ] {
        println!(
            "{name}: bound = {} (log_q {}){}",
            b.value,
            b.log_q,
            if b.vacuous { ", vacuous" } else { "" }
        );
    }
    Ok(())
}

fn admissible_cmd(
    kind: AdmissibleKind,
    q: &str,
    count: usize,
    delta: f64,
    scan_bound: u64,
    csv: bool,
    json: bool,
) -> Result<()> {
    let rows = ntheory::generate_admissible(kind, q_value(q)?, count, delta, scan_bound)?;
    if json {
        return print_json(&rows);
    }
    let sep = if csv { "," } else { "\t" };
    println!(
        "{}",
        [
            "n",
            "lambda",
            "ord",
            "ord_odd",
            "minus_one_in_q",
            "margin",
            "good"
        ]
        .join(sep)
    );
    for a in rows {
        println!(
            "{}",
            [
                a.n.to_string(),
                a.lambda.to_string(),
                a.ord.to_string(),
                a.ord_odd.to_string(),
                a.minus_one_in_q.to_string(),
                a.margin.to_string(),
                a.good.to_string()
            ]
            .join(sep)
        );
    }
    Ok(())
}

fn selftest_cmd(suites: &[String], json: bool) -> Result<()> {
    let names: Vec<&str> = if suites.is_empty() {
        selftest::SUITES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let mut outcomes = Vec::new();
    for name in names {
        let o = selftest::run_suite(name)?;
        if !json {
            println!(
                "{} {:<22} {:>6} checks {:>8.2}s{}",
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.checks,
                o.seconds,
                if o.detail.is_empty() {
                    String::new()
                } else {
                    format!("  {}", o.detail)
                }
            );
        }
        outcomes.push(o);
    }
    if json {
        print_json(&outcomes)?;
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::AuditFailure(format!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        cache: DecompositionCache::new(),
    };
    match &cli.command {
        Command::Idempotents { field, json } => idempotents(field, *json),
        Command::Decompose { field, json } => decompose(&ctx, field, *json),
        Command::BuildCode {
            field,
            kind,
            beta_seed,
            out,
        } => build_code(&ctx, field, *kind, *beta_seed, out.as_ref()),
        Command::MinWeight {
            input,
            budget,
            json,
        } => min_weight_cmd(input, *budget, *json),
        Command::AuditDuality {
            input,
            n,
            q,
            kind,
            trials,
            seed,
            json,
        } => audit_cmd(
            &ctx,
            input.as_ref(),
            *n,
            q.as_deref(),
            *kind,
            *trials,
            *seed,
            *json,
        ),
        Command::Ensemble {
            field,
            kind,
            delta,
            trials,
            seed,
            budget,
            csv,
            json,
        } => ensemble_cmd(
            &ctx,
            field,
            *kind,
            *delta,
            *trials,
            *seed,
            *budget,
            csv.as_ref(),
            *json,
        ),
        Command::Trend {
            q,
            kind,
            family,
            delta,
            count,
            trials,
            seed,
            budget,
            scan_bound,
            csv,
        } => {
            let (p, e) = parse_order(q)?;
            let seq =
                ntheory::generate_admissible(*family, q_value(q)?, *count, *delta, *scan_bound)?;
            let rows = trend_experiment(*kind, p, e, *delta, &seq, *trials, *seed, *budget)?;
            write_out(csv.as_ref(), &trend_to_csv(&rows))
        }
        Command::Sieve { q, t, csv, json } => print_sieve(&ntheory::sieve(*q, *t)?, *csv, *json),
        Command::Bounds { n, q, delta, json } => bounds_cmd(*n, q, *delta, *json),
        Command::Admissible {
            kind,
            q,
            count,
            delta,
            scan_bound,
            csv,
            json,
        } => admissible_cmd(*kind, q, *count, *delta, *scan_bound, *csv, *json),
        Command::Selftest { suite, json } => selftest_cmd(suite, *json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}
