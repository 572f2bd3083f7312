//! Invariant suites behind the `selftest` command.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dihedral::{
    code_c, code_hat_c, m2, right_translate_code, sample_unit, DecompositionCache, DihedralAlgebra,
    DihedralElem,
};
use crate::ensemble::{audit_duality, run_ensemble, CodeKind, EnsembleConfig};
use crate::error::{Error, Result};
use crate::gf::{make_field, FieldSpec, Sym};
use crate::linalg::{self, Matrix};
use crate::lincode::{min_weight, scan_weights, weight_threshold, LinearCode, DEFAULT_BUDGET};
use crate::ntheory::{self, gcd};

pub const SUITES: &[&str] = &[
    "sigma-inner-product",
    "decomposition",
    "matrix-ideal-census",
    "char2-self-dual",
    "odd-char-duality",
    "balanced-bound",
    "min-weight-oracle",
    "sieve-density",
    "bound-evaluators",
    "reproducibility",
];

/// `(p, e)` for `q` in `{2, 3, 4, 5}`.
const SMALL_FIELDS: [(u64, u32); 4] = [(2, 1), (3, 1), (2, 2), (5, 1)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
    pub seconds: f64,
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: Vec::new(),
        }
    }
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn run_suite(name: &str) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut t = Tally::new();
    match name {
        "sigma-inner-product" => sigma_inner_product(&mut t)?,
        "decomposition" => decomposition(&mut t)?,
        "matrix-ideal-census" => census(&mut t)?,
        "char2-self-dual" => char2_self_dual(&mut t)?,
        "odd-char-duality" => odd_char_duality(&mut t)?,
        "balanced-bound" => balanced_bound(&mut t)?,
        "min-weight-oracle" => min_weight_oracle(&mut t)?,
        "sieve-density" => sieve_density(&mut t)?,
        "bound-evaluators" => bound_evaluators(&mut t)?,
        "reproducibility" => reproducibility(&mut t)?,
        _ => return Err(Error::Parse(format!("unknown suite '{name}'"))),
    }
    let detail = if t.failures.is_empty() {
        String::new()
    } else {
        let mut d = t.failures[..t.failures.len().min(5)].join("; ");
        if t.failures.len() > 5 {
            d.push_str(&format!("; and {} more", t.failures.len() - 5));
        }
        d
    };
    Ok(SuiteOutcome {
        name: name.to_string(),
        passed: t.failures.is_empty(),
        checks: t.checks,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all() -> Result<Vec<SuiteOutcome>> {
    SUITES.iter().map(|s| run_suite(s)).collect()
}

fn random_elem(rng: &mut ChaCha8Rng, n: usize, q: u32) -> DihedralElem {
    DihedralElem {
        h: (0..n).map(|_| rng.gen_range(0..q)).collect(),
        vh: (0..n).map(|_| rng.gen_range(0..q)).collect(),
    }
}

fn sigma_inner_product(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for &(p, e) in &SMALL_FIELDS {
        let f = make_field(p, e)?;
        for n in [3usize, 5, 7, 9] {
            let alg = DihedralAlgebra::new(n, f.clone());
            for _ in 0..20 {
                let a = random_elem(&mut rng, n, f.q());
                let b = random_elem(&mut rng, n, f.q());
                let d = random_elem(&mut rng, n, f.q());
                let sab = alg.sigma(&alg.mul(&a, &b));
                let sba = alg.sigma(&alg.mul(&b, &a));
                t.check(sab == sba, || {
                    format!("sigma(ab) != sigma(ba), q={}, n={n}", f.q())
                });
                let ip = alg.inner(&a, &b);
                let sbar = alg.sigma(&alg.mul(&a, &alg.bar(&b)));
                t.check(ip == sbar, || {
                    format!("<a,b> != sigma(a bar b), q={}, n={n}", f.q())
                });
                let lhs = alg.inner(&alg.mul(&d, &a), &b);
                let rhs = alg.inner(&a, &alg.mul(&alg.bar(&d), &b));
                t.check(lhs == rhs, || {
                    format!("<da,b> != <a,bar(d) b>, q={}, n={n}", f.q())
                });
            }
        }
    }
    Ok(())
}

fn decomposition(t: &mut Tally) -> Result<()> {
    for &(p, e) in &SMALL_FIELDS {
        let f = make_field(p, e)?;
        let q = f.q() as u64;
        for n in (3..=99u64).step_by(2).filter(|&n| gcd(n, q) == 1) {
            match crate::dihedral::decompose(n, &f) {
                Ok(d) => {
                    let ksum: usize = d.k_values().iter().sum();
                    t.check(2 * ksum == (n - 1) as usize, || {
                        format!("q={q}, n={n}: sum k_t = {ksum}")
                    });
                }
                Err(err) => t.check(false, || format!("q={q}, n={n}: {err}")),
            }
        }
    }
    Ok(())
}

fn census(t: &mut Tally) -> Result<()> {
    for &(p, e) in &SMALL_FIELDS {
        let c = m2::ideal_census(&make_field(p, e)?)?;
        t.check(c.holds(), || format!("{c:?}"));
    }
    Ok(())
}

const CHAR2_LENGTHS: [u64; 6] = [3, 7, 9, 15, 21, 31];

fn char2_self_dual(t: &mut Tally) -> Result<()> {
    let cache = DecompositionCache::new();
    for (p, e) in [(2u64, 1u32), (2, 2)] {
        let f = make_field(p, e)?;
        for n in CHAR2_LENGTHS {
            let d = cache.get(n, &f)?;
            let a = audit_duality(&d, CodeKind::HatC, 100, 0x5e1f_d0a1 ^ n)?;
            t.check(a.all_passed(), || {
                format!("q={}, n={n}: {}/{} self-dual", f.q(), a.passed, a.trials)
            });
        }
    }
    Ok(())
}

fn odd_char_duality(t: &mut Tally) -> Result<()> {
    let cache = DecompositionCache::new();
    for (q, n) in [(3u64, 11u64), (3, 23), (5, 11)] {
        let ord = ntheory::ord_mod(q, n)?;
        t.check(ord % 2 == 1, || format!("ord_{n}({q}) = {ord} is even"));
        let d = cache.get(n, &make_field(q, 1)?)?;
        let a = audit_duality(&d, CodeKind::C, 100, 0x0dd ^ n)?;
        t.check(a.all_passed(), || {
            format!(
                "q={q}, n={n}: {}/{} maximal self-orthogonal",
                a.passed, a.trials
            )
        });
    }
    for (q, n) in [(3u64, 5u64), (5, 3), (3, 25)] {
        let m1 = ntheory::minus_one_in_powers(q, n)?;
        t.check(m1, || format!("-1 is not a power of {q} mod {n}"));
        let d = cache.get(n, &make_field(q, 1)?)?;
        let a = audit_duality(&d, CodeKind::HatC, 100, 0x1cd ^ n)?;
        t.check(a.all_passed(), || {
            format!("q={q}, n={n}: {}/{} LCD", a.passed, a.trials)
        });
    }
    Ok(())
}

/// Every dihedral code with `q^k <= 2^20`.
pub fn balanced_bound_codes(field: &std::sync::Arc<FieldSpec>) -> Result<Vec<(u64, LinearCode)>> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for n in (3..=41u64).step_by(2).filter(|&n| gcd(n, q) == 1) {
        if (q as f64).powi(n as i32) > (1u64 << 20) as f64 {
            break;
        }
        let d = crate::dihedral::decompose(n, field)?;
        for base in [code_c(&d)?, code_hat_c(&d)?] {
            let beta = sample_unit(&d, n);
            let translate = right_translate_code(&base, &beta, &d)?;
            out.push((n, base));
            out.push((n, translate));
        }
    }
    Ok(out)
}

fn balanced_bound(t: &mut Tally) -> Result<()> {
    for &(p, e) in &SMALL_FIELDS {
        let f = make_field(p, e)?;
        let q = f.q() as u64;
        for (n, code) in balanced_bound_codes(&f)? {
            let scan = scan_weights(&code, 1 << 20)?;
            for delta in [0.1, 0.25, 0.4] {
                if delta >= 1.0 - 1.0 / q as f64 {
                    continue;
                }
                let count = scan.count_at_most(weight_threshold(code.length(), delta));
                let h = ntheory::q_entropy(q, delta)?;
                let log_bound = code.dim() as f64 * h * (q as f64).ln();
                t.check((count as f64).ln() <= log_bound + 1e-9, || {
                    format!(
                        "q={q}, n={n}, k={}, delta={delta}: {count} words",
                        code.dim()
                    )
                });
            }
        }
    }
    Ok(())
}

/// Minimum weight over all nonzero combinations of the raw rows.
fn brute_force_min_weight(f: &FieldSpec, rows: &[Vec<Sym>], len: usize) -> Option<usize> {
    let q = f.q() as u64;
    let k = rows.len();
    let mut best = None;
    for idx in 1..q.pow(k as u32) {
        let mut x = idx;
        let mut word = vec![0; len];
        for r in rows {
            linalg::axpy(f, &mut word, (x % q) as Sym, r);
            x /= q;
        }
        let w = linalg::weight(&word);
        if w > 0 && best.is_none_or(|b| w < b) {
            best = Some(w);
        }
    }
    best
}

fn min_weight_oracle(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [2u64, 3] {
        let f = make_field(q, 1)?;
        for _ in 0..50 {
            let len = rng.gen_range(1..=14);
            let k = rng.gen_range(1..=7usize.min(len));
            let rows: Vec<Vec<Sym>> = (0..k)
                .map(|_| (0..len).map(|_| rng.gen_range(0..q as Sym)).collect())
                .collect();
            let code = LinearCode::from_matrix(&f, &Matrix::from_rows(len, &rows));
            let oracle = brute_force_min_weight(&f, &rows, len);
            let ours = match min_weight(&code, DEFAULT_BUDGET) {
                Ok(m) => Some(m.weight()),
                Err(Error::ZeroDim) => None,
                Err(e) => return Err(e),
            };
            t.check(ours == oracle, || {
                format!("q={q}, [{len},{k}]: {ours:?} vs {oracle:?}")
            });
        }
    }
    Ok(())
}

fn sieve_density(t: &mut Tally) -> Result<()> {
    let s4 = ntheory::sieve(2, 10_000)?;
    let s5 = ntheory::sieve(2, 100_000)?;
    let s6 = ntheory::sieve(2, 1_000_000)?;
    t.check(s6.g_density > s4.g_density, || {
        format!(
            "G density {} at 1e6 <= {} at 1e4",
            s6.g_density, s4.g_density
        )
    });
    t.check(s6.g_density > 0.9, || {
        format!("G density {} at 1e6", s6.g_density)
    });
    for s in [&s5, &s6] {
        t.check(s.o_density > 0.0 && s.o_density < 1.0, || {
            format!("O density {} at {}", s.o_density, s.t)
        });
    }
    t.check((s6.o_density - s5.o_density).abs() < 0.02, || {
        format!("O density moved from {} to {}", s5.o_density, s6.o_density)
    });
    Ok(())
}

fn bound_evaluators(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let qs = [2u64, 3, 4, 5, 7, 8, 9];
    let mut done = 0;
    while done < 100 {
        let q = qs[rng.gen_range(0..qs.len())];
        let n = 2 * rng.gen_range(1..5000u64) + 1;
        if gcd(n, q) != 1 {
            continue;
        }
        let delta = rng.gen_range(0.001..(1.0 - 1.0 / q as f64));
        let minus = ntheory::bound_rate_half_minus(n, q, delta)?;
        let half = ntheory::bound_rate_half(n, q, delta)?;
        let ratio = half.log_q - minus.log_q;
        let want = (1.0 + (q * q) as f64).ln() / (q as f64).ln();
        t.check((ratio - want).abs() < 1e-9, || {
            format!("q={q}, n={n}: log ratio {ratio}")
        });
        for b in [&minus, &half] {
            t.check(b.vacuous == (b.log_q >= 0.0), || {
                format!("q={q}, n={n}: vacuous flag")
            });
        }
        let m = ntheory::margin(n, q, delta)?;
        let lambda = ntheory::lambda_n(n, q)? as f64;
        let direct =
            0.25 - ntheory::q_entropy(q, delta)? - (n as f64).ln() / (q as f64).ln() / lambda;
        t.check((m > 0.0) == (direct > 0.0), || {
            format!("q={q}, n={n}: margin sign")
        });
        done += 1;
    }
    Ok(())
}

fn reproducibility(t: &mut Tally) -> Result<()> {
    let cfg = EnsembleConfig {
        n: 9,
        p: 2,
        e: 1,
        kind: CodeKind::HatC,
        delta: 0.2,
        trials: 40,
        seed: 42,
        min_weight_budget: DEFAULT_BUDGET as u64,
    };
    let run_with = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvariantViolation(e.to_string()))?;
        pool.install(|| run_ensemble(&cfg)).map(|r| r.to_csv())
    };
    let a = run_with(1)?;
    let b = run_with(1)?;
    let c = run_with(8)?;
    t.check(a == b, || "two runs differ".into());
    t.check(a == c, || "1 and 8 threads differ".into());
    Ok(())
}
