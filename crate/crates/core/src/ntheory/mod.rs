//! Multiplicative orders, `lambda(n)`, admissible lengths, the prime sieves
//! behind the density statements, and the real-valued bound evaluators.

mod bounds;
mod primes;

pub use bounds::{
    bound_rate_half_from, bound_rate_half_minus_from, margin_from_lambda, q_entropy, BoundEstimate,
};
pub use primes::{factorize, gcd, is_prime, pow_mod, segmented_map, small_primes};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_coprime(q: u64, n: u64) -> Result<()> {
    if n == 0 || gcd(q % n, n) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    Ok(())
}

/// Carmichael exponent of `Z_n^×`.
pub fn carmichael(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| {
            let pk1 = p.pow(k - 1);
            if p == 2 && k >= 3 {
                pk1 / 2
            } else {
                pk1 * (p - 1)
            }
        })
        .fold(1, |acc, x| acc / gcd(acc, x) * x)
}

/// Order of `q` modulo `n` given a multiple `exponent` of it and that multiple's factorisation.
pub fn ord_from_exponent(q: u64, n: u64, exponent: u64, factors: &[(u64, u32)]) -> u64 {
    let mut ord = exponent;
    for &(r, _) in factors {
        while ord.is_multiple_of(r) && pow_mod(q, ord / r, n) == 1 {
            ord /= r;
        }
    }
    ord
}

/// Least `k >= 1` with `q^k = 1 (mod n)`.
pub fn ord_mod(q: u64, n: u64) -> Result<u64> {
    check_coprime(q, n)?;
    if n == 1 {
        return Ok(1);
    }
    let exponent = if is_prime(n) { n - 1 } else { carmichael(n) };
    Ok(ord_from_exponent(q, n, exponent, &factorize(exponent)))
}

/// `lambda(n)`: the least `ord_p(q)` over prime divisors `p` of `n`.
pub fn lambda_n(n: u64, q: u64) -> Result<u64> {
    check_coprime(q, n)?;
    if n < 2 {
        return Err(Error::NTooSmall(n));
    }
    factorize(n)
        .into_iter()
        .map(|(p, _)| ord_mod(q, p))
        .try_fold(u64::MAX, |acc, o| o.map(|o| acc.min(o)))
}

/// Whether `-1` lies in the cyclic subgroup of `Z_n^×` generated by `q`.
pub fn minus_one_in_powers(q: u64, n: u64) -> Result<bool> {
    let ord = ord_mod(q, n)?;
    if n <= 2 {
        return Ok(true);
    }
    // <q> is cyclic, so its only candidate for -1 is the unique involution q^(ord/2).
    Ok(ord % 2 == 0 && pow_mod(q, ord / 2, n) == n - 1)
}

/// Admissibility margin for `(n, q, delta)`.
pub fn margin(n: u64, q: u64, delta: f64) -> Result<f64> {
    margin_from_lambda(n, q, lambda_n(n, q)?, delta)
}

pub fn bound_rate_half_minus(n: u64, q: u64, delta: f64) -> Result<BoundEstimate<f64>> {
    let lambda = lambda_n(n, q)?;
    Ok(bound_rate_half_minus_from(
        q,
        lambda,
        margin_from_lambda(n, q, lambda, delta)?,
    ))
}

pub fn bound_rate_half(n: u64, q: u64, delta: f64) -> Result<BoundEstimate<f64>> {
    let lambda = lambda_n(n, q)?;
    Ok(bound_rate_half_from(
        q,
        lambda,
        margin_from_lambda(n, q, lambda, delta)?,
    ))
}

/// `(log_q t)^2`, the order threshold for the "good primes" set.
pub fn good_order_threshold(q: u64, t: u64) -> f64 {
    let l = (t as f64).ln() / (q as f64).ln();
    l * l
}

/// A length `n` together with the data the duality theorems and bounds need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleN {
    pub n: u64,
    pub q: u64,
    pub lambda: u64,
    pub ord: u64,
    pub ord_odd: bool,
    pub minus_one_in_q: bool,
    pub delta: f64,
    pub margin: f64,
    /// `ord_n(q) >= (log_q n)^2`.
    pub good: bool,
}

impl AdmissibleN {
    pub fn new(n: u64, q: u64, delta: f64) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::EvenN(n));
        }
        if n < 3 {
            return Err(Error::NTooSmall(n));
        }
        let ord = ord_mod(q, n)?;
        let lambda = lambda_n(n, q)?;
        Ok(AdmissibleN {
            n,
            q,
            lambda,
            ord,
            ord_odd: ord % 2 == 1,
            minus_one_in_q: minus_one_in_powers(q, n)?,
            delta,
            margin: margin_from_lambda(n, q, lambda, delta)?,
            good: ord as f64 >= good_order_threshold(q, n),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissibleKind {
    /// `ord_n(q)` odd: every nontrivial cyclic idempotent is moved by bar.
    OrdOdd,
    /// `-1` in `<q>`: every cyclic idempotent is fixed by bar.
    MinusOne,
}

impl std::str::FromStr for AdmissibleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ord-odd" => Ok(AdmissibleKind::OrdOdd),
            "minus-one" => Ok(AdmissibleKind::MinusOne),
            _ => Err(Error::Parse(format!("unknown kind '{s}'"))),
        }
    }
}

pub const DEFAULT_SCAN_BOUND: u64 = 10_000_000;

/// Increasing primes satisfying `kind`.
///
/// The first qualifying prime is always taken. After that a prime is kept if
/// its order clears `(log_q n)^2`, or failing that, if its margin beats the
/// last kept entry.
pub fn generate_admissible(
    kind: AdmissibleKind,
    q: u64,
    count: usize,
    delta: f64,
    scan_bound: u64,
) -> Result<Vec<AdmissibleN>> {
    if count == 0 {
        return Err(Error::DomainError("count must be at least 1".into()));
    }
    q_entropy(q, delta)?;
    let mut out: Vec<AdmissibleN> = Vec::with_capacity(count);
    let mut p = 3u64;
    while p <= scan_bound {
        if is_prime(p) && !q.is_multiple_of(p) {
            let a = AdmissibleN::new(p, q, delta)?;
            let fits = match kind {
                AdmissibleKind::OrdOdd => a.ord_odd,
                AdmissibleKind::MinusOne => a.minus_one_in_q,
            };
            let keep = fits
                && match out.last() {
                    None => true,
                    Some(last) => a.good || a.margin > last.margin,
                };
            if keep {
                out.push(a);
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
        p += 2;
    }
    Err(Error::Exhausted {
        bound: scan_bound,
        found: out.len(),
        wanted: count,
    })
}

/// Counts of the prime sets `G_t` (large order), `O_t` (odd order) and the
/// even-order complement, over primes in `(q, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub q: u64,
    pub t: u64,
    /// Primes `<= t`.
    pub pi_t: u64,
    /// Primes in `(q, t]` coprime to `q`.
    pub primes_above_q: u64,
    pub g_count: u64,
    pub o_count: u64,
    pub obar_count: u64,
    pub g_density: f64,
    pub o_density: f64,
    pub obar_density: f64,
}

pub fn sieve(q: u64, t: u64) -> Result<SieveReport> {
    if q < 2 {
        return Err(Error::DomainError("q must be at least 2".into()));
    }
    if t <= q {
        return Err(Error::DomainError(format!("t = {t} must exceed q = {q}")));
    }
    let threshold = good_order_threshold(q, t);
    let base = small_primes((t as f64).sqrt() as u64 + 1);
    let per_segment = |ps: &[u64]| {
        let mut c = [0u64; 5]; // pi, above_q, g, odd, even
        for &p in ps {
            c[0] += 1;
            if p <= q || q.is_multiple_of(p) {
                continue;
            }
            c[1] += 1;
            let ord = ord_prime(q % p, p, &base);
            if ord as f64 >= threshold {
                c[2] += 1;
            }
            if ord % 2 == 1 {
                c[3] += 1;
            } else {
                c[4] += 1;
            }
        }
        c
    };
    let totals = segmented_map(t, per_segment)
        .into_iter()
        .fold([0u64; 5], |mut acc, c| {
            for i in 0..5 {
                acc[i] += c[i];
            }
            acc
        });
    let pi = totals[0];
    let ratio = |x: u64| if pi == 0 { 0.0 } else { x as f64 / pi as f64 };
    Ok(SieveReport {
        q,
        t,
        pi_t: pi,
        primes_above_q: totals[1],
        g_count: totals[2],
        o_count: totals[3],
        obar_count: totals[4],
        g_density: ratio(totals[2]),
        o_density: ratio(totals[3]),
        obar_density: ratio(totals[4]),
    })
}

/// Order of `q` modulo prime `p`, factoring `p - 1` with the given base primes.
fn ord_prime(q: u64, p: u64, base: &[u64]) -> u64 {
    let mut m = p - 1;
    let mut factors = Vec::new();
    for &r in base {
        if r * r > m {
            break;
        }
        if m.is_multiple_of(r) {
            let mut k = 0;
            while m.is_multiple_of(r) {
                m /= r;
                k += 1;
            }
            factors.push((r, k));
        }
    }
    if m > 1 {
        factors.push((m, 1));
    }
    ord_from_exponent(q, p, p - 1, &factors)
}
