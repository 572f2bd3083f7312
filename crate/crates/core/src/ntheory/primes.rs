//! Primality, factorisation and a segmented sieve.

use rayon::prelude::*;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be composite and odd.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut r = 1u64;
        let mut q = 1u64;
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorisation as sorted `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut k = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    };
    push(2, &mut n);
    let mut d = 3;
    while d <= TRIAL_LIMIT && d * d <= n {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut big = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                big.push(m);
            } else {
                let f = pollard_rho(m);
                stack.push(f);
                stack.push(m / f);
            }
        }
        big.sort_unstable();
        for p in big {
            match out.last_mut() {
                Some((last, k)) if *last == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

/// Primes up to `limit` by the plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 16;

/// Primes in `[lo, hi)` given base primes up to `sqrt(hi)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i] && lo + i as u64 >= 2)
        .map(|i| lo + i as u64)
        .collect()
}

/// Segmented sieve over `[2, limit]`, segments processed in parallel, then
/// `per_segment` is applied to each segment's primes. Results come back in
/// segment order.
pub fn segmented_map<T, F>(limit: u64, per_segment: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[u64]) -> T + Sync,
{
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = small_primes(root);
    let segments: Vec<(u64, u64)> = (0..=limit / SEGMENT)
        .map(|i| (i * SEGMENT, ((i + 1) * SEGMENT).min(limit + 1)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    segments
        .par_iter()
        .map(|&(lo, hi)| per_segment(&sieve_segment(lo, hi, &base)))
        .collect()
}
