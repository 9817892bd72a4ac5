//! Prime grids for experiment sweeps.

/// All primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
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

/// Upper bound on the `n`-th prime (Rosser), good for `n >= 6`.
fn nth_prime_bound(n: u64) -> u64 {
    if n < 6 {
        return 15;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 10
}

/// The `n`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(n: u64) -> u64 {
    assert!(n >= 1);
    primes_up_to(nth_prime_bound(n))[(n - 1) as usize]
}

/// Primes with 1-based indices `from..to` (left endpoint included, right
/// excluded), so `nth_range(500, 600)` has 100 entries starting at 3571.
pub fn nth_range(from: u64, to: u64) -> Vec<(u64, u64)> {
    assert!(from >= 1 && to >= from);
    if to == from {
        return Vec::new();
    }
    let sieve = primes_up_to(nth_prime_bound(to));
    (from..to).map(|i| (i, sieve[(i - 1) as usize])).collect()
}

/// Number of primes `<= x`, i.e. the 1-based index of `x` when prime.
pub fn prime_pi(x: u64) -> u64 {
    primes_up_to(x).len() as u64
}
