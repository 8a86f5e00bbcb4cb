//! Binomial coefficients, exact for small arguments and in log-space beyond.

/// Largest `n` for which `C(n, k)` is evaluated directly.
const EXACT_LIMIT: usize = 60;

/// Exact `C(n, k)` as `u128`; caller guarantees `n <= EXACT_LIMIT`.
fn choose_exact(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `ln C(n, k)` for `k = 0..=n`.
///
/// Exact below the switch; above it the row is built by the multiplicative
/// recurrence in log space, which keeps absolute errors near `1e-14` even for
/// `n` in the thousands (differences of `ln n!` lose about three digits).
pub(crate) fn ln_choose_row(n: usize) -> Vec<f64> {
    if n <= EXACT_LIMIT {
        return (0..=n).map(|k| (choose_exact(n, k) as f64).ln()).collect();
    }
    let mut row = vec![0.0; n + 1];
    for k in 1..=n / 2 {
        row[k] = row[k - 1] + ((n - k + 1) as f64 / k as f64).ln();
    }
    for k in n / 2 + 1..=n {
        row[k] = row[n - k];
    }
    row
}

/// `C(n, k)` as a float. Overflows to infinity for very large `n`.
pub(crate) fn choose(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_LIMIT {
        return choose_exact(n, k) as f64;
    }
    ln_choose_row(n)[k].exp()
}
