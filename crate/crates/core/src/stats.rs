//! Binomial confidence intervals and paired sign tests for BLER comparisons.

pub const Z_95_TWO_SIDED: f64 = 1.959_963_984_540_054;
pub const Z_95_ONE_SIDED: f64 = 1.644_853_626_951_472_2;
pub const Z_99_TWO_SIDED: f64 = 2.575_829_303_548_900_4;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

pub fn intervals_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

fn binomial_pmf_iter(n: u64, p: f64) -> impl Iterator<Item = f64> {
    // Recurrence in log space from k = 0.
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_pmf = n as f64 * lq;
    (0..=n).map(move |k| {
        let cur = log_pmf;
        if k < n {
            log_pmf += ((n - k) as f64).ln() - ((k + 1) as f64).ln() + lp - lq;
        }
        cur.exp()
    })
}

/// P[X >= k] for X ~ Binomial(n, p).
pub fn binomial_upper_tail(k: u64, n: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    binomial_pmf_iter(n, p).skip(k as usize).sum::<f64>().min(1.0)
}

/// P[X <= k] for X ~ Binomial(n, p).
pub fn binomial_lower_tail(k: u64, n: u64, p: f64) -> f64 {
    if k >= n {
        return 1.0;
    }
    1.0 - binomial_upper_tail(k + 1, n, p)
}

/// One-sided exact sign test on discordant pairs: probability of at least
/// `wins` out of `wins + losses` under a fair coin.
pub fn sign_test_p(wins: u64, losses: u64) -> f64 {
    binomial_upper_tail(wins, wins + losses, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(10, 100, Z_95_TWO_SIDED);
        assert!(lo < 0.1 && 0.1 < hi);
        assert!((lo - 0.0552).abs() < 1e-3 && (hi - 0.1744).abs() < 1e-3);
        let (lo, hi) = wilson_interval(0, 1000, Z_95_TWO_SIDED);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.005);
        assert_eq!(wilson_interval(0, 0, 1.96), (0.0, 1.0));
    }

    #[test]
    fn binomial_tails() {
        assert!((binomial_upper_tail(1, 1, 0.5) - 0.5).abs() < 1e-12);
        assert!((binomial_upper_tail(2, 3, 0.5) - 0.5).abs() < 1e-12);
        assert!((binomial_upper_tail(3, 3, 0.5) - 0.125).abs() < 1e-12);
        assert!((binomial_lower_tail(0, 3, 0.5) - 0.125).abs() < 1e-12);
        // Large n stays finite.
        let t = binomial_upper_tail(5_100, 10_000, 0.5);
        assert!(t > 0.02 && t < 0.03, "{t}");
        assert_eq!(binomial_upper_tail(0, 10, 0.3), 1.0);
        assert_eq!(binomial_upper_tail(11, 10, 0.3), 0.0);
    }

    #[test]
    fn sign_test() {
        assert!(sign_test_p(30, 10) < 0.01);
        assert!(sign_test_p(10, 30) > 0.99);
        assert!((sign_test_p(0, 0) - 1.0).abs() < 1e-12);
    }
}
