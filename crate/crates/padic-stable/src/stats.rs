//! Shared statistical utilities: deterministic compensated summation and the
//! hypothesis tests used by the verification and simulation suites.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Neumaier compensated sum; deterministic for a fixed iteration order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    neumaier_sum(xs.iter().copied()) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    neumaier_sum(xs.iter().map(|x| (x - m) * (x - m))) / (xs.len() - 1) as f64
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Linear-interpolation quantile on a copy of the data.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        v[lo]
    } else {
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }
}

/// One-sample Kolmogorov–Smirnov statistic against Exp(rate).
pub fn ks_statistic_exponential(samples: &[f64], rate: f64) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in v.iter().enumerate() {
        let cdf = 1.0 - (-rate * x).exp();
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

/// Asymptotic KS p-value with the Stephens small-sample correction.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let n = n as f64;
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0f64;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        p += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * p).clamp(0.0, 1.0)
}

/// Pearson chi-square statistic and p-value for observed vs expected counts.
/// Cells with expected count below 1e-9 are skipped.
pub fn chi_square_test(observed: &[f64], expected: &[f64]) -> (f64, f64) {
    let mut stat = 0.0f64;
    let mut df = 0i64;
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 1e-9 {
            continue;
        }
        stat += (o - e) * (o - e) / e;
        df += 1;
    }
    df -= 1;
    if df < 1 {
        return (stat, 1.0);
    }
    let dist = ChiSquared::new(df as f64).expect("positive dof");
    (stat, 1.0 - dist.cdf(stat))
}

/// z-score for a two-sided 99% interval.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Wilson score interval for a binomial proportion.
pub fn wilson_ci(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) + z2 / (4.0 * n)) / n).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Total variation distance between two finite distributions.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * neumaier_sum(p.iter().zip(q).map(|(&a, &b)| (a - b).abs()))
}
