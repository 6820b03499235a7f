//! Trial fan-out and the small amount of statistics the estimators need.

use alloc::vec::Vec;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Runs independent trials `0..trials` and returns their results in trial
/// order. Implementations may evaluate trials concurrently; because the
/// output order is fixed, every reduction over it is reproducible.
pub trait TrialExecutor {
    fn map_trials<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;

    fn count_trials<F>(&self, trials: u64, f: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        self.map_trials(trials, f).into_iter().filter(|&b| b).count() as u64
    }
}

/// Evaluates trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialExecutor for Sequential {
    fn map_trials<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..trials).map(f).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalMethod {
    Normal,
    Wilson,
}

/// A binomial proportion with a 99% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
    pub fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: IntervalMethod,
}

impl Proportion {
    pub fn new(hits: u64, trials: u64) -> Self {
        assert!(trials > 0 && hits <= trials);
        let n = trials as f64;
        let p = hits as f64 / n;
        // the normal interval degenerates when either tail holds few counts
        let extreme = (hits as f64) < 10.0 || ((trials - hits) as f64) < 10.0;
        let (ci_low, ci_high, method) = if extreme {
            let (lo, hi) = wilson(p, n, Z_99);
            // exact at the edges; the formula leaves a rounding residue
            let lo = if hits == 0 { 0.0 } else { lo };
            let hi = if hits == trials { 1.0 } else { hi };
            (lo, hi, IntervalMethod::Wilson)
        } else {
            let half = Z_99 * libm::sqrt(p * (1.0 - p) / n);
            ((p - half).max(0.0), (p + half).min(1.0), IntervalMethod::Normal)
        };
        Proportion { hits, trials, fraction: p, ci_low, ci_high, method }
    }

    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub fn std_err(&self) -> f64 {
        libm::sqrt(self.fraction * (1.0 - self.fraction) / self.trials as f64)
    }
}

fn wilson(p: f64, n: f64, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl MeanEstimate {
    /// Sums in slice order, so equal inputs give bit-identical results.
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 2, "need at least two samples");
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        MeanEstimate { mean, std_err: libm::sqrt(var / n as f64), samples: n as u64 }
    }

    /// `|mean - target| <= k·σ`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_err
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_interval_covers_fraction() {
        let p = Proportion::new(300, 1000);
        assert_eq!(p.method, IntervalMethod::Normal);
        assert!(p.ci_low < 0.3 && 0.3 < p.ci_high);
        let half = Z_99 * (0.3f64 * 0.7 / 1000.0).sqrt();
        assert!((p.ci_high - 0.3 - half).abs() < 1e-15);
    }

    #[test]
    fn wilson_at_the_edges() {
        let p = Proportion::new(0, 1000);
        assert_eq!(p.method, IntervalMethod::Wilson);
        assert_eq!(p.ci_low, 0.0);
        assert!(p.ci_high > 0.0 && p.ci_high < 0.01);
        let q = Proportion::new(1000, 1000);
        assert_eq!(q.ci_high, 1.0);
        assert!(q.ci_low > 0.99);
    }

    #[test]
    fn mean_estimate_basics() {
        let m = MeanEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.std_err - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(m.within(2.0, 1.0));
    }

    #[test]
    fn sequential_preserves_order() {
        let v = Sequential.map_trials(5, |i| i * i);
        assert_eq!(v, alloc::vec![0, 1, 4, 9, 16]);
        assert_eq!(Sequential.count_trials(10, |i| i % 3 == 0), 4);
    }
}
