//! Streaming statistics and small fitting helpers.

use serde::{Deserialize, Serialize};

/// Welford accumulator; merges associatively so chain results can be
/// combined in a fixed order regardless of scheduling.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Running {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Running {
    pub fn new() -> Self {
        Running::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Running) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let d = other.mean - self.mean;
        let n = n1 + n2;
        self.mean += d * n2 / n;
        self.m2 += other.m2 + d * d * n1 * n2 / n;
        self.count += other.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count as f64 - 1.0)
        }
    }

    /// Standard error of the mean (i.i.d. assumption).
    pub fn se(&self) -> f64 {
        if self.count < 2 {
            f64::INFINITY
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Mean and standard error from batch means: robust to autocorrelation as
/// long as batches are longer than the correlation time.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub samples: u64,
}

impl Estimate {
    /// Consistency of two independent estimates within `k` combined SEs.
    pub fn agrees_with(&self, other: &Estimate, k: f64) -> bool {
        let se = (self.se * self.se + other.se * other.se).sqrt();
        (self.mean - other.mean).abs() <= k * se
    }

    /// Consistency with an exact reference value within `k` SEs.
    pub fn matches_value(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se
    }
}

/// Batch-means estimate over a sample series, with `nbatch` equal batches
/// (default 32, capped by the sample count).
pub fn batch_estimate(samples: &[f64], nbatch: usize) -> Estimate {
    let n = samples.len();
    if n == 0 {
        return Estimate {
            mean: f64::NAN,
            se: f64::INFINITY,
            samples: 0,
        };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let b = nbatch.clamp(2, n.max(2));
    if n < 2 * b {
        let mut r = Running::new();
        for &x in samples {
            r.push(x);
        }
        return Estimate {
            mean,
            se: r.se(),
            samples: n as u64,
        };
    }
    let per = n / b;
    let mut batch_means = Vec::with_capacity(b);
    for i in 0..b {
        let chunk = &samples[i * per..(i + 1) * per];
        batch_means.push(chunk.iter().sum::<f64>() / per as f64);
    }
    let mut r = Running::new();
    for &m in &batch_means {
        r.push(m);
    }
    Estimate {
        mean,
        se: r.se(),
        samples: n as u64,
    }
}

/// Least-squares line `y = a + b x`; returns `(a, b, rms_residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let b = if denom.abs() < 1e-300 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    };
    let a = (sy - b * sx) / n;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (a + b * x);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (a, b, rms)
}

/// log-sum-exp of a slice, safe against overflow and empty input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() && m < 0.0 {
        return f64::NEG_INFINITY;
    }
    let s: f64 = values.iter().map(|v| (v - m).exp()).sum();
    m + s.ln()
}
