//! Small statistics helpers for summaries and acceptance checks.

use statrs::distribution::{ContinuousCDF, StudentsT};

/// Running mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        let (a, b) = (self.count as f64, other.count as f64);
        self.mean += delta * b / total as f64;
        self.m2 += other.m2 + delta * delta * a * b / total as f64;
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }

    pub fn variance(&self) -> Option<f64> {
        (self.count > 1).then(|| self.m2 / (self.count - 1) as f64)
    }

    pub fn std_error(&self) -> Option<f64> {
        self.variance().map(|v| (v / self.count as f64).sqrt())
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Linear-interpolated quantile (type 7) of unsorted data.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64))
}

/// Mean and batch-means standard error, for autocorrelated series.
pub fn batch_means(values: &[f64], batches: usize) -> Option<(f64, f64)> {
    if batches < 2 || values.len() < batches {
        return None;
    }
    let size = values.len() / batches;
    let m: Moments = values
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    Some((m.mean()?, m.std_error()?))
}

/// Ordinary least-squares fit `y = a + b t` with a one-sided p-value for
/// `b < 0` under the usual Student-t model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendFit {
    pub slope: f64,
    pub slope_se: f64,
    pub p_negative: f64,
}

pub fn trend(ys: &[f64]) -> Option<TrendFit> {
    let n = ys.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let t_mean = (nf - 1.0) / 2.0;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxx += dt * dt;
        sxy += dt * (y - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let sse: f64 = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let r = y - intercept - slope * i as f64;
            r * r
        })
        .sum();
    let dof = nf - 2.0;
    let slope_se = (sse / dof / sxx).sqrt();
    let p_negative = if slope_se > 0.0 {
        let dist = StudentsT::new(0.0, 1.0, dof).ok()?;
        dist.cdf(slope / slope_se)
    } else if slope < 0.0 {
        0.0
    } else {
        1.0
    };
    Some(TrendFit {
        slope,
        slope_se,
        p_negative,
    })
}
