use serde::{Deserialize, Serialize};

/// Mean, median and sample standard deviation of one column of scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// `n - 1` denominator; absent for a single value.
    pub sd: Option<f64>,
    pub min: f64,
    pub max: f64,
}

/// Summarizes `values`, or returns `None` when empty.
///
/// Mean and deviation use Welford's running update; the median selects the
/// middle element(s) without a full sort and averages the two central values
/// for even lengths.
pub fn summarize(values: &[f64]) -> Option<SummaryStats> {
    if values.is_empty() {
        return None;
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
        min = min.min(x);
        max = max.max(x);
    }
    let n = values.len();
    let sd = (n > 1).then(|| (m2 / (n - 1) as f64).max(0.0).sqrt());
    Some(SummaryStats { n, mean, median: median(values), sd, min, max })
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    let mid = v.len() / 2;
    let (lower, upper, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if values.len() % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (below + upper) / 2.0
    }
}
