use serde::{Deserialize, Serialize};

/// Per-item seed derived from the run seed and the item index with the
/// SplitMix64 finalizer:
///
/// ```text
/// z = master + 0x9E3779B97F4A7C15 * (index + 1)   (wrapping)
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z ^ (z >> 31)
/// ```
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Loss-corrected probability: `p` renormalized by the surviving trace.
/// The trace is capped at one so rounding can never push the corrected
/// value below the raw one.
pub fn post_select(p: f64, trace: f64) -> f64 {
    p / trace.min(1.0)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean: sample standard deviation (`n - 1`
/// denominator) over `sqrt(n)`. Zero for fewer than two values.
pub fn sem(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// One row of `summary.csv`: aggregates over the items of one size (QV
/// depth, BV data-register width or Grover iteration count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub size: usize,
    pub mean_raw: f64,
    pub mean_corrected: f64,
    pub sem: f64,
    pub mean_loss: f64,
    pub pass_raw: Option<bool>,
    pub pass_corrected: Option<bool>,
}

impl SizeSummary {
    pub fn from_items(size: usize, raw: &[f64], corrected: &[f64], loss: &[f64]) -> Self {
        SizeSummary {
            size,
            mean_raw: mean(raw),
            mean_corrected: mean(corrected),
            sem: sem(raw),
            mean_loss: mean(loss),
            pass_raw: None,
            pass_corrected: None,
        }
    }
}
