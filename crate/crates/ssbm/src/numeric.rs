//! Small numerical helpers shared by the learner and the evaluation code.

/// log(sum(exp(x))) computed with a max shift so that large negative
/// log-probabilities do not underflow.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Exponentiates log weights in place (max-shifted) and normalizes them to
/// sum to one. Returns the index of the largest weight, ties to the lowest
/// index. Entries equal to `f64::NEG_INFINITY` become exact zeros.
pub fn softmax_in_place(xs: &mut [f64]) -> usize {
    let mut best = 0;
    let mut max = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        if x > max {
            max = x;
            best = i;
        }
    }
    let mut sum = 0.0;
    for x in xs.iter_mut() {
        *x = if *x == f64::NEG_INFINITY {
            0.0
        } else {
            (*x - max).exp()
        };
        sum += *x;
    }
    for x in xs.iter_mut() {
        *x /= sum;
    }
    best
}

/// Median of a slice; the mean of the two central elements for even lengths.
/// Panics on an empty slice.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in median input"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}
