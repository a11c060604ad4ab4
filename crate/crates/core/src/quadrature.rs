//! Composite Simpson quadrature on uniformly spaced samples.

/// Pairwise (cascade) summation in a fixed order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Integral of uniformly spaced samples `y` with spacing `h`.
///
/// Composite Simpson over an even number of panels; an odd panel count
/// closes with Simpson's 3/8 rule on the last three panels. Two samples
/// fall back to the trapezoid rule.
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (y[0] + y[1]),
        3 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        _ => {
            let panels = n - 1;
            if panels.is_multiple_of(2) {
                simpson_even(y, h)
            } else {
                let head = &y[..n - 3];
                let tail = &y[n - 4..];
                let three_eighths = 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3]);
                simpson_even(head, h) + three_eighths
            }
        }
    }
}

fn simpson_even(y: &[f64], h: f64) -> f64 {
    if y.len() < 3 {
        return 0.0;
    }
    let last = y.len() - 1;
    let weighted: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if i == 0 || i == last {
                v
            } else if i % 2 == 1 {
                4.0 * v
            } else {
                2.0 * v
            }
        })
        .collect();
    h / 3.0 * pairwise_sum(&weighted)
}
