//! Small numeric helpers shared across modules.

const LEAF: usize = 256;
const PAR_THRESHOLD: usize = 1 << 16;

/// Pairwise (tree) summation with a fixed split rule.
///
/// The tree shape depends only on the slice length, so the result is
/// bit-identical whether or not the halves run on different threads.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let (left, right) = values.split_at(values.len() / 2);
    if values.len() >= PAR_THRESHOLD {
        let (l, r) = rayon::join(|| pairwise_sum(left), || pairwise_sum(right));
        l + r
    } else {
        pairwise_sum(left) + pairwise_sum(right)
    }
}

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}
