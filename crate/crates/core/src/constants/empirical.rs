use num_bigint::Sign;

use crate::bigcount::{scaled_to_f64, BigCount};

/// `(n, G(n)·n^{3/4}/4ⁿ)` where `g[i]` is `G(i + 1)`. Zero counts are skipped.
pub fn c_empirical(g: &[BigCount]) -> Vec<(u32, f64)> {
    g.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| {
            let n = i as u32 + 1;
            (
                n,
                v.to_f64_scaled(2 * u64::from(n)) * f64::from(n).powf(0.75),
            )
        })
        .collect()
}

/// `(n, (G(n) − H(n))·n^{5/2}/4ⁿ)` over the common prefix of `g` and `h`;
/// entries where both counts vanish are skipped.
pub fn parity_gap(g: &[BigCount], h: &[BigCount]) -> Vec<(u32, f64)> {
    g.iter()
        .zip(h)
        .enumerate()
        .filter(|(_, (a, b))| !(a.is_zero() && b.is_zero()))
        .map(|(i, (a, b))| {
            let n = i as u32 + 1;
            let diff = a.to_bigint() - b.to_bigint();
            let mag = scaled_to_f64(diff.magnitude(), 2 * u64::from(n));
            let signed = if diff.sign() == Sign::Minus {
                -mag
            } else {
                mag
            };
            (n, signed * f64::from(n).powf(2.5))
        })
        .collect()
}
