use super::ConstantsError;

/// Richardson extrapolation of `v(n) ≈ a + b/n + c/n² + …` to `n → ∞`.
///
/// Builds the Neville table in `h = 1/n`; with `m` points the apex removes
/// the first `m − 1` error terms.
pub fn richardson(points: &[(f64, f64)]) -> Result<f64, ConstantsError> {
    Ok(*richardson_table(points)?.last().unwrap().last().unwrap())
}

/// The full table; row `i` holds the extrapolations ending at point `i`.
pub fn richardson_table(points: &[(f64, f64)]) -> Result<Vec<Vec<f64>>, ConstantsError> {
    if points.len() < 2 {
        return Err(ConstantsError::Invalid(
            "richardson needs at least two points".into(),
        ));
    }
    for (i, a) in points.iter().enumerate() {
        if a.0.is_nan() || a.0 <= 0.0 {
            return Err(ConstantsError::Invalid(format!("non-positive n = {}", a.0)));
        }
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(ConstantsError::Invalid(format!("duplicate n = {}", a.0)));
        }
    }
    let h: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let mut row = vec![points[i].1];
        for j in 1..=i {
            let prev = &table[i - 1];
            let t = row[j - 1] + (row[j - 1] - prev[j - 1]) * h[i] / (h[i - j] - h[i]);
            row.push(t);
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn recovers_linear_model() {
        let pts: Vec<_> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&n| (n, 0.5 + 3.0 / n))
            .collect();
        assert!((richardson(&pts).unwrap() - 0.5).abs() < 1e-14);
        assert!((richardson(&pts[..2]).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(richardson(&[(4.0, 1.0)]).is_err());
        assert!(richardson(&[(4.0, 1.0), (4.0, 2.0)]).is_err());
        assert!(richardson(&[(0.0, 1.0), (4.0, 2.0)]).is_err());
    }

    proptest! {
        #[test]
        fn exact_for_polynomials_in_inverse_n(
            a in -1.0f64..1.0, b in -5.0f64..5.0, c in -5.0f64..5.0, base in 4.0f64..50.0,
        ) {
            let pts: Vec<_> = (0..3)
                .map(|i| {
                    let n = base * 2f64.powi(i);
                    (n, a + b / n + c / (n * n))
                })
                .collect();
            prop_assert!((richardson(&pts).unwrap() - a).abs() < 1e-10);
        }
    }
}
