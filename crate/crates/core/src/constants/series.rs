use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::ConstantsError;

pub const MAX_SERIES_ORDER: usize = 256;

/// The positive-excursion generating function `g(x, y)` of the lazy walk,
/// `Σ P(area i, length j) xⁱ yʲ`, truncated at x-degree `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    k: usize,
    /// `coeffs[i][j]` is the coefficient of `xⁱ yʲ`; row 0 is empty.
    coeffs: Vec<Vec<BigRational>>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficients of `xⁱ` as a polynomial in `y`, indexed by y-degree.
    pub fn x_part(&self, i: usize) -> &[BigRational] {
        self.coeffs.get(i).map_or(&[], |r| r.as_slice())
    }

    /// `[xⁱ] g(x, 1)`.
    pub fn area_coeff(&self, i: usize) -> BigRational {
        self.x_part(i).iter().sum()
    }

    /// The truncation evaluated at `(1, 1)`.
    pub fn eval_one(&self) -> BigRational {
        (1..=self.k).map(|i| self.area_coeff(i)).sum()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().map(move |(j, c)| {
                    c.to_f64().unwrap_or(0.0) * x.powi(i as i32) * y.powi(j as i32)
                })
            })
            .sum()
    }

    /// Non-zero terms as `(i, j, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

// Adds `a · b` into `out`, all as polynomials in y.
fn mul_add(out: &mut Vec<BigRational>, a: &[BigRational], b: &[BigRational]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if out.len() < a.len() + b.len() - 1 {
        out.resize(a.len() + b.len() - 1, BigRational::zero());
    }
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
}

/// Solves `g = xy²/16 + g·h` with `h(x, y) = xy/2 + g(x, xy)` one x-degree
/// at a time. The x-degree-`d` part of `h` only involves `g` below degree
/// `d − 1`, so each step uses already final coefficients.
pub fn series_g(k: usize) -> Result<TruncatedSeries, ConstantsError> {
    if k == 0 || k > MAX_SERIES_ORDER {
        return Err(ConstantsError::Order {
            what: "series_g",
            k,
            max: MAX_SERIES_ORDER,
        });
    }
    let zero = BigRational::zero();
    let mut g: Vec<Vec<BigRational>> = vec![Vec::new(); k + 1];
    let mut h: Vec<Vec<BigRational>> = vec![Vec::new(); k + 1];
    h[1] = vec![zero.clone(), ratio(1, 2)];
    for d in 1..=k {
        let mut gd = Vec::new();
        if d == 1 {
            gd = vec![zero.clone(), zero.clone(), ratio(1, 16)];
        }
        for e in 1..d {
            mul_add(&mut gd, &g[e], &h[d - e]);
        }
        while gd.last().is_some_and(|c| c.is_zero()) {
            gd.pop();
        }
        // g(x, xy) maps xⁱyʲ to x^{i+j} yʲ
        for (j, c) in gd.iter().enumerate() {
            if c.is_zero() || d + j > k {
                continue;
            }
            let row = &mut h[d + j];
            if row.len() <= j {
                row.resize(j + 1, zero.clone());
            }
            row[j] += c;
        }
        g[d] = gd;
    }
    Ok(TruncatedSeries { k, coeffs: g })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_expansion() {
        let g = series_g(6).unwrap();
        let expect: &[(usize, usize, i64, i64)] = &[
            (1, 2, 1, 16),
            (2, 3, 1, 32),
            (3, 4, 1, 64),
            (4, 4, 1, 256),
            (4, 5, 2, 256),
            (5, 5, 1, 256),
            (5, 6, 1, 256),
            (6, 5, 2, 1024),
            (6, 6, 3, 1024),
            (6, 7, 2, 1024),
        ];
        for &(i, j, p, q) in expect {
            assert_eq!(g.coeff(i, j), ratio(p, q), "x^{i} y^{j}");
        }
        assert_eq!(g.terms().count(), expect.len());
    }

    #[test]
    fn truncations_are_consistent_and_below_a_quarter() {
        let big = series_g(30).unwrap();
        let mut prev = BigRational::zero();
        for k in 1..=12 {
            let s = series_g(k).unwrap();
            for (i, j, c) in s.terms() {
                assert_eq!(&big.coeff(i, j), c);
                assert!(c > &BigRational::zero());
            }
            let v = s.eval_one();
            assert!(v > prev && v < ratio(1, 4));
            prev = v;
        }
    }

    #[test]
    fn lengths_bounded_by_area() {
        // an excursion of area i lasts at most i + 1 steps and at least
        // about 2√i steps
        let g = series_g(40).unwrap();
        for (i, j, _) in g.terms() {
            assert!(j <= i + 1 && j * j >= 4 * i, "x^{i} y^{j}");
        }
    }

    #[test]
    fn order_limits() {
        assert!(series_g(0).is_err());
        assert!(series_g(MAX_SERIES_ORDER + 1).is_err());
    }
}
