use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::series::{series_g, MAX_SERIES_ORDER};
use super::ConstantsError;
use crate::bigcount::scaled_to_f64;
use crate::walklab::WalkKind;

/// How the excursion-area probabilities are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PmfMethod {
    /// Coefficients of `g(x, 1)` from the series recursion (lazy walk only).
    Gf,
    /// First-passage recursion over (height, remaining area), exact.
    Dp,
}

/// Law of the signed area of one excursion of the walk away from 0.
///
/// `p[i]` (for `1 ≤ i ≤ K`) is the probability of a positive excursion of
/// area `i`; negative excursions are symmetric. The lazy walk also has an
/// atom of mass 1/2 at 0 (it sits still on the first step). `pos_tail`
/// collects the positive areas above `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaPmf {
    pub k: usize,
    pub kind: WalkKind,
    /// Index 0 is unused and holds 0.
    pub p: Vec<f64>,
    pub pos_tail: f64,
    /// Exact probabilities when computed exactly.
    pub exact: Option<Vec<BigRational>>,
}

impl AreaPmf {
    /// `P(X = 0)`.
    pub fn zero_mass(&self) -> f64 {
        match self.kind {
            WalkKind::Lazy => 0.5,
            WalkKind::Simple => 0.0,
        }
    }

    /// `P(X > 0)`.
    pub fn half_mass(&self) -> f64 {
        match self.kind {
            WalkKind::Lazy => 0.25,
            WalkKind::Simple => 0.5,
        }
    }

    pub fn exact_zero_mass(&self) -> BigRational {
        match self.kind {
            WalkKind::Lazy => BigRational::new(1.into(), 2.into()),
            WalkKind::Simple => BigRational::zero(),
        }
    }

    pub fn exact_half_mass(&self) -> BigRational {
        match self.kind {
            WalkKind::Lazy => BigRational::new(1.into(), 4.into()),
            WalkKind::Simple => BigRational::new(1.into(), 2.into()),
        }
    }

    /// `P(X = x)` for `|x| ≤ K`.
    pub fn prob(&self, x: i64) -> f64 {
        match x.unsigned_abs() as usize {
            0 => self.zero_mass(),
            i if i <= self.k => self.p[i],
            _ => 0.0,
        }
    }

    /// `P(X ≥ m)` for `m ≥ 1` as suffix sums, `tails[m]` for `m ≤ K + 1`.
    pub fn upper_tails(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.k + 2];
        t[self.k + 1] = self.pos_tail;
        for m in (1..=self.k).rev() {
            t[m] = t[m + 1] + self.p[m];
        }
        t[0] = t[1] + self.zero_mass();
        t
    }

    pub fn exact_pos_tail(&self) -> Option<BigRational> {
        let e = self.exact.as_ref()?;
        Some(self.exact_half_mass() - e[1..].iter().sum::<BigRational>())
    }

    fn from_exact(k: usize, kind: WalkKind, exact: Vec<BigRational>, p: Vec<f64>) -> Self {
        let mut pmf = AreaPmf {
            k,
            kind,
            p,
            pos_tail: 0.0,
            exact: Some(exact),
        };
        let tail = pmf.exact_pos_tail().expect("exact");
        pmf.pos_tail = ratio_to_f64(&tail);
        pmf
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn area_pmf(k: usize, kind: WalkKind, method: PmfMethod) -> Result<AreaPmf, ConstantsError> {
    if k == 0 {
        return Err(ConstantsError::Order {
            what: "area_pmf",
            k,
            max: usize::MAX,
        });
    }
    match method {
        PmfMethod::Gf => {
            if kind != WalkKind::Lazy {
                return Err(ConstantsError::Unsupported(
                    "the series recursion describes the lazy walk only".into(),
                ));
            }
            if k > MAX_SERIES_ORDER {
                return Err(ConstantsError::Order {
                    what: "area_pmf(gf)",
                    k,
                    max: MAX_SERIES_ORDER,
                });
            }
            let g = series_g(k)?;
            let mut exact = vec![BigRational::zero()];
            exact.extend((1..=k).map(|i| g.area_coeff(i)));
            let p = exact.iter().map(ratio_to_f64).collect();
            Ok(AreaPmf::from_exact(k, kind, exact, p))
        }
        PmfMethod::Dp => {
            let (exact, p) = dyadic_dp(k, kind);
            Ok(AreaPmf::from_exact(k, kind, exact, p))
        }
    }
}

/// Same recursion as [`PmfMethod::Dp`] in double precision, for large `K`.
pub fn area_pmf_float(k: usize, kind: WalkKind) -> AreaPmf {
    let h_max = max_height(k);
    // q[a % window][h]: probability of collecting exactly `a` more area
    // before hitting 0 from height h
    let window = h_max + 2;
    let mut q = vec![vec![0.0f64; h_max + 2]; window];
    let mut p = vec![0.0; k + 1];
    let first = match kind {
        WalkKind::Lazy => 0.25,
        WalkKind::Simple => 0.5,
    };
    for a in 0..k {
        let mut row = vec![0.0f64; h_max + 2];
        for h in 1..=max_height(a).min(h_max) {
            let mut s = 0.0;
            for (h2, w) in moves(kind, h) {
                let w = w as f64
                    * match kind {
                        WalkKind::Lazy => 0.25,
                        WalkKind::Simple => 0.5,
                    };
                if h2 == 0 {
                    if a == 0 {
                        s += w;
                    }
                } else if a >= h2 && h2 <= h_max {
                    s += w * q[(a - h2) % window][h2];
                }
            }
            row[h] = s;
        }
        p[a + 1] = first * row[1];
        q[a % window] = row;
    }
    let pos_tail = (first - p.iter().rev().sum::<f64>()).max(0.0);
    AreaPmf {
        k,
        kind,
        p,
        pos_tail,
        exact: None,
    }
}

// Largest height from which the walk can still return with area budget a:
// descending from h collects at least h(h−1)/2.
fn max_height(a: usize) -> usize {
    let mut h = 1;
    while (h + 1) * h / 2 <= a {
        h += 1;
    }
    h
}

// Neighbours and integer multiplicities (out of 4 for lazy, 2 for simple).
fn moves(kind: WalkKind, h: usize) -> impl Iterator<Item = (usize, u32)> {
    match kind {
        WalkKind::Lazy => [(h + 1, 1), (h, 2), (h - 1, 1)].into_iter().take(3),
        WalkKind::Simple => [(h + 1, 1), (h - 1, 1), (0, 0)].into_iter().take(2),
    }
}

// With base B = 4 (lazy) or 2 (simple), a path collecting area a makes at
// most a + 1 steps, so W(h, a) = Q(h, a)·B^{a+1} is an integer and
//   W(h, a) = Σ_{h'} m(h')·W(h', a − h')·B^{h'−1}   (h' ≥ 1)
//           + m(0)·[h = 1, a = 0].
// Then p_i = W(1, i − 1) / B^{i+1}.
fn dyadic_dp(k: usize, kind: WalkKind) -> (Vec<BigRational>, Vec<f64>) {
    let log_b: usize = match kind {
        WalkKind::Lazy => 2,
        WalkKind::Simple => 1,
    };
    let h_max = max_height(k);
    let window = h_max + 2;
    let mut w: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); h_max + 2]; window];
    let mut exact = vec![BigRational::zero(); k + 1];
    let mut p = vec![0.0; k + 1];
    for a in 0..k {
        let mut row = vec![BigUint::zero(); h_max + 2];
        for h in 1..=max_height(a).min(h_max) {
            let mut s = BigUint::zero();
            for (h2, m) in moves(kind, h) {
                if h2 == 0 {
                    if a == 0 {
                        s += m;
                    }
                } else if a >= h2 && h2 <= h_max {
                    let prev = &w[(a - h2) % window][h2];
                    if !prev.is_zero() {
                        s += (prev * m) << ((h2 - 1) * log_b);
                    }
                }
            }
            row[h] = s;
        }
        let shift = (a + 2) * log_b;
        p[a + 1] = scaled_to_f64(&row[1], shift as u64);
        exact[a + 1] = BigRational::new(
            BigInt::from(row[1].clone()),
            BigInt::from(BigUint::one() << shift),
        );
        w[a % window] = row;
    }
    (exact, p)
}
