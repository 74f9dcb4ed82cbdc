//! Means, variances and level-density statistics of the BC_N chains.

use crate::error::{Error, Result};
use crate::partition_functions::total_states;
use crate::scalar::Real;
use crate::site_solver::{ChainFamily, SiteConfig};
use crate::special::erf;
use crate::spectrum::SymbolicTable;
use crate::spin_algebra::Sign;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial of degree at most two in β̄ with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaPoly {
    pub c: [BigRational; 3],
}

impl BetaPoly {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        BetaPoly { c: [c0, c1, c2] }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn add(&self, o: &BetaPoly) -> BetaPoly {
        BetaPoly::new(&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2])
    }

    pub fn sub(&self, o: &BetaPoly) -> BetaPoly {
        BetaPoly::new(&self.c[0] - &o.c[0], &self.c[1] - &o.c[1], &self.c[2] - &o.c[2])
    }

    pub fn scale(&self, s: &BigRational) -> BetaPoly {
        BetaPoly::new(&self.c[0] * s, &self.c[1] * s, &self.c[2] * s)
    }

    /// Product, which must stay within degree two.
    pub fn mul(&self, o: &BetaPoly) -> Result<BetaPoly> {
        let mut out = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for i in 0..3 {
            for j in 0..3 {
                out[i + j] += &self.c[i] * &o.c[j];
            }
        }
        if !out[3].is_zero() || !out[4].is_zero() {
            return Err(Error::Invariant("β̄ polynomial exceeds degree two".into()));
        }
        let [a, b, c, _, _] = out;
        Ok(BetaPoly::new(a, b, c))
    }

    pub fn evaluate(&self, beta_bar: f64) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.c[0]) + beta_bar * (f(&self.c[1]) + beta_bar * f(&self.c[2]))
    }

    pub fn to_f64s(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.c[k].to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for BetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·β̄ + {}·β̄²", self.c[0], self.c[1], self.c[2])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: BetaPoly,
    pub variance: BetaPoly,
}

/// Closed forms of the site sums Σ₁, Σ₂, Σ₃ as polynomials in β̄.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPolys {
    pub s1: BetaPoly,
    pub s2: BetaPoly,
    pub s3: BetaPoly,
    pub emax: BetaPoly,
}

pub fn sigmas_closed(n: usize) -> SigmaPolys {
    let n = n as i64;
    let s1 = BetaPoly::new(rat(n * (n - 1), 4), rat(n, 2), rat(0, 1));
    let s2 = BetaPoly::new(
        rat(n * (n - 1) * (8 * n * n * n + 3 * n * n + 13 * n - 12), 720),
        rat(n * (n - 1) * (5 * n * n + 7 * n + 20), 144),
        rat(2 * n * (2 * n * n + 3 * n + 13), 144),
    );
    // 8Σ₃ = β̄Σ₁
    let s3 = BetaPoly::new(rat(0, 1), rat(n * (n - 1), 32), rat(n, 16));
    let emax = BetaPoly::new(rat(n * (n + 1) * (2 * n - 2), 6), rat(n * (n + 1), 2), rat(0, 1));
    SigmaPolys { s1, s2, s3, emax }
}

/// Mean and variance of the spectrum of `H_{εε′}` in closed form.
pub fn moments_closed(n: usize, two_m: u32, eps: Sign, epsp: Sign) -> Result<Moments> {
    if n == 0 || two_m == 0 {
        return Err(Error::InvalidArgument("N and 2M must be positive".into()));
    }
    let sig = sigmas_closed(n);
    if eps == Sign::Plus {
        // H_{+,ε′} = E_max - H_{-,-ε′}
        let dual = moments_closed(n, two_m, Sign::Minus, epsp.flip())?;
        return Ok(Moments { mean: sig.emax.sub(&dual.mean), variance: dual.variance });
    }
    let tm = two_m as i64;
    let m = rat(tm, 2);
    let m1 = rat(tm + 2, 2);
    let inv = rat(1, tm + 1);
    let mut mean = sig.emax.scale(&m1);
    let sub = if tm % 2 == 1 {
        sig.s1.clone()
    } else if epsp == Sign::Plus {
        sig.s1.scale(&rat(2, 1))
    } else {
        BetaPoly::zero()
    };
    mean = mean.sub(&sub).scale(&inv);
    let pref = &m * &m1 * rat(4, (tm + 1) * (tm + 1));
    let mut variance = sig.s2.scale(&pref);
    if tm % 2 == 1 {
        variance = variance.add(&sig.s3.scale(&rat(4, (tm + 1) * (tm + 1))));
    }
    Ok(Moments { mean, variance })
}

/// Mean and variance of a symbolic table with β̄ kept formal.
pub fn moments_from_table(t: &SymbolicTable, n: usize, two_m: u32) -> Result<Moments> {
    let expected = total_states(n, two_m);
    let total = t.total();
    if total != expected {
        return Err(Error::IncompleteTable { expected: expected.to_string(), got: total.to_string() });
    }
    let mut first = [BigInt::zero(), BigInt::zero()];
    let mut second = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (e, d) in t.levels() {
        if e.p != 0 {
            return Err(Error::InvalidArgument("moments need a field-free table".into()));
        }
        let (m, c) = (BigInt::from(e.m), BigInt::from(e.n));
        first[0] += d * &c;
        first[1] += d * &m;
        second[0] += d * &c * &c;
        second[1] += d * &m * &c * 2;
        second[2] += d * &m * &m;
    }
    let q = |x: &BigInt| BigRational::new(x.clone(), total.clone());
    let mean = BetaPoly::new(q(&first[0]), q(&first[1]), BigRational::zero());
    let raw = BetaPoly::new(q(&second[0]), q(&second[1]), q(&second[2]));
    let variance = raw.sub(&mean.mul(&mean)?);
    Ok(Moments { mean, variance })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sigmas {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

/// Σ₁, Σ₂, Σ₃ summed over the couplings `h_ij`, `h̃_ij`, `h_i` at solved sites.
pub fn sigmas_from_sites<T: Real>(sites: &SiteConfig<T>) -> Result<Sigmas> {
    let ChainFamily::Bcn { beta, betap } = sites.family else {
        return Err(Error::InvalidArgument("Σ sums need BC_N sites".into()));
    };
    let x: Vec<f64> = sites.xi.iter().map(|v| v.as_f64()).collect();
    let (beta, betap) = (beta.as_f64(), betap.as_f64());
    let n = x.len();
    let csc2 = |t: f64| 1.0 / t.sin().powi(2);
    let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let hi = (beta * csc2(x[i]) + betap / x[i].cos().powi(2)) / 8.0;
        s1 += hi;
        s2 += hi * hi;
        s3 += hi * hi / 4.0;
        for j in (0..n).filter(|&j| j != i) {
            let h = csc2(x[i] - x[j]) / 8.0;
            let ht = csc2(x[i] + x[j]) / 8.0;
            s2 += 2.0 * (h * h + ht * ht);
            s3 -= h * ht;
        }
    }
    Ok(Sigmas { s1, s2, s3 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianFit {
    pub mu: f64,
    pub sigma: f64,
    pub sup_diff: f64,
    pub mse: f64,
}

/// Compares the cumulative level distribution of `levels` (energy, degeneracy) with the
/// normal law of the same mean and deviation, at the distinct energies.
pub fn gaussian_compare(levels: &[(f64, f64)]) -> Result<GaussianFit> {
    let mut lv = levels.to_vec();
    lv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = lv.iter().map(|l| l.1).sum();
    if total <= 0.0 {
        return Err(Error::NoVariance);
    }
    let mu = lv.iter().map(|l| l.0 * l.1).sum::<f64>() / total;
    let var = lv.iter().map(|l| (l.0 - mu).powi(2) * l.1).sum::<f64>() / total;
    if var <= 1e-300 {
        return Err(Error::NoVariance);
    }
    let sigma = var.sqrt();
    let mut acc = 0.0;
    let (mut sup, mut sq) = (0.0f64, 0.0);
    for (e, d) in &lv {
        acc += d;
        let g = 0.5 * (1.0 + erf((e - mu) / (std::f64::consts::SQRT_2 * sigma)));
        let diff = (acc / total - g).abs();
        sup = sup.max(diff);
        sq += diff * diff;
    }
    Ok(GaussianFit { mu, sigma, sup_diff: sup, mse: sq / lv.len() as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_mean_example() {
        let m = moments_closed(3, 2, Sign::Minus, Sign::Minus).unwrap();
        assert_eq!(m.mean, BetaPoly::new(rat(16, 3), rat(4, 1), rat(0, 1)));
    }

    #[test]
    fn half_integer_mean_is_epsp_free() {
        for n in 1..6 {
            let a = moments_closed(n, 3, Sign::Minus, Sign::Plus).unwrap();
            let b = moments_closed(n, 3, Sign::Minus, Sign::Minus).unwrap();
            assert_eq!(a.mean, b.mean);
        }
    }

    #[test]
    fn single_level_table() {
        let t = SymbolicTable::new(vec![(crate::QExponent::new(2, 3, 0), BigInt::from(4))]);
        let m = moments_from_table(&t, 2, 1).unwrap();
        assert_eq!(m.mean, BetaPoly::new(rat(3, 1), rat(2, 1), rat(0, 1)));
        assert_eq!(m.variance, BetaPoly::zero());
        assert_eq!(gaussian_compare(&[(1.0, 4.0)]), Err(Error::NoVariance));
    }
}
