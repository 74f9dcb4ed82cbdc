//! Spectrum of the BC_N spin Sutherland model at finite coupling, truncated partition
//! sums and the numerical freezing check.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::partition_functions::DegeneracySpec;
use crate::spectrum::big_to_f64;
use crate::spin_algebra::{Sign, SpinSpace};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Nonincreasing multiindex `n_1 ≥ … ≥ n_N ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(n: Vec<u32>) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::InvalidArgument("empty multiindex".into()));
        }
        if n.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("multiindex {n:?} is not nonincreasing")));
        }
        Ok(MultiIndex(n))
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Runs of equal entries as `(value, length)`, in order.
    pub fn blocks(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((w, k)) if *w == v => *k += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// Every multiindex of length `len` with `n_1 ≤ cutoff`, in lexicographic order.
    pub fn enumerate(len: usize, cutoff: u32) -> Vec<MultiIndex> {
        fn rec(len: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() == len {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in 0..=max {
                cur.push(v);
                rec(len, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(len, cutoff, &mut Vec::new(), &mut out);
        out
    }

    pub fn to_csv_field(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DynParams {
    pub n: usize,
    pub two_m: u32,
    pub eps: Sign,
    pub epsp: Sign,
    pub a: f64,
    pub beta: f64,
    pub betap: f64,
}

impl DynParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.two_m == 0 {
            return Err(Error::InvalidArgument("N and 2M must be positive".into()));
        }
        if !(self.a > 0.0 && self.beta > 0.0 && self.betap > 0.0) {
            return Err(Error::InvalidArgument("a, β and β′ must be positive".into()));
        }
        Ok(())
    }

    pub fn beta_bar(&self) -> f64 {
        0.5 * (self.beta + self.betap)
    }

    /// Ground-state energy `N[⅔(N-1)(2N-1)a² + 2(N-1)a(b+b′) + (b+b′)²]`.
    pub fn ground_energy(&self) -> f64 {
        let n = self.n as f64;
        let a = self.a;
        let bb = a * (self.beta + self.betap);
        n * (2.0 / 3.0 * (n - 1.0) * (2.0 * n - 1.0) * a * a + 2.0 * (n - 1.0) * a * bb + bb * bb)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Energy {
    pub energy: f64,
    /// `E_n - E_0`
    pub normalized: f64,
}

/// `E_n = Σ_i (2n_i + b + b′ + 2a(N-i))²` and its offset from the ground state.
pub fn energy(n: &MultiIndex, p: &DynParams) -> Energy {
    let bb = p.a * (p.beta + p.betap);
    let len = n.len();
    let mut e = 0.0;
    let mut norm = 0.0;
    for (k, &v) in n.values().iter().enumerate() {
        let i = (k + 1) as f64;
        let v = v as f64;
        let base = bb + 2.0 * p.a * (len as f64 - i);
        e += (2.0 * v + base).powi(2);
        norm += 4.0 * v * v + 8.0 * p.a * v * (p.beta_bar() + len as f64 - i);
    }
    Energy { energy: e, normalized: norm }
}

/// Number of spin states attached to `n`, from the block binomials.
pub fn degeneracy(n: &MultiIndex, two_m: u32, eps: Sign, epsp: Sign) -> Result<BigInt> {
    let spec = DegeneracySpec::new(two_m, eps, epsp)?;
    Ok(n.blocks()
        .into_iter()
        .map(|(v, k)| if v == 0 { spec.zero_weight(k) } else { spec.block_weight(k) })
        .fold(BigInt::one(), |acc, w| acc * w))
}

/// Counts spin configurations obeying the ordering constraints of each block.
pub fn degeneracy_oracle(n: &MultiIndex, two_m: u32, eps: Sign, epsp: Sign) -> Result<BigInt> {
    let space = SpinSpace::new(two_m, n.len())?;
    let dim = space.dim_capped(crate::spin_algebra::DEFAULT_DIM_CAP)?;
    let vals = n.values();
    let mut s = vec![0; n.len()];
    let mut count = 0u64;
    'states: for idx in 0..dim {
        space.decode_into(idx, &mut s);
        for i in 0..vals.len() {
            if vals[i] == 0 && epsp == Sign::Minus && s[i] < 1 {
                continue 'states;
            }
            if vals[i] == 0 && epsp == Sign::Plus && s[i] < 0 {
                continue 'states;
            }
            for j in i + 1..vals.len() {
                if vals[i] == vals[j] {
                    let gap = s[i] - s[j];
                    if (eps == Sign::Minus && gap < 2) || (eps == Sign::Plus && gap < 0) {
                        continue 'states;
                    }
                }
            }
        }
        count += 1;
    }
    Ok(BigInt::from(count))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncatedSums {
    pub z_spin: f64,
    pub z_scalar: f64,
    /// contributions of the outermost shell `n_1 = cutoff`
    pub last_shell_spin: f64,
    pub last_shell_scalar: f64,
}

impl TruncatedSums {
    pub fn ratio(&self) -> f64 {
        self.z_spin / self.z_scalar
    }
}

/// Spin and scalar partition sums at temperature `8aT`, truncated to `n_1 ≤ cutoff`.
pub fn z_truncated(p: &DynParams, temperature: f64, cutoff: u32) -> Result<TruncatedSums> {
    p.validate()?;
    let spec = DegeneracySpec::new(p.two_m, p.eps, p.epsp)?;
    let kt = 8.0 * p.a * temperature;
    let shells: Vec<(f64, f64)> = (0..=cutoff)
        .into_par_iter()
        .map(|top| {
            let mut spin = 0.0;
            let mut scalar = 0.0;
            for rest in MultiIndex::enumerate(p.n - 1, top) {
                let mut v = vec![top];
                v.extend_from_slice(rest.values());
                let n = MultiIndex(v);
                let w = (-energy(&n, p).normalized / kt).exp();
                let d = n
                    .blocks()
                    .into_iter()
                    .map(|(v, k)| if v == 0 { spec.zero_weight(k) } else { spec.block_weight(k) })
                    .fold(BigInt::one(), |acc, x| acc * x);
                spin += big_to_f64(&d) * w;
                scalar += w;
            }
            (spin, scalar)
        })
        .collect();
    let (z_spin, z_scalar) = shells.iter().fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let last = shells[cutoff as usize];
    Ok(TruncatedSums { z_spin, z_scalar, last_shell_spin: last.0, last_shell_scalar: last.1 })
}

/// `Z_spin(8aT) / Z_sc(8aT)`, which tends to the chain partition function as `a → ∞`.
pub fn freeze_ratio(p: &DynParams, temperature: f64, cutoff: u32) -> Result<f64> {
    Ok(z_truncated(p, temperature, cutoff)?.ratio())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagneticLevel {
    pub energy: f64,
    pub normalized: f64,
    pub multiplicity: BigInt,
}

/// Levels of the spin 1/2 model with `ε = -1` in a field `B` attached to `n`.
pub fn magnetic_levels(n: &MultiIndex, p: &DynParams, field: f64) -> Result<Vec<MagneticLevel>> {
    if p.two_m != 1 {
        return Err(Error::InvalidSpin("magnetic levels need M = 1/2".into()));
    }
    if p.eps != Sign::Minus {
        return Err(Error::InvalidArgument("magnetic levels need ε = -1".into()));
    }
    if degeneracy(n, 1, Sign::Minus, p.epsp)?.is_zero() {
        return Ok(Vec::new());
    }
    let blocks = n.blocks();
    let rho = blocks.iter().filter(|(_, k)| *k == 1).count() as i64;
    let zero_tail = *n.values().last().unwrap() == 0;
    let free = if zero_tail { rho - 1 } else { rho };
    let base = energy(n, p);
    let tail_shift = if zero_tail { 1 + p.epsp.value() as i64 } else { 0 };
    Ok((0..=free)
        .map(|varrho| {
            let shift = 8.0 * p.a * field * (rho - 2 * varrho - tail_shift) as f64;
            MagneticLevel {
                energy: base.energy + shift,
                normalized: base.normalized + shift,
                multiplicity: binomial(free, varrho),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, eps: Sign, epsp: Sign) -> DynParams {
        DynParams { n, two_m: 1, eps, epsp, a: 1.0, beta: 1.0, betap: 1.0 }
    }

    #[test]
    fn energy_examples() {
        let p = params(1, Sign::Minus, Sign::Minus);
        let e = energy(&MultiIndex::new(vec![1]).unwrap(), &p);
        assert_eq!(e.energy, 16.0);
        assert_eq!(e.normalized, 12.0);
        let p3 = DynParams { n: 3, a: 0.7, beta: 1.3, betap: 0.4, ..params(3, Sign::Plus, Sign::Plus) };
        let e0 = energy(&MultiIndex::zero(3), &p3);
        assert_eq!(e0.normalized, 0.0);
        assert!((e0.energy - p3.ground_energy()).abs() < 1e-12);
    }

    #[test]
    fn degeneracy_examples() {
        let z = MultiIndex::zero(2);
        assert_eq!(degeneracy(&z, 1, Sign::Plus, Sign::Plus).unwrap(), 1.into());
        assert_eq!(degeneracy_oracle(&z, 1, Sign::Plus, Sign::Plus).unwrap(), 1.into());
        let n = MultiIndex::new(vec![1, 0]).unwrap();
        assert_eq!(degeneracy(&n, 1, Sign::Minus, Sign::Minus).unwrap(), 2.into());
        assert_eq!(degeneracy_oracle(&n, 1, Sign::Minus, Sign::Minus).unwrap(), 2.into());
        let big = MultiIndex::new(vec![2, 2, 2]).unwrap();
        assert!(degeneracy(&big, 1, Sign::Minus, Sign::Plus).unwrap().is_zero());
    }

    #[test]
    fn cutoff_zero_ratio() {
        let p = DynParams { n: 2, two_m: 3, ..params(2, Sign::Plus, Sign::Minus) };
        let d = degeneracy(&MultiIndex::zero(2), 3, Sign::Plus, Sign::Minus).unwrap();
        assert_eq!(freeze_ratio(&p, 1.0, 0).unwrap(), big_to_f64(&d));
    }

    #[test]
    fn magnetic_distinct_parts() {
        let p = params(3, Sign::Minus, Sign::Plus);
        let n = MultiIndex::new(vec![3, 2, 1]).unwrap();
        let lv = magnetic_levels(&n, &p, 0.5).unwrap();
        let base = energy(&n, &p).energy;
        assert_eq!(lv.len(), 4);
        for (k, l) in lv.iter().enumerate() {
            assert!((l.energy - base - 4.0 * (3.0 - 2.0 * k as f64)).abs() < 1e-12);
            assert_eq!(l.multiplicity, binomial(3, k as i64));
        }
        let one = magnetic_levels(&MultiIndex::zero(1), &params(1, Sign::Minus, Sign::Plus), 0.5).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one[0].normalized + 4.0).abs() < 1e-12);
    }
}
