//! Closed-form partition functions of the BC_N chains as polynomials in `q`.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::qseries::{QExponent, QPoly, QRat};
use crate::spin_algebra::Sign;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

/// An ordered tuple of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    pub parts: Vec<usize>,
}

impl Composition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `K_1 < K_2 < … < K_r = N`
    pub fn partial_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }

    /// Number of parts equal to one.
    pub fn ones(&self) -> usize {
        self.parts.iter().filter(|&&k| k == 1).count()
    }
}

fn compositions_bounded(n: usize, max_part: usize) -> Vec<Composition> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition { parts: cur.clone() });
            return;
        }
        for k in 1..=rest.min(max_part) {
            cur.push(k);
            rec(rest - k, max_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, max_part, &mut Vec::new(), &mut out);
    }
    out
}

/// All compositions of `n`, in lexicographic order.
pub fn compositions(n: usize) -> Vec<Composition> {
    compositions_bounded(n, n)
}

/// Compositions of `n` with parts in {1, 2}, in lexicographic order.
pub fn compositions_12(n: usize) -> Vec<Composition> {
    compositions_bounded(n, 2)
}

/// `ν_i = i(β̄ + N - (i+1)/2)`
pub fn nu(i: usize, n: usize) -> QExponent {
    let i = i as i64;
    let n = n as i64;
    let twice = i * (2 * n - i - 1);
    assert!(twice % 2 == 0, "odd exponent numerator");
    QExponent::new(i, twice / 2, 0)
}

/// `N_j` for the `j`-th (1-based) partial sum of `k`.
pub fn nj_exponent(k: &Composition, j: usize, n: usize) -> QExponent {
    let kj: usize = k.parts[..j].iter().sum();
    nu(kj, n)
}

/// Degeneracy data of the chain `H_{εε′}` for spin `M = two_m/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegeneracySpec {
    pub eps: Sign,
    pub epsp: Sign,
    pub two_m: u32,
}

impl DegeneracySpec {
    pub fn new(two_m: u32, eps: Sign, epsp: Sign) -> Result<Self> {
        if two_m == 0 {
            return Err(Error::InvalidSpin("M must be at least 1/2".into()));
        }
        Ok(DegeneracySpec { eps, epsp, two_m })
    }

    /// `⌊M⌋ + 1`
    pub fn m_plus(&self) -> i64 {
        (self.two_m / 2) as i64 + 1
    }

    /// `⌈M⌉`
    pub fn m_minus(&self) -> i64 {
        ((self.two_m + 1) / 2) as i64
    }

    fn m_epsp(&self) -> i64 {
        match self.epsp {
            Sign::Plus => self.m_plus(),
            Sign::Minus => self.m_minus(),
        }
    }

    fn bosonic(&self, k: usize) -> i64 {
        if self.eps == Sign::Plus {
            k as i64 - 1
        } else {
            0
        }
    }

    /// Spin states of a block of `k` equal nonzero quantum numbers.
    pub fn block_weight(&self, k: usize) -> BigInt {
        binomial(self.two_m as i64 + 1 + self.bosonic(k), k as i64)
    }

    /// Spin states of a block of `k` vanishing quantum numbers.
    pub fn zero_weight(&self, k: usize) -> BigInt {
        binomial(self.m_epsp() + self.bosonic(k), k as i64)
    }

    /// Largest block size with nonzero weight, if bounded.
    fn max_block(&self) -> Option<usize> {
        match self.eps {
            Sign::Minus => Some(self.two_m as usize + 1),
            Sign::Plus => None,
        }
    }
}

/// `Π_i (1 - q^{ν_i})`; the scalar partition function tends to its reciprocal.
pub fn z_scalar_limit(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, i| acc.mul_one_minus(nu(i, n)))
}

fn last_factor(spec: &DegeneracySpec, k: usize, top: QExponent) -> QPoly {
    let zero = spec.zero_weight(k);
    let full = spec.block_weight(k);
    QPoly::from_terms([(QExponent::ZERO, zero.clone()), (top, full - zero)])
}

/// Partition function of the chain `H_{εε′}` with N sites and spin `two_m/2`.
///
/// The sum over compositions is regrouped by the position of the last cut, so
/// each partial product is shared by every composition with the same prefix.
pub fn z_chain(n: usize, two_m: u32, eps: Sign, epsp: Sign) -> Result<QPoly> {
    let spec = DegeneracySpec::new(two_m, eps, epsp)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let window = spec.max_block().unwrap_or(n);
    let nus: Vec<QExponent> = (0..=n).map(|i| nu(i, n)).collect();
    // pending[p]: sum over cut sequences ending at p of the weights accumulated so far
    let mut pending = vec![QPoly::zero(); n];
    pending[0] = QPoly::one();
    let mut z = QPoly::zero();
    for start in 0..n {
        let mut run = std::mem::take(&mut pending[start]);
        if run.is_zero() {
            continue;
        }
        for end in start + 1..=n.min(start + window) {
            let k = end - start;
            if end == n {
                z = &z + &(&run * &last_factor(&spec, k, nus[n]));
            } else {
                let w = spec.block_weight(k);
                pending[end] = pending[end].add_shifted(&run, nus[end], &w);
                run = run.mul_one_minus(nus[end]);
            }
        }
    }
    Ok(z)
}

/// The same partition function summed composition by composition.
pub fn z_chain_by_compositions(n: usize, two_m: u32, eps: Sign, epsp: Sign) -> Result<QPoly> {
    let spec = DegeneracySpec::new(two_m, eps, epsp)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let terms: Vec<QPoly> = compositions(n)
        .par_iter()
        .map(|k| {
            let sums = k.partial_sums();
            let r = k.len();
            let mut t = QPoly::one();
            for j in 0..r - 1 {
                t = t.shift(nj_exponent(k, j + 1, n)).scale(&spec.block_weight(k.parts[j]));
            }
            for i in 1..=n {
                if !sums.contains(&i) {
                    t = t.mul_one_minus(nu(i, n));
                }
            }
            let top = nj_exponent(k, r, n);
            let kr = k.parts[r - 1];
            let last = &QPoly::one_minus(top).scale(&spec.zero_weight(kr))
                + &QPoly::monomial(top, spec.block_weight(kr));
            &t * &last
        })
        .collect();
    Ok(terms.iter().fold(QPoly::zero(), |acc, t| &acc + t))
}

/// Partition function of the spin 1/2 chain `H_{-,ε′} - B Σ_i S_i`.
pub fn z_chain_magnetic(n: usize, epsp: Sign) -> Result<QPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let qb = QPoly::monomial(QExponent::new(0, 0, 1), 1);
    let qmb = QPoly::monomial(QExponent::new(0, 0, -1), 1);
    let d = &qb + &qmb;
    let zero_energy = QExponent::new(0, 0, -epsp.value() as i64);
    let numerators: Vec<QPoly> = compositions_12(n)
        .par_iter()
        .map(|k| {
            let sums = k.partial_sums();
            let r = k.len();
            let mut t = d.pow(k.ones() as u32);
            for j in 1..r {
                t = t.shift(nj_exponent(k, j, n));
            }
            for i in 1..=n {
                if !sums.contains(&i) {
                    t = t.mul_one_minus(nu(i, n));
                }
            }
            let top = nj_exponent(k, r, n);
            let mut last = d.shift(top);
            if k.parts[r - 1] == 1 {
                last = &last + &QPoly::one_minus(top).shift(zero_energy);
            }
            &t * &last
        })
        .collect();
    let sum = numerators
        .into_iter()
        .map(|num| QRat { num, den: d.clone() })
        .fold(QRat { num: QPoly::zero(), den: d.clone() }, |acc, t| acc.add(&t));
    sum.into_poly()
}

/// Partition function of the spin dynamical model in the large coupling limit,
/// `z_chain / Π_i (1 - q^{ν_i})`.
pub fn z_spin_limit(n: usize, two_m: u32, eps: Sign, epsp: Sign) -> Result<QRat> {
    QRat::new(z_chain(n, two_m, eps, epsp)?, z_scalar_limit(n))
}

/// Number of distinct levels for generic β̄.
pub fn distinct_level_count(n: usize, two_m: u32, eps: Sign, epsp: Sign) -> Result<usize> {
    Ok(z_chain(n, two_m, eps, epsp)?.len())
}

/// `E_max = N(N+1)(2N + 3β̄ - 2)/6` as an exponent.
pub fn emax_exponent(n: usize) -> QExponent {
    let n = n as i64;
    QExponent::new(n * (n + 1) / 2, n * (n + 1) * (2 * n - 2) / 6, 0)
}

/// Sum of all degeneracies, `(2M+1)^N`.
pub fn total_states(n: usize, two_m: u32) -> BigInt {
    num_traits::pow(BigInt::from(two_m + 1), n)
}

/// Whether every coefficient is a nonnegative count.
pub fn is_count_polynomial(p: &QPoly) -> bool {
    p.terms().iter().all(|(_, c)| c >= &BigInt::zero())
}

/// The B = 0 specialization of a magnetic partition function.
pub fn drop_field(p: &QPoly) -> QPoly {
    p.map_exponents(|e| QExponent::new(e.m, e.n, 0))
}

/// Whether `d(E) = d'(E_max - E)` for every level.
pub fn is_dual_pair(a: &QPoly, b: &QPoly, n: usize) -> bool {
    let top = emax_exponent(n);
    a.map_exponents(|e| top - e) == *b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: i64, n: i64) -> QExponent {
        QExponent::new(m, n, 0)
    }

    #[test]
    fn composition_examples() {
        let c: Vec<Vec<usize>> = compositions(3).into_iter().map(|c| c.parts).collect();
        assert_eq!(c, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        assert_eq!(compositions(1).len(), 1);
        let c12: Vec<Vec<usize>> = compositions_12(3).into_iter().map(|c| c.parts).collect();
        assert_eq!(c12, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(10).len(), 512);
    }

    #[test]
    fn exponent_examples() {
        let k3 = Composition { parts: vec![3] };
        assert_eq!(nj_exponent(&k3, 1, 3), e(3, 3));
        let k12 = Composition { parts: vec![1, 2] };
        assert_eq!(nj_exponent(&k12, 1, 3), e(1, 2));
        let ones = Composition { parts: vec![1; 5] };
        assert_eq!(nj_exponent(&ones, 5, 5), e(5, 10));
    }

    #[test]
    fn scalar_prefactor() {
        assert_eq!(z_scalar_limit(1), QPoly::one_minus(e(1, 0)));
        assert_eq!(
            z_scalar_limit(2),
            &QPoly::one_minus(e(1, 1)) * &QPoly::one_minus(e(2, 1))
        );
    }

    #[test]
    fn one_site_chain() {
        let z = z_chain(1, 1, Sign::Minus, Sign::Plus).unwrap();
        assert_eq!(z, &QPoly::one() + &QPoly::monomial(e(1, 0), 1));
        assert_eq!(distinct_level_count(1, 4, Sign::Minus, Sign::Plus).unwrap(), 2);
    }

    #[test]
    fn regrouping_matches_composition_sum() {
        for n in 1..=6 {
            for two_m in 1..=3 {
                for eps in [Sign::Plus, Sign::Minus] {
                    for epsp in [Sign::Plus, Sign::Minus] {
                        assert_eq!(
                            z_chain(n, two_m, eps, epsp).unwrap(),
                            z_chain_by_compositions(n, two_m, eps, epsp).unwrap(),
                            "N={n} 2M={two_m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn magnetic_one_site() {
        // q^{-B} + q^{β̄+B} for ε′ = +1
        let z = z_chain_magnetic(1, Sign::Plus).unwrap();
        let expect = QPoly::from_terms([
            (QExponent::new(0, 0, -1), 1.into()),
            (QExponent::new(1, 0, 1), 1.into()),
        ]);
        assert_eq!(z, expect);
    }
}
