//! Algebraic eigenvectors of the NN chain, the Σ′ machinery behind them,
//! the dimension bounds and the integer-spectrum scan.

use crate::combinatorics::{binomial, rearrangements};
use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::site_solver::{ChainFamily, SiteConfig};
use crate::spectrum::NumericTable;
use crate::spin_algebra::{Sign, SpinSpace, SpinVector, DEFAULT_DIM_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Rank threshold for site-evaluated vectors.
pub const RANK_TOL: f64 = 1e-10;

/// Average over the distinct arrangements of `rest` in the positions not fixed by `fixed`.
fn place<T: Coeff>(space: SpinSpace, fixed: &[(usize, i32)], rest: &[i32]) -> SpinVector<T> {
    let n = space.n;
    let free: Vec<usize> = (1..=n).filter(|p| fixed.iter().all(|f| f.0 != *p)).collect();
    let mut ket = vec![0; n];
    for &(p, s) in fixed {
        ket[p - 1] = s;
    }
    let rs = rearrangements(rest);
    let w = T::from_ratio(1, rs.len() as i64);
    let mut out = SpinVector::zero(space);
    for r in rs {
        for (k, &p) in free.iter().enumerate() {
            ket[p - 1] = r[k];
        }
        out.add_term(space.encode(&ket), w.clone());
    }
    out
}

fn check_pos(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// `|s_i⟩ = (1/N!) Σ_{π(1)=i} π|s⟩`, extended linearly.
pub fn sym_state<T: Coeff>(v: &SpinVector<T>, i: usize) -> Result<SpinVector<T>> {
    let n = v.space.n;
    check_pos(n, i)?;
    let pref = T::from_ratio(1, n as i64);
    Ok(v.map_kets(|s| place::<T>(v.space, &[(i, s[0])], &s[1..]).scale(&pref)))
}

/// `|s^±_ij⟩ = (1/N!) Σ_{π(1)=i, π(2)=j} π(1 ± S_12)|s⟩`, extended linearly.
pub fn pair_state<T: Coeff>(v: &SpinVector<T>, i: usize, j: usize, sign: Sign) -> Result<SpinVector<T>> {
    let n = v.space.n;
    check_pos(n, i)?;
    check_pos(n, j)?;
    if i == j || n < 2 {
        return Err(Error::InvalidArgument("pair state needs two distinct positions".into()));
    }
    let pref = T::from_ratio(1, (n * (n - 1)) as i64);
    let sgn = T::from_ratio(sign.value() as i64, 1);
    Ok(v.map_kets(|s| {
        let mut out = place::<T>(v.space, &[(i, s[0]), (j, s[1])], &s[2..]);
        out.add_scaled(&place(v.space, &[(i, s[1]), (j, s[0])], &s[2..]), &sgn);
        out.scale(&pref)
    }))
}

/// `A|s⟩ = Σ_i |s⁺_{i,i+1}⟩` with cyclic indices.
pub fn a_apply<T: Coeff>(v: &SpinVector<T>) -> Result<SpinVector<T>> {
    let n = v.space.n;
    let mut out = SpinVector::zero(v.space);
    for i in 1..=n {
        out = out.add(&pair_state(v, i, i % n + 1, Sign::Plus)?);
    }
    Ok(out)
}

/// Totally symmetric projection.
pub fn lambda<T: Coeff>(v: &SpinVector<T>) -> SpinVector<T> {
    v.symmetrize(Sign::Plus, None)
}

/// Whether `A|s⟩` is totally symmetric.
pub fn sigma_prime_test<T: Coeff>(v: &SpinVector<T>) -> Result<bool> {
    let a = a_apply(v)?;
    Ok(a.sub(&lambda(&a)).is_zero())
}

/// Distinct spin values (doubled) with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpinContent {
    pub values: Vec<i32>,
    pub mult: Vec<usize>,
}

impl SpinContent {
    pub fn new(values: Vec<i32>, mult: Vec<usize>) -> Result<Self> {
        if values.len() != mult.len() || values.is_empty() {
            return Err(Error::InvalidArgument("content needs matching nonempty values and multiplicities".into()));
        }
        if mult.iter().any(|&m| m == 0) {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        let mut pairs: Vec<(i32, usize)> = values.into_iter().zip(mult).collect();
        pairs.sort();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("content values must be distinct".into()));
        }
        Ok(SpinContent { values: pairs.iter().map(|p| p.0).collect(), mult: pairs.iter().map(|p| p.1).collect() })
    }

    pub fn of_ket(s: &[i32]) -> Self {
        let mut m: BTreeMap<i32, usize> = BTreeMap::new();
        for &x in s {
            *m.entry(x).or_default() += 1;
        }
        SpinContent { values: m.keys().copied().collect(), mult: m.values().copied().collect() }
    }

    pub fn n(&self) -> usize {
        self.mult.iter().sum()
    }

    /// Sorted ket with this content.
    pub fn ket(&self) -> Vec<i32> {
        self.values.iter().zip(&self.mult).flat_map(|(&v, &m)| std::iter::repeat(v).take(m)).collect()
    }

    /// Every content of N spins with `2M+1` available values.
    pub fn all(n: usize, two_m: u32) -> Vec<SpinContent> {
        let levels: Vec<i32> = (0..=two_m as i32).map(|k| 2 * k - two_m as i32).collect();
        let mut out = Vec::new();
        let mut counts = vec![0usize; levels.len()];
        fn rec(k: usize, left: usize, counts: &mut Vec<usize>, levels: &[i32], out: &mut Vec<SpinContent>) {
            if k + 1 == levels.len() {
                counts[k] = left;
                let (values, mult) = levels.iter().zip(counts.iter()).filter(|p| *p.1 > 0).map(|(a, b)| (*a, *b)).unzip();
                out.push(SpinContent { values, mult });
                return;
            }
            for c in (0..=left).rev() {
                counts[k] = c;
                rec(k + 1, left - c, counts, levels, out);
            }
        }
        rec(0, n, &mut counts, &levels, &mut out);
        out
    }

    /// `|s^a s^b …⟩` with the tail symmetrized; zero when the content lacks `a, b`.
    fn ellipsis<T: Coeff>(&self, space: SpinSpace, a: usize, b: usize) -> SpinVector<T> {
        let mut mult = self.mult.clone();
        for k in [a, b] {
            if mult[k] == 0 {
                return SpinVector::zero(space);
            }
            mult[k] -= 1;
        }
        let rest: Vec<i32> = self.values.iter().zip(&mult).flat_map(|(&v, &m)| std::iter::repeat(v).take(m)).collect();
        place(space, &[(1, self.values[a]), (2, self.values[b])], &rest)
    }
}

/// The `n` states `|χ_i⟩` of a content, before any reduction.
pub fn chi_all<T: Coeff>(content: &SpinContent, two_m: u32) -> Result<Vec<SpinVector<T>>> {
    let n = content.n();
    if n < 2 {
        return Err(Error::InvalidArgument("χ states need N >= 2".into()));
    }
    let space = SpinSpace::new(two_m, n)?;
    if content.values.iter().any(|&v| !space.valid_level(v)) {
        return Err(Error::InvalidSpin(format!("content {:?} outside spin {}/2", content.values, two_m)));
    }
    let nu = &content.mult;
    let c = |x: usize| T::from_ratio(x as i64, 1);
    let k = nu.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut chi = SpinVector::zero(space);
        if nu[i] > 1 {
            chi.add_scaled(&content.ellipsis(space, i, i), &c(nu[i] * (nu[i] - 1)));
            for j in (0..k).filter(|&j| j != i) {
                for l in (0..k).filter(|&l| l != i) {
                    let w = nu[j] * (nu[l] - usize::from(j == l));
                    if w > 0 {
                        chi.add_scaled(&content.ellipsis(space, j, l), &-c(w));
                    }
                }
            }
        } else {
            for j in (0..k).filter(|&j| j != i) {
                chi.add_scaled(&content.ellipsis(space, i, j), &c(nu[j]));
                chi.add_scaled(&content.ellipsis(space, j, i), &c(nu[j]));
            }
        }
        out.push(chi);
    }
    Ok(out)
}

/// Independent χ states of a content modulo symmetric states (`n - 1` of them).
pub fn chi_states<T: Coeff>(content: &SpinContent, two_m: u32) -> Result<Vec<SpinVector<T>>> {
    let mut all = chi_all(content, two_m)?;
    if all.is_empty() {
        return Ok(all);
    }
    let repeated: Vec<usize> = (0..content.mult.len()).filter(|&i| content.mult[i] > 1).collect();
    let drop = if repeated.len() == 2 { repeated[1] } else { all.len() - 1 };
    all.remove(drop);
    Ok(all)
}

/// Rank over the rationals.
pub fn exact_rank(vecs: &[SpinVector<BigRational>]) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigRational>> =
        vecs.iter().map(|v| v.iter().map(|(i, c)| (i, c.clone())).collect()).collect();
    let mut rank = 0;
    while let Some(pos) = rows.iter().position(|r| !r.is_empty()) {
        let pivot_row = rows.swap_remove(pos);
        let (&col, pv) = pivot_row.iter().next().expect("nonempty row");
        let pv = pv.clone();
        for r in rows.iter_mut() {
            if let Some(x) = r.get(&col).cloned() {
                let f = x / &pv;
                for (&k, c) in &pivot_row {
                    let e = r.entry(k).or_insert_with(BigRational::zero);
                    *e -= &f * c;
                    if e.is_zero() {
                        r.remove(&k);
                    }
                }
            }
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

/// Keeps the vectors that are independent of their predecessors, by modified Gram-Schmidt.
/// Each vector comes with a gross magnitude (the summed size of the pieces it was built
/// from); vectors shorter than `tol` times it count as zero.
pub fn independent_subset(vecs: Vec<(Vec<f64>, f64)>, tol: f64) -> Vec<Vec<f64>> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut kept = Vec::new();
    for (v, gross) in vecs {
        let norm0 = norm(&v);
        if norm0 <= tol * gross || norm0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= d * y;
                }
            }
        }
        let nw = norm(&w);
        if nw > tol * norm0 {
            basis.push(w.iter().map(|x| x / nw).collect());
            kept.push(v);
        }
    }
    kept
}

/// Algebraic eigenvectors grouped by energy 0, 1, 2, 3, as dense vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicVectors {
    pub by_energy: [Vec<Vec<f64>>; 4],
}

impl AlgebraicVectors {
    pub fn ranks(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|k| self.by_energy[k].len())
    }
}

/// Linear combination that remembers the size of its pieces.
struct Combo {
    v: SpinVector<f64>,
    gross: f64,
}

impl Combo {
    fn new(space: SpinSpace) -> Self {
        Combo { v: SpinVector::zero(space), gross: 0.0 }
    }

    fn add(&mut self, part: &SpinVector<f64>, c: f64) {
        self.gross += c.abs() * part.dot(part).sqrt();
        self.v.add_scaled(part, &c);
    }

    fn absorb(&mut self, other: Combo, c: f64) {
        self.gross += c.abs() * other.gross;
        self.v.add_scaled(&other.v, &c);
    }
}

/// χ₀ … χ₃ built from the NN sites, each family reduced to an independent set.
pub fn algebraic_vectors(n: usize, two_m: u32, sites: &SiteConfig<f64>) -> Result<AlgebraicVectors> {
    if sites.family != ChainFamily::Nn || sites.xi.len() != n {
        return Err(Error::InvalidArgument("algebraic vectors need NN sites for the same N".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("the NN chain needs N >= 2".into()));
    }
    let space = SpinSpace::new(two_m, n)?;
    space.dim_capped(DEFAULT_DIM_CAP)?;
    let xi = &sites.xi;
    let contents = SpinContent::all(n, two_m);
    type V = SpinVector<f64>;

    let chi1 = |s: &V| -> Result<Combo> {
        let mut out = Combo::new(space);
        for i in 1..=n {
            out.add(&sym_state(s, i)?, xi[i - 1]);
        }
        Ok(out)
    };

    let mut fam: [Vec<Combo>; 4] = Default::default();
    for content in &contents {
        let sym = lambda(&V::ket(space, &content.ket())?);
        let mut c0 = Combo::new(space);
        c0.add(&sym, 1.0);
        fam[0].push(c0);

        // χ₁ only depends on the first spin and the content of the rest
        for a in 0..content.values.len() {
            let mut rest = content.clone();
            rest.mult[a] -= 1;
            let mut s = vec![content.values[a]];
            s.extend(rest.ket());
            fam[1].push(chi1(&V::ket(space, &s)?)?);
        }

        // χ₂ over symmetric states and χ states, both S_12-invariant
        let mut primes = vec![sym];
        primes.extend(chi_states::<f64>(content, two_m)?);
        for sp in &primes {
            let mut out = Combo::new(space);
            for i in 1..=n {
                out.add(&sym_state(sp, i)?, xi[i - 1] * xi[i - 1]);
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    let c = (n as f64 - 1.0) * xi[i - 1] * xi[j - 1];
                    out.add(&pair_state(sp, i, j, Sign::Plus)?, c);
                }
            }
            fam[2].push(out);
        }

        // χ₃ over (1 - S_12)|s⟩ with the first two spins distinct
        let k = content.values.len();
        for a in 0..k {
            for b in a + 1..k {
                let mut rest = content.clone();
                rest.mult[a] -= 1;
                rest.mult[b] -= 1;
                let tail = rest.ket();
                let mut s1 = vec![content.values[a], content.values[b]];
                s1.extend(&tail);
                let mut s2 = vec![content.values[b], content.values[a]];
                s2.extend(&tail);
                let s = V::ket(space, &s1)?.sub(&V::ket(space, &s2)?);
                let mut out = Combo::new(space);
                out.absorb(chi1(&s)?, 2.0);
                for i in 1..=n {
                    for j in i + 1..=n {
                        let (x, y) = (xi[i - 1], xi[j - 1]);
                        out.add(&pair_state(&s, i, j, Sign::Minus)?, x * y * (x - y));
                    }
                }
                fam[3].push(out);
            }
        }
    }
    let mut by_energy: [Vec<Vec<f64>>; 4] = Default::default();
    for (k, combos) in fam.into_iter().enumerate() {
        let dense = combos.into_iter().map(|c| Ok((c.v.to_dense()?, c.gross))).collect::<Result<Vec<_>>>()?;
        by_energy[k] = independent_subset(dense, RANK_TOL);
    }
    Ok(AlgebraicVectors { by_energy })
}

/// Upper bounds `(d₀, d₁, d₂, d₃)` on the algebraic eigenspace dimensions.
pub fn dims(n: usize, two_m: u32) -> [BigInt; 4] {
    let (n, m2) = (n as i64, two_m as i64);
    let d0 = binomial(n + m2, n);
    let d1 = binomial(n + m2 - 1, n) * (n - 1);
    let d3 = binomial(n - 1, 2) * binomial(n + m2 - 2, n);
    [d0, d1.clone(), d1, d3]
}

/// Integer levels of a diagonalized NN chain and their positions among all levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegerScan {
    pub integers: Vec<i64>,
    /// `(integer, 1-based position among the distinct levels)`
    pub positions: Vec<(i64, usize)>,
}

pub fn integer_spectrum_scan(table: &NumericTable<f64>, tol: f64) -> IntegerScan {
    let scale = tol * table.max_abs().max(1.0);
    let mut seen = BTreeSet::new();
    let mut positions = Vec::new();
    for (k, (e, _)) in table.entries.iter().enumerate() {
        let r = e.round();
        if (e - r).abs() <= scale && seen.insert(r as i64) {
            positions.push((r as i64, k + 1));
        }
    }
    IntegerScan { integers: seen.into_iter().collect(), positions }
}

/// Outcome of the integer-spectrum conjecture for one chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureCheck {
    pub n: usize,
    pub two_m: u32,
    pub scan: IntegerScan,
    /// integers are exactly {0, 1, 2, 3}
    pub integers_ok: bool,
    /// 0, 1, 2 are the three lowest levels
    pub lowest_ok: bool,
    /// for M ≥ 1, level 3 is the fifth lowest
    pub fifth_ok: bool,
    pub pass: bool,
}

pub fn conjecture_check(n: usize, two_m: u32, table: &NumericTable<f64>, tol: f64) -> ConjectureCheck {
    let scan = integer_spectrum_scan(table, tol);
    let integers_ok = scan.integers == vec![0, 1, 2, 3];
    let pos = |e: i64| scan.positions.iter().find(|p| p.0 == e).map(|p| p.1);
    let lowest_ok = (0..3).all(|e| pos(e) == Some(e as usize + 1));
    let fifth_ok = two_m < 2 || pos(3) == Some(5);
    ConjectureCheck { n, two_m, pass: integers_ok && lowest_ok && fifth_ok, scan, integers_ok, lowest_ok, fifth_ok }
}

/// `‖(H - e)v‖ / ‖v‖` for a dense vector.
pub fn residual(op: &crate::chain_builder::ChainOperator<f64>, v: &[f64], e: f64) -> Result<f64> {
    let hv = crate::chain_builder::apply(op, v)?;
    let num: f64 = hv.iter().zip(v).map(|(h, x)| (h - e * x).powi(2)).sum::<f64>().sqrt();
    let den: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(num / den)
}

/// Largest absolute coefficient, for exact vectors.
pub fn max_abs_exact(v: &SpinVector<BigRational>) -> BigRational {
    v.iter().map(|(_, c)| c.abs()).max().unwrap_or_else(BigRational::zero)
}
