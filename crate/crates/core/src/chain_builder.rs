//! Chain Hamiltonians as weighted sums of spin operators, their conserved sectors
//! and exact diagonalization.

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::scalar::Real;
use crate::site_solver::{solve_sites, ChainFamily, SiteConfig};
use crate::spectrum::NumericTable;
use crate::spin_algebra::{Generator, Sign, SpinSpace, DEFAULT_DIM_CAP};
use rayon::prelude::*;
use serde::Serialize;

/// Largest sector handed to the dense eigensolver.
pub const SECTOR_DIM_CAP: usize = 20_000;
/// Default relative tolerance for merging eigenvalues into levels.
pub const DEFAULT_BIN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ChainKind<T> {
    Heisenberg,
    Hs,
    Pf,
    Bcn { eps: Sign, epsp: Sign, beta: T, betap: T },
    /// `H_{-,ε′} - B Σ_i S_i`, spin 1/2 only
    BcnMagnetic { epsp: Sign, beta: T, betap: T, field: T },
    Nn,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainOperator<T> {
    pub space: SpinSpace,
    pub terms: Vec<(T, Generator)>,
    pub constant: T,
    pub sites: Option<SiteConfig<T>>,
}

impl<T: Real> ChainOperator<T> {
    fn new(space: SpinSpace) -> Self {
        ChainOperator { space, terms: Vec::new(), constant: T::zero(), sites: None }
    }

    /// Adds `c (1 - σ g)`.
    fn push_projector(&mut self, c: T, sign: Sign, g: Generator) {
        self.constant = self.constant + c;
        self.terms.push((-c * T::lit(sign.value() as f64), g));
    }

    /// Generators appearing with a nonzero coefficient, deduplicated.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gs: Vec<Generator> = Vec::new();
        for (c, g) in &self.terms {
            if *c != T::zero() && *g != Generator::Identity && !gs.contains(g) {
                gs.push(*g);
            }
        }
        gs
    }
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn csc2<T: Real>(x: T) -> T {
    let s = x.sin();
    T::one() / (s * s)
}

/// Builds the Hamiltonian of `kind` for N particles of spin `two_m/2`.
pub fn build_chain<T: Real>(kind: ChainKind<T>, n: usize, two_m: u32) -> Result<ChainOperator<T>> {
    let space = SpinSpace::new(two_m, n)?;
    let mut op = ChainOperator::new(space);
    let tol = T::lit(if T::epsilon() > T::lit(1e-10) { 1e-4 } else { 1e-12 });
    match kind {
        ChainKind::Heisenberg => {
            if n < 2 {
                return Err(Error::InvalidArgument("Heisenberg chain needs N >= 2".into()));
            }
            let bonds: Vec<(usize, usize)> =
                if n == 2 { vec![(1, 2)] } else { (1..=n).map(|i| ordered(i, i % n + 1)).collect() };
            let half = T::lit(0.5);
            for (i, j) in bonds {
                op.terms.push((half, Generator::Exchange(i, j)));
                op.constant = op.constant - half / T::lit(two_m as f64 + 1.0);
            }
        }
        ChainKind::Hs | ChainKind::Pf => {
            let family = if matches!(kind, ChainKind::Hs) { ChainFamily::Hs } else { ChainFamily::Pf };
            let sites = solve_sites(family, n, tol)?;
            let xi = &sites.xi;
            for i in 0..n {
                for j in i + 1..n {
                    let c = match kind {
                        ChainKind::Hs => csc2(xi[i] - xi[j]),
                        _ => T::one() / ((xi[i] - xi[j]) * (xi[i] - xi[j])),
                    };
                    op.push_projector(c, Sign::Plus, Generator::Exchange(i + 1, j + 1));
                }
            }
            op.sites = Some(sites);
        }
        ChainKind::Bcn { eps, epsp, beta, betap } => {
            op = bcn(space, eps, epsp, beta, betap, tol)?;
        }
        ChainKind::BcnMagnetic { epsp, beta, betap, field } => {
            if two_m != 1 {
                return Err(Error::InvalidSpin("the magnetic chain is defined for M = 1/2 only".into()));
            }
            op = bcn(space, Sign::Minus, epsp, beta, betap, tol)?;
            for i in 1..=n {
                op.terms.push((-field, Generator::Reversal(i)));
            }
        }
        ChainKind::Nn => {
            let sites = solve_sites(ChainFamily::Nn, n, tol)?;
            let xi = &sites.xi;
            for i in 0..n {
                let j = (i + 1) % n;
                let d = xi[i] - xi[j];
                let (a, b) = ordered(i + 1, j + 1);
                op.push_projector(T::one() / (d * d), Sign::Plus, Generator::Exchange(a, b));
            }
            op.sites = Some(sites);
        }
    }
    Ok(op)
}

fn bcn<T: Real>(space: SpinSpace, eps: Sign, epsp: Sign, beta: T, betap: T, tol: T) -> Result<ChainOperator<T>> {
    let n = space.n;
    let sites = solve_sites(ChainFamily::Bcn { beta, betap }, n, tol)?;
    let xi = &sites.xi;
    let mut op = ChainOperator::new(space);
    let quarter = T::lit(0.25);
    let eighth = T::lit(0.125);
    for i in 0..n {
        for j in i + 1..n {
            op.push_projector(quarter * csc2(xi[i] - xi[j]), eps, Generator::Exchange(i + 1, j + 1));
            op.push_projector(quarter * csc2(xi[i] + xi[j]), eps, Generator::TildeExchange(i + 1, j + 1));
        }
    }
    for i in 0..n {
        let c = xi[i].cos();
        let h = eighth * (beta * csc2(xi[i]) + betap / (c * c));
        op.push_projector(h, epsp, Generator::Reversal(i + 1));
    }
    op.sites = Some(sites);
    Ok(op)
}

/// Connected components of the basis graph generated by the operator's generators.
pub fn sectors<T: Real>(op: &ChainOperator<T>) -> Result<Vec<Vec<usize>>> {
    let dim = op.space.dim_capped(DEFAULT_DIM_CAP)?;
    let gens = op.generators();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut scratch = vec![0; op.space.n];
    for idx in 0..dim {
        for g in &gens {
            let t = g.act_on_index(&op.space, idx, &mut scratch);
            let (a, b) = (find(&mut parent, idx), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut slot = vec![usize::MAX; dim];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for idx in 0..dim {
        let r = find(&mut parent, idx);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(idx);
    }
    Ok(out)
}

/// Dense matrix of `op` restricted to a sector, row-major, and its max absolute row sum.
pub fn sector_matrix<T: Real>(op: &ChainOperator<T>, sector: &[usize]) -> (Vec<T>, T) {
    let d = sector.len();
    let mut a = vec![T::zero(); d * d];
    let mut scratch = vec![0; op.space.n];
    for (col, &idx) in sector.iter().enumerate() {
        a[col * d + col] = a[col * d + col] + op.constant;
        for (c, g) in &op.terms {
            let t = g.act_on_index(&op.space, idx, &mut scratch);
            let row = sector.binary_search(&t).expect("generator leaves its sector");
            a[row * d + col] = a[row * d + col] + *c;
        }
    }
    let norm = (0..d)
        .map(|r| a[r * d..(r + 1) * d].iter().map(|v| v.abs()).sum::<T>())
        .fold(T::zero(), T::max);
    (a, norm)
}

/// Full spectrum with degeneracies; eigenvalues closer than `rel_tol·max(1, ‖H‖∞)` merge.
pub fn diagonalize<T: Real>(op: &ChainOperator<T>, rel_tol: T) -> Result<NumericTable<T>> {
    let secs = sectors(op)?;
    if let Some(big) = secs.iter().find(|s| s.len() > SECTOR_DIM_CAP) {
        return Err(Error::DimensionCap { dim: big.len(), cap: SECTOR_DIM_CAP });
    }
    let parts: Vec<Result<(Vec<T>, T)>> = secs
        .par_iter()
        .map(|s| {
            let (a, norm) = sector_matrix(op, s);
            Ok((symmetric_eigenvalues(a, s.len())?, norm))
        })
        .collect();
    let mut values = Vec::new();
    let mut norm = T::zero();
    for p in parts {
        let (v, nrm) = p?;
        values.extend(v);
        norm = norm.max(nrm);
    }
    Ok(NumericTable::from_eigenvalues(values, rel_tol * norm.max(T::one())))
}

/// `H v` for a dense vector over the full basis.
pub fn apply<T: Real>(op: &ChainOperator<T>, v: &[T]) -> Result<Vec<T>> {
    let dim = op.space.dim_capped(DEFAULT_DIM_CAP)?;
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    let mut out: Vec<T> = v.iter().map(|&x| x * op.constant).collect();
    let mut scratch = vec![0; op.space.n];
    for (idx, &x) in v.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        for (c, g) in &op.terms {
            let t = g.act_on_index(&op.space, idx, &mut scratch);
            out[t] = out[t] + *c * x;
        }
    }
    Ok(out)
}

/// Maximum BC_N chain energy from the sites, and the closed form `N(N+1)(2N+3β̄-2)/6`.
pub fn emax_bcn<T: Real>(sites: &SiteConfig<T>, beta: T, betap: T) -> (T, T) {
    let xi = &sites.xi;
    let n = xi.len();
    let mut s = T::zero();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            s = s + csc2(xi[i] - xi[j]) + csc2(xi[i] + xi[j]);
        }
        let c = xi[i].cos();
        s = s + beta * csc2(xi[i]) + betap / (c * c);
    }
    let nf = T::lit(n as f64);
    let bb = (beta + betap) / T::lit(2.0);
    let closed = nf * (nf + T::one()) * (T::lit(2.0) * nf + T::lit(3.0) * bb - T::lit(2.0)) / T::lit(6.0);
    (s / T::lit(4.0), closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(t: &NumericTable<f64>) -> Vec<(f64, u64)> {
        t.entries.clone()
    }

    fn close(a: &[(f64, u64)], b: &[(f64, u64)]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() < 1e-10 && x.1 == y.1)
    }

    #[test]
    fn nn_two_sites() {
        let op = build_chain::<f64>(ChainKind::Nn, 2, 1).unwrap();
        let t = diagonalize(&op, 1e-6).unwrap();
        assert!(close(&levels(&t), &[(0.0, 3), (1.0, 1)]));
    }

    #[test]
    fn heisenberg_two_sites() {
        let op = build_chain::<f64>(ChainKind::Heisenberg, 2, 1).unwrap();
        let t = diagonalize(&op, 1e-6).unwrap();
        assert!(close(&levels(&t), &[(-0.75, 1), (0.25, 3)]));
    }

    #[test]
    fn hs_two_sites() {
        let op = build_chain::<f64>(ChainKind::Hs, 2, 1).unwrap();
        let t = diagonalize(&op, 1e-6).unwrap();
        assert!(close(&levels(&t), &[(0.0, 3), (2.0, 1)]));
    }

    #[test]
    fn bcn_one_site() {
        let kind = ChainKind::Bcn { eps: Sign::Minus, epsp: Sign::Minus, beta: 1.0, betap: 1.0 };
        let op = build_chain(kind, 1, 1).unwrap();
        let t = diagonalize(&op, 1e-6).unwrap();
        assert!(close(&levels(&t), &[(0.0, 1), (1.0, 1)]));
    }

    #[test]
    fn sector_examples() {
        let op = build_chain::<f64>(ChainKind::Nn, 3, 1).unwrap();
        let mut sizes: Vec<usize> = sectors(&op).unwrap().iter().map(|s| s.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 3, 3]);
        let kind = ChainKind::Bcn { eps: Sign::Minus, epsp: Sign::Minus, beta: 1.0, betap: 1.0 };
        let op = build_chain(kind, 2, 1).unwrap();
        assert_eq!(sectors(&op).unwrap().len(), 1);
        let mut id = ChainOperator::<f64>::new(SpinSpace::new(1, 3).unwrap());
        id.terms.push((2.0, Generator::Identity));
        assert_eq!(sectors(&id).unwrap().len(), 8);
    }

    #[test]
    fn apply_examples() {
        let op = build_chain::<f64>(ChainKind::Nn, 2, 1).unwrap();
        let singlet = [0.0f64, 0.5, -0.5, 0.0];
        let out = apply(&op, &singlet).unwrap();
        assert!(out.iter().zip(&singlet).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(apply(&op, &[0.0; 4]).unwrap().iter().all(|&x| x == 0.0));
        let mut id = ChainOperator::<f64>::new(SpinSpace::new(1, 2).unwrap());
        id.constant = 3.0;
        assert_eq!(apply(&id, &[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![3.0, 6.0, 9.0, 12.0]);
    }

    #[test]
    fn emax_examples() {
        let r2 = 2f64.sqrt();
        let sites = solve_sites(ChainFamily::Bcn { beta: r2, betap: r2 }, 3, 1e-13).unwrap();
        let (s, c) = emax_bcn(&sites, r2, r2);
        assert!((c - (6.0 * r2 + 8.0)).abs() < 1e-12);
        assert!((s / c - 1.0).abs() < 1e-10);
        let sites = solve_sites(ChainFamily::Bcn { beta: 2.0f64, betap: 2.0 }, 2, 1e-13).unwrap();
        let (s, c) = emax_bcn(&sites, 2.0, 2.0);
        assert!((c - 8.0).abs() < 1e-12 && (s - 8.0).abs() < 1e-9);
    }
}
