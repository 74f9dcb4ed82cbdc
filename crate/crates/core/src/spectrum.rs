//! Spectra as multisets of energies with degeneracies.

use crate::error::{Error, Result};
use crate::qseries::QExponent;
use crate::scalar::Real;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Levels `m·β̄ + n + p·B` with their degeneracies, sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicTable {
    levels: Vec<(QExponent, BigInt)>,
}

impl SymbolicTable {
    pub fn new(mut levels: Vec<(QExponent, BigInt)>) -> Self {
        levels.retain(|(_, d)| !d.is_zero());
        levels.sort_by(|a, b| a.0.cmp(&b.0));
        SymbolicTable { levels }
    }

    pub fn levels(&self) -> &[(QExponent, BigInt)] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn total(&self) -> BigInt {
        self.levels.iter().map(|(_, d)| d).sum()
    }

    pub fn degeneracy(&self, e: QExponent) -> BigInt {
        self.levels
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, d)| d.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// Numeric energies at a given β̄ and B, sorted; coincident values are not merged.
    pub fn evaluate(&self, beta_bar: f64, b: f64) -> Vec<(f64, BigInt)> {
        let mut v: Vec<_> = self.levels.iter().map(|(e, d)| (e.value(beta_bar, b), d.clone())).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<_> = self
            .levels
            .iter()
            .map(|(e, d)| serde_json::json!({"m": e.m, "n": e.n, "p": e.p, "deg": d.to_string()}))
            .collect();
        serde_json::json!({"levels": levels, "total": self.total().to_string()})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("spectrum JSON: {what}"));
        let mut levels = Vec::new();
        for l in v["levels"].as_array().ok_or_else(|| bad("levels"))? {
            let int = |k: &str| l[k].as_i64().ok_or_else(|| bad(k));
            let deg: BigInt = l["deg"].as_str().and_then(|d| d.parse().ok()).ok_or_else(|| bad("deg"))?;
            levels.push((QExponent::new(int("m")?, int("n")?, int("p")?), deg));
        }
        Ok(SymbolicTable::new(levels))
    }
}

/// Numeric spectrum: sorted `(energy, degeneracy)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTable<T> {
    pub entries: Vec<(T, u64)>,
    pub bin_tol: T,
}

impl<T: Real> NumericTable<T> {
    /// Sorts raw eigenvalues and merges runs whose spread is within `bin_tol`.
    pub fn from_eigenvalues(mut values: Vec<T>, bin_tol: T) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut entries: Vec<(T, u64)> = Vec::new();
        let mut start = 0;
        for k in 1..=values.len() {
            if k == values.len() || values[k] - values[start] > bin_tol {
                let run = &values[start..k];
                let mean = run.iter().copied().sum::<T>() / T::lit(run.len() as f64);
                entries.push((mean, run.len() as u64));
                start = k;
            }
        }
        NumericTable { entries, bin_tol }
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, d)| d).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, (e, _)| m.max(e.abs()))
    }

    /// `Σ d e^{-E/T}`
    pub fn partition_sum(&self, temperature: f64) -> f64 {
        self.entries
            .iter()
            .map(|(e, d)| *d as f64 * (-e.as_f64() / temperature).exp())
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<_> = self
            .entries
            .iter()
            .map(|(e, d)| serde_json::json!({"energy": e.as_f64(), "degeneracy": d}))
            .collect();
        serde_json::json!({"levels": levels, "total": self.total(), "bin_tol": self.bin_tol.as_f64()})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("spectrum JSON: {what}"));
        let mut entries = Vec::new();
        for l in v["levels"].as_array().ok_or_else(|| bad("levels"))? {
            let e = l["energy"].as_f64().ok_or_else(|| bad("energy"))?;
            let d = l["degeneracy"].as_u64().ok_or_else(|| bad("degeneracy"))?;
            entries.push((T::lit(e), d));
        }
        let bin_tol = T::lit(v["bin_tol"].as_f64().ok_or_else(|| bad("bin_tol"))?);
        Ok(NumericTable { entries, bin_tol })
    }
}

/// Degeneracies as `f64`, for numeric comparisons.
pub fn big_to_f64(d: &BigInt) -> f64 {
    d.to_f64().unwrap_or(f64::INFINITY)
}
