//! Spin space of N particles of spin M, the permutation and reversal operators
//! acting on it, symmetrizers and brute-force traces.
//!
//! Spins are stored doubled (`twice_s = 2s`). Basis kets are numbered in mixed radix
//! `2M+1` with position 1 most significant, so `|-M,...,-M>` is index 0.

use crate::combinatorics::{has_repeats, odd_inversions, permutations, rearrangements};
use crate::error::{Error, Result};
use crate::scalar::Coeff;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest spin-space dimension any dense operation will materialize.
pub const DEFAULT_DIM_CAP: usize = 200_000;

/// A sign ±1, used for ε and ε′.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i32(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {v}"))),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("cannot parse sign '{other}'"))),
        }
    }
}

/// Σ for N particles of spin M = two_m/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinSpace {
    pub two_m: u32,
    pub n: usize,
}

impl SpinSpace {
    pub fn new(two_m: u32, n: usize) -> Result<Self> {
        if two_m == 0 {
            return Err(Error::InvalidSpin("M must be at least 1/2".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        Ok(SpinSpace { two_m, n })
    }

    pub fn base(&self) -> usize {
        self.two_m as usize + 1
    }

    /// `(2M+1)^N`, or `None` on overflow.
    pub fn dim(&self) -> Option<usize> {
        self.base().checked_pow(u32::try_from(self.n).ok()?)
    }

    pub fn dim_capped(&self, cap: usize) -> Result<usize> {
        match self.dim() {
            Some(d) if d <= cap => Ok(d),
            Some(d) => Err(Error::DimensionCap { dim: d, cap }),
            None => Err(Error::DimensionCap { dim: usize::MAX, cap }),
        }
    }

    /// Allowed values of 2s in increasing order.
    pub fn levels(&self) -> Vec<i32> {
        let tm = self.two_m as i32;
        (0..=tm).map(|k| 2 * k - tm).collect()
    }

    pub fn is_half_integer(&self) -> bool {
        self.two_m % 2 == 1
    }

    pub fn encode(&self, twice_s: &[i32]) -> usize {
        let base = self.base();
        let tm = self.two_m as i32;
        twice_s
            .iter()
            .fold(0usize, |acc, &t| acc * base + ((t + tm) / 2) as usize)
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [i32]) {
        let base = self.base();
        let tm = self.two_m as i32;
        for slot in out.iter_mut().rev() {
            *slot = 2 * (index % base) as i32 - tm;
            index /= base;
        }
    }

    pub fn decode(&self, index: usize) -> Vec<i32> {
        let mut v = vec![0; self.n];
        self.decode_into(index, &mut v);
        v
    }

    pub fn valid_level(&self, twice_s: i32) -> bool {
        let tm = self.two_m as i32;
        twice_s.abs() <= tm && (twice_s - tm).rem_euclid(2) == 0
    }
}

/// A basis ket `|s_1,...,s_N>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinConfig {
    pub space: SpinSpace,
    pub twice_s: Vec<i32>,
}

impl SpinConfig {
    pub fn new(space: SpinSpace, twice_s: Vec<i32>) -> Result<Self> {
        if twice_s.len() != space.n {
            return Err(Error::DimensionMismatch { expected: space.n, got: twice_s.len() });
        }
        if let Some(bad) = twice_s.iter().find(|&&t| !space.valid_level(t)) {
            return Err(Error::InvalidSpin(format!("2s = {bad} not allowed for 2M = {}", space.two_m)));
        }
        Ok(SpinConfig { space, twice_s })
    }

    pub fn from_index(space: SpinSpace, index: usize) -> Self {
        SpinConfig { space, twice_s: space.decode(index) }
    }
}

pub fn basis_index(s: &SpinConfig) -> usize {
    s.space.encode(&s.twice_s)
}

/// The spin operators, with 1-based particle labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Identity,
    /// `S_ij`
    Exchange(usize, usize),
    /// `S_i`
    Reversal(usize),
    /// `S̃_ij = S_i S_j S_ij`
    TildeExchange(usize, usize),
}

impl Generator {
    pub fn validate(&self, n: usize) -> Result<()> {
        let check = |i: usize| {
            if i == 0 || i > n {
                Err(Error::IndexOutOfRange { index: i, n })
            } else {
                Ok(())
            }
        };
        match *self {
            Generator::Identity => Ok(()),
            Generator::Reversal(i) => check(i),
            Generator::Exchange(i, j) | Generator::TildeExchange(i, j) => {
                check(i)?;
                check(j)?;
                if i == j {
                    Err(Error::InvalidArgument(format!("pair operator needs i != j, got ({i}, {j})")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Maps a basis ket in place.
    pub fn act(&self, twice_s: &mut [i32]) {
        match *self {
            Generator::Identity => {}
            Generator::Exchange(i, j) => twice_s.swap(i - 1, j - 1),
            Generator::Reversal(i) => twice_s[i - 1] = -twice_s[i - 1],
            Generator::TildeExchange(i, j) => {
                twice_s.swap(i - 1, j - 1);
                twice_s[i - 1] = -twice_s[i - 1];
                twice_s[j - 1] = -twice_s[j - 1];
            }
        }
    }

    pub fn act_on_index(&self, space: &SpinSpace, index: usize, scratch: &mut [i32]) -> usize {
        space.decode_into(index, scratch);
        self.act(scratch);
        space.encode(scratch)
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Generator::Identity => write!(f, "1"),
            Generator::Exchange(i, j) => write!(f, "S({i},{j})"),
            Generator::Reversal(i) => write!(f, "S({i})"),
            Generator::TildeExchange(i, j) => write!(f, "T({i},{j})"),
        }
    }
}

/// Parses `1`, `S(i)`, `S(i,j)` and `T(i,j)` (the latter for `S̃_ij`).
impl std::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "1" || t == "I" {
            return Ok(Generator::Identity);
        }
        let bad = || Error::InvalidArgument(format!("cannot parse generator '{s}'"));
        let (head, rest) = t.split_at(1);
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let idx: Vec<usize> = inner.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        match (head, idx.as_slice()) {
            ("S", [i]) => Ok(Generator::Reversal(*i)),
            ("S", [i, j]) => Ok(Generator::Exchange(*i, *j)),
            ("T", [i, j]) => Ok(Generator::TildeExchange(*i, *j)),
            _ => Err(bad()),
        }
    }
}

/// Sparse vector of Σ with coefficients in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinVector<T: Coeff> {
    pub space: SpinSpace,
    coeffs: BTreeMap<usize, T>,
}

impl<T: Coeff> SpinVector<T> {
    pub fn zero(space: SpinSpace) -> Self {
        SpinVector { space, coeffs: BTreeMap::new() }
    }

    pub fn basis(space: SpinSpace, index: usize) -> Self {
        let mut v = Self::zero(space);
        v.add_term(index, T::one());
        v
    }

    pub fn ket(space: SpinSpace, twice_s: &[i32]) -> Result<Self> {
        let cfg = SpinConfig::new(space, twice_s.to_vec())?;
        Ok(Self::basis(space, basis_index(&cfg)))
    }

    pub fn from_terms(space: SpinSpace, terms: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut v = Self::zero(space);
        for (i, c) in terms {
            v.add_term(i, c);
        }
        v
    }

    pub fn add_term(&mut self, index: usize, c: T) {
        if c.negligible() {
            return;
        }
        match self.coeffs.get_mut(&index) {
            Some(slot) => {
                let s = slot.clone() + c;
                if s.negligible() {
                    self.coeffs.remove(&index);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.coeffs.insert(index, c);
            }
        }
    }

    pub fn get(&self, index: usize) -> T {
        self.coeffs.get(&index).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_term(i, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.space, self.iter().map(|(i, x)| (i, x.clone() * c.clone())))
    }

    pub fn add_scaled(&mut self, other: &Self, c: &T) {
        for (i, x) in other.iter() {
            self.add_term(i, x.clone() * c.clone());
        }
    }

    pub fn dot(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (i, c) in self.iter() {
            if let Some(d) = other.coeffs.get(&i) {
                acc = acc + c.clone() * d.clone();
            }
        }
        acc
    }

    pub fn apply(&self, g: Generator) -> Result<Self> {
        g.validate(self.space.n)?;
        let mut scratch = vec![0; self.space.n];
        let mut out = Self::zero(self.space);
        for (i, c) in self.iter() {
            out.add_term(g.act_on_index(&self.space, i, &mut scratch), c.clone());
        }
        Ok(out)
    }

    /// Applies a product `g_1 g_2 ... g_k` (rightmost first).
    pub fn apply_product(&self, gens: &[Generator]) -> Result<Self> {
        let mut v = self.clone();
        for g in gens.iter().rev() {
            v = v.apply(*g)?;
        }
        Ok(v)
    }

    /// Applies a map on basis kets, linearly.
    pub fn map_kets(&self, mut f: impl FnMut(&[i32]) -> Self) -> Self {
        let mut out = Self::zero(self.space);
        let mut buf = vec![0; self.space.n];
        for (i, c) in self.iter() {
            self.space.decode_into(i, &mut buf);
            out.add_scaled(&f(&buf), c);
        }
        out
    }

    /// Λ_ε, or Λ_{εε′} when `epsp` is given.
    pub fn symmetrize(&self, eps: Sign, epsp: Option<Sign>) -> Self {
        let reversed = match epsp {
            Some(e) => self.map_kets(|s| reversal_projection(self.space, s, e)),
            None => self.clone(),
        };
        reversed.map_kets(|s| permutation_projection(self.space, s, eps))
    }

    /// Same projector as [`symmetrize`](Self::symmetrize), summed over every group element.
    pub fn symmetrize_by_group(&self, eps: Sign, epsp: Option<Sign>) -> Self {
        let n = self.space.n;
        let perms = permutations(n);
        let flips: Vec<u32> = match epsp {
            Some(_) => (0..1u32 << n).collect(),
            None => vec![0],
        };
        let order = (perms.len() * flips.len()) as i64;
        self.map_kets(|s| {
            let mut out = Self::zero(self.space);
            let mut t = vec![0; n];
            for p in &perms {
                let perm_sign = if odd_inversions(p) { eps.value() } else { 1 };
                for &mask in &flips {
                    let flip_sign = epsp.map_or(1, |e| e.value().pow(mask.count_ones()));
                    for k in 0..n {
                        let v = s[p[k]];
                        t[k] = if mask >> k & 1 == 1 { -v } else { v };
                    }
                    let w = (perm_sign * flip_sign) as i64;
                    out.add_term(self.space.encode(&t), T::from_ratio(w, order));
                }
            }
            out
        })
    }

    pub fn to_dense(&self) -> Result<Vec<T>> {
        let d = self.space.dim_capped(DEFAULT_DIM_CAP)?;
        let mut v = vec![T::zero(); d];
        for (i, c) in self.iter() {
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> SpinVector<U> {
        SpinVector::from_terms(self.space, self.iter().map(|(i, c)| (i, f(c))))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<_> = self
            .iter()
            .map(|(i, c)| {
                let (num, den) = c.to_num_den();
                serde_json::json!({"index": i, "num": num, "den": den})
            })
            .collect();
        serde_json::json!({"two_m": self.space.two_m, "n": self.space.n, "coeffs": coeffs})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("spin vector JSON: {what}"));
        let two_m = v["two_m"].as_u64().ok_or_else(|| bad("two_m"))? as u32;
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        let space = SpinSpace::new(two_m, n)?;
        let mut out = Self::zero(space);
        for c in v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))? {
            let index = c["index"].as_u64().ok_or_else(|| bad("index"))? as usize;
            let num = c["num"].as_str().ok_or_else(|| bad("num"))?;
            let den = c["den"].as_str().ok_or_else(|| bad("den"))?;
            out.add_term(index, T::from_num_den(num, den).ok_or_else(|| bad("coefficient"))?);
        }
        Ok(out)
    }
}

/// `Π_i (1 + ε′S_i)/2` on a single ket.
fn reversal_projection<T: Coeff>(space: SpinSpace, s: &[i32], epsp: Sign) -> SpinVector<T> {
    let n = s.len();
    let mut out = SpinVector::zero(space);
    let mut t = s.to_vec();
    let denom = 1i64 << n;
    for mask in 0..1u32 << n {
        for k in 0..n {
            t[k] = if mask >> k & 1 == 1 { -s[k] } else { s[k] };
        }
        let w = epsp.value().pow(mask.count_ones()) as i64;
        out.add_term(space.encode(&t), T::from_ratio(w, denom));
    }
    out
}

/// `(1/N!) Σ_π ε^π π` on a single ket, via distinct rearrangements.
fn permutation_projection<T: Coeff>(space: SpinSpace, s: &[i32], eps: Sign) -> SpinVector<T> {
    let mut out = SpinVector::zero(space);
    match eps {
        Sign::Plus => {
            let rs = rearrangements(s);
            let count = rs.len() as i64;
            for r in rs {
                out.add_term(space.encode(&r), T::from_ratio(1, count));
            }
        }
        Sign::Minus => {
            if has_repeats(s) {
                return out;
            }
            let base = odd_inversions(s);
            let rs = rearrangements(s);
            let count = rs.len() as i64;
            for r in rs {
                let w = if odd_inversions(&r) == base { 1 } else { -1 };
                out.add_term(space.encode(&r), T::from_ratio(w, count));
            }
        }
    }
    out
}

/// Trace over Σ of the ordered product `g_1 ⋯ g_k`, by counting fixed basis kets.
pub fn trace_product(gens: &[Generator], space: SpinSpace, cap: usize) -> Result<BigInt> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("empty generator list".into()));
    }
    for g in gens {
        g.validate(space.n)?;
    }
    let dim = space.dim_capped(cap)?;
    let mut buf = vec![0; space.n];
    let mut orig = vec![0; space.n];
    let mut count = 0u64;
    for index in 0..dim {
        space.decode_into(index, &mut orig);
        buf.copy_from_slice(&orig);
        for g in gens.iter().rev() {
            g.act(&mut buf);
        }
        if buf == orig {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}
