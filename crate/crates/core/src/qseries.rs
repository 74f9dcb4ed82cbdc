//! Laurent polynomials in `q` whose exponents are formal combinations `m·β̄ + n + p·B`.

use crate::error::{Error, Result};
use crate::spectrum::SymbolicTable;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent `m·β̄ + n + p·B`, ordered lexicographically in `(m, n, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QExponent {
    pub m: i64,
    pub n: i64,
    pub p: i64,
}

impl QExponent {
    pub const ZERO: QExponent = QExponent { m: 0, n: 0, p: 0 };

    pub fn new(m: i64, n: i64, p: i64) -> Self {
        QExponent { m, n, p }
    }

    pub fn value(&self, beta_bar: f64, b: f64) -> f64 {
        self.m as f64 * beta_bar + self.n as f64 + self.p as f64 * b
    }
}

impl Add for QExponent {
    type Output = QExponent;
    fn add(self, o: QExponent) -> QExponent {
        QExponent::new(self.m + o.m, self.n + o.n, self.p + o.p)
    }
}

impl Sub for QExponent {
    type Output = QExponent;
    fn sub(self, o: QExponent) -> QExponent {
        QExponent::new(self.m - o.m, self.n - o.n, self.p - o.p)
    }
}

impl Neg for QExponent {
    type Output = QExponent;
    fn neg(self) -> QExponent {
        QExponent::new(-self.m, -self.n, -self.p)
    }
}

impl fmt::Display for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.m {
            0 => {}
            1 => parts.push("β̄".to_string()),
            -1 => parts.push("-β̄".to_string()),
            m => parts.push(format!("{m}β̄")),
        }
        if self.n != 0 || (self.m == 0 && self.p == 0) {
            parts.push(self.n.to_string());
        }
        match self.p {
            0 => {}
            1 => parts.push("B".to_string()),
            -1 => parts.push("-B".to_string()),
            p => parts.push(format!("{p}B")),
        }
        let mut s = String::new();
        for (k, part) in parts.iter().enumerate() {
            if k > 0 && !part.starts_with('-') {
                s.push('+');
            }
            s.push_str(part);
        }
        f.write_str(&s)
    }
}

/// Sparse polynomial with big-integer coefficients, terms sorted by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    terms: Vec<(QExponent, BigInt)>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(QExponent::ZERO, BigInt::one())
    }

    pub fn monomial(e: QExponent, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            QPoly { terms: vec![(e, c)] }
        }
    }

    /// `1 - q^e`
    pub fn one_minus(e: QExponent) -> Self {
        Self::from_terms([(QExponent::ZERO, BigInt::one()), (e, -BigInt::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (QExponent, BigInt)>) -> Self {
        let mut acc: BTreeMap<QExponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        QPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(QExponent, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, e: QExponent) -> BigInt {
        match self.terms.binary_search_by(|(x, _)| x.cmp(&e)) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(QExponent, BigInt)> {
        self.terms.last()
    }

    pub fn lowest(&self) -> Option<&(QExponent, BigInt)> {
        self.terms.first()
    }

    /// Sum of the coefficients, i.e. the value at `q = 1`.
    pub fn total(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    fn merge(a: &[(QExponent, BigInt)], b: impl Iterator<Item = (QExponent, BigInt)>) -> Self {
        let mut out = Vec::with_capacity(a.len());
        let mut ia = a.iter().peekable();
        let mut ib = b.peekable();
        loop {
            let ord = match (ia.peek(), ib.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some((ea, _)), Some((eb, _))) => ea.cmp(eb),
            };
            match ord {
                Ordering::Less => out.push(ia.next().unwrap().clone()),
                Ordering::Greater => out.push(ib.next().unwrap()),
                Ordering::Equal => {
                    let (e, ca) = ia.next().unwrap();
                    let (_, cb) = ib.next().unwrap();
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*e, s));
                    }
                }
            }
        }
        QPoly { terms: out }
    }

    /// `self + c·q^e·other`
    pub fn add_shifted(&self, other: &QPoly, e: QExponent, c: &BigInt) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        Self::merge(&self.terms, other.terms.iter().map(|(x, d)| (*x + e, d * c)))
    }

    pub fn shift(&self, e: QExponent) -> Self {
        QPoly { terms: self.terms.iter().map(|(x, c)| (*x + e, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { terms: self.terms.iter().map(|(x, d)| (*x, d * c)).collect() }
    }

    /// `self · (1 - q^e)`
    pub fn mul_one_minus(&self, e: QExponent) -> Self {
        self.add_shifted(self, e, &-BigInt::one())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact quotient by Laurent long division along the lexicographic order.
    pub fn exact_divide(&self, b: &QPoly) -> Result<QPoly> {
        let (lead_e, lead_c) = b
            .leading()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("division by the zero polynomial".into()))?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let floor = self.lowest().unwrap().0 - b.lowest().unwrap().0;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((re, rc)) = rem.leading().cloned() {
            let te = re - lead_e;
            if te < floor {
                return Err(Error::NonDivisible);
            }
            let (tc, r) = rc.div_rem(&lead_c);
            if !r.is_zero() {
                return Err(Error::NonDivisible);
            }
            rem = rem.add_shifted(b, te, &-tc.clone());
            quot.push((te, tc));
        }
        quot.reverse();
        Ok(QPoly { terms: quot })
    }

    pub fn evaluate(&self, q: f64, beta_bar: f64, b: f64) -> f64 {
        let lq = q.ln();
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * (lq * e.value(beta_bar, b)).exp())
            .sum()
    }

    /// Replaces every exponent by `f(e)`, merging collisions.
    pub fn map_exponents(&self, f: impl Fn(QExponent) -> QExponent) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    pub fn spectrum_table(&self) -> Result<SymbolicTable> {
        if let Some((e, _)) = self.terms.iter().find(|(_, c)| c.is_negative()) {
            return Err(Error::NegativeCoefficient(e.to_string()));
        }
        Ok(SymbolicTable::new(self.terms.clone()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| serde_json::json!({"m": e.m, "n": e.n, "p": e.p, "coeff": c.to_string()}))
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::InvalidArgument("malformed polynomial JSON".into());
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(bad)? {
            let e = QExponent::new(
                t["m"].as_i64().ok_or_else(bad)?,
                t["n"].as_i64().ok_or_else(bad)?,
                t["p"].as_i64().ok_or_else(bad)?,
            );
            let c: BigInt = t["coeff"].as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            if *e == QExponent::ZERO {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "q^({e})")?;
            } else {
                write!(f, "{a}·q^({e})")?;
            }
        }
        Ok(())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        QPoly::merge(&self.terms, o.terms.iter().cloned())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        QPoly::merge(&self.terms, o.terms.iter().map(|(e, c)| (*e, -c)))
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        let mut acc: BTreeMap<QExponent, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                *acc.entry(*ea + *eb).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        QPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $f(self, o: QPoly) -> QPoly {
                (&self).$f(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

/// Quotient of two polynomials, reduced only on request.
#[derive(Clone, Debug, PartialEq)]
pub struct QRat {
    pub num: QPoly,
    pub den: QPoly,
}

impl QRat {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(QRat { num, den })
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRat { num: p, den: QPoly::one() }
    }

    pub fn add(&self, o: &QRat) -> QRat {
        if self.den == o.den {
            return QRat { num: &self.num + &o.num, den: self.den.clone() };
        }
        QRat { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    pub fn mul(&self, o: &QRat) -> QRat {
        QRat { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    /// The polynomial `num/den`; fails when the quotient is not a polynomial.
    pub fn into_poly(&self) -> Result<QPoly> {
        self.num.exact_divide(&self.den)
    }

    pub fn evaluate(&self, q: f64, beta_bar: f64, b: f64) -> f64 {
        self.num.evaluate(q, beta_bar, b) / self.den.evaluate(q, beta_bar, b)
    }
}
