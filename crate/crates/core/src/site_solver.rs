//! Equilibrium site configurations: critical points of the log-potentials of the
//! BC_N, nearest-neighbors and Polychronakos–Frahm chains, plus asymptotic site laws.

use crate::error::{Error, Result};
use crate::linalg::cholesky_solve;
use crate::scalar::Real;
use crate::special::{erf, erf_inv};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ChainFamily<T> {
    Bcn { beta: T, betap: T },
    Nn,
    Pf,
    Hs,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiteConfig<T> {
    pub family: ChainFamily<T>,
    pub n: usize,
    pub xi: Vec<T>,
    /// max-norm of the gradient of the log-potential at `xi`
    pub residual: T,
    pub iterations: usize,
}

const MAX_ITER: usize = 500;

/// Solves for the sites of `family` with `n` particles.
pub fn solve_sites<T: Real>(family: ChainFamily<T>, n: usize, tol: T) -> Result<SiteConfig<T>> {
    if let ChainFamily::Bcn { beta, betap } = family {
        if !(beta > T::zero() && betap > T::zero()) {
            return Err(Error::InvalidArgument("β and β′ must be positive".into()));
        }
    }
    match family {
        ChainFamily::Hs => {
            if n == 0 {
                return Err(Error::InvalidArgument("N must be positive".into()));
            }
            let xi = (1..=n).map(|i| T::lit(i as f64) * T::PI() / T::lit(n as f64)).collect();
            return Ok(SiteConfig { family, n, xi, residual: T::zero(), iterations: 0 });
        }
        ChainFamily::Bcn { .. } if n == 0 => {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        ChainFamily::Nn | ChainFamily::Pf if n < 2 => {
            return Err(Error::InvalidArgument("N must be at least 2".into()));
        }
        _ => {}
    }
    let x0 = initial_guess(family, n);
    newton(family, x0, tol)
}

fn initial_guess<T: Real>(family: ChainFamily<T>, n: usize) -> Vec<T> {
    let nf = n as f64;
    let v: Vec<f64> = match family {
        ChainFamily::Nn => nn_asymptotic_sites(n),
        ChainFamily::Pf => {
            let r = (2.0 * nf).sqrt();
            (1..=n).map(|k| r * semicircle_quantile((k as f64 - 0.5) / nf)).collect()
        }
        ChainFamily::Bcn { .. } => {
            (1..=n).map(|i| i as f64 * std::f64::consts::PI / (2.0 * (nf + 1.0))).collect()
        }
        ChainFamily::Hs => (1..=n).map(|i| i as f64 * std::f64::consts::PI / nf).collect(),
    };
    v.into_iter().map(T::lit).collect()
}

// Quantile on [-1, 1] of the unit semicircle law.
fn semicircle_quantile(u: f64) -> f64 {
    let target = std::f64::consts::PI * (u - 0.5);
    let mut th = target / 2.0;
    for _ in 0..60 {
        let f = th + th.sin() * th.cos() - target;
        let df = 2.0 * th.cos().powi(2);
        if df <= 1e-300 {
            break;
        }
        let step = f / df;
        th = (th - step).clamp(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        if step.abs() < 1e-15 {
            break;
        }
    }
    th.sin()
}

fn newton<T: Real>(family: ChainFamily<T>, mut x: Vec<T>, tol: T) -> Result<SiteConfig<T>> {
    let n = x.len();
    if !in_domain(family, &x) {
        return Err(Error::DomainViolation);
    }
    let mut val = potential(family, &x);
    for it in 0..MAX_ITER {
        let g = gradient(family, &x);
        let res = max_abs(&g);
        if res <= tol {
            return Ok(SiteConfig { family, n, xi: x, residual: res, iterations: it });
        }
        let neg_h: Vec<T> = hessian(family, &x).into_iter().map(|v| -v).collect();
        let step = cholesky_solve(&neg_h, &g, n).unwrap_or_else(|| g.clone());
        let mut t = T::one();
        let slack = T::epsilon() * T::lit(64.0) * (T::one() + val.abs());
        let mut accepted = false;
        for _ in 0..80 {
            let trial: Vec<T> = x.iter().zip(&step).map(|(&a, &s)| a + t * s).collect();
            if in_domain(family, &trial) {
                let tv = potential(family, &trial);
                if tv >= val - slack {
                    x = trial;
                    val = tv;
                    accepted = true;
                    break;
                }
            }
            t = t / T::lit(2.0);
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it, residual: res.as_f64() });
        }
    }
    let res = max_abs(&gradient(family, &x));
    if res <= tol {
        Ok(SiteConfig { family, n, xi: x, residual: res, iterations: MAX_ITER })
    } else {
        Err(Error::NoConvergence { iterations: MAX_ITER, residual: res.as_f64() })
    }
}

fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

fn increasing<T: Real>(x: &[T]) -> bool {
    x.windows(2).all(|w| w[0] < w[1]) && x.iter().all(|v| v.is_finite())
}

pub fn in_domain<T: Real>(family: ChainFamily<T>, x: &[T]) -> bool {
    match family {
        ChainFamily::Bcn { .. } => {
            increasing(x) && x[0] > T::zero() && x[x.len() - 1] < T::FRAC_PI_2()
        }
        _ => increasing(x),
    }
}

fn neighbours(i: usize, n: usize) -> [usize; 2] {
    [(i + 1) % n, (i + n - 1) % n]
}

/// The log-potential whose maximum defines the sites.
pub fn potential<T: Real>(family: ChainFamily<T>, x: &[T]) -> T {
    let n = x.len();
    let half = T::lit(0.5);
    match family {
        ChainFamily::Bcn { beta, betap } => {
            let mut s = T::zero();
            for i in 0..n {
                for j in i + 1..n {
                    s = s + (x[j] - x[i]).sin().ln() + (x[i] + x[j]).sin().ln();
                }
                s = s + beta * x[i].sin().ln() + betap * x[i].cos().ln();
            }
            s
        }
        ChainFamily::Nn => {
            let mut s = T::zero();
            for i in 0..n {
                s = s + (x[i] - x[(i + 1) % n]).abs().ln() - half * x[i] * x[i];
            }
            s
        }
        ChainFamily::Pf | ChainFamily::Hs => {
            let mut s = T::zero();
            for i in 0..n {
                for j in i + 1..n {
                    s = s + (x[j] - x[i]).abs().ln();
                }
                s = s - half * x[i] * x[i];
            }
            s
        }
    }
}

pub fn gradient<T: Real>(family: ChainFamily<T>, x: &[T]) -> Vec<T> {
    let n = x.len();
    (0..n)
        .map(|i| match family {
            ChainFamily::Bcn { beta, betap } => {
                let mut g = beta / x[i].tan() - betap * x[i].tan();
                for j in (0..n).filter(|&j| j != i) {
                    g = g + T::one() / (x[i] - x[j]).tan() + T::one() / (x[i] + x[j]).tan();
                }
                g
            }
            ChainFamily::Nn => {
                let [a, b] = neighbours(i, n);
                T::one() / (x[i] - x[a]) + T::one() / (x[i] - x[b]) - x[i]
            }
            ChainFamily::Pf | ChainFamily::Hs => {
                let mut g = -x[i];
                for j in (0..n).filter(|&j| j != i) {
                    g = g + T::one() / (x[i] - x[j]);
                }
                g
            }
        })
        .collect()
}

/// Row-major Hessian of [`potential`].
pub fn hessian<T: Real>(family: ChainFamily<T>, x: &[T]) -> Vec<T> {
    let n = x.len();
    let mut h = vec![T::zero(); n * n];
    let csc2 = |t: T| {
        let s = t.sin();
        T::one() / (s * s)
    };
    match family {
        ChainFamily::Bcn { beta, betap } => {
            for i in 0..n {
                let c = x[i].cos();
                let mut d = -beta * csc2(x[i]) - betap / (c * c);
                for j in (0..n).filter(|&j| j != i) {
                    let minus = csc2(x[i] - x[j]);
                    let plus = csc2(x[i] + x[j]);
                    d = d - minus - plus;
                    h[i * n + j] = minus - plus;
                }
                h[i * n + i] = d;
            }
        }
        ChainFamily::Nn => {
            for i in 0..n {
                h[i * n + i] = -T::one();
                for j in neighbours(i, n) {
                    let w = T::one() / ((x[i] - x[j]) * (x[i] - x[j]));
                    h[i * n + i] = h[i * n + i] - w;
                    h[i * n + j] = h[i * n + j] + w;
                }
            }
        }
        ChainFamily::Pf | ChainFamily::Hs => {
            for i in 0..n {
                let mut d = -T::one();
                for j in (0..n).filter(|&j| j != i) {
                    let w = T::one() / ((x[i] - x[j]) * (x[i] - x[j]));
                    d = d - w;
                    h[i * n + j] = w;
                }
                h[i * n + i] = d;
            }
        }
    }
    h
}

/// Coefficients of `Π (t - ξ_i)` in descending powers.
pub fn monic_site_polynomial<T: Real>(cfg: &SiteConfig<T>) -> Vec<T> {
    let mut c = vec![T::one()];
    for &r in &cfg.xi {
        let mut next = vec![T::zero(); c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k] = next[k] + a;
            next[k + 1] = next[k + 1] - a * r;
        }
        c = next;
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NnDiagnostics {
    pub sum_xi: f64,
    pub norm_sq: f64,
    pub symmetry_defect: f64,
    /// `(ξ_k, k/N)`, the jump points of the empirical distribution function
    pub cdf: Vec<(f64, f64)>,
}

pub fn nn_site_diagnostics<T: Real>(cfg: &SiteConfig<T>) -> Result<NnDiagnostics> {
    if cfg.family != ChainFamily::Nn {
        return Err(Error::InvalidArgument("diagnostics need NN sites".into()));
    }
    let xi: Vec<f64> = cfg.xi.iter().map(|v| v.as_f64()).collect();
    let n = xi.len();
    let symmetry_defect = (0..n).map(|i| (xi[i] + xi[n - 1 - i]).abs()).fold(0.0, f64::max);
    Ok(NnDiagnostics {
        sum_xi: xi.iter().sum(),
        norm_sq: xi.iter().map(|v| v * v).sum(),
        symmetry_defect,
        cdf: xi.iter().enumerate().map(|(k, &v)| (v, (k + 1) as f64 / n as f64)).collect(),
    })
}

/// Where the empirical site distribution is sampled at the k-th site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepConvention {
    /// `(k - 1/2)/N`
    Mid,
    /// `k/N`
    Right,
}

/// Mean-square deviation between the empirical site distribution and the Gaussian law,
/// sampled at the sites, with mid-step empirical values.
pub fn nn_gaussian_mse<T: Real>(cfg: &SiteConfig<T>) -> f64 {
    nn_gaussian_mse_with(cfg, StepConvention::Mid)
}

pub fn nn_gaussian_mse_with<T: Real>(cfg: &SiteConfig<T>, step: StepConvention) -> f64 {
    let n = cfg.xi.len() as f64;
    let off = match step {
        StepConvention::Mid => 0.5,
        StepConvention::Right => 1.0,
    };
    cfg.xi
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let d = (k as f64 + off) / n - nn_gaussian_cdf(x.as_f64());
            d * d
        })
        .sum::<f64>()
        / n
}

/// `ξ_k ≈ √2 erf⁻¹((2k - N - 1)/N)`
pub fn nn_asymptotic_sites(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n)
        .map(|k| std::f64::consts::SQRT_2 * erf_inv((2.0 * k as f64 - nf - 1.0) / nf))
        .collect()
}

/// `ξ_N ≈ √(2η - log η)` with `η = log(N/(α√π))`.
pub fn nn_last_site_law(n: usize, alpha: f64) -> f64 {
    let eta = (n as f64 / (alpha * std::f64::consts::PI.sqrt())).ln();
    (2.0 * eta - eta.ln()).sqrt()
}

pub fn nn_gaussian_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Nearest-neighbour coupling near `x̄`: `(N²/2π) e^{-x̄²}`.
pub fn nn_coupling_law(xbar: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf * nf / (2.0 * std::f64::consts::PI) * (-xbar * xbar).exp()
}

/// Semicircle density of the Polychronakos–Frahm sites.
pub fn pf_density(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    let r2 = 2.0 * nf - x * x;
    if r2 <= 0.0 {
        0.0
    } else {
        r2.sqrt() / (std::f64::consts::PI * nf)
    }
}
