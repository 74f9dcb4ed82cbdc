use hschain::chain_builder::{build_chain, diagonalize, emax_bcn, ChainKind, DEFAULT_BIN_TOL};
use hschain::dynamical_spectrum::{degeneracy, degeneracy_oracle, freeze_ratio, DynParams, MultiIndex};
use hschain::nn_chain::*;
use hschain::partition_functions::*;
use hschain::site_solver::{
    monic_site_polynomial, nn_gaussian_mse_with, nn_site_diagnostics, solve_sites, ChainFamily, StepConvention,
};
use hschain::spectral_stats::{moments_closed, moments_from_table, sigmas_closed, sigmas_from_sites};
use hschain::spin_algebra::{trace_product, DEFAULT_DIM_CAP};
use hschain::{ExactSpinVector, Generator, QExponent, Sign, SpinSpace, SymbolicTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::time::Instant;

const SIGNS: [(Sign, Sign); 4] =
    [(Sign::Minus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Plus, Sign::Plus)];
const SQRT2: f64 = std::f64::consts::SQRT_2;

struct Outcome {
    pass: bool,
    /// false only when a check that must hold is broken
    sound: bool,
    detail: String,
}

impl Outcome {
    fn strict(pass: bool, detail: String) -> Self {
        Outcome { pass, sound: pass, detail }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn ex1_table(m: i64) -> SymbolicTable {
    let degs = [
        m * (m - 1) * (m - 2),
        5 * m * (m * m - 1),
        m * (m + 1) * (11 * m - 2),
        m * (m + 1) * (7 * m - 4),
        m * (m + 1) * (7 * m + 11),
        m * (m + 1) * (11 * m + 13),
        5 * m * (m + 1) * (m + 2),
        (m + 1) * (m + 2) * (m + 3),
    ];
    let levels = [(0, 0), (1, 2), (2, 3), (3, 3), (3, 5), (4, 5), (5, 6), (6, 8)];
    SymbolicTable::new(
        levels
            .iter()
            .zip(degs)
            .filter(|(_, d)| *d != 0)
            .map(|(&(a, b), d)| (QExponent::new(a, b, 0), BigInt::from(d / 6)))
            .collect(),
    )
}

fn c1() -> Outcome {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for m in 1..=4 {
        let got = z_chain(3, 2 * m as u32, Sign::Minus, Sign::Minus).unwrap().spectrum_table().unwrap();
        if got != ex1_table(m) {
            bad.push(m);
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    Outcome::strict(bad.is_empty() && dt < 1.0, format!("M = 1..4, mismatches at M {bad:?}, {dt:.3} s"))
}

const EX2: [(i64, i64, i64); 21] = [
    (9, 32, 2),
    (10, 36, 2),
    (11, 38, 2),
    (11, 41, 4),
    (12, 38, 1),
    (12, 43, 6),
    (13, 43, 3),
    (13, 46, 6),
    (14, 46, 4),
    (14, 50, 4),
    (15, 47, 2),
    (15, 50, 3),
    (15, 55, 6),
    (16, 51, 2),
    (16, 55, 5),
    (17, 53, 1),
    (17, 56, 4),
    (18, 58, 3),
    (19, 61, 2),
    (20, 65, 1),
    (21, 70, 1),
];

fn c2() -> Outcome {
    let t0 = Instant::now();
    let want = SymbolicTable::new(EX2.iter().map(|&(m, n, d)| (QExponent::new(m, n, 0), BigInt::from(d))).collect());
    let ok = [Sign::Minus, Sign::Plus]
        .iter()
        .all(|&ep| z_chain(6, 1, Sign::Minus, ep).unwrap().spectrum_table().unwrap() == want);
    let dt = t0.elapsed().as_secs_f64();
    Outcome::strict(ok && dt < 1.0, format!("21 levels for both ε′, {dt:.3} s"))
}

fn c3() -> Outcome {
    let n10 = distinct_level_count(10, 1, Sign::Minus, Sign::Minus).unwrap();
    let t0 = Instant::now();
    let n20 = distinct_level_count(20, 1, Sign::Minus, Sign::Minus).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    Outcome::strict(n10 == 136 && n20 == 7756 && dt < 60.0, format!("N=10: {n10}, N=20: {n20} in {dt:.1} s"))
}

fn c4() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for (two_m, nmax) in [(1u32, 12usize), (2, 8), (3, 6)] {
        for n in 1..=nmax {
            let z: Vec<_> = SIGNS.iter().map(|&(e, ep)| z_chain(n, two_m, e, ep).unwrap()).collect();
            for (k, &(e, ep)) in SIGNS.iter().enumerate() {
                count += 1;
                if z[k].total() != total_states(n, two_m) {
                    bad.push(format!("total N={n} 2M={two_m} {e:?}{ep:?}"));
                }
                if !is_dual_pair(&z[k], &z[3 - k], n) {
                    bad.push(format!("duality N={n} 2M={two_m} {e:?}{ep:?}"));
                }
            }
            if two_m % 2 == 1 && (z[0] != z[1] || z[2] != z[3]) {
                bad.push(format!("ε′ dependence N={n} 2M={two_m}"));
            }
        }
    }
    Outcome::strict(bad.is_empty(), format!("{count} tables, failures {bad:?}"))
}

fn c5() -> Outcome {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (two_m, nmax) in [(1u32, 6usize), (2, 4)] {
        for n in 1..=nmax {
            for &(eps, epsp) in &SIGNS {
                let op = build_chain::<f64>(ChainKind::Bcn { eps, epsp, beta: SQRT2, betap: SQRT2 }, n, two_m).unwrap();
                let num = diagonalize(&op, DEFAULT_BIN_TOL).unwrap();
                let mut sym = z_chain(n, two_m, eps, epsp).unwrap().spectrum_table().unwrap().evaluate(SQRT2, 0.0);
                sym.sort_by(|a, b| a.0.total_cmp(&b.0));
                let same_shape = num.entries.len() == sym.len()
                    && num.entries.iter().zip(&sym).all(|(x, y)| BigInt::from(x.1) == y.1);
                for (x, y) in num.entries.iter().zip(&sym) {
                    worst = worst.max(rel(x.0, y.0));
                }
                if !same_shape {
                    bad.push(format!("N={n} 2M={two_m} {eps:?}{epsp:?}"));
                }
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    Outcome::strict(
        bad.is_empty() && worst <= 1e-8 && dt < 120.0,
        format!("max relative deviation {worst:.2e}, shape mismatches {bad:?}, {dt:.1} s"),
    )
}

fn c6() -> Outcome {
    let mut moment_bad = Vec::new();
    for n in 2..=8 {
        for two_m in 1..=4u32 {
            for &(eps, epsp) in &SIGNS {
                let table = z_chain(n, two_m, eps, epsp).unwrap().spectrum_table().unwrap();
                if moments_from_table(&table, n, two_m).unwrap() != moments_closed(n, two_m, eps, epsp).unwrap() {
                    moment_bad.push(format!("N={n} 2M={two_m} {eps:?}{epsp:?}"));
                }
            }
        }
    }
    let mut worst = 0.0f64;
    let mut literal = 0.0f64;
    for (beta, betap) in [(1.0, 1.0), (SQRT2, SQRT2), (0.5, 2.5)] {
        let bb = 0.5 * (beta + betap);
        for n in 1..=12 {
            let sites = solve_sites(ChainFamily::Bcn { beta, betap }, n, 1e-12).unwrap();
            let s = sigmas_from_sites(&sites).unwrap();
            let c = sigmas_closed(n);
            let (e_sites, _) = emax_bcn(&sites, beta, betap);
            for (x, y) in [(s.s1, &c.s1), (s.s2, &c.s2), (s.s3, &c.s3), (e_sites, &c.emax)] {
                worst = worst.max(rel(x, y.evaluate(bb)));
            }
            literal = literal.max(rel(s.s3, s.s1 / 8.0));
        }
    }
    let sound = moment_bad.is_empty() && worst <= 1e-8;
    let literal_ok = literal <= 1e-8;
    Outcome {
        pass: sound && literal_ok,
        sound,
        detail: format!(
            "moment mismatches {moment_bad:?}; sites vs closed forms {worst:.2e} with Σ₃ = β̄Σ₁/8; \
             printed Σ₃ = Σ₁/8 off by {literal:.2e} relative away from β̄ = 1"
        ),
    }
}

fn c7() -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for n in 1..=8 {
        for epsp in [Sign::Minus, Sign::Plus] {
            let z = match z_chain_magnetic(n, epsp) {
                Ok(z) => z,
                Err(e) => {
                    bad.push(format!("N={n} {epsp:?}: {e}"));
                    continue;
                }
            };
            let reduced = drop_field(&z) == z_chain(n, 1, Sign::Minus, epsp).unwrap();
            if !is_count_polynomial(&z) || z.total() != total_states(n, 1) || !reduced {
                bad.push(format!("N={n} {epsp:?}"));
            }
            if n > 6 {
                continue;
            }
            for field in [0.0, 0.3, 1.0] {
                let kind = ChainKind::BcnMagnetic { epsp, beta: SQRT2, betap: SQRT2, field };
                let num = diagonalize(&build_chain::<f64>(kind, n, 1).unwrap(), DEFAULT_BIN_TOL).unwrap();
                let exact = z.evaluate((-1.0f64).exp(), SQRT2, field);
                worst = worst.max((num.partition_sum(1.0) - exact).abs() / exact);
            }
        }
    }
    Outcome::strict(bad.is_empty() && worst <= 1e-8, format!("trace deviation {worst:.2e}, failures {bad:?}"))
}

fn c8() -> Outcome {
    let mut bad = Vec::new();
    let mut last = 0.0f64;
    for n in [2, 3] {
        for &(eps, epsp) in &SIGNS {
            let chain = z_chain(n, 1, eps, epsp).unwrap().evaluate((-1.0f64).exp(), SQRT2, 0.0);
            let errs: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
                .iter()
                .map(|&a| {
                    let p = DynParams { n, two_m: 1, eps, epsp, a, beta: SQRT2, betap: SQRT2 };
                    (freeze_ratio(&p, 1.0, 40).unwrap() - chain).abs() / chain
                })
                .collect();
            last = last.max(errs[3]);
            if errs.windows(2).any(|w| w[1] >= w[0]) || errs[3] >= 1e-2 {
                bad.push(format!("N={n} {eps:?}{epsp:?} {errs:?}"));
            }
        }
    }
    Outcome::strict(bad.is_empty(), format!("error at a = 200 at most {last:.2e}, failures {bad:?}"))
}

fn cyclic_nn_residual(x: &[f64]) -> f64 {
    let n = x.len();
    (0..n)
        .map(|i| {
            let prev = x[(i + n - 1) % n];
            let next = x[(i + 1) % n];
            (x[i] - 1.0 / (x[i] - prev) - 1.0 / (x[i] - next)).abs()
        })
        .fold(0.0, f64::max)
}

fn c9() -> Outcome {
    let mut bad = Vec::new();
    let want: [&[f64]; 3] = [&[1.0, 0.0, -1.0], &[1.0, 0.0, -1.5, 0.0], &[1.0, 0.0, -2.0, 0.0, 0.25]];
    let mut poly_dev = 0.0f64;
    for (k, w) in want.iter().enumerate() {
        let cfg = solve_sites(ChainFamily::Nn, k + 2, 1e-12).unwrap();
        let p = monic_site_polynomial(&cfg);
        poly_dev = p.iter().zip(w.iter()).map(|(a, b)| (a - b).abs()).fold(poly_dev, f64::max);
    }
    if poly_dev > 1e-9 {
        bad.push("p_N".to_string());
    }
    let mut sizes: Vec<usize> = (2..=40).collect();
    sizes.extend([50, 64, 100, 128, 150, 200]);
    let mut diag = 0.0f64;
    for &n in &sizes {
        let cfg = solve_sites(ChainFamily::Nn, n, 1e-12).unwrap();
        let d = nn_site_diagnostics(&cfg).unwrap();
        let r = cyclic_nn_residual(&cfg.xi);
        diag = diag.max(d.sum_xi.abs()).max((d.norm_sq - n as f64).abs()).max(d.symmetry_defect).max(r);
    }
    if diag > 1e-10 {
        bad.push("NN sites".to_string());
    }
    let cfg = solve_sites(ChainFamily::Nn, 100, 1e-12).unwrap();
    let mid = nn_gaussian_mse_with(&cfg, StepConvention::Mid);
    let right = nn_gaussian_mse_with(&cfg, StepConvention::Right);
    if mid > 3.0e-5 {
        bad.push("MSE".to_string());
    }
    let mut pf = 0.0f64;
    for n in 2..=50 {
        let x = solve_sites(ChainFamily::Pf, n, 1e-12).unwrap().xi;
        for i in 0..n {
            let s: f64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (x[i] - x[j])).sum();
            pf = pf.max((x[i] - s).abs());
        }
    }
    if pf >= 1e-10 {
        bad.push("PF sites".to_string());
    }
    Outcome::strict(
        bad.is_empty(),
        format!(
            "p_N deviation {poly_dev:.1e}, NN site checks {diag:.1e}, MSE at N=100 {mid:.2e} \
             (right-step {right:.2e}, paper 2.6e-5), PF residual {pf:.1e}, failures {bad:?}"
        ),
    )
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c10() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=6usize {
        for two_m in 1..=2u32 {
            let space = SpinSpace::new(two_m, n).unwrap();
            let factor = ratio(2, n as i64 - 1);
            for c in SpinContent::all(n, two_m) {
                let lam_s = lambda(&ExactSpinVector::ket(space, &c.ket()).unwrap());
                if a_apply(&lam_s).unwrap() != lam_s.scale(&factor) {
                    bad.push(format!("symmetric N={n} {c:?}"));
                }
                for (i, chi) in chi_all::<BigRational>(&c, two_m).unwrap().iter().enumerate() {
                    let a = a_apply(chi).unwrap();
                    let nu = c.mult[i] as i64;
                    let w = if nu > 1 { ratio(2 * (2 * nu - n as i64), 1) } else { ratio(4, 1) };
                    if a != lambda(chi).scale(&factor) || a != lam_s.scale(&w) || !sigma_prime_test(chi).unwrap() {
                        bad.push(format!("χ{i} N={n} {c:?}"));
                    }
                }
            }
        }
    }
    let mut worst = 0.0f64;
    let mut ranks = Vec::new();
    for n in 2..=8usize {
        for two_m in 1..=2u32 {
            let op = build_chain::<f64>(ChainKind::Nn, n, two_m).unwrap();
            let av = algebraic_vectors(n, two_m, op.sites.as_ref().unwrap()).unwrap();
            let d = dims(n, two_m);
            for e in 0..4 {
                for v in &av.by_energy[e] {
                    worst = worst.max(residual(&op, v, e as f64).unwrap());
                }
                if BigInt::from(av.ranks()[e]) > d[e] {
                    bad.push(format!("rank E={e} N={n} 2M={two_m}"));
                }
            }
            if BigInt::from(av.ranks()[0]) != d[0] {
                bad.push(format!("algebraic kernel N={n} 2M={two_m}"));
            }
            if n <= 6 {
                let table = diagonalize(&op, DEFAULT_BIN_TOL).unwrap();
                let kernel = table.entries.iter().find(|(e, _)| e.abs() < 1e-8).map_or(0, |x| x.1);
                if BigInt::from(kernel) != d[0] {
                    bad.push(format!("kernel N={n} 2M={two_m}"));
                }
            }
            ranks.push(format!("N={n},2M={two_m}:{:?}", av.ranks()));
        }
    }
    if worst > 1e-8 {
        bad.push("residual".to_string());
    }
    Outcome::strict(
        bad.is_empty(),
        format!("max residual {worst:.1e}, failures {bad:?}, ranks {}", ranks.join(" ")),
    )
}

type Pinned = (usize, u32, &'static [(i64, usize)]);

const OBSERVED: [Pinned; 15] = [
    (2, 1, &[(0, 1), (1, 2)]),
    (3, 1, &[(0, 1), (1, 2), (2, 3)]),
    (4, 1, &[(0, 1), (1, 2), (2, 3), (5, 4), (6, 5)]),
    (5, 1, &[(0, 1), (1, 2), (2, 3)]),
    (6, 1, &[(0, 1), (1, 2), (2, 3)]),
    (7, 1, &[(0, 1), (1, 2), (2, 3)]),
    (8, 1, &[(0, 1), (1, 2), (2, 3)]),
    (9, 1, &[(0, 1), (1, 2), (2, 3)]),
    (10, 1, &[(0, 1), (1, 2), (2, 3)]),
    (2, 2, &[(0, 1), (1, 2)]),
    (3, 2, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
    (4, 2, &[(0, 1), (1, 2), (2, 3), (3, 4), (5, 5), (6, 6), (7, 7)]),
    (5, 2, &[(0, 1), (1, 2), (2, 3), (3, 5)]),
    (6, 2, &[(0, 1), (1, 2), (2, 3), (3, 5)]),
    (7, 2, &[(0, 1), (1, 2), (2, 3), (3, 5)]),
];

fn c11() -> Outcome {
    let mut failing = Vec::new();
    let mut unsound = Vec::new();
    let mut against_algebraic = Vec::new();
    for &(n, two_m, pinned) in &OBSERVED {
        let op = build_chain::<f64>(ChainKind::Nn, n, two_m).unwrap();
        let table = diagonalize(&op, DEFAULT_BIN_TOL).unwrap();
        let check = conjecture_check(n, two_m, &table, 1e-6);
        println!("  {}", serde_json::to_string(&check).unwrap());
        if !check.pass {
            failing.push(format!("N={n},2M={two_m}:{:?}", check.scan.integers));
        }
        let av = algebraic_vectors(n, two_m, op.sites.as_ref().unwrap()).unwrap();
        let algebraic: Vec<i64> = (0..4).filter(|&e| av.ranks()[e] > 0).map(|e| e as i64).collect();
        let covered = algebraic.iter().all(|e| check.scan.integers.contains(e));
        if check.scan.integers != algebraic || !check.lowest_ok || !check.fifth_ok {
            against_algebraic.push(format!("N={n},2M={two_m}"));
        }
        if !covered || check.scan.positions != pinned {
            unsound.push(format!("N={n},2M={two_m}:{:?}", check.scan.positions));
        }
    }
    let sound = unsound.is_empty();
    Outcome {
        pass: failing.is_empty() && sound,
        sound,
        detail: format!(
            "integer set differs from {{0,1,2,3}} or ordering fails for {}; \
             reading the integer set as the algebraic energies still fails for {}; \
             algebraic levels present and scan matches pinned data except {unsound:?}",
            failing.join(" "),
            against_algebraic.join(" ")
        ),
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Dimension of the `(ε, ε′)` isotypic part of `(C^{2M+1})^{⊗k}` under S_k, or under
/// the hyperoctahedral group when `reflect` is set, from the character formula.
fn character_count(k: usize, two_m: u32, eps: Sign, epsp: Sign, reflect: bool) -> BigInt {
    let b = BigInt::from(two_m + 1);
    let fixed = BigInt::from(u32::from(two_m % 2 == 0));
    let flip_sets: Vec<u32> = if reflect { (0..1u32 << k).collect() } else { vec![0] };
    let mut sum = BigInt::from(0);
    let perms = permutations(k);
    for p in &perms {
        for &f in &flip_sets {
            let mut seen = vec![false; k];
            let mut term = BigInt::from(1);
            let mut cycles = 0;
            for start in 0..k {
                if seen[start] {
                    continue;
                }
                cycles += 1;
                let mut flips = 0;
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    flips += (f >> i) & 1;
                    i = p[i];
                }
                term *= if flips % 2 == 0 { &b } else { &fixed };
            }
            let odd_perm = (k - cycles) % 2 == 1;
            let mut sign = 1;
            if odd_perm && eps == Sign::Minus {
                sign = -sign;
            }
            if f.count_ones() % 2 == 1 && epsp == Sign::Minus {
                sign = -sign;
            }
            sum += term * sign;
        }
    }
    sum / BigInt::from(perms.len() * flip_sets.len())
}

fn block_count(idx: &MultiIndex, two_m: u32, eps: Sign, epsp: Sign) -> BigInt {
    idx.blocks()
        .into_iter()
        .map(|(v, k)| character_count(k, two_m, eps, epsp, v == 0))
        .fold(BigInt::from(1), |a, b| a * b)
}

fn pow(b: i64, e: i64) -> BigInt {
    BigInt::from(b).pow(e as u32)
}

fn trace_rows(n: usize, two_m: u32) -> Vec<String> {
    let sp = SpinSpace::new(two_m, n).unwrap();
    let tr = |g: &[Generator]| trace_product(g, sp, DEFAULT_DIM_CAP).unwrap();
    let d = |a: usize, c: usize| i64::from(a == c);
    let (b, nn, half) = (two_m as i64 + 1, n as i64, two_m % 2 == 1);
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let (x, t, s) = (Generator::Exchange, Generator::TildeExchange, Generator::Reversal);
    let mut bad = Vec::new();
    let mut check = |got: BigInt, want: BigInt, what: String| {
        if got != want {
            bad.push(what);
        }
    };
    for i in 1..=n {
        check(tr(&[s(i)]), if half { 0.into() } else { pow(b, nn - 1) }, format!("S({i})"));
        for j in 1..=n {
            let want = if half { pow(b, nn) * d(i, j) } else { pow(b, nn - 2 + 2 * d(i, j)) };
            check(tr(&[s(i), s(j)]), want, format!("S({i}) S({j})"));
        }
    }
    for &(i, j) in &pairs {
        check(tr(&[x(i, j)]), pow(b, nn - 1), format!("S({i},{j})"));
        check(tr(&[t(i, j)]), pow(b, nn - 1), format!("T({i},{j})"));
        for k in 1..=n {
            let want = if half { BigInt::from(0) } else { pow(b, nn - 2) };
            check(tr(&[x(i, j), s(k)]), want.clone(), format!("S({i},{j}) S({k})"));
            check(tr(&[t(i, j), s(k)]), want, format!("T({i},{j}) S({k})"));
        }
        for &(k, l) in &pairs {
            let same = 2 * d(i, k) * d(j, l) + 2 * d(i, l) * d(j, k);
            let mixed = if half {
                pow(b, nn - 2) * ((1 - d(i, k) * d(j, l)) * (1 - d(i, l) * d(j, k)))
            } else {
                pow(b, nn - 2)
            };
            check(tr(&[x(i, j), t(k, l)]), mixed, format!("S({i},{j}) T({k},{l})"));
            check(tr(&[x(i, j), x(k, l)]), pow(b, nn - 2 + same), format!("S({i},{j}) S({k},{l})"));
            check(tr(&[t(i, j), t(k, l)]), pow(b, nn - 2 + same), format!("T({i},{j}) T({k},{l})"));
        }
    }
    bad
}

fn c12() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=5 {
        for two_m in 1..=2u32 {
            for &(eps, epsp) in &SIGNS {
                for idx in MultiIndex::enumerate(n, 3) {
                    count += 1;
                    let closed = degeneracy(&idx, two_m, eps, epsp).unwrap();
                    let brute = degeneracy_oracle(&idx, two_m, eps, epsp).unwrap();
                    if closed != brute || closed != block_count(&idx, two_m, eps, epsp) {
                        bad.push(format!("{idx:?} 2M={two_m} {eps:?}{epsp:?}"));
                    }
                }
            }
        }
    }
    let mut trace_bad = Vec::new();
    for n in 2..=5 {
        for two_m in 1..=2 {
            trace_bad.extend(trace_rows(n, two_m).into_iter().map(|r| format!("N={n} 2M={two_m} {r}")));
        }
    }
    Outcome::strict(
        bad.is_empty() && trace_bad.is_empty(),
        format!("{count} multiindices, degeneracy failures {bad:?}, trace failures {trace_bad:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("ex1 levels and degeneracies", c1),
        ("ex2 spectrum", c2),
        ("distinct level counts", c3),
        ("normalization and duality", c4),
        ("closed form vs diagonalization", c5),
        ("moments and site sums", c6),
        ("magnetic partition function", c7),
        ("freezing limit", c8),
        ("NN and PF sites", c9),
        ("NN algebraic states", c10),
        ("NN integer spectrum", c11),
        ("degeneracies and traces", c12),
    ];
    let mut broken = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name} [{:.1} s]: {}", k + 1, t0.elapsed().as_secs_f64(), o.detail);
        if !o.sound {
            broken.push(k + 1);
        }
    }
    if !broken.is_empty() {
        eprintln!("broken criteria: {broken:?}");
        std::process::exit(1);
    }
}
