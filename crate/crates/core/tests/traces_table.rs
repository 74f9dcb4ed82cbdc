use hschain::spin_algebra::{trace_product, DEFAULT_DIM_CAP};
use hschain::{Generator, SpinSpace};
use num_bigint::BigInt;

fn d(i: usize, j: usize) -> i64 {
    i64::from(i == j)
}

fn pow(base: i64, e: i64) -> BigInt {
    assert!(e >= 0);
    BigInt::from(base).pow(e as u32)
}

fn tr(space: SpinSpace, gens: &[Generator]) -> BigInt {
    trace_product(gens, space, DEFAULT_DIM_CAP).unwrap()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                v.push((i, j));
            }
        }
    }
    v
}

#[test]
fn single_operator_rows() {
    for n in 2..=5 {
        for two_m in 1..=2u32 {
            let sp = SpinSpace::new(two_m, n).unwrap();
            let b = two_m as i64 + 1;
            let half = two_m % 2 == 1;
            let n = n as i64;
            for i in 1..=n as usize {
                let want = if half { BigInt::from(0) } else { pow(b, n - 1) };
                assert_eq!(tr(sp, &[Generator::Reversal(i)]), want);
            }
            for (i, j) in pairs(n as usize) {
                assert_eq!(tr(sp, &[Generator::Exchange(i, j)]), pow(b, n - 1));
                assert_eq!(tr(sp, &[Generator::TildeExchange(i, j)]), pow(b, n - 1));
            }
        }
    }
}

#[test]
fn reversal_pairs() {
    for n in 2..=5 {
        for two_m in 1..=2u32 {
            let sp = SpinSpace::new(two_m, n).unwrap();
            let b = two_m as i64 + 1;
            let nn = n as i64;
            for i in 1..=n {
                for j in 1..=n {
                    let got = tr(sp, &[Generator::Reversal(i), Generator::Reversal(j)]);
                    let want =
                        if two_m % 2 == 1 { pow(b, nn) * d(i, j) } else { pow(b, nn - 2 + 2 * d(i, j)) };
                    assert_eq!(got, want, "S_{i} S_{j}, N={n}, 2M={two_m}");
                }
            }
        }
    }
}

#[test]
fn exchange_times_reversal() {
    for n in 2..=5 {
        for two_m in 1..=2u32 {
            let sp = SpinSpace::new(two_m, n).unwrap();
            let want = if two_m % 2 == 1 { BigInt::from(0) } else { pow(two_m as i64 + 1, n as i64 - 2) };
            for (i, j) in pairs(n) {
                for k in 1..=n {
                    for g in [Generator::Exchange(i, j), Generator::TildeExchange(i, j)] {
                        assert_eq!(tr(sp, &[g, Generator::Reversal(k)]), want, "{g} S({k})");
                    }
                }
            }
        }
    }
}

#[test]
fn exchange_pairs() {
    for n in 2..=5 {
        for two_m in 1..=2u32 {
            let sp = SpinSpace::new(two_m, n).unwrap();
            let b = two_m as i64 + 1;
            let nn = n as i64;
            for (i, j) in pairs(n) {
                for (k, l) in pairs(n) {
                    let same = 2 * d(i, k) * d(j, l) + 2 * d(i, l) * d(j, k);
                    let mixed = if two_m % 2 == 1 {
                        pow(b, nn - 2) * ((1 - d(i, k) * d(j, l)) * (1 - d(i, l) * d(j, k)))
                    } else {
                        pow(b, nn - 2)
                    };
                    let x = |a, c| Generator::Exchange(a, c);
                    let t = |a, c| Generator::TildeExchange(a, c);
                    assert_eq!(tr(sp, &[x(i, j), t(k, l)]), mixed, "S({i},{j}) T({k},{l})");
                    assert_eq!(tr(sp, &[x(i, j), x(k, l)]), pow(b, nn - 2 + same));
                    assert_eq!(tr(sp, &[t(i, j), t(k, l)]), pow(b, nn - 2 + same));
                }
            }
        }
    }
}
