//! Small combinatorial helpers: binomials, permutations and multiset rearrangements.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Binomial coefficient `C(n, k)` for possibly negative `n`; zero when `k < 0` or `0 <= n < k`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rearranges `v` into the lexicographically next permutation; returns false after the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All distinct rearrangements of a multiset, in lexicographic order.
pub fn rearrangements<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut cur = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// All permutations of `0..n` as index vectors, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    rearrangements(&(0..n).collect::<Vec<_>>())
}

/// Parity of the number of inversions: `true` when odd.
pub fn odd_inversions<T: Ord>(v: &[T]) -> bool {
    let mut odd = false;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                odd = !odd;
            }
        }
    }
    odd
}

pub fn has_repeats<T: Ord + Clone>(v: &[T]) -> bool {
    let mut s = v.to_vec();
    s.sort();
    s.windows(2).any(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
    }

    #[test]
    fn multiset_rearrangements() {
        let r = rearrangements(&[1, 1, 2]);
        assert_eq!(r, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn inversion_parity() {
        assert!(!odd_inversions(&[1, 2, 3]));
        assert!(odd_inversions(&[2, 1, 3]));
        assert!(!odd_inversions(&[3, 1, 2]));
    }
}
