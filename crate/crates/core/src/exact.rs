//! Arbitrary-precision integer and rational arithmetic plus the
//! combinatorial number tables (binomial, multinomial, Stirling) that the
//! rest of the crate consumes.
//!
//! `Rat` values are kept in lowest terms with positive denominator by
//! construction. Stirling numbers of the first kind are *signed*: they are
//! the coefficients in `x(x-1)...(x-n+1) = sum_k s(n,k) x^k`.

use alloc::{vec, vec::Vec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

pub fn factorial(n: u32) -> Int {
    let mut acc = Int::one();
    for k in 2..=n as u64 {
        acc *= Int::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binom(n: u32, k: u32) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k as u64 {
        acc *= Int::from(n as u64 - i);
        acc /= Int::from(i + 1);
    }
    acc
}

/// Binomial coefficient with a signed upper index, `C(k, i) = k(k-1)...(k-i+1)/i!`.
///
/// Integer-valued for every `k` in `Z`; this is what the inverse series of
/// the multiplicative formal group law needs for negative powers.
pub fn binom_signed(k: i64, i: u32) -> Int {
    let mut num = Int::one();
    for t in 0..i as i64 {
        num *= Int::from(k - t);
    }
    num / factorial(i)
}

/// Signed Stirling number of the first kind `s(n, k)`.
pub fn stirling1(n: u32, k: u32) -> Int {
    if k > n {
        return Int::zero();
    }
    // row recurrence s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)
    let mut row = vec![Int::one()];
    for m in 1..=n {
        let mut next = vec![Int::zero(); m as usize + 1];
        for (j, v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] -= Int::from(m as i64 - 1) * v;
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Stirling number of the second kind `S(n, k)` (set partition counts).
pub fn stirling2(n: u32, k: u32) -> Int {
    if k > n {
        return Int::zero();
    }
    // S(n,k) = k S(n-1,k) + S(n-1,k-1)
    let mut row = vec![Int::one()];
    for _ in 1..=n {
        let mut next = vec![Int::zero(); row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] += Int::from(j as u64) * v;
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Multinomial coefficient `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u32]) -> Int {
    let mut acc = Int::one();
    let mut total = 0u32;
    for &p in parts {
        total += p;
        acc *= binom(total, p);
    }
    acc
}

/// Grow-on-demand memo tables for the combinatorial numbers.
///
/// A cache is per-use: callers that need bulk access construct one and keep
/// it local, so no synchronisation is required anywhere.
pub struct CombCache {
    binom: Vec<Vec<Int>>,
    s1: Vec<Vec<Int>>,
    s2: Vec<Vec<Int>>,
    fact: Vec<Int>,
}

pub const DEFAULT_TABLE_BOUND: u32 = 64;

impl CombCache {
    pub fn new() -> Self {
        Self::with_bound(DEFAULT_TABLE_BOUND)
    }

    pub fn with_bound(bound: u32) -> Self {
        let mut cache = CombCache {
            binom: vec![vec![Int::one()]],
            s1: vec![vec![Int::one()]],
            s2: vec![vec![Int::one()]],
            fact: vec![Int::one()],
        };
        cache.ensure(bound);
        cache
    }

    fn ensure(&mut self, n: u32) {
        while self.binom.len() <= n as usize {
            let m = self.binom.len();
            let prev = &self.binom[m - 1];
            let mut row = vec![Int::zero(); m + 1];
            for (j, v) in prev.iter().enumerate() {
                row[j] += v;
                row[j + 1] += v;
            }
            self.binom.push(row);

            let prev = &self.s1[m - 1];
            let mut row = vec![Int::zero(); m + 1];
            for (j, v) in prev.iter().enumerate() {
                row[j + 1] += v;
                row[j] -= Int::from(m as i64 - 1) * v;
            }
            self.s1.push(row);

            let prev = &self.s2[m - 1];
            let mut row = vec![Int::zero(); m + 1];
            for (j, v) in prev.iter().enumerate() {
                row[j + 1] += v;
                row[j] += Int::from(j as u64) * v;
            }
            self.s2.push(row);

            let last = self.fact[m - 1].clone();
            self.fact.push(last * Int::from(m as u64));
        }
    }

    pub fn binom(&mut self, n: u32, k: u32) -> Int {
        if k > n {
            return Int::zero();
        }
        self.ensure(n);
        self.binom[n as usize][k as usize].clone()
    }

    pub fn stirling1(&mut self, n: u32, k: u32) -> Int {
        if k > n {
            return Int::zero();
        }
        self.ensure(n);
        self.s1[n as usize][k as usize].clone()
    }

    pub fn stirling2(&mut self, n: u32, k: u32) -> Int {
        if k > n {
            return Int::zero();
        }
        self.ensure(n);
        self.s2[n as usize][k as usize].clone()
    }

    pub fn factorial(&mut self, n: u32) -> Int {
        self.ensure(n);
        self.fact[n as usize].clone()
    }
}

impl Default for CombCache {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_basics() {
        assert_eq!(binom(4, 2), int(6));
        assert_eq!(binom(3, 5), int(0));
        for n in 0..=64 {
            assert_eq!(binom(n, 0), int(1));
        }
    }

    #[test]
    fn binom_recurrence() {
        let mut cache = CombCache::new();
        for n in 1..=64 {
            for k in 1..=n {
                assert_eq!(
                    cache.binom(n, k),
                    cache.binom(n - 1, k - 1) + cache.binom(n - 1, k)
                );
            }
        }
    }

    #[test]
    fn stirling_first_kind_signed() {
        assert_eq!(stirling1(2, 1), int(-1));
        assert_eq!(stirling1(3, 2), int(-3));
        assert_eq!(stirling1(3, 1), int(2));
        for n in 0..=20 {
            assert_eq!(stirling1(n, n), int(1));
        }
        for n in 1..=20 {
            assert_eq!(stirling1(n, 0), int(0));
        }
    }

    #[test]
    fn stirling_first_kind_matches_falling_factorial() {
        // expand x(x-1)...(x-n+1) directly and compare coefficients
        for n in 1..=12u32 {
            let mut coeffs = vec![Int::zero(); n as usize + 1];
            coeffs[0] = Int::one();
            for j in 0..n as i64 {
                let mut next = vec![Int::zero(); coeffs.len() + 1];
                for (d, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    next[d + 1] += c;
                    next[d] -= Int::from(j) * c;
                }
                coeffs = next;
                coeffs.truncate(n as usize + 1);
            }
            for k in 0..=n {
                assert_eq!(stirling1(n, k), coeffs[k as usize], "s({n},{k})");
            }
        }
    }

    #[test]
    fn stirling_second_kind() {
        assert_eq!(stirling2(3, 2), int(3));
        assert_eq!(stirling2(2, 2), int(1));
        for k in 0..=20 {
            assert_eq!(stirling2(k, k), int(1));
        }
        for k in 0..=20u32 {
            assert_eq!(stirling2(k + 1, 1), int(1));
        }
    }

    #[test]
    fn stirling_inversion() {
        // sum_k s(n,k) S(k,m) = delta(n,m)
        let mut cache = CombCache::with_bound(20);
        for n in 0..=20 {
            for m in 0..=20 {
                let mut acc = Int::zero();
                for k in 0..=n {
                    acc += cache.stirling1(n, k) * cache.stirling2(k, m);
                }
                let expected = if n == m { Int::one() } else { Int::zero() };
                assert_eq!(acc, expected, "inversion at ({n},{m})");
            }
        }
    }

    #[test]
    fn signed_binomial() {
        assert_eq!(binom_signed(-1, 3), int(-1));
        assert_eq!(binom_signed(-2, 2), int(3));
        assert_eq!(binom_signed(5, 2), int(10));
        assert_eq!(binom_signed(0, 0), int(1));
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[1, 1, 1]), int(6));
        assert_eq!(multinomial(&[2, 2]), int(6));
        assert_eq!(multinomial(&[3]), int(1));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-50i64..=50, 1i64..=20).prop_map(|(n, d)| rat_frac(n, d))
    }

    proptest! {
        #[test]
        fn rat_field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            if !b.is_zero() {
                prop_assert_eq!((a.clone() / b.clone()) * b.clone(), a.clone());
            }
        }
    }
}
