//! Bidegree-indexed generator families.
//!
//! Both the multisymmetric generators `z_{a,b}` and their homology duals
//! `zeta_{a,b}` are indexed by pairs `(a,b)` in `N^2` minus `(0,0)`, with
//! weight `a + b`. A monomial in such a family is a multiset of pairs.

use alloc::vec::Vec;
use core::fmt;

/// Index `(a, b)` of one generator; never `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenIdx {
    pub a: u32,
    pub b: u32,
}

impl GenIdx {
    pub fn new(a: u32, b: u32) -> Self {
        assert!(a != 0 || b != 0, "generator index (0,0) does not exist");
        GenIdx { a, b }
    }

    pub fn weight(&self) -> u64 {
        self.a as u64 + self.b as u64
    }
}

impl PartialOrd for GenIdx {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenIdx {
    /// Graded order: weight first, then `a`, then `b`.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.weight(), self.a, self.b).cmp(&(other.weight(), other.a, other.b))
    }
}

/// Commutative monomial in the generators: a sorted multiset of indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GenMono(Vec<GenIdx>);

impl GenMono {
    pub fn empty() -> Self {
        GenMono(Vec::new())
    }

    pub fn single(g: GenIdx) -> Self {
        GenMono(alloc::vec![g])
    }

    pub fn from_indices(mut gens: Vec<GenIdx>) -> Self {
        gens.sort();
        GenMono(gens)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors, with multiplicity.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(GenIdx::weight).sum()
    }

    pub fn factors(&self) -> &[GenIdx] {
        &self.0
    }

    pub fn multiplicity(&self, g: GenIdx) -> u32 {
        self.0.iter().filter(|&&h| h == g).count() as u32
    }

    /// Distinct factors with their multiplicities.
    pub fn distinct(&self) -> Vec<(GenIdx, u32)> {
        let mut out: Vec<(GenIdx, u32)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((h, m)) if *h == g => *m += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }

    pub fn push(&self, g: GenIdx) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&h| h <= g);
        v.insert(pos, g);
        GenMono(v)
    }

    /// Removes one copy of `g`; panics when absent.
    pub fn remove(&self, g: GenIdx) -> Self {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&h| h == g).expect("factor not present");
        v.remove(pos);
        GenMono(v)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort();
        GenMono(v)
    }

    /// True when every factor has `b >= 1`.
    pub fn all_b_positive(&self) -> bool {
        self.0.iter().all(|g| g.b >= 1)
    }

    /// True when some factor has `b >= 1`.
    pub fn some_b_positive(&self) -> bool {
        self.0.iter().any(|g| g.b >= 1)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, symbol: &str) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (g, m) in self.distinct() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{symbol}({},{})", g.a, g.b)?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }

    pub fn display_as(&self, symbol: &'static str) -> GenMonoDisplay<'_> {
        GenMonoDisplay { mono: self, symbol }
    }
}

impl PartialOrd for GenMono {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenMono {
    /// Graded-lex on the sorted index lists.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.weight(), &self.0).cmp(&(other.weight(), &other.0))
    }
}

impl fmt::Display for GenMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "z")
    }
}

pub struct GenMonoDisplay<'a> {
    mono: &'a GenMono,
    symbol: &'static str,
}

impl fmt::Display for GenMonoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mono.fmt_with(f, self.symbol)
    }
}

/// All indices of a given weight: `(0,w), (1,w-1), ..., (w,0)`.
pub fn indices_of_weight(w: u32) -> Vec<GenIdx> {
    (0..=w).map(|a| GenIdx::new(a, w - a)).collect()
}

/// All monomials of total weight `w`, optionally restricted to factors
/// with `b >= 1`, in ascending canonical order.
pub fn monomials_of_weight(w: u32, require_b_positive: bool) -> Vec<GenMono> {
    fn go(remaining: u32, min_allowed: Option<GenIdx>, require_b: bool, acc: &mut Vec<GenIdx>, out: &mut Vec<GenMono>) {
        if remaining == 0 {
            out.push(GenMono::from_indices(acc.clone()));
            return;
        }
        for w in 1..=remaining {
            for g in indices_of_weight(w) {
                if require_b && g.b == 0 {
                    continue;
                }
                if let Some(min) = min_allowed {
                    if g < min {
                        continue;
                    }
                }
                acc.push(g);
                go(remaining - w, Some(g), require_b, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    go(w, None, require_b_positive, &mut acc, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_graded() {
        let z01 = GenIdx::new(0, 1);
        let z10 = GenIdx::new(1, 0);
        let z02 = GenIdx::new(0, 2);
        assert!(z01 < z10);
        assert!(z10 < z02);
    }

    #[test]
    fn monomial_counts_by_weight() {
        // multisets of pairs (a,b) != (0,0) with total weight w
        assert_eq!(monomials_of_weight(1, false).len(), 2);
        assert_eq!(monomials_of_weight(2, false).len(), 6);
        assert_eq!(monomials_of_weight(3, false).len(), 14);
        assert_eq!(monomials_of_weight(4, false).len(), 33);
        // with b >= 1 everywhere
        assert_eq!(monomials_of_weight(3, true).len(), 6);
    }

    #[test]
    fn monomial_order_examples() {
        let cube = GenMono::from_indices(alloc::vec![
            GenIdx::new(0, 1),
            GenIdx::new(0, 1),
            GenIdx::new(0, 1)
        ]);
        let prod = GenMono::from_indices(alloc::vec![GenIdx::new(0, 1), GenIdx::new(0, 2)]);
        let single = GenMono::single(GenIdx::new(0, 3));
        assert!(cube < prod);
        assert!(prod < single);
    }

    #[test]
    fn display_forms() {
        let m = GenMono::from_indices(alloc::vec![
            GenIdx::new(0, 1),
            GenIdx::new(0, 1),
            GenIdx::new(1, 1)
        ]);
        assert_eq!(alloc::format!("{m}"), "z(0,1)^2*z(1,1)");
        assert_eq!(alloc::format!("{}", m.display_as("zeta")), "zeta(0,1)^2*zeta(1,1)");
        assert_eq!(alloc::format!("{}", GenMono::empty()), "1");
    }
}
