//! Sparse multivariate polynomials over exact coefficients, with weighted
//! (graded) variable sets.
//!
//! Monomials are ordered graded-lexicographically on the declared variable
//! order, which makes printing canonical and linear-solver pivoting
//! deterministic. The same container is instantiated over `Int` and `Rat`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// The two operands are declared over different variable sets.
    VarSetMismatch,
    /// Exponent vector arity does not match the variable set.
    ArityMismatch { expected: usize, got: usize },
    /// A variable occurring in the polynomial has no substitution image.
    MissingAssignment(String),
    /// A pair index exceeds the declared rank.
    IndexOutOfRange { index: usize, rank: usize },
    /// A series was truncated below the degree being extracted.
    TruncationTooSmall { needed: u32, bound: u32 },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::VarSetMismatch => write!(f, "operands declared over different variable sets"),
            PolyError::ArityMismatch { expected, got } => {
                write!(f, "exponent vector has arity {got}, variable set has {expected}")
            }
            PolyError::MissingAssignment(v) => write!(f, "no substitution image for variable {v}"),
            PolyError::IndexOutOfRange { index, rank } => {
                write!(f, "pair index {index} out of range for rank {rank}")
            }
            PolyError::TruncationTooSmall { needed, bound } => {
                write!(f, "truncation too small: need total degree {needed}, bound is {bound}")
            }
        }
    }
}

/// Ordered list of variable identifiers with positive integer weights.
///
/// The weight is half the topological degree; `u`, `x_i`, `y_i`, `t_i` all
/// have weight 1, while the formal Chern and power-sum generators carry
/// weight equal to their index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl VarSet {
    pub fn new(names: &[&str]) -> Arc<Self> {
        Self::with_weights(names.iter().map(|n| (String::from(*n), 1)).collect())
    }

    pub fn with_weights(vars: Vec<(String, u32)>) -> Arc<Self> {
        let mut seen = BTreeSet::new();
        for (name, w) in &vars {
            assert!(*w >= 1, "variable weight must be >= 1");
            assert!(seen.insert(name.clone()), "duplicate variable {name}");
        }
        Arc::new(VarSet {
            names: vars.iter().map(|(n, _)| n.clone()).collect(),
            weights: vars.iter().map(|(_, w)| *w).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn mono_weight(&self, exps: &[u32]) -> u64 {
        exps.iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }
}

/// Exponent vector with its weight cached; ordered graded-lex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    weight: u64,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            weight: self.weight + other.weight,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Coefficient rings the polynomial container is instantiated over.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + fmt::Display
{
    /// True when the rendered form needs no leading sign handling (i.e. negative).
    fn is_negative_coeff(&self) -> bool;
}

impl Coeff for Int {
    fn is_negative_coeff(&self) -> bool {
        use num_traits::Signed;
        self.is_negative()
    }
}

impl Coeff for Rat {
    fn is_negative_coeff(&self) -> bool {
        use num_traits::Signed;
        self.is_negative()
    }
}

/// Sparse multivariate polynomial: map from monomials to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<C: Coeff> {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(vars: Arc<VarSet>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<VarSet>, c: C) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let exps = vec![0; p.vars.len()];
            p.terms.insert(
                Monomial {
                    weight: 0,
                    exps,
                },
                c,
            );
        }
        p
    }

    pub fn one(vars: Arc<VarSet>) -> Self {
        Self::constant(vars, C::one())
    }

    /// The variable `x_i` as a polynomial.
    pub fn var(vars: Arc<VarSet>, i: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::from_term(vars, &exps, C::one()).expect("arity is correct by construction")
    }

    pub fn from_term(vars: Arc<VarSet>, exps: &[u32], c: C) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        p.add_term(exps, c)?;
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: &[u32], c: C) -> Result<(), PolyError> {
        if exps.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.vars.len(),
                got: exps.len(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let mono = Monomial {
            weight: self.vars.mono_weight(exps),
            exps: exps.to_vec(),
        };
        self.add_mono(mono, c);
        Ok(())
    }

    fn add_mono(&mut self, mono: Monomial, c: C) {
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || *self.vars == *other.vars {
            Ok(())
        } else {
            Err(PolyError::VarSetMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_mono(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        let mut out = Self::zero(self.vars.clone());
        for (m, v) in &self.terms {
            out.add_mono(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Ring product; the grading adds.
    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_mono(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same varset");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same varset");
            }
        }
        result
    }

    /// Exact coefficient of the given exponent vector; zero if absent.
    pub fn coefficient_of(&self, exps: &[u32]) -> Result<C, PolyError> {
        if exps.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.vars.len(),
                got: exps.len(),
            });
        }
        let mono = Monomial {
            weight: self.vars.mono_weight(exps),
            exps: exps.to_vec(),
        };
        Ok(self.terms.get(&mono).cloned().unwrap_or_else(C::zero))
    }

    /// Ring-homomorphic substitution. Every variable occurring in `self`
    /// must have an image; all images live over `target`.
    pub fn substitute(
        &self,
        target: Arc<VarSet>,
        images: &[Option<MPoly<C>>],
    ) -> Result<MPoly<C>, PolyError> {
        if images.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        for img in images.iter().flatten() {
            if *img.vars != *target {
                return Err(PolyError::VarSetMismatch);
            }
        }
        let mut out = MPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(target.clone(), c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[i]
                    .as_ref()
                    .ok_or_else(|| PolyError::MissingAssignment(String::from(self.vars.name(i))))?;
                term = term.mul(&img.pow(e))?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The common weight of the support, when the polynomial is
    /// weight-homogeneous (the zero polynomial reports weight 0).
    pub fn homogeneous_weight(&self) -> Option<u64> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(0),
            Some(m) => m.weight(),
        };
        if it.all(|m| m.weight() == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                out.add_mono(m.clone(), d);
            }
        }
        out
    }
}

impl MPoly<Int> {
    pub fn to_rational(&self) -> MPoly<Rat> {
        self.map_coeffs(|c| Rat::from_integer(c.clone()))
    }
}

fn fmt_monomial(vars: &VarSet, exps: &[u32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", vars.name(i))?;
        } else {
            write!(f, "{}^{}", vars.name(i), e)?;
        }
    }
    Ok(())
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    /// Canonical rendering: terms in descending graded-lex order, explicit
    /// signs, unit coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_coeff();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = if neg { -c.clone() } else { c.clone() };
            if m.is_constant() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                fmt_monomial(&self.vars, &m.exps, f)?;
            } else {
                write!(f, "{abs}*")?;
                fmt_monomial(&self.vars, &m.exps, f)?;
            }
        }
        Ok(())
    }
}

/// The variable set `x_1..x_n, y_1..y_n` used for rank-`n` multisymmetric
/// computations. Pair `i` consists of `(x_{i+1}, y_{i+1})`.
pub fn paired_varset(n: usize) -> Arc<VarSet> {
    let mut vars = Vec::with_capacity(2 * n);
    for i in 1..=n {
        vars.push((alloc::format!("x{i}"), 1));
    }
    for i in 1..=n {
        vars.push((alloc::format!("y{i}"), 1));
    }
    VarSet::with_weights(vars)
}

/// Pair exponents `(a_i, b_i)` of a monomial over a paired variable set.
pub fn pair_exponents(exps: &[u32]) -> Vec<(u32, u32)> {
    let n = exps.len() / 2;
    (0..n).map(|i| (exps[i], exps[n + i])).collect()
}

fn exps_from_pairs(pairs: &[(u32, u32)]) -> Vec<u32> {
    let n = pairs.len();
    let mut exps = vec![0; 2 * n];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        exps[i] = a;
        exps[n + i] = b;
    }
    exps
}

/// Lexicographic next-permutation on a slice; returns false when the slice
/// is already the last permutation.
fn next_permutation<T: Ord>(s: &mut [T]) -> bool {
    if s.len() < 2 {
        return false;
    }
    let mut i = s.len() - 1;
    while i > 0 && s[i - 1] >= s[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = s.len() - 1;
    while s[j] <= s[i - 1] {
        j -= 1;
    }
    s.swap(i - 1, j);
    s[i..].reverse();
    true
}

/// Sum over the orbit of a monomial under the symmetric group acting
/// diagonally on the variable pairs `(x_i, y_i)`, each distinct monomial
/// appearing exactly once.
pub fn symmetric_orbit_sum<C: Coeff>(
    vars: &Arc<VarSet>,
    exps: &[u32],
    n: usize,
) -> Result<MPoly<C>, PolyError> {
    if exps.len() != 2 * n || vars.len() != 2 * n {
        return Err(PolyError::IndexOutOfRange {
            index: exps.len() / 2,
            rank: n,
        });
    }
    let mut pairs = pair_exponents(exps);
    pairs.sort();
    let mut out = MPoly::zero(vars.clone());
    loop {
        out.add_term(&exps_from_pairs(&pairs), C::one())?;
        if !next_permutation(&mut pairs) {
            break;
        }
    }
    Ok(out)
}

/// Enumerates the distinct arrangements of the given pair-exponents, i.e.
/// the monomials of one diagonal symmetric-group orbit.
pub fn orbit_monomials(pairs: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut sorted = pairs.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    loop {
        out.push(exps_from_pairs(&sorted));
        if !next_permutation(&mut sorted) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn xy() -> Arc<VarSet> {
        VarSet::new(&["x1", "x2"])
    }

    #[test]
    fn product_of_sum_and_difference() {
        let vs = xy();
        let x1 = MPoly::<Int>::var(vs.clone(), 0);
        let x2 = MPoly::<Int>::var(vs.clone(), 1);
        let sum = x1.add(&x2).unwrap();
        let diff = x1.sub(&x2).unwrap();
        let prod = sum.mul(&diff).unwrap();
        let expected = x1.pow(2).sub(&x2.pow(2)).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn unit_law() {
        let vs = xy();
        let x1 = MPoly::<Int>::var(vs.clone(), 0);
        let p = x1.pow(3).add(&MPoly::constant(vs.clone(), int(7))).unwrap();
        assert_eq!(p.mul(&MPoly::one(vs)).unwrap(), p);
    }

    #[test]
    fn e1_squared_in_three_variables() {
        // (x1+x2+x3)^2 = sum x_i^2 + 2 e_2, checked by direct expansion
        let vs = VarSet::new(&["x1", "x2", "x3"]);
        let e1 = (0..3).fold(MPoly::<Int>::zero(vs.clone()), |acc, i| {
            acc.add(&MPoly::var(vs.clone(), i)).unwrap()
        });
        let sq = e1.pow(2);
        let mut expected = MPoly::zero(vs.clone());
        for i in 0..3 {
            expected = expected.add(&MPoly::var(vs.clone(), i).pow(2)).unwrap();
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let pr = MPoly::var(vs.clone(), i).mul(&MPoly::var(vs.clone(), j)).unwrap();
                expected = expected.add(&pr.scale(&int(2))).unwrap();
            }
        }
        assert_eq!(sq, expected);
    }

    #[test]
    fn varset_mismatch_is_an_error() {
        let p = MPoly::<Int>::var(xy(), 0);
        let q = MPoly::<Int>::var(VarSet::new(&["s", "t"]), 0);
        assert_eq!(p.mul(&q).unwrap_err(), PolyError::VarSetMismatch);
    }

    #[test]
    fn substitution_examples() {
        let vs = xy();
        let t = VarSet::new(&["t"]);
        let tv = MPoly::<Int>::var(t.clone(), 0);
        let x1 = MPoly::<Int>::var(vs.clone(), 0);
        let x2 = MPoly::<Int>::var(vs.clone(), 1);

        let sum = x1.add(&x2).unwrap();
        let images = [Some(tv.clone()), Some(tv.neg())];
        assert!(sum.substitute(t.clone(), &images).unwrap().is_zero());

        let prod = x1.mul(&x2).unwrap();
        let image = prod.substitute(t.clone(), &images).unwrap();
        assert_eq!(image, MPoly::var(t.clone(), 0).pow(2).neg());
    }

    #[test]
    fn substitution_missing_assignment() {
        let vs = xy();
        let t = VarSet::new(&["t"]);
        let x1 = MPoly::<Int>::var(vs.clone(), 0);
        let x2 = MPoly::<Int>::var(vs, 1);
        let p = x1.mul(&x2).unwrap();
        let images = [Some(MPoly::var(t.clone(), 0)), None];
        assert_eq!(
            p.substitute(t, &images).unwrap_err(),
            PolyError::MissingAssignment(String::from("x2"))
        );
    }

    #[test]
    fn substitute_z112_collapses() {
        // z_{1,1,2} under x2 -> -x1 becomes x1(y1 - y2)
        let vs = paired_varset(2);
        let z = symmetric_orbit_sum::<Int>(&vs, &[1, 0, 1, 0], 2).unwrap();
        let target = VarSet::new(&["x1", "y1", "y2"]);
        let x1 = MPoly::<Int>::var(target.clone(), 0);
        let y1 = MPoly::<Int>::var(target.clone(), 1);
        let y2 = MPoly::<Int>::var(target.clone(), 2);
        let images = [
            Some(x1.clone()),
            Some(x1.neg()),
            Some(y1.clone()),
            Some(y2.clone()),
        ];
        let image = z.substitute(target, &images).unwrap();
        let expected = x1.mul(&y1.sub(&y2).unwrap()).unwrap();
        assert_eq!(image, expected);
    }

    #[test]
    fn coefficient_extraction() {
        let vs = VarSet::new(&["s", "t"]);
        let s = MPoly::<Rat>::var(vs.clone(), 0);
        let t = MPoly::<Rat>::var(vs.clone(), 1);
        let p = s.add(&t).unwrap().pow(2);
        assert_eq!(p.coefficient_of(&[1, 1]).unwrap(), rat(2));
        assert_eq!(MPoly::<Rat>::zero(vs).coefficient_of(&[3, 0]).unwrap(), rat(0));
    }

    #[test]
    fn coefficient_in_formal_group_cube() {
        // coefficient of s^2 t^2 u in (s+t+ust)^3 is 6
        let vs = VarSet::new(&["s", "t", "u"]);
        let s = MPoly::<Int>::var(vs.clone(), 0);
        let t = MPoly::<Int>::var(vs.clone(), 1);
        let u = MPoly::<Int>::var(vs.clone(), 2);
        let fgl = s.add(&t).unwrap().add(&u.mul(&s).unwrap().mul(&t).unwrap()).unwrap();
        let cube = fgl.pow(3);
        assert_eq!(cube.coefficient_of(&[2, 2, 1]).unwrap(), int(6));
    }

    #[test]
    fn orbit_sums() {
        let vs = paired_varset(2);
        let z11 = symmetric_orbit_sum::<Int>(&vs, &[1, 0, 1, 0], 2).unwrap();
        assert_eq!(z11.num_terms(), 2);
        assert_eq!(z11.coefficient_of(&[1, 0, 1, 0]).unwrap(), int(1));
        assert_eq!(z11.coefficient_of(&[0, 1, 0, 1]).unwrap(), int(1));

        let vs3 = paired_varset(3);
        let e1 = symmetric_orbit_sum::<Int>(&vs3, &[1, 0, 0, 0, 0, 0], 3).unwrap();
        assert_eq!(e1.num_terms(), 3);

        let cross = symmetric_orbit_sum::<Int>(&vs, &[1, 0, 0, 1], 2).unwrap();
        assert_eq!(cross.num_terms(), 2);
        assert_eq!(cross.coefficient_of(&[1, 0, 0, 1]).unwrap(), int(1));
        assert_eq!(cross.coefficient_of(&[0, 1, 1, 0]).unwrap(), int(1));
    }

    #[test]
    fn orbit_sum_is_transposition_invariant() {
        let vs = paired_varset(3);
        let orbit = symmetric_orbit_sum::<Int>(&vs, &[2, 1, 0, 1, 0, 3], 3).unwrap();
        // swap pairs 0 and 1 via substitution
        let images: Vec<Option<MPoly<Int>>> = [1usize, 0, 2, 4, 3, 5]
            .iter()
            .map(|&j| Some(MPoly::var(vs.clone(), j)))
            .collect();
        let swapped = orbit.substitute(vs.clone(), &images).unwrap();
        assert_eq!(orbit, swapped);
    }

    #[test]
    fn display_is_canonical() {
        let vs = VarSet::new(&["x1", "x2"]);
        let x1 = MPoly::<Int>::var(vs.clone(), 0);
        let x2 = MPoly::<Int>::var(vs.clone(), 1);
        let p = x1.pow(2).sub(&x2.pow(2)).unwrap();
        assert_eq!(alloc::format!("{p}"), "x1^2 - x2^2");
        let q = x2.scale(&int(-3)).add(&MPoly::constant(vs, int(1))).unwrap();
        assert_eq!(alloc::format!("{q}"), "-3*x2 + 1");
    }

    fn arb_poly(vs: Arc<VarSet>) -> impl Strategy<Value = MPoly<Rat>> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -6i64..=6), 0..8).prop_map(
            move |terms| {
                let mut p = MPoly::zero(vs.clone());
                for ((a, b, c), coeff) in terms {
                    p.add_term(&[a, b, c], rat(coeff)).unwrap();
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(
            p in arb_poly(VarSet::new(&["a", "b", "c"])),
            q in arb_poly(VarSet::new(&["a", "b", "c"])),
            r in arb_poly(VarSet::new(&["a", "b", "c"]))
        ) {
            let pq = p.mul(&q).unwrap();
            prop_assert_eq!(pq.clone(), q.mul(&p).unwrap());
            prop_assert_eq!(pq.mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
            let sum = q.add(&r).unwrap();
            prop_assert_eq!(
                p.mul(&sum).unwrap(),
                p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()
            );
        }

        #[test]
        fn substitution_is_a_ring_map(
            p in arb_poly(VarSet::new(&["a", "b", "c"])),
            q in arb_poly(VarSet::new(&["a", "b", "c"]))
        ) {
            let target = VarSet::new(&["s", "t"]);
            let s = MPoly::<Rat>::var(target.clone(), 0);
            let t = MPoly::<Rat>::var(target.clone(), 1);
            let images = [
                Some(s.add(&t).unwrap()),
                Some(s.mul(&t).unwrap()),
                Some(MPoly::constant(target.clone(), rat(2))),
            ];
            let lhs = p.mul(&q).unwrap().substitute(target.clone(), &images).unwrap();
            let rhs = p
                .substitute(target.clone(), &images)
                .unwrap()
                .mul(&q.substitute(target.clone(), &images).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
