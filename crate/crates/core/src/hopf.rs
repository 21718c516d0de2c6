//! The rational Hopf ring attached to the group-completed commutative
//! classifying space: a group ring of the integers tensored with a
//! polynomial algebra on primitive generators `zeta_{a,b}`, carrying the
//! star (Pontrjagin) product, the coproduct, and the circle (tensor)
//! product, together with the Hurewicz map from the K-homology side.
//!
//! The circle product is defined by the generator rule
//! `zeta_{a,b} ∘ zeta_{c,d} = C(a+c,c) C(b+d,b) zeta_{a+c,b+d}`, the group
//! ring rule `[m] ∘ [n] = [mn]`, and Hopf-ring distributivity through the
//! coproduct; the implementation below is the closed form of that
//! recursion, a sum over partial matchings of generator factors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::{binom, factorial, stirling1, Int, Rat};
use crate::gens::{GenIdx, GenMono};
use crate::ku::KuElem;

/// Monomial in the primitive generators; shares its representation with
/// the multisymmetric side, to which it is dual.
pub type ZetaMonomial = GenMono;

/// Term key: group-ring component and zeta-monomial.
pub type HopfKey = (i64, ZetaMonomial);

/// Rational element of the Hopf ring. The star-unit is `([0], 1)`, the
/// circle-unit is `([1], 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HopfElem {
    terms: BTreeMap<HopfKey, Rat>,
}

impl HopfElem {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The grouplike `[n]`.
    pub fn grouplike(n: i64) -> Self {
        let mut e = Self::zero();
        e.add_term((n, GenMono::empty()), Rat::one());
        e
    }

    /// The star-unit `[0]`.
    pub fn one() -> Self {
        Self::grouplike(0)
    }

    /// The generator `zeta_{a,b}` on component 0.
    pub fn zeta(a: u32, b: u32) -> Self {
        let mut e = Self::zero();
        e.add_term((0, GenMono::single(GenIdx::new(a, b))), Rat::one());
        e
    }

    pub fn term(component: i64, mono: ZetaMonomial, c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term((component, mono), c);
        e
    }

    pub fn add_term(&mut self, key: HopfKey, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HopfKey, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &HopfKey) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HopfElem {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Max generator weight among the terms.
    pub fn max_weight(&self) -> u64 {
        self.terms.keys().map(|(_, m)| m.weight()).max().unwrap_or(0)
    }

    /// True when every monomial contains some factor with `b >= 1`, i.e.
    /// the element lies in the ideal generated by `zeta_{0,1}`.
    pub fn in_b_positive_ideal(&self) -> bool {
        self.terms.keys().all(|(_, m)| m.some_b_positive())
    }
}

/// Star product: components add, monomials multiply freely.
pub fn star(p: &HopfElem, q: &HopfElem) -> HopfElem {
    let mut out = HopfElem::zero();
    for ((cm, mm), a) in p.terms() {
        for ((cn, mn), b) in q.terms() {
            out.add_term((cm + cn, mm.union(mn)), a.clone() * b.clone());
        }
    }
    out
}

/// Element of the tensor square, used for the coproduct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HopfTensor {
    terms: BTreeMap<(HopfKey, HopfKey), Rat>,
}

impl HopfTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, left: HopfKey, right: HopfKey, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&(HopfKey, HopfKey), &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, left: &HopfKey, right: &HopfKey) -> Rat {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }
}

/// Sub-multisets of a monomial together with the binomial multiplicity of
/// each split, i.e. the terms of `Delta` on the polynomial part.
fn splits(m: &GenMono) -> Vec<(GenMono, GenMono, Int)> {
    let distinct = m.distinct();
    let mut out = Vec::new();
    // odometer over sub-multiplicities
    let mut take: Vec<u32> = vec![0; distinct.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut coeff = Int::one();
        for (i, &(g, mult)) in distinct.iter().enumerate() {
            for _ in 0..take[i] {
                left.push(g);
            }
            for _ in 0..(mult - take[i]) {
                right.push(g);
            }
            coeff *= binom(mult, take[i]);
        }
        out.push((
            GenMono::from_indices(left),
            GenMono::from_indices(right),
            coeff,
        ));
        // advance
        let mut i = 0;
        loop {
            if i == distinct.len() {
                return out;
            }
            if take[i] < distinct[i].1 {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
    }
}

/// Coproduct: grouplikes are diagonal, the generators are primitive, and
/// the extension to monomials is multiplicative.
pub fn coproduct(p: &HopfElem) -> HopfTensor {
    let mut out = HopfTensor::zero();
    for ((comp, mono), c) in p.terms() {
        for (left, right, mult) in splits(mono) {
            out.add_term(
                (*comp, left),
                (*comp, right),
                c.clone() * Rat::from_integer(mult),
            );
        }
    }
    out
}

/// Circle product of two single terms, as a sum over partial matchings of
/// the generator factors: matched pairs merge with a binomial weight,
/// unmatched factors survive scaled by the opposite component.
fn circ_term(cm: i64, mm: &GenMono, cn: i64, mn: &GenMono) -> HopfElem {
    struct Matcher<'a> {
        left: &'a [GenIdx],
        right: &'a [GenIdx],
        cm: i64,
        cn: i64,
        used: Vec<bool>,
        merged: Vec<GenIdx>,
        unmatched_right: Vec<GenIdx>,
        out: HopfElem,
    }

    impl Matcher<'_> {
        fn go(&mut self, j: usize, coeff: Int) {
            if j == self.right.len() {
                let mut total = coeff;
                let mut gens = self.merged.clone();
                for (i, &g) in self.left.iter().enumerate() {
                    if !self.used[i] {
                        total *= Int::from(self.cn);
                        gens.push(g);
                    }
                }
                gens.extend_from_slice(&self.unmatched_right);
                self.out.add_term(
                    (self.cm * self.cn, GenMono::from_indices(gens)),
                    Rat::from_integer(total),
                );
                return;
            }
            let q = self.right[j];
            // q unmatched: pairs against [m]
            self.unmatched_right.push(q);
            self.go(j + 1, coeff.clone() * Int::from(self.cm));
            self.unmatched_right.pop();
            // q matched against an unused left factor
            for i in 0..self.left.len() {
                if self.used[i] {
                    continue;
                }
                self.used[i] = true;
                let p = self.left[i];
                let weight = binom(p.a + q.a, q.a) * binom(p.b + q.b, p.b);
                self.merged.push(p.plus(q));
                self.go(j + 1, coeff.clone() * weight);
                self.merged.pop();
                self.used[i] = false;
            }
        }
    }

    let mut matcher = Matcher {
        left: mm.factors(),
        right: mn.factors(),
        cm,
        cn,
        used: vec![false; mm.len()],
        merged: Vec::new(),
        unmatched_right: Vec::new(),
        out: HopfElem::zero(),
    };
    matcher.go(0, Int::one());
    matcher.out
}

/// The circle product, extended bilinearly.
pub fn circ(p: &HopfElem, q: &HopfElem) -> HopfElem {
    let mut out = HopfElem::zero();
    for ((cm, mm), a) in p.terms() {
        for ((cn, mn), b) in q.terms() {
            let partial = circ_term(*cm, mm, *cn, mn);
            out = out.add(&partial.scale(&(a.clone() * b.clone())));
        }
    }
    out
}

/// Circle power `p^{∘ k}`, `k >= 1`.
pub fn circ_pow(p: &HopfElem, k: u32) -> HopfElem {
    assert!(k >= 1);
    let mut acc = p.clone();
    for _ in 1..k {
        acc = circ(&acc, p);
    }
    acc
}

/// True when some pair of terms multiplies outside the range where the
/// mixed component rule is backed by the stated hypothesis (both
/// components nonzero and smaller than the combined generator weight).
pub fn circ_outside_stable_range(p: &HopfElem, q: &HopfElem) -> bool {
    for ((cm, mm), _) in p.terms() {
        for ((cn, mn), _) in q.terms() {
            if *cm == 0 && *cn == 0 {
                continue;
            }
            let w = mm.weight() + mn.weight();
            if w == 0 {
                continue;
            }
            if cm.unsigned_abs() < w || cn.unsigned_abs() < w {
                return true;
            }
        }
    }
    false
}

/// Dual pairing of a `z`-monomial against a zeta-monomial:
/// `prod k_i!` when the index multisets agree, zero otherwise.
pub fn pairing(z_mono: &GenMono, zeta_mono: &ZetaMonomial) -> Rat {
    if z_mono != zeta_mono {
        return Rat::zero();
    }
    let mut acc = Int::one();
    for (_, mult) in z_mono.distinct() {
        acc *= factorial(mult);
    }
    Rat::from_integer(acc)
}

/// Closed form of the Hurewicz image of `y_n`:
/// `sum_{j<n} s(n, n-j)/C(n,j) * zeta_{j,n-j}`.
pub fn hurewicz_y(n: u32) -> HopfElem {
    assert!(n >= 1);
    let mut out = HopfElem::zero();
    for j in 0..n {
        let coeff = Rat::new(stirling1(n, n - j), binom(n, j));
        out.add_term((0, GenMono::single(GenIdx::new(j, n - j))), coeff);
    }
    out
}

/// Independent route to the Hurewicz image of `y_n`: circle-expand
/// `prod_{j<n} (zeta_{0,1} - j zeta_{1,0})` and divide by `n!`.
pub fn hurewicz_y_oracle(n: u32) -> HopfElem {
    assert!(n >= 1);
    let mut acc = HopfElem::grouplike(1);
    for j in 0..n as i64 {
        let factor = HopfElem::zeta(0, 1).sub(&HopfElem::zeta(1, 0).scale(&Rat::from_integer(Int::from(j))));
        acc = circ(&acc, &factor);
    }
    acc.scale(&(Rat::one() / Rat::from_integer(factorial(n))))
}

/// `a! zeta_{a,0}`, the normalised circle power of `zeta_{1,0}`.
fn u_image(a: u32) -> HopfElem {
    HopfElem::term(
        0,
        GenMono::single(GenIdx::new(a, 0)),
        Rat::from_integer(factorial(a)),
    )
}

/// The Hurewicz map, extended `Z`-linearly over the basis:
/// `u^a y_n -> (a! zeta_{a,0}) ∘ h(y_n)`, `u^a -> a! zeta_{a,0}`, and the
/// unit goes to the grouplike `[1]` (the circle unit), which makes the map
/// multiplicative on all of the ring.
pub fn hurewicz(p: &KuElem) -> HopfElem {
    let mut out = HopfElem::zero();
    for (key, c) in p.terms() {
        let image = match (key.u_pow, key.y_idx) {
            (0, 0) => HopfElem::grouplike(1),
            (a, 0) => u_image(a),
            (0, n) => hurewicz_y(n),
            (a, n) => circ(&u_image(a), &hurewicz_y(n)),
        };
        out = out.add(&image.scale(&Rat::from_integer(c.clone())));
    }
    out
}

/// Per-degree comparison of the closed Stirling form of the Hurewicz image
/// with the divided circle-product oracle.
pub struct HurewiczRow {
    pub n: u32,
    pub closed: HopfElem,
    pub oracle: HopfElem,
    pub ok: bool,
}

pub fn verify_hurewicz_formula(n_max: u32) -> Vec<HurewiczRow> {
    (1..=n_max)
        .map(|n| {
            let closed = hurewicz_y(n);
            let oracle = hurewicz_y_oracle(n);
            let ok = closed == oracle;
            HurewiczRow { n, closed, oracle, ok }
        })
        .collect()
}

impl fmt::Display for HopfElem {
    /// Terms sorted by weight (descending) then key; component prefixes
    /// `[n]*` are omitted on component 0 unless the monomial is trivial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&HopfKey> = self.terms.keys().collect();
        keys.sort_by_key(|(c, m)| (core::cmp::Reverse(m.weight()), *c, (*m).clone()));
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.terms[*key];
            let neg = c.is_negative();
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
            let (comp, mono) = key;
            let show_comp = *comp != 0 || mono.is_empty();
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            if show_comp && mono.is_empty() {
                write!(f, "[{comp}]")?;
            } else if show_comp {
                write!(f, "[{comp}]*{}", mono.display_as("zeta"))?;
            } else {
                write!(f, "{}", mono.display_as("zeta"))?;
            }
        }
        Ok(())
    }
}
