//! Multisymmetric functions: the generators `z_{a,b,n}`, expression of
//! invariants in the `z`-basis, relation discovery by exact linear algebra,
//! the rank-2 quotient ring, and the tensor comultiplication pullbacks.
//!
//! Internally everything runs through the basis of *monomial* multisymmetric
//! functions `m_M` (orbit sums indexed by multisets `M` of bidegrees). The
//! conversion `m_M -> polynomial in z` is triangular in the number of parts
//! and, crucially, valid at every rank, which gives a canonical `z`-basis
//! expression without solving large linear systems in the stable range.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::{binom, factorial, Int, Rat};
use crate::gens::{monomials_of_weight, GenIdx, GenMono};
use crate::linalg;
use crate::poly::{pair_exponents, paired_varset, Coeff, MPoly, PolyError, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultisymError {
    /// Generator index `(0,0)` requested.
    ZeroIndexPair,
    /// The input polynomial is not fixed by the diagonal symmetric group.
    NotInvariant,
    /// The input polynomial is not weight-homogeneous.
    NotHomogeneous,
    /// No expression over the allowed generator set exists.
    NoSolution,
    /// The polynomial does not live over the paired rank-`n` variable set.
    WrongVariables { expected: usize, got: usize },
    Poly(PolyError),
}

impl From<PolyError> for MultisymError {
    fn from(e: PolyError) -> Self {
        MultisymError::Poly(e)
    }
}

impl fmt::Display for MultisymError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultisymError::ZeroIndexPair => write!(f, "generator index (0,0) does not exist"),
            MultisymError::NotInvariant => write!(f, "polynomial is not diagonally symmetric"),
            MultisymError::NotHomogeneous => write!(f, "polynomial is not weight-homogeneous"),
            MultisymError::NoSolution => write!(f, "no expression over the allowed generators"),
            MultisymError::WrongVariables { expected, got } => {
                write!(f, "expected a paired variable set with {expected} variables, got {got}")
            }
            MultisymError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl GenIdx {
    pub fn plus(self, other: GenIdx) -> GenIdx {
        GenIdx::new(self.a + other.a, self.b + other.b)
    }
}

// ---------------------------------------------------------------------------
// Formal polynomials in the abstract generators z_{a,b}
// ---------------------------------------------------------------------------

/// Formal polynomial in the commuting generators `z_{a,b}` with rational
/// coefficients; generator `z_{a,b}` has weight `a + b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MSymExpr {
    terms: BTreeMap<GenMono, Rat>,
}

impl MSymExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(GenMono::empty(), c);
        e
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn gen(a: u32, b: u32) -> Self {
        let mut e = Self::zero();
        e.add_term(GenMono::single(GenIdx::new(a, b)), Rat::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GenMono, Rat)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, mono: GenMono, c: Rat) {
        if c.is_zero() {
            return;
        }
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GenMono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &GenMono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
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
        MSymExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.union(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// True when every generator occurring has `b >= 1`.
    pub fn all_b_positive(&self) -> bool {
        self.terms.keys().all(GenMono::all_b_positive)
    }

    /// Projection that kills every term containing a `b = 0` generator.
    pub fn drop_b0_terms(&self) -> Self {
        MSymExpr {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.all_b_positive())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Common weight of the support when homogeneous (zero reports 0).
    pub fn homogeneous_weight(&self) -> Option<u64> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(0),
            Some(m) => m.weight(),
        };
        it.all(|m| m.weight() == first).then_some(first)
    }
}

impl fmt::Display for MSymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_gen_terms(f, self.terms.iter().rev(), "z")
    }
}

fn fmt_gen_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I, symbol: &'static str) -> fmt::Result
where
    I: Iterator<Item = (&'a GenMono, &'a Rat)>,
{
    let mut any = false;
    for (idx, (m, c)) in terms.enumerate() {
        any = true;
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
        if m.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{}", m.display_as(symbol))?;
        } else {
            write!(f, "{abs}*{}", m.display_as(symbol))?;
        }
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The monomial multisymmetric basis
// ---------------------------------------------------------------------------

/// Number of distinct monomials in the rank-`n` orbit of the multiset `m`.
pub fn orbit_size(m: &GenMono, n: usize) -> Int {
    let k = m.len();
    if k > n {
        return Int::zero();
    }
    let mut size = factorial(n as u32) / factorial((n - k) as u32);
    for (_, mult) in m.distinct() {
        size /= factorial(mult);
    }
    size
}

/// `z_p * m_M` expanded in the monomial basis. Valid at every rank; terms
/// whose multiset needs more slots than the rank are simply absent there.
fn z_times_m(p: GenIdx, m: &GenMono) -> Vec<(GenMono, Int)> {
    let mut out = Vec::new();
    let grown = m.push(p);
    out.push((grown.clone(), Int::from(grown.multiplicity(p) as u64)));
    for (q, _) in m.distinct() {
        let merged = m.remove(q).push(q.plus(p));
        let coeff = Int::from(merged.multiplicity(q.plus(p)) as u64);
        out.push((merged, coeff));
    }
    out
}

/// Expansion of a product of `z`-generators in the monomial basis,
/// truncated to multisets with at most `max_parts` parts.
pub fn z_mono_in_m_basis(zmono: &GenMono, max_parts: usize) -> BTreeMap<GenMono, Int> {
    let mut coords: BTreeMap<GenMono, Int> = BTreeMap::new();
    coords.insert(GenMono::empty(), Int::one());
    for &p in zmono.factors() {
        let mut next: BTreeMap<GenMono, Int> = BTreeMap::new();
        for (m, c) in &coords {
            for (m2, c2) in z_times_m(p, m) {
                if m2.len() > max_parts {
                    continue;
                }
                let entry = next.entry(m2).or_insert_with(Int::zero);
                *entry += c * &c2;
            }
        }
        next.retain(|_, v| !v.is_zero());
        coords = next;
    }
    coords
}

/// Memoized triangular conversion from the monomial basis to the
/// `z`-generator basis.
#[derive(Default)]
pub struct MBasis {
    memo: BTreeMap<GenMono, MSymExpr>,
}

impl MBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// The unique polynomial in the `z_{a,b}` that equals the orbit sum
    /// `m_M` at every rank.
    pub fn to_z(&mut self, m: &GenMono) -> MSymExpr {
        if let Some(e) = self.memo.get(m) {
            return e.clone();
        }
        let expr = if m.is_empty() {
            MSymExpr::one()
        } else if m.len() == 1 {
            let g = m.factors()[0];
            MSymExpr::gen(g.a, g.b)
        } else {
            let p = *m.factors().last().expect("nonempty");
            let rest = m.remove(p);
            let zp = MSymExpr::gen(p.a, p.b);
            let mut acc = zp.mul(&self.to_z(&rest));
            for (q, _) in rest.distinct() {
                let merged = rest.remove(q).push(q.plus(p));
                let coeff = Rat::from_integer(Int::from(merged.multiplicity(q.plus(p)) as u64));
                acc = acc.sub(&self.to_z(&merged).scale(&coeff));
            }
            let denom = Rat::from_integer(Int::from(rest.multiplicity(p) as u64 + 1));
            acc.scale(&(Rat::one() / denom))
        };
        self.memo.insert(m.clone(), expr.clone());
        expr
    }
}

/// The orbit sum `m_M` as a concrete polynomial at rank `n`.
pub fn m_to_mpoly(m: &GenMono, n: usize) -> MPoly<Rat> {
    let vars = paired_varset(n);
    let mut out = MPoly::zero(vars.clone());
    if m.len() > n {
        return out;
    }
    let mut pairs: Vec<(u32, u32)> = m.factors().iter().map(|g| (g.a, g.b)).collect();
    pairs.resize(n, (0, 0));
    for exps in crate::poly::orbit_monomials(&pairs) {
        out.add_term(&exps, Rat::one()).expect("arity matches");
    }
    out
}

/// Decompose a diagonally symmetric polynomial into monomial-basis
/// coordinates, verifying invariance exactly.
pub fn orbit_decompose(p: &MPoly<Rat>, n: usize) -> Result<BTreeMap<GenMono, Rat>, MultisymError> {
    if p.vars().len() != 2 * n {
        return Err(MultisymError::WrongVariables {
            expected: 2 * n,
            got: p.vars().len(),
        });
    }
    let mut coords: BTreeMap<GenMono, (Rat, usize)> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let pairs = pair_exponents(mono.exps());
        let gens: Vec<GenIdx> = pairs
            .into_iter()
            .filter(|&(a, b)| a != 0 || b != 0)
            .map(|(a, b)| GenIdx::new(a, b))
            .collect();
        let shape = GenMono::from_indices(gens);
        match coords.entry(shape) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert((c.clone(), 1));
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                if e.get().0 != *c {
                    return Err(MultisymError::NotInvariant);
                }
                e.get_mut().1 += 1;
            }
        }
    }
    let mut out = BTreeMap::new();
    for (shape, (coeff, count)) in coords {
        if Int::from(count as u64) != orbit_size(&shape, n) {
            return Err(MultisymError::NotInvariant);
        }
        out.insert(shape, coeff);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The public multisymmetric operations
// ---------------------------------------------------------------------------

/// The concrete invariant `z_{a,b,n} = x_1^a y_1^b + ... + x_n^a y_n^b`.
pub fn expand_z<C: Coeff>(a: u32, b: u32, n: usize) -> Result<MPoly<C>, MultisymError> {
    if a == 0 && b == 0 {
        return Err(MultisymError::ZeroIndexPair);
    }
    assert!(n >= 1, "rank must be at least 1");
    let vars = paired_varset(n);
    let mut out = MPoly::zero(vars.clone());
    for i in 0..n {
        let mut exps = vec![0u32; 2 * n];
        exps[i] = a;
        exps[n + i] = b;
        out.add_term(&exps, C::one())?;
    }
    Ok(out)
}

/// Expand a whole `z`-expression at rank `n`.
pub fn expand_msym(e: &MSymExpr, n: usize) -> MPoly<Rat> {
    let vars = paired_varset(n);
    let mut out = MPoly::zero(vars.clone());
    for (mono, c) in e.terms() {
        let mut term = MPoly::constant(vars.clone(), c.clone());
        for &g in mono.factors() {
            let factor = expand_z::<Rat>(g.a, g.b, n).expect("valid generator");
            term = term.mul(&factor).expect("same varset");
        }
        out = out.add(&term).expect("same varset");
    }
    out
}

/// Express a diagonally symmetric homogeneous polynomial in the abstract
/// generators `z_{a,b}`.
///
/// The canonical representative is the monomial-basis (triangular)
/// expression; at rank `n >=` weight it is the unique one. With
/// `allow_b0 = false` the expression is restricted to generators with
/// `b >= 1`, falling back to an exact linear solve below the stable range.
pub fn express_in_z(p: &MPoly<Rat>, n: usize, allow_b0: bool) -> Result<MSymExpr, MultisymError> {
    let weight = p.homogeneous_weight().ok_or(MultisymError::NotHomogeneous)?;
    let coords = orbit_decompose(p, n)?;
    let mut mb = MBasis::new();
    let mut expr = MSymExpr::zero();
    for (m, c) in &coords {
        expr = expr.add(&mb.to_z(m).scale(c));
    }
    if allow_b0 || expr.all_b_positive() {
        return Ok(expr);
    }
    if n as u64 >= weight {
        // the expression is unique in this range, so a b0 term is final
        return Err(MultisymError::NoSolution);
    }
    // Below the stable range other representatives exist; solve exactly over
    // the b >= 1 monomials with free coefficients pinned to zero.
    let candidates = monomials_of_weight(weight as u32, true);
    let solution = solve_in_candidates(&coords, &candidates, n).ok_or(MultisymError::NoSolution)?;
    Ok(solution)
}

fn solve_in_candidates(
    target: &BTreeMap<GenMono, Rat>,
    candidates: &[GenMono],
    n: usize,
) -> Option<MSymExpr> {
    let mut row_keys: alloc::collections::BTreeSet<GenMono> = target.keys().cloned().collect();
    let expansions: Vec<BTreeMap<GenMono, Int>> = candidates
        .iter()
        .map(|zm| z_mono_in_m_basis(zm, n))
        .collect();
    for exp in &expansions {
        row_keys.extend(exp.keys().cloned());
    }
    let keys: Vec<GenMono> = row_keys.into_iter().collect();
    let mut matrix = Vec::with_capacity(keys.len());
    let mut rhs = Vec::with_capacity(keys.len());
    for key in &keys {
        let row: Vec<Rat> = expansions
            .iter()
            .map(|exp| exp.get(key).cloned().map(Rat::from_integer).unwrap_or_else(Rat::zero))
            .collect();
        matrix.push(row);
        rhs.push(target.get(key).cloned().unwrap_or_else(Rat::zero));
    }
    let sol = linalg::solve(&matrix, &rhs)?;
    Some(MSymExpr::from_terms(
        candidates.iter().cloned().zip(sol),
    ))
}

/// Basis of the relations of weight `degree` among the rank-`n`
/// multisymmetric generators with `b >= 1`.
///
/// Each relation is normalised to a primitive integer vector whose
/// graded-lex greatest monomial has positive coefficient.
pub fn find_relations(n: usize, degree: u32) -> Vec<MSymExpr> {
    let candidates = monomials_of_weight(degree, true);
    if candidates.is_empty() {
        return Vec::new();
    }
    let expansions: Vec<BTreeMap<GenMono, Int>> = candidates
        .iter()
        .map(|zm| z_mono_in_m_basis(zm, n))
        .collect();
    let mut row_keys: alloc::collections::BTreeSet<GenMono> = alloc::collections::BTreeSet::new();
    for exp in &expansions {
        row_keys.extend(exp.keys().cloned());
    }
    let keys: Vec<GenMono> = row_keys.into_iter().collect();
    let matrix: Vec<Vec<Rat>> = keys
        .iter()
        .map(|key| {
            expansions
                .iter()
                .map(|exp| exp.get(key).cloned().map(Rat::from_integer).unwrap_or_else(Rat::zero))
                .collect()
        })
        .collect();
    linalg::kernel(&matrix)
        .into_iter()
        .map(|v| {
            let lead = v
                .iter()
                .rposition(|c| !c.is_zero())
                .expect("kernel vectors are nonzero");
            let ints = linalg::primitive_integer_vector(&v, lead);
            MSymExpr::from_terms(
                candidates
                    .iter()
                    .cloned()
                    .zip(ints.into_iter().map(Rat::from_integer)),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Tensor expressions and the comultiplication pullbacks
// ---------------------------------------------------------------------------

/// Element of the tensor square of the `z`-generator polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MSymTensor {
    terms: BTreeMap<(GenMono, GenMono), Rat>,
}

impl MSymTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, left: GenMono, right: GenMono, c: Rat) {
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

    pub fn of(left: &MSymExpr, right: &MSymExpr) -> Self {
        let mut out = Self::zero();
        for (ml, cl) in left.terms() {
            for (mr, cr) in right.terms() {
                out.add_term(ml.clone(), mr.clone(), cl.clone() * cr.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MSymTensor {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                out.add_term(l1.union(l2), r1.union(r2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(GenMono, GenMono), &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, left: &GenMono, right: &GenMono) -> Rat {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for MSymTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((l, r), c)) in self.terms.iter().rev().enumerate() {
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
            if !abs.is_one() || (l.is_empty() && r.is_empty()) {
                write!(f, "{abs}*")?;
            }
            write!(f, "{}⊗{}", l, r)?;
        }
        Ok(())
    }
}

/// Result of the tensor-product pullback of one generator.
pub struct MuPullback {
    /// Concretely computed pullback, re-expressed in the `z⊗z` basis.
    pub computed: MSymTensor,
    /// The closed binomial formula.
    pub formula: MSymTensor,
    /// Whether `m, n >= a + b`, the range in which the closed formula is
    /// asserted. Below it the computed value is still returned, flagged.
    pub hypothesis_met: bool,
}

/// Closed form of the tensor-pullback of `z_{a,b}` on components `m, n`:
/// the double binomial sum with `z_{0,0}⊗1 := m` and `1⊗z_{0,0} := n`.
pub fn mu_closed_formula(a: u32, b: u32, m: usize, n: usize) -> MSymTensor {
    let mut out = MSymTensor::zero();
    for i in 0..=a {
        for j in 0..=b {
            let coeff = Rat::from_integer(binom(a, i) * binom(b, j));
            let (left, lscale) = if i == a && j == b {
                (GenMono::empty(), Rat::from_integer(Int::from(m as u64)))
            } else {
                (GenMono::single(GenIdx::new(a - i, b - j)), Rat::one())
            };
            let (right, rscale) = if i == 0 && j == 0 {
                (GenMono::empty(), Rat::from_integer(Int::from(n as u64)))
            } else {
                (GenMono::single(GenIdx::new(i, j)), Rat::one())
            };
            out.add_term(left, right, coeff * lscale * rscale);
        }
    }
    out
}

/// Closed tensor-pullback of a whole `z`-monomial (multiplicativity).
pub fn mu_closed_of_monomial(mono: &GenMono, m: usize, n: usize) -> MSymTensor {
    let mut out = MSymTensor::zero();
    out.add_term(GenMono::empty(), GenMono::empty(), Rat::one());
    for &g in mono.factors() {
        out = out.mul(&mu_closed_formula(g.a, g.b, m, n));
    }
    out
}

/// Computes the pullback of `z_{a,b,mn}` along the rank-`(m,n)` tensor map
/// concretely and re-expresses it in the `z⊗z` basis.
///
/// The torus variables obey `x_(i,j) -> x'_i + x''_j` and
/// `y_(i,j) -> y'_i + y''_j`; the resulting polynomial is bi-invariant and
/// is decomposed through the tensor monomial basis.
pub fn mu_pullback_oracle(a: u32, b: u32, m: usize, n: usize) -> Result<MuPullback, MultisymError> {
    if a == 0 && b == 0 {
        return Err(MultisymError::ZeroIndexPair);
    }
    // variables: x'_1..x'_m, y'_1..y'_m, x''_1..x''_n, y''_1..y''_n
    let mut names: Vec<(String, u32)> = Vec::new();
    for i in 1..=m {
        names.push((alloc::format!("xl{i}"), 1));
    }
    for i in 1..=m {
        names.push((alloc::format!("yl{i}"), 1));
    }
    for j in 1..=n {
        names.push((alloc::format!("xr{j}"), 1));
    }
    for j in 1..=n {
        names.push((alloc::format!("yr{j}"), 1));
    }
    let vars = VarSet::with_weights(names);
    let nvars = vars.len();
    let var = |i: usize| MPoly::<Rat>::var(vars.clone(), i);

    let mut pullback = MPoly::<Rat>::zero(vars.clone());
    for i in 0..m {
        for j in 0..n {
            let x_sum = var(i).add(&var(2 * m + j))?;
            let y_sum = var(m + i).add(&var(2 * m + n + j))?;
            let term = x_sum.pow(a).mul(&y_sum.pow(b))?;
            pullback = pullback.add(&term)?;
        }
    }

    // group monomials into orbit pairs (M', M'')
    let mut coords: BTreeMap<(GenMono, GenMono), (Rat, usize)> = BTreeMap::new();
    for (mono, c) in pullback.terms() {
        let exps = mono.exps();
        debug_assert_eq!(exps.len(), nvars);
        let left_gens: Vec<GenIdx> = (0..m)
            .map(|i| (exps[i], exps[m + i]))
            .filter(|&(x, y)| x != 0 || y != 0)
            .map(|(x, y)| GenIdx::new(x, y))
            .collect();
        let right_gens: Vec<GenIdx> = (0..n)
            .map(|j| (exps[2 * m + j], exps[2 * m + n + j]))
            .filter(|&(x, y)| x != 0 || y != 0)
            .map(|(x, y)| GenIdx::new(x, y))
            .collect();
        let key = (GenMono::from_indices(left_gens), GenMono::from_indices(right_gens));
        match coords.entry(key) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert((c.clone(), 1));
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                if e.get().0 != *c {
                    return Err(MultisymError::NotInvariant);
                }
                e.get_mut().1 += 1;
            }
        }
    }

    let mut mb = MBasis::new();
    let mut computed = MSymTensor::zero();
    for ((ml, mr), (coeff, count)) in coords {
        let expected = orbit_size(&ml, m) * orbit_size(&mr, n);
        if Int::from(count as u64) != expected {
            return Err(MultisymError::NotInvariant);
        }
        let tensor = MSymTensor::of(&mb.to_z(&ml), &mb.to_z(&mr));
        computed = computed.add(&tensor.scale(&coeff));
    }

    Ok(MuPullback {
        computed,
        formula: mu_closed_formula(a, b, m, n),
        hypothesis_met: m as u64 >= (a + b) as u64 && n as u64 >= (a + b) as u64,
    })
}

/// Result of the block-sum comultiplication pullback of a power sum.
pub struct ComultPullback {
    /// `sum_i (x_i + y_i)^n` at rank `k`, expressed in the generators and
    /// projected to the `b >= 1` part.
    pub computed: MSymExpr,
    /// The closed binomial formula `sum_{j<n} C(n,j) z_{j,n-j}`.
    pub formula: MSymExpr,
    /// Whether `k >= n`; below that range the value is flagged, not refused.
    pub in_validated_range: bool,
}

pub fn comult_pullback(n: u32, k: usize) -> Result<ComultPullback, MultisymError> {
    assert!(n >= 1 && k >= 1);
    let vars = paired_varset(k);
    let mut p = MPoly::<Rat>::zero(vars.clone());
    for i in 0..k {
        let xi = MPoly::var(vars.clone(), i);
        let yi = MPoly::var(vars.clone(), k + i);
        p = p.add(&xi.add(&yi)?.pow(n))?;
    }
    let full = express_in_z(&p, k, true)?;
    let computed = full.drop_b0_terms();
    let mut formula = MSymExpr::zero();
    for j in 0..n {
        formula.add_term(
            GenMono::single(GenIdx::new(j, n - j)),
            Rat::from_integer(binom(n, j)),
        );
    }
    Ok(ComultPullback {
        computed,
        formula,
        in_validated_range: k as u64 >= n as u64,
    })
}

// ---------------------------------------------------------------------------
// The rank-2 quotient ring
// ---------------------------------------------------------------------------

/// Polynomials in `x1, y1, y2` with the rewrite `x1^2 -> 0`, the rank-2
/// shadow that the integral `U(2)` comparisons land in. The substitution
/// `x2 = -x1` encodes `e_1(x) = e_2(x) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Quot(MPoly<Rat>);

pub fn rank2_varset() -> Arc<VarSet> {
    VarSet::new(&["x1", "y1", "y2"])
}

impl Rank2Quot {
    pub fn zero() -> Self {
        Rank2Quot(MPoly::zero(rank2_varset()))
    }

    pub fn from_poly(p: MPoly<Rat>) -> Self {
        let vars = p.vars().clone();
        let mut reduced = MPoly::zero(vars);
        for (m, c) in p.terms() {
            if m.exps()[0] >= 2 {
                continue;
            }
            reduced.add_term(m.exps(), c.clone()).expect("same varset");
        }
        Rank2Quot(reduced)
    }

    pub fn poly(&self) -> &MPoly<Rat> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Rank2Quot(self.0.add(&other.0).expect("fixed varset"))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Rank2Quot(self.0.sub(&other.0).expect("fixed varset"))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_poly(self.0.mul(&other.0).expect("fixed varset"))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Rank2Quot(self.0.scale(c))
    }
}

impl fmt::Display for Rank2Quot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Evaluate an abstract `z`-expression in the rank-2 quotient: each
/// `z_{a,b}` becomes `x1^a y1^b + (-x1)^a y2^b` reduced by `x1^2 -> 0`.
pub fn rank2_eval(e: &MSymExpr) -> Rank2Quot {
    let vars = rank2_varset();
    let x1 = MPoly::<Rat>::var(vars.clone(), 0);
    let y1 = MPoly::<Rat>::var(vars.clone(), 1);
    let y2 = MPoly::<Rat>::var(vars.clone(), 2);
    let gen_image = |g: GenIdx| -> Rank2Quot {
        match g.a {
            0 => Rank2Quot::from_poly(y1.pow(g.b).add(&y2.pow(g.b)).expect("varset")),
            1 => {
                let diff = y1.pow(g.b).sub(&y2.pow(g.b)).expect("varset");
                Rank2Quot::from_poly(x1.mul(&diff).expect("varset"))
            }
            _ => Rank2Quot::zero(),
        }
    };
    let mut out = Rank2Quot::zero();
    for (mono, c) in e.terms() {
        let mut term = Rank2Quot::from_poly(MPoly::constant(vars.clone(), c.clone()));
        for &g in mono.factors() {
            term = term.mul(&gen_image(g));
        }
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, rat_frac};

    fn zmono(gens: &[(u32, u32)]) -> GenMono {
        GenMono::from_indices(gens.iter().map(|&(a, b)| GenIdx::new(a, b)).collect())
    }

    #[test]
    fn expand_z_examples() {
        let p = expand_z::<Int>(0, 1, 2).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient_of(&[0, 0, 1, 0]).unwrap(), int(1));
        assert_eq!(p.coefficient_of(&[0, 0, 0, 1]).unwrap(), int(1));

        let q = expand_z::<Int>(1, 1, 1).unwrap();
        assert_eq!(q.num_terms(), 1);
        assert_eq!(q.coefficient_of(&[1, 1]).unwrap(), int(1));

        let r = expand_z::<Int>(2, 1, 3).unwrap();
        assert_eq!(r.num_terms(), 3);
        assert_eq!(r.coefficient_of(&[2, 0, 0, 1, 0, 0]).unwrap(), int(1));

        assert_eq!(expand_z::<Int>(0, 0, 2).unwrap_err(), MultisymError::ZeroIndexPair);
    }

    #[test]
    fn express_generator_is_identity() {
        let p = expand_z::<Rat>(1, 1, 2).unwrap();
        let e = express_in_z(&p, 2, true).unwrap();
        assert_eq!(e, MSymExpr::gen(1, 1));
    }

    #[test]
    fn express_y1y2() {
        // y1*y2 = (z01^2 - z02)/2 at rank 2
        let vars = paired_varset(2);
        let mut p = MPoly::<Rat>::zero(vars);
        p.add_term(&[0, 0, 1, 1], rat(1)).unwrap();
        let e = express_in_z(&p, 2, true).unwrap();
        let mut expected = MSymExpr::zero();
        expected.add_term(zmono(&[(0, 1), (0, 1)]), rat_frac(1, 2));
        expected.add_term(zmono(&[(0, 2)]), rat_frac(-1, 2));
        assert_eq!(e, expected);
    }

    #[test]
    fn express_newton_combination_recovers_z03() {
        // (3 z01 z02 - z01^3)/2 expanded at rank 2 equals y1^3+y2^3, whose
        // canonical expression is the single generator z_{0,3}
        let z01 = MSymExpr::gen(0, 1);
        let z02 = MSymExpr::gen(0, 2);
        let combo = z01
            .mul(&z02)
            .scale(&rat_frac(3, 2))
            .sub(&z01.pow(3).scale(&rat_frac(1, 2)));
        let p = expand_msym(&combo, 2);
        let e = express_in_z(&p, 2, true).unwrap();
        assert_eq!(e, MSymExpr::gen(0, 3));
    }

    #[test]
    fn express_roundtrip_on_generators() {
        for total in 1..=6u32 {
            for a in 0..=total {
                let b = total - a;
                let n = total as usize;
                let p = expand_z::<Rat>(a, b, n).unwrap();
                let e = express_in_z(&p, n, true).unwrap();
                assert_eq!(e, MSymExpr::gen(a, b), "z({a},{b}) at rank {n}");
            }
        }
    }

    #[test]
    fn express_rejects_non_invariant() {
        let vars = paired_varset(2);
        let p = MPoly::<Rat>::var(vars, 0); // x1 alone
        assert_eq!(express_in_z(&p, 2, true).unwrap_err(), MultisymError::NotInvariant);
    }

    #[test]
    fn express_b0_restriction() {
        // e_1(x) = z_{1,0} has no b>=1 expression at stable rank
        let p = expand_z::<Rat>(1, 0, 2).unwrap();
        assert!(express_in_z(&p, 2, true).is_ok());
        assert_eq!(express_in_z(&p, 2, false).unwrap_err(), MultisymError::NoSolution);
    }

    #[test]
    fn relations_rank1_degree2() {
        let rels = find_relations(1, 2);
        assert_eq!(rels.len(), 1);
        let mut expected = MSymExpr::zero();
        expected.add_term(zmono(&[(0, 2)]), rat(1));
        expected.add_term(zmono(&[(0, 1), (0, 1)]), rat(-1));
        assert_eq!(rels[0], expected);
    }

    #[test]
    fn relations_rank2_degree3() {
        let rels = find_relations(2, 3);
        assert_eq!(rels.len(), 1, "kernel at rank 2, weight 3 is one-dimensional");
        let mut expected = MSymExpr::zero();
        expected.add_term(zmono(&[(0, 3)]), rat(2));
        expected.add_term(zmono(&[(0, 1), (0, 2)]), rat(-3));
        expected.add_term(zmono(&[(0, 1), (0, 1), (0, 1)]), rat(1));
        assert_eq!(rels[0], expected);
    }

    #[test]
    fn relations_vanish_at_rank3_up_to_degree3() {
        for d in 1..=3 {
            assert!(find_relations(3, d).is_empty(), "degree {d}");
        }
    }

    #[test]
    fn relation_vectors_annihilate_concretely() {
        for (n, d) in [(1usize, 2u32), (2, 3), (2, 4)] {
            for rel in find_relations(n, d) {
                assert!(expand_msym(&rel, n).is_zero(), "rank {n} degree {d}: {rel}");
            }
        }
    }

    #[test]
    fn mu_pullback_z10() {
        let r = mu_pullback_oracle(1, 0, 2, 2).unwrap();
        assert!(r.hypothesis_met);
        assert_eq!(r.computed, r.formula);
        let mut expected = MSymTensor::zero();
        expected.add_term(zmono(&[(1, 0)]), GenMono::empty(), rat(2));
        expected.add_term(GenMono::empty(), zmono(&[(1, 0)]), rat(2));
        assert_eq!(r.computed, expected);
    }

    #[test]
    fn mu_pullback_z01_rank4() {
        let r = mu_pullback_oracle(0, 1, 4, 4).unwrap();
        assert_eq!(r.computed, r.formula);
        let mut expected = MSymTensor::zero();
        expected.add_term(zmono(&[(0, 1)]), GenMono::empty(), rat(4));
        expected.add_term(GenMono::empty(), zmono(&[(0, 1)]), rat(4));
        assert_eq!(r.computed, expected);
    }

    #[test]
    fn mu_pullback_z11_rank4() {
        let r = mu_pullback_oracle(1, 1, 4, 4).unwrap();
        assert_eq!(r.computed, r.formula);
        let mut expected = MSymTensor::zero();
        expected.add_term(zmono(&[(1, 1)]), GenMono::empty(), rat(4));
        expected.add_term(zmono(&[(1, 0)]), zmono(&[(0, 1)]), rat(1));
        expected.add_term(zmono(&[(0, 1)]), zmono(&[(1, 0)]), rat(1));
        expected.add_term(GenMono::empty(), zmono(&[(1, 1)]), rat(4));
        assert_eq!(r.computed, expected);
    }

    #[test]
    fn mu_pullback_matches_formula_in_range() {
        for total in 1..=4u32 {
            for a in 0..=total {
                let b = total - a;
                let rank = total as usize;
                let r = mu_pullback_oracle(a, b, rank, rank).unwrap();
                assert!(r.hypothesis_met);
                assert_eq!(r.computed, r.formula, "z({a},{b}) at ranks ({rank},{rank})");
            }
        }
    }

    #[test]
    fn comult_pullback_examples() {
        let r = comult_pullback(2, 2).unwrap();
        assert!(r.in_validated_range);
        assert_eq!(r.computed, r.formula);
        let mut expected = MSymExpr::zero();
        expected.add_term(zmono(&[(0, 2)]), rat(1));
        expected.add_term(zmono(&[(1, 1)]), rat(2));
        assert_eq!(r.computed, expected);

        let r1 = comult_pullback(1, 1).unwrap();
        assert_eq!(r1.computed, MSymExpr::gen(0, 1));

        let r3 = comult_pullback(3, 3).unwrap();
        let mut expected = MSymExpr::zero();
        expected.add_term(zmono(&[(0, 3)]), rat(1));
        expected.add_term(zmono(&[(1, 2)]), rat(3));
        expected.add_term(zmono(&[(2, 1)]), rat(3));
        assert_eq!(r3.computed, expected);
        assert_eq!(r3.computed, r3.formula);
    }

    #[test]
    fn comult_pullback_binomial_coefficients() {
        for n in 1..=5u32 {
            for k in n as usize..=6 {
                let r = comult_pullback(n, k).unwrap();
                assert_eq!(r.computed, r.formula, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn rank2_eval_examples() {
        let vars = rank2_varset();
        let x1 = MPoly::<Rat>::var(vars.clone(), 0);
        let y1 = MPoly::<Rat>::var(vars.clone(), 1);
        let y2 = MPoly::<Rat>::var(vars.clone(), 2);

        let z11 = rank2_eval(&MSymExpr::gen(1, 1));
        let expected = x1.mul(&y1.sub(&y2).unwrap()).unwrap();
        assert_eq!(z11.poly(), &expected);

        assert!(rank2_eval(&MSymExpr::gen(2, 1)).is_zero());

        let z01 = rank2_eval(&MSymExpr::gen(0, 1));
        assert_eq!(z01.poly(), &y1.add(&y2).unwrap());
    }

    #[test]
    fn rank2_eval_respects_rank2_relation() {
        // 2 z03 - 3 z01 z02 + z01^3 is a rank-2 relation, so it must die
        let z01 = MSymExpr::gen(0, 1);
        let z02 = MSymExpr::gen(0, 2);
        let z03 = MSymExpr::gen(0, 3);
        let rel = z03
            .scale(&rat(2))
            .sub(&z01.mul(&z02).scale(&rat(3)))
            .add(&z01.pow(3));
        assert!(rank2_eval(&rel).is_zero());
    }

    #[test]
    fn monomial_basis_product_rule() {
        // z01^2 = 2 m_{(0,1)(0,1)} + m_{(0,2)}
        let coords = z_mono_in_m_basis(&zmono(&[(0, 1), (0, 1)]), 8);
        assert_eq!(coords.get(&zmono(&[(0, 1), (0, 1)])), Some(&int(2)));
        assert_eq!(coords.get(&zmono(&[(0, 2)])), Some(&int(1)));
        assert_eq!(coords.len(), 2);
    }

    #[test]
    fn monomial_to_z_conversion_is_exact_at_every_rank() {
        // m_M as a z-polynomial evaluates back to the orbit sum, also
        // below the stable range
        let mut mb = MBasis::new();
        for m in [
            zmono(&[(0, 1), (0, 1)]),
            zmono(&[(0, 1), (1, 1)]),
            zmono(&[(0, 2), (1, 0), (0, 1)]),
            zmono(&[(1, 1), (1, 1)]),
        ] {
            let zexpr = mb.to_z(&m);
            for n in 1..=4 {
                assert_eq!(
                    expand_msym(&zexpr, n),
                    m_to_mpoly(&m, n),
                    "m = {m} at rank {n}"
                );
            }
        }
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&zmono(&[(0, 1)]), 3), int(3));
        assert_eq!(orbit_size(&zmono(&[(0, 1), (0, 1)]), 3), int(3));
        assert_eq!(orbit_size(&zmono(&[(0, 1), (1, 0)]), 3), int(6));
        assert_eq!(orbit_size(&zmono(&[(0, 1), (1, 0), (2, 2)]), 2), int(0));
    }
}
