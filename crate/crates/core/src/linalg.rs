//! Exact linear algebra over the rationals.
//!
//! Rows are cleared to integers, the forward pass is fraction-free
//! (Bareiss-style, every division exact by Sylvester's identity), and
//! pivots are chosen in declared column order. No thresholds exist
//! because the arithmetic is exact.

use alloc::vec;
use alloc::vec::Vec;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{Int, Rat};

struct Echelon {
    mat: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

/// Clear the denominators of one row by its common denominator.
fn clear_row(row: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for r in row {
        lcm = lcm.lcm(r.denom());
    }
    row.iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect()
}

/// Fraction-free row echelon form with column-order pivoting.
fn echelon(mut mat: Vec<Vec<Int>>, cols: usize) -> Echelon {
    let rows = mat.len();
    let mut pivots = Vec::new();
    let mut prev = Int::one();
    let mut pr = 0;
    for pc in 0..cols {
        let Some(found) = (pr..rows).find(|&r| !mat[r][pc].is_zero()) else {
            continue;
        };
        mat.swap(pr, found);
        for i in (pr + 1)..rows {
            // head == 0 still rescales the row by pivot/prev, which keeps
            // every later division exact
            let head = core::mem::replace(&mut mat[i][pc], Int::zero());
            for j in (pc + 1)..mat[i].len() {
                let num = &mat[pr][pc] * &mat[i][j] - &head * &mat[pr][j];
                mat[i][j] = num / &prev;
            }
        }
        prev = mat[pr][pc].clone();
        pivots.push(pc);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    Echelon { mat, pivots }
}

fn back_substitute(ech: &Echelon, cols: usize, fixed: &[(usize, Rat)], rhs_col: Option<usize>) -> Option<Vec<Rat>> {
    let mut x = vec![Rat::zero(); cols];
    for &(i, ref v) in fixed {
        x[i] = v.clone();
    }
    for (row_idx, &pc) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.mat[row_idx];
        let mut acc = match rhs_col {
            Some(rc) => Rat::from_integer(row[rc].clone()),
            None => Rat::zero(),
        };
        for j in (pc + 1)..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[pc] = acc / Rat::from_integer(row[pc].clone());
    }
    Some(x)
}

/// Solve `A x = b` exactly. Returns the canonical solution with every free
/// variable set to zero, or `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut aug = Vec::with_capacity(rows);
    for (row, rhs) in a.iter().zip(b) {
        let mut full: Vec<Rat> = row.clone();
        full.push(rhs.clone());
        aug.push(clear_row(&full));
    }
    let ech = echelon(aug, cols);
    // consistency: a pivot in the appended column means 0 = nonzero
    for (row_idx, row) in ech.mat.iter().enumerate() {
        let is_pivot_row = row_idx < ech.pivots.len();
        if !is_pivot_row && !row[cols].is_zero() {
            return None;
        }
    }
    back_substitute(&ech, cols, &[], Some(cols))
}

/// A basis of the kernel of `A`, one vector per free column, each with a 1
/// in its free position and zeros in the other free positions.
pub fn kernel(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let cols = a.first().map_or(0, Vec::len);
    let cleared: Vec<Vec<Int>> = a.iter().map(|r| clear_row(r)).collect();
    let ech = echelon(cleared, cols);
    let mut basis = Vec::new();
    for fc in 0..cols {
        if ech.pivots.contains(&fc) {
            continue;
        }
        let fixed = [(fc, Rat::one())];
        // pivot columns left of fc never involve fc in their equations only
        // when the echelon row has zero there, so run full back substitution
        let mut v = back_substitute(&ech, cols, &fixed, None).expect("homogeneous system");
        v[fc] = Rat::one();
        basis.push(v);
    }
    basis
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let cleared: Vec<Vec<Int>> = a.iter().map(|r| clear_row(r)).collect();
    echelon(cleared, cols).pivots.len()
}

/// Scale a rational vector to a primitive integer vector whose entry at
/// `lead` is positive.
pub fn primitive_integer_vector(v: &[Rat], lead: usize) -> Vec<Int> {
    let mut lcm = Int::one();
    for r in v {
        lcm = lcm.lcm(r.denom());
    }
    let mut ints: Vec<Int> = v.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let mut gcd = Int::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if !gcd.is_zero() && !gcd.is_one() {
        for i in &mut ints {
            *i /= &gcd;
        }
    }
    if ints[lead].is_negative() {
        for i in &mut ints {
            *i = -i.clone();
        }
    }
    ints
}
