//! The fourth homotopy group computation: cohomology functionals on the
//! rank-2 special-unitary classifying space and their images in the
//! weight-2 homotopy of the stable space.
//!
//! Sign conventions are frozen here, in one place:
//! the 4-sphere is oriented by the image of the fundamental class of the
//! complex projective plane, and the second Chern class of the square of
//! the Bott class is `-1` (the case `k = 2` of
//! `c_k(u^k) = (-1)^{k-1} (k-1)!`).

use core::fmt;

/// `c_2` evaluated on `u^2`, the generator of the fourth homotopy group of
/// the ordinary classifying space.
pub const C2_OF_U_SQUARED: i64 = -1;

/// Element of the fourth homotopy group of the rank-2 special-unitary
/// space, written in the dual basis `(c2*, b*)` where `b = d1 - 2 c2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pi4SU2Elem {
    pub c2_dual: i64,
    pub b_dual: i64,
}

/// Element of the weight-2 homotopy of the stable space, in the basis
/// `(u y_1, y_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pi4UElem {
    pub uy1: i64,
    pub y2: i64,
}

/// The class dual to `c2`: `v*(c2) = 1`, `v*(b) = 0`.
pub const V: Pi4SU2Elem = Pi4SU2Elem { c2_dual: 1, b_dual: 0 };

/// The projective-plane class: `w*(c2) = -1`, `w*(b) = 2`.
pub const W: Pi4SU2Elem = Pi4SU2Elem { c2_dual: -1, b_dual: 2 };

/// The halved sum `(v + w)/2`, exactly the integer pair `(0, 1)`.
pub const V_PLUS_W_HALF: Pi4SU2Elem = Pi4SU2Elem { c2_dual: 0, b_dual: 1 };

impl Pi4SU2Elem {
    pub fn new(c2_dual: i64, b_dual: i64) -> Self {
        Pi4SU2Elem { c2_dual, b_dual }
    }

    pub fn scale(self, k: i64) -> Self {
        Pi4SU2Elem {
            c2_dual: self.c2_dual * k,
            b_dual: self.b_dual * k,
        }
    }
}

impl core::ops::Add for Pi4SU2Elem {
    type Output = Pi4SU2Elem;

    fn add(self, other: Self) -> Self {
        Pi4SU2Elem {
            c2_dual: self.c2_dual + other.c2_dual,
            b_dual: self.b_dual + other.b_dual,
        }
    }
}

impl Pi4UElem {
    pub fn new(uy1: i64, y2: i64) -> Self {
        Pi4UElem { uy1, y2 }
    }
}

/// Evaluate the two cohomology functionals `(<c2>, <b>)` on a class. The
/// class `lambda_2` restricts to `-2 c2 + d1 = b`, so its value is the
/// second component.
pub fn eval_functionals(cls: Pi4SU2Elem) -> (i64, i64) {
    (cls.c2_dual, cls.b_dual)
}

/// Push a class into the stable weight-2 homotopy by solving the two
/// functional equations: `c2` reads `-alpha` (the Bott square has second
/// Chern class `-1` and `y_2` is invisible to it), `lambda_2` reads `beta`.
pub fn push_to_bcomu(cls: Pi4SU2Elem) -> Pi4UElem {
    let (c2_value, lambda2_value) = eval_functionals(cls);
    // alpha * c2(u y1) + beta * c2(y2) = <c2>   with c2(u y1) = -1, c2(y2) = 0
    // alpha * l2(u y1) + beta * l2(y2) = <l2>   with l2(u y1) = 0,  l2(y2) = 1
    let alpha = c2_value * C2_OF_U_SQUARED;
    let beta = lambda2_value;
    Pi4UElem::new(alpha, beta)
}

/// Report of the sphere computation: the three images, the change-of-basis
/// determinant, and the image of the doubled class with its sign left
/// explicit.
pub struct S4Report {
    pub image_v: Pi4UElem,
    pub image_w: Pi4UElem,
    pub image_mid: Pi4UElem,
    pub determinant: i64,
    /// images of `+2v` and `-2v`; the orientation choice fixes the sign
    pub h_tilde_images: (Pi4UElem, Pi4UElem),
}

impl S4Report {
    pub fn all_ok(&self) -> bool {
        self.determinant.abs() == 1
    }
}

/// Verify that the images of `v` and `(v+w)/2` form a basis of the target
/// lattice and compute the image of the doubled class.
pub fn verify_kcoms4() -> S4Report {
    let image_v = push_to_bcomu(V);
    let image_w = push_to_bcomu(W);
    let image_mid = push_to_bcomu(V_PLUS_W_HALF);
    let determinant = image_v.uy1 * image_mid.y2 - image_v.y2 * image_mid.uy1;
    let h_plus = push_to_bcomu(V.scale(2));
    let h_minus = push_to_bcomu(V.scale(-2));
    S4Report {
        image_v,
        image_w,
        image_mid,
        determinant,
        h_tilde_images: (h_plus, h_minus),
    }
}

impl fmt::Display for Pi4UElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.uy1, self.y2) {
            (0, 0) => write!(f, "0"),
            (a, 0) => write_single(f, a, "u*y1"),
            (0, b) => write_single(f, b, "y2"),
            (a, b) => {
                write_single(f, a, "u*y1")?;
                if b < 0 {
                    write!(f, " - ")?;
                    write_single(f, -b, "y2")
                } else {
                    write!(f, " + ")?;
                    write_single(f, b, "y2")
                }
            }
        }
    }
}

fn write_single(f: &mut fmt::Formatter<'_>, c: i64, sym: &str) -> fmt::Result {
    match c {
        1 => write!(f, "{sym}"),
        -1 => write!(f, "-{sym}"),
        c => write!(f, "{c}*{sym}"),
    }
}

impl fmt::Display for Pi4SU2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*c2. + ({})*b.", self.c2_dual, self.b_dual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functional_values() {
        assert_eq!(eval_functionals(V), (1, 0));
        assert_eq!(eval_functionals(W), (-1, 2));
        assert_eq!(eval_functionals(Pi4SU2Elem::new(0, 0)), (0, 0));
    }

    #[test]
    fn images() {
        assert_eq!(push_to_bcomu(V), Pi4UElem::new(-1, 0));
        assert_eq!(push_to_bcomu(W), Pi4UElem::new(1, 2));
        assert_eq!(push_to_bcomu(V_PLUS_W_HALF), Pi4UElem::new(0, 1));
    }

    #[test]
    fn v_plus_w_half_is_integral() {
        assert_eq!(V + W, V_PLUS_W_HALF.scale(2));
    }

    #[test]
    fn report() {
        let r = verify_kcoms4();
        assert_eq!(r.determinant, -1);
        assert!(r.all_ok());
        assert_eq!(r.h_tilde_images.0, Pi4UElem::new(-2, 0));
        assert_eq!(r.h_tilde_images.1, Pi4UElem::new(2, 0));
        assert_eq!(r.image_w, Pi4UElem::new(1, 2));
    }

    #[test]
    fn push_is_linear_and_projects_to_c2_values() {
        for alpha in -100..=100i64 {
            for beta in [-100, -7, 0, 3, 100] {
                let cls = Pi4SU2Elem::new(alpha, beta);
                let img = push_to_bcomu(cls);
                // linearity against the generators
                let by_parts = Pi4UElem::new(
                    alpha * push_to_bcomu(Pi4SU2Elem::new(1, 0)).uy1
                        + beta * push_to_bcomu(Pi4SU2Elem::new(0, 1)).uy1,
                    alpha * push_to_bcomu(Pi4SU2Elem::new(1, 0)).y2
                        + beta * push_to_bcomu(Pi4SU2Elem::new(0, 1)).y2,
                );
                assert_eq!(img, by_parts);
                // forgetting y2 and applying the Chern value of the Bott
                // square recovers the c2 functional
                assert_eq!(img.uy1 * C2_OF_U_SQUARED, alpha);
            }
        }
    }

    #[test]
    fn lattice_index_is_one() {
        let r = verify_kcoms4();
        // determinant +-1 means the images generate the full lattice
        assert_eq!(r.determinant.abs(), 1);
    }

    #[test]
    fn rendering() {
        assert_eq!(alloc::format!("{}", Pi4UElem::new(-1, 0)), "-u*y1");
        assert_eq!(alloc::format!("{}", Pi4UElem::new(1, 2)), "u*y1 + 2*y2");
        assert_eq!(alloc::format!("{}", Pi4UElem::new(0, 1)), "y2");
        assert_eq!(alloc::format!("{}", Pi4UElem::new(-2, 0)), "-2*u*y1");
    }
}
