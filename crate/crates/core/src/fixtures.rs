//! Small reference instances with known closed-form answers.

use crate::frames::Frame;
use crate::linalg::{ComplexMatrix, OperatorEnv};
use crate::tolerance::Tolerances;

/// A closed-form constant: decimal value plus a display tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenConstant {
    pub value: f64,
    pub symbol: &'static str,
}

impl GoldenConstant {
    pub const fn new(value: f64, symbol: &'static str) -> Self {
        GoldenConstant { value, symbol }
    }
}

pub const INV_SQRT2: GoldenConstant = GoldenConstant::new(std::f64::consts::FRAC_1_SQRT_2, "1/sqrt2");
// Decimals carry 17 significant digits.
#[allow(clippy::excessive_precision)]
pub const PLANAR_DUAL_PAIRED: GoldenConstant = GoldenConstant::new(-0.56568542494923802, "-4/(5*sqrt2)");
#[allow(clippy::excessive_precision)]
pub const PLANAR_DUAL_SINGLE: GoldenConstant = GoldenConstant::new(0.28284271247461901, "2/(5*sqrt2)");
pub const PLANAR_DUAL_TIGHT: GoldenConstant = GoldenConstant::new(0.72, "36/50");
pub const PLANAR_OPTIMAL_LOWER: GoldenConstant = GoldenConstant::new(1.3333333333333333, "4/3");
#[allow(clippy::excessive_precision)]
pub const PLANAR_WITNESS: GoldenConstant = GoldenConstant::new(0.98209275164798263, "50/(36*sqrt2)");
pub const PLANAR_THRESHOLD: GoldenConstant = GoldenConstant::new(std::f64::consts::FRAC_1_SQRT_2, "1/sqrt2");

/// A frame, an operator and a pair of (not necessarily optimal) bounds
/// asserted for it.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: &'static str,
    pub frame: Frame,
    pub operator: ComplexMatrix,
    pub stated_lower: f64,
    pub stated_upper: f64,
}

impl Instance {
    pub fn env(&self) -> OperatorEnv {
        OperatorEnv::new(self.operator.clone(), &Tolerances::default()).expect("fixture operator is valid")
    }
}

/// `f_1 = f_2 = (-1, 1)/sqrt2`, `f_3 = (1, 1)/sqrt2` in `C^2`, with `K` the
/// orthogonal projection onto `span{e_1}`.
pub fn planar_projection() -> Instance {
    let s = INV_SQRT2.value;
    Instance {
        name: "planar-projection",
        frame: Frame::from_real_vectors(&[&[-s, s], &[-s, s], &[s, s]]).expect("fixture frame"),
        operator: ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
        stated_lower: 1.0,
        stated_upper: 2.0,
    }
}

/// `F = {e_1, e_2, e_3}` in `C^4` with `K(c) = c_1 e_1 + c_1 e_2 + c_2 e_3`.
pub fn c4_minimal() -> Instance {
    Instance {
        name: "c4-minimal",
        frame: Frame::from_real_vectors(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]])
            .expect("fixture frame"),
        operator: c4_operator(),
        stated_lower: 0.125,
        stated_upper: 1.0,
    }
}

pub fn c4_operator() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
    ])
    .expect("fixture operator")
}

/// Expected canonical K-dual of [`planar_projection`], in index order.
pub fn planar_canonical_dual() -> Frame {
    let (p, q) = (PLANAR_DUAL_PAIRED.value, PLANAR_DUAL_SINGLE.value);
    Frame::from_real_vectors(&[&[p, 0.0], &[p, 0.0], &[q, 0.0]]).expect("fixture frame")
}

/// Expected canonical K-dual of [`c4_minimal`].
pub fn c4_canonical_dual() -> Frame {
    Frame::from_real_vectors(&[&[1.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]])
        .expect("fixture frame")
}

pub fn all() -> Vec<Instance> {
    vec![planar_projection(), c4_minimal()]
}
