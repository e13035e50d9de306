//! Numerical thresholds shared by every check in the crate.
//!
//! Two knobs exist. The rank tolerance decides which singular values count
//! as nonzero; the identity tolerance decides when a residual is small
//! enough for an operator identity to be accepted. "Closed range" never has
//! to be tested in finite dimension: every range is closed, so only
//! numerical rank matters.

/// Threshold below which a singular value is treated as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankTolerance {
    /// `sigma > sigma_max * max(rows, cols) * factor`.
    Relative(f64),
    /// `sigma > value`.
    Absolute(f64),
}

impl RankTolerance {
    /// 2^-40, scaled by the largest singular value and the larger dimension.
    pub const DEFAULT_FACTOR: f64 = 9.094_947_017_729_282e-13;

    pub fn threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        match *self {
            RankTolerance::Relative(factor) => sigma_max * rows.max(cols) as f64 * factor,
            RankTolerance::Absolute(value) => value,
        }
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance::Relative(Self::DEFAULT_FACTOR)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rank: RankTolerance,
    /// Relative tolerance for operator identities; residuals are compared
    /// against `identity * max(1, scale)` where `scale` is the norm of the
    /// larger operand.
    pub identity: f64,
}

impl Tolerances {
    pub const DEFAULT_IDENTITY: f64 = 1e-10;

    pub fn with_identity(identity: f64) -> Self {
        Tolerances {
            identity,
            ..Self::default()
        }
    }

    /// Threshold for a residual measured against an operand of norm `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.identity * scale.max(1.0)
    }

    pub fn check(&self, residual: f64, scale: f64) -> Check {
        Check::new(residual, self.threshold(scale))
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: RankTolerance::default(),
            identity: Self::DEFAULT_IDENTITY,
        }
    }
}

/// A verdict together with the residual and threshold that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    pub fn new(residual: f64, threshold: f64) -> Self {
        Check {
            passed: residual <= threshold,
            residual,
            threshold,
        }
    }

    /// Re-evaluate the stored residual against a different threshold.
    pub fn rethreshold(&self, threshold: f64) -> Self {
        Check::new(self.residual, threshold)
    }
}
