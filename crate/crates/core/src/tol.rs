/// Thresholds for float-backend decisions. The exact backend ignores them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for rank and kernel decisions.
    pub rank_tol: f64,
    /// Allowed negative eigenvalue magnitude (relative to the matrix scale)
    /// when certifying positive semidefiniteness.
    pub psd_tol: f64,
    /// Eigenvalue clustering radius, relative to the matrix norm.
    pub spec_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_tol: 1e-10,
            psd_tol: 1e-9,
            spec_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    /// Same value for all three thresholds.
    pub fn uniform(tol: f64) -> Self {
        ToleranceConfig {
            rank_tol: tol,
            psd_tol: tol,
            spec_tol: tol,
        }
    }

    pub fn is_valid(&self) -> bool {
        [self.rank_tol, self.psd_tol, self.spec_tol]
            .iter()
            .all(|t| t.is_finite() && *t >= 0.0)
    }
}
