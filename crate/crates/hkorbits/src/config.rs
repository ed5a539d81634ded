/// Tolerances and finite-difference steps shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Algebraic identities (bracket relations, defining relations).
    pub algebraic: f64,
    /// First-order finite-difference comparisons.
    pub fd_first: f64,
    /// Second-order finite-difference comparisons.
    pub fd_second: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank_rel: f64,
    /// Step for first derivatives, relative to the parameter size.
    pub h1: f64,
    /// Step for second derivatives, relative to the parameter size.
    pub h2: f64,
    /// Apply one Richardson extrapolation step to central differences.
    pub richardson: bool,
    /// Reject parameter points whose eta-Jacobian is worse conditioned than this.
    pub max_condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-10,
            fd_first: 1e-8,
            fd_second: 1e-5,
            rank_rel: 1e-9,
            h1: 1e-3,
            h2: 1e-3,
            richardson: true,
            max_condition: 1e8,
        }
    }
}
