//! Centralized numeric thresholds.
//!
//! Every cutoff that shapes library behavior lives here so the choices are
//! auditable in one place. Tests assert the relationships between them.

/// Degrees of the power-log families closer than this to a negative integer
/// are rejected. The analytic continuation has genuine poles there; the
/// finite-part families cover those degrees instead. The window is wide
/// enough that the pole corrections, which grow like distance^-(k+1), stay
/// below 1e42 for k <= 6 and never overflow.
pub const POLE_EPS: f64 = 1e-6;

/// Two stored degrees within this complex distance are treated as the same
/// degree and their coefficients merged. Well above f64 roundoff from the
/// arithmetic that produces degrees, well below any genuine separation the
/// library works with.
pub const MERGE_EPS: f64 = 1e-12;

/// Coefficients at or below this magnitude are dropped after cancellation.
/// Slightly above the roundoff floor of coefficient arithmetic so exact
/// cancellations collapse to the empty expression.
pub const DROP_EPS: f64 = 1e-14;

/// Pass threshold for the linear-independence check: smallest singular value
/// of the pairing matrix must be at least this fraction of the largest.
/// Genuinely dependent rows land at 1e-15 or lower, well-separated sets at
/// 1e-5 or higher; measurements with an independent multiprecision oracle
/// put the worst healthy battery near 2e-5.
pub const INDEP_EPS: f64 = 1e-8;

/// Condition-number ceiling for the frequency-coefficient linear systems.
/// The solve fails loudly beyond this rather than returning polluted values.
/// The largest supported system (seven unknowns) measures near 1.9e7, so the
/// ceiling leaves a factor of five of headroom while still rejecting
/// genuinely degenerate systems.
pub const COND_MAX: f64 = 1e8;

/// Default pairing tolerance: the quadrature error estimate is driven below
/// tol * (1 + |value|).
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// Maximum number of adaptive panel bisections per integral.
pub const QUAD_PANEL_BUDGET: usize = 2000;
