//! Symbolic-numeric calculus for one-dimensional quasi associated
//! homogeneous distributions.
//!
//! The crate represents finite linear combinations of the five model
//! families x_+^lambda log^k, x_-^lambda log^k, finite parts
//! P(x_+^-n log^k), P(x_-^-n log^k), and delta derivatives, and provides
//!
//! * exact dilatation algebra and per-degree scaling expansions,
//! * regularized distributional pairings against smooth decaying test
//!   functions through adaptive quadrature with subtracted Taylor terms,
//! * verifiers for the scaling law, the Euler-type operator identity,
//!   linear independence, and quasi-asymptotic behaviour at zero and
//!   infinity,
//! * Fourier transforms into boundary-value frequency symbols together
//!   with the associated homogeneous gamma function table.
//!
//! Coefficients are complex doubles throughout. Every tolerance the crate
//! relies on is a named constant in [`tol`].

pub mod algebra;
pub mod error;
pub mod fourier;
pub mod freq;
pub mod gamma;
pub mod jsonio;
pub mod laws;
pub mod pairing;
pub mod quad;
pub mod term;
pub mod testfn;
pub mod textio;
pub mod tol;

pub use algebra::{
    dilate, expand_i0, quasi_asymptotics, scaling_expansion, BoundarySign, LimitPoint,
    QuasiAsymptotics, ScalingExpansion,
};
pub use error::{QahdError, Result};
pub use fourier::{
    closed_xplus_coeffs, fourier, gamma_assoc, laplace_moment, pf_laplace_moment,
    solve_ft_coeffs, FtCoeffFamily, FtSolve, GammaValue,
};
pub use freq::{
    canonicalize_freq, eval_freq, freq_degree_order, freq_to_expr, FreqExpr, FreqTerm,
};
pub use gamma::{cgamma, loggamma_derivs, polygamma, EULER_MASCHERONI};
pub use laws::{
    verify_euler, verify_independence, verify_quasi_asymptotics, verify_scaling,
    IndependenceReport, LawReport, LawSample,
};
pub use pairing::{pair, pair_term, subtraction_order, PairingPieces, PairingResult};
pub use term::{canonicalize, degree_components, degree_order, DegreeOrder, QahdExpr, QahdTerm};
pub use testfn::{scaled_argument, TestFunction};
pub use textio::{parse_complex_literal, parse_expr, serialize_expr};
