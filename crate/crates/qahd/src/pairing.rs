//! Regularized distributional pairings <f, phi>.
//!
//! The plus-side power family integrates the Taylor-subtracted test
//! function near zero, the raw test function on the tail, and adds the
//! closed-form correction sum; the finite-part family subtracts low
//! Taylor orders globally and the order n-1 term on (0, 1) only. Minus
//! families reflect the test function. Delta derivatives never touch the
//! quadrature at all.

use num_complex::Complex64;

use crate::algebra::{binom, factorial, iter_pow, iter_pow_c, pow_pos};
use crate::error::{QahdError, Result};
use crate::quad::{integrate, QuadResult};
use crate::term::{pfplus, xplus, QahdExpr, QahdTerm};
use crate::testfn::TestFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Multiple of the test function's concentration scale at which the
/// (0, 1) integral is split; beyond it the function is dead to double
/// precision, so all of the mass sits inside the first piece.
const NEAR_SPLIT_FACTOR: f64 = 40.0;

/// Adaptive integral over (0, 1) with an extra split when phi varies on
/// a scale much shorter than the interval. Without the split a sharply
/// concentrated peak can fall between the nodes of the first panel, and
/// the subdivision would end at an exact zero without ever sampling it.
fn integrate_near<F: Fn(f64) -> Complex64>(
    f: F,
    phi: &TestFunction,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let split = (NEAR_SPLIT_FACTOR * phi.concentration_scale()).min(1.0);
    if split < 1.0 {
        let head = integrate(&f, 0.0, split, abs_tol * 0.5, rel_tol)?;
        let rest = integrate(&f, split, 1.0, abs_tol * 0.5, rel_tol)?;
        Ok(QuadResult {
            value: head.value + rest.value,
            abs_error: head.abs_error + rest.abs_error,
            panels: head.panels + rest.panels,
        })
    } else {
        integrate(f, 0.0, 1.0, abs_tol, rel_tol)
    }
}

/// Per-pairing breakdown: integral over (0, 1), integral over the tail
/// (including its closed-form polynomial completion), and the analytic
/// correction sum (delta values count as corrections).
#[derive(Debug, Clone, Copy)]
pub struct PairingPieces {
    pub near: Complex64,
    pub tail: Complex64,
    pub correction: Complex64,
}

/// Value of a regularized pairing with its achieved error estimate.
#[derive(Debug, Clone, Copy)]
pub struct PairingResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub pieces: PairingPieces,
}

/// Smallest n >= 0 making the subtracted integrand absolutely integrable
/// on (0, 1): n = max(0, floor(-Re lambda)).
pub fn subtraction_order(lambda: Complex64) -> u32 {
    (-lambda.re).floor().max(0.0) as u32
}

/// Regularized pairing of a single basis term against phi.
pub fn pair_term(term: &QahdTerm, phi: &TestFunction, tol: f64) -> Result<PairingResult> {
    pair_term_with_order(term, phi, tol, None)
}

/// As pair_term, but with the subtraction order forced for the plus power
/// family. Any n with Re lambda > -n-1 yields the same analytic
/// continuation; the consistency of different n choices is a test hook.
pub(crate) fn pair_term_with_order(
    term: &QahdTerm,
    phi: &TestFunction,
    tol: f64,
    n_override: Option<u32>,
) -> Result<PairingResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(QahdError::Precondition(format!(
            "pairing tolerance must be positive and finite, got {tol}"
        )));
    }
    match *term {
        QahdTerm::DeltaDeriv { delta_order } => {
            let sign = if delta_order % 2 == 0 { 1.0 } else { -1.0 };
            let value = phi.deriv0(delta_order).scale(sign);
            Ok(PairingResult {
                value,
                abs_error_estimate: 0.0,
                pieces: PairingPieces { near: ZERO, tail: ZERO, correction: value },
            })
        }
        QahdTerm::XMinusLog { degree, log_power } => {
            let twin = xplus(degree, log_power)?;
            pair_term_with_order(&twin, &phi.reflect()?, tol, n_override)
        }
        QahdTerm::PfMinusLog { pole_order, log_power } => {
            let twin = pfplus(pole_order, log_power)?;
            pair_term_with_order(&twin, &phi.reflect()?, tol, n_override)
        }
        QahdTerm::XPlusLog { degree, log_power } => {
            pair_xplus(degree, log_power, phi, tol, n_override)
        }
        QahdTerm::PfPlusLog { pole_order, log_power } => {
            pair_pfplus(pole_order, log_power, phi, tol)
        }
    }
}

fn pair_xplus(
    lambda: Complex64,
    k: u32,
    phi: &TestFunction,
    tol: f64,
    n_override: Option<u32>,
) -> Result<PairingResult> {
    let n = n_override.unwrap_or_else(|| {
        let n_min = subtraction_order(lambda);
        // Keep the (0,1) integrand exponent at or above -1/2 so the
        // quadrature converges briskly; any admissible n is exact.
        if lambda.re + (n_min as f64) < -0.5 { n_min + 1 } else { n_min }
    });

    let near = integrate_near(
        |x| {
            pow_pos(x, lambda) * phi.taylor_remainder(x, n).scale(iter_pow(x.ln(), k))
        },
        phi,
        tol * 0.25,
        tol * 0.25,
    )?;

    let cutoff = phi.weighted_tail_cutoff(lambda.re, k, tol * 0.1)?;
    let tail = integrate(
        |x| pow_pos(x, lambda) * phi.value(x).scale(iter_pow(x.ln(), k)),
        1.0,
        cutoff,
        tol * 0.25,
        tol * 0.25,
    )?;

    let mut correction = ZERO;
    let k_front = if k % 2 == 0 { factorial(k) } else { -factorial(k) };
    for j in 0..n {
        let denom = iter_pow_c(lambda + (j + 1) as f64, k + 1);
        correction += phi.deriv0(j).scale(k_front / factorial(j)) / denom;
    }

    let value = near.value + tail.value + correction;
    Ok(PairingResult {
        value,
        abs_error_estimate: near.abs_error + tail.abs_error + tol * 0.1,
        pieces: PairingPieces { near: near.value, tail: tail.value, correction },
    })
}

fn pair_pfplus(n: u32, kappa: u32, phi: &TestFunction, tol: f64) -> Result<PairingResult> {
    let neg_n = -(n as f64);

    // On (0, 1) the Heaviside window makes the subtraction run through
    // order n-1, leaving an O(log^kappa) integrand.
    let near = integrate_near(
        |x| {
            pow_pos(x, Complex64::new(neg_n, 0.0))
                * phi.taylor_remainder(x, n).scale(iter_pow(x.ln(), kappa))
        },
        phi,
        tol * 0.25,
        tol * 0.25,
    )?;

    // On (1, infinity) only orders j <= n-2 stay subtracted. The test
    // function part is truncated at the certified cutoff; the polynomial
    // part continues with a closed-form tail.
    let low_taylor: Vec<Complex64> = (0..n.saturating_sub(1)).map(|j| phi.taylor_coeff(j)).collect();
    let cutoff = phi.weighted_tail_cutoff(neg_n, kappa, tol * 0.1)?;
    let tail = integrate(
        |x| {
            let mut poly = ZERO;
            for &tc in low_taylor.iter().rev() {
                poly = poly * x + tc;
            }
            pow_pos(x, Complex64::new(neg_n, 0.0))
                * (phi.value(x) - poly).scale(iter_pow(x.ln(), kappa))
        },
        1.0,
        cutoff,
        tol * 0.25,
        tol * 0.25,
    )?;
    let mut poly_tail = ZERO;
    for (j, &tc) in low_taylor.iter().enumerate() {
        poly_tail -= tc.scale(power_log_tail(j as f64 + neg_n, kappa, cutoff));
    }

    let value = near.value + tail.value + poly_tail;
    Ok(PairingResult {
        value,
        abs_error_estimate: near.abs_error + tail.abs_error + tol * 0.1,
        pieces: PairingPieces { near: near.value, tail: tail.value + poly_tail, correction: ZERO },
    })
}

/// Closed form of the integral of x^mu log^kappa x over (t, infinity)
/// for real mu <= -2.
fn power_log_tail(mu: f64, kappa: u32, t: f64) -> f64 {
    let ln_t = t.ln();
    let mut acc = 0.0;
    for r in 0..=kappa {
        acc += binom(kappa, r) * iter_pow(ln_t, kappa - r) * factorial(r)
            / iter_pow(-mu - 1.0, r + 1);
    }
    acc * t.powf(mu + 1.0)
}

/// Coefficient-weighted pairing of a full expression.
pub fn pair(expr: &QahdExpr, phi: &TestFunction, tol: f64) -> Result<PairingResult> {
    let mut value = ZERO;
    let mut err = 0.0;
    let mut pieces = PairingPieces { near: ZERO, tail: ZERO, correction: ZERO };
    for (term, coeff) in expr.terms() {
        let r = pair_term(term, phi, tol)?;
        value += coeff * r.value;
        err += coeff.norm() * r.abs_error_estimate;
        pieces.near += coeff * r.pieces.near;
        pieces.tail += coeff * r.pieces.tail;
        pieces.correction += coeff * r.pieces.correction;
    }
    Ok(PairingResult { value, abs_error_estimate: err, pieces })
}
