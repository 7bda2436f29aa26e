//! Fourier transforms of the model families and the associated
//! homogeneous gamma function table.
//!
//! Convention: F[phi](xi) = integral of phi(x) e^(i xi x) dx. Setting
//! xi = i m turns the transform of a plus-family term into a Laplace
//! moment <f, e^(-mx)>, which is how the log-coefficient linear systems
//! are assembled: substitute xi = i, 2i, ... and solve for the
//! coefficients of the frequency basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{binom, iter_pow, iter_pow_c, pow_pos};
use crate::error::{QahdError, Result};
use crate::freq::{canonicalize_freq, eval_freq, FreqExpr, FreqTerm};
use crate::gamma::loggamma_derivs;
use crate::pairing::pair_term;
use crate::term::{negative_integer_distance, pfplus, QahdExpr, QahdTerm};
use crate::testfn::TestFunction;
use crate::tol::{COND_MAX, POLE_EPS};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Quadrature tolerance for solver right-hand sides; tight enough that
/// table accuracy is limited by the linear solve, not the integrals.
const MOMENT_TOL: f64 = 1e-11;

/// integral of x^lambda log^k x e^(-mx) over (0, infinity), i.e.
/// d^k/dlambda^k [Gamma(lambda+1) m^(-lambda-1)], by the product rule.
pub fn laplace_moment(lambda: Complex64, k: u32, m: f64) -> Result<Complex64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(QahdError::Precondition(format!(
            "laplace moment rate must be positive, got {m}"
        )));
    }
    if negative_integer_distance(lambda) <= POLE_EPS {
        return Err(QahdError::PoleArgument { re: lambda.re, im: lambda.im });
    }
    let derivs = loggamma_derivs(lambda + 1.0, k)?;
    let neg_ln_m = -m.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, d) in derivs.iter().enumerate() {
        acc += d.scale(binom(k, j as u32) * iter_pow(neg_ln_m, k - j as u32));
    }
    Ok(acc * pow_pos(m, -lambda - 1.0))
}

/// Regularized pairing of P(x_+^-n log^k x_+) against e^(-mx).
pub fn pf_laplace_moment(n: u32, k: u32, m: f64) -> Result<Complex64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(QahdError::Precondition(format!(
            "laplace moment rate must be positive, got {m}"
        )));
    }
    let term = pfplus(n, k)?;
    let phi = TestFunction::exp_decay(m)?;
    Ok(pair_term(&term, &phi, MOMENT_TOL)?.value)
}

/// Which family's frequency coefficients to solve for.
#[derive(Debug, Clone, Copy)]
pub enum FtCoeffFamily {
    /// x_+^lambda log^k: coefficients A_0..A_k of
    /// (xi+i0)^(-lambda-1) log^p(xi+i0).
    XPlus(Complex64),
    /// P(x_+^-n log^k): coefficients B_0..B_(k+1) of
    /// xi^(n-1) log^p(xi+i0).
    PfPlus(u32),
}

/// Solved coefficient list with solve diagnostics.
#[derive(Debug, Clone)]
pub struct FtSolve {
    pub coeffs: Vec<Complex64>,
    /// Relative l2 residual of the square solve.
    pub residual: f64,
    /// Singular value ratio of the system matrix.
    pub condition: f64,
}

/// Frequency basis term with index p for the given family.
fn basis_term(family: FtCoeffFamily, p: u32) -> Result<FreqTerm> {
    Ok(match family {
        FtCoeffFamily::XPlus(lambda) => {
            FreqTerm::XiPlusI0PowLog { exponent: -lambda - 1.0, log_power: p }
        }
        FtCoeffFamily::PfPlus(n) => {
            if n == 0 {
                return Err(QahdError::Precondition("finite-part order must be >= 1".into()));
            }
            FreqTerm::XiPolyLogPlus { poly_power: n - 1, log_power: p }
        }
    })
}

/// Solve for the frequency-domain log coefficients of one family by
/// substituting xi = i m for m = 1, 2, ... and matching Laplace moments.
pub fn solve_ft_coeffs(family: FtCoeffFamily, k: u32) -> Result<FtSolve> {
    let count = match family {
        FtCoeffFamily::XPlus(_) => k + 1,
        FtCoeffFamily::PfPlus(_) => k + 2,
    } as usize;
    if count > 8 {
        return Err(QahdError::Precondition(format!(
            "coefficient system of size {count} exceeds the supported maximum 8"
        )));
    }

    let mut basis = Vec::with_capacity(count);
    for p in 0..count {
        let term = basis_term(family, p as u32)?;
        basis.push(canonicalize_freq(vec![(term, Complex64::new(1.0, 0.0))])?);
    }

    let mut rhs = Vec::with_capacity(count);
    for row in 0..count {
        let m = (row + 1) as f64;
        let value = match family {
            FtCoeffFamily::XPlus(lambda) => laplace_moment(lambda, k, m)?,
            FtCoeffFamily::PfPlus(n) => pf_laplace_moment(n, k, m)?,
        };
        rhs.push(value);
    }

    let matrix = DMatrix::<Complex64>::from_fn(count, count, |row, col| {
        let xi = Complex64::new(0.0, (row + 1) as f64);
        eval_freq(&basis[col], xi).expect("imaginary frequencies are admissible")
    });
    let b = DVector::<Complex64>::from_vec(rhs);

    let sv = matrix.clone().svd(false, false).singular_values;
    let (s_max, s_min) = (sv.max(), sv.min());
    let condition = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
    if condition > COND_MAX {
        return Err(QahdError::IllConditioned { cond: condition });
    }

    let x = matrix
        .clone()
        .lu()
        .solve(&b)
        .ok_or(QahdError::IllConditioned { cond: condition })?;
    let residual = (&matrix * &x - &b).norm() / b.norm().max(f64::MIN_POSITIVE);

    Ok(FtSolve { coeffs: x.iter().copied().collect(), residual, condition })
}

/// Closed-form A coefficients for x_+^lambda log^k: with
/// g(lambda) = i^(lambda+1) Gamma(lambda+1),
/// A_p = (-1)^p C(k, p) g^(k-p)(lambda), the lambda-derivatives of g
/// expanding through the gamma derivatives.
pub fn closed_xplus_coeffs(lambda: Complex64, k: u32) -> Result<Vec<Complex64>> {
    if negative_integer_distance(lambda) <= POLE_EPS {
        return Err(QahdError::PoleArgument { re: lambda.re, im: lambda.im });
    }
    let gamma_derivs = loggamma_derivs(lambda + 1.0, k)?;
    let half_i_pi = I.scale(std::f64::consts::PI / 2.0);
    let phase = (half_i_pi * (lambda + 1.0)).exp();
    let mut g_derivs = Vec::with_capacity(k as usize + 1);
    for m in 0..=k {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..=m {
            acc += iter_pow_c(half_i_pi, r)
                .scale(binom(m, r))
                * gamma_derivs[(m - r) as usize];
        }
        g_derivs.push(phase * acc);
    }
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    for p in 0..=k {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(g_derivs[(k - p) as usize].scale(sign * binom(k, p)));
    }
    Ok(coeffs)
}

/// A coefficients through the route the transform uses: closed form for
/// k = 0, the substitution solver for k >= 1.
fn xplus_coeffs(lambda: Complex64, k: u32) -> Result<Vec<Complex64>> {
    if k == 0 {
        closed_xplus_coeffs(lambda, 0)
    } else {
        Ok(solve_ft_coeffs(FtCoeffFamily::XPlus(lambda), k)?.coeffs)
    }
}

/// Distributional Fourier transform, term by term.
pub fn fourier(expr: &QahdExpr) -> Result<FreqExpr> {
    let i_pi = I.scale(std::f64::consts::PI);
    let mut out: Vec<(FreqTerm, Complex64)> = Vec::new();
    for (term, coeff) in expr.terms() {
        match *term {
            QahdTerm::XPlusLog { degree, log_power } => {
                let a = xplus_coeffs(degree, log_power)?;
                let mu = -degree - 1.0;
                for (p, ap) in a.iter().enumerate() {
                    out.push((
                        FreqTerm::XiPlusI0PowLog { exponent: mu, log_power: p as u32 },
                        coeff * ap,
                    ));
                }
            }
            QahdTerm::XMinusLog { degree, log_power } => {
                // F[f(-x)](xi) = F[f](-xi), rewritten with
                // (-xi+i0)^mu = e^(i pi mu) (xi-i0)^mu and
                // log(-xi+i0) = i pi + log(xi-i0).
                let a = xplus_coeffs(degree, log_power)?;
                let mu = -degree - 1.0;
                let phase = (i_pi * mu).exp();
                for (p, ap) in a.iter().enumerate() {
                    for r in 0..=(p as u32) {
                        let w = iter_pow_c(i_pi, p as u32 - r).scale(binom(p as u32, r));
                        out.push((
                            FreqTerm::XiMinusI0PowLog { exponent: mu, log_power: r },
                            coeff * ap * phase * w,
                        ));
                    }
                }
            }
            QahdTerm::PfPlusLog { pole_order, log_power } => {
                let b = solve_ft_coeffs(FtCoeffFamily::PfPlus(pole_order), log_power)?.coeffs;
                for (p, bp) in b.iter().enumerate() {
                    out.push((
                        FreqTerm::XiPolyLogPlus {
                            poly_power: pole_order - 1,
                            log_power: p as u32,
                        },
                        coeff * bp,
                    ));
                }
            }
            QahdTerm::PfMinusLog { pole_order, log_power } => {
                // Reflection as above; xi^(n-1) log^r(xi-i0) is exactly
                // the integer-exponent minus-family symbol on the axis.
                let b = solve_ft_coeffs(FtCoeffFamily::PfPlus(pole_order), log_power)?.coeffs;
                let sign = if (pole_order - 1) % 2 == 0 { 1.0 } else { -1.0 };
                let mu = Complex64::new((pole_order - 1) as f64, 0.0);
                for (j, bj) in b.iter().enumerate() {
                    for r in 0..=(j as u32) {
                        let w = iter_pow_c(i_pi, j as u32 - r).scale(sign * binom(j as u32, r));
                        out.push((
                            FreqTerm::XiMinusI0PowLog { exponent: mu, log_power: r },
                            coeff * bj * w,
                        ));
                    }
                }
            }
            QahdTerm::DeltaDeriv { delta_order } => {
                out.push((
                    FreqTerm::XiPolyLogPlus { poly_power: delta_order, log_power: 0 },
                    coeff * iter_pow_c(-I, delta_order),
                ));
            }
        }
    }
    canonicalize_freq(out)
}

/// One entry of the associated homogeneous gamma table.
#[derive(Debug, Clone, Copy)]
pub struct GammaValue {
    pub j: u32,
    pub order: u32,
    pub argument: Complex64,
    pub value: Complex64,
}

/// Gamma_j(argument; k): i^(-lambda-1) (log i)^j A_j at noninteger
/// argument lambda+1, and i^(n-1) (log i)^j times the j-th finite-part
/// coefficient at argument -n+1, with log i = i pi/2.
pub fn gamma_assoc(j: u32, argument: Complex64, k: u32) -> Result<GammaValue> {
    if j > k {
        return Err(QahdError::Precondition(format!(
            "gamma table index {j} exceeds the order {k}"
        )));
    }
    let half_i_pi = I.scale(std::f64::consts::PI / 2.0);
    let rounded = argument.re.round();
    let integer_argument =
        rounded <= 0.0 && (argument - Complex64::new(rounded, 0.0)).norm() <= POLE_EPS;

    let value = if integer_argument {
        if k == 0 {
            // Gamma itself has a pole here; only the associated entries
            // of order >= 1 exist.
            return Err(QahdError::PoleArgument { re: argument.re, im: argument.im });
        }
        let n = (1.0 - rounded) as u32;
        let b = solve_ft_coeffs(FtCoeffFamily::PfPlus(n), k - 1)?.coeffs;
        // The table is stated for the negated finite-part coefficients.
        iter_pow_c(I, n - 1) * iter_pow_c(half_i_pi, j) * (-b[j as usize])
    } else {
        let lambda = argument - 1.0;
        let a = closed_xplus_coeffs(lambda, k)?;
        (-argument * half_i_pi).exp() * iter_pow_c(half_i_pi, j) * a[j as usize]
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(QahdError::Precondition("gamma table value overflowed".into()));
    }
    Ok(GammaValue { j, order: k, argument, value })
}
