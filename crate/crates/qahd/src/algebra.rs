//! Exact dilatation algebra, scaling expansions, degree derivatives,
//! boundary-value expansions, and quasi-asymptotic extraction.

use num_complex::Complex64;

use crate::error::{QahdError, Result};
use crate::term::{
    canonicalize, degree_components, delta, pfminus, pfplus, xminus, xplus, QahdExpr, QahdTerm,
};

/// Exact binomial coefficient as f64, exact for the small arguments used
/// throughout (k stays below 10).
pub(crate) fn binom(k: u32, j: u32) -> f64 {
    if j > k {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..j {
        acc = acc * ((k - i) as f64) / ((i + 1) as f64);
    }
    acc.round()
}

/// Exact factorial as f64 for small arguments.
pub(crate) fn factorial(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, i| acc * i as f64)
}

/// x^j by iterated multiplication. Keeps the coefficient arithmetic
/// bit-reproducible between the library and the exactness tests.
pub(crate) fn iter_pow(x: f64, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, _| acc * x)
}

/// Iterated complex power, same reproducibility rationale.
pub(crate) fn iter_pow_c(z: Complex64, j: u32) -> Complex64 {
    (0..j).fold(Complex64::new(1.0, 0.0), |acc, _| acc * z)
}

/// a^lambda for a > 0 as exp(lambda * ln a) with the real logarithm, the
/// only continuous choice on the positive half-line.
pub(crate) fn pow_pos(a: f64, lambda: Complex64) -> Complex64 {
    let ln_a = a.ln();
    Complex64::new(lambda.re * ln_a, lambda.im * ln_a).exp()
}

/// Coefficient of the delta companion injected when the plus-side finite
/// part of pole order n and log power k is dilated.
pub(crate) fn pf_delta_coefficient_plus(n: u32, k: u32) -> f64 {
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign / (((k + 1) as f64) * factorial(n - 1))
}

/// Mirror coefficient for the minus-side finite part. Reflection removes
/// the alternating sign: delta^(n-1)(-x) = (-1)^(n-1) delta^(n-1)(x)
/// cancels it exactly. Confirmed against a multiprecision pairing oracle
/// on both sides of the scaling identity.
pub(crate) fn pf_delta_coefficient_minus(n: u32, k: u32) -> f64 {
    1.0 / (((k + 1) as f64) * factorial(n - 1))
}

/// The exact expression of f(a x).
///
/// Per family, with L = ln a:
/// * xplus(lambda, k)(ax) = a^lambda * sum_j C(k,j) L^j xplus(lambda, k-j),
///   and the same for xminus.
/// * pfplus(n, k)(ax) = a^-n * [ sum_r C(k,r) L^r pfplus(n, k-r)
///   + L^(k+1) * (-1)^(n-1) / ((k+1)(n-1)!) * delta^(n-1) ]; the minus
///   family mirrors with the sign-free delta coefficient.
/// * delta(m)(ax) = a^(-m-1) delta(m).
pub fn dilate(expr: &QahdExpr, a: f64) -> Result<QahdExpr> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(QahdError::NonPositiveScale(a));
    }
    let ln_a = a.ln();
    let mut raw: Vec<(QahdTerm, Complex64)> = Vec::new();
    for &(term, coeff) in expr.terms() {
        match term {
            QahdTerm::XPlusLog { degree, log_power } | QahdTerm::XMinusLog { degree, log_power } => {
                let a_pow = pow_pos(a, degree);
                for j in 0..=log_power {
                    let piece = a_pow.scale(binom(log_power, j) * iter_pow(ln_a, j));
                    let new_term = match term {
                        QahdTerm::XPlusLog { .. } => xplus(degree, log_power - j)?,
                        _ => xminus(degree, log_power - j)?,
                    };
                    raw.push((new_term, coeff * piece));
                }
            }
            QahdTerm::PfPlusLog { pole_order: n, log_power: k }
            | QahdTerm::PfMinusLog { pole_order: n, log_power: k } => {
                let a_pow = a.powi(-(n as i32));
                let plus_side = matches!(term, QahdTerm::PfPlusLog { .. });
                for r in 0..=k {
                    let w = a_pow * (binom(k, r) * iter_pow(ln_a, r));
                    let new_term = if plus_side { pfplus(n, k - r)? } else { pfminus(n, k - r)? };
                    raw.push((new_term, coeff * Complex64::new(w, 0.0)));
                }
                let c_delta = if plus_side {
                    pf_delta_coefficient_plus(n, k)
                } else {
                    pf_delta_coefficient_minus(n, k)
                };
                let w = a_pow * (c_delta * iter_pow(ln_a, k + 1));
                raw.push((delta(n - 1), coeff * Complex64::new(w, 0.0)));
            }
            QahdTerm::DeltaDeriv { delta_order: m } => {
                let w = a.powi(-(m as i32) - 1);
                raw.push((term, coeff * Complex64::new(w, 0.0)));
            }
        }
    }
    canonicalize(raw)
}

/// Degree, order, and ordered companion list of one degree component:
/// dilate(f, a) = a^lambda f + sum_{r=1..order} a^lambda ln^r a *
/// companions[r-1] for every a > 0, with the companion coefficients
/// independent of a.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingExpansion {
    pub degree: Complex64,
    pub order: u32,
    pub companions: Vec<QahdExpr>,
}

/// Companion structure of every degree component, read off symbolically
/// from the closed dilation forms.
pub fn scaling_expansion(expr: &QahdExpr) -> Vec<ScalingExpansion> {
    let mut out = Vec::new();
    for (comp_degree, component) in degree_components(expr) {
        let order = component
            .terms()
            .iter()
            .map(|(t, _)| t.order())
            .max()
            .unwrap_or(0);
        let mut companions: Vec<Vec<(QahdTerm, Complex64)>> =
            (0..order).map(|_| Vec::new()).collect();
        for &(term, coeff) in component.terms() {
            match term {
                QahdTerm::XPlusLog { degree, log_power }
                | QahdTerm::XMinusLog { degree, log_power } => {
                    for r in 1..=log_power {
                        let w = binom(log_power, r);
                        let new_term = match term {
                            QahdTerm::XPlusLog { .. } => xplus(degree, log_power - r),
                            _ => xminus(degree, log_power - r),
                        }
                        .expect("degree already validated");
                        companions[(r - 1) as usize].push((new_term, coeff.scale(w)));
                    }
                }
                QahdTerm::PfPlusLog { pole_order: n, log_power: k }
                | QahdTerm::PfMinusLog { pole_order: n, log_power: k } => {
                    let plus_side = matches!(term, QahdTerm::PfPlusLog { .. });
                    for r in 1..=k {
                        let w = binom(k, r);
                        let new_term = if plus_side {
                            pfplus(n, k - r).expect("pole order already validated")
                        } else {
                            pfminus(n, k - r).expect("pole order already validated")
                        };
                        companions[(r - 1) as usize].push((new_term, coeff.scale(w)));
                    }
                    let c_delta = if plus_side {
                        pf_delta_coefficient_plus(n, k)
                    } else {
                        pf_delta_coefficient_minus(n, k)
                    };
                    companions[k as usize].push((delta(n - 1), coeff.scale(c_delta)));
                }
                QahdTerm::DeltaDeriv { .. } => {}
            }
        }
        out.push(ScalingExpansion {
            degree: comp_degree,
            order,
            companions: companions
                .into_iter()
                .map(|raw| canonicalize(raw).expect("companion terms are valid"))
                .collect(),
        });
    }
    out
}

/// Derivative with respect to the degree parameter: raises the log power
/// of a power-log term by one. The finite-part families are not values of
/// the degree family at integer points, so the derivative is undefined
/// there, and delta is degree-rigid.
pub fn d_dlambda(term: &QahdTerm) -> Result<QahdTerm> {
    match *term {
        QahdTerm::XPlusLog { degree, log_power } => xplus(degree, log_power + 1),
        QahdTerm::XMinusLog { degree, log_power } => xminus(degree, log_power + 1),
        _ => Err(QahdError::NotDifferentiableInLambda(term.family_name())),
    }
}

/// Which boundary of the real axis a boundary-value distribution comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySign {
    Plus,
    Minus,
}

/// Expansion of (x +- i0)^lambda log^k (x +- i0) in the canonical basis.
///
/// For lambda away from the negative integers,
/// (x +- i0)^lambda log^k = xplus(lambda, k)
/// + sum_j C(k,j) (+-i pi)^j e^(+-i pi lambda) xminus(lambda, k - j),
/// obtained by k-fold degree differentiation of the k = 0 identity.
///
/// At lambda = -n exactly (and k = 0 only):
/// (x +- i0)^-n = P(x^-n) -+ i pi (-1)^(n-1) delta^(n-1) / (n-1)!, where
/// the symmetric principal value P(x^-n) is stored as
/// pfplus(n, 0) + (-1)^n pfminus(n, 0).
pub fn expand_i0(sign: BoundarySign, lambda: Complex64, k: u32) -> Result<QahdExpr> {
    let exact_negative_integer =
        lambda.im == 0.0 && lambda.re == lambda.re.round() && lambda.re <= -1.0;
    if exact_negative_integer {
        if k >= 1 {
            return Err(QahdError::Unsupported(format!(
                "(x+-i0)^{} log^{k}(x+-i0) is only defined through degree \
                 differentiation away from negative integers",
                lambda.re
            )));
        }
        let n = (-lambda.re) as u32;
        let pf_minus_sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let delta_mag = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 } / factorial(n - 1);
        let delta_coeff = match sign {
            BoundarySign::Plus => Complex64::new(0.0, -std::f64::consts::PI * delta_mag),
            BoundarySign::Minus => Complex64::new(0.0, std::f64::consts::PI * delta_mag),
        };
        return canonicalize(vec![
            (pfplus(n, 0)?, Complex64::new(1.0, 0.0)),
            (pfminus(n, 0)?, Complex64::new(pf_minus_sign, 0.0)),
            (delta(n - 1), delta_coeff),
        ]);
    }

    let pi = std::f64::consts::PI;
    let i_pi = match sign {
        BoundarySign::Plus => Complex64::new(0.0, pi),
        BoundarySign::Minus => Complex64::new(0.0, -pi),
    };
    // e^(+-i pi lambda)
    let phase = (i_pi * lambda).exp();
    let mut raw = vec![(xplus(lambda, k)?, Complex64::new(1.0, 0.0))];
    for j in 0..=k {
        let coeff = phase * iter_pow_c(i_pi, j).scale(binom(k, j));
        raw.push((xminus(lambda, k - j)?, coeff));
    }
    canonicalize(raw)
}

/// Where a quasi-asymptotic limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitPoint {
    Zero,
    Infinity,
}

/// Quasi-asymptotic data of a single degree component.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiAsymptotics {
    /// Degree of the comparison scale a^degree ln^log_power a.
    pub automodel_degree: Complex64,
    pub automodel_log_power: u32,
    /// The homogeneous limit distribution.
    pub limit: QahdExpr,
}

/// Quasi-asymptotic limit of a single degree-lambda component of order k.
///
/// At infinity the component behaves like a^lambda ln^k a times the last
/// companion f_0; at zero like a^-lambda ln^k a times (-1)^k f_0. An
/// order-zero component is homogeneous and is reported as its own limit
/// with log power zero rather than failing.
pub fn quasi_asymptotics(expr: &QahdExpr, at: LimitPoint) -> Result<QuasiAsymptotics> {
    let components = degree_components(expr);
    if components.len() != 1 {
        return Err(QahdError::Precondition(format!(
            "quasi-asymptotics needs a single degree component, found {}",
            components.len()
        )));
    }
    let lambda = components[0].0;
    let expansion = scaling_expansion(expr).pop().expect("one component");
    let k = expansion.order;
    if k == 0 {
        return Ok(QuasiAsymptotics {
            automodel_degree: match at {
                LimitPoint::Infinity => lambda,
                LimitPoint::Zero => -lambda,
            },
            automodel_log_power: 0,
            limit: expr.clone(),
        });
    }
    let f0 = expansion.companions.last().expect("order >= 1").clone();
    match at {
        LimitPoint::Infinity => Ok(QuasiAsymptotics {
            automodel_degree: lambda,
            automodel_log_power: k,
            limit: f0,
        }),
        LimitPoint::Zero => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Ok(QuasiAsymptotics {
                automodel_degree: -lambda,
                automodel_log_power: k,
                limit: f0.scale(Complex64::new(sign, 0.0)),
            })
        }
    }
}
