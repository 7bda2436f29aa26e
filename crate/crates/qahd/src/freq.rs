//! Frequency-domain symbols for the Fourier transforms of the model
//! families, with boundary-value branch rules.
//!
//! Three term shapes occur: (xi+i0)^mu log^j(xi+i0), the mirrored
//! (xi-i0)^mu log^j(xi-i0), and polynomial terms xi^e log^j(xi+i0) with
//! e a nonnegative integer. All logs and powers of (xi+i0) use the
//! principal branch continuous from the upper half-plane; the (xi-i0)
//! family is defined on the real axis only, by the branch continuous
//! from below.

use num_complex::Complex64;

use crate::algebra::{binom, iter_pow_c};
use crate::error::{QahdError, Result};
use crate::term::{canonicalize, DegreeOrder, QahdExpr, QahdTerm};
use crate::tol::{DROP_EPS, MERGE_EPS};

/// One frequency-domain basis symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreqTerm {
    /// (xi+i0)^exponent log^log_power(xi+i0).
    XiPlusI0PowLog { exponent: Complex64, log_power: u32 },
    /// (xi-i0)^exponent log^log_power(xi-i0), real axis only.
    XiMinusI0PowLog { exponent: Complex64, log_power: u32 },
    /// xi^poly_power log^log_power(xi+i0), polynomial power at integer
    /// degree.
    XiPolyLogPlus { poly_power: u32, log_power: u32 },
}

impl FreqTerm {
    /// Homogeneity degree carried by the symbol.
    pub fn degree(&self) -> Complex64 {
        match *self {
            FreqTerm::XiPlusI0PowLog { exponent, .. }
            | FreqTerm::XiMinusI0PowLog { exponent, .. } => exponent,
            FreqTerm::XiPolyLogPlus { poly_power, .. } => {
                Complex64::new(poly_power as f64, 0.0)
            }
        }
    }

    pub fn log_power(&self) -> u32 {
        match *self {
            FreqTerm::XiPlusI0PowLog { log_power, .. }
            | FreqTerm::XiMinusI0PowLog { log_power, .. }
            | FreqTerm::XiPolyLogPlus { log_power, .. } => log_power,
        }
    }

    fn family_rank(&self) -> u8 {
        match self {
            FreqTerm::XiPlusI0PowLog { .. } => 0,
            FreqTerm::XiMinusI0PowLog { .. } => 1,
            FreqTerm::XiPolyLogPlus { .. } => 2,
        }
    }

    fn merges_with(&self, other: &FreqTerm) -> bool {
        if self.family_rank() != other.family_rank() || self.log_power() != other.log_power() {
            return false;
        }
        match (self, other) {
            (FreqTerm::XiPolyLogPlus { poly_power: a, .. }, FreqTerm::XiPolyLogPlus { poly_power: b, .. }) => a == b,
            _ => (self.degree() - other.degree()).norm() <= MERGE_EPS,
        }
    }
}

/// Canonical linear combination of frequency symbols.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FreqExpr {
    terms: Vec<(FreqTerm, Complex64)>,
}

/// Merge, drop negligible coefficients, and sort, mirroring the
/// x-domain canonical form.
pub fn canonicalize_freq(raw: Vec<(FreqTerm, Complex64)>) -> Result<FreqExpr> {
    for (t, coeff) in &raw {
        let d = t.degree();
        if !d.re.is_finite() || !d.im.is_finite() || !coeff.re.is_finite() || !coeff.im.is_finite()
        {
            return Err(QahdError::InvalidTerm(
                "non-finite frequency exponent or coefficient".into(),
            ));
        }
    }
    let mut merged: Vec<(FreqTerm, Complex64)> = Vec::new();
    for (t, coeff) in raw {
        if let Some(slot) = merged.iter_mut().find(|(u, _)| u.merges_with(&t)) {
            slot.1 += coeff;
        } else {
            merged.push((t, coeff));
        }
    }
    merged.retain(|(_, coeff)| coeff.norm() > DROP_EPS);
    merged.sort_by(|(a, _), (b, _)| {
        let da = a.degree();
        let db = b.degree();
        (a.family_rank(), da.re, da.im, a.log_power())
            .partial_cmp(&(b.family_rank(), db.re, db.im, b.log_power()))
            .expect("finite keys")
    });
    Ok(FreqExpr { terms: merged })
}

impl FreqExpr {
    pub fn zero() -> Self {
        FreqExpr { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(FreqTerm, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Principal log continuous from the upper half-plane: on the negative
/// real axis ln|xi| + i pi.
fn log_plus(xi: Complex64) -> Complex64 {
    if xi.im == 0.0 {
        // Pin the branch on the axis regardless of signed-zero artifacts.
        Complex64::new(xi.re, 0.0).ln()
    } else {
        xi.ln()
    }
}

/// Branch continuous from the lower half-plane, real axis only:
/// ln|xi| - i pi on the negative real axis.
fn log_minus(xi_re: f64) -> Complex64 {
    if xi_re < 0.0 {
        Complex64::new((-xi_re).ln(), -std::f64::consts::PI)
    } else {
        Complex64::new(xi_re.ln(), 0.0)
    }
}

/// Evaluate a frequency expression at xi in the closed upper half-plane,
/// xi != 0. The (xi-i0) family is defined on the real axis only.
pub fn eval_freq(expr: &FreqExpr, xi: Complex64) -> Result<Complex64> {
    if !xi.re.is_finite() || !xi.im.is_finite() {
        return Err(QahdError::Precondition("non-finite frequency".into()));
    }
    if xi.re == 0.0 && xi.im == 0.0 {
        return Err(QahdError::ZeroFrequency);
    }
    if xi.im < 0.0 {
        return Err(QahdError::BranchUnsupported(format!(
            "frequency {xi} lies in the open lower half-plane"
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (term, coeff) in &expr.terms {
        let v = match *term {
            FreqTerm::XiPlusI0PowLog { exponent, log_power } => {
                let l = log_plus(xi);
                (exponent * l).exp() * iter_pow_c(l, log_power)
            }
            FreqTerm::XiMinusI0PowLog { exponent, log_power } => {
                if xi.im != 0.0 {
                    return Err(QahdError::BranchUnsupported(format!(
                        "(xi-i0) symbols are defined on the real axis only, got {xi}"
                    )));
                }
                let l = log_minus(xi.re);
                (exponent * l).exp() * iter_pow_c(l, log_power)
            }
            FreqTerm::XiPolyLogPlus { poly_power, log_power } => {
                xi.powu(poly_power) * iter_pow_c(log_plus(xi), log_power)
            }
        };
        acc += coeff * v;
    }
    Ok(acc)
}

/// Degree/order classification in the frequency basis: group by degree,
/// where the order of a group is its largest log power.
pub fn freq_degree_order(expr: &FreqExpr) -> Vec<DegreeOrder> {
    let mut out: Vec<DegreeOrder> = Vec::new();
    for (term, _) in &expr.terms {
        let d = term.degree();
        let k = term.log_power();
        if let Some(slot) = out
            .iter_mut()
            .find(|g| (g.degree - d).norm() <= MERGE_EPS)
        {
            slot.order = slot.order.max(k);
        } else {
            out.push(DegreeOrder { degree: d, order: k });
        }
    }
    out.sort_by(|a, b| {
        (a.degree.re, a.degree.im)
            .partial_cmp(&(b.degree.re, b.degree.im))
            .expect("finite degrees")
    });
    out
}

/// Reinterpret a frequency expression as an x-domain distribution in the
/// frequency variable, expanding every boundary value into the model
/// families. This is what lets the pairing module regularize frequency
/// integrals with singularities at 0.
pub fn freq_to_expr(expr: &FreqExpr) -> Result<QahdExpr> {
    use crate::algebra::{expand_i0, BoundarySign};
    let mut out: Vec<(QahdTerm, Complex64)> = Vec::new();
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);
    for (term, coeff) in &expr.terms {
        match *term {
            FreqTerm::XiPlusI0PowLog { exponent, log_power } => {
                let expanded = expand_i0(BoundarySign::Plus, exponent, log_power)?;
                for (t, c) in expanded.terms() {
                    out.push((t.clone(), coeff * c));
                }
            }
            FreqTerm::XiMinusI0PowLog { exponent, log_power } => {
                let expanded = expand_i0(BoundarySign::Minus, exponent, log_power)?;
                for (t, c) in expanded.terms() {
                    out.push((t.clone(), coeff * c));
                }
            }
            FreqTerm::XiPolyLogPlus { poly_power, log_power } => {
                // xi^e log^j(xi+i0) = x_+^e log^j x
                //   + (-1)^e sum_r C(j,r) (i pi)^(j-r) x_-^e log^r x.
                let e = Complex64::new(poly_power as f64, 0.0);
                out.push((crate::term::xplus(e, log_power)?, *coeff));
                let sign = if poly_power % 2 == 0 { 1.0 } else { -1.0 };
                for r in 0..=log_power {
                    let w = iter_pow_c(i_pi, log_power - r).scale(binom(log_power, r) * sign);
                    out.push((crate::term::xminus(e, r)?, coeff * w));
                }
            }
        }
    }
    canonicalize(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(term: FreqTerm) -> FreqExpr {
        canonicalize_freq(vec![(term, c(1.0, 0.0))]).unwrap()
    }

    fn assert_close(got: Complex64, want: Complex64, tol: f64) {
        assert!((got - want).norm() <= tol, "got {got}, want {want}");
    }

    #[test]
    fn plus_branch_on_the_negative_axis() {
        // (xi+i0)^0.5 at xi = -1 is e^(i pi/2) = i.
        let e = single(FreqTerm::XiPlusI0PowLog { exponent: c(0.5, 0.0), log_power: 0 });
        assert_close(eval_freq(&e, c(-1.0, 0.0)).unwrap(), c(0.0, 1.0), 1e-15);
    }

    #[test]
    fn plus_branch_at_imaginary_frequency() {
        // (xi+i0)^(-1.5) at xi = i m is m^(-1.5) e^(-3 i pi/4).
        let e = single(FreqTerm::XiPlusI0PowLog { exponent: c(-1.5, 0.0), log_power: 0 });
        let m = 2.0f64;
        let want = Complex64::from_polar(m.powf(-1.5), -0.75 * std::f64::consts::PI);
        assert_close(eval_freq(&e, c(0.0, m)).unwrap(), want, 1e-15);
    }

    #[test]
    fn log_branch_on_the_negative_axis() {
        let e = single(FreqTerm::XiPlusI0PowLog { exponent: c(0.0, 0.0), log_power: 1 });
        assert_close(
            eval_freq(&e, c(-2.0, 0.0)).unwrap(),
            c(2.0f64.ln(), std::f64::consts::PI),
            1e-15,
        );
    }

    #[test]
    fn minus_family_conjugate_branch_on_axis() {
        let e = single(FreqTerm::XiMinusI0PowLog { exponent: c(0.5, 0.0), log_power: 0 });
        // (xi-i0)^0.5 at xi = -1 is e^(-i pi/2) = -i.
        assert_close(eval_freq(&e, c(-1.0, 0.0)).unwrap(), c(0.0, -1.0), 1e-15);
        // Off the axis the symbol is undefined.
        assert!(matches!(
            eval_freq(&e, c(-1.0, 0.5)),
            Err(QahdError::BranchUnsupported(_))
        ));
    }

    #[test]
    fn zero_and_lower_half_plane_are_rejected() {
        let e = single(FreqTerm::XiPolyLogPlus { poly_power: 1, log_power: 0 });
        assert!(matches!(eval_freq(&e, c(0.0, 0.0)), Err(QahdError::ZeroFrequency)));
        assert!(matches!(
            eval_freq(&e, c(1.0, -0.1)),
            Err(QahdError::BranchUnsupported(_))
        ));
    }

    #[test]
    fn polynomial_symbol_with_log() {
        let e = single(FreqTerm::XiPolyLogPlus { poly_power: 2, log_power: 1 });
        let xi = c(-3.0, 0.0);
        let want = c(9.0, 0.0) * c(3.0f64.ln(), std::f64::consts::PI);
        assert_close(eval_freq(&e, xi).unwrap(), want, 1e-13);
    }

    #[test]
    fn merging_respects_family_and_log_power() {
        let t0 = FreqTerm::XiPlusI0PowLog { exponent: c(-1.5, 0.0), log_power: 0 };
        let t0b = FreqTerm::XiPlusI0PowLog { exponent: c(-1.5, 1e-13), log_power: 0 };
        let t1 = FreqTerm::XiPlusI0PowLog { exponent: c(-1.5, 0.0), log_power: 1 };
        let tm = FreqTerm::XiMinusI0PowLog { exponent: c(-1.5, 0.0), log_power: 0 };
        let e = canonicalize_freq(vec![
            (t0, c(1.0, 0.0)),
            (t0b, c(2.0, 0.0)),
            (t1, c(1.0, 0.0)),
            (tm, c(1.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(e.len(), 3);
        assert_close(e.terms()[0].1, c(3.0, 0.0), 1e-15);
    }

    #[test]
    fn cancellation_drops_terms() {
        let t = FreqTerm::XiPolyLogPlus { poly_power: 0, log_power: 0 };
        let e = canonicalize_freq(vec![(t, c(1.0, 0.0)), (t, c(-1.0, 0.0))]).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn degree_order_classification() {
        let e = canonicalize_freq(vec![
            (FreqTerm::XiPlusI0PowLog { exponent: c(-1.5, 0.0), log_power: 0 }, c(1.0, 0.0)),
            (FreqTerm::XiPlusI0PowLog { exponent: c(-1.5, 0.0), log_power: 2 }, c(1.0, 0.0)),
            (FreqTerm::XiPolyLogPlus { poly_power: 1, log_power: 1 }, c(1.0, 0.0)),
        ])
        .unwrap();
        let classes = freq_degree_order(&e);
        assert_eq!(classes.len(), 2);
        assert_close(classes[0].degree, c(-1.5, 0.0), 0.0);
        assert_eq!(classes[0].order, 2);
        assert_close(classes[1].degree, c(1.0, 0.0), 0.0);
        assert_eq!(classes[1].order, 1);
    }

    #[test]
    fn poly_symbol_expands_to_both_sides() {
        // xi as a distribution is x_+ - x_-.
        let e = single(FreqTerm::XiPolyLogPlus { poly_power: 1, log_power: 0 });
        let x = freq_to_expr(&e).unwrap();
        let plus = crate::term::xplus(c(1.0, 0.0), 0).unwrap();
        let minus = crate::term::xminus(c(1.0, 0.0), 0).unwrap();
        assert_close(x.coefficient(&plus), c(1.0, 0.0), 1e-15);
        assert_close(x.coefficient(&minus), c(-1.0, 0.0), 1e-15);
    }

    #[test]
    fn boundary_power_expansion_agrees_pointwise() {
        // Compare the expanded x-domain form against direct branch
        // evaluation at sample points on both half-axes.
        let mu = c(0.5, 0.0);
        let e = single(FreqTerm::XiPlusI0PowLog { exponent: mu, log_power: 1 });
        let x = freq_to_expr(&e).unwrap();
        for xi in [1.7, -2.3] {
            let direct = eval_freq(&e, c(xi, 0.0)).unwrap();
            let mut from_terms = c(0.0, 0.0);
            for (t, coeff) in x.terms() {
                let v = match t {
                    QahdTerm::XPlusLog { degree, log_power } if xi > 0.0 => {
                        crate::algebra::pow_pos(xi, *degree)
                            .scale(crate::algebra::iter_pow(xi.ln(), *log_power))
                    }
                    QahdTerm::XMinusLog { degree, log_power } if xi < 0.0 => {
                        crate::algebra::pow_pos(-xi, *degree)
                            .scale(crate::algebra::iter_pow((-xi).ln(), *log_power))
                    }
                    _ => continue,
                };
                from_terms += coeff * v;
            }
            assert_close(from_terms, direct, 1e-13);
        }
    }
}
