//! Canonical basis terms and linear combinations.
//!
//! The basis consists of five families:
//!
//! * `XPlusLog(lambda, k)`: the distribution x_+^lambda log^k x_+, degree
//!   lambda away from the negative integers, order k.
//! * `XMinusLog(lambda, k)`: its reflection x_-^lambda log^k x_-.
//! * `PfPlusLog(n, k)`: the finite part P(x_+^-n log^k x_+), degree -n,
//!   order k + 1.
//! * `PfMinusLog(n, k)`: the reflected finite part.
//! * `DeltaDeriv(m)`: delta^(m), degree -m-1, order 0.
//!
//! An expression is a finite complex linear combination kept in a canonical
//! sorted form: equal keys merged, degrees within [`MERGE_EPS`] identified,
//! coefficients below [`DROP_EPS`] removed.

use num_complex::Complex64;

use crate::error::{QahdError, Result};
use crate::tol::{DROP_EPS, MERGE_EPS, POLE_EPS};

/// One canonical basis distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QahdTerm {
    XPlusLog { degree: Complex64, log_power: u32 },
    XMinusLog { degree: Complex64, log_power: u32 },
    PfPlusLog { pole_order: u32, log_power: u32 },
    PfMinusLog { pole_order: u32, log_power: u32 },
    DeltaDeriv { delta_order: u32 },
}

/// Distance from `z` to the nearest negative integer -1, -2, ...
pub fn negative_integer_distance(z: Complex64) -> f64 {
    let nearest = z.re.round();
    if nearest <= -1.0 {
        (z - Complex64::new(nearest, 0.0)).norm()
    } else {
        (z - Complex64::new(-1.0, 0.0)).norm()
    }
}

/// x_+^lambda log^k x_+. Degrees within [`POLE_EPS`] of a negative integer
/// are rejected; the finite-part families cover those degrees.
pub fn xplus(degree: Complex64, log_power: u32) -> Result<QahdTerm> {
    check_power_degree(degree)?;
    Ok(QahdTerm::XPlusLog { degree, log_power })
}

/// x_-^lambda log^k x_-.
pub fn xminus(degree: Complex64, log_power: u32) -> Result<QahdTerm> {
    check_power_degree(degree)?;
    Ok(QahdTerm::XMinusLog { degree, log_power })
}

/// P(x_+^-n log^k x_+), n >= 1.
pub fn pfplus(pole_order: u32, log_power: u32) -> Result<QahdTerm> {
    check_pole_order(pole_order)?;
    Ok(QahdTerm::PfPlusLog { pole_order, log_power })
}

/// P(x_-^-n log^k x_-), n >= 1.
pub fn pfminus(pole_order: u32, log_power: u32) -> Result<QahdTerm> {
    check_pole_order(pole_order)?;
    Ok(QahdTerm::PfMinusLog { pole_order, log_power })
}

/// delta^(m).
pub fn delta(delta_order: u32) -> QahdTerm {
    QahdTerm::DeltaDeriv { delta_order }
}

fn check_power_degree(degree: Complex64) -> Result<()> {
    if !degree.re.is_finite() || !degree.im.is_finite() {
        return Err(QahdError::InvalidTerm(format!("non-finite degree {degree}")));
    }
    if negative_integer_distance(degree) <= POLE_EPS {
        return Err(QahdError::InvalidTerm(format!(
            "degree {degree} is within {POLE_EPS:e} of a negative integer; \
             use the finite-part families at integer degrees"
        )));
    }
    Ok(())
}

fn check_pole_order(pole_order: u32) -> Result<()> {
    if pole_order == 0 {
        return Err(QahdError::InvalidTerm("pole order must be >= 1".into()));
    }
    Ok(())
}

impl QahdTerm {
    /// Homogeneity degree of the term.
    pub fn degree(&self) -> Complex64 {
        match *self {
            QahdTerm::XPlusLog { degree, .. } | QahdTerm::XMinusLog { degree, .. } => degree,
            QahdTerm::PfPlusLog { pole_order, .. } | QahdTerm::PfMinusLog { pole_order, .. } => {
                Complex64::new(-(pole_order as f64), 0.0)
            }
            QahdTerm::DeltaDeriv { delta_order } => Complex64::new(-(delta_order as f64) - 1.0, 0.0),
        }
    }

    /// Scaling order: the highest log power appearing under dilation.
    /// The finite-part families carry order log_power + 1 because dilation
    /// injects one extra log through the delta companion.
    pub fn order(&self) -> u32 {
        match *self {
            QahdTerm::XPlusLog { log_power, .. } | QahdTerm::XMinusLog { log_power, .. } => log_power,
            QahdTerm::PfPlusLog { log_power, .. } | QahdTerm::PfMinusLog { log_power, .. } => {
                log_power + 1
            }
            QahdTerm::DeltaDeriv { .. } => 0,
        }
    }

    /// Grammar name of the family.
    pub fn family_name(&self) -> &'static str {
        match self {
            QahdTerm::XPlusLog { .. } => "xplus",
            QahdTerm::XMinusLog { .. } => "xminus",
            QahdTerm::PfPlusLog { .. } => "pfplus",
            QahdTerm::PfMinusLog { .. } => "pfminus",
            QahdTerm::DeltaDeriv { .. } => "delta",
        }
    }

    fn family_rank(&self) -> u8 {
        match self {
            QahdTerm::XPlusLog { .. } => 0,
            QahdTerm::XMinusLog { .. } => 1,
            QahdTerm::PfPlusLog { .. } => 2,
            QahdTerm::PfMinusLog { .. } => 3,
            QahdTerm::DeltaDeriv { .. } => 4,
        }
    }

    fn discrete_params(&self) -> (u32, u32) {
        match *self {
            QahdTerm::XPlusLog { log_power, .. } | QahdTerm::XMinusLog { log_power, .. } => {
                (0, log_power)
            }
            QahdTerm::PfPlusLog { pole_order, log_power }
            | QahdTerm::PfMinusLog { pole_order, log_power } => (pole_order, log_power),
            QahdTerm::DeltaDeriv { delta_order } => (delta_order, 0),
        }
    }

    /// Two terms re-use the same expression slot when their families and
    /// discrete parameters agree and their degrees fall within [`MERGE_EPS`].
    pub fn merges_with(&self, other: &QahdTerm) -> bool {
        self.family_rank() == other.family_rank()
            && self.discrete_params() == other.discrete_params()
            && (self.degree() - other.degree()).norm() <= MERGE_EPS
    }

    fn sort_cmp(&self, other: &QahdTerm) -> std::cmp::Ordering {
        let a = self.sort_key();
        let b = other.sort_key();
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
            .then(a.4.cmp(&b.4))
    }

    fn sort_key(&self) -> (u8, f64, f64, u32, u32) {
        let d = self.degree();
        let (p, q) = self.discrete_params();
        (self.family_rank(), d.re, d.im, p, q)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            QahdTerm::XPlusLog { degree, .. } | QahdTerm::XMinusLog { degree, .. } => {
                check_power_degree(degree)
            }
            QahdTerm::PfPlusLog { pole_order, .. } | QahdTerm::PfMinusLog { pole_order, .. } => {
                check_pole_order(pole_order)
            }
            QahdTerm::DeltaDeriv { .. } => Ok(()),
        }
    }
}

/// Canonical complex linear combination of basis terms. The empty
/// combination represents the zero distribution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QahdExpr {
    terms: Vec<(QahdTerm, Complex64)>,
}

/// Merge raw (term, coefficient) pairs into canonical form.
///
/// Coefficients of merging terms are added, near-zero results dropped, and
/// the survivors sorted by (family, degree, parameters).
pub fn canonicalize(raw_terms: Vec<(QahdTerm, Complex64)>) -> Result<QahdExpr> {
    let mut merged: Vec<(QahdTerm, Complex64)> = Vec::with_capacity(raw_terms.len());
    for (term, coeff) in raw_terms {
        term.validate()?;
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(QahdError::InvalidTerm(format!(
                "non-finite coefficient {coeff} on {}",
                term.family_name()
            )));
        }
        match merged.iter_mut().find(|(t, _)| t.merges_with(&term)) {
            Some((_, c)) => *c += coeff,
            None => merged.push((term, coeff)),
        }
    }
    merged.retain(|(_, c)| c.norm() > DROP_EPS);
    merged.sort_by(|(a, _), (b, _)| a.sort_cmp(b));
    Ok(QahdExpr { terms: merged })
}

impl QahdExpr {
    /// The zero distribution.
    pub fn zero() -> Self {
        QahdExpr { terms: Vec::new() }
    }

    /// Single term with coefficient 1.
    pub fn from_term(term: QahdTerm) -> Self {
        QahdExpr { terms: vec![(term, Complex64::new(1.0, 0.0))] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(QahdTerm, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the slot that merges with `term`, zero if absent.
    pub fn coefficient(&self, term: &QahdTerm) -> Complex64 {
        self.terms
            .iter()
            .find(|(t, _)| t.merges_with(term))
            .map(|(_, c)| *c)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Sum of two expressions, re-canonicalized.
    pub fn add(&self, other: &QahdExpr) -> QahdExpr {
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        // Both inputs already passed validation, so this cannot fail.
        canonicalize(raw).expect("canonical inputs stay canonical under addition")
    }

    /// Scalar multiple, re-canonicalized so tiny products drop out.
    pub fn scale(&self, factor: Complex64) -> QahdExpr {
        let raw = self.terms.iter().map(|(t, c)| (*t, c * factor)).collect();
        canonicalize(raw).expect("canonical inputs stay canonical under scaling")
    }

    /// Structural equality up to `tol` on each coefficient, with the same
    /// canonical keys on both sides. The difference-based form also accepts
    /// expressions whose near-zero slots were dropped on one side only.
    pub fn approx_eq(&self, other: &QahdExpr, tol: f64) -> bool {
        let diff = self.add(&other.scale(Complex64::new(-1.0, 0.0)));
        diff.terms.iter().all(|(_, c)| c.norm() <= tol)
    }
}

/// Degree and order of one degree-homogeneous component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeOrder {
    pub degree: Complex64,
    pub order: u32,
}

/// Classify an expression into degree-homogeneous components.
///
/// Terms with degrees within [`MERGE_EPS`] share a component; the component
/// order is the maximum term order. Components come back sorted by degree.
pub fn degree_order(expr: &QahdExpr) -> Vec<DegreeOrder> {
    let mut components: Vec<DegreeOrder> = Vec::new();
    for (term, _) in expr.terms() {
        let d = term.degree();
        let o = term.order();
        match components
            .iter_mut()
            .find(|c| (c.degree - d).norm() <= MERGE_EPS)
        {
            Some(c) => c.order = c.order.max(o),
            None => components.push(DegreeOrder { degree: d, order: o }),
        }
    }
    components.sort_by(|a, b| {
        a.degree
            .re
            .total_cmp(&b.degree.re)
            .then(a.degree.im.total_cmp(&b.degree.im))
    });
    components
}

/// Split an expression into its degree-homogeneous components, in the same
/// order as [`degree_order`].
pub fn degree_components(expr: &QahdExpr) -> Vec<(Complex64, QahdExpr)> {
    let mut groups: Vec<(Complex64, Vec<(QahdTerm, Complex64)>)> = Vec::new();
    for (term, coeff) in expr.terms() {
        let d = term.degree();
        match groups.iter_mut().find(|(g, _)| (*g - d).norm() <= MERGE_EPS) {
            Some((_, v)) => v.push((*term, *coeff)),
            None => groups.push((d, vec![(*term, *coeff)])),
        }
    }
    groups.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    groups
        .into_iter()
        .map(|(d, v)| (d, canonicalize(v).expect("component of a canonical expression")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficient_addition_merges() {
        let t = xplus(c(1.0, 0.0), 0).unwrap();
        let e = canonicalize(vec![(t, c(2.0, 0.0)), (t, c(3.0, 0.0))]).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coefficient(&t), c(5.0, 0.0));
    }

    #[test]
    fn exact_cancellation_yields_zero() {
        let t = xplus(c(1.0, 0.0), 0).unwrap();
        let e = canonicalize(vec![(t, c(1.0, 0.0)), (t, c(-1.0, 0.0))]).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn pole_adjacent_degree_rejected() {
        assert!(matches!(xplus(c(-2.0, 0.0), 0), Err(QahdError::InvalidTerm(_))));
        assert!(matches!(xplus(c(-1.0 + 1e-9, 0.0), 2), Err(QahdError::InvalidTerm(_))));
        // Just outside the window is accepted.
        assert!(xplus(c(-1.0 + 1e-3, 0.0), 2).is_ok());
        // Positive integers and complex degrees near them are fine.
        assert!(xplus(c(2.0, 0.0), 0).is_ok());
        assert!(xplus(c(-2.0, 0.5), 0).is_ok());
    }

    #[test]
    fn nearby_degrees_merge() {
        let t1 = xplus(c(0.5, 0.0), 1).unwrap();
        let t2 = xplus(c(0.5 + 1e-13, 0.0), 1).unwrap();
        let e = canonicalize(vec![(t1, c(1.0, 0.0)), (t2, c(1.0, 0.0))]).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coefficient(&t1), c(2.0, 0.0));
    }

    #[test]
    fn distinct_log_powers_do_not_merge() {
        let t1 = xplus(c(0.5, 0.0), 0).unwrap();
        let t2 = xplus(c(0.5, 0.0), 1).unwrap();
        let e = canonicalize(vec![(t1, c(1.0, 0.0)), (t2, c(1.0, 0.0))]).unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn drop_eps_removes_dust() {
        let t = delta(0);
        let e = canonicalize(vec![(t, c(1e-15, 0.0))]).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn degree_order_basics() {
        let e = QahdExpr::from_term(xplus(c(0.5, 0.0), 2).unwrap());
        assert_eq!(
            degree_order(&e),
            vec![DegreeOrder { degree: c(0.5, 0.0), order: 2 }]
        );

        let e = QahdExpr::from_term(delta(3));
        assert_eq!(
            degree_order(&e),
            vec![DegreeOrder { degree: c(-4.0, 0.0), order: 0 }]
        );
    }

    #[test]
    fn degree_order_groups_finite_part_with_delta() {
        // P(x_+^-1) has degree -1 and order 1; delta has degree -1 and
        // order 0. They form one component of order 1.
        let raw = vec![
            (pfplus(1, 0).unwrap(), c(1.0, 0.0)),
            (delta(0), c(2.0, 0.0)),
        ];
        let e = canonicalize(raw).unwrap();
        assert_eq!(
            degree_order(&e),
            vec![DegreeOrder { degree: c(-1.0, 0.0), order: 1 }]
        );
    }

    #[test]
    fn order_bookkeeping_per_family() {
        assert_eq!(xplus(c(0.5, 0.0), 3).unwrap().order(), 3);
        assert_eq!(pfplus(2, 0).unwrap().order(), 1);
        assert_eq!(pfplus(2, 2).unwrap().order(), 3);
        assert_eq!(delta(5).order(), 0);
        assert_eq!(delta(5).degree(), c(-6.0, 0.0));
        assert_eq!(pfminus(3, 1).unwrap().degree(), c(-3.0, 0.0));
    }

    #[test]
    fn canonical_sort_is_stable_under_permutation() {
        let t1 = xplus(c(0.5, 0.0), 1).unwrap();
        let t2 = xminus(c(0.5, 0.0), 0).unwrap();
        let t3 = delta(2);
        let a = canonicalize(vec![
            (t1, c(1.0, 0.0)),
            (t2, c(2.0, 0.0)),
            (t3, c(3.0, 0.0)),
        ])
        .unwrap();
        let b = canonicalize(vec![
            (t3, c(3.0, 0.0)),
            (t1, c(1.0, 0.0)),
            (t2, c(2.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pf_orders_start_at_one() {
        assert!(matches!(pfplus(0, 0), Err(QahdError::InvalidTerm(_))));
    }

    #[test]
    fn add_and_scale_stay_canonical() {
        let t = xplus(c(0.5, 0.0), 0).unwrap();
        let e = QahdExpr::from_term(t);
        let sum = e.add(&e.scale(c(-1.0, 0.0)));
        assert!(sum.is_zero());
        let scaled = e.scale(c(0.0, 2.0));
        assert_eq!(scaled.coefficient(&t), c(0.0, 2.0));
    }
}
