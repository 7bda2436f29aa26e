//! Smooth rapidly decaying test functions with exact derivatives at zero.
//!
//! Two families are supported. The polynomial-Gaussian family
//! p(x) e^(-s x^2) is closed under reflection, argument scaling,
//! multiplication by x d/dx, and the Fourier transform, and is the family
//! used by all law verifiers. The one-sided exponential e^(-m x) is
//! admitted for plus-side moment integrals only; it has exact derivatives
//! at zero but blows up under reflection.

use num_complex::Complex64;

use crate::error::{QahdError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A test function with closed-form values and exact derivatives at zero.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// sum_p coeffs[p] x^p * exp(-width x^2), width > 0.
    PolyGauss { coeffs: Vec<Complex64>, width: f64 },
    /// exp(-rate x), rate > 0, meaningful on the positive half-line only.
    Exp { rate: f64 },
}

/// Monomial coefficients of the monic Hermite polynomial 2^-j H_j.
/// Index p holds the coefficient of x^p; the leading coefficient is 1.
pub fn monic_hermite_coeffs(j: u32) -> Vec<f64> {
    // Physicists' recurrence H_{r+1} = 2 x H_r - 2 r H_{r-1}.
    let mut prev: Vec<f64> = vec![1.0];
    if j == 0 {
        return prev;
    }
    let mut cur: Vec<f64> = vec![0.0, 2.0];
    for r in 1..j {
        let mut next = vec![0.0; (r + 2) as usize];
        for (p, &c) in cur.iter().enumerate() {
            next[p + 1] += 2.0 * c;
        }
        for (p, &c) in prev.iter().enumerate() {
            next[p] -= 2.0 * (r as f64) * c;
        }
        prev = cur;
        cur = next;
    }
    let scale = (0..j).fold(1.0, |acc, _| acc * 0.5);
    cur.iter().map(|c| c * scale).collect()
}

impl TestFunction {
    /// p(x) e^(-width x^2) from monomial coefficients.
    pub fn poly_gauss(coeffs: Vec<Complex64>, width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(QahdError::TestFunction(format!(
                "gaussian width must be positive and finite, got {width}"
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(QahdError::TestFunction("non-finite coefficient".into()));
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(QahdError::TestFunction(
                "test function must be nonzero".into(),
            ));
        }
        Ok(TestFunction::PolyGauss { coeffs, width })
    }

    /// sum_j h[j] * (2^-j H_j)(x) * e^(-x^2), the monic Hermite basis at
    /// unit width. h = [1] is the pure Gaussian, h = [0, 1] is x e^(-x^2).
    pub fn hermite(h: &[f64]) -> Result<Self> {
        let mut coeffs: Vec<Complex64> = Vec::new();
        for (j, &hj) in h.iter().enumerate() {
            if hj == 0.0 {
                continue;
            }
            for (p, &c) in monic_hermite_coeffs(j as u32).iter().enumerate() {
                if coeffs.len() <= p {
                    coeffs.resize(p + 1, ZERO);
                }
                coeffs[p] += Complex64::new(hj * c, 0.0);
            }
        }
        Self::poly_gauss(coeffs, 1.0)
    }

    /// e^(-rate x) on the positive half-line.
    pub fn exp_decay(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(QahdError::TestFunction(format!(
                "exponential rate must be positive and finite, got {rate}"
            )));
        }
        Ok(TestFunction::Exp { rate })
    }

    /// Pointwise value.
    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            TestFunction::PolyGauss { coeffs, width } => {
                let mut poly = ZERO;
                for &c in coeffs.iter().rev() {
                    poly = poly * x + c;
                }
                poly * (-width * x * x).exp()
            }
            TestFunction::Exp { rate } => Complex64::new((-rate * x).exp(), 0.0),
        }
    }

    /// Exact j-th derivative at zero (no finite differencing).
    pub fn deriv0(&self, j: u32) -> Complex64 {
        self.taylor_coeff(j).scale(crate::algebra::factorial(j))
    }

    /// Exact Taylor coefficient of x^m at zero.
    pub fn taylor_coeff(&self, m: u32) -> Complex64 {
        match self {
            TestFunction::PolyGauss { coeffs, width } => {
                // x^p e^(-s x^2) contributes c_p (-s)^r / r! at m = p + 2r.
                let mut acc = ZERO;
                let mut sign_pow = 1.0;
                let mut fact = 1.0;
                for r in 0..=(m / 2) {
                    if r > 0 {
                        sign_pow *= -width;
                        fact *= r as f64;
                    }
                    let p = (m - 2 * r) as usize;
                    if p < coeffs.len() {
                        acc += coeffs[p].scale(sign_pow / fact);
                    }
                }
                acc
            }
            TestFunction::Exp { rate } => {
                let mut acc = 1.0;
                for i in 1..=m {
                    acc *= -rate / (i as f64);
                }
                Complex64::new(acc, 0.0)
            }
        }
    }

    /// phi(x) - sum_{j < n} phi^(j)(0) x^j / j!, evaluated stably.
    ///
    /// Near zero the direct difference cancels catastrophically, so below a
    /// width-dependent switch point the remainder is summed as the tail of
    /// the Taylor series, which converges quickly for both families.
    pub fn taylor_remainder(&self, x: f64, n: u32) -> Complex64 {
        if n == 0 {
            return self.value(x);
        }
        let switch = match self {
            TestFunction::PolyGauss { width, .. } => (0.5 / width.sqrt()).min(0.5),
            TestFunction::Exp { rate } => (0.5 / rate).min(0.5),
        };
        if x.abs() > switch {
            let mut taylor = ZERO;
            let mut xp = 1.0;
            for j in 0..n {
                if j > 0 {
                    xp *= x;
                }
                taylor += self.taylor_coeff(j).scale(xp);
            }
            return self.value(x) - taylor;
        }
        let mut acc = ZERO;
        let mut xp = x.powi(n as i32);
        let mut m = n;
        let mut prev_norm = f64::INFINITY;
        loop {
            let term = self.taylor_coeff(m).scale(xp);
            acc += term;
            // Alternating families (even-only Gaussians) interleave exact
            // zeros, so demand two consecutive negligible terms.
            let cur = term.norm();
            let floor = 1e-30 * (acc.norm() + 1e-300);
            if cur <= floor && prev_norm <= floor && m > n + 4 {
                break;
            }
            if m > n + 400 {
                break;
            }
            prev_norm = cur;
            m += 1;
            xp *= x;
        }
        acc
    }

    /// x -> phi(-x). The exponential family is not closed under this.
    pub fn reflect(&self) -> Result<Self> {
        match self {
            TestFunction::PolyGauss { coeffs, width } => {
                let flipped = coeffs
                    .iter()
                    .enumerate()
                    .map(|(p, c)| if p % 2 == 0 { *c } else { -*c })
                    .collect();
                Ok(TestFunction::PolyGauss { coeffs: flipped, width: *width })
            }
            TestFunction::Exp { .. } => Err(QahdError::TestFunction(
                "e^(-m x) grows under reflection and cannot be paired on the minus side".into(),
            )),
        }
    }

    /// x -> phi(x / a) for a > 0.
    pub fn scale_arg(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(QahdError::NonPositiveScale(a));
        }
        match self {
            TestFunction::PolyGauss { coeffs, width } => {
                let mut scaled = Vec::with_capacity(coeffs.len());
                let mut inv_pow = 1.0;
                for (p, c) in coeffs.iter().enumerate() {
                    if p > 0 {
                        inv_pow /= a;
                    }
                    scaled.push(c.scale(inv_pow));
                }
                Ok(TestFunction::PolyGauss { coeffs: scaled, width: width / (a * a) })
            }
            TestFunction::Exp { rate } => Ok(TestFunction::Exp { rate: rate / a }),
        }
    }

    /// Length scale below which the function carries essentially all of
    /// its variation: 1/sqrt(width) for the Gaussian envelope, 1/rate
    /// for the exponential.
    pub fn concentration_scale(&self) -> f64 {
        match self {
            TestFunction::PolyGauss { width, .. } => width.sqrt().recip(),
            TestFunction::Exp { rate } => rate.recip(),
        }
    }

    /// Multiply the function values by a constant.
    pub fn scale_value(&self, s: Complex64) -> Result<Self> {
        if !s.re.is_finite() || !s.im.is_finite() || s == ZERO {
            return Err(QahdError::TestFunction(format!(
                "value scale must be finite and nonzero, got {s}"
            )));
        }
        match self {
            TestFunction::PolyGauss { coeffs, width } => Ok(TestFunction::PolyGauss {
                coeffs: coeffs.iter().map(|c| c * s).collect(),
                width: *width,
            }),
            TestFunction::Exp { .. } => Err(QahdError::TestFunction(
                "the exponential profile carries no amplitude parameter".into(),
            )),
        }
    }

    /// x -> x phi'(x), closed for the polynomial-Gaussian family.
    pub fn x_dphi(&self) -> Result<Self> {
        match self {
            TestFunction::PolyGauss { coeffs, width } => {
                let mut out = vec![ZERO; coeffs.len() + 2];
                for (p, c) in coeffs.iter().enumerate() {
                    out[p] += c.scale(p as f64);
                    out[p + 2] -= c.scale(2.0 * width);
                }
                Self::poly_gauss(out, *width)
            }
            TestFunction::Exp { .. } => Err(QahdError::TestFunction(
                "x phi' leaves the exponential family".into(),
            )),
        }
    }

    /// Fourier transform under F[phi](xi) = integral of phi(x) e^(i xi x).
    ///
    /// F[x^j e^(-s x^2)] = (i sqrt(alpha))^j sqrt(pi/s) H_j(sqrt(alpha) xi)
    /// e^(-alpha xi^2) with alpha = 1/(4 s), so the family is closed and
    /// the result is again polynomial-Gaussian.
    pub fn fourier(&self) -> Result<Self> {
        match self {
            TestFunction::PolyGauss { coeffs, width } => {
                let s = *width;
                let alpha = 1.0 / (4.0 * s);
                let root_alpha = alpha.sqrt();
                let norm = (std::f64::consts::PI / s).sqrt();
                let mut out: Vec<Complex64> = vec![ZERO; coeffs.len()];
                for (j, c) in coeffs.iter().enumerate() {
                    if *c == ZERO {
                        continue;
                    }
                    let mut front = Complex64::new(norm, 0.0);
                    for _ in 0..j {
                        front *= Complex64::new(0.0, root_alpha);
                    }
                    // Hermite polynomial in (sqrt(alpha) xi), translated to
                    // monomials in xi.
                    let h = hermite_monomials(j as u32);
                    let mut ap = 1.0;
                    for (p, &hc) in h.iter().enumerate() {
                        if p > 0 {
                            ap *= root_alpha;
                        }
                        if hc != 0.0 {
                            out[p] += c * front.scale(hc * ap);
                        }
                    }
                }
                Self::poly_gauss(out, alpha)
            }
            TestFunction::Exp { .. } => Err(QahdError::TestFunction(
                "the one-sided exponential has no Schwartz Fourier transform here".into(),
            )),
        }
    }

    /// Cutoff T such that the integral of |phi(x)| x^max(re_exponent, 0)
    /// ln^log_power(x) over (T, infinity) is provably below eps.
    pub fn weighted_tail_cutoff(&self, re_exponent: f64, log_power: u32, eps: f64) -> Result<f64> {
        let envelope = |x: f64| -> f64 {
            let decay = match self {
                TestFunction::PolyGauss { coeffs, width } => {
                    let poly: f64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(p, c)| c.norm() * x.powi(p as i32))
                        .sum();
                    poly * (-width * x * x).exp()
                }
                TestFunction::Exp { rate } => (-rate * x).exp(),
            };
            let weight = x.powf(re_exponent.max(0.0)) * x.ln().max(1.0).powi(log_power as i32);
            decay * weight
        };
        let mut t = 2.0;
        for _ in 0..400 {
            let g0 = envelope(t);
            let g1 = envelope(t + 1.0);
            if g0 <= 0.0 {
                return Ok(t);
            }
            let ratio = g1 / g0;
            // Unit-interval comparison bounds the tail by g0 / (1 - ratio)
            // once the envelope is decaying geometrically.
            if ratio < 0.9 && g0 / (1.0 - ratio) <= eps {
                return Ok(t);
            }
            t *= 1.5;
        }
        Err(QahdError::TestFunction(
            "could not certify a decay cutoff for the tail integral".into(),
        ))
    }

    /// Largest polynomial degree carried by the function.
    pub fn poly_degree(&self) -> usize {
        match self {
            TestFunction::PolyGauss { coeffs, .. } => coeffs.len().saturating_sub(1),
            TestFunction::Exp { .. } => 0,
        }
    }
}

/// Monomial coefficients of the physicists' Hermite polynomial H_j.
fn hermite_monomials(j: u32) -> Vec<f64> {
    monic_hermite_coeffs(j)
        .into_iter()
        .map(|c| c * (0..j).fold(1.0, |acc, _| acc * 2.0))
        .collect()
}

/// x -> phi(x / a) with exact derivative bookkeeping, free-function form.
pub fn scaled_argument(phi: &TestFunction, a: f64) -> Result<TestFunction> {
    phi.scale_arg(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> TestFunction {
        TestFunction::hermite(&[1.0]).unwrap()
    }

    #[test]
    fn monic_hermite_low_orders() {
        assert_eq!(monic_hermite_coeffs(0), vec![1.0]);
        assert_eq!(monic_hermite_coeffs(1), vec![0.0, 1.0]);
        assert_eq!(monic_hermite_coeffs(2), vec![-0.5, 0.0, 1.0]);
        assert_eq!(monic_hermite_coeffs(3), vec![0.0, -1.5, 0.0, 1.0]);
    }

    #[test]
    fn gaussian_derivatives_at_zero() {
        let phi = gaussian();
        assert_eq!(phi.deriv0(0), Complex64::new(1.0, 0.0));
        assert_eq!(phi.deriv0(1), Complex64::new(0.0, 0.0));
        assert_eq!(phi.deriv0(2), Complex64::new(-2.0, 0.0));
        assert_eq!(phi.deriv0(4), Complex64::new(12.0, 0.0));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let phi = TestFunction::hermite(&[0.3, -1.0, 0.0, 2.0]).unwrap();
        let h = 1e-5;
        let fd1 = (phi.value(h) - phi.value(-h)).scale(1.0 / (2.0 * h));
        assert!((fd1 - phi.deriv0(1)).norm() < 1e-8);
        let fd2 = (phi.value(h) - phi.value(0.0).scale(2.0) + phi.value(-h)).scale(1.0 / (h * h));
        assert!((fd2 - phi.deriv0(2)).norm() < 1e-4);
    }

    #[test]
    fn exp_derivatives_are_powers_of_rate() {
        let phi = TestFunction::exp_decay(3.0).unwrap();
        assert_eq!(phi.deriv0(0), Complex64::new(1.0, 0.0));
        assert_eq!(phi.deriv0(1), Complex64::new(-3.0, 0.0));
        assert_eq!(phi.deriv0(2), Complex64::new(9.0, 0.0));
    }

    #[test]
    fn taylor_remainder_is_stable_near_zero() {
        let phi = gaussian();
        // Remainder after 6 terms of e^(-x^2) is -x^6/6 + x^8/24 - ...
        let x: f64 = 1e-4;
        let expected = -x.powi(6) / 6.0 + x.powi(8) / 24.0;
        let got = phi.taylor_remainder(x, 6);
        assert!(
            (got.re - expected).abs() <= 1e-10 * expected.abs(),
            "remainder {got} vs {expected}"
        );
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn taylor_remainder_matches_direct_form_past_the_switch() {
        let phi = TestFunction::hermite(&[1.0, 0.5, 0.25]).unwrap();
        for x in [0.75f64, 1.5, 3.0] {
            let mut taylor = Complex64::new(0.0, 0.0);
            for j in 0..4u32 {
                taylor += phi
                    .taylor_coeff(j)
                    .scale(x.powi(j as i32));
            }
            let direct = phi.value(x) - taylor;
            let got = phi.taylor_remainder(x, 4);
            assert!((got - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn reflection_flips_odd_coefficients() {
        let phi = TestFunction::hermite(&[0.0, 1.0]).unwrap();
        let refl = phi.reflect().unwrap();
        assert!((refl.value(2.0) + phi.value(2.0)).norm() < 1e-15);
        assert!(TestFunction::exp_decay(1.0).unwrap().reflect().is_err());
    }

    #[test]
    fn argument_scaling_rescales_derivatives() {
        let phi = TestFunction::hermite(&[1.0, 2.0, 0.5]).unwrap();
        let scaled = phi.scale_arg(2.0).unwrap();
        assert!((scaled.value(1.0) - phi.value(0.5)).norm() < 1e-15);
        assert!((scaled.deriv0(1) - phi.deriv0(1).scale(0.5)).norm() < 1e-15);
        assert!((scaled.deriv0(3) - phi.deriv0(3).scale(0.125)).norm() < 1e-15);
    }

    #[test]
    fn x_dphi_of_gaussian() {
        let g = gaussian().x_dphi().unwrap();
        // x (e^(-x^2))' = -2 x^2 e^(-x^2)
        let x: f64 = 0.7;
        let expected = -2.0 * x * x * (-x * x).exp();
        assert!((g.value(x).re - expected).abs() < 1e-15);
    }

    #[test]
    fn fourier_of_gaussian_and_first_hermite() {
        let pi = std::f64::consts::PI;
        let f = gaussian().fourier().unwrap();
        let xi: f64 = 1.3;
        let expected = pi.sqrt() * (-xi * xi / 4.0).exp();
        assert!((f.value(xi).re - expected).abs() < 1e-14);
        assert!(f.value(xi).im.abs() < 1e-18);

        let f1 = TestFunction::hermite(&[0.0, 1.0]).unwrap().fourier().unwrap();
        // F[x e^(-x^2)] = (i sqrt(pi)/2) xi e^(-xi^2/4)
        let expected1 = pi.sqrt() / 2.0 * xi * (-xi * xi / 4.0).exp();
        assert!(f1.value(xi).re.abs() < 1e-15);
        assert!((f1.value(xi).im - expected1).abs() < 1e-14);
    }

    #[test]
    fn fourier_at_zero_reproduces_total_integral() {
        // F[x^2 e^(-x^2)](0) = integral = sqrt(pi)/2.
        let f = TestFunction::poly_gauss(
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            1.0,
        )
        .unwrap()
        .fourier()
        .unwrap();
        let expected = std::f64::consts::PI.sqrt() / 2.0;
        assert!((f.value(0.0).re - expected).abs() < 1e-14);
    }

    #[test]
    fn tail_cutoff_is_sound() {
        let phi = TestFunction::hermite(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let t = phi.weighted_tail_cutoff(2.5, 3, 1e-12).unwrap();
        // Numerically accumulate the bounded tail to confirm it is tiny.
        let mut acc = 0.0;
        let mut x = t;
        while x < t + 40.0 {
            acc += phi.value(x).norm() * x.powf(2.5) * x.ln().powi(3) * 1e-3;
            x += 1e-3;
        }
        assert!(acc < 1e-11, "tail {acc} at cutoff {t}");
    }

    #[test]
    fn scaled_width_cutoff_grows() {
        let phi = gaussian().scale_arg(1e3).unwrap();
        let t = phi.weighted_tail_cutoff(0.5, 1, 1e-12).unwrap();
        assert!(t > 1e3, "cutoff {t} must clear the widened support");
        assert!(t < 1e6);
    }
}
