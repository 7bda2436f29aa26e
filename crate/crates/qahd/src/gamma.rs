//! Complex gamma function, polygamma functions, and derivatives of gamma.
//!
//! cgamma is a Lanczos approximation with reflection for Re z < 1/2,
//! accurate to about 1e-13 relative on the strip |Re z| <= 10,
//! |Im z| <= 10 away from the poles. Polygamma values come from upward
//! recurrence into the region Re z >= 12 followed by the Bernoulli
//! asymptotic series, and derivatives of gamma itself are assembled from
//! gamma and polygamma by the Leibniz rule on Gamma' = Gamma psi.

use num_complex::Complex64;

use crate::error::{QahdError, Result};
use crate::tol::POLE_EPS;

/// Euler-Mascheroni constant to f64 precision.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Lanczos coefficients for g = 7, 9 terms. Standard published values.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Bernoulli numbers B_2, B_4, ..., B_12 for the asymptotic tail.
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Distance from z to the nearest nonpositive integer, where gamma and
/// polygamma have their poles.
fn pole_distance(z: Complex64) -> f64 {
    let nearest = z.re.round().min(0.0);
    (z - Complex64::new(nearest, 0.0)).norm()
}

fn reject_near_pole(z: Complex64) -> Result<()> {
    if pole_distance(z) <= POLE_EPS {
        return Err(QahdError::PoleArgument { re: z.re, im: z.im });
    }
    Ok(())
}

/// Gamma(z) for complex z away from the nonpositive integers.
pub fn cgamma(z: Complex64) -> Result<Complex64> {
    reject_near_pole(z)?;
    Ok(lanczos_gamma(z))
}

fn lanczos_gamma(z: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if z.re < 0.5 {
        // Reflection Gamma(z) Gamma(1-z) = pi / sin(pi z).
        let s = (z.scale(pi)).sin();
        return Complex64::new(pi, 0.0) / (s * lanczos_gamma(Complex64::new(1.0, 0.0) - z));
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += Complex64::new(c, 0.0) / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    let half = zm1 + 0.5;
    // t^(z - 1/2) e^(-t), principal branch; t has positive real part here.
    let power = (half * t.ln()).exp();
    (2.0 * pi).sqrt() * power * (-t).exp() * acc
}

/// r-th polygamma function (r = 0 is digamma) for complex z away from
/// the nonpositive integers. Supported through r = 5, which covers the
/// sixth derivative of gamma.
pub fn polygamma(r: u32, z: Complex64) -> Result<Complex64> {
    reject_near_pole(z)?;
    if r > 5 {
        return Err(QahdError::Precondition(format!(
            "polygamma order {r} exceeds the supported maximum 5"
        )));
    }
    // Shift into Re z >= 12 where the Bernoulli tail is far below f64
    // resolution, accumulating the recurrence corrections.
    let shift = (12.0 - z.re).ceil().max(0.0) as u32;
    let mut correction = Complex64::new(0.0, 0.0);
    let sign_r = if r % 2 == 0 { 1.0 } else { -1.0 };
    let r_fact = crate::algebra::factorial(r);
    for i in 0..shift {
        let base = z + i as f64;
        // psi^(r)(z) = psi^(r)(z+1) - (-1)^r r! z^(-r-1)
        correction -= base.powi(-(r as i32) - 1).scale(sign_r * r_fact);
    }
    let zs = z + shift as f64;
    Ok(polygamma_asymptotic(r, zs) + correction)
}

/// Bernoulli asymptotic series, valid for Re z >= 12.
fn polygamma_asymptotic(r: u32, z: Complex64) -> Complex64 {
    if r == 0 {
        let mut acc = z.ln() - (z.scale(2.0)).inv();
        let z2 = (z * z).inv();
        let mut zp = Complex64::new(1.0, 0.0);
        for (j, &b) in BERNOULLI_EVEN.iter().enumerate() {
            zp *= z2;
            acc -= zp.scale(b / (2.0 * (j as f64 + 1.0)));
        }
        return acc;
    }
    // psi^(r)(z) = (-1)^(r-1) [ (r-1)!/z^r + r!/(2 z^(r+1))
    //              + sum_j B_2j (2j+r-1)!/((2j)! z^(2j+r)) ]
    let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
    let zr = z.powi(-(r as i32));
    let mut acc = zr.scale(crate::algebra::factorial(r - 1));
    acc += (zr / z).scale(crate::algebra::factorial(r) / 2.0);
    let z2 = (z * z).inv();
    let mut zp = zr;
    for (j, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2 * (j as u32 + 1);
        zp *= z2;
        let ratio = crate::algebra::factorial(two_j + r - 1) / crate::algebra::factorial(two_j);
        acc += zp.scale(b * ratio);
    }
    acc.scale(sign)
}

/// Derivatives d^j/dz^j Gamma(z) for j = 0..k, k <= 6.
///
/// Built by the Leibniz rule on Gamma' = Gamma psi:
/// Gamma^(m+1) = sum_r C(m, r) Gamma^(r) psi^(m-r).
pub fn loggamma_derivs(z: Complex64, k: u32) -> Result<Vec<Complex64>> {
    reject_near_pole(z)?;
    if k > 6 {
        return Err(QahdError::Precondition(format!(
            "gamma derivative order {k} exceeds the supported maximum 6"
        )));
    }
    let mut derivs = vec![lanczos_gamma(z)];
    if k == 0 {
        return Ok(derivs);
    }
    let mut psi = Vec::with_capacity(k as usize);
    for r in 0..k {
        psi.push(polygamma(r, z)?);
    }
    for m in 0..k {
        let mut next = Complex64::new(0.0, 0.0);
        for r in 0..=m {
            next += derivs[r as usize] * psi[(m - r) as usize].scale(crate::algebra::binom(m, r));
        }
        derivs.push(next);
    }
    Ok(derivs)
}
