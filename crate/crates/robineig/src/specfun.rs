//! Closed-form oracles: Bessel `J_nu`, its first positive zero, the Gamma
//! function, the Hardy eigenvalue curve, and the two explicit solutions of
//! the nonlinear Robin problem on the unit ball.
//!
//! Everything here is independent of the mesh/eigensolver/integrator stack;
//! the validation suites compare that stack against these routines.
//!
//! `J_nu` is evaluated by its ascending power series
//!
//! ```text
//! J_nu(x) = sum_{k>=0} (-1)^k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)),
//! ```
//!
//! which is accurate to ~1e-12 relative for `x <= 15` in f64 (cancellation
//! strips a few digits as `x` grows; all arguments used here stay below the
//! first zero plus a small margin, well inside that range).

use crate::{Error, Result};

/// Lanczos approximation, g = 7, 9 coefficients. Classic fixed table;
/// relative error below 1e-14 for positive arguments.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
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

/// Gamma function for positive real arguments.
///
/// Lanczos rational approximation for `x >= 0.5`, one recurrence step
/// `Gamma(x) = Gamma(x+1)/x` below that. Rejects `x <= 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::SpecFunDomain(format!(
            "gamma_fn requires x > 0, got {x}"
        )));
    }
    if x < 0.5 {
        return Ok(gamma_lanczos(x + 1.0) / x);
    }
    Ok(gamma_lanczos(x))
}

fn gamma_lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Bessel function of the first kind, `J_nu(x)`, by the ascending series.
///
/// Valid for `nu >= 0` and `0 <= x <= 30`; the series is summed until the
/// term falls below 1e-17 of the running sum.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::SpecFunDomain(format!(
            "bessel_j requires nu >= 0, got {nu}"
        )));
    }
    if !(0.0..=30.0).contains(&x) {
        return Err(Error::SpecFunDomain(format!(
            "bessel_j requires 0 <= x <= 30, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let mut term = half.powf(nu) / gamma_fn(nu + 1.0)?;
    let mut sum = term;
    let q = half * half;
    for k in 1..400 {
        let kf = k as f64;
        term *= -q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    Ok(sum)
}

/// First positive zero `j_{nu,1}` of `J_nu`, for `0 <= nu <= 10`.
///
/// Marches from small `x` until the first sign change of the series, then
/// bisects the bracket down to ~1e-13 absolute.
pub fn first_zero(nu: f64) -> Result<f64> {
    if !(0.0..=10.0).contains(&nu) {
        return Err(Error::SpecFunDomain(format!(
            "first_zero requires 0 <= nu <= 10, got {nu}"
        )));
    }
    // J_nu > 0 on (0, j_{nu,1}); the first zero lies in (nu, nu + 10].
    let step = 0.25;
    let mut lo = 0.25;
    let mut f_lo = bessel_j(nu, lo)?;
    let mut hi = lo;
    let mut bracketed = false;
    while hi < nu + 10.0 + step {
        hi = lo + step;
        let f_hi = bessel_j(nu, hi)?;
        if f_lo > 0.0 && f_hi <= 0.0 {
            bracketed = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    if !bracketed {
        return Err(Error::SpecFunDomain(format!(
            "no sign change of J_{nu} found on (0, {}]",
            nu + 10.0
        )));
    }
    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= 1e-14 * mid {
            break;
        }
        if bessel_j(nu, mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Hardy eigenvalue curve on the unit ball: `gamma (N - 2 - gamma)` below
/// the threshold `(N-2)/2`, the plateau `((N-2)/2)^2` at and above it.
pub fn hardy_lambda(gamma: f64, dim: u32) -> f64 {
    let nm2 = f64::from(dim) - 2.0;
    let thresh = 0.5 * nm2;
    if gamma < thresh {
        gamma * (nm2 - gamma)
    } else {
        thresh * thresh
    }
}

/// Explicit solution of `Δu + |∇u|^2 + lambda = 0` with `∂u/∂ν + beta u = 0`
/// on the unit ball, valid for `lambda < j_{(N-2)/2,1}^2`:
///
/// ```text
/// u(r) = (mu/beta) J_{N/2}(mu) / J_{(N-2)/2}(mu)
///        + log( r^{-(N-2)/2} J_{(N-2)/2}(mu r) / J_{(N-2)/2}(mu) ),   mu = sqrt(lambda).
/// ```
pub fn bessel_bvp_u(r: f64, dim: u32, lambda: f64, beta: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::SpecFunDomain(format!(
            "bessel_bvp_u requires 0 < r <= 1, got {r}"
        )));
    }
    if beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    let alpha = 0.5 * (f64::from(dim) - 2.0);
    if lambda < 0.0 {
        return Err(Error::SpecFunDomain(format!("lambda must be >= 0, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let jz = first_zero(alpha)?;
    if lambda >= jz * jz {
        return Err(Error::SpecFunDomain(format!(
            "lambda = {lambda} is at or above j_{{{alpha},1}}^2 = {}",
            jz * jz
        )));
    }
    let mu = lambda.sqrt();
    let j_alpha_mu = bessel_j(alpha, mu)?;
    let j_next_mu = bessel_j(alpha + 1.0, mu)?;
    let j_alpha_mur = bessel_j(alpha, mu * r)?;
    Ok(mu / beta * j_next_mu / j_alpha_mu + (r.powf(-alpha) * j_alpha_mur / j_alpha_mu).ln())
}

/// Explicit solution of `Δu + |∇u|^2 + lambda/|x|^2 = 0` with
/// `∂u/∂ν + beta u = 0` on the unit ball:
///
/// ```text
/// u(r) = alpha1 (log r - 1/beta),
/// alpha1 = ( -(N-2) + sqrt((N-2)^2 - 4 lambda) ) / 2,
/// ```
///
/// valid for `lambda <= (N-2)^2/4`.
pub fn power_bvp_u(r: f64, dim: u32, lambda: f64, beta: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::SpecFunDomain(format!(
            "power_bvp_u requires 0 < r <= 1, got {r}"
        )));
    }
    if beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    let nm2 = f64::from(dim) - 2.0;
    let disc = nm2 * nm2 - 4.0 * lambda;
    if disc < 0.0 {
        return Err(Error::DiscriminantNegative {
            product: lambda,
            limit: 0.25 * nm2 * nm2,
        });
    }
    let alpha1 = 0.5 * (-nm2 + disc.sqrt());
    Ok(alpha1 * (r.ln() - 1.0 / beta))
}
