//! Admissible weights, domains, and problem parameters.
//!
//! A weight is a finite sum of monomials `f(r) = sum_i c_i r^{p_i}` with
//! nonnegative coefficients (at least one positive) and exponents `p_i >= -2`.
//! The exponent floor is the weak-L^{N/2} membership threshold on the ball;
//! `p = -2` (the Hardy weight) is the extreme admissible case and the only
//! one that leaves a finite local threshold at the origin. Singularities are
//! allowed only at the center `r = 0`, so the boundary stays clean.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

/// Space dimension `N >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be >= 3, got {n}"
            )));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One monomial `c r^p` of a radial weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// Radial weight `f(r) = sum_i c_i r^{p_i}`, admissible per [`validate_weight`].
///
/// Positivity on `(0, 1]` is automatic: every term is nonnegative there and
/// at least one coefficient is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialWeight {
    terms: Vec<WeightTerm>,
}

/// Classification of the weight at `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularityClass {
    /// All exponents above -2: the local Dirichlet threshold blows up as the
    /// ball shrinks, so the singularity set is empty.
    Regular,
    /// An `r^-2` term is present: the local threshold at the origin stays
    /// finite (the Hardy constant scaled by the critical coefficient).
    HardyCritical,
}

/// Outcome of weight validation.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub admissible: bool,
    pub class: SingularityClass,
    /// Coefficient of the `r^-2` term (0 when absent); this is the datum
    /// entering the indicial equation of the singular ODE.
    pub hardy_coefficient: f64,
    /// `∫_0^1 f(r) r^{N-1} dr`, evaluated term by term in closed form
    /// (finite for every admissible weight since `p + N - 1 > -1`).
    pub weighted_volume: f64,
}

/// Validates a raw term list against the admissibility rules and classifies
/// the singularity at the origin.
///
/// Rejects any `p < -2`, any `c < 0`, and all-zero coefficient lists. Total
/// on syntactically well-formed inputs and idempotent.
pub fn validate_weight(terms: &[(f64, f64)], dim: Dimension) -> Result<ValidationReport> {
    if terms.is_empty() {
        return Err(Error::InvalidWeight("empty term list".into()));
    }
    let mut any_positive = false;
    let mut hardy_coefficient = 0.0;
    for &(c, p) in terms {
        if !c.is_finite() || !p.is_finite() {
            return Err(Error::InvalidWeight(format!(
                "non-finite term ({c}, {p})"
            )));
        }
        if c < 0.0 {
            return Err(Error::InvalidWeight(format!(
                "coefficient {c} is negative"
            )));
        }
        if p < -2.0 {
            return Err(Error::InvalidWeight(format!(
                "exponent {p} below the admissible floor -2"
            )));
        }
        if c > 0.0 {
            any_positive = true;
            if p == -2.0 {
                hardy_coefficient += c;
            }
        }
    }
    if !any_positive {
        return Err(Error::InvalidWeight(
            "all coefficients are zero".into(),
        ));
    }
    let n = dim.as_f64();
    let weighted_volume = terms
        .iter()
        .filter(|(c, _)| *c > 0.0)
        .map(|&(c, p)| c / (p + n)) // ∫_0^1 r^{p+N-1} dr = 1/(p+N)
        .sum();
    let class = if hardy_coefficient > 0.0 {
        SingularityClass::HardyCritical
    } else {
        SingularityClass::Regular
    };
    Ok(ValidationReport {
        admissible: true,
        class,
        hardy_coefficient,
        weighted_volume,
    })
}

impl RadialWeight {
    /// Builds a weight from `(coefficient, exponent)` pairs, dropping
    /// zero-coefficient terms after validation.
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        // Validation does not depend on N beyond N >= 3; use the floor.
        validate_weight(&terms, Dimension::new(3)?)?;
        let terms = terms
            .into_iter()
            .filter(|&(c, _)| c > 0.0)
            .map(|(coeff, exponent)| WeightTerm { coeff, exponent })
            .collect();
        Ok(RadialWeight { terms })
    }

    /// Constant weight `f ≡ c`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![(c, 0.0)])
    }

    /// The Hardy weight `f(r) = r^-2`.
    pub fn hardy() -> Self {
        RadialWeight {
            terms: vec![WeightTerm { coeff: 1.0, exponent: -2.0 }],
        }
    }

    pub fn terms(&self) -> &[WeightTerm] {
        &self.terms
    }

    /// Pointwise evaluation; callers keep `r > 0` when a singular term is
    /// present.
    pub fn eval(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * r.powf(t.exponent))
            .sum()
    }

    /// Coefficient of the `r^-2` term, 0 if absent.
    pub fn hardy_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.exponent == -2.0)
            .map(|t| t.coeff)
            .sum()
    }

    pub fn is_hardy_critical(&self) -> bool {
        self.hardy_coefficient() > 0.0
    }

    /// Validation report for this weight in dimension `dim`.
    pub fn report(&self, dim: Dimension) -> ValidationReport {
        let raw: Vec<(f64, f64)> = self.terms.iter().map(|t| (t.coeff, t.exponent)).collect();
        // Constructed weights are admissible by construction.
        validate_weight(&raw, dim).expect("constructed weight is admissible")
    }
}

impl fmt::Display for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                if t.exponent == 0.0 {
                    format!("const:{}", t.coeff)
                } else if t.coeff == 1.0 && t.exponent == -2.0 {
                    "hardy".to_string()
                } else {
                    format!("power:{}:{}", t.coeff, t.exponent)
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "sum:{}", parts.join("+"))
        }
    }
}

fn parse_term(spec: &str, full: &str) -> Result<(f64, f64)> {
    let err = |msg: String| Error::WeightParse(full.to_string(), msg);
    if spec == "hardy" {
        return Ok((1.0, -2.0));
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let c: f64 = rest
            .parse()
            .map_err(|_| err(format!("bad constant `{rest}`")))?;
        return Ok((c, 0.0));
    }
    if let Some(rest) = spec.strip_prefix("power:") {
        let (c_str, p_str) = rest
            .split_once(':')
            .ok_or_else(|| err(format!("power term `{rest}` needs `power:<c>:<p>`")))?;
        let c: f64 = c_str
            .parse()
            .map_err(|_| err(format!("bad coefficient `{c_str}`")))?;
        let p: f64 = p_str
            .parse()
            .map_err(|_| err(format!("bad exponent `{p_str}`")))?;
        return Ok((c, p));
    }
    Err(err(format!("unknown term `{spec}`")))
}

/// Weight mini-language: `const:<c>`, `hardy`, `power:<c>:<p>`, and
/// `sum:` joining terms with `+`, e.g. `sum:const:1+power:0.5:-1`.
impl FromStr for RadialWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms: Vec<(f64, f64)> = if let Some(rest) = s.strip_prefix("sum:") {
            rest.split('+')
                .map(|part| parse_term(part, s))
                .collect::<Result<_>>()?
        } else {
            vec![parse_term(s, s)?]
        };
        RadialWeight::new(terms).map_err(|e| match e {
            Error::InvalidWeight(msg) => Error::WeightParse(s.to_string(), msg),
            other => other,
        })
    }
}

/// Ball of radius `R` centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallDomain {
    radius: f64,
}

impl Default for BallDomain {
    fn default() -> Self {
        BallDomain { radius: 1.0 }
    }
}

impl BallDomain {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be > 0, got {radius}"
            )));
        }
        Ok(BallDomain { radius })
    }

    pub fn radius(self) -> f64 {
        self.radius
    }
}

/// Boundary and source parameters of the nonlinear problem.
///
/// `lambda` is stored unscaled; the solver applies the `sigma0` scaling
/// internally (the existence threshold reads `lambda < lambda_1f / sigma0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobinParams {
    pub gamma: f64,
    pub beta: f64,
    pub lambda: f64,
    pub sigma0: f64,
}

impl RobinParams {
    pub fn new(gamma: f64, beta: f64, lambda: f64, sigma0: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        if !sigma0.is_finite() || sigma0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must be > 0, got {sigma0}"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        if gamma.is_nan() {
            return Err(Error::InvalidParameter("gamma is NaN".into()));
        }
        Ok(RobinParams { gamma, beta, lambda, sigma0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn dimension_floor() {
        assert!(Dimension::new(2).is_err());
        assert_eq!(dim(3).get(), 3);
    }

    #[test]
    fn constant_weight_is_regular() {
        let rep = validate_weight(&[(1.0, 0.0)], dim(3)).unwrap();
        assert!(rep.admissible);
        assert_eq!(rep.class, SingularityClass::Regular);
        assert_eq!(rep.hardy_coefficient, 0.0);
        assert!((rep.weighted_volume - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hardy_weight_is_critical() {
        let rep = validate_weight(&[(1.0, -2.0)], dim(4)).unwrap();
        assert_eq!(rep.class, SingularityClass::HardyCritical);
        assert_eq!(rep.hardy_coefficient, 1.0);
        // ∫_0^1 r^{N-3} dr = 1/(N-2)
        assert!((rep.weighted_volume - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejections() {
        assert!(validate_weight(&[(1.0, -3.0)], dim(3)).is_err()); // p < -2
        assert!(validate_weight(&[(-1.0, 0.0)], dim(3)).is_err()); // c < 0
        assert!(validate_weight(&[(0.0, 0.0), (0.0, 1.0)], dim(3)).is_err()); // all zero
        assert!(validate_weight(&[], dim(3)).is_err());
    }

    #[test]
    fn validation_is_idempotent() {
        let terms = [(0.5, -2.0), (2.0, 1.5)];
        let a = validate_weight(&terms, dim(5)).unwrap();
        let b = validate_weight(&terms, dim(5)).unwrap();
        assert_eq!(a.hardy_coefficient, b.hardy_coefficient);
        assert_eq!(a.class, b.class);
        assert_eq!(a.weighted_volume, b.weighted_volume);
    }

    #[test]
    fn weighted_volume_is_termwise_finite() {
        // p + N - 1 > -1 holds for every admissible term, so each closed-form
        // moment is finite; spot-check a mixed weight against hand arithmetic.
        let rep = validate_weight(&[(1.0, -2.0), (3.0, 0.0)], dim(3)).unwrap();
        assert!((rep.weighted_volume - (1.0 + 1.0)).abs() < 1e-15);
        assert!(rep.weighted_volume.is_finite());
    }

    #[test]
    fn eval_sums_terms() {
        let w = RadialWeight::new(vec![(1.0, 0.0), (0.5, -1.0)]).unwrap();
        assert!((w.eval(0.5) - (1.0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn mini_language_round_trip() {
        let cases = [
            ("const:1", vec![(1.0, 0.0)]),
            ("hardy", vec![(1.0, -2.0)]),
            ("power:0.5:-1", vec![(0.5, -1.0)]),
            (
                "sum:const:1+power:0.5:-1",
                vec![(1.0, 0.0), (0.5, -1.0)],
            ),
            (
                "sum:hardy+const:2",
                vec![(1.0, -2.0), (2.0, 0.0)],
            ),
        ];
        for (s, want) in cases {
            let w: RadialWeight = s.parse().unwrap();
            let got: Vec<(f64, f64)> =
                w.terms().iter().map(|t| (t.coeff, t.exponent)).collect();
            assert_eq!(got, want, "spec `{s}`");
            // Display emits a string that parses back to the same weight.
            let again: RadialWeight = w.to_string().parse().unwrap();
            assert_eq!(again, w);
        }
    }

    #[test]
    fn mini_language_rejects_garbage() {
        for s in ["", "pow:1:2", "const:x", "power:1", "sum:", "power:1:-3"] {
            assert!(s.parse::<RadialWeight>().is_err(), "spec `{s}`");
        }
    }

    #[test]
    fn params_validation() {
        assert!(RobinParams::new(0.5, 1.0, 0.0, 1.0).is_ok());
        assert!(RobinParams::new(0.5, 0.0, 0.0, 1.0).is_err());
        assert!(RobinParams::new(0.5, 1.0, -1.0, 1.0).is_err());
        assert!(RobinParams::new(0.5, 1.0, 0.0, 0.0).is_err());
        // gamma may be any real (negative boundary weight is meaningful)
        assert!(RobinParams::new(-3.0, 1.0, 0.0, 1.0).is_ok());
        assert!(RobinParams::new(f64::INFINITY, 1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn ball_domain_default_unit() {
        assert_eq!(BallDomain::default().radius(), 1.0);
        assert!(BallDomain::new(0.0).is_err());
        assert!(BallDomain::new(-1.0).is_err());
    }
}
