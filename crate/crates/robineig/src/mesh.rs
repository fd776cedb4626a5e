//! Graded radial meshes and assembly of the reduced quadratic forms
//!
//! ```text
//! k[u]   = ∫_0^R u'(r)^2 r^{N-1} dr          (stiffness)
//! m_f[u] = ∫_0^R f(r) u(r)^2 r^{N-1} dr      (weighted mass)
//! m_1[u] = m_f[u] with f ≡ 1                 (plain mass)
//! b[u]   = R^{N-1} u(R)^2                    (boundary form)
//! ```
//!
//! over piecewise-linear nodal basis functions, per unit solid angle (the
//! common sphere-area factor cancels from every quotient). Every matrix
//! entry is the exact integral of the corresponding basis product against
//! the monomial measure: element integrals of `r^s` times a quadratic in
//! the local coordinate are evaluated in closed form, switching between a
//! binomial expansion (wide elements) and a power series in `h/a` (narrow
//! elements) so no catastrophic cancellation occurs on fine meshes. The
//! node at `r = 0` carries a degree of freedom with no boundary condition:
//! the vanishing measure `r^{N-1}` encodes the natural regularity condition
//! at the origin.

use serde::Serialize;

use crate::domain::{Dimension, RadialWeight};
use crate::eig::SymTridiag;
use crate::{Error, Result};

/// Radial mesh with nodes `r_i = (i/n)^q R`, `i = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradedMesh {
    nodes: Vec<f64>,
    grading: f64,
}

impl GradedMesh {
    /// Builds the `n`-element mesh on `[0, radius]` with grading exponent
    /// `q >= 1` (`q = 1` is uniform; larger `q` packs nodes toward `r = 0`,
    /// where singular-weight minimizers have unbounded gradients).
    pub fn build(n: usize, q: f64, radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMesh(format!(
                "element count must be >= 2, got {n}"
            )));
        }
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::InvalidMesh(format!(
                "grading exponent must be >= 1, got {q}"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidMesh(format!(
                "radius must be > 0, got {radius}"
            )));
        }
        let integer_q = q.fract() == 0.0 && q <= i32::MAX as f64;
        let nodes: Vec<f64> = (0..=n)
            .map(|i| {
                let x = i as f64 / n as f64;
                let g = if integer_q { x.powi(q as i32) } else { x.powf(q) };
                g * radius
            })
            .collect();
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        Ok(GradedMesh { nodes, grading: q })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of elements.
    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn radius(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Geometrically scaled copy covering `[0, radius]`.
    pub fn scaled_to(&self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidMesh(format!(
                "radius must be > 0, got {radius}"
            )));
        }
        let factor = radius / self.radius();
        Ok(GradedMesh {
            nodes: self.nodes.iter().map(|r| r * factor).collect(),
            grading: self.grading,
        })
    }

    /// Debug serialization, `{"nodes":[...]}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "nodes": self.nodes }).to_string()
    }
}

/// Convenience wrapper for [`GradedMesh::build`].
pub fn build_mesh(n: usize, q: f64, radius: f64) -> Result<GradedMesh> {
    GradedMesh::build(n, q, radius)
}

/// Assembled forms of one `(mesh, N, f)` triple.
///
/// `stiffness` is positive semidefinite with kernel exactly the constants;
/// both mass matrices are positive definite. The boundary form touches only
/// the `(boundary_index, boundary_index)` entry and equals
/// `boundary_weight * u(R)^2`.
#[derive(Debug, Clone)]
pub struct OperatorTriple {
    pub stiffness: SymTridiag,
    pub mass_f: SymTridiag,
    pub mass_one: SymTridiag,
    pub boundary_index: usize,
    pub boundary_weight: f64,
}

impl OperatorTriple {
    /// `K + gamma * B` as a tridiagonal matrix.
    pub fn robin_matrix(&self, gamma: f64) -> SymTridiag {
        let mut a = self.stiffness.clone();
        a.diag_mut()[self.boundary_index] += gamma * self.boundary_weight;
        a
    }

    /// Boundary form `b[u] = R^{N-1} u(R)^2`.
    pub fn boundary_form(&self, x: &[f64]) -> f64 {
        self.boundary_weight * x[self.boundary_index] * x[self.boundary_index]
    }
}

/// Exact element integrals `∫_a^b r^s t^j (1-t)^m dr`, `t = (r-a)/h`.
///
/// Valid for `s > -1` on the first element (`a = 0`) and any real `s` on
/// interior elements. Three regimes:
///
/// - `a = 0`: closed products `b^{s+1} ∫ u^{s+j}(1-u)^m du` (Beta values
///   with integer `m`),
/// - `h/a > 1/2`: binomial expansion of the local polynomial into plain
///   monomial moments (amplification bounded by `(1 + a/h)^2 <= 9`),
/// - `h/a <= 1/2`: power series in `h/a`, all closed form, no cancellation.
pub(crate) fn element_integral(s: f64, a: f64, b: f64, j: u32, m: u32) -> f64 {
    debug_assert!(b > a && a >= 0.0);
    debug_assert!(j + m <= 2);
    let h = b - a;
    if a == 0.0 {
        // ∫_0^b r^s (r/b)^j (1-r/b)^m dr = b^{s+1} B(s+j+1, m+1)
        return b.powf(s + 1.0) * beta_integer(s + f64::from(j), m);
    }
    let eps = h / a;
    if eps > 0.5 {
        binomial_moments(s, a, b, j, m)
    } else {
        series_moments(s, a, h, eps, j, m)
    }
}

/// `∫_0^1 u^x (1-u)^m du` for integer `m <= 2` and `x > -1`.
fn beta_integer(x: f64, m: u32) -> f64 {
    match m {
        0 => 1.0 / (x + 1.0),
        1 => 1.0 / ((x + 1.0) * (x + 2.0)),
        2 => 2.0 / ((x + 1.0) * (x + 2.0) * (x + 3.0)),
        _ => unreachable!("basis products are at most quadratic"),
    }
}

/// Plain monomial moment `μ_s = ∫_a^b r^s dr` for `a > 0`, cancellation-free:
/// `a^{s+1} expm1((s+1) log1p(h/a)) / (s+1)`.
fn monomial_moment(s: f64, a: f64, b: f64) -> f64 {
    let h = b - a;
    if s == -1.0 {
        return (h / a).ln_1p();
    }
    let sp1 = s + 1.0;
    a.powf(sp1) * (sp1 * (h / a).ln_1p()).exp_m1() / sp1
}

fn binomial_moments(s: f64, a: f64, b: f64, j: u32, m: u32) -> f64 {
    let h = b - a;
    let mu0 = monomial_moment(s, a, b);
    let mu1 = monomial_moment(s + 1.0, a, b);
    let mu2 = monomial_moment(s + 2.0, a, b);
    let h2 = h * h;
    match (j, m) {
        (0, 0) => mu0,
        // (1-t)^2 = (b-r)^2 / h^2
        (0, 2) => (b * b * mu0 - 2.0 * b * mu1 + mu2) / h2,
        // t(1-t) = (r-a)(b-r)/h^2
        (1, 1) => (-mu2 + (a + b) * mu1 - a * b * mu0) / h2,
        // t^2 = (r-a)^2 / h^2
        (2, 0) => (mu2 - 2.0 * a * mu1 + a * a * mu0) / h2,
        (1, 0) => (mu1 - a * mu0) / h,
        (0, 1) => (b * mu0 - mu1) / h,
        _ => unreachable!(),
    }
}

fn series_moments(s: f64, a: f64, h: f64, eps: f64, j: u32, m: u32) -> f64 {
    // h a^s ∫_0^1 (1+eps t)^s t^j (1-t)^m dt, binomial series in eps.
    let mut coeff = 1.0; // C(s, k) eps^k
    let mut sum = 0.0;
    for k in 0..200u32 {
        if k > 0 {
            coeff *= (s - f64::from(k) + 1.0) / f64::from(k) * eps;
        }
        let term = coeff * beta_integer(f64::from(k + j), m);
        sum += term;
        if k > 2 && term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    h * a.powf(s) * sum
}

/// Assembles the stiffness, weighted mass, plain mass, and boundary data for
/// `(mesh, N, f)`. Element contributions are accumulated in index order so
/// the result is bit-reproducible.
pub fn assemble(mesh: &GradedMesh, dim: Dimension, f: &RadialWeight) -> OperatorTriple {
    let nodes = mesh.nodes();
    let n_nodes = nodes.len();
    let n = dim.as_f64();

    let mut k_diag = vec![0.0; n_nodes];
    let mut k_off = vec![0.0; n_nodes - 1];
    let mut mf_diag = vec![0.0; n_nodes];
    let mut mf_off = vec![0.0; n_nodes - 1];
    let mut m1_diag = vec![0.0; n_nodes];
    let mut m1_off = vec![0.0; n_nodes - 1];

    for e in 0..n_nodes - 1 {
        let a = nodes[e];
        let b = nodes[e + 1];
        let h = b - a;

        // Stiffness: basis slopes are ±1/h, so each entry is μ_{N-1}/h^2.
        let kv = element_integral(n - 1.0, a, b, 0, 0) / (h * h);
        k_diag[e] += kv;
        k_diag[e + 1] += kv;
        k_off[e] -= kv;

        // Plain mass (f ≡ 1): s = N - 1.
        let s1 = n - 1.0;
        m1_diag[e] += element_integral(s1, a, b, 0, 2);
        m1_diag[e + 1] += element_integral(s1, a, b, 2, 0);
        m1_off[e] += element_integral(s1, a, b, 1, 1);

        // Weighted mass, term by term: s = p + N - 1.
        for term in f.terms() {
            let s = term.exponent + n - 1.0;
            mf_diag[e] += term.coeff * element_integral(s, a, b, 0, 2);
            mf_diag[e + 1] += term.coeff * element_integral(s, a, b, 2, 0);
            mf_off[e] += term.coeff * element_integral(s, a, b, 1, 1);
        }
    }

    let boundary_index = n_nodes - 1;
    let boundary_weight = mesh.radius().powi(dim.get() as i32 - 1);

    OperatorTriple {
        stiffness: SymTridiag::new(k_diag, k_off).expect("assembled stiffness is well-formed"),
        mass_f: SymTridiag::new(mf_diag, mf_off).expect("assembled mass is well-formed"),
        mass_one: SymTridiag::new(m1_diag, m1_off).expect("assembled mass is well-formed"),
        boundary_index,
        boundary_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    // ---- independent quadrature oracle ----
    //
    // Gauss-Legendre nodes by Newton iteration on Legendre polynomials, then
    // composite panels; for the singular first element the substitution
    // r = b u^K with K(s+1) >= 8 removes the singularity first. Entirely
    // separate from the closed-form element integrals it is checking.

    fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, 0.0f64);
                for k in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k as f64 + 1.0) * t * p1 - k as f64 * p2) / (k as f64 + 1.0);
                }
                let dp = n as f64 * (t * p0 - p1) / (t * t - 1.0);
                let dt = p0 / dp;
                t -= dt;
                if dt.abs() < 1e-15 {
                    break;
                }
            }
            x[i] = -t;
            let (mut p0, mut p1) = (1.0f64, 0.0f64);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k as f64 + 1.0) * t * p1 - k as f64 * p2) / (k as f64 + 1.0);
            }
            let dp = n as f64 * (t * p0 - p1) / (t * t - 1.0);
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        (x, w)
    }

    fn quad_panels(g: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let (x, w) = gauss_legendre(24);
        let mut total = 0.0;
        for p in 0..panels {
            let pa = a + (b - a) * p as f64 / panels as f64;
            let pb = a + (b - a) * (p + 1) as f64 / panels as f64;
            let c = 0.5 * (pa + pb);
            let r = 0.5 * (pb - pa);
            let mut s = 0.0;
            for i in 0..x.len() {
                s += w[i] * g(c + r * x[i]);
            }
            total += s * r;
        }
        total
    }

    /// Oracle for ∫_a^b r^s t^j (1-t)^m dr.
    fn oracle_integral(s: f64, a: f64, b: f64, j: u32, m: u32) -> f64 {
        let h = b - a;
        if a == 0.0 {
            // substitute r = b u^K with K(s+1) >= 8; composing the powers
            // analytically keeps the integrand finite near u = 0
            let k = ((8.0 / (s + 1.0)).ceil() as i32).max(1);
            let kf = f64::from(k);
            let gu = move |u: f64| {
                let t = u.powi(k); // = r/b
                kf * b.powf(s + 1.0)
                    * u.powf(kf * (s + 1.0) - 1.0 + kf * f64::from(j))
                    * (1.0 - t).powi(m as i32)
            };
            quad_panels(&gu, 0.0, 1.0, 32)
        } else {
            let g = move |r: f64| {
                let t = (r - a) / h;
                r.powf(s) * t.powi(j as i32) * (1.0 - t).powi(m as i32)
            };
            // enough panels that each spans a mild relative range
            let panels = (8.0 * h / a).ceil().max(2.0).min(64.0) as usize;
            quad_panels(&g, a, b, panels)
        }
    }

    #[test]
    fn build_mesh_examples() {
        let m = build_mesh(4, 1.0, 1.0).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);

        let m = build_mesh(2, 2.0, 1.0).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.25, 1.0]);

        let m = build_mesh(4, 2.0, 0.5).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.03125, 0.125, 0.28125, 0.5]);
    }

    #[test]
    fn build_mesh_rejections() {
        assert!(build_mesh(1, 1.0, 1.0).is_err());
        assert!(build_mesh(4, 0.5, 1.0).is_err());
        assert!(build_mesh(4, 1.0, 0.0).is_err());
        assert!(build_mesh(4, 1.0, -2.0).is_err());
    }

    #[test]
    fn mesh_json_shape() {
        let m = build_mesh(2, 1.0, 1.0).unwrap();
        assert_eq!(m.to_json(), r#"{"nodes":[0.0,0.5,1.0]}"#);
    }

    #[test]
    fn single_element_stiffness_entry() {
        // N = 3, f ≡ 1, one element on [0,1] is disallowed (n >= 2), so
        // check the element integral directly: K_00 = ∫_0^1 r^2 dr = 1/3
        // with slope -1 for the left basis function.
        let kv = element_integral(2.0, 0.0, 1.0, 0, 0) / 1.0;
        assert!((kv - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_vector_annihilates_stiffness() {
        let mesh = build_mesh(64, 2.0, 1.0).unwrap();
        let ops = assemble(&mesh, dim(3), &RadialWeight::constant(1.0).unwrap());
        let ones = vec![1.0; mesh.nodes().len()];
        let k = ops.stiffness.quadratic_form(&ones);
        let scale = ops.stiffness.diag().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(k.abs() <= 1e-13 * scale);
        // kernel check through the matvec residual
        let kx = ops.stiffness.matvec(&ones);
        let r: f64 = kx.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(r <= 1e-12 * scale);
    }

    #[test]
    fn unit_mass_matches_moment() {
        // N = 3, f ≡ 1, x = 1: x^T Mf x = ∫_0^1 r^2 dr = 1/3 on any mesh.
        for n in [2usize, 7, 64] {
            let mesh = build_mesh(n, 2.0, 1.0).unwrap();
            let ops = assemble(&mesh, dim(3), &RadialWeight::constant(1.0).unwrap());
            let ones = vec![1.0; mesh.nodes().len()];
            let v = ops.mass_f.quadratic_form(&ones);
            assert!((v - 1.0 / 3.0).abs() < 1e-14, "n = {n}: {v}");
        }
    }

    #[test]
    fn element_integrals_match_quadrature_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cases: &[(u32, u32)] = &[(0, 0), (0, 2), (1, 1), (2, 0)];
        for _ in 0..400 {
            let s: f64 = rng.gen_range(-0.95..4.0);
            let (a, b) = if rng.gen_bool(0.3) {
                (0.0, rng.gen_range(0.01..1.0))
            } else {
                let a: f64 = rng.gen_range(1e-6..1.0f64);
                let h: f64 = a * rng.gen_range(1e-6..4.0);
                (a, a + h)
            };
            for &(j, m) in cases {
                let got = element_integral(s, a, b, j, m);
                let want = oracle_integral(s, a, b, j, m);
                let denom = want.abs().max(1e-300);
                assert!(
                    (got - want).abs() / denom < 1e-12,
                    "s={s}, a={a}, b={b}, j={j}, m={m}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn quadratic_form_exactness_against_quadrature() {
        // x^T Mf x equals the analytic ∫ f u_h^2 r^{N-1} dr of the linear
        // interpolant, to machine-level tolerance, on random meshes and
        // random monomial weights (the Hardy exponent included).
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in 0..30 {
            let n_el = rng.gen_range(2..24);
            let q = rng.gen_range(1.0..3.0);
            let ndim = rng.gen_range(3..=6u32);
            let p = if case % 3 == 0 {
                -2.0
            } else {
                rng.gen_range(-1.9..2.0)
            };
            let c = rng.gen_range(0.1..3.0);
            let mesh = build_mesh(n_el, q, 1.0).unwrap();
            let w = RadialWeight::new(vec![(c, p)]).unwrap();
            let ops = assemble(&mesh, dim(ndim), &w);
            let x: Vec<f64> = (0..=n_el).map(|_| rng.gen_range(-1.0..1.0)).collect();

            let got = ops.mass_f.quadratic_form(&x);
            // oracle: per-element quadrature of f u_h^2 r^{N-1}
            let nodes = mesh.nodes();
            let s = p + f64::from(ndim) - 1.0;
            let mut want = 0.0;
            for e in 0..n_el {
                let (a, b) = (nodes[e], nodes[e + 1]);
                let (xa, xb) = (x[e], x[e + 1]);
                let h = b - a;
                want += if a == 0.0 {
                    let k = ((8.0 / (s + 1.0)).ceil() as i32).max(1);
                    let kf = f64::from(k);
                    let gu = move |u: f64| {
                        let t = u.powi(k); // = r/b
                        let uh = xa * (1.0 - t) + xb * t;
                        c * kf * b.powf(s + 1.0) * u.powf(kf * (s + 1.0) - 1.0) * uh * uh
                    };
                    quad_panels(&gu, 0.0, 1.0, 32)
                } else {
                    let g = move |r: f64| {
                        let t = (r - a) / h;
                        let uh = xa * (1.0 - t) + xb * t;
                        c * r.powf(s) * uh * uh
                    };
                    let panels = (8.0 * h / a).ceil().max(2.0).min(64.0) as usize;
                    quad_panels(&g, a, b, panels)
                };
            }
            let scale = got.abs().max(want.abs()).max(1e-30);
            assert!(
                (got - want).abs() / scale < 1e-13,
                "case {case}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn nested_mesh_consistency() {
        // A function linear on the coarse elements is representable on the
        // midpoint refinement; both meshes must give the same forms.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let coarse = build_mesh(8, 2.0, 1.0).unwrap();
        let mut fine_nodes = Vec::new();
        for w in coarse.nodes().windows(2) {
            fine_nodes.push(w[0]);
            fine_nodes.push(0.5 * (w[0] + w[1]));
        }
        fine_nodes.push(coarse.radius());
        let fine = GradedMesh { nodes: fine_nodes, grading: coarse.grading() };

        let w = RadialWeight::new(vec![(1.0, -2.0), (0.5, 1.0)]).unwrap();
        let ops_c = assemble(&coarse, dim(4), &w);
        let ops_f = assemble(&fine, dim(4), &w);

        let xc: Vec<f64> = (0..coarse.nodes().len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut xf = Vec::new();
        for i in 0..coarse.elements() {
            xf.push(xc[i]);
            xf.push(0.5 * (xc[i] + xc[i + 1]));
        }
        xf.push(*xc.last().unwrap());

        for (mc, mf) in [
            (&ops_c.stiffness, &ops_f.stiffness),
            (&ops_c.mass_f, &ops_f.mass_f),
            (&ops_c.mass_one, &ops_f.mass_one),
        ] {
            let vc = mc.quadratic_form(&xc);
            let vf = mf.quadratic_form(&xf);
            let scale = vc.abs().max(vf.abs()).max(1e-30);
            assert!((vc - vf).abs() / scale < 1e-13, "coarse {vc} vs fine {vf}");
        }
        assert_eq!(ops_c.boundary_form(&xc), ops_f.boundary_form(&xf));
    }

    #[test]
    fn boundary_form_touches_only_last_entry() {
        let mesh = build_mesh(16, 2.0, 2.0).unwrap();
        let ops = assemble(&mesh, dim(5), &RadialWeight::hardy());
        assert_eq!(ops.boundary_index, 16);
        assert_eq!(ops.boundary_weight, 2.0f64.powi(4));
        let a = ops.robin_matrix(3.0);
        for i in 0..16 {
            assert_eq!(a.diag()[i], ops.stiffness.diag()[i]);
        }
        assert_eq!(
            a.diag()[16],
            ops.stiffness.diag()[16] + 3.0 * ops.boundary_weight
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Mass matrices stay positive definite across random admissible
        /// meshes/weights (checked through the factorization pivots).
        #[test]
        fn mass_positive_definite(
            n_el in 2usize..32,
            q in 1.0f64..3.0,
            p in -2.0f64..2.0,
            ndim in 3u32..7,
        ) {
            let mesh = build_mesh(n_el, q, 1.0).unwrap();
            let w = RadialWeight::new(vec![(1.0, p)]).unwrap();
            let ops = assemble(&mesh, Dimension::new(ndim).unwrap(), &w);
            let zero = SymTridiag::zeros(ops.mass_f.dim());
            prop_assert_eq!(crate::eig::inertia_below_robust(&ops.mass_f, &zero, 0.0, 1.0), 0);
            prop_assert_eq!(crate::eig::inertia_below_robust(&ops.mass_one, &zero, 0.0, 1.0), 0);
        }
    }
}
