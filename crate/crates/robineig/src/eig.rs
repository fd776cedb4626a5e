//! Extremal eigenpairs of the symmetric tridiagonal pencil `A x = λ M x`
//! (`M` positive definite, `A` possibly indefinite).
//!
//! Eigenvalues are located by counting the negative pivots of the `LDL^T`
//! factorization of `A - t M` (Sylvester inertia): the count equals the
//! number of pencil eigenvalues strictly below `t` and is nondecreasing in
//! `t`, so plain bisection brackets any eigenvalue. Eigenvectors come from
//! shifted inverse iteration with the converged bracket endpoint as shift,
//! and the returned eigenvalue is the Rayleigh quotient of the final vector.
//!
//! Zero pivots are handled by perturbing the shift one ulp-scale step at a
//! time and refactoring, which preserves the tridiagonal inertia recurrence
//! (no pivoting).

use crate::{Error, Result};

/// Symmetric tridiagonal matrix stored as main diagonal plus one
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter(
                "tridiagonal matrix must have at least one row".into(),
            ));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "off-diagonal length {} does not match dimension {}",
                off.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "tridiagonal entries must be finite".into(),
            ));
        }
        Ok(SymTridiag { diag, off })
    }

    pub fn zeros(n: usize) -> Self {
        SymTridiag { diag: vec![0.0; n], off: vec![0.0; n.saturating_sub(1)] }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn diag_mut(&mut self) -> &mut [f64] {
        &mut self.diag
    }

    pub fn off_mut(&mut self) -> &mut [f64] {
        &mut self.off
    }

    /// `y = T x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }

    /// `x^T T x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        assert_eq!(x.len(), n);
        let mut s = 0.0;
        for i in 0..n {
            s += self.diag[i] * x[i] * x[i];
            if i + 1 < n {
                s += 2.0 * self.off[i] * x[i] * x[i + 1];
            }
        }
        s
    }

    /// `self - t * other`, entrywise.
    pub fn shifted(&self, other: &SymTridiag, t: f64) -> SymTridiag {
        let diag = self
            .diag
            .iter()
            .zip(&other.diag)
            .map(|(a, m)| a - t * m)
            .collect();
        let off = self
            .off
            .iter()
            .zip(&other.off)
            .map(|(e, f)| e - t * f)
            .collect();
        SymTridiag { diag, off }
    }

    /// `self + t * other`, entrywise.
    pub fn plus_scaled(&self, other: &SymTridiag, t: f64) -> SymTridiag {
        self.shifted(other, -t)
    }

    /// Copy with the last row and column removed (Dirichlet restriction).
    pub fn drop_last(&self) -> SymTridiag {
        let n = self.dim();
        assert!(n >= 2, "cannot drop the only row");
        SymTridiag {
            diag: self.diag[..n - 1].to_vec(),
            off: self.off[..n - 2].to_vec(),
        }
    }

    fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.off.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Converged eigenpair with its scaled residual
/// `||A x - λ M x|| / max(||A x||, ||M x||)`.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Which end of the spectrum to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    Smallest,
    Largest,
}

/// Default relative tolerance for bisection and residuals.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Number of pencil eigenvalues strictly below `t`, by counting negative
/// pivots of `LDL^T` applied to `A - t M`.
///
/// Fails with [`Error::PivotBreakdown`] if a pivot is exactly zero; callers
/// perturb `t` by one ulp-scale step and retry (see [`inertia_below_robust`]).
pub fn inertia_below(a: &SymTridiag, m: &SymTridiag, t: f64) -> Result<usize> {
    let n = a.dim();
    debug_assert_eq!(n, m.dim());
    let mut count = 0usize;
    let mut d = a.diag[0] - t * m.diag[0];
    if d == 0.0 {
        return Err(Error::PivotBreakdown { shift: t });
    }
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e = a.off[i - 1] - t * m.off[i - 1];
        d = (a.diag[i] - t * m.diag[i]) - e * e / d;
        if d == 0.0 {
            return Err(Error::PivotBreakdown { shift: t });
        }
        if d < 0.0 {
            count += 1;
        }
    }
    Ok(count)
}

/// [`inertia_below`] with automatic one-sided shift perturbation on exact
/// zero pivots. `scale` sets the ulp step (typically the bracket magnitude).
pub fn inertia_below_robust(a: &SymTridiag, m: &SymTridiag, t: f64, scale: f64) -> usize {
    let mut shift = t;
    let mut bump = f64::EPSILON * scale.abs().max(t.abs()).max(1e-300);
    loop {
        match inertia_below(a, m, shift) {
            Ok(c) => return c,
            Err(_) => {
                shift += bump;
                bump *= 2.0;
            }
        }
    }
}

/// Bracket the whole pencil spectrum: returns `(lo, hi, scale)` with
/// `inertia(lo) = 0` and `inertia(hi) = n`.
///
/// Seeds from generalized Gershgorin bounds scaled by the extremes of `M`'s
/// diagonal, then expands geometrically until the inertia counts agree.
fn spectrum_bracket(a: &SymTridiag, m: &SymTridiag) -> (f64, f64, f64) {
    let n = a.dim();
    // Row radius of A over a conservative lower bound for M's row mass.
    let mut num = 0.0f64;
    let mut den = f64::INFINITY;
    for i in 0..n {
        let e_l = if i > 0 { a.off[i - 1].abs() } else { 0.0 };
        let e_r = if i + 1 < n { a.off[i].abs() } else { 0.0 };
        num = num.max(a.diag[i].abs() + e_l + e_r);
        let f_l = if i > 0 { m.off[i - 1].abs() } else { 0.0 };
        let f_r = if i + 1 < n { m.off[i].abs() } else { 0.0 };
        den = den.min(m.diag[i] - f_l - f_r);
    }
    if !(den > 0.0) {
        // Gershgorin does not certify M here; fall back to a small fraction
        // of the diagonal floor and let the expansion loop take over.
        den = m.diag.iter().fold(f64::INFINITY, |acc, &v| acc.min(v)) * 1e-6;
        if !(den > 0.0) {
            den = 1e-300;
        }
    }
    let r = (num / den).max(1.0);
    let scale = r;
    let mut lo = -r;
    let mut hi = r;
    for _ in 0..2048 {
        if inertia_below_robust(a, m, lo, scale) == 0 {
            break;
        }
        lo *= 4.0;
    }
    for _ in 0..2048 {
        if inertia_below_robust(a, m, hi, scale) == n {
            break;
        }
        hi *= 4.0;
    }
    (lo, hi, scale)
}

/// Bisect until `inertia(lo) < k <= inertia(hi)` with bracket width
/// `<= tol * (1 + midpoint magnitude)`; returns the bracket.
fn bisect_kth(
    a: &SymTridiag,
    m: &SymTridiag,
    k: usize,
    tol: f64,
    lo0: f64,
    hi0: f64,
    scale: f64,
) -> (f64, f64) {
    let mut lo = lo0;
    let mut hi = hi0;
    for _ in 0..4096 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * (1.0 + mid.abs()) || mid <= lo || mid >= hi {
            break;
        }
        if inertia_below_robust(a, m, mid, scale) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// `k`-th pencil eigenvalue from below (1-based), by pure inertia bisection.
pub fn kth_eigenvalue(a: &SymTridiag, m: &SymTridiag, k: usize, tol: f64) -> Result<f64> {
    let n = a.dim();
    if n != m.dim() {
        return Err(Error::InvalidParameter(format!(
            "pencil dimensions differ: {n} vs {}",
            m.dim()
        )));
    }
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { k, size: n });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let (lo, hi, scale) = spectrum_bracket(a, m);
    let (lo, hi) = bisect_kth(a, m, k, tol, lo, hi, scale);
    Ok(0.5 * (lo + hi))
}

/// `LDL^T` factorization of a tridiagonal matrix; fails on an exact zero
/// pivot.
struct Ldlt {
    d: Vec<f64>,
    l: Vec<f64>,
}

fn ldlt(t: &SymTridiag) -> Result<Ldlt> {
    let n = t.dim();
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    d[0] = t.diag[0];
    if d[0] == 0.0 {
        return Err(Error::PivotBreakdown { shift: 0.0 });
    }
    for i in 1..n {
        l[i - 1] = t.off[i - 1] / d[i - 1];
        d[i] = t.diag[i] - l[i - 1] * t.off[i - 1];
        if d[i] == 0.0 {
            return Err(Error::PivotBreakdown { shift: 0.0 });
        }
    }
    Ok(Ldlt { d, l })
}

impl Ldlt {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut x = b.to_vec();
        for i in 1..n {
            x[i] -= self.l[i - 1] * x[i - 1];
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n - 1).rev() {
            let t = self.l[i] * x[i + 1];
            x[i] -= t;
        }
        x
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn pair_residual(a: &SymTridiag, m: &SymTridiag, value: f64, x: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let mx = m.matvec(x);
    let mut r = 0.0;
    for i in 0..x.len() {
        let d = ax[i] - value * mx[i];
        r += d * d;
    }
    r.sqrt() / norm2(&ax).max(norm2(&mx)).max(1e-300)
}

/// Fix the sign convention: the entry of largest magnitude is positive.
fn fix_sign(x: &mut [f64]) {
    let mut idx = 0;
    let mut best = 0.0f64;
    for (i, &v) in x.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            idx = i;
        }
    }
    if x[idx] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
}

/// Extremal eigenpair of the pencil.
///
/// The bracket comes from inertia bisection, then shifted inverse iteration
/// refines the vector from the deterministic all-ones start; the reported
/// eigenvalue is the final Rayleigh quotient. For [`Extremal::Largest`] the
/// pencil is negated internally.
pub fn extremal_eigenpair(
    a: &SymTridiag,
    m: &SymTridiag,
    which: Extremal,
    tol: f64,
) -> Result<EigenPair> {
    match which {
        Extremal::Smallest => smallest_eigenpair(a, m, tol),
        Extremal::Largest => {
            let neg = SymTridiag {
                diag: a.diag.iter().map(|v| -v).collect(),
                off: a.off.iter().map(|v| -v).collect(),
            };
            let mut pair = smallest_eigenpair(&neg, m, tol)?;
            pair.value = -pair.value;
            pair.residual = pair_residual(a, m, pair.value, &pair.vector);
            Ok(pair)
        }
    }
}

fn smallest_eigenpair(a: &SymTridiag, m: &SymTridiag, tol: f64) -> Result<EigenPair> {
    let n = a.dim();
    if n != m.dim() {
        return Err(Error::InvalidParameter(format!(
            "pencil dimensions differ: {n} vs {}",
            m.dim()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let (lo0, hi0, scale) = spectrum_bracket(a, m);
    let (lo, hi) = bisect_kth(a, m, 1, tol, lo0, hi0, scale);

    if n == 1 {
        let value = a.diag[0] / m.diag[0];
        return Ok(EigenPair { value, vector: vec![1.0], residual: 0.0 });
    }

    // Shift at the left bracket end: inertia there is 0, so A - sigma M is
    // positive definite and the unpivoted factorization is safe.
    let mut sigma = lo;
    let ulp = f64::EPSILON * (sigma.abs().max(scale)).max(1e-300);
    let mut fac = None;
    let mut bump = ulp;
    for _ in 0..128 {
        match ldlt(&a.shifted(m, sigma)) {
            Ok(f) => {
                fac = Some(f);
                break;
            }
            Err(_) => {
                sigma -= bump;
                bump *= 2.0;
            }
        }
    }
    let fac = fac.ok_or(Error::EigenNonConvergence { lo, hi, residual: f64::NAN })?;

    let mut x = vec![1.0; n];
    let inv_norm = 1.0 / norm2(&x);
    for v in x.iter_mut() {
        *v *= inv_norm;
    }
    let mut value = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    for _ in 0..60 {
        let mx = m.matvec(&x);
        let mut y = fac.solve(&mx);
        let ny = norm2(&y);
        if !ny.is_finite() || ny == 0.0 {
            break;
        }
        for v in y.iter_mut() {
            *v /= ny;
        }
        x = y;
        let num = a.quadratic_form(&x);
        let den = m.quadratic_form(&x);
        value = num / den;
        residual = pair_residual(a, m, value, &x);
        if residual <= tol {
            break;
        }
    }
    if !residual.is_finite() || residual > tol.max(1e-9) {
        return Err(Error::EigenNonConvergence { lo, hi, residual });
    }
    fix_sign(&mut x);
    Ok(EigenPair { value, vector: x, residual })
}
