//! Finite sections of composition operators and their operator norms.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::compose::star_powers;
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::random::rng;
use crate::series::{regular_conjugate, Series};

use super::{sup_norm_estimate, SupGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSide {
    /// `C_φ f = f^{⊙}φ`, right-linear.
    RightLinearC,
    /// `D_φ f = f_{⊙}φ`, left-linear, realized as `(D_φ f)^c = C_{φ^c}(f^c)`.
    LeftLinearD,
}

/// Column `n` holds coefficients `0..=N` of `φ^{*n}` (of `(φ^c)^{*n}` on the D side).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    /// column-major
    entries: Vec<Quaternion>,
    side: MatrixSide,
}

impl OperatorMatrix {
    pub fn from_columns(columns: Vec<Vec<Quaternion>>, side: MatrixSide) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 || columns.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidArgument("operator matrix must be square and non-empty".into()));
        }
        Ok(Self {
            dim,
            entries: columns.into_iter().flatten().collect(),
            side,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Quaternion::ZERO; dim * dim];
        for n in 0..dim {
            entries[n * dim + n] = Quaternion::ONE;
        }
        Self {
            dim,
            entries,
            side: MatrixSide::RightLinearC,
        }
    }

    pub fn diagonal(d: &[Quaternion]) -> Self {
        let dim = d.len();
        let mut m = Self::identity(dim);
        for (n, &v) in d.iter().enumerate() {
            m.entries[n * dim + n] = v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> MatrixSide {
        self.side
    }

    /// Entry in row `m`, column `n`.
    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Quaternion {
        self.entries[n * self.dim + m]
    }

    pub fn column(&self, n: usize) -> &[Quaternion] {
        &self.entries[n * self.dim..(n + 1) * self.dim]
    }

    /// Copy with the columns in `cols` set to zero.
    pub fn with_columns_zeroed(&self, cols: std::ops::Range<usize>) -> Self {
        let mut out = self.clone();
        for n in cols.filter(|&n| n < self.dim) {
            for v in &mut out.entries[n * self.dim..(n + 1) * self.dim] {
                *v = Quaternion::ZERO;
            }
        }
        out
    }

    /// The operator applied to coefficients `f₀..f_N`.
    pub fn apply(&self, f: &[Quaternion]) -> Vec<Quaternion> {
        let mut out = vec![Quaternion::ZERO; self.dim];
        for (n, &fn_) in f.iter().enumerate().take(self.dim) {
            let x = match self.side {
                MatrixSide::RightLinearC => fn_,
                MatrixSide::LeftLinearD => fn_.conj(),
            };
            for (o, &m) in out.iter_mut().zip(self.column(n)) {
                *o += m * x;
            }
        }
        if self.side == MatrixSide::LeftLinearD {
            for o in &mut out {
                *o = o.conj();
            }
        }
        out
    }

    /// Complex adjoint embedding `α + βj ↦ [[α, β], [-β̄, ᾱ]]`, row-major `2d × 2d`.
    pub fn complex_embedding(&self) -> Vec<Complex64> {
        let n = 2 * self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for col in 0..self.dim {
            for row in 0..self.dim {
                let (alpha, beta) = split_ij(self.get(row, col));
                out[(2 * row) * n + 2 * col] = alpha;
                out[(2 * row) * n + 2 * col + 1] = beta;
                out[(2 * row + 1) * n + 2 * col] = -beta.conj();
                out[(2 * row + 1) * n + 2 * col + 1] = alpha.conj();
            }
        }
        out
    }

    fn is_complex(&self) -> bool {
        self.entries.iter().all(|a| a.y == 0.0 && a.z == 0.0)
    }
}

/// `a = α + βj` with `α = w + xi`, `β = y + zi`.
#[inline]
fn split_ij(a: Quaternion) -> (Complex64, Complex64) {
    (Complex64::new(a.w, a.x), Complex64::new(a.y, a.z))
}

/// Finite section of `C_φ` or `D_φ` of size `(N+1) × (N+1)`.
pub fn composition_matrix(phi: &Series, degree: usize, side: MatrixSide) -> Result<OperatorMatrix> {
    let sup = sup_norm_estimate(phi, &SupGrid::default());
    if sup > 1.0 + 1e-9 {
        return Err(Error::NotSelfMap(sup));
    }
    Ok(composition_matrix_unchecked(phi, degree, side))
}

/// [`composition_matrix`] without the self-map test.
pub fn composition_matrix_unchecked(phi: &Series, degree: usize, side: MatrixSide) -> OperatorMatrix {
    let source = match side {
        MatrixSide::RightLinearC => phi.clone(),
        MatrixSide::LeftLinearD => regular_conjugate(phi),
    };
    let columns = star_powers(&source, degree, degree)
        .into_iter()
        .map(|p| p.into_coeffs())
        .collect();
    OperatorMatrix::from_columns(columns, side).expect("square by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Lanczos,
    Power,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormOptions {
    pub method: NormMethod,
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            method: NormMethod::Lanczos,
            tol: 1e-10,
            max_iterations: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorNorm {
    pub value: f64,
    pub iterations: usize,
    /// `‖A y - θ y‖ / θ` for the final Ritz pair of `A = χ(M)ᴴχ(M)`.
    pub residual: f64,
    pub method: NormMethod,
}

/// Dense complex matrix with `A v` and `Aᴴ v`.
struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

impl Dense {
    fn mul(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.a[r * self.n..(r + 1) * self.n];
            *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
        }
    }

    fn mul_adjoint(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (r, &vr) in v.iter().enumerate() {
            let row = &self.a[r * self.n..(r + 1) * self.n];
            for (o, x) in out.iter_mut().zip(row) {
                *o += x.conj() * vr;
            }
        }
    }

    /// `AᴴA v`.
    fn gram(&self, v: &[Complex64], tmp: &mut [Complex64], out: &mut [Complex64]) {
        self.mul(v, tmp);
        self.mul_adjoint(tmp, out);
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value of the complex embedding, i.e. the supremum of
/// `‖M v‖₂ / ‖v‖₂` over quaternion coefficient vectors.
pub fn operator_norm(m: &OperatorMatrix) -> Result<OperatorNorm> {
    operator_norm_with(m, &NormOptions::default())
}

pub fn operator_norm_with(m: &OperatorMatrix, opts: &NormOptions) -> Result<OperatorNorm> {
    // with every entry in ℂ_i the embedding is block diagonal with conjugate
    // blocks of equal norm, so one block suffices
    let dense = if m.is_complex() {
        let d = m.dim();
        let mut a = vec![Complex64::new(0.0, 0.0); d * d];
        for col in 0..d {
            for row in 0..d {
                a[row * d + col] = split_ij(m.get(row, col)).0;
            }
        }
        Dense { n: d, a }
    } else {
        Dense {
            n: 2 * m.dim(),
            a: m.complex_embedding(),
        }
    };
    let mut r = rng(opts.seed);
    let start: Vec<Complex64> = (0..dense.n)
        .map(|_| Complex64::new(1.0 + 1e-3 * r.gen_range(-1.0..1.0), 1e-3 * r.gen_range(-1.0..1.0)))
        .collect();
    if dense.a.iter().all(|x| x.norm_sqr() == 0.0) {
        return Ok(OperatorNorm {
            value: 0.0,
            iterations: 0,
            residual: 0.0,
            method: opts.method,
        });
    }
    match opts.method {
        NormMethod::Lanczos => Ok(lanczos(&dense, start, opts)),
        NormMethod::Power => power(&dense, start, opts),
    }
}

fn power(a: &Dense, mut v: Vec<Complex64>, opts: &NormOptions) -> Result<OperatorNorm> {
    let n = a.n;
    let mut tmp = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        a.gram(&v, &mut tmp, &mut w);
        let next = dot(&v, &w).re;
        residual = w
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y * next).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / next.max(f64::MIN_POSITIVE);
        let change = (next - theta).abs() / next.max(f64::MIN_POSITIVE);
        theta = next;
        let s = norm(&w);
        if s == 0.0 {
            return Ok(OperatorNorm {
                value: 0.0,
                iterations: it,
                residual: 0.0,
                method: NormMethod::Power,
            });
        }
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / s);
        if change <= opts.tol && residual <= opts.tol.sqrt() {
            return Ok(OperatorNorm {
                value: theta.sqrt(),
                iterations: it,
                residual,
                method: NormMethod::Power,
            });
        }
    }
    if residual > 1e-6 {
        return Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            residual,
        });
    }
    Ok(OperatorNorm {
        value: theta.sqrt(),
        iterations: opts.max_iterations,
        residual,
        method: NormMethod::Power,
    })
}

/// Lanczos on `AᴴA` with full reorthogonalization. At most `n` steps, so it
/// terminates with the exact Krylov answer in the worst case.
fn lanczos(a: &Dense, mut v: Vec<Complex64>, opts: &NormOptions) -> OperatorNorm {
    let n = a.n;
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut tmp = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    let cap = n.min(opts.max_iterations).max(1);
    for k in 0..cap {
        a.gram(&basis[k], &mut tmp, &mut w);
        let alpha = dot(&basis[k], &w).re;
        alphas.push(alpha);
        // two passes of classical Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= y * c);
            }
        }
        let beta = norm(&w);
        let (t, last) = top_ritz(&alphas, &betas);
        theta = t;
        residual = beta * last.abs() / theta.max(f64::MIN_POSITIVE);
        if residual <= opts.tol || beta <= 1e-14 * theta.max(1.0) || k + 1 == cap {
            return OperatorNorm {
                value: theta.max(0.0).sqrt(),
                iterations: k + 1,
                residual: if beta <= 1e-14 * theta.max(1.0) { 0.0 } else { residual },
                method: NormMethod::Lanczos,
            };
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }
    OperatorNorm {
        value: theta.max(0.0).sqrt(),
        iterations: cap,
        residual,
        method: NormMethod::Lanczos,
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix and the last
/// component of its unit eigenvector.
fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let k = alpha.len();
    if k == 1 {
        return (alpha[0], 1.0);
    }
    // Gershgorin bounds, then Sturm-count bisection
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 } + if i + 1 < k { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    let count_above = |x: f64| -> usize {
        // number of eigenvalues greater than x
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..k {
            let b2 = if i > 0 { beta[i - 1] * beta[i - 1] } else { 0.0 };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = f64::MIN_POSITIVE;
            }
            if d > 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_above(mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = hi;
    // inverse iteration with a slightly shifted matrix
    let shift = theta + 1e-12 * theta.abs().max(1e-300);
    let mut x = vec![1.0; k];
    for _ in 0..3 {
        x = solve_tridiagonal(alpha, beta, shift, &x);
        let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(s.is_finite() && s > 0.0) {
            return (theta, 1.0);
        }
        x.iter_mut().for_each(|v| *v /= s);
    }
    (theta, x[k - 1])
}

/// Solves `(T - σ I) x = b` by the Thomas algorithm.
fn solve_tridiagonal(alpha: &[f64], beta: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let k = alpha.len();
    let mut c = vec![0.0; k];
    let mut d = vec![0.0; k];
    let guard = |v: f64| if v == 0.0 { 1e-300 } else { v };
    let mut m = guard(alpha[0] - sigma);
    c[0] = if k > 1 { beta[0] / m } else { 0.0 };
    d[0] = b[0] / m;
    for i in 1..k {
        m = guard(alpha[i] - sigma - beta[i - 1] * c[i - 1]);
        c[i] = if i + 1 < k { beta[i] / m } else { 0.0 };
        d[i] = (b[i] - beta[i - 1] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; k];
    x[k - 1] = d[k - 1];
    for i in (0..k - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
