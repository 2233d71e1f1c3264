//! Regular Möbius transformations, slice-preserving disc automorphisms,
//! fixed-point classification and Denjoy–Wolff iteration.

use num_complex::Complex64;
use serde::Serialize;

use crate::compose::{complex_compose, sampled_self_map_sup, RangeSampling, SELF_MAP_TOLERANCE};
use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::{representation_formula, Series};

/// Tolerance on the automorphism fit residual and on `|λ| = 1`.
pub const FIT_TOLERANCE: f64 = 1e-8;

/// Fixed points with `||z| - 1|` below this are on the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

/// Two roots closer than this count as a double root.
pub const DOUBLE_ROOT_TOLERANCE: f64 = 1e-6;

/// `a` with `|a| < 1` and a unit `u`, describing `φ_a · u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MoebiusParams {
    pub a: Quaternion,
    pub u: Quaternion,
}

impl MoebiusParams {
    pub fn new(a: Quaternion, u: Quaternion) -> Result<Self> {
        if !(a.norm() < 1.0 - 1e-12) {
            return Err(Error::Domain(format!("|a| = {} is not below 1", a.norm())));
        }
        if (u.norm() - 1.0).abs() >= 1e-12 {
            return Err(Error::Domain(format!("|u| = {} is not 1", u.norm())));
        }
        Ok(Self { a, u })
    }
}

/// Taylor coefficients of `φ_a = (1 - q ā)^{-*} * (a - q)` up to degree `n`:
/// `a`, then `-(1 - |a|²) āⁿ⁻¹`.
pub fn mobius_series(a: Quaternion, degree: usize) -> Result<Series> {
    if !(a.norm() < 1.0) {
        return Err(Error::Domain(format!("|a| = {} is not below 1", a.norm())));
    }
    let ab = a.conj();
    let w = 1.0 - a.norm_sqr();
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(a);
    let mut pow = Quaternion::ONE;
    for _ in 1..=degree {
        coeffs.push(-pow.scale(w));
        pow = pow * ab;
    }
    Series::new(coeffs, 1.0)
}

/// `φ_a · u`: the coefficients of `φ_a` right-multiplied by `u`.
pub fn automorphism(params: MoebiusParams, degree: usize) -> Result<Series> {
    let p = MoebiusParams::new(params.a, params.u)?;
    Ok(mobius_series(p.a, degree)?.mul_right(p.u))
}

/// Regular extension of `e^{Iθ}(z - a)/(1 - āz)` from `ℂ_I`.
pub fn slice_automorphism(a: Complex64, theta: f64, unit: ImaginaryUnit, degree: usize) -> Result<Series> {
    if !(a.norm() < 1.0) {
        return Err(Error::Domain(format!("|a| = {} is not below 1", a.norm())));
    }
    let lambda = Complex64::from_polar(1.0, theta);
    let c = disc_automorphism_coeffs(lambda, a, degree);
    let radius = if a.norm() == 0.0 { f64::INFINITY } else { 1.0 / a.norm() };
    Series::from_slice_coeffs(&c, unit, radius)
}

/// Regular extension of `(αz + β)/(γz + δ)` from `ℂ_I`, expanded at 0.
pub fn fractional_linear(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
    unit: ImaginaryUnit,
    degree: usize,
) -> Result<Series> {
    if delta.norm() == 0.0 {
        return Err(Error::Domain("pole at the origin".into()));
    }
    if (alpha * delta - beta * gamma).norm() == 0.0 {
        return Err(Error::InvalidArgument("degenerate fractional linear map".into()));
    }
    let r = -gamma / delta;
    let lead = (alpha - beta * gamma / delta) / delta;
    let mut c = Vec::with_capacity(degree + 1);
    c.push(beta / delta);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 1..=degree {
        c.push(lead * pow);
        pow *= r;
    }
    let radius = if gamma.norm() == 0.0 {
        f64::INFINITY
    } else {
        (delta / gamma).norm()
    };
    Series::from_slice_coeffs(&c, unit, radius)
}

/// `λ(z - a)/(1 - āz)`: `c₀ = -λa`, `cₙ = λ(1 - |a|²) āⁿ⁻¹`.
fn disc_automorphism_coeffs(lambda: Complex64, a: Complex64, degree: usize) -> Vec<Complex64> {
    let ab = a.conj();
    let w = 1.0 - a.norm_sqr();
    let mut c = Vec::with_capacity(degree + 1);
    c.push(-lambda * a);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 1..=degree {
        c.push(lambda * w * pow);
        pow *= ab;
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    SphericalHyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    Boundary,
    BoundarySphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPoint {
    pub point: Quaternion,
    pub location: Location,
    /// `|f_I'(z)|` of the fitted map.
    pub multiplier: f64,
}

/// Fitted `λ(z - a)/(1 - āz)` on the preserved slice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AutomorphismFit {
    pub unit: ImaginaryUnit,
    pub lambda: Complex64,
    pub a: Complex64,
    pub residual: f64,
}

impl AutomorphismFit {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.lambda * (z - self.a) / (1.0 - self.a.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = 1.0 - self.a.conj() * z;
        self.lambda * (1.0 - self.a.norm_sqr()) / (d * d)
    }

    /// Roots of `ā z² + (λ - 1) z - λa = 0`; a single root when `a = 0`.
    pub fn fixed_points(&self) -> Vec<Complex64> {
        let ab = self.a.conj();
        let b = self.lambda - 1.0;
        let c = -self.lambda * self.a;
        if ab.norm() < 1e-14 {
            return if b.norm() < 1e-14 {
                Vec::new()
            } else {
                vec![-c / b]
            };
        }
        let disc = (b * b - 4.0 * ab * c).sqrt();
        let den = 2.0 * ab;
        vec![(-b + disc) / den, (-b - disc) / den]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub kind: MapKind,
    pub fixed_points: Vec<FixedPoint>,
    /// Attracting boundary point for parabolic and hyperbolic maps.
    pub attracting: Option<Quaternion>,
    /// Set when the sphere-of-fixed-points test was run; it is a two-slice heuristic.
    pub sphere_check: Option<bool>,
    pub fit_residual: f64,
}

/// Fits a disc automorphism to the slice restriction of `f`.
pub fn fit_automorphism(f: &Series) -> Result<AutomorphismFit> {
    let unit = f.preserved_slice().ok_or(Error::NotSlicePreserving)?;
    let c = f.slice_coeffs(unit);
    if c.len() < 3 {
        return Err(Error::UnsupportedMap(
            "at least three coefficients are needed to fit an automorphism".into(),
        ));
    }
    if c[1].norm() < 1e-14 {
        return Err(Error::UnsupportedMap("vanishing linear coefficient".into()));
    }
    let a = (c[2] / c[1]).conj();
    if !(a.norm() < 1.0) {
        return Err(Error::UnsupportedMap(format!("fitted |a| = {} is not below 1", a.norm())));
    }
    let lambda = c[1] / (1.0 - a.norm_sqr());
    if (lambda.norm() - 1.0).abs() > FIT_TOLERANCE {
        return Err(Error::UnsupportedMap(format!(
            "fitted |lambda| = {} is not 1",
            lambda.norm()
        )));
    }
    let model = disc_automorphism_coeffs(lambda, a, c.len() - 1);
    let residual = c
        .iter()
        .zip(&model)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if residual > FIT_TOLERANCE {
        return Err(Error::UnsupportedMap(format!(
            "not a disc automorphism (fit residual {residual:e})"
        )));
    }
    Ok(AutomorphismFit {
        unit,
        lambda,
        a,
        residual,
    })
}

/// Fixed-point classification of a slice-preserving automorphism.
pub fn classify(f: &Series) -> Result<Classification> {
    let unit = f.preserved_slice().ok_or(Error::NotSlicePreserving)?;
    let sup = sampled_self_map_sup(f, &RangeSampling::default());
    if sup > 1.0 + SELF_MAP_TOLERANCE {
        return Err(Error::NotSelfMap(sup));
    }
    if f.approx_eq(&Series::identity(), FIT_TOLERANCE) {
        return Ok(Classification {
            kind: MapKind::Identity,
            fixed_points: Vec::new(),
            attracting: None,
            sphere_check: None,
            fit_residual: f.max_coeff_diff(&Series::identity()),
        });
    }
    let fit = fit_automorphism(f)?;
    let roots = fit.fixed_points();
    let label = |z: Complex64| {
        let r = z.norm();
        if r < 1.0 - BOUNDARY_TOLERANCE {
            Some(Location::Interior)
        } else if (r - 1.0).abs() <= BOUNDARY_TOLERANCE {
            Some(Location::Boundary)
        } else {
            None
        }
    };
    let point = |z: Complex64, location| FixedPoint {
        point: unit.embed(z),
        location,
        multiplier: fit.derivative(z).norm(),
    };

    if let Some(&z) = roots.iter().find(|&&z| label(z) == Some(Location::Interior)) {
        return Ok(Classification {
            kind: MapKind::Elliptic,
            fixed_points: vec![point(z, Location::Interior)],
            attracting: None,
            sphere_check: None,
            fit_residual: fit.residual,
        });
    }

    if roots.len() == 2 && (roots[0] - roots[1]).norm() < DOUBLE_ROOT_TOLERANCE {
        // the mean of a near-double root is far better conditioned than either root
        let z = (roots[0] + roots[1]) * 0.5;
        if label(z) == Some(Location::Boundary) {
            let z = z / z.norm();
            return Ok(Classification {
                kind: MapKind::Parabolic,
                fixed_points: vec![point(z, Location::Boundary)],
                attracting: Some(unit.embed(z)),
                sphere_check: None,
                fit_residual: fit.residual,
            });
        }
    }

    let boundary: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|&z| label(z) == Some(Location::Boundary))
        .map(|z| z / z.norm())
        .collect();
    if boundary.len() < 2 {
        return Err(Error::UnsupportedMap(format!(
            "fixed points {roots:?} fit no classification"
        )));
    }

    // a non-real boundary fixed point x + yI spans a sphere of fixed points
    // exactly when x + yK is fixed too for K ⊥ I
    let mut sphere = false;
    let mut tested = false;
    let k = unit.orthogonal();
    for &z in &boundary {
        if z.im.abs() <= BOUNDARY_TOLERANCE {
            continue;
        }
        tested = true;
        let q = Quaternion::real(z.re) + k.get().scale(z.im);
        let image = representation_formula_fit(&fit, unit, q);
        if (image - q).norm() <= FIT_TOLERANCE {
            sphere = true;
        }
    }
    let kind = if sphere {
        MapKind::SphericalHyperbolic
    } else {
        MapKind::Hyperbolic
    };
    let location = if sphere {
        Location::BoundarySphere
    } else {
        Location::Boundary
    };
    let attracting = boundary
        .iter()
        .copied()
        .min_by(|x, y| {
            fit.derivative(*x)
                .norm()
                .total_cmp(&fit.derivative(*y).norm())
        })
        .filter(|&z| fit.derivative(z).norm() < 1.0)
        .map(|z| unit.embed(z));
    Ok(Classification {
        kind,
        fixed_points: boundary.into_iter().map(|z| point(z, location)).collect(),
        attracting,
        sphere_check: tested.then_some(sphere),
        fit_residual: fit.residual,
    })
}

/// Value at `q` of the regular extension of the fitted slice map.
fn representation_formula_fit(fit: &AutomorphismFit, unit: ImaginaryUnit, q: Quaternion) -> Quaternion {
    let c = q.decompose();
    let z = Complex64::new(c.x, c.y);
    let up = unit.embed(fit.eval(z));
    let down = unit.embed(fit.eval(z.conj()));
    let k = c.unit_or(unit).get();
    (up + down).scale(0.5) + (k * unit.get() * (down - up)).scale(0.5)
}

/// The 128 grid points: 4 radii × 8 angles on each slice `i, j, k, (i+j+k)/√3`.
pub fn denjoy_wolff_grid() -> Vec<Quaternion> {
    let s = 1.0 / 3f64.sqrt();
    let units = [
        ImaginaryUnit::I,
        ImaginaryUnit::J,
        ImaginaryUnit::K,
        ImaginaryUnit::new(Quaternion::new(0.0, s, s, s)).expect("unit"),
    ];
    let mut grid = Vec::with_capacity(128);
    for u in units {
        for r in [0.125, 0.25, 0.375, 0.5] {
            for k in 0..8 {
                let theta = std::f64::consts::TAU * (k as f64 + 0.5) / 8.0;
                grid.push(u.exp(theta).scale(r));
            }
        }
    }
    grid
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenjoyWolff {
    pub limit: Quaternion,
    pub kind: MapKind,
    /// `trace[n]` is the grid sup of `|f^{⊙n} - limit|`, starting at `n = 0`.
    pub trace: Vec<f64>,
    pub converged: bool,
    /// First `n` after which the trace never increases.
    pub monotone_from: usize,
}

/// Iterates `f` until the grid sup distance to its Denjoy–Wolff point drops
/// below `tol` or `n_max` iterations have run. Iterates are truncated to the
/// degree of `f`.
pub fn denjoy_wolff_trace(f: &Series, tol: f64, n_max: usize) -> Result<DenjoyWolff> {
    let class = classify(f)?;
    let limit = match (class.kind, class.attracting) {
        (MapKind::Identity, _) => {
            return Err(Error::PreconditionViolated("the identity has no Denjoy-Wolff point".into()))
        }
        (MapKind::Elliptic, _) => {
            return Err(Error::PreconditionViolated(
                "elliptic automorphisms have an interior fixed point".into(),
            ))
        }
        (_, Some(p)) => p,
        (_, None) => {
            return Err(Error::PreconditionViolated("no attracting boundary fixed point".into()))
        }
    };
    let unit = f.preserved_slice().ok_or(Error::NotSlicePreserving)?;
    let degree = f.degree();
    let fi = f.slice_coeffs(unit);
    let grid = denjoy_wolff_grid();
    let sup_distance = |c: &[Complex64]| -> Result<f64> {
        let s = Series::from_slice_coeffs(c, unit, f.radius())?;
        Ok(grid
            .iter()
            .map(|&q| (s.evaluate_unchecked(q) - limit).norm())
            .fold(0.0, f64::max))
    };
    let mut current = vec![Complex64::new(0.0, 0.0); degree + 1];
    if degree >= 1 {
        current[1] = Complex64::new(1.0, 0.0);
    }
    let mut trace = vec![sup_distance(&current)?];
    let mut converged = trace[0] < tol;
    while !converged && trace.len() <= n_max {
        current = complex_compose(&fi, &current, degree);
        let d = sup_distance(&current)?;
        trace.push(d);
        converged = d < tol;
    }
    let mut monotone_from = trace.len() - 1;
    while monotone_from > 0 && trace[monotone_from - 1] >= trace[monotone_from] {
        monotone_from -= 1;
    }
    Ok(DenjoyWolff {
        limit,
        kind: class.kind,
        trace,
        converged,
        monotone_from,
    })
}

/// [`denjoy_wolff_trace`], failing with `NoConvergence` at `n_max`.
pub fn denjoy_wolff(f: &Series, tol: f64, n_max: usize) -> Result<DenjoyWolff> {
    let dw = denjoy_wolff_trace(f, tol, n_max)?;
    if !dw.converged {
        return Err(Error::NoConvergence {
            iterations: dw.trace.len() - 1,
            residual: *dw.trace.last().expect("non-empty trace"),
        });
    }
    Ok(dw)
}

/// Sanity check that `f` and its fitted automorphism agree at `q`.
pub fn fit_agrees_at(f: &Series, q: Quaternion) -> Result<f64> {
    let fit = fit_automorphism(f)?;
    let direct = f.evaluate(q)?;
    let rebuilt = representation_formula(f, fit.unit, q)?;
    Ok((direct - rebuilt)
        .norm()
        .max((direct - representation_formula_fit(&fit, fit.unit, q)).norm()))
}
