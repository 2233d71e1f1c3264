//! Acceptance criteria 1-10. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line in plain `cargo test` output; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use slicereg::compose::{compose, CompositionVariant::*};
use slicereg::hardy::{
    circle_mean, composition_matrix, h2_norm, hp_norm, norm_lower_bound, operator_norm, sup_norm_estimate,
    tail_bound_check, MatrixSide, QuadratureConfig, SupGrid,
};
use slicereg::moebius::{denjoy_wolff_trace, mobius_series, slice_automorphism};
use slicereg::random::{ball_point, gaussian_polynomial, gaussian_quaternion, rng, SweepRng};
use slicereg::{
    extend, regular_conjugate, representation_formula, sample_sphere, split, star, ImaginaryUnit, Quaternion,
    Series,
};

const O: Quaternion = Quaternion::ZERO;
const ONE: Quaternion = Quaternion::ONE;
const I: Quaternion = Quaternion::I;
const J: Quaternion = Quaternion::J;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn poly(c: &[Quaternion]) -> Series {
    Series::polynomial(c.to_vec())
}

fn real(x: f64) -> Quaternion {
    Quaternion::real(x)
}

fn centered_self_map(r: &mut SweepRng, degree: usize, target: f64, grid: &SupGrid) -> Series {
    let mut c = gaussian_polynomial(r, degree, 1.0).into_coeffs();
    c[0] = O;
    let phi = poly(&c);
    phi.scale(target / sup_norm_estimate(&phi, grid))
}

fn random_unit(r: &mut SweepRng) -> ImaginaryUnit {
    loop {
        let v = gaussian_quaternion(r, 1.0).im();
        if let Ok(u) = ImaginaryUnit::new(v.scale(1.0 / v.norm())) {
            return u;
        }
    }
}

fn worked_examples() -> Outcome {
    let tol = 1e-12;
    let f = Series::monomial(2, ONE);
    let phi = poly(&[O, J, I]);
    let g = poly(&[ONE, I]);
    let qj = Series::monomial(1, J);
    let errors = [
        compose(&f, &phi, OdotRight, 4).unwrap().max_coeff_diff(&poly(&[O, O, -ONE, O, -ONE])),
        compose(&f, &phi, VlacciRight, 4)
            .unwrap()
            .max_coeff_diff(&poly(&[O, O, -ONE, (I * J).scale(-2.0 / 3.0), -ONE])),
        compose(&compose(&f, &g, OdotRight, 4).unwrap(), &qj, OdotRight, 4)
            .unwrap()
            .max_coeff_diff(&poly(&[ONE, (J * I).scale(2.0), ONE])),
        compose(&f, &compose(&g, &qj, OdotRight, 4).unwrap(), OdotRight, 4)
            .unwrap()
            .max_coeff_diff(&poly(&[ONE, (J * I).scale(2.0), -ONE])),
        compose(&star(&Series::monomial(2, I), &poly(&[ONE, J])), &Series::monomial(1, I * J), OdotRight, 4)
            .unwrap()
            .max_coeff_diff(&poly(&[O, O, -I, ONE])),
    ];
    let worst = errors.iter().copied().fold(0.0, f64::max);
    outcome(worst <= tol, format!("5 worked examples, max coefficient error {worst:.2e} (tol {tol:.0e})"))
}

fn littlewood() -> Outcome {
    let mut r = rng(2024);
    let grid = SupGrid {
        units: 256,
        angles: 512,
        ..SupGrid::default()
    };
    let (mut worst, mut passed) = (f64::NEG_INFINITY, 0);
    for _ in 0..1000 {
        let df = r.gen_range(0..=16);
        let dp = r.gen_range(1..=6);
        let f = gaussian_polynomial(&mut r, df, 1.0);
        let phi = centered_self_map(&mut r, dp, 0.9, &grid);
        let nf = h2_norm(&f);
        let right = h2_norm(&compose(&f, &phi, OdotRight, 256).unwrap());
        let left = h2_norm(&compose(&f, &phi, OdotLeft, 256).unwrap());
        let excess = right.max(left) - nf;
        worst = worst.max(excess);
        if excess <= 1e-9 {
            passed += 1;
        }
    }
    outcome(
        passed == 1000,
        format!("{passed}/1000 pairs with max(|f.phi|) <= |f| + 1e-9, largest excess {worst:.2e}"),
    )
}

fn mobius_operator_norm() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [0.3f64, 0.5, 0.7] {
        let closed = ((1.0 + a) / (1.0 - a)).sqrt();
        let phi = mobius_series(real(a), 512).unwrap();
        let norms: Vec<f64> = [64usize, 128, 256, 512]
            .iter()
            .map(|&n| operator_norm(&composition_matrix(&phi, n, MatrixSide::RightLinearC).unwrap()).unwrap().value)
            .collect();
        let rel = (norms[3] / closed - 1.0).abs();
        let monotone = norms.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        let lb = norm_lower_bound(&phi, 16).unwrap();
        let lb_ok = lb <= closed * (1.0 + 1e-12) && lb >= 0.98 * closed;
        pass &= rel <= 0.02 && monotone && lb_ok;
        parts.push(format!(
            "a={a}: N=512 {:.7} vs {closed:.7} ({:.2e} rel), monotone {monotone}, lower bound {lb:.7}",
            norms[3], rel
        ));
    }
    outcome(pass, parts.join("; "))
}

fn compactness_tail() -> Outcome {
    let phi = mobius_series(real(0.3), 96).unwrap().scale(0.6);
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for n in 1..=20 {
        let t = tail_bound_check(&phi, n).unwrap();
        let bound = 0.6f64.powi(n as i32 + 1) / 0.8;
        worst = worst.max(t.measured - bound);
        pass &= t.measured <= bound + 1e-9;
    }
    outcome(pass, format!("N=1..20, max(measured - 0.6^(N+1)/0.8) = {worst:.2e} (slack 1e-9)"))
}

fn denjoy_wolff() -> Outcome {
    let f = slice_automorphism(Complex64::new(-0.5, 0.0), 0.0, ImaginaryUnit::I, 128).unwrap();
    let dw = denjoy_wolff_trace(&f, 1e-6, 40).unwrap();
    let n = dw.trace.len() - 1;
    let last = dw.trace[n];
    let decreasing = dw.trace[5..].windows(2).all(|w| w[1] < w[0]);
    let limit_err = dw.limit.max_abs_diff(ONE);
    outcome(
        dw.converged && n <= 40 && last < 1e-6 && decreasing && limit_err < 1e-9,
        format!("distance {last:.2e} at n={n}, limit error {limit_err:.1e}, trace decreasing from n=5: {decreasing}"),
    )
}

fn conjugation() -> Outcome {
    let mut r = rng(606);
    let grid = SupGrid {
        angles: 64,
        ..SupGrid::default()
    };
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let df = r.gen_range(0..=8);
        let dp = r.gen_range(1..=8);
        let f = gaussian_polynomial(&mut r, df, 1.0);
        let g = gaussian_polynomial(&mut r, df, 1.0);
        let raw = gaussian_polynomial(&mut r, dp, 1.0);
        let phi = raw.scale(0.9 / sup_norm_estimate(&raw, &grid));
        let (fc, pc) = (regular_conjugate(&f), regular_conjugate(&phi));
        let n = 64;
        let e1 = regular_conjugate(&compose(&f, &phi, OdotRight, n).unwrap())
            .max_coeff_diff(&compose(&fc, &pc, OdotLeft, n).unwrap());
        let e2 = regular_conjugate(&compose(&f, &phi, OdotLeft, n).unwrap())
            .max_coeff_diff(&compose(&fc, &pc, OdotRight, n).unwrap());
        let e3 = regular_conjugate(&star(&f, &g)).max_coeff_diff(&star(&regular_conjugate(&g), &fc));
        worst = worst.max(e1).max(e2).max(e3);
    }
    outcome(worst <= 1e-11, format!("500 pairs, max coefficient error {worst:.2e} (tol 1e-11)"))
}

fn slice_independence() -> Outcome {
    let mut r = rng(707);
    let f = gaussian_polynomial(&mut r, 10, 1.0);
    let units = sample_sphere(20, 707).unwrap();
    let means: Vec<f64> = units.iter().map(|&u| circle_mean(&f, u, 0.9, 2.0, 1024)).collect();
    let spread = means.iter().copied().fold(f64::NEG_INFINITY, f64::max) - means.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(spread < 1e-8, format!("20 slices at r=0.9, spread {spread:.2e} (tol 1e-8)"))
}

fn pointwise_star() -> Outcome {
    let mut r = rng(808);
    let (mut worst, mut used) = (0.0f64, 0);
    while used < 200 {
        let (df, dg) = (r.gen_range(0..=8), r.gen_range(0..=8));
        let f = gaussian_polynomial(&mut r, df, 1.0);
        let g = gaussian_polynomial(&mut r, dg, 1.0);
        let q = ball_point(&mut r, 1.0);
        let fq = f.evaluate_unchecked(q);
        if fq.norm() <= 1e-6 {
            continue;
        }
        let rhs = fq * g.evaluate_unchecked(fq.inv().unwrap() * q * fq);
        let lhs = star(&f, &g).evaluate_unchecked(q);
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()));
        used += 1;
    }
    outcome(worst <= 1e-9, format!("200 samples, max relative error {worst:.2e} (tol 1e-9)"))
}

fn hp_bracketing() -> Outcome {
    let mut r = rng(909);
    let a: f64 = 0.5;
    let cfg = QuadratureConfig::default();
    let phi = mobius_series(real(a), 128).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let d = r.gen_range(0..=6);
        let f = gaussian_polynomial(&mut r, d, 1.0);
        let g = compose(&f, &phi, OdotRight, 128).unwrap();
        for p in [1.0, 2.0, 4.0] {
            let nf = hp_norm(&f, p, &cfg).unwrap().value;
            let ng = hp_norm(&g, p, &cfg).unwrap().value;
            let k = 2f64.powf(2.0 - 1.0 / p);
            let lo = ((1.0 - a) / (1.0 + a)).powf(1.0 / p) * nf / k;
            let hi = ((1.0 + a) / (1.0 - a)).powf(1.0 / p) * nf * k;
            worst = worst.max((lo - ng) / lo).max((ng - hi) / hi);
        }
    }
    outcome(
        worst <= cfg.tolerance,
        format!("50 polynomials x p in {{1,2,4}}, largest relative violation {worst:.2e} (tol 1e-6)"),
    )
}

fn representation() -> Outcome {
    let mut r = rng(1010);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let d = r.gen_range(0..=8);
        let f = gaussian_polynomial(&mut r, d, 1.0);
        let i = random_unit(&mut r);
        let j = random_unit(&mut r);
        let q = real(r.gen_range(-0.7..0.7)) + j.get().scale(r.gen_range(-0.7..0.7));
        let s = split(&f, i, i.orthogonal()).unwrap();
        let g = extend(&s.f, &s.g, s.i, s.j, s.radius).unwrap();
        let direct = f.evaluate(q).unwrap();
        worst = worst
            .max(g.evaluate(q).unwrap().max_abs_diff(direct))
            .max(representation_formula(&f, i, q).unwrap().max_abs_diff(direct));
    }
    outcome(worst <= 1e-11, format!("100 samples, max error {worst:.2e} (tol 1e-11)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 10] = [
        ("worked composition examples", Some(1), worked_examples),
        ("Littlewood subordination", Some(30), littlewood),
        ("Moebius composition operator norm", Some(60), mobius_operator_norm),
        ("compactness tail estimate", Some(20), compactness_tail),
        ("Denjoy-Wolff convergence", Some(10), denjoy_wolff),
        ("conjugation identities", None, conjugation),
        ("slice independence of the H2 circle integral", None, slice_independence),
        ("pointwise *-product formula", None, pointwise_star),
        ("Hp bracketing under Moebius composition", None, hp_bracketing),
        ("representation formula", None, representation),
    ];
    let mut failures = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked".into()));
        let elapsed = start.elapsed();
        let in_time = limit.map_or(true, |s| elapsed < Duration::from_secs(s));
        let pass = out.pass && in_time;
        let budget = limit.map_or(String::new(), |s| format!(" / {s}s"));
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            out.detail,
            elapsed.as_secs_f64()
        );
        if !pass {
            failures += 1;
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
