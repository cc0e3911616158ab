//! Library results against independent computations.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use ncfourier::eig::jacobi_eigh;
use ncfourier::lorentz::{embedding_constant, lorentz_norm, step_lorentz_norm, weak_norm_via_distribution};
use ncfourier::singular::{check_submultiplicative, distribution, singular_function};
use ncfourier::{Block, Ensemble, Operator, StepFunction, TraceAlgebra};

fn algebras() -> Vec<Arc<TraceAlgebra>> {
    vec![
        TraceAlgebra::diagonal("l-inf(5)", 5, 0.7).unwrap(),
        TraceAlgebra::new("M3", vec![Block::new(3, 1.0)]).unwrap(),
        TraceAlgebra::new("mixed", vec![Block::new(1, 0.25), Block::new(2, 1.5), Block::new(3, 0.4)]).unwrap(),
    ]
}

/// `(σ, w)` pairs from nalgebra's SVD, largest first.
fn svd_pairs(x: &Operator) -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for (k, b) in x.algebra().blocks().iter().enumerate() {
        for s in x.block(k).clone().singular_values().iter() {
            v.push((*s, b.weight));
        }
    }
    v.sort_by(|a, b| b.0.total_cmp(&a.0));
    v
}

fn d_oracle(pairs: &[(f64, f64)], s: f64) -> f64 {
    pairs.iter().filter(|p| p.0 > s).map(|p| p.1).sum()
}

/// `inf{s ≥ 0 : d(s) ≤ t}`; the infimum is attained at 0 or a singular value.
fn mu_oracle(pairs: &[(f64, f64)], t: f64) -> f64 {
    std::iter::once(0.0)
        .chain(pairs.iter().map(|p| p.0))
        .filter(|&s| d_oracle(pairs, s) <= t)
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn singular_function_matches_distribution_inverse() {
    for alg in algebras() {
        for seed in 0..20 {
            let x = Operator::random(alg.clone(), seed, Ensemble::GeneralComplex);
            let pairs = svd_pairs(&x);
            let mu = singular_function(&x).unwrap();
            let total = alg.total_mass();
            for i in 0..200 {
                let t = total * 1.1 * (i as f64 + 0.5) / 200.0;
                let (a, b) = (mu.evaluate(t), mu_oracle(&pairs, t));
                assert!((a - b).abs() <= 1e-10 * pairs[0].0, "{} seed {seed} t {t}: {a} vs {b}", alg.name());
            }
            for &(s, _) in &pairs {
                for probe in [s * 0.999, s * 1.001] {
                    let (a, b) = (distribution(&x, probe).unwrap(), d_oracle(&pairs, probe));
                    assert!((a - b).abs() <= 1e-12 * total);
                }
            }
        }
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `‖f‖_{p,q}` by adaptive quadrature of `(t^{1/p} f(t))^q dt/t`. On the first
/// interval `t = b·w^m` removes the singularity at 0.
fn lorentz_quadrature(f: &StepFunction, p: f64, q: f64) -> f64 {
    let e = q / p;
    let mut total = 0.0;
    let mut a = 0.0;
    for (&b, &v) in f.breakpoints().iter().zip(f.values()) {
        let piece = if a == 0.0 {
            let m = (2.0 / e).ceil();
            let g = move |w: f64| b.powf(e) * m * w.powf(m * e - 1.0);
            integrate(&g, 0.0, 1.0, 1e-14)
        } else {
            let g = move |t: f64| t.powf(e - 1.0);
            integrate(&g, a, b, 1e-14)
        };
        total += v.powf(q) * piece;
        a = b;
    }
    total.powf(1.0 / q)
}

fn random_steps(seed: u64) -> StepFunction {
    let x = Operator::random(algebras()[2].clone(), seed, Ensemble::GeneralComplex);
    singular_function(&x).unwrap()
}

#[test]
fn lorentz_closed_form_matches_quadrature() {
    for seed in 0..25 {
        let f = random_steps(seed);
        for p in [0.8, 1.5, 2.0, 3.0] {
            for q in [1.0, 2.0, 4.0, 0.7] {
                let (a, b) = (step_lorentz_norm(&f, p, q).unwrap(), lorentz_quadrature(&f, p, q));
                assert!((a - b).abs() <= 1e-9 * b, "p {p} q {q}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn weak_norm_matches_dense_supremum() {
    for alg in algebras() {
        for seed in 0..20 {
            let x = Operator::random(alg.clone(), 40 + seed, Ensemble::GeneralComplex);
            let pairs = svd_pairs(&x);
            for r in [1.0, 1.5, 2.0, 4.0] {
                let exact = lorentz_norm(&x, r, f64::INFINITY).unwrap();
                // sup_t t^{1/r} μ(t), approached from the left of each breakpoint
                let n = 20_000;
                let top = alg.total_mass();
                let dense = (1..=n)
                    .map(|i| {
                        let t = top * i as f64 / n as f64;
                        t.powf(1.0 / r) * mu_oracle(&pairs, t * (1.0 - 1e-12))
                    })
                    .fold(0.0, f64::max);
                assert!(dense <= exact * (1.0 + 1e-12));
                assert!(dense >= exact * (1.0 - 1e-3), "{dense} vs {exact}");
                let via_d = weak_norm_via_distribution(&x, r).unwrap();
                assert!((via_d - exact).abs() <= 1e-10 * exact);
            }
        }
    }
}

#[test]
fn jacobi_matches_nalgebra() {
    for n in [1, 2, 3, 5, 8] {
        let alg = TraceAlgebra::new("M", vec![Block::new(n, 1.0)]).unwrap();
        for seed in 0..10 {
            let h = Operator::random(alg.clone(), seed, Ensemble::Hermitian).block(0).clone();
            let ours = jacobi_eigh(&h, 0).unwrap();
            let mut theirs: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            theirs.sort_by(|a, b| b.total_cmp(a));
            let scale = h.norm().max(1.0);
            for (a, b) in ours.values.iter().zip(&theirs) {
                assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
            }
            let back: DMatrix<Complex64> = ours.recompose(|l| l);
            assert!((back - &h).norm() <= 1e-10 * scale);
        }
    }
}

/// Every 2- and 3-step nonincreasing function over a small grid.
fn small_step_functions() -> Vec<StepFunction> {
    let vals = [0.1, 0.3, 0.5, 1.0, 2.0, 5.0];
    let lens = [0.01, 0.2, 1.0, 3.0, 50.0];
    let mut out = Vec::new();
    for &v1 in &vals {
        for &l1 in &lens {
            out.push(StepFunction::from_weighted_values(&[(v1, l1)]));
            for &v2 in vals.iter().filter(|&&v| v < v1) {
                for &l2 in &lens {
                    out.push(StepFunction::from_weighted_values(&[(v1, l1), (v2, l2)]));
                    for &v3 in vals.iter().filter(|&&v| v < v2) {
                        for &l3 in &lens {
                            out.push(StepFunction::from_weighted_values(&[(v1, l1), (v2, l2), (v3, l3)]));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn embedding_constant_is_sharp_on_small_step_functions() {
    let fs = small_step_functions();
    for (p, q, rr) in [(2.0, 1.0, f64::INFINITY), (2.0, 1.0, 2.0), (1.5, 2.0, 4.0), (3.0, 1.5, f64::INFINITY), (1.0, 1.0, 3.0)] {
        let c = embedding_constant(p, q, rr);
        let mut best = 0.0f64;
        for f in &fs {
            let r = step_lorentz_norm(f, p, rr).unwrap() / step_lorentz_norm(f, p, q).unwrap();
            best = best.max(r);
        }
        assert!(best <= c * (1.0 + 1e-12), "({p},{q},{rr}): {best} > {c}");
        assert!(best >= c * (1.0 - 1e-12), "({p},{q},{rr}): {best} < {c}");
    }
}

#[test]
fn submultiplicativity_on_dense_grid() {
    for alg in algebras() {
        for seed in 0..10 {
            let x = Operator::random(alg.clone(), seed, Ensemble::GeneralComplex);
            let y = Operator::random(alg.clone(), 100 + seed, Ensemble::Positive);
            let (px, py, pxy) = (svd_pairs(&x), svd_pairs(&y), svd_pairs(&x.multiply(&y).unwrap()));
            let check = check_submultiplicative(&x, &y).unwrap();
            let h = alg.total_mass() / 211.0;
            let mut dense = f64::NEG_INFINITY;
            for i in 0..=211 {
                for j in 0..=211 {
                    let (t, s) = ((i as f64 + 0.37) * h, (j as f64 + 0.29) * h);
                    dense = dense.max(mu_oracle(&pxy, t + s) - mu_oracle(&px, t) * mu_oracle(&py, s));
                }
            }
            assert!(check.passes(1e-10));
            assert!(dense <= check.max_violation + 1e-10 * check.scale);
        }
    }
}
