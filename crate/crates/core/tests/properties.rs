use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use ncfourier::fourier::{Direction, FourierStructure};
use ncfourier::group::{build_group, builtin_groups};
use ncfourier::lorentz::{lorentz_norm, lp_norm, step_lp_norm};
use ncfourier::multiplier::{apply_multiplier, MultiplierSymbol};
use ncfourier::report::{trial_seed, CheckRecord};
use ncfourier::singular::singular_function;
use ncfourier::{Block, Ensemble, Operator, TraceAlgebra};

fn algebra() -> impl Strategy<Value = Arc<TraceAlgebra>> {
    prop::collection::vec((1usize..4, 0.05f64..3.0), 1..4).prop_map(|bs| {
        TraceAlgebra::new("prop", bs.into_iter().map(|(d, w)| Block::new(d, w)).collect()).unwrap()
    })
}

fn structure() -> impl Strategy<Value = FourierStructure> {
    let kinds = builtin_groups();
    (0..kinds.len(), any::<bool>()).prop_map(move |(i, block)| {
        let dir = if block { Direction::BlockSide } else { Direction::FunctionSide };
        FourierStructure::new(Arc::new(build_group(&kinds[i]).unwrap()), dir).unwrap()
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_is_nonincreasing_with_support_in_the_algebra(alg in algebra(), seed in any::<u64>()) {
        let x = Operator::random(alg.clone(), seed, Ensemble::GeneralComplex);
        let mu = singular_function(&x).unwrap();
        prop_assert!(mu.values().windows(2).all(|w| w[0] > w[1]));
        prop_assert!(mu.support() <= alg.total_mass() * (1.0 + 1e-12));
    }

    #[test]
    fn lp_norm_is_the_lp_norm_of_mu(alg in algebra(), seed in any::<u64>(), p in 0.5f64..6.0) {
        let x = Operator::random(alg, seed, Ensemble::GeneralComplex);
        let a = lp_norm(&x, p).unwrap();
        let b = step_lp_norm(&singular_function(&x).unwrap(), p).unwrap();
        prop_assert!(close(a, b, 1e-10));
        prop_assert!(close(a, lorentz_norm(&x, p, p).unwrap(), 1e-9));
    }

    #[test]
    fn norms_are_unitarily_invariant(alg in algebra(), seed in any::<u64>(), p in 1.0f64..5.0, q in 1.0f64..5.0) {
        let x = Operator::random(alg.clone(), seed, Ensemble::GeneralComplex);
        let u = Operator::random(alg.clone(), seed ^ 1, Ensemble::Unitary);
        let v = Operator::random(alg, seed ^ 2, Ensemble::Unitary);
        let uxv = u.multiply(&x).unwrap().multiply(&v).unwrap();
        prop_assert!(close(lorentz_norm(&x, p, q).unwrap(), lorentz_norm(&uxv, p, q).unwrap(), 1e-9));
        prop_assert!(close(lp_norm(&x, p).unwrap(), lp_norm(&x.adjoint(), p).unwrap(), 1e-10));
    }

    #[test]
    fn lp_triangle_inequality(alg in algebra(), seed in any::<u64>(), p in 1.0f64..8.0) {
        let x = Operator::random(alg.clone(), seed, Ensemble::GeneralComplex);
        let y = Operator::random(alg, seed.wrapping_add(1), Ensemble::GeneralComplex);
        let lhs = lp_norm(&x.add(&y).unwrap(), p).unwrap();
        prop_assert!(lhs <= (lp_norm(&x, p).unwrap() + lp_norm(&y, p).unwrap()) * (1.0 + 1e-12));
    }

    #[test]
    fn lorentz_norms_decrease_in_the_second_index_up_to_the_embedding_constant(
        alg in algebra(), seed in any::<u64>(), p in 1.0f64..4.0, q in 1.0f64..4.0, extra in 0.0f64..4.0,
    ) {
        let x = Operator::random(alg, seed, Ensemble::GeneralComplex);
        let rr = q + extra;
        let c = ncfourier::lorentz::embedding_constant(p, q, rr);
        prop_assert!(lorentz_norm(&x, p, rr).unwrap() <= c * lorentz_norm(&x, p, q).unwrap() * (1.0 + 1e-10));
    }

    #[test]
    fn forward_and_inverse_are_linear_inverses(fs in structure(), seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let c = Complex64::new(re, im);
        let x = Operator::random(fs.m().clone(), seed, Ensemble::GeneralComplex);
        let y = Operator::random(fs.m().clone(), seed ^ 7, Ensemble::GeneralComplex);
        let lhs = fs.forward(&x.add(&y.scale(c)).unwrap()).unwrap();
        let rhs = fs.forward(&x).unwrap().add(&fs.forward(&y).unwrap().scale(c)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_entry() <= 1e-10 * (1.0 + lhs.max_entry()));
        let back = fs.inverse(&fs.forward(&x).unwrap()).unwrap();
        prop_assert!(back.sub(&x).unwrap().max_entry() <= 1e-9);
    }

    #[test]
    fn multipliers_compose_by_symbol_product(fs in structure(), seed in any::<u64>()) {
        let s1 = MultiplierSymbol::random(&fs, seed);
        let s2 = MultiplierSymbol::random(&fs, seed ^ 3);
        let prod = MultiplierSymbol::new(&fs, s1.symbol().multiply(s2.symbol()).unwrap()).unwrap();
        let x = Operator::random(fs.m().clone(), seed ^ 5, Ensemble::GeneralComplex);
        let twice = apply_multiplier(&fs, &s1, &apply_multiplier(&fs, &s2, &x).unwrap()).unwrap();
        let once = apply_multiplier(&fs, &prod, &x).unwrap();
        prop_assert!(twice.sub(&once).unwrap().max_entry() <= 1e-9 * (1.0 + once.max_entry()));
    }

    #[test]
    fn record_merge_ignores_order(ratios in prop::collection::vec(0.0f64..2.0, 1..40), split in 0usize..40) {
        let split = split.min(ratios.len());
        let seeds: Vec<u64> = (0..ratios.len() as u64).map(|i| trial_seed(9, "merge", i)).collect();
        let mut whole = CheckRecord::new("m", 1.0);
        for (r, s) in ratios.iter().zip(&seeds) {
            whole.record(*r, *s);
        }
        let (mut a, mut b) = (CheckRecord::new("m", 1.0), CheckRecord::new("m", 1.0));
        for (i, (r, s)) in ratios.iter().zip(&seeds).enumerate() {
            if i < split { a.record(*r, *s) } else { b.record(*r, *s) }
        }
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(&ab, &whole);
    }
}
