use mvop::szego::{spectral_factorize, spectral_factorize_with, Completion};
use mvop::weight::NilpotentMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn worst_for(r: usize, draws: u32) -> (f64, f64, f64) {
    let mut runner = TestRunner::new(Config { cases: draws, ..Config::default() });
    let worst = std::cell::Cell::new((0.0f64, 0.0f64, 0.0f64));
    runner
        .run(&proptest::collection::vec(-2.0f64..2.0, r - 1), |alpha| {
            let f = spectral_factorize(&NilpotentMatrix::new(alpha)).unwrap();
            let (a, b, c) = worst.get();
            worst.set((a.max(f.circle_residual(64)), b.max(f.dropped_residual), c.max(f.det_defect(64))));
            Ok(())
        })
        .unwrap();
    worst.get()
}

#[test]
fn factorization_residuals_by_size() {
    for r in 2..=5 {
        let (res, neg, det) = worst_for(r, 200);
        println!("r={r}: residual {res:.2e} negative {neg:.2e} det {det:.2e}");
        assert!(res < 1e-10, "r={r} residual {res:e}");
        assert!(neg < 1e-12, "r={r} negative powers {neg:e}");
        assert!(det < 1e-10, "r={r} det {det:e}");
    }
}

proptest! {
    #[test]
    fn completions_agree(alpha in proptest::collection::vec(-2.0f64..2.0, 1..4)) {
        let a = NilpotentMatrix::new(alpha);
        let f1 = spectral_factorize_with(&a, Completion::Householder).unwrap();
        let f2 = spectral_factorize_with(&a, Completion::GramSchmidt).unwrap();
        prop_assert!((&f1.d_infinity - &f2.d_infinity).max_abs() < 1e-9);
        prop_assert!(f1.d_infinity.hermitian_defect() < 1e-14);
        prop_assert!(f1.d_infinity.max_imag() < 1e-12);
    }
}
