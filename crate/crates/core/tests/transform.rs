mod common;

use common::{dft_oracle, window, z};
use proptest::prelude::*;
use zpgabor_core::fourier::convolve_autocorrelation;
use zpgabor_core::{dft, idft, plancherel_check, CycNum, Scalar, Window};

fn check_window(g: &Window<CycNum>) -> Result<(), TestCaseError> {
    let params = g.params();
    let p = params.p();
    let spectrum = dft(g);
    prop_assert_eq!(spectrum.values(), &dft_oracle(g)[..]);
    prop_assert_eq!(&idft(&spectrum), g);
    prop_assert_eq!(&dft(&idft(g)), g);
    prop_assert!(plancherel_check(g).passed);

    // translation becomes modulation: dft(g(· - a))(m) = ζ^{-a·m} ĝ(m)
    let a = params.size() / 2;
    let shifted = dft(&g.translate(a));
    for m in 0..params.size() {
        let k = (p - params.dot_index(a, m)) % p;
        prop_assert_eq!(shifted.value(m), &spectrum.value(m).mul_root(k));
    }
    prop_assert_eq!(convolve_autocorrelation(g, 0), g.norm_sq());

    // the float shadow agrees with the exact transform
    let float = dft(&g.to_float());
    for (e, f) in spectrum.values().iter().zip(float.values()) {
        prop_assert!((e.to_complex() - f).norm() <= 1e-9 * Scalar::abs_sq(f).re.sqrt().max(1.0));
    }
    Ok(())
}

macro_rules! transform_suite {
    ($name:ident, $p:expr, $d:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn $name(g in window(z($p, $d))) {
                check_window(&g)?;
            }
        }
    };
}

transform_suite!(transforms_p2_d1, 2, 1);
transform_suite!(transforms_p2_d2, 2, 2);
transform_suite!(transforms_p3_d1, 3, 1);
transform_suite!(transforms_p3_d2, 3, 2);
transform_suite!(transforms_p5_d1, 5, 1);
transform_suite!(transforms_p5_d2, 5, 2);
transform_suite!(transforms_p7_d1, 7, 1);
transform_suite!(transforms_p7_d2, 7, 2);

#[test]
fn delta_and_constant() {
    for p in common::PRIMES {
        let params = z(p, 2);
        let delta: Window<CycNum> = Window::indicator(&zpgabor_core::PointSet::singleton(params, 0));
        assert_eq!(idft(&delta), Window::indicator(&zpgabor_core::PointSet::full(params)));
    }
}
