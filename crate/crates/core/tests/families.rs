//! Regression sweeps over further singularity families. Each case has a
//! closed-form answer: `H^1` and `H^2` are concentrated in internal degree 0
//! with dimension `dim A_{d - d1 - d2 - d3}`.

use lrcohom::equiv::{self, CyclicActionType};
use lrcohom::lrc::Complex;
use lrcohom::wpoly::{parse_poly, WeightedAlgebra};

fn sweep(f: &str, weights: [i64; 3], window: (i64, i64)) -> Complex {
    let alg = WeightedAlgebra::new(parse_poly(f).unwrap(), weights).unwrap();
    let cx = Complex::build_default(alg, None).unwrap();
    let shift = cx.alg().weights().degree_shift();
    let expected_h = cx.alg().graded_dim(shift);
    for n in [1, 2] {
        for e in window.0..=window.1 {
            let dim = cx.cohomology(n, e).unwrap().dim;
            let expected = if e == 0 { expected_h } else { 0 };
            assert_eq!(dim, expected, "f = {f}: H^{n} at degree {e}");
        }
    }
    cx
}

#[test]
fn quadric_cone_is_rigid() {
    // shift -1: nothing in levels 1 and 2
    sweep("x1^2 + x2^2 + x3^2", [1, 1, 1], (-3, 3));
}

#[test]
fn quartic_cone_has_three_dimensional_h1_h2() {
    // shift +1: H^1 = H^2 of dimension dim A_1 = 3 at degree 0
    sweep("x1^4 + x2^4 + x3^4", [1, 1, 1], (-2, 2));
}

#[test]
fn weighted_simple_elliptic_case() {
    // (6; 3, 2, 1): shift 0, one-dimensional H^1 and H^2
    sweep("x1^2 + x2^3 + x3^6", [3, 2, 1], (-4, 4));
}

#[test]
fn quartic_with_scalar_z4_action() {
    // Under (4; 1, 1, 1) the degree-0 classes are linear multiples of the
    // distinguished generator: weight 1 from the multiplier plus
    // m1+m2+m3-m = -1 from the generator, so every class is invariant.
    let alg = WeightedAlgebra::new(parse_poly("x1^4 + x2^4 + x3^4").unwrap(), [1, 1, 1]).unwrap();
    let act = CyclicActionType::new(4, [1, 1, 1]);
    let rep = equiv::check_action(&alg, &act).unwrap();
    assert!(rep.strict_equality);
    assert_eq!(rep.residue_sum, 3);
    let cx = Complex::build_default(alg, Some(act)).unwrap();
    for n in [1, 2] {
        let coh = cx.cohomology(n, 0).unwrap();
        assert_eq!(coh.dim, 3);
        for class in &coh.classes {
            assert_eq!(class.xi_weight, Some(0));
        }
        assert_eq!(equiv::invariant_cohomology(&cx, n, 0, true).unwrap().dim, 3);
    }
}
