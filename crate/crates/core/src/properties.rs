use proptest::prelude::*;

use crate::classifier::{classify_unchecked, random_class_member, ClassLabel, CLASS_TOL};
use crate::components::{decompose_unchecked, profile_unchecked, ComponentLabel};
use crate::io::{form_from_file, form_to_file, mixed_from_file, mixed_to_file};
use crate::sample::{gaussian_form, gaussian_vec, random_rotation, rng};
use crate::torsion::{f_inverse_unchecked, f_map_unchecked, fiber_project, random_fiber_element, random_w_element};
use crate::{AltForm, MixedForm, QuatStructure};

fn q(n: usize) -> QuatStructure {
    QuatStructure::standard(n).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt() <= tol * scale
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn wedge_is_associative(seed: u64, p in 0usize..4, r in 0usize..3, s in 0usize..3) {
        let mut g = rng(seed);
        let (a, b, c) = (gaussian_form(&mut g, 8, p), gaussian_form(&mut g, 8, r), gaussian_form(&mut g, 8, s));
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert!(close(left.coeffs(), right.coeffs(), 1e-12));
    }

    #[test]
    fn wedge_is_graded_commutative(seed: u64, p in 0usize..5, r in 0usize..5) {
        let mut g = rng(seed);
        let (a, b) = (gaussian_form(&mut g, 8, p), gaussian_form(&mut g, 8, r));
        let sign = if (p * r) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap().scaled(sign);
        prop_assert!(close(ab.coeffs(), ba.coeffs(), 1e-12));
    }

    #[test]
    fn hodge_pairs_with_inner_product(seed: u64, p in 0usize..=8) {
        let mut g = rng(seed);
        let (a, b) = (gaussian_form(&mut g, 8, p), gaussian_form(&mut g, 8, p));
        let top = a.wedge(&b.hodge()).unwrap();
        let want = AltForm::volume(8).scaled(a.inner(&b).unwrap());
        prop_assert!(close(top.coeffs(), want.coeffs(), 1e-12));
        let twice = b.hodge().hodge();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(close(twice.coeffs(), b.scaled(sign).coeffs(), 1e-12));
    }

    #[test]
    fn interior_is_adjoint_to_wedge(seed: u64, p in 1usize..=8) {
        let mut g = rng(seed);
        let x = gaussian_vec(&mut g, 8);
        let (a, b) = (gaussian_form(&mut g, 8, p), gaussian_form(&mut g, 8, p - 1));
        let lhs = a.interior(&x).unwrap().inner(&b).unwrap();
        let rhs = a.inner(&AltForm::one_form(&x).wedge(&b).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn l_squares_to_nine_on_three_forms(seed: u64, n in 2usize..=3) {
        let q = q(n);
        let b = gaussian_form(&mut rng(seed), q.dim(), 3);
        let twice = q.l_map(&q.l_map(&b));
        prop_assert!(close(twice.coeffs(), b.scaled(9.0).coeffs(), 1e-12));
    }

    #[test]
    fn f_map_round_trips(seed: u64) {
        let q = q(2);
        let c = fiber_project(&q, &random_fiber_element(&q, &mut rng(seed)));
        let back = f_inverse_unchecked(&q, &f_map_unchecked(&q, &c));
        prop_assert!(close(&back.to_flat(), &c.to_flat(), 1e-10));
    }

    #[test]
    fn components_sum_to_the_tensor(seed: u64, n in 2usize..=3) {
        let q = q(n);
        let a = random_w_element(&q, seed);
        let mut sum = MixedForm::zero(q.dim(), 4);
        for part in decompose_unchecked(&q, &a) {
            sum.axpy(1.0, &part);
        }
        prop_assert!(close(&sum.to_flat(), &a.to_flat(), 1e-10));
    }

    #[test]
    fn classification_recovers_the_class(bits in 1u8..64, seed: u64) {
        let q = q(3);
        let class = ClassLabel::from_bits(bits);
        let a = random_class_member(&q, class, seed);
        prop_assert_eq!(classify_unchecked(&q, &a, CLASS_TOL).class, class);
    }

    #[test]
    fn profile_is_rotation_invariant(seed: u64) {
        let q = q(2);
        let a = random_w_element(&q, seed);
        let q2 = q.rotate(&random_rotation(&mut rng(seed ^ 0x5a5a))).unwrap();
        let (p1, p2) = (profile_unchecked(&q, &a), profile_unchecked(&q2, &a));
        for x in ComponentLabel::ALL {
            prop_assert!((p1.norm(x) - p2.norm(x)).abs() <= 1e-9 * p1.total);
        }
    }

    #[test]
    fn form_files_round_trip(seed: u64, p in 0usize..=8) {
        let a = gaussian_form(&mut rng(seed), 8, p);
        let text = serde_json::to_string(&form_to_file(2, &a)).unwrap();
        let back = form_from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.coeffs(), a.coeffs());
    }

    #[test]
    fn torsion_files_round_trip(seed: u64) {
        let q = q(2);
        let a = random_w_element(&q, seed);
        let text = serde_json::to_string(&mixed_to_file(2, &a)).unwrap();
        let back = mixed_from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.to_flat(), a.to_flat());
    }
}
