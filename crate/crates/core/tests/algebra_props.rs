use proptest::prelude::*;

use hexsquish::algebra::{mat_word, Assignment, LeadVar, Mat4, Poly, Series, Turn};

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, prop::array::uniform4(-2i32..=3)), 0..6)
        .prop_map(|terms| Poly::from_terms(LeadVar::P, terms))
}

fn series_strategy(order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(poly_strategy(), order + 1).prop_map(|c| Series::from_coeffs("z", c))
}

fn assignment_strategy() -> impl Strategy<Value = Assignment> {
    prop::sample::select(vec![
        Assignment::qrs_minus_one(),
        Assignment::all_ones(),
        Assignment::all_minus_one(),
        Assignment::negate_lead(),
        Assignment::diagonal(),
        Assignment::parse("q=p,r=-1", LeadVar::P).unwrap(),
    ])
}

/// `6 + n` lefts and `n` rights in any order.
fn closed_walk_strategy() -> impl Strategy<Value = Vec<Turn>> {
    (0usize..5).prop_flat_map(|extra| {
        let word: Vec<Turn> =
            std::iter::repeat_n(Turn::L, 6 + extra).chain(std::iter::repeat_n(Turn::R, extra)).collect();
        Just(word).prop_shuffle()
    })
}

proptest! {
    #[test]
    fn multiplication_distributes(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_commutes(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn subtraction_cancels(a in poly_strategy()) {
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(-&a) + &a, Poly::zero(LeadVar::P));
    }

    #[test]
    fn specialization_is_a_ring_map(a in poly_strategy(), b in poly_strategy(), asg in assignment_strategy()) {
        prop_assert_eq!((&a * &b).specialize(&asg), &a.specialize(&asg) * &b.specialize(&asg));
        prop_assert_eq!((&a + &b).specialize(&asg), &a.specialize(&asg) + &b.specialize(&asg));
    }

    #[test]
    fn coefficient_sum_is_evaluation_at_one(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!((&a * &b).coefficient_sum(), a.coefficient_sum() * b.coefficient_sum());
    }

    #[test]
    fn series_product_associates(a in series_strategy(3), b in series_strategy(3), c in series_strategy(3)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn series_inverse(mut coeffs in prop::collection::vec(poly_strategy(), 4)) {
        coeffs[0] = Poly::one(LeadVar::P);
        let s = Series::from_coeffs("z", coeffs);
        let prod = s.mul(&s.inv().unwrap());
        prop_assert_eq!(prod, Series::one("z", 3));
    }

    #[test]
    fn closed_walk_words_give_minus_identity(word in closed_walk_strategy()) {
        prop_assert_eq!(mat_word(&word), Mat4::identity().neg());
    }

    #[test]
    fn words_with_other_net_turning_are_not_minus_identity(lefts in 0usize..6, rights in 0usize..3) {
        let word: Vec<Turn> = std::iter::repeat_n(Turn::L, lefts)
            .chain(std::iter::repeat_n(Turn::R, rights))
            .collect();
        prop_assert_ne!(mat_word(&word), Mat4::identity().neg());
    }
}

#[test]
fn display_and_json_roundtrip() {
    let p = Poly::from_terms(LeadVar::P, [(1, [0, 0, 0, 0]), (-2, [1, 0, 0, 0]), (1, [2, 0, 0, 0])]);
    assert_eq!(p.to_string(), "1 - 2*p + p^2");
    assert_eq!(Poly::from_json(&p.to_json()).unwrap(), p);
}
