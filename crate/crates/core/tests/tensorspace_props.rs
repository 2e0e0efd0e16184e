use glh_core::tensorspace::{lift_factor, lift_three, Grading, Position, Slot, SuperMatrix};
use glh_core::Element;
use proptest::prelude::*;

fn int_matrix(order: u32) -> impl Strategy<Value = SuperMatrix> {
    let n = 1usize << (2 * order);
    prop::collection::vec(-4i64..=4, n)
        .prop_map(move |v| SuperMatrix::square(order, v.into_iter().map(Element::from_int).collect()).unwrap())
}

fn grading() -> impl Strategy<Value = Grading> {
    prop_oneof![Just(Grading::Graded), Just(Grading::Ungraded)]
}

fn position() -> impl Strategy<Value = Position> {
    prop_oneof![Just(Position::P12), Just(Position::P13), Just(Position::P23)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matmul_is_associative(a in int_matrix(2), b in int_matrix(2), c in int_matrix(2)) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn matmul_distributes(a in int_matrix(2), b in int_matrix(2), c in int_matrix(2)) {
        let left = a.matmul(&b.add(&c).unwrap()).unwrap();
        let right = a.matmul(&b).unwrap().add(&a.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn slot_lift_is_multiplicative(m in int_matrix(1), n in int_matrix(1), g in grading()) {
        for slot in [Slot::First, Slot::Second] {
            let prod = lift_factor(&m.matmul(&n).unwrap(), slot, g).unwrap();
            let lifted = lift_factor(&m, slot, g).unwrap().matmul(&lift_factor(&n, slot, g).unwrap()).unwrap();
            prop_assert_eq!(prod, lifted);
        }
    }

    #[test]
    fn scalar_slot_lifts_commute(m in int_matrix(1), n in int_matrix(1)) {
        let m1 = lift_factor(&m, Slot::First, Grading::Ungraded).unwrap();
        let n2 = lift_factor(&n, Slot::Second, Grading::Ungraded).unwrap();
        prop_assert_eq!(m1.matmul(&n2).unwrap(), n2.matmul(&m1).unwrap());
    }

    #[test]
    fn three_slot_lift_is_multiplicative(r in int_matrix(2), s in int_matrix(2), p in position(), g in grading()) {
        let prod = lift_three(&r.matmul(&s).unwrap(), p, g).unwrap();
        let lifted = lift_three(&r, p, g).unwrap().matmul(&lift_three(&s, p, g).unwrap()).unwrap();
        prop_assert_eq!(prod, lifted);
    }

    #[test]
    fn three_slot_lift_is_linear(r in int_matrix(2), s in int_matrix(2), p in position(), g in grading()) {
        let sum = lift_three(&r.add(&s).unwrap(), p, g).unwrap();
        let lifted = lift_three(&r, p, g).unwrap().add(&lift_three(&s, p, g).unwrap()).unwrap();
        prop_assert_eq!(sum, lifted);
    }

    #[test]
    fn trace_is_cyclic(a in int_matrix(2), b in int_matrix(2)) {
        prop_assert_eq!(a.matmul(&b).unwrap().trace(), b.matmul(&a).unwrap().trace());
    }
}
