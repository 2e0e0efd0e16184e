use glh_core::presentations::{build, NamedPresentation};
use glh_core::{Element, Gen};
use proptest::prelude::*;
use std::sync::OnceLock;

fn gl_h() -> &'static NamedPresentation {
    static P: OnceLock<NamedPresentation> = OnceLock::new();
    P.get_or_init(|| build("GL_h", glh_core::presentations::HMode::Odd).unwrap())
}

fn word(p: &'static NamedPresentation) -> impl Strategy<Value = Element> {
    let n = p.alphabet().len();
    (any::<bool>(), prop::collection::vec(0..n, 0..5)).prop_map(move |(h, w)| {
        let gens: Vec<Gen> = w.into_iter().map(|i| p.alphabet().iter().nth(i).unwrap().0).collect();
        let e = Element::word(&gens);
        if h {
            e.h_times()
        } else {
            e
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(u in word(gl_h())) {
        let p = gl_h();
        let n = p.nf(&u).unwrap();
        prop_assert_eq!(p.nf(&n).unwrap(), n.clone());
        prop_assert!(n.terms().all(|(t, _)| p.system.is_normal_word(&t.word)));
    }

    #[test]
    fn normal_form_respects_products(u in word(gl_h()), v in word(gl_h()), w in word(gl_h())) {
        let s = &gl_h().system;
        let left = s.mul(&s.mul(&u, &v).unwrap(), &w).unwrap();
        let right = s.mul(&u, &s.mul(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn normal_form_is_linear(u in word(gl_h()), v in word(gl_h())) {
        let p = gl_h();
        let sum = p.nf(&(&u + &v)).unwrap();
        prop_assert_eq!(sum, &p.nf(&u).unwrap() + &p.nf(&v).unwrap());
    }

    #[test]
    fn h_squares_to_zero(u in word(gl_h())) {
        prop_assert!(gl_h().nf(&u.h_times().h_times()).unwrap().is_zero());
    }
}
