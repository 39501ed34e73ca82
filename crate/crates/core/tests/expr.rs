mod common;

use common::random_word;
use klrvv::engine::Element;
use klrvv::expr::{eval_str, parse_expression};
use klrvv::series::Rational;
use klrvv::suite::standard_fixtures;
use klrvv::Error;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn basis_monomials_reparse() {
    for f in standard_fixtures().iter().filter(|f| f.m() <= 2) {
        let alg = f.algebra().unwrap();
        for d in alg.min_degree()..alg.min_degree() + 4 {
            for m in alg.component_basis(d) {
                let text = alg.format_mono(&m);
                assert_eq!(eval_str(&text, &alg).unwrap(), Element::from_mono(m.clone()), "{}: {text}", f.name);
            }
        }
    }
}

#[test]
fn errors_carry_offsets() {
    let f = &standard_fixtures()[1];
    let alg = f.algebra().unwrap();
    for (text, at) in [("x1*e(l,p2*l) +", 14), ("3/0*e(l,p2*l)", 2), ("e(l,p2*l", 0), ("x1^0*e(l,p2*l)", 3), ("s9*e(l,p2*l)", 0)] {
        match parse_expression(text, &alg) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, at, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    assert!(eval_str("0", &alg).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn printed_normal_forms_reparse(seed in any::<u64>(), pick in 0usize..32, len in 1usize..6) {
        let fixtures: Vec<_> = standard_fixtures().into_iter().filter(|f| f.m() <= 2).collect();
        let alg = fixtures[pick % fixtures.len()].algebra().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = random_word(alg.hecke().unwrap(), &mut rng, len);
        let nf = alg.normal_form(&word, &Rational::one()).unwrap();
        let text = alg.format_element(&nf);
        prop_assert_eq!(eval_str(&text, &alg).unwrap(), nf, "{}", text);
    }
}
