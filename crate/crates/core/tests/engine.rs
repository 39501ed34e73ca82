mod common;

use common::{random_word, PolyRep};
use klrvv::engine::relations::relation_instances;
use klrvv::engine::{Algebra, AlgebraDescriptor, Element, Gen, Mutation};
use klrvv::quiver::{DimVector, OrbitDescriptor, Vertex};
use klrvv::series::{rat, Rational};
use klrvv::suite::standard_fixtures;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_fixtures() -> Vec<(String, Algebra)> {
    standard_fixtures().into_iter().filter(|f| f.m() <= 2).map(|f| (f.name.to_string(), f.algebra().unwrap())).collect()
}

fn klr(nu: &[(Vertex, u32)], orbit: OrbitDescriptor) -> Algebra {
    Algebra::new(AlgebraDescriptor::klr(DimVector::from_list(nu), orbit)).unwrap()
}

#[test]
fn polynomial_action_satisfies_every_relation() {
    let mut algs = small_fixtures();
    let o = OrbitDescriptor::a1();
    let l = Vertex::plus(0);
    algs.push(("klr l+p2l+p4l".into(), klr(&[(l, 1), (o.shift(&l, 1), 1), (o.shift(&l, 2), 1)], o.clone())));
    algs.push(("klr 2l+p2l".into(), klr(&[(l, 2), (o.shift(&l, 1), 1)], o.clone())));
    let r2 = OrbitDescriptor::a1_root_of_unity(2);
    algs.push(("klr r=2 2l+p2l".into(), klr(&[(l, 2), (r2.shift(&l, 1), 1)], r2)));
    for (name, alg) in &algs {
        let rep = PolyRep::new(alg);
        for inst in relation_instances(alg) {
            let mut sum = inst.lhs.clone();
            sum.extend(inst.rhs.iter().map(|(c, w)| (-c.clone(), w.clone())));
            assert!(rep.kills(&sum), "{name}: {} fails in the polynomial action", inst.family);
        }
    }
}

#[test]
fn normal_forms_agree_with_polynomial_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let algs = small_fixtures();
    let mut checked = 0;
    while checked < 200 {
        let (name, alg) = &algs[checked % algs.len()];
        let h = alg.hecke().unwrap();
        let word = random_word(h, &mut rng, 2 + checked % 5);
        let nf = alg.normal_form(&word, &Rational::one()).unwrap();
        assert!(PolyRep::new(alg).same_action(alg, &nf, &word), "{name}: {word:?} -> {}", alg.format_element(&nf));
        checked += 1;
    }
}

#[test]
fn left_and_right_association_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, alg) in small_fixtures() {
        let h = alg.hecke().unwrap();
        for len in 2..8 {
            let word = random_word(h, &mut rng, len);
            let right = alg.normal_form(&word, &Rational::one()).unwrap();
            let mut left = alg.normal_form(&word[..1], &Rational::one()).unwrap();
            for g in &word[1..] {
                left = alg.multiply(&left, &alg.normal_form(std::slice::from_ref(g), &Rational::one()).unwrap()).unwrap();
            }
            assert_eq!(left, right, "{name}: {word:?}");
        }
    }
}

#[test]
fn normal_form_is_idempotent_on_basis() {
    for (name, alg) in small_fixtures() {
        for d in alg.min_degree()..alg.min_degree() + 3 {
            for m in alg.component_basis(d) {
                let el = Element::from_mono(m.clone());
                assert_eq!(alg.normal_form(&alg.spell(&m), &Rational::one()).unwrap(), el, "{name}");
                assert_eq!(alg.degree(&m), d);
            }
        }
    }
}

#[test]
fn pi_squared_at_q() {
    let o = OrbitDescriptor::a2();
    let nu = DimVector::theta_closed(&[(Vertex::plus(0), 1)], &o).unwrap();
    let alg = Algebra::new(AlgebraDescriptor::vv(nu, o)).unwrap();
    let e = |v: Vertex| Gen::E(vec![v]);
    let x1 = |v: Vertex| alg.normal_form(&[Gen::X(1), e(v)], &rat(1)).unwrap();
    let q = Vertex::plus(0);
    let qi = Vertex::minus(0);
    assert_eq!(alg.normal_form(&[Gen::S(0), Gen::S(0), e(q)], &rat(1)).unwrap(), x1(q));
    assert_eq!(alg.normal_form(&[Gen::S(0), Gen::S(0), e(qi)], &rat(1)).unwrap(), x1(qi).neg());
}

#[test]
fn mutations_are_caught_by_the_relation_suite() {
    use klrvv::engine::relations::{relation_suite, Context};
    let o = OrbitDescriptor::a1();
    let l = Vertex::plus(0);
    for mu in [Mutation::BraidSign, Mutation::QuadraticSign, Mutation::DotSlideSign] {
        let alg = klr(&[(l, 2), (o.shift(&l, 1), 1)], o.clone()).with_mutation(Some(mu));
        let r = relation_suite(&alg, Context::Bare).unwrap();
        assert!(!r.overall(), "{mu:?} not detected");
    }
    let o2 = OrbitDescriptor::a2();
    let nu = DimVector::theta_closed(&[(l, 2)], &o2).unwrap();
    for mu in [Mutation::PiSquareSign, Mutation::PiBraidSign] {
        let alg = Algebra::new(AlgebraDescriptor::vv(nu.clone(), o2.clone())).unwrap().with_mutation(Some(mu));
        assert!(!relation_suite(&alg, Context::Bare).unwrap().overall(), "{mu:?} not detected");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_are_associative(seed in any::<u64>(), pick in 0usize..64) {
        let algs = small_fixtures();
        let (_, alg) = &algs[pick % algs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = alg.hecke().unwrap();
        let [a, b, c] = [3, 2, 3].map(|n| alg.normal_form(&random_word(h, &mut rng, n), &Rational::one()).unwrap());
        let lhs = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let rhs = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rho_is_an_anti_involution(seed in any::<u64>(), pick in 0usize..64) {
        let algs = small_fixtures();
        let (_, alg) = &algs[pick % algs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = alg.hecke().unwrap();
        let a = alg.normal_form(&random_word(h, &mut rng, 3), &Rational::one()).unwrap();
        let b = alg.normal_form(&random_word(h, &mut rng, 3), &Rational::one()).unwrap();
        prop_assert_eq!(alg.rho_reverse(&alg.rho_reverse(&a).unwrap()).unwrap(), a.clone());
        let lhs = alg.rho_reverse(&alg.multiply(&a, &b).unwrap()).unwrap();
        let rhs = alg.multiply(&alg.rho_reverse(&b).unwrap(), &alg.rho_reverse(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_are_homogeneous(seed in any::<u64>(), pick in 0usize..64) {
        let algs = small_fixtures();
        let (_, alg) = &algs[pick % algs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = alg.hecke().unwrap();
        let word = random_word(h, &mut rng, 4);
        let nf = alg.normal_form(&word, &Rational::one()).unwrap();
        let (_, deg) = alg.degree_of(&nf);
        if !nf.is_zero() {
            let expected: i64 = {
                // degree of the word, letter by letter from the right
                let mut i = match word.last() { Some(Gen::E(i)) => i.clone(), _ => unreachable!() };
                let mut d = 0;
                for g in word.iter().rev().skip(1) {
                    if let Gen::S(k) = g {
                        d += h.letter_degree(*k, &i);
                        i = h.act_letter(*k, &i);
                    } else {
                        d += 2;
                    }
                }
                d
            };
            prop_assert_eq!(deg, Some(expected));
        }
    }
}
