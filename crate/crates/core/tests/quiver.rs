use std::collections::BTreeMap;

use klrvv::quiver::{arrangements, theta_sequences, Branch, DimVector, OrbitDescriptor, Vertex};
use proptest::prelude::*;

#[test]
fn arrows_point_down_the_chain() {
    let o = OrbitDescriptor::a1();
    let l = Vertex::plus(0);
    let p2l = o.shift(&l, 1);
    assert_eq!(o.arrow_count(&p2l, &l), 1);
    assert_eq!(o.arrow_count(&l, &p2l), 0);
    assert_eq!(o.arrow_count(&l, &l), 0);
    assert_eq!(o.arrow_count(&o.theta(&l), &o.theta(&p2l)), 1);
    assert_eq!(o.arrow_count(&o.theta(&p2l), &o.theta(&l)), 0);

    let p = OrbitDescriptor::a3();
    let (p1, p3) = (Vertex::p_power(0, 1), Vertex::p_power(0, 3));
    assert_eq!(p.arrow_count(&p3, &p1), 1);
    assert_eq!(p.arrow_count(&p1, &p.theta(&p1)), 1);
}

#[test]
fn order_two_gives_a_two_cycle() {
    let o = OrbitDescriptor::a1_root_of_unity(2);
    let l = Vertex::plus(0);
    let j = o.shift(&l, 1);
    assert_ne!(j, l);
    assert_eq!(o.shift(&j, 1), l);
    assert_eq!((o.arrow_count(&l, &j), o.arrow_count(&j, &l)), (1, 1));
}

#[test]
fn theta_is_a_fixed_point_free_involution() {
    for o in [OrbitDescriptor::a1(), OrbitDescriptor::a2(), OrbitDescriptor::a3(), OrbitDescriptor::a1_root_of_unity(3)] {
        let mut v = o.special_vertex().unwrap_or(Vertex::plus(0));
        for _ in 0..6 {
            assert_ne!(o.theta(&v), v);
            assert_eq!(o.theta(&o.theta(&v)), v);
            v = o.shift(&v, 1);
        }
    }
}

#[test]
fn vertex_grammar() {
    let a1 = OrbitDescriptor::a1();
    assert_eq!(a1.parse_vertex("p-2*l^-1").unwrap(), a1.theta(&a1.shift(&Vertex::plus(0), 1)));
    assert_eq!(a1.format_vertex(&Vertex::new(0, Branch::Minus, 2)), "p4*l^-1");
    let a3 = OrbitDescriptor::a3();
    assert_eq!(a3.format_vertex(&a3.parse_vertex("p^-1").unwrap()), "p^-1");
    assert!(a3.parse_vertex("p2").is_err());
    assert!(a1.parse_vertex("p3*l").is_err());
    assert!(a1.parse_vertex("q").is_err());
    let sep = OrbitDescriptor::separated(vec![OrbitDescriptor::a1(), OrbitDescriptor::a2(), OrbitDescriptor::a1()]);
    assert_eq!(sep.parse_vertex("m").unwrap().orbit, 2);
    assert_eq!(sep.parse_vertex("q^-1").unwrap(), sep.theta(&sep.special_vertex().unwrap()));
}

/// Brute force over all words in the support of `ν`.
fn count_theta_sequences(nu: &DimVector, o: &OrbitDescriptor) -> usize {
    let support: Vec<Vertex> = nu.entries().keys().copied().collect();
    let m = (nu.total() / 2) as usize;
    let mut count = 0;
    let mut idx = vec![0usize; m];
    loop {
        let mut mult: BTreeMap<Vertex, u32> = BTreeMap::new();
        for &k in &idx {
            *mult.entry(support[k]).or_default() += 1;
            *mult.entry(o.theta(&support[k])).or_default() += 1;
        }
        if &mult == nu.entries() {
            count += 1;
        }
        let mut a = 0;
        while a < m && idx[a] + 1 == support.len() {
            idx[a] = 0;
            a += 1;
        }
        if a == m {
            return count;
        }
        idx[a] += 1;
    }
}

#[test]
fn theta_sequence_counts() {
    let a1 = OrbitDescriptor::a1();
    let l = Vertex::plus(0);
    let a2 = OrbitDescriptor::a2();
    let q = Vertex::plus(0);
    let cases = [
        (DimVector::theta_closed(&[(l, 1), (a1.shift(&l, 1), 1)], &a1).unwrap(), a1.clone(), 8),
        (DimVector::theta_closed(&[(l, 2), (a1.shift(&l, 1), 1)], &a1).unwrap(), a1.clone(), 24),
        (DimVector::theta_closed(&[(q, 2)], &a2).unwrap(), a2.clone(), 4),
    ];
    for (nu, o, expected) in cases {
        let seqs = theta_sequences(&nu, &o).unwrap();
        assert_eq!(seqs.len(), expected);
        assert_eq!(seqs.len(), count_theta_sequences(&nu, &o));
        let mut sorted = seqs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, seqs);
    }
    let a3 = OrbitDescriptor::a3();
    let p = Vertex::p_power(0, 1);
    let nu = DimVector::theta_closed(&[(p, 2), (Vertex::p_power(0, 3), 1)], &a3).unwrap();
    assert_eq!(theta_sequences(&nu, &a3).unwrap().len(), count_theta_sequences(&nu, &a3));
    assert!(theta_sequences(&DimVector::from_list(&[(l, 1)]), &a1).is_err());
}

#[test]
fn arrangements_are_multinomial() {
    let l = Vertex::plus(0);
    let nu = DimVector::from_list(&[(l, 2), (Vertex::plus(1), 1), (Vertex::plus(2), 1)]);
    assert_eq!(arrangements(&nu).len(), 12);
}

proptest! {
    #[test]
    fn a1_vertices_round_trip(n in -6i32..7, minus in any::<bool>()) {
        let o = OrbitDescriptor::a1();
        let v = Vertex::new(0, if minus { Branch::Minus } else { Branch::Plus }, n);
        prop_assert_eq!(o.parse_vertex(&o.format_vertex(&v)).unwrap(), v);
    }

    #[test]
    fn a3_vertices_round_trip(k in -5i32..5) {
        let o = OrbitDescriptor::a3();
        let v = Vertex::p_power(0, 2 * k + 1);
        prop_assert_eq!(o.parse_vertex(&o.format_vertex(&v)).unwrap(), v);
    }

    #[test]
    fn separated_vertices_round_trip(tag in 0u8..4, n in -3i32..4, minus in any::<bool>()) {
        let o = OrbitDescriptor::separated(vec![
            OrbitDescriptor::a1(), OrbitDescriptor::a2(), OrbitDescriptor::a1(), OrbitDescriptor::a1(),
        ]);
        let v = Vertex::new(tag, if minus { Branch::Minus } else { Branch::Plus }, n);
        prop_assert_eq!(o.parse_vertex(&o.format_vertex(&v)).unwrap(), v);
    }
}
